#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>

using namespace sigmach;

namespace oracle {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> edges(const SpaceTimeDiagram& d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& s : d.segments)
        if (s.start_event && s.end_event) out.emplace_back(*s.start_event, *s.end_event);
    return out;
}

}  // namespace

long longest_chain(const SpaceTimeDiagram& d) {
    const std::size_t n = d.events.size();
    if (n == 0) return 0;
    std::vector<long> depth(n, 1);
    const auto e = edges(d);
    for (std::size_t round = 0; round <= n; ++round) {
        bool changed = false;
        for (const auto& [a, b] : e)
            if (depth[a] + 1 > depth[b]) {
                depth[b] = depth[a] + 1;
                changed = true;
            }
        if (!changed) return *std::max_element(depth.begin(), depth.end());
    }
    return -1;
}

bool acyclic(const SpaceTimeDiagram& d) {
    const std::size_t n = d.events.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [a, b] : edges(d)) {
        if (!(d.events[a].time < d.events[b].time)) return false;
        adj[a].push_back(b);
    }
    std::vector<int> colour(n, 0);
    std::function<bool(std::size_t)> visit = [&](std::size_t v) {
        colour[v] = 1;
        for (auto w : adj[v]) {
            if (colour[w] == 1) return false;
            if (colour[w] == 0 && !visit(w)) return false;
        }
        colour[v] = 2;
        return true;
    };
    for (std::size_t v = 0; v < n; ++v)
        if (colour[v] == 0 && !visit(v)) return false;
    return true;
}

std::size_t sweep_space_cut(const SpaceTimeDiagram& d) {
    std::set<Rational> times{Rational(0)};
    for (const auto& e : d.events) times.insert(e.time);
    std::vector<Rational> probes;
    for (auto it = times.begin(); it != times.end(); ++it) {
        auto next = std::next(it);
        probes.push_back(next == times.end() ? *it + Rational(1) : midpoint(*it, *next));
    }
    std::size_t best = d.initial.size();
    for (const auto& t : probes) {
        if (d.horizon && t >= *d.horizon) continue;
        std::size_t count = 0;
        for (const auto& s : d.segments)
            if (s.start.time < t && (!s.end || t < s.end->time)) ++count;
        best = std::max(best, count);
    }
    return best;
}

std::vector<std::string> inexact_segments(const SpaceTimeDiagram& d, const SignalMachine& m) {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < d.segments.size(); ++i) {
        const auto& s = d.segments[i];
        if (!s.end) continue;
        if (s.end->position - s.start.position != m.speed(s.signal) * (s.end->time - s.start.time))
            bad.push_back("segment " + std::to_string(i));
    }
    return bad;
}

namespace {

std::string compare_events(const std::vector<CollisionEvent>& a, const std::vector<CollisionEvent>& b,
                           const std::function<bool(const CollisionEvent&, const CollisionEvent&)>& same_place) {
    if (a.size() != b.size())
        return "event counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_place(a[i], b[i])) return "event " + std::to_string(i) + " moved incorrectly";
        if (a[i].inputs != b[i].inputs || a[i].outputs != b[i].outputs || a[i].rule != b[i].rule)
            return "event " + std::to_string(i) + " applies a different rule";
    }
    return {};
}

}  // namespace

RunLimits scaled_limits(const RunLimits& limits, const Rational& alpha) {
    RunLimits out = limits;
    if (out.max_time) out.max_time = *out.max_time * alpha;
    out.accumulation.span = out.accumulation.span * alpha;
    return out;
}

std::string translation_mismatch(const SignalMachine& m, const Configuration& init, const RunLimits& limits,
                                 const Rational& delta) {
    const auto a = run(m, init, limits);
    const auto b = run(m, init.translated(delta), limits);
    if (a.tag != b.tag) return "outcome tags differ";
    return compare_events(a.diagram.events, b.diagram.events, [&](const CollisionEvent& x, const CollisionEvent& y) {
        return y.position == x.position + delta && y.time == x.time;
    });
}

std::string scaling_mismatch(const SignalMachine& m, const Configuration& init, const RunLimits& limits,
                             const Rational& alpha) {
    const auto a = run(m, init, limits);
    const auto b = run(m, init.scaled(alpha), scaled_limits(limits, alpha));
    if (a.tag != b.tag) return "outcome tags differ";
    return compare_events(a.diagram.events, b.diagram.events, [&](const CollisionEvent& x, const CollisionEvent& y) {
        return y.position == x.position * alpha && y.time == x.time * alpha;
    });
}

}  // namespace oracle
