#include "sigmach/engine.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <stdexcept>

namespace sigmach {

const char* to_string(RunTag tag) {
    switch (tag) {
        case RunTag::Halted: return "Halted";
        case RunTag::TimeLimit: return "TimeLimit";
        case RunTag::CollisionLimit: return "CollisionLimit";
        case RunTag::AccumulationSuspected: return "AccumulationSuspected";
    }
    return "?";
}

std::optional<EventBatch> next_event_batch(const SignalMachine& machine, const Configuration& config,
                                           const Rational& now) {
    std::vector<std::pair<Rational, SignalId>> sigs(config.begin(), config.end());
    std::optional<Rational> best;
    for (std::size_t i = 0; i + 1 < sigs.size(); ++i) {
        const Rational& va = machine.speed(sigs[i].second);
        const Rational& vb = machine.speed(sigs[i + 1].second);
        if (va <= vb) continue;
        const Rational dt = (sigs[i + 1].first - sigs[i].first) / (va - vb);
        if (!best || dt < *best) best = dt;
    }
    if (!best) return std::nullopt;

    EventBatch batch{now + *best, {}};
    std::vector<std::pair<Rational, SignalId>> at;
    at.reserve(sigs.size());
    for (const auto& [x, id] : sigs) at.emplace_back(x + machine.speed(id) * *best, id);
    for (std::size_t i = 0; i < at.size();) {
        std::size_t j = i + 1;
        while (j < at.size() && at[j].first == at[i].first) ++j;
        if (j - i >= 2) {
            std::vector<SignalId> ids;
            for (std::size_t k = i; k < j; ++k) ids.push_back(at[k].second);
            batch.groups.push_back({at[i].first, make_signal_set(std::move(ids))});
        }
        i = j;
    }
    return batch;
}

bool is_stable(const Configuration& config, const SignalMachine& machine) {
    const Rational* previous = nullptr;
    for (const auto& [x, id] : config) {
        const Rational& v = machine.speed(id);
        if (previous && *previous > v) return false;
        previous = &v;
    }
    return true;
}

// --- Simulator --------------------------------------------------------------

Simulator::Simulator(const SignalMachine& machine, const Configuration& initial)
    : machine_(machine), initial_(initial) {
    for (const auto& [x, id] : initial) {
        const std::size_t seg = open_segment(id, x, Rational(0), std::nullopt);
        where_[seg] = live_.insert(live_.end(), Live{seg, id, x, Rational(0)});
    }
    for (auto it = live_.begin(); it != live_.end() && std::next(it) != live_.end(); ++it) {
        schedule(it, std::next(it));
    }
}

std::size_t Simulator::open_segment(SignalId signal, const Rational& x, const Rational& t,
                                    std::optional<std::size_t> event) {
    segments_.push_back(SignalSegment{signal, {x, t}, event, std::nullopt, std::nullopt, SegmentEnd::Final});
    where_.emplace_back(std::nullopt);
    return segments_.size() - 1;
}

Rational Simulator::position_of(const Live& s, const Rational& t) const {
    return s.x0 + machine_.speed(s.signal) * (t - s.t0);
}

void Simulator::schedule(LiveIt left, LiveIt right) {
    const Rational& va = machine_.speed(left->signal);
    const Rational& vb = machine_.speed(right->signal);
    if (va <= vb) return;
    Rational t = (right->x0 - left->x0 + va * left->t0 - vb * right->t0) / (va - vb);
    Rational p = position_of(*left, t);
    queue_.push(Candidate{std::move(t), std::move(p), left->segment, right->segment});
}

void Simulator::schedule_around(LiveIt it) {
    if (it != live_.begin()) schedule(std::prev(it), it);
    if (auto next = std::next(it); next != live_.end()) schedule(it, next);
}

bool Simulator::still_adjacent(const Candidate& c) const {
    const auto& a = where_[c.left];
    const auto& b = where_[c.right];
    return a && b && std::next(*a) == *b;
}

const std::optional<EventBatch>& Simulator::peek() {
    if (peeked_) return pending_batch_;
    peeked_ = true;
    pending_runs_.clear();
    pending_batch_.reset();
    while (!queue_.empty() && !still_adjacent(queue_.top())) queue_.pop();
    if (queue_.empty()) return pending_batch_;

    const Rational t = queue_.top().time;
    while (!queue_.empty() && queue_.top().time == t) {
        const Candidate c = queue_.top();
        queue_.pop();
        if (!still_adjacent(c)) continue;
        const Rational& p = c.position;
        if (std::any_of(pending_runs_.begin(), pending_runs_.end(), [&](const Run& r) { return r.position == p; })) {
            continue;
        }
        // Widen the pair to every neighbour at the same point (k-way meeting).
        LiveIt first = *where_[c.left];
        LiveIt last = *where_[c.right];
        while (first != live_.begin() && position_of(*std::prev(first), t) == p) --first;
        while (std::next(last) != live_.end() && position_of(*std::next(last), t) == p) ++last;
        pending_runs_.push_back({p, first, last});
    }
    std::sort(pending_runs_.begin(), pending_runs_.end(),
              [](const Run& a, const Run& b) { return a.position < b.position; });

    EventBatch batch{t, {}};
    for (const auto& run : pending_runs_) {
        std::vector<SignalId> ids;
        for (auto it = run.first; it != std::next(run.last); ++it) ids.push_back(it->signal);
        batch.groups.push_back({run.position, make_signal_set(std::move(ids))});
    }
    pending_batch_ = std::move(batch);
    return pending_batch_;
}

std::optional<Rational> Simulator::next_time() {
    const auto& batch = peek();
    if (!batch) return std::nullopt;
    return batch->time;
}

std::size_t Simulator::step() {
    if (!peek()) return 0;
    const Rational t = pending_batch_->time;
    const std::vector<Run> runs = std::move(pending_runs_);

    std::vector<LiveIt> touched;
    const std::size_t before = events_.size();
    for (const auto& run : runs) {
        CollisionEvent ev;
        ev.id = events_.size();
        ev.position = run.position;
        ev.time = t;
        std::vector<SignalId> ids;
        for (auto it = run.first; it != std::next(run.last); ++it) {
            ids.push_back(it->signal);
            ev.in_segments.push_back(it->segment);
            auto& seg = segments_[it->segment];
            seg.end = SpacePoint{run.position, t};
            seg.end_event = ev.id;
            seg.end_kind = SegmentEnd::Collision;
            where_[it->segment].reset();
        }
        ev.inputs = make_signal_set(std::move(ids));
        RuleOutcome outcome = resolve_rule(machine_, ev.inputs);
        ev.outputs = outcome.outputs;
        ev.blank = outcome.blank;
        ev.rule = outcome.rule;

        std::optional<LiveIt> left;
        if (run.first != live_.begin()) left = std::prev(run.first);
        LiveIt insert_at = live_.erase(run.first, std::next(run.last));
        for (SignalId out : by_speed(machine_, ev.outputs)) {
            const std::size_t seg = open_segment(out, run.position, t, ev.id);
            ev.out_segments.push_back(seg);
            LiveIt it = live_.insert(insert_at, Live{seg, out, run.position, t});
            where_[seg] = it;
            touched.push_back(it);
        }
        if (ev.outputs.empty() && left) touched.push_back(*left);
        events_.push_back(std::move(ev));
    }

    now_ = t;
    peeked_ = false;
    pending_runs_.clear();
    pending_batch_.reset();
    for (LiveIt it : touched) schedule_around(it);
    return events_.size() - before;
}

Configuration Simulator::configuration_at(const Rational& t) const {
    if (t < now_ || (t == now_ && !events_.empty())) {
        throw std::invalid_argument("configuration requested outside the current quiet interval");
    }
    Configuration out;
    for (const auto& s : live_) out.place(position_of(s, t), s.signal);
    return out;
}

SpaceTimeDiagram Simulator::finish(const std::optional<Rational>& horizon) && {
    for (const auto& s : live_) {
        auto& seg = segments_[s.segment];
        if (horizon) {
            seg.end = SpacePoint{position_of(s, *horizon), *horizon};
            seg.end_kind = SegmentEnd::Horizon;
        } else {
            seg.end_kind = SegmentEnd::Final;
        }
    }
    return SpaceTimeDiagram{std::move(initial_), std::move(events_), std::move(segments_), horizon};
}

// --- run ----------------------------------------------------------------------

bool AccumulationGuard::observe(const Rational& time, const Rational& min_position, const Rational& max_position) {
    if (!recent_.empty()) {
        const Rational gap = time - recent_.back().time;
        if (recent_.size() >= 2) {
            const Rational previous_gap = recent_.back().time - recent_[recent_.size() - 2].time;
            if (!(gap <= window_.max_ratio * previous_gap)) {
                // Streak broken: keep only the last sample as the new start.
                Sample keep = recent_.back();
                recent_.clear();
                recent_.push_back(std::move(keep));
            }
        }
    }
    recent_.push_back(Sample{time, min_position, max_position});
    if (recent_.size() > window_.count + 1) recent_.pop_front();
    if (recent_.size() < window_.count + 1) return false;

    if (recent_.back().time - recent_.front().time > window_.span) return false;

    // Events must close in on a common point: the later half is spatially no
    // wider than the earlier half.
    const std::size_t half = recent_.size() / 2;
    auto spread = [&](std::size_t from, std::size_t to) {
        Rational lo = recent_[from].lo;
        Rational hi = recent_[from].hi;
        for (std::size_t i = from + 1; i < to; ++i) {
            lo = std::min(lo, recent_[i].lo);
            hi = std::max(hi, recent_[i].hi);
        }
        return hi - lo;
    };
    return spread(half, recent_.size()) <= spread(0, half);
}

RunOutcome run(const SignalMachine& machine, const Configuration& initial, const RunLimits& limits) {
    if (limits.max_collisions == 0) throw std::invalid_argument("max_collisions must be positive");
    if (limits.accumulation.span.sign() <= 0) throw std::invalid_argument("accumulation span must be positive");

    Simulator sim(machine, initial);
    AccumulationGuard guard(limits.accumulation);
    RunOutcome out;
    std::optional<Rational> horizon;

    while (true) {
        const auto next = sim.next_time();
        if (!next) {
            out.tag = RunTag::Halted;
            out.final_time = sim.events().empty() ? Rational(0) : sim.now() + Rational(1);
            break;
        }
        if (limits.max_time && *next >= *limits.max_time) {
            out.tag = RunTag::TimeLimit;
            // A collision exactly on the limit would leave coinciding signals
            // at the horizon; pull the horizon back into the quiet interval.
            horizon = *next == *limits.max_time ? midpoint(sim.now(), *next) : *limits.max_time;
            out.final_time = *horizon;
            break;
        }

        const std::size_t first_new = sim.events().size();
        sim.step();
        Rational lo = sim.events()[first_new].position;
        Rational hi = sim.events().back().position;
        const bool piling_up = guard.observe(sim.now(), lo, hi);
        if (piling_up) {
            out.tag = RunTag::AccumulationSuspected;
        } else if (sim.events().size() >= limits.max_collisions) {
            out.tag = RunTag::CollisionLimit;
        } else {
            continue;
        }
        const auto after = sim.next_time();
        horizon = after ? midpoint(sim.now(), *after) : sim.now() + Rational(1);
        if (limits.max_time && *limits.max_time < *horizon) horizon = *limits.max_time;
        out.final_time = *horizon;
        break;
    }

    out.final = sim.configuration_at(out.final_time);
    out.diagram = std::move(sim).finish(horizon);
    return out;
}

// --- diagram queries ----------------------------------------------------------

Configuration config_at(const SpaceTimeDiagram& diagram, const SignalMachine& machine, const Rational& t) {
    if (t.sign() < 0) throw std::invalid_argument("negative time");
    if (diagram.horizon && t > *diagram.horizon) throw std::invalid_argument("time beyond the diagram horizon");
    const auto hit = std::lower_bound(diagram.events.begin(), diagram.events.end(), t,
                                      [](const CollisionEvent& e, const Rational& x) { return e.time < x; });
    if (hit != diagram.events.end() && hit->time == t) {
        throw std::invalid_argument("configuration queried at collision time " + t.str());
    }
    Configuration out;
    for (const auto& seg : diagram.segments) {
        if (seg.start.time > t) continue;
        if (seg.end) {
            const bool open_at_horizon = seg.end_kind == SegmentEnd::Horizon;
            if (open_at_horizon ? t > seg.end->time : t >= seg.end->time) continue;
        }
        out.place(seg.start.position + machine.speed(seg.signal) * (t - seg.start.time), seg.signal);
    }
    return out;
}

std::vector<std::string> audit_diagram(const SpaceTimeDiagram& diagram, const SignalMachine& machine) {
    std::vector<std::string> problems;
    auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

    for (std::size_t i = 0; i < diagram.events.size(); ++i) {
        const auto& ev = diagram.events[i];
        if (ev.id != i) fail("event ids are not dense at " + std::to_string(i));
        if (i > 0) {
            const auto& prev = diagram.events[i - 1];
            if (ev.time < prev.time) fail("events out of time order at " + std::to_string(i));
            if (ev.time == prev.time && !(prev.position < ev.position)) {
                fail("simultaneous events not at distinct increasing positions at " + std::to_string(i));
            }
        }
        if (ev.inputs.size() < 2) fail("event " + std::to_string(i) + " has fewer than two inputs");
        try {
            if (resolve_rule(machine, ev.inputs).outputs != ev.outputs) {
                fail("event " + std::to_string(i) + " does not apply its rule");
            }
        } catch (const std::invalid_argument& e) {
            fail("event " + std::to_string(i) + ": " + e.what());
        }
        if (ev.in_segments.size() != ev.inputs.size() || ev.out_segments.size() != ev.outputs.size()) {
            fail("event " + std::to_string(i) + " segment counts differ from its rule");
        }
    }

    for (std::size_t s = 0; s < diagram.segments.size(); ++s) {
        const auto& seg = diagram.segments[s];
        const std::string tag = "segment " + std::to_string(s);
        if (seg.end) {
            if (seg.end->position - seg.start.position != machine.speed(seg.signal) * (seg.end->time - seg.start.time)) {
                fail(tag + " is not exact");
            }
            if (seg.end->time < seg.start.time) fail(tag + " runs backwards in time");
        }
        if (seg.start_event) {
            const auto& ev = diagram.events.at(*seg.start_event);
            if (ev.position != seg.start.position || ev.time != seg.start.time) fail(tag + " starts off its event");
            if (!std::binary_search(ev.outputs.begin(), ev.outputs.end(), seg.signal)) {
                fail(tag + " starts in an event that does not emit it");
            }
            if (std::find(ev.out_segments.begin(), ev.out_segments.end(), s) == ev.out_segments.end()) {
                fail(tag + " missing from its start event");
            }
        } else if (!seg.start.time.is_zero() || diagram.initial.at(seg.start.position) != seg.signal) {
            fail(tag + " does not start in the initial configuration");
        }
        switch (seg.end_kind) {
            case SegmentEnd::Collision: {
                if (!seg.end_event || !seg.end) {
                    fail(tag + " ends in a collision without event");
                    break;
                }
                const auto& ev = diagram.events.at(*seg.end_event);
                if (ev.position != seg.end->position || ev.time != seg.end->time) fail(tag + " ends off its event");
                if (!std::binary_search(ev.inputs.begin(), ev.inputs.end(), seg.signal)) {
                    fail(tag + " ends in an event that does not consume it");
                }
                if (seg.start_event && !(diagram.events.at(*seg.start_event).time < ev.time)) {
                    fail(tag + " links events that are not strictly time-ordered");
                }
                break;
            }
            case SegmentEnd::Horizon:
                if (!seg.end || !diagram.horizon || seg.end->time != *diagram.horizon) fail(tag + " not cut at horizon");
                break;
            case SegmentEnd::Final:
                if (diagram.horizon) fail(tag + " left open in a bounded diagram");
                break;
        }
    }
    return problems;
}

}  // namespace sigmach
