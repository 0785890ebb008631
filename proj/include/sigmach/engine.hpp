#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <list>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "sigmach/configuration.hpp"
#include "sigmach/machine.hpp"
#include "sigmach/rational.hpp"

namespace sigmach {

struct SpacePoint {
    Rational position;
    Rational time;

    friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
};

struct CollisionEvent {
    std::size_t id = 0;
    Rational position;
    Rational time;
    SignalSet inputs;
    SignalSet outputs;
    bool blank = false;
    std::optional<std::size_t> rule;
    std::vector<std::size_t> in_segments;
    std::vector<std::size_t> out_segments;
};

enum class SegmentEnd {
    Collision,  ///< ends in `end_event`
    Final,      ///< the run halted; the signal goes on forever
    Horizon,    ///< cut by a limit at the diagram horizon
};

struct SignalSegment {
    SignalId signal = 0;
    SpacePoint start;
    std::optional<std::size_t> start_event;  ///< empty for initial signals
    std::optional<SpacePoint> end;            ///< empty for SegmentEnd::Final
    std::optional<std::size_t> end_event;
    SegmentEnd end_kind = SegmentEnd::Final;
};

struct SpaceTimeDiagram {
    Configuration initial;
    std::vector<CollisionEvent> events;
    std::vector<SignalSegment> segments;
    /// Empty when the run halted (the diagram extends forever).
    std::optional<Rational> horizon;
};

struct AccumulationWindow {
    /// Consecutive shrinking inter-event gaps required.
    std::size_t count = 64;
    /// Largest total time spanned by those events.
    Rational span = Rational(1);
    /// Each gap must be at most this fraction of the previous one.
    Rational max_ratio = Rational(15, 16);
};

struct RunLimits {
    std::uint64_t max_collisions = 100000;
    std::optional<Rational> max_time;
    AccumulationWindow accumulation;
};

enum class RunTag { Halted, TimeLimit, CollisionLimit, AccumulationSuspected };

const char* to_string(RunTag tag);

struct RunOutcome {
    RunTag tag = RunTag::Halted;
    Configuration final;
    /// Instant at which `final` was sampled.
    Rational final_time;
    SpaceTimeDiagram diagram;
};

struct MeetingGroup {
    Rational position;
    SignalSet inputs;
};

struct EventBatch {
    Rational time;
    /// Ordered by position.
    std::vector<MeetingGroup> groups;
};

/// Earliest instant after `now` where two or more signals of `config` (given
/// as positions at time `now`) share a position, with every meeting at that
/// instant. Direct scan, independent of the Simulator's queue.
std::optional<EventBatch> next_event_batch(const SignalMachine& machine, const Configuration& config,
                                           const Rational& now);

/// True when no pair of signals converges.
bool is_stable(const Configuration& config, const SignalMachine& machine);

/// Exact event-driven execution, one batch of simultaneous collisions at a
/// time. Only neighbouring signals can meet first, so candidate meetings are
/// kept for adjacent pairs in a queue keyed by (time, position).
class Simulator {
public:
    Simulator(const SignalMachine& machine, const Configuration& initial);

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// Time of the last applied batch (0 before the first).
    const Rational& now() const noexcept { return now_; }

    /// The next batch, without applying it.
    const std::optional<EventBatch>& peek();
    std::optional<Rational> next_time();

    /// Applies the next batch; returns the number of collision events added.
    std::size_t step();

    /// Live signals at `t`, which must satisfy now() <= t < next_time() and not
    /// be a collision instant.
    Configuration configuration_at(const Rational& t) const;

    std::size_t live_count() const noexcept { return live_.size(); }
    const std::vector<CollisionEvent>& events() const noexcept { return events_; }
    const SignalMachine& machine() const noexcept { return machine_; }

    /// Closes open segments: at `horizon` if given, as Final otherwise.
    SpaceTimeDiagram finish(const std::optional<Rational>& horizon) &&;

private:
    struct Live {
        std::size_t segment;
        SignalId signal;
        Rational x0;
        Rational t0;
    };
    using LiveIt = std::list<Live>::iterator;

    struct Candidate {
        Rational time;
        Rational position;
        std::size_t left;
        std::size_t right;
    };
    struct Later {
        bool operator()(const Candidate& a, const Candidate& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.position > b.position;
        }
    };

    Rational position_of(const Live& s, const Rational& t) const;
    void schedule(LiveIt left, LiveIt right);
    void schedule_around(LiveIt it);
    bool still_adjacent(const Candidate& c) const;
    std::size_t open_segment(SignalId signal, const Rational& x, const Rational& t, std::optional<std::size_t> event);

    const SignalMachine& machine_;
    Configuration initial_;
    std::list<Live> live_;
    std::vector<std::optional<LiveIt>> where_;  // by segment index
    std::priority_queue<Candidate, std::vector<Candidate>, Later> queue_;
    std::vector<CollisionEvent> events_;
    std::vector<SignalSegment> segments_;
    Rational now_;

    // Runs of contiguous signals meeting at the next instant, filled by peek().
    struct Run {
        Rational position;
        LiveIt first;
        LiveIt last;
    };
    bool peeked_ = false;
    std::vector<Run> pending_runs_;
    std::optional<EventBatch> pending_batch_;
};

/// Runs until no collision is possible or a limit trips.
RunOutcome run(const SignalMachine& machine, const Configuration& initial, const RunLimits& limits = {});

/// Tracks recent batch instants and flags a geometric pile-up of collisions.
class AccumulationGuard {
public:
    explicit AccumulationGuard(AccumulationWindow window) : window_(std::move(window)) {}

    /// Records a batch; returns true when the window looks like an accumulation.
    bool observe(const Rational& time, const Rational& min_position, const Rational& max_position);

private:
    struct Sample {
        Rational time;
        Rational lo;
        Rational hi;
    };
    AccumulationWindow window_;
    std::deque<Sample> recent_;
};

/// Configuration of a diagram at `t`. Throws std::invalid_argument when `t`
/// is negative, beyond the horizon, or a collision instant.
Configuration config_at(const SpaceTimeDiagram& diagram, const SignalMachine& machine, const Rational& t);

/// Post-run conformance check: segment exactness, endpoint consistency with
/// events and the initial configuration, rule application, event ordering.
/// Returns one message per problem.
std::vector<std::string> audit_diagram(const SpaceTimeDiagram& diagram, const SignalMachine& machine);

}  // namespace sigmach
