#pragma once

// Independent reference computations used by the unit tests and the
// acceptance binary.

#include <cstddef>
#include <string>
#include <vector>

#include "sigmach/engine.hpp"

namespace oracle {

/// Longest chain of events by repeated edge relaxation over the explicit
/// edge list (Bellman-Ford style). Returns -1 if the graph has a cycle.
long longest_chain(const sigmach::SpaceTimeDiagram& d);

/// True when every causal edge goes strictly forward in time and a
/// depth-first search finds no back edge.
bool acyclic(const sigmach::SpaceTimeDiagram& d);

/// Largest number of segments crossing a horizontal line, trying one line
/// inside every interval between distinct event times.
std::size_t sweep_space_cut(const sigmach::SpaceTimeDiagram& d);

/// Segments violating dx = speed * dt.
std::vector<std::string> inexact_segments(const sigmach::SpaceTimeDiagram& d, const sigmach::SignalMachine& m);

/// Reruns with the initial configuration moved by `delta` and compares event
/// by event. Empty string when the property holds.
std::string translation_mismatch(const sigmach::SignalMachine& m, const sigmach::Configuration& init,
                                 const sigmach::RunLimits& limits, const sigmach::Rational& delta);
std::string scaling_mismatch(const sigmach::SignalMachine& m, const sigmach::Configuration& init,
                             const sigmach::RunLimits& limits, const sigmach::Rational& alpha);

/// Limits with the time limit scaled by `alpha` (for scaled reruns).
sigmach::RunLimits scaled_limits(const sigmach::RunLimits& limits, const sigmach::Rational& alpha);

}  // namespace oracle
