#pragma once

#include <cstddef>

#include "sigmach/engine.hpp"

namespace sigmach {

enum class BlankEvents { Count, Skip };

/// Longest chain in the collision causality DAG, counted in events. An event
/// follows another when a signal emitted by the first ends in the second.
/// With BlankEvents::Skip, pure crossings relay depth without adding to it.
std::size_t time_complexity(const SpaceTimeDiagram& diagram, BlankEvents blanks = BlankEvents::Count);

/// Largest number of signals alive at once, over the quiet intervals.
std::size_t space_cut(const SpaceTimeDiagram& diagram);

}  // namespace sigmach
