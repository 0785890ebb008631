#include "sigmach/metrics.hpp"

#include <algorithm>
#include <vector>

namespace sigmach {

std::size_t time_complexity(const SpaceTimeDiagram& diagram, BlankEvents blanks) {
    // Events are stored in time order and every causal edge goes forward in
    // time, so one forward pass settles every depth.
    std::vector<std::size_t> depth(diagram.events.size(), 0);
    std::size_t longest = 0;
    for (const auto& ev : diagram.events) {
        std::size_t parent = 0;
        for (std::size_t seg : ev.in_segments) {
            if (const auto& from = diagram.segments[seg].start_event) parent = std::max(parent, depth[*from]);
        }
        const bool counts = blanks == BlankEvents::Count || !ev.blank;
        depth[ev.id] = parent + (counts ? 1 : 0);
        longest = std::max(longest, depth[ev.id]);
    }
    return longest;
}

std::size_t space_cut(const SpaceTimeDiagram& diagram) {
    std::size_t alive = diagram.initial.size();
    std::size_t best = alive;
    for (std::size_t i = 0; i < diagram.events.size();) {
        std::size_t j = i;
        while (j < diagram.events.size() && diagram.events[j].time == diagram.events[i].time) {
            alive = alive - diagram.events[j].inputs.size() + diagram.events[j].outputs.size();
            ++j;
        }
        best = std::max(best, alive);
        i = j;
    }
    return best;
}

}  // namespace sigmach
