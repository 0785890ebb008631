#include "sigmach/configuration.hpp"

#include <stdexcept>

namespace sigmach {

void Configuration::place(const Rational& position, SignalId signal) {
    if (!placements_.emplace(position, signal).second) {
        throw std::invalid_argument("two signals at position " + position.str());
    }
}

std::optional<SignalId> Configuration::at(const Rational& position) const {
    const auto it = placements_.find(position);
    if (it == placements_.end()) return std::nullopt;
    return it->second;
}

Configuration Configuration::translated(const Rational& delta) const {
    Configuration out;
    for (const auto& [x, id] : placements_) out.place(x + delta, id);
    return out;
}

Configuration Configuration::scaled(const Rational& factor) const {
    if (factor.sign() <= 0) throw std::invalid_argument("scale factor must be positive");
    Configuration out;
    for (const auto& [x, id] : placements_) out.place(x * factor, id);
    return out;
}

}  // namespace sigmach
