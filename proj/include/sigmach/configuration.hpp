#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "sigmach/machine.hpp"
#include "sigmach/rational.hpp"

namespace sigmach {

/// Finite placement of signals on the line, one signal per position.
class Configuration {
public:
    using Map = std::map<Rational, SignalId>;

    Configuration() = default;

    /// Throws std::invalid_argument if the position is already occupied.
    void place(const Rational& position, SignalId signal);

    const Map& placements() const noexcept { return placements_; }
    std::size_t size() const noexcept { return placements_.size(); }
    bool empty() const noexcept { return placements_.empty(); }
    Map::const_iterator begin() const { return placements_.begin(); }
    Map::const_iterator end() const { return placements_.end(); }

    std::optional<SignalId> at(const Rational& position) const;

    Configuration translated(const Rational& delta) const;
    Configuration scaled(const Rational& factor) const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    Map placements_;
};

}  // namespace sigmach
