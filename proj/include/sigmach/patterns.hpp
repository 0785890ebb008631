#pragma once

#include <string>
#include <vector>

#include "sigmach/configuration.hpp"
#include "sigmach/machine.hpp"
#include "sigmach/rational.hpp"

namespace sigmach::patterns {

struct PatternSpec {
    /// Emitted meta-signals, in order; each must be declared with speed 0.
    std::vector<std::string> emitted;
    /// Initial distance between the two borders.
    Rational spacing = Rational(4);
    /// Unequal mode only: speed of the bouncer leaving for emission i + 1
    /// (all > 1). Empty selects the uniform generator.
    std::vector<Rational> way_speeds;
};

struct PatternFragment {
    std::vector<std::string> added_signals;
    std::size_t added_rules = 0;
    /// Border and bouncer signals to add to an initial configuration.
    Configuration initial;
};

/// Adds the generator to `machine`. Uniform mode: bouncer `boun` (speed 2),
/// borders `bord_1`..`bord_k` (speed 1) and 2k rules; rear border at 0,
/// bouncer at d/2, front border at d. The first emission is at 3d/2, then
/// one every 2d.
///
/// Unequal mode: one border `bord` (speed 1), `way_i` (given speeds) and
/// `back_i` (speed -1), 2k rules. Emission i + 1 follows emission i by
/// d/2 + d/(w_{i+1} - 1).
PatternFragment build_pattern_generator(SignalMachine& machine, const PatternSpec& spec);

/// `mu_1`..`mu_k` at speed 0 plus the generator, as a standalone machine.
struct PatternMachine {
    SignalMachine machine;
    Configuration initial;
    PatternFragment fragment;
};
PatternMachine standalone_pattern(std::size_t k, const Rational& spacing = Rational(4),
                                  const std::vector<Rational>& way_speeds = {});

/// Emission positions of the first `count` emissions, from the geometry.
std::vector<Rational> expected_emissions(const PatternSpec& spec, std::size_t count);

}  // namespace sigmach::patterns
