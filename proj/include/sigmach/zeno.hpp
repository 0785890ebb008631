#pragma once

#include "sigmach/configuration.hpp"
#include "sigmach/machine.hpp"

namespace sigmach {

/// Bouncer trapped between a static wall `wall` and a wall `conv` closing in
/// at speed -1/2. The bouncer goes right at 1 and left at -3/2, so each
/// round trip takes 2/3 of the previous one and collisions accumulate at
/// (0, 8).
struct ZenoExample {
    SignalMachine machine;
    Configuration initial;
};

ZenoExample zeno_example();

}  // namespace sigmach
