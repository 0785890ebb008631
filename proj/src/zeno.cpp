#include "sigmach/zeno.hpp"

namespace sigmach {

ZenoExample zeno_example() {
    ZenoExample z;
    auto& m = z.machine;
    m.add_signal("wall", Rational(0));
    m.add_signal("conv", Rational(-1, 2));
    m.add_signal("bounce_R", Rational(1));
    m.add_signal("bounce_L", Rational(-3, 2));
    m.add_rule({"bounce_L", "wall"}, {"wall", "bounce_R"});
    m.add_rule({"bounce_R", "conv"}, {"bounce_L", "conv"});
    z.initial.place(Rational(0), m.id("wall"));
    z.initial.place(Rational(1), m.id("bounce_R"));
    z.initial.place(Rational(4), m.id("conv"));
    return z;
}

}  // namespace sigmach
