#include <gtest/gtest.h>

#include "sigmach/ca.hpp"
#include "sigmach/cts.hpp"
#include "sigmach/machine.hpp"
#include "sigmach/machine_text.hpp"
#include "sigmach/rational.hpp"

using namespace sigmach;

TEST(Rational, ParsesAndReduces) {
    EXPECT_EQ(Rational::parse("2/4").str(), "1/2");
    EXPECT_EQ(Rational::parse("-6/3").str(), "-2");
    EXPECT_EQ(Rational::parse("0/5").str(), "0");
    EXPECT_EQ(Rational::parse("17").str(), "17");
    EXPECT_EQ(Rational(3, -6).str(), "-1/2");
}

TEST(Rational, RejectsMalformed) {
    for (const char* bad : {"", "1/0", "1/-2", "a", "1.5", "1/", "/2", "--1", "1 /2"})
        EXPECT_THROW(Rational::parse(bad), std::invalid_argument) << bad;
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, ExactArithmetic) {
    const Rational third(1, 3);
    EXPECT_EQ(third + third + third, Rational(1));
    EXPECT_EQ(Rational(2, 3) * Rational(3, 2), Rational(1));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_EQ(midpoint(Rational(1), Rational(2)), Rational(3, 2));
    EXPECT_TRUE(Rational(4, 2).is_integer());
    EXPECT_FALSE(third.is_integer());
    EXPECT_EQ(std::hash<Rational>{}(Rational(2, 4)), std::hash<Rational>{}(Rational(1, 2)));
}

namespace {

SignalMachine two_signals(Rational sa, Rational sb) {
    SignalMachine m;
    m.add_signal("a", sa);
    m.add_signal("b", sb);
    return m;
}

bool reports(const ValidationReport& r, ViolationKind kind, const std::string& needle) {
    for (const auto& v : r)
        if (v.kind == kind && v.message.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Validate, DuplicateInputSet) {
    SignalMachine raw({{"a", Rational(1)}, {"b", Rational(-1)}}, {{{0, 1}, {}}, {{0, 1}, {0}}});
    EXPECT_TRUE(reports(validate_machine(raw), ViolationKind::DuplicateInputSet, "duplicate rule input set {b,a}") ||
                reports(validate_machine(raw), ViolationKind::DuplicateInputSet, "duplicate rule input set {a,b}"));
}

TEST(Validate, NonDistinctInputSpeeds) {
    SignalMachine raw({{"a", Rational(1)}, {"b", Rational(1)}}, {{{0, 1}, {}}});
    EXPECT_TRUE(reports(validate_machine(raw), ViolationKind::NonDistinctInputSpeeds, "non-distinct input speeds"));
}

TEST(Validate, OtherViolations) {
    SignalMachine raw({{"a", Rational(1)}, {"a", Rational(0)}, {"9x", Rational(2)}, {"", Rational(3)}},
                      {{{0}, {}}, {{0, 7}, {}}, {{0, 2}, {1, 0, 3}}});
    const auto r = validate_machine(raw);
    EXPECT_TRUE(reports(r, ViolationKind::DuplicateName, ""));
    EXPECT_TRUE(reports(r, ViolationKind::MalformedName, ""));
    EXPECT_TRUE(reports(r, ViolationKind::EmptyName, ""));
    EXPECT_TRUE(reports(r, ViolationKind::TooFewInputs, ""));
    EXPECT_TRUE(reports(r, ViolationKind::UndeclaredSignal, ""));
}

TEST(Validate, GeneratedMachinesAreValid) {
    EXPECT_TRUE(validate_machine(cts::build_cts_machine()).empty());
    EXPECT_TRUE(validate_machine(cts::build_cts_machine({cts::CtsVariant::ThreeSignalHalt, true})).empty());
    EXPECT_TRUE(validate_machine(cts::build_cts_machine_two_signal()).empty());
    EXPECT_TRUE(validate_machine(ca::build_ca_machine(ca::elementary_ca(110))).empty());
}

TEST(Machine, AddHelpersRejectBadInput) {
    auto m = two_signals(Rational(1), Rational(-1));
    EXPECT_THROW(m.add_signal("a", Rational(0)), std::invalid_argument);
    EXPECT_THROW(m.add_signal("1a", Rational(0)), std::invalid_argument);
    EXPECT_THROW(m.add_rule({"a"}, {}), std::invalid_argument);
    EXPECT_THROW(m.add_rule({"a", "zz"}, {}), std::out_of_range);
    m.add_rule({"a", "b"}, {});
    EXPECT_THROW(m.add_rule({"b", "a"}, {"a"}), std::invalid_argument);
}

TEST(ResolveRule, CtsTableEntries) {
    const auto m = cts::build_cts_machine();
    auto set = [&](std::initializer_list<const char*> names) {
        std::vector<SignalId> ids;
        for (auto n : names) ids.push_back(m.id(n));
        return make_signal_set(ids);
    };
    auto r = resolve_rule(m, set({"go_RR", "zero"}));
    EXPECT_FALSE(r.blank);
    EXPECT_EQ(r.outputs, set({"last", "zero_R"}));

    r = resolve_rule(m, set({"zero_R", "one"}));
    EXPECT_TRUE(r.blank);
    EXPECT_EQ(r.outputs, set({"zero_R", "one"}));

    r = resolve_rule(m, set({"true_R", "one", "go_LL"}));
    EXPECT_FALSE(r.blank);
    EXPECT_EQ(r.outputs, set({"true_R"}));

    EXPECT_THROW(resolve_rule(m, set({"first", "sep"})), std::invalid_argument);
    EXPECT_THROW(resolve_rule(m, set({"first"})), std::invalid_argument);
}

TEST(ResolveRule, UndeclaredSetIsBlank) {
    auto m = two_signals(Rational(1), Rational(-1));
    const auto r = resolve_rule(m, {0, 1});
    EXPECT_TRUE(r.blank);
    EXPECT_FALSE(r.rule.has_value());
    EXPECT_EQ(r.outputs, (SignalSet{0, 1}));
}

TEST(ResolveRule, AgreesWithEveryDeclaredRule) {
    const auto m = cts::build_cts_machine();
    for (std::size_t i = 0; i < m.rules().size(); ++i) {
        const auto r = resolve_rule(m, m.rules()[i].inputs);
        EXPECT_EQ(r.rule, i);
        EXPECT_EQ(r.outputs, m.rules()[i].outputs);
        EXPECT_EQ(r.blank, r.outputs == m.rules()[i].inputs);
    }
}

TEST(MachineStats, Counts) {
    EXPECT_EQ(machine_stats(cts::build_cts_machine()), (MachineStats{13, 21}));
    EXPECT_EQ(machine_stats(cts::build_cts_machine_two_signal()), (MachineStats{15, 24}));
    EXPECT_EQ(machine_stats(ca::build_ca_machine(ca::elementary_ca(110))), (MachineStats{6, 8}));
}

TEST(MachineStats, ExplicitCrossingsExcluded) {
    auto m = two_signals(Rational(1), Rational(-1));
    m.add_crossing({"a", "b"});
    EXPECT_EQ(machine_stats(m), (MachineStats{2, 0}));
    EXPECT_TRUE(resolve_rule(m, {0, 1}).blank);
}

TEST(Text, ParsesGrammarExample) {
    const auto pm = parse_machine("speed a 1\nspeed b -1\nrule a b ->\ninit 0 a\ninit 4 b");
    EXPECT_EQ(pm.machine.size(), 2u);
    ASSERT_EQ(pm.machine.rules().size(), 1u);
    EXPECT_TRUE(pm.machine.rules()[0].outputs.empty());
    ASSERT_TRUE(pm.init);
    EXPECT_EQ(pm.init->size(), 2u);
    EXPECT_EQ(pm.init->at(Rational(4)), pm.machine.id("b"));
}

TEST(Text, RationalPlacement) {
    const auto pm = parse_machine("speed a 1\ninit 1/3 a\n");
    EXPECT_EQ(pm.init->at(Rational(1, 3)), pm.machine.id("a"));
}

TEST(Text, Errors) {
    auto line_of = [](const char* text) -> long {
        try {
            parse_machine(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.line());
        }
        return -1;
    };
    EXPECT_EQ(line_of("speed a 1\nspeed b 0\nrule a a -> b\n"), 3);
    EXPECT_EQ(line_of("speed a 1\nrule a zz -> a\n"), 2);
    EXPECT_EQ(line_of("speed a 1\ninit 0 a\ninit 0 a\n"), 3);
    EXPECT_EQ(line_of("speed a x\n"), 1);
    EXPECT_EQ(line_of("speed a 1\nspeed a 2\n"), 2);
    EXPECT_EQ(line_of("bogus\n"), 1);
    EXPECT_EQ(line_of("speed a 1\nspeed b 0\nrule a b\n"), 3);
    EXPECT_EQ(line_of("speed a 1\nspeed b 0\nrule a b -> a -> b\n"), 3);
    EXPECT_EQ(line_of("speed a 1\nrule a -> a\n"), 2);
    EXPECT_EQ(line_of("speed a 1\ninit 0 zz\n"), 2);
    try {
        parse_machine("speed a 1\nspeed b 0\nrule a a -> b\n");
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate meta-signal in rule input"), std::string::npos);
    }
}

TEST(Text, CommentsAndOrder) {
    const auto pm = parse_machine("# header\ninit 2 b # trailing\nrule a b -> c\nspeed c 0\nspeed b -1\nspeed a 1\n");
    EXPECT_TRUE(validate_machine(pm.machine).empty());
    EXPECT_EQ(pm.machine.rules().size(), 1u);
}

TEST(Text, EmitIsCanonical) {
    const auto pm = parse_machine("speed b 2/4\nspeed a 1/2\nspeed c -3\nrule a c -> b\ninit 6/4 a\ninit -1 c\n");
    EXPECT_EQ(emit_machine(pm.machine, pm.init),
              "speed c -3\nspeed a 1/2\nspeed b 1/2\n\nrule c a -> b\n\ninit -1 c\ninit 3/2 a\n");
}

TEST(Text, RoundTripGeneratedMachines) {
    for (const auto& m : {cts::build_cts_machine(), cts::build_cts_machine_two_signal(true),
                          ca::build_ca_machine(ca::elementary_ca(110)), ca::build_ca_machine(ca::elementary_ca(30))}) {
        const std::string text = emit_machine(m);
        const auto back = parse_machine(text);
        EXPECT_TRUE(equivalent(m, back.machine));
        EXPECT_EQ(emit_machine(back.machine), text);
        EXPECT_EQ(machine_stats(back.machine), machine_stats(m));
    }
}

TEST(Text, CtsMachineHasThirteenSpeedLines) {
    const std::string text = emit_machine(cts::build_cts_machine());
    std::size_t lines = 0;
    for (std::size_t p = 0; (p = text.find("speed ", p)) != std::string::npos; ++p) ++lines;
    EXPECT_EQ(lines, 13u);
}

TEST(Text, BlankDirective) {
    const auto pm = parse_machine("speed a 1\nspeed b -1\nblank a b\n");
    ASSERT_EQ(pm.machine.rules().size(), 1u);
    EXPECT_TRUE(pm.machine.rules()[0].crossing);
    EXPECT_EQ(machine_stats(pm.machine).non_blank_rules, 0u);
    EXPECT_EQ(emit_machine(pm.machine), "speed b -1\nspeed a 1\n\nblank b a\n");
}
