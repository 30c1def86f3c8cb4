#include "doctest.h"

#include "test_helpers.hpp"

using namespace dfalearn;

namespace {

MilpModel tiny_model() {
    MilpModel m;
    const VarId x = m.add_var("x");
    const VarId y = m.add_var("y");
    const VarId z = m.add_var("z");

    LinTermBuilder obj;
    obj.add(Rational(-2), x).add(Rational(1), y).add_constant(Rational(1));
    m.set_objective(obj.build(), Sense::Minimize);

    LinTermBuilder cover;
    cover.add(Rational(1), x).add(Rational(1), y);
    m.add_constraint("cover", cover.build(), Relation::GreaterEq, Rational(1));

    LinTermBuilder mix;
    mix.add(Rational(-2), x).add(Rational(1, 2), z);
    m.add_constraint("mix", mix.build(), Relation::LessEq, Rational(0));

    LinTermBuilder pin;
    pin.add(Rational(1), y);
    m.add_constraint("pin", pin.build(), Relation::Equal, Rational(1));
    return m;
}

} // namespace

TEST_CASE("variable declaration is checked") {
    MilpModel m;
    m.add_var("ok_name_1");
    CHECK_THROWS_AS(m.add_var("ok_name_1"), DuplicateVariableError);
    CHECK_THROWS_AS(m.add_var("1bad"), ModelError);
    CHECK_THROWS_AS(m.add_var("has space"), ModelError);
    CHECK_THROWS_AS(m.add_var(""), ModelError);

    LinTermBuilder t;
    t.add(Rational(1), 99);
    CHECK_THROWS_AS(m.add_constraint("f", t.build(), Relation::Equal, Rational(0)),
                    UndeclaredVariableError);
}

TEST_CASE("builders aggregate and drop zero coefficients") {
    MilpModel m;
    const VarId x = m.add_var("x");
    const VarId y = m.add_var("y");
    LinTermBuilder b;
    b.add(Rational(1), y).add(Rational(2), x).add(Rational(-2), x).add(Rational(1, 2), y);
    const LinTerm t = b.build();
    REQUIRE(t.terms.size() == 1);
    CHECK(t.terms[0].second == y);
    CHECK(t.terms[0].first == Rational(3, 2));
}

TEST_CASE("constraint constants fold into the right hand side") {
    MilpModel m;
    const VarId x = m.add_var("x");
    LinTermBuilder b;
    b.add(Rational(1), x).add_constant(Rational(2));
    m.add_constraint("fold", b.build(), Relation::LessEq, Rational(3));
    const LinConstraint& c = m.constraints().back();
    CHECK(c.lhs.constant.is_zero());
    CHECK(c.rhs == Rational(1));
    CHECK(c.name == "fold_0");
    m.add_constraint("fold", b.build(), Relation::LessEq, Rational(3));
    CHECK(m.constraints().back().name == "fold_1");
    CHECK(m.family_counts().at("fold") == 2);
}

TEST_CASE("evaluate and satisfies use exact arithmetic") {
    const MilpModel m = tiny_model();
    // x=1, y=1, z=0: cover 2>=1 ok, mix -2<=0 ok, pin 1=1 ok.
    CHECK(satisfies(m, {1, 1, 0}));
    CHECK(evaluate(m.objective(), {1, 1, 0}) == Rational(0));
    // x=0, y=0, z=1: cover violated.
    std::string violated;
    CHECK_FALSE(satisfies(m, {0, 0, 1}, &violated));
    CHECK(violated == "cover_0");
    // Half coefficients stay exact: x=1, z=1 makes mix -2 + 0.5 <= 0 hold.
    CHECK(satisfies(m.constraints()[1], {1, 0, 1}));
}

TEST_CASE("lp output is deterministic and matches the dialect") {
    const std::string expected = "Minimize\n"
                                 " obj: - 2 x + y + 1\n"
                                 "Subject To\n"
                                 " cover_0: x + y >= 1\n"
                                 " mix_0: - 2 x + 0.5 z <= 0\n"
                                 " pin_0: y = 1\n"
                                 "Bounds\n"
                                 " 0 <= x <= 1\n"
                                 " 0 <= y <= 1\n"
                                 " 0 <= z <= 1\n"
                                 "Binaries\n"
                                 " x y z\n"
                                 "End\n";
    CHECK(write_lp(tiny_model()) == expected);
    CHECK(write_lp(tiny_model()) == write_lp(tiny_model()));
}

TEST_CASE("lp output wraps the binaries section at eight names") {
    MilpModel m;
    for (int i = 0; i < 9; ++i) m.add_var("v" + std::to_string(i));
    const std::string lp = write_lp(m);
    const auto binaries = lp.find("Binaries\n");
    REQUIRE(binaries != std::string::npos);
    CHECK(lp.find(" v0 v1 v2 v3 v4 v5 v6 v7\n v8\n", binaries) != std::string::npos);
    // A model without an objective minimizes the constant default.
    CHECK(lp.find(" obj: 0\n") != std::string::npos);
}

TEST_CASE("solution parsing handles statuses, defaults and tolerances") {
    const MilpModel m = tiny_model();

    const ParsedSolution full = parse_solution_text("status optimal\nobjective 7\nx 1\ny 1\n", m);
    CHECK(full.status == SolutionStatus::Optimal);
    REQUIRE(full.assignment);
    CHECK(full.assignment->values == std::vector<int>{1, 1, 0}); // z defaults to 0
    // The objective is recomputed exactly; the reported number is kept
    // separately and never trusted.
    CHECK(full.assignment->objective_value == Rational(0));
    CHECK(full.reported_objective == 7.0);

    const ParsedSolution bare = parse_solution_text("INFEASIBLE\n", m);
    CHECK(bare.status == SolutionStatus::Infeasible);
    CHECK_FALSE(bare.assignment);

    const ParsedSolution noisy = parse_solution_text("status feasible\nx 0.9999999\n", m);
    REQUIRE(noisy.assignment);
    CHECK(noisy.assignment->values[0] == 1);

    CHECK_THROWS_AS(parse_solution_text("x 0.9\n", m), NonIntegralValueError);
    CHECK_THROWS_AS(parse_solution_text("x 2\n", m), MalformedSolutionError);
    CHECK_THROWS_AS(parse_solution_text("x 1\nx 1\n", m), MalformedSolutionError);
    CHECK_THROWS_AS(parse_solution_text("w 1\n", m), MalformedSolutionError);
    CHECK_THROWS_AS(parse_solution_text("status bogus\n", m), MalformedSolutionError);

    const ParsedSolution limit_empty = parse_solution_text("status limit\n", m);
    CHECK(limit_empty.status == SolutionStatus::Limit);
    CHECK_FALSE(limit_empty.assignment);
    const ParsedSolution limit_incumbent = parse_solution_text("status limit\nx 1\ny 1\n", m);
    REQUIRE(limit_incumbent.assignment);

    const ParsedSolution unlabeled = parse_solution_text("x 1\ny 1\n# trailing comment\n", m);
    CHECK(unlabeled.status == SolutionStatus::Unknown);
    REQUIRE(unlabeled.assignment);
}
