#include "doctest.h"

#include <climits>

#include "test_helpers.hpp"

using namespace dfalearn;
using testutil::TempDir;

namespace {

EncodingSpec two_bound(int states, long long lower, long long upper) {
    EncodingSpec spec;
    spec.mode = LearnMode::TwoBound;
    spec.states = states;
    spec.lower = lower;
    spec.upper = upper;
    return spec;
}

// Minimal model: minimize x + y subject to x + y >= 1.
MilpModel cover_model() {
    MilpModel m;
    const VarId x = m.add_var("x");
    const VarId y = m.add_var("y");
    LinTermBuilder obj;
    obj.add(Rational(1), x).add(Rational(1), y);
    m.set_objective(obj.build(), Sense::Minimize);
    LinTermBuilder c;
    c.add(Rational(1), x).add(Rational(1), y);
    m.add_constraint("cover", c.build(), Relation::GreaterEq, Rational(1));
    return m;
}

} // namespace

TEST_CASE("candidate counts follow the closed form and saturate") {
    CHECK(enumeration_candidates(1, 1) == 2);       // 1^1 * 2
    CHECK(enumeration_candidates(2, 2) == 64);      // 2^4 * 4
    CHECK(enumeration_candidates(3, 2) == 5832);    // 3^6 * 8
    CHECK(enumeration_candidates(2, 0) == 4);       // finals only
    CHECK(enumeration_candidates(20, 3) == LLONG_MAX);
}

TEST_CASE("enumeration visits every candidate and returns a natural optimum") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});
    const PrefixTree tree = PrefixTree::build(s);
    const EncodingSpec spec = two_bound(2, 1, 1);

    const SolveOutcome out = solve_enumerate(s, tree, spec);
    CHECK(out.status == SolveStatus::Optimal);
    CHECK(out.work.units == 64);
    REQUIRE(out.assignment);

    const EncodedModel em = encode(s, tree, spec);
    CHECK(satisfies(em.model, out.assignment->values));
    const Dfa dfa = decode_dfa(em, *out.assignment);
    CHECK(count_accepted(dfa, s) == 1);
}

TEST_CASE("enumeration agrees with brute force on feasibility") {
    std::mt19937_64 rng(7041);
    for (int i = 0; i < 25; ++i) {
        const Sample s = testutil::random_sample(rng);
        const PrefixTree tree = PrefixTree::build(s);
        const long long total = s.total_size();
        const long long a = static_cast<long long>(rng() % static_cast<unsigned long long>(total + 1));
        const long long b = static_cast<long long>(rng() % static_cast<unsigned long long>(total + 1));
        const long long lower = std::min(a, b), upper = std::max(a, b);

        for (int n = 1; n <= 2; ++n) {
            const SolveOutcome out = solve_enumerate(s, tree, two_bound(n, lower, upper));
            CHECK(out.status != SolveStatus::BackendError);
            const bool oracle = testutil::brute_feasible(s, n, lower, upper);
            CHECK((out.status == SolveStatus::Optimal) == oracle);
        }
    }
}

TEST_CASE("enumeration optimizes the single bound objectives exactly") {
    std::mt19937_64 rng(90210);
    for (int i = 0; i < 15; ++i) {
        const Sample s = testutil::random_sample(rng);
        const PrefixTree tree = PrefixTree::build(s);
        const long long total = s.total_size();
        const long long bound = static_cast<long long>(rng() % static_cast<unsigned long long>(total + 1));

        EncodingSpec spec;
        spec.states = 2;
        spec.mode = (i % 2 == 0) ? LearnMode::SingleBoundLower : LearnMode::SingleBoundUpper;
        if (spec.mode == LearnMode::SingleBoundLower) spec.lower = bound;
        else spec.upper = bound;

        const SolveOutcome out = solve_enumerate(s, tree, spec);
        REQUIRE(out.status == SolveStatus::Optimal);
        const EncodedModel em = encode(s, tree, spec);
        const long long got = count_accepted(decode_dfa(em, *out.assignment), s);

        long long best = spec.mode == LearnMode::SingleBoundLower ? LLONG_MAX : LLONG_MIN;
        testutil::for_each_dfa(s, 2, [&](long long count, const auto&, const auto&) {
            if (spec.mode == LearnMode::SingleBoundLower) {
                if (count >= bound) best = std::min(best, count);
            } else if (count <= bound) {
                best = std::max(best, count);
            }
        });
        CHECK(got == best);
    }
}

TEST_CASE("enumeration reports infeasibility and respects the budget") {
    const Sample s = testutil::make_sample({{"a", 2}});
    const PrefixTree tree = PrefixTree::build(s);
    const SolveOutcome out = solve_enumerate(s, tree, two_bound(1, 1, 1));
    CHECK(out.status == SolveStatus::Infeasible);
    CHECK_FALSE(out.assignment);

    EnumerationConfig tight;
    tight.budget = 3; // size 1 on one symbol needs 2 candidates; size 2 needs 16
    CHECK_NOTHROW(solve_enumerate(s, tree, two_bound(1, 1, 1), tight));
    CHECK_THROWS_AS(solve_enumerate(s, tree, two_bound(2, 1, 1), tight), BudgetExceededError);
}

TEST_CASE("external solves re-verify whatever comes back") {
    const MilpModel m = cover_model();
    TempDir dir;

    BackendConfig good;
    good.command_template = testutil::fake_solver(dir, "good.sh", "status optimal\nx 1\n");
    const SolveOutcome ok = solve_external(m, good);
    CHECK(ok.status == SolveStatus::Optimal);
    REQUIRE(ok.assignment);
    CHECK(ok.assignment->values == std::vector<int>{1, 0});
    CHECK(ok.assignment->objective_value == Rational(1));

    BackendConfig lying;
    lying.command_template = testutil::fake_solver(dir, "lying.sh", "status optimal\n");
    const SolveOutcome bad = solve_external(m, lying);
    CHECK(bad.status == SolveStatus::BackendError);
    CHECK(bad.detail.find("re-verification failed") != std::string::npos);
    CHECK(bad.detail.find("cover_0") != std::string::npos);
}

TEST_CASE("external statuses map one to one") {
    const MilpModel m = cover_model();
    TempDir dir;

    BackendConfig cfg;
    cfg.command_template = testutil::fake_solver(dir, "inf.sh", "status infeasible\n");
    CHECK(solve_external(m, cfg).status == SolveStatus::Infeasible);

    cfg.command_template = testutil::fake_solver(dir, "unb.sh", "status unbounded\n");
    const SolveOutcome unb = solve_external(m, cfg);
    CHECK(unb.status == SolveStatus::BackendError); // impossible for binary models

    cfg.command_template = testutil::fake_solver(dir, "lim0.sh", "status limit\n");
    const SolveOutcome lim0 = solve_external(m, cfg);
    CHECK(lim0.status == SolveStatus::LimitReached);
    CHECK_FALSE(lim0.assignment);

    cfg.command_template = testutil::fake_solver(dir, "lim1.sh", "status limit\nx 1\ny 1\n");
    const SolveOutcome lim1 = solve_external(m, cfg);
    CHECK(lim1.status == SolveStatus::LimitReached);
    REQUIRE(lim1.assignment);

    cfg.command_template = testutil::fake_solver(dir, "feas.sh", "status feasible\nx 1\n");
    CHECK(solve_external(m, cfg).status == SolveStatus::Feasible);

    cfg.command_template = testutil::fake_solver(dir, "crash.sh", "", 3);
    const SolveOutcome crash = solve_external(m, cfg);
    CHECK(crash.status == SolveStatus::BackendError);
    CHECK(crash.detail.find("exited with code 3") != std::string::npos);

    cfg.command_template = testutil::fake_solver(dir, "frac.sh", "status optimal\nx 0.4\ny 0.6\n");
    const SolveOutcome frac = solve_external(m, cfg);
    CHECK(frac.status == SolveStatus::BackendError);
    CHECK(frac.detail.find("bad solution file") != std::string::npos);

    cfg.command_template = "true"; // never writes a solution file
    const SolveOutcome missing = solve_external(m, cfg);
    CHECK(missing.status == SolveStatus::BackendError);
    CHECK(missing.detail.find("{lp_path}") != std::string::npos);

    cfg.command_template = "true '{lp_path}' '{sol_path}'";
    const SolveOutcome nofile = solve_external(m, cfg);
    CHECK(nofile.status == SolveStatus::BackendError);
    CHECK(nofile.detail.find("no solution file") != std::string::npos);
}

TEST_CASE("a pinned work dir keeps the lp and solution files") {
    const MilpModel m = cover_model();
    TempDir dir;
    BackendConfig cfg;
    cfg.command_template = testutil::fake_solver(dir, "good.sh", "status optimal\nx 1\n");
    cfg.work_dir = dir.file("scratch");
    const SolveOutcome out = solve_external(m, cfg);
    CHECK(out.status == SolveStatus::Optimal);
    CHECK(std::filesystem::exists(dir.file("scratch") / "model.lp"));
    CHECK(std::filesystem::exists(dir.file("scratch") / "model.sol"));
}

TEST_CASE("the bundled reference solver solves a real encoding") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});
    const PrefixTree tree = PrefixTree::build(s);
    const EncodingSpec spec = two_bound(2, 1, 1);
    const EncodedModel em = encode(s, tree, spec);

    BackendConfig cfg;
    cfg.command_template = testutil::external_command();
    cfg.time_limit_s = 60;
    const SolveOutcome out = solve_external(em.model, cfg);
    REQUIRE(out.status == SolveStatus::Optimal);
    REQUIRE(out.assignment);
    const Dfa dfa = decode_dfa(em, *out.assignment);
    CHECK(count_accepted(dfa, s) == 1);

    // And it proves infeasibility where no automaton fits.
    const Sample tiny = testutil::make_sample({{"a", 2}});
    const PrefixTree tiny_tree = PrefixTree::build(tiny);
    const EncodedModel inf = encode(tiny, tiny_tree, two_bound(1, 1, 1));
    CHECK(solve_external(inf.model, cfg).status == SolveStatus::Infeasible);
}
