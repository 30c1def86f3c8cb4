#include "doctest.h"

#include "json.hpp"
#include "test_helpers.hpp"

using namespace dfalearn;
using testutil::enumerate_backend;
using testutil::external_backend;

TEST_CASE("a sample admitting no bounded acceptor is a result, not an error") {
    // {a: 2} with bounds [1, 1]: any DFA accepts either both occurrences
    // or neither, so every size is infeasible and the search stops after
    // |Pref(S)| + 1 = 3 sizes.
    const Sample s = testutil::make_sample({{"a", 2}});

    for (const LearnerBackend& backend : {enumerate_backend(), external_backend()}) {
        const LearnReport report = learn_two_bound(s, 1, 1, {}, backend);
        CHECK_FALSE(report.found());
        REQUIRE(report.sizes_tried.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(report.sizes_tried[static_cast<std::size_t>(i)].states == i + 1);
            CHECK(report.sizes_tried[static_cast<std::size_t>(i)].status == SolveStatus::Infeasible);
        }
        const auto j = nlohmann::json::parse(report.to_json());
        CHECK(j["status"] == "no-dfa-exists");
        CHECK(j["dfa"].is_null());
        CHECK(j["states"].is_null());
        CHECK(j["sizes_tried"].size() == 3);
    }
}

TEST_CASE("two bound learning returns the minimal size on both backends") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});

    for (const LearnerBackend& backend : {enumerate_backend(), external_backend()}) {
        const LearnReport report = learn_two_bound(s, 1, 1, {}, backend);
        REQUIRE(report.found());
        // One state accepts weight 0 or 3; two states are needed and enough.
        CHECK(report.dfa->state_count() == 2);
        CHECK(report.accepted_count == 1);
        CHECK(count_accepted(*report.dfa, s) == 1);
        REQUIRE(report.sizes_tried.size() == 2);
        CHECK(report.sizes_tried[0].status == SolveStatus::Infeasible);
        CHECK(report.lower == 1);
        CHECK(report.upper == 1);

        const auto j = nlohmann::json::parse(report.to_json());
        CHECK(j["status"] == "ok");
        CHECK(j["states"] == 2);
        CHECK(j["accepted_count"] == 1);
        CHECK(j["dfa"]["n"] == 2);
    }
}

TEST_CASE("trivial bounds are satisfied by a single state") {
    const Sample s = testutil::make_sample({{"a b", 2}, {"b", 1}});
    const LearnReport all = learn_two_bound(s, 3, 3, {}, enumerate_backend());
    REQUIRE(all.found());
    CHECK(all.dfa->state_count() == 1);
    CHECK(all.accepted_count == 3);

    const LearnReport none = learn_two_bound(s, 0, 0, {}, enumerate_backend());
    REQUIRE(none.found());
    CHECK(none.dfa->state_count() == 1);
    CHECK(none.accepted_count == 0);
}

TEST_CASE("bound validation happens before any solving") {
    const Sample s = testutil::make_sample({{"a", 1}});
    CHECK_THROWS_AS(learn_two_bound(s, -1, 1, {}, enumerate_backend()), InputError);
    CHECK_THROWS_AS(learn_two_bound(s, 1, 0, {}, enumerate_backend()), InputError);
    CHECK_THROWS_AS(learn_two_bound(s, 0, 2, {}, enumerate_backend()), InputError);
    LearnOptions opts;
    opts.start_size = 0;
    CHECK_THROWS_AS(learn_two_bound(s, 0, 1, {}, enumerate_backend(), opts), InputError);
    CHECK_THROWS_AS(learn_single_bound(s, LearnMode::TwoBound, 1, 1, {}, enumerate_backend()),
                    InputError);
}

TEST_CASE("single bound learning hits the oracle optimum on both backends") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});

    for (const LearnerBackend& backend : {enumerate_backend(), external_backend()}) {
        // Smallest count >= 1 at two states is 1.
        const LearnReport low = learn_single_bound(s, LearnMode::SingleBoundLower, 1, 2, {}, backend);
        REQUIRE(low.found());
        CHECK(low.accepted_count == 1);
        CHECK(low.objective_value == Rational(1));
        CHECK(low.dfa->state_count() == 2);
        CHECK(count_accepted(*low.dfa, s) == 1);

        // Largest count <= 2 at two states is 2.
        const LearnReport high = learn_single_bound(s, LearnMode::SingleBoundUpper, 2, 2, {}, backend);
        REQUIRE(high.found());
        CHECK(high.accepted_count == 2);
        CHECK(count_accepted(*high.dfa, s) == 2);
    }
}

TEST_CASE("regularized runs report and minimize the penalty") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});
    RegularizerSpec regs;
    regs.lambda_selfloop = Rational(1);

    for (const LearnerBackend& backend : {enumerate_backend(), external_backend()}) {
        const LearnReport report =
            learn_single_bound(s, LearnMode::SingleBoundLower, 1, 2, regs, backend);
        REQUIRE(report.found());
        CHECK(report.accepted_count == 1);
        REQUIRE(report.penalty_value);

        // Oracle: among two-state DFAs with count exactly 1, the fewest
        // cross transitions.
        Rational best_penalty;
        bool have = false;
        testutil::for_each_dfa(s, 2, [&](long long count, const std::vector<int>& table,
                                         const std::vector<bool>&) {
            if (count != 1) return;
            const Rational p = testutil::brute_penalty(table, 2, 2, regs);
            if (!have || p < best_penalty) {
                best_penalty = p;
                have = true;
            }
        });
        REQUIRE(have);
        CHECK(*report.penalty_value == best_penalty);
        CHECK(*report.penalty_value == penalty_value(*report.dfa, regs));
    }
}

TEST_CASE("the sink regularizer raises the starting size") {
    const Sample s = testutil::make_sample({{"a", 1}, {"b", 1}, {"a a", 1}});
    RegularizerSpec regs;
    regs.lambda_sink = Rational(1);
    const LearnReport report = learn_two_bound(s, 1, 1, regs, enumerate_backend());
    REQUIRE(report.found());
    REQUIRE_FALSE(report.sizes_tried.empty());
    CHECK(report.sizes_tried.front().states == 2); // size 1 cannot host a sink
    REQUIRE(report.penalty_value);
    // State 1 really is a sink.
    const Dfa& dfa = *report.dfa;
    CHECK_FALSE(dfa.is_final(1));
    for (int a = 0; a < dfa.alphabet_size(); ++a) CHECK(dfa.next_state(1, a) == 1);
}

TEST_CASE("backend faults surface as errors, not as results") {
    const Sample s = testutil::make_sample({{"a", 2}});
    testutil::TempDir dir;

    LearnerBackend limit;
    limit.kind = LearnerBackend::Kind::External;
    limit.external.command_template = testutil::fake_solver(dir, "limit.sh", "status limit\n");
    CHECK_THROWS_AS(learn_two_bound(s, 0, 2, {}, limit), BackendError);

    LearnerBackend broken;
    broken.kind = LearnerBackend::Kind::External;
    broken.external.command_template = testutil::fake_solver(dir, "broken.sh", "", 9);
    CHECK_THROWS_AS(learn_two_bound(s, 0, 2, {}, broken), BackendError);
    CHECK_THROWS_AS(learn_single_bound(s, LearnMode::SingleBoundLower, 0, 1, {}, broken),
                    BackendError);

    // Single-bound learning rejects a claimed infeasibility: accept-all
    // and reject-all always exist.
    LearnerBackend claims_infeasible;
    claims_infeasible.kind = LearnerBackend::Kind::External;
    claims_infeasible.external.command_template =
        testutil::fake_solver(dir, "inf.sh", "status infeasible\n");
    CHECK_THROWS_AS(learn_single_bound(s, LearnMode::SingleBoundLower, 0, 1, {}, claims_infeasible),
                    BackendError);

    LearnerBackend tiny = enumerate_backend(3);
    CHECK_THROWS_AS(learn_two_bound(s, 1, 1, {}, tiny), BudgetExceededError);
}

TEST_CASE("a limit outcome with a verified incumbent still counts for two bound search") {
    // The fake solver answers "limit" but supplies the accept-all
    // solution; the learner may use it because feasibility is all that
    // matters for the size search.
    const Sample s = testutil::make_sample({{"a", 2}});
    const PrefixTree tree = PrefixTree::build(s);
    EncodingSpec spec;
    spec.mode = LearnMode::TwoBound;
    spec.states = 1;
    spec.lower = 2;
    spec.upper = 2;
    const EncodedModel em = encode(s, tree, spec);

    // Record the natural assignment of the 1-state accept-all machine as
    // the incumbent text.
    const Dfa all({"a"}, {0}, {true});
    const Assignment a = natural_assignment(em, all);
    std::ostringstream sol;
    sol << "status limit\n";
    for (VarId v = 0; v < em.model.variable_count(); ++v) {
        sol << em.model.var_name(v) << " " << a.values[static_cast<std::size_t>(v)] << "\n";
    }

    testutil::TempDir dir;
    LearnerBackend backend;
    backend.kind = LearnerBackend::Kind::External;
    backend.external.command_template = testutil::fake_solver(dir, "incumbent.sh", sol.str());

    const LearnReport report = learn_two_bound(s, 2, 2, {}, backend);
    REQUIRE(report.found());
    CHECK(report.dfa->state_count() == 1);
    CHECK(report.accepted_count == 2);
    CHECK(report.sizes_tried.front().status == SolveStatus::LimitReached);
}

TEST_CASE("learn reports carry the backend identity") {
    const Sample s = testutil::make_sample({{"a", 1}});
    const LearnReport r1 = learn_two_bound(s, 0, 1, {}, enumerate_backend(12345));
    CHECK(r1.backend == "enumerate:budget=12345");
    const LearnReport r2 = learn_two_bound(s, 0, 1, {}, external_backend());
    CHECK(r2.backend.rfind("external:", 0) == 0);
}

TEST_CASE("exact learning reduces to two bound instances") {
    const std::vector<Word> pos = {{"a"}};
    const std::vector<Word> neg = {{"b"}};
    const ReducedInstance inst = reduce_exact_learning(pos, neg, 2);
    CHECK(inst.sample.multiplicity({"a"}) == 2); // |N| + 1
    CHECK(inst.sample.multiplicity({"b"}) == 1);
    CHECK(inst.lower == 2);
    CHECK(inst.upper == 2);
    CHECK(inst.states == 2);

    const LearnReport report = learn_two_bound(inst.sample, inst.lower, inst.upper, {},
                                               enumerate_backend());
    REQUIRE(report.found());
    CHECK(report.dfa->state_count() <= inst.states);
    CHECK(accepts(*report.dfa, {"a"}));
    CHECK_FALSE(accepts(*report.dfa, {"b"}));

    CHECK_THROWS_AS(reduce_exact_learning({{"a"}}, {{"a"}}, 1), InputError);
    CHECK_THROWS_AS(reduce_exact_learning({}, {}, 1), InputError);
    CHECK_THROWS_AS(reduce_exact_learning(pos, neg, 0), InputError);
}
