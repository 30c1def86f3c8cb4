#include "doctest.h"

#include "dfalearn/eval.hpp"
#include "test_helpers.hpp"

using namespace dfalearn;

TEST_CASE("confusion counts treat accepted as predicted anomaly") {
    // Odd number of a's.
    const Dfa parity_a({"a", "b"}, {1, 0, 0, 1}, {false, true});
    const LabeledSet test = {
        {{"a"}, SeqLabel::Anomaly},           // accepted, anomaly: tp
        {{"a", "b"}, SeqLabel::Normal},       // accepted, normal: fp
        {{"b"}, SeqLabel::Normal},            // rejected, normal: tn
        {{"a", "a"}, SeqLabel::Anomaly},      // rejected, anomaly: fn
        {{"a", "b", "b"}, SeqLabel::Anomaly}, // accepted, anomaly: tp
    };
    const Metrics m = evaluate(parity_a, test);
    CHECK(m.tp == 2);
    CHECK(m.fp == 1);
    CHECK(m.tn == 1);
    CHECK(m.fn == 1);
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("degenerate denominators give zero, not NaN") {
    const Dfa reject_all({"a"}, {0}, {false});
    const Metrics m = evaluate(reject_all, {{{"a"}, SeqLabel::Anomaly}});
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
}

TEST_CASE("unknown symbols follow the chosen policy") {
    const Dfa accept_all({"a"}, {0}, {true});
    const LabeledSet test = {{{"z"}, SeqLabel::Anomaly}};
    CHECK_THROWS_AS(evaluate(accept_all, test, UnknownSymbolPolicy::Error), UnknownSymbolError);
    const Metrics m = evaluate(accept_all, test, UnknownSymbolPolicy::RejectWord);
    CHECK(m.fn == 1); // treated as rejected
    CHECK(m.tp == 0);
}

TEST_CASE("labels files round trip and reject malformed lines") {
    testutil::TempDir dir;
    const LabeledSet items = {
        {{"a", "b"}, SeqLabel::Anomaly},
        {{}, SeqLabel::Normal},
    };
    write_labels_file(items, dir.file("labels.tsv"));
    const LabeledSet back = read_labels_file(dir.file("labels.tsv"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].word == Word{"a", "b"});
    CHECK(back[0].label == SeqLabel::Anomaly);
    CHECK(back[1].word == Word{});
    CHECK(back[1].label == SeqLabel::Normal);

    testutil::write_text(dir.file("notab.tsv"), "anomaly a b\n");
    CHECK_THROWS_AS(read_labels_file(dir.file("notab.tsv")), InputError);
    testutil::write_text(dir.file("badlabel.tsv"), "weird\ta b\n");
    CHECK_THROWS_AS(read_labels_file(dir.file("badlabel.tsv")), InputError);
}

TEST_CASE("ratio bounds round to whole percents before scaling") {
    Sample s250;
    for (int i = 0; i < 250; ++i) s250.add({"a", std::to_string(i)}); // 250 distinct words
    CHECK(s250.total_size() == 250);
    CHECK(bounds_from_ratio(s250, 0.096) == std::pair<long long, long long>{22, 25});
    CHECK(bounds_from_ratio(s250, 0.10) == std::pair<long long, long long>{25, 25});
    CHECK(bounds_from_ratio(s250, 0.0) == std::pair<long long, long long>{0, 0});
    CHECK(bounds_from_ratio(s250, 1.0) == std::pair<long long, long long>{250, 250});

    Sample s200;
    for (int i = 0; i < 200; ++i) s200.add({"w", std::to_string(i)});
    CHECK(bounds_from_ratio(s200, 0.10) == std::pair<long long, long long>{20, 20});

    CHECK_THROWS_AS(bounds_from_ratio(s250, -0.1), InputError);
    CHECK_THROWS_AS(bounds_from_ratio(s250, 1.5), InputError);
}

TEST_CASE("loosening widens in the direction the mode allows") {
    const std::pair<long long, long long> base{22, 25};
    CHECK(loosen_bounds(base, 0.02, 250, LoosenMode::TwoBound) ==
          std::pair<long long, long long>{17, 30});
    CHECK(loosen_bounds(base, 0.02, 250, LoosenMode::SingleLower) ==
          std::pair<long long, long long>{17, 25});
    CHECK(loosen_bounds(base, 0.02, 250, LoosenMode::SingleUpper) ==
          std::pair<long long, long long>{22, 30});
    CHECK(loosen_bounds(base, 0.0, 250, LoosenMode::TwoBound) == base);
    // Clamped at the domain edges.
    CHECK(loosen_bounds({1, 249}, 0.02, 250, LoosenMode::TwoBound) ==
          std::pair<long long, long long>{0, 250});
    CHECK_THROWS_AS(loosen_bounds(base, -0.5, 250, LoosenMode::TwoBound), InputError);
}

TEST_CASE("csv output is fixed format") {
    SweepRow row;
    row.goal = "g1-parity-b";
    row.mode = "two-bound";
    row.states = 2;
    row.bound_relax = 0.02;
    row.time_s = 0.1234;
    row.f1 = 0.8;
    row.accepted_count = 27;
    row.status = "ok";
    CHECK(sweep_csv({row}) == "goal,mode,states,bound_relax,time_s,f1,accepted_count,status\n"
                              "g1-parity-b,two-bound,2,0.02,0.123,0.8000,27,ok\n");
    CHECK(sweep_csv({}) == "goal,mode,states,bound_relax,time_s,f1,accepted_count,status\n");
}

TEST_CASE("sweeps emit one row per combination in canonical order") {
    // Tiny planted dataset: anomalies are words with an odd number of
    // a's; multiplicities keep the instance oracle-sized.
    SweepDataset ds;
    ds.goal = "toy";
    ds.train = testutil::make_sample({{"a", 2}, {"a a", 9}, {"b b", 9}});
    ds.test = {{{"a"}, SeqLabel::Anomaly}, {{"a", "a"}, SeqLabel::Normal}};
    ds.anomaly_ratio = 0.1; // bounds [2, 2] on |S| = 20

    SweepConfig config;
    config.backend = testutil::enumerate_backend();
    config.modes = {LearnMode::TwoBound, LearnMode::SingleBoundLower};
    config.sizes = {2};
    config.deltas = {0.0, 0.1};

    const std::vector<SweepRow> rows = run_sweep({ds}, config);
    REQUIRE(rows.size() == 4); // two-bound x 2 deltas + single x 1 size x 2 deltas
    CHECK(rows[0].mode == "two-bound");
    CHECK(rows[0].bound_relax == 0.0);
    CHECK(rows[1].mode == "two-bound");
    CHECK(rows[1].bound_relax == 0.1);
    CHECK(rows[2].mode == "single-bound-lower");
    CHECK(rows[3].mode == "single-bound-lower");

    for (const SweepRow& row : rows) {
        CHECK(row.status == "ok");
        CHECK(row.f1 >= 0.0);
        CHECK(row.f1 <= 1.0);
        CHECK(row.goal == "toy");
    }
    // The two-bound rows report the learned size; parity needs 2 states.
    CHECK(rows[0].states == 2);
    CHECK(rows[0].accepted_count == 2);
    CHECK(rows[0].f1 == 1.0);

    SweepConfig empty_sizes = config;
    empty_sizes.sizes.clear();
    CHECK_THROWS_AS(run_sweep({ds}, empty_sizes), InputError);
    SweepConfig no_modes = config;
    no_modes.modes.clear();
    CHECK_THROWS_AS(run_sweep({ds}, no_modes), InputError);

    // Failures inside one cell stay in that row.
    SweepConfig starved = config;
    starved.modes = {LearnMode::TwoBound};
    starved.backend = testutil::enumerate_backend(1);
    const std::vector<SweepRow> failed = run_sweep({ds}, starved);
    REQUIRE(failed.size() == 2);
    CHECK(failed[0].status == "error");
}
