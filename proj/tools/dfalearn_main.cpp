#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dfalearn/datagen.hpp"
#include "dfalearn/eval.hpp"
#include "dfalearn/learner.hpp"

namespace fs = std::filesystem;
using namespace dfalearn;

namespace {

fs::path executable_dir(const char* argv0) {
    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) return exe.parent_path();
    fs::path fallback(argv0);
    return fallback.has_parent_path() ? fallback.parent_path() : fs::current_path();
}

std::string default_backend_cmd(const char* argv0) {
    const fs::path script = executable_dir(argv0) / "milp_solve.py";
    return "python3 '" + script.string() + "' {lp_path} {sol_path} {time_limit} {seed}";
}

struct BackendFlags {
    std::string backend = "external";
    std::string backend_cmd; // empty: bundled reference solver
    double time_limit = 100.0;
    long long budget = 10'000'000;
    long long seed = 0;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& flags) {
    cmd->add_option("--backend", flags.backend, "Solver backend")
        ->check(CLI::IsMember({"external", "enumerate"}))
        ->capture_default_str();
    cmd->add_option("--backend-cmd", flags.backend_cmd,
                    "External solver command template with {lp_path} {sol_path} {time_limit} {seed} "
                    "placeholders (default: bundled milp_solve.py)");
    cmd->add_option("--time-limit", flags.time_limit, "External solver work limit in seconds")
        ->capture_default_str();
    cmd->add_option("--budget", flags.budget, "Enumeration backend candidate budget")
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "Random seed (default 0)")->capture_default_str();
}

LearnerBackend make_backend(const BackendFlags& flags, const char* argv0) {
    LearnerBackend backend;
    if (flags.backend == "enumerate") {
        backend.kind = LearnerBackend::Kind::Enumerate;
        backend.enumeration.budget = flags.budget;
    } else {
        backend.kind = LearnerBackend::Kind::External;
        backend.external.command_template =
            flags.backend_cmd.empty() ? default_backend_cmd(argv0) : flags.backend_cmd;
        backend.external.time_limit_s = flags.time_limit;
        backend.external.seed = flags.seed;
    }
    return backend;
}

struct LambdaFlags {
    std::string sink = "0";
    std::string selfloop = "0";
    std::string parallel = "0";
    bool sink_on = false;
    bool selfloop_on = false;
    bool parallel_on = false;
};

void add_lambda_flags(CLI::App* cmd, LambdaFlags& flags) {
    cmd->add_option("--lambda-sink", flags.sink, "Sink-state penalty weight (0 disables)")
        ->capture_default_str();
    cmd->add_option("--lambda-selfloop", flags.selfloop, "Self-loop penalty weight (0 disables)")
        ->capture_default_str();
    cmd->add_option("--lambda-parallel", flags.parallel, "Parallel-edge penalty weight (0 disables)")
        ->capture_default_str();
    cmd->add_flag("--sink", flags.sink_on, "Enable the sink-state regularizer at weight 1");
    cmd->add_flag("--selfloops", flags.selfloop_on, "Enable the self-loop regularizer at weight 1");
    cmd->add_flag("--parallel-edges", flags.parallel_on,
                  "Enable the parallel-edge regularizer at weight 1");
}

RegularizerSpec make_regularizers(const LambdaFlags& flags) {
    RegularizerSpec regs;
    regs.lambda_sink = Rational::from_decimal(flags.sink);
    regs.lambda_selfloop = Rational::from_decimal(flags.selfloop);
    regs.lambda_parallel = Rational::from_decimal(flags.parallel);
    if (flags.sink_on && regs.lambda_sink.is_zero()) regs.lambda_sink = Rational(1);
    if (flags.selfloop_on && regs.lambda_selfloop.is_zero()) regs.lambda_selfloop = Rational(1);
    if (flags.parallel_on && regs.lambda_parallel.is_zero()) regs.lambda_parallel = Rational(1);
    regs.validate();
    return regs;
}

LearnMode parse_mode(const std::string& name) {
    if (name == "two-bound") return LearnMode::TwoBound;
    if (name == "single-bound-lower") return LearnMode::SingleBoundLower;
    if (name == "single-bound-upper") return LearnMode::SingleBoundUpper;
    throw UsageError("unknown mode: " + name);
}

Dfa make_preset(const std::string& name) {
    const std::vector<Symbol> ab = {"a", "b"};
    if (name == "parity-a") return Dfa(ab, {1, 0, 0, 1}, {false, true});
    if (name == "parity-b") return Dfa(ab, {0, 1, 1, 0}, {false, true});
    if (name == "ends-a") return Dfa(ab, {1, 0, 1, 0}, {false, true});
    if (name == "ends-b") return Dfa(ab, {0, 1, 0, 1}, {false, true});
    if (name == "parity-len") return Dfa(ab, {1, 1, 0, 0}, {false, true});
    if (name == "contains-a") return Dfa(ab, {1, 0, 1, 1}, {false, true});
    if (name == "contains-b") return Dfa(ab, {0, 1, 1, 1}, {false, true});
    throw UsageError("unknown preset: " + name);
}

const std::vector<std::string> kPresetNames = {"parity-a",   "parity-b",   "ends-a",    "ends-b",
                                               "parity-len", "contains-a", "contains-b"};

// Portfolio used by the sweep subcommand: seven planted 2-state
// detectors at dataset sizes spread over a realistic range.
const std::vector<long long> kSweepTotals = {250, 274, 298, 312, 336, 352, 370};

struct LearnArgs {
    std::string sample_path;
    std::string mode = "two-bound";
    long long lower = 0, upper = 0;
    int states = 0;
    int start_size = 1;
    std::string out_dir = ".";
    BackendFlags backend;
    LambdaFlags lambdas;
    CLI::Option* lower_opt = nullptr;
    CLI::Option* upper_opt = nullptr;
    CLI::Option* states_opt = nullptr;
};

int cmd_learn(const LearnArgs& args, const char* argv0) {
    const LearnMode mode = parse_mode(args.mode);
    const bool have_lower = args.lower_opt->count() > 0;
    const bool have_upper = args.upper_opt->count() > 0;
    const bool have_states = args.states_opt->count() > 0;
    switch (mode) {
    case LearnMode::TwoBound:
        if (!have_lower || !have_upper) throw UsageError("two-bound mode needs --lower and --upper");
        if (have_states) throw UsageError("--states conflicts with two-bound mode (size is searched)");
        break;
    case LearnMode::SingleBoundLower:
        if (!have_lower || have_upper) throw UsageError("single-bound-lower mode needs --lower only");
        if (!have_states) throw UsageError("single-bound modes need --states");
        break;
    case LearnMode::SingleBoundUpper:
        if (!have_upper || have_lower) throw UsageError("single-bound-upper mode needs --upper only");
        if (!have_states) throw UsageError("single-bound modes need --states");
        break;
    }

    const Sample sample = Sample::read_file(args.sample_path);
    const RegularizerSpec regs = make_regularizers(args.lambdas);
    const LearnerBackend backend = make_backend(args.backend, argv0);

    LearnReport report;
    if (mode == LearnMode::TwoBound) {
        LearnOptions options;
        options.start_size = args.start_size;
        report = learn_two_bound(sample, args.lower, args.upper, regs, backend, options);
    } else {
        const long long bound = mode == LearnMode::SingleBoundLower ? args.lower : args.upper;
        report = learn_single_bound(sample, mode, bound, args.states, regs, backend);
    }

    fs::create_directories(args.out_dir);
    {
        std::ofstream out(fs::path(args.out_dir) / "report.json");
        out << report.to_json();
    }
    if (!report.found()) {
        std::cout << "no DFA exists for bounds [" << args.lower << ", " << args.upper << "]; tried "
                  << report.sizes_tried.size() << " sizes\n";
        return 3;
    }
    write_dfa_file(*report.dfa, fs::path(args.out_dir) / "dfa.json");
    {
        std::ofstream out(fs::path(args.out_dir) / "dfa.dot");
        out << to_dot(*report.dfa);
    }
    std::cout << "learned " << report.dfa->state_count() << "-state DFA, accepted_count="
              << report.accepted_count << " (artifacts in " << args.out_dir << ")\n";
    return 0;
}

struct ExportArgs {
    std::string sample_path;
    std::string mode = "two-bound";
    long long lower = 0, upper = 0;
    int states = 0;
    std::string out = "-";
    LambdaFlags lambdas;
    CLI::Option* lower_opt = nullptr;
    CLI::Option* upper_opt = nullptr;
};

int cmd_export_lp(const ExportArgs& args) {
    if (args.states < 1) throw UsageError("--states must be at least 1");
    const LearnMode mode = parse_mode(args.mode);
    const Sample sample = Sample::read_file(args.sample_path);
    const PrefixTree tree = PrefixTree::build(sample);

    EncodingSpec spec;
    spec.mode = mode;
    spec.states = args.states;
    spec.regularizers = make_regularizers(args.lambdas);
    if (args.lower_opt->count() > 0) spec.lower = args.lower;
    if (args.upper_opt->count() > 0) spec.upper = args.upper;

    const std::string text = write_lp(encode(sample, tree, spec).model);
    if (args.out == "-") {
        std::cout << text;
    } else {
        std::ofstream out(args.out);
        if (!out) throw InputError("cannot write LP file: " + args.out);
        out << text;
    }
    return 0;
}

struct EvalArgs {
    std::string dfa_path;
    std::string labels_path;
    std::string unknown = "error";
    std::string out;
};

int cmd_eval(const EvalArgs& args) {
    const Dfa dfa = read_dfa_file(args.dfa_path);
    const LabeledSet test = read_labels_file(args.labels_path);
    const UnknownSymbolPolicy policy =
        args.unknown == "reject" ? UnknownSymbolPolicy::RejectWord : UnknownSymbolPolicy::Error;
    const Metrics m = evaluate(dfa, test, policy);

    nlohmann::json j = {{"tp", m.tp},           {"fp", m.fp},     {"tn", m.tn},
                        {"fn", m.fn},           {"precision", m.precision},
                        {"recall", m.recall},   {"f1", m.f1}};
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw InputError("cannot write metrics file: " + args.out);
        out << j.dump(2) << "\n";
    }
    std::cout << "precision=" << m.precision << " recall=" << m.recall << " f1=" << m.f1 << "\n";
    return 0;
}

struct GenArgs {
    std::string preset = "parity-b";
    std::string planted_json;
    long long n_total = 100;
    double ratio = 0.1;
    int min_len = 1;
    int max_len = 10;
    long long seed = 0;
    std::string out_dir = ".";
};

int cmd_gen(const GenArgs& args) {
    GenSpec spec{args.planted_json.empty() ? make_preset(args.preset) : read_dfa_file(args.planted_json),
                 std::nullopt,
                 args.n_total,
                 args.ratio,
                 args.min_len,
                 args.max_len,
                 static_cast<std::uint64_t>(args.seed)};
    const GeneratedData data = generate(spec);

    fs::create_directories(args.out_dir);
    data.train.write_file(fs::path(args.out_dir) / "train.txt");
    write_labels_file(data.test, fs::path(args.out_dir) / "test_labels.tsv");
    write_dfa_file(spec.planted, fs::path(args.out_dir) / "planted.json");
    std::cout << "generated train |S|=" << data.train.total_size() << ", test items=" << data.test.size()
              << " (files in " << args.out_dir << ")\n";
    return 0;
}

struct SweepArgs {
    int goals = 7;
    long long n_total = 0; // 0: per-goal portfolio sizes
    double ratio = 0.1;
    int min_len = 5;
    int max_len = 12;
    std::vector<std::string> modes = {"two-bound"};
    std::vector<int> sizes = {2};
    std::vector<double> deltas = {0.0};
    int start_size = 1;
    std::string out = "sweep.csv";
    BackendFlags backend;
    LambdaFlags lambdas;
};

int cmd_sweep(const SweepArgs& args, const char* argv0) {
    if (args.goals < 1) throw UsageError("--goals must be at least 1");

    std::vector<SweepDataset> datasets;
    for (int i = 0; i < args.goals; ++i) {
        const std::string preset = kPresetNames[static_cast<std::size_t>(i) % kPresetNames.size()];
        GenSpec spec{make_preset(preset),
                     std::nullopt,
                     args.n_total > 0 ? args.n_total
                                      : kSweepTotals[static_cast<std::size_t>(i) % kSweepTotals.size()],
                     args.ratio,
                     args.min_len,
                     args.max_len,
                     static_cast<std::uint64_t>(args.backend.seed + i)};
        GeneratedData data = generate(spec);
        datasets.push_back({"g" + std::to_string(i + 1) + "-" + preset, std::move(data.train),
                            std::move(data.test), args.ratio});
    }

    SweepConfig config;
    config.modes.clear();
    for (const std::string& m : args.modes) config.modes.push_back(parse_mode(m));
    config.sizes = args.sizes;
    config.deltas = args.deltas;
    config.regularizers = make_regularizers(args.lambdas);
    config.backend = make_backend(args.backend, argv0);
    config.options.start_size = args.start_size;

    const std::vector<SweepRow> rows = run_sweep(datasets, config);
    const std::string csv = sweep_csv(rows);
    std::ofstream out(args.out);
    if (!out) throw InputError("cannot write CSV file: " + args.out);
    out << csv;
    std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-DFA anomaly detectors via integer programming"};
    app.require_subcommand(1);

    LearnArgs learn_args;
    CLI::App* learn = app.add_subcommand("learn", "Learn a DFA from an unlabeled sample");
    learn->add_option("--sample", learn_args.sample_path, "Sample file (one word per line)")->required();
    learn->add_option("--mode", learn_args.mode, "Learning mode")
        ->check(CLI::IsMember({"two-bound", "single-bound-lower", "single-bound-upper"}))
        ->capture_default_str();
    learn_args.lower_opt = learn->add_option("--lower", learn_args.lower, "Lower acceptance bound");
    learn_args.upper_opt = learn->add_option("--upper", learn_args.upper, "Upper acceptance bound");
    learn_args.states_opt =
        learn->add_option("--states", learn_args.states, "Automaton size (single-bound modes)");
    learn->add_option("--start-size", learn_args.start_size, "First size tried in two-bound mode")
        ->capture_default_str();
    learn->add_option("--out-dir", learn_args.out_dir, "Output directory")->capture_default_str();
    add_lambda_flags(learn, learn_args.lambdas);
    add_backend_flags(learn, learn_args.backend);

    ExportArgs export_args;
    CLI::App* export_lp = app.add_subcommand("export-lp", "Encode one instance and print the LP");
    export_lp->add_option("--sample", export_args.sample_path, "Sample file")->required();
    export_lp->add_option("--mode", export_args.mode, "Learning mode")
        ->check(CLI::IsMember({"two-bound", "single-bound-lower", "single-bound-upper"}))
        ->capture_default_str();
    export_args.lower_opt = export_lp->add_option("--lower", export_args.lower, "Lower bound");
    export_args.upper_opt = export_lp->add_option("--upper", export_args.upper, "Upper bound");
    export_lp->add_option("--states", export_args.states, "Automaton size")->required();
    export_lp->add_option("--out", export_args.out, "Output file, - for stdout")->capture_default_str();
    add_lambda_flags(export_lp, export_args.lambdas);

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score a DFA against labeled sequences");
    eval_cmd->add_option("--dfa", eval_args.dfa_path, "DFA JSON file")->required();
    eval_cmd->add_option("--labels", eval_args.labels_path, "Labels file (label<TAB>word)")->required();
    eval_cmd->add_option("--unknown", eval_args.unknown, "Unknown-symbol policy")
        ->check(CLI::IsMember({"error", "reject"}))
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_args.out, "Metrics JSON output path");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic dataset with planted ground truth");
    gen->add_option("--preset", gen_args.preset, "Planted detector preset")
        ->check(CLI::IsMember(kPresetNames))
        ->capture_default_str();
    gen->add_option("--planted-json", gen_args.planted_json, "Planted DFA JSON (overrides --preset)");
    gen->add_option("--n-total", gen_args.n_total, "Total sequence count")->capture_default_str();
    gen->add_option("--ratio", gen_args.ratio, "Anomaly ratio")->capture_default_str();
    gen->add_option("--min-len", gen_args.min_len, "Minimum word length")->capture_default_str();
    gen->add_option("--max-len", gen_args.max_len, "Maximum word length")->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "Random seed (default 0)")->capture_default_str();
    gen->add_option("--out-dir", gen_args.out_dir, "Output directory")->capture_default_str();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Run the benchmark protocol and write a CSV");
    sweep->add_option("--goals", sweep_args.goals, "Number of planted datasets")->capture_default_str();
    sweep->add_option("--n-total", sweep_args.n_total, "Override per-goal dataset size");
    sweep->add_option("--ratio", sweep_args.ratio, "Anomaly ratio")->capture_default_str();
    sweep->add_option("--min-len", sweep_args.min_len, "Minimum word length")->capture_default_str();
    sweep->add_option("--max-len", sweep_args.max_len, "Maximum word length")->capture_default_str();
    sweep->add_option("--modes", sweep_args.modes, "Learning modes to run")
        ->check(CLI::IsMember({"two-bound", "single-bound-lower", "single-bound-upper"}))
        ->capture_default_str();
    sweep->add_option("--sizes", sweep_args.sizes, "Sizes for the single-bound modes")
        ->capture_default_str();
    sweep->add_option("--deltas", sweep_args.deltas, "Bound-loosening deltas")->capture_default_str();
    sweep->add_option("--start-size", sweep_args.start_size, "First size tried in two-bound mode")
        ->capture_default_str();
    sweep->add_option("--out", sweep_args.out, "CSV output path")->capture_default_str();
    add_lambda_flags(sweep, sweep_args.lambdas);
    add_backend_flags(sweep, sweep_args.backend);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*learn) return cmd_learn(learn_args, argv[0]);
        if (*export_lp) return cmd_export_lp(export_args);
        if (*eval_cmd) return cmd_eval(eval_args);
        if (*gen) return cmd_gen(gen_args);
        if (*sweep) return cmd_sweep(sweep_args, argv[0]);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
