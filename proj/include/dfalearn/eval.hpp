#ifndef DFALEARN_EVAL_HPP
#define DFALEARN_EVAL_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dfalearn/automata.hpp"
#include "dfalearn/learner.hpp"

namespace dfalearn {

// Evaluation-only labels. Anomaly is the positive class throughout: a
// word counts as predicted positive exactly when the DFA accepts it.
enum class SeqLabel { Anomaly, Normal };

struct LabeledItem {
    Word word;
    SeqLabel label;
};

using LabeledSet = std::vector<LabeledItem>;

// Sidecar label file: one item per line, "<anomaly|normal>\t<word>".
LabeledSet read_labels_file(const std::filesystem::path& path);
void write_labels_file(const LabeledSet& items, const std::filesystem::path& path);

struct Metrics {
    long long tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

enum class UnknownSymbolPolicy {
    Error,      // unknown test symbol is a hard error (default)
    RejectWord, // treat words with unknown symbols as rejected
};

// Confusion counts over per-occurrence items plus derived metrics with
// the 0/0 = 0 convention.
Metrics evaluate(const Dfa& dfa, const LabeledSet& test,
                 UnknownSymbolPolicy policy = UnknownSymbolPolicy::Error);

// Derives count bounds from an anomaly-ratio estimate: the ratio is
// rounded down and up to whole percents, then scaled by |S| with floor
// (lower) and ceil (upper). Throws InputError when the ratio is outside
// [0, 1].
std::pair<long long, long long> bounds_from_ratio(const Sample& train, double ratio);

enum class LoosenMode { TwoBound, SingleLower, SingleUpper };

// Widens bounds by round(delta * total) in the loosening direction:
// two-bound lowers the lower bound and raises the upper one (clamped to
// [0, total]); the single-bound modes move their one bound only. The
// rounding is half-up.
std::pair<long long, long long> loosen_bounds(std::pair<long long, long long> bounds, double delta,
                                              long long total, LoosenMode mode);

// One synthetic evaluation dataset: an unlabeled training multi-set, a
// labeled test split and the operating anomaly-ratio estimate.
struct SweepDataset {
    std::string goal;
    Sample train;
    LabeledSet test;
    double anomaly_ratio = 0.0;
};

struct SweepConfig {
    std::vector<LearnMode> modes = {LearnMode::TwoBound};
    std::vector<int> sizes = {2};     // used by the single-bound modes
    std::vector<double> deltas = {0}; // bound-loosening values
    RegularizerSpec regularizers;
    LearnerBackend backend;
    LearnOptions options;
};

struct SweepRow {
    std::string goal;
    std::string mode;
    int states = 0;        // learned size (two-bound) or requested size
    double bound_relax = 0.0;
    double time_s = 0.0;
    double f1 = 0.0;
    long long accepted_count = 0;
    std::string status; // ok | no-dfa-exists | error
};

// One row per (dataset, mode, delta) for two-bound and per (dataset,
// mode, size, delta) for the single-bound modes, in that canonical
// order. Learner/backend failures are recorded in the row's status, not
// raised.
std::vector<SweepRow> run_sweep(const std::vector<SweepDataset>& datasets, const SweepConfig& config);

// CSV with the exact header
// goal,mode,states,bound_relax,time_s,f1,accepted_count,status
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace dfalearn

#endif
