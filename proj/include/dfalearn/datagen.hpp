#ifndef DFALEARN_DATAGEN_HPP
#define DFALEARN_DATAGEN_HPP

#include <cstdint>
#include <optional>

#include "dfalearn/automata.hpp"
#include "dfalearn/eval.hpp"

namespace dfalearn {

// Synthetic data with planted ground truth: anomalies are exactly the
// words the planted DFA accepts, normals exactly the rejected ones
// (rejection sampling enforces this).
struct GenSpec {
    Dfa planted;                      // the anomaly language
    std::optional<Dfa> normal_source; // alphabet/walk source for normals; defaults to planted
    long long n_total = 100;
    double anomaly_ratio = 0.1;
    int min_len = 1;
    int max_len = 10;
    std::uint64_t seed = 0;
};

struct GeneratedData {
    Sample train;    // unlabeled, multi-set semantics
    LabeledSet test; // labeled 20% split, stratified
};

// Deterministic given the settings. Words are uniform random symbol walks
// with a truncated geometric length distribution, filtered by the
// planted DFA's verdict until the target label is met. The anomaly count
// is round(anomaly_ratio * n_total) and the 80:20 split is stratified
// per label. Throws DegeneratePlantedDfaError when the planted DFA
// cannot produce both verdicts within the length range, and InputError
// on bad parameters.
GeneratedData generate(const GenSpec& spec);

} // namespace dfalearn

#endif
