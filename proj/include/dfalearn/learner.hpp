#ifndef DFALEARN_LEARNER_HPP
#define DFALEARN_LEARNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "dfalearn/encoder.hpp"
#include "dfalearn/solver.hpp"

namespace dfalearn {

// Backend selection for a learning run.
struct LearnerBackend {
    enum class Kind { External, Enumerate };
    Kind kind = Kind::External;
    BackendConfig external;
    EnumerationConfig enumeration;

    std::string identity() const;
};

struct SizeAttempt {
    int states = 0;
    SolveStatus status = SolveStatus::BackendError;
    double wall_seconds = 0.0;
};

struct LearnReport {
    std::optional<Dfa> dfa; // absent = no DFA exists for the bounds
    std::vector<SizeAttempt> sizes_tried;
    long long accepted_count = 0;             // multiplicity-weighted, by simulation
    std::optional<Rational> objective_value;  // solver objective at the final solve
    std::optional<Rational> penalty_value;    // present when regularizers enabled
    std::string backend;
    LearnMode mode = LearnMode::TwoBound;
    std::optional<long long> lower;
    std::optional<long long> upper;

    bool found() const { return dfa.has_value(); }
    // Full machine-readable report; status field is "ok" or
    // "no-dfa-exists".
    std::string to_json() const;
};

struct LearnOptions {
    int start_size = 1; // first automaton size to try
};

// Iterative-deepening search for the minimal DFA accepting at least
// `lower` and at most `upper` weighted sample words. Sizes run from
// start_size (raised to 2 when the sink regularizer is active) up to the
// prefix-tree bound; the first feasible size wins. When every size is
// infeasible the report comes back without a DFA: that outcome is a
// result, not an error.
LearnReport learn_two_bound(const Sample& sample, long long lower, long long upper,
                            const RegularizerSpec& regs = {}, const LearnerBackend& backend = {},
                            const LearnOptions& options = {});

// Fixed-size optimization: at exactly `states` states, minimize the
// weighted accepted count subject to count >= bound
// (SingleBoundLower) or maximize it subject to count <= bound
// (SingleBoundUpper). With regularizers enabled a second phase pins the
// optimal count and minimizes the penalty. Always feasible (accept-all /
// reject-all witnesses), so an infeasible status is surfaced as a
// backend fault.
LearnReport learn_single_bound(const Sample& sample, LearnMode mode, long long bound, int states,
                               const RegularizerSpec& regs = {}, const LearnerBackend& backend = {});

// Exact-learning instance translated into a two-bound instance: words of
// P occur |N|+1 times, words of N once, and the bounds pin the accepted
// weight to |P|*(|N|+1). A DFA of the returned size solves the instance
// iff it accepts all of P and rejects all of N.
struct ReducedInstance {
    Sample sample;
    long long lower = 0;
    long long upper = 0;
    int states = 1;
};

ReducedInstance reduce_exact_learning(const std::vector<Word>& positives,
                                      const std::vector<Word>& negatives, int k);

} // namespace dfalearn

#endif
