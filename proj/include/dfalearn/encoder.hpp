#ifndef DFALEARN_ENCODER_HPP
#define DFALEARN_ENCODER_HPP

#include <optional>
#include <vector>

#include "dfalearn/automata.hpp"
#include "dfalearn/milp.hpp"
#include "dfalearn/prefix_tree.hpp"

namespace dfalearn {

enum class LearnMode { TwoBound, SingleBoundLower, SingleBoundUpper };

std::string learn_mode_name(LearnMode mode);

// Interpretability penalty weights. Zero disables the respective term.
struct RegularizerSpec {
    Rational lambda_sink;     // weight on transitions not targeting the sink
    Rational lambda_selfloop; // weight on transitions leaving their source
    Rational lambda_parallel; // weight on distinct state pairs with an edge

    bool any() const {
        return !lambda_sink.is_zero() || !lambda_selfloop.is_zero() || !lambda_parallel.is_zero();
    }
    // Throws InputError on negative weights.
    void validate() const;
};

struct EncodingSpec {
    LearnMode mode = LearnMode::TwoBound;
    int states = 1;
    std::optional<long long> lower;
    std::optional<long long> upper;
    RegularizerSpec regularizers;
};

// Checks mode/bound coherence against the sample: two-bound needs both
// bounds with 0 <= lower <= upper <= |S|; the single-bound modes need
// their one bound within [0, |S|]; the sink regularizer needs >= 2 states.
void validate_spec(const EncodingSpec& spec, const Sample& sample);

// A MilpModel plus the bookkeeping required to map between model
// variables and automaton structure. Variable ids follow a fixed
// declaration order so the whole encoding is deterministic:
//   d_{q}_{a}_{q'}  transition indicators (q, a, q' nested loops)
//   f_{q}           final-state indicators
//   x_{v}_{q}       run indicators per prefix-tree node v
//   a_{v}_{q}       acceptance indicators per sample-word node v
//   e_{q}_{q'}      edge indicators (only when lambda_parallel > 0)
// Symbols appear in names as alphabet indices, keeping names LP-legal for
// arbitrary symbol tokens.
class EncodedModel {
public:
    MilpModel model;

    int states() const { return states_; }
    const std::vector<Symbol>& alphabet() const { return alphabet_; }
    int alphabet_size() const { return static_cast<int>(alphabet_.size()); }

    // Distinct sample words with multiplicities, ordered by prefix-tree
    // node id. This is the canonical word order used by the acceptance
    // variables and the bound sums.
    const std::vector<std::pair<Word, long long>>& words() const { return words_; }

    VarId delta_var(int q, int symbol_idx, int q_next) const;
    VarId final_var(int q) const;
    VarId run_var(int node, int q) const;
    VarId accept_var(int word_idx, int q) const;
    bool has_edge_vars() const { return edge_base_ >= 0; }
    VarId edge_var(int q, int q_next) const;

private:
    friend EncodedModel encode_automata_constraints(const Sample&, const PrefixTree&, int);
    friend void encode_bound_constraints(EncodedModel&, const EncodingSpec&);
    friend void encode_acceptance_objective(EncodedModel&, LearnMode mode);
    friend void encode_regularizers(EncodedModel&, const RegularizerSpec&, LearnMode mode);
    friend void fix_acceptance(EncodedModel&, long long k);
    friend Assignment natural_assignment(const EncodedModel&, const Dfa&);

    int states_ = 0;
    std::vector<Symbol> alphabet_;
    std::vector<std::pair<Word, long long>> words_;
    std::vector<int> word_nodes_;  // prefix-tree node per word, ascending
    std::vector<int> node_parent_; // tree topology, for natural assignments
    std::vector<int> node_symbol_;
    int delta_base_ = -1;
    int final_base_ = -1;
    int run_base_ = -1;
    int accept_base_ = -1;
    int edge_base_ = -1;
    int node_count_ = 0;
    RegularizerSpec regs_;      // captured by encode_regularizers
    bool regularized_ = false;

    LinTerm acceptance_sum() const; // sum_w S(w) * sum_q a_{w,q}
    LinTerm penalty_term() const;   // weighted regularizer penalty
};

// Structural core: one-successor rows per (q, a), one-state rows per
// prefix, the initial-state row, and run propagation rows per (non-root
// node, q, q'). Family sizes are exactly n*|alphabet|, p, 1 and
// n^2*(p-1).
EncodedModel encode_automata_constraints(const Sample& sample, const PrefixTree& tree, int n);

// Acceptance variables with their three linearization rows per (word,
// state), plus the multiplicity-weighted lower/upper bound rows demanded
// by the requested mode.
void encode_bound_constraints(EncodedModel& em, const EncodingSpec& spec);

// Objective for the single-bound modes: minimize (lower) or maximize
// (upper) the weighted acceptance sum.
void encode_acceptance_objective(EncodedModel& em, LearnMode mode);

// Regularizer constraints and penalty bookkeeping. When lambda_sink > 0
// state 1 is hard-fixed as a non-final all-self-loop sink; when
// lambda_parallel > 0 edge variables with their two linking families are
// declared. In two-bound mode the objective becomes pure penalty
// minimization; in single-bound modes the acceptance objective is kept
// (penalty optimization happens in a second phase via fix_acceptance).
// No-op when every weight is zero.
void encode_regularizers(EncodedModel& em, const RegularizerSpec& regs, LearnMode mode);

// Phase 2 of regularized single-bound learning: pins the weighted
// acceptance sum to the phase-1 optimum k and switches the objective to
// penalty minimization.
void fix_acceptance(EncodedModel& em, long long k);

// Full composition for one solve. Single-bound phase 2 is produced by
// calling fix_acceptance on a fresh encode() of the same spec.
EncodedModel encode(const Sample& sample, const PrefixTree& tree, const EncodingSpec& spec);

// Reads the transition function and final set out of a feasible
// assignment. Throws MalformedSolutionError when some (q, a) has zero or
// multiple successors asserted (a solver or tolerance fault).
Dfa decode_dfa(const EncodedModel& em, const Assignment& assignment);

// The natural interpretation of a concrete DFA: delta and f from the
// automaton, x from running each prefix, acceptance as run-hits-final,
// edges as transition-existence. Used to cross check that hand-built
// automata satisfy every encoded constraint.
Assignment natural_assignment(const EncodedModel& em, const Dfa& dfa);

// The regularizer penalty of a concrete DFA, computed directly from its
// structure (no MILP involved):
//   lambda_sink * #{(q,a) : delta(q,a) != 1}
// + lambda_selfloop * #{(q,a) : delta(q,a) != q}
// + lambda_parallel * #{(q,q') : some a has delta(q,a) = q'}
Rational penalty_value(const Dfa& dfa, const RegularizerSpec& regs);

} // namespace dfalearn

#endif
