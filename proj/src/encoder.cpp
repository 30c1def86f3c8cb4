#include "dfalearn/encoder.hpp"

#include <algorithm>

namespace dfalearn {

std::string learn_mode_name(LearnMode mode) {
    switch (mode) {
    case LearnMode::TwoBound: return "two-bound";
    case LearnMode::SingleBoundLower: return "single-bound-lower";
    case LearnMode::SingleBoundUpper: return "single-bound-upper";
    }
    return "unknown";
}

void RegularizerSpec::validate() const {
    if (lambda_sink < Rational(0) || lambda_selfloop < Rational(0) || lambda_parallel < Rational(0)) {
        throw InputError("regularizer weights must be non-negative");
    }
}

void validate_spec(const EncodingSpec& spec, const Sample& sample) {
    if (spec.states < 1) throw InputError("state count must be at least 1");
    spec.regularizers.validate();
    if (!spec.regularizers.lambda_sink.is_zero() && spec.states < 2) {
        throw InputError("sink-state regularizer requires at least two states");
    }
    const long long total = sample.total_size();
    auto check_range = [&](long long v, const char* which) {
        if (v < 0 || v > total) {
            throw InputError(std::string(which) + " bound " + std::to_string(v) +
                             " outside [0, |S|=" + std::to_string(total) + "]");
        }
    };
    switch (spec.mode) {
    case LearnMode::TwoBound:
        if (!spec.lower || !spec.upper) throw InputError("two-bound mode needs both bounds");
        check_range(*spec.lower, "lower");
        check_range(*spec.upper, "upper");
        if (*spec.lower > *spec.upper) throw InputError("lower bound exceeds upper bound");
        break;
    case LearnMode::SingleBoundLower:
        if (!spec.lower) throw InputError("single-bound-lower mode needs a lower bound");
        check_range(*spec.lower, "lower");
        break;
    case LearnMode::SingleBoundUpper:
        if (!spec.upper) throw InputError("single-bound-upper mode needs an upper bound");
        check_range(*spec.upper, "upper");
        break;
    }
}

VarId EncodedModel::delta_var(int q, int symbol_idx, int q_next) const {
    const int n = states_;
    const int s = alphabet_size();
    return delta_base_ + (q * s + symbol_idx) * n + q_next;
}

VarId EncodedModel::final_var(int q) const { return final_base_ + q; }

VarId EncodedModel::run_var(int node, int q) const { return run_base_ + node * states_ + q; }

VarId EncodedModel::accept_var(int word_idx, int q) const { return accept_base_ + word_idx * states_ + q; }

VarId EncodedModel::edge_var(int q, int q_next) const {
    if (edge_base_ < 0) throw ModelError("edge variables were not declared");
    return edge_base_ + q * states_ + q_next;
}

LinTerm EncodedModel::acceptance_sum() const {
    LinTermBuilder b;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        const Rational mult(words_[w].second);
        for (int q = 0; q < states_; ++q) {
            b.add(mult, accept_var(static_cast<int>(w), q));
        }
    }
    return b.build();
}

LinTerm EncodedModel::penalty_term() const {
    const int n = states_;
    const int s = alphabet_size();
    LinTermBuilder b;
    if (!regs_.lambda_sink.is_zero()) {
        // lambda_s * sum_{q,a} (1 - delta_{q,a,q1})
        b.add_constant(regs_.lambda_sink * Rational(static_cast<long long>(n) * s));
        for (int q = 0; q < n; ++q) {
            for (int a = 0; a < s; ++a) {
                b.add(-regs_.lambda_sink, delta_var(q, a, 1));
            }
        }
    }
    if (!regs_.lambda_selfloop.is_zero()) {
        for (int q = 0; q < n; ++q) {
            for (int a = 0; a < s; ++a) {
                for (int q2 = 0; q2 < n; ++q2) {
                    if (q2 != q) b.add(regs_.lambda_selfloop, delta_var(q, a, q2));
                }
            }
        }
    }
    if (!regs_.lambda_parallel.is_zero()) {
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                b.add(regs_.lambda_parallel, edge_var(q, q2));
            }
        }
    }
    return b.build();
}

EncodedModel encode_automata_constraints(const Sample& sample, const PrefixTree& tree, int n) {
    if (n < 1) throw InputError("state count must be at least 1");
    EncodedModel em;
    em.states_ = n;
    em.alphabet_ = sample.alphabet();
    const int s = em.alphabet_size();
    const int p = tree.node_count();
    em.node_count_ = p;
    em.node_parent_.resize(static_cast<std::size_t>(p));
    em.node_symbol_.resize(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        em.node_parent_[static_cast<std::size_t>(v)] = tree.parent(v);
        em.node_symbol_[static_cast<std::size_t>(v)] = tree.incoming_symbol(v);
    }

    // Canonical word order: ascending prefix-tree node id.
    std::vector<std::pair<int, const Word*>> order;
    for (const auto& [w, count] : sample.entries()) {
        (void)count;
        order.emplace_back(tree.node_of(w), &w);
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [node, wptr] : order) {
        if (node < 0) throw InputError("prefix tree does not match the sample");
        em.word_nodes_.push_back(node);
        em.words_.emplace_back(*wptr, sample.multiplicity(*wptr));
    }

    MilpModel& m = em.model;
    em.delta_base_ = 0;
    for (int q = 0; q < n; ++q) {
        for (int a = 0; a < s; ++a) {
            for (int q2 = 0; q2 < n; ++q2) {
                m.add_var("d_" + std::to_string(q) + "_" + std::to_string(a) + "_" + std::to_string(q2),
                          VarKind::Transition);
            }
        }
    }
    em.final_base_ = m.variable_count();
    for (int q = 0; q < n; ++q) m.add_var("f_" + std::to_string(q), VarKind::Final);
    em.run_base_ = m.variable_count();
    for (int v = 0; v < p; ++v) {
        for (int q = 0; q < n; ++q) {
            m.add_var("x_" + std::to_string(v) + "_" + std::to_string(q), VarKind::RunState);
        }
    }

    // Exactly one successor per (state, symbol).
    for (int q = 0; q < n; ++q) {
        for (int a = 0; a < s; ++a) {
            LinTermBuilder b;
            for (int q2 = 0; q2 < n; ++q2) b.add(Rational(1), em.delta_var(q, a, q2));
            m.add_constraint("one_succ", b.build(), Relation::Equal, Rational(1));
        }
    }
    // Each prefix is read in exactly one state.
    for (int v = 0; v < p; ++v) {
        LinTermBuilder b;
        for (int q = 0; q < n; ++q) b.add(Rational(1), em.run_var(v, q));
        m.add_constraint("one_state", b.build(), Relation::Equal, Rational(1));
    }
    // The empty prefix is read in the initial state.
    {
        LinTermBuilder b;
        b.add(Rational(1), em.run_var(PrefixTree::root(), 0));
        m.add_constraint("init", b.build(), Relation::Equal, Rational(1));
    }
    // Run propagation: reading prefix w in q and taking delta(q,a)=q'
    // forces prefix wa to be read in q'.
    for (int v = 1; v < p; ++v) {
        const int parent = tree.parent(v);
        const int a = tree.incoming_symbol(v);
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                LinTermBuilder b;
                b.add(Rational(1), em.run_var(parent, q));
                b.add(Rational(1), em.delta_var(q, a, q2));
                b.add(Rational(-1), em.run_var(v, q2));
                m.add_constraint("run", b.build(), Relation::LessEq, Rational(1));
            }
        }
    }
    return em;
}

void encode_bound_constraints(EncodedModel& em, const EncodingSpec& spec) {
    MilpModel& m = em.model;
    const int n = em.states();

    em.accept_base_ = m.variable_count();
    for (std::size_t w = 0; w < em.words_.size(); ++w) {
        const int node = em.word_nodes_[w];
        for (int q = 0; q < n; ++q) {
            m.add_var("a_" + std::to_string(node) + "_" + std::to_string(q), VarKind::Acceptance);
        }
    }

    // Linearize a_{w,q} = x_{w,q} AND f_q.
    for (std::size_t w = 0; w < em.words_.size(); ++w) {
        const int node = em.word_nodes_[w];
        for (int q = 0; q < n; ++q) {
            const VarId acc = em.accept_var(static_cast<int>(w), q);
            const VarId x = em.run_var(node, q);
            const VarId f = em.final_var(q);
            {
                LinTermBuilder b;
                b.add(Rational(1), acc).add(Rational(-1), x).add(Rational(-1), f);
                m.add_constraint("accept_lin", b.build(), Relation::GreaterEq, Rational(-1));
            }
            {
                LinTermBuilder b;
                b.add(Rational(1), acc).add(Rational(-1), x);
                m.add_constraint("accept_lin", b.build(), Relation::LessEq, Rational(0));
            }
            {
                LinTermBuilder b;
                b.add(Rational(1), acc).add(Rational(-1), f);
                m.add_constraint("accept_lin", b.build(), Relation::LessEq, Rational(0));
            }
        }
    }

    const LinTerm acceptance = em.acceptance_sum();
    const bool want_lower =
        spec.mode == LearnMode::TwoBound || spec.mode == LearnMode::SingleBoundLower;
    const bool want_upper =
        spec.mode == LearnMode::TwoBound || spec.mode == LearnMode::SingleBoundUpper;
    if (want_lower) {
        m.add_constraint("lb", acceptance, Relation::GreaterEq, Rational(*spec.lower));
    }
    if (want_upper) {
        m.add_constraint("ub", acceptance, Relation::LessEq, Rational(*spec.upper));
    }
}

void encode_acceptance_objective(EncodedModel& em, LearnMode mode) {
    const Sense sense = mode == LearnMode::SingleBoundUpper ? Sense::Maximize : Sense::Minimize;
    em.model.set_objective(em.acceptance_sum(), sense);
}

void encode_regularizers(EncodedModel& em, const RegularizerSpec& regs, LearnMode mode) {
    regs.validate();
    if (!regs.any()) return;
    MilpModel& m = em.model;
    const int n = em.states();
    const int s = em.alphabet_size();

    if (!regs.lambda_sink.is_zero()) {
        if (n < 2) throw InputError("sink-state regularizer requires at least two states");
        // State 1 is the sink: non-final, all transitions loop on it.
        for (int a = 0; a < s; ++a) {
            LinTermBuilder b;
            b.add(Rational(1), em.delta_var(1, a, 1));
            m.add_constraint("sink_fix", b.build(), Relation::Equal, Rational(1));
        }
        LinTermBuilder b;
        b.add(Rational(1), em.final_var(1));
        m.add_constraint("sink_fix", b.build(), Relation::Equal, Rational(0));
    }

    if (!regs.lambda_parallel.is_zero()) {
        em.edge_base_ = m.variable_count();
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                m.add_var("e_" + std::to_string(q) + "_" + std::to_string(q2), VarKind::Edge);
            }
        }
        // e_{q,q'} = 1 iff some symbol moves q to q'.
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                LinTermBuilder b;
                b.add(Rational(1), em.edge_var(q, q2));
                for (int a = 0; a < s; ++a) b.add(Rational(-1), em.delta_var(q, a, q2));
                m.add_constraint("edge_ub", b.build(), Relation::LessEq, Rational(0));
            }
        }
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                for (int a = 0; a < s; ++a) {
                    LinTermBuilder b;
                    b.add(Rational(1), em.edge_var(q, q2));
                    b.add(Rational(-1), em.delta_var(q, a, q2));
                    m.add_constraint("edge_lb", b.build(), Relation::GreaterEq, Rational(0));
                }
            }
        }
    }

    em.regs_ = regs;
    em.regularized_ = true;

    // Two-bound learning has no competing objective, so the penalty takes
    // its place outright. The single-bound modes keep their acceptance
    // objective here; fix_acceptance installs the penalty in phase 2.
    if (mode == LearnMode::TwoBound) {
        em.model.set_objective(em.penalty_term(), Sense::Minimize);
    }
}

void fix_acceptance(EncodedModel& em, long long k) {
    em.model.add_constraint("fix_acc", em.acceptance_sum(), Relation::Equal, Rational(k));
    em.model.set_objective(em.penalty_term(), Sense::Minimize);
}

EncodedModel encode(const Sample& sample, const PrefixTree& tree, const EncodingSpec& spec) {
    validate_spec(spec, sample);
    EncodedModel em = encode_automata_constraints(sample, tree, spec.states);
    encode_bound_constraints(em, spec);
    if (spec.mode != LearnMode::TwoBound) {
        encode_acceptance_objective(em, spec.mode);
    } else {
        LinTermBuilder b;
        b.add_constant(Rational(1));
        em.model.set_objective(b.build(), Sense::Minimize);
    }
    encode_regularizers(em, spec.regularizers, spec.mode);
    return em;
}

Dfa decode_dfa(const EncodedModel& em, const Assignment& assignment) {
    const int n = em.states();
    const int s = em.alphabet_size();
    if (assignment.values.size() != static_cast<std::size_t>(em.model.variable_count())) {
        throw MalformedSolutionError("assignment does not cover the model");
    }
    std::vector<int> transitions(static_cast<std::size_t>(n) * static_cast<std::size_t>(s), -1);
    for (int q = 0; q < n; ++q) {
        for (int a = 0; a < s; ++a) {
            int target = -1;
            for (int q2 = 0; q2 < n; ++q2) {
                if (assignment.values[static_cast<std::size_t>(em.delta_var(q, a, q2))] == 1) {
                    if (target != -1) {
                        throw MalformedSolutionError("state " + std::to_string(q) +
                                                     " has multiple successors on symbol index " +
                                                     std::to_string(a));
                    }
                    target = q2;
                }
            }
            if (target == -1) {
                throw MalformedSolutionError("state " + std::to_string(q) +
                                             " has no successor on symbol index " + std::to_string(a));
            }
            transitions[static_cast<std::size_t>(q) * static_cast<std::size_t>(s) +
                        static_cast<std::size_t>(a)] = target;
        }
    }
    std::vector<bool> finals(static_cast<std::size_t>(n), false);
    for (int q = 0; q < n; ++q) {
        finals[static_cast<std::size_t>(q)] =
            assignment.values[static_cast<std::size_t>(em.final_var(q))] == 1;
    }
    return Dfa(em.alphabet(), std::move(transitions), std::move(finals));
}

Assignment natural_assignment(const EncodedModel& em, const Dfa& dfa) {
    if (dfa.state_count() != em.states() || dfa.alphabet() != em.alphabet()) {
        throw ModelError("DFA shape does not match the encoded model");
    }
    const int n = em.states();
    const int s = em.alphabet_size();
    Assignment a;
    a.values.assign(static_cast<std::size_t>(em.model.variable_count()), 0);
    auto set = [&](VarId v) { a.values[static_cast<std::size_t>(v)] = 1; };

    for (int q = 0; q < n; ++q) {
        for (int sym = 0; sym < s; ++sym) set(em.delta_var(q, sym, dfa.next_state(q, sym)));
        if (dfa.is_final(q)) set(em.final_var(q));
    }

    // State reached at every prefix-tree node. Node ids are breadth
    // first, so a parent always precedes its children.
    std::vector<int> node_state(static_cast<std::size_t>(em.node_count_), 0);
    set(em.run_var(0, 0));
    for (int v = 1; v < em.node_count_; ++v) {
        const int parent = em.node_parent_[static_cast<std::size_t>(v)];
        const int sym = em.node_symbol_[static_cast<std::size_t>(v)];
        const int q = dfa.next_state(node_state[static_cast<std::size_t>(parent)], sym);
        node_state[static_cast<std::size_t>(v)] = q;
        set(em.run_var(v, q));
    }

    // Acceptance indicators: reached-final conjunction per sample word.
    if (em.accept_base_ >= 0) {
        for (std::size_t w = 0; w < em.words_.size(); ++w) {
            const int q = node_state[static_cast<std::size_t>(em.word_nodes_[w])];
            if (dfa.is_final(q)) set(em.accept_var(static_cast<int>(w), q));
        }
    }

    if (em.has_edge_vars()) {
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                for (int sym = 0; sym < s; ++sym) {
                    if (dfa.next_state(q, sym) == q2) {
                        set(em.edge_var(q, q2));
                        break;
                    }
                }
            }
        }
    }

    a.objective_value = evaluate(em.model.objective(), a.values);
    return a;
}

Rational penalty_value(const Dfa& dfa, const RegularizerSpec& regs) {
    regs.validate();
    Rational total(0);
    const int n = dfa.state_count();
    const int s = dfa.alphabet_size();
    if (!regs.lambda_sink.is_zero()) {
        long long miss = 0;
        for (int q = 0; q < n; ++q) {
            for (int a = 0; a < s; ++a) {
                if (dfa.next_state(q, a) != 1) ++miss;
            }
        }
        total += regs.lambda_sink * Rational(miss);
    }
    if (!regs.lambda_selfloop.is_zero()) {
        long long cross = 0;
        for (int q = 0; q < n; ++q) {
            for (int a = 0; a < s; ++a) {
                if (dfa.next_state(q, a) != q) ++cross;
            }
        }
        total += regs.lambda_selfloop * Rational(cross);
    }
    if (!regs.lambda_parallel.is_zero()) {
        long long edges = 0;
        for (int q = 0; q < n; ++q) {
            for (int q2 = 0; q2 < n; ++q2) {
                for (int a = 0; a < s; ++a) {
                    if (dfa.next_state(q, a) == q2) {
                        ++edges;
                        break;
                    }
                }
            }
        }
        total += regs.lambda_parallel * Rational(edges);
    }
    return total;
}

} // namespace dfalearn
