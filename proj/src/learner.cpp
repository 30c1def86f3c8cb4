#include "dfalearn/learner.hpp"

#include <chrono>
#include <set>

#include "json.hpp"

namespace dfalearn {

namespace {

SolveOutcome dispatch(const LearnerBackend& backend, const Sample& sample, const PrefixTree& tree,
                      const EncodingSpec& spec, const EncodedModel& em) {
    if (backend.kind == LearnerBackend::Kind::External) {
        return solve_external(em.model, backend.external);
    }
    return solve_enumerate(sample, tree, spec, backend.enumeration);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::string LearnerBackend::identity() const {
    if (kind == Kind::Enumerate) {
        return "enumerate:budget=" + std::to_string(enumeration.budget);
    }
    return "external:" + external.command_template;
}

std::string LearnReport::to_json() const {
    nlohmann::json j;
    j["status"] = found() ? "ok" : "no-dfa-exists";
    j["mode"] = learn_mode_name(mode);
    j["lower"] = lower ? nlohmann::json(*lower) : nlohmann::json(nullptr);
    j["upper"] = upper ? nlohmann::json(*upper) : nlohmann::json(nullptr);
    j["backend"] = backend;
    j["states"] = found() ? nlohmann::json(dfa->state_count()) : nlohmann::json(nullptr);
    j["accepted_count"] = accepted_count;
    j["objective_value"] =
        objective_value ? nlohmann::json(objective_value->to_string()) : nlohmann::json(nullptr);
    j["penalty_value"] =
        penalty_value ? nlohmann::json(penalty_value->to_string()) : nlohmann::json(nullptr);
    nlohmann::json attempts = nlohmann::json::array();
    for (const SizeAttempt& a : sizes_tried) {
        attempts.push_back({{"states", a.states},
                            {"status", solve_status_name(a.status)},
                            {"time_s", a.wall_seconds}});
    }
    j["sizes_tried"] = std::move(attempts);
    if (found()) {
        j["dfa"] = nlohmann::json::parse(dfa_to_json(*dfa));
    } else {
        j["dfa"] = nullptr;
    }
    return j.dump(2) + "\n";
}

LearnReport learn_two_bound(const Sample& sample, long long lower, long long upper,
                            const RegularizerSpec& regs, const LearnerBackend& backend,
                            const LearnOptions& options) {
    regs.validate();
    const long long total = sample.total_size();
    if (lower < 0 || lower > upper || upper > total) {
        throw InputError("bounds must satisfy 0 <= lower <= upper <= |S|");
    }
    if (options.start_size < 1) throw InputError("start size must be at least 1");

    const PrefixTree tree = PrefixTree::build(sample);
    const int max_size = size_upper_bound(tree);
    int start = options.start_size;
    // A sink state requires a second state, so the search skips size 1.
    if (!regs.lambda_sink.is_zero() && start < 2) start = 2;

    LearnReport report;
    report.mode = LearnMode::TwoBound;
    report.lower = lower;
    report.upper = upper;
    report.backend = backend.identity();

    for (int n = start; n <= max_size; ++n) {
        EncodingSpec spec;
        spec.mode = LearnMode::TwoBound;
        spec.states = n;
        spec.lower = lower;
        spec.upper = upper;
        spec.regularizers = regs;

        const auto t0 = std::chrono::steady_clock::now();
        const EncodedModel em = encode(sample, tree, spec);
        const SolveOutcome outcome = dispatch(backend, sample, tree, spec, em);
        report.sizes_tried.push_back({n, outcome.status, seconds_since(t0)});

        switch (outcome.status) {
        case SolveStatus::Infeasible:
            continue;
        case SolveStatus::Optimal:
        case SolveStatus::Feasible:
        case SolveStatus::LimitReached: {
            if (!outcome.assignment) {
                throw BackendError("work limit reached without a conclusive answer at size " +
                                   std::to_string(n));
            }
            Dfa dfa = decode_dfa(em, *outcome.assignment);
            const long long count = count_accepted(dfa, sample);
            if (count < lower || count > upper) {
                throw BackendError("backend returned a DFA whose simulated count " +
                                   std::to_string(count) + " violates the bounds at size " +
                                   std::to_string(n));
            }
            report.accepted_count = count;
            report.objective_value = outcome.assignment->objective_value;
            if (regs.any()) report.penalty_value = penalty_value(dfa, regs);
            report.dfa = std::move(dfa);
            return report;
        }
        case SolveStatus::BackendError:
            throw BackendError(outcome.detail + " (at size " + std::to_string(n) + ")");
        }
    }
    return report; // every size infeasible: no DFA exists for these bounds
}

LearnReport learn_single_bound(const Sample& sample, LearnMode mode, long long bound, int states,
                               const RegularizerSpec& regs, const LearnerBackend& backend) {
    if (mode == LearnMode::TwoBound) {
        throw InputError("learn_single_bound needs a single-bound mode");
    }
    EncodingSpec spec;
    spec.mode = mode;
    spec.states = states;
    spec.regularizers = regs;
    if (mode == LearnMode::SingleBoundLower) {
        spec.lower = bound;
    } else {
        spec.upper = bound;
    }
    validate_spec(spec, sample);
    const PrefixTree tree = PrefixTree::build(sample);

    LearnReport report;
    report.mode = mode;
    report.lower = spec.lower;
    report.upper = spec.upper;
    report.backend = backend.identity();

    // Phase 1: the exact acceptance optimum at the requested size.
    const auto t0 = std::chrono::steady_clock::now();
    const EncodedModel em = encode(sample, tree, spec);
    const SolveOutcome outcome = dispatch(backend, sample, tree, spec, em);
    report.sizes_tried.push_back({states, outcome.status, seconds_since(t0)});

    if (outcome.status == SolveStatus::Infeasible) {
        throw BackendError("single-bound instances always have a trivial solution; "
                           "the backend reported infeasible");
    }
    if (outcome.status != SolveStatus::Optimal || !outcome.assignment) {
        throw BackendError("single-bound learning needs a proven optimum; backend reported " +
                           solve_status_name(outcome.status) +
                           (outcome.detail.empty() ? "" : ": " + outcome.detail));
    }

    Dfa dfa = decode_dfa(em, *outcome.assignment);
    const long long k = count_accepted(dfa, sample);
    if (Rational(k) != outcome.assignment->objective_value) {
        throw BackendError("acceptance objective " + outcome.assignment->objective_value.to_string() +
                           " does not match the simulated count " + std::to_string(k));
    }
    if (mode == LearnMode::SingleBoundLower && k < bound) {
        throw BackendError("backend optimum " + std::to_string(k) + " violates the lower bound");
    }
    if (mode == LearnMode::SingleBoundUpper && k > bound) {
        throw BackendError("backend optimum " + std::to_string(k) + " violates the upper bound");
    }

    report.accepted_count = k;
    report.objective_value = Rational(k);

    if (!regs.any()) {
        report.dfa = std::move(dfa);
        return report;
    }

    if (backend.kind == LearnerBackend::Kind::Enumerate) {
        // The enumeration backend already tie-breaks on the penalty, so
        // its optimum is the phase-2 answer.
        report.penalty_value = penalty_value(dfa, regs);
        report.dfa = std::move(dfa);
        return report;
    }

    // Phase 2: pin the acceptance count, minimize the penalty.
    const auto t1 = std::chrono::steady_clock::now();
    EncodedModel em2 = encode(sample, tree, spec);
    fix_acceptance(em2, k);
    const SolveOutcome outcome2 = solve_external(em2.model, backend.external);
    report.sizes_tried.push_back({states, outcome2.status, seconds_since(t1)});
    if (outcome2.status != SolveStatus::Optimal || !outcome2.assignment) {
        throw BackendError("penalty phase needs a proven optimum; backend reported " +
                           solve_status_name(outcome2.status) +
                           (outcome2.detail.empty() ? "" : ": " + outcome2.detail));
    }
    Dfa dfa2 = decode_dfa(em2, *outcome2.assignment);
    if (count_accepted(dfa2, sample) != k) {
        throw BackendError("penalty phase changed the acceptance count");
    }
    report.penalty_value = penalty_value(dfa2, regs);
    report.dfa = std::move(dfa2);
    return report;
}

ReducedInstance reduce_exact_learning(const std::vector<Word>& positives,
                                      const std::vector<Word>& negatives, int k) {
    if (k < 1) throw InputError("target size must be at least 1");
    const std::set<Word> pos(positives.begin(), positives.end());
    const std::set<Word> neg(negatives.begin(), negatives.end());
    for (const Word& w : pos) {
        if (neg.count(w) > 0) {
            throw InputError("positive and negative words must be disjoint ('" + format_word(w) + "')");
        }
    }
    if (pos.empty() && neg.empty()) throw InputError("reduction needs at least one word");

    ReducedInstance out;
    const long long bonus = static_cast<long long>(neg.size()) + 1;
    for (const Word& w : pos) out.sample.add(w, bonus);
    for (const Word& w : neg) out.sample.add(w, 1);
    out.lower = static_cast<long long>(pos.size()) * bonus;
    out.upper = out.lower;
    out.states = k;
    return out;
}

} // namespace dfalearn
