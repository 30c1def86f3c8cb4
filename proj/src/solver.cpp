#include "dfalearn/solver.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef _WIN32
#include <sys/wait.h>
#include <unistd.h>
#endif

namespace dfalearn {

namespace {

namespace fs = std::filesystem;

std::string solve_status_to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::LimitReached: return "limit";
    case SolveStatus::BackendError: return "backend-error";
    }
    return "unknown";
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += "'";
    return out;
}

void replace_all(std::string& text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string format_seconds(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Owns the scratch directory for one solve; removes it unless the caller
// pinned an explicit work_dir.
struct ScratchDir {
    fs::path path;
    bool keep = false;

    ~ScratchDir() {
        if (!keep && !path.empty()) {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    }
};

fs::path fresh_scratch_dir() {
    static std::atomic<unsigned long long> counter{0};
    const unsigned long long id = counter.fetch_add(1);
    std::ostringstream name;
    name << "dfalearn-" <<
#ifndef _WIN32
        ::getpid()
#else
        0
#endif
         << "-" << id;
    fs::path dir = fs::temp_directory_path() / name.str();
    fs::create_directories(dir);
    return dir;
}

SolveOutcome backend_failure(std::string detail, double wall) {
    SolveOutcome out;
    out.status = SolveStatus::BackendError;
    out.detail = std::move(detail);
    out.work.wall_seconds = wall;
    return out;
}

long long saturating_mul(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    const long long maxv = std::numeric_limits<long long>::max();
    if (a > maxv / b) return maxv;
    return a * b;
}

} // namespace

std::string solve_status_name(SolveStatus s) { return solve_status_to_string(s); }

SolveOutcome solve_external(const MilpModel& model, const BackendConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (config.command_template.find("{lp_path}") == std::string::npos ||
        config.command_template.find("{sol_path}") == std::string::npos) {
        return backend_failure("backend command template must mention {lp_path} and {sol_path}", 0);
    }

    ScratchDir scratch;
    if (config.work_dir.empty()) {
        scratch.path = fresh_scratch_dir();
    } else {
        scratch.path = config.work_dir;
        scratch.keep = true;
        fs::create_directories(scratch.path);
    }
    const fs::path lp_path = scratch.path / "model.lp";
    const fs::path sol_path = scratch.path / "model.sol";

    {
        std::ofstream out(lp_path);
        if (!out) return backend_failure("cannot write LP file: " + lp_path.string(), elapsed());
        out << write_lp(model);
    }

    std::string cmd = config.command_template;
    replace_all(cmd, "{lp_path}", shell_quote(lp_path.string()));
    replace_all(cmd, "{sol_path}", shell_quote(sol_path.string()));
    replace_all(cmd, "{time_limit}", format_seconds(config.time_limit_s));
    replace_all(cmd, "{seed}", std::to_string(config.seed));

    const int rc = std::system(cmd.c_str());
#ifndef _WIN32
    if (rc == -1) return backend_failure("failed to launch backend command", elapsed());
    if (WIFSIGNALED(rc)) {
        return backend_failure("backend command killed by signal " + std::to_string(WTERMSIG(rc)),
                               elapsed());
    }
    const int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : rc;
#else
    const int exit_code = rc;
#endif
    if (exit_code != 0) {
        return backend_failure("backend command exited with code " + std::to_string(exit_code), elapsed());
    }

    std::ifstream sol_in(sol_path);
    if (!sol_in) {
        return backend_failure("backend produced no solution file at " + sol_path.string(), elapsed());
    }

    ParsedSolution parsed;
    try {
        parsed = parse_solution(sol_in, model);
    } catch (const MalformedSolutionError& e) {
        return backend_failure(std::string("bad solution file: ") + e.what(), elapsed());
    }

    SolveOutcome out;
    out.work.wall_seconds = elapsed();
    switch (parsed.status) {
    case SolutionStatus::Infeasible:
        out.status = SolveStatus::Infeasible;
        return out;
    case SolutionStatus::Unbounded:
        return backend_failure("backend reported unbounded: impossible for a pure-binary model",
                               out.work.wall_seconds);
    case SolutionStatus::Optimal:
    case SolutionStatus::Feasible:
    case SolutionStatus::Unknown:
    case SolutionStatus::Limit:
        break;
    }

    if (!parsed.assignment) {
        if (parsed.status == SolutionStatus::Limit) {
            out.status = SolveStatus::LimitReached;
            out.detail = "work limit reached without an incumbent";
            return out;
        }
        return backend_failure("solution file carries neither status nor values", out.work.wall_seconds);
    }

    // Never trust the process across the boundary: every constraint is
    // re-checked exactly before the assignment is reported usable.
    std::string violated;
    if (!satisfies(model, parsed.assignment->values, &violated)) {
        return backend_failure("re-verification failed: assignment violates constraint '" + violated +
                                   "' (tolerance or adapter bug)",
                               out.work.wall_seconds);
    }

    out.assignment = std::move(parsed.assignment);
    switch (parsed.status) {
    case SolutionStatus::Optimal: out.status = SolveStatus::Optimal; break;
    case SolutionStatus::Limit:
        out.status = SolveStatus::LimitReached;
        out.detail = "work limit reached with an incumbent";
        break;
    default: out.status = SolveStatus::Feasible; break;
    }
    return out;
}

long long enumeration_candidates(int n, int alphabet_size) {
    long long total = 1;
    for (int i = 0; i < n * alphabet_size; ++i) total = saturating_mul(total, n);
    for (int i = 0; i < n; ++i) total = saturating_mul(total, 2);
    return total;
}

SolveOutcome solve_enumerate(const Sample& sample, const PrefixTree& tree, const EncodingSpec& spec,
                             const EnumerationConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    validate_spec(spec, sample);
    const int n = spec.states;
    const int s = static_cast<int>(sample.alphabet().size());

    const long long expected = enumeration_candidates(n, s);
    if (expected > config.budget) {
        throw BudgetExceededError("enumeration of " + std::to_string(expected) +
                                  " candidate DFAs exceeds the budget of " +
                                  std::to_string(config.budget));
    }

    // Word nodes and multiplicities in canonical order; simulation runs on
    // raw transition tables, never on the MILP model.
    const int p = tree.node_count();
    std::vector<int> parent(static_cast<std::size_t>(p));
    std::vector<int> in_sym(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        parent[static_cast<std::size_t>(v)] = tree.parent(v);
        in_sym[static_cast<std::size_t>(v)] = tree.incoming_symbol(v);
    }
    std::vector<int> word_node;
    std::vector<long long> word_mult;
    for (const auto& [w, count] : sample.entries()) {
        word_node.push_back(tree.node_of(w));
        word_mult.push_back(count);
    }

    const bool regularized = spec.regularizers.any();
    const bool sink_mode = !spec.regularizers.lambda_sink.is_zero();
    const long long lower = spec.lower.value_or(0);
    const long long upper = spec.upper.value_or(sample.total_size());

    std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(s), 0);
    std::vector<int> node_state(static_cast<std::size_t>(p), 0);

    long long visited = 0;
    bool have_best = false;
    std::vector<int> best_table;
    unsigned best_mask = 0;
    // Composition: two-bound optimizes the penalty alone (constant 1
    // otherwise); the single-bound modes optimize the signed acceptance
    // count first and the penalty as a tie break.
    Rational best_primary;
    Rational best_penalty;

    auto table_penalty = [&](const std::vector<int>& t) {
        Rational total(0);
        if (!spec.regularizers.lambda_sink.is_zero()) {
            long long miss = 0;
            for (int q = 0; q < n; ++q) {
                for (int a = 0; a < s; ++a) {
                    if (t[static_cast<std::size_t>(q * s + a)] != 1) ++miss;
                }
            }
            total += spec.regularizers.lambda_sink * Rational(miss);
        }
        if (!spec.regularizers.lambda_selfloop.is_zero()) {
            long long cross = 0;
            for (int q = 0; q < n; ++q) {
                for (int a = 0; a < s; ++a) {
                    if (t[static_cast<std::size_t>(q * s + a)] != q) ++cross;
                }
            }
            total += spec.regularizers.lambda_selfloop * Rational(cross);
        }
        if (!spec.regularizers.lambda_parallel.is_zero()) {
            long long edges = 0;
            for (int q = 0; q < n; ++q) {
                for (int q2 = 0; q2 < n; ++q2) {
                    for (int a = 0; a < s; ++a) {
                        if (t[static_cast<std::size_t>(q * s + a)] == q2) {
                            ++edges;
                            break;
                        }
                    }
                }
            }
            total += spec.regularizers.lambda_parallel * Rational(edges);
        }
        return total;
    };

    bool more_tables = true;
    while (more_tables) {
        // States reached per prefix node under the current table; node ids
        // are breadth first, parents precede children.
        for (int v = 1; v < p; ++v) {
            const int from = node_state[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            node_state[static_cast<std::size_t>(v)] =
                table[static_cast<std::size_t>(from * s + in_sym[static_cast<std::size_t>(v)])];
        }

        const bool sink_table_ok = [&] {
            if (!sink_mode) return true;
            for (int a = 0; a < s; ++a) {
                if (table[static_cast<std::size_t>(1 * s + a)] != 1) return false;
            }
            return true;
        }();
        const Rational penalty = regularized ? table_penalty(table) : Rational(0);

        // Final sets in lexicographic order of (f_0, ..., f_{n-1}).
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            ++visited;
            auto is_final = [&](int q) { return (mask >> (n - 1 - q)) & 1u; };
            if (!sink_table_ok || (sink_mode && is_final(1))) continue;

            long long count = 0;
            for (std::size_t w = 0; w < word_node.size(); ++w) {
                if (is_final(node_state[static_cast<std::size_t>(word_node[w])])) count += word_mult[w];
            }

            bool feasible = true;
            Rational primary;
            switch (spec.mode) {
            case LearnMode::TwoBound:
                feasible = count >= lower && count <= upper;
                primary = regularized ? penalty : Rational(1);
                break;
            case LearnMode::SingleBoundLower:
                feasible = count >= lower;
                primary = Rational(count);
                break;
            case LearnMode::SingleBoundUpper:
                feasible = count <= upper;
                primary = Rational(-count); // maximize = minimize the negative
                break;
            }
            if (!feasible) continue;

            const bool better =
                !have_best || primary < best_primary ||
                (primary == best_primary && spec.mode != LearnMode::TwoBound && regularized &&
                 penalty < best_penalty);
            if (better) {
                have_best = true;
                best_primary = primary;
                best_penalty = penalty;
                best_table = table;
                best_mask = mask;
            }
        }

        // Advance the transition table as a base-n odometer, least
        // significant digit last, giving lexicographic order.
        more_tables = false;
        for (int i = static_cast<int>(table.size()) - 1; i >= 0; --i) {
            if (++table[static_cast<std::size_t>(i)] < n) {
                more_tables = true;
                break;
            }
            table[static_cast<std::size_t>(i)] = 0;
        }
    }

    if (visited != expected) {
        throw ModelError("enumeration visited " + std::to_string(visited) + " candidates, expected " +
                         std::to_string(expected));
    }

    SolveOutcome out;
    out.work.units = visited;
    out.work.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!have_best) {
        out.status = SolveStatus::Infeasible;
        return out;
    }

    std::vector<bool> finals(static_cast<std::size_t>(n), false);
    for (int q = 0; q < n; ++q) finals[static_cast<std::size_t>(q)] = ((best_mask >> (n - 1 - q)) & 1u) != 0;
    Dfa dfa(sample.alphabet(), std::move(best_table), std::move(finals));

    EncodedModel em = encode(sample, tree, spec);
    out.assignment = natural_assignment(em, dfa);
    out.status = SolveStatus::Optimal;
    return out;
}

} // namespace dfalearn
