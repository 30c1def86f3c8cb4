#ifndef DFALEARN_SOLVER_HPP
#define DFALEARN_SOLVER_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "dfalearn/encoder.hpp"
#include "dfalearn/milp.hpp"

namespace dfalearn {

enum class SolveStatus {
    Optimal,      // proven optimal assignment
    Feasible,     // assignment without an optimality proof
    Infeasible,   // proven that no assignment exists
    LimitReached, // work limit hit; may still carry an incumbent
    BackendError, // process/parse/verification failure, see detail
};

std::string solve_status_name(SolveStatus s);

struct SolveWork {
    double wall_seconds = 0.0;
    // Backend-reported effort: candidate DFAs visited for the
    // enumeration backend, 0 for external solvers (not reported).
    long long units = 0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::BackendError;
    std::optional<Assignment> assignment;
    SolveWork work;
    std::string detail; // diagnostics, filled for errors and limits
};

// How to invoke the external solver. The command template is run through
// the shell after substituting:
//   {lp_path}     path of the LP file this module writes
//   {sol_path}    path where the solver must leave its solution file
//   {time_limit}  work limit in seconds
//   {seed}        integer random seed (optional placeholder)
struct BackendConfig {
    std::string command_template;
    double time_limit_s = 100.0;
    long long seed = 0;
    // When set, LP/solution files are placed here and kept; otherwise a
    // fresh temporary directory is used and removed afterwards.
    std::filesystem::path work_dir;
};

// Serializes the model, runs the external command, parses the solution
// file and re-verifies any returned assignment against every constraint
// in exact arithmetic before reporting it. All failures (process exit,
// unreadable output, non-integral values, failed re-verification) come
// back as status BackendError with a distinct detail message.
SolveOutcome solve_external(const MilpModel& model, const BackendConfig& config);

struct EnumerationConfig {
    long long budget = 10'000'000; // max candidate DFAs
};

// Number of size-n candidates over an alphabet of s symbols:
// n^(n*s) * 2^n, saturating at LLONG_MAX.
long long enumeration_candidates(int n, int alphabet_size);

// Independent oracle: walks every DFA with spec.states states over the
// sample alphabet in lexicographic order of (transition table, final
// set), evaluates feasibility and the exact objective by direct
// simulation, and returns the first optimum as a natural assignment of
// the encoded model. It never reads the MILP constraints. Throws
// BudgetExceededError when the candidate count exceeds the budget.
SolveOutcome solve_enumerate(const Sample& sample, const PrefixTree& tree, const EncodingSpec& spec,
                             const EnumerationConfig& config = {});

} // namespace dfalearn

#endif
