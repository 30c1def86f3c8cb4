#ifndef DFALEARN_MILP_HPP
#define DFALEARN_MILP_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfalearn/rational.hpp"

namespace dfalearn {

// Typed handle into a model's variable table.
using VarId = int;

enum class VarKind {
    Transition, // d_{q}_{a}_{q'}
    Final,      // f_{q}
    RunState,   // x_{node}_{q}
    Acceptance, // a_{node}_{q}
    Edge,       // e_{q}_{q'}
    Other,
};

// A linear expression: sum of coefficient*variable plus a constant.
// Terms are kept sorted by variable id with no duplicates and no zero
// coefficients, so two expressions are equal iff their representations
// are equal.
struct LinTerm {
    std::vector<std::pair<Rational, VarId>> terms;
    Rational constant;
};

// Accumulates coefficient contributions and produces a normalized LinTerm.
class LinTermBuilder {
public:
    LinTermBuilder& add(const Rational& coeff, VarId var);
    LinTermBuilder& add_constant(const Rational& value);
    LinTerm build() const;

private:
    std::map<VarId, Rational> coeffs_;
    Rational constant_;
};

enum class Relation { LessEq, GreaterEq, Equal };

struct LinConstraint {
    std::string name;   // unique within the model, LP-safe
    std::string family; // grouping key for structural counts
    LinTerm lhs;        // constant folded into rhs before storage
    Relation rel;
    Rational rhs;
};

enum class Sense { Minimize, Maximize };

// A 0/1 integer linear program. All variables are binary; the LP writer
// emits explicit bounds and an integrality section anyway so that any
// CPLEX-LP reader agrees on the domain.
class MilpModel {
public:
    // Declares a fresh binary variable. Names must be unique and match
    // [A-Za-z_][A-Za-z0-9_]* (LP-format safe).
    VarId add_var(const std::string& name, VarKind kind = VarKind::Other);

    // True model size, for structural assertions.
    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::string& var_name(VarId id) const;
    VarKind var_kind(VarId id) const;
    std::optional<VarId> find_var(const std::string& name) const;

    // Adds lhs (rel) rhs under family `family`. The constraint name is
    // generated as family_<index-within-family> unless `name` is given.
    // Variable ids must refer to declared variables.
    void add_constraint(const std::string& family, LinTerm lhs, Relation rel, Rational rhs,
                        const std::string& name = "");

    const std::vector<LinConstraint>& constraints() const { return constraints_; }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }
    // Number of constraints per family, for closed-form count checks.
    std::map<std::string, int> family_counts() const;

    void set_objective(LinTerm objective, Sense sense);
    const LinTerm& objective() const { return objective_; }
    Sense sense() const { return sense_; }

private:
    std::vector<std::string> names_;
    std::vector<VarKind> kinds_;
    std::map<std::string, VarId> by_name_;
    std::vector<LinConstraint> constraints_;
    std::map<std::string, int> family_sizes_;
    LinTerm objective_;       // defaults to the constant 0
    Sense sense_ = Sense::Minimize;

    void check_term_vars(const LinTerm& t) const;
};

// A complete 0/1 assignment, indexed by VarId. `objective_value` is the
// model objective evaluated exactly on these values.
struct Assignment {
    std::vector<int> values;
    Rational objective_value;
};

Rational evaluate(const LinTerm& term, const std::vector<int>& values);

// True iff the assignment satisfies the constraint / all constraints,
// checked in exact arithmetic. The failing constraint name (if any) is
// written to `first_violation` when provided.
bool satisfies(const LinConstraint& c, const std::vector<int>& values);
bool satisfies(const MilpModel& model, const std::vector<int>& values,
               std::string* first_violation = nullptr);

// Serializes the model in CPLEX-LP style:
//   Minimize / Maximize, Subject To, Bounds, Binaries, End
// Output is deterministic: declaration order everywhere.
std::string write_lp(const MilpModel& model);

enum class SolutionStatus { Optimal, Feasible, Infeasible, Unbounded, Limit, Unknown };

struct ParsedSolution {
    SolutionStatus status = SolutionStatus::Unknown;
    // Present unless the status says there is nothing to read.
    std::optional<Assignment> assignment;
    // Objective as reported by the solver, if it reported one. Purely
    // informational; the exact value in `assignment` is recomputed.
    std::optional<double> reported_objective;
};

// Reads a solver solution file:
//   status <optimal|feasible|infeasible|unbounded|limit>   (optional line)
//   objective <number>                                      (optional line)
//   <var-name> <value>                                      (one per line)
// Variables omitted from the file default to 0. Values must be integral
// within tolerance 1e-6 of 0 or 1 (NonIntegralValueError otherwise);
// unknown variable names raise MalformedSolutionError. When no status
// line is present the status is Unknown and the caller decides.
ParsedSolution parse_solution(std::istream& in, const MilpModel& model);
ParsedSolution parse_solution_text(const std::string& text, const MilpModel& model);

} // namespace dfalearn

#endif
