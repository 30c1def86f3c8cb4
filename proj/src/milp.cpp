#include "dfalearn/milp.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dfalearn {

namespace {

bool lp_legal_name(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

} // namespace

LinTermBuilder& LinTermBuilder::add(const Rational& coeff, VarId var) {
    coeffs_[var] += coeff;
    return *this;
}

LinTermBuilder& LinTermBuilder::add_constant(const Rational& value) {
    constant_ += value;
    return *this;
}

LinTerm LinTermBuilder::build() const {
    LinTerm t;
    t.constant = constant_;
    for (const auto& [var, coeff] : coeffs_) {
        if (!coeff.is_zero()) t.terms.emplace_back(coeff, var);
    }
    return t;
}

VarId MilpModel::add_var(const std::string& name, VarKind kind) {
    if (!lp_legal_name(name)) throw ModelError("variable name not LP-legal: '" + name + "'");
    auto [it, inserted] = by_name_.emplace(name, static_cast<VarId>(names_.size()));
    if (!inserted) throw DuplicateVariableError("duplicate variable name: " + name);
    names_.push_back(name);
    kinds_.push_back(kind);
    return it->second;
}

const std::string& MilpModel::var_name(VarId id) const { return names_.at(static_cast<std::size_t>(id)); }

VarKind MilpModel::var_kind(VarId id) const { return kinds_.at(static_cast<std::size_t>(id)); }

std::optional<VarId> MilpModel::find_var(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

void MilpModel::check_term_vars(const LinTerm& t) const {
    for (const auto& [coeff, var] : t.terms) {
        (void)coeff;
        if (var < 0 || var >= variable_count()) {
            throw UndeclaredVariableError("expression references undeclared variable id " +
                                          std::to_string(var));
        }
    }
}

void MilpModel::add_constraint(const std::string& family, LinTerm lhs, Relation rel, Rational rhs,
                               const std::string& name) {
    check_term_vars(lhs);
    LinConstraint c;
    c.family = family;
    int& count = family_sizes_[family];
    c.name = name.empty() ? family + "_" + std::to_string(count) : name;
    if (!lp_legal_name(c.name)) throw ModelError("constraint name not LP-legal: '" + c.name + "'");
    ++count;
    // Fold the lhs constant into the rhs so LP rows stay constant-free.
    c.rhs = rhs - lhs.constant;
    lhs.constant = Rational(0);
    c.lhs = std::move(lhs);
    c.rel = rel;
    constraints_.push_back(std::move(c));
}

std::map<std::string, int> MilpModel::family_counts() const { return family_sizes_; }

void MilpModel::set_objective(LinTerm objective, Sense sense) {
    check_term_vars(objective);
    objective_ = std::move(objective);
    sense_ = sense;
}

Rational evaluate(const LinTerm& term, const std::vector<int>& values) {
    Rational total = term.constant;
    for (const auto& [coeff, var] : term.terms) {
        const int v = values.at(static_cast<std::size_t>(var));
        if (v != 0) total += coeff * Rational(v);
    }
    return total;
}

bool satisfies(const LinConstraint& c, const std::vector<int>& values) {
    const Rational lhs = evaluate(c.lhs, values);
    switch (c.rel) {
    case Relation::LessEq: return lhs <= c.rhs;
    case Relation::GreaterEq: return lhs >= c.rhs;
    case Relation::Equal: return lhs == c.rhs;
    }
    return false;
}

bool satisfies(const MilpModel& model, const std::vector<int>& values, std::string* first_violation) {
    for (const LinConstraint& c : model.constraints()) {
        if (!satisfies(c, values)) {
            if (first_violation) *first_violation = c.name;
            return false;
        }
    }
    return true;
}

std::string write_lp(const MilpModel& model) {
    std::ostringstream out;
    out << (model.sense() == Sense::Minimize ? "Minimize" : "Maximize") << "\n";

    auto write_terms = [&](const LinTerm& t, bool with_constant) {
        bool first = true;
        for (const auto& [coeff, var] : t.terms) {
            Rational mag = coeff < Rational(0) ? -coeff : coeff;
            if (first) {
                if (coeff < Rational(0)) out << "- ";
            } else {
                out << (coeff < Rational(0) ? " - " : " + ");
            }
            if (mag != Rational(1)) out << mag.lp_text() << " ";
            out << model.var_name(var);
            first = false;
        }
        if (with_constant && !t.constant.is_zero()) {
            if (!first) out << (t.constant < Rational(0) ? " - " : " + ");
            else if (t.constant < Rational(0)) out << "- ";
            Rational mag = t.constant < Rational(0) ? -t.constant : t.constant;
            out << mag.lp_text();
        }
        if (first && (!with_constant || t.constant.is_zero())) out << "0";
    };

    out << " obj: ";
    write_terms(model.objective(), true);
    out << "\n";

    out << "Subject To\n";
    for (const LinConstraint& c : model.constraints()) {
        out << " " << c.name << ": ";
        write_terms(c.lhs, false);
        switch (c.rel) {
        case Relation::LessEq: out << " <= "; break;
        case Relation::GreaterEq: out << " >= "; break;
        case Relation::Equal: out << " = "; break;
        }
        out << c.rhs.lp_text() << "\n";
    }

    out << "Bounds\n";
    for (VarId v = 0; v < model.variable_count(); ++v) {
        out << " 0 <= " << model.var_name(v) << " <= 1\n";
    }

    out << "Binaries\n";
    int on_line = 0;
    for (VarId v = 0; v < model.variable_count(); ++v) {
        if (on_line == 8) {
            out << "\n";
            on_line = 0;
        }
        out << " " << model.var_name(v);
        ++on_line;
    }
    if (model.variable_count() > 0) out << "\n";
    out << "End\n";
    return out.str();
}

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::optional<SolutionStatus> status_from_token(const std::string& token) {
    const std::string t = lower(token);
    if (t == "optimal") return SolutionStatus::Optimal;
    if (t == "feasible") return SolutionStatus::Feasible;
    if (t == "infeasible") return SolutionStatus::Infeasible;
    if (t == "unbounded") return SolutionStatus::Unbounded;
    if (t == "limit" || t == "limit-reached" || t == "timelimit") return SolutionStatus::Limit;
    return std::nullopt;
}

} // namespace

ParsedSolution parse_solution(std::istream& in, const MilpModel& model) {
    ParsedSolution result;
    std::vector<int> values(static_cast<std::size_t>(model.variable_count()), 0);
    std::vector<bool> assigned(static_cast<std::size_t>(model.variable_count()), false);
    bool any_pair = false;
    bool have_status = false;

    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first[0] == '#') continue;

        if (lower(first) == "status") {
            std::string token;
            if (!(ls >> token)) throw MalformedSolutionError("status line without a status token");
            auto st = status_from_token(token);
            if (!st) throw MalformedSolutionError("unknown status token: " + token);
            result.status = *st;
            have_status = true;
            continue;
        }
        // Tolerate a bare status word on its own line.
        if (auto st = status_from_token(first)) {
            std::string extra;
            if (!(ls >> extra)) {
                result.status = *st;
                have_status = true;
                continue;
            }
            throw MalformedSolutionError("unexpected tokens after status word: " + line);
        }
        if (lower(first) == "objective") {
            double v = 0;
            if (!(ls >> v)) throw MalformedSolutionError("objective line without a value");
            result.reported_objective = v;
            continue;
        }

        auto var = model.find_var(first);
        if (!var) throw MalformedSolutionError("solution assigns unknown variable: " + first);
        double value = 0;
        if (!(ls >> value)) throw MalformedSolutionError("missing value for variable " + first);
        if (assigned[static_cast<std::size_t>(*var)]) {
            throw MalformedSolutionError("duplicate assignment for variable " + first);
        }
        const double rounded = std::round(value);
        if (std::abs(value - rounded) > 1e-6) {
            throw NonIntegralValueError("non-integral value " + std::to_string(value) +
                                        " for variable " + first);
        }
        if (rounded != 0.0 && rounded != 1.0) {
            throw MalformedSolutionError("value out of binary domain for variable " + first);
        }
        values[static_cast<std::size_t>(*var)] = rounded == 1.0 ? 1 : 0;
        assigned[static_cast<std::size_t>(*var)] = true;
        any_pair = true;
    }

    if (!have_status) result.status = SolutionStatus::Unknown;

    const bool carries_solution =
        result.status == SolutionStatus::Optimal || result.status == SolutionStatus::Feasible ||
        result.status == SolutionStatus::Unknown || (result.status == SolutionStatus::Limit && any_pair);
    if (carries_solution) {
        Assignment a;
        a.objective_value = evaluate(model.objective(), values);
        a.values = std::move(values);
        result.assignment = std::move(a);
    }
    return result;
}

ParsedSolution parse_solution_text(const std::string& text, const MilpModel& model) {
    std::istringstream in(text);
    return parse_solution(in, model);
}

} // namespace dfalearn
