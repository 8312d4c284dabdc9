#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowdisc/rational.hpp"

namespace flowdisc {

enum class Relation { LessEq, Equal, GreaterEq };

using LinearTerms = std::vector<std::pair<int, Rational>>;  // (variable id, coefficient)

struct Constraint {
  LinearTerms terms;
  Relation relation = Relation::LessEq;
  Rational rhs;
  std::string label;
};

struct Variable {
  std::string name;
  std::optional<Rational> lower = Rational(0);  // nullopt: unbounded below
  std::optional<Rational> upper;                // nullopt: unbounded above
};

/// Minimization LP over exact rationals. Variables are addressed either by the
/// id returned from add_variable or by name.
class LinearProgram {
 public:
  int add_variable(const std::string& name, std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt);
  /// Id of a declared variable; throws ValidationError otherwise.
  int id(const std::string& name) const;
  bool has_variable(const std::string& name) const { return index_.count(name) != 0; }

  void set_objective(int var, const Rational& coef);
  void set_objective(const std::string& name, const Rational& coef) { set_objective(id(name), coef); }

  void add_constraint(LinearTerms terms, Relation rel, const Rational& rhs, std::string label = {});
  void add_constraint(const std::map<std::string, Rational>& terms, Relation rel, const Rational& rhs,
                      std::string label = {});

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Rational>& objective() const { return objective_; }

  /// Objective value of a full point (no feasibility check).
  Rational evaluate_objective(const std::vector<Rational>& values) const;

  /// Human-readable listing, one line per row. Debugging aid only.
  std::string dump() const;

 private:
  std::vector<Variable> variables_;
  std::map<std::string, int> index_;
  std::vector<Rational> objective_;
  std::vector<Constraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> values;  // indexed by variable id; empty unless Optimal
  Rational objective_value;
  int pivots = 0;
};

/// Two-phase primal simplex on a dense rational tableau with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);

struct Violation {
  int constraint = -1;  // index into constraints(), or -1 for a variable bound
  int variable = -1;    // set for bound violations
  std::string description;
  Rational slack;       // negative amount by which the row or bound is missed
};

/// Exact residual check. Returns one entry per violated row or bound.
std::vector<Violation> check_point(const LinearProgram& lp, const std::vector<Rational>& values);
/// Same, with values keyed by variable name; throws ValidationError if any
/// declared variable is missing.
std::vector<Violation> check_point(const LinearProgram& lp, const std::map<std::string, Rational>& values);

}  // namespace flowdisc
