#include "flowdisc/lp.hpp"

#include <sstream>

#include "flowdisc/errors.hpp"

namespace flowdisc {

int LinearProgram::add_variable(const std::string& name, std::optional<Rational> lower,
                                std::optional<Rational> upper) {
  if (index_.count(name)) throw ValidationError("variable '" + name + "' declared twice");
  if (lower) lower->canonicalize();
  if (upper) upper->canonicalize();
  const int id = static_cast<int>(variables_.size());
  variables_.push_back({name, std::move(lower), std::move(upper)});
  objective_.emplace_back(0);
  index_.emplace(name, id);
  return id;
}

int LinearProgram::id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValidationError("undeclared variable '" + name + "'");
  return it->second;
}

void LinearProgram::set_objective(int var, const Rational& coef) {
  if (var < 0 || var >= num_variables()) throw ValidationError("objective references undeclared variable");
  objective_[var] = coef;
  objective_[var].canonicalize();
}

void LinearProgram::add_constraint(LinearTerms terms, Relation rel, const Rational& rhs, std::string label) {
  for (auto& [var, coef] : terms) {
    coef.canonicalize();
    if (var < 0 || var >= num_variables()) {
      throw ValidationError("constraint '" + label + "' references undeclared variable " + std::to_string(var));
    }
  }
  constraints_.push_back({std::move(terms), rel, rhs, std::move(label)});
  constraints_.back().rhs.canonicalize();
}

void LinearProgram::add_constraint(const std::map<std::string, Rational>& terms, Relation rel, const Rational& rhs,
                                   std::string label) {
  LinearTerms ids;
  ids.reserve(terms.size());
  for (const auto& [name, coef] : terms) ids.emplace_back(id(name), coef);
  add_constraint(std::move(ids), rel, rhs, std::move(label));
}

Rational LinearProgram::evaluate_objective(const std::vector<Rational>& values) const {
  Rational total = 0;
  for (int v = 0; v < num_variables(); ++v) {
    if (sgn(objective_[v]) != 0) total += objective_[v] * values[v];
  }
  return total;
}

namespace {

const char* relation_text(Relation rel) {
  switch (rel) {
    case Relation::LessEq: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEq: return ">=";
  }
  return "?";
}

void write_terms(std::ostream& out, const LinearProgram& lp, const LinearTerms& terms) {
  bool first = true;
  for (const auto& [var, coef] : terms) {
    if (sgn(coef) == 0) continue;
    if (!first) out << (sgn(coef) < 0 ? " - " : " + ");
    else if (sgn(coef) < 0) out << "-";
    first = false;
    const Rational mag = abs(coef);
    if (mag != 1) out << mag.get_str() << " ";
    out << lp.variables()[var].name;
  }
  if (first) out << "0";
}

Rational row_activity(const Constraint& c, const std::vector<Rational>& values) {
  Rational lhs = 0;
  for (const auto& [var, coef] : c.terms) lhs += coef * values[var];
  return lhs;
}

// Dense tableau simplex. Columns: structural, then slack/surplus, then
// artificial; the last entry of every row is the right-hand side.
class Tableau {
 public:
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> cost_row;  // reduced costs, last entry = -objective
  std::vector<int> basis;
  int columns = 0;
  int first_artificial = 0;
  int pivots = 0;

  void pivot(int p, int c) {
    ++pivots;
    auto& prow = rows[p];
    const Rational piv = prow[c];
    nz_.clear();
    for (int k = 0; k <= columns; ++k) {
      if (sgn(prow[k]) != 0) {
        if (k != c) prow[k] /= piv;
        nz_.push_back(k);
      }
    }
    prow[c] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) != p) eliminate(rows[r], prow, c);
    }
    eliminate(cost_row, prow, c);
    basis[p] = c;
  }

  // Runs Bland's rule on the current cost row. Columns at or beyond `limit`
  // never enter. Returns false if unbounded.
  bool optimize(int limit) {
    for (;;) {
      int enter = -1;
      for (int k = 0; k < limit; ++k) {
        if (sgn(cost_row[k]) < 0) {
          enter = k;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const Rational& a = rows[r][enter];
        if (sgn(a) <= 0) continue;
        Rational ratio = rows[r][columns] / a;
        if (leave < 0 || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = static_cast<int>(r);
          best_ratio = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void load_costs(const std::vector<Rational>& cost) {
    cost_row.assign(columns + 1, Rational(0));
    for (int k = 0; k < columns; ++k) cost_row[k] = cost[k];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Rational& cb = cost[basis[r]];
      if (sgn(cb) == 0) continue;
      for (int k = 0; k <= columns; ++k) {
        if (sgn(rows[r][k]) != 0) cost_row[k] -= cb * rows[r][k];
      }
    }
  }

 private:
  std::vector<int> nz_;
  mpq_class tmp_;

  void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow, int c) {
    if (sgn(row[c]) == 0) return;
    const Rational factor = row[c];
    for (int k : nz_) {
      mpq_mul(tmp_.get_mpq_t(), factor.get_mpq_t(), prow[k].get_mpq_t());
      mpq_sub(row[k].get_mpq_t(), row[k].get_mpq_t(), tmp_.get_mpq_t());
    }
  }
};

// x = offset + sign * x[col] - x[neg_col]
struct ColumnMap {
  int col = -1;
  int sign = 1;
  int neg_col = -1;
  Rational offset;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

std::string LinearProgram::dump() const {
  std::ostringstream out;
  out << "minimize ";
  LinearTerms obj;
  for (int v = 0; v < num_variables(); ++v) {
    if (sgn(objective_[v]) != 0) obj.emplace_back(v, objective_[v]);
  }
  write_terms(out, *this, obj);
  out << "\nsubject to\n";
  for (std::size_t c = 0; c < constraints_.size(); ++c) {
    const auto& row = constraints_[c];
    out << "  " << (row.label.empty() ? "c" + std::to_string(c) : row.label) << ": ";
    write_terms(out, *this, row.terms);
    out << " " << relation_text(row.relation) << " " << row.rhs.get_str() << "\n";
  }
  out << "bounds\n";
  for (const auto& v : variables_) {
    out << "  " << (v.lower ? v.lower->get_str() : "-inf") << " <= " << v.name << " <= "
        << (v.upper ? v.upper->get_str() : "+inf") << "\n";
  }
  return out.str();
}

LpSolution solve_lp(const LinearProgram& lp) {
  const int nv = lp.num_variables();
  std::vector<ColumnMap> maps(nv);
  int structural = 0;
  struct Row {
    std::vector<std::pair<int, Rational>> terms;
    Relation rel;
    Rational rhs;
  };
  std::vector<Row> std_rows;
  for (int v = 0; v < nv; ++v) {
    const auto& var = lp.variables()[v];
    auto& cm = maps[v];
    cm.col = structural++;
    if (var.lower) {
      cm.offset = *var.lower;
      if (var.upper) std_rows.push_back({{{cm.col, Rational(1)}}, Relation::LessEq, *var.upper - *var.lower});
    } else if (var.upper) {
      cm.offset = *var.upper;
      cm.sign = -1;
    } else {
      cm.neg_col = structural++;
    }
  }
  for (const auto& c : lp.constraints()) {
    Row row{{}, c.relation, c.rhs};
    std::map<int, Rational> acc;
    for (const auto& [var, coef] : c.terms) {
      const auto& cm = maps[var];
      row.rhs -= coef * cm.offset;
      acc[cm.col] += cm.sign * coef;
      if (cm.neg_col >= 0) acc[cm.neg_col] -= coef;
    }
    for (auto& [col, coef] : acc) {
      if (sgn(coef) != 0) row.terms.emplace_back(col, coef);
    }
    std_rows.push_back(std::move(row));
  }
  for (auto& row : std_rows) {
    if (sgn(row.rhs) < 0) {
      row.rhs = -row.rhs;
      for (auto& t : row.terms) t.second = -t.second;
      if (row.rel == Relation::LessEq) row.rel = Relation::GreaterEq;
      else if (row.rel == Relation::GreaterEq) row.rel = Relation::LessEq;
    }
  }

  int slack_count = 0, artificial_count = 0;
  for (const auto& row : std_rows) {
    if (row.rel != Relation::Equal) ++slack_count;
    if (row.rel != Relation::LessEq) ++artificial_count;
  }
  Tableau tab;
  tab.first_artificial = structural + slack_count;
  tab.columns = tab.first_artificial + artificial_count;
  tab.rows.assign(std_rows.size(), std::vector<Rational>(tab.columns + 1));
  tab.basis.assign(std_rows.size(), -1);
  int next_slack = structural, next_art = tab.first_artificial;
  for (std::size_t r = 0; r < std_rows.size(); ++r) {
    auto& trow = tab.rows[r];
    for (const auto& [col, coef] : std_rows[r].terms) trow[col] = coef;
    trow[tab.columns] = std_rows[r].rhs;
    switch (std_rows[r].rel) {
      case Relation::LessEq:
        trow[next_slack] = 1;
        tab.basis[r] = next_slack++;
        break;
      case Relation::GreaterEq:
        trow[next_slack++] = -1;
        trow[next_art] = 1;
        tab.basis[r] = next_art++;
        break;
      case Relation::Equal:
        trow[next_art] = 1;
        tab.basis[r] = next_art++;
        break;
    }
  }

  LpSolution sol;
  if (artificial_count > 0) {
    std::vector<Rational> phase1(tab.columns, Rational(0));
    for (int k = tab.first_artificial; k < tab.columns; ++k) phase1[k] = 1;
    tab.load_costs(phase1);
    tab.optimize(tab.columns);  // bounded below by 0
    if (sgn(tab.cost_row[tab.columns]) != 0) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = tab.pivots;
      return sol;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows.size();) {
      if (tab.basis[r] < tab.first_artificial) {
        ++r;
        continue;
      }
      int col = -1;
      for (int k = 0; k < tab.first_artificial; ++k) {
        if (sgn(tab.rows[r][k]) != 0) {
          col = k;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(static_cast<int>(r), col);
        ++r;
      } else {
        tab.rows.erase(tab.rows.begin() + static_cast<long>(r));
        tab.basis.erase(tab.basis.begin() + static_cast<long>(r));
      }
    }
  }
  std::vector<Rational> phase2(tab.columns, Rational(0));
  for (int v = 0; v < nv; ++v) {
    const Rational& c = lp.objective()[v];
    if (sgn(c) == 0) continue;
    phase2[maps[v].col] += maps[v].sign * c;
    if (maps[v].neg_col >= 0) phase2[maps[v].neg_col] -= c;
  }
  tab.load_costs(phase2);
  if (!tab.optimize(tab.first_artificial)) {
    sol.status = LpStatus::Unbounded;
    sol.pivots = tab.pivots;
    return sol;
  }
  std::vector<Rational> column_value(tab.columns, Rational(0));
  for (std::size_t r = 0; r < tab.rows.size(); ++r) column_value[tab.basis[r]] = tab.rows[r][tab.columns];
  sol.status = LpStatus::Optimal;
  sol.values.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const auto& cm = maps[v];
    Rational x = cm.offset + cm.sign * column_value[cm.col];
    if (cm.neg_col >= 0) x -= column_value[cm.neg_col];
    sol.values[v] = std::move(x);
  }
  sol.objective_value = lp.evaluate_objective(sol.values);
  sol.pivots = tab.pivots;
  return sol;
}

std::vector<Violation> check_point(const LinearProgram& lp, const std::vector<Rational>& values) {
  if (static_cast<int>(values.size()) != lp.num_variables()) {
    throw ValidationError("point has " + std::to_string(values.size()) + " values for " +
                          std::to_string(lp.num_variables()) + " variables");
  }
  std::vector<Violation> out;
  for (int v = 0; v < lp.num_variables(); ++v) {
    const auto& var = lp.variables()[v];
    if (var.lower && values[v] < *var.lower) {
      out.push_back({-1, v, var.name + " >= " + var.lower->get_str(), values[v] - *var.lower});
    }
    if (var.upper && values[v] > *var.upper) {
      out.push_back({-1, v, var.name + " <= " + var.upper->get_str(), *var.upper - values[v]});
    }
  }
  for (std::size_t c = 0; c < lp.constraints().size(); ++c) {
    const auto& row = lp.constraints()[c];
    const Rational lhs = row_activity(row, values);
    Rational slack;
    bool violated = false;
    switch (row.relation) {
      case Relation::LessEq:
        slack = row.rhs - lhs;
        violated = sgn(slack) < 0;
        break;
      case Relation::GreaterEq:
        slack = lhs - row.rhs;
        violated = sgn(slack) < 0;
        break;
      case Relation::Equal:
        slack = -abs(lhs - row.rhs);
        violated = sgn(slack) != 0;
        break;
    }
    if (violated) {
      const std::string name = row.label.empty() ? "c" + std::to_string(c) : row.label;
      out.push_back({static_cast<int>(c), -1, name, slack});
    }
  }
  return out;
}

std::vector<Violation> check_point(const LinearProgram& lp, const std::map<std::string, Rational>& values) {
  std::vector<Rational> dense(lp.num_variables());
  for (int v = 0; v < lp.num_variables(); ++v) {
    const auto& name = lp.variables()[v].name;
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("missing value for variable '" + name + "'");
    dense[v] = it->second;
  }
  return check_point(lp, dense);
}

}  // namespace flowdisc
