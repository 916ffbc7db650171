#include "ocsmatch/lp.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ocsmatch {

namespace {

constexpr double kEps = 1e-9;
constexpr double kCertify = 1e-8;

std::string indexed(const char* base, int k) {
  return std::string(base) + "[" + std::to_string(k) + "]";
}

// Dense tableau: rows 0..m-1 are constraints, row m the objective row holding
// reduced costs z_j - c_j; the last column is the right-hand side.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return cells_[r * (cols_ + 1) + c]; }
  double at(int r, int c) const { return cells_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
    ++pivots_;
  }

  // Rebuilds the objective row for maximizing c . x under the current basis.
  void price(const std::vector<double>& c) {
    for (int j = 0; j <= cols_; ++j) {
      double z = j < cols_ ? -c[j] : 0.0;
      for (int i = 0; i < rows_; ++i) z += c[basis_[i]] * at(i, j);
      at(rows_, j) = z;
    }
  }

  // Bland's rule: entering column is the lowest index with negative reduced
  // cost; ratio ties go to the lowest basic variable index. Returns false if
  // unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (allowed[j] && at(rows_, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double coef = at(i, enter);
        if (coef <= kEps) continue;
        const double ratio = rhs(i) / coef;
        if (leave < 0 || ratio < best - kEps) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + kEps && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  int pivots() const { return pivots_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> cells_;
  std::vector<int> basis_;
  int pivots_ = 0;
};

}  // namespace

double LpConstraint::activity(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
  return s;
}

double LpConstraint::violation(const std::vector<double>& x) const {
  const double lhs = activity(x);
  return relation == Relation::kLessEqual ? lhs - rhs : rhs - lhs;
}

int LpModel::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int LpModel::add_var(std::string name, double objective_coefficient) {
  names.push_back(std::move(name));
  objective.push_back(objective_coefficient);
  for (auto& c : constraints) c.row.push_back(0.0);
  return n_vars() - 1;
}

LpConstraint& LpModel::add_constraint(std::string name, Relation relation,
                                      double rhs) {
  constraints.push_back({std::move(name),
                         std::vector<double>(names.size(), 0.0), relation,
                         rhs});
  return constraints.back();
}

void LpModel::validate() const {
  if (objective.size() != names.size()) {
    throw std::invalid_argument("objective length differs from variable count");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective");
  }
  for (const auto& c : constraints) {
    if (c.row.size() != names.size()) {
      throw std::invalid_argument("constraint '" + c.name + "' is ragged");
    }
    if (!std::isfinite(c.rhs) ||
        !std::all_of(c.row.begin(), c.row.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw std::invalid_argument("constraint '" + c.name +
                                  "' has a non-finite entry");
    }
  }
}

double LpSolution::value(const LpModel& model, const std::string& name) const {
  const int j = model.index_of(name);
  if (j < 0) throw std::out_of_range("no LP variable named '" + name + "'");
  return values.at(j);
}

const char* status_name(LpSolution::Status status) {
  switch (status) {
    case LpSolution::Status::kOptimal: return "optimal";
    case LpSolution::Status::kInfeasible: return "infeasible";
    case LpSolution::Status::kUnbounded: return "unbounded";
  }
  return "?";
}

LpSolution solve(const LpModel& model) {
  model.validate();
  const int n = model.n_vars();
  const int m = static_cast<int>(model.constraints.size());

  // Normalize to nonnegative right-hand sides.
  std::vector<LpConstraint> rows = model.constraints;
  for (auto& c : rows) {
    if (c.rhs < 0.0) {
      for (double& v : c.row) v = -v;
      c.rhs = -c.rhs;
      c.relation = c.relation == Relation::kLessEqual ? Relation::kGreaterEqual
                                                      : Relation::kLessEqual;
    }
  }
  int n_art = 0;
  for (const auto& c : rows) n_art += c.relation == Relation::kGreaterEqual;

  const int cols = n + m + n_art;
  Tableau t(m, cols);
  int next_art = n + m;
  std::vector<bool> is_art(cols, false);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.at(i, j) = rows[i].row[j];
    t.rhs(i) = rows[i].rhs;
    if (rows[i].relation == Relation::kLessEqual) {
      t.at(i, n + i) = 1.0;
      t.basis()[i] = n + i;
    } else {
      t.at(i, n + i) = -1.0;
      t.at(i, next_art) = 1.0;
      is_art[next_art] = true;
      t.basis()[i] = next_art++;
    }
  }

  LpSolution out;
  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
      if (is_art[j]) phase1[j] = -1.0;
    }
    t.price(phase1);
    t.optimize(allowed);
    if (t.at(m, cols) < -1e-8) {
      out.status = LpSolution::Status::kInfeasible;
      out.pivots = t.pivots();
      return out;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!is_art[t.basis()[i]]) continue;
      for (int j = 0; j < n + m; ++j) {
        if (std::abs(t.at(i, j)) > kEps) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (int j = 0; j < cols; ++j) {
      if (is_art[j]) allowed[j] = false;
    }
  }

  std::vector<double> phase2(cols, 0.0);
  std::copy(model.objective.begin(), model.objective.end(), phase2.begin());
  t.price(phase2);
  out.pivots = t.pivots();
  if (!t.optimize(allowed)) {
    out.status = LpSolution::Status::kUnbounded;
    out.pivots = t.pivots();
    return out;
  }
  out.pivots = t.pivots();

  out.values.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis()[i];
    if (b < n) out.values[b] = std::max(0.0, t.rhs(i));
  }
  out.status = LpSolution::Status::kOptimal;
  out.objective = 0.0;
  for (int j = 0; j < n; ++j) out.objective += model.objective[j] * out.values[j];

  const ViolationReport report = check_point(model, out.values, kCertify);
  if (!report.ok()) {
    throw std::runtime_error("simplex certificate failed: constraint '" +
                             report.worst + "' violated by " +
                             std::to_string(report.max_violation));
  }
  if (std::abs(out.objective - t.at(m, cols)) > kCertify * (1.0 + std::abs(out.objective))) {
    throw std::runtime_error("simplex certificate failed: objective mismatch");
  }
  return out;
}

ViolationReport check_point(const LpModel& model, const std::vector<double>& x,
                            double tolerance) {
  if (static_cast<int>(x.size()) != model.n_vars()) {
    throw std::invalid_argument("point has the wrong dimension");
  }
  ViolationReport report;
  report.tolerance = tolerance;
  auto note = [&](const std::string& name, double v) {
    if (v > report.max_violation) {
      report.max_violation = v;
      report.worst = name;
    }
    if (v > tolerance) report.violated.emplace_back(name, v);
  };
  for (int j = 0; j < model.n_vars(); ++j) {
    note(model.names[j] + ">=0", -x[j]);
  }
  for (const auto& c : model.constraints) note(c.name, c.violation(x));
  return report;
}

LpModel build_edge_weighted_lp(double gamma, double kappa, int k_max) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0,1]");
  }
  if (!(kappa >= 1.0 && kappa <= 2.0)) {
    throw std::invalid_argument("kappa must lie in [1,2]");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");

  LpModel model;
  const int G = model.add_var("Gamma", 1.0);
  std::vector<int> a(k_max + 1);
  std::vector<int> b(k_max + 1);
  for (int k = 0; k <= k_max; ++k) a[k] = model.add_var(indexed("a", k));
  for (int k = 0; k <= k_max; ++k) b[k] = model.add_var(indexed("b", k));

  // Gain split, deterministic rounds.
  for (int k = 0; k <= k_max; ++k) {
    auto& c = model.add_constraint(
        indexed("split-det", k), Relation::kLessEqual,
        std::ldexp(std::pow(1.0 - gamma, std::max(k - 1, 0)), -k));
    for (int l = k; l <= k_max; ++l) c.row[a[l]] = 1.0;
    c.row[b[k]] = kappa;
  }
  // Gain split, randomized rounds.
  {
    auto& c = model.add_constraint(indexed("split-rand", 0),
                                   Relation::kLessEqual, 0.5);
    c.row[a[0]] = c.row[b[0]] = 1.0;
  }
  for (int k = 1; k <= k_max; ++k) {
    auto& c = model.add_constraint(
        indexed("split-rand", k), Relation::kLessEqual,
        std::ldexp(std::pow(1.0 - gamma, k - 1) * (1.0 + gamma), -k - 1));
    c.row[a[k]] = c.row[b[k]] = 1.0;
  }
  {
    auto& c = model.add_constraint("prepaid", Relation::kGreaterEqual,
                                   gamma / 2.0);
    c.row[a[0]] = 1.0;
  }
  {
    auto& c = model.add_constraint("alpha-inf", Relation::kGreaterEqual, 0.0);
    for (int l = 0; l <= k_max; ++l) c.row[a[l]] = 1.0;
    c.row[G] = -1.0;
  }
  for (int k = 0; k <= k_max; ++k) {
    auto& c = model.add_constraint(indexed("feas-other", k),
                                   Relation::kGreaterEqual, 0.0);
    for (int l = 0; l < k; ++l) c.row[a[l]] = 1.0;
    c.row[b[k]] = 2.0;
    c.row[G] = -1.0;
  }
  for (int k = 0; k <= k_max; ++k) {
    auto& c = model.add_constraint(indexed("feas-chosen", k),
                                   Relation::kGreaterEqual, 0.0);
    for (int l = 0; l <= k; ++l) c.row[a[l]] = 1.0;
    c.row[b[k]] = kappa;
    c.row[G] = -1.0;
  }
  return model;
}

LpModel build_unweighted_lp(const RecurrenceTable& g, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (k_max + 1 >= static_cast<int>(g.values().size())) {
    throw std::invalid_argument("recurrence table does not reach k_max + 1");
  }
  LpModel model;
  const int G = model.add_var("Gamma", 1.0);
  std::vector<int> da(k_max + 1);
  std::vector<int> db(k_max + 1);
  for (int k = 0; k <= k_max; ++k) da[k] = model.add_var(indexed("dalpha", k));
  for (int k = 0; k <= k_max; ++k) db[k] = model.add_var(indexed("dbeta", k));

  for (int k = 0; k <= k_max; ++k) {
    auto& c = model.add_constraint(
        indexed("split", k), Relation::kLessEqual,
        std::ldexp(g[k], -k) - std::ldexp(g[k + 1], -k - 1));
    c.row[da[k]] = c.row[db[k]] = 1.0;
  }
  for (int k = 0; k <= k_max; ++k) {
    auto& c = model.add_constraint(indexed("feas", k), Relation::kGreaterEqual,
                                   0.0);
    for (int l = 0; l < k; ++l) c.row[da[l]] = 1.0;
    c.row[db[k]] = 2.0;
    c.row[G] = -1.0;
  }
  {
    auto& c = model.add_constraint("alpha-inf", Relation::kGreaterEqual, 0.0);
    for (int l = 0; l <= k_max; ++l) c.row[da[l]] = 1.0;
    c.row[G] = -1.0;
  }
  for (int k = 0; k < k_max; ++k) {
    auto& c = model.add_constraint(indexed("monotone", k),
                                   Relation::kGreaterEqual, 0.0);
    c.row[db[k]] = 1.0;
    c.row[db[k + 1]] = -1.0;
  }
  return model;
}

ViolationReport verify_table(const GainTable& table, double tolerance) {
  const LpModel model =
      build_edge_weighted_lp(table.gamma, table.kappa, table.k_max());
  std::vector<double> x;
  x.push_back(table.Gamma);
  x.insert(x.end(), table.a.begin(), table.a.end());
  x.insert(x.end(), table.b.begin(), table.b.end());
  return check_point(model, x, tolerance);
}

ViolationReport verify_table(const UnweightedDualTable& table,
                             double tolerance) {
  const LpModel model = build_unweighted_lp(table.recurrence, table.k_max());
  std::vector<double> x;
  x.push_back(table.Gamma);
  x.insert(x.end(), table.dalpha.begin(), table.dalpha.end());
  x.insert(x.end(), table.dbeta.begin(), table.dbeta.end());
  return check_point(model, x, tolerance);
}

GainTable gain_table_from_solution(const LpSolution& solution, double gamma,
                                   double kappa, int k_max) {
  if (solution.status != LpSolution::Status::kOptimal) {
    throw std::invalid_argument("LP solution is not optimal");
  }
  GainTable t;
  t.name = "lp";
  t.gamma = gamma;
  t.kappa = kappa;
  t.Gamma = solution.values.at(0);
  t.a.assign(solution.values.begin() + 1, solution.values.begin() + 2 + k_max);
  t.b.assign(solution.values.begin() + 2 + k_max,
             solution.values.begin() + 3 + 2 * k_max);
  t.validate();
  return t;
}

UnweightedDualTable unweighted_table_from_solution(const LpSolution& solution,
                                                   const RecurrenceTable& g,
                                                   int k_max) {
  if (solution.status != LpSolution::Status::kOptimal) {
    throw std::invalid_argument("LP solution is not optimal");
  }
  UnweightedDualTable t;
  t.name = "lp";
  t.recurrence = g;
  t.Gamma = solution.values.at(0);
  t.dalpha.assign(solution.values.begin() + 1,
                  solution.values.begin() + 2 + k_max);
  t.dbeta.assign(solution.values.begin() + 2 + k_max,
                 solution.values.begin() + 3 + 2 * k_max);
  t.validate();
  return t;
}

std::vector<SweepPoint> kappa_sweep(double gamma, int k_max,
                                    const std::vector<double>& kappas) {
  std::vector<SweepPoint> out;
  out.reserve(kappas.size());
  for (double kappa : kappas) {
    const LpSolution s = solve(build_edge_weighted_lp(gamma, kappa, k_max));
    if (s.status != LpSolution::Status::kOptimal) {
      throw std::runtime_error("kappa sweep: LP not optimal at kappa " +
                               std::to_string(kappa));
    }
    out.push_back({kappa, s.objective});
  }
  return out;
}

std::string lp_text(const LpModel& model) {
  std::ostringstream out;
  out << std::setprecision(12);
  auto terms = [&](const std::vector<double>& row) {
    bool first = true;
    for (int j = 0; j < model.n_vars(); ++j) {
      if (row[j] == 0.0) continue;
      const double v = row[j];
      if (!first) out << (v < 0 ? " - " : " + ");
      else if (v < 0) out << "-";
      if (std::abs(v) != 1.0) out << std::abs(v) << " ";
      out << model.names[j];
      first = false;
    }
    if (first) out << "0";
  };
  out << "maximize\n  obj: ";
  terms(model.objective);
  out << "\nsubject to\n";
  for (const auto& c : model.constraints) {
    out << "  " << c.name << ": ";
    terms(c.row);
    out << (c.relation == Relation::kLessEqual ? " <= " : " >= ") << c.rhs
        << "\n";
  }
  out << "bounds\n  all variables >= 0\nend\n";
  return out.str();
}

std::string solution_text(const LpModel& model, const LpSolution& solution) {
  std::ostringstream out;
  out << "status " << status_name(solution.status) << "\n";
  if (solution.status != LpSolution::Status::kOptimal) return out.str();
  out << std::fixed << std::setprecision(8);
  out << "objective " << solution.objective << "\n";
  for (int j = 0; j < model.n_vars(); ++j) {
    out << model.names[j] << " " << solution.values[j] << "\n";
  }
  return out.str();
}

}  // namespace ocsmatch
