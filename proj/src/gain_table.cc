#include "ocsmatch/gain_table.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ocsmatch {

namespace {

double entry(const std::vector<double>& v, ExtendedCount k) {
  if (k.is_infinite() || k.value() >= static_cast<int>(v.size())) return 0.0;
  return v[k.value()];
}

double prefix(const std::vector<double>& v, ExtendedCount k) {
  const std::size_t end =
      k.is_infinite() ? v.size()
                      : std::min<std::size_t>(k.value(), v.size());
  return std::accumulate(v.begin(), v.begin() + end, 0.0);
}

double suffix(const std::vector<double>& v, ExtendedCount k) {
  if (k.is_infinite() || k.value() >= static_cast<int>(v.size())) return 0.0;
  return std::accumulate(v.begin() + k.value(), v.end(), 0.0);
}

void require_nonnegative(const std::vector<double>& v, const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] >= 0.0) || !std::isfinite(v[k])) {
      throw std::invalid_argument(std::string(what) + "(" + std::to_string(k) +
                                  ") must be finite and nonnegative");
    }
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file '" + path + "'");
  return nlohmann::json::parse(in);
}

}  // namespace

double GainTable::a_at(ExtendedCount k) const { return entry(a, k); }
double GainTable::b_at(ExtendedCount k) const { return entry(b, k); }
double GainTable::a_prefix(ExtendedCount k) const { return prefix(a, k); }
double GainTable::a_suffix(ExtendedCount k) const { return suffix(a, k); }

double GainTable::prepaid(ExtendedCount k) const {
  if (k.is_infinite() || k.value() < 1) return 0.0;
  const int n = k.value();
  return std::ldexp(std::pow(1.0 - gamma, n - 1) * gamma, -n - 1);
}

double GainTable::unmatched_bound(ExtendedCount k) const {
  if (k.is_infinite()) return 0.0;
  const int n = k.value();
  return std::ldexp(std::pow(1.0 - gamma, std::max(n - 1, 0)), -n);
}

void GainTable::validate() const {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("gain table '" + name +
                                "': a and b must be nonempty and equally long");
  }
  require_nonnegative(a, "a");
  require_nonnegative(b, "b");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gain table gamma outside [0,1]");
  }
  if (!(kappa >= 1.0 && kappa <= 2.0)) {
    throw std::invalid_argument("gain table kappa outside [1,2]");
  }
  // Prepaid amounts above the edge weight are covered only if a(0) >= gamma/2.
  if (a[0] < gamma / 2.0 - 1e-12) {
    throw std::invalid_argument("gain table '" + name + "': a(0) < gamma/2");
  }
}

GainTable GainTable::table_1a() {
  GainTable t;
  t.name = "1a";
  t.gamma = 1.0 / 16.0;
  t.kappa = 1.5;
  t.Gamma = 0.50503484;
  t.a = {0.24748256, 0.13684883, 0.06415997, 0.03009310, 0.01413332,
         0.00666576, 0.00318572, 0.00158503, 0.00088057};
  t.b = {0.25251744, 0.12877617, 0.06035174, 0.02827176, 0.01322521,
         0.00615855, 0.00282566, 0.00123280, 0.00044028};
  t.validate();
  return t;
}

GainTable GainTable::table_1b() {
  GainTable t;
  t.name = "1b";
  t.gamma = optimal_p().gamma;
  t.kappa = 1.5;
  t.Gamma = 0.508672;
  t.a = {0.24566361, 0.14597716, 0.06497349, 0.02892807, 0.01289279,
         0.00576587, 0.00260819, 0.00122399, 0.00063960};
  t.b = {0.25433639, 0.13150459, 0.05851601, 0.02602926, 0.01156523,
         0.00511883, 0.00223589, 0.00093180, 0.00031980};
  t.validate();
  return t;
}

double UnweightedDualTable::dalpha_at(ExtendedCount k) const {
  return entry(dalpha, k);
}
double UnweightedDualTable::dbeta_at(ExtendedCount k) const {
  return entry(dbeta, k);
}
double UnweightedDualTable::dalpha_prefix(ExtendedCount k) const {
  return prefix(dalpha, k);
}
double UnweightedDualTable::dalpha_suffix(ExtendedCount k) const {
  return suffix(dalpha, k);
}

double UnweightedDualTable::unmatched_mass(ExtendedCount k) const {
  if (k.is_infinite()) return 0.0;
  return recurrence.run_bound(k.value());
}

void UnweightedDualTable::validate() const {
  if (dalpha.empty() || dalpha.size() != dbeta.size()) {
    throw std::invalid_argument("unweighted table '" + name +
                                "': dalpha and dbeta must match in length");
  }
  if (k_max() + 1 > kRecurrenceCap) {
    throw std::invalid_argument("unweighted table longer than recurrence cap");
  }
  require_nonnegative(dalpha, "dalpha");
  require_nonnegative(dbeta, "dbeta");
}

UnweightedDualTable UnweightedDualTable::table_3() {
  UnweightedDualTable t;
  t.name = "t3";
  t.Gamma = 0.508986;
  t.dalpha = {0.24550678, 0.14574204, 0.06613120, 0.02907108, 0.01273424,
              0.00559236, 0.00248248, 0.00114193, 0.00058431};
  t.dbeta = {0.25449322, 0.13173982, 0.05886880, 0.02580320, 0.01126766,
             0.00490054, 0.00210436, 0.00086312, 0.00029216};
  t.validate();
  return t;
}

GainTable load_gain_table(const std::string& name_or_path) {
  if (name_or_path == "1a") return GainTable::table_1a();
  if (name_or_path == "1b") return GainTable::table_1b();
  const nlohmann::json j = read_json(name_or_path);
  if (j.value("kind", "") != "edge_weighted") {
    throw std::invalid_argument("'" + name_or_path +
                                "' is not an edge-weighted gain table");
  }
  GainTable t;
  t.name = j.value("name", name_or_path);
  t.gamma = j.at("gamma").get<double>();
  t.kappa = j.at("kappa").get<double>();
  t.Gamma = j.at("Gamma").get<double>();
  t.a = j.at("a").get<std::vector<double>>();
  t.b = j.at("b").get<std::vector<double>>();
  t.validate();
  return t;
}

UnweightedDualTable load_unweighted_table(const std::string& name_or_path) {
  if (name_or_path == "t3") return UnweightedDualTable::table_3();
  const nlohmann::json j = read_json(name_or_path);
  if (j.value("kind", "") != "unweighted") {
    throw std::invalid_argument("'" + name_or_path +
                                "' is not an unweighted dual table");
  }
  UnweightedDualTable t;
  t.name = j.value("name", name_or_path);
  t.Gamma = j.at("Gamma").get<double>();
  t.dalpha = j.at("dalpha").get<std::vector<double>>();
  t.dbeta = j.at("dbeta").get<std::vector<double>>();
  t.recurrence = RecurrenceTable::improved(j.value("p", optimal_p().p));
  t.validate();
  return t;
}

void save_gain_table_json(const GainTable& table, const std::string& path) {
  nlohmann::json j = {{"kind", "edge_weighted"}, {"name", table.name},
                      {"gamma", table.gamma},    {"kappa", table.kappa},
                      {"Gamma", table.Gamma},    {"a", table.a},
                      {"b", table.b}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void save_unweighted_table_json(const UnweightedDualTable& table,
                                const std::string& path) {
  nlohmann::json j = {{"kind", "unweighted"},
                      {"name", table.name},
                      {"Gamma", table.Gamma},
                      {"p", table.recurrence.p()},
                      {"dalpha", table.dalpha},
                      {"dbeta", table.dbeta}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string gain_table_csv(const GainTable& table) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(8);
  out << "k,a,b\n";
  for (int k = 0; k <= table.k_max(); ++k) {
    out << k << ',' << table.a[k] << ',' << table.b[k] << '\n';
  }
  return out.str();
}

std::string unweighted_table_csv(const UnweightedDualTable& table) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(8);
  out << "k,g,dalpha,beta\n";
  for (int k = 0; k <= table.k_max(); ++k) {
    out << k << ',' << table.recurrence[k] << ',' << table.dalpha[k] << ','
        << table.dbeta[k] << '\n';
  }
  return out.str();
}

}  // namespace ocsmatch
