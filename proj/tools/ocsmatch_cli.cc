// ocsmatch: command line front end.
// Exit status: 0 ok, 1 a check failed, 2 usage error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocsmatch/lp.h"
#include "ocsmatch/oracle.h"
#include "ocsmatch/primal_dual.h"
#include "ocsmatch/workbench.h"

using namespace ocsmatch;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Bad value for a flag that CLI11 itself could not see through.
struct UsageError : std::runtime_error {
  UsageError(const std::string& flag, const std::string& what)
      : std::runtime_error(flag + ": " + what) {}
};

struct Globals {
  std::uint64_t seed = 1;
  int trials = 1000;
  std::string table;
  std::string out;
  std::string format = "text";
};

// Writes to --out when given, else stdout.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("--out", "cannot open '" + g.out + "'");
  f << text;
}

template <class F>
auto as_usage(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag, e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(flag, e.what());
  } catch (const std::out_of_range& e) {
    throw UsageError(flag, e.what());
  }
}

// Loading user-named files: any failure is the flag's fault.
template <class F>
auto load_for(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw UsageError(flag, e.what());
  }
}

std::string fixed(double v, int digits = 8) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

// "0-1,1-2,0-2"
std::vector<Pair> parse_pairs(const std::string& text) {
  std::vector<Pair> pairs;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw UsageError("--pairs", "expected a-b, got '" + item + "'");
    }
    try {
      std::size_t used1 = 0;
      std::size_t used2 = 0;
      const std::string a = item.substr(0, dash);
      const std::string b = item.substr(dash + 1);
      const int x = std::stoi(a, &used1);
      const int y = std::stoi(b, &used2);
      if (used1 != a.size() || used2 != b.size() || x < 0 || y < 0 || x == y) {
        throw std::invalid_argument(item);
      }
      pairs.push_back({x, y});
    } catch (const std::exception&) {
      throw UsageError("--pairs", "bad pair '" + item + "'");
    }
  }
  if (pairs.empty()) throw UsageError("--pairs", "no pairs given");
  return pairs;
}

// Options shared by run and experiment.
struct EngineArgs {
  std::string instance;
  std::string gen;
  std::string engine = "edge_weighted";
  std::string selector = "improved";
  std::string tie_break;

  void attach(CLI::App* cmd) {
    auto* src = cmd->add_option("--instance", instance, "instance JSON file");
    cmd->add_option("--gen", gen, "generator spec, e.g. er_ut:8192:0.015625")
        ->excludes(src);
    cmd->add_option("--engine", engine)
        ->check(CLI::IsMember({"edge_weighted", "unweighted",
                               "perfect_correlation", "independent_greedy"}));
    cmd->add_option("--selector", selector,
                    "independent, warmup, improved or improved:p");
    cmd->add_option("--tie-break", tie_break, "smallest or reverse")
        ->check(CLI::IsMember({"smallest", "reverse"}));
  }

  Instance load(const Globals& g) const {
    if (!instance.empty()) {
      return load_for("--instance", [&] { return read_instance(instance); });
    }
    if (gen.empty()) throw UsageError("--instance", "give --instance or --gen");
    const GeneratorSpec spec = as_usage("--gen", [&] { return GeneratorSpec::parse(gen); });
    return as_usage("--gen", [&] { return generate(spec, g.seed); });
  }

  EngineSpec spec(const Globals& g) const {
    EngineSpec s;
    s.kind = EngineSpec::parse_kind(engine);
    if (!tie_break.empty()) s.tie_break = parse_tie_break(tie_break);
    if (!g.table.empty()) {
      if (s.kind == EngineSpec::Kind::kEdgeWeighted) {
        s.gain = load_for("--table", [&] { return load_gain_table(g.table); });
      } else {
        s.dual = load_for("--table", [&] { return load_unweighted_table(g.table); });
      }
    }
    return s;
  }

  SelectorKind selector_kind() const {
    return as_usage("--selector", [&] { return SelectorKind::parse(selector); });
  }
};

std::string table_name(const EngineSpec& spec) {
  return spec.kind == EngineSpec::Kind::kEdgeWeighted ? spec.gain.name
                                                      : spec.dual.name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online matching with correlated selection"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  app.add_option("--table", g.table, "1a, 1b, t3 or a table JSON file");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  // lp
  auto* lp = app.add_subcommand("lp", "factor-revealing programs");
  lp->require_subcommand(1);
  double gamma = 1.0 / 16.0;
  double kappa = 1.5;
  int kmax = 8;
  bool unweighted = false;
  bool print_lp = false;
  double tolerance = 1e-6;
  int steps = 16;

  auto* lp_solve = lp->add_subcommand("solve", "solve one program");
  lp_solve->add_option("--gamma", gamma, "OCS quality");
  lp_solve->add_option("--kappa", kappa, "deterministic-offer multiplier");
  lp_solve->add_option("--kmax", kmax, "largest tabulated k");
  lp_solve->add_flag("--unweighted", unweighted, "unweighted program with g_k at the optimal p");
  lp_solve->add_flag("--print-lp", print_lp, "list the program before solving");

  auto* lp_verify = lp->add_subcommand("verify", "check a table against its program");
  lp_verify->add_option("--tolerance", tolerance);

  auto* lp_sweep = lp->add_subcommand("sweep", "Gamma over kappa in [1,2]");
  lp_sweep->add_option("--gamma", gamma);
  lp_sweep->add_option("--kmax", kmax);
  lp_sweep->add_option("--steps", steps, "grid intervals")->check(CLI::PositiveNumber);

  // ocs
  auto* ocs = app.add_subcommand("ocs", "online correlated selection");
  ocs->require_subcommand(1);
  std::string ocs_selector = "improved";
  std::string pairs_text;
  int element = 0;
  auto* ocs_mc = ocs->add_subcommand("montecarlo", "never-selected frequencies");
  auto* ocs_enum = ocs->add_subcommand("enumerate", "exact never-selected probability");
  for (auto* cmd : {ocs_mc, ocs_enum}) {
    cmd->add_option("--selector", ocs_selector, "independent, warmup, improved or improved:p");
    cmd->add_option("--pairs", pairs_text, "pair sequence a-b,c-d,...");
    cmd->add_option("--element", element, "element to track")->check(CLI::NonNegativeNumber);
  }

  // run / experiment / gen
  EngineArgs run_args;
  bool check_invariants = false;
  auto* run = app.add_subcommand("run", "one engine run, transcript CSV");
  run_args.attach(run);
  run->add_flag("--check-invariants", check_invariants);

  EngineArgs exp_args;
  int threads = 1;
  bool full_rerun = false;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo ratio estimate");
  exp_args.attach(experiment);
  experiment->add_option("--threads", threads)->check(CLI::PositiveNumber);
  experiment->add_flag("--full-rerun", full_rerun, "re-run the engine every trial");

  std::string gen_spec;
  auto* gen = app.add_subcommand("gen", "write an instance file");
  gen->add_option("spec", gen_spec, "generator spec")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const bool csv = g.format == "csv";

    if (*lp_solve) {
      LpModel model;
      std::string label;
      if (unweighted) {
        model = as_usage("--kmax", [&] {
          return build_unweighted_lp(RecurrenceTable::improved(optimal_p().p), kmax);
        });
      } else {
        model = as_usage("--gamma/--kappa/--kmax",
                         [&] { return build_edge_weighted_lp(gamma, kappa, kmax); });
      }
      if (print_lp) std::cerr << lp_text(model);
      const LpSolution s = solve(model);
      std::ostringstream out;
      if (csv) {
        out << "name,value\n";
        for (int v = 0; v < model.n_vars(); ++v) {
          out << model.names[v] << ',' << std::setprecision(17) << s.values[v] << '\n';
        }
      } else {
        out << "Gamma = " << fixed(s.objective) << '\n' << solution_text(model, s);
      }
      emit(g, out.str());
      return s.status == LpSolution::Status::kOptimal ? kOk : kCheckFailed;
    }

    if (*lp_verify) {
      const std::string name = g.table.empty() ? "1b" : g.table;
      ViolationReport r;
      try {
        r = verify_table(load_gain_table(name), tolerance);
      } catch (const std::exception&) {
        r = verify_table(load_for("--table", [&] { return load_unweighted_table(name); }),
                         tolerance);
      }
      std::ostringstream out;
      if (csv) {
        out << "constraint,violation\n";
        for (const auto& [c, v] : r.violated) out << c << ',' << v << '\n';
      } else {
        out << "table " << name << ": max violation " << r.max_violation;
        if (r.max_violation > 0) out << " at " << r.worst;
        out << (r.ok() ? " (ok)\n" : " (FAILED)\n");
        for (const auto& [c, v] : r.violated) out << "  " << c << " " << v << '\n';
      }
      emit(g, out.str());
      return r.ok() ? kOk : kCheckFailed;
    }

    if (*lp_sweep) {
      std::vector<double> kappas;
      for (int l = 0; l <= steps; ++l) kappas.push_back(1.0 + static_cast<double>(l) / steps);
      const auto sweep = as_usage("--gamma/--kmax", [&] { return kappa_sweep(gamma, kmax, kappas); });
      std::ostringstream out;
      out << "kappa,Gamma\n" << std::setprecision(10);
      for (const SweepPoint& p : sweep) out << p.kappa << ',' << p.Gamma << '\n';
      emit(g, out.str());
      return kOk;
    }

    if (*ocs_mc || *ocs_enum) {
      const SelectorKind kind =
          as_usage("--selector", [&] { return SelectorKind::parse(ocs_selector); });
      const RecurrenceTable bound_table = kind.type == SelectorKind::Type::kWarmup
                                              ? RecurrenceTable::warmup()
                                              : RecurrenceTable::improved(kind.p);
      auto bound_of = [&](const std::vector<int>& runs) {
        double b = 1.0;
        for (int k : runs) {
          b *= kind.type == SelectorKind::Type::kIndependent ? std::ldexp(1.0, -k)
                                                             : bound_table.run_bound(k);
        }
        return b;
      };
      PairScenario scenario;
      if (pairs_text.empty()) {
        if (*ocs_enum) throw UsageError("--pairs", "required for enumerate");
        scenario = adversarial_sequence();
      } else {
        scenario.pairs = parse_pairs(pairs_text);
        RunQuery q{element, {}};
        for (std::size_t t = 0; t < scenario.pairs.size(); ++t) {
          if (scenario.pairs[t].contains(element)) q.indices.push_back(t);
        }
        if (q.indices.empty()) throw UsageError("--element", "not in any pair");
        scenario.queries.push_back(q);
      }
      bool ok = true;
      std::ostringstream out;
      out << std::setprecision(10);
      if (*ocs_mc) {
        const auto freq = monte_carlo_never_selected(kind, scenario, g.trials, g.seed);
        out << "element,runs,frequency,bound,std_error\n";
        for (std::size_t q = 0; q < freq.size(); ++q) {
          const RunQuery& query = scenario.queries[q];
          const auto runs = consecutive_decomposition(scenario.pairs, query.element, query.indices);
          const double b = bound_of(runs);
          const double se = std::sqrt(b * (1 - b) / g.trials);
          ok = ok && freq[q] <= b + 4 * se;
          std::string r;
          for (int k : runs) r += (r.empty() ? "" : " ") + std::to_string(k);
          out << query.element << ',' << r << ',' << freq[q] << ',' << b << ',' << se << '\n';
        }
      } else {
        const RunQuery& query = scenario.queries.front();
        const auto runs = consecutive_decomposition(scenario.pairs, query.element, query.indices);
        const double p = as_usage("--pairs", [&] {
          return exact_never_selected(kind, scenario.pairs, query.element, query.indices);
        });
        const double b = bound_of(runs);
        ok = p <= b + 1e-10;
        out << "element,probability,bound\n"
            << query.element << ',' << p << ',' << b << '\n';
      }
      emit(g, out.str());
      return ok ? kOk : kCheckFailed;
    }

    if (*run) {
      const Instance inst = run_args.load(g);
      const EngineSpec spec = as_usage("--engine", [&] { return run_args.spec(g); });
      const SelectorKind kind = spec.effective_selector(run_args.selector_kind());
      auto sel = new_selector(kind, g.seed);
      const EngineRun r =
          as_usage("--engine", [&] { return run_engine(inst, spec, *sel, check_invariants); });
      emit(g, transcript_csv(r.transcript));
      std::ostream& note = g.out.empty() ? std::cerr : std::cout;
      note << std::setprecision(10) << "engine=" << spec.name()
           << " table=" << table_name(spec) << " selector=" << kind.name()
           << " value=" << r.value << " pbar=" << r.pbar << " dual=" << r.dual
           << " opt=" << offline_optimum(inst) << '\n';
      if (check_invariants) {
        note << (r.report.ok() ? "invariants ok\n" : r.report.describe() + "\n");
        return r.report.ok() ? kOk : kCheckFailed;
      }
      return kOk;
    }

    if (*experiment) {
      const Instance inst = exp_args.load(g);
      const EngineSpec spec = as_usage("--engine", [&] { return exp_args.spec(g); });
      ExperimentOptions opt;
      opt.trials = g.trials;
      opt.master_seed = g.seed;
      opt.threads = threads;
      opt.full_rerun = full_rerun;
      const ExperimentResult r = as_usage("--engine", [&] {
        return run_experiment(inst, spec, exp_args.selector_kind(), opt);
      });
      std::cout << ExperimentResult::summary_header() << '\n' << r.summary_row() << '\n';
      if (!g.out.empty()) emit(g, r.trials_csv());
      return kOk;
    }

    if (*gen) {
      const GeneratorSpec spec = as_usage("spec", [&] { return GeneratorSpec::parse(gen_spec); });
      const Instance inst = as_usage("spec", [&] { return generate(spec, g.seed); });
      if (g.out.empty()) {
        std::cout << instance_to_json(inst) << '\n';
      } else {
        write_instance(inst, g.out);
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
