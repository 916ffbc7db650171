#include "ocsmatch/workbench.h"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ocsmatch/oracle.h"
#include "ocsmatch/rng.h"

namespace ocsmatch {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

[[noreturn]] void bad_field(const std::string& spec, const std::string& field,
                            const std::string& why) {
  throw std::invalid_argument("generator '" + spec + "': " + field + " " + why);
}

long long parse_integer(const std::string& spec, const std::string& field,
                        const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    bad_field(spec, field, "is not an integer");
  }
  if (used != text.size()) bad_field(spec, field, "is not an integer");
  return v;
}

double parse_real(const std::string& spec, const std::string& field,
                  const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    bad_field(spec, field, "is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) {
    bad_field(spec, field, "is not a number");
  }
  return v;
}

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

void check_probability(const std::string& spec, const std::string& field,
                       double v) {
  if (!(v >= 0.0 && v <= 1.0)) bad_field(spec, field, "must lie in [0,1]");
}

int check_count(const std::string& spec, const std::string& field,
                long long v) {
  if (v < 1 || v > 1'000'000) bad_field(spec, field, "must be in 1..1000000");
  return static_cast<int>(v);
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty generator spec");
  GeneratorSpec spec;
  const std::string& kind = parts[0];
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw std::invalid_argument("generator '" + text +
                                  "': wrong number of fields");
    }
  };
  if (kind == "ut") {
    want(2, 2);
    spec.kind = Kind::kUpperTriangular;
    spec.n = check_count(text, "n", parse_integer(text, "n", parts[1]));
  } else if (kind == "er_ut") {
    want(3, 4);
    spec.kind = Kind::kErUpperTriangular;
    spec.n = check_count(text, "n", parse_integer(text, "n", parts[1]));
    spec.p_edge = parse_real(text, "p", parts[2]);
    check_probability(text, "p", spec.p_edge);
    if (parts.size() == 4) {
      spec.seed = static_cast<std::uint64_t>(
          parse_integer(text, "seed", parts[3]));
    }
  } else if (kind == "nine") {
    want(1, 1);
    spec.kind = Kind::kNineVertex;
  } else if (kind == "random") {
    want(6, 6);
    spec.kind = Kind::kRandomBipartite;
    spec.n = check_count(text, "n", parse_integer(text, "n", parts[1]));
    spec.m = check_count(text, "m", parse_integer(text, "m", parts[2]));
    spec.max_weight = parse_real(text, "maxw", parts[3]);
    if (!(spec.max_weight >= 0.001)) bad_field(text, "maxw", "must be >= 0.001");
    spec.density = parse_real(text, "density", parts[4]);
    check_probability(text, "density", spec.density);
    spec.seed =
        static_cast<std::uint64_t>(parse_integer(text, "seed", parts[5]));
  } else if (kind == "urandom") {
    want(5, 5);
    spec.kind = Kind::kRandomUnweighted;
    spec.n = check_count(text, "n", parse_integer(text, "n", parts[1]));
    spec.m = check_count(text, "m", parse_integer(text, "m", parts[2]));
    spec.density = parse_real(text, "density", parts[3]);
    check_probability(text, "density", spec.density);
    spec.seed =
        static_cast<std::uint64_t>(parse_integer(text, "seed", parts[4]));
  } else if (kind == "file") {
    if (text.size() <= 5) {
      throw std::invalid_argument("generator 'file:' needs a path");
    }
    spec.kind = Kind::kFile;
    spec.path = text.substr(5);
  } else {
    throw std::invalid_argument("unknown generator '" + kind + "'");
  }
  return spec;
}

std::string GeneratorSpec::str() const {
  const std::string s = seed ? std::to_string(*seed) : std::string();
  switch (kind) {
    case Kind::kUpperTriangular: return "ut:" + std::to_string(n);
    case Kind::kErUpperTriangular:
      return "er_ut:" + std::to_string(n) + ":" + number(p_edge) +
             (seed ? ":" + s : "");
    case Kind::kNineVertex: return "nine";
    case Kind::kRandomBipartite:
      return "random:" + std::to_string(n) + ":" + std::to_string(m) + ":" +
             number(max_weight) + ":" + number(density) + ":" + s;
    case Kind::kRandomUnweighted:
      return "urandom:" + std::to_string(n) + ":" + std::to_string(m) + ":" +
             number(density) + ":" + s;
    case Kind::kFile: return "file:" + path;
  }
  return "?";
}

Instance generate(const GeneratorSpec& spec, std::uint64_t fallback_seed) {
  const std::uint64_t seed = spec.seed.value_or(fallback_seed);
  switch (spec.kind) {
    case GeneratorSpec::Kind::kUpperTriangular: return upper_triangular(spec.n);
    case GeneratorSpec::Kind::kErUpperTriangular:
      return er_upper_triangular(spec.n, spec.p_edge, seed);
    case GeneratorSpec::Kind::kNineVertex: return nine_vertex_triangular();
    case GeneratorSpec::Kind::kRandomBipartite:
      return random_bipartite(spec.n, spec.m, spec.max_weight, spec.density,
                              seed);
    case GeneratorSpec::Kind::kRandomUnweighted:
      return random_unweighted(spec.n, spec.m, spec.density, seed);
    case GeneratorSpec::Kind::kFile: return read_instance(spec.path);
  }
  throw std::invalid_argument("unknown generator kind");
}

Instance upper_triangular(int n) {
  if (n < 1) throw std::invalid_argument("upper triangular needs n >= 1");
  Instance inst;
  inst.name = "ut:" + std::to_string(n);
  inst.generator = inst.name;
  inst.n_offline = n;
  inst.arrivals.resize(n);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) inst.arrivals[j].push_back({i, 1.0});
  }
  return inst;
}

Instance er_upper_triangular(int n, double p_edge, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("er upper triangular needs n >= 1");
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0,1]");
  }
  Instance inst;
  inst.name = "er_ut:" + std::to_string(n) + ":" + number(p_edge) + ":" +
              std::to_string(seed);
  inst.generator = inst.name;
  inst.seed = seed;
  inst.n_offline = n;
  inst.arrivals.resize(n);
  Rng rng(seed);
  for (int j = 0; j < n; ++j) {
    inst.arrivals[j].push_back({j, 1.0});
    for (int i = j + 1; i < n; ++i) {
      if (rng.bernoulli(p_edge)) inst.arrivals[j].push_back({i, 1.0});
    }
  }
  return inst;
}

Instance nine_vertex_triangular() {
  Instance inst = upper_triangular(9);
  inst.name = "nine";
  inst.generator = "nine";
  return inst;
}

Instance random_bipartite(int n_offline, int n_online, double max_weight,
                          double density, std::uint64_t seed) {
  if (n_offline < 1 || n_online < 1) {
    throw std::invalid_argument("random bipartite needs n, m >= 1");
  }
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("density must lie in [0,1]");
  }
  // Weights are multiples of 1/1000 in (0, max_weight].
  const auto steps = static_cast<std::uint64_t>(std::llround(max_weight * 1000));
  if (steps < 1) throw std::invalid_argument("max weight must be >= 0.001");
  Instance inst;
  inst.name = "random:" + std::to_string(n_offline) + ":" +
              std::to_string(n_online) + ":" + number(max_weight) + ":" +
              number(density) + ":" + std::to_string(seed);
  inst.generator = inst.name;
  inst.seed = seed;
  inst.n_offline = n_offline;
  inst.arrivals.resize(n_online);
  Rng rng(seed);
  for (int j = 0; j < n_online; ++j) {
    for (int i = 0; i < n_offline; ++i) {
      if (!rng.bernoulli(density)) continue;
      const double w = static_cast<double>(1 + rng.below(steps)) / 1000.0;
      inst.arrivals[j].push_back({i, w});
    }
  }
  return inst;
}

Instance random_unweighted(int n_offline, int n_online, double density,
                           std::uint64_t seed) {
  Instance inst = random_bipartite(n_offline, n_online, 1.0, density, seed);
  for (auto& arrival : inst.arrivals) {
    for (Edge& e : arrival) e.weight = 1.0;
  }
  inst.name = "urandom:" + std::to_string(n_offline) + ":" +
              std::to_string(n_online) + ":" + number(density) + ":" +
              std::to_string(seed);
  inst.generator = inst.name;
  return inst;
}

// ---------------------------------------------------------------------------

std::string ExperimentResult::trials_csv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "trial,value,opt,ratio\n";
  for (std::size_t t = 0; t < values.size(); ++t) {
    out << t << ',' << values[t] << ',' << opt << ','
        << (opt > 0.0 ? values[t] / opt : 1.0) << '\n';
  }
  return out.str();
}

std::string ExperimentResult::summary_header() {
  return "instance,engine,table,selector,trials,seed,opt,pbar,mean_value,"
         "mean_ratio,std_error";
}

std::string ExperimentResult::summary_row() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << instance << ',' << engine << ',' << table << ',' << selector << ','
      << trials << ',' << master_seed << ',' << opt << ',' << pbar << ','
      << mean_value << ',' << mean_ratio << ',' << std_error;
  return out.str();
}

ExperimentResult run_experiment(const Instance& instance,
                                const EngineSpec& engine,
                                const SelectorKind& selector,
                                const ExperimentOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (options.threads < 1) throw std::invalid_argument("threads must be >= 1");

  ExperimentResult result;
  result.instance = instance.name;
  result.generator = instance.generator;
  result.n_offline = instance.n_offline;
  result.n_online = instance.n_online();
  result.engine = engine.name();
  result.master_seed = options.master_seed;
  result.trials = options.trials;
  const SelectorKind effective = engine.effective_selector(selector);
  switch (engine.kind) {
    case EngineSpec::Kind::kEdgeWeighted: result.table = engine.gain.name; break;
    case EngineSpec::Kind::kUnweighted: result.table = engine.dual.name; break;
    default: result.table = "-";
  }
  result.selector = engine.uses_selector() ? effective.name() : "-";

  result.opt = offline_optimum(instance);

  // The round structure does not depend on the selector, so one run fixes
  // the candidates of every randomized round.
  auto probe = new_selector(effective, options.master_seed);
  const EngineRun base = run_engine(instance, engine, *probe);
  result.pbar = base.pbar;

  result.values.assign(options.trials, 0.0);
  auto work = [&](int first) {
    auto sel = new_selector(effective, 0);
    for (int t = first; t < options.trials; t += options.threads) {
      if (!engine.uses_selector()) {
        result.values[t] = base.value;
        continue;
      }
      sel->reset(trial_seed(options.master_seed, t));
      result.values[t] =
          options.full_rerun
              ? run_engine(instance, engine, *sel).value
              : replay_value(base.transcript, instance.n_offline, *sel);
    }
  };
  if (options.threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < options.threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction by trial index.
  double sum = 0.0;
  for (double v : result.values) sum += v;
  result.mean_value = sum / options.trials;
  const double scale = result.opt > 0.0 ? 1.0 / result.opt : 0.0;
  result.mean_ratio = result.opt > 0.0 ? result.mean_value * scale : 1.0;
  if (options.trials > 1) {
    double ss = 0.0;
    for (double v : result.values) {
      const double d = (v - result.mean_value) * scale;
      ss += d * d;
    }
    result.std_error = std::sqrt(ss / (options.trials - 1) / options.trials);
  }
  return result;
}

// ---------------------------------------------------------------------------

PairScenario adversarial_sequence() {
  PairScenario s;
  Element next = 0;
  s.pairs.push_back({next, next + 1});
  next += 2;
  for (int k = 1; k <= 6; ++k) {
    const Element target = next++;
    RunQuery q{target, {}};
    for (int r = 0; r < k; ++r) {
      const Element partner = next++;
      const Element before = next++;
      const Element after = next++;
      s.pairs.push_back({before, partner});
      q.indices.push_back(s.pairs.size());
      s.pairs.push_back({target, partner});
      s.pairs.push_back({partner, after});
    }
    s.queries.push_back(std::move(q));
  }
  return s;
}

std::vector<double> monte_carlo_never_selected(const SelectorKind& kind,
                                               const PairScenario& scenario,
                                               int trials,
                                               std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  auto selector = new_selector(kind, 0);
  std::vector<Element> chosen(scenario.pairs.size());
  std::vector<long long> misses(scenario.queries.size(), 0);
  for (int t = 0; t < trials; ++t) {
    selector->reset(trial_seed(master_seed, t));
    for (std::size_t i = 0; i < scenario.pairs.size(); ++i) {
      chosen[i] = selector->select(scenario.pairs[i]);
    }
    for (std::size_t q = 0; q < scenario.queries.size(); ++q) {
      const RunQuery& query = scenario.queries[q];
      bool hit = false;
      for (std::size_t i : query.indices) hit = hit || chosen[i] == query.element;
      misses[q] += !hit;
    }
  }
  std::vector<double> out;
  for (long long m : misses) out.push_back(static_cast<double>(m) / trials);
  return out;
}

}  // namespace ocsmatch
