#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocsmatch/engine.h"
#include "ocsmatch/instance.h"
#include "ocsmatch/ocs.h"

namespace ocsmatch {

/// Instance generator, written as a colon-separated spec string:
///   ut:n                      upper triangular
///   er_ut:n:p[:seed]          random upper triangular, diagonal certain
///   nine                      upper triangular with n = 9
///   random:n:m:maxw:density:seed
///                             n offline, m online, weights on [0, maxw]
///   urandom:n:m:density:seed  same with unit weights
///   file:path                 instance JSON
struct GeneratorSpec {
  enum class Kind {
    kUpperTriangular,
    kErUpperTriangular,
    kNineVertex,
    kRandomBipartite,
    kRandomUnweighted,
    kFile,
  };

  Kind kind = Kind::kUpperTriangular;
  int n = 0;
  int m = 0;
  double p_edge = 0.0;
  double max_weight = 0.0;
  double density = 0.0;
  std::optional<std::uint64_t> seed;
  std::string path;

  /// Throws std::invalid_argument naming the offending field.
  static GeneratorSpec parse(const std::string& text);
  std::string str() const;
};

/// Deterministic given the spec; a spec without a seed uses `fallback_seed`.
Instance generate(const GeneratorSpec& spec, std::uint64_t fallback_seed = 0);

Instance upper_triangular(int n);
Instance er_upper_triangular(int n, double p_edge, std::uint64_t seed);
Instance nine_vertex_triangular();
Instance random_bipartite(int n_offline, int n_online, double max_weight,
                          double density, std::uint64_t seed);
Instance random_unweighted(int n_offline, int n_online, double density,
                           std::uint64_t seed);

struct ExperimentOptions {
  int trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  /// Re-run the whole engine per trial instead of replaying the fixed round
  /// structure against a fresh selector. Same results, slower.
  bool full_rerun = false;
};

struct ExperimentResult {
  std::string instance;
  std::string generator;
  int n_offline = 0;
  int n_online = 0;
  std::string engine;
  std::string table;
  std::string selector;
  std::uint64_t master_seed = 0;
  int trials = 0;
  double opt = 0.0;
  double pbar = 0.0;  // surrogate primal; equals the value for selector-free engines
  std::vector<double> values;  // indexed by trial
  double mean_value = 0.0;
  double mean_ratio = 0.0;
  double std_error = 0.0;  // of the ratio

  /// trial,value,opt,ratio
  std::string trials_csv() const;
  static std::string summary_header();
  std::string summary_row() const;
};

/// Throws std::invalid_argument when the engine cannot take the instance.
ExperimentResult run_experiment(const Instance& instance,
                                const EngineSpec& engine,
                                const SelectorKind& selector,
                                const ExperimentOptions& options);

/// Target element and the indices of its pairs within a pair sequence.
struct RunQuery {
  Element element;
  std::vector<std::size_t> indices;
};

struct PairScenario {
  std::vector<Pair> pairs;
  std::vector<RunQuery> queries;
};

/// 64 pairs in which element e_k (k = 1..6) sits in k consecutive pairs.
/// Each partner of e_k is offered an out-arc from a pair just before and
/// reappears just after, so the selections around e_k are pulled into other
/// chains as much as the selector allows.
PairScenario adversarial_sequence();

/// Frequencies over `trials` seeded selector runs with which each query's
/// element was selected in none of its indexed pairs.
std::vector<double> monte_carlo_never_selected(const SelectorKind& kind,
                                               const PairScenario& scenario,
                                               int trials,
                                               std::uint64_t master_seed);

}  // namespace ocsmatch
