#include "ocsmatch/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace ocsmatch {

// ---------------------------------------------------------------------------
// Offline optimum

int hopcroft_karp(int n_offline,
                  const std::vector<std::vector<int>>& neighbors) {
  const int n_online = static_cast<int>(neighbors.size());
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_online(n_online, -1);
  std::vector<int> match_offline(n_offline, -1);
  std::vector<int> dist(n_online);
  std::vector<std::size_t> cursor(n_online);

  auto bfs = [&] {
    std::queue<int> q;
    for (int j = 0; j < n_online; ++j) {
      dist[j] = match_online[j] < 0 ? 0 : kInf;
      if (dist[j] == 0) q.push(j);
    }
    bool found = false;
    while (!q.empty()) {
      const int j = q.front();
      q.pop();
      for (int i : neighbors[j]) {
        const int next = match_offline[i];
        if (next < 0) {
          found = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[j] + 1;
          q.push(next);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the layered graph.
  auto augment = [&](int root) {
    std::vector<int> path{root};
    while (!path.empty()) {
      const int j = path.back();
      bool advanced = false;
      while (cursor[j] < neighbors[j].size()) {
        const int i = neighbors[j][cursor[j]++];
        const int next = match_offline[i];
        if (next < 0) {
          // Flip the alternating path ending at i.
          int free_offline = i;
          for (auto it = path.rbegin(); it != path.rend(); ++it) {
            const int prev = match_online[*it];
            match_online[*it] = free_offline;
            match_offline[free_offline] = *it;
            free_offline = prev;
          }
          return true;
        }
        if (dist[next] == dist[j] + 1) {
          path.push_back(next);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        dist[j] = kInf;
        path.pop_back();
      }
    }
    return false;
  };

  int size = 0;
  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (int j = 0; j < n_online; ++j) {
      if (match_online[j] < 0 && augment(j)) ++size;
    }
  }
  return size;
}

double hungarian_max_weight(const std::vector<std::vector<double>>& weights,
                            int n_offline) {
  const int n_online = static_cast<int>(weights.size());
  const int n = std::max(n_online, n_offline);
  if (n == 0) return 0.0;
  // Minimize -w over an n x n square, 1-indexed with potentials u, v.
  auto cost = [&](int row, int col) {
    if (row > n_online || col > n_offline) return 0.0;
    return -weights[row - 1][col - 1];
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    p[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int row0 = p[col0];
      double delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = cost(row0, col) - u[row0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[p[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (p[col0] != 0);
    do {
      const int col1 = way[col0];
      p[col0] = p[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  double total = 0.0;
  for (int col = 1; col <= n; ++col) {
    if (p[col] > 0) total -= cost(p[col], col);
  }
  return total;
}

double offline_optimum(const Instance& instance) {
  instance.validate();
  double common = -1.0;
  bool uniform = true;
  for (const auto& arrival : instance.arrivals) {
    for (const Edge& e : arrival) {
      if (e.weight <= 0.0) continue;
      if (common < 0.0) common = e.weight;
      uniform = uniform && e.weight == common;
    }
  }
  if (common < 0.0) return 0.0;
  if (uniform) {
    std::vector<std::vector<int>> neighbors;
    neighbors.reserve(instance.arrivals.size());
    for (const auto& arrival : instance.arrivals) {
      std::vector<int> ids;
      for (const Edge& e : arrival) {
        if (e.weight > 0.0) ids.push_back(e.offline);
      }
      neighbors.push_back(std::move(ids));
    }
    return common * hopcroft_karp(instance.n_offline, neighbors);
  }
  std::vector<std::vector<double>> dense;
  dense.reserve(instance.arrivals.size());
  for (int j = 0; j < instance.n_online(); ++j) {
    dense.push_back(instance.dense_weights(j));
  }
  return hungarian_max_weight(dense, instance.n_offline);
}

double brute_force_optimum(const Instance& instance) {
  instance.validate();
  std::vector<bool> used(instance.n_offline, false);
  std::function<double(int)> best = [&](int j) -> double {
    if (j == instance.n_online()) return 0.0;
    double result = best(j + 1);
    for (const Edge& e : instance.arrivals[j]) {
      if (used[e.offline]) continue;
      used[e.offline] = true;
      result = std::max(result, e.weight + best(j + 1));
      used[e.offline] = false;
    }
    return result;
  };
  return best(0);
}

// ---------------------------------------------------------------------------
// Exact selector distributions

namespace {

// Per-element memory carried between pairs. Warmup: 0 unknown, 1 selected,
// 2 not selected. Improved: 0 no pending arc, 1 pending arc from a sender
// that selected the element, 2 pending arc from one that did not.
using Memory = std::vector<std::uint8_t>;
using Branches = std::map<std::pair<std::uint64_t, Memory>, double>;

}  // namespace

std::vector<SelectionOutcome> exact_selection_distribution(
    const SelectorKind& kind, std::span<const Pair> pairs, int max_pairs) {
  if (max_pairs > 63) throw std::length_error("at most 63 pairs supported");
  if (static_cast<int>(pairs.size()) > max_pairs) {
    throw std::length_error("exact enumeration limited to " +
                            std::to_string(max_pairs) + " pairs, got " +
                            std::to_string(pairs.size()));
  }
  const double p = kind.p;
  if (kind.type == SelectorKind::Type::kImproved && !(p > 0.0 && p < 1.0)) {
    throw std::domain_error("improved selector needs 0 < p < 1");
  }
  Element largest = -1;
  for (const Pair& pair : pairs) {
    if (pair.first == pair.second || pair.first < 0 || pair.second < 0) {
      throw std::invalid_argument("degenerate or negative pair");
    }
    largest = std::max({largest, pair.first, pair.second});
  }

  Branches current;
  current[{0, Memory(largest + 1, 0)}] = 1.0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const Element x[2] = {pairs[t].first, pairs[t].second};
    Branches next;
    for (const auto& [key, prob] : current) {
      const auto& [choices, memory] = key;
      auto emit = [&](int selected, double weight, const Memory& after) {
        const std::uint64_t c =
            choices | (static_cast<std::uint64_t>(selected) << t);
        next[{c, after}] += prob * weight;
      };
      switch (kind.type) {
        case SelectorKind::Type::kIndependent:
          emit(0, 0.5, memory);
          emit(1, 0.5, memory);
          break;
        case SelectorKind::Type::kWarmup: {
          for (int l = 0; l < 2; ++l) {
            for (int m = 0; m < 2; ++m) {
              Memory after = memory;
              after[x[1 - m]] = 0;
              after[x[m]] = l == m ? 1 : 2;
              emit(l, 0.125, after);
            }
          }
          Memory cleared = memory;
          cleared[x[0]] = cleared[x[1]] = 0;
          for (int m = 0; m < 2; ++m) {
            switch (memory[x[m]]) {
              case 1: emit(1 - m, 0.25, cleared); break;
              case 2: emit(m, 0.25, cleared); break;
              default:
                emit(0, 0.125, cleared);
                emit(1, 0.125, cleared);
            }
          }
          break;
        }
        case SelectorKind::Type::kImproved: {
          for (int selected = 0; selected < 2; ++selected) {
            for (int toward = 0; toward < 2; ++toward) {
              Memory after = memory;
              after[x[1 - toward]] = 0;
              after[x[toward]] = selected == toward ? 1 : 2;
              emit(selected, p / 4.0, after);
            }
          }
          Memory cleared = memory;
          cleared[x[0]] = cleared[x[1]] = 0;
          int offers[2];
          int n_offers = 0;
          for (int m = 0; m < 2; ++m) {
            if (memory[x[m]] != 0) offers[n_offers++] = m;
          }
          if (n_offers == 0) {
            emit(0, (1.0 - p) / 2.0, cleared);
            emit(1, (1.0 - p) / 2.0, cleared);
          }
          for (int o = 0; o < n_offers; ++o) {
            const int m = offers[o];
            const int selected = memory[x[m]] == 1 ? 1 - m : m;
            emit(selected, (1.0 - p) / n_offers, cleared);
          }
          break;
        }
      }
    }
    current = std::move(next);
  }

  std::map<std::uint64_t, double> merged;
  for (const auto& [key, prob] : current) merged[key.first] += prob;
  std::vector<SelectionOutcome> out;
  out.reserve(merged.size());
  for (const auto& [choices, prob] : merged) out.push_back({choices, prob});
  return out;
}

double never_selected(std::span<const SelectionOutcome> distribution,
                      std::span<const Pair> pairs, Element element,
                      std::span<const std::size_t> indices) {
  for (std::size_t t : indices) {
    if (t >= pairs.size()) throw std::out_of_range("pair index out of range");
    if (!pairs[t].contains(element)) {
      throw std::invalid_argument("pair " + std::to_string(t) +
                                  " does not contain element " +
                                  std::to_string(element));
    }
  }
  double total = 0.0;
  for (const SelectionOutcome& o : distribution) {
    bool hit = false;
    for (std::size_t t : indices) {
      const Element chosen =
          ((o.choices >> t) & 1U) ? pairs[t].second : pairs[t].first;
      hit = hit || chosen == element;
    }
    if (!hit) total += o.probability;
  }
  return total;
}

double exact_never_selected(const SelectorKind& kind,
                            std::span<const Pair> pairs, Element element,
                            std::span<const std::size_t> indices) {
  const auto distribution = exact_selection_distribution(kind, pairs);
  return never_selected(distribution, pairs, element, indices);
}

ExactValue exact_algorithm_value(const Instance& instance,
                                 const EngineSpec& engine,
                                 const SelectorKind& selector, int max_rounds) {
  ExactValue out;
  const SelectorKind effective = engine.effective_selector(selector);
  auto probe = new_selector(effective, 0);
  const EngineRun run = run_engine(instance, engine, *probe);
  out.pbar = run.pbar;
  if (engine.kind == EngineSpec::Kind::kPerfectCorrelation) {
    out.expected = run.value;
    return out;
  }
  std::vector<Pair> pairs;
  for (const TranscriptRecord& r : run.transcript) {
    if (r.outcome.type == RoundType::kRandomized) {
      pairs.push_back({r.outcome.i1, r.outcome.i2});
    }
  }
  out.randomized_rounds = static_cast<int>(pairs.size());
  if (out.randomized_rounds > max_rounds) {
    throw std::length_error("instance has " + std::to_string(pairs.size()) +
                            " randomized rounds; exact value limited to " +
                            std::to_string(max_rounds));
  }
  for (const SelectionOutcome& o :
       exact_selection_distribution(effective, pairs, max_rounds)) {
    out.expected += o.probability *
                    value_for_choices(run.transcript, instance.n_offline,
                                      o.choices);
  }
  return out;
}

}  // namespace ocsmatch
