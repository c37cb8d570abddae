// SPDX-License-Identifier: Apache-2.0
//
// Monitor placement: choose m candidate rows, shared by every harmonic order,
// minimizing the 1/h-weighted sum of per-order coherences of the stacked real
// sensing matrices. A genetic algorithm searches the row subsets.
#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hse/cs_analysis.hpp"
#include "hse/linalg.hpp"
#include "hse/measurement.hpp"
#include "hse/network.hpp"
#include "hse/rng.hpp"

namespace hse {

struct GaParams {
  int population_size = 100;
  int generations = 300;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  int elitism_count = 2;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (population_size < 2) throw ArgumentError("population_size must be >= 2");
    if (generations < 0) throw ArgumentError("generations must be >= 0");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
      throw ArgumentError("crossover_rate must lie in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
      throw ArgumentError("mutation_rate must lie in [0, 1]");
    if (elitism_count < 0 || elitism_count > population_size)
      throw ArgumentError("elitism_count must lie in [0, population_size]");
  }
};

enum class PlacementKind { voltage, current };

inline const char* to_string(PlacementKind k) noexcept {
  return k == PlacementKind::voltage ? "voltage" : "current";
}

/// One monitor channel. Voltage channels sit at `bus_id`; current channels
/// measure branch `branch` at its from end (`bus_id` = from bus).
struct Placement {
  PlacementKind kind = PlacementKind::voltage;
  Index row = 0;
  int bus_id = 0;
  Index branch = -1;
  int to_bus_id = 0;
};

struct SensingDesign {
  std::vector<Index> selected_rows;  ///< sorted, distinct
  std::vector<Placement> monitors;
  std::vector<int> orders;
  std::vector<Matrix> per_order_H;       ///< stacked real 2m x 2N_b, aligned with `orders`
  std::vector<double> per_order_terms;   ///< unweighted coherence term per order
  double objective = std::numeric_limits<double>::infinity();
  int sparsity_k = 0;
  bool full_rank = false;        ///< every per-order matrix has rank min(m, N_b)
  bool spark_certified = false;  ///< 1 + 1/mu > 2k holds at every order
  std::vector<double> best_history;  ///< best fitness after each generation

  Index row_count() const noexcept { return static_cast<Index>(selected_rows.size()); }

  const Matrix& sensing_matrix(int h) const {
    for (std::size_t i = 0; i < orders.size(); ++i)
      if (orders[i] == h) return per_order_H[i];
    throw ArgumentError("design has no order " + std::to_string(h));
  }
};

/// Per-order score of a row subset: coherence of the column-normalized stacked
/// real matrix (max |Gram - I|), plus the feasibility facts the GA needs.
struct OrderScore {
  double coherence = std::numeric_limits<double>::infinity();
  double complex_coherence = 1.0;
  bool zero_column = false;
  bool full_rank = false;
};

/// Evaluates row subsets against a fixed set of candidate matrices.
///
/// For the stacked matrix S = [[Re H, -Im H], [Im H, Re H]] the Gram matrix is
/// [[Re G, -Im G], [Im G, Re G]] with G = H^H H, and columns n and N_b + n share
/// the norm |H_n|. The stacked coherence is therefore the larger of
/// max_{i != j} |Re G_ij| and max_{i,j} |Im G_ij| on the normalized G.
class DesignEvaluator {
 public:
  DesignEvaluator(const std::vector<CandidateMatrix>& candidates, int sparsity_k)
      : candidates_(&candidates), k_(sparsity_k) {
    if (candidates.empty()) throw ArgumentError("no candidate matrices");
    for (const auto& c : candidates) {
      if (c.rows.rows() != candidates.front().rows.rows() ||
          c.rows.cols() != candidates.front().rows.cols())
        throw ArgumentError("candidate matrices differ in shape across orders");
      abs2_.push_back(c.rows.cwiseAbs2());
    }
  }

  Index candidate_rows() const { return candidates_->front().rows.rows(); }
  Index bus_count() const { return candidates_->front().rows.cols(); }
  std::size_t order_count() const { return candidates_->size(); }
  const CandidateMatrix& candidate(std::size_t i) const { return (*candidates_)[i]; }

  OrderScore score_order(std::size_t oi, const std::vector<Index>& rows, bool check_rank) const {
    OrderScore s;
    const CandidateMatrix& c = (*candidates_)[oi];
    const Index n = c.rows.cols();
    const Index m = static_cast<Index>(rows.size());
    Vector norm2 = Vector::Zero(n);
    for (Index r : rows) norm2 += abs2_[oi].row(r).transpose();
    if (norm2.minCoeff() <= 0.0) {
      s.zero_column = true;
      return s;
    }
    CMatrix h(m, n);
    for (Index i = 0; i < m; ++i) h.row(i) = c.rows.row(rows[static_cast<std::size_t>(i)]);
    const Vector inv = norm2.cwiseSqrt().cwiseInverse();
    h = h * inv.asDiagonal();
    CMatrix g = CMatrix::Zero(n, n);
    g.selfadjointView<Eigen::Upper>().rankUpdate(h.adjoint());
    double mu = 0.0, mu_c = 0.0;
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < j; ++i) {
        const cplx v = g(i, j);
        mu = std::max({mu, std::abs(v.real()), std::abs(v.imag())});
        mu_c = std::max(mu_c, std::abs(v));
      }
    }
    s.coherence = std::min(mu, 1.0);
    s.complex_coherence = std::min(mu_c, 1.0);
    if (check_rank) {
      Eigen::ColPivHouseholderQR<CMatrix> qr(h);
      qr.setThreshold(kRankTolerance);
      s.full_rank = qr.rank() == std::min(m, n);
    }
    return s;
  }

  /// 1/h-weighted sum of per-order coherences; +inf when a column vanishes.
  double objective(const std::vector<Index>& rows) const {
    double total = 0.0;
    for (std::size_t oi = 0; oi < order_count(); ++oi) {
      const OrderScore s = score_order(oi, rows, false);
      if (s.zero_column) return std::numeric_limits<double>::infinity();
      total += s.coherence / static_cast<double>((*candidates_)[oi].order);
    }
    return total;
  }

  /// Penalty per order added to the objective for rank-deficient selections.
  static constexpr double kRankPenalty = 1e3;

  struct Fitness {
    double value = std::numeric_limits<double>::infinity();
    double objective = std::numeric_limits<double>::infinity();
    bool full_rank = false;
    bool spark_certified = false;
    std::vector<double> terms;
  };

  Fitness fitness(const std::vector<Index>& rows) const {
    Fitness f;
    f.objective = 0.0;
    f.full_rank = true;
    f.spark_certified = true;
    int deficient = 0;
    for (std::size_t oi = 0; oi < order_count(); ++oi) {
      const OrderScore s = score_order(oi, rows, true);
      if (s.zero_column) {
        f.objective = std::numeric_limits<double>::infinity();
        f.full_rank = false;
        f.spark_certified = false;
        f.terms.assign(order_count(), std::numeric_limits<double>::infinity());
        return f;
      }
      f.terms.push_back(s.coherence);
      f.objective += s.coherence / static_cast<double>((*candidates_)[oi].order);
      if (!s.full_rank) {
        ++deficient;
        f.full_rank = false;
      }
      const double bound = s.complex_coherence > 0.0 ? 1.0 + 1.0 / s.complex_coherence
                                                     : std::numeric_limits<double>::infinity();
      if (!(bound > 2.0 * k_)) f.spark_certified = false;
    }
    f.value = f.objective + kRankPenalty * deficient;
    return f;
  }

 private:
  const std::vector<CandidateMatrix>* candidates_;
  std::vector<Matrix> abs2_;
  int k_ = 0;
};

/// Weighted coherence objective of a row set over the given orders. Row order
/// and duplicates in `rows` do not matter.
inline double design_objective(const std::vector<Index>& rows,
                               const std::vector<CandidateMatrix>& candidates) {
  if (rows.empty()) throw ArgumentError("row selection is empty");
  std::vector<Index> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (Index r : sorted)
    if (r < 0 || r >= candidates.front().row_count())
      throw ArgumentError("row " + std::to_string(r) + " is outside the candidate matrix");
  return DesignEvaluator(candidates, 0).objective(sorted);
}

/// Placement records for a row set; needs the case for bus ids.
inline std::vector<Placement> extract_monitors(const std::vector<Index>& rows,
                                               const CandidateMatrix& candidates,
                                               const NetworkCase& network) {
  std::vector<Placement> out;
  out.reserve(rows.size());
  for (Index r : rows) {
    Placement p;
    p.row = r;
    const RowTag& tag = candidates.row_tags.at(static_cast<std::size_t>(r));
    if (const auto* v = std::get_if<VoltageAt>(&tag)) {
      p.kind = PlacementKind::voltage;
      p.bus_id = network.buses.at(static_cast<std::size_t>(v->bus)).id;
    } else {
      const auto& c = std::get<CurrentOn>(tag);
      p.kind = PlacementKind::current;
      p.branch = c.branch;
      p.bus_id = network.buses.at(static_cast<std::size_t>(c.from)).id;
      p.to_bus_id = network.buses.at(static_cast<std::size_t>(c.to)).id;
    }
    out.push_back(p);
  }
  return out;
}

inline std::size_t count_kind(const std::vector<Placement>& ps, PlacementKind k) {
  return static_cast<std::size_t>(
      std::count_if(ps.begin(), ps.end(), [k](const Placement& p) { return p.kind == k; }));
}

/// Distinct buses hosting at least one channel (one device per bus).
inline std::size_t device_count(const std::vector<Placement>& ps) {
  std::set<int> buses;
  for (const auto& p : ps) buses.insert(p.bus_id);
  return buses.size();
}

/// Fills per-order matrices, scores and placements for a fixed row set.
inline SensingDesign make_design(const std::vector<Index>& rows,
                                 const std::vector<CandidateMatrix>& candidates,
                                 const NetworkCase& network, int sparsity_k) {
  SensingDesign d;
  d.selected_rows = rows;
  std::sort(d.selected_rows.begin(), d.selected_rows.end());
  if (std::adjacent_find(d.selected_rows.begin(), d.selected_rows.end()) != d.selected_rows.end())
    throw ArgumentError("design rows must be distinct");
  for (Index r : d.selected_rows)
    if (r < 0 || r >= candidates.front().row_count())
      throw ArgumentError("row " + std::to_string(r) + " is outside the candidate matrix");
  d.sparsity_k = sparsity_k;
  const DesignEvaluator ev(candidates, sparsity_k);
  const auto f = ev.fitness(d.selected_rows);
  d.objective = f.objective;
  d.per_order_terms = f.terms;
  d.full_rank = f.full_rank;
  d.spark_certified = f.spark_certified;
  for (const auto& c : candidates) {
    d.orders.push_back(c.order);
    d.per_order_H.push_back(stack_real(CMatrix(select_rows(c.rows, d.selected_rows))));
  }
  d.monitors = extract_monitors(d.selected_rows, candidates.front(), network);
  return d;
}

namespace detail {

inline std::vector<Index> random_subset(Index n, Index m, Rng& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  for (Index i = 0; i < m; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(m));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace detail

/// Genetic search over size-m row subsets. Chromosomes are sorted index sets;
/// crossover keeps the rows both parents share and fills the rest from the
/// remaining union at random; mutation swaps a selected row for an unselected
/// one. Every individual draws from its own derived RNG stream, so results
/// depend only on the inputs and params.rng_seed.
inline SensingDesign ga_select_rows(const std::vector<CandidateMatrix>& candidates,
                                    const NetworkCase& network, Index m, int sparsity_k,
                                    const GaParams& params) {
  params.validate();
  if (candidates.empty()) throw ArgumentError("no candidate matrices");
  const Index total = candidates.front().row_count();
  if (sparsity_k < 0) throw ArgumentError("sparsity k must be >= 0");
  if (m < 1 || m > total)
    throw ArgumentError("m = " + std::to_string(m) + " is outside [1, " + std::to_string(total) +
                        "]");
  if (m < 2 * static_cast<Index>(sparsity_k))
    throw ArgumentError("m must be at least 2k (m = " + std::to_string(m) + ", k = " +
                        std::to_string(sparsity_k) + ") for spark to exceed 2k");

  const DesignEvaluator ev(candidates, sparsity_k);
  using Genome = std::vector<Index>;
  std::map<Genome, double> cache;
  auto fitness = [&](const Genome& g) {
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;
    const double v = ev.fitness(g).value;
    cache.emplace(g, v);
    return v;
  };
  struct Individual {
    Genome genes;
    double fit = 0.0;
  };
  auto better = [](const Individual& a, const Individual& b) {
    return a.fit < b.fit || (a.fit == b.fit && a.genes < b.genes);
  };

  const int pop = params.population_size;
  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(pop));
  for (int i = 0; i < pop; ++i) {
    Rng rng(derive_seed(params.rng_seed, "ga-init", static_cast<std::uint64_t>(i)));
    Individual ind{detail::random_subset(total, m, rng), 0.0};
    ind.fit = fitness(ind.genes);
    population.push_back(std::move(ind));
  }
  std::sort(population.begin(), population.end(), better);
  Individual best = population.front();
  std::vector<double> history{best.fit};

  for (int gen = 1; gen <= params.generations; ++gen) {
    std::vector<Individual> next(population.begin(), population.begin() + params.elitism_count);
    for (int i = params.elitism_count; i < pop; ++i) {
      Rng rng(derive_seed(params.rng_seed, "ga",
                          static_cast<std::uint64_t>(gen) * static_cast<std::uint64_t>(pop) +
                              static_cast<std::uint64_t>(i)));
      std::uniform_int_distribution<int> any(0, pop - 1);
      auto tournament = [&]() -> const Individual& {
        const Individual& a = population[static_cast<std::size_t>(any(rng))];
        const Individual& b = population[static_cast<std::size_t>(any(rng))];
        return better(a, b) ? a : b;
      };
      const Individual& pa = tournament();
      const Individual& pb = tournament();
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      Genome child;
      if (u01(rng) < params.crossover_rate) {
        Genome shared, rest;
        std::set_intersection(pa.genes.begin(), pa.genes.end(), pb.genes.begin(), pb.genes.end(),
                              std::back_inserter(shared));
        std::set_symmetric_difference(pa.genes.begin(), pa.genes.end(), pb.genes.begin(),
                                      pb.genes.end(), std::back_inserter(rest));
        std::shuffle(rest.begin(), rest.end(), rng);
        child = shared;
        child.insert(child.end(), rest.begin(),
                     rest.begin() + (m - static_cast<Index>(shared.size())));
      } else {
        child = pa.genes;
      }
      std::vector<bool> used(static_cast<std::size_t>(total), false);
      for (Index r : child) used[static_cast<std::size_t>(r)] = true;
      if (m < total) {
        std::uniform_int_distribution<Index> row(0, total - 1);
        for (auto& g : child) {
          if (u01(rng) >= params.mutation_rate) continue;
          Index r = row(rng);
          while (used[static_cast<std::size_t>(r)]) r = row(rng);
          used[static_cast<std::size_t>(g)] = false;
          used[static_cast<std::size_t>(r)] = true;
          g = r;
        }
      }
      std::sort(child.begin(), child.end());
      Individual ind{std::move(child), 0.0};
      ind.fit = fitness(ind.genes);
      next.push_back(std::move(ind));
    }
    population = std::move(next);
    std::sort(population.begin(), population.end(), better);
    if (better(population.front(), best)) best = population.front();
    history.push_back(best.fit);
    if (cache.size() > 200'000) cache.clear();
  }

  SensingDesign d = make_design(best.genes, candidates, network, sparsity_k);
  d.best_history = std::move(history);
  return d;
}

}  // namespace hse
