#include "gfluct/limit_theory.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <tuple>

#include "gfluct/canonical.hpp"
#include "gfluct/error.hpp"

namespace gfluct {

// ---------------------------------------------------------------------------
// Regime specification

void RegimeSpec::validate() const {
  switch (regime) {
    case Regime::Dense:
      require(p > 0.0 && p < 1.0, ErrorKind::Range, "dense regime needs 0 < p < 1");
      break;
    case Regime::CriticalHalf:
    case Regime::Bounded:
      require(c > 0.0 && std::isfinite(c), ErrorKind::Domain, "regime needs c > 0");
      break;
    case Regime::PolyM:
      require(m >= 3, ErrorKind::Domain, "regime needs an integer m >= 3");
      break;
    case Regime::CriticalM:
      require(m >= 3, ErrorKind::Domain, "regime needs an integer m >= 3");
      require(c > 0.0 && std::isfinite(c), ErrorKind::Domain, "regime needs c > 0");
      break;
    case Regime::PolyHalf:
    case Regime::Subpoly:
      break;
  }
  const bool small_degree = regime == Regime::Subpoly || regime == Regime::Bounded;
  if (statistic == StatisticKind::NonCenteredLTilde)
    require(small_degree, ErrorKind::Validation,
            "statistic Ltilde is only defined for the subpoly and bounded regimes");
  if (statistic == StatisticKind::NonCenteredL)
    require(!small_degree, ErrorKind::Validation,
            "statistic L has no finite limit when np = n^{o(1)}; use Ltilde");
}

Regime parse_regime(const std::string& name) {
  static const std::map<std::string, Regime> names{
      {"dense", Regime::Dense},          {"poly-half", Regime::PolyHalf},
      {"sparse", Regime::PolyHalf},      {"critical-half", Regime::CriticalHalf},
      {"poly-m", Regime::PolyM},         {"critical-m", Regime::CriticalM},
      {"subpoly", Regime::Subpoly},      {"bounded", Regime::Bounded},
  };
  auto it = names.find(name);
  if (it == names.end()) fail(ErrorKind::RegimeUnknown, "unknown regime '" + name + "'");
  return it->second;
}

StatisticKind parse_statistic(const std::string& name) {
  static const std::map<std::string, StatisticKind> names{
      {"X", StatisticKind::CenteredX},          {"centered", StatisticKind::CenteredX},
      {"L", StatisticKind::NonCenteredL},       {"noncentered", StatisticKind::NonCenteredL},
      {"Ltilde", StatisticKind::NonCenteredLTilde}, {"ltilde", StatisticKind::NonCenteredLTilde},
  };
  auto it = names.find(name);
  if (it == names.end()) fail(ErrorKind::RegimeUnknown, "unknown statistic '" + name + "'");
  return it->second;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Dense: return "dense";
    case Regime::PolyHalf: return "poly-half";
    case Regime::CriticalHalf: return "critical-half";
    case Regime::PolyM: return "poly-m";
    case Regime::CriticalM: return "critical-m";
    case Regime::Subpoly: return "subpoly";
    case Regime::Bounded: return "bounded";
  }
  return "?";
}

std::string statistic_name(StatisticKind s) {
  switch (s) {
    case StatisticKind::CenteredX: return "X";
    case StatisticKind::NonCenteredL: return "L";
    case StatisticKind::NonCenteredLTilde: return "Ltilde";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Density oracle

TreeDensityOracle::TreeDensityOracle(StepGraphon W) : W_(std::move(W)) {}

double TreeDensityOracle::density(const Multigraph& F) const {
  const std::string key = canonical_key(F);
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const double t = hom_density(F, W_);
  std::unique_lock lock(mutex_);
  return cache_.emplace(key, t).first->second;
}

void TreeDensityOracle::set_value(const Multigraph& F, double value) {
  std::unique_lock lock(mutex_);
  cache_[canonical_key(F)] = value;
}

std::size_t TreeDensityOracle::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

double class_density_sum(const DecoratedClass& cls, const TreeDensityOracle& oracle) {
  double s = 0.0;
  for (const auto& e : cls.entries()) s += static_cast<double>(e.multiplicity) * oracle.density(e.graph);
  return s;
}

std::uint64_t covering_closed_walks(const Multigraph& g, unsigned k) {
  const std::uint32_t v = g.vertex_count();
  const auto& edges = g.edges();
  require(edges.size() <= 20, ErrorKind::Resource, "covering walk count limited to 20 edges");
  // Inclusion-exclusion over the edges left out.
  std::int64_t total = 0;
  std::vector<std::int64_t> cur(v), next(v);
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::int64_t closed = 0;
    for (std::uint32_t s = 0; s < v; ++s) {
      std::fill(cur.begin(), cur.end(), 0);
      cur[s] = 1;
      for (unsigned step = 0; step < k; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t e = 0; e < edges.size(); ++e) {
          if (!(mask >> e & 1u)) continue;
          next[edges[e].a] += cur[edges[e].b];
          next[edges[e].b] += cur[edges[e].a];
        }
        cur.swap(next);
      }
      closed += cur[s];
    }
    const bool odd = (edges.size() - std::popcount(mask)) % 2;
    total += odd ? -closed : closed;
  }
  return static_cast<std::uint64_t>(total);
}

// ---------------------------------------------------------------------------
// Enumeration caches

namespace {

template <typename Key, typename Make>
const DecoratedClass& cached(std::map<Key, std::unique_ptr<DecoratedClass>>& store, const Key& key,
                             Make make) {
  static std::mutex mutex;
  {
    std::lock_guard lock(mutex);
    auto it = store.find(key);
    if (it != store.end()) return *it->second;
  }
  auto built = std::make_unique<DecoratedClass>(make());
  std::lock_guard lock(mutex);
  auto [it, inserted] = store.emplace(key, std::move(built));
  return *it->second;
}

using PairKey = std::pair<unsigned, unsigned>;

PairKey ordered(unsigned k, unsigned h) { return {std::min(k, h), std::max(k, h)}; }

}  // namespace

// Classes are symmetric in (k, h) up to isomorphism, so one orientation is stored.
const DecoratedClass& cached_T1(unsigned k, unsigned h) {
  static std::map<PairKey, std::unique_ptr<DecoratedClass>> store;
  auto key = ordered(k, h);
  return cached(store, key, [&] { return class_T1(key.first, key.second); });
}

const DecoratedClass& cached_T2(unsigned k, unsigned h) {
  static std::map<PairKey, std::unique_ptr<DecoratedClass>> store;
  auto key = ordered(k, h);
  return cached(store, key, [&] { return class_T2(key.first, key.second); });
}

const DecoratedClass& cached_TC_pair(unsigned k, unsigned h) {
  static std::map<PairKey, std::unique_ptr<DecoratedClass>> store;
  auto key = ordered(k, h);
  return cached(store, key, [&] { return class_TC_pair(key.first, key.second); });
}

namespace {

const DecoratedClass& cached_gluings(const RootedPlanarTree& a, const RootedPlanarTree& b) {
  static std::map<std::pair<std::string, std::string>, std::unique_ptr<DecoratedClass>> store;
  return cached(store, std::make_pair(a.dyck, b.dyck), [&] { return tree_gluings(a, b); });
}

// C_r plus one pendant edge at vertex 0.
Multigraph cycle_with_pendant(unsigned r) {
  Multigraph g(r + 1);
  for (unsigned i = 0; i < r; ++i) g.add_edge(i, (i + 1) % r);
  g.add_edge(0, r);
  return g;
}

// Closed walks of length k on tree T that traverse every edge, relative to
// the 2i-step depth-first contours. Summed over the planar trees of one shape
// this gives the number of k-walk shapes on that tree; it is 1 when k = 2i.
double walk_weight(const RootedPlanarTree& T, unsigned k) {
  if (k == 2 * T.edge_count) return 1.0;
  static std::mutex mutex;
  static std::map<std::pair<std::string, unsigned>, double> store;
  const auto key = std::make_pair(T.dyck, k);
  {
    std::lock_guard lock(mutex);
    if (auto it = store.find(key); it != store.end()) return it->second;
  }
  const Multigraph g = T.graph();
  const double w = static_cast<double>(covering_closed_walks(g, k)) /
                   static_cast<double>(covering_closed_walks(g, 2 * T.edge_count));
  std::lock_guard lock(mutex);
  store.emplace(key, w);
  return w;
}

void check_k(unsigned k, unsigned h) {
  require(k >= 2 && h >= 2, ErrorKind::Domain, "statistics are defined for k, h >= 2");
}

CovarianceTerm term(std::string label, double coefficient, double density_sum,
                    std::uint64_t total = 0) {
  return {std::move(label), coefficient, density_sum, total, coefficient * density_sum};
}

CovarianceValue sum_terms(std::vector<CovarianceTerm> terms) {
  CovarianceValue v;
  for (const auto& t : terms) v.value += t.value;
  v.terms = std::move(terms);
  return v;
}

CovarianceTerm class_term(std::string label, double coefficient, const DecoratedClass& cls,
                          const TreeDensityOracle& oracle) {
  return term(std::move(label), coefficient, class_density_sum(cls, oracle), cls.total());
}

}  // namespace

// ---------------------------------------------------------------------------
// Centered statistics

CovarianceValue cov_centered_dense(unsigned k, unsigned h, const StepGraphon& W, double p) {
  check_k(k, h);
  require(p > 0.0 && p < 1.0, ErrorKind::Range, "dense regime needs 0 < p < 1");
  const bool both_even = k % 2 == 0 && h % 2 == 0;
  const bool both_odd = k % 2 == 1 && h % 2 == 1;
  if (!both_even && !both_odd) return {};
  TreeDensityOracle oracle(transform_prime(W, p));
  std::vector<CovarianceTerm> terms;
  if (both_even) {
    terms.push_back(class_term("T1", 1.0, cached_T1(k, h), oracle));
    terms.push_back(class_term("-4p*T2", -4.0 * p, cached_T2(k, h), oracle));
  }
  if (k >= 3 && h >= 3) terms.push_back(class_term("p*TC", p, cached_TC_pair(k, h), oracle));
  return sum_terms(std::move(terms));
}

CovarianceValue cov_centered_sparse(unsigned k, unsigned h, const TreeDensityOracle& oracle) {
  check_k(k, h);
  if (k % 2 || h % 2) return {};
  return sum_terms({class_term("T1", 1.0, cached_T1(k, h), oracle)});
}

CovarianceValue cov_subpoly(unsigned k, unsigned h, const TreeDensityOracle& oracle) {
  return cov_centered_sparse(k, h, oracle);
}

CovarianceValue cov_bounded(unsigned k, unsigned h, const TreeDensityOracle& oracle, double c) {
  check_k(k, h);
  require(c > 0.0 && std::isfinite(c), ErrorKind::Domain, "bounded regime needs c > 0");
  require(k + h <= 24, ErrorKind::Resource, "bounded covariance limited to k + h <= 24");
  if (k % 2 || h % 2) return {};
  const double half = (k + h) / 2.0;
  std::vector<CovarianceTerm> terms;
  for (unsigned i = 1; i <= k / 2; ++i)
    for (unsigned j = 1; j <= h / 2; ++j) {
      double sum = 0.0;
      std::uint64_t total = 0;
      for (const auto& t1 : rooted_planar_trees(i))
        for (const auto& t2 : rooted_planar_trees(j)) {
          const DecoratedClass& glued = cached_gluings(t1, t2);
          const double weight = walk_weight(t1, k) * walk_weight(t2, h);
          total += static_cast<std::uint64_t>(std::llround(weight * static_cast<double>(glued.total())));
          double s = 0.0;
          for (const auto& e : glued.entries())
            s += static_cast<double>(e.multiplicity) * oracle.density(e.graph) *
                 std::pow(c, static_cast<double>(e.graph.vertex_count()) - half);
          sum += weight * s;
        }
      terms.push_back(term("gluings(i=" + std::to_string(i) + ",j=" + std::to_string(j) + ")",
                           1.0, sum, total));
    }
  return sum_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Non-centered statistics

CovarianceValue cov_noncentered_dense(unsigned k, unsigned h, const StepGraphon& W, double p) {
  check_k(k, h);
  require(p > 0.0 && p < 1.0, ErrorKind::Range, "dense regime needs 0 < p < 1");
  if (k > h) std::swap(k, h);
  auto t = [&](const Multigraph& F) { return hom_density(F, W); };
  if (k == 2 && h == 2)
    return sum_terms({term("2*t(K2)", 2.0, t(k2()), 1), term("-2p*t(C2)", -2.0 * p, t(c2()), 1)});
  if (k == 2)
    return sum_terms({term("2h*t(C_h)", 2.0 * h, t(cycle(h)), 1),
                      term("-2hp*t(C_2,h)", -2.0 * h * p, t(cycle_multi(h)), 1)});
  const double kh = static_cast<double>(k) * h;
  return sum_terms({term("2kh*t(F1)", 2.0 * kh, t(class_F1(k, h)), 1),
                    term("-2khp*t(F2)", -2.0 * kh * p, t(class_F2(k, h)), 1)});
}

CovarianceValue cov_noncentered_sparse(unsigned k, unsigned h, const StepGraphon& W,
                                       const RegimeSpec& regime) {
  check_k(k, h);
  if (k > h) std::swap(k, h);
  TreeDensityOracle oracle(W);
  auto t = [&](const Multigraph& F) { return oracle.density(F); };
  const double kh = static_cast<double>(k) * h;
  auto k2_term = [&] { return sum_terms({term("2*t(K2)", 2.0, t(k2()), 1)}); };
  auto cycle_term = [&] { return sum_terms({term("2h*t(C_h)", 2.0 * h, t(cycle(h)), 1)}); };
  auto f1_term = [&] { return sum_terms({term("2kh*t(F1)", 2.0 * kh, t(class_F1(k, h)), 1)}); };
  auto trees_sum = [&](unsigned edges) {
    double s = 0.0;
    for (const auto& tr : rooted_planar_trees(edges)) s += t(tr.graph());
    return s;
  };

  switch (regime.regime) {
    case Regime::PolyHalf:
      if (k == 2 && h == 2) return k2_term();
      if (k == 2) return cycle_term();
      return f1_term();

    case Regime::CriticalHalf: {
      const double c = regime.c;
      require(c > 0.0, ErrorKind::Domain, "regime needs c > 0");
      if (k == 2 && h == 2) return k2_term();
      if (k == 2 && h == 4)
        return sum_terms({term("8*t(C4)", 8.0, t(cycle(4)), 1),
                          term("4c^-2*sum_T2 t(T)", 4.0 / (c * c), trees_sum(2), catalan(2))});
      if (k == 2) return cycle_term();
      if (k == 3 && h == 3)
        return sum_terms({term("6c^-2*t(C3)", 6.0 / (c * c), t(cycle(3)), 1),
                          term("18*t(F1)", 18.0, t(class_F1(3, 3)), 1)});
      // One walk is a full r-cycle, the other a two-edge tree walk sharing one
      // of its edges (v = e = r + 1). Order-one only when the tree side has
      // length 4; both orders count when k = h = 4.
      if (k == 4 || h == 4) {
        const unsigned r = k == 4 ? h : k;
        const double orders = k == h ? 2.0 : 1.0;
        std::vector<CovarianceTerm> terms;
        if (k == 4 && h == 4)
          terms.push_back(class_term("c^-4*T1", std::pow(c, -4.0), cached_T1(4, 4), oracle));
        terms.push_back(term("2kh*t(F1)", 2.0 * kh, t(class_F1(k, h)), 1));
        terms.push_back(term("8r*c^-2*t(C_r+pendant)", orders * 8.0 * r / (c * c),
                             t(cycle_with_pendant(r)), static_cast<std::uint64_t>(orders * 8 * r)));
        return sum_terms(std::move(terms));
      }
      return f1_term();
    }

    case Regime::PolyM:
    case Regime::CriticalM: {
      const unsigned m = regime.m;
      require(m >= 3, ErrorKind::Domain, "regime needs an integer m >= 3");
      for (unsigned x : {k, h})
        if (x >= 3 && x <= 2 * m - 2)
          fail(ErrorKind::RegimeDivergent,
               "Var(L_k) diverges for 3 <= k <= 2m-2 (k=" + std::to_string(x) +
                   ", m=" + std::to_string(m) + ")");
      if (k == 2 && h == 2) return k2_term();
      if (regime.regime == Regime::PolyM) {
        if (k == 2) return cycle_term();
        return f1_term();
      }
      const double c = regime.c;
      require(c > 0.0, ErrorKind::Domain, "regime needs c > 0");
      if (k == 2 && h == 2 * m)
        return sum_terms(
            {term("2m*c^-m*sum_Tm t(T)", 2.0 * m * std::pow(c, -static_cast<double>(m)),
                  trees_sum(m), catalan(m)),
             term("4m*t(C_2m)", 4.0 * m, t(cycle(2 * m)), 1)});
      if (k == 2) return cycle_term();
      if (k == 2 * m && h == 2 * m)
        return sum_terms({class_term("c^-2m*T1", std::pow(c, -2.0 * m), cached_T1(k, h), oracle),
                          term("8m^2*t(F1)", 8.0 * m * m, t(class_F1(k, h)), 1)});
      return f1_term();
    }

    default:
      fail(ErrorKind::Validation,
           "regime " + regime_name(regime.regime) + " has no non-centered sparse formula");
  }
}

// ---------------------------------------------------------------------------
// Dispatch

namespace {

CovarianceValue covariance_with(unsigned k, unsigned h, const StepGraphon& W,
                                const TreeDensityOracle& oracle, const RegimeSpec& regime) {
  switch (regime.statistic) {
    case StatisticKind::CenteredX:
      switch (regime.regime) {
        case Regime::Dense: return cov_centered_dense(k, h, W, regime.p);
        case Regime::Bounded: return cov_bounded(k, h, oracle, regime.c);
        default: return cov_centered_sparse(k, h, oracle);
      }
    case StatisticKind::NonCenteredL:
      if (regime.regime == Regime::Dense) return cov_noncentered_dense(k, h, W, regime.p);
      return cov_noncentered_sparse(k, h, W, regime);
    case StatisticKind::NonCenteredLTilde:
      if (regime.regime == Regime::Bounded) return cov_bounded(k, h, oracle, regime.c);
      return cov_subpoly(k, h, oracle);
  }
  fail(ErrorKind::Validation, "unhandled statistic");
}

}  // namespace

CovarianceValue covariance(unsigned k, unsigned h, const StepGraphon& W, const RegimeSpec& regime) {
  regime.validate();
  if (regime.regime == Regime::Dense)
    require(regime.p * W.max_value() <= 1.0 + 1e-15, ErrorKind::Range, "p * max(W) exceeds 1");
  TreeDensityOracle oracle(W);
  return covariance_with(k, h, W, oracle, regime);
}

CovarianceMatrix covariance_matrix(const std::vector<unsigned>& ks, const StepGraphon& W,
                                   const RegimeSpec& regime) {
  regime.validate();
  require(!ks.empty(), ErrorKind::Validation, "empty k list");
  if (regime.regime == Regime::Dense)
    require(regime.p * W.max_value() <= 1.0 + 1e-15, ErrorKind::Range, "p * max(W) exceeds 1");
  TreeDensityOracle oracle(W);
  const auto d = ks.size();
  CovarianceMatrix out;
  out.ks = ks;
  out.value = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  out.cells.assign(d, std::vector<CovarianceValue>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      try {
        out.cells[a][b] = covariance_with(ks[a], ks[b], W, oracle, regime);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (k=" + std::to_string(ks[a]) +
                                  ", h=" + std::to_string(ks[b]) + ")");
      }
      out.cells[b][a] = out.cells[a][b];
      out.value(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = out.cells[a][b].value;
      out.value(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = out.cells[a][b].value;
    }
  return out;
}

}  // namespace gfluct
