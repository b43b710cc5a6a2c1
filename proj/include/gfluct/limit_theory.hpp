#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gfluct/catalog.hpp"
#include "gfluct/graphon.hpp"

namespace gfluct {

enum class Regime {
  Dense,         // p constant in (0,1)
  PolyHalf,      // np >> sqrt(n), p -> 0
  CriticalHalf,  // sqrt(n) p -> c
  PolyM,         // n^{1/m} << np << n^{1/(m-1)}, m >= 3
  CriticalM,     // n^{1-1/m} p -> c, m >= 3
  Subpoly,       // np = n^{o(1)}, np -> infinity
  Bounded,       // np -> c
};

enum class StatisticKind { CenteredX, NonCenteredL, NonCenteredLTilde };

struct RegimeSpec {
  Regime regime = Regime::Dense;
  StatisticKind statistic = StatisticKind::CenteredX;
  double p = 0.0;   // Dense
  double c = 0.0;   // CriticalHalf, CriticalM, Bounded
  unsigned m = 0;   // PolyM, CriticalM

  // Throws on out-of-range parameters or an inadmissible statistic/regime pair.
  void validate() const;
};

// Names accepted on the command line and in config files.
Regime parse_regime(const std::string& name);            // REGIME_UNKNOWN on failure
StatisticKind parse_statistic(const std::string& name);  // REGIME_UNKNOWN on failure
std::string regime_name(Regime r);
std::string statistic_name(StatisticKind s);

// Memoized t(F, W) keyed by canonical form. Explicit values set through
// set_value take precedence over the graphon (limits supplied as a table).
class TreeDensityOracle {
 public:
  explicit TreeDensityOracle(StepGraphon W);

  double density(const Multigraph& F) const;
  void set_value(const Multigraph& F, double value);
  const StepGraphon& graphon() const noexcept { return W_; }
  std::size_t cache_size() const;

 private:
  StepGraphon W_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::string, double> cache_;
};

struct CovarianceTerm {
  std::string label;        // e.g. "T1", "-4p*T2", "2kh*t(F1)"
  double coefficient = 0;   // factor multiplying density_sum
  double density_sum = 0;   // sum of multiplicity * density over the class
  std::uint64_t class_total = 0;
  double value = 0;         // coefficient * density_sum
};

struct CovarianceValue {
  double value = 0;
  std::vector<CovarianceTerm> terms;
};

// Sum over entries of multiplicity * density.
double class_density_sum(const DecoratedClass& cls, const TreeDensityOracle& oracle);

// Cached enumerations shared by the covariance functions (thread safe).
const DecoratedClass& cached_T1(unsigned k, unsigned h);
const DecoratedClass& cached_T2(unsigned k, unsigned h);
const DecoratedClass& cached_TC_pair(unsigned k, unsigned h);

CovarianceValue cov_centered_dense(unsigned k, unsigned h, const StepGraphon& W, double p);
CovarianceValue cov_centered_sparse(unsigned k, unsigned h, const TreeDensityOracle& oracle);
// Each rooted planar tree with i edges stands for every closed k-walk shape
// whose trace is that tree (several once some edge is used four or more
// times), so tree pairs are weighted by their walk counts.
CovarianceValue cov_bounded(unsigned k, unsigned h, const TreeDensityOracle& oracle, double c);

// Closed walks of length k (any start) on g that use every edge of g.
std::uint64_t covering_closed_walks(const Multigraph& g, unsigned k);
CovarianceValue cov_noncentered_dense(unsigned k, unsigned h, const StepGraphon& W, double p);
// PolyHalf, CriticalHalf, PolyM, CriticalM. REGIME_DIVERGENT for
// 3 <= k <= 2m-2 under PolyM / CriticalM.
CovarianceValue cov_noncentered_sparse(unsigned k, unsigned h, const StepGraphon& W,
                                       const RegimeSpec& regime);
CovarianceValue cov_subpoly(unsigned k, unsigned h, const TreeDensityOracle& oracle);

// Dispatches on (regime, statistic).
CovarianceValue covariance(unsigned k, unsigned h, const StepGraphon& W, const RegimeSpec& regime);

struct CovarianceMatrix {
  std::vector<unsigned> ks;
  Eigen::MatrixXd value;
  std::vector<std::vector<CovarianceValue>> cells;
};

// Errors from individual cells are rethrown with "(k,h)" appended.
CovarianceMatrix covariance_matrix(const std::vector<unsigned>& ks, const StepGraphon& W,
                                   const RegimeSpec& regime);

}  // namespace gfluct
