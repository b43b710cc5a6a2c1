#pragma once

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "gfluct/multigraph.hpp"

namespace gfluct {

// Piecewise-constant symmetric kernel on [0,1]^2. Block i covers an interval
// of length measures[i]; the kernel equals values(i,j) on block i x block j.
class StepGraphon {
 public:
  StepGraphon() = default;

  // Validates symmetry (1e-12), 0 <= values <= bound, measures > 0 summing to
  // 1 (1e-12). An empty `measures` means uniform.
  explicit StepGraphon(Eigen::MatrixXd values, std::vector<double> measures = {},
                       double bound = std::numeric_limits<double>::infinity());

  static StepGraphon constant(double q);

  std::size_t block_count() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<double>& measures() const noexcept { return measures_; }
  double value(std::size_t i, std::size_t j) const { return values_(i, j); }
  double max_value() const;
  bool uniform_measures() const noexcept { return uniform_; }

 private:
  Eigen::MatrixXd values_;
  std::vector<double> measures_;
  bool uniform_ = true;
};

// Graphon of an n x n variance profile: n uniform blocks, values = S.
StepGraphon from_variance_profile(const Eigen::MatrixXd& S);

// W' = W(1 - pW), blockwise. Range error if p * max(W) > 1.
StepGraphon transform_prime(const StepGraphon& W, double p);

// Integral of |W1 - W2| over [0,1]^2 on the common refinement of both block
// partitions. No rearrangement is searched.
double l1_distance(const StepGraphon& W1, const StepGraphon& W2);

// Exact t(F, W) by variable elimination (greedy minimum degree order).
double hom_density(const Multigraph& F, const StepGraphon& W);

}  // namespace gfluct
