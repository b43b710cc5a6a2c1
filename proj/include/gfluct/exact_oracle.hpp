#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "gfluct/limit_theory.hpp"

namespace gfluct {

struct WalkMomentSpec {
  std::uint32_t n = 0;
  Eigen::MatrixXd S;  // n x n profile; diagonal ignored
  double p = 0.0;
  double budget = 1e8;  // cap on n^(k+h)
};

// m-th central moment of Bernoulli(q): q(1-q)^m + (1-q)(-q)^m.
double bernoulli_central_moment(unsigned m, double q);

// Exact Cov(tr M^k, tr M^h) by enumerating closed-walk pairs; M = A or A - EA.
double exact_cov(const WalkMomentSpec& spec, bool centered, unsigned k, unsigned h);

// Same quantity by summing over all 2^{n(n-1)/2} graphs. n <= 5.
double exact_cov_all_graphs(std::uint32_t n, const Eigen::MatrixXd& S, double p, unsigned k,
                            unsigned h, bool centered);

// Homogeneous profile (edge probability q everywhere): exact covariance for
// any n by summing over set partitions of the k+h walk positions, weighted by
// the falling factorial n(n-1)...(n-v+1). k + h <= 12.
double exact_cov_homogeneous(double n, double q, unsigned k, unsigned h, bool centered);

// Edge probability along a regime path at size n (W = 1). PolyHalf uses
// p = n^{-1/4}, PolyM uses np = n^{(1/m + 1/(m-1))/2}, Subpoly uses
// np = (log n)^2.
double regime_path_p(const RegimeSpec& regime, double n);

struct DriftRow {
  double n = 0;
  double p = 0;
  double scaled_cov = 0;  // prefactor_k * prefactor_h * exact covariance
  double theory = 0;
  double abs_error = 0;
};

// Exact finite-n scaled covariance against the limit for the constant graphon.
std::vector<DriftRow> drift_table(unsigned k, unsigned h, const std::vector<double>& ns,
                                  const RegimeSpec& regime);

}  // namespace gfluct
