#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gfluct/graphon.hpp"

namespace gfluct {

// Variance profile s_ij = blocks(block_of[i], block_of[j]). A dense n x n
// profile is the case block_of[i] = i.
struct VarianceProfile {
  Eigen::MatrixXd blocks;
  std::vector<std::uint32_t> block_of;

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(block_of.size()); }
  std::size_t block_count() const noexcept { return static_cast<std::size_t>(blocks.rows()); }
  double s(std::uint32_t i, std::uint32_t j) const { return blocks(block_of[i], block_of[j]); }
  double max_value() const { return blocks.maxCoeff(); }

  static VarianceProfile dense(const Eigen::MatrixXd& S);
  static VarianceProfile block_model(const Eigen::MatrixXd& B, const std::vector<std::uint32_t>& sizes);
  static VarianceProfile homogeneous(std::uint32_t n, double s = 1.0);
  // n vertices split into contiguous blocks with sizes proportional to the
  // graphon's measures (largest remainder rounding).
  static VarianceProfile from_graphon(const StepGraphon& W, std::uint32_t n);
};

struct AdjacencySample {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j, sorted
  std::vector<std::uint32_t> degree;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  double p = 0.0;
  std::string profile_id;
  std::vector<double> latent;  // W-random samples only

  Eigen::MatrixXd dense() const;
};

// Independent a_ij ~ Bernoulli(p s_ij) for i < j; diagonal never set.
// Range error if p * max(S) > 1.
AdjacencySample sample_profile(const VarianceProfile& S, double p, std::uint64_t seed,
                               std::uint32_t replicate = 0);

// Latent x_i ~ U[0,1) first, then edges with probability p W(x_i, x_j).
AdjacencySample sample_w_random(const StepGraphon& W, std::uint32_t n, double p, std::uint64_t seed,
                                std::uint32_t replicate = 0);

// Block index of each latent coordinate; the profile used by sample_w_random.
VarianceProfile latent_profile(const StepGraphon& W, const std::vector<double>& latent);

// "u v" per line, 0-indexed.
void write_edge_list(std::ostream& os, const AdjacencySample& A);

}  // namespace gfluct
