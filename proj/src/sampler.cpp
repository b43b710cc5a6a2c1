#include "gfluct/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "gfluct/error.hpp"
#include "gfluct/rng.hpp"

namespace gfluct {

VarianceProfile VarianceProfile::dense(const Eigen::MatrixXd& S) {
  require(S.rows() == S.cols(), ErrorKind::Validation, "variance profile must be square");
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      require(S(i, j) >= 0.0 && std::isfinite(S(i, j)), ErrorKind::Validation,
              "variance profile entries must be finite and >= 0");
      require(std::abs(S(i, j) - S(j, i)) <= 1e-12, ErrorKind::Validation,
              "variance profile must be symmetric");
    }
  VarianceProfile v;
  v.blocks = S;
  v.block_of.resize(static_cast<std::size_t>(S.rows()));
  std::iota(v.block_of.begin(), v.block_of.end(), 0u);
  return v;
}

VarianceProfile VarianceProfile::block_model(const Eigen::MatrixXd& B,
                                             const std::vector<std::uint32_t>& sizes) {
  VarianceProfile v = dense(B);
  require(sizes.size() == static_cast<std::size_t>(B.rows()), ErrorKind::Validation,
          "block sizes must match the block matrix");
  v.block_of.clear();
  for (std::uint32_t b = 0; b < sizes.size(); ++b) v.block_of.insert(v.block_of.end(), sizes[b], b);
  return v;
}

VarianceProfile VarianceProfile::homogeneous(std::uint32_t n, double s) {
  return block_model(Eigen::MatrixXd::Constant(1, 1, s), {n});
}

VarianceProfile VarianceProfile::from_graphon(const StepGraphon& W, std::uint32_t n) {
  const auto m = W.block_count();
  std::vector<std::uint32_t> sizes(m);
  std::vector<std::pair<double, std::size_t>> rem;
  std::uint32_t used = 0;
  for (std::size_t b = 0; b < m; ++b) {
    const double exact = W.measures()[b] * n;
    sizes[b] = static_cast<std::uint32_t>(std::floor(exact));
    used += sizes[b];
    rem.emplace_back(exact - sizes[b], b);
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++sizes[rem[i % m].second];
  return block_model(W.values(), sizes);
}

Eigen::MatrixXd AdjacencySample::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : edges) A(i, j) = A(j, i) = 1.0;
  return A;
}

AdjacencySample sample_profile(const VarianceProfile& S, double p, std::uint64_t seed,
                               std::uint32_t replicate) {
  require(p >= 0.0 && p <= 1.0 && std::isfinite(p), ErrorKind::Range, "p must lie in [0,1]");
  require(p * S.max_value() <= 1.0 + 1e-15, ErrorKind::Range,
          "p * max(s_ij) exceeds 1; edge probabilities would leave [0,1]");
  const std::uint32_t n = S.n();
  const auto m = S.block_count();
  std::vector<std::uint64_t> threshold(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      threshold[a * m + b] = bernoulli_threshold(p * S.blocks(static_cast<Eigen::Index>(a),
                                                               static_cast<Eigen::Index>(b)));

  AdjacencySample out;
  out.n = n;
  out.seed = seed;
  out.replicate = replicate;
  out.p = p;
  out.degree.assign(n, 0);
  const CounterRng rng(seed, replicate, RngStream::Edges);
  // Edge (i,j), i<j, has row-major index e; word e%4 of block e/4 decides it.
  std::uint64_t e = 0;
  PhiloxCounter words{};
  std::uint64_t loaded = ~0ull;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint64_t* row = &threshold[S.block_of[i] * m];
    for (std::uint32_t j = i + 1; j < n; ++j, ++e) {
      if ((e >> 2) != loaded) words = rng.block(loaded = e >> 2);
      if (words[e & 3u] < row[S.block_of[j]]) {
        out.edges.emplace_back(i, j);
        ++out.degree[i];
        ++out.degree[j];
      }
    }
  }
  return out;
}

VarianceProfile latent_profile(const StepGraphon& W, const std::vector<double>& latent) {
  std::vector<double> cut;
  double acc = 0.0;
  for (double w : W.measures()) cut.push_back(acc += w);
  VarianceProfile v;
  v.blocks = W.values();
  v.block_of.reserve(latent.size());
  for (double x : latent) {
    auto it = std::upper_bound(cut.begin(), cut.end(), x);
    auto b = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
        it - cut.begin(), static_cast<std::ptrdiff_t>(cut.size()) - 1));
    v.block_of.push_back(b);
  }
  return v;
}

AdjacencySample sample_w_random(const StepGraphon& W, std::uint32_t n, double p, std::uint64_t seed,
                                std::uint32_t replicate) {
  require(p >= 0.0 && p <= 1.0 && std::isfinite(p), ErrorKind::Range, "p must lie in [0,1]");
  require(p * W.max_value() <= 1.0 + 1e-15, ErrorKind::Range, "p * max(W) exceeds 1");
  const CounterRng rng(seed, replicate, RngStream::Latent);
  std::vector<double> latent(n);
  for (std::uint32_t i = 0; i < n; ++i) latent[i] = rng.uniform(i);
  AdjacencySample out = sample_profile(latent_profile(W, latent), p, seed, replicate);
  out.latent = std::move(latent);
  out.profile_id = "w-random";
  return out;
}

void write_edge_list(std::ostream& os, const AdjacencySample& A) {
  for (auto [i, j] : A.edges) os << i << ' ' << j << '\n';
}

}  // namespace gfluct
