#pragma once

#include <cstdint>
#include <vector>

#include "gfluct/limit_theory.hpp"
#include "gfluct/sampler.hpp"

namespace gfluct {

enum class TraceBackend {
  Auto,         // Combinatorial when k_max <= 4 and the profile has few blocks
  Eigensolver,  // dense symmetric eigendecomposition
  Combinatorial,
};

struct TraceOptions {
  TraceBackend backend = TraceBackend::Auto;
  std::uint32_t max_n = 8000;    // eigensolver size guard
  std::uint32_t max_k = 12;
  bool accept_cost = false;      // lifts both guards
  std::size_t max_blocks_combinatorial = 64;
};

// tr(M^k) for k = 1..k_max (result[k-1]) where M = A, or M = A - E A when
// `center` is set. (E A)_ij = p s_ij off the diagonal and 0 on it.
std::vector<double> trace_powers(const AdjacencySample& A, bool center, const VarianceProfile& S,
                                 double p, std::uint32_t k_max, const TraceOptions& options = {});

// Individual backends, exposed for cross-checking.
std::vector<double> trace_powers_eigen(const AdjacencySample& A, bool center,
                                       const VarianceProfile& S, double p, std::uint32_t k_max);
std::vector<double> trace_powers_combinatorial(const AdjacencySample& A, bool center,
                                               const VarianceProfile& S, double p,
                                               std::uint32_t k_max);

// CenteredX, NonCenteredLTilde: sqrt(p) / (np)^{k/2}
// NonCenteredL: n p^{1/2 + 1{k=2}} / (np)^k
double scale_prefactor(StatisticKind kind, std::uint32_t k, double n, double p);

struct StatisticVector {
  std::vector<std::uint32_t> ks;
  std::vector<double> values;
  StatisticKind kind = StatisticKind::CenteredX;
  double n = 0;
  double p = 0;
};

// Scaled traces (expectation not subtracted). CenteredX uses the centered
// matrix; L and Ltilde use A itself.
StatisticVector statistic(const AdjacencySample& A, StatisticKind kind,
                          const std::vector<std::uint32_t>& ks, const VarianceProfile& S, double p,
                          const TraceOptions& options = {});

}  // namespace gfluct
