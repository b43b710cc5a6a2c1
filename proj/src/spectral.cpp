#include "gfluct/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "gfluct/error.hpp"

namespace gfluct {

namespace {

struct Csr {
  std::vector<std::uint64_t> offset;
  std::vector<std::uint32_t> nbr;
};

Csr to_csr(const AdjacencySample& A) {
  Csr g;
  g.offset.assign(A.n + 1, 0);
  for (std::uint32_t i = 0; i < A.n; ++i) g.offset[i + 1] = g.offset[i] + A.degree[i];
  g.nbr.resize(g.offset.back());
  std::vector<std::uint64_t> fill(g.offset.begin(), g.offset.end() - 1);
  for (auto [i, j] : A.edges) {
    g.nbr[fill[i]++] = j;
    g.nbr[fill[j]++] = i;
  }
  return g;
}

void check_sample(const AdjacencySample& A, const VarianceProfile& S) {
  require(S.n() == A.n, ErrorKind::Validation, "profile size does not match the sample");
  require(A.degree.size() == A.n, ErrorKind::Validation, "sample degree array is inconsistent");
}

// Walk statistics of A needed for tr((A + D)^k), k <= 4.
struct PairStats {
  double common_sq = 0;      // sum_{i != j} c_ij^2
  double common_edge = 0;    // sum over ordered edges (i,j) of c_ij
  double common_edge_d = 0;  // sum over ordered edges (i,j) of c_ij (d_i + d_j)
};

PairStats pair_stats(const AdjacencySample& A, const Csr& g, const std::vector<double>& d,
                     bool need_fourth) {
  const std::uint32_t n = A.n;
  PairStats st;
  double sparse_cost = 0;
  for (auto deg : A.degree) sparse_cost += static_cast<double>(deg) * deg;
  const double words = (n + 63) / 64;
  const double bitset_cost = 0.5 * static_cast<double>(n) * n * words;

  if (need_fourth && bitset_cost < sparse_cost) {
    const std::size_t w = static_cast<std::size_t>(words);
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(n) * w, 0);
    for (auto [i, j] : A.edges) {
      rows[i * w + j / 64] |= 1ull << (j % 64);
      rows[j * w + i / 64] |= 1ull << (i % 64);
    }
    std::uint64_t csq = 0, ce = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint64_t* ri = &rows[i * w];
      for (std::uint32_t j = i + 1; j < n; ++j) {
        const std::uint64_t* rj = &rows[j * w];
        std::uint64_t c = 0;
        for (std::size_t x = 0; x < w; ++x) c += static_cast<std::uint64_t>(std::popcount(ri[x] & rj[x]));
        csq += c * c;
        if ((ri[j / 64] >> (j % 64)) & 1u) {
          ce += c;
          st.common_edge_d += static_cast<double>(c) * (d[i] + d[j]);
        }
      }
    }
    st.common_sq = 2.0 * static_cast<double>(csq);
    st.common_edge = 2.0 * static_cast<double>(ce);
    st.common_edge_d *= 2.0;
    return st;
  }

  // Cubic term only: common neighbours along edges, one bitset AND per edge.
  if (!need_fourth && static_cast<double>(A.edges.size()) * words < sparse_cost) {
    const std::size_t w = static_cast<std::size_t>(words);
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(n) * w, 0);
    for (auto [i, j] : A.edges) {
      rows[i * w + j / 64] |= 1ull << (j % 64);
      rows[j * w + i / 64] |= 1ull << (i % 64);
    }
    std::uint64_t ce = 0;
    for (auto [i, j] : A.edges) {
      const std::uint64_t* ri = &rows[i * w];
      const std::uint64_t* rj = &rows[j * w];
      std::uint64_t c = 0;
      for (std::size_t x = 0; x < w; ++x) c += static_cast<std::uint64_t>(std::popcount(ri[x] & rj[x]));
      ce += c;
      st.common_edge_d += static_cast<double>(c) * (d[i] + d[j]);
    }
    st.common_edge = 2.0 * static_cast<double>(ce);
    st.common_edge_d *= 2.0;
    return st;
  }

  std::vector<std::uint32_t> cnt(n, 0), touched;
  std::uint64_t csq = 0, ce = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    touched.clear();
    for (auto l = g.offset[i]; l < g.offset[i + 1]; ++l) {
      const auto v = g.nbr[l];
      for (auto q = g.offset[v]; q < g.offset[v + 1]; ++q) {
        const auto j = g.nbr[q];
        if (j == i) continue;
        if (cnt[j]++ == 0) touched.push_back(j);
      }
    }
    for (auto j : touched) csq += static_cast<std::uint64_t>(cnt[j]) * cnt[j];
    for (auto l = g.offset[i]; l < g.offset[i + 1]; ++l) {
      const auto j = g.nbr[l];
      ce += cnt[j];
      st.common_edge_d += static_cast<double>(cnt[j]) * (d[i] + d[j]);
    }
    for (auto j : touched) cnt[j] = 0;
  }
  st.common_sq = static_cast<double>(csq);
  st.common_edge = static_cast<double>(ce);
  return st;
}

}  // namespace

std::vector<double> trace_powers_combinatorial(const AdjacencySample& A, bool center,
                                               const VarianceProfile& S, double p,
                                               std::uint32_t k_max) {
  check_sample(A, S);
  require(k_max >= 1 && k_max <= 4, ErrorKind::Resource,
          "combinatorial trace backend supports k_max <= 4");
  const std::uint32_t n = A.n;
  const Csr g = to_csr(A);
  // M = B + L with B = A + diag(d) and L = -p Z Q Z^T (Z: block indicator).
  std::vector<double> d(n, 0.0);
  if (center)
    for (std::uint32_t i = 0; i < n; ++i) d[i] = p * S.s(i, i);

  std::vector<double> tr(k_max, 0.0);
  double sum_d = 0, sum_d2 = 0, sum_d3 = 0, sum_d_deg = 0, diag4 = 0, edge_dd = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    sum_d += d[i];
    sum_d2 += d[i] * d[i];
    sum_d3 += d[i] * d[i] * d[i];
    sum_d_deg += d[i] * A.degree[i];
    const double b2 = A.degree[i] + d[i] * d[i];
    diag4 += b2 * b2;
  }
  for (auto [i, j] : A.edges) edge_dd += 2.0 * (d[i] + d[j]) * (d[i] + d[j]);
  const double edges2 = 2.0 * static_cast<double>(A.edges.size());
  PairStats st;
  if (k_max >= 3) st = pair_stats(A, g, d, k_max >= 4);
  tr[0] = sum_d;
  if (k_max >= 2) tr[1] = edges2 + sum_d2;
  if (k_max >= 3) tr[2] = st.common_edge + 3.0 * sum_d_deg + sum_d3;
  if (k_max >= 4) tr[3] = st.common_sq + 2.0 * st.common_edge_d + edge_dd + diag4;

  if (!center || p == 0.0) return tr;

  // Words containing L: tr(prod_i C G_{g_i}) with C = -pQ and G_g = Z^T B^g Z.
  const auto m = static_cast<Eigen::Index>(S.block_count());
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, m);
  for (std::uint32_t i = 0; i < n; ++i) Y(i, S.block_of[i]) = 1.0;
  std::vector<Eigen::MatrixXd> G;
  for (std::uint32_t gap = 0; gap < k_max; ++gap) {
    Eigen::MatrixXd Gg = Eigen::MatrixXd::Zero(m, m);
    for (std::uint32_t i = 0; i < n; ++i) Gg.row(S.block_of[i]) += Y.row(i);
    G.push_back(std::move(Gg));
    Eigen::MatrixXd next(n, m);
    for (std::uint32_t i = 0; i < n; ++i) {
      Eigen::RowVectorXd acc = d[i] * Y.row(i);
      for (auto l = g.offset[i]; l < g.offset[i + 1]; ++l) acc += Y.row(g.nbr[l]);
      next.row(i) = acc;
    }
    Y = std::move(next);
  }
  const Eigen::MatrixXd C = -p * S.blocks;
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    double extra = 0.0;
    for (std::uint32_t word = 1; word < (1u << k); ++word) {
      // Rotate so position 0 holds an L, then read the gaps between L's.
      std::uint32_t start = 0;
      while (!((word >> start) & 1u)) ++start;
      Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(m, m);
      std::uint32_t pos = 0;
      while (pos < k) {
        std::uint32_t gap = 0;
        ++pos;
        while (pos < k && !((word >> ((start + pos) % k)) & 1u)) {
          ++gap;
          ++pos;
        }
        prod = prod * C * G[gap];
      }
      extra += prod.trace();
    }
    tr[k - 1] += extra;
  }
  return tr;
}

std::vector<double> trace_powers_eigen(const AdjacencySample& A, bool center,
                                       const VarianceProfile& S, double p, std::uint32_t k_max) {
  check_sample(A, S);
  const std::uint32_t n = A.n;
  Eigen::MatrixXd M = A.dense();
  if (center)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j) M(i, j) -= p * S.s(i, j);
  std::vector<double> tr(k_max, 0.0);
  if (n == 0) return tr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::Resource, "eigensolver did not converge");
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()[i];
    double power = 1.0;
    for (std::uint32_t k = 1; k <= k_max; ++k) {
      power *= lambda;
      tr[k - 1] += power;
    }
  }
  return tr;
}

std::vector<double> trace_powers(const AdjacencySample& A, bool center, const VarianceProfile& S,
                                 double p, std::uint32_t k_max, const TraceOptions& options) {
  require(k_max >= 1, ErrorKind::Domain, "k_max must be >= 1");
  require(k_max <= options.max_k || options.accept_cost, ErrorKind::Resource,
          "k_max " + std::to_string(k_max) + " exceeds the guard " + std::to_string(options.max_k));
  bool combinatorial = false;
  switch (options.backend) {
    case TraceBackend::Combinatorial: combinatorial = true; break;
    case TraceBackend::Eigensolver: combinatorial = false; break;
    case TraceBackend::Auto:
      combinatorial = k_max <= 4 && (!center || S.block_count() <= options.max_blocks_combinatorial);
      break;
  }
  if (combinatorial) return trace_powers_combinatorial(A, center, S, p, k_max);
  require(A.n <= options.max_n || options.accept_cost, ErrorKind::Resource,
          "n = " + std::to_string(A.n) + " exceeds the dense eigensolver guard " +
              std::to_string(options.max_n));
  return trace_powers_eigen(A, center, S, p, k_max);
}

double scale_prefactor(StatisticKind kind, std::uint32_t k, double n, double p) {
  const double np = n * p;
  switch (kind) {
    case StatisticKind::CenteredX:
    case StatisticKind::NonCenteredLTilde:
      return std::sqrt(p) / std::pow(np, k / 2.0);
    case StatisticKind::NonCenteredL:
      return n * std::pow(p, k == 2 ? 1.5 : 0.5) / std::pow(np, static_cast<double>(k));
  }
  return 0.0;
}

StatisticVector statistic(const AdjacencySample& A, StatisticKind kind,
                          const std::vector<std::uint32_t>& ks, const VarianceProfile& S, double p,
                          const TraceOptions& options) {
  require(!ks.empty(), ErrorKind::Validation, "empty k list");
  std::uint32_t k_max = 0;
  for (auto k : ks) {
    require(k >= 2, ErrorKind::Domain, "statistics need k >= 2");
    k_max = std::max(k_max, k);
  }
  StatisticVector out{ks, {}, kind, static_cast<double>(A.n), p};
  if (p == 0.0) {  // empty graph; the prefactor is 0 * inf
    out.values.assign(ks.size(), 0.0);
    return out;
  }
  const auto tr = trace_powers(A, kind == StatisticKind::CenteredX, S, p, k_max, options);
  for (auto k : ks) out.values.push_back(scale_prefactor(kind, k, A.n, p) * tr[k - 1]);
  return out;
}

}  // namespace gfluct
