#include "gfluct/exact_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>

#include "gfluct/error.hpp"
#include "gfluct/spectral.hpp"

namespace gfluct {

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double raw_moment(unsigned m, double q, bool centered) {
  if (centered) return bernoulli_central_moment(m, q);
  return m == 0 ? 1.0 : q;
}

// Edge multiset of a closed walk: (edge id, multiplicity), sorted by id.
using EdgeCounts = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

EdgeCounts walk_edges(const std::vector<std::uint32_t>& walk, std::uint32_t n) {
  std::map<std::uint32_t, std::uint32_t> counts;
  const auto k = walk.size();
  for (std::size_t t = 0; t < k; ++t) {
    auto a = walk[t], b = walk[(t + 1) % k];
    if (a > b) std::swap(a, b);
    ++counts[a * n + b];
  }
  return {counts.begin(), counts.end()};
}

// Closed walks of length k without loops, grouped by edge multiset.
std::map<EdgeCounts, double> walk_classes(std::uint32_t n, unsigned k) {
  std::map<EdgeCounts, double> out;
  std::vector<std::uint32_t> walk(k, 0);
  std::function<void(unsigned)> rec = [&](unsigned t) {
    if (t == k) {
      if (walk[k - 1] != walk[0]) out[walk_edges(walk, n)] += 1.0;
      return;
    }
    for (std::uint32_t v = 0; v < n; ++v) {
      if (t > 0 && v == walk[t - 1]) continue;
      walk[t] = v;
      rec(t + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

double bernoulli_central_moment(unsigned m, double q) {
  if (m == 0) return 1.0;
  return q * std::pow(1.0 - q, m) + (1.0 - q) * std::pow(-q, m);
}

double exact_cov(const WalkMomentSpec& spec, bool centered, unsigned k, unsigned h) {
  require(k >= 1 && h >= 1, ErrorKind::Domain, "walk lengths must be >= 1");
  const std::uint32_t n = spec.n;
  require(n >= 1 && spec.S.rows() == n && spec.S.cols() == n, ErrorKind::Validation,
          "profile must be n x n");
  require(std::pow(static_cast<double>(n), k + h) <= spec.budget, ErrorKind::Resource,
          "n^(k+h) exceeds the enumeration budget");
  auto q_of = [&](std::uint32_t id) {
    const double q = spec.p * spec.S(id / n, id % n);
    require(q >= 0.0 && q <= 1.0 + 1e-15, ErrorKind::Range, "edge probability outside [0,1]");
    return std::min(q, 1.0);
  };
  auto expectation = [&](const EdgeCounts& e) {
    double x = 1.0;
    for (auto [id, mult] : e) x *= raw_moment(mult, q_of(id), centered);
    return x;
  };
  const auto wk = walk_classes(n, k);
  const auto wh = k == h ? wk : walk_classes(n, h);
  Neumaier total;
  for (const auto& [ek, ck] : wk) {
    const double Ek = expectation(ek);
    for (const auto& [eh, ch] : wh) {
      // Merge the two multisets; independent unless an edge is shared.
      double joint = 1.0;
      bool shared = false;
      std::size_t a = 0, b = 0;
      while (a < ek.size() || b < eh.size()) {
        if (b == eh.size() || (a < ek.size() && ek[a].first < eh[b].first)) {
          joint *= raw_moment(ek[a].second, q_of(ek[a].first), centered);
          ++a;
        } else if (a == ek.size() || eh[b].first < ek[a].first) {
          joint *= raw_moment(eh[b].second, q_of(eh[b].first), centered);
          ++b;
        } else {
          shared = true;
          joint *= raw_moment(ek[a].second + eh[b].second, q_of(ek[a].first), centered);
          ++a;
          ++b;
        }
      }
      if (!shared) continue;
      total.add(ck * ch * (joint - Ek * expectation(eh)));
    }
  }
  return total.value();
}

double exact_cov_all_graphs(std::uint32_t n, const Eigen::MatrixXd& S, double p, unsigned k,
                            unsigned h, bool centered) {
  require(n >= 1 && n <= 5, ErrorKind::Resource, "all-graph enumeration limited to n <= 5");
  require(S.rows() == n && S.cols() == n, ErrorKind::Validation, "profile must be n x n");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const std::size_t count = std::size_t{1} << pairs.size();
  Eigen::MatrixXd EA = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : pairs) EA(i, j) = EA(j, i) = p * S(i, j);

  std::vector<double> prob(count), x(count), y(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    double pr = 1.0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const auto [i, j] = pairs[e];
      const double q = EA(i, j);
      if ((mask >> e) & 1u) {
        M(i, j) = M(j, i) = 1.0;
        pr *= q;
      } else {
        pr *= 1.0 - q;
      }
    }
    if (centered) M -= EA;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (unsigned t = 1; t <= std::max(k, h); ++t) {
      P = P * M;
      if (t == k) x[mask] = P.trace();
      if (t == h) y[mask] = P.trace();
    }
    prob[mask] = pr;
  }
  Neumaier ex, ey;
  for (std::size_t s = 0; s < count; ++s) {
    ex.add(prob[s] * x[s]);
    ey.add(prob[s] * y[s]);
  }
  Neumaier cov;
  for (std::size_t s = 0; s < count; ++s)
    cov.add(prob[s] * (x[s] - ex.value()) * (y[s] - ey.value()));
  return cov.value();
}

double exact_cov_homogeneous(double n, double q, unsigned k, unsigned h, bool centered) {
  require(k >= 2 && h >= 2, ErrorKind::Domain, "walk lengths must be >= 2");
  require(k + h <= 12, ErrorKind::Resource, "set-partition oracle limited to k + h <= 12");
  require(q >= 0.0 && q <= 1.0, ErrorKind::Range, "edge probability outside [0,1]");
  const unsigned len = k + h;
  std::vector<unsigned> label(len, 0);
  // Positions 0..k-1 form walk I, k..k+h-1 walk J; neighbours within a walk
  // (cyclically) must carry different labels.
  auto prev_of = [&](unsigned t) -> int {
    if (t == 0 || t == k) return -1;
    return static_cast<int>(t - 1);
  };
  Neumaier total;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned t, unsigned blocks) {
    if (t == len) {
      if (label[k - 1] == label[0] || label[len - 1] == label[k]) return;
      std::map<std::pair<unsigned, unsigned>, std::pair<unsigned, unsigned>> mult;
      for (unsigned s = 0; s < k; ++s) {
        auto a = label[s], b = label[(s + 1) % k];
        ++mult[{std::min(a, b), std::max(a, b)}].first;
      }
      for (unsigned s = 0; s < h; ++s) {
        auto a = label[k + s], b = label[k + (s + 1) % h];
        ++mult[{std::min(a, b), std::max(a, b)}].second;
      }
      double ei = 1.0, ej = 1.0, joint = 1.0;
      bool shared = false;
      for (const auto& [edge, m] : mult) {
        ei *= raw_moment(m.first, q, centered);
        ej *= raw_moment(m.second, q, centered);
        joint *= raw_moment(m.first + m.second, q, centered);
        shared = shared || (m.first > 0 && m.second > 0);
      }
      if (!shared) return;
      double falling = 1.0;
      for (unsigned v = 0; v < blocks; ++v) falling *= (n - v);
      total.add(falling * (joint - ei * ej));
      return;
    }
    const int prev = prev_of(t);
    for (unsigned b = 0; b <= blocks; ++b) {
      if (prev >= 0 && label[static_cast<unsigned>(prev)] == b) continue;
      label[t] = b;
      rec(t + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return total.value();
}

double regime_path_p(const RegimeSpec& regime, double n) {
  double p = 0.0;
  switch (regime.regime) {
    case Regime::Dense: p = regime.p; break;
    case Regime::PolyHalf: p = std::pow(n, -0.25); break;
    case Regime::CriticalHalf: p = regime.c / std::sqrt(n); break;
    case Regime::PolyM: {
      const double m = regime.m;
      p = std::pow(n, 0.5 * (1.0 / m + 1.0 / (m - 1.0))) / n;
      break;
    }
    case Regime::CriticalM: p = regime.c * std::pow(n, 1.0 / regime.m - 1.0); break;
    case Regime::Subpoly: p = std::pow(std::log(n), 2.0) / n; break;
    case Regime::Bounded: p = regime.c / n; break;
  }
  require(p > 0.0 && p <= 1.0, ErrorKind::Range,
          "regime path gives p outside (0,1] at n = " + std::to_string(n));
  return p;
}

std::vector<DriftRow> drift_table(unsigned k, unsigned h, const std::vector<double>& ns,
                                  const RegimeSpec& regime) {
  regime.validate();
  const double theory = covariance(k, h, StepGraphon::constant(1.0), regime).value;
  const bool centered = regime.statistic == StatisticKind::CenteredX;
  std::vector<DriftRow> rows;
  for (double n : ns) {
    DriftRow r;
    r.n = n;
    r.p = regime_path_p(regime, n);
    r.scaled_cov = scale_prefactor(regime.statistic, k, n, r.p) *
                   scale_prefactor(regime.statistic, h, n, r.p) *
                   exact_cov_homogeneous(n, r.p, k, h, centered);
    r.theory = theory;
    r.abs_error = std::abs(r.scaled_cov - theory);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gfluct
