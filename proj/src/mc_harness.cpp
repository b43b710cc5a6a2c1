#include "gfluct/mc_harness.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gfluct/error.hpp"
#include "gfluct/exact_oracle.hpp"
#include "gfluct/rng.hpp"

namespace gfluct {

double ExperimentConfig::sampling_p() const {
  if (p) return *p;
  return regime_path_p(regime, static_cast<double>(n));
}

void ExperimentConfig::validate() const {
  regime.validate();
  require(n >= 2, ErrorKind::Validation, "n must be >= 2");
  require(replicates >= 100, ErrorKind::Validation, "covariance reports need R >= 100 replicates");
  require(!ks.empty(), ErrorKind::Validation, "empty k list");
  for (auto k : ks) require(k >= 2, ErrorKind::Domain, "statistics need k >= 2");
  require(workers >= 1, ErrorKind::Validation, "workers must be >= 1");
  require(z_threshold > 0, ErrorKind::Validation, "z threshold must be > 0");
  const double q = sampling_p();
  require(q >= 0.0 && q <= 1.0, ErrorKind::Range, "sampling p must lie in [0,1]");
  require(q * graphon.max_value() <= 1.0 + 1e-15, ErrorKind::Range, "p * max(W) exceeds 1");
  for (const auto& quad : wick_quadruples)
    for (auto k : quad)
      require(std::find(ks.begin(), ks.end(), k) != ks.end(), ErrorKind::Validation,
              "Wick quadruple uses k=" + std::to_string(k) + " outside the k list");
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
  const auto R = samples.rows();
  require(R >= 2, ErrorKind::Validation, "need at least two replicates");
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(R - 1);
}

Eigen::MatrixXd jackknife_se(const Eigen::MatrixXd& samples) {
  const auto R = samples.rows();
  const auto d = samples.cols();
  require(R >= 3, ErrorKind::Validation, "jackknife needs at least three replicates");
  const Eigen::MatrixXd u = samples.rowwise() - samples.colwise().mean();
  const Eigen::MatrixXd suv = u.transpose() * u;
  const double Rd = static_cast<double>(R);
  Eigen::MatrixXd se(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b) {
      // Leaving out row i: (S_uv - u_i v_i R/(R-1)) / (R-2).
      Eigen::ArrayXd prod = u.col(a).array() * u.col(b).array();
      Eigen::ArrayXd loo = (suv(a, b) - prod * (Rd / (Rd - 1.0))) / (Rd - 2.0);
      const double mean = loo.mean();
      const double var = (loo - mean).square().sum() * (Rd - 1.0) / Rd;
      se(a, b) = se(b, a) = std::sqrt(var);
    }
  return se;
}

GaussianityDiagnostics gaussianity(const Eigen::VectorXd& values, double z_threshold) {
  GaussianityDiagnostics g;
  const auto R = values.size();
  require(R >= 3, ErrorKind::Validation, "Gaussianity diagnostics need at least three values");
  const Eigen::ArrayXd c = values.array() - values.mean();
  const double m2 = c.square().mean();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (!(m2 > 1e-28 * scale * scale)) {
    g.degenerate = true;
    g.flagged = true;
    return g;
  }
  const double m3 = c.cube().mean(), m4 = c.square().square().mean();
  g.skewness = m3 / std::pow(m2, 1.5);
  g.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  g.z_skewness = g.skewness * std::sqrt(R / 6.0);
  g.z_kurtosis = g.excess_kurtosis * std::sqrt(R / 24.0);
  g.flagged = std::abs(g.z_skewness) > z_threshold || std::abs(g.z_kurtosis) > z_threshold;
  return g;
}

namespace {

struct WickPoint {
  double fourth = 0, prediction = 0;
};

WickPoint wick_statistic(const Eigen::MatrixXd& samples, const std::vector<Eigen::Index>& rows,
                         const std::array<std::size_t, 4>& col) {
  const auto R = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(R, 4);
  for (Eigen::Index i = 0; i < R; ++i)
    for (int j = 0; j < 4; ++j) x(i, j) = samples(rows[static_cast<std::size_t>(i)],
                                                  static_cast<Eigen::Index>(col[static_cast<std::size_t>(j)]));
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd C = x.transpose() * x / static_cast<double>(R);
  WickPoint w;
  w.fourth = (x.col(0).array() * x.col(1).array() * x.col(2).array() * x.col(3).array()).mean();
  w.prediction = C(0, 1) * C(2, 3) + C(0, 2) * C(1, 3) + C(0, 3) * C(1, 2);
  return w;
}

}  // namespace

WickResult wick_check(const Eigen::MatrixXd& samples, std::array<std::size_t, 4> columns,
                      std::uint32_t resamples, std::uint64_t seed, double z_threshold) {
  const auto R = samples.rows();
  require(R >= 3, ErrorKind::Validation, "Wick check needs replicates");
  for (auto c : columns)
    require(c < static_cast<std::size_t>(samples.cols()), ErrorKind::Validation,
            "Wick column out of range");
  require(resamples >= 2, ErrorKind::Validation, "bootstrap needs >= 2 resamples");
  std::vector<Eigen::Index> all(static_cast<std::size_t>(R));
  for (Eigen::Index i = 0; i < R; ++i) all[static_cast<std::size_t>(i)] = i;
  const WickPoint full = wick_statistic(samples, all, columns);
  WickResult out;
  out.fourth_moment = full.fourth;
  out.prediction = full.prediction;
  out.residual = full.fourth - full.prediction;

  const CounterRng rng(seed, 0, RngStream::Bootstrap);
  std::vector<double> boot;
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(R));
  for (std::uint32_t b = 0; b < resamples; ++b) {
    for (Eigen::Index i = 0; i < R; ++i) {
      const auto word = rng.block(static_cast<std::uint64_t>(b) * static_cast<std::uint64_t>(R) +
                                  static_cast<std::uint64_t>(i))[0];
      rows[static_cast<std::size_t>(i)] =
          static_cast<Eigen::Index>((static_cast<std::uint64_t>(word) * static_cast<std::uint64_t>(R)) >> 32);
    }
    const WickPoint w = wick_statistic(samples, rows, columns);
    boot.push_back(w.fourth - w.prediction);
  }
  double mean = 0;
  for (double v : boot) mean += v;
  mean /= static_cast<double>(boot.size());
  double var = 0;
  for (double v : boot) var += (v - mean) * (v - mean);
  out.bootstrap_se = std::sqrt(var / static_cast<double>(boot.size() - 1));
  out.z = out.bootstrap_se > 0 ? out.residual / out.bootstrap_se
                               : (out.residual == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  out.flagged = std::abs(out.z) > z_threshold;
  return out;
}

Eigen::MatrixXd simulate_statistics(const ExperimentConfig& config) {
  config.validate();
  const double p = config.sampling_p();
  const auto R = config.replicates;
  const auto d = static_cast<Eigen::Index>(config.ks.size());
  Eigen::MatrixXd samples(R, d);
  const VarianceProfile fixed = VarianceProfile::from_graphon(config.graphon, config.n);

  std::atomic<std::uint32_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::uint32_t r = next++; r < R; r = next++) {
        StatisticVector s;
        if (config.sampling == SamplingMode::WRandom) {
          const auto A = sample_w_random(config.graphon, config.n, p, config.seed, r);
          s = statistic(A, config.regime.statistic, config.ks,
                        latent_profile(config.graphon, A.latent), p, config.trace);
        } else {
          const auto A = sample_profile(fixed, p, config.seed, r);
          s = statistic(A, config.regime.statistic, config.ks, fixed, p, config.trace);
        }
        for (Eigen::Index a = 0; a < d; ++a) samples(r, a) = s.values[static_cast<std::size_t>(a)];
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = R;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < config.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return samples;
}

ExperimentReport analyze(const ExperimentConfig& config, Eigen::MatrixXd samples) {
  config.validate();
  const auto d = static_cast<Eigen::Index>(config.ks.size());
  require(samples.cols() == d && samples.rows() == config.replicates, ErrorKind::Validation,
          "stored samples do not match the configuration");
  ExperimentReport rep;
  rep.config = config;
  rep.p = config.sampling_p();
  if (!config.skip_theory) {
    std::vector<unsigned> ks(config.ks.begin(), config.ks.end());
    rep.theory = covariance_matrix(ks, config.graphon, config.regime);
  }
  rep.samples = std::move(samples);
  rep.empirical = sample_covariance(rep.samples);
  rep.standard_error = jackknife_se(rep.samples);
  rep.z = Eigen::MatrixXd::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  if (rep.theory)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        if (rep.standard_error(a, b) > 0)
          rep.z(a, b) = (rep.empirical(a, b) - rep.theory->value(a, b)) / rep.standard_error(a, b);

  for (Eigen::Index a = 0; a < d; ++a) {
    rep.gaussianity.push_back(gaussianity(rep.samples.col(a), config.z_threshold));
    rep.degenerate = rep.degenerate || rep.gaussianity.back().degenerate;
  }
  for (std::size_t q = 0; q < config.wick_quadruples.size(); ++q) {
    std::array<std::size_t, 4> cols{};
    for (int j = 0; j < 4; ++j)
      cols[static_cast<std::size_t>(j)] = static_cast<std::size_t>(
          std::find(config.ks.begin(), config.ks.end(), config.wick_quadruples[q][static_cast<std::size_t>(j)]) -
          config.ks.begin());
    WickResult w = wick_check(rep.samples, cols, config.bootstrap_resamples, config.seed + q,
                              config.z_threshold);
    w.ks = config.wick_quadruples[q];
    rep.wick.push_back(w);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.empirical, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, rep.empirical.cwiseAbs().maxCoeff());
  rep.psd = rep.min_eigenvalue >= -1e-9 * scale;
  return rep;
}

ExperimentReport run(const ExperimentConfig& config) {
  config.validate();
  // Fail on inadmissible or divergent theory requests before sampling.
  if (!config.skip_theory) {
    std::vector<unsigned> ks(config.ks.begin(), config.ks.end());
    (void)covariance_matrix(ks, config.graphon, config.regime);
  }
  return analyze(config, simulate_statistics(config));
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table{
      {"dense", 1000, 2000, "p fixed; k <= 4 uses the combinatorial trace backend"},
      {"poly-half", 2000, 1000, "p = n^{-1/4}"},
      {"critical-half", 4000, 2000, "p = c / sqrt(n)"},
      {"poly-m", 4000, 1000, "np = n^{(1/m + 1/(m-1))/2}"},
      {"critical-m", 4000, 1000, "p = c n^{1/m - 1}"},
      {"subpoly", 4000, 2000, "np = (log n)^2"},
      {"bounded", 2000, 2000, "p = c / n"},
  };
  return table;
}

const Preset& preset_for(Regime r) {
  const std::string name = regime_name(r);
  for (const auto& p : presets())
    if (p.regime == name) return p;
  fail(ErrorKind::RegimeUnknown, "no preset for regime " + name);
}

}  // namespace gfluct
