#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfluct/limit_theory.hpp"
#include "gfluct/spectral.hpp"

namespace gfluct {

enum class SamplingMode {
  Profile,  // deterministic block assignment from the graphon's measures
  WRandom,  // latent uniforms per replicate
};

struct ExperimentConfig {
  RegimeSpec regime;
  StepGraphon graphon = StepGraphon::constant(1.0);
  SamplingMode sampling = SamplingMode::Profile;
  std::uint32_t n = 0;
  std::uint32_t replicates = 0;
  std::vector<std::uint32_t> ks;
  std::uint64_t seed = 0;
  std::optional<double> p;  // sampling p; derived from the regime when absent
  double z_threshold = 4.0;
  unsigned workers = 1;
  std::vector<std::array<std::uint32_t, 4>> wick_quadruples;
  std::uint32_t bootstrap_resamples = 200;
  TraceOptions trace;
  bool skip_theory = false;  // still validates the regime

  // Edge probability used for sampling at size n.
  double sampling_p() const;
  void validate() const;
};

struct GaussianityDiagnostics {
  double skewness = 0;         // g1
  double excess_kurtosis = 0;  // g2
  double z_skewness = 0;       // g1 sqrt(R/6)
  double z_kurtosis = 0;       // g2 sqrt(R/24)
  bool degenerate = false;
  bool flagged = false;
};

struct WickResult {
  std::array<std::uint32_t, 4> ks{};
  double fourth_moment = 0;
  double prediction = 0;  // sum over pairings of empirical covariance products
  double residual = 0;
  double bootstrap_se = 0;
  double z = 0;
  bool flagged = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  double p = 0;
  Eigen::MatrixXd samples;  // R x d, raw scaled statistics per replicate
  Eigen::MatrixXd empirical;
  Eigen::MatrixXd standard_error;
  std::optional<CovarianceMatrix> theory;
  Eigen::MatrixXd z;
  std::vector<GaussianityDiagnostics> gaussianity;
  std::vector<WickResult> wick;
  double min_eigenvalue = 0;
  bool psd = true;
  bool degenerate = false;
};

// Sample covariance (divisor R-1) of mean-centered columns.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples);

// Delete-1 jackknife standard error of each sample covariance entry.
Eigen::MatrixXd jackknife_se(const Eigen::MatrixXd& samples);

GaussianityDiagnostics gaussianity(const Eigen::VectorXd& values, double z_threshold = 4.0);

// Columns a, b, c, d of `samples`. Bootstrap resamples are drawn from the
// counter-based generator keyed by `seed`, so the SE is reproducible.
WickResult wick_check(const Eigen::MatrixXd& samples, std::array<std::size_t, 4> columns,
                      std::uint32_t resamples = 200, std::uint64_t seed = 0,
                      double z_threshold = 4.0);

// Replicate values only (R x d); deterministic for any worker count.
Eigen::MatrixXd simulate_statistics(const ExperimentConfig& config);

// Statistics of stored replicate values; theory recomputed from the config.
ExperimentReport analyze(const ExperimentConfig& config, Eigen::MatrixXd samples);

ExperimentReport run(const ExperimentConfig& config);

struct Preset {
  std::string regime;
  std::uint32_t n;
  std::uint32_t replicates;
  std::string note;
};

// Default (n, R) budgets per regime, overridable by config and flags.
const std::vector<Preset>& presets();
const Preset& preset_for(Regime r);

}  // namespace gfluct
