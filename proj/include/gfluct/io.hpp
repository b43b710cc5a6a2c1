#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gfluct/catalog.hpp"
#include "gfluct/exact_oracle.hpp"
#include "gfluct/graphon.hpp"
#include "gfluct/limit_theory.hpp"
#include "gfluct/mc_harness.hpp"
#include "gfluct/sampler.hpp"

namespace gfluct {

using Json = nlohmann::json;

const char* version_string();

// Whole-file reads; IO errors carry the path.
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);  // array of equal-length rows

// {"blocks": [[...]], "measures": [...]}; measures optional (uniform).
StepGraphon graphon_from_json(const Json& j);
Json graphon_to_json(const StepGraphon& W);
StepGraphon load_graphon(const std::string& path);

// Plain numeric grid (whitespace separated, one row per line, '#' comments)
// or JSON {"blocks": [[...]], "sizes": [...]}.
VarianceProfile parse_profile(const std::string& text);
VarianceProfile load_profile(const std::string& path);

Json multigraph_to_json(const Multigraph& g);
Json decorated_to_json(const DecoratedClass& c);
Json covariance_to_json(const CovarianceValue& v);
Json covariance_matrix_to_json(const CovarianceMatrix& m);

Json regime_to_json(const RegimeSpec& r);
RegimeSpec regime_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

Json report_to_json(const ExperimentReport& r);
// One row per (k, h) cell with k <= h: theory, empirical, SE, z. %.17g.
std::string report_table_csv(const ExperimentReport& r);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

// Hash over {subcommand, config, version, seed}; timestamps and output paths
// are recorded but do not enter the hash.
Json make_manifest(const std::string& subcommand, const Json& config, std::uint64_t seed);

}  // namespace gfluct
