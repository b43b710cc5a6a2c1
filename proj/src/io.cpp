#include "gfluct/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "gfluct/error.hpp"

namespace gfluct {

const char* version_string() { return "0.1.0"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Io, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path);
}

namespace {

double number(const Json& j, const char* what) {
  require(j.is_number(), ErrorKind::Validation, std::string(what) + " must be a number");
  return j.get<double>();
}

// NaN and infinities have no JSON spelling; they become null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(finite_or_null(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::Validation, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  require(j[0].is_array(), ErrorKind::Validation, "matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, ErrorKind::Validation,
            "matrix rows have unequal lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& x = row[static_cast<std::size_t>(c)];
      m(i, c) = x.is_null() ? std::numeric_limits<double>::quiet_NaN() : number(x, "matrix entry");
    }
  }
  return m;
}

StepGraphon graphon_from_json(const Json& j) {
  require(j.is_object() && j.contains("blocks"), ErrorKind::Validation,
          "graphon needs a \"blocks\" matrix");
  const Eigen::MatrixXd B = matrix_from_json(j.at("blocks"));
  std::vector<double> measures;
  if (j.contains("measures")) {
    require(j["measures"].is_array(), ErrorKind::Validation, "measures must be an array");
    for (const auto& x : j["measures"]) measures.push_back(number(x, "measure"));
  }
  return StepGraphon(B, measures);
}

Json graphon_to_json(const StepGraphon& W) {
  return {{"blocks", matrix_to_json(W.values())}, {"measures", W.measures()}};
}

StepGraphon load_graphon(const std::string& path) {
  try {
    return graphon_from_json(read_json_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

VarianceProfile parse_profile(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  require(first != std::string::npos, ErrorKind::Validation, "empty profile");
  if (text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::Io, e.what());
    }
    require(j.contains("blocks") && j.contains("sizes"), ErrorKind::Validation,
            "block-model profile needs \"blocks\" and \"sizes\"");
    std::vector<std::uint32_t> sizes;
    for (const auto& s : j["sizes"]) {
      require(s.is_number_unsigned(), ErrorKind::Validation, "block sizes must be non-negative integers");
      sizes.push_back(s.get<std::uint32_t>());
    }
    return VarianceProfile::block_model(matrix_from_json(j["blocks"]), sizes);
  }
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == tok.size(), ErrorKind::Validation, "not a number in profile: " + tok);
      row.push_back(x);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  Eigen::MatrixXd S(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    require(rows[i].size() == n, ErrorKind::Validation, "profile grid must be square");
    for (std::size_t j = 0; j < n; ++j) S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return VarianceProfile::dense(S);
}

VarianceProfile load_profile(const std::string& path) { return parse_profile(read_text_file(path)); }

Json multigraph_to_json(const Multigraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.a, e.b, e.multiplicity});
  return {{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

Json decorated_to_json(const DecoratedClass& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries()) {
    Json x = multigraph_to_json(e.graph);
    x["key"] = e.key;
    x["multiplicity"] = e.multiplicity;
    entries.push_back(std::move(x));
  }
  return {{"total", c.total()}, {"iso_classes", c.entries().size()}, {"entries", std::move(entries)}};
}

Json covariance_to_json(const CovarianceValue& v) {
  Json terms = Json::array();
  for (const auto& t : v.terms)
    terms.push_back({{"label", t.label},
                     {"coefficient", finite_or_null(t.coefficient)},
                     {"density_sum", finite_or_null(t.density_sum)},
                     {"class_total", t.class_total},
                     {"value", finite_or_null(t.value)}});
  return {{"value", finite_or_null(v.value)}, {"terms", std::move(terms)}};
}

Json covariance_matrix_to_json(const CovarianceMatrix& m) {
  Json cells = Json::array();
  for (std::size_t a = 0; a < m.ks.size(); ++a)
    for (std::size_t b = a; b < m.ks.size(); ++b) {
      Json c = covariance_to_json(m.cells[a][b]);
      c["k"] = m.ks[a];
      c["h"] = m.ks[b];
      cells.push_back(std::move(c));
    }
  return {{"ks", m.ks}, {"matrix", matrix_to_json(m.value)}, {"cells", std::move(cells)}};
}

Json regime_to_json(const RegimeSpec& r) {
  Json j{{"regime", regime_name(r.regime)}, {"statistic", statistic_name(r.statistic)}};
  switch (r.regime) {
    case Regime::Dense: j["p"] = r.p; break;
    case Regime::CriticalHalf:
    case Regime::Bounded: j["c"] = r.c; break;
    case Regime::PolyM: j["m"] = r.m; break;
    case Regime::CriticalM:
      j["c"] = r.c;
      j["m"] = r.m;
      break;
    default: break;
  }
  return j;
}

RegimeSpec regime_from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Validation, "request must be an object");
  require(j.contains("regime"), ErrorKind::Validation, "missing \"regime\"");
  RegimeSpec r;
  r.regime = parse_regime(j["regime"].get<std::string>());
  if (j.contains("statistic")) {
    r.statistic = parse_statistic(j["statistic"].get<std::string>());
  } else {
    // L is the natural default wherever it has a limit.
    r.statistic = (r.regime == Regime::Subpoly || r.regime == Regime::Bounded)
                      ? StatisticKind::CenteredX
                      : StatisticKind::NonCenteredL;
  }
  if (j.contains("p") && r.regime == Regime::Dense) r.p = number(j["p"], "p");
  if (j.contains("c")) r.c = number(j["c"], "c");
  if (j.contains("m")) {
    require(j["m"].is_number_unsigned(), ErrorKind::Validation, "m must be a positive integer");
    r.m = j["m"].get<unsigned>();
  }
  r.validate();
  return r;
}

namespace {

const char* backend_name(TraceBackend b) {
  switch (b) {
    case TraceBackend::Auto: return "auto";
    case TraceBackend::Eigensolver: return "eigen";
    case TraceBackend::Combinatorial: return "combinatorial";
  }
  return "auto";
}

TraceBackend parse_backend(const std::string& s) {
  if (s == "auto") return TraceBackend::Auto;
  if (s == "eigen" || s == "eigensolver") return TraceBackend::Eigensolver;
  if (s == "combinatorial") return TraceBackend::Combinatorial;
  fail(ErrorKind::Validation, "unknown trace backend: " + s);
}

template <class T>
T get_uint(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  require(j[key].is_number_unsigned(), ErrorKind::Validation,
          std::string(key) + " must be a non-negative integer");
  return j[key].get<T>();
}

}  // namespace

Json config_to_json(const ExperimentConfig& c) {
  Json j = regime_to_json(c.regime);
  j["graphon"] = graphon_to_json(c.graphon);
  j["sampling"] = c.sampling == SamplingMode::WRandom ? "w-random" : "profile";
  j["n"] = c.n;
  j["replicates"] = c.replicates;
  j["ks"] = c.ks;
  j["seed"] = c.seed;
  if (c.p) j["sampling_p"] = *c.p;
  j["z_threshold"] = c.z_threshold;
  j["workers"] = c.workers;
  j["wick"] = Json::array();
  for (const auto& q : c.wick_quadruples) j["wick"].push_back(q);
  j["bootstrap"] = c.bootstrap_resamples;
  j["backend"] = backend_name(c.trace.backend);
  j["max_n"] = c.trace.max_n;
  j["max_k"] = c.trace.max_k;
  j["accept_cost"] = c.trace.accept_cost;
  j["skip_theory"] = c.skip_theory;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.regime = regime_from_json(j);
  if (j.contains("graphon")) c.graphon = graphon_from_json(j["graphon"]);
  if (j.contains("graphon_file")) c.graphon = load_graphon(j["graphon_file"].get<std::string>());
  if (j.contains("sampling")) {
    const auto s = j["sampling"].get<std::string>();
    require(s == "profile" || s == "w-random", ErrorKind::Validation, "sampling must be profile or w-random");
    c.sampling = s == "w-random" ? SamplingMode::WRandom : SamplingMode::Profile;
  }
  const Preset& preset = preset_for(c.regime.regime);
  c.n = get_uint<std::uint32_t>(j, "n", preset.n);
  c.replicates = get_uint<std::uint32_t>(j, "replicates", preset.replicates);
  require(j.contains("ks") && j["ks"].is_array(), ErrorKind::Validation, "missing \"ks\" list");
  for (const auto& k : j["ks"]) {
    require(k.is_number_unsigned(), ErrorKind::Validation, "ks must be positive integers");
    c.ks.push_back(k.get<std::uint32_t>());
  }
  c.seed = get_uint<std::uint64_t>(j, "seed", 0);
  if (j.contains("sampling_p")) c.p = number(j["sampling_p"], "sampling_p");
  if (j.contains("z_threshold")) c.z_threshold = number(j["z_threshold"], "z_threshold");
  c.workers = get_uint<unsigned>(j, "workers", 1);
  if (j.contains("wick"))
    for (const auto& q : j["wick"]) {
      require(q.is_array() && q.size() == 4, ErrorKind::Validation, "Wick entries are 4-element k lists");
      c.wick_quadruples.push_back({q[0].get<std::uint32_t>(), q[1].get<std::uint32_t>(),
                                   q[2].get<std::uint32_t>(), q[3].get<std::uint32_t>()});
    }
  c.bootstrap_resamples = get_uint<std::uint32_t>(j, "bootstrap", 200);
  if (j.contains("backend")) c.trace.backend = parse_backend(j["backend"].get<std::string>());
  c.trace.max_n = get_uint<std::uint32_t>(j, "max_n", c.trace.max_n);
  c.trace.max_k = get_uint<std::uint32_t>(j, "max_k", c.trace.max_k);
  if (j.contains("accept_cost")) c.trace.accept_cost = j["accept_cost"].get<bool>();
  if (j.contains("skip_theory")) c.skip_theory = j["skip_theory"].get<bool>();
  c.validate();
  return c;
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["config"] = config_to_json(r.config);
  j["p"] = r.p;
  j["ks"] = r.config.ks;
  j["samples"] = matrix_to_json(r.samples);
  j["empirical"] = matrix_to_json(r.empirical);
  j["standard_error"] = matrix_to_json(r.standard_error);
  j["theory"] = r.theory ? covariance_matrix_to_json(*r.theory) : Json(nullptr);
  j["z"] = matrix_to_json(r.z);
  Json g = Json::array();
  for (std::size_t a = 0; a < r.gaussianity.size(); ++a) {
    const auto& d = r.gaussianity[a];
    g.push_back({{"k", r.config.ks[a]},
                 {"skewness", finite_or_null(d.skewness)},
                 {"excess_kurtosis", finite_or_null(d.excess_kurtosis)},
                 {"z_skewness", finite_or_null(d.z_skewness)},
                 {"z_kurtosis", finite_or_null(d.z_kurtosis)},
                 {"degenerate", d.degenerate},
                 {"flagged", d.flagged}});
  }
  j["gaussianity"] = std::move(g);
  Json w = Json::array();
  for (const auto& x : r.wick)
    w.push_back({{"ks", x.ks},
                 {"fourth_moment", finite_or_null(x.fourth_moment)},
                 {"prediction", finite_or_null(x.prediction)},
                 {"residual", finite_or_null(x.residual)},
                 {"bootstrap_se", finite_or_null(x.bootstrap_se)},
                 {"z", finite_or_null(x.z)},
                 {"flagged", x.flagged}});
  j["wick"] = std::move(w);
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["psd"] = r.psd;
  j["degenerate"] = r.degenerate;
  Json table = Json::array();
  const auto d = r.config.ks.size();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      table.push_back({{"k", r.config.ks[a]},
                       {"h", r.config.ks[b]},
                       {"theory", r.theory ? finite_or_null(r.theory->value(ia, ib)) : Json(nullptr)},
                       {"empirical", finite_or_null(r.empirical(ia, ib))},
                       {"se", finite_or_null(r.standard_error(ia, ib))},
                       {"z", finite_or_null(r.z(ia, ib))}});
    }
  j["table"] = std::move(table);
  return j;
}

std::string report_table_csv(const ExperimentReport& r) {
  std::string out = "k,h,theory,empirical,se,z\n";
  auto num = [](double x) {
    if (std::isnan(x)) return std::string("nan");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  const auto d = r.config.ks.size();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      const double th = r.theory ? r.theory->value(ia, ib) : std::numeric_limits<double>::quiet_NaN();
      out += std::to_string(r.config.ks[a]) + "," + std::to_string(r.config.ks[b]) + "," + num(th) +
             "," + num(r.empirical(ia, ib)) + "," + num(r.standard_error(ia, ib)) + "," +
             num(r.z(ia, ib)) + "\n";
    }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

Json make_manifest(const std::string& subcommand, const Json& config, std::uint64_t seed) {
  const Json hashed{{"subcommand", subcommand}, {"config", config}, {"version", version_string()}, {"seed", seed}};
  const std::string now = utc_now();
  return {{"subcommand", subcommand},
          {"config", config},
          {"version", version_string()},
          {"seed", seed},
          {"started", now},
          {"finished", now},
          {"outputs", Json::array()},
          {"hash", hex64(fnv1a64(hashed.dump()))}};
}

}  // namespace gfluct
