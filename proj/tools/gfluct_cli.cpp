// Command line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gfluct/gfluct.h"

using Json = nlohmann::json;

namespace {

struct CliError {
  gf_status status;
  std::string message;
};

[[noreturn]] void cli_fail(gf_status s, const std::string& msg) { throw CliError{s, msg}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) cli_fail(GF_ERR_IO, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) cli_fail(GF_ERR_IO, "cannot write " + path);
  out << text;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    cli_fail(GF_ERR_IO, what + ": " + e.what());
  }
}

std::vector<unsigned> parse_list(const std::string& s, const char* what) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) cli_fail(GF_ERR_VALIDATION, std::string("bad ") + what + " list: " + s);
    out.push_back(static_cast<unsigned>(v));
  }
  if (out.empty()) cli_fail(GF_ERR_VALIDATION, std::string("empty ") + what + " list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) cli_fail(GF_ERR_VALIDATION, "bad number list: " + s);
    out.push_back(v);
  }
  return out;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { gf_string_free(p); }
};

void check(gf_status s) {
  if (s != GF_OK) cli_fail(s, gf_last_error_message());
}

// Options shared by all subcommands; unset flags leave the config untouched.
struct Options {
  std::string config_path, out_path, table_path, format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  // Request fields set from flags.
  Json fields = Json::object();
  // Raw flag values needing conversion.
  std::string ks, ns, wick;
  std::string export_sample;
};

// Loads --config. A run manifest or a full result document replays the
// request it recorded.
Json load_config(const std::string& path, const std::string& subcommand) {
  if (path.empty()) return Json::object();
  Json j = parse_json(read_file(path), path);
  if (!j.is_object()) cli_fail(GF_ERR_VALIDATION, path + ": config must be a JSON object");
  const Json* m = nullptr;
  if (j.contains("manifest") && j["manifest"].is_object()) m = &j["manifest"];
  else if (j.contains("hash") && j.contains("config") && j.contains("subcommand")) m = &j;
  if (m) {
    if ((*m)["subcommand"] != subcommand)
      cli_fail(GF_ERR_VALIDATION, path + " is a " + (*m)["subcommand"].get<std::string>() +
                                      " manifest, not " + subcommand);
    return (*m)["config"];
  }
  return j;
}

std::string fmt6(const Json& v) {
  if (v.is_null()) return "nan";
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string human(const Json& doc) {
  std::ostringstream os;
  for (const auto& [key, v] : doc.items()) {
    if (v.is_primitive() && key != "columns") os << key << ": " << fmt6(v) << "\n";
  }
  if (doc.contains("gaussianity"))
    for (const auto& g : doc["gaussianity"])
      os << "gaussianity k=" << g["k"] << ": z_skew " << fmt6(g["z_skewness"]) << ", z_kurt "
         << fmt6(g["z_kurtosis"]) << (g["flagged"].get<bool>() ? "  FLAGGED" : "") << "\n";
  if (doc.contains("wick"))
    for (const auto& w : doc["wick"])
      os << "wick " << w["ks"].dump() << ": residual " << fmt6(w["residual"]) << ", se "
         << fmt6(w["bootstrap_se"]) << ", z " << fmt6(w["z"]) << (w["flagged"].get<bool>() ? "  FLAGGED" : "")
         << "\n";
  if (doc.contains("table") && doc.contains("columns")) {
    std::vector<std::string> cols;
    for (const auto& c : doc["columns"]) cols.push_back(c.get<std::string>());
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width;
    for (const auto& c : cols) width.push_back(c.size());
    for (const auto& row : doc["table"]) {
      std::vector<std::string> r;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        r.push_back(row.contains(cols[i]) ? fmt6(row[cols[i]]) : "");
        width[i] = std::max(width[i], r.back().size());
      }
      cells.push_back(std::move(r));
    }
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        os << (i ? "  " : "") << r[i];
        if (i + 1 < r.size()) os << std::string(width[i] - r[i].size(), ' ');
      }
      os << "\n";
    };
    line(cols);
    for (const auto& r : cells) line(r);
  }
  if (doc.contains("manifest")) os << "manifest: " << doc["manifest"]["hash"].get<std::string>() << "\n";
  return os.str();
}

using Handler = gf_status (*)(const char*, char**);

int execute(const std::string& sub, Options& o) {
  Json req = load_config(o.config_path, sub);
  for (const auto& [k, v] : o.fields.items()) req[k] = v;
  if (!o.ks.empty()) {
    req["ks"] = parse_list(o.ks, "k");
    req.erase("k");
    req.erase("h");
  }
  if (!o.ns.empty()) req["ns"] = parse_double_list(o.ns);
  if (!o.wick.empty()) {
    const auto q = parse_list(o.wick, "Wick");
    if (q.size() % 4 != 0) cli_fail(GF_ERR_VALIDATION, "--wick takes groups of four k values");
    Json w = Json::array();
    for (std::size_t i = 0; i < q.size(); i += 4) w.push_back({q[i], q[i + 1], q[i + 2], q[i + 3]});
    req["wick"] = w;
  }
  if (o.seed) req["seed"] = *o.seed;
  if (o.workers) req["workers"] = *o.workers;
  if (o.format != "json" && o.format != "csv" && o.format != "text")
    cli_fail(GF_ERR_VALIDATION, "--format must be json, csv or text");

  const std::string started = utc_now();
  if (!o.export_sample.empty()) {
    LibString edges;
    check(gf_sample_edge_list(req.dump().c_str(), &edges.p));
    write_file(o.export_sample, edges.p);
  }

  Handler h = nullptr;
  if (sub == "catalog") h = gf_catalog;
  else if (sub == "theory") h = gf_theory;
  else if (sub == "simulate") h = gf_simulate;
  else if (sub == "compare") h = gf_compare;
  else h = gf_oracle;
  LibString result;
  check(h(req.dump().c_str(), &result.p));
  Json doc = parse_json(result.p, "library result");

  auto& manifest = doc["manifest"];
  manifest["started"] = started;
  manifest["finished"] = utc_now();
  if (!o.out_path.empty()) manifest["outputs"].push_back(o.out_path);
  if (!o.table_path.empty()) manifest["outputs"].push_back(o.table_path);
  if (!o.export_sample.empty()) manifest["outputs"].push_back(o.export_sample);

  std::string csv;
  if (o.format == "csv" || !o.table_path.empty()) {
    if (!doc.contains("table")) cli_fail(GF_ERR_VALIDATION, sub + " result has no flat table");
    LibString t;
    check(gf_result_csv(doc.dump().c_str(), &t.p));
    csv = t.p;
  }
  if (!o.table_path.empty()) write_file(o.table_path, csv);

  std::string text;
  if (o.format == "json") text = doc.dump(2) + "\n";
  else if (o.format == "csv") text = csv;
  else text = human(doc);
  if (o.out_path.empty()) std::cout << text;
  else write_file(o.out_path, text);
  return 0;
}

// Registers a flag that writes into the request object when given.
template <class T>
void field(CLI::App* app, Options& o, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<T>(flag, [&o, key](const T& v) { o.fields[key] = v; }, help);
}

void regime_flags(CLI::App* app, Options& o) {
  field<std::string>(app, o, "--regime", "regime",
                     "dense, poly-half, critical-half, poly-m, critical-m, subpoly, bounded");
  field<std::string>(app, o, "--statistic", "statistic", "X (centered), L (non-centered), Ltilde");
  field<double>(app, o, "--p", "p", "edge density (dense regime, oracle)");
  field<double>(app, o, "--c", "c", "critical or bounded constant");
  field<unsigned>(app, o, "--m", "m", "sub-regime index m >= 3");
  field<std::string>(app, o, "--graphon", "graphon_file", "graphon JSON file");
  app->add_option("--ks", o.ks, "comma separated k list");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global eigenvalue fluctuations of inhomogeneous random graphs"};
  app.set_help_flag("--help", "print help");  // frees -h; --h is a walk length
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gf_version()));
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config_path, "JSON request file or a run manifest to replay");
    s->add_option("--seed", o.seed, "master seed");
    s->add_option("--workers", o.workers, "worker threads");
    s->add_option("--out", o.out_path, "write output here instead of stdout");
    s->add_option("--format", o.format, "json (default), csv or text");
    s->add_option("--table", o.table_path, "also write the flat CSV table here");
  };

  auto* catalog = app.add_subcommand("catalog", "enumerate covariance graph classes");
  common(catalog);
  field<std::string>(catalog, o, "--class", "class",
                     "T1, T2, TC, TC_single, gluings, trees, S, F1, F2, cycle, cycle_multi, path");
  field<unsigned>(catalog, o, "--k", "k", "first walk length");
  field<unsigned>(catalog, o, "--h", "h", "second walk length");
  field<unsigned>(catalog, o, "--r", "r", "cycle length (TC_single)");
  field<unsigned>(catalog, o, "--i", "i", "edge count (trees)");
  field<std::string>(catalog, o, "--tree1", "tree1", "Dyck word (gluings)");
  field<std::string>(catalog, o, "--tree2", "tree2", "Dyck word (gluings)");
  field<std::string>(catalog, o, "--graphon", "graphon_file", "also report densities in this graphon");

  auto* theory = app.add_subcommand("theory", "limiting covariance matrix");
  common(theory);
  regime_flags(theory, o);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo covariance with diagnostics");
  common(simulate);
  regime_flags(simulate, o);
  field<unsigned>(simulate, o, "--n", "n", "graph size");
  field<unsigned>(simulate, o, "--replicates", "replicates", "number of replicates R (>= 100)");
  field<std::string>(simulate, o, "--sampling", "sampling", "profile (default) or w-random");
  field<double>(simulate, o, "--sampling-p", "sampling_p", "override the regime path p");
  field<double>(simulate, o, "--z-threshold", "z_threshold", "flag threshold");
  field<unsigned>(simulate, o, "--bootstrap", "bootstrap", "Wick bootstrap resamples");
  field<std::string>(simulate, o, "--backend", "backend", "auto, eigen or combinatorial");
  field<unsigned>(simulate, o, "--max-n", "max_n", "eigensolver size guard");
  simulate->add_flag_function("--accept-cost", [&](std::int64_t) { o.fields["accept_cost"] = true; },
                              "lift the size guards");
  simulate->add_flag_function("--skip-theory", [&](std::int64_t) { o.fields["skip_theory"] = true; },
                              "empirical statistics only");
  simulate->add_option("--wick", o.wick, "Wick quadruple(s), e.g. 2,2,3,3");
  simulate->add_option("--export-sample", o.export_sample, "write replicate 0 as an edge list");

  auto* compare = app.add_subcommand("compare", "recompute statistics of a stored simulate report");
  common(compare);
  field<std::string>(compare, o, "--report", "report_file", "simulate output (JSON)");

  auto* oracle = app.add_subcommand("oracle", "exact finite-n covariances and drift tables");
  common(oracle);
  regime_flags(oracle, o);
  field<std::string>(oracle, o, "--mode", "mode", "walks (default), all-graphs, homogeneous, drift");
  oracle->add_option_function<double>(
      "--n",
      [&](const double& n) {
        if (n >= 0 && n == std::floor(n) && n < 4294967296.0) o.fields["n"] = static_cast<unsigned>(n);
        else o.fields["n"] = n;
      },
      "graph size (real values allowed in homogeneous mode)");
  field<unsigned>(oracle, o, "--k", "k", "walk length");
  field<unsigned>(oracle, o, "--h", "h", "walk length");
  field<std::string>(oracle, o, "--profile", "profile_file", "variance profile file");
  field<bool>(oracle, o, "--centered", "centered", "true for A - EA, false for A");
  oracle->add_option("--ns", o.ns, "comma separated sizes for the drift table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: VALIDATION: " << e.what() << "\n";
    return 1;
  }

  try {
    for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), o);
  } catch (const CliError& e) {
    std::string msg = e.message;
    for (auto& c : msg)
      if (c == '\n') c = ' ';
    std::cerr << "error: " << gf_status_name(e.status) << ": " << msg << "\n";
    return gf_status_exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
