#include "gfluct/requests.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gfluct/canonical.hpp"
#include "gfluct/error.hpp"

namespace gfluct {

namespace {

std::uint32_t get_u32(const Json& j, const char* key) {
  require(j.contains(key), ErrorKind::Validation, std::string("missing \"") + key + "\"");
  require(j[key].is_number_unsigned(), ErrorKind::Validation,
          std::string(key) + " must be a non-negative integer");
  return j[key].get<std::uint32_t>();
}

std::vector<unsigned> get_ks(const Json& j) {
  std::vector<unsigned> ks;
  if (j.contains("ks")) {
    require(j["ks"].is_array() && !j["ks"].empty(), ErrorKind::Validation, "ks must be a non-empty list");
    for (const auto& k : j["ks"]) {
      require(k.is_number_unsigned(), ErrorKind::Validation, "ks must be positive integers");
      ks.push_back(k.get<unsigned>());
    }
  } else {
    ks.push_back(get_u32(j, "k"));
    if (j.contains("h") && get_u32(j, "h") != ks[0]) ks.push_back(get_u32(j, "h"));
  }
  return ks;
}

StepGraphon request_graphon(const Json& j) {
  if (j.contains("graphon")) return graphon_from_json(j["graphon"]);
  if (j.contains("graphon_file")) return load_graphon(j["graphon_file"].get<std::string>());
  return StepGraphon::constant(1.0);
}

RootedPlanarTree parse_tree(const Json& j, const char* key) {
  require(j.contains(key) && j[key].is_string(), ErrorKind::Validation,
          std::string("missing Dyck word \"") + key + "\"");
  RootedPlanarTree t;
  t.dyck = j[key].get<std::string>();
  int depth = 0;
  for (char c : t.dyck) {
    require(c == '(' || c == ')', ErrorKind::Validation, "Dyck words use '(' and ')' only");
    depth += c == '(' ? 1 : -1;
    require(depth >= 0, ErrorKind::Validation, "unbalanced Dyck word " + t.dyck);
  }
  require(depth == 0 && !t.dyck.empty(), ErrorKind::Validation, "unbalanced Dyck word " + t.dyck);
  t.edge_count = static_cast<std::uint32_t>(t.dyck.size() / 2);
  return t;
}

std::string edge_string(const Multigraph& g) {
  std::string s;
  for (const auto& e : g.edges()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(e.a) + "-" + std::to_string(e.b);
    if (e.multiplicity != 1) s += "*" + std::to_string(e.multiplicity);
  }
  return s;
}

Json decorated_result(const DecoratedClass& cls, const std::optional<StepGraphon>& W) {
  Json out = decorated_to_json(cls);
  Json table = Json::array();
  double density_sum = 0;
  for (std::size_t i = 0; i < cls.entries().size(); ++i) {
    const auto& e = cls.entries()[i];
    Json row{{"key", e.key},
             {"vertices", e.graph.vertex_count()},
             {"edges", edge_string(e.graph)},
             {"multiplicity", e.multiplicity}};
    if (W) {
      const double t = hom_density(e.graph, *W);
      row["density"] = t;
      out["entries"][i]["density"] = t;
      density_sum += static_cast<double>(e.multiplicity) * t;
    }
    table.push_back(std::move(row));
  }
  if (W) out["density_sum"] = density_sum;
  out["table"] = std::move(table);
  out["columns"] = W ? Json{"key", "vertices", "edges", "multiplicity", "density"}
                     : Json{"key", "vertices", "edges", "multiplicity"};
  return out;
}

Json single_graph_result(const Multigraph& g, const std::optional<StepGraphon>& W) {
  Json out = multigraph_to_json(g);
  out["key"] = canonical_key(g);
  Json row{{"key", out["key"]}, {"vertices", g.vertex_count()}, {"edges", edge_string(g)}};
  if (W) {
    out["density"] = hom_density(g, *W);
    row["density"] = out["density"];
  }
  out["table"] = Json::array({row});
  out["columns"] = W ? Json{"key", "vertices", "edges", "density"} : Json{"key", "vertices", "edges"};
  return out;
}

Eigen::MatrixXd request_profile_matrix(const Json& j, std::uint32_t n) {
  if (!j.contains("profile")) return Eigen::MatrixXd::Ones(n, n);
  const Json& p = j["profile"];
  VarianceProfile S;
  if (p.is_array()) {
    S = VarianceProfile::dense(matrix_from_json(p));
  } else {
    require(p.is_object() && p.contains("blocks") && p.contains("sizes"), ErrorKind::Validation,
            "profile must be a matrix or {\"blocks\", \"sizes\"}");
    std::vector<std::uint32_t> sizes;
    for (const auto& s : p["sizes"]) sizes.push_back(s.get<std::uint32_t>());
    S = VarianceProfile::block_model(matrix_from_json(p["blocks"]), sizes);
  }
  require(S.n() == n, ErrorKind::Validation,
          "profile has " + std::to_string(S.n()) + " vertices but n = " + std::to_string(n));
  Eigen::MatrixXd M(n, n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) M(a, b) = S.s(a, b);
  return M;
}

bool request_centered(const Json& j) {
  if (j.contains("centered")) return j["centered"].get<bool>();
  if (j.contains("statistic")) return parse_statistic(j["statistic"].get<std::string>()) == StatisticKind::CenteredX;
  return true;
}

}  // namespace

Json handle_catalog(const Json& req) {
  require(req.is_object() && req.contains("class"), ErrorKind::Validation, "missing \"class\"");
  const std::string cls = req["class"].get<std::string>();
  std::optional<StepGraphon> W;
  if (req.contains("graphon") || req.contains("graphon_file")) W = request_graphon(req);
  Json out;
  if (cls == "T1" || cls == "T2" || cls == "TC") {
    const auto k = get_u32(req, "k"), h = get_u32(req, "h");
    if (cls == "TC") {
      out = decorated_result(class_TC_pair(k, h), W);
      out["expected_total"] = s_formula(k, h);
    } else {
      require(k % 2 == 0 && h % 2 == 0, ErrorKind::Domain, "T1/T2 need even k and h");
      out = decorated_result(cls == "T1" ? class_T1(k, h) : class_T2(k, h), W);
      out["expected_total"] = static_cast<std::uint64_t>(k) * h / 2 * catalan(k / 2) * catalan(h / 2);
    }
    out["k"] = k;
    out["h"] = h;
  } else if (cls == "TC_single") {
    const auto k = get_u32(req, "k"), r = get_u32(req, "r");
    out = decorated_result(class_TC_single(k, r), W);
    out["k"] = k;
    out["r"] = r;
  } else if (cls == "gluings") {
    out = decorated_result(tree_gluings(parse_tree(req, "tree1"), parse_tree(req, "tree2")), W);
  } else if (cls == "trees") {
    const auto i = get_u32(req, "i");
    Json trees = Json::array(), table = Json::array();
    for (const auto& t : rooted_planar_trees(i)) {
      trees.push_back(t.dyck);
      table.push_back({{"dyck", t.dyck}});
    }
    out = {{"i", i}, {"total", trees.size()}, {"catalan", catalan(i)}, {"trees", trees},
           {"table", table}, {"columns", {"dyck"}}};
  } else if (cls == "S") {
    const auto k = get_u32(req, "k"), h = get_u32(req, "h");
    out = {{"k", k}, {"h", h}, {"s_formula", s_formula(k, h)},
           {"s_formula_parity_of_half_sum", s_formula_parity_of_half_sum(k, h)},
           {"total", s_formula(k, h)}};
  } else if (cls == "F1" || cls == "F2") {
    const auto k = get_u32(req, "k"), h = get_u32(req, "h");
    out = single_graph_result(cls == "F1" ? class_F1(k, h) : class_F2(k, h), W);
  } else if (cls == "cycle" || cls == "cycle_multi") {
    const auto h = get_u32(req, "h");
    out = single_graph_result(cls == "cycle" ? cycle(h) : cycle_multi(h), W);
  } else if (cls == "path") {
    out = single_graph_result(path(get_u32(req, "k")), W);
  } else {
    fail(ErrorKind::Validation, "unknown class " + cls +
                                    " (expected T1, T2, TC, TC_single, gluings, trees, S, F1, F2, "
                                    "cycle, cycle_multi, path)");
  }
  out["class"] = cls;
  return out;
}

Json handle_theory(const Json& req) {
  const RegimeSpec regime = regime_from_json(req);
  const StepGraphon W = request_graphon(req);
  const auto ks = get_ks(req);
  const CovarianceMatrix m = covariance_matrix(ks, W, regime);
  Json out = covariance_matrix_to_json(m);
  out["regime"] = regime_to_json(regime);
  Json table = Json::array();
  for (const auto& c : out["cells"]) table.push_back({{"k", c["k"]}, {"h", c["h"]}, {"theory", c["value"]}});
  out["table"] = std::move(table);
  out["columns"] = {"k", "h", "theory"};
  return out;
}

Json handle_simulate(const Json& req) {
  Json out = report_to_json(run(config_from_json(req)));
  out["columns"] = {"k", "h", "theory", "empirical", "se", "z"};
  return out;
}

Json handle_compare(const Json& req) {
  require(req.contains("report") && req["report"].is_object(), ErrorKind::Validation,
          "compare needs a stored \"report\"");
  const Json& rep = req["report"];
  require(rep.contains("config") && rep.contains("samples"), ErrorKind::Validation,
          "report lacks config or samples");
  const ExperimentConfig config = config_from_json(rep["config"]);
  Json out = report_to_json(analyze(config, matrix_from_json(rep["samples"])));
  out["columns"] = {"k", "h", "theory", "empirical", "se", "z"};
  return out;
}

Json handle_oracle(const Json& req) {
  require(req.is_object(), ErrorKind::Validation, "request must be an object");
  const std::string mode = req.value("mode", std::string("walks"));
  const bool centered = request_centered(req);
  Json out{{"mode", mode}, {"centered", centered}};
  Json table = Json::array();
  if (mode == "drift") {
    const RegimeSpec regime = regime_from_json(req);
    const auto k = get_u32(req, "k"), h = get_u32(req, "h");
    require(req.contains("ns") && req["ns"].is_array(), ErrorKind::Validation, "drift needs an \"ns\" list");
    std::vector<double> ns;
    for (const auto& n : req["ns"]) ns.push_back(n.get<double>());
    for (const auto& r : drift_table(k, h, ns, regime))
      table.push_back({{"n", r.n}, {"p", r.p}, {"scaled_cov", r.scaled_cov}, {"theory", r.theory},
                       {"abs_error", r.abs_error}});
    out["regime"] = regime_to_json(regime);
    out["k"] = k;
    out["h"] = h;
    out["table"] = table;
    out["columns"] = {"n", "p", "scaled_cov", "theory", "abs_error"};
    return out;
  }
  require(req.contains("p") && req["p"].is_number(), ErrorKind::Validation, "missing edge probability \"p\"");
  const double p = req["p"].get<double>();
  const auto ks = get_ks(req);
  const auto d = static_cast<Eigen::Index>(ks.size());
  Eigen::MatrixXd C(d, d);
  if (mode == "homogeneous") {
    require(req.contains("n") && req["n"].is_number(), ErrorKind::Validation, "missing \"n\"");
    const double n = req["n"].get<double>();
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = a; b < d; ++b)
        C(a, b) = C(b, a) = exact_cov_homogeneous(n, p, ks[static_cast<std::size_t>(a)],
                                                  ks[static_cast<std::size_t>(b)], centered);
    out["n"] = n;
  } else if (mode == "walks" || mode == "all-graphs") {
    const auto n = get_u32(req, "n");
    const Eigen::MatrixXd S = request_profile_matrix(req, n);
    WalkMomentSpec spec{n, S, p, 1e8};
    if (req.contains("budget")) spec.budget = req["budget"].get<double>();
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = a; b < d; ++b) {
        const auto k = ks[static_cast<std::size_t>(a)], h = ks[static_cast<std::size_t>(b)];
        C(a, b) = C(b, a) = mode == "walks" ? exact_cov(spec, centered, k, h)
                                            : exact_cov_all_graphs(n, S, p, k, h, centered);
      }
    out["n"] = n;
  } else {
    fail(ErrorKind::Validation, "unknown oracle mode " + mode + " (walks, all-graphs, homogeneous, drift)");
  }
  out["p"] = p;
  out["ks"] = ks;
  out["matrix"] = matrix_to_json(C);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b)
      table.push_back({{"k", ks[static_cast<std::size_t>(a)]}, {"h", ks[static_cast<std::size_t>(b)]},
                       {"exact", C(a, b)}});
  out["table"] = table;
  out["columns"] = {"k", "h", "exact"};
  return out;
}

std::string handle_sample(const Json& req) {
  const ExperimentConfig c = config_from_json(req);
  const std::uint32_t replicate = req.contains("replicate") ? get_u32(req, "replicate") : 0;
  const double p = c.sampling_p();
  const AdjacencySample A = c.sampling == SamplingMode::WRandom
                                ? sample_w_random(c.graphon, c.n, p, c.seed, replicate)
                                : sample_profile(VarianceProfile::from_graphon(c.graphon, c.n), p, c.seed, replicate);
  std::ostringstream os;
  write_edge_list(os, A);
  return os.str();
}

namespace {

// Inline every file reference so the manifest config is self-contained.
Json resolve_files(Json req) {
  if (!req.is_object()) return req;
  if (req.contains("graphon_file")) {
    req["graphon"] = graphon_to_json(load_graphon(req["graphon_file"].get<std::string>()));
    req.erase("graphon_file");
  }
  if (req.contains("profile_file")) {
    const VarianceProfile S = load_profile(req["profile_file"].get<std::string>());
    std::vector<std::uint32_t> sizes(S.block_count(), 0);
    for (auto b : S.block_of) ++sizes[b];
    // Contiguous blocks are required for the block-model spelling.
    bool contiguous = true;
    for (std::size_t i = 1; i < S.block_of.size(); ++i) contiguous = contiguous && S.block_of[i] >= S.block_of[i - 1];
    if (contiguous) {
      req["profile"] = {{"blocks", matrix_to_json(S.blocks)}, {"sizes", sizes}};
    } else {
      Eigen::MatrixXd M(S.n(), S.n());
      for (std::uint32_t a = 0; a < S.n(); ++a)
        for (std::uint32_t b = 0; b < S.n(); ++b) M(a, b) = S.s(a, b);
      req["profile"] = matrix_to_json(M);
    }
    req.erase("profile_file");
  }
  if (req.contains("report_file")) {
    req["report"] = read_json_file(req["report_file"].get<std::string>());
    req["report"].erase("manifest");
    req.erase("report_file");
  }
  return req;
}

}  // namespace

Json dispatch_request(const std::string& subcommand, const Json& request) {
  const Json req = resolve_files(request);
  Json out;
  if (subcommand == "catalog") out = handle_catalog(req);
  else if (subcommand == "theory") out = handle_theory(req);
  else if (subcommand == "simulate") out = handle_simulate(req);
  else if (subcommand == "compare") out = handle_compare(req);
  else if (subcommand == "oracle") out = handle_oracle(req);
  else fail(ErrorKind::Validation, "unknown subcommand " + subcommand);
  std::uint64_t seed = 0;
  if (req.contains("seed") && req["seed"].is_number_unsigned()) seed = req["seed"].get<std::uint64_t>();
  Json manifest = make_manifest(subcommand, req, seed);
  out["manifest"] = std::move(manifest);
  return out;
}

std::string result_table_csv(const Json& result) {
  require(result.contains("table") && result["table"].is_array(), ErrorKind::Validation,
          "result has no table");
  std::vector<std::string> cols;
  if (result.contains("columns")) {
    for (const auto& c : result["columns"]) cols.push_back(c.get<std::string>());
  } else if (!result["table"].empty()) {
    for (const auto& [key, v] : result["table"][0].items()) cols.push_back(key);
  }
  std::string out;
  if (result.contains("manifest")) out += "# manifest " + result["manifest"]["hash"].get<std::string>() + "\n";
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& row : result["table"]) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ",";
      const Json& v = row.contains(cols[i]) ? row[cols[i]] : Json(nullptr);
      if (v.is_null()) {
        out += "nan";
      } else if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        out += buf;
      } else if (v.is_string()) {
        out += v.get<std::string>();
      } else {
        out += v.dump();
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace gfluct
