#pragma once

#include <string>

#include "gfluct/io.hpp"

namespace gfluct {

// JSON request handlers shared by the C API and the command line tool. Each
// returns the result document without a manifest.
Json handle_catalog(const Json& request);
Json handle_theory(const Json& request);
Json handle_simulate(const Json& request);
Json handle_compare(const Json& request);  // {"report": <simulate result>}
Json handle_oracle(const Json& request);

// Edge list ("u v" per line) of one replicate under the request's config.
std::string handle_sample(const Json& request);

// Runs the named handler and attaches {"manifest": ...}. The manifest config
// is the request with file references resolved, so it replays on its own.
Json dispatch_request(const std::string& subcommand, const Json& request);

// Flat table from a result's "table" rows (simulate/compare/theory/oracle).
std::string result_table_csv(const Json& result);

}  // namespace gfluct
