#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfluct/multigraph.hpp"

namespace gfluct {

// Canonical labeling of a loopless multigraph. Two multigraphs receive the
// same `key` iff they are isomorphic (edge multiplicities must match).
struct CanonicalForm {
  Multigraph graph;                   // input relabeled canonically
  std::string key;                    // serialized canonical edge list
  std::vector<std::uint32_t> labeling;  // original vertex -> canonical label
};

// Trees and connected unicyclic skeletons (parallel edges folded into edge
// colours) use linear-time rooted encodings; everything else goes through
// colour refinement with individualization and backtracking.
CanonicalForm canonical_form(const Multigraph& g);

// Convenience: canonical_form(g).key.
std::string canonical_key(const Multigraph& g);

}  // namespace gfluct
