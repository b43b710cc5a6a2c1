#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gfluct/multigraph.hpp"

namespace gfluct {

// Rooted planar tree stored as its depth-first contour: '(' steps away from
// the root, ')' steps back.
struct RootedPlanarTree {
  std::uint32_t edge_count = 0;
  std::string dyck;

  // Vertex 0 is the root; vertices are numbered in depth-first order, and
  // edge e joins vertex e+1 to its parent.
  Multigraph graph() const;
};

// One isomorphism class inside a decorated enumeration.
struct ClassEntry {
  Multigraph graph;  // canonical representative
  std::string key;   // canonical key
  std::uint64_t multiplicity = 0;
};

// Multiset of isomorphism classes, each counted with the number of decorated
// structures (starting points, orientations, embeddings) that produce it.
class DecoratedClass {
 public:
  void add(const Multigraph& g, std::uint64_t multiplicity = 1);
  // Divides every multiplicity by d; throws if any is not divisible.
  void divide(std::uint64_t d);
  void merge(const DecoratedClass& other);

  const std::vector<ClassEntry>& entries() const noexcept { return entries_; }
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::vector<ClassEntry> entries_;
  std::map<std::string, std::size_t> index_;
  std::uint64_t total_ = 0;
};

std::uint64_t catalan(std::uint32_t i);  // i <= 30

// All Dyck words of length 2i in lexicographic order ('(' < ')'). i <= 12.
std::vector<RootedPlanarTree> rooted_planar_trees(std::uint32_t i);

// Two rooted planar trees with k/2 and h/2 edges glued along one edge. T1
// keeps the shared edge single, T2 doubles it. k, h even; k + h <= 24.
DecoratedClass class_T1(std::uint32_t k, std::uint32_t h);
DecoratedClass class_T2(std::uint32_t k, std::uint32_t h);

// Unicyclic graphs spanned by a closed walk of length k with a once-traversed
// r-cycle; one structure per (composition of (k-r)/2 into r parts, choice of
// planar trees). Empty when k - r is odd.
DecoratedClass class_TC_single(std::uint32_t k, std::uint32_t r);

// Unions of a length-k and a length-h structure sharing their cycle, counted
// as walk pairs up to relabeling. Empty when k + h is odd.
DecoratedClass class_TC_pair(std::uint32_t k, std::uint32_t h);

// Sum over compositions of s into r non-negative parts of prod C_{part}.
std::uint64_t P_r(std::uint32_t r, std::int64_t s);

// Cardinality of class_TC_pair(k, h): sum over cycle lengths r with
// 3 <= r <= min(k, h) and r = k = h (mod 2) of (2kh/r) P_r((k-r)/2) P_r((h-r)/2).
std::uint64_t s_formula(std::uint32_t k, std::uint32_t h);

// Same sum with r restricted to r = (k+h)/2 (mod 2), 3 <= r <= (k+h)/2. Agrees
// with s_formula when k = h (mod 4) and drops valid cycle lengths otherwise.
std::uint64_t s_formula_parity_of_half_sum(std::uint32_t k, std::uint32_t h);

// Two cycles of lengths k and h sharing one edge (F1), or sharing two
// vertices joined by two distinct edges (F2). k, h >= 3.
Multigraph class_F1(std::uint32_t k, std::uint32_t h);
Multigraph class_F2(std::uint32_t k, std::uint32_t h);
Multigraph cycle(std::uint32_t h);        // C_h, h >= 3
Multigraph cycle_multi(std::uint32_t h);  // C_h with one doubled edge, h >= 3
Multigraph k2();                           // single edge
Multigraph c2();                           // two vertices, doubled edge
Multigraph path(std::uint32_t edges);

// Overlays of T2 onto T1 whose union is a tree: an isomorphism between a
// subtree of T2 with at least one edge and a subtree of T1. Each overlay map
// is one decoration of its union tree.
DecoratedClass tree_gluings(const RootedPlanarTree& T1, const RootedPlanarTree& T2);

// Same enumeration for arbitrary trees (used by tests and the symmetry check).
DecoratedClass tree_gluings(const Multigraph& T1, const Multigraph& T2);

}  // namespace gfluct
