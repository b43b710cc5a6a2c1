#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gfluct {

// Undirected edge {a, b} with a < b, repeated `multiplicity` times.
struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Loopless multigraph on vertices 0..vertex_count-1. Parallel edges are
// stored once with a multiplicity; edges are kept sorted by (a, b).
class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(std::uint32_t vertex_count);
  Multigraph(std::uint32_t vertex_count, std::span<const Edge> edges);

  // Adds `multiplicity` copies of {a, b}. Throws Validation on a loop or an
  // out-of-range endpoint.
  void add_edge(std::uint32_t a, std::uint32_t b, std::uint32_t multiplicity = 1);

  std::uint32_t vertex_count() const noexcept { return vertex_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Number of distinct vertex pairs joined by at least one edge.
  std::size_t distinct_edge_count() const noexcept { return edges_.size(); }
  // Edges counted with multiplicity.
  std::uint64_t total_multiplicity() const noexcept;
  bool is_simple() const noexcept;
  std::uint32_t multiplicity(std::uint32_t a, std::uint32_t b) const noexcept;
  std::vector<std::uint32_t> degrees() const;  // counted with multiplicity
  bool is_connected() const;

  // Up to two distinguished vertices. Roots are descriptive only; densities
  // and isomorphism classes ignore them.
  const std::vector<std::uint32_t>& roots() const noexcept { return roots_; }
  void set_roots(std::vector<std::uint32_t> roots);

  // Relabels vertex v to perm[v].
  Multigraph relabeled(std::span<const std::uint32_t> perm) const;

  static Multigraph disjoint_union(const Multigraph& g, const Multigraph& h);

  // "v=3 e=0-1x1,1-2x2"
  std::string to_string() const;

  friend bool operator==(const Multigraph& x, const Multigraph& y) {
    return x.vertex_count_ == y.vertex_count_ && x.edges_ == y.edges_;
  }

 private:
  std::uint32_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> roots_;
};

}  // namespace gfluct
