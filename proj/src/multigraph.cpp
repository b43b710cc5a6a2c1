#include "gfluct/multigraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

#include "gfluct/error.hpp"

namespace gfluct {

Multigraph::Multigraph(std::uint32_t vertex_count) : vertex_count_(vertex_count) {}

Multigraph::Multigraph(std::uint32_t vertex_count, std::span<const Edge> edges)
    : vertex_count_(vertex_count) {
  for (const Edge& e : edges) add_edge(e.a, e.b, e.multiplicity);
}

void Multigraph::add_edge(std::uint32_t a, std::uint32_t b, std::uint32_t multiplicity) {
  require(a != b, ErrorKind::Validation,
          "loop {" + std::to_string(a) + "," + std::to_string(a) + "} in multigraph");
  require(a < vertex_count_ && b < vertex_count_, ErrorKind::Validation,
          "edge endpoint out of range");
  require(multiplicity >= 1, ErrorKind::Validation, "edge multiplicity must be >= 1");
  if (a > b) std::swap(a, b);
  Edge key{a, b, 0};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  if (it != edges_.end() && it->a == a && it->b == b) {
    it->multiplicity += multiplicity;
  } else {
    edges_.insert(it, Edge{a, b, multiplicity});
  }
}

std::uint64_t Multigraph::total_multiplicity() const noexcept {
  std::uint64_t total = 0;
  for (const Edge& e : edges_) total += e.multiplicity;
  return total;
}

bool Multigraph::is_simple() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.multiplicity == 1; });
}

std::uint32_t Multigraph::multiplicity(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a > b) std::swap(a, b);
  for (const Edge& e : edges_)
    if (e.a == a && e.b == b) return e.multiplicity;
  return 0;
}

std::vector<std::uint32_t> Multigraph::degrees() const {
  std::vector<std::uint32_t> deg(vertex_count_, 0);
  for (const Edge& e : edges_) {
    deg[e.a] += e.multiplicity;
    deg[e.b] += e.multiplicity;
  }
  return deg;
}

bool Multigraph::is_connected() const {
  if (vertex_count_ <= 1) return true;
  std::vector<std::uint32_t> parent(vertex_count_);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::uint32_t components = vertex_count_;
  for (const Edge& e : edges_) {
    auto ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

void Multigraph::set_roots(std::vector<std::uint32_t> roots) {
  require(roots.size() <= 2, ErrorKind::Validation, "at most two roots");
  for (auto r : roots) require(r < vertex_count_, ErrorKind::Validation, "root out of range");
  roots_ = std::move(roots);
}

Multigraph Multigraph::relabeled(std::span<const std::uint32_t> perm) const {
  require(perm.size() == vertex_count_, ErrorKind::Validation, "permutation size mismatch");
  Multigraph out(vertex_count_);
  for (const Edge& e : edges_) out.add_edge(perm[e.a], perm[e.b], e.multiplicity);
  std::vector<std::uint32_t> roots;
  for (auto r : roots_) roots.push_back(perm[r]);
  out.roots_ = std::move(roots);
  return out;
}

Multigraph Multigraph::disjoint_union(const Multigraph& g, const Multigraph& h) {
  Multigraph out(g.vertex_count_ + h.vertex_count_);
  for (const Edge& e : g.edges_) out.add_edge(e.a, e.b, e.multiplicity);
  for (const Edge& e : h.edges_)
    out.add_edge(e.a + g.vertex_count_, e.b + g.vertex_count_, e.multiplicity);
  return out;
}

std::string Multigraph::to_string() const {
  std::ostringstream os;
  os << "v=" << vertex_count_ << " e=";
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i) os << ',';
    os << edges_[i].a << '-' << edges_[i].b << 'x' << edges_[i].multiplicity;
  }
  return os.str();
}

}  // namespace gfluct
