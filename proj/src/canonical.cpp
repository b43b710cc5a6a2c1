#include "gfluct/canonical.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>

namespace gfluct {
namespace {

struct Neighbor {
  std::uint32_t vertex;
  std::uint32_t multiplicity;
};
using Adjacency = std::vector<std::vector<Neighbor>>;

Adjacency adjacency_of(const Multigraph& g) {
  Adjacency adj(g.vertex_count());
  for (const Edge& e : g.edges()) {
    adj[e.a].push_back({e.b, e.multiplicity});
    adj[e.b].push_back({e.a, e.multiplicity});
  }
  return adj;
}

std::string serialize(const Multigraph& g) {
  std::string key = std::to_string(g.vertex_count()) + "|";
  for (const Edge& e : g.edges()) {
    if (&e != &g.edges().front()) key += ',';
    key += std::to_string(e.a);
    key += '-';
    key += std::to_string(e.b);
    if (e.multiplicity != 1) {
      key += '*';
      key += std::to_string(e.multiplicity);
    }
  }
  return key;
}

CanonicalForm finish(const Multigraph& g, std::vector<std::uint32_t> labeling) {
  CanonicalForm out;
  out.graph = g.relabeled(labeling);
  out.key = serialize(out.graph);
  out.labeling = std::move(labeling);
  return out;
}

// ---------------------------------------------------------------------------
// Rooted encodings for trees and unicyclic graphs.

class RootedEncoder {
 public:
  RootedEncoder(const Adjacency& adj, const std::vector<char>& blocked)
      : adj_(adj), blocked_(blocked), code_(adj.size()) {}

  // Encodes the subtree hanging from v (away from parent), edge colour to the
  // parent included. Blocked vertices are never entered.
  const std::string& encode(std::uint32_t v, std::uint32_t parent, std::uint32_t colour) {
    std::vector<std::string const*> kids;
    for (const Neighbor& nb : adj_[v]) {
      if (nb.vertex == parent || blocked_[nb.vertex]) continue;
      kids.push_back(&encode(nb.vertex, v, nb.multiplicity));
    }
    std::sort(kids.begin(), kids.end(), [](auto* x, auto* y) { return *x < *y; });
    std::string& c = code_[v];
    c.clear();
    c += '(';
    if (colour != 1) c += std::to_string(colour);
    for (auto* k : kids) c += *k;
    c += ')';
    return c;
  }

  // Preorder labels with children visited in code order. Must follow encode()
  // from the same root.
  void label(std::uint32_t v, std::uint32_t parent, std::vector<std::uint32_t>& labeling,
             std::uint32_t& next) const {
    labeling[v] = next++;
    std::vector<std::uint32_t> kids;
    for (const Neighbor& nb : adj_[v])
      if (nb.vertex != parent && !blocked_[nb.vertex]) kids.push_back(nb.vertex);
    std::sort(kids.begin(), kids.end(),
              [&](std::uint32_t x, std::uint32_t y) { return code_[x] < code_[y]; });
    for (auto k : kids) label(k, v, labeling, next);
  }

 private:
  const Adjacency& adj_;
  const std::vector<char>& blocked_;
  std::vector<std::string> code_;
};

constexpr std::uint32_t kNone = ~0u;

// Repeatedly strips leaves. Returns the removal round of each vertex and the
// vertices that were never removed (the 2-core).
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> peel(const Adjacency& adj,
                                                                        bool stop_at_two) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  std::vector<std::uint32_t> deg(n), round(n, kNone);
  for (std::uint32_t v = 0; v < n; ++v) deg[v] = static_cast<std::uint32_t>(adj[v].size());
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t v = 0; v < n; ++v)
    if (deg[v] <= 1) frontier.push_back(v);
  std::uint32_t remaining = n, r = 0;
  while (!frontier.empty() && (!stop_at_two || remaining > 2)) {
    std::vector<std::uint32_t> next;
    for (auto v : frontier) {
      round[v] = r;
      --remaining;
    }
    for (auto v : frontier)
      for (const Neighbor& nb : adj[v])
        if (round[nb.vertex] == kNone && --deg[nb.vertex] == 1) next.push_back(nb.vertex);
    frontier = std::move(next);
    ++r;
  }
  std::vector<std::uint32_t> core;
  for (std::uint32_t v = 0; v < n; ++v)
    if (round[v] == kNone) core.push_back(v);
  return {round, core};
}

CanonicalForm tree_form(const Multigraph& g, const Adjacency& adj) {
  const auto n = g.vertex_count();
  std::vector<char> blocked(n, 0);
  auto [round, centers] = peel(adj, /*stop_at_two=*/true);
  (void)round;
  std::sort(centers.begin(), centers.end());
  if (centers.empty()) centers.push_back(0);  // single vertex

  RootedEncoder enc(adj, blocked);
  std::uint32_t best = centers.front();
  std::string best_code = enc.encode(best, kNone, 0);
  for (std::size_t i = 1; i < centers.size(); ++i) {
    std::string c = enc.encode(centers[i], kNone, 0);
    if (c < best_code) {
      best_code = std::move(c);
      best = centers[i];
    }
  }
  enc.encode(best, kNone, 0);
  std::vector<std::uint32_t> labeling(n);
  std::uint32_t next = 0;
  enc.label(best, kNone, labeling, next);
  return finish(g, std::move(labeling));
}

CanonicalForm unicyclic_form(const Multigraph& g, const Adjacency& adj) {
  const auto n = g.vertex_count();
  auto [round, cycle_set] = peel(adj, /*stop_at_two=*/false);
  (void)round;
  std::vector<char> on_cycle(n, 0);
  for (auto v : cycle_set) on_cycle[v] = 1;

  // Walk the cycle once.
  std::vector<std::uint32_t> cycle;
  std::vector<std::uint32_t> colour;  // colour[i] joins cycle[i] and cycle[i+1]
  std::uint32_t prev = kNone, cur = cycle_set.front();
  do {
    cycle.push_back(cur);
    std::uint32_t nxt = kNone, col = 0;
    for (const Neighbor& nb : adj[cur]) {
      if (!on_cycle[nb.vertex] || nb.vertex == prev) continue;
      nxt = nb.vertex;
      col = nb.multiplicity;
      break;
    }
    colour.push_back(col);
    prev = cur;
    cur = nxt;
  } while (cur != cycle.front());
  const auto r = cycle.size();

  RootedEncoder enc(adj, on_cycle);
  std::vector<std::string> tree_code(r);
  for (std::size_t i = 0; i < r; ++i) tree_code[i] = enc.encode(cycle[i], kNone, 0);

  auto sequence = [&](std::size_t start, int dir) {
    std::string s;
    for (std::size_t t = 0; t < r; ++t) {
      std::size_t i = dir > 0 ? (start + t) % r : (start + r - t) % r;
      s += tree_code[i];
      std::size_t edge = dir > 0 ? i : (i + r - 1) % r;
      s += '[' + std::to_string(colour[edge]) + ']';
    }
    return s;
  };

  std::size_t best_start = 0;
  int best_dir = 1;
  std::string best = sequence(0, 1);
  for (std::size_t s = 0; s < r; ++s)
    for (int dir : {1, -1}) {
      std::string cand = sequence(s, dir);
      if (cand < best) {
        best = std::move(cand);
        best_start = s;
        best_dir = dir;
      }
    }

  std::vector<std::uint32_t> labeling(n);
  std::uint32_t next = 0;
  for (std::size_t t = 0; t < r; ++t) {
    std::size_t i = best_dir > 0 ? (best_start + t) % r : (best_start + r - t) % r;
    enc.encode(cycle[i], kNone, 0);
    enc.label(cycle[i], kNone, labeling, next);
  }
  return finish(g, std::move(labeling));
}

// ---------------------------------------------------------------------------
// General graphs: colour refinement + individualization.

class Refiner {
 public:
  Refiner(const Multigraph& g, const Adjacency& adj) : g_(g), adj_(adj), n_(g.vertex_count()) {}

  CanonicalForm run() {
    std::vector<std::uint32_t> colours(n_, 0);
    refine(colours, kNone);
    search(colours);
    return finish(g_, std::move(best_labeling_));
  }

 private:
  // Stable colour refinement. Colours are ranks of signatures, so the order of
  // existing cells is preserved and the result is isomorphism invariant.
  void refine(std::vector<std::uint32_t>& colours, std::uint32_t individualized) const {
    using Signature = std::vector<std::uint64_t>;
    std::size_t cells = count_cells(colours);
    bool first = true;
    for (;;) {
      std::vector<std::pair<Signature, std::uint32_t>> sig(n_);
      for (std::uint32_t v = 0; v < n_; ++v) {
        Signature s;
        s.push_back(static_cast<std::uint64_t>(colours[v]) * 2 +
                    ((first && v == individualized) ? 0 : 1));
        std::vector<std::uint64_t> nbrs;
        for (const Neighbor& nb : adj_[v])
          nbrs.push_back((static_cast<std::uint64_t>(colours[nb.vertex]) << 32) | nb.multiplicity);
        std::sort(nbrs.begin(), nbrs.end());
        s.insert(s.end(), nbrs.begin(), nbrs.end());
        sig[v] = {std::move(s), v};
      }
      std::vector<std::uint32_t> order(n_);
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(),
                [&](std::uint32_t x, std::uint32_t y) { return sig[x].first < sig[y].first; });
      std::vector<std::uint32_t> next(n_);
      std::uint32_t rank = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0 && sig[order[i]].first != sig[order[i - 1]].first) rank = static_cast<std::uint32_t>(i);
        next[order[i]] = rank;
      }
      std::size_t new_cells = count_cells(next);
      colours = std::move(next);
      if (new_cells == cells && !first) break;
      cells = new_cells;
      first = false;
    }
  }

  static std::size_t count_cells(const std::vector<std::uint32_t>& colours) {
    std::vector<std::uint32_t> c = colours;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  bool twins(std::uint32_t u, std::uint32_t w) const {
    auto strip = [&](std::uint32_t x, std::uint32_t other) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
      for (const Neighbor& nb : adj_[x])
        if (nb.vertex != other) out.emplace_back(nb.vertex, nb.multiplicity);
      std::sort(out.begin(), out.end());
      return out;
    };
    return strip(u, w) == strip(w, u);
  }

  void search(const std::vector<std::uint32_t>& colours) {
    // Target cell: the non-singleton cell with the smallest colour.
    std::optional<std::uint32_t> target;
    std::vector<std::uint32_t> counts(n_, 0);
    for (auto c : colours) ++counts[c];
    for (std::uint32_t c = 0; c < n_; ++c)
      if (counts[c] > 1) {
        target = c;
        break;
      }
    if (!target) {
      Multigraph h = g_.relabeled(colours);
      std::string key = serialize(h);
      if (!have_best_ || key < best_key_) {
        best_key_ = std::move(key);
        best_labeling_ = colours;
        have_best_ = true;
      }
      return;
    }
    std::vector<std::uint32_t> cell;
    for (std::uint32_t v = 0; v < n_; ++v)
      if (colours[v] == *target) cell.push_back(v);
    std::vector<std::uint32_t> tried;
    for (auto v : cell) {
      if (std::any_of(tried.begin(), tried.end(), [&](std::uint32_t u) { return twins(u, v); }))
        continue;
      tried.push_back(v);
      std::vector<std::uint32_t> child = colours;
      refine(child, v);
      search(child);
    }
  }

  const Multigraph& g_;
  const Adjacency& adj_;
  std::uint32_t n_;
  bool have_best_ = false;
  std::string best_key_;
  std::vector<std::uint32_t> best_labeling_;
};

}  // namespace

CanonicalForm canonical_form(const Multigraph& g) {
  const auto n = g.vertex_count();
  if (n == 0) return finish(g, {});
  Adjacency adj = adjacency_of(g);
  if (g.is_connected()) {
    if (g.distinct_edge_count() + 1 == n) return tree_form(g, adj);
    if (g.distinct_edge_count() == n) return unicyclic_form(g, adj);
  }
  return Refiner(g, adj).run();
}

std::string canonical_key(const Multigraph& g) { return canonical_form(g).key; }

}  // namespace gfluct
