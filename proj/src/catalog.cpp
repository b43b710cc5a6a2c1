#include "gfluct/catalog.hpp"

#include <functional>

#include "gfluct/canonical.hpp"
#include "gfluct/error.hpp"

namespace gfluct {

Multigraph RootedPlanarTree::graph() const {
  Multigraph g(edge_count + 1);
  std::vector<std::uint32_t> stack{0};
  std::uint32_t next = 1;
  for (char c : dyck) {
    if (c == '(') {
      g.add_edge(stack.back(), next);
      stack.push_back(next++);
    } else {
      stack.pop_back();
    }
  }
  return g;
}

void DecoratedClass::add(const Multigraph& g, std::uint64_t multiplicity) {
  if (multiplicity == 0) return;
  CanonicalForm cf = canonical_form(g);
  auto it = index_.find(cf.key);
  if (it == index_.end()) {
    index_.emplace(cf.key, entries_.size());
    entries_.push_back({std::move(cf.graph), std::move(cf.key), multiplicity});
  } else {
    entries_[it->second].multiplicity += multiplicity;
  }
  total_ += multiplicity;
}

void DecoratedClass::divide(std::uint64_t d) {
  require(d > 0, ErrorKind::Domain, "division by zero");
  total_ = 0;
  for (auto& e : entries_) {
    require(e.multiplicity % d == 0, ErrorKind::Domain,
            "decorated multiplicity not divisible by rotation count");
    e.multiplicity /= d;
    total_ += e.multiplicity;
  }
}

void DecoratedClass::merge(const DecoratedClass& other) {
  for (const auto& e : other.entries_) {
    auto it = index_.find(e.key);
    if (it == index_.end()) {
      index_.emplace(e.key, entries_.size());
      entries_.push_back(e);
    } else {
      entries_[it->second].multiplicity += e.multiplicity;
    }
    total_ += e.multiplicity;
  }
}

std::uint64_t catalan(std::uint32_t i) {
  require(i <= 30, ErrorKind::Resource, "catalan(i) limited to i <= 30");
  std::uint64_t c = 1;  // C_{j+1} = C_j * 2(2j+1)/(j+2), exact at every step
  for (std::uint32_t j = 0; j < i; ++j) c = c * 2 * (2 * j + 1) / (j + 2);
  return c;
}

std::vector<RootedPlanarTree> rooted_planar_trees(std::uint32_t i) {
  require(i <= 12, ErrorKind::Resource, "rooted planar tree enumeration limited to 12 edges");
  std::vector<RootedPlanarTree> out;
  out.reserve(catalan(i));
  std::string word;
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t open, std::uint32_t close) {
    if (close == i) {
      out.push_back({i, word});
      return;
    }
    if (open < i) {
      word.push_back('(');
      rec(open + 1, close);
      word.pop_back();
    }
    if (close < open) {
      word.push_back(')');
      rec(open, close + 1);
      word.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

namespace {

void check_pair_guard(std::uint32_t k, std::uint32_t h) {
  require(k + h <= 24, ErrorKind::Resource, "pair classes limited to k + h <= 24");
}

DecoratedClass glue_on_edge(std::uint32_t k, std::uint32_t h, bool doubled) {
  require(k >= 2 && h >= 2 && k % 2 == 0 && h % 2 == 0, ErrorKind::Domain,
          "tree gluing classes need even k, h >= 2");
  check_pair_guard(k, h);
  const auto trees_a = rooted_planar_trees(k / 2);
  const auto trees_b = rooted_planar_trees(h / 2);
  std::vector<Multigraph> ga, gb;
  for (const auto& t : trees_a) ga.push_back(t.graph());
  for (const auto& t : trees_b) gb.push_back(t.graph());

  DecoratedClass out;
  const std::uint32_t va = k / 2 + 1, vb = h / 2 + 1;
  for (const Multigraph& a : ga)
    for (const Multigraph& b : gb)
      for (const Edge& ea : a.edges())
        for (const Edge& eb : b.edges())
          for (int orient = 0; orient < 2; ++orient) {
            std::vector<std::uint32_t> map_b(vb);
            std::uint32_t next = va;
            for (std::uint32_t x = 0; x < vb; ++x) {
              if (x == eb.a) map_b[x] = orient ? ea.b : ea.a;
              else if (x == eb.b) map_b[x] = orient ? ea.a : ea.b;
              else map_b[x] = next++;
            }
            Multigraph g(va + vb - 2);
            for (const Edge& e : a.edges()) g.add_edge(e.a, e.b);
            for (const Edge& e : b.edges()) {
              if (e == eb && !doubled) continue;
              g.add_edge(map_b[e.a], map_b[e.b]);
            }
            out.add(g);
          }
  return out;
}

// Compositions of s into r ordered non-negative parts, with one planar tree
// per part. Calls f(trees) where trees[i] has parts[i] edges.
void for_each_tree_config(std::uint32_t r, std::uint32_t s,
                          const std::function<void(const std::vector<const Multigraph*>&)>& f) {
  std::vector<std::vector<Multigraph>> by_size(s + 1);
  for (std::uint32_t i = 0; i <= s; ++i)
    for (const auto& t : rooted_planar_trees(i)) by_size[i].push_back(t.graph());
  std::vector<const Multigraph*> chosen(r);
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos, std::uint32_t left) {
    if (pos + 1 == r) {
      for (const auto& t : by_size[left]) {
        chosen[pos] = &t;
        f(chosen);
      }
      return;
    }
    for (std::uint32_t part = 0; part <= left; ++part)
      for (const auto& t : by_size[part]) {
        chosen[pos] = &t;
        rec(pos + 1, left - part);
      }
  };
  rec(0, s);
}

// Attaches tree t (root = vertex 0) at vertex `at`, appending new vertices.
void attach(std::vector<Edge>& edges, std::uint32_t& next, std::uint32_t at, const Multigraph& t) {
  std::vector<std::uint32_t> map(t.vertex_count());
  map[0] = at;
  for (std::uint32_t x = 1; x < t.vertex_count(); ++x) map[x] = next++;
  for (const Edge& e : t.edges()) edges.push_back({map[e.a], map[e.b], 1});
}

}  // namespace

DecoratedClass class_T1(std::uint32_t k, std::uint32_t h) { return glue_on_edge(k, h, false); }
DecoratedClass class_T2(std::uint32_t k, std::uint32_t h) { return glue_on_edge(k, h, true); }

DecoratedClass class_TC_single(std::uint32_t k, std::uint32_t r) {
  require(r >= 3 && r <= k, ErrorKind::Domain, "TC_single needs 3 <= r <= k");
  require(k <= 24, ErrorKind::Resource, "TC_single limited to k <= 24");
  DecoratedClass out;
  if ((k - r) % 2 != 0) return out;
  for_each_tree_config(r, (k - r) / 2, [&](const std::vector<const Multigraph*>& trees) {
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < r; ++i) edges.push_back({i, (i + 1) % r, 1});
    std::uint32_t next = r;
    for (std::uint32_t i = 0; i < r; ++i) attach(edges, next, i, *trees[i]);
    out.add(Multigraph(next, edges));
  });
  return out;
}

DecoratedClass class_TC_pair(std::uint32_t k, std::uint32_t h) {
  require(k >= 3 && h >= 3, ErrorKind::Domain, "TC_pair needs k, h >= 3");
  check_pair_guard(k, h);
  DecoratedClass out;
  if ((k + h) % 2 != 0) return out;
  for (std::uint32_t r = 3; r <= std::min(k, h); ++r) {
    if ((k - r) % 2 != 0 || (h - r) % 2 != 0) continue;
    DecoratedClass per_r;
    // h-side configurations are copied out so the two enumerations nest.
    std::vector<std::vector<Multigraph>> store_h;
    for_each_tree_config(r, (h - r) / 2, [&](const std::vector<const Multigraph*>& trees) {
      std::vector<Multigraph> copy;
      for (auto* t : trees) copy.push_back(*t);
      store_h.push_back(std::move(copy));
    });
    for_each_tree_config(r, (k - r) / 2, [&](const std::vector<const Multigraph*>& trees_k) {
      for (const auto& trees_h : store_h)
        for (int dir : {1, -1}) {
          std::vector<Edge> edges;
          for (std::uint32_t i = 0; i < r; ++i) edges.push_back({i, (i + 1) % r, 1});
          std::uint32_t next = r;
          for (std::uint32_t i = 0; i < r; ++i) attach(edges, next, i, *trees_k[i]);
          for (std::uint32_t i = 0; i < r; ++i)
            attach(edges, next, dir > 0 ? i : (r - i) % r, trees_h[i]);
          per_r.add(Multigraph(next, edges), static_cast<std::uint64_t>(k) * h);
        }
    });
    per_r.divide(r);
    out.merge(per_r);
  }
  return out;
}

std::uint64_t P_r(std::uint32_t r, std::int64_t s) {
  if (s < 0) return 0;
  const auto S = static_cast<std::uint32_t>(s);
  // dp[t] = number of weighted compositions of t into the parts seen so far.
  std::vector<std::uint64_t> dp(S + 1, 0), cat(S + 1);
  for (std::uint32_t t = 0; t <= S; ++t) cat[t] = catalan(t);
  dp[0] = 1;
  for (std::uint32_t part = 0; part < r; ++part) {
    std::vector<std::uint64_t> next(S + 1, 0);
    for (std::uint32_t t = 0; t <= S; ++t)
      for (std::uint32_t x = 0; x <= t; ++x) next[t] += dp[t - x] * cat[x];
    dp = std::move(next);
  }
  return dp[S];
}

namespace {

std::uint64_t s_term(std::uint32_t k, std::uint32_t h, std::uint32_t r) {
  if (r > k || r > h || (k - r) % 2 || (h - r) % 2) return 0;
  const std::uint64_t num = 2ull * k * h * P_r(r, (k - r) / 2) * P_r(r, (h - r) / 2);
  require(num % r == 0, ErrorKind::Domain, "S(k,h) term is not an integer");
  return num / r;
}

}  // namespace

std::uint64_t s_formula(std::uint32_t k, std::uint32_t h) {
  if ((k + h) % 2 != 0) return 0;
  std::uint64_t total = 0;
  for (std::uint32_t r = 3; r <= std::min(k, h); ++r) total += s_term(k, h, r);
  return total;
}

std::uint64_t s_formula_parity_of_half_sum(std::uint32_t k, std::uint32_t h) {
  if ((k + h) % 2 != 0) return 0;
  const std::uint32_t half = (k + h) / 2;
  std::uint64_t total = 0;
  for (std::uint32_t r = 3; r <= half; ++r)
    if (r % 2 == half % 2) total += s_term(k, h, r);
  return total;
}

Multigraph cycle(std::uint32_t h) {
  require(h >= 3, ErrorKind::Domain, "cycle length must be >= 3");
  Multigraph g(h);
  for (std::uint32_t i = 0; i < h; ++i) g.add_edge(i, (i + 1) % h);
  return g;
}

Multigraph cycle_multi(std::uint32_t h) {
  Multigraph g = cycle(h);
  g.add_edge(0, 1);
  return g;
}

Multigraph class_F1(std::uint32_t k, std::uint32_t h) {
  require(k >= 3 && h >= 3, ErrorKind::Domain, "F1/F2 need k, h >= 3");
  Multigraph g(k + h - 2);
  for (std::uint32_t i = 0; i < k; ++i) g.add_edge(i, (i + 1) % k);
  // Second cycle: 1 -> k -> k+1 -> ... -> k+h-3 -> 0, closed by the shared edge {0,1}.
  std::uint32_t prev = 1;
  for (std::uint32_t x = k; x < k + h - 2; ++x) {
    g.add_edge(prev, x);
    prev = x;
  }
  g.add_edge(prev, 0);
  return g;
}

Multigraph class_F2(std::uint32_t k, std::uint32_t h) {
  Multigraph g = class_F1(k, h);
  g.add_edge(0, 1);
  return g;
}

Multigraph k2() {
  Multigraph g(2);
  g.add_edge(0, 1);
  return g;
}

Multigraph c2() {
  Multigraph g(2);
  g.add_edge(0, 1, 2);
  return g;
}

Multigraph path(std::uint32_t edges) {
  Multigraph g(edges + 1);
  for (std::uint32_t i = 0; i < edges; ++i) g.add_edge(i, i + 1);
  return g;
}

DecoratedClass tree_gluings(const Multigraph& T1, const Multigraph& T2) {
  const std::uint32_t n1 = T1.vertex_count(), n2 = T2.vertex_count();
  require(T1.is_connected() && T1.distinct_edge_count() + 1 == n1 && T1.is_simple() &&
              T2.is_connected() && T2.distinct_edge_count() + 1 == n2 && T2.is_simple(),
          ErrorKind::Validation, "tree_gluings needs two simple trees");
  std::vector<std::vector<std::uint32_t>> adj1(n1), adj2(n2);
  for (const Edge& e : T1.edges()) {
    adj1[e.a].push_back(e.b);
    adj1[e.b].push_back(e.a);
  }
  for (const Edge& e : T2.edges()) {
    adj2[e.a].push_back(e.b);
    adj2[e.b].push_back(e.a);
  }
  // Root T2 at 0 so each connected vertex set has a unique top vertex.
  std::vector<std::uint32_t> parent2(n2, n2);
  std::vector<std::uint32_t> order{0};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto y : adj2[order[i]])
      if (y != parent2[order[i]] && y != 0 && parent2[y] == n2) {
        parent2[y] = order[i];
        order.push_back(y);
      }
  auto children2 = [&](std::uint32_t u) {
    std::vector<std::uint32_t> c;
    for (auto y : adj2[u])
      if (y != parent2[u]) c.push_back(y);
    return c;
  };

  DecoratedClass out;
  constexpr std::uint32_t kFree = ~0u;
  std::vector<std::uint32_t> phi(n2, kFree);
  std::vector<char> used(n1, 0);
  std::size_t mapped = 0;

  auto emit = [&]() {
    std::vector<std::uint32_t> label(n2);
    std::uint32_t next = n1;
    for (std::uint32_t x = 0; x < n2; ++x) label[x] = phi[x] != kFree ? phi[x] : next++;
    Multigraph g(next);
    for (const Edge& e : T1.edges()) g.add_edge(e.a, e.b);
    for (const Edge& e : T2.edges())
      if (g.multiplicity(label[e.a], label[e.b]) == 0) g.add_edge(label[e.a], label[e.b]);
    out.add(g);
  };

  // pending: T2 vertices whose parent is mapped and whose own fate is open.
  std::function<void(std::vector<std::uint32_t>&, std::size_t)> decide =
      [&](std::vector<std::uint32_t>& pending, std::size_t idx) {
        if (idx == pending.size()) {
          if (mapped >= 2) emit();
          return;
        }
        const std::uint32_t c = pending[idx];
        decide(pending, idx + 1);  // c and its subtree stay unshared
        for (auto y : adj1[phi[parent2[c]]]) {
          if (used[y]) continue;
          phi[c] = y;
          used[y] = 1;
          ++mapped;
          const auto before = pending.size();
          for (auto g : children2(c)) pending.push_back(g);
          decide(pending, idx + 1);
          pending.resize(before);
          --mapped;
          used[y] = 0;
          phi[c] = kFree;
        }
      };

  for (std::uint32_t top = 0; top < n2; ++top)
    for (std::uint32_t x = 0; x < n1; ++x) {
      phi[top] = x;
      used[x] = 1;
      mapped = 1;
      std::vector<std::uint32_t> pending = children2(top);
      decide(pending, 0);
      used[x] = 0;
      phi[top] = kFree;
    }
  return out;
}

DecoratedClass tree_gluings(const RootedPlanarTree& T1, const RootedPlanarTree& T2) {
  require(T1.edge_count >= 1 && T2.edge_count >= 1, ErrorKind::Domain,
          "tree_gluings needs trees with at least one edge");
  return tree_gluings(T1.graph(), T2.graph());
}

}  // namespace gfluct
