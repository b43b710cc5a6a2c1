#include "gfluct/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "gfluct/error.hpp"

namespace gfluct {

StepGraphon::StepGraphon(Eigen::MatrixXd values, std::vector<double> measures, double bound)
    : values_(std::move(values)), measures_(std::move(measures)) {
  const auto m = values_.rows();
  require(m >= 1 && values_.cols() == m, ErrorKind::Validation,
          "graphon blocks must form a non-empty square matrix");
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = values_(i, j);
      require(std::isfinite(v), ErrorKind::Validation, "graphon value is not finite");
      require(std::abs(v - values_(j, i)) <= 1e-12, ErrorKind::Validation,
              "graphon blocks are not symmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
      require(v >= 0.0, ErrorKind::Validation, "graphon value is negative");
      require(v <= bound, ErrorKind::Range, "graphon value exceeds the configured bound");
    }
  // Symmetrize exactly so downstream contractions never see 1e-13 asymmetry.
  values_ = (0.5 * (values_ + values_.transpose())).eval();
  if (measures_.empty()) {
    measures_.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
  } else {
    require(measures_.size() == static_cast<std::size_t>(m), ErrorKind::Validation,
            "measures length does not match block count");
    double total = 0.0;
    for (double w : measures_) {
      require(std::isfinite(w) && w > 0.0, ErrorKind::Validation, "block measure must be > 0");
      total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::Validation, "block measures must sum to 1");
    uniform_ = std::all_of(measures_.begin(), measures_.end(),
                           [&](double w) { return w == measures_.front(); });
  }
}

StepGraphon StepGraphon::constant(double q) {
  return StepGraphon(Eigen::MatrixXd::Constant(1, 1, q));
}

double StepGraphon::max_value() const { return values_.maxCoeff(); }

StepGraphon from_variance_profile(const Eigen::MatrixXd& S) { return StepGraphon(S); }

StepGraphon transform_prime(const StepGraphon& W, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::Range, "p must lie in [0,1]");
  require(p * W.max_value() <= 1.0 + 1e-15, ErrorKind::Range,
          "p * max(W) exceeds 1; W(1-pW) would leave the Bernoulli range");
  Eigen::MatrixXd v = W.values().array() * (1.0 - p * W.values().array());
  return StepGraphon(std::move(v), W.measures());
}

double l1_distance(const StepGraphon& W1, const StepGraphon& W2) {
  // Breakpoints of both partitions; each refined cell lies in one block of each.
  auto cuts = [](const StepGraphon& W) {
    std::vector<double> c{0.0};
    for (double w : W.measures()) c.push_back(c.back() + w);
    c.back() = 1.0;
    return c;
  };
  const auto c1 = cuts(W1), c2 = cuts(W2);
  std::vector<double> len;
  std::vector<std::size_t> b1, b2;
  std::size_t i = 0, j = 0;
  double pos = 0.0;
  while (i < W1.block_count() && j < W2.block_count()) {
    const double end = std::min(c1[i + 1], c2[j + 1]);
    if (end > pos) {
      len.push_back(end - pos);
      b1.push_back(i);
      b2.push_back(j);
      pos = end;
    }
    if (c1[i + 1] <= end) ++i;
    if (c2[j + 1] <= end) ++j;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < len.size(); ++a)
    for (std::size_t b = 0; b < len.size(); ++b)
      total += std::abs(W1.value(b1[a], b1[b]) - W2.value(b2[a], b2[b])) * len[a] * len[b];
  return total;
}

// ---------------------------------------------------------------------------
// Homomorphism density

namespace {

// Dense tensor over a sorted set of variables; the first variable varies
// fastest. Two-variable factors are therefore column-major m x m matrices.
struct Factor {
  std::vector<std::uint32_t> vars;
  std::vector<double> data;
};

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

using MapMatrix = Eigen::Map<const Eigen::MatrixXd>;
using MapVector = Eigen::Map<const Eigen::VectorXd>;

// Eliminates v when every factor touching it has arity <= 2 and at most two
// other variables are involved. Returns false if the fast path does not apply.
bool eliminate_small(std::uint32_t v, const std::vector<Factor*>& touching,
                     const std::vector<std::uint32_t>& others, const Eigen::VectorXd& mu,
                     Factor& out) {
  if (others.size() > 2) return false;
  for (auto* f : touching)
    if (f->vars.size() > 2) return false;
  const Eigen::Index m = mu.size();
  Eigen::VectorXd g = mu;
  std::vector<Eigen::MatrixXd> pair(others.size(), Eigen::MatrixXd::Ones(m, m));  // rows: v
  for (auto* f : touching) {
    if (f->vars.size() == 1) {
      g.array() *= MapVector(f->data.data(), m).array();
      continue;
    }
    const std::uint32_t other = f->vars[0] == v ? f->vars[1] : f->vars[0];
    const auto slot = static_cast<std::size_t>(
        std::find(others.begin(), others.end(), other) - others.begin());
    MapMatrix mat(f->data.data(), m, m);
    if (f->vars[0] == v) pair[slot].array() *= mat.array();
    else pair[slot].array() *= mat.transpose().array();
  }
  out.vars = others;
  if (others.empty()) {
    out.data = {g.sum()};
  } else if (others.size() == 1) {
    Eigen::VectorXd r = pair[0].transpose() * g;
    out.data.assign(r.data(), r.data() + m);
  } else {
    Eigen::MatrixXd r = pair[0].transpose() * g.asDiagonal() * pair[1];
    out.data.assign(r.data(), r.data() + m * m);
  }
  return true;
}

void eliminate_generic(std::uint32_t v, const std::vector<Factor*>& touching,
                       const std::vector<std::uint32_t>& others, const Eigen::VectorXd& mu,
                       Factor& out) {
  const std::size_t m = static_cast<std::size_t>(mu.size());
  std::size_t outer = 1;
  for (std::size_t i = 0; i < others.size(); ++i) outer *= m;
  // For each factor: stride of v and of each "others" variable in its layout.
  struct Access {
    const Factor* f;
    std::size_t v_stride = 0;
    std::vector<std::size_t> other_stride;
  };
  std::vector<Access> access;
  for (auto* f : touching) {
    Access a{f, 0, std::vector<std::size_t>(others.size(), 0)};
    std::size_t stride = 1;
    for (auto x : f->vars) {
      if (x == v) a.v_stride = stride;
      else {
        const auto slot = static_cast<std::size_t>(
            std::find(others.begin(), others.end(), x) - others.begin());
        a.other_stride[slot] = stride;
      }
      stride *= m;
    }
    access.push_back(std::move(a));
  }
  out.vars = others;
  out.data.assign(outer, 0.0);
  std::vector<std::size_t> assign(others.size(), 0), base(access.size());
  for (std::size_t idx = 0; idx < outer; ++idx) {
    for (std::size_t k = 0; k < access.size(); ++k) {
      base[k] = 0;
      for (std::size_t s = 0; s < others.size(); ++s)
        base[k] += assign[s] * access[k].other_stride[s];
    }
    Neumaier acc;
    for (std::size_t x = 0; x < m; ++x) {
      double term = mu[static_cast<Eigen::Index>(x)];
      for (std::size_t k = 0; k < access.size() && term != 0.0; ++k)
        term *= access[k].f->data[base[k] + x * access[k].v_stride];
      acc.add(term);
    }
    out.data[idx] = acc.value();
    for (std::size_t s = 0; s < others.size(); ++s) {
      if (++assign[s] < m) break;
      assign[s] = 0;
    }
  }
}

}  // namespace

double hom_density(const Multigraph& F, const StepGraphon& W) {
  const std::uint32_t nv = F.vertex_count();
  const Eigen::Index m = static_cast<Eigen::Index>(W.block_count());
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(W.measures().data(), m);

  // One factor per distinct edge; multiplicity mu becomes an elementwise power.
  std::map<std::uint32_t, Eigen::MatrixXd> powers;
  std::vector<Factor> factors;
  factors.reserve(F.edges().size() + nv);
  for (const Edge& e : F.edges()) {
    auto it = powers.find(e.multiplicity);
    if (it == powers.end())
      it = powers.emplace(e.multiplicity, W.values().array().pow(static_cast<double>(e.multiplicity)))
               .first;
    Factor f;
    f.vars = {e.a, e.b};
    f.data.assign(it->second.data(), it->second.data() + m * m);
    factors.push_back(std::move(f));
  }

  std::vector<char> alive(factors.size(), 1);
  std::vector<char> eliminated(nv, 0);
  double scalar = 1.0;
  for (std::uint32_t step = 0; step < nv; ++step) {
    // Greedy minimum degree: fewest distinct neighbours through live factors.
    std::uint32_t best = nv;
    std::size_t best_deg = 0;
    for (std::uint32_t v = 0; v < nv; ++v) {
      if (eliminated[v]) continue;
      std::set<std::uint32_t> nb;
      for (std::size_t i = 0; i < factors.size(); ++i)
        if (alive[i] && std::count(factors[i].vars.begin(), factors[i].vars.end(), v))
          for (auto x : factors[i].vars)
            if (x != v) nb.insert(x);
      if (best == nv || nb.size() < best_deg) {
        best = v;
        best_deg = nb.size();
      }
    }
    const std::uint32_t v = best;
    eliminated[v] = 1;
    std::vector<Factor*> touching;
    std::set<std::uint32_t> other_set;
    for (std::size_t i = 0; i < factors.size(); ++i)
      if (alive[i] && std::count(factors[i].vars.begin(), factors[i].vars.end(), v)) {
        touching.push_back(&factors[i]);
        alive[i] = 0;
        for (auto x : factors[i].vars)
          if (x != v) other_set.insert(x);
      }
    if (touching.empty()) continue;  // isolated vertex integrates to 1
    std::vector<std::uint32_t> others(other_set.begin(), other_set.end());
    Factor out;
    if (!eliminate_small(v, touching, others, mu, out))
      eliminate_generic(v, touching, others, mu, out);
    if (out.vars.empty()) {
      scalar *= out.data[0];
    } else {
      factors.push_back(std::move(out));
      alive.push_back(1);
    }
  }
  return scalar;
}

}  // namespace gfluct
