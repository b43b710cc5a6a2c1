#include <doctest.h>

#include <functional>

#include "gfluct/catalog.hpp"
#include "gfluct/error.hpp"
#include "gfluct/exact_oracle.hpp"
#include "gfluct/limit_theory.hpp"
#include "gfluct/spectral.hpp"
#include "oracles.hpp"

using namespace gfluct;

namespace {

RegimeSpec spec(Regime r, StatisticKind s, double p = 0, double c = 0, unsigned m = 0) {
  RegimeSpec x;
  x.regime = r;
  x.statistic = s;
  x.p = p;
  x.c = c;
  x.m = m;
  return x;
}

const auto X = StatisticKind::CenteredX;
const auto L = StatisticKind::NonCenteredL;
const auto LT = StatisticKind::NonCenteredLTilde;

// Scaled exact covariance of the homogeneous graph G(n, q), extrapolated to
// n = infinity by one Richardson step (error O(1/n) at fixed q).
double dense_limit(double q, unsigned k, unsigned h, StatisticKind kind) {
  const bool centered = kind == X;
  auto f = [&](double n) {
    return scale_prefactor(kind, k, n, q) * scale_prefactor(kind, h, n, q) *
           exact_cov_homogeneous(n, q, k, h, centered);
  };
  const double n = 1e5;
  return 2.0 * f(2 * n) - f(n);
}

}  // namespace

TEST_CASE("regime names and admissibility") {
  CHECK(parse_regime("dense") == Regime::Dense);
  CHECK(parse_regime("sparse") == Regime::PolyHalf);
  CHECK(parse_regime("bounded") == Regime::Bounded);
  CHECK(parse_statistic("Ltilde") == LT);
  for (auto r : {Regime::Dense, Regime::PolyHalf, Regime::CriticalHalf, Regime::PolyM, Regime::CriticalM,
                 Regime::Subpoly, Regime::Bounded})
    CHECK(parse_regime(regime_name(r)) == r);
  try {
    parse_regime("medium");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RegimeUnknown);
    CHECK(std::string(e.code()) == "REGIME_UNKNOWN");
  }
  CHECK_THROWS_AS(spec(Regime::Dense, L, 1.0).validate(), Error);
  CHECK_THROWS_AS(spec(Regime::CriticalHalf, L, 0, 0).validate(), Error);
  CHECK_THROWS_AS(spec(Regime::PolyM, L, 0, 0, 2).validate(), Error);
  CHECK_THROWS_AS(spec(Regime::Dense, LT, 0.5).validate(), Error);
  CHECK_THROWS_AS(spec(Regime::Subpoly, L).validate(), Error);
  CHECK_NOTHROW(spec(Regime::Subpoly, LT).validate());
  CHECK_NOTHROW(spec(Regime::Bounded, LT, 0, 2).validate());
}

TEST_CASE("tree density oracle") {
  std::mt19937_64 rng(3);
  const auto W = oracle::random_graphon(rng, 3);
  TreeDensityOracle o(W);
  CHECK(o.density(k2()) == doctest::Approx(hom_density(k2(), W)));
  CHECK(o.density(path(2)) == doctest::Approx(hom_density(path(2), W)));
  CHECK(o.cache_size() == 2);
  o.set_value(path(2), 0.125);
  Multigraph relabeled(3);
  relabeled.add_edge(1, 0);
  relabeled.add_edge(0, 2);
  CHECK(o.density(relabeled) == 0.125);
}

TEST_CASE("centered dense examples") {
  const auto one = StepGraphon::constant(1.0);
  CHECK(cov_centered_dense(2, 3, one, 0.5).value == 0.0);
  // W' = 1/2: T1 gives 2 * 1/2, the doubled-edge class gives -4 * 1/2 * 2 * 1/4.
  CHECK(cov_centered_dense(2, 2, one, 0.5).value == doctest::Approx(0.0));
  CHECK(cov_centered_dense(3, 3, one, 0.5).value == doctest::Approx(0.5 * 6 * 0.125));
}

TEST_CASE("centered dense limits match the extrapolated exact covariance") {
  for (double q : {0.2, 0.5, 0.7})
    for (unsigned k = 2; k <= 5; ++k)
      for (unsigned h = k; h <= 5 && k + h <= 9; ++h) {
        const double theory = cov_centered_dense(k, h, StepGraphon::constant(1.0), q).value;
        const double exact = dense_limit(q, k, h, X);
        // Odd-parity cells are exact zeros; at n = 1e5 the oracle's
        // cancellation leaves noise near 1e-7 there.
        CHECK(oracle::close_rel(theory, exact, 1e-5, 1e-6));
      }
}

TEST_CASE("non-centered dense limits match the extrapolated exact covariance") {
  const auto one = StepGraphon::constant(1.0);
  CHECK(cov_noncentered_dense(2, 2, one, 0.5).value == doctest::Approx(1.0));
  CHECK(cov_noncentered_dense(2, 3, one, 0.5).value == doctest::Approx(3.0));
  CHECK(cov_noncentered_dense(3, 3, one, 0.5).value == doctest::Approx(9.0));
  CHECK(cov_noncentered_dense(3, 3, StepGraphon::constant(0.0), 0.5).value == 0.0);
  for (double q : {0.3, 0.5})
    for (unsigned k = 2; k <= 5; ++k)
      for (unsigned h = k; h <= 5 && k + h <= 9; ++h) {
        const double theory = cov_noncentered_dense(k, h, one, q).value;
        CHECK(oracle::close_rel(theory, dense_limit(q, k, h, L), 1e-5, 1e-8));
      }
}

TEST_CASE("centered sparse and subpoly") {
  const auto one = StepGraphon::constant(1.0);
  TreeDensityOracle o(one);
  CHECK(cov_centered_sparse(2, 2, o).value == doctest::Approx(2.0));
  CHECK(cov_centered_sparse(3, 4, o).value == 0.0);
  CHECK(cov_subpoly(2, 5, o).value == 0.0);
  Eigen::MatrixXd B(2, 2);
  B << 0, 1, 1, 0;
  TreeDensityOracle ob{StepGraphon(B)};
  CHECK(cov_centered_sparse(2, 2, ob).value == doctest::Approx(1.0));
  // Homogeneous reduction: every density is 1, the value is the class total.
  for (unsigned k = 2; k <= 8; k += 2)
    for (unsigned h = 2; h <= 8; h += 2)
      CHECK(cov_centered_sparse(k, h, o).value == doctest::Approx(static_cast<double>(class_T1(k, h).total())));
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto W = oracle::random_graphon(rng, 1 + i % 3);
    const unsigned k = 2 + i % 5, h = 2 + (i / 2) % 5;
    TreeDensityOracle ow(W);
    CHECK(cov_subpoly(k, h, ow).value == cov_centered_sparse(k, h, ow).value);
    RegimeSpec r = spec(Regime::Subpoly, LT);
    CHECK(covariance(k, h, W, r).value == cov_centered_sparse(k, h, ow).value);
  }
}

TEST_CASE("bounded regime") {
  TreeDensityOracle o(StepGraphon::constant(1.0));
  // Two single edges overlaid along their edge, both orientations.
  CHECK(cov_bounded(2, 2, o, 2.0).value == doctest::Approx(2.0));
  CHECK(cov_bounded(2, 3, o, 2.0).value == 0.0);
  // With unit densities the value depends on (k, h, c) only.
  std::mt19937_64 rng(6);
  Eigen::MatrixXd B(2, 2);
  B << 0.5, 1.5, 1.5, 0.5;  // every vertex has degree function 1
  TreeDensityOracle regular{StepGraphon(B)};
  for (unsigned k : {2u, 4u})
    for (unsigned h : {2u, 4u, 6u}) {
      const double a = cov_bounded(k, h, o, 1.5).value;
      // Trees have t(T, W) = 1 for degree-regular W.
      CHECK(cov_bounded(k, h, regular, 1.5).value == doctest::Approx(a));
    }
}

TEST_CASE("bounded limits match exact finite-n covariances") {
  // p = c/n; three-point Richardson on n, 2n, 4n removes the 1/n and 1/n^2 terms.
  const double c = 2.0;
  TreeDensityOracle o(StepGraphon::constant(1.0));
  for (auto [k, h] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 4}, {4, 4}, {2, 6}, {4, 6}}) {
    auto f = [&](double n) {
      const double p = c / n;
      return scale_prefactor(X, k, n, p) * scale_prefactor(X, h, n, p) * exact_cov_homogeneous(n, p, k, h, true);
    };
    const double n = 200;
    const double rich = (8 * f(4 * n) - 6 * f(2 * n) + f(n)) / 3;
    CHECK(oracle::close_rel(cov_bounded(k, h, o, c).value, rich, 1e-3));
  }
  // Counting one walk per planar tree gives 40 + 2 instead of 42.5 at (2,6):
  // the 6-walks on a two-edge tree that use one edge four times are needed.
  CHECK(cov_bounded(2, 6, o, 2.0).value == doctest::Approx(42.5));
}

TEST_CASE("covering closed walks") {
  // Brute force: all closed walks of length k, kept when every edge is used.
  auto brute = [](const Multigraph& g, unsigned k) {
    const auto& edges = g.edges();
    std::uint64_t count = 0;
    std::vector<std::uint32_t> walk;
    std::function<void(std::uint32_t, unsigned, std::uint32_t)> rec = [&](std::uint32_t start, unsigned step,
                                                                          std::uint32_t used) {
      const std::uint32_t at = walk.back();
      if (step == k) {
        if (at == start && used == (1u << edges.size()) - 1) ++count;
        return;
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        std::uint32_t next;
        if (edges[e].a == at) next = edges[e].b;
        else if (edges[e].b == at) next = edges[e].a;
        else continue;
        walk.push_back(next);
        rec(start, step + 1, used | 1u << e);
        walk.pop_back();
      }
    };
    for (std::uint32_t s = 0; s < g.vertex_count(); ++s) {
      walk = {s};
      rec(s, 0, 0);
    }
    return count;
  };
  CHECK(covering_closed_walks(k2(), 2) == 2);
  CHECK(covering_closed_walks(k2(), 6) == 2);
  CHECK(covering_closed_walks(path(2), 3) == 0);
  CHECK(covering_closed_walks(cycle(4), 4) == 8);
  for (unsigned edges = 1; edges <= 4; ++edges)
    for (const auto& t : rooted_planar_trees(edges))
      for (unsigned k = 2; k <= 10; ++k) CHECK(covering_closed_walks(t.graph(), k) == brute(t.graph(), k));
  CHECK(covering_closed_walks(cycle(3), 5) == brute(cycle(3), 5));
}

TEST_CASE("non-centered sparse tables") {
  const auto one = StepGraphon::constant(1.0);
  auto crit = spec(Regime::CriticalHalf, L, 0, 1.0);
  CHECK(cov_noncentered_sparse(2, 4, one, crit).value == doctest::Approx(16.0));
  CHECK(cov_noncentered_sparse(4, 4, one, spec(Regime::PolyHalf, L)).value == doctest::Approx(32.0));
  for (Regime r : {Regime::PolyM, Regime::CriticalM})
    for (unsigned m = 3; m <= 5; ++m)
      for (unsigned k = 2; k <= 2 * m + 1; ++k) {
        const auto s = spec(r, L, 0, 1.0, m);
        if (k >= 3 && k <= 2 * m - 2) {
          try {
            cov_noncentered_sparse(k, k, one, s);
            FAIL("expected divergence");
          } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::RegimeDivergent);
          }
        } else {
          CHECK_NOTHROW(cov_noncentered_sparse(k, k, one, s));
        }
      }
}

TEST_CASE("critical-half values match the exact covariance along p = c / sqrt(n)") {
  // Finite-n corrections decay like n^{-1/2}; compare the Richardson
  // combination for that rate at large n.
  const double c = 1.0;
  const auto one = StepGraphon::constant(1.0);
  for (auto [k, h] : std::vector<std::pair<unsigned, unsigned>>{
           {2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 3}, {3, 4}, {3, 5}, {4, 4}, {4, 5}, {4, 6}}) {
    auto f = [&](double n) {
      const double p = c / std::sqrt(n);
      return scale_prefactor(L, k, n, p) * scale_prefactor(L, h, n, p) * exact_cov_homogeneous(n, p, k, h, false);
    };
    const double n = 1e8;
    const double r = std::sqrt(2.0);
    const double rich = (r * f(2 * n) - f(n)) / (r - 1);
    const double theory = cov_noncentered_sparse(k, h, one, spec(Regime::CriticalHalf, L, 0, c)).value;
    CHECK(oracle::close_rel(theory, rich, 2e-3, 1e-6));
  }
  // The (r, 4) cells carry 8r c^-2 t(C_r + pendant edge), counted twice at r = 4.
  for (double cc : {0.5, 2.0}) {
    const auto s = spec(Regime::CriticalHalf, L, 0, cc);
    CHECK(cov_noncentered_sparse(4, 4, one, s).value == doctest::Approx(32 / std::pow(cc, 4) + 32 + 64 / (cc * cc)));
    CHECK(cov_noncentered_sparse(3, 4, one, s).value == doctest::Approx(24 + 24 / (cc * cc)));
    CHECK(cov_noncentered_sparse(5, 4, one, s).value == doctest::Approx(40 + 40 / (cc * cc)));
  }
}

TEST_CASE("covariances are symmetric in (k, h) and vanish on parity") {
  std::mt19937_64 rng(10);
  const auto W = oracle::random_graphon(rng, 2);
  const std::vector<RegimeSpec> regimes{spec(Regime::Dense, X, 0.4), spec(Regime::Dense, L, 0.4),
                                        spec(Regime::PolyHalf, X), spec(Regime::PolyHalf, L),
                                        spec(Regime::CriticalHalf, L, 0, 1.3), spec(Regime::Subpoly, LT),
                                        spec(Regime::Bounded, X, 0, 1.7), spec(Regime::PolyM, L, 0, 0, 3)};
  for (const auto& r : regimes)
    for (unsigned k = 2; k <= 8; ++k)
      for (unsigned h = 2; h <= 8; ++h) {
        if (r.regime == Regime::PolyM && ((k >= 3 && k <= 4) || (h >= 3 && h <= 4))) continue;
        if (r.regime == Regime::Dense && k + h > 12) continue;
        const double a = covariance(k, h, W, r).value, b = covariance(h, k, W, r).value;
        CHECK(oracle::close_rel(a, b, 1e-12, 1e-14));
        if (r.statistic == X || r.statistic == LT) {
          if ((k + h) % 2 == 1) CHECK(a == 0.0);
          if (r.regime != Regime::Dense && (k % 2 == 1 || h % 2 == 1)) CHECK(a == 0.0);
        }
        if (k == h) CHECK(a >= -1e-12);
      }
}

TEST_CASE("dense non-centered tends to the sparse value as p -> 0") {
  std::mt19937_64 rng(14);
  const auto W = oracle::random_graphon(rng, 3);
  for (unsigned k = 3; k <= 6; ++k) {
    const double limit = 2.0 * k * k * hom_density(class_F1(k, k), W);
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {1e-2, 1e-3, 1e-4}) {
      const double err = std::abs(cov_noncentered_dense(k, k, W, p).value - limit);
      CHECK(err <= prev + 1e-6);
      CHECK(err <= 2.0 * k * k * p + 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("covariance matrix") {
  const auto one = StepGraphon::constant(1.0);
  const auto m = covariance_matrix({2, 3, 4}, one, spec(Regime::Dense, L, 0.5));
  CHECK(m.value(0, 0) == doctest::Approx(1.0));
  CHECK(m.value(1, 1) == doctest::Approx(9.0));
  CHECK(m.value(0, 1) == doctest::Approx(3.0));
  CHECK(m.value(1, 0) == m.value(0, 1));
  CHECK(covariance_matrix({2}, one, spec(Regime::Subpoly, X)).value.rows() == 1);
  const auto s = covariance_matrix({2, 3}, one, spec(Regime::PolyHalf, X));
  CHECK(s.value(0, 0) == doctest::Approx(2.0));
  CHECK(s.value(0, 1) == 0.0);
  CHECK(s.value(1, 1) == 0.0);
  try {
    covariance_matrix({2, 4}, one, spec(Regime::PolyM, L, 0, 0, 3));
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RegimeDivergent);
    CHECK(std::string(e.what()).find("k=") != std::string::npos);
  }
}
