#include <doctest.h>

#include "gfluct/catalog.hpp"
#include "gfluct/error.hpp"
#include "oracles.hpp"

using namespace gfluct;

namespace {
Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("step graphon validation") {
  CHECK_THROWS_AS(StepGraphon(mat({{0, 1}, {0.5, 0}})), Error);
  CHECK_THROWS_AS(StepGraphon(mat({{0, 1}, {1, 0}}), {0.3, 0.3}), Error);
  CHECK_THROWS_AS(StepGraphon(mat({{-0.1}})), Error);
  CHECK_THROWS_AS(StepGraphon(mat({{2.0}}), {}, 1.0), Error);
  CHECK_NOTHROW(StepGraphon(mat({{0, 1}, {1 + 1e-14, 0}})));
  const StepGraphon W(mat({{0, 1}, {1, 0}}));
  CHECK(W.measures() == std::vector<double>{0.5, 0.5});
  CHECK(W.uniform_measures());
}

TEST_CASE("variance profile embedding") {
  const auto W = from_variance_profile(mat({{0, 1}, {1, 0}}));
  CHECK(W.block_count() == 2);
  CHECK(W.value(0, 1) == 1.0);
  CHECK(W.measures()[0] == 0.5);
  const auto one = from_variance_profile(mat({{1}}));
  CHECK(one.block_count() == 1);
  CHECK(one.value(0, 0) == 1.0);
  const auto ones = from_variance_profile(Eigen::MatrixXd::Ones(3, 3));
  CHECK(hom_density(k2(), ones) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("transform_prime") {
  const auto half = transform_prime(StepGraphon::constant(1.0), 0.5);
  CHECK(half.value(0, 0) == doctest::Approx(0.5));
  const StepGraphon W(mat({{0.2, 0.8}, {0.8, 0.4}}));
  const auto same = transform_prime(W, 0.0);
  CHECK(same.values() == W.values());
  const auto t = transform_prime(W, 1.0);
  CHECK(t.value(0, 0) == doctest::Approx(0.16));
  CHECK(t.value(0, 1) == doctest::Approx(0.16));
  CHECK(t.value(1, 1) == doctest::Approx(0.24));
  CHECK_THROWS_AS(transform_prime(StepGraphon(mat({{2.0}})), 0.6), Error);

  // Each output value lies in [0, max_{s in [0,C]} s(1 - ps)].
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto Wr = oracle::random_graphon(rng, 3);
    const double p = u(rng);
    const auto T = transform_prime(Wr, p);
    const double C = Wr.max_value();
    const double s_star = std::min(C, 1.0 / (2.0 * p));
    const double cap = s_star * (1.0 - p * s_star);
    CHECK(T.values().minCoeff() >= 0.0);
    CHECK(T.values().maxCoeff() <= cap + 1e-15);
  }
}

TEST_CASE("l1 distance") {
  const StepGraphon W(mat({{0.2, 0.8}, {0.8, 0.4}}));
  CHECK(l1_distance(W, W) == 0.0);
  CHECK(l1_distance(StepGraphon::constant(1.0), StepGraphon::constant(0.0)) == doctest::Approx(1.0));
  CHECK(l1_distance(StepGraphon::constant(0.7), StepGraphon(mat({{0.7, 0.7}, {0.7, 0.3}}))) ==
        doctest::Approx(0.1));

  // Pseudometric on random triples with different block structures.
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_graphon(rng, 1 + i % 3);
    const auto b = oracle::random_graphon(rng, 1 + (i / 3) % 4);
    const auto c = oracle::random_graphon(rng, 2);
    const double ab = l1_distance(a, b), ba = l1_distance(b, a);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab <= l1_distance(a, c) + l1_distance(c, b) + 1e-12);
  }
}

TEST_CASE("hom density examples") {
  const double q = 0.3;
  const auto Q = StepGraphon::constant(q);
  CHECK(hom_density(k2(), Q) == doctest::Approx(q));
  CHECK(hom_density(cycle(3), Q) == doctest::Approx(q * q * q));
  CHECK(hom_density(c2(), Q) == doctest::Approx(q * q));
  const double a = 0.1, b = 0.5, d = 0.9;
  const StepGraphon W(mat({{a, b}, {b, d}}));
  CHECK(hom_density(k2(), W) == doctest::Approx((a + 2 * b + d) / 4));
  CHECK(hom_density(Multigraph(3), W) == 1.0);
}

TEST_CASE("hom density matches brute-force block sums") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const std::uint32_t v = 1 + i % 8;
    const auto F = oracle::random_multigraph(rng, v, v + i % 4, 3);
    const auto W = oracle::random_graphon(rng, 1 + i % 4, i % 2 == 0);
    const double got = hom_density(F, W), want = oracle::brute_hom_density(F, W);
    CHECK(oracle::close_rel(got, want, 1e-10, 1e-300));
  }
}

TEST_CASE("hom density is multiplicative over disjoint unions") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto F1 = oracle::random_multigraph(rng, 2 + i % 5, 4, 2);
    const auto F2 = oracle::random_multigraph(rng, 2 + i % 4, 3, 1);
    const auto W = oracle::random_graphon(rng, 1 + i % 4);
    CHECK(oracle::close_rel(hom_density(Multigraph::disjoint_union(F1, F2), W),
                            hom_density(F1, W) * hom_density(F2, W), 1e-12, 1e-300));
  }
}

TEST_CASE("constant kernel law") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto F = oracle::random_multigraph(rng, 2 + i % 10, 12, 3);
    const double q = 0.05 + 0.9 * (i % 10) / 10.0;
    CHECK(oracle::close_rel(hom_density(F, StepGraphon::constant(q)),
                            std::pow(q, static_cast<double>(F.total_multiplicity())), 1e-12));
  }
}

TEST_CASE("large-block contraction stays exact for width-2 graphs") {
  // A 200-block graphon and a long cycle: brute force is impossible, so
  // compare with the trace identity t(C_k, W) = tr((W D)^k) for uniform D.
  std::mt19937_64 rng(1);
  const auto W = oracle::random_graphon(rng, 200, true);
  const Eigen::MatrixXd K = W.values() / 200.0;
  const auto tr = oracle::matmul_traces(K, 7);
  CHECK(oracle::close_rel(hom_density(cycle(7), W), tr[6], 1e-10));
  CHECK(oracle::close_rel(hom_density(class_F1(4, 5), W),
                          hom_density(class_F1(5, 4), W), 1e-10));
}
