#include "njstab/verify.hpp"

#include <cmath>

#include "doctest.h"

using namespace njstab;

namespace {

Element mat2(Complex a, Complex b, Complex c, Complex d) {
  Element m(2, 2);
  m << a, b, c, d;
  return m;
}

Element unit_direction(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Element e = rng.element(dim, Distribution::Hermitian);
  return e / op_norm(e);
}

AlgebraMap scaled_derivation(int dim, std::uint64_t seed, double scale) {
  Rng rng(seed);
  Element b = rng.element(dim, Distribution::DenseGaussian);
  return inner_derivation((scale / op_norm(b)) * b);
}

AlgebraMap scaled_skew_derivation(int dim, std::uint64_t seed, double scale) {
  Rng rng(seed);
  Element b = Complex(0, 1) * rng.element(dim, Distribution::Hermitian);
  return inner_derivation((scale / op_norm(b)) * b);
}

std::vector<std::pair<Element, Element>> ring_pairs(
    const std::vector<Element>& cloud) {
  std::vector<std::pair<Element, Element>> pairs;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    pairs.emplace_back(cloud[i], cloud[(i + 1) % cloud.size()]);
  }
  return pairs;
}

const Complex I(0, 1);

}  // namespace

TEST_CASE("bound constants match hand arithmetic") {
  CHECK(bound_constant(BoundSpec::cor23(1.0, 0.5)) ==
        doctest::Approx(2.4142135623730950).epsilon(1e-12));

  BoundSpec thm;
  thm.kind = Variant::Thm21;
  thm.lipschitz = 0.5;
  CHECK(bound_constant(thm) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(bound_constant(BoundSpec::cor26(1.0, 0.25)) ==
        doctest::Approx(1.6231938356944379).epsilon(1e-12));
  CHECK(bound_constant(
            BoundSpec::cor26(1.0, 0.25, BoundDenominator::ProofConsistent)) ==
        doctest::Approx(2.2466788720545921).epsilon(1e-12));

  BoundSpec odd;
  odd.kind = Variant::Thm25;
  odd.lipschitz = 0.25;
  CHECK(bound_constant(odd) == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("bound constants reject bad parameter ranges") {
  CHECK_THROWS_AS(BoundSpec::cor23(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(BoundSpec::cor23(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(BoundSpec::cor26(1.0, 0.7), DomainError);
  BoundSpec bad;
  bad.kind = Variant::Thm21;
  bad.lipschitz = 1.0;
  CHECK_THROWS_AS(bound_constant(bad), DomainError);
  CHECK_THROWS_AS(BoundSpec::thm21(ControlFunction::power_sum_star(1.0, 0.5)),
                  DomainError);
}

TEST_CASE("check_bound on exact and broken scenarios") {
  const int dim = 2;
  AlgebraMap d = scaled_derivation(dim, 130, 1.0);
  auto cloud = sample_elements({dim, 30, 2.0, Distribution::DenseGaussian, 131});

  SUBCASE("a map certifies against itself") {
    CheckReport r = check_bound(d, d, BoundSpec::cor23(1.0, 0.5), cloud);
    CHECK(r.pass);
    CHECK(r.max_violation <= 1e-9);
    CHECK(r.samples_used == 30);
  }

  SUBCASE("a large constant shift violates any vanishing bound") {
    Element e = unit_direction(dim, 132);
    AlgebraMap f =
        custom_map(dim, "shifted", [&](const Element& x) { return d(x) + 10.0 * e; });
    CheckReport r = check_bound(f, d, BoundSpec::cor23(1e-6, 0.5), cloud);
    CHECK_FALSE(r.pass);
    CHECK(r.violating_point.has_value());
  }
}

TEST_CASE("structure checks accept inner derivations on radius-4 clouds") {
  const int dim = 2;
  AlgebraMap d = scaled_derivation(dim, 133, 1.0);
  auto cloud = sample_elements({dim, 25, 4.0, Distribution::DenseGaussian, 134});
  auto pairs = ring_pairs(cloud);
  auto mus = sample_unit_scalars(16);

  CHECK(check_additivity(d, pairs, 1e-9).pass);
  CHECK(check_homogeneity(d, mus, cloud, 1e-9).pass);
  for (int n : {2, 3, 4}) {
    CHECK(check_njordan(d, n, cloud, 1e-9).pass);
  }
  CHECK(check_leibniz(d, pairs, 1e-9).pass);
  CHECK(check_star(scaled_skew_derivation(dim, 135, 1.0), cloud, 1e-12).pass);
  CHECK(check_star(zero_map(dim), cloud, 1e-12).pass);

  // tighter tolerances hold on a radius-2 cloud
  auto near = sample_elements({dim, 25, 2.0, Distribution::DenseGaussian, 136});
  CHECK(check_additivity(d, ring_pairs(near), 1e-12).pass);
  CHECK(check_homogeneity(d, mus, near, 1e-12).pass);
  CHECK(check_leibniz(d, ring_pairs(near), 1e-12).pass);
}

TEST_CASE("each checker fails on its designated counterexample") {
  const int dim = 2;
  auto cloud = sample_elements({dim, 20, 2.0, Distribution::DenseGaussian, 136});
  auto pairs = ring_pairs(cloud);

  SUBCASE("identity map is not a Jordan derivation: violation 1 at a = I") {
    CheckReport r = check_njordan(identity_map(dim), 2,
                                  {Element::Identity(dim, dim)}, 1e-9);
    CHECK_FALSE(r.pass);
    CHECK(r.max_violation == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.violating_point.has_value());
  }

  SUBCASE("Hermitian-b inner derivation breaks star: violation 2 at witness") {
    AlgebraMap d = inner_derivation(mat2(1, 0, 0, 0));
    CheckReport r = check_star(d, {mat2(0, 1, 0, 0)}, 1e-9);
    CHECK_FALSE(r.pass);
    CHECK(r.max_violation == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("the involution map is conjugate-linear, failing at mu = i") {
    AlgebraMap star =
        custom_map(dim, "involution", [](const Element& x) { return involution(x); });
    CheckReport r = check_homogeneity(star, {UnitScalar(I)}, cloud, 1e-9);
    CHECK_FALSE(r.pass);
  }

  SUBCASE("squaring violates the Leibniz rule") {
    AlgebraMap square =
        custom_map(dim, "square", [](const Element& x) { return Element(x * x); });
    CheckReport r = check_leibniz(square, pairs, 1e-6);
    CHECK_FALSE(r.pass);
  }

  SUBCASE("an uncorrected power disturbance is not additive") {
    AlgebraMap d = scaled_derivation(dim, 137, 1.0);
    AlgebraMap f =
        perturb(d, PerturbationSpec::power(1.0, 0.5, unit_direction(dim, 138)));
    std::vector<std::pair<Element, Element>> diagonal_pairs;
    for (const Element& x : cloud) diagonal_pairs.emplace_back(x, x);
    CheckReport r = check_additivity(f, diagonal_pairs, 1e-8);
    CHECK_FALSE(r.pass);
  }
}

namespace {

struct EndToEnd {
  AlgebraMap truth;
  AlgebraMap f;
  AlgebraMap corrected;
  std::vector<Element> cloud;
  double tolerance;
  double structure_tol;
};

EndToEnd make_power_scenario(int dim, int n, double p, std::uint64_t seed,
                             bool star, double radius = 2.0) {
  EndToEnd s;
  s.tolerance = p > 0.7 ? 1e-5 : 1e-10;  // slow decay needs a looser stop
  AlgebraMap truth = star ? scaled_skew_derivation(dim, seed, 0.25)
                          : scaled_derivation(dim, seed, 0.25);
  Element e = unit_direction(dim, seed + 1);
  s.truth = truth;
  s.f = perturb(truth, PerturbationSpec::power(0.1, p, e, star));
  s.corrected = corrected_map(s.f, s.tolerance, 60);
  s.cloud = sample_elements(
      {dim, 30, radius, Distribution::DenseGaussian, seed + 2});
  s.structure_tol = structure_tolerance(s.tolerance, radius, n);
  return s;
}

}  // namespace

TEST_CASE("end-to-end: corrected power scenarios recover all structure") {
  for (int dim : {2, 3}) {
    for (int n : {2, 3}) {
      for (double p : {0.3, 0.5, 0.8}) {
        CAPTURE(dim);
        CAPTURE(n);
        CAPTURE(p);
        EndToEnd s = make_power_scenario(dim, n, p, 1000 + dim * 100 + n * 10 +
                                                        int(p * 10),
                                         false);
        auto pairs = ring_pairs(s.cloud);
        CHECK(check_additivity(s.corrected, pairs, s.structure_tol).pass);
        CHECK(check_homogeneity(s.corrected, sample_unit_scalars(8), s.cloud,
                                s.structure_tol)
                  .pass);
        CHECK(check_njordan(s.corrected, n, s.cloud, s.structure_tol).pass);

        ThetaFit fit = fit_theta_over(
            s.f, ControlFunction::power_sum(1.0, p), s.cloud, 8, n);
        REQUIRE_FALSE(fit.infinite());
        CHECK(check_bound(s.f, s.corrected,
                          BoundSpec::cor23(fit.theta_hat, p), s.cloud)
                  .pass);
      }
    }
  }
}

TEST_CASE("end-to-end: star scenarios additionally preserve the involution") {
  for (int dim : {2, 3}) {
    for (int n : {2, 3}) {
      CAPTURE(dim);
      CAPTURE(n);
      EndToEnd s = make_power_scenario(dim, n, 0.5, 2000 + dim * 10 + n, true);
      auto pairs = ring_pairs(s.cloud);
      CHECK(check_additivity(s.corrected, pairs, s.structure_tol).pass);
      CHECK(check_star(s.corrected, s.cloud, s.structure_tol).pass);

      ThetaFit fit = fit_theta_over(
          s.f, ControlFunction::power_sum_star(1.0, 0.5), s.cloud, 8, n);
      CHECK(check_bound(s.f, s.corrected,
                        BoundSpec::cor24(fit.theta_hat, 0.5), s.cloud)
                .pass);
    }
  }
}

TEST_CASE("end-to-end: odd scenarios certify the (x,3x,0)-anchored bound") {
  const int dim = 2, n = 2;
  const double r = 0.25, tolerance = 1e-10;
  AlgebraMap truth = scaled_derivation(dim, 3000, 0.25);
  AlgebraMap f = perturb(truth, PerturbationSpec::odd_power(0.1, 2.0 * r));
  AlgebraMap corrected = corrected_map(f, tolerance, 60);
  auto cloud = sample_elements({dim, 30, 2.0, Distribution::DenseGaussian, 3001});

  ThetaFit fit =
      fit_theta_over(f, ControlFunction::product_power(1.0, r), cloud, 8, n,
                     TupleScheme::JensenAnchored3x);
  REQUIRE_FALSE(fit.infinite());

  // theorem-style bound with the fitted product-power control
  CHECK(check_bound(f, corrected,
                    BoundSpec::thm25(ControlFunction::product_power(
                        fit.theta_hat, r)),
                    cloud)
            .pass);
  // corollary-style bounds, both denominators
  CHECK(check_bound(f, corrected, BoundSpec::cor26(fit.theta_hat, r), cloud).pass);
  CHECK(check_bound(f, corrected,
                    BoundSpec::cor26(fit.theta_hat, r,
                                     BoundDenominator::ProofConsistent),
                    cloud)
            .pass);

  double tol = structure_tolerance(tolerance, 2.0, n);
  CHECK(check_additivity(corrected, ring_pairs(cloud), tol).pass);
  CHECK(check_njordan(corrected, n, cloud, tol).pass);
}

TEST_CASE("corrected Jordan scenarios satisfy the Leibniz rule") {
  for (int dim : {2, 3}) {
    CAPTURE(dim);
    EndToEnd s = make_power_scenario(dim, 2, 0.5, 4000 + dim, false);
    CHECK(check_leibniz(s.corrected, ring_pairs(s.cloud), s.structure_tol).pass);
  }
}

TEST_CASE("structure tolerance scales with radius to the n") {
  CHECK(structure_tolerance(1e-10, 2.0, 2) == doctest::Approx(9e-9));
  CHECK(structure_tolerance(1e-10, 2.0, 3) == doctest::Approx(2.7e-8));
}
