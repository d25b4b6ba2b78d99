#include "njstab/defects.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

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

AlgebraMap skew_derivation(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Element b = Complex(0, 1) * rng.element(dim, Distribution::Hermitian);
  return inner_derivation(b);
}

const UnitScalar kOne{Complex(1, 0)};
const Complex I(0, 1);

}  // namespace

TEST_CASE("jensen defect vanishes for linear maps") {
  const int dim = 2;
  Rng rng(70);
  Eigen::MatrixXcd action(dim * dim, dim * dim);
  for (int i = 0; i < dim * dim; ++i)
    for (int j = 0; j < dim * dim; ++j) action(i, j) = rng.complex_normal();
  AlgebraMap linear = linear_map(action, dim);

  auto cloud = sample_elements({dim, 10, 2.0, Distribution::DenseGaussian, 71});
  auto mus = sample_unit_scalars(8);
  for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
    for (const UnitScalar& mu : mus) {
      CHECK(jensen_defect(linear, mu, cloud[i], cloud[i + 1]) <= 1e-12);
    }
  }
}

TEST_CASE("jensen defect of a constant map at the origin is its norm") {
  Element e = unit_direction(2, 72);
  AlgebraMap constant = custom_map(2, "shift", [e](const Element&) { return e; });
  Element zero = Element::Zero(2, 2);
  CHECK(jensen_defect(constant, kOne, zero, zero) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jensen defect of a power disturbance matches the closed form") {
  const double theta_prime = 0.15, p = 0.6;
  AlgebraMap base = inner_derivation(mat2(0.2, 0.5, -0.5, -0.2));
  Element e = unit_direction(2, 73);
  AlgebraMap f = perturb(base, PerturbationSpec::power(theta_prime, p, e));
  Element zero = Element::Zero(2, 2);
  for (const Element& x :
       sample_elements({2, 10, 2.0, Distribution::DenseGaussian, 74})) {
    double nrm = op_norm(x);
    double expected = theta_prime * std::pow(nrm, p) * (std::pow(2.0, 1.0 - p) - 1.0);
    CHECK(jensen_defect(f, kOne, x, zero) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("njordan sum hand cases") {
  AlgebraMap id = identity_map(2);
  Element eye = Element::Identity(2, 2);
  CHECK((njordan_sum(id, eye, 3) - 3.0 * eye).cwiseAbs().maxCoeff() <= 1e-15);

  Element zero = Element::Zero(2, 2);
  CHECK(op_norm(njordan_sum(id, zero, 4)) == 0.0);

  // telescoping: for an inner derivation the sum collapses to f(a^2)
  AlgebraMap d = inner_derivation(mat2(0.3, 1.0, 0.5, -0.3));
  for (const Element& a :
       sample_elements({2, 10, 2.0, Distribution::DenseGaussian, 75})) {
    CHECK(op_norm(njordan_sum(d, a, 2) - d(power(a, 2))) <=
          1e-12 * std::max(1.0, op_norm(a) * op_norm(a)));
  }

  CHECK_THROWS_AS(njordan_sum(id, eye, 1), DomainError);
}

TEST_CASE("njordan defect identifies n-Jordan derivations") {
  for (int dim : {2, 3}) {
    Rng rng(76 + dim);
    AlgebraMap d = inner_derivation(rng.element(dim, Distribution::DenseGaussian));
    auto cloud = sample_elements(
        {dim, 20, 4.0, Distribution::DenseGaussian, 77u + dim});
    for (int n : {2, 3, 4}) {
      for (const Element& a : cloud) CHECK(njordan_defect(d, a, n) <= 1e-9);
    }
  }

  AlgebraMap id = identity_map(2);
  CHECK(njordan_defect(id, Element::Identity(2, 2), 2) ==
        doctest::Approx(1.0).epsilon(1e-12));

  AlgebraMap zero = zero_map(2);
  CHECK(njordan_defect(zero, mat2(1, 2, 3, 4), 3) == 0.0);
}

TEST_CASE("njordan defect agrees with the brute-force expansion") {
  const int dim = 3;
  Rng rng(80);
  Eigen::MatrixXcd action(dim * dim, dim * dim);
  for (int i = 0; i < dim * dim; ++i)
    for (int j = 0; j < dim * dim; ++j) action(i, j) = rng.complex_normal();
  AlgebraMap f = linear_map(action, dim);

  auto cloud = sample_elements({dim, 8, 1.5, Distribution::DenseGaussian, 81});
  for (const Element& a : cloud) {
    for (int n : {2, 3, 4}) {
      oracle::Mat expr = oracle::njordan_expr(
          [&](const Element& v) { return f(v); }, oracle::from_eigen(a), n);
      double expected = op_norm(oracle::to_eigen(expr));
      CHECK(njordan_defect(f, a, n) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("star defect hand cases") {
  CHECK(star_defect(zero_map(2), mat2(1, I, 2, 3)) == 0.0);

  for (const Element& w :
       sample_elements({2, 15, 2.0, Distribution::DenseGaussian, 82})) {
    CHECK(star_defect(skew_derivation(2, 83), w) <= 1e-12);
  }

  // Hermitian (non-skew) witness: b = diag(1,0), w = [[0,1],[0,0]]
  AlgebraMap d = inner_derivation(mat2(1, 0, 0, 0));
  Element w = mat2(0, 1, 0, 0);
  CHECK(star_defect(d, w) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("combined defect specializations") {
  const int dim = 2;
  AlgebraMap d = skew_derivation(dim, 84);
  auto cloud = sample_elements({dim, 10, 2.0, Distribution::DenseGaussian, 85});
  auto mus = sample_unit_scalars(8);
  Element zero = Element::Zero(dim, dim);

  SUBCASE("every component vanishes for an exact star derivation") {
    for (std::size_t i = 0; i + 3 < cloud.size(); i += 2) {
      for (const UnitScalar& mu : mus) {
        CHECK(combined_defect(d, mu, cloud[i], cloud[i + 1], cloud[i + 2],
                              cloud[i + 3], 3) <= 1e-9);
      }
    }
  }

  AlgebraMap f = perturb(d, PerturbationSpec::power(0.1, 0.5,
                                                    unit_direction(dim, 86)));

  SUBCASE("y=x, a=0, w=0 reduces to the diagonal Jensen defect") {
    for (const Element& x : cloud) {
      for (const UnitScalar& mu : mus) {
        CHECK(combined_defect(f, mu, x, x, zero, zero, 2) ==
              doctest::Approx(jensen_defect(f, mu, x, x)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("x=y=0, mu=1 reduces to the n-Jordan defect") {
    for (const Element& a : cloud) {
      CHECK(combined_defect(f, kOne, zero, zero, a, std::nullopt, 3) ==
            doctest::Approx(njordan_defect(f, a, 3)).epsilon(1e-12));
    }
  }

  SUBCASE("the combined norm obeys the triangle inequality") {
    for (std::size_t i = 0; i + 3 < cloud.size(); ++i) {
      for (const UnitScalar& mu : mus) {
        DefectSample s = evaluate_defects(f, mu, cloud[i], cloud[i + 1],
                                          cloud[i + 2], cloud[i + 3], 2);
        REQUIRE(s.star.has_value());
        CHECK(s.combined <= s.jensen + s.njordan + *s.star + 1e-9);
      }
    }
  }
}

TEST_CASE("theta fit") {
  const int dim = 2;
  AlgebraMap d = skew_derivation(dim, 87);
  auto cloud = sample_elements({dim, 25, 2.0, Distribution::DenseGaussian, 88});

  SUBCASE("an exact star derivation fits theta zero") {
    ThetaFit fit = fit_theta_over(d, ControlFunction::power_sum_star(1.0, 0.5),
                                  cloud, 8, 2);
    CHECK(fit.theta_hat <= 1e-12);
  }

  const double theta_prime = 0.1, p = 0.5;
  AlgebraMap f = perturb(
      d, PerturbationSpec::power(theta_prime, p, unit_direction(dim, 89)));

  SUBCASE("a power disturbance fits a finite positive theta") {
    ThetaFit fit =
        fit_theta_over(f, ControlFunction::power_sum(1.0, p), cloud, 8, 2);
    CHECK_FALSE(fit.infinite());
    CHECK(fit.theta_hat >= theta_prime * (std::pow(2.0, 1.0 - p) - 1.0) / 3.0);
    CHECK(fit.max_ratio_point.has_value());
  }

  SUBCASE("a constant shift over a cloud containing zero fits infinity") {
    AlgebraMap shifted = perturb(
        d, PerturbationSpec::constant_shift(unit_direction(dim, 90)));
    auto with_zero = cloud;
    with_zero.push_back(Element::Zero(dim, dim));
    ThetaFit fit = fit_theta_over(shifted, ControlFunction::power_sum(1.0, p),
                                  with_zero, 4, 2);
    CHECK(fit.infinite());
  }

  SUBCASE("an all-zero cloud with a zero map is degenerate") {
    std::vector<Element> zeros(3, Element::Zero(dim, dim));
    CHECK_THROWS_AS(fit_theta_over(zero_map(dim),
                                   ControlFunction::power_sum(1.0, p), zeros, 4, 2),
                    DegenerateCloudError);
  }

  SUBCASE("enlarging the cloud never decreases the fit") {
    auto longer = sample_elements({dim, 50, 2.0, Distribution::DenseGaussian, 88});
    ThetaFit small =
        fit_theta_over(f, ControlFunction::power_sum(1.0, p), cloud, 8, 2);
    ThetaFit large =
        fit_theta_over(f, ControlFunction::power_sum(1.0, p), longer, 8, 2);
    CHECK(large.theta_hat >= small.theta_hat);
  }
}

TEST_CASE("theta fit over a seeded cloud spec records the cloud") {
  AlgebraMap d = skew_derivation(2, 91);
  SampleSpec spec{2, 10, 2.0, Distribution::DenseGaussian, 92};
  ThetaFit fit = fit_theta(d, ControlFunction::power_sum(1.0, 0.5), spec, 4, 2);
  REQUIRE(fit.cloud.has_value());
  CHECK(fit.cloud->seed == 92);
  CHECK(fit.theta_hat <= 1e-12);
}
