#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sepr/constants.hpp"
#include "sepr/numerics.hpp"

using namespace sepr;

TEST_CASE("bessel J0/J1 reference values") {
  CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bessel_j0(1.0) == doctest::Approx(0.76519768655796655145).epsilon(1e-13));
  CHECK(bessel_j0(5.0) == doctest::Approx(-0.17759677131433830435).epsilon(1e-13));
  CHECK(bessel_j1(1.0) == doctest::Approx(0.44005058574493351596).epsilon(1e-13));
  CHECK(bessel_j1(5.0) == doctest::Approx(-0.32757913759146522204).epsilon(1e-13));
  CHECK(bessel_j1(-1.0) == doctest::Approx(-0.44005058574493351596).epsilon(1e-13));
}

TEST_CASE("bessel series matches library branch across the seam") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.01, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(bessel_j0(x) == doctest::Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-11));
    CHECK(bessel_j1(x) == doctest::Approx(std::cyl_bessel_j(1.0, x)).epsilon(1e-11));
  }
}

TEST_CASE("bessel zeros") {
  const auto z0 = bessel_j_zeros(0, 50);
  CHECK(z0[0] == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(z0[1] == doctest::Approx(5.520078110286311).epsilon(1e-13));
  CHECK(z0[2] == doctest::Approx(8.653727912911013).epsilon(1e-13));
  const auto z1 = bessel_j_zeros(1, 50);
  CHECK(z1[0] == doctest::Approx(3.831705970207512).epsilon(1e-13));
  CHECK(z1[1] == doctest::Approx(7.015586669815613).epsilon(1e-13));
  for (double z : z0) CHECK(std::abs(bessel_j0(z)) < 1e-13);
  for (double z : z1) CHECK(std::abs(bessel_j1(z)) < 1e-13);
  // interlacing
  for (size_t k = 0; k + 1 < z0.size(); ++k) {
    CHECK(z0[k] < z1[k]);
    CHECK(z1[k] < z0[k + 1]);
  }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int order : {2, 4, 8, 16}) {
    const auto& rule = gauss_legendre(order);
    double wsum = 0;
    for (const auto& n : rule) wsum += n.w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * order - 1; ++p) {
      double q = 0;
      for (const auto& n : rule) q += n.w * std::pow(n.x, p);
      const double exact = (p % 2 == 0) ? 2.0 / (p + 1) : 0.0;
      CHECK(q == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("mapped gauss nodes are strictly interior") {
  const auto rule = gauss_legendre_on(8, 0.0, 3e-3);
  for (const auto& n : rule) {
    CHECK(n.x > 0.0);
    CHECK(n.x < 3e-3);
  }
}

TEST_CASE("seven-point triangle rule is degree five") {
  // reference right triangle (0,0)-(1,0)-(0,1): int x^a y^b = a! b! / (a+b+2)!
  auto fact = [](int n) { double f = 1; for (int i = 2; i <= n; ++i) f *= i; return f; };
  const auto rule = triangle_rule7();
  double wsum = 0;
  for (const auto& p : rule) wsum += p.w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      double q = 0;
      for (const auto& p : rule) {
        const double x = p.l2, y = p.l3;  // vertices at (0,0),(1,0),(0,1)
        q += p.w * std::pow(x, a) * std::pow(y, b);
      }
      q *= 0.5;  // reference area
      const double exact = fact(a) * fact(b) / fact(a + b + 2);
      CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("elliptic integrals") {
  CHECK(elliptic_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(elliptic_E(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  // lemniscatic value K(1/sqrt(2)) = Gamma(1/4)^2 / (4 sqrt(pi))
  CHECK(elliptic_K(1.0 / std::sqrt(2.0)) ==
        doctest::Approx(1.8540746773013719).epsilon(1e-13));
  CHECK(elliptic_E(1.0 / std::sqrt(2.0)) ==
        doctest::Approx(1.3506438810476755).epsilon(1e-13));
  CHECK_THROWS(elliptic_K(1.0));
  CHECK_THROWS(elliptic_K(-0.1));

  // Legendre relation K(k)E(k') + K(k')E(k) - K(k)K(k') = pi/2
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double k = u(rng);
    const double kp = std::sqrt(1 - k * k);
    const double lhs =
        elliptic_K(k) * elliptic_E(kp) + elliptic_K(kp) * elliptic_E(k) -
        elliptic_K(k) * elliptic_K(kp);
    CHECK(lhs == doctest::Approx(kPi / 2).epsilon(1e-12));
  }
}

TEST_CASE("mutation sentinel: swapping modulus for parameter breaks Legendre") {
  // K(m) with m = k^2 in place of K(k) must violate the relation
  const double k = 0.6, kp = std::sqrt(1 - k * k);
  auto K_wrong = [](double k_) { return elliptic_K(k_ * k_); };
  const double lhs = K_wrong(k) * elliptic_E(kp) + K_wrong(kp) * elliptic_E(k) -
                     K_wrong(k) * K_wrong(kp);
  CHECK(std::abs(lhs - kPi / 2) > 1e-3);
}

TEST_CASE("adaptive gauss-kronrod") {
  double err = 0;
  const double s = integrate_adaptive([](double x) { return std::sin(x); }, 0, kPi,
                                      {}, &err);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  // integrable endpoint singularity
  const double r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); },
                                      0.0, 1.0, {1e-10, 1e-10, 20000});
  CHECK(r == doctest::Approx(2.0).epsilon(1e-9));
  // budget exhaustion reports failure
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                     1.0, {1e-15, 1e-15, 4}),
                  std::runtime_error);
}
