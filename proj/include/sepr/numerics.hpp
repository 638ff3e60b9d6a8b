#pragma once

// Shared numerical kernels: Bessel J0/J1 and their zeros, Gauss-Legendre
// rules, symmetric triangle quadrature, complete elliptic integrals (AGM),
// and a globally adaptive Gauss-Kronrod 15/7 integrator.

#include <functional>
#include <span>
#include <vector>

namespace sepr {

double bessel_j0(double x);
double bessel_j1(double x);

// First `count` positive zeros of J_nu (nu = 0 or 1), McMahon-seeded and
// Newton-polished.
std::vector<double> bessel_j_zeros(int nu, int count);

struct QuadNode {
  double x;
  double w;
};

// Gauss-Legendre rule on [-1, 1]; cached per order.
const std::vector<QuadNode>& gauss_legendre(int order);

// Same rule mapped to (a, b); nodes are strictly interior.
std::vector<QuadNode> gauss_legendre_on(int order, double a, double b);

struct TriQuadPoint {
  double l1, l2, l3;  // barycentric coordinates
  double w;           // weights sum to 1
};

// Degree-5 seven-point symmetric rule.
std::span<const TriQuadPoint> triangle_rule7();

// Complete elliptic integrals of modulus k (not parameter m = k^2).
double elliptic_K(double k);
double elliptic_E(double k);

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

// Globally adaptive bisection with an embedded 15/7 Gauss-Kronrod pair.
// Throws std::runtime_error if the tolerance cannot be met.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const AdaptiveOptions& opts = {},
                          double* err_estimate = nullptr);

}  // namespace sepr
