#include "sepr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

#include "sepr/constants.hpp"

namespace sepr {

namespace {

// Ascending series, adequate to ~1e-13 relative for |x| <= 8.
double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

double j1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= -q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= 8.0) return j0_series(x);
  return std::cyl_bessel_j(0.0, x);
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  const double s = x < 0 ? -1.0 : 1.0;
  if (ax <= 8.0) return s * j1_series(ax);
  return s * std::cyl_bessel_j(1.0, ax);
}

std::vector<double> bessel_j_zeros(int nu, int count) {
  if (nu != 0 && nu != 1) throw std::invalid_argument("bessel_j_zeros: nu must be 0 or 1");
  std::vector<double> zeros;
  zeros.reserve(count);
  const double mu = 4.0 * nu * nu;
  for (int k = 1; k <= count; ++k) {
    // McMahon expansion
    const double beta = (k + 0.5 * nu - 0.25) * kPi;
    const double b8 = 8.0 * beta;
    double z = beta - (mu - 1.0) / b8 -
               4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    // Newton polish; J0' = -J1, J1' = J0 - J1/x
    for (int it = 0; it < 3; ++it) {
      const double f = (nu == 0) ? bessel_j0(z) : bessel_j1(z);
      const double fp = (nu == 0) ? -bessel_j1(z) : bessel_j0(z) - bessel_j1(z) / z;
      const double dz = f / fp;
      z -= dz;
      if (std::abs(dz) < 1e-14 * z) break;
    }
    zeros.push_back(z);
  }
  return zeros;
}

const std::vector<QuadNode>& gauss_legendre(int order) {
  static std::map<int, std::vector<QuadNode>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

  std::vector<QuadNode> rule(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule[i] = {-x, w};
    rule[order - 1 - i] = {x, w};
  }
  auto [ins, ok] = cache.emplace(order, std::move(rule));
  (void)ok;
  return ins->second;
}

std::vector<QuadNode> gauss_legendre_on(int order, double a, double b) {
  const auto& base = gauss_legendre(order);
  std::vector<QuadNode> out(base.size());
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (size_t i = 0; i < base.size(); ++i)
    out[i] = {mid + half * base[i].x, half * base[i].w};
  return out;
}

std::span<const TriQuadPoint> triangle_rule7() {
  // Strang-Fix #7 / Stroud T2:5-1, degree 5
  static const TriQuadPoint pts[7] = {
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
      {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
      {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
      {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
      {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
      {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
      {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
  };
  return {pts, 7};
}

double elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_K: require 0 <= k < 1");
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 60 && std::abs(a - b) > 4e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double elliptic_E(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_E: require 0 <= k < 1");
  double a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;  // 2^{n-1}
  for (int it = 0; it < 60 && std::abs(c) > 1e-17; ++it) {
    const double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return elliptic_K(k) * (1.0 - sum);
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double fc = f(mid);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    res_k += kWgk[i] * fsum;
    if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
  }
  res_g *= half;
  res_k *= half;
  return {a, b, res_k, std::abs(res_k - res_g)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const AdaptiveOptions& opts,
                          double* err_estimate) {
  std::priority_queue<Interval> queue;
  Interval whole = gk15(f, a, b);
  double total = whole.value, total_err = whole.error;
  queue.push(whole);
  int n = 1;
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (n >= opts.max_intervals)
      throw std::runtime_error("integrate_adaptive: interval budget exhausted before tolerance");
    Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Interval left = gk15(f, worst.a, mid);
    Interval right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++n;
  }
  if (err_estimate) *err_estimate = total_err;
  return total;
}

}  // namespace sepr
