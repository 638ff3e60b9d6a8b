#include "sepr/ogata.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "sepr/constants.hpp"
#include "sepr/numerics.hpp"

namespace sepr {

namespace {

struct NodeSet {
  std::vector<double> y;  // quadrature abscissae in x = lambda*rho
  std::vector<double> c;  // combined coefficient pi * w_k * J_nu(y_k) * psi'(t_k)
};

double psi(double t) {
  const double s = 0.5 * kPi * std::sinh(t);
  if (s > 350.0) return t;
  return t * std::tanh(s);
}

double psi_prime(double t) {
  const double s = 0.5 * kPi * std::sinh(t);
  if (s > 350.0) return 1.0;
  const double ch = std::cosh(s);
  return std::tanh(s) + t * 0.5 * kPi * std::cosh(t) / (ch * ch);
}

const NodeSet& node_set(int nu, double h, int n) {
  static std::map<std::tuple<int, long long, int>, NodeSet> cache;
  static std::mutex mtx;
  const long long hkey = static_cast<long long>(std::llround(h * 1e12));
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({nu, hkey, n});
  if (it != cache.end()) return it->second;

  const auto zeros = bessel_j_zeros(nu, n);
  NodeSet ns;
  ns.y.resize(n);
  ns.c.resize(n);
  for (int k = 0; k < n; ++k) {
    const double j = zeros[k];          // j_{nu,k}
    const double xi = j / kPi;
    const double t = h * xi;
    const double yk = kPi / h * psi(t);
    // w_k = Y_nu(j)/J_{nu+1}(j) = 2/(pi * j * J_{nu+1}(j)^2) at a zero of J_nu
    const double jn1 = (nu == 0) ? bessel_j1(j) : (2.0 * bessel_j1(j) / j - bessel_j0(j));
    const double w = 2.0 / (kPi * j * jn1 * jn1);
    const double jv = (nu == 0) ? bessel_j0(yk) : bessel_j1(yk);
    ns.y[k] = yk;
    ns.c[k] = kPi * w * jv * psi_prime(t);
  }
  auto [ins, ok] = cache.emplace(std::make_tuple(nu, hkey, n), std::move(ns));
  (void)ok;
  return ins->second;
}

}  // namespace

double inverse_hankel_ogata(const std::function<double(double)>& spectral_fn,
                            double rho, const OgataConfig& cfg, int nu) {
  if (rho <= 0.0) throw std::invalid_argument("inverse_hankel_ogata: rho must be > 0");
  double prev = 0.0;
  bool have_prev = false;
  for (int round = 0; round < cfg.max_rounds; ++round) {
    const double h = cfg.h0 / static_cast<double>(1 << round);
    const int n = cfg.n0 * (1 << round);
    const NodeSet& ns = node_set(nu, h, n);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      // g(x) = x * F(x/rho); the 1/rho^2 substitution factor is applied below
      sum += ns.c[k] * ns.y[k] * spectral_fn(ns.y[k] / rho);
    }
    const double est = sum / (rho * rho);
    if (have_prev && std::abs(est - prev) <= cfg.rel_tol * std::abs(est)) return est;
    if (round == cfg.max_rounds - 1) throw OgataError(prev, est);
    prev = est;
    have_prev = true;
  }
  return prev;  // unreachable
}

std::vector<double> inverse_hankel_ogata_batch(
    const std::function<void(double, std::vector<double>&)>& fn,
    int n_components, const std::vector<int>& groups, double rho,
    const OgataConfig& cfg, int nu) {
  if (rho <= 0.0) throw std::invalid_argument("inverse_hankel_ogata_batch: rho must be > 0");
  int n_groups = 0;
  for (int g : groups) n_groups = std::max(n_groups, g + 1);

  std::vector<double> prev(n_components, 0.0), est(n_components, 0.0);
  std::vector<double> vals(n_components);
  bool have_prev = false;
  for (int round = 0; round < cfg.max_rounds; ++round) {
    const double h = cfg.h0 / static_cast<double>(1 << round);
    const int n = cfg.n0 * (1 << round);
    const NodeSet& ns = node_set(nu, h, n);
    std::fill(est.begin(), est.end(), 0.0);
    for (int k = 0; k < n; ++k) {
      fn(ns.y[k] / rho, vals);
      const double ck = ns.c[k] * ns.y[k];
      for (int i = 0; i < n_components; ++i) est[i] += ck * vals[i];
    }
    const double inv_r2 = 1.0 / (rho * rho);
    for (int i = 0; i < n_components; ++i) est[i] *= inv_r2;

    if (have_prev) {
      std::vector<double> scale(n_groups, 0.0);
      for (int i = 0; i < n_components; ++i)
        scale[groups[i]] = std::max(scale[groups[i]], std::abs(est[i]));
      bool ok = true;
      for (int i = 0; i < n_components && ok; ++i)
        ok = std::abs(est[i] - prev[i]) <= cfg.rel_tol * scale[groups[i]];
      if (ok) return est;
    }
    if (round == cfg.max_rounds - 1)
      throw OgataError(prev.empty() ? 0.0 : prev[0], est.empty() ? 0.0 : est[0]);
    prev = est;
    have_prev = true;
  }
  return est;  // unreachable
}

}  // namespace sepr
