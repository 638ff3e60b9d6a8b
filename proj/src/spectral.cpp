#include "sepr/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sepr/constants.hpp"

namespace sepr {

double spectral_primary(double lambda, double dz, double eps_eff) {
  if (!(lambda > 0.0)) throw std::invalid_argument("spectral_primary: lambda must be > 0");
  if (!(eps_eff > 0.0)) throw std::invalid_argument("spectral_primary: eps_eff must be > 0");
  return std::exp(-lambda * std::abs(dz)) / (4.0 * kPi * kEps0 * eps_eff * lambda);
}

double spectral_primary_dz(double lambda, double dz, double eps_eff) {
  const double sign = (dz < 0.0) ? -1.0 : 1.0;
  return -sign * std::exp(-lambda * std::abs(dz)) / (4.0 * kPi * kEps0 * eps_eff);
}

namespace {

inline double term_a(double lambda, double z, double z_hi) {
  if (std::isinf(z_hi)) return 0.0;
  return std::exp(-lambda * (z_hi - z));
}

inline double term_b(double lambda, double z, double z_lo) {
  if (std::isinf(z_lo)) return 0.0;
  return std::exp(-lambda * (z - z_lo));
}

}  // namespace

SpectralSolution::SpectralSolution(const Stackup& stackup, double lambda,
                                   int source_interface, std::vector<double> coef_a,
                                   std::vector<double> coef_b)
    : lambda_(lambda),
      source_interface_(source_interface),
      source_z_(stackup.interface_z(source_interface)),
      eps_eff_src_(stackup.eps_eff(source_interface)),
      coef_a_(std::move(coef_a)),
      coef_b_(std::move(coef_b)),
      stackup_(&stackup) {
  const int L = stackup.layer_count();
  z_lo_.resize(L);
  z_hi_.resize(L);
  for (int l = 0; l < L; ++l) {
    z_lo_[l] = stackup.layer_z_lo(l);
    z_hi_[l] = stackup.layer_z_hi(l);
  }
}

double SpectralSolution::value(int layer, double z) const {
  return coef_a_[layer] * term_a(lambda_, z, z_hi_[layer]) +
         coef_b_[layer] * term_b(lambda_, z, z_lo_[layer]);
}

double SpectralSolution::dvalue_dz(int layer, double z) const {
  return lambda_ * (coef_a_[layer] * term_a(lambda_, z, z_hi_[layer]) -
                    coef_b_[layer] * term_b(lambda_, z, z_lo_[layer]));
}

double SpectralSolution::value(double z) const { return value(stackup_->layer_of(z), z); }

double SpectralSolution::dvalue_dz(double z) const {
  return dvalue_dz(stackup_->layer_of(z), z);
}

double SpectralSolution::primary(double z) const {
  return spectral_primary(lambda_, z - source_z_, eps_eff_src_);
}

double SpectralSolution::primary_dz(double z) const {
  return spectral_primary_dz(lambda_, z - source_z_, eps_eff_src_);
}

SpectralSolution solve_spectral(const Stackup& stackup, double lambda,
                                int source_interface) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_spectral: lambda must be > 0");
  if (source_interface < 0 || source_interface >= stackup.interface_count())
    throw std::invalid_argument("solve_spectral: source interface out of range");

  const int L = stackup.layer_count();
  const int n = 2 * L;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  auto col_a = [](int l) { return 2 * l; };
  auto col_b = [](int l) { return 2 * l + 1; };

  int row = 0;
  // Bottom boundary: decay (B_0 = 0) or zero value on the conductor plane.
  if (auto pec = stackup.bottom_pec()) {
    m(row, col_a(0)) = term_a(lambda, *pec, stackup.layer_z_hi(0));
    m(row, col_b(0)) = 1.0;
  } else {
    m(row, col_b(0)) = 1.0;
  }
  ++row;

  for (int i = 0; i < L - 1; ++i) {
    const double zi = stackup.interface_z(i);
    const double ta_lo = term_a(lambda, zi, stackup.layer_z_hi(i));    // == 1
    const double tb_lo = term_b(lambda, zi, stackup.layer_z_lo(i));
    const double ta_hi = term_a(lambda, zi, stackup.layer_z_hi(i + 1));
    const double tb_hi = term_b(lambda, zi, stackup.layer_z_lo(i + 1));  // == 1

    // continuity
    m(row, col_a(i)) = ta_lo;
    m(row, col_b(i)) = tb_lo;
    m(row, col_a(i + 1)) = -ta_hi;
    m(row, col_b(i + 1)) = -tb_hi;
    ++row;

    // flux jump, scaled by 1/lambda for conditioning
    const double el = stackup.layers()[i].eps_r;
    const double eh = stackup.layers()[i + 1].eps_r;
    m(row, col_a(i + 1)) = eh * ta_hi;
    m(row, col_b(i + 1)) = -eh * tb_hi;
    m(row, col_a(i)) = -el * ta_lo;
    m(row, col_b(i)) = el * tb_lo;
    if (i == source_interface) rhs(row) = -1.0 / (2.0 * kPi * kEps0 * lambda);
    ++row;
  }

  // Top boundary
  if (auto pec = stackup.top_pec()) {
    m(row, col_a(L - 1)) = 1.0;
    m(row, col_b(L - 1)) = term_b(lambda, *pec, stackup.layer_z_lo(L - 1));
  } else {
    m(row, col_a(L - 1)) = 1.0;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd u = lu.solve(rhs);
  const double resid = (m * u - rhs).norm();
  const double scale = rhs.norm() + m.norm() * u.norm();
  if (!u.allFinite() || resid > 1e-10 * scale) {
    // identify the offending layer for the diagnostic
    Eigen::FullPivLU<Eigen::MatrixXd> flu(m);
    flu.setThreshold(1e-12);
    int layer = 0;
    if (flu.rank() < n) layer = flu.permutationQ().indices()[flu.rank()] / 2;
    throw std::runtime_error("solve_spectral: singular interface system (degenerate stackup near layer " +
                             std::to_string(layer) + ", lambda=" + std::to_string(lambda) + ")");
  }

  std::vector<double> a(L), b(L);
  for (int l = 0; l < L; ++l) {
    a[l] = u(col_a(l));
    b[l] = u(col_b(l));
  }
  return SpectralSolution(stackup, lambda, source_interface, std::move(a), std::move(b));
}

}  // namespace sepr
