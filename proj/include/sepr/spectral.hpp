#pragma once

// Spectral-domain Green's function of the layered stackup: per-layer general
// solution a_l e^{lambda z} + b_l e^{-lambda z} determined by interface
// continuity/flux conditions, outer decay (or conductor-plane) conditions and
// the unit point-source jump at the source interface.
//
// Coefficients are stored in an overflow-safe local form
//   G_l(z) = A_l e^{-lambda (zhi_l - z)} + B_l e^{-lambda (z - zlo_l)}
// so every exponential is <= 1 inside its layer.

#include <vector>

#include "sepr/stackup.hpp"

namespace sepr {

double spectral_primary(double lambda, double dz, double eps_eff);
double spectral_primary_dz(double lambda, double dz, double eps_eff);

class SpectralSolution {
 public:
  SpectralSolution(const Stackup& stackup, double lambda, int source_interface,
                   std::vector<double> coef_a, std::vector<double> coef_b);

  double lambda() const { return lambda_; }
  int source_interface() const { return source_interface_; }
  double source_z() const { return source_z_; }

  // One-sided evaluation inside a given layer (valid on its closure).
  double value(int layer, double z) const;
  double dvalue_dz(int layer, double z) const;

  // Evaluation at z with the containing layer chosen automatically.
  double value(double z) const;
  double dvalue_dz(double z) const;

  double primary(double z) const;
  double primary_dz(double z) const;
  double scattered(double z) const { return value(z) - primary(z); }
  double scattered_dz(double z) const { return dvalue_dz(z) - primary_dz(z); }

  // Scaled coefficients and local reference planes, exposed for diagnostics.
  const std::vector<double>& coef_a() const { return coef_a_; }
  const std::vector<double>& coef_b() const { return coef_b_; }
  double layer_z_lo(int l) const { return z_lo_[l]; }
  double layer_z_hi(int l) const { return z_hi_[l]; }

 private:
  double lambda_;
  int source_interface_;
  double source_z_;
  double eps_eff_src_;
  std::vector<double> coef_a_, coef_b_, z_lo_, z_hi_;
  const Stackup* stackup_;
};

SpectralSolution solve_spectral(const Stackup& stackup, double lambda,
                                int source_interface);

}  // namespace sepr
