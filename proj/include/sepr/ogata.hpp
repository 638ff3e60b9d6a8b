#pragma once

// Ogata's Bessel-zero quadrature with double-exponential mapping for inverse
// Hankel transforms  integral_0^inf F(lambda) J_nu(lambda*rho) lambda dlambda.

#include <functional>
#include <stdexcept>
#include <vector>

namespace sepr {

struct OgataConfig {
  double h0 = 0.1;     // initial step in the transformed variable
  int n0 = 64;         // initial node count
  double rel_tol = 1e-9;
  int max_rounds = 5;  // h halved / N doubled per round
};

class OgataError : public std::runtime_error {
 public:
  OgataError(double prev, double last)
      : std::runtime_error("ogata: no convergence; last two estimates " +
                           std::to_string(prev) + ", " + std::to_string(last)),
        prev_estimate(prev),
        last_estimate(last) {}
  double prev_estimate;
  double last_estimate;
};

double inverse_hankel_ogata(const std::function<double(double)>& spectral_fn,
                            double rho, const OgataConfig& cfg = {},
                            int nu = 0);

// Vector-valued integrand sharing one node set. `groups[k]` assigns component
// k to a unit group; convergence of a component is measured against the
// largest magnitude in its group, so components passing through zero do not
// stall the node-doubling loop.
std::vector<double> inverse_hankel_ogata_batch(
    const std::function<void(double /*lambda*/, std::vector<double>& /*out*/)>& fn,
    int n_components, const std::vector<int>& groups, double rho,
    const OgataConfig& cfg = {}, int nu = 0);

}  // namespace sepr
