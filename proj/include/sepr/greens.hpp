#pragma once

// Spatial-domain layered Green's function: closed-form primary part plus the
// numerically inverse-transformed scattered part, and a log-radial lookup
// table with cubic interpolation for fast assembly/field evaluation.

#include <string>
#include <vector>

#include "sepr/ogata.hpp"
#include "sepr/spectral.hpp"
#include "sepr/stackup.hpp"

namespace sepr {

struct GreensEval {
  double total = 0.0;
  double primary = 0.0;
  double scattered = 0.0;
  bool primary_singular = false;  // set when rho = 0 and z = zp
};

struct GreensGrad {
  double d_rho = 0.0;
  double d_z = 0.0;
};

// Scattered part at radial distance rho and height z for a unit source on
// the given interface. Small rho is integrated in the spectral variable
// directly; larger rho uses Ogata quadrature.
double greens_scattered(const Stackup& stackup, int source_interface, double rho,
                        double z, const OgataConfig& cfg = {});
GreensGrad greens_scattered_gradient(const Stackup& stackup, int source_interface,
                                     double rho, double z,
                                     const OgataConfig& cfg = {});

GreensEval greens_total(const Stackup& stackup, int source_interface, double rho,
                        double z, double zp, const OgataConfig& cfg = {});
GreensGrad greens_gradient(const Stackup& stackup, int source_interface, double rho,
                           double z, double zp, const OgataConfig& cfg = {});

struct GreensTableConfig {
  double rho_min = 1e-4;
  double rho_max = 1e4;
  int pts_per_decade = 64;
  OgataConfig ogata;
};

class GreensTable {
 public:
  GreensTable() = default;

  static GreensTable build(const Stackup& stackup, int source_interface,
                           std::vector<double> field_planes,
                           const GreensTableConfig& cfg);

  bool zero_scattered() const { return zero_scattered_; }
  int source_interface() const { return source_interface_; }
  int plane_count() const { return static_cast<int>(planes_.size()); }
  const std::vector<double>& planes() const { return planes_; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  std::uint64_t stackup_hash() const { return stackup_hash_; }

  // Throws if no plane matches z.
  int plane_index(double z) const;

  // Scattered Green's value/gradient by interpolation. rho below rho_min uses
  // the near-zero extension; rho beyond rho_max is an error (rebuild needed).
  double value(double rho, int plane) const;
  GreensGrad gradient(double rho, int plane) const;

  void save_binary(const std::string& path) const;
  static GreensTable load_binary(const std::string& path);
  void save_csv(const std::string& path) const;
  static GreensTable load_csv(const std::string& path);

 private:
  struct PlaneData {
    std::vector<double> val, drho, dz;
  };

  int grid_size() const { return static_cast<int>(log_rho_.size()); }
  void interp_weights(double rho, int& base, double w[4]) const;

  bool zero_scattered_ = false;
  int source_interface_ = 0;
  std::uint64_t stackup_hash_ = 0;
  double rho_min_ = 0, rho_max_ = 0, dlog_ = 0;
  std::vector<double> planes_;
  std::vector<double> log_rho_;
  std::vector<PlaneData> data_;  // one per plane
};

}  // namespace sepr
