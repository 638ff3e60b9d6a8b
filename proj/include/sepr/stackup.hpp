#pragma once

// Planar dielectric stackup description. Layers are ordered bottom to top;
// the two outermost layers are either unbounded (open boundary) or of finite
// thickness terminated by a perfect-conductor plane, which stands in for an
// unmeshable infinite ground.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sepr {

struct DielectricLayer {
  double eps_r = 1.0;
  double thickness = std::numeric_limits<double>::infinity();  // um

  bool unbounded() const { return std::isinf(thickness); }
};

class Stackup {
 public:
  // `z0` anchors the first interface (between layers[0] and layers[1]).
  // Finite thickness on an outermost layer implies a perfect-conductor plane
  // at its far side; an unbounded outermost layer implies an open boundary.
  explicit Stackup(std::vector<DielectricLayer> layers, double z0 = 0.0);

  int layer_count() const { return static_cast<int>(layers_.size()); }
  int interface_count() const { return layer_count() - 1; }
  const std::vector<DielectricLayer>& layers() const { return layers_; }

  double interface_z(int i) const { return interface_z_.at(i); }
  const std::vector<double>& interface_zs() const { return interface_z_; }
  double eps_eff(int interface) const;

  // Perfect-conductor plane positions, when present.
  std::optional<double> bottom_pec() const { return bottom_pec_; }
  std::optional<double> top_pec() const { return top_pec_; }

  // Layer containing z; points exactly on interface i belong to layer i+1.
  int layer_of(double z) const;
  double eps_at(double z) const { return layers_[layer_of(z)].eps_r; }

  // Extent of layer l for the spectral parametrization (+-inf when unbounded).
  double layer_z_lo(int l) const;
  double layer_z_hi(int l) const;

  // True when the scattered Green's part vanishes identically (homogeneous
  // medium or a plain two-layer half-space split).
  bool scattered_identically_zero() const;

  // Shortest distance from interface i to any other interface or
  // perfect-conductor plane; infinity for the plain two-layer case.
  double min_gap(int interface) const;

  // Stable content hash for cache/table files.
  std::uint64_t hash() const;
  std::string describe() const;

 private:
  std::vector<DielectricLayer> layers_;
  std::vector<double> interface_z_;
  std::optional<double> bottom_pec_;
  std::optional<double> top_pec_;
};

// Convenience builders for the common benchmark environments.
Stackup make_two_layer(double eps_bottom, double eps_top);
Stackup make_substrate_over_ground(double eps_sub, double substrate_h,
                                   double eps_top = 1.0);

}  // namespace sepr
