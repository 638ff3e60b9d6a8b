#include "sepr/stackup.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sepr {

Stackup::Stackup(std::vector<DielectricLayer> layers, double z0)
    : layers_(std::move(layers)) {
  const int L = layer_count();
  if (L < 2) throw std::invalid_argument("stackup: need at least two layers");
  for (int l = 0; l < L; ++l) {
    const auto& layer = layers_[l];
    if (!(layer.eps_r > 0.0))
      throw std::invalid_argument("stackup: layer " + std::to_string(l) +
                                  " has non-positive permittivity");
    const bool outer = (l == 0 || l == L - 1);
    if (!outer && !(layer.thickness > 0.0 && std::isfinite(layer.thickness)))
      throw std::invalid_argument("stackup: interior layer " + std::to_string(l) +
                                  " must have finite positive thickness");
    if (outer && !layer.unbounded() && !(layer.thickness > 0.0))
      throw std::invalid_argument("stackup: outer layer " + std::to_string(l) +
                                  " must be unbounded or of positive thickness");
  }
  interface_z_.resize(L - 1);
  interface_z_[0] = z0;
  for (int i = 1; i < L - 1; ++i)
    interface_z_[i] = interface_z_[i - 1] + layers_[i].thickness;
  if (!layers_.front().unbounded())
    bottom_pec_ = interface_z_.front() - layers_.front().thickness;
  if (!layers_.back().unbounded())
    top_pec_ = interface_z_.back() + layers_.back().thickness;
}

double Stackup::eps_eff(int interface) const {
  return 0.5 * (layers_.at(interface).eps_r + layers_.at(interface + 1).eps_r);
}

int Stackup::layer_of(double z) const {
  int l = 0;
  while (l < interface_count() && z >= interface_z_[l]) ++l;
  return l;
}

double Stackup::layer_z_lo(int l) const {
  if (l == 0) return bottom_pec_ ? *bottom_pec_ : -std::numeric_limits<double>::infinity();
  return interface_z_[l - 1];
}

double Stackup::layer_z_hi(int l) const {
  if (l == layer_count() - 1)
    return top_pec_ ? *top_pec_ : std::numeric_limits<double>::infinity();
  return interface_z_[l];
}

bool Stackup::scattered_identically_zero() const {
  if (bottom_pec_ || top_pec_) return false;
  if (layer_count() == 2) return true;
  for (const auto& l : layers_)
    if (l.eps_r != layers_.front().eps_r) return false;
  return true;
}

double Stackup::min_gap(int interface) const {
  const double z = interface_z_.at(interface);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < interface_count(); ++i)
    if (i != interface) gap = std::min(gap, std::abs(interface_z_[i] - z));
  if (bottom_pec_) gap = std::min(gap, z - *bottom_pec_);
  if (top_pec_) gap = std::min(gap, *top_pec_ - z);
  return gap;
}

std::uint64_t Stackup::hash() const {
  // FNV-1a over the canonical description
  const std::string s = describe();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Stackup::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "stackup[z0=" << interface_z_.front();
  for (const auto& l : layers_) os << ";eps=" << l.eps_r << ",t=" << l.thickness;
  os << "]";
  return os.str();
}

Stackup make_two_layer(double eps_bottom, double eps_top) {
  return Stackup({{eps_bottom, std::numeric_limits<double>::infinity()},
                  {eps_top, std::numeric_limits<double>::infinity()}});
}

Stackup make_substrate_over_ground(double eps_sub, double substrate_h, double eps_top) {
  return Stackup({{eps_sub, substrate_h},
                  {eps_top, std::numeric_limits<double>::infinity()}});
}

}  // namespace sepr
