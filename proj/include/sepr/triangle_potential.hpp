#pragma once

// Closed-form potential of a uniformly charged planar triangle,
//   I(p) = integral_T dA' / |p - r'|,
// and its gradient, valid for field points on, near and far from T.

#include <Eigen/Core>
#include <array>

namespace sepr {

double triangle_potential(const Eigen::Vector3d& p,
                          const std::array<Eigen::Vector3d, 3>& tri);

Eigen::Vector3d triangle_potential_gradient(const Eigen::Vector3d& p,
                                            const std::array<Eigen::Vector3d, 3>& tri);

}  // namespace sepr
