#include "sepr/triangle_potential.hpp"

#include <cmath>
#include <stdexcept>

namespace sepr {

namespace {

struct EdgeTerms {
  double f = 0.0;     // log term
  double beta = 0.0;  // arctangent term
  double t = 0.0;     // in-plane signed distance to the edge line
  Eigen::Vector3d m;  // outward in-plane edge normal
};

struct TriFrame {
  Eigen::Vector3d n;
  double d = 0.0;  // signed height of p over the triangle plane
  std::array<EdgeTerms, 3> edge;
};

TriFrame edge_terms(const Eigen::Vector3d& p, const std::array<Eigen::Vector3d, 3>& q) {
  TriFrame fr;
  const Eigen::Vector3d nn = (q[1] - q[0]).cross(q[2] - q[0]);
  const double n2 = nn.norm();
  if (!(n2 > 0.0)) throw std::invalid_argument("triangle_potential: degenerate triangle");
  fr.n = nn / n2;
  fr.d = (p - q[0]).dot(fr.n);
  const double scale = std::sqrt(n2);

  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d& a = q[i];
    const Eigen::Vector3d& b = q[(i + 1) % 3];
    EdgeTerms& e = fr.edge[i];
    const Eigen::Vector3d s_hat = (b - a).normalized();
    e.m = s_hat.cross(fr.n);
    const double sm = (a - p).dot(s_hat), sp = (b - p).dot(s_hat);
    e.t = (a - p).dot(e.m);
    const double rm = (a - p).norm(), rp = (b - p).norm();
    const double r0sq = e.t * e.t + fr.d * fr.d;

    if (r0sq < 1e-28 * scale * scale) {
      // field point on the edge line; the limit of both t*f and beta is zero
      e.f = 0.0;
      e.beta = 0.0;
      continue;
    }
    // pick the cancellation-free form of ln((R+ + s+)/(R- + s-))
    if (sm + sp > 0.0)
      e.f = std::log((rp + sp) / (rm + sm));
    else
      e.f = std::log((rm - sm) / (rp - sp));
    const double ad = std::abs(fr.d);
    e.beta = std::atan(e.t * sp / (r0sq + ad * rp)) -
             std::atan(e.t * sm / (r0sq + ad * rm));
  }
  return fr;
}

}  // namespace

double triangle_potential(const Eigen::Vector3d& p,
                          const std::array<Eigen::Vector3d, 3>& tri) {
  const TriFrame fr = edge_terms(p, tri);
  double sum = 0.0;
  for (const auto& e : fr.edge) sum += e.t * e.f - std::abs(fr.d) * e.beta;
  return sum;
}

Eigen::Vector3d triangle_potential_gradient(const Eigen::Vector3d& p,
                                            const std::array<Eigen::Vector3d, 3>& tri) {
  const TriFrame fr = edge_terms(p, tri);
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  double beta_sum = 0.0;
  for (const auto& e : fr.edge) {
    g -= e.m * e.f;
    beta_sum += e.beta;
  }
  const double sgn = (fr.d > 0.0) ? 1.0 : (fr.d < 0.0 ? -1.0 : 0.0);
  g -= fr.n * (sgn * beta_sum);
  return g;
}

}  // namespace sepr
