#pragma once

// Non-conformal triangle meshes over conductor layouts. Pulse-basis testing
// tolerates hanging nodes, so both refinement schemes split triangles locally
// without touching their neighbours.

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "sepr/geometry.hpp"

namespace sepr {

struct MeshTri {
  std::array<int, 3> v{};          // vertex indices, counter-clockwise
  std::array<bool, 3> boundary{};  // edge k = (v[k], v[(k+1)%3]) on a conductor outline
  int net = -1;
  int interface = 0;
  int level = 0;      // homogeneous refinement generation
  int stack_pos = -1; // strip index within a boundary-layer stack, 0 at the edge

  bool touches_boundary() const { return boundary[0] || boundary[1] || boundary[2]; }
};

class SurfaceMesh {
 public:
  std::vector<Eigen::Vector3d> vertices;
  std::vector<MeshTri> tris;
  std::vector<std::string> net_names;

  int size() const { return static_cast<int>(tris.size()); }
  double area(int t) const;
  Eigen::Vector3d centroid(int t) const;
  double diameter(int t) const;  // longest edge
  double height(int t, int edge) const;
  double total_area() const;
  double net_area(int net) const;
  int boundary_triangle_count() const;

  int add_vertex(const Eigen::Vector3d& p);
};

// Covers every net polygon with triangles of edge length <= max_edge.
// Boundary edges are the sub-edges of the polygon outlines.
SurfaceMesh triangulate(const LayoutModel& layout, double max_edge);

// Same machinery for a free polygon list (used for SA evaluation regions).
SurfaceMesh triangulate_polygons(const std::vector<Polygon>& polys, double z,
                                 int interface, double max_edge,
                                 const std::vector<int>& net_ids = {});

// Each boundary-touching triangle splits into four congruent children per
// level; interior triangles are untouched.
SurfaceMesh homogeneous_refine(const SurfaceMesh& mesh, int levels);

// Replaces every boundary triangle by a stack of strips whose heights grow
// geometrically away from the edge: t1, t1*r, t1*r^2, ...
SurfaceMesh boundary_layer_refine(const SurfaceMesh& mesh, int layers,
                                  double growth_ratio, double first_layer_height);

struct RefinementConfig {
  int homogeneous_levels = 2;
  int boundary_layers = 8;
  double growth_ratio = 2.0;
  double first_layer_height = 0.0;  // <= 0: pick delta/3 from the run context
};

SurfaceMesh refine(const SurfaceMesh& mesh, const RefinementConfig& cfg);

void save_mesh(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh load_mesh(const std::string& path);

}  // namespace sepr
