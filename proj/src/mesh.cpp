#include "sepr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace sepr {

double SurfaceMesh::area(int t) const {
  const auto& tr = tris[t];
  const Eigen::Vector3d e1 = vertices[tr.v[1]] - vertices[tr.v[0]];
  const Eigen::Vector3d e2 = vertices[tr.v[2]] - vertices[tr.v[0]];
  return 0.5 * e1.cross(e2).norm();
}

Eigen::Vector3d SurfaceMesh::centroid(int t) const {
  const auto& tr = tris[t];
  return (vertices[tr.v[0]] + vertices[tr.v[1]] + vertices[tr.v[2]]) / 3.0;
}

double SurfaceMesh::diameter(int t) const {
  const auto& tr = tris[t];
  double d = 0.0;
  for (int k = 0; k < 3; ++k)
    d = std::max(d, (vertices[tr.v[k]] - vertices[tr.v[(k + 1) % 3]]).norm());
  return d;
}

double SurfaceMesh::height(int t, int edge) const {
  const auto& tr = tris[t];
  const double len = (vertices[tr.v[edge]] - vertices[tr.v[(edge + 1) % 3]]).norm();
  return 2.0 * area(t) / len;
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < size(); ++t) a += area(t);
  return a;
}

double SurfaceMesh::net_area(int net) const {
  double a = 0.0;
  for (int t = 0; t < size(); ++t)
    if (tris[t].net == net) a += area(t);
  return a;
}

int SurfaceMesh::boundary_triangle_count() const {
  int n = 0;
  for (const auto& tr : tris) n += tr.touches_boundary() ? 1 : 0;
  return n;
}

int SurfaceMesh::add_vertex(const Eigen::Vector3d& p) {
  vertices.push_back(p);
  return static_cast<int>(vertices.size()) - 1;
}

namespace {

struct RingVertex {
  int idx;            // mesh vertex index
  bool edge_on_outline;  // edge to the next ring vertex
};

double cross2(const Eigen::Vector3d& o, const Eigen::Vector3d& a,
              const Eigen::Vector3d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool point_in_tri2(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                   const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const double d1 = cross2(a, b, p);
  const double d2 = cross2(b, c, p);
  const double d3 = cross2(c, a, p);
  return d1 > 0 && d2 > 0 && d3 > 0;
}

// Ear clipping of a simple CCW polygon already present in `mesh.vertices`.
void ear_clip(SurfaceMesh& mesh, std::vector<RingVertex> ring, int net, int interface) {
  while (ring.size() > 3) {
    const size_t n = ring.size();
    bool clipped = false;
    for (size_t i = 0; i < n; ++i) {
      const size_t ip = (i + n - 1) % n, in = (i + 1) % n;
      const Eigen::Vector3d& a = mesh.vertices[ring[ip].idx];
      const Eigen::Vector3d& b = mesh.vertices[ring[i].idx];
      const Eigen::Vector3d& c = mesh.vertices[ring[in].idx];
      if (cross2(a, b, c) <= 0.0) continue;  // reflex corner
      bool blocked = false;
      for (size_t k = 0; k < n && !blocked; ++k) {
        if (k == ip || k == i || k == in) continue;
        blocked = point_in_tri2(mesh.vertices[ring[k].idx], a, b, c);
      }
      if (blocked) continue;
      MeshTri tri;
      tri.v = {ring[ip].idx, ring[i].idx, ring[in].idx};
      tri.boundary = {ring[ip].edge_on_outline, ring[i].edge_on_outline, false};
      tri.net = net;
      tri.interface = interface;
      mesh.tris.push_back(tri);
      ring[ip].edge_on_outline = false;  // the new diagonal (ip -> in)
      ring.erase(ring.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("triangulate: degenerate polygon (no ear found)");
  }
  MeshTri tri;
  tri.v = {ring[0].idx, ring[1].idx, ring[2].idx};
  tri.boundary = {ring[0].edge_on_outline, ring[1].edge_on_outline, ring[2].edge_on_outline};
  tri.net = net;
  tri.interface = interface;
  mesh.tris.push_back(tri);
}

// Midpoint lookup shared between refinement passes so neighbouring splits on
// the same parent edge reuse one vertex.
class MidpointCache {
 public:
  explicit MidpointCache(SurfaceMesh& mesh) : mesh_(mesh) {}
  int midpoint(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const int m = mesh_.add_vertex(0.5 * (mesh_.vertices[a] + mesh_.vertices[b]));
    cache_.emplace(key, m);
    return m;
  }

 private:
  SurfaceMesh& mesh_;
  std::map<std::pair<int, int>, int> cache_;
};

// Splits triangles along their longest edge until every edge fits max_edge.
void bisect_to_size(SurfaceMesh& mesh, double max_edge) {
  MidpointCache mids(mesh);
  bool again = true;
  while (again) {
    again = false;
    const int n = mesh.size();
    std::vector<MeshTri> next;
    next.reserve(n);
    for (int t = 0; t < n; ++t) {
      const MeshTri tr = mesh.tris[t];
      int longest = 0;
      double lmax = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double l = (mesh.vertices[tr.v[k]] - mesh.vertices[tr.v[(k + 1) % 3]]).norm();
        if (l > lmax) {
          lmax = l;
          longest = k;
        }
      }
      if (lmax <= max_edge) {
        next.push_back(tr);
        continue;
      }
      again = true;
      const int k = longest, k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      const int m = mids.midpoint(tr.v[k], tr.v[k1]);
      MeshTri c1 = tr, c2 = tr;
      c1.v = {tr.v[k], m, tr.v[k2]};
      c1.boundary = {tr.boundary[k], false, tr.boundary[k2]};
      c2.v = {m, tr.v[k1], tr.v[k2]};
      c2.boundary = {tr.boundary[k], tr.boundary[k1], false};
      next.push_back(c1);
      next.push_back(c2);
    }
    mesh.tris = std::move(next);
  }
}

}  // namespace

SurfaceMesh triangulate_polygons(const std::vector<Polygon>& polys, double z,
                                 int interface, double max_edge,
                                 const std::vector<int>& net_ids) {
  if (!(max_edge > 0.0)) throw std::invalid_argument("triangulate: max_edge must be > 0");
  SurfaceMesh mesh;
  for (size_t p = 0; p < polys.size(); ++p) {
    const Polygon& poly = polys[p];
    if (poly.vertices.size() < 3 || !(poly.signed_area() > 0.0))
      throw std::invalid_argument("triangulate: degenerate polygon " + std::to_string(p));
    // drop straight-through vertices so every ring corner is a true corner
    std::vector<Vec2> verts = poly.vertices;
    for (bool changed = true; changed && verts.size() > 3;) {
      changed = false;
      for (size_t i = 0; i < verts.size(); ++i) {
        const Vec2& a = verts[(i + verts.size() - 1) % verts.size()];
        const Vec2& b = verts[i];
        const Vec2& c = verts[(i + 1) % verts.size()];
        const double cr = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        const double dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
        if (cr == 0.0 && dot > 0.0) {
          verts.erase(verts.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
    }
    std::vector<RingVertex> ring;
    ring.reserve(verts.size());
    for (const auto& v : verts) ring.push_back({mesh.add_vertex({v.x, v.y, z}), true});
    ear_clip(mesh, std::move(ring), net_ids.empty() ? 0 : net_ids[p], interface);
  }
  bisect_to_size(mesh, max_edge);
  return mesh;
}

SurfaceMesh triangulate(const LayoutModel& layout, double max_edge) {
  std::vector<Polygon> polys;
  std::vector<int> nets;
  std::vector<double> zs;
  SurfaceMesh mesh;
  for (size_t n = 0; n < layout.nets.size(); ++n) {
    const auto& net = layout.nets[n];
    const double z = layout.stackup.interface_z(net.interface);
    SurfaceMesh part = triangulate_polygons(
        net.polygons, z, net.interface, max_edge,
        std::vector<int>(net.polygons.size(), static_cast<int>(n)));
    const int off = static_cast<int>(mesh.vertices.size());
    mesh.vertices.insert(mesh.vertices.end(), part.vertices.begin(), part.vertices.end());
    for (auto tr : part.tris) {
      for (auto& vi : tr.v) vi += off;
      mesh.tris.push_back(tr);
    }
  }
  for (const auto& net : layout.nets) mesh.net_names.push_back(net.name);
  return mesh;
}

SurfaceMesh homogeneous_refine(const SurfaceMesh& mesh, int levels) {
  if (levels < 0) throw std::invalid_argument("homogeneous_refine: levels must be >= 0");
  SurfaceMesh out = mesh;
  for (int lvl = 0; lvl < levels; ++lvl) {
    MidpointCache mids(out);
    std::vector<MeshTri> next;
    next.reserve(out.tris.size());
    const int n = out.size();
    for (int t = 0; t < n; ++t) {
      const MeshTri tr = out.tris[t];
      if (!tr.touches_boundary()) {
        next.push_back(tr);
        continue;
      }
      const int m01 = mids.midpoint(tr.v[0], tr.v[1]);
      const int m12 = mids.midpoint(tr.v[1], tr.v[2]);
      const int m20 = mids.midpoint(tr.v[2], tr.v[0]);
      auto child = [&](std::array<int, 3> v, std::array<bool, 3> b) {
        MeshTri c = tr;
        c.v = v;
        c.boundary = b;
        c.level = tr.level + 1;
        next.push_back(c);
      };
      child({tr.v[0], m01, m20}, {tr.boundary[0], false, tr.boundary[2]});
      child({m01, tr.v[1], m12}, {tr.boundary[0], tr.boundary[1], false});
      child({m20, m12, tr.v[2]}, {false, tr.boundary[1], tr.boundary[2]});
      child({m01, m12, m20}, {false, false, false});
    }
    out.tris = std::move(next);
  }
  return out;
}

SurfaceMesh boundary_layer_refine(const SurfaceMesh& mesh, int layers,
                                  double growth_ratio, double first_layer_height) {
  if (layers == 0) return mesh;
  if (layers < 0) throw std::invalid_argument("boundary_layer_refine: layers must be >= 0");
  if (!(growth_ratio > 1.0))
    throw std::invalid_argument("boundary_layer_refine: growth ratio must be > 1");
  if (!(first_layer_height > 0.0))
    throw std::invalid_argument("boundary_layer_refine: first layer height must be > 0");

  // cumulative stack heights t1 (r^k - 1)/(r - 1)
  std::vector<double> cum(layers + 1, 0.0);
  for (int k = 1; k <= layers; ++k)
    cum[k] = first_layer_height * (std::pow(growth_ratio, k) - 1.0) / (growth_ratio - 1.0);

  SurfaceMesh out;
  out.vertices = mesh.vertices;
  out.net_names = mesh.net_names;
  for (int t = 0; t < mesh.size(); ++t) {
    const MeshTri tr = mesh.tris[t];
    if (!tr.touches_boundary()) {
      out.tris.push_back(tr);
      continue;
    }
    // stack against the longest flagged edge
    int edge = -1;
    double best = -1.0;
    for (int k = 0; k < 3; ++k) {
      if (!tr.boundary[k]) continue;
      const double l = (mesh.vertices[tr.v[k]] - mesh.vertices[tr.v[(k + 1) % 3]]).norm();
      if (l > best) {
        best = l;
        edge = k;
      }
    }
    const int i0 = tr.v[edge], i1 = tr.v[(edge + 1) % 3], iv = tr.v[(edge + 2) % 3];
    const bool b_edge = tr.boundary[edge];
    const bool b_next = tr.boundary[(edge + 1) % 3];   // (i1, iv)
    const bool b_prev = tr.boundary[(edge + 2) % 3];   // (iv, i0)
    const double H = mesh.height(t, edge);
    if (cum[layers] >= H)
      throw std::runtime_error(
          "boundary_layer_refine: stack height exceeds triangle height (" +
          std::to_string(cum[layers]) + " >= " + std::to_string(H) +
          "); reduce first_layer_height");

    const Eigen::Vector3d p0 = mesh.vertices[i0], p1 = mesh.vertices[i1],
                          pv = mesh.vertices[iv];
    auto section = [&](double h, const Eigen::Vector3d& base) {
      return base + (h / H) * (pv - base);
    };
    int a_prev = i0, b_prev_idx = i1;
    for (int k = 1; k <= layers; ++k) {
      const int ak = out.add_vertex(section(cum[k], p0));
      const int bk = out.add_vertex(section(cum[k], p1));
      MeshTri s1 = tr, s2 = tr;
      s1.v = {a_prev, b_prev_idx, bk};
      s1.boundary = {k == 1 ? b_edge : false, b_next, false};
      s1.stack_pos = k - 1;
      s2.v = {a_prev, bk, ak};
      s2.boundary = {false, false, b_prev};
      s2.stack_pos = k - 1;
      out.tris.push_back(s1);
      out.tris.push_back(s2);
      a_prev = ak;
      b_prev_idx = bk;
    }
    MeshTri cap = tr;
    cap.v = {a_prev, b_prev_idx, iv};
    cap.boundary = {false, b_next, b_prev};
    cap.stack_pos = layers;
    out.tris.push_back(cap);
  }
  return out;
}

SurfaceMesh refine(const SurfaceMesh& mesh, const RefinementConfig& cfg) {
  SurfaceMesh out = homogeneous_refine(mesh, cfg.homogeneous_levels);
  if (cfg.boundary_layers > 0)
    out = boundary_layer_refine(out, cfg.boundary_layers, cfg.growth_ratio,
                                cfg.first_layer_height);
  return out;
}

void save_mesh(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_mesh: cannot open " + path);
  os << mesh.size() << "\n";
  char buf[512];
  for (const auto& tr : mesh.tris) {
    const auto& a = mesh.vertices[tr.v[0]];
    const auto& b = mesh.vertices[tr.v[1]];
    const auto& c = mesh.vertices[tr.v[2]];
    std::snprintf(buf, sizeof buf,
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %d %d\n",
                  a.x(), a.y(), a.z(), b.x(), b.y(), b.z(), c.x(), c.y(), c.z(), tr.net,
                  tr.interface);
    os << buf;
  }
}

SurfaceMesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_mesh: cannot open " + path);
  int n = 0;
  is >> n;
  SurfaceMesh mesh;
  mesh.vertices.reserve(3 * n);
  mesh.tris.reserve(n);
  int max_net = -1;
  for (int t = 0; t < n; ++t) {
    double c[9];
    MeshTri tr;
    for (double& x : c) is >> x;
    is >> tr.net >> tr.interface;
    if (!is) throw std::runtime_error("load_mesh: truncated file " + path);
    tr.v = {mesh.add_vertex({c[0], c[1], c[2]}), mesh.add_vertex({c[3], c[4], c[5]}),
            mesh.add_vertex({c[6], c[7], c[8]})};
    max_net = std::max(max_net, tr.net);
    mesh.tris.push_back(tr);
  }
  for (int k = 0; k <= max_net; ++k) mesh.net_names.push_back("net" + std::to_string(k));
  return mesh;
}

}  // namespace sepr
