#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sepr/geometry.hpp"
#include "sepr/mesh.hpp"

using namespace sepr;

TEST_CASE("cpc generator geometry") {
  const Stackup st = make_two_layer(11.9, 1.0);
  const LayoutModel m = generate_cpc(10, 15, 800, 100, st);
  REQUIRE(m.nets.size() == 2);
  CHECK(m.nets[0].area() == doctest::Approx(5.0 * 800.0));
  CHECK(m.nets[1].area() == doctest::Approx(5.0 * 800.0));
  CHECK(m.deembed_window->y1 - m.deembed_window->y0 == doctest::Approx(100.0));
  CHECK(validate_layout(m).empty());
  CHECK_THROWS_AS(generate_cpc(15, 15, 800, 100, st), std::invalid_argument);
  CHECK_THROWS_AS(generate_cpc(10, 15, 100, 800, st), std::invalid_argument);
}

TEST_CASE("gcpw generator geometry and defaults") {
  const LayoutModel m = generate_gcpw(5, 30, 0, 800, 100, 25, 11.9);
  CHECK(m.stackup.bottom_pec().has_value());
  CHECK(*m.stackup.bottom_pec() == doctest::Approx(-25.0));
  // default ground truncation Wg = 10 b
  const auto& gnd = m.nets[m.net_index("gnd")];
  double xmax = 0;
  for (const auto& p : gnd.polygons)
    for (const auto& v : p.vertices) xmax = std::max(xmax, v.x);
  CHECK(xmax == doctest::Approx(330.0));
  CHECK(validate_layout(m).empty());

  // mirror symmetry of the vertex multiset under x -> -x
  std::multiset<std::pair<double, double>> pts, mirrored;
  for (const auto& net : m.nets)
    for (const auto& p : net.polygons)
      for (const auto& v : p.vertices) {
        pts.insert({v.x, v.y});
        mirrored.insert({-v.x, v.y});
      }
  CHECK(pts == mirrored);
}

TEST_CASE("rect qubit generator") {
  const Stackup st = make_two_layer(10.15, 1.0);
  const LayoutModel m = generate_rect_qubit(100, 478, 8, st);
  CHECK(m.nets[0].area() == doctest::Approx(47800.0));
  CHECK(m.nets[1].area() == doctest::Approx(47800.0));
  // pads separated by D
  CHECK(m.nets[1].polygons[0].vertices[0].x == doctest::Approx(4.0));
  CHECK_THROWS_AS(generate_rect_qubit(0, 1, 1, st), std::invalid_argument);
  CHECK(validate_layout(m).empty());
}

TEST_CASE("layout json round trip") {
  const LayoutModel m = generate_gcpw(5, 30, 0, 800, 100, 25, 11.9);
  const std::string text = layout_to_json_text(m);
  const LayoutModel r = layout_from_json_text(text);
  CHECK(r.nets.size() == m.nets.size());
  CHECK(r.stackup.hash() == m.stackup.hash());
  CHECK(r.deembed_window->x0 == m.deembed_window->x0);
  CHECK(r.sa_regions.size() == m.sa_regions.size());
  CHECK(r.nets[0].polygons[0].signed_area() ==
        doctest::Approx(m.nets[0].polygons[0].signed_area()).epsilon(1e-15));
}

TEST_CASE("layout validation reports violations") {
  LayoutModel m;
  m.stackup = make_two_layer(11.9, 1.0);
  m.nets.push_back({"a", 0, {Polygon::rect(0, 0, 10, 10)}});
  m.nets.push_back({"b", 0, {Polygon::rect(5, 5, 15, 15)}});
  const auto v1 = validate_layout(m);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].find("a") != std::string::npos);
  CHECK(v1[0].find("b") != std::string::npos);
  CHECK(v1[0].find("overlap") != std::string::npos);

  LayoutModel m2;
  m2.stackup = make_two_layer(11.9, 1.0);
  m2.nets.push_back({"c", 7, {Polygon::rect(0, 0, 1, 1)}});
  const auto v2 = validate_layout(m2);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].find("interface index 7") != std::string::npos);

  LayoutModel m3;
  m3.stackup = make_two_layer(11.9, 1.0);
  Polygon cw;  // clockwise square
  cw.vertices = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  m3.nets.push_back({"d", 0, {cw}});
  CHECK_FALSE(validate_layout(m3).empty());
}

TEST_CASE("unit square triangulates to two triangles") {
  LayoutModel m;
  m.stackup = make_two_layer(1.0, 1.0);
  m.nets.push_back({"n", 0, {Polygon::rect(0, 0, 1, 1)}});
  const SurfaceMesh mesh = triangulate(m, 2.0);
  CHECK(mesh.size() == 2);
  CHECK(mesh.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  // boundary edges: 4 outline edges plus none on the diagonal
  int nb = 0;
  for (const auto& t : mesh.tris)
    for (bool b : t.boundary) nb += b ? 1 : 0;
  CHECK(nb == 4);
}

TEST_CASE("cpc strip mesh preserves area and marks the rim") {
  const Stackup st = make_two_layer(11.9, 1.0);
  const LayoutModel m = generate_cpc(10, 15, 800, 100, st);
  const SurfaceMesh mesh = triangulate(m, 5.0);
  CHECK(mesh.net_area(0) == doctest::Approx(4000.0).epsilon(1e-9));
  CHECK(mesh.net_area(1) == doctest::Approx(4000.0).epsilon(1e-9));
  for (int t = 0; t < mesh.size(); ++t) CHECK(mesh.area(t) > 0.0);
  for (int t = 0; t < mesh.size(); ++t) CHECK(mesh.diameter(t) <= 5.0 + 1e-12);

  // every boundary-flagged edge lies on a conductor outline
  for (const auto& tr : mesh.tris)
    for (int k = 0; k < 3; ++k) {
      if (!tr.boundary[k]) continue;
      const auto& a = mesh.vertices[tr.v[k]];
      const auto& b = mesh.vertices[tr.v[(k + 1) % 3]];
      const Eigen::Vector3d mid = 0.5 * (a + b);
      const bool on_x = std::abs(std::abs(mid.x()) - 10.0) < 1e-9 ||
                        std::abs(std::abs(mid.x()) - 15.0) < 1e-9;
      const bool on_y = std::abs(std::abs(mid.y()) - 400.0) < 1e-9;
      CHECK((on_x || on_y));
    }
}

TEST_CASE("homogeneous refinement splits only boundary triangles") {
  LayoutModel m;
  m.stackup = make_two_layer(1.0, 1.0);
  m.nets.push_back({"n", 0, {Polygon::rect(0, 0, 8, 8)}});
  const SurfaceMesh base = triangulate(m, 3.0);
  const double area0 = base.total_area();
  const int nb0 = base.boundary_triangle_count();
  const int ni0 = base.size() - nb0;
  REQUIRE(ni0 > 0);

  const SurfaceMesh r1 = homogeneous_refine(base, 1);
  CHECK(r1.total_area() == doctest::Approx(area0).epsilon(1e-12));
  CHECK(r1.size() == base.size() + 3 * nb0);
  int interior_lvl0 = 0;
  for (const auto& t : r1.tris)
    if (t.level == 0) ++interior_lvl0;
  CHECK(interior_lvl0 == ni0);

  const SurfaceMesh r2 = homogeneous_refine(base, 2);
  CHECK(r2.total_area() == doctest::Approx(area0).epsilon(1e-12));
  CHECK(r2.size() <= base.size() * 16);  // 4^k bound
}

TEST_CASE("single triangle homogeneous split = four congruent children") {
  SurfaceMesh mesh;
  mesh.net_names = {"n"};
  MeshTri t;
  t.v = {mesh.add_vertex({0, 0, 0}), mesh.add_vertex({2, 0, 0}), mesh.add_vertex({0, 2, 0})};
  t.boundary = {true, false, false};
  t.net = 0;
  mesh.tris.push_back(t);
  const SurfaceMesh r = homogeneous_refine(mesh, 1);
  CHECK(r.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(r.area(i) == doctest::Approx(0.5).epsilon(1e-14));
  const SurfaceMesh r2 = homogeneous_refine(mesh, 2);
  CHECK(r2.size() <= 16);
  CHECK(r2.total_area() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("boundary layer refinement geometry") {
  SurfaceMesh mesh;
  mesh.net_names = {"n"};
  MeshTri t;
  t.v = {mesh.add_vertex({0, 0, 0}), mesh.add_vertex({4, 0, 0}), mesh.add_vertex({0, 3, 0})};
  t.boundary = {true, false, false};
  t.net = 0;
  mesh.tris.push_back(t);

  SUBCASE("layers=0 is the identity") {
    const SurfaceMesh r = boundary_layer_refine(mesh, 0, 2.0, 1e-3);
    CHECK(r.size() == 1);
  }
  SUBCASE("geometric strip heights 1,2,4,8,16 (in nm)") {
    const double t1 = 1e-3;  // 1 nm in um
    const SurfaceMesh r = boundary_layer_refine(mesh, 5, 2.0, t1);
    CHECK(r.size() == 11);  // 2 per strip + cap
    CHECK(r.total_area() == doctest::Approx(6.0).epsilon(1e-9));
    // strip k has height t1*2^k, measured via its triangles' y extents
    for (int k = 0; k < 5; ++k) {
      double ymin = 1e300, ymax = -1e300;
      for (int i = 0; i < r.size(); ++i)
        if (r.tris[i].stack_pos == k)
          for (int vi : r.tris[i].v) {
            ymin = std::min(ymin, r.vertices[vi].y());
            ymax = std::max(ymax, r.vertices[vi].y());
          }
      const double c0 = t1 * (std::pow(2.0, k) - 1.0);
      const double c1 = t1 * (std::pow(2.0, k + 1) - 1.0);
      CHECK(ymin == doctest::Approx(c0).epsilon(1e-12));
      CHECK(ymax == doctest::Approx(c1).epsilon(1e-12));
    }
  }
  SUBCASE("overflow is rejected with a hint") {
    CHECK_THROWS_WITH_AS(boundary_layer_refine(mesh, 5, 2.0, 0.5),
                         doctest::Contains("first_layer_height"), std::runtime_error);
  }
}

TEST_CASE("combined refinement on the cpc fixture") {
  const Stackup st = make_two_layer(11.9, 1.0);
  const LayoutModel m = generate_cpc(10, 15, 200, 50, st);
  const SurfaceMesh base = triangulate(m, 5.0);
  const double area0 = base.total_area();

  RefinementConfig cfg;
  cfg.homogeneous_levels = 2;
  cfg.boundary_layers = 8;
  cfg.growth_ratio = 2.0;
  cfg.first_layer_height = 1e-3;
  const SurfaceMesh r = refine(base, cfg);

  CHECK(std::abs(r.total_area() - area0) / area0 < 1e-9);
  for (const auto& tr : r.tris) CHECK(tr.net >= 0);

  // linear growth in boundary layers vs exponential in homogeneous levels
  const SurfaceMesh h2 = homogeneous_refine(base, 2);
  const int nb2 = h2.boundary_triangle_count();
  CHECK(r.size() <= h2.size() + 2 * cfg.boundary_layers * nb2 + nb2);

  // smallest strip height ~ first layer height
  double hmin = 1e300;
  for (int t = 0; t < r.size(); ++t)
    if (r.tris[t].stack_pos == 0) hmin = std::min(hmin, r.height(t, 0));
  CHECK(hmin == doctest::Approx(1e-3).epsilon(0.5));

  // monotone grading: strip heights never decrease moving inward
  // (verified per stack index k -> height ~ t1 * r^k)
  for (int k = 0; k + 1 < cfg.boundary_layers; ++k) {
    double hk = 0, hk1 = 0;
    int ck = 0, ck1 = 0;
    for (int t = 0; t < r.size(); ++t) {
      if (r.tris[t].stack_pos == k) { hk += r.area(t); ++ck; }
      if (r.tris[t].stack_pos == k + 1) { hk1 += r.area(t); ++ck1; }
    }
    if (ck && ck1) CHECK(hk / ck < hk1 / ck1);
  }

  // net-id preservation and per-net area conservation
  CHECK(r.net_area(0) == doctest::Approx(base.net_area(0)).epsilon(1e-12));
  CHECK(r.net_area(1) == doctest::Approx(base.net_area(1)).epsilon(1e-12));
}

TEST_CASE("mesh io round trip") {
  const Stackup st = make_two_layer(11.9, 1.0);
  const LayoutModel m = generate_cpc(10, 15, 100, 50, st);
  const SurfaceMesh mesh = triangulate(m, 8.0);
  save_mesh(mesh, "/tmp/sepr_mesh_test.txt");
  const SurfaceMesh r = load_mesh("/tmp/sepr_mesh_test.txt");
  REQUIRE(r.size() == mesh.size());
  for (int t = 0; t < mesh.size(); ++t) {
    CHECK(r.area(t) == doctest::Approx(mesh.area(t)).epsilon(1e-12));
    CHECK(r.tris[t].net == mesh.tris[t].net);
    CHECK((r.centroid(t) - mesh.centroid(t)).norm() < 1e-12);
  }
}
