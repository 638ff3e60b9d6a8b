#include "sepr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sepr {

using nlohmann::json;

double Polygon::signed_area() const {
  double s = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

bool Polygon::contains(const Vec2& p) const {
  bool in = false;
  const size_t n = vertices.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

Polygon Polygon::rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

double ConductorNet::area() const {
  double a = 0.0;
  for (const auto& p : polygons) a += p.signed_area();
  return a;
}

int LayoutModel::net_index(const std::string& name) const {
  for (size_t i = 0; i < nets.size(); ++i)
    if (nets[i].name == name) return static_cast<int>(i);
  throw std::out_of_range("layout: no net named " + name);
}

LayoutModel generate_cpc(double a, double b, double L, double L0,
                         const Stackup& stackup) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("generate_cpc: require 0 < a < b");
  if (!(0.0 < L0 && L0 < L)) throw std::invalid_argument("generate_cpc: require 0 < L0 < L");
  LayoutModel m;
  m.stackup = stackup;
  m.nets.push_back({"left", 0, {Polygon::rect(-b, -L / 2, -a, L / 2)}});
  m.nets.push_back({"right", 0, {Polygon::rect(a, -L / 2, b, L / 2)}});
  m.deembed_window = Window{-b, b, -L0 / 2, L0 / 2};
  m.sa_regions.push_back(Polygon::rect(-a, -L0 / 2, a, L0 / 2));
  return m;
}

LayoutModel generate_gcpw(double a, double b, double Wg, double L, double L0,
                          double h, double eps_in, double eps_out) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("generate_gcpw: require 0 < a < b");
  if (!(0.0 < L0 && L0 < L)) throw std::invalid_argument("generate_gcpw: require 0 < L0 < L");
  if (!(h > 0.0)) throw std::invalid_argument("generate_gcpw: require h > 0");
  if (Wg <= 0.0) Wg = 10.0 * b;  // truncation of the semi-infinite grounds
  LayoutModel m;
  m.stackup = make_substrate_over_ground(eps_in, h, eps_out);
  m.nets.push_back({"signal", 0, {Polygon::rect(-a, -L / 2, a, L / 2)}});
  m.nets.push_back({"gnd", 0,
                    {Polygon::rect(b, -L / 2, b + Wg, L / 2),
                     Polygon::rect(-b - Wg, -L / 2, -b, L / 2)}});
  m.deembed_window = Window{-b - Wg, b + Wg, -L0 / 2, L0 / 2};
  m.sa_regions.push_back(Polygon::rect(a, -L0 / 2, b, L0 / 2));
  m.sa_regions.push_back(Polygon::rect(-b, -L0 / 2, -a, L0 / 2));
  return m;
}

LayoutModel generate_rect_qubit(double W, double H, double D, const Stackup& stackup) {
  if (!(W > 0.0 && H > 0.0 && D > 0.0))
    throw std::invalid_argument("generate_rect_qubit: require W, H, D > 0");
  LayoutModel m;
  m.stackup = stackup;
  m.nets.push_back({"pad_a", 0, {Polygon::rect(-D / 2 - H, -W / 2, -D / 2, W / 2)}});
  m.nets.push_back({"pad_b", 0, {Polygon::rect(D / 2, -W / 2, D / 2 + H, W / 2)}});
  return m;
}

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto cross = [](const Vec2& o, const Vec2& p, const Vec2& q) {
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
  };
  const double d1 = cross(c, d, a), d2 = cross(c, d, b);
  const double d3 = cross(a, b, c), d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool polygons_overlap(const Polygon& p, const Polygon& q) {
  for (size_t i = 0; i < p.vertices.size(); ++i)
    for (size_t j = 0; j < q.vertices.size(); ++j)
      if (segments_intersect(p.vertices[i], p.vertices[(i + 1) % p.vertices.size()],
                             q.vertices[j], q.vertices[(j + 1) % q.vertices.size()]))
        return true;
  // containment without edge crossings
  Vec2 cp{0, 0}, cq{0, 0};
  for (const auto& v : p.vertices) { cp.x += v.x; cp.y += v.y; }
  cp.x /= static_cast<double>(p.vertices.size());
  cp.y /= static_cast<double>(p.vertices.size());
  for (const auto& v : q.vertices) { cq.x += v.x; cq.y += v.y; }
  cq.x /= static_cast<double>(q.vertices.size());
  cq.y /= static_cast<double>(q.vertices.size());
  return q.contains(cp) || p.contains(cq);
}

void validate_polygon(const Polygon& poly, const std::string& where,
                      std::vector<std::string>& out) {
  if (poly.vertices.size() < 3) {
    out.push_back(where + ": fewer than 3 vertices");
    return;
  }
  if (!(poly.signed_area() > 0.0))
    out.push_back(where + ": non-positive signed area (vertices must be counter-clockwise)");
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly.vertices[i];
    const Vec2& q = poly.vertices[(i + 1) % n];
    if (p.x == q.x && p.y == q.y)
      out.push_back(where + ": repeated consecutive vertex at index " + std::to_string(i));
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if ((j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(poly.vertices[i], poly.vertices[(i + 1) % n],
                             poly.vertices[j], poly.vertices[(j + 1) % n])) {
        out.push_back(where + ": self-intersecting outline (edges " + std::to_string(i) +
                      ", " + std::to_string(j) + ")");
        return;
      }
    }
}

}  // namespace

std::vector<std::string> validate_layout(const LayoutModel& layout) {
  std::vector<std::string> out;
  for (size_t n = 0; n < layout.nets.size(); ++n) {
    const auto& net = layout.nets[n];
    if (net.interface < 0 || net.interface >= layout.stackup.interface_count())
      out.push_back("net " + net.name + ": interface index " +
                    std::to_string(net.interface) + " not in stackup (" +
                    std::to_string(layout.stackup.interface_count()) + " interfaces)");
    for (size_t p = 0; p < net.polygons.size(); ++p)
      validate_polygon(net.polygons[p],
                       "net " + net.name + " polygon " + std::to_string(p), out);
  }
  for (size_t i = 0; i < layout.nets.size(); ++i)
    for (size_t j = i + 1; j < layout.nets.size(); ++j) {
      if (layout.nets[i].interface != layout.nets[j].interface) continue;
      for (size_t pi = 0; pi < layout.nets[i].polygons.size(); ++pi)
        for (size_t pj = 0; pj < layout.nets[j].polygons.size(); ++pj)
          if (polygons_overlap(layout.nets[i].polygons[pi], layout.nets[j].polygons[pj]))
            out.push_back("nets " + layout.nets[i].name + " and " + layout.nets[j].name +
                          " overlap (polygons " + std::to_string(pi) + ", " +
                          std::to_string(pj) + ")");
    }
  for (size_t p = 0; p < layout.sa_regions.size(); ++p)
    validate_polygon(layout.sa_regions[p], "sa_region " + std::to_string(p), out);
  if (layout.deembed_window) {
    const auto& w = *layout.deembed_window;
    if (!(w.x0 < w.x1 && w.y0 < w.y1))
      out.push_back("deembed_window: degenerate extents");
  }
  return out;
}

// ----- JSON -----

namespace {

json stackup_to_json(const Stackup& st) {
  json layers = json::array();
  for (const auto& l : st.layers()) {
    json jl;
    jl["eps"] = l.eps_r;
    if (l.unbounded())
      jl["thickness"] = "inf";
    else
      jl["thickness"] = l.thickness;
    layers.push_back(jl);
  }
  json j;
  j["layers"] = layers;
  j["bottom_boundary"] = st.bottom_pec() ? json{{"pec_at", *st.bottom_pec()}} : json("open");
  j["top_boundary"] = st.top_pec() ? json{{"pec_at", *st.top_pec()}} : json("open");
  return j;
}

Stackup stackup_from_json(const json& j) {
  std::vector<DielectricLayer> layers;
  for (const auto& jl : j.at("layers")) {
    DielectricLayer l;
    l.eps_r = jl.at("eps").get<double>();
    if (jl.contains("thickness")) {
      if (jl["thickness"].is_string()) {
        if (jl["thickness"] != "inf")
          throw std::runtime_error("stackup: thickness must be a number or \"inf\"");
      } else {
        l.thickness = jl["thickness"].get<double>();
      }
    }
    layers.push_back(l);
  }
  Stackup st(std::move(layers));
  auto check_boundary = [&](const char* key, std::optional<double> pec) {
    if (!j.contains(key)) return;
    const json& jb = j.at(key);
    if (jb.is_string()) {
      if (jb != "open") throw std::runtime_error(std::string("stackup: bad ") + key);
      if (pec)
        throw std::runtime_error(std::string("stackup: ") + key +
                                 " says open but the outer layer has finite thickness");
    } else {
      const double z = jb.at("pec_at").get<double>();
      if (!pec || std::abs(*pec - z) > 1e-9 * std::max(1.0, std::abs(z)))
        throw std::runtime_error(std::string("stackup: ") + key +
                                 " pec_at inconsistent with the outer layer thickness");
    }
  };
  check_boundary("bottom_boundary", st.bottom_pec());
  check_boundary("top_boundary", st.top_pec());
  return st;
}

json polygon_to_json(const Polygon& p) {
  json j = json::array();
  for (const auto& v : p.vertices) j.push_back({v.x, v.y});
  return j;
}

Polygon polygon_from_json(const json& j) {
  Polygon p;
  for (const auto& jv : j) p.vertices.push_back({jv.at(0).get<double>(), jv.at(1).get<double>()});
  return p;
}

}  // namespace

std::string layout_to_json_text(const LayoutModel& layout) {
  json j;
  j["stackup"] = stackup_to_json(layout.stackup);
  j["nets"] = json::array();
  for (const auto& net : layout.nets) {
    json jn;
    jn["name"] = net.name;
    jn["interface"] = net.interface;
    jn["polygons"] = json::array();
    for (const auto& p : net.polygons) jn["polygons"].push_back(polygon_to_json(p));
    j["nets"].push_back(jn);
  }
  if (!layout.sa_regions.empty()) {
    j["sa_regions"] = json::array();
    for (const auto& p : layout.sa_regions) j["sa_regions"].push_back(polygon_to_json(p));
  }
  if (layout.deembed_window) {
    const auto& w = *layout.deembed_window;
    j["deembed_window"] = {{"x0", w.x0}, {"x1", w.x1}, {"y0", w.y0}, {"y1", w.y1}};
  }
  return j.dump(2);
}

LayoutModel layout_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  LayoutModel m;
  m.stackup = stackup_from_json(j.at("stackup"));
  for (const auto& jn : j.at("nets")) {
    ConductorNet net;
    net.name = jn.at("name").get<std::string>();
    net.interface = jn.at("interface").get<int>();
    for (const auto& jp : jn.at("polygons")) net.polygons.push_back(polygon_from_json(jp));
    m.nets.push_back(std::move(net));
  }
  if (j.contains("sa_regions"))
    for (const auto& jp : j["sa_regions"]) m.sa_regions.push_back(polygon_from_json(jp));
  if (j.contains("deembed_window")) {
    const auto& jw = j["deembed_window"];
    m.deembed_window = Window{jw.at("x0").get<double>(), jw.at("x1").get<double>(),
                              jw.at("y0").get<double>(), jw.at("y1").get<double>()};
  }
  return m;
}

LayoutModel load_layout(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_layout: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return layout_from_json_text(ss.str());
}

void save_layout(const LayoutModel& layout, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_layout: cannot open " + path);
  os << layout_to_json_text(layout) << "\n";
}

}  // namespace sepr
