#pragma once

// Planar conductor layouts: polygon nets pinned to stackup interfaces,
// parametric generators for the benchmark structures, JSON (de)serialization
// and well-formedness validation.

#include <optional>
#include <string>
#include <vector>

#include "sepr/stackup.hpp"

namespace sepr {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Polygon {
  std::vector<Vec2> vertices;  // counter-clockwise, simple

  double signed_area() const;
  bool contains(const Vec2& p) const;

  static Polygon rect(double x0, double y0, double x1, double y1);
};

struct ConductorNet {
  std::string name;
  int interface = 0;
  std::vector<Polygon> polygons;

  double area() const;
};

struct Window {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

struct LayoutModel {
  Stackup stackup = make_two_layer(1.0, 1.0);
  std::vector<ConductorNet> nets;
  std::vector<Polygon> sa_regions;  // exposed-substrate evaluation footprints
  std::optional<Window> deembed_window;

  int net_index(const std::string& name) const;
};

// Coplanar capacitor: strips on a <= |x| <= b, |y| <= L/2, with a central
// de-embedding window |y| <= L0/2 and the slot |x| < a as the SA region.
LayoutModel generate_cpc(double a, double b, double L, double L0,
                         const Stackup& stackup);

// Grounded coplanar waveguide: signal |x| <= a, grounds b <= |x| <= b + Wg on
// a substrate of thickness h over a conductor plane. Wg <= 0 selects the
// default truncation 10*b.
LayoutModel generate_gcpw(double a, double b, double Wg, double L, double L0,
                          double h, double eps_in, double eps_out = 1.0);

// Two identical rectangular pads with inner-edge width W, extent H, gap D.
LayoutModel generate_rect_qubit(double W, double H, double D, const Stackup& stackup);

std::vector<std::string> validate_layout(const LayoutModel& layout);

LayoutModel load_layout(const std::string& path);
void save_layout(const LayoutModel& layout, const std::string& path);
LayoutModel layout_from_json_text(const std::string& text);
std::string layout_to_json_text(const LayoutModel& layout);

}  // namespace sepr
