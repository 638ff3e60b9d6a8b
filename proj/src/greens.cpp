#include "sepr/greens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sepr/constants.hpp"
#include "sepr/numerics.hpp"

namespace sepr {

namespace {

// Crossover between the direct spectral-variable integration (small rho,
// where the Ogata nodes under-sample the exponentially confined integrand)
// and Ogata quadrature. `gap` is the shortest interface/conductor-plane
// distance, which sets the decay scale of the scattered spectrum.
constexpr double kSmallRhoFactor = 2.0;
constexpr double kLambdaCutoverFactor = 60.0;

double small_rho_value(const Stackup& st, int src, double rho, double z) {
  const double gap = st.min_gap(src);
  const double lam_max = kLambdaCutoverFactor / gap;
  auto f = [&](double lam) {
    const SpectralSolution sol = solve_spectral(st, lam, src);
    return sol.scattered(z) * bessel_j0(lam * rho) * lam;
  };
  AdaptiveOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12 / (4.0 * kPi * kEps0 * st.eps_eff(src) * gap);
  return integrate_adaptive(f, 0.0, lam_max, opts);
}

GreensGrad small_rho_gradient(const Stackup& st, int src, double rho, double z) {
  const double gap = st.min_gap(src);
  const double lam_max = kLambdaCutoverFactor / gap;
  AdaptiveOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12 / (4.0 * kPi * kEps0 * st.eps_eff(src) * gap * gap);
  GreensGrad g;
  g.d_rho = -integrate_adaptive(
      [&](double lam) {
        const SpectralSolution sol = solve_spectral(st, lam, src);
        return sol.scattered(z) * bessel_j1(lam * rho) * lam * lam;
      },
      0.0, lam_max, opts);
  g.d_z = integrate_adaptive(
      [&](double lam) {
        const SpectralSolution sol = solve_spectral(st, lam, src);
        return sol.scattered_dz(z) * bessel_j0(lam * rho) * lam;
      },
      0.0, lam_max, opts);
  return g;
}

}  // namespace

double greens_scattered(const Stackup& st, int src, double rho, double z,
                        const OgataConfig& cfg) {
  if (st.scattered_identically_zero()) return 0.0;
  const double gap = st.min_gap(src);
  if (rho < kSmallRhoFactor * gap) return small_rho_value(st, src, rho, z);
  return inverse_hankel_ogata(
      [&](double lam) { return solve_spectral(st, lam, src).scattered(z); }, rho, cfg,
      0);
}

GreensGrad greens_scattered_gradient(const Stackup& st, int src, double rho,
                                     double z, const OgataConfig& cfg) {
  GreensGrad g;
  if (st.scattered_identically_zero()) return g;
  const double gap = st.min_gap(src);
  if (rho < kSmallRhoFactor * gap) return small_rho_gradient(st, src, rho, z);
  g.d_rho = -inverse_hankel_ogata(
      [&](double lam) { return solve_spectral(st, lam, src).scattered(z) * lam; }, rho,
      cfg, 1);
  g.d_z = inverse_hankel_ogata(
      [&](double lam) { return solve_spectral(st, lam, src).scattered_dz(z); }, rho,
      cfg, 0);
  return g;
}

GreensEval greens_total(const Stackup& st, int src, double rho, double z, double zp,
                        const OgataConfig& cfg) {
  const double zi = st.interface_z(src);
  if (std::abs(zp - zi) > 1e-9 * std::max(1.0, std::abs(zi)))
    throw std::invalid_argument("greens_total: zp must lie on the source interface");
  if (rho < 0.0) throw std::invalid_argument("greens_total: rho must be >= 0");

  GreensEval ev;
  ev.scattered = greens_scattered(st, src, rho, z, cfg);
  const double dz = z - zi;
  const double r = std::hypot(rho, dz);
  if (r == 0.0) {
    ev.primary_singular = true;
    ev.primary = std::numeric_limits<double>::infinity();
    ev.total = ev.scattered;
    return ev;
  }
  ev.primary = 1.0 / (4.0 * kPi * kEps0 * st.eps_eff(src) * r);
  ev.total = ev.primary + ev.scattered;
  return ev;
}

GreensGrad greens_gradient(const Stackup& st, int src, double rho, double z, double zp,
                           const OgataConfig& cfg) {
  const double zi = st.interface_z(src);
  const double dz = z - zi;
  const double r = std::hypot(rho, dz);
  if (r == 0.0) throw std::domain_error("greens_gradient: evaluation at the source point");
  (void)zp;
  GreensGrad g = greens_scattered_gradient(st, src, rho, z, cfg);
  const double c = 1.0 / (4.0 * kPi * kEps0 * st.eps_eff(src));
  g.d_rho += -c * rho / (r * r * r);
  g.d_z += -c * dz / (r * r * r);
  return g;
}

// ---------------------------------------------------------------------------
// GreensTable
// ---------------------------------------------------------------------------

GreensTable GreensTable::build(const Stackup& st, int src,
                               std::vector<double> field_planes,
                               const GreensTableConfig& cfg) {
  if (field_planes.empty())
    throw std::invalid_argument("GreensTable::build: need at least one field plane");
  if (!(cfg.rho_min > 0.0 && cfg.rho_max > cfg.rho_min))
    throw std::invalid_argument("GreensTable::build: bad radial range");

  GreensTable t;
  t.source_interface_ = src;
  t.stackup_hash_ = st.hash();
  t.planes_ = std::move(field_planes);
  t.rho_min_ = cfg.rho_min;
  t.rho_max_ = cfg.rho_max;
  t.zero_scattered_ = st.scattered_identically_zero();

  const double span = std::log10(cfg.rho_max / cfg.rho_min);
  const int npts = std::max(4, static_cast<int>(std::ceil(span * cfg.pts_per_decade)) + 1);
  t.log_rho_.resize(npts);
  const double l0 = std::log(cfg.rho_min);
  t.dlog_ = (std::log(cfg.rho_max) - l0) / (npts - 1);
  for (int i = 0; i < npts; ++i) t.log_rho_[i] = l0 + i * t.dlog_;

  const int np = static_cast<int>(t.planes_.size());
  t.data_.assign(np, PlaneData{});
  for (auto& pd : t.data_) {
    pd.val.assign(npts, 0.0);
    pd.drho.assign(npts, 0.0);
    pd.dz.assign(npts, 0.0);
  }
  if (t.zero_scattered_) return t;

  const double gap = st.min_gap(src);
  const double rho_star = kSmallRhoFactor * gap;

  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < npts; ++i) {
    try {
      const double rho = std::exp(t.log_rho_[i]);
      if (rho < rho_star) {
        for (int p = 0; p < np; ++p) {
          t.data_[p].val[i] = small_rho_value(st, src, rho, t.planes_[p]);
          const GreensGrad g = small_rho_gradient(st, src, rho, t.planes_[p]);
          t.data_[p].drho[i] = g.d_rho;
          t.data_[p].dz[i] = g.d_z;
        }
        continue;
      }
      // J0 batch: values then d/dz for every plane, sharing spectral solves
      std::vector<int> groups(2 * np);
      for (int p = 0; p < np; ++p) {
        groups[p] = 0;
        groups[np + p] = 1;
      }
      OgataConfig oc = cfg.ogata;
      auto fn0 = [&](double lam, std::vector<double>& out) {
        const SpectralSolution sol = solve_spectral(st, lam, src);
        for (int p = 0; p < np; ++p) {
          out[p] = sol.scattered(t.planes_[p]);
          out[np + p] = sol.scattered_dz(t.planes_[p]);
        }
      };
      std::vector<double> v0 = inverse_hankel_ogata_batch(fn0, 2 * np, groups, rho, oc, 0);
      // J1 batch: radial derivative
      std::vector<int> g1(np, 0);
      auto fn1 = [&](double lam, std::vector<double>& out) {
        const SpectralSolution sol = solve_spectral(st, lam, src);
        for (int p = 0; p < np; ++p) out[p] = sol.scattered(t.planes_[p]) * lam;
      };
      std::vector<double> v1 = inverse_hankel_ogata_batch(fn1, np, g1, rho, oc, 1);
      for (int p = 0; p < np; ++p) {
        t.data_[p].val[i] = v0[p];
        t.data_[p].dz[i] = v0[np + p];
        t.data_[p].drho[i] = -v1[p];
      }
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return t;
}

int GreensTable::plane_index(double z) const {
  for (int p = 0; p < plane_count(); ++p)
    if (std::abs(planes_[p] - z) <= 1e-9 * std::max(1.0, std::abs(z))) return p;
  throw std::out_of_range("GreensTable: no field plane at z=" + std::to_string(z));
}

void GreensTable::interp_weights(double rho, int& base, double w[4]) const {
  const double t = std::log(rho);
  const int n = grid_size();
  double s = (t - log_rho_[0]) / dlog_;
  int i = static_cast<int>(std::floor(s));
  i = std::clamp(i, 1, n - 3);
  base = i - 1;
  const double u = s - i;  // in [0,1] within [i, i+1] away from clamping
  // 4-point Lagrange on equally spaced nodes -1, 0, 1, 2
  w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
  w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
  w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

double GreensTable::value(double rho, int plane) const {
  if (zero_scattered_) return 0.0;
  const PlaneData& pd = data_.at(plane);
  if (rho <= rho_min_) return pd.val.front();  // near-zero extension
  if (rho > rho_max_)
    throw std::out_of_range("GreensTable: rho=" + std::to_string(rho) +
                            " beyond table range; rebuild with larger rho_max");
  int base;
  double w[4];
  interp_weights(rho, base, w);
  const auto& v = pd.val;
  return w[0] * v[base] + w[1] * v[base + 1] + w[2] * v[base + 2] + w[3] * v[base + 3];
}

GreensGrad GreensTable::gradient(double rho, int plane) const {
  GreensGrad g;
  if (zero_scattered_) return g;
  const PlaneData& pd = data_.at(plane);
  if (rho <= rho_min_) {
    // radial derivative is odd and vanishes at the axis
    g.d_rho = pd.drho.front() * (rho / rho_min_);
    g.d_z = pd.dz.front();
    return g;
  }
  if (rho > rho_max_)
    throw std::out_of_range("GreensTable: rho=" + std::to_string(rho) +
                            " beyond table range; rebuild with larger rho_max");
  int base;
  double w[4];
  interp_weights(rho, base, w);
  for (int k = 0; k < 4; ++k) {
    g.d_rho += w[k] * pd.drho[base + k];
    g.d_z += w[k] * pd.dz[base + k];
  }
  return g;
}

// ----- serialization -----

namespace {
constexpr char kMagic[8] = {'S', 'E', 'P', 'R', 'G', 'T', '0', '1'};
}

void GreensTable::save_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("GreensTable: cannot open " + path);
  os.write(kMagic, 8);
  auto w64 = [&](std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  auto wi = [&](std::int32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
  auto wd = [&](double v) { os.write(reinterpret_cast<const char*>(&v), 8); };
  w64(stackup_hash_);
  wi(source_interface_);
  wi(zero_scattered_ ? 1 : 0);
  wi(plane_count());
  wi(grid_size());
  wd(rho_min_);
  wd(rho_max_);
  wd(dlog_);
  for (double p : planes_) wd(p);
  for (double l : log_rho_) wd(l);
  for (const auto& pd : data_)
    for (const auto* arr : {&pd.val, &pd.drho, &pd.dz})
      os.write(reinterpret_cast<const char*>(arr->data()),
               static_cast<std::streamsize>(arr->size() * sizeof(double)));
}

GreensTable GreensTable::load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("GreensTable: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("GreensTable: bad magic in " + path);
  GreensTable t;
  auto r64 = [&]() { std::uint64_t v; is.read(reinterpret_cast<char*>(&v), 8); return v; };
  auto ri = [&]() { std::int32_t v; is.read(reinterpret_cast<char*>(&v), 4); return v; };
  auto rd = [&]() { double v; is.read(reinterpret_cast<char*>(&v), 8); return v; };
  t.stackup_hash_ = r64();
  t.source_interface_ = ri();
  t.zero_scattered_ = ri() != 0;
  const int np = ri();
  const int n = ri();
  t.rho_min_ = rd();
  t.rho_max_ = rd();
  t.dlog_ = rd();
  t.planes_.resize(np);
  for (auto& p : t.planes_) p = rd();
  t.log_rho_.resize(n);
  for (auto& l : t.log_rho_) l = rd();
  t.data_.resize(np);
  for (auto& pd : t.data_)
    for (auto* arr : {&pd.val, &pd.drho, &pd.dz}) {
      arr->resize(n);
      is.read(reinterpret_cast<char*>(arr->data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    }
  if (!is) throw std::runtime_error("GreensTable: truncated file " + path);
  return t;
}

void GreensTable::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("GreensTable: cannot open " + path);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "# sepr greens table v1 stackup_hash=%llu source_interface=%d "
                "zero_scattered=%d rho_min=%.17g rho_max=%.17g dlog=%.17g\n",
                static_cast<unsigned long long>(stackup_hash_), source_interface_,
                zero_scattered_ ? 1 : 0, rho_min_, rho_max_, dlog_);
  os << buf << "# planes";
  for (double p : planes_) {
    std::snprintf(buf, sizeof buf, " %.17g", p);
    os << buf;
  }
  os << "\nrho,plane,value,d_rho,d_z\n";
  for (int p = 0; p < plane_count(); ++p)
    for (int i = 0; i < grid_size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g\n",
                    std::exp(log_rho_[i]), p, data_[p].val[i], data_[p].drho[i],
                    data_[p].dz[i]);
      os << buf;
    }
}

GreensTable GreensTable::load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("GreensTable: cannot open " + path);
  GreensTable t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# sepr greens table v1", 0) != 0)
    throw std::runtime_error("GreensTable: bad csv header in " + path);
  {
    unsigned long long hash;
    int src, zs;
    double rmin, rmax, dlog;
    if (std::sscanf(line.c_str(),
                    "# sepr greens table v1 stackup_hash=%llu source_interface=%d "
                    "zero_scattered=%d rho_min=%lg rho_max=%lg dlog=%lg",
                    &hash, &src, &zs, &rmin, &rmax, &dlog) != 6)
      throw std::runtime_error("GreensTable: malformed csv header");
    t.stackup_hash_ = hash;
    t.source_interface_ = src;
    t.zero_scattered_ = zs != 0;
    t.rho_min_ = rmin;
    t.rho_max_ = rmax;
    t.dlog_ = dlog;
  }
  if (!std::getline(is, line) || line.rfind("# planes", 0) != 0)
    throw std::runtime_error("GreensTable: missing planes line");
  {
    std::istringstream ss(line.substr(8));
    double p;
    while (ss >> p) t.planes_.push_back(p);
  }
  std::getline(is, line);  // column header
  const int np = static_cast<int>(t.planes_.size());
  t.data_.resize(np);
  std::vector<double> rhos;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double rho, v, dr, dz;
    int p;
    if (std::sscanf(line.c_str(), "%lg,%d,%lg,%lg,%lg", &rho, &p, &v, &dr, &dz) != 5)
      throw std::runtime_error("GreensTable: malformed csv row");
    if (p == 0) rhos.push_back(rho);
    t.data_.at(p).val.push_back(v);
    t.data_.at(p).drho.push_back(dr);
    t.data_.at(p).dz.push_back(dz);
  }
  t.log_rho_.resize(rhos.size());
  for (size_t i = 0; i < rhos.size(); ++i) t.log_rho_[i] = std::log(rhos[i]);
  // re-anchor the uniform grid exactly from the header values
  const int n = static_cast<int>(t.log_rho_.size());
  const double l0 = std::log(t.rho_min_);
  for (int i = 0; i < n; ++i) t.log_rho_[i] = l0 + i * t.dlog_;
  return t;
}

}  // namespace sepr
