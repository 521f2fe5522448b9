#include "sparsewave/spectral.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsewave/quadrature.hpp"
#include "sparsewave/radial.hpp"
#include "sparsewave/wkb.hpp"

namespace spw {

double spectral_density(const SphericalField& A, double k) {
  if (!(k > 0)) throw InvalidInput("spectral_density: requires real k > 0");
  SphericalField g = A;
  if (g.values.empty()) g.synthesize();
  const double norm = sphere_l2_norm(*g.grid, g.values);
  return k / PI * norm * norm;
}

double TriangleDomain::height() const { return 0.5 * (b - a) * std::tan(base_angle()); }

double TriangleDomain::side_length() const { return 0.5 * (b - a) / std::cos(base_angle()); }

bool TriangleDomain::contains(cplx k) const {
  const double x = k.real(), y = k.imag();
  if (y <= 0) return false;
  const double t = std::tan(base_angle());
  return y < (x - a) * t && y < (b - x) * t;
}

TriangleDomain make_triangle(double a, double b, double gamma1, double d_config) {
  if (!(b > a) || !(a > 0)) throw InvalidInput("make_triangle: need 0 < a < b");
  if (!(gamma1 > d_config))
    throw InvalidInput("make_triangle: base-angle parameter must exceed the configured d");
  TriangleDomain T;
  T.a = a;
  T.b = b;
  T.gamma1 = gamma1;
  T.k0 = cplx(0.5 * (a + b), T.height() / 3.0);
  return T;
}

cplx choose_probe(const SourceSpec& f, const TriangleDomain& T, const SphereGrid& grid,
                  double threshold) {
  const int nx = 25, ny = 12;
  double best = -1;
  cplx best_k = T.k0;
  for (int i = 1; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) {
      const cplx k(T.a + (T.b - T.a) * i / nx, T.height() * j / ny);
      if (!T.contains(k)) continue;
      SphericalField A = free_amplitude(f, k, grid);
      double score = std::numeric_limits<double>::infinity();
      for (const cplx& v : A.values) score = std::min(score, std::abs(v));
      if (score > best) {
        best = score;
        best_k = k;
      }
    }
  }
  if (best < threshold)
    throw ConvergenceError("choose_probe: free amplitude stays below the probe threshold", best);
  return best_k;
}

std::vector<std::size_t> HarmonicMeasure::base_segments() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edge.size(); ++i)
    if (edge[i] == 0) out.push_back(i);
  return out;
}

HarmonicMeasure harmonic_measure_triangle(const TriangleDomain& T, double h) {
  if (!(h > 0)) throw InvalidInput("harmonic_measure_triangle: requires h > 0");
  if (!T.contains(T.k0)) throw InvalidInput("harmonic_measure_triangle: probe outside the domain");

  const double a = T.a, b = T.b;
  const double tan_t = std::tan(T.base_angle());
  const double sin_t = std::sin(T.base_angle());
  const double cos_t = std::cos(T.base_angle());
  const double H = T.height();
  const double Lb = b - a;
  const double Ls = T.side_length();

  const int Nx = std::max(16, static_cast<int>(std::lround(Lb / h)));
  const double hs = Lb / Nx;  // square lattice spacing, snapped to the base
  const int Jmax = static_cast<int>(std::floor(H / hs));

  const int n_side = std::max(1, static_cast<int>(std::lround(Ls / hs)));
  const double side_len = Ls / n_side;
  const int n_seg = Nx + 2 * n_side;
  if (n_seg < 200)
    throw InvalidInput("harmonic_measure_triangle: fewer than 200 boundary segments; shrink h");

  auto interior = [&](int i, int j) {
    if (i <= 0 || i >= Nx || j <= 0 || j > Jmax) return false;
    const double x = a + i * hs, y = j * hs;
    return y < (x - a) * tan_t && y < (b - x) * tan_t;
  };

  std::vector<int> id(static_cast<std::size_t>(Nx + 1) * (Jmax + 1), -1);
  auto nid = [&](int i, int j) -> int& { return id[static_cast<std::size_t>(j) * (Nx + 1) + i]; };
  int n_int = 0;
  for (int j = 1; j <= Jmax; ++j)
    for (int i = 1; i < Nx; ++i)
      if (interior(i, j)) nid(i, j) = n_int++;
  if (n_int == 0) throw InvalidInput("harmonic_measure_triangle: no interior lattice nodes");

  // boundary crossing -> segment index
  auto right_seg = [&](double y) {  // arc distance from (b, 0) is y / sin
    return Nx + std::clamp(static_cast<int>(std::floor(y / sin_t / side_len)), 0, n_side - 1);
  };
  auto left_seg = [&](double y) {  // measured from the apex downward
    const double w = Ls - y / sin_t;
    return Nx + n_side + std::clamp(static_cast<int>(std::floor(w / side_len)), 0, n_side - 1);
  };

  std::vector<Eigen::Triplet<double>> at_trip;  // transposed system, filled directly
  Eigen::SparseMatrix<double> Bmat(n_int, n_seg);
  std::vector<Eigen::Triplet<double>> b_trip;

  const double d_floor = 1e-9 * hs;
  for (int j = 1; j <= Jmax; ++j) {
    for (int i = 1; i < Nx; ++i) {
      const int row = nid(i, j);
      if (row < 0) continue;
      const double x = a + i * hs, y = j * hs;

      // legs east/west/north/south: distance plus either the neighbor row or
      // the boundary segment hit; a crossing that lands on a segment junction
      // is split evenly so the mirror symmetry of the triangle survives
      // discretization
      double dE = hs, dW = hs, dN = hs, dS = hs;
      int nId_E = -1, nId_W = -1, nId_N = -1, nId_S = -1;
      int seg_E = -1, seg_W = -1, seg_N = -1, seg_S = -1;
      int seg2_N = -1, seg2_S = -1;

      if (interior(i + 1, j)) {
        nId_E = nid(i + 1, j);
      } else {
        dE = std::max(d_floor, (b - y / tan_t) - x);
        seg_E = right_seg(y);
      }
      if (interior(i - 1, j)) {
        nId_W = nid(i - 1, j);
      } else {
        dW = std::max(d_floor, x - (a + y / tan_t));
        seg_W = left_seg(y);
      }
      if (j > 1 && interior(i, j - 1)) {
        nId_S = nid(i, j - 1);
      } else {
        // the lattice is snapped to the base, so the downward crossing from
        // column i hits the junction between base segments i-1 and i exactly
        seg_S = i - 1;
        seg2_S = i;
      }
      if (interior(i, j + 1)) {
        nId_N = nid(i, j + 1);
      } else {
        const double yL = (x - a) * tan_t, yR = (b - x) * tan_t;
        const double yc = std::min(yL, yR);
        dN = std::max(d_floor, yc - y);
        if (std::abs(yL - yR) <= d_floor) {
          // center column: the crossing is the apex shared by both sides
          seg_N = left_seg(yc);
          seg2_N = right_seg(yc);
        } else {
          seg_N = yL < yR ? left_seg(yc) : right_seg(yc);
        }
      }

      const double cE = 2.0 / (dE * (dE + dW)), cW = 2.0 / (dW * (dE + dW));
      const double cN = 2.0 / (dN * (dN + dS)), cS = 2.0 / (dS * (dN + dS));
      at_trip.emplace_back(row, row, cE + cW + cN + cS);
      auto couple = [&](int nbr, int seg, int seg2, double c) {
        if (nbr >= 0) {
          at_trip.emplace_back(nbr, row, -c);  // transposed entry
        } else if (seg2 >= 0) {
          b_trip.emplace_back(row, seg, 0.5 * c);
          b_trip.emplace_back(row, seg2, 0.5 * c);
        } else {
          b_trip.emplace_back(row, seg, c);
        }
      };
      couple(nId_E, seg_E, -1, cE);
      couple(nId_W, seg_W, -1, cW);
      couple(nId_N, seg_N, seg2_N, cN);
      couple(nId_S, seg_S, seg2_S, cS);
    }
  }

  Eigen::SparseMatrix<double> AT(n_int, n_int);
  AT.setFromTriplets(at_trip.begin(), at_trip.end());
  Bmat.setFromTriplets(b_trip.begin(), b_trip.end());

  // probe row: nearest interior lattice node
  int probe_row = -1;
  double probe_dist = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= Jmax; ++j) {
    for (int i = 1; i < Nx; ++i) {
      if (nid(i, j) < 0) continue;
      const double d = std::abs(cplx(a + i * hs, j * hs) - T.k0);
      if (d < probe_dist) {
        probe_dist = d;
        probe_row = nid(i, j);
      }
    }
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(AT);
  if (lu.info() != Eigen::Success)
    throw ConvergenceError("harmonic_measure_triangle: sparse factorization failed", 0.0);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_int);
  e[probe_row] = 1.0;
  Eigen::VectorXd g = lu.solve(e);
  if (lu.info() != Eigen::Success)
    throw ConvergenceError("harmonic_measure_triangle: sparse solve failed", 0.0);
  Eigen::VectorXd omega = Bmat.transpose() * g;

  HarmonicMeasure hm;
  hm.s.resize(n_seg);
  hm.x.resize(n_seg);
  hm.y.resize(n_seg);
  hm.edge.resize(n_seg);
  hm.length.resize(n_seg);
  hm.mass.resize(n_seg);
  for (int i = 0; i < Nx; ++i) {
    hm.s[i] = (i + 0.5) * hs;
    hm.x[i] = a + (i + 0.5) * hs;
    hm.y[i] = 0;
    hm.edge[i] = 0;
    hm.length[i] = hs;
  }
  for (int i = 0; i < n_side; ++i) {
    const double u = (i + 0.5) * side_len;  // from (b, 0) toward the apex
    const int idx = Nx + i;
    hm.s[idx] = Lb + u;
    hm.x[idx] = b - u * cos_t;
    hm.y[idx] = u * sin_t;
    hm.edge[idx] = 1;
    hm.length[idx] = side_len;
  }
  for (int i = 0; i < n_side; ++i) {
    const double w = (i + 0.5) * side_len;  // from the apex toward (a, 0)
    const int idx = Nx + n_side + i;
    hm.s[idx] = Lb + Ls + w;
    hm.x[idx] = a + (Ls - w) * cos_t;
    hm.y[idx] = (Ls - w) * sin_t;
    hm.edge[idx] = 2;
    hm.length[idx] = side_len;
  }
  double total = 0;
  for (int i = 0; i < n_seg; ++i) {
    hm.mass[i] = std::max(0.0, omega[i]);
    total += hm.mass[i];
  }
  hm.raw_mass = total;
  if (!(total > 0))
    throw ConvergenceError("harmonic_measure_triangle: degenerate measure", total);
  for (double& m : hm.mass) m /= total;
  return hm;
}

double log_wkb_magnitude(const SparsePotential& pot, double s) {
  if (pot.layers.empty()) return 0.0;
  if (pot.symmetric()) return -wkb_exponent_symmetric(pot, cplx(s, 0.0)).real();
  static const SphereGrid grid = build_grid(12);
  SphericalField w = wkb_factor(pot, cplx(s, 0.0), grid);
  if (w.values.empty()) w.synthesize();
  double acc = 0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    acc += grid.weights[i] * std::log(std::abs(w.values[i]));
  return acc / (4 * PI);
}

double j1_inner_3d(const LayerSpec& layer, double s, const SphereGrid& grid, int radial_nodes) {
  if (!(s > 0)) throw InvalidInput("j1_inner_3d: requires s > 0");
  double acc = 0;
  for (const VolumeCell& cell : shell_cells(layer, grid, radial_nodes)) {
    const double r = cell.pos.norm();
    acc += cell.weight * std::sin(2 * s * r) / (s * r * r) * layer.evaluate(cell.pos);
  }
  return acc;
}

double j1_inner_1d(const LayerSpec& layer, double s) {
  if (!(s > 0)) throw InvalidInput("j1_inner_1d: requires s > 0");
  if (!layer.symmetric()) throw InvalidInput("j1_inner_1d: layer must be symmetric");
  GaussRule rule = gauss_on(32, layer.inner_radius, layer.outer_radius());
  double acc = 0;
  for (std::size_t i = 0; i < rule.x.size(); ++i)
    acc += rule.w[i] * layer.radial_value(rule.x[i]) * std::sin(2 * s * rule.x[i]) / s;
  return 4 * PI * acc;
}

double wkb_shape_integral(const SparsePotential& pot) {
  double acc = 0;
  for (const LayerSpec& layer : pot.layers) {
    if (layer.symmetric()) {
      GaussRule rule = gauss_on(32, layer.inner_radius, layer.outer_radius());
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double r = rule.x[i];
        acc += rule.w[i] * 4 * PI * std::abs(layer.radial_value(r)) *
               std::pow(1 + r * r, -1.5) * r * r;
      }
    } else {
      static const SphereGrid grid = build_grid(12);
      for (const VolumeCell& cell : shell_cells(layer, grid, 8)) {
        const double r2 = dot(cell.pos, cell.pos);
        acc += cell.weight * std::abs(layer.evaluate(cell.pos)) * std::pow(1 + r2, -1.5);
      }
    }
  }
  return acc;
}

J1Result entropy_J1(const SparsePotential& pot, const HarmonicMeasure& omega) {
  J1Result res;
  for (std::size_t i : omega.base_segments())
    res.value += omega.mass[i] * log_wkb_magnitude(pot, omega.x[i]);
  res.shape = wkb_shape_integral(pot);
  res.fitted_C = res.shape > 0 ? std::abs(res.value) / res.shape : 0.0;
  return res;
}

namespace {

// theta average of ln|field| over the sphere; -inf when the field degenerates
double avg_log_abs(const SphericalField& f, double vanish_tol, bool* ok) {
  SphericalField g = f;
  if (g.values.empty()) g.synthesize();
  double acc = 0;
  for (int i = 0; i < g.grid->n_nodes(); ++i) {
    const double m = std::abs(g.values[i]);
    if (!(m > vanish_tol)) {
      *ok = false;
      return -std::numeric_limits<double>::infinity();
    }
    acc += g.grid->weights[i] * std::log(m);
  }
  return acc / (4 * PI);
}

}  // namespace

J2Result entropy_J2(const std::vector<ProbeAmplitude>& probes,
                    const SphericalField& reduced_at_k0, double vanish_tol) {
  J2Result res;
  SphericalField center = reduced_at_k0;
  if (center.values.empty()) center.synthesize();
  res.center_min_abs = std::numeric_limits<double>::infinity();
  for (const cplx& v : center.values) res.center_min_abs = std::min(res.center_min_abs, std::abs(v));
  if (!(res.center_min_abs > vanish_tol)) res.certificate_ok = false;

  double center_avg = avg_log_abs(center, vanish_tol, &res.certificate_ok);
  for (const ProbeAmplitude& p : probes) {
    bool ok = true;
    const double term = p.weight * avg_log_abs(p.reduced, vanish_tol, &ok);
    if (!ok) res.certificate_ok = false;
    if (p.on_base)
      res.value += term;
    else
      res.side_integral += term;
  }
  res.chain_lower = center_avg - res.side_integral;
  if (!res.certificate_ok) res.value = -std::numeric_limits<double>::infinity();
  return res;
}

EntropySummary entropy_lower_bound(const SparsePotential& pot, const SourceSpec& f,
                                   const TriangleDomain& T, int n_max, double grid_h) {
  if (!pot.symmetric())
    throw InvalidInput("entropy_lower_bound: requires a symmetric potential");
  if (!f.radial()) throw InvalidInput("entropy_lower_bound: requires a radial source");
  if (n_max < 0) throw InvalidInput("entropy_lower_bound: n_max < 0");

  const double h = grid_h > 0 ? grid_h : (T.b - T.a) / 400.0;
  HarmonicMeasure omega = harmonic_measure_triangle(T, h);

  EntropySummary summary;
  summary.k0 = T.k0;
  summary.measure_raw_mass = omega.raw_mass;
  summary.threshold = -100.0;  // fixed floor for the uniform-in-n statement
  summary.min_lhs = std::numeric_limits<double>::infinity();

  const int count = std::min<int>(n_max, static_cast<int>(pot.layers.size()));
  const std::vector<std::size_t> base = omega.base_segments();
  for (int n = 0; n <= count; ++n) {
    const SparsePotential pot_n = head(pot, n);
    EntropyReport rep;
    rep.n = n;
    bool degenerate = false;
    double j2 = 0, lhs = 0;
    for (std::size_t i : base) {
      const double s = omega.x[i];
      const cplx A = radial_amplitude_oracle(f, pot_n, cplx(s, 0.0));
      const double absA = std::abs(A);
      if (!(absA > 0)) {
        degenerate = true;
        break;
      }
      const double ln_wkb = log_wkb_magnitude(pot_n, s);
      lhs += omega.mass[i] * std::log(4 * s * absA * absA);
      j2 += omega.mass[i] * (std::log(absA) - ln_wkb);
    }
    rep.J1 = entropy_J1(pot_n, omega).value;
    if (degenerate) {
      rep.J2 = -std::numeric_limits<double>::infinity();
      rep.lhs = -std::numeric_limits<double>::infinity();
      rep.jensen_ok = false;
    } else {
      rep.J2 = j2;
      rep.lhs = lhs;
      rep.jensen_ok = lhs >= 2 * (rep.J1 + rep.J2) - 1e-9 * std::max(1.0, std::abs(lhs));
    }
    summary.min_lhs = std::min(summary.min_lhs, rep.lhs);
    summary.reports.push_back(rep);
  }
  summary.uniform_ok = summary.min_lhs > summary.threshold;
  return summary;
}

}  // namespace spw
