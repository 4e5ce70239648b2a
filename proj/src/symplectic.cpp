#include "geoflow/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "geoflow/errors.hpp"
#include "geoflow/parallel.hpp"

namespace geoflow {

namespace {

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

KahlerForm make_form(double sign2) {
  // J1 e0 = e1, J1 e1 = -e0; J2 acts the same way on (e2, e3) up to sign2.
  KahlerForm f;
  auto J = [&](int r, int c) -> double& { return f.J[static_cast<std::size_t>(4 * r + c)]; };
  J(1, 0) = 1.0;
  J(0, 1) = -1.0;
  J(3, 2) = sign2;
  J(2, 3) = -sign2;
  // omega(X, Y) = <J X, Y> = X^T J^T Y.
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) f.omega[static_cast<std::size_t>(4 * r + c)] = J(c, r);
  }
  return f;
}

void require_surface_in_r4(int n, int N) {
  if (n != 2 || N != 4) throw ArgumentError("symplectic diagnostics need a surface in four dimensions");
}

}  // namespace

double KahlerForm::operator()(std::span<const double> X, std::span<const double> Y) const {
  double s = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) s += X[r] * omega[4 * r + c] * Y[c];
  }
  return s;
}

std::array<double, 4> KahlerForm::apply_J(std::span<const double> X) const {
  std::array<double, 4> out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) out[r] += J[4 * r + c] * X[c];
  }
  return out;
}

KahlerFormPair KahlerFormPair::standard() { return {make_form(-1.0), make_form(1.0)}; }

std::vector<double> hodge_star_form(const GeometryFields& geom, const KahlerForm& omega) {
  require_surface_in_r4(geom.n, geom.ambient_dim);
  std::vector<double> eta(geom.points, 0.0);
  for_each_index(Exec::parallel, geom.points, [&](std::size_t p) {
    eta[p] = omega(geom.tangent_at(p, 0), geom.tangent_at(p, 1)) / geom.sqrt_det_g[p];
  });
  return eta;
}

std::vector<double> hodge_star_form(const Immersion& imm, const KahlerForm& omega,
                                    const GeometryOptions& opts) {
  return hodge_star_form(geometry_fields(imm, opts), omega);
}

double eta_from_jacobian(const Mat2& Du) {
  if (!(std::abs(Du.det() - 1.0) <= kSymplecticDetTolerance)) {
    throw NonSymplecticJacobianError("Jacobian determinant " + std::to_string(Du.det()) +
                                     " is not 1");
  }
  return 2.0 / std::sqrt(2.0 + Du.frobenius2());
}

double eta_general(const Mat2& Du) {
  const double det = Du.det();
  return (1.0 + det) / std::sqrt(1.0 + Du.frobenius2() + det * det);
}

double eta_prime_general(const Mat2& Du) {
  const double det = Du.det();
  return (1.0 - det) / std::sqrt(1.0 + Du.frobenius2() + det * det);
}

double eta_lower_bound(double alpha, double c, double t) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (std::isinf(alpha)) return 1.0;
  const double ae = alpha * std::exp(c * t);
  if (std::isinf(ae)) return 1.0;
  return ae / std::sqrt(1.0 + ae * ae);
}

double alpha_from_min_eta(double m) {
  if (!(m > 0.0 && m <= 1.0)) throw ArgumentError("minimum of eta must lie in (0, 1]");
  if (m == 1.0) return std::numeric_limits<double>::infinity();
  return m / std::sqrt(1.0 - m * m);
}

double pinching_check(const GeometryFields& geom) {
  const auto forms = KahlerFormPair::standard();
  const auto eta_prime = hodge_star_form(geom, forms.prime);
  double defect = 0.0;
  for (double v : eta_prime) defect = std::max(defect, std::abs(v));
  if (!(defect < kLagrangianTolerance)) {
    throw NotLagrangianError("sup|*omega'| = " + std::to_string(defect) + " exceeds 1e-4");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < geom.points; ++p) {
    worst = std::max(worst, geom.norm2_H[p] - (4.0 / 3.0) * geom.norm2_II[p]);
  }
  return worst;
}

std::vector<EtaResidual> eta_evolution_residual(const SpaceTimeTrack& track,
                                                const GeometryOptions& opts) {
  const auto forms = KahlerFormPair::standard();
  std::vector<EtaResidual> out;
  if (track.size() < 3) return out;
  for (std::size_t k = 1; k + 1 < track.size(); ++k) {
    const Snapshot& prev = track[k - 1];
    const Snapshot& cur = track[k];
    const Snapshot& next = track[k + 1];
    const GeometryFields geom = geometry_fields(cur.imm, opts);
    require_surface_in_r4(geom.n, geom.ambient_dim);
    const auto eta_prev = hodge_star_form(prev.imm, forms.double_prime, opts);
    const auto eta_next = hodge_star_form(next.imm, forms.double_prime, opts);
    const auto eta = hodge_star_form(geom, forms.double_prime);
    const auto grad = parameter_gradient(cur.imm.grid, eta, opts);
    const auto lap = laplace_beltrami(cur.imm, geom, eta, opts);
    const double span = next.time - prev.time;

    std::vector<double> res(geom.points, 0.0);
    for_each_index(opts.exec, geom.points, [&](std::size_t p) {
      const auto Fp = prev.imm.point(p);
      const auto Fn = next.imm.point(p);
      double v[4];
      for (std::size_t c = 0; c < 4; ++c) v[c] = (Fn[c] - Fp[c]) / span;
      double vt[2] = {0.0, 0.0};
      for (int i = 0; i < 2; ++i) {
        const auto T = geom.tangent_at(p, i);
        for (std::size_t c = 0; c < 4; ++c) vt[i] += v[c] * T[c];
      }
      double transport = 0.0;
      for (int l = 0; l < 2; ++l) {
        double w = 0.0;
        for (int i = 0; i < 2; ++i) w += geom.g_inv(p, l, i) * vt[i];
        transport += w * grad[2 * p + static_cast<std::size_t>(l)];
      }
      const double dt_eta = (eta_next[p] - eta_prev[p]) / span - transport;
      const double rhs = eta[p] * (2.0 * geom.norm2_II[p] - geom.norm2_H[p]);
      res[p] = std::abs(dt_eta - lap[p] - rhs);
    });
    out.push_back({cur.time, *std::max_element(res.begin(), res.end())});
  }
  return out;
}

WeightedEnergy weighted_energy(const GeometryFields& geom, const ParamGrid& grid, double time) {
  const auto forms = KahlerFormPair::standard();
  const auto eta = hodge_star_form(geom, forms.double_prime);
  WeightedEnergy e;
  e.time = time;
  e.min_eta = *std::min_element(eta.begin(), eta.end());
  if (!(e.min_eta > 0.0)) throw NonpositiveEtaError("eta is not positive everywhere");
  std::vector<double> w(geom.points);
  for (std::size_t p = 0; p < geom.points; ++p) w[p] = geom.norm2_H[p] / eta[p];
  e.weighted = integrate(grid, geom.sqrt_det_g, w);
  e.int_H2 = integrate(grid, geom.sqrt_det_g, geom.norm2_H);
  return e;
}

std::vector<WeightedEnergy> weighted_energy(const SpaceTimeTrack& track,
                                            const GeometryOptions& opts) {
  std::vector<WeightedEnergy> out;
  for (const Snapshot& snap : track) {
    out.push_back(weighted_energy(geometry_fields(snap.imm, opts), snap.imm.grid, snap.time));
  }
  return out;
}

double gauss_bonnet_gap(const Immersion& imm, const GeometryFields& geom) {
  if (imm.grid.n != 2 || !imm.grid.all_periodic()) {
    throw ArgumentError("Gauss-Bonnet gap needs a closed surface chart");
  }
  std::vector<double> d(geom.points);
  for (std::size_t p = 0; p < geom.points; ++p) d[p] = geom.norm2_II[p] - geom.norm2_H[p];
  return integrate(imm.grid, geom.sqrt_det_g, d);
}

SymplecticState symplectic_state(const TorusMap& map, const GeometryOptions& opts) {
  map.validate();
  const std::size_t P = map.grid.size();
  std::vector<double> u0(P), u1(P);
  for (std::size_t p = 0; p < P; ++p) {
    u0[p] = map.displacement[2 * p];
    u1[p] = map.displacement[2 * p + 1];
  }
  const auto g0 = parameter_gradient(map.grid, u0, opts);
  const auto g1 = parameter_gradient(map.grid, u1, opts);
  SymplecticState s;
  s.map = map;
  s.jacobian.resize(P);
  s.eta.resize(P);
  s.eta_prime.resize(P);
  s.graph_det.resize(P);
  for_each_index(opts.exec, P, [&](std::size_t p) {
    const Mat2 Du = map.linear + Mat2{g0[2 * p], g0[2 * p + 1], g1[2 * p], g1[2 * p + 1]};
    const double det = Du.det();
    s.jacobian[p] = Du;
    s.eta[p] = eta_general(Du);
    s.eta_prime[p] = eta_prime_general(Du);
    s.graph_det[p] = 1.0 / std::sqrt(1.0 + Du.frobenius2() + det * det);
  });
  return s;
}

SymplecticState make_area_preserving_map(std::span<const Shear> shears, int dims0, int dims1,
                                         double period0, double period1) {
  for (const Shear& sh : shears) {
    if (sh.axis != 0 && sh.axis != 1) throw ArgumentError("shear axis must be 0 or 1");
    if (!std::isfinite(sh.amplitude) || !std::isfinite(sh.frequency)) {
      throw ArgumentError("shear parameters must be finite");
    }
  }
  SymplecticState s;
  s.map = TorusMap::identity(dims0, dims1, period0, period1);
  const ParamGrid& grid = s.map.grid;
  const std::size_t P = grid.size();
  s.jacobian.resize(P);
  s.eta.resize(P);
  s.eta_prime.resize(P);
  s.graph_det.resize(P);
  const double tau = 2.0 * std::numbers::pi;
  for (int i0 = 0; i0 < grid.dims[0]; ++i0) {
    for (int i1 = 0; i1 < grid.dims[1]; ++i1) {
      const std::size_t p = grid.index(i0, i1);
      const double x0 = grid.coord(0, i0);
      const double x1 = grid.coord(1, i1);
      double q0 = x0, q1 = x1;
      Mat2 J = Mat2::identity();
      for (const Shear& sh : shears) {
        if (sh.axis == 0) {
          const double w = tau * sh.frequency / period1;
          J = mul({1.0, sh.amplitude * w * std::cos(w * q1), 0.0, 1.0}, J);
          q0 += sh.amplitude * std::sin(w * q1);
        } else {
          const double w = tau * sh.frequency / period0;
          J = mul({1.0, 0.0, sh.amplitude * w * std::cos(w * q0), 1.0}, J);
          q1 += sh.amplitude * std::sin(w * q0);
        }
      }
      s.map.displacement[2 * p] = q0 - x0;
      s.map.displacement[2 * p + 1] = q1 - x1;
      const double det = J.det();
      s.jacobian[p] = J;
      s.eta[p] = eta_general(J);
      s.eta_prime[p] = eta_prime_general(J);
      s.graph_det[p] = 1.0 / std::sqrt(1.0 + J.frobenius2() + det * det);
    }
  }
  return s;
}

LinearityDeviation linearity_deviation(const SymplecticState& state) {
  if (state.jacobian.empty()) throw ArgumentError("state has no Jacobian data");
  Mat2 sum{0.0, 0.0, 0.0, 0.0};
  for (const Mat2& J : state.jacobian) sum = sum + J;
  LinearityDeviation out;
  out.affine = sum * (1.0 / static_cast<double>(state.jacobian.size()));
  for (const Mat2& J : state.jacobian) {
    out.deviation = std::max(out.deviation, (J - out.affine).frobenius());
  }
  return out;
}

double cubic_form(const GeometryFields& geom, std::size_t p, const KahlerForm& form,
                  std::span<const double> X, std::span<const double> Y, std::span<const double> Z) {
  require_surface_in_r4(geom.n, geom.ambient_dim);
  double z[4] = {0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const auto T = geom.tangent_at(p, k);
    for (std::size_t c = 0; c < 4; ++c) z[c] += Z[static_cast<std::size_t>(k)] * T[c];
  }
  const auto Jz = form.apply_J(z);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double coef = X[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(j)];
      const auto B = geom.II(p, i, j);
      for (std::size_t c = 0; c < 4; ++c) s += coef * B[c] * Jz[c];
    }
  }
  return s;
}

double cubic_form_asymmetry(const GeometryFields& geom, std::size_t p, const KahlerForm& form,
                            std::span<const double> X, std::span<const double> Y,
                            std::span<const double> Z) {
  const double base = cubic_form(geom, p, form, X, Y, Z);
  const std::span<const double> v[3] = {X, Y, Z};
  int idx[3] = {0, 1, 2};
  double worst = 0.0;
  while (std::next_permutation(idx, idx + 3)) {
    const double c = cubic_form(geom, p, form, v[idx[0]], v[idx[1]], v[idx[2]]);
    worst = std::max(worst, std::abs(c - base));
  }
  return worst;
}

}  // namespace geoflow
