#pragma once

#include <array>
#include <span>
#include <vector>

#include "geoflow/geometry.hpp"
#include "geoflow/immersion.hpp"
#include "geoflow/torus_map.hpp"
#include "geoflow/track.hpp"

namespace geoflow {

/// Constant 4x4 matrix, row-major.
using Mat4 = std::array<double, 16>;

/// Constant 2-form omega(X, Y) = <J X, Y> on R^4 with its complex structure J.
struct KahlerForm {
  Mat4 omega{};
  Mat4 J{};

  double operator()(std::span<const double> X, std::span<const double> Y) const;
  /// J applied to a 4-vector.
  std::array<double, 4> apply_J(std::span<const double> X) const;
};

/// omega1 lives on coordinates (0, 1), omega2 on (2, 3);
/// omega' = omega1 - omega2 and omega'' = omega1 + omega2.
struct KahlerFormPair {
  KahlerForm prime;
  KahlerForm double_prime;

  static KahlerFormPair standard();
};

/// Lagrangian defects below this are treated as Lagrangian.
inline constexpr double kLagrangianTolerance = 1e-4;
inline constexpr double kSymplecticDetTolerance = 1e-10;

/// eta(p) = omega(dF/dx^0, dF/dx^1) / sqrt(det g) for a 2-dim immersion in R^4.
std::vector<double> hodge_star_form(const GeometryFields& geom, const KahlerForm& omega);
std::vector<double> hodge_star_form(const Immersion& imm, const KahlerForm& omega,
                                    const GeometryOptions& opts = {});

/// 2 / sqrt(2 + |Du|_F^2) for det Du = 1. Throws NonSymplecticJacobianError otherwise.
double eta_from_jacobian(const Mat2& Du);
/// (1 + det Du) / sqrt(1 + |Du|_F^2 + det^2): *omega'' on the graph of any Jacobian.
double eta_general(const Mat2& Du);
/// (1 - det Du) / sqrt(1 + |Du|_F^2 + det^2): *omega' on the graph of any Jacobian.
double eta_prime_general(const Mat2& Du);

/// alpha e^{ct} / sqrt(1 + alpha^2 e^{2ct}). Throws ArgumentError unless alpha > 0.
double eta_lower_bound(double alpha, double c, double t);
/// alpha with alpha / sqrt(1 + alpha^2) = m, for 0 < m <= 1 (infinite at m = 1).
double alpha_from_min_eta(double m);

/// max over points of |H|^2 - (4/3)|II|^2. Throws NotLagrangianError when
/// sup|*omega'| >= 1e-4.
double pinching_check(const GeometryFields& geom);

struct EtaResidual {
  double time = 0.0;
  double residual = 0.0;
};

/// sup over points of |D_t eta - Lap_g eta - eta (2|II|^2 - |H|^2)| at every
/// interior snapshot. D_t is the centered time difference taken along the
/// normal motion: the tangential part of the snapshot-to-snapshot velocity is
/// removed through its transport term.
std::vector<EtaResidual> eta_evolution_residual(const SpaceTimeTrack& track,
                                                const GeometryOptions& opts = {});

struct WeightedEnergy {
  double time = 0.0;
  double weighted = 0.0;  // integral of |H|^2 / eta
  double int_H2 = 0.0;
  double min_eta = 0.0;
};

/// Throws NonpositiveEtaError where eta <= 0.
WeightedEnergy weighted_energy(const GeometryFields& geom, const ParamGrid& grid, double time = 0.0);
std::vector<WeightedEnergy> weighted_energy(const SpaceTimeTrack& track,
                                            const GeometryOptions& opts = {});

/// Integral of |II|^2 - |H|^2 over a closed surface chart (torus topology).
double gauss_bonnet_gap(const Immersion& imm, const GeometryFields& geom);

/// Per-point Jacobian data of a torus map.
struct SymplecticState {
  TorusMap map;
  std::vector<Mat2> jacobian;
  std::vector<double> eta;        // *omega''
  std::vector<double> eta_prime;  // *omega'
  std::vector<double> graph_det;  // det of the first-factor Jacobian / sqrt(det g)
};

/// State with finite-difference Jacobians of x -> A x + u(x).
SymplecticState symplectic_state(const TorusMap& map, const GeometryOptions& opts = {});

struct Shear {
  int axis = 0;  // 0: (x, y) -> (x + a sin(2 pi k y / L1), y); 1: (x, y + a sin(2 pi k x / L0))
  double amplitude = 0.0;
  double frequency = 1.0;
};

/// Composition of exact shears, applied in list order. The Jacobian is the
/// analytic chain-rule product, so det Du = 1 to rounding at every node.
SymplecticState make_area_preserving_map(std::span<const Shear> shears, int dims0, int dims1,
                                         double period0 = 1.0, double period1 = 1.0);

struct LinearityDeviation {
  Mat2 affine;
  double deviation = 0.0;  // sup over points of |Du - A|_F
};

LinearityDeviation linearity_deviation(const SymplecticState& state);

/// C(X, Y, Z) = <II(X, Y), J Z> for parameter-space vectors X, Y, Z at one point.
double cubic_form(const GeometryFields& geom, std::size_t p, const KahlerForm& form,
                  std::span<const double> X, std::span<const double> Y, std::span<const double> Z);

/// Largest |C(sigma(X, Y, Z)) - C(X, Y, Z)| over all permutations sigma.
double cubic_form_asymmetry(const GeometryFields& geom, std::size_t p, const KahlerForm& form,
                            std::span<const double> X, std::span<const double> Y,
                            std::span<const double> Z);

}  // namespace geoflow
