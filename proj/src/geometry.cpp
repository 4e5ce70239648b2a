#include "geoflow/geometry.hpp"

#include <cmath>

#include "geoflow/errors.hpp"
#include "stencil.hpp"

namespace geoflow {
namespace detail {

namespace {

AxisStencil make(std::initializer_list<std::pair<int, double>> taps, double scale) {
  AxisStencil s;
  for (const auto& [off, w] : taps) {
    s.offset[static_cast<std::size_t>(s.count)] = off;
    s.weight[static_cast<std::size_t>(s.count)] = w * scale;
    ++s.count;
  }
  return s;
}

NodeStencil centered(StencilOrder order, double h) {
  NodeStencil ns;
  if (order == StencilOrder::fourth) {
    ns.first = make({{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}}, 1.0 / h);
    ns.second = make(
        {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {0, -30.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}},
        1.0 / (h * h));
  } else {
    ns.first = make({{-1, -0.5}, {1, 0.5}}, 1.0 / h);
    ns.second = make({{-1, 1.0}, {0, -2.0}, {1, 1.0}}, 1.0 / (h * h));
  }
  return ns;
}

}  // namespace

StencilTable::StencilTable(const ParamGrid& grid, StencilOrder order) : grid_(grid) {
  for (int a = 0; a < grid.n; ++a) {
    const double h = grid.spacing(a);
    if (grid.periodic[a]) {
      nodes_[a].push_back(centered(order, h));
      continue;
    }
    const int d = grid.dims[a];
    nodes_[a].resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      NodeStencil ns;
      if (i == 0) {
        ns.first = make({{0, -1.5}, {1, 2.0}, {2, -0.5}}, 1.0 / h);
        ns.second = make({{0, 2.0}, {1, -5.0}, {2, 4.0}, {3, -1.0}}, 1.0 / (h * h));
      } else if (i == d - 1) {
        ns.first = make({{0, 1.5}, {-1, -2.0}, {-2, 0.5}}, 1.0 / h);
        ns.second = make({{0, 2.0}, {-1, -5.0}, {-2, 4.0}, {-3, -1.0}}, 1.0 / (h * h));
      } else {
        ns = centered(StencilOrder::second, h);
      }
      nodes_[a][static_cast<std::size_t>(i)] = ns;
    }
  }
}

void point_derivatives(const StencilTable& st, const FieldView& f, std::size_t p, Derivs& d) {
  const ParamGrid& grid = st.grid();
  const int n = grid.n;
  const int C = f.comps;
  const int d0 = grid.dims[0];
  const int d1 = grid.dim(1);
  const int i0 = static_cast<int>(p / static_cast<std::size_t>(d1));
  const int i1 = static_cast<int>(p % static_cast<std::size_t>(d1));
  const double* base = f.data + p * static_cast<std::size_t>(C);

  // Difference F(j0, j1) - F(i0, i1), unwrapping periodic crossings.
  auto accumulate = [&](int o0, int o1, double w, double* out) {
    int j0 = i0 + o0;
    int j1 = i1 + o1;
    int w0 = 0;
    int w1 = 0;
    if (j0 < 0) {
      j0 += d0;
      w0 = -1;
    } else if (j0 >= d0) {
      j0 -= d0;
      w0 = 1;
    }
    if (j1 < 0) {
      j1 += d1;
      w1 = -1;
    } else if (j1 >= d1) {
      j1 -= d1;
      w1 = 1;
    }
    const double* q = f.data + (static_cast<std::size_t>(j0) * static_cast<std::size_t>(d1) +
                                static_cast<std::size_t>(j1)) *
                                   static_cast<std::size_t>(C);
    for (int c = 0; c < C; ++c) {
      double diff = q[c] - base[c];
      if (w0 != 0 && f.lift0 != nullptr) diff += w0 * f.lift0[c];
      if (w1 != 0 && f.lift1 != nullptr) diff += w1 * f.lift1[c];
      out[c] += w * diff;
    }
  };

  for (auto& v : d.first) v.fill(0.0);
  for (auto& v : d.second) v.fill(0.0);

  const NodeStencil& s0 = st.at(0, i0);
  for (int k = 0; k < s0.first.count; ++k) {
    accumulate(s0.first.offset[k], 0, s0.first.weight[k], d.first[0].data());
  }
  for (int k = 0; k < s0.second.count; ++k) {
    if (s0.second.offset[k] == 0) continue;
    accumulate(s0.second.offset[k], 0, s0.second.weight[k], d.second[0].data());
  }
  if (n == 2) {
    const NodeStencil& s1 = st.at(1, i1);
    for (int k = 0; k < s1.first.count; ++k) {
      accumulate(0, s1.first.offset[k], s1.first.weight[k], d.first[1].data());
    }
    for (int k = 0; k < s1.second.count; ++k) {
      if (s1.second.offset[k] == 0) continue;
      accumulate(0, s1.second.offset[k], s1.second.weight[k], d.second[2].data());
    }
    for (int a = 0; a < s0.first.count; ++a) {
      for (int b = 0; b < s1.first.count; ++b) {
        accumulate(s0.first.offset[a], s1.first.offset[b],
                   s0.first.weight[a] * s1.first.weight[b], d.second[1].data());
      }
    }
  }
}

void point_metric(int n, int N, const Derivs& d, PointMetric& m) {
  auto dot = [N](const double* a, const double* b) {
    double s = 0.0;
    for (int c = 0; c < N; ++c) s += a[c] * b[c];
    return s;
  };
  const double* T0 = d.first[0].data();
  if (n == 1) {
    m.g[0] = dot(T0, T0);
    m.g[1] = 0.0;
    m.g[2] = 0.0;
    m.det = m.g[0];
    m.ginv[0] = 1.0 / m.g[0];
    m.ginv[1] = 0.0;
    m.ginv[2] = 0.0;
    return;
  }
  const double* T1 = d.first[1].data();
  m.g[0] = dot(T0, T0);
  m.g[1] = dot(T0, T1);
  m.g[2] = dot(T1, T1);
  m.det = m.g[0] * m.g[2] - m.g[1] * m.g[1];
  m.ginv[0] = m.g[2] / m.det;
  m.ginv[1] = -m.g[1] / m.det;
  m.ginv[2] = m.g[0] / m.det;
}

void project_normal(int n, int N, const Derivs& d, const PointMetric& m, double* v) {
  double coef[2] = {0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < N; ++c) coef[k] += v[c] * d.first[k][c];
  }
  for (int l = 0; l < n; ++l) {
    double t = 0.0;
    for (int k = 0; k < n; ++k) t += coef[k] * packed(m.ginv, k, l);
    for (int c = 0; c < N; ++c) v[c] -= t * d.first[l][c];
  }
}

std::size_t first_degenerate(const std::vector<double>& det) {
  for (std::size_t p = 0; p < det.size(); ++p) {
    if (!(det[p] > kDegenerateMetricThreshold)) return p;
  }
  return npos;
}

void mean_curvature_kernel(const Immersion& imm, const GeometryOptions& opts,
                           std::vector<double>& H, std::vector<double>* tangents) {
  const StencilTable st(imm.grid, opts.order);
  const FieldView f = view_of(imm);
  const int n = imm.grid.n;
  const int N = imm.ambient_dim;
  const std::size_t P = imm.num_points();
  const auto Nz = static_cast<std::size_t>(N);
  H.assign(P * Nz, 0.0);
  if (tangents != nullptr) tangents->assign(P * static_cast<std::size_t>(n) * Nz, 0.0);
  std::vector<double> det(P, 0.0);

  for_each_index(opts.exec, P, [&](std::size_t p) {
    Derivs d;
    point_derivatives(st, f, p, d);
    PointMetric m;
    point_metric(n, N, d, m);
    det[p] = m.det;
    if (!(m.det > kDegenerateMetricThreshold)) return;
    double* h = H.data() + p * Nz;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double w = packed(m.ginv, i, j);
        const double* D = d.second[static_cast<std::size_t>(sym_index(i, j))].data();
        for (int c = 0; c < N; ++c) h[c] += w * D[c];
      }
    }
    project_normal(n, N, d, m, h);
    if (tangents != nullptr) {
      for (int i = 0; i < n; ++i) {
        double* t = tangents->data() + (p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) * Nz;
        for (int c = 0; c < N; ++c) t[c] = d.first[static_cast<std::size_t>(i)][c];
      }
    }
  });

  if (const std::size_t bad = first_degenerate(det); bad != npos) {
    throw DegenerateMetricError(bad, det[bad]);
  }
}

}  // namespace detail

using detail::Derivs;
using detail::PointMetric;

MetricFields induced_metric(const Immersion& imm, const GeometryOptions& opts) {
  const detail::StencilTable st(imm.grid, opts.order);
  const detail::FieldView f = detail::view_of(imm);
  const int n = imm.grid.n;
  const int N = imm.ambient_dim;
  const std::size_t P = imm.num_points();
  MetricFields out;
  out.n = n;
  out.points = P;
  out.metric.assign(3 * P, 0.0);
  out.metric_inv.assign(3 * P, 0.0);
  out.sqrt_det_g.assign(P, 0.0);
  std::vector<double> det(P, 0.0);

  for_each_index(opts.exec, P, [&](std::size_t p) {
    Derivs d;
    detail::point_derivatives(st, f, p, d);
    PointMetric m;
    detail::point_metric(n, N, d, m);
    det[p] = m.det;
    for (int k = 0; k < 3; ++k) {
      out.metric[3 * p + static_cast<std::size_t>(k)] = m.g[k];
      out.metric_inv[3 * p + static_cast<std::size_t>(k)] = m.ginv[k];
    }
    out.sqrt_det_g[p] = m.det > 0.0 ? std::sqrt(m.det) : 0.0;
  });

  if (const std::size_t bad = detail::first_degenerate(det); bad != detail::npos) {
    throw DegenerateMetricError(bad, det[bad]);
  }
  return out;
}

std::vector<double> normal_project(const Immersion& imm, std::size_t point,
                                   std::span<const double> v, const GeometryOptions& opts) {
  if (point >= imm.num_points()) throw ArgumentError("point index out of range");
  if (v.size() != static_cast<std::size_t>(imm.ambient_dim)) {
    throw ArgumentError("vector dimension does not match the ambient dimension");
  }
  const detail::StencilTable st(imm.grid, opts.order);
  Derivs d;
  detail::point_derivatives(st, detail::view_of(imm), point, d);
  PointMetric m;
  detail::point_metric(imm.grid.n, imm.ambient_dim, d, m);
  if (!(m.det > kDegenerateMetricThreshold)) throw DegenerateMetricError(point, m.det);
  std::vector<double> out(v.begin(), v.end());
  detail::project_normal(imm.grid.n, imm.ambient_dim, d, m, out.data());
  return out;
}

GeometryFields geometry_fields(const Immersion& imm, const GeometryOptions& opts) {
  const detail::StencilTable st(imm.grid, opts.order);
  const detail::FieldView f = detail::view_of(imm);
  const int n = imm.grid.n;
  const int N = imm.ambient_dim;
  const auto Nz = static_cast<std::size_t>(N);
  const auto nz = static_cast<std::size_t>(n);
  const std::size_t P = imm.num_points();

  GeometryFields out;
  out.n = n;
  out.ambient_dim = N;
  out.points = P;
  out.tangent.assign(P * nz * Nz, 0.0);
  out.metric.assign(3 * P, 0.0);
  out.metric_inv.assign(3 * P, 0.0);
  out.sqrt_det_g.assign(P, 0.0);
  out.second_form.assign(3 * P * Nz, 0.0);
  out.mean_curvature.assign(P * Nz, 0.0);
  out.norm2_II.assign(P, 0.0);
  out.norm2_H.assign(P, 0.0);
  out.christoffel_trace.assign(P * nz, 0.0);
  std::vector<double> det(P, 0.0);

  for_each_index(opts.exec, P, [&](std::size_t p) {
    Derivs d;
    detail::point_derivatives(st, f, p, d);
    PointMetric m;
    detail::point_metric(n, N, d, m);
    det[p] = m.det;
    if (!(m.det > kDegenerateMetricThreshold)) return;

    for (std::size_t i = 0; i < nz; ++i) {
      double* t = out.tangent.data() + (p * nz + i) * Nz;
      for (int c = 0; c < N; ++c) t[c] = d.first[i][c];
    }
    for (int k = 0; k < 3; ++k) {
      out.metric[3 * p + static_cast<std::size_t>(k)] = m.g[k];
      out.metric_inv[3 * p + static_cast<std::size_t>(k)] = m.ginv[k];
    }
    out.sqrt_det_g[p] = std::sqrt(m.det);

    // Tangential part of g^ij d_ij F, expressed in the coordinate basis.
    double trace[kMaxAmbientDim] = {};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double w = detail::packed(m.ginv, i, j);
        const double* D = d.second[static_cast<std::size_t>(sym_index(i, j))].data();
        for (int c = 0; c < N; ++c) trace[c] += w * D[c];
      }
    }
    for (int k = 0; k < n; ++k) {
      double gamma = 0.0;
      for (int l = 0; l < n; ++l) {
        double c_l = 0.0;
        for (int c = 0; c < N; ++c) c_l += trace[c] * d.first[static_cast<std::size_t>(l)][c];
        gamma += detail::packed(m.ginv, k, l) * c_l;
      }
      out.christoffel_trace[p * nz + static_cast<std::size_t>(k)] = gamma;
    }

    const int pairs = n == 1 ? 1 : 3;
    for (int s = 0; s < pairs; ++s) {
      double* ii = out.second_form.data() + (3 * p + static_cast<std::size_t>(s)) * Nz;
      for (int c = 0; c < N; ++c) ii[c] = d.second[static_cast<std::size_t>(s)][c];
      detail::project_normal(n, N, d, m, ii);
    }

    double* h = out.mean_curvature.data() + p * Nz;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double w = detail::packed(m.ginv, i, j);
        const double* ii = out.second_form.data() + (3 * p + static_cast<std::size_t>(sym_index(i, j))) * Nz;
        for (int c = 0; c < N; ++c) h[c] += w * ii[c];
      }
    }

    double norm2_II = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double* a = out.second_form.data() + (3 * p + static_cast<std::size_t>(sym_index(i, j))) * Nz;
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            const double* b = out.second_form.data() + (3 * p + static_cast<std::size_t>(sym_index(k, l))) * Nz;
            double ab = 0.0;
            for (int c = 0; c < N; ++c) ab += a[c] * b[c];
            norm2_II += detail::packed(m.ginv, i, k) * detail::packed(m.ginv, j, l) * ab;
          }
        }
      }
    }
    out.norm2_II[p] = norm2_II;
    double norm2_H = 0.0;
    for (int c = 0; c < N; ++c) norm2_H += h[c] * h[c];
    out.norm2_H[p] = norm2_H;
  });

  if (const std::size_t bad = detail::first_degenerate(det); bad != detail::npos) {
    throw DegenerateMetricError(bad, det[bad]);
  }
  return out;
}

std::vector<double> mean_curvature_field(const Immersion& imm, const GeometryOptions& opts) {
  std::vector<double> H;
  detail::mean_curvature_kernel(imm, opts, H, nullptr);
  return H;
}

double integrate(const ParamGrid& grid, std::span<const double> sqrt_det_g,
                 std::span<const double> values) {
  if (sqrt_det_g.size() != grid.size() || values.size() != grid.size()) {
    throw ArgumentError("integrand size does not match the grid");
  }
  double sum = 0.0;
  if (grid.all_periodic()) {
    for (std::size_t p = 0; p < values.size(); ++p) sum += values[p] * sqrt_det_g[p];
  } else {
    for (std::size_t p = 0; p < values.size(); ++p) {
      sum += values[p] * sqrt_det_g[p] * grid.quadrature_weight(p);
    }
  }
  return sum * grid.cell_volume();
}

double volume(const Immersion& imm, const GeometryOptions& opts) {
  const MetricFields m = induced_metric(imm, opts);
  const std::vector<double> ones(m.points, 1.0);
  return integrate(imm.grid, m.sqrt_det_g, ones);
}

std::vector<double> parameter_gradient(const ParamGrid& grid, std::span<const double> field,
                                       const GeometryOptions& opts) {
  if (field.size() != grid.size()) throw ArgumentError("field size does not match the grid");
  const detail::StencilTable st(grid, opts.order);
  const detail::FieldView f{field.data(), 1, nullptr, nullptr};
  const auto nz = static_cast<std::size_t>(grid.n);
  std::vector<double> out(grid.size() * nz, 0.0);
  for_each_index(opts.exec, grid.size(), [&](std::size_t p) {
    Derivs d;
    detail::point_derivatives(st, f, p, d);
    for (std::size_t k = 0; k < nz; ++k) out[p * nz + k] = d.first[k][0];
  });
  return out;
}

std::vector<double> laplace_beltrami(const Immersion& imm, const GeometryFields& geom,
                                     std::span<const double> field, const GeometryOptions& opts) {
  const ParamGrid& grid = imm.grid;
  if (field.size() != grid.size() || geom.points != grid.size()) {
    throw ArgumentError("field size does not match the grid");
  }
  const detail::StencilTable st(grid, opts.order);
  const detail::FieldView f{field.data(), 1, nullptr, nullptr};
  const int n = grid.n;
  const auto nz = static_cast<std::size_t>(n);
  std::vector<double> out(grid.size(), 0.0);
  for_each_index(opts.exec, grid.size(), [&](std::size_t p) {
    Derivs d;
    detail::point_derivatives(st, f, p, d);
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        v += geom.g_inv(p, i, j) * d.second[static_cast<std::size_t>(sym_index(i, j))][0];
      }
    }
    for (std::size_t k = 0; k < nz; ++k) v -= geom.christoffel_trace[p * nz + k] * d.first[k][0];
    out[p] = v;
  });
  return out;
}

}  // namespace geoflow
