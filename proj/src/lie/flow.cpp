#include <cmath>
#include <limits>

#include "kosmann/lie.hpp"

namespace kosmann {

namespace {

std::array<double, kDim> velocity(const std::array<Expr, kDim>& x, const Point& p) {
  Evaluator ev(p);
  std::array<double, kDim> v;
  for (int k = 0; k < kDim; ++k) v[k] = ev(x[k]).real();
  return v;
}

Point axpy(const Point& p, double h, const std::array<double, kDim>& v) {
  Point out;
  for (int k = 0; k < kDim; ++k) out[k] = p[k] + h * v[k];
  return out;
}

void check_inside(const Point& p, const FlowOptions& opt) {
  if (!opt.box) return;
  // Finite-difference stencils may poke slightly past the box.
  const double slack = 4.0 * opt.fd_step;
  for (int k = 0; k < kDim; ++k) {
    const auto& iv = (*opt.box)[k];
    if (!(p[k] >= iv[0] - slack && p[k] <= iv[1] + slack)) {
      throw FlowError("flow left the sample box in coordinate " + std::to_string(k) + " (value " +
                      std::to_string(p[k]) + ")");
    }
  }
}

using Jacobian = std::array<std::array<double, kDim>, kDim>;

// J[i][j] = d flow^i(p, eps) / d p^j by central differences.
Jacobian flow_jacobian(const std::array<Expr, kDim>& x, const Point& p, double eps, const FlowOptions& opt) {
  Jacobian jac{};
  const double h = opt.fd_step;
  for (int j = 0; j < kDim; ++j) {
    Point a = p, b = p;
    a[j] += h;
    b[j] -= h;
    const Point fa = flow(x, a, eps, opt);
    const Point fb = flow(x, b, eps, opt);
    for (int i = 0; i < kDim; ++i) jac[i][j] = (fa[i] - fb[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace

Point flow(const std::array<Expr, kDim>& x, const Point& p, double eps, const FlowOptions& opt) {
  if (opt.substeps <= 0) throw std::invalid_argument("flow: substeps must be positive");
  const double h = eps / opt.substeps;
  if (eps != 0.0 && std::abs(h) < std::numeric_limits<double>::min()) throw FlowError("integration step underflow");
  Point y = p;
  check_inside(y, opt);
  if (eps == 0.0) return y;
  for (int n = 0; n < opt.substeps; ++n) {
    const auto k1 = velocity(x, y);
    const auto k2 = velocity(x, axpy(y, h / 2, k1));
    const auto k3 = velocity(x, axpy(y, h / 2, k2));
    const auto k4 = velocity(x, axpy(y, h, k3));
    for (int k = 0; k < kDim; ++k) y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    check_inside(y, opt);
  }
  return y;
}

std::vector<Complex> pushed_field(const Field& x, const Field& y, const Point& p, double eps, const FlowOptions& opt) {
  if (!y.type().is_tensorial()) throw std::invalid_argument("flow oracle: spatial fields only");
  if (x.frame() != y.frame()) throw std::invalid_argument("flow oracle: X and Y must share the coordinate frame");
  const auto xc = components(x);
  // p plays the role of the image point; its preimage lies at parameter -eps.
  const Point pre = flow(xc, p, -eps, opt);
  const Jacobian forward = flow_jacobian(xc, pre, eps, opt);  // acts on upper indices
  const Jacobian backward = flow_jacobian(xc, p, -eps, opt);  // acts on lower indices

  Evaluator ev(pre);
  std::vector<Complex> values = evaluate(y, ev);
  const auto& slots = y.slots();
  std::vector<int> idx(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    std::vector<Complex> next(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) {
      y.unflatten(n, idx);
      const std::size_t base = n - static_cast<std::size_t>(idx[s]) * y.stride(s);
      Complex acc = 0.0;
      for (int h = 0; h < kDim; ++h) {
        const double m = slots[s] == Slot::SpatialUp ? forward[idx[s]][h] : backward[h][idx[s]];
        acc += m * values[base + static_cast<std::size_t>(h) * y.stride(s)];
      }
      next[n] = acc;
    }
    values = std::move(next);
  }
  return values;
}

std::vector<Complex> flow_oracle_lie(const Field& x, const Field& y, const Point& p, double eps,
                                     const FlowOptions& opt) {
  if (eps <= 0.0) throw std::invalid_argument("flow oracle: eps must be positive");
  const auto plus = pushed_field(x, y, p, eps, opt);
  const auto minus = pushed_field(x, y, p, -eps, opt);
  std::vector<Complex> out(plus.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = -(plus[n] - minus[n]) / (2.0 * eps);
  return out;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(std::max(y[k], std::numeric_limits<double>::min()));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport oracle_convergence(const Field& x, const Field& y, const std::vector<Point>& points,
                                     const std::vector<double>& eps_list, const FlowOptions& opt) {
  const Frame holonomic = Frame::holonomic(y.frame());
  const Field formula = lie_derivative_holonomic(x, y, holonomic);
  ConvergenceReport report;
  report.eps = eps_list;
  report.error.assign(eps_list.size(), 0.0);
  std::vector<std::vector<Complex>> reference;
  for (const Point& p : points) {
    Evaluator ev(p);
    reference.push_back(evaluate(formula, ev));
  }
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    for (std::size_t q = 0; q < points.size(); ++q) {
      const auto oracle = flow_oracle_lie(x, y, points[q], eps_list[e], opt);
      for (std::size_t n = 0; n < oracle.size(); ++n) {
        const double err = std::abs(oracle[n] - reference[q][n]);
        if (err > report.error[e]) {
          report.error[e] = err;
          if (e + 1 == eps_list.size()) report.worst_point = points[q];
        }
      }
    }
  }
  if (eps_list.size() >= 2) report.slope = fit_loglog_slope(report.eps, report.error);
  return report;
}

}  // namespace kosmann
