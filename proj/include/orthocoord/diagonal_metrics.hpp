#pragma once

// Metrics in orthogonal form g = sum_j a_j^2 dx_j (x) dx_j, their associated
// orthonormal frame e_j = a_j^{-1} d/dx_j, connection, brackets and curvature.
//
// The closed-form curvature below is derived from the Koszul formula alone and
// holds for every n >= 2, not only n >= 4.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthocoord/curvature_core.hpp"
#include "orthocoord/error.hpp"
#include "orthocoord/tensor.hpp"

namespace orthocoord {

struct ChartPoint {
  Vector x;
};

/// Axis-aligned coordinate box; evaluation outside raises out-of-domain.
struct DomainBox {
  std::vector<std::pair<double, double>> bounds;

  int dim() const { return static_cast<int>(bounds.size()); }
  bool contains(const Vector& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (!(x[i] >= bounds[i].first && x[i] <= bounds[i].second)) return false;
    }
    return true;
  }
};

/// Pointwise data of a chart: a_j, first partials d_m a_j and second partials.
struct ScaleJet {
  Vector a;                   // a_j
  Matrix grad;                // grad(j, m) = d a_j / d x_m
  std::vector<Matrix> hess;   // hess[j](m, p) = d^2 a_j / d x_m d x_p
};

class DiagonalChart {
 public:
  using ScaleFn = std::function<Vector(const Vector&)>;
  using GradientFn = std::function<Matrix(const Vector&)>;
  using HessianFn = std::function<std::vector<Matrix>(const Vector&)>;

  DiagonalChart(std::string name, DomainBox domain, ScaleFn scales, GradientFn gradient = {},
                HessianFn hessian = {}, bool finite_difference_fallback = true)
      : name_(std::move(name)),
        domain_(std::move(domain)),
        scales_(std::move(scales)),
        gradient_(std::move(gradient)),
        hessian_(std::move(hessian)),
        fd_fallback_(finite_difference_fallback) {
    if (domain_.dim() < 2) throw Error(ErrorKind::InvalidDimension, "chart dimension must be >= 2");
    for (const auto& [lo, hi] : domain_.bounds) {
      if (!(lo < hi)) throw Error(ErrorKind::InvalidDimension, "empty domain interval");
    }
  }

  const std::string& name() const { return name_; }
  int dim() const { return domain_.dim(); }
  const DomainBox& domain() const { return domain_; }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }
  bool has_second_derivatives() const { return has_analytic_hessian() || fd_fallback_; }

  /// a_j(x); checks the domain and positivity.
  Vector scales(const ChartPoint& p) const {
    require_inside(p.x);
    Vector a = scales_(p.x);
    if (a.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "scale function returned wrong size");
    for (int j = 0; j < dim(); ++j) {
      if (!(a[j] > 0.0)) {
        throw Error(ErrorKind::DegenerateMetric, "scale a_" + std::to_string(j + 1) + " is not positive");
      }
    }
    return a;
  }

  Matrix gradient(const ChartPoint& p) const {
    require_inside(p.x);
    return gradient_ ? gradient_(p.x) : fd_gradient(p.x);
  }

  std::vector<Matrix> hessian(const ChartPoint& p) const {
    require_inside(p.x);
    if (hessian_) return hessian_(p.x);
    if (!fd_fallback_) throw Error(ErrorKind::MissingSecondDerivatives, "chart " + name_ + " has no second derivatives");
    return fd_hessian(p.x);
  }

  ScaleJet jet(const ChartPoint& p, bool with_hessian = true) const {
    ScaleJet jet{scales(p), gradient(p), {}};
    if (with_hessian) jet.hess = hessian(p);
    return jet;
  }

  /// Central differences of a_j with step cbrt(eps) * max(1, |x_m|).
  Matrix fd_gradient(const Vector& x) const {
    const int n = dim();
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    Matrix g(n, n);
    for (int m = 0; m < n; ++m) {
      const double h = base * std::max(1.0, std::abs(x[m]));
      Vector xp = x, xm = x;
      xp[m] += h;
      xm[m] -= h;
      g.col(m) = (scales_(xp) - scales_(xm)) / (2.0 * h);
    }
    return g;
  }

  /// Central second differences with step eps^(1/4) * max(1, |x_m|).
  std::vector<Matrix> fd_hessian(const Vector& x) const {
    const int n = dim();
    const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    std::vector<Matrix> hess(n, Matrix::Zero(n, n));
    const Vector a0 = scales_(x);
    for (int m = 0; m < n; ++m) {
      const double hm = base * std::max(1.0, std::abs(x[m]));
      for (int p = m; p < n; ++p) {
        const double hp = base * std::max(1.0, std::abs(x[p]));
        Vector d2;
        if (m == p) {
          Vector xp = x, xm = x;
          xp[m] += hm;
          xm[m] -= hm;
          d2 = (scales_(xp) - 2.0 * a0 + scales_(xm)) / (hm * hm);
        } else {
          Vector xpp = x, xpm = x, xmp = x, xmm = x;
          xpp[m] += hm; xpp[p] += hp;
          xpm[m] += hm; xpm[p] -= hp;
          xmp[m] -= hm; xmp[p] += hp;
          xmm[m] -= hm; xmm[p] -= hp;
          d2 = (scales_(xpp) - scales_(xpm) - scales_(xmp) + scales_(xmm)) / (4.0 * hm * hp);
        }
        for (int j = 0; j < n; ++j) {
          hess[j](m, p) = d2[j];
          hess[j](p, m) = d2[j];
        }
      }
    }
    return hess;
  }

  /// Unchecked evaluation, used by finite-difference stencils near the boundary.
  Vector raw_scales(const Vector& x) const { return scales_(x); }

 private:
  void require_inside(const Vector& x) const {
    if (x.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
    if (!domain_.contains(x)) throw Error(ErrorKind::OutOfDomain, "point outside the domain of chart " + name_);
  }

  std::string name_;
  DomainBox domain_;
  ScaleFn scales_;
  GradientFn gradient_;
  HessianFn hessian_;
  bool fd_fallback_ = true;
};

namespace charts {

inline DomainBox cube(int n, double lo, double hi) {
  return DomainBox{std::vector<std::pair<double, double>>(n, {lo, hi})};
}

inline DiagonalChart flat(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "n must be >= 2");
  return DiagonalChart(
      "flat:" + std::to_string(n), cube(n, -100.0, 100.0),
      [n](const Vector&) { return Vector::Ones(n); },
      [n](const Vector&) { return Matrix::Zero(n, n); },
      [n](const Vector&) { return std::vector<Matrix>(n, Matrix::Zero(n, n)); });
}

/// n = 2: polar (r, theta), a = (1, r).
/// n = 3: spherical (r, theta, phi), a = (1, r, r sin theta).
inline DiagonalChart polar(int n) {
  constexpr double pi = 3.14159265358979323846;
  if (n == 2) {
    return DiagonalChart(
        "polar:2", DomainBox{{{1e-3, 100.0}, {-2.0 * pi, 2.0 * pi}}},
        [](const Vector& x) { return Vector{{1.0, x[0]}}; },
        [](const Vector&) { return Matrix{{0.0, 0.0}, {1.0, 0.0}}; },
        [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); });
  }
  if (n == 3) {
    return DiagonalChart(
        "polar:3", DomainBox{{{1e-3, 100.0}, {1e-2, pi - 1e-2}, {-2.0 * pi, 2.0 * pi}}},
        [](const Vector& x) { return Vector{{1.0, x[0], x[0] * std::sin(x[1])}}; },
        [](const Vector& x) {
          Matrix g = Matrix::Zero(3, 3);
          g(1, 0) = 1.0;
          g(2, 0) = std::sin(x[1]);
          g(2, 1) = x[0] * std::cos(x[1]);
          return g;
        },
        [](const Vector& x) {
          std::vector<Matrix> h(3, Matrix::Zero(3, 3));
          h[2](0, 1) = h[2](1, 0) = std::cos(x[1]);
          h[2](1, 1) = -x[0] * std::sin(x[1]);
          return h;
        });
  }
  throw Error(ErrorKind::InvalidDimension, "polar chart exists for n = 2 and n = 3 only");
}

/// Stereographic unit sphere: a_j = 2 / (1 + |x|^2) for all j.
inline DiagonalChart sphere_stereographic(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "n must be >= 2");
  return DiagonalChart(
      "sphere-stereo:" + std::to_string(n), cube(n, -5.0, 5.0),
      [n](const Vector& x) { return Vector::Constant(n, 2.0 / (1.0 + x.squaredNorm())); },
      [n](const Vector& x) {
        const double s = 1.0 + x.squaredNorm();
        const Vector da = -4.0 * x / (s * s);
        Matrix g(n, n);
        for (int j = 0; j < n; ++j) g.row(j) = da.transpose();
        return g;
      },
      [n](const Vector& x) {
        const double s = 1.0 + x.squaredNorm();
        const Matrix H = -4.0 / (s * s) * Matrix::Identity(n, n) + 16.0 / (s * s * s) * x * x.transpose();
        return std::vector<Matrix>(n, H);
      });
}

/// Same metric in coordinates y_i = s_i x_i: b_i(y) = a_i(x) / |s_i|.
inline DiagonalChart rescaled(const DiagonalChart& chart, const Vector& s) {
  const int n = chart.dim();
  if (s.size() != n) throw Error(ErrorKind::DimensionMismatch, "one scale factor per coordinate");
  DomainBox box;
  for (int i = 0; i < n; ++i) {
    if (s[i] == 0.0) throw Error(ErrorKind::PreconditionViolated, "scale factors must be nonzero");
    auto [lo, hi] = chart.domain().bounds[i];
    box.bounds.emplace_back(std::min(lo * s[i], hi * s[i]), std::max(lo * s[i], hi * s[i]));
  }
  const Vector inv = s.cwiseInverse();
  const Vector absinv = s.cwiseAbs().cwiseInverse();
  auto to_x = [inv](const Vector& y) -> Vector { return y.cwiseProduct(inv); };
  return DiagonalChart(
      chart.name() + "/rescaled", box,
      [chart, to_x, absinv](const Vector& y) { return Vector(chart.raw_scales(to_x(y)).cwiseProduct(absinv)); },
      [chart, to_x, inv, absinv](const Vector& y) {
        Matrix g = chart.gradient(ChartPoint{to_x(y)});
        return Matrix(absinv.asDiagonal() * g * inv.asDiagonal());
      },
      [chart, to_x, inv, absinv, n](const Vector& y) {
        auto h = chart.hessian(ChartPoint{to_x(y)});
        for (int j = 0; j < n; ++j) h[j] = absinv[j] * (inv.asDiagonal() * h[j] * inv.asDiagonal());
        return h;
      });
}

/// Resolves "flat:N", "polar:N" and "sphere-stereo:N".
inline DiagonalChart builtin(const std::string& name, int n) {
  if (name == "flat") return flat(n);
  if (name == "polar") return polar(n);
  if (name == "sphere-stereo") return sphere_stereographic(n);
  throw Error(ErrorKind::ParseError, "unknown builtin chart '" + name + "'");
}

}  // namespace charts

/// alpha(i, j) = a_i^{-1} da_i(e_j) = a_i^{-1} a_j^{-1} d a_i / d x_j.
inline Matrix log_derivatives(const ScaleJet& jet) {
  const int n = static_cast<int>(jet.a.size());
  Matrix alpha(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) alpha(i, j) = jet.grad(i, j) / (jet.a[i] * jet.a[j]);
  return alpha;
}

/// Rows e_j = a_j^{-1} d/dx_j in the coordinate basis.
inline Frame frame_at(const DiagonalChart& chart, const ChartPoint& p) {
  return Frame(Matrix(chart.scales(p).cwiseInverse().asDiagonal()));
}

/// max |F diag(a^2) F^T - I|: orthonormality of a frame for the chart metric.
inline double metric_orthonormality_defect(const DiagonalChart& chart, const ChartPoint& p, const Frame& f) {
  const Vector a = chart.scales(p);
  const int n = chart.dim();
  const Matrix gram = f.rows() * a.cwiseProduct(a).asDiagonal() * f.rows().transpose();
  return (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// Gamma(i, j, k) = g(nabla_{e_i} e_j, e_k) from
///   nabla_{e_i} e_j = alpha_i(e_j) e_i                      (i != j)
///   nabla_{e_j} e_j = -sum_{m != j} alpha_j(e_m) e_m.
inline Tensor3 connection_coefficients(const Matrix& alpha) {
  const int n = static_cast<int>(alpha.rows());
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        gamma(i, j, i) = alpha(i, j);
      } else {
        for (int m = 0; m < n; ++m)
          if (m != j) gamma(j, j, m) = -alpha(j, m);
      }
    }
  return gamma;
}

inline Tensor3 connection_coefficients(const DiagonalChart& chart, const ChartPoint& p) {
  return connection_coefficients(log_derivatives(chart.jet(p, false)));
}

/// B(i, j, m): coefficient of e_m in [e_i, e_j], computed as the Lie bracket of
/// the coordinate vector fields a_i^{-1} d_i and a_j^{-1} d_j.
inline Tensor3 bracket_coefficients(const ScaleJet& jet) {
  const int n = static_cast<int>(jet.a.size());
  Tensor3 B(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // [X, Y]^m = X^p d_p Y^m - Y^p d_p X^m with X = a_i^{-1} d_i, Y = a_j^{-1} d_j.
      // d_p (a_j^{-1}) = -a_j^{-2} d_p a_j.
      const double coord_j = (1.0 / jet.a[i]) * (-jet.grad(j, i) / (jet.a[j] * jet.a[j]));
      const double coord_i = -(1.0 / jet.a[j]) * (-jet.grad(i, j) / (jet.a[i] * jet.a[i]));
      // coordinate component c along d_m equals frame component c * a_m along e_m
      B(i, j, j) += coord_j * jet.a[j];
      B(i, j, i) += coord_i * jet.a[i];
    }
  return B;
}

inline Tensor3 bracket_coefficients(const DiagonalChart& chart, const ChartPoint& p) {
  return bracket_coefficients(chart.jet(p, false));
}

/// max_{i,j,k} |2 Gamma(i,j,k) - (g([e_i,e_j],e_k) + g([e_k,e_i],e_j) + g(e_i,[e_k,e_j]))|.
inline double koszul_check(const Tensor3& gamma, const Tensor3& bracket) {
  const int n = gamma.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double rhs = bracket(i, j, k) + bracket(k, i, j) + bracket(k, j, i);
        worst = std::max(worst, std::abs(2.0 * gamma(i, j, k) - rhs));
      }
  return worst;
}

inline double koszul_check(const DiagonalChart& chart, const ChartPoint& p) {
  const ScaleJet jet = chart.jet(p, false);
  return koszul_check(connection_coefficients(log_derivatives(jet)), bracket_coefficients(jet));
}

/// R(e_i, e_j, e_k, e_l) = g(R_{e_i,e_j} e_k, e_l) from the closed form
///   d_il a_i^{-1} H_i(j,k) - d_jl a_j^{-1} H_j(i,k)
/// - d_ik a_k^{-1} H_k(j,l) + d_jk a_k^{-1} H_k(i,l)
/// + (d_ik d_jl - d_jk d_il) a_i^{-1} a_j^{-1} g(da_i, da_j)
/// where H_p(x, y) = (nabla_{e_x} da_p)(e_y).
inline Tensor4 diagonal_curvature(const ScaleJet& jet) {
  const int n = static_cast<int>(jet.a.size());
  if (static_cast<int>(jet.hess.size()) != n) {
    throw Error(ErrorKind::MissingSecondDerivatives, "jet carries no second derivatives");
  }
  const Vector& a = jet.a;
  const Tensor3 gamma = connection_coefficients(log_derivatives(jet));

  // da(p, y) = da_p(e_y) = a_y^{-1} d_y a_p
  Matrix da(n, n);
  for (int p = 0; p < n; ++p)
    for (int y = 0; y < n; ++y) da(p, y) = jet.grad(p, y) / a[y];

  // H(p, x, y) = e_x(da_p(e_y)) - da_p(nabla_{e_x} e_y)
  Tensor3 H(n);
  for (int p = 0; p < n; ++p)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        // d_x (a_y^{-1} d_y a_p) = -a_y^{-2} d_x a_y d_y a_p + a_y^{-1} d_x d_y a_p
        const double dx_term = -jet.grad(y, x) * jet.grad(p, y) / (a[y] * a[y]) + jet.hess[p](x, y) / a[y];
        double conn = 0.0;
        for (int m = 0; m < n; ++m) conn += gamma(x, y, m) * da(p, m);
        H(p, x, y) = dx_term / a[x] - conn;
      }

  Matrix gda = da * da.transpose();  // g(da_i, da_j)
  auto delta = [](int u, int v) { return u == v ? 1.0 : 0.0; };

  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = 0.0;
          if (i == l) r += H(i, j, k) / a[i];
          if (j == l) r -= H(j, i, k) / a[j];
          if (i == k) r -= H(k, j, l) / a[k];
          if (j == k) r += H(k, i, l) / a[k];
          const double dd = delta(i, k) * delta(j, l) - delta(j, k) * delta(i, l);
          if (dd != 0.0) r += dd * gda(i, j) / (a[i] * a[j]);
          R(i, j, k, l) = r;
        }
  return R;
}

inline Tensor4 diagonal_curvature(const DiagonalChart& chart, const ChartPoint& p) {
  if (!chart.has_second_derivatives()) {
    throw Error(ErrorKind::MissingSecondDerivatives, "chart " + chart.name() + " has no second derivatives");
  }
  return diagonal_curvature(chart.jet(p, true));
}

/// Smooth change of coordinates x = phi(y), used to express a coframe in
/// coordinates other than the chart's own.
struct CoordinateChange {
  std::function<Vector(const Vector&)> map;
  std::function<Matrix(const Vector&)> jacobian;  // J(m, p) = d x_m / d y_p

  static CoordinateChange identity(int n) {
    return {[](const Vector& y) { return y; }, [n](const Vector&) { return Matrix::Identity(n, n); }};
  }

  /// x_m = y_m + amplitude * sin(sum_{k=1}^{n-1} k y_{m+k mod n}).
  static CoordinateChange sine_warp(int n, double amplitude) {
    auto phase = [n](const Vector& y, int m) {
      double s = 0.0;
      for (int k = 1; k < n; ++k) s += k * y[(m + k) % n];
      return s;
    };
    return {[n, amplitude, phase](const Vector& y) {
              Vector x = y;
              for (int m = 0; m < n; ++m) x[m] += amplitude * std::sin(phase(y, m));
              return x;
            },
            [n, amplitude, phase](const Vector& y) {
              Matrix J = Matrix::Identity(n, n);
              for (int m = 0; m < n; ++m) {
                const double c = amplitude * std::cos(phase(y, m));
                for (int k = 1; k < n; ++k) J(m, (m + k) % n) += c * k;
              }
              return J;
            }};
  }
};

/// One-forms sampled on a uniform grid: theta[j] = e_j^flat and
/// alpha[i] = a_i^{-1} da_i, both as component rows in the grid coordinates.
class CoframeField {
 public:
  CoframeField(Vector origin, double step, std::vector<int> counts)
      : origin_(std::move(origin)), step_(step), counts_(std::move(counts)) {
    if (static_cast<int>(counts_.size()) != origin_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "one grid count per axis");
    }
    if (!(step_ > 0.0)) throw Error(ErrorKind::PreconditionViolated, "grid step must be positive");
    std::size_t total = 1;
    for (int c : counts_) {
      if (c < 1) throw Error(ErrorKind::GridTooCoarse, "empty grid axis");
      total *= static_cast<std::size_t>(c);
    }
    theta_.assign(total, Matrix::Zero(dim(), dim()));
    alpha_.assign(total, Matrix::Zero(dim(), dim()));
  }

  int dim() const { return static_cast<int>(origin_.size()); }
  double step() const { return step_; }
  const std::vector<int>& counts() const { return counts_; }
  std::size_t size() const { return theta_.size(); }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(dim());
    for (int d = dim() - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(flat % counts_[d]);
      flat /= counts_[d];
    }
    return idx;
  }
  std::size_t flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim(); ++d) flat = flat * counts_[d] + idx[d];
    return flat;
  }
  Vector point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Vector y = origin_;
    for (int d = 0; d < dim(); ++d) y[d] += step_ * idx[d];
    return y;
  }

  Matrix& theta(std::size_t flat) { return theta_[flat]; }
  const Matrix& theta(std::size_t flat) const { return theta_[flat]; }
  Matrix& alpha(std::size_t flat) { return alpha_[flat]; }
  const Matrix& alpha(std::size_t flat) const { return alpha_[flat]; }

 private:
  Vector origin_;
  double step_;
  std::vector<int> counts_;
  std::vector<Matrix> theta_;
  std::vector<Matrix> alpha_;
};

/// Samples the coframe of `chart` on a grid of `points_per_axis` points per
/// axis with spacing h centred at `center` (in the y coordinates of `change`).
inline CoframeField coframe_field(const DiagonalChart& chart, const Vector& center, double h,
                                  int points_per_axis, const CoordinateChange& change) {
  const int n = chart.dim();
  const Vector origin = center - Vector::Constant(n, h * (points_per_axis - 1) / 2.0);
  CoframeField field(origin, h, std::vector<int>(n, points_per_axis));
  for (std::size_t f = 0; f < field.size(); ++f) {
    const Vector y = field.point(f);
    const ChartPoint p{change.map(y)};
    const ScaleJet jet = chart.jet(p, false);
    const Matrix J = change.jacobian(y);
    // dx_j = sum_p J(j, p) dy_p
    for (int j = 0; j < n; ++j) {
      field.theta(f).row(j) = jet.a[j] * J.row(j);
      field.alpha(f).row(j) = (jet.grad.row(j) / jet.a[j]) * J;
    }
  }
  return field;
}

inline CoframeField coframe_field(const DiagonalChart& chart, const Vector& center, double h,
                                  int points_per_axis) {
  return coframe_field(chart, center, h, points_per_axis, CoordinateChange::identity(chart.dim()));
}

/// For each j, the max over interior grid points and over components of the
/// 3-form theta_j ^ d theta_j, with d by central differences.
inline std::vector<double> frobenius_residual(const CoframeField& field) {
  const int n = field.dim();
  for (int c : field.counts()) {
    if (c < 3) throw Error(ErrorKind::GridTooCoarse, "need at least 3 grid points per axis");
  }
  std::vector<double> worst(n, 0.0);
  if (n < 3) return worst;
  const double h = field.step();

  for (std::size_t f = 0; f < field.size(); ++f) {
    auto idx = field.multi_index(f);
    bool interior = true;
    for (int d = 0; d < n; ++d) interior = interior && idx[d] > 0 && idx[d] + 1 < field.counts()[d];
    if (!interior) continue;

    // partial[d](j, p) = d_d theta_j,p
    std::vector<Matrix> partial(n);
    for (int d = 0; d < n; ++d) {
      auto up = idx, down = idx;
      ++up[d];
      --down[d];
      partial[d] = (field.theta(field.flat_index(up)) - field.theta(field.flat_index(down))) / (2.0 * h);
    }
    const Matrix& theta = field.theta(f);
    for (int j = 0; j < n; ++j) {
      auto D = [&](int p, int q) { return partial[p](j, q) - partial[q](j, p); };
      for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
          for (int r = q + 1; r < n; ++r) {
            const double c = theta(j, p) * D(q, r) - theta(j, q) * D(p, r) + theta(j, r) * D(p, q);
            worst[j] = std::max(worst[j], std::abs(c));
          }
    }
  }
  return worst;
}

}  // namespace orthocoord
