#pragma once

// The orthogonal-coordinate curvature obstruction as a smooth function on the
// orthogonal group: for a frame F with rows e_1..e_n,
//
//   Phi(F) = sum over (i<j, k<l, {i,j} and {k,l} disjoint) of R(e_i,e_j,e_k,e_l)^2.
//
// Orthogonal coordinates force every such component to vanish, so a positive
// infimum of Phi rules them out. Each geometric component is counted twice
// (once per pair ordering).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "orthocoord/curvature_core.hpp"
#include "orthocoord/error.hpp"
#include "orthocoord/random.hpp"

namespace orthocoord {

using Quadruple = std::array<int, 4>;

/// All (i, j, k, l) with i < j, k < l and {i, j} disjoint from {k, l}.
inline std::vector<Quadruple> distinct_quadruples(int n) {
  std::vector<Quadruple> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          if (k != i && k != j && l != i && l != j) out.push_back({i, j, k, l});
  return out;
}

struct ResidualSpec {
  CurvatureOracle oracle;
  std::vector<Quadruple> quadruples;

  explicit ResidualSpec(CurvatureOracle o) : oracle(std::move(o)), quadruples(distinct_quadruples(oracle.dim())) {}
  int dim() const { return oracle.dim(); }
};

namespace detail {

inline void require_frame(const ResidualSpec& spec, const Frame& frame, double tol) {
  if (frame.dim() != spec.dim()) throw Error(ErrorKind::DimensionMismatch, "frame dimension differs from oracle");
  if (!frame.is_orthonormal(tol)) throw Error(ErrorKind::FrameError, "frame is not orthonormal");
}

inline double residual_of(const ResidualSpec& spec, const Tensor4& T) {
  double phi = 0.0;
  for (const auto& [i, j, k, l] : spec.quadruples) {
    const double v = T(i, j, k, l);
    phi += v * v;
  }
  return phi;
}

/// Euclidean gradient M of Phi(exp(tA) F) in A (before skew projection).
inline Matrix raw_gradient(const ResidualSpec& spec, const Tensor4& T) {
  const int n = spec.dim();
  Tensor4 S(n);
  for (const auto& [i, j, k, l] : spec.quadruples) S(i, j, k, l) = T(i, j, k, l);

  // d T_ijkl = sum_m A_im T_mjkl + A_jm T_imkl + A_km T_ijml + A_lm T_ijkm
  Matrix M = Matrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            acc += S(p, a, b, c) * T(m, a, b, c) + S(a, p, b, c) * T(a, m, b, c) +
                   S(a, b, p, c) * T(a, b, m, c) + S(a, b, c, p) * T(a, b, c, m);
          }
      M(p, m) = 2.0 * acc;
    }
  return M;
}

}  // namespace detail

inline double residual(const ResidualSpec& spec, const Frame& frame, double frame_tol = kFrameTol) {
  detail::require_frame(spec, frame, frame_tol);
  return detail::residual_of(spec, spec.oracle.components(frame.rows()));
}

/// Riemannian gradient of Phi at F for the left action F -> exp(A) F, as a skew matrix.
inline Matrix residual_gradient(const ResidualSpec& spec, const Frame& frame, double frame_tol = kFrameTol) {
  detail::require_frame(spec, frame, frame_tol);
  const Matrix M = detail::raw_gradient(spec, spec.oracle.components(frame.rows()));
  return 0.5 * (M - M.transpose());
}

struct QuadrupleValue {
  Quadruple ijkl;
  double value;
};

inline std::vector<QuadrupleValue> per_quadruple(const ResidualSpec& spec, const Frame& frame) {
  const Tensor4 T = spec.oracle.components(frame.rows());
  std::vector<QuadrupleValue> out;
  out.reserve(spec.quadruples.size());
  for (const auto& q : spec.quadruples) out.push_back({q, T(q[0], q[1], q[2], q[3])});
  return out;
}

struct SearchConfig {
  int restarts = 20;
  int max_iters = 5000;
  double step0 = 0.1;
  double tol_grad = 1e-8;
  double tol_res = 1e-10;
  std::uint64_t seed = 0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int threads = 1;  // 0 selects std::thread::hardware_concurrency()

  void validate() const {
    if (restarts < 1 || max_iters < 1 || !(step0 > 0.0) || !(tol_grad > 0.0) || !(tol_res > 0.0) ||
        !(backtrack > 0.0 && backtrack < 1.0) || !(armijo > 0.0 && armijo < 1.0) || threads < 0) {
      throw Error(ErrorKind::PreconditionViolated, "invalid search configuration");
    }
  }
};

struct DescentResult {
  Frame frame;
  double residual = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Re-orthonormalizes rows (QR with positive diagonal), keeping orientation.
inline Matrix reorthonormalize(const Matrix& rows) {
  const int n = static_cast<int>(rows.rows());
  Eigen::HouseholderQR<Matrix> qr(rows.transpose());
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix R = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
  return Q.transpose();
}

/// Steepest descent F <- exp(-eta grad) F with Armijo backtracking. The step
/// doubles after every accepted move. `trace`, when given, receives Phi after
/// every accepted iterate (starting with Phi(F0)).
inline DescentResult descend(const ResidualSpec& spec, const Frame& start, const SearchConfig& cfg,
                             std::vector<double>* trace = nullptr) {
  detail::require_frame(spec, start, kFrameTol);
  Matrix F = start.rows();
  Tensor4 T = spec.oracle.components(F);
  double phi = detail::residual_of(spec, T);
  double eta = cfg.step0;
  if (trace) trace->push_back(phi);

  DescentResult res;
  int it = 0;
  double gnorm = 0.0;
  for (; it < cfg.max_iters; ++it) {
    const Matrix M = detail::raw_gradient(spec, T);
    const Matrix G = 0.5 * (M - M.transpose());
    gnorm = G.norm();
    if (phi == 0.0 || gnorm <= cfg.tol_grad) break;

    bool accepted = false;
    while (eta > 1e-300) {
      const Matrix step = (-eta * G).exp();
      Matrix candidate = reorthonormalize(step * F);
      Tensor4 Tc = spec.oracle.components(candidate);
      const double phic = detail::residual_of(spec, Tc);
      if (phic <= phi - cfg.armijo * eta * gnorm * gnorm) {
        F = std::move(candidate);
        T = std::move(Tc);
        phi = phic;
        accepted = true;
        break;
      }
      eta *= cfg.backtrack;
    }
    if (!accepted) break;
    if (trace) trace->push_back(phi);
    eta = std::min(eta * 2.0, 1e3);
  }
  if (it == cfg.max_iters) {
    const Matrix M = detail::raw_gradient(spec, T);
    gnorm = (0.5 * (M - M.transpose())).norm();
  }
  res.frame = Frame(F);
  res.residual = phi;
  res.grad_norm = gnorm;
  res.iterations = it;
  return res;
}

/// Haar-random starting frame for restart `index`.
inline Frame restart_frame(int n, std::uint64_t seed, int index) {
  Rng rng(seed + static_cast<std::uint64_t>(index));
  return Frame(haar_orthogonal(n, rng));
}

struct ObstructionReport {
  std::string space;
  int n = 0;
  double best_residual = 0.0;
  double best_grad_norm = 0.0;
  Frame best_frame;
  std::vector<QuadrupleValue> per_quadruple;
  int restarts_used = 0;
  int best_restart = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

inline ObstructionReport minimize(const ResidualSpec& spec, const SearchConfig& cfg) {
  cfg.validate();
  const int n = spec.dim();
  std::vector<DescentResult> results(static_cast<std::size_t>(cfg.restarts));

  auto run = [&](int r) { results[r] = descend(spec, restart_frame(n, cfg.seed, r), cfg); };

  int workers = cfg.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.threads;
  workers = std::clamp(workers, 1, cfg.restarts);
  if (workers == 1) {
    for (int r = 0; r < cfg.restarts; ++r) run(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) run(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int r = 1; r < cfg.restarts; ++r) {
    if (results[r].residual < results[best].residual) best = r;
  }

  ObstructionReport rep;
  rep.space = spec.oracle.label();
  rep.n = n;
  rep.best_residual = results[best].residual;
  rep.best_grad_norm = results[best].grad_norm;
  rep.best_frame = results[best].frame;
  rep.per_quadruple = per_quadruple(spec, rep.best_frame);
  rep.restarts_used = cfg.restarts;
  rep.best_restart = best;
  rep.converged = rep.best_residual <= cfg.tol_res || rep.best_grad_norm <= cfg.tol_grad;
  rep.seed = cfg.seed;
  return rep;
}

}  // namespace orthocoord
