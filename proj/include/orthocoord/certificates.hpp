#pragma once

// Finite algebraic checks behind the non-existence of orthogonal coordinates
// on CP^2 and HP^q (q >= 2). Every check returns a CertificateResult listing
// the numbers it computed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthocoord/curvature_core.hpp"
#include "orthocoord/error.hpp"
#include "orthocoord/obstruction_search.hpp"
#include "orthocoord/random.hpp"

namespace orthocoord {

struct Quantity {
  std::string name;
  double value;
};

struct CertificateResult {
  std::string name;
  bool passed = false;
  std::vector<Quantity> computed;
  double tolerance = kAlgTol;

  void add(std::string quantity, double value) { computed.push_back({std::move(quantity), value}); }
};

// ---------------------------------------------------------------------------
// CP^2

/// omega(e_i, e_j) for the frame of CP^2 where every |omega(e_i, e_j)| = 1/sqrt(3):
///   J e_1 = ( e_2 + e_3 + e_4)/sqrt3,  J e_2 = (-e_1 + e_3 - e_4)/sqrt3,
///   J e_3 = (-e_1 - e_2 + e_4)/sqrt3,  J e_4 = (-e_1 + e_2 - e_3)/sqrt3.
/// Row i holds the coefficients of J e_i, which equal omega(e_i, .).
inline Matrix cp2_canonical_omega() {
  const double s = 1.0 / std::sqrt(3.0);
  return s * Matrix{{0.0, 1.0, 1.0, 1.0}, {-1.0, 0.0, 1.0, -1.0}, {-1.0, -1.0, 0.0, 1.0}, {-1.0, 1.0, -1.0, 0.0}};
}

/// max_i |J e_i - sum_j K_ij e_j| with K the canonical omega matrix.
inline double cp2_frame_defect(const Frame& frame) {
  const Matrix J = standard_complex_structure(2).matrix();
  const Matrix& F = frame.rows();
  const Matrix lhs = F * J.transpose();  // row i = (J e_i)^T
  const Matrix rhs = cp2_canonical_omega() * F;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

/// Frame (rows e_i) on C^2 = R^4 realizing the canonical omega matrix for the
/// standard J. Built as the unitary map sending a K^T-adapted basis of the
/// coefficient space to the J-adapted basis (u, Ju, w, Jw) of R^4.
inline Frame cp2_canonical_frame() {
  const Matrix J = standard_complex_structure(2).matrix();
  const Matrix Kt = cp2_canonical_omega().transpose();

  Vector s = Vector::Unit(4, 0);
  Vector t = Vector::Unit(4, 2);
  t -= s.dot(t) * s + (Kt * s).dot(t) * (Kt * s);
  t.normalize();
  Matrix S(4, 4);
  S << s, Kt * s, t, Kt * t;

  const Vector u = Vector::Unit(4, 0), w = Vector::Unit(4, 2);
  Matrix U(4, 4);
  U << u, J * u, w, J * w;

  // P = U S^T satisfies J P = P K^T; its columns are the frame vectors.
  Frame frame(S * U.transpose());
  if (!frame.is_orthonormal(1e-12) || frame.determinant() < 0.0 || cp2_frame_defect(frame) > 1e-12) {
    throw Error(ErrorKind::ConstructionFailed, "canonical CP^2 frame construction failed");
  }
  return frame;
}

/// omega(e1,e2) omega(e3,e4) - omega(e1,e3) omega(e2,e4) + omega(e1,e4) omega(e2,e3).
inline double cp2_pfaffian(const Frame& frame) {
  const Matrix O = standard_complex_structure(2).omega_in(frame.rows());
  return O(0, 1) * O(2, 3) - O(0, 2) * O(1, 3) + O(0, 3) * O(1, 2);
}

inline CertificateResult cp2_canonical_frame_certificate() {
  CertificateResult cert{"cp2-canonical-frame", false, {}, 1e-12};
  const Frame F = cp2_canonical_frame();
  const Matrix O = standard_complex_structure(2).omega_in(F.rows());
  const ResidualSpec spec(fubini_study_oracle(2));
  const double defect = cp2_frame_defect(F);
  const double pf = cp2_pfaffian(F);
  const double phi = residual(spec, F);
  double omega_dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) omega_dev = std::max(omega_dev, std::abs(O(i, j) * O(i, j) - 1.0 / 3.0));
  cert.add("complex_structure_defect", defect);
  cert.add("omega_squared_deviation_from_one_third", omega_dev);
  cert.add("self_duality_identity", pf);
  cert.add("determinant", F.determinant());
  cert.add("residual", phi);
  cert.passed = defect <= 1e-12 && omega_dev <= 1e-12 && std::abs(pf - 1.0) <= kAlgTol &&
                std::abs(F.determinant() - 1.0) <= 1e-12 && phi <= 1e-10;
  return cert;
}

/// g(R(e1,e2)e3, e4) = -1 + 3 omega(e1,e2)^2 for a positively oriented frame.
inline CertificateResult cp2_rfs_identity(const Frame& frame, double tol = kAlgTol) {
  if (frame.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "CP^2 frames are 4-dimensional");
  if (!frame.is_orthonormal()) throw Error(ErrorKind::FrameError, "frame is not orthonormal");
  if (frame.determinant() < 0.0) throw Error(ErrorKind::OrientationError, "frame is negatively oriented");
  const auto oracle = fubini_study_oracle(2);
  const double omega12 = standard_complex_structure(2).omega(frame.vector(0), frame.vector(1));
  const double lhs = oracle(frame.vector(0), frame.vector(1), frame.vector(2), frame.vector(3));
  const double rhs = -1.0 + 3.0 * omega12 * omega12;
  CertificateResult cert{"cp2-rfs-identity", std::abs(lhs - rhs) <= tol, {}, tol};
  cert.add("R(e1,e2,e3,e4)", lhs);
  cert.add("-1+3*omega12^2", rhs);
  cert.add("self_duality_identity", cp2_pfaffian(frame));
  return cert;
}

/// For every ordered triple of distinct indices, g(R(e_i,e_j)e_k, e_i) must be
/// +-1 at a frame realizing the canonical omega matrix, whereas orthogonal
/// coordinates with a_i constant force it to vanish.
inline CertificateResult cp2_contradiction(const Frame& frame, double tol = kAlgTol) {
  if (frame.dim() != 4 || !frame.is_orthonormal()) throw Error(ErrorKind::FrameError, "expects an orthonormal 4-frame");
  const Matrix O = standard_complex_structure(2).omega_in(frame.rows());
  if ((O - cp2_canonical_omega()).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorKind::PreconditionViolated, "frame does not realize the canonical omega values");
  }
  const auto oracle = fubini_study_oracle(2);
  CertificateResult cert{"cp2-contradiction", true, {}, tol};
  double worst_unit = 0.0, worst_formula = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        if (i == j || j == k || i == k) continue;
        const double v = oracle(frame.vector(i), frame.vector(j), frame.vector(k), frame.vector(i));
        const double formula = -3.0 * O(i, j) * O(i, k);
        worst_unit = std::max(worst_unit, std::abs(std::abs(v) - 1.0));
        worst_formula = std::max(worst_formula, std::abs(v - formula));
        cert.add("R(e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + ",e" + std::to_string(k + 1) +
                     ",e" + std::to_string(i + 1) + ")",
                 v);
      }
  cert.add("max_abs_deviation_from_unit", worst_unit);
  cert.add("max_deviation_from_-3*omega_ij*omega_ik", worst_formula);
  cert.passed = worst_unit <= tol && worst_formula <= tol;
  return cert;
}

/// Coefficients of the four alternatives: row r is the linear form in
/// (c_1..c_4) that must vanish unless c_r = 0.
inline std::array<std::array<std::int64_t, 4>, 4> csystem_matrix() {
  return {{{0, 1, 1, 1}, {1, 0, 1, -1}, {1, -1, 0, 1}, {1, 1, -1, 0}}};
}

namespace detail {

/// Rank of an integer matrix by cross-multiplying elimination; rows are
/// reduced by their gcd after every step so entries stay small.
inline int integer_rank(std::vector<std::vector<std::int64_t>> M) {
  const int rows = static_cast<int>(M.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(M[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(M[piv], M[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      if (M[r][c] == 0) continue;
      const std::int64_t f = M[r][c], p = M[rank][c];
      std::int64_t g = 0;
      for (int cc = 0; cc < cols; ++cc) {
        M[r][cc] = p * M[r][cc] - f * M[rank][cc];
        g = std::gcd(g, M[r][cc]);
      }
      if (g > 1)
        for (auto& x : M[r]) x /= g;
    }
    ++rank;
  }
  return rank;
}

/// Determinant of a 4x4 integer matrix by Bareiss elimination (exact).
inline std::int64_t integer_determinant(std::array<std::array<std::int64_t, 4>, 4> M) {
  std::int64_t sign = 1, prev = 1;
  for (int k = 0; k < 4; ++k) {
    if (M[k][k] == 0) {
      int swap_with = -1;
      for (int r = k + 1; r < 4; ++r)
        if (M[r][k] != 0) { swap_with = r; break; }
      if (swap_with < 0) return 0;
      std::swap(M[k], M[swap_with]);
      sign = -sign;
    }
    for (int i = k + 1; i < 4; ++i)
      for (int j = k + 1; j < 4; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[3][3];
}

}  // namespace detail

struct CBranch {
  unsigned mask = 0;              // bit r set: linear form r vanishes; clear: c_{r+1} = 0
  int solution_dim = 0;
  std::vector<int> forced_zero;   // indices (0-based) of c that the branch forces to vanish
};

/// All 16 branches of the alternatives, analysed in exact integer arithmetic.
inline std::vector<CBranch> csystem_branches() {
  const auto C = csystem_matrix();
  std::vector<CBranch> out;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<std::vector<std::int64_t>> rows;
    for (int r = 0; r < 4; ++r) {
      if (mask & (1u << r)) rows.emplace_back(C[r].begin(), C[r].end());
      else {
        std::vector<std::int64_t> unit(4, 0);
        unit[r] = 1;
        rows.push_back(unit);
      }
    }
    CBranch b;
    b.mask = mask;
    const int rank = detail::integer_rank(rows);
    b.solution_dim = 4 - rank;
    for (int i = 0; i < 4; ++i) {
      auto extended = rows;
      std::vector<std::int64_t> unit(4, 0);
      unit[i] = 1;
      extended.push_back(unit);
      if (detail::integer_rank(extended) == rank) b.forced_zero.push_back(i);
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline CertificateResult cp2_csystem_analysis() {
  CertificateResult cert{"cp2-csystem", false, {}, 0.0};
  const std::int64_t det = detail::integer_determinant(csystem_matrix());
  cert.add("determinant", static_cast<double>(det));
  bool every_branch_forces_zero = true;
  for (const auto& b : csystem_branches()) {
    std::string label = "branch_";
    for (int r = 0; r < 4; ++r) label += (b.mask & (1u << r)) ? 'L' : 'c';
    cert.add(label + "_solution_dim", b.solution_dim);
    cert.add(label + "_forced_zero_count", static_cast<double>(b.forced_zero.size()));
    every_branch_forces_zero = every_branch_forces_zero && !b.forced_zero.empty();
  }
  cert.passed = det != 0 && every_branch_forces_zero;
  return cert;
}

/// Index of the unknown alpha_p(e_q), p != q, in the 12-vector of unknowns.
inline int dai_unknown(int p, int q) { return p * 3 + (q < p ? q : q - 1); }

/// Linear system in the unknowns alpha_p(e_q) = a_p^{-1} da_p(e_q) expressing
/// nabla_{e_k}(J e_i) = J nabla_{e_k} e_i for all k, with
///   nabla_{e_k} e_j = alpha_k(e_j) e_k                   (k != j)
///   nabla_{e_j} e_j = -sum_{m != j} alpha_j(e_m) e_m,
/// and J e_i = sum_j omega(e_i, e_j) e_j read off the frame. Rows are the
/// e_m-components, 16 rows per block i.
inline Matrix dai_system_block(const Matrix& omega, int i) {
  auto nabla = [](int k, int j) {  // 4 x 12: components of nabla_{e_k} e_j
    Matrix M = Matrix::Zero(4, 12);
    if (k != j) {
      M(k, dai_unknown(k, j)) += 1.0;
    } else {
      for (int m = 0; m < 4; ++m)
        if (m != j) M(m, dai_unknown(j, m)) -= 1.0;
    }
    return M;
  };
  Matrix block(16, 12);
  for (int k = 0; k < 4; ++k) {
    Matrix lhs = Matrix::Zero(4, 12);
    for (int j = 0; j < 4; ++j) lhs += omega(i, j) * nabla(k, j);
    // J sum_m c_m e_m = sum_n (sum_m c_m omega(m, n)) e_n
    const Matrix rhs = omega.transpose() * nabla(k, i);
    block.middleRows(4 * k, 4) = lhs - rhs;
  }
  return block;
}

/// Relations da_p(e_q) pattern: each row of the result spans one c_p
/// direction in the 12 unknowns, signs as in
///   da_1(e2) =  da_1(e3) =  da_1(e4)
///   da_2(e1) = -da_2(e3) =  da_2(e4)
///   da_3(e1) =  da_3(e2) = -da_3(e4)
///   da_4(e1) = -da_4(e2) =  da_4(e3).
inline Matrix dai_expected_relations() {
  const int signs[4][4] = {{0, 1, 1, 1}, {1, 0, -1, 1}, {1, 1, 0, -1}, {1, -1, 1, 0}};
  Matrix E = Matrix::Zero(12, 4);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (p != q) E(dai_unknown(p, q), p) = signs[p][q];
  return E;
}

namespace detail {

inline Matrix null_space(const Matrix& A, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = rel_tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int r = 0; r < sv.size(); ++r)
    if (sv[r] > thresh) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

inline int numeric_rank(const Matrix& A, double rel_tol = 1e-10) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  const double thresh = rel_tol * std::max(1.0, sv[0]);
  int rank = 0;
  for (int r = 0; r < sv.size(); ++r)
    if (sv[r] > thresh) ++rank;
  return rank;
}

/// Largest distance of a column of B from the column span of orthonormal Q.
inline double span_gap(const Matrix& Q, const Matrix& B) {
  return (B - Q * (Q.transpose() * B)).colwise().norm().maxCoeff();
}

}  // namespace detail

inline CertificateResult cp2_dai_relations(const Frame& frame, double tol = kAlgTol) {
  if (frame.dim() != 4 || !frame.is_orthonormal()) throw Error(ErrorKind::FrameError, "expects an orthonormal 4-frame");
  if (cp2_frame_defect(frame) > 1e-8) {
    throw Error(ErrorKind::PreconditionViolated, "frame does not realize the canonical complex structure");
  }
  const Matrix omega = standard_complex_structure(2).omega_in(frame.rows());
  CertificateResult cert{"cp2-dai-relations", false, {}, tol};

  Matrix full(64, 12);
  bool ok = true;
  const Matrix E = dai_expected_relations();
  for (int i = 0; i < 4; ++i) {
    const Matrix block = dai_system_block(omega, i);
    full.middleRows(16 * i, 16) = block;
    const Matrix N = detail::null_space(block);
    // restricted to the unknowns alpha_i(.), the solutions form one line
    Matrix own(3, N.cols());
    for (int q = 0, r = 0; q < 4; ++q)
      if (q != i) own.row(r++) = N.row(dai_unknown(i, q));
    const int own_rank = detail::numeric_rank(own);
    const std::string tag = "block" + std::to_string(i + 1);
    cert.add(tag + "_null_dim", static_cast<double>(N.cols()));
    cert.add(tag + "_own_unknowns_rank", own_rank);
    Eigen::HouseholderQR<Matrix> qrN(N);
    const Matrix QN = qrN.householderQ() * Matrix::Identity(N.rows(), N.cols());
    const double gap = detail::span_gap(QN, E);
    cert.add(tag + "_relations_outside_null_space", gap);
    ok = ok && N.cols() == 4 && own_rank == 1 && gap <= tol;
  }

  const Matrix N = detail::null_space(full);
  cert.add("full_null_dim", static_cast<double>(N.cols()));
  double gap_both = 0.0;
  if (N.cols() == 4) {
    const Matrix QE = E.householderQr().householderQ() * Matrix::Identity(12, 4);
    gap_both = std::max(detail::span_gap(N, E), detail::span_gap(QE, N));
  } else {
    ok = false;
  }
  cert.add("subspace_distance", gap_both);
  cert.passed = ok && gap_both <= tol;
  return cert;
}

// ---------------------------------------------------------------------------
// Linear algebra lemma: Jv in Rv + V implies v in V + JV.

enum class LemmaCase { InV, AZero, ANonzero };

struct LemmaDecomposition {
  LemmaCase which = LemmaCase::InV;
  double a = 0.0;           // Jv = a v + w
  Vector coeff_v;           // coefficients on the V basis
  Vector coeff_jv;          // coefficients on J applied to the V basis
  double residual = 0.0;    // |v - (V coeff_v + JV coeff_jv)|
};

inline LemmaDecomposition lemma_easy(const ComplexStructure& J, const Matrix& Vbasis, const Vector& v,
                                     double tol = kAlgTol) {
  const int n = J.dim();
  if (Vbasis.rows() != n || v.size() != n) throw Error(ErrorKind::DimensionMismatch, "vectors must match J");
  const int r = static_cast<int>(Vbasis.cols());
  const Matrix& Jm = J.matrix();
  const Matrix JV = Jm * Vbasis;
  LemmaDecomposition out;

  auto finish = [&](LemmaDecomposition& d) {
    d.residual = (v - Vbasis * d.coeff_v - JV * d.coeff_jv).norm();
    return d;
  };

  const double scale = std::max(1.0, v.norm());
  if (r > 0) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Vbasis);
    const Vector beta = cod.solve(v);
    if ((Vbasis * beta - v).norm() <= tol * scale) {
      out.which = LemmaCase::InV;
      out.coeff_v = beta;
      out.coeff_jv = Vector::Zero(r);
      return finish(out);
    }
  }

  // Jv = a v + w with w = V beta
  Matrix A(n, r + 1);
  A.col(0) = v;
  if (r > 0) A.rightCols(r) = Vbasis;
  const Vector Jv = Jm * v;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  const Vector x = cod.solve(Jv);
  if ((A * x - Jv).norm() > tol * scale) {
    throw Error(ErrorKind::PreconditionViolated, "Jv is not in Rv + V");
  }
  const double a = x[0];
  const Vector beta = x.tail(r);
  out.a = a;
  if (std::abs(a) <= tol) {
    // v = -J w
    out.which = LemmaCase::AZero;
    out.coeff_v = Vector::Zero(r);
    out.coeff_jv = -beta;
  } else {
    // (a + 1/a) v = -w - a^{-1} J w
    out.which = LemmaCase::ANonzero;
    const double s = a + 1.0 / a;
    out.coeff_v = -beta / s;
    out.coeff_jv = -beta / (a * s);
  }
  return finish(out);
}

/// Random complex structure Q J0 Q^T on dimension n (even).
inline ComplexStructure random_complex_structure(int n, Rng& rng) {
  const Matrix Q = haar_orthogonal(n, rng);
  return ComplexStructure(Q * standard_complex_structure(n / 2).matrix() * Q.transpose(), 1e-9);
}

struct LemmaInstance {
  ComplexStructure J;
  Matrix V;
  Vector v;
  double a;
};

/// A random instance satisfying the lemma's hypothesis: v = (J - a)^{-1} w
/// for w in V, so Jv = a v + w. Roughly one in four instances has a = 0.
inline LemmaInstance random_lemma_instance(Rng& rng) {
  std::uniform_int_distribution<int> half(2, 6);
  const int n = 2 * half(rng);
  std::uniform_int_distribution<int> vdim(1, n / 2);
  const int r = vdim(rng);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 3);
  LemmaInstance inst{random_complex_structure(n, rng), standard_normal_matrix(n, r, rng), Vector(), 0.0};
  inst.a = coin(rng) == 0 ? 0.0 : unif(rng);
  const Vector w = inst.V * standard_normal_vector(r, rng);
  const Matrix shifted = inst.J.matrix() - inst.a * Matrix::Identity(n, n);
  inst.v = shifted.partialPivLu().solve(w);
  return inst;
}

inline CertificateResult lemma_easy_battery(int trials, std::uint64_t seed, double tol = 1e-9) {
  if (trials < 1) throw Error(ErrorKind::PreconditionViolated, "trials must be >= 1");
  Rng rng(seed);
  CertificateResult cert{"lemma-easy-battery", false, {}, tol};
  int ok = 0, a_zero = 0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto inst = random_lemma_instance(rng);
    const auto d = lemma_easy(inst.J, inst.V, inst.v);
    worst = std::max(worst, d.residual / std::max(1.0, inst.v.norm()));
    if (d.residual <= tol * std::max(1.0, inst.v.norm())) ++ok;
    if (d.which == LemmaCase::AZero) ++a_zero;
  }
  cert.add("trials", trials);
  cert.add("reconstructed", ok);
  cert.add("a_zero_cases", a_zero);
  cert.add("max_relative_residual", worst);
  cert.passed = ok == trials;
  return cert;
}

// ---------------------------------------------------------------------------
// HP^q

/// a_{ijkl} = sum_alpha omega_alpha(e_i, e_j) omega_alpha(e_k, e_l).
using QuadrupleValues = std::map<Quadruple, double>;

namespace detail {

/// The six unknowns a_{x y z l} with (x, y) an ordered pair from {i, j, k}
/// and z the remaining index.
inline std::array<Quadruple, 6> symmetry_unknowns(int i, int j, int k, int l) {
  return {{{i, j, k, l}, {j, i, k, l}, {j, k, i, l}, {k, j, i, l}, {k, i, j, l}, {i, k, j, l}}};
}

/// Rows: three antisymmetry relations a_{xyzl} + a_{yxzl} = 0, then the three
/// cyclic instances of a_{xzyl} + a_{zyxl} + 2 a_{xyzl} = 0 for
/// (x,y,z) in {(i,j,k), (k,i,j), (j,k,i)}. Columns follow symmetry_unknowns.
inline std::array<std::array<std::int64_t, 6>, 6> symmetry_relations() {
  // unknown order: ij, ji, jk, kj, ki, ik
  return {{{1, 1, 0, 0, 0, 0},
           {0, 0, 1, 1, 0, 0},
           {0, 0, 0, 0, 1, 1},
           {2, 0, 0, 1, 0, 1},    // a_ikjl + a_kjil + 2 a_ijkl
           {0, 1, 0, 1, 2, 0},    // a_kjil + a_jikl + 2 a_kijl
           {0, 1, 2, 0, 0, 1}}};  // a_jikl + a_ikjl + 2 a_jkil
}

}  // namespace detail

/// Checks that values obeying the vanishing relations give
/// a_{ikjl} = a_{kjil} = a_{jikl}.
inline CertificateResult hpq_symmetry_step(const QuadrupleValues& values, int i, int j, int k, int l,
                                           double tol = kAlgTol) {
  const auto keys = detail::symmetry_unknowns(i, j, k, l);
  std::array<double, 6> u{};
  for (int c = 0; c < 6; ++c) {
    auto it = values.find(keys[c]);
    if (it == values.end()) throw Error(ErrorKind::PreconditionViolated, "missing quadruple value");
    u[c] = it->second;
  }
  const auto rel = detail::symmetry_relations();
  double worst_rel = 0.0, scale = 1.0;
  for (double x : u) scale = std::max(scale, std::abs(x));
  for (const auto& row : rel) {
    double s = 0.0;
    for (int c = 0; c < 6; ++c) s += static_cast<double>(row[c]) * u[c];
    worst_rel = std::max(worst_rel, std::abs(s));
  }
  if (worst_rel > tol * scale) throw Error(ErrorKind::PreconditionViolated, "values violate the vanishing relations");

  const double a_ikjl = u[5], a_kjil = u[3], a_jikl = u[1];
  const double spread = std::max({a_ikjl, a_kjil, a_jikl}) - std::min({a_ikjl, a_kjil, a_jikl});
  CertificateResult cert{"hpq-symmetry-step", spread <= tol * scale, {}, tol};
  cert.add("a_ikjl", a_ikjl);
  cert.add("a_kjil", a_kjil);
  cert.add("a_jikl", a_jikl);
  cert.add("spread", spread);
  return cert;
}

/// Exact version: the three differences lie in the integer row space of the
/// relations, so the equalities hold for every solution.
inline bool hpq_symmetry_implication_exact() {
  const auto rel = detail::symmetry_relations();
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : rel) rows.emplace_back(r.begin(), r.end());
  const int base = detail::integer_rank(rows);
  // a_ikjl - a_kjil and a_kjil - a_jikl
  const std::vector<std::vector<std::int64_t>> diffs = {{0, 0, 0, -1, 0, 1}, {0, -1, 0, 1, 0, 0}};
  for (const auto& d : diffs) {
    auto ext = rows;
    ext.push_back(d);
    if (detail::integer_rank(ext) != base) return false;
  }
  return true;
}

/// Samples `trials` random solutions of the relations and checks each one.
inline CertificateResult hpq_symmetry_battery(int trials, std::uint64_t seed, double tol = kAlgTol) {
  Rng rng(seed);
  const auto rel = detail::symmetry_relations();
  Matrix A(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) A(r, c) = static_cast<double>(rel[r][c]);
  const Matrix N = detail::null_space(A);
  CertificateResult cert{"hpq-symmetry-step", false, {}, tol};
  int ok = 0;
  double worst = 0.0;
  const int i = 0, j = 1, k = 2, l = 3;
  const auto keys = detail::symmetry_unknowns(i, j, k, l);
  for (int t = 0; t < trials; ++t) {
    const Vector u = N * standard_normal_vector(static_cast<int>(N.cols()), rng);
    QuadrupleValues values;
    for (int c = 0; c < 6; ++c) values[keys[c]] = u[c];
    const auto res = hpq_symmetry_step(values, i, j, k, l, tol);
    worst = std::max(worst, res.computed.back().value);
    if (res.passed) ++ok;
  }
  const bool exact = hpq_symmetry_implication_exact();
  cert.add("null_space_dim", static_cast<double>(N.cols()));
  cert.add("samples", trials);
  cert.add("equal_within_tolerance", ok);
  cert.add("max_spread", worst);
  cert.add("exact_implication", exact ? 1.0 : 0.0);
  cert.passed = ok == trials && exact && N.cols() >= 1;
  return cert;
}

/// a_{ijkl} at a frame of R^{4q}.
inline double quaternionic_a(const QuaternionTriple& triple, const Frame& frame, const Quadruple& ijkl) {
  double s = 0.0;
  for (int alpha = 0; alpha < 3; ++alpha) {
    const auto& J = triple[alpha];
    s += J.omega(frame.vector(ijkl[0]), frame.vector(ijkl[1])) * J.omega(frame.vector(ijkl[2]), frame.vector(ijkl[3]));
  }
  return s;
}

/// Index k != i maximizing |omega_1(e_i, e_k)|.
inline int hpq_partner_index(const QuaternionTriple& triple, const Frame& frame, int i) {
  int best = -1;
  double best_val = -1.0;
  for (int k = 0; k < frame.dim(); ++k) {
    if (k == i) continue;
    const double v = std::abs(triple.J1.omega(frame.vector(i), frame.vector(k)));
    if (v > best_val) { best_val = v; best = k; }
  }
  return best;
}

/// rank(V + Jbar V) <= 6 < 4q, with V = span(e_i, e_k, J_1 e_i, J_2 e_i, J_3 e_i)
/// and Jbar = sum_a b_a J_a / |b|, b_a = omega_a(e_i, e_k).
inline CertificateResult hpq_span_bound(int q, const Frame& frame, int i, int k, double tol = kAlgTol) {
  if (q < 2) throw Error(ErrorKind::InvalidDimension, "q must be >= 2");
  const int n = 4 * q;
  if (frame.dim() != n || !frame.is_orthonormal()) throw Error(ErrorKind::FrameError, "expects an orthonormal 4q-frame");
  if (i < 0 || k < 0 || i >= n || k >= n || i == k) throw Error(ErrorKind::PreconditionViolated, "need distinct indices");
  const auto triple = standard_quaternion_triple(q);
  const Vector ei = frame.vector(i), ek = frame.vector(k);
  Vector b(3);
  for (int a = 0; a < 3; ++a) b[a] = triple[a].omega(ei, ek);
  if (std::abs(b[0]) <= tol || b.norm() <= tol) throw Error(ErrorKind::DegeneratePair, "omega_1(e_i, e_k) vanishes");

  const Matrix Jbar_m = (b[0] * triple.J1.matrix() + b[1] * triple.J2.matrix() + b[2] * triple.J3.matrix()) / b.norm();
  const ComplexStructure Jbar(Jbar_m, 1e-9);

  Matrix V(n, 5);
  V << ei, ek, triple.J1.apply(ei), triple.J2.apply(ei), triple.J3.apply(ei);
  Matrix gens(n, 10);
  gens << V, Jbar_m * V;
  const int rank = detail::numeric_rank(gens, 1e-9);

  // distance of each e_j from V + Jbar V
  Eigen::JacobiSVD<Matrix> svd(gens, Eigen::ComputeThinU);
  const Matrix Q = svd.matrixU().leftCols(rank);
  double worst_gap = 0.0;
  for (int j = 0; j < n; ++j) worst_gap = std::max(worst_gap, (frame.vector(j) - Q * (Q.transpose() * frame.vector(j))).norm());

  CertificateResult cert{"hpq-span-bound", rank <= 6 && rank < n && worst_gap > 1e-6, {}, tol};
  cert.add("rank", rank);
  cert.add("dimension", n);
  cert.add("|b|", b.norm());
  cert.add("max_distance_of_frame_vector_from_span", worst_gap);
  return cert;
}

/// Span bound at the standard frame and at `random_frames` Haar frames.
inline CertificateResult hpq_span_bound_battery(int q, int random_frames, std::uint64_t seed) {
  const int n = 4 * q;
  const auto triple = standard_quaternion_triple(q);
  CertificateResult cert{"hpq-span-bound", true, {}, kAlgTol};
  int max_rank = 0, checked = 0;
  bool ok = true;
  auto run = [&](const Frame& F, int i) {
    const int k = hpq_partner_index(triple, F, i);
    const auto r = hpq_span_bound(q, F, i, k);
    max_rank = std::max(max_rank, static_cast<int>(r.computed[0].value));
    ok = ok && r.passed;
    ++checked;
  };
  run(Frame(Matrix::Identity(n, n)), 0);
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < random_frames; ++t) {
    const Frame F(haar_orthogonal(n, rng));
    run(F, pick(rng));
  }
  cert.add("q", q);
  cert.add("dimension", n);
  cert.add("frames_checked", checked);
  cert.add("max_rank", max_rank);
  cert.passed = ok && max_rank <= 6 && max_rank < n;
  return cert;
}

// ---------------------------------------------------------------------------
// Suites

inline std::vector<CertificateResult> cp2_suite(int random_frames = 100, std::uint64_t seed = 0) {
  std::vector<CertificateResult> out;
  out.push_back(cp2_canonical_frame_certificate());
  const Frame canonical = cp2_canonical_frame();

  // identity on the canonical frame, an adapted frame and random oriented frames
  CertificateResult rfs{"cp2-rfs-identity", true, {}, kAlgTol};
  double worst = 0.0;
  auto check = [&](const Frame& F) {
    const auto r = cp2_rfs_identity(F);
    worst = std::max(worst, std::abs(r.computed[0].value - r.computed[1].value));
    rfs.passed = rfs.passed && r.passed;
  };
  check(canonical);
  rfs.add("canonical_frame_lhs", cp2_rfs_identity(canonical).computed[0].value);
  check(Frame(Matrix::Identity(4, 4)));
  rfs.add("adapted_frame_lhs", cp2_rfs_identity(Frame(Matrix::Identity(4, 4))).computed[0].value);
  Rng rng(seed);
  for (int t = 0; t < random_frames; ++t) check(Frame(haar_special_orthogonal(4, rng)));
  rfs.add("frames_checked", random_frames + 2);
  rfs.add("max_deviation", worst);
  out.push_back(std::move(rfs));

  out.push_back(cp2_contradiction(canonical));
  out.push_back(cp2_csystem_analysis());
  out.push_back(cp2_dai_relations(canonical));
  return out;
}

inline std::vector<CertificateResult> hpq_suite(int q, int trials = 1000, int random_frames = 100,
                                                std::uint64_t seed = 0) {
  if (q < 2) throw Error(ErrorKind::InvalidDimension, "q must be >= 2");
  std::vector<CertificateResult> out;
  out.push_back(hpq_symmetry_battery(trials, seed));
  out.push_back(lemma_easy_battery(trials, seed));
  out.push_back(hpq_span_bound_battery(q, random_frames, seed));
  return out;
}

}  // namespace orthocoord
