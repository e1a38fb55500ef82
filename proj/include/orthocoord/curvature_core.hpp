#pragma once

// Pointwise linear algebra of the model spaces: frames, complex and
// quaternionic structures, and closed-form curvature tensors.
//
// Curvature convention throughout the library:
//   R_{X,Y} Z = nabla_{[X,Y]} Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z
// and R(X,Y,Z,W) = g(R_{X,Y} Z, W). With this sign the sectional curvature of
// the plane spanned by orthonormal X, Y is R(X,Y,X,Y).

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "orthocoord/error.hpp"
#include "orthocoord/tensor.hpp"

namespace orthocoord {

struct Tolerances {
  double frame = 1e-10;
  double alg = 1e-10;
};

inline constexpr double kFrameTol = 1e-10;
inline constexpr double kAlgTol = 1e-10;

/// Ordered basis of an n-dimensional space; row i holds the components of e_i.
class Frame {
 public:
  Frame() = default;
  explicit Frame(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() != rows_.cols() || rows_.rows() < 1) {
      throw Error(ErrorKind::DimensionMismatch, "frame matrix must be square");
    }
  }

  /// Constructs a frame and checks Euclidean orthonormality.
  static Frame orthonormal(Matrix rows, double tol = kFrameTol) {
    Frame f(std::move(rows));
    if (f.orthonormality_defect() > tol) {
      throw Error(ErrorKind::FrameError, "frame is not orthonormal within tolerance");
    }
    return f;
  }

  int dim() const { return static_cast<int>(rows_.rows()); }
  const Matrix& rows() const { return rows_; }
  Vector vector(int i) const { return rows_.row(i).transpose(); }

  /// max |F F^T - I|.
  double orthonormality_defect() const {
    return (rows_ * rows_.transpose() - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }
  bool is_orthonormal(double tol = kFrameTol) const { return orthonormality_defect() <= tol; }
  double determinant() const { return rows_.determinant(); }

 private:
  Matrix rows_;
};

/// Orthogonal skew endomorphism J with J^2 = -I, acting on column vectors.
/// The associated 2-form is omega(X, Y) = g(JX, Y).
class ComplexStructure {
 public:
  ComplexStructure() = default;
  explicit ComplexStructure(Matrix J, double tol = kAlgTol) : J_(std::move(J)) {
    const auto n = J_.rows();
    if (n != J_.cols() || n < 2 || n % 2 != 0) {
      throw Error(ErrorKind::InvalidDimension, "complex structure needs an even square matrix");
    }
    const Matrix id = Matrix::Identity(n, n);
    if ((J_ * J_ + id).cwiseAbs().maxCoeff() > tol ||
        (J_.transpose() + J_).cwiseAbs().maxCoeff() > tol ||
        (J_.transpose() * J_ - id).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::PreconditionViolated, "matrix is not an orthogonal complex structure");
    }
  }

  int dim() const { return static_cast<int>(J_.rows()); }
  const Matrix& matrix() const { return J_; }
  Vector apply(const Vector& x) const { return J_ * x; }
  double omega(const Vector& x, const Vector& y) const { return (J_ * x).dot(y); }

  /// Matrix of omega(e_i, e_j) for the rows e_i of `frame`.
  Matrix omega_in(const Matrix& frame) const { return frame * J_.transpose() * frame.transpose(); }

 private:
  Matrix J_;
};

struct QuaternionTriple {
  ComplexStructure J1;
  ComplexStructure J2;
  ComplexStructure J3;

  const ComplexStructure& operator[](int alpha) const {
    switch (alpha) {
      case 0: return J1;
      case 1: return J2;
      default: return J3;
    }
  }
  int dim() const { return J1.dim(); }
};

/// J e_{2k-1} = e_{2k}, J e_{2k} = -e_{2k-1} on dimension 2m.
inline ComplexStructure standard_complex_structure(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidDimension, "m must be >= 1");
  Matrix J = Matrix::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    J(2 * k + 1, 2 * k) = 1.0;
    J(2 * k, 2 * k + 1) = -1.0;
  }
  return ComplexStructure(std::move(J));
}

/// Left multiplication by i, j, k on H^q, with each H block in the basis (1, i, j, k).
inline QuaternionTriple standard_quaternion_triple(int q) {
  if (q < 1) throw Error(ErrorKind::InvalidDimension, "q must be >= 1");
  Matrix Li = Matrix::Zero(4, 4), Lj = Matrix::Zero(4, 4), Lk = Matrix::Zero(4, 4);
  // columns are the images of 1, i, j, k
  Li(1, 0) = 1; Li(0, 1) = -1; Li(3, 2) = 1; Li(2, 3) = -1;
  Lj(2, 0) = 1; Lj(3, 1) = -1; Lj(0, 2) = -1; Lj(1, 3) = 1;
  Lk(3, 0) = 1; Lk(2, 1) = 1; Lk(1, 2) = -1; Lk(0, 3) = -1;
  if ((Li * Lj * Lk + Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() != 0.0) Lk = -Lk;

  const int n = 4 * q;
  Matrix J1 = Matrix::Zero(n, n), J2 = Matrix::Zero(n, n), J3 = Matrix::Zero(n, n);
  for (int b = 0; b < q; ++b) {
    J1.block(4 * b, 4 * b, 4, 4) = Li;
    J2.block(4 * b, 4 * b, 4, 4) = Lj;
    J3.block(4 * b, 4 * b, 4, 4) = Lk;
  }
  return {ComplexStructure(std::move(J1)), ComplexStructure(std::move(J2)),
          ComplexStructure(std::move(J3))};
}

/// Algebraic curvature tensor of the form
///   R(X,Y,Z,W) = kappa (g(X,Z) g(Y,W) - g(Y,Z) g(X,W))
///              + sum_a [w_a(X,Z) w_a(Y,W) - w_a(Y,Z) w_a(X,W) + 2 w_a(X,Y) w_a(Z,W)]
/// with w_a(X,Y) = g(J_a X, Y). Constant curvature uses no forms, Fubini-Study
/// (holomorphic sectional curvature 4) uses one, the quaternionic projective
/// space three.
class CurvatureOracle {
 public:
  CurvatureOracle() = default;
  CurvatureOracle(int n, double kappa, std::vector<ComplexStructure> forms, std::string label)
      : n_(n), kappa_(kappa), forms_(std::move(forms)), label_(std::move(label)) {
    if (n < 2) throw Error(ErrorKind::InvalidDimension, "oracle dimension must be >= 2");
    for (const auto& J : forms_) {
      if (J.dim() != n) throw Error(ErrorKind::DimensionMismatch, "form dimension differs from oracle");
    }
  }

  int dim() const { return n_; }
  double kappa() const { return kappa_; }
  const std::vector<ComplexStructure>& forms() const { return forms_; }
  const std::string& label() const { return label_; }

  double operator()(const Vector& X, const Vector& Y, const Vector& Z, const Vector& W) const {
    check(X); check(Y); check(Z); check(W);
    double r = kappa_ * (X.dot(Z) * Y.dot(W) - Y.dot(Z) * X.dot(W));
    for (const auto& J : forms_) {
      const Matrix& M = J.matrix();
      const Vector JX = M * X, JY = M * Y, JZ = M * Z;
      r += JX.dot(Z) * JY.dot(W) - JY.dot(Z) * JX.dot(W) + 2.0 * JX.dot(Y) * JZ.dot(W);
    }
    return r;
  }

  /// All components R(e_i, e_j, e_k, e_l) for the rows e_i of `frame`.
  Tensor4 components(const Matrix& frame) const {
    if (frame.rows() != n_ || frame.cols() != n_) {
      throw Error(ErrorKind::DimensionMismatch, "frame dimension differs from oracle");
    }
    const int n = n_;
    const Matrix G = frame * frame.transpose();
    std::vector<Matrix> omegas;
    omegas.reserve(forms_.size());
    for (const auto& J : forms_) omegas.push_back(J.omega_in(frame));

    Tensor4 T(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double r = kappa_ * (G(i, k) * G(j, l) - G(j, k) * G(i, l));
            for (const auto& O : omegas) {
              r += O(i, k) * O(j, l) - O(j, k) * O(i, l) + 2.0 * O(i, j) * O(k, l);
            }
            T(i, j, k, l) = r;
          }
    return T;
  }

  /// Sectional curvature of span(X, Y), i.e. R(X,Y,X,Y) / |X ^ Y|^2.
  double sectional(const Vector& X, const Vector& Y) const {
    const double area = X.squaredNorm() * Y.squaredNorm() - X.dot(Y) * X.dot(Y);
    if (area <= 0.0) throw Error(ErrorKind::PreconditionViolated, "vectors are linearly dependent");
    return (*this)(X, Y, X, Y) / area;
  }

 private:
  void check(const Vector& v) const {
    if (v.size() != n_) throw Error(ErrorKind::DimensionMismatch, "vector dimension differs from oracle");
  }

  int n_ = 0;
  double kappa_ = 0.0;
  std::vector<ComplexStructure> forms_;
  std::string label_;
};

inline CurvatureOracle constant_curvature_oracle(int n, double kappa) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "n must be >= 2");
  return CurvatureOracle(n, kappa, {}, kappa == 0.0 ? "flat:" + std::to_string(n)
                                                    : "const:" + std::to_string(n));
}

/// Fubini-Study curvature normalized to holomorphic sectional curvature 4.
inline CurvatureOracle fubini_study_oracle(int m) {
  return CurvatureOracle(2 * m, 1.0, {standard_complex_structure(m)}, "cp:" + std::to_string(m));
}

/// Quaternionic projective curvature, quaternionic sectional curvature 4.
inline CurvatureOracle quaternionic_oracle(int q) {
  auto t = standard_quaternion_triple(q);
  return CurvatureOracle(4 * q, 1.0, {t.J1, t.J2, t.J3}, "hp:" + std::to_string(q));
}

struct Flat { int n; };
struct Sphere { int n; };
struct ComplexProjective { int m; };
struct QuaternionicProjective { int q; };

using ModelSpace = std::variant<Flat, Sphere, ComplexProjective, QuaternionicProjective>;

inline int dimension(const ModelSpace& space) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Flat> || std::is_same_v<T, Sphere>) return s.n;
        else if constexpr (std::is_same_v<T, ComplexProjective>) return 2 * s.m;
        else return 4 * s.q;
      },
      space);
}

inline std::string label(const ModelSpace& space) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Flat>) return "flat:" + std::to_string(s.n);
        else if constexpr (std::is_same_v<T, Sphere>) return "sphere:" + std::to_string(s.n);
        else if constexpr (std::is_same_v<T, ComplexProjective>) return "cp:" + std::to_string(s.m);
        else return "hp:" + std::to_string(s.q);
      },
      space);
}

inline void validate(const ModelSpace& space) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Flat> || std::is_same_v<T, Sphere>) {
          if (s.n < 2) throw Error(ErrorKind::InvalidDimension, "n must be >= 2");
        } else if constexpr (std::is_same_v<T, ComplexProjective>) {
          if (s.m < 1) throw Error(ErrorKind::InvalidDimension, "m must be >= 1");
        } else {
          if (s.q < 1) throw Error(ErrorKind::InvalidDimension, "q must be >= 1");
        }
      },
      space);
}

inline CurvatureOracle oracle_for(const ModelSpace& space) {
  validate(space);
  return std::visit(
      [](const auto& s) -> CurvatureOracle {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Flat>) return constant_curvature_oracle(s.n, 0.0);
        else if constexpr (std::is_same_v<T, Sphere>)
          return CurvatureOracle(s.n, 1.0, {}, "sphere:" + std::to_string(s.n));
        else if constexpr (std::is_same_v<T, ComplexProjective>) return fubini_study_oracle(s.m);
        else return quaternionic_oracle(s.q);
      },
      space);
}

/// Parses "flat:N", "sphere:N", "cp:M" or "hp:Q".
inline ModelSpace parse_model_space(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "expected name:int, got '" + text + "'");
  const std::string name = text.substr(0, colon);
  const std::string num = text.substr(colon + 1);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos || num.size() > 6) {
    throw Error(ErrorKind::ParseError, "expected a positive integer after ':' in '" + text + "'");
  }
  const int v = std::stoi(num);
  ModelSpace space;
  if (name == "flat") space = Flat{v};
  else if (name == "sphere") space = Sphere{v};
  else if (name == "cp") space = ComplexProjective{v};
  else if (name == "hp") space = QuaternionicProjective{v};
  else throw Error(ErrorKind::ParseError, "unknown space '" + name + "'");
  validate(space);
  return space;
}

}  // namespace orthocoord
