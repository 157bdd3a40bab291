#pragma once

// Symplectic phase-space primitives.
//
// Quadratures are ordered (x_1..x_m, p_1..p_m). The symplectic form is
// J = [[0, -1], [1, 0]] in that block layout, so that J e_x(i) = e_p(i) and
// [Q(f1), Q(f2)] = -2i (f1, J f2) gives [X, P] = 2i with unit shot noise.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "cvdg/errors.hpp"

namespace cvdg {

template <typename Scalar>
using PhaseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using PhaseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace tol {
inline constexpr double mode_norm = 1e-10;
inline constexpr double basis = 1e-10;
inline constexpr double orthogonal_symplectic = 1e-10;
}  // namespace tol

inline Eigen::Index mode_count(Eigen::Index dimension) {
  if (dimension % 2 != 0) {
    throw DimensionError("phase-space dimension must be even, got " + std::to_string(dimension));
  }
  return dimension / 2;
}

template <typename Scalar = double>
PhaseMatrix<Scalar> symplectic_form(Eigen::Index modes) {
  PhaseMatrix<Scalar> J = PhaseMatrix<Scalar>::Zero(2 * modes, 2 * modes);
  J.topRightCorner(modes, modes) = -PhaseMatrix<Scalar>::Identity(modes, modes);
  J.bottomLeftCorner(modes, modes) = PhaseMatrix<Scalar>::Identity(modes, modes);
  return J;
}

/// Jv without forming J.
template <typename Derived>
PhaseVector<typename Derived::Scalar> apply_J(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index m = mode_count(v.size());
  PhaseVector<typename Derived::Scalar> out(v.size());
  out.head(m) = -v.tail(m);
  out.tail(m) = v.head(m);
  return out;
}

/// J M, column by column.
template <typename Derived>
PhaseMatrix<typename Derived::Scalar> apply_J_left(const Eigen::MatrixBase<Derived>& M) {
  const Eigen::Index m = mode_count(M.rows());
  PhaseMatrix<typename Derived::Scalar> out(M.rows(), M.cols());
  out.topRows(m) = -M.bottomRows(m);
  out.bottomRows(m) = M.topRows(m);
  return out;
}

template <typename DerivedA, typename DerivedB>
void require_same_dimension(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
  }
}

/// (f1, J f2). Antisymmetric; (e_x, J e_p) = -1.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar symplectic_product(const Eigen::MatrixBase<DerivedA>& f1,
                                             const Eigen::MatrixBase<DerivedB>& f2) {
  require_same_dimension(f1, f2);
  return f1.dot(apply_J(f2));
}

template <typename Derived>
void require_normalised(const Eigen::MatrixBase<Derived>& g, double tolerance = tol::mode_norm) {
  mode_count(g.size());
  const double deviation = std::abs(static_cast<double>(g.norm()) - 1.0);
  if (deviation > tolerance) {
    throw NotNormalisedError("mode vector is not normalised (|norm - 1| = " + std::to_string(deviation) +
                             ")");
  }
}

/// P_g + P_Jg: the rank-2 projector onto the phase space of the mode g.
template <typename Derived>
PhaseMatrix<typename Derived::Scalar> mode_projector(const Eigen::MatrixBase<Derived>& g) {
  require_normalised(g);
  const PhaseVector<typename Derived::Scalar> Jg = apply_J(g);
  return g * g.transpose() + Jg * Jg.transpose();
}

template <typename Derived>
bool is_orthogonal_symplectic(const Eigen::MatrixBase<Derived>& O,
                              double tolerance = tol::orthogonal_symplectic) {
  using Scalar = typename Derived::Scalar;
  if (O.rows() != O.cols() || O.rows() % 2 != 0) return false;
  const Eigen::Index n = O.rows();
  const PhaseMatrix<Scalar> J = symplectic_form<Scalar>(n / 2);
  const PhaseMatrix<Scalar> orth = O.transpose() * O - PhaseMatrix<Scalar>::Identity(n, n);
  const PhaseMatrix<Scalar> comm = O * J - J * O;
  return static_cast<double>(orth.cwiseAbs().maxCoeff()) <= tolerance &&
         static_cast<double>(comm.cwiseAbs().maxCoeff()) <= tolerance;
}

/// Orthonormal symplectic basis (or a fragment of one) stored column-wise as
/// [e(1)..e(k), Je(1)..Je(k)] in an ambient phase space of m >= k modes.
template <typename Scalar = double>
class SymplecticBasis {
 public:
  /// Builds the basis from the first-half vectors e(i) (columns of `modes`).
  static SymplecticBasis from_modes(const PhaseMatrix<Scalar>& modes) {
    const Eigen::Index k = modes.cols();
    PhaseMatrix<Scalar> columns(modes.rows(), 2 * k);
    columns.leftCols(k) = modes;
    columns.rightCols(k) = apply_J_left(modes);
    return SymplecticBasis(std::move(columns));
  }

  static SymplecticBasis standard(Eigen::Index m) {
    return SymplecticBasis(PhaseMatrix<Scalar>::Identity(2 * m, 2 * m));
  }

  explicit SymplecticBasis(PhaseMatrix<Scalar> columns) : columns_(std::move(columns)) {
    mode_count(columns_.rows());
    if (columns_.cols() % 2 != 0 || columns_.cols() == 0 || columns_.cols() > columns_.rows()) {
      throw DimensionError("symplectic basis needs 2k columns with 0 < k <= m");
    }
    const Eigen::Index k = columns_.cols() / 2;
    const PhaseMatrix<Scalar> gram =
        columns_.transpose() * columns_ - PhaseMatrix<Scalar>::Identity(2 * k, 2 * k);
    if (static_cast<double>(gram.cwiseAbs().maxCoeff()) > tol::basis) {
      throw InvalidStateError("symplectic basis vectors are not orthonormal");
    }
    const PhaseMatrix<Scalar> closure = columns_.rightCols(k) - apply_J_left(columns_.leftCols(k));
    if (static_cast<double>(closure.cwiseAbs().maxCoeff()) > tol::basis) {
      throw InvalidStateError("second half of the basis is not J applied to the first half");
    }
  }

  Eigen::Index modes() const { return columns_.cols() / 2; }
  Eigen::Index ambient_modes() const { return columns_.rows() / 2; }
  bool is_complete() const { return modes() == ambient_modes(); }
  const PhaseMatrix<Scalar>& matrix() const { return columns_; }
  PhaseVector<Scalar> vector(Eigen::Index i) const { return columns_.col(i); }
  PhaseVector<Scalar> mode(Eigen::Index i) const { return columns_.col(i); }

 private:
  PhaseMatrix<Scalar> columns_;
};

/// Symplectic Gram-Schmidt: takes candidate vectors in order and returns the
/// first-half vectors e(1).. of an orthonormal symplectic family, each new
/// vector orthogonal to all previous e(j) and Je(j). Candidates that fall
/// (numerically) into the span already built are skipped.
template <typename Scalar>
PhaseMatrix<Scalar> symplectic_gram_schmidt(const PhaseMatrix<Scalar>& candidates,
                                            Eigen::Index max_modes = -1) {
  const Eigen::Index dim = candidates.rows();
  const Eigen::Index m = mode_count(dim);
  if (max_modes < 0 || max_modes > m) max_modes = m;
  std::vector<PhaseVector<Scalar>> accepted;
  for (Eigen::Index c = 0; c < candidates.cols() && static_cast<Eigen::Index>(accepted.size()) < max_modes;
       ++c) {
    PhaseVector<Scalar> v = candidates.col(c);
    const Scalar scale = v.norm();
    if (scale == Scalar(0)) continue;
    v /= scale;
    // two passes for numerical orthogonality
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : accepted) {
        const PhaseVector<Scalar> Je = apply_J(e);
        v -= e.dot(v) * e;
        v -= Je.dot(v) * Je;
      }
    }
    const Scalar norm = v.norm();
    if (norm < Scalar(0.5)) continue;
    accepted.push_back(v / norm);
  }
  PhaseMatrix<Scalar> out(dim, static_cast<Eigen::Index>(accepted.size()));
  for (std::size_t i = 0; i < accepted.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = accepted[i];
  return out;
}

/// Completes the given first-half vectors to a full symplectic basis, using
/// the standard amplitude/phase axes as fill-in candidates.
template <typename Scalar>
SymplecticBasis<Scalar> complete_symplectic_basis(const PhaseMatrix<Scalar>& leading) {
  const Eigen::Index dim = leading.rows();
  PhaseMatrix<Scalar> candidates(dim, leading.cols() + dim);
  candidates.leftCols(leading.cols()) = leading;
  candidates.rightCols(dim) = PhaseMatrix<Scalar>::Identity(dim, dim);
  const PhaseMatrix<Scalar> modes = symplectic_gram_schmidt<Scalar>(candidates);
  return SymplecticBasis<Scalar>::from_modes(modes);
}

/// Orthogonal symplectic matrix whose columns are the basis vectors, i.e. it
/// maps the standard axes e_x(i) -> e(i), e_p(i) -> Je(i).
template <typename Scalar>
PhaseMatrix<Scalar> basis_change(const SymplecticBasis<Scalar>& basis) {
  if (!basis.is_complete()) throw DimensionError("basis_change needs a complete basis");
  return basis.matrix();
}

}  // namespace cvdg
