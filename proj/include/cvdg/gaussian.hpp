#pragma once

// Gaussian states: covariance algebra, validity, Wigner and characteristic
// functions, Williamson / Bloch-Messiah decompositions and the split of a
// covariance matrix into a pure squeezed part plus classical noise.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "cvdg/errors.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg {

namespace tol {
inline constexpr double symmetry = 1e-10;
inline constexpr double validity = 1e-9;
inline constexpr double symplectic = 1e-8;
inline constexpr double degenerate_spectrum = 1e-9;
}  // namespace tol

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& S, double tolerance = tol::symplectic) {
  using Scalar = typename Derived::Scalar;
  if (S.rows() != S.cols() || S.rows() % 2 != 0) return false;
  const PhaseMatrix<Scalar> J = symplectic_form<Scalar>(S.rows() / 2);
  const PhaseMatrix<Scalar> residual = S.transpose() * J * S - J;
  return static_cast<double>(residual.cwiseAbs().maxCoeff()) <= tolerance;
}

/// Symmetric 2m x 2m matrix. Quantum validity is not enforced here because
/// the classical-noise part of a split is only positive semidefinite.
template <typename Scalar = double>
class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;

  explicit CovarianceMatrix(PhaseMatrix<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw DimensionError("covariance matrix must be square");
    mode_count(entries_.rows());
    const double asym = entries_.rows() == 0
                            ? 0.0
                            : static_cast<double>((entries_ - entries_.transpose()).cwiseAbs().maxCoeff());
    if (asym > tol::symmetry) {
      throw InvalidStateError("covariance matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                              ")");
    }
    entries_ = (entries_ + entries_.transpose()) / Scalar(2);
  }

  static CovarianceMatrix vacuum(Eigen::Index m) {
    return CovarianceMatrix(PhaseMatrix<Scalar>::Identity(2 * m, 2 * m));
  }

  static CovarianceMatrix thermal(Eigen::Index m, Scalar nu) {
    return CovarianceMatrix(nu * PhaseMatrix<Scalar>::Identity(2 * m, 2 * m));
  }

  const PhaseMatrix<Scalar>& matrix() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }
  Eigen::Index modes() const { return entries_.rows() / 2; }

 private:
  PhaseMatrix<Scalar> entries_;
};

struct ValidityReport {
  bool valid = false;
  double min_eigenvalue = 0.0;
  std::string diagnostic;
};

/// Uncertainty relation V + iJ >= 0, decided on the Hermitian spectrum.
template <typename Scalar>
ValidityReport validate(const CovarianceMatrix<Scalar>& V) {
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = V.modes();
  const CMatrix H = V.matrix().template cast<Complex>() +
                    Complex(0, 1) * symplectic_form<Scalar>(m).template cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H, Eigen::EigenvaluesOnly);
  ValidityReport report;
  report.min_eigenvalue = static_cast<double>(solver.eigenvalues().minCoeff());
  report.valid = report.min_eigenvalue >= -tol::validity;
  report.diagnostic = report.valid ? "uncertainty relation satisfied"
                                   : "uncertainty relation violated: min eig(V + iJ) = " +
                                         std::to_string(report.min_eigenvalue);
  return report;
}

template <typename Scalar = double>
class GaussianState {
 public:
  GaussianState(CovarianceMatrix<Scalar> V, PhaseVector<Scalar> xi) : V_(std::move(V)), xi_(std::move(xi)) {
    if (xi_.size() != V_.dimension()) throw DimensionError("displacement length does not match V");
    const ValidityReport report = validate(V_);
    if (!report.valid) throw InvalidStateError(report.diagnostic);
  }

  explicit GaussianState(CovarianceMatrix<Scalar> V)
      : GaussianState(V, PhaseVector<Scalar>::Zero(V.dimension())) {}

  const CovarianceMatrix<Scalar>& covariance() const { return V_; }
  const PhaseMatrix<Scalar>& V() const { return V_.matrix(); }
  const PhaseVector<Scalar>& xi() const { return xi_; }
  Eigen::Index modes() const { return V_.modes(); }
  bool is_displaced() const { return xi_.squaredNorm() > Scalar(0); }

 private:
  CovarianceMatrix<Scalar> V_;
  PhaseVector<Scalar> xi_;
};

/// Cholesky factor with a singularity check; shared by every V^{-1} user.
template <typename Scalar>
Eigen::LLT<PhaseMatrix<Scalar>> factorise(const PhaseMatrix<Scalar>& V) {
  Eigen::LLT<PhaseMatrix<Scalar>> llt(V);
  if (llt.info() != Eigen::Success) throw SingularMatrixError("matrix is not positive definite");
  if (static_cast<double>(llt.matrixLLT().diagonal().minCoeff()) <= 1e-150) {
    throw SingularMatrixError("matrix is singular");
  }
  return llt;
}

template <typename Scalar>
Scalar log_determinant(const Eigen::LLT<PhaseMatrix<Scalar>>& llt) {
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

/// exp(-(b-xi)^T V^{-1} (b-xi) / 2) / ((2 pi)^m sqrt(det V))
template <typename Scalar, typename Derived>
Scalar gaussian_wigner(const PhaseMatrix<Scalar>& V, const PhaseVector<Scalar>& xi,
                       const Eigen::MatrixBase<Derived>& beta) {
  using std::exp;
  require_same_dimension(V, beta);
  const auto llt = factorise<Scalar>(V);
  const PhaseVector<Scalar> d = beta - xi;
  const Scalar quad = d.dot(llt.solve(d));
  const Scalar m = static_cast<Scalar>(V.rows() / 2);
  const Scalar log_norm = m * std::log(Scalar(2) * Scalar(EIGEN_PI)) + log_determinant(llt) / Scalar(2);
  return exp(-quad / Scalar(2) - log_norm);
}

template <typename Scalar, typename Derived>
Scalar gaussian_wigner(const GaussianState<Scalar>& state, const Eigen::MatrixBase<Derived>& beta) {
  return gaussian_wigner(state.V(), state.xi(), beta);
}

/// exp(-(a, V a)/2 + i (xi, a))
template <typename Scalar, typename Derived>
std::complex<Scalar> gaussian_characteristic(const GaussianState<Scalar>& state,
                                             const Eigen::MatrixBase<Derived>& alpha) {
  require_same_dimension(state.V(), alpha);
  const Scalar quad = alpha.dot(state.V() * alpha);
  return std::exp(std::complex<Scalar>(-quad / Scalar(2), state.xi().dot(alpha)));
}

/// Purity tr(rho^2) = 1 / sqrt(det V).
template <typename Scalar>
Scalar gaussian_purity(const PhaseMatrix<Scalar>& V) {
  return std::exp(-log_determinant(factorise<Scalar>(V)) / Scalar(2));
}

template <typename Scalar>
PhaseMatrix<Scalar> symmetric_sqrt(const PhaseMatrix<Scalar>& V) {
  Eigen::SelfAdjointEigenSolver<PhaseMatrix<Scalar>> solver(V);
  if (static_cast<double>(solver.eigenvalues().minCoeff()) <= 0.0) {
    throw InvalidStateError("matrix is not positive definite");
  }
  return solver.eigenvectors() * solver.eigenvalues().cwiseSqrt().asDiagonal() *
         solver.eigenvectors().transpose();
}

/// V = S^T Delta S. `spectrum` holds the m symplectic eigenvalues in
/// descending order; Delta duplicates them at (i, m+i).
template <typename Scalar = double>
struct WilliamsonDecomposition {
  PhaseMatrix<Scalar> S;
  PhaseVector<Scalar> spectrum;

  PhaseMatrix<Scalar> Delta() const {
    const Eigen::Index m = spectrum.size();
    PhaseVector<Scalar> d(2 * m);
    d << spectrum, spectrum;
    return d.asDiagonal();
  }
};

template <typename Scalar>
WilliamsonDecomposition<Scalar> williamson(const CovarianceMatrix<Scalar>& V) {
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = V.modes();
  const PhaseMatrix<Scalar> root = symmetric_sqrt(V.matrix());
  const PhaseMatrix<Scalar> K = root * symplectic_form<Scalar>(m) * root;

  // iK is Hermitian with spectrum +-nu; for iK w = nu w the real and imaginary
  // parts of sqrt(2) w satisfy K u = nu v, K v = -nu u.
  const CMatrix iK = Complex(0, 1) * K.template cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(iK);
  PhaseMatrix<Scalar> R(2 * m, 2 * m);
  PhaseVector<Scalar> nu(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index col = 2 * m - 1 - i;  // ascending order, so positive ones come last
    nu(i) = solver.eigenvalues()(col);
    const auto w = solver.eigenvectors().col(col);
    R.col(i) = std::sqrt(Scalar(2)) * w.real();
    R.col(m + i) = std::sqrt(Scalar(2)) * w.imag();
  }
  if (static_cast<double>(nu.minCoeff()) <= 0.0) throw InvalidStateError("V is not positive definite");

  PhaseVector<Scalar> inv_root_delta(2 * m);
  inv_root_delta << nu.cwiseSqrt().cwiseInverse(), nu.cwiseSqrt().cwiseInverse();
  WilliamsonDecomposition<Scalar> out;
  out.S = inv_root_delta.asDiagonal() * R.transpose() * root;
  out.spectrum = nu;
  return out;
}

/// S = O' K O with O, O' orthogonal symplectic and K = diag(k, 1/k), k <= 1.
template <typename Scalar = double>
struct BlochMessiahDecomposition {
  PhaseMatrix<Scalar> O_prime;
  PhaseVector<Scalar> K;  // diagonal of K, length 2m
  PhaseMatrix<Scalar> O;

  PhaseMatrix<Scalar> reconstruct() const { return O_prime * K.asDiagonal() * O; }
};

/// Symplectic eigenbasis of a symmetric, positive, symplectic P, i.e. the
/// orthogonal symplectic O with O P O^T = diag(k^2, 1/k^2) and k <= 1.
template <typename Scalar = double>
struct SymplecticEigenbasis {
  PhaseMatrix<Scalar> O;
  PhaseVector<Scalar> eigenvalues;  // diagonal of O P O^T, length 2m
};

template <typename Scalar>
SymplecticEigenbasis<Scalar> symplectic_eigenbasis(const PhaseMatrix<Scalar>& P) {
  const Eigen::Index m = mode_count(P.rows());
  Eigen::SelfAdjointEigenSolver<PhaseMatrix<Scalar>> solver(P);
  const PhaseMatrix<Scalar> modes = symplectic_gram_schmidt<Scalar>(solver.eigenvectors(), m);
  if (modes.cols() != m) throw InvalidStateError("matrix has no symplectic eigenbasis");
  SymplecticEigenbasis<Scalar> out;
  PhaseMatrix<Scalar> Ot(2 * m, 2 * m);
  Ot.leftCols(m) = modes;
  Ot.rightCols(m) = apply_J_left(modes);
  out.O = Ot.transpose();
  out.eigenvalues = (out.O * P * Ot).diagonal();
  return out;
}

template <typename Scalar>
BlochMessiahDecomposition<Scalar> bloch_messiah(const PhaseMatrix<Scalar>& S) {
  if (!is_symplectic(S)) throw InvalidStateError("bloch_messiah: input is not symplectic");
  const SymplecticEigenbasis<Scalar> eig = symplectic_eigenbasis<Scalar>(S.transpose() * S);
  BlochMessiahDecomposition<Scalar> out;
  out.O = eig.O;
  out.K = eig.eigenvalues.cwiseMax(Scalar(0)).cwiseSqrt();
  out.O_prime = S * out.O.transpose() * out.K.cwiseInverse().asDiagonal();
  return out;
}

/// V = Vs + Vc with Vs = O^T K^2 O pure and Vc >= 0.
template <typename Scalar = double>
struct PurificationSplit {
  CovarianceMatrix<Scalar> Vs;
  CovarianceMatrix<Scalar> Vc;
};

template <typename Scalar>
PurificationSplit<Scalar> purification_split(const CovarianceMatrix<Scalar>& V) {
  const WilliamsonDecomposition<Scalar> w = williamson(V);
  const BlochMessiahDecomposition<Scalar> bm = bloch_messiah<Scalar>(w.S);
  const PhaseMatrix<Scalar> Vs = bm.O.transpose() * bm.K.cwiseAbs2().asDiagonal() * bm.O;
  PhaseMatrix<Scalar> Vs_sym = (Vs + Vs.transpose()) / Scalar(2);
  PhaseMatrix<Scalar> Vc = V.matrix() - Vs_sym;
  Vc = (Vc + Vc.transpose()) / Scalar(2);
  return {CovarianceMatrix<Scalar>(std::move(Vs_sym)), CovarianceMatrix<Scalar>(std::move(Vc))};
}

template <typename Scalar = double>
struct SupermodeBasis {
  SymplecticBasis<Scalar> basis;
  PhaseVector<Scalar> variances;  // (e_i, Vs e_i) then (Je_i, Vs Je_i)
  bool degenerate = false;        // basis not unique: some k equal to 1 or to each other
};

template <typename Scalar>
SupermodeBasis<Scalar> supermode_basis(const PurificationSplit<Scalar>& split) {
  const Eigen::Index m = split.Vs.modes();
  const SymplecticEigenbasis<Scalar> eig = symplectic_eigenbasis<Scalar>(split.Vs.matrix());
  bool degenerate = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double ki = static_cast<double>(eig.eigenvalues(i));
    if (std::abs(ki - 1.0) <= tol::degenerate_spectrum) degenerate = true;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(ki - static_cast<double>(eig.eigenvalues(j))) <= tol::degenerate_spectrum) degenerate = true;
    }
  }
  return {SymplecticBasis<Scalar>(PhaseMatrix<Scalar>(eig.O.transpose())), eig.eigenvalues, degenerate};
}

}  // namespace cvdg
