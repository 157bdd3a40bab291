#pragma once

// Reduced states on a subset of modes and their purity.

#include <Eigen/Dense>

#include <cmath>
#include <optional>

#include "cvdg/degauss.hpp"
#include "cvdg/errors.hpp"
#include "cvdg/gaussian.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg {

/// Symplectic basis fragment [v(1)..v(m'), Jv(1)..Jv(m')] spanning the kept modes.
template <typename Scalar = double>
class ModeSubset {
 public:
  explicit ModeSubset(SymplecticBasis<Scalar> basis) : basis_(std::move(basis)) {}

  static ModeSubset single(const PhaseVector<Scalar>& g) {
    require_normalised(g);
    return ModeSubset(SymplecticBasis<Scalar>::from_modes(PhaseMatrix<Scalar>(g)));
  }

  /// Standard modes with the given (0-based) indices.
  static ModeSubset standard(Eigen::Index m, const std::vector<Eigen::Index>& indices) {
    PhaseMatrix<Scalar> modes = PhaseMatrix<Scalar>::Zero(2 * m, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 0 || indices[i] >= m) throw DimensionError("mode index out of range");
      modes(indices[i], static_cast<Eigen::Index>(i)) = Scalar(1);
    }
    return ModeSubset(SymplecticBasis<Scalar>::from_modes(modes));
  }

  const SymplecticBasis<Scalar>& basis() const { return basis_; }
  Eigen::Index modes() const { return basis_.modes(); }

 private:
  SymplecticBasis<Scalar> basis_;
};

template <typename Scalar = double>
struct ReducedDegaussedState {
  PhaseMatrix<Scalar> Vred;
  PhaseMatrix<Scalar> Ared;  // zero for a Gaussian state
  std::optional<Process> process;

  Eigen::Index modes() const { return Vred.rows() / 2; }
};

namespace detail {

template <typename Scalar>
PhaseMatrix<Scalar> restrict_to(const PhaseMatrix<Scalar>& X, const ModeSubset<Scalar>& subset) {
  const PhaseMatrix<Scalar>& B = subset.basis().matrix();
  require_same_dimension(X, B);
  PhaseMatrix<Scalar> out = B.transpose() * X * B;
  return (out + out.transpose()) / Scalar(2);
}

}  // namespace detail

/// Vred(i, j) = (b_i, V b_j) and Ared(i, j) = (b_i, A b_j) over the subset basis.
template <typename Scalar>
ReducedDegaussedState<Scalar> reduce(const DegaussedState<Scalar>& state, const ModeSubset<Scalar>& subset) {
  return {detail::restrict_to(state.base().V(), subset), detail::restrict_to(state.A(), subset), state.process()};
}

template <typename Scalar>
ReducedDegaussedState<Scalar> reduce(const GaussianState<Scalar>& state, const ModeSubset<Scalar>& subset) {
  const Eigen::Index k = 2 * subset.modes();
  return {detail::restrict_to(state.V(), subset), PhaseMatrix<Scalar>::Zero(k, k), std::nullopt};
}

/// ((b, Vred^{-1} Ared Vred^{-1} b) - tr(Vred^{-1} Ared) + 2) W_G(b; Vred) / 2,
/// normalised with (2 pi)^{m'} for the reduced mode count m'.
template <typename Scalar, typename Derived>
Scalar reduced_wigner(const ReducedDegaussedState<Scalar>& red, const Eigen::MatrixBase<Derived>& beta) {
  require_same_dimension(red.Vred, beta);
  const auto llt = factorise<Scalar>(red.Vred);
  const PhaseVector<Scalar> y = llt.solve(PhaseVector<Scalar>(beta));
  const PhaseMatrix<Scalar> VinvA = llt.solve(red.Ared);
  const Scalar poly = (y.dot(red.Ared * y) - VinvA.trace() + Scalar(2)) / Scalar(2);
  return poly * gaussian_wigner<Scalar>(red.Vred, PhaseVector<Scalar>::Zero(red.Vred.rows()), beta);
}

/// (4 pi)^{m'} int W^2. With W = (q(b) + c) G(b) / 2, q(b) = (b, M b),
/// M = Vred^{-1} Ared Vred^{-1}, c = 2 - tr(Vred^{-1} Ared), and G^2
/// proportional to a Gaussian of covariance Sigma = Vred / 2:
///   mu = [(tr(M Sigma) + c)^2 + 2 tr((M Sigma)^2)] / (4 sqrt(det Vred)).
template <typename Scalar>
Scalar purity(const ReducedDegaussedState<Scalar>& red) {
  const auto llt = factorise<Scalar>(red.Vred);
  const PhaseMatrix<Scalar> VinvA = llt.solve(red.Ared);
  // M Sigma = Vred^{-1} Ared / 2
  const PhaseMatrix<Scalar> MS = VinvA / Scalar(2);
  const Scalar c = Scalar(2) - VinvA.trace();
  const Scalar mean = MS.trace() + c;
  const Scalar quartic = mean * mean + Scalar(2) * (MS * MS).trace();
  return quartic / Scalar(4) * std::exp(-log_determinant(llt) / Scalar(2));
}

}  // namespace cvdg
