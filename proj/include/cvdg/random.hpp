#pragma once

// Random symplectic structures for property tests and sweeps.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "cvdg/degauss.hpp"
#include "cvdg/gaussian.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg {

using Rng = std::mt19937_64;

/// Haar-like orthogonal symplectic matrix [[X, -Y], [Y, X]] from the unitary
/// X + iY of a complex Gaussian QR.
template <typename Scalar = double>
PhaseMatrix<Scalar> random_orthogonal_symplectic(Eigen::Index m, Rng& rng) {
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  std::normal_distribution<double> normal;
  CMatrix Z(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) Z(i, j) = Complex(Scalar(normal(rng)), Scalar(normal(rng)));
  }
  Eigen::HouseholderQR<CMatrix> qr(Z);
  CMatrix Q = qr.householderQ();
  const CMatrix R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex r = R(j, j);
    if (std::abs(r) > Scalar(0)) Q.col(j) *= r / std::abs(r);
  }
  PhaseMatrix<Scalar> O(2 * m, 2 * m);
  O.topLeftCorner(m, m) = Q.real();
  O.topRightCorner(m, m) = -Q.imag();
  O.bottomLeftCorner(m, m) = Q.imag();
  O.bottomRightCorner(m, m) = Q.real();
  return O;
}

/// diag(k, 1/k) with k^2 = 10^(-s/10) and s uniform in [0, max_db] per mode.
template <typename Scalar = double>
PhaseVector<Scalar> random_squeezing(Eigen::Index m, double max_db, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, max_db);
  PhaseVector<Scalar> k(2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double kj = std::pow(10.0, -uniform(rng) / 20.0);
    k(j) = Scalar(kj);
    k(m + j) = Scalar(1.0 / kj);
  }
  return k;
}

/// O' K O with random passive factors and squeezing up to max_db.
template <typename Scalar = double>
PhaseMatrix<Scalar> random_symplectic(Eigen::Index m, double max_db, Rng& rng) {
  const PhaseMatrix<Scalar> O1 = random_orthogonal_symplectic<Scalar>(m, rng);
  const PhaseVector<Scalar> k = random_squeezing<Scalar>(m, max_db, rng);
  const PhaseMatrix<Scalar> O2 = random_orthogonal_symplectic<Scalar>(m, rng);
  return O1 * k.asDiagonal() * O2;
}

/// S^T Delta S with symplectic eigenvalues uniform in [1, max_nu] (all 1 when
/// max_nu <= 1, giving a pure state).
template <typename Scalar = double>
CovarianceMatrix<Scalar> random_covariance(Eigen::Index m, double max_db, double max_nu, Rng& rng) {
  const PhaseMatrix<Scalar> S = random_symplectic<Scalar>(m, max_db, rng);
  PhaseVector<Scalar> delta(2 * m);
  std::uniform_real_distribution<double> uniform(1.0, std::max(1.0, max_nu));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double nu = max_nu > 1.0 ? uniform(rng) : 1.0;
    delta(j) = delta(m + j) = Scalar(nu);
  }
  PhaseMatrix<Scalar> V = S.transpose() * delta.asDiagonal() * S;
  return CovarianceMatrix<Scalar>(PhaseMatrix<Scalar>((V + V.transpose()) / Scalar(2)));
}

template <typename Scalar = double>
PhaseVector<Scalar> random_mode(Eigen::Index m, Rng& rng) {
  std::normal_distribution<double> normal;
  PhaseVector<Scalar> g(2 * m);
  for (Eigen::Index i = 0; i < 2 * m; ++i) g(i) = Scalar(normal(rng));
  return g / g.norm();
}

template <typename Scalar = double>
PhaseVector<Scalar> random_vector(Eigen::Index m, double norm, Rng& rng) {
  return random_mode<Scalar>(m, rng) * Scalar(norm);
}

/// k random modes with Dirichlet-like weights; not necessarily orthogonal.
template <typename Scalar = double>
SubtractionSpec<Scalar> random_spec(Eigen::Index m, int k, Process process, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  std::vector<ModeComponent<Scalar>> comps;
  Scalar total(0);
  for (int i = 0; i < k; ++i) {
    comps.push_back({random_mode<Scalar>(m, rng), Scalar(uniform(rng))});
    total += comps.back().gamma;
  }
  for (auto& c : comps) c.gamma /= total;
  return SubtractionSpec<Scalar>(process, std::move(comps));
}

}  // namespace cvdg
