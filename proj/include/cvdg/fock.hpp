#pragma once

// Brute-force oracle: density matrices in a truncated Fock basis for at most
// two modes. Basis index of |n1, n2> is n1 * (cutoff + 1) + n2.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "cvdg/degauss.hpp"
#include "cvdg/gaussian.hpp"

namespace cvdg::fock {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr int default_cutoff = 25;
inline constexpr double default_leakage_threshold = 1e-6;
inline constexpr int max_modes = 2;

class FockState {
 public:
  FockState(int modes, int cutoff, CMatrix rho, double leakage = 0.0);

  /// |n1, ..., nm><n1, ..., nm|
  static FockState number_state(const std::vector<int>& photons, int cutoff = default_cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int local_dimension() const { return cutoff_ + 1; }
  const CMatrix& rho() const { return rho_; }
  /// Probability lost to truncation while building this state.
  double leakage() const { return leakage_; }
  double trace() const { return rho_.trace().real(); }

 private:
  int modes_;
  int cutoff_;
  CMatrix rho_;
  double leakage_;
};

/// Gaussian state via Williamson and Bloch-Messiah: thermal occupation of the
/// symplectic spectrum, then passive, squeezing and passive unitaries, then
/// displacement. Throws CutoffError when more than `leakage_threshold` of the
/// probability falls outside the truncated space.
FockState build_gaussian(const Matrix& V, const Vector& xi, int cutoff = default_cutoff,
                         double leakage_threshold = default_leakage_threshold);

FockState build_gaussian(const GaussianState<double>& state, int cutoff = default_cutoff,
                         double leakage_threshold = default_leakage_threshold);

/// Result of rho -> O rho O^dag with O = a(g) or a^dag(g), renormalised.
struct ModeOperatorResult {
  FockState state;
  double trace_ratio;  // <n(g)> for subtraction, <n(g)> + 1 for addition
};

ModeOperatorResult apply_mode_operator(const FockState& state, const Vector& g, Process process);

/// sum_k gamma_k O_k rho O_k^dag, renormalised.
ModeOperatorResult apply_mixture(const FockState& state, const SubtractionSpec<double>& spec);

/// rho -> U rho U^dag with U^dag Q(f) U = Q(L f) for orthogonal symplectic L.
FockState apply_passive(const FockState& state, const Matrix& L);

/// Single-mode state of the mode g: rotate g onto the first mode, then trace
/// out the rest.
FockState reduce_to_mode(const FockState& state, const Vector& g);

double fock_wigner(const FockState& state, const Vector& beta);

/// tr(rho Q(f1) ... Q(fn)), operators multiplied in the given order.
Complex fock_moment(const FockState& state, const std::vector<Vector>& fs);

double fock_purity(const FockState& state);

/// <m| D(gamma) |n> for a single mode, with D(gamma) = exp(gamma a^dag - gamma* a).
Complex displacement_element(int m, int n, Complex gamma);

}  // namespace cvdg::fock
