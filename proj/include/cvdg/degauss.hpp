#pragma once

// Single-photon addition and subtraction in arbitrary (possibly mixed) modes
// of a Gaussian state: the induced correlation matrix A, the closed-form
// characteristic and Wigner functions, the negativity witness, and the
// displaced-state formulas with their classical-noise decomposition.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cvdg/errors.hpp"
#include "cvdg/gaussian.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg {

namespace tol {
inline constexpr double weights = 1e-10;
inline constexpr double orthogonal_modes = 1e-10;
inline constexpr double vacuum_guard = 1e-12;  // relative to tr(V + 1)
inline constexpr double witness_boundary = 1e-10;
inline constexpr double noise_support = 1e-10;  // relative to the largest eigenvalue of Vc
}  // namespace tol

enum class Process { subtract, add };

inline int sign_of(Process p) { return p == Process::add ? 1 : -1; }

inline std::string to_string(Process p) { return p == Process::add ? "add" : "subtract"; }

inline Process process_from_string(const std::string& s) {
  if (s == "add") return Process::add;
  if (s == "subtract") return Process::subtract;
  throw ConfigError("unknown process '" + s + "' (expected add or subtract)");
}

template <typename Scalar = double>
struct ModeComponent {
  PhaseVector<Scalar> g;
  Scalar gamma;
};

/// A process together with the weighted modes {(g_k, gamma_k)} it acts in.
template <typename Scalar = double>
class SubtractionSpec {
 public:
  SubtractionSpec(Process process, std::vector<ModeComponent<Scalar>> components,
                  bool orthogonal_mixture = false)
      : process_(process), components_(std::move(components)), orthogonal_mixture_(orthogonal_mixture) {
    if (components_.empty()) throw ConfigError("subtraction spec needs at least one component");
    const Eigen::Index dim = components_.front().g.size();
    Scalar total(0);
    for (const auto& c : components_) {
      if (c.g.size() != dim) throw DimensionError("spec components have different dimensions");
      require_normalised(c.g);
      if (c.gamma < Scalar(0)) throw ConfigError("spec weights must be non-negative");
      total += c.gamma;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > tol::weights) {
      throw ConfigError("spec weights must sum to 1 (sum = " + std::to_string(static_cast<double>(total)) + ")");
    }
    if (orthogonal_mixture_) {
      for (std::size_t i = 0; i < components_.size(); ++i) {
        for (std::size_t j = i + 1; j < components_.size(); ++j) {
          const auto& a = components_[i].g;
          const auto& b = components_[j].g;
          const double overlap = std::max(std::abs(static_cast<double>(a.dot(b))),
                                          std::abs(static_cast<double>(symplectic_product(a, b))));
          if (overlap > tol::orthogonal_modes) throw ConfigError("mixture modes are not orthogonal");
        }
      }
    }
  }

  static SubtractionSpec single(Process process, PhaseVector<Scalar> g) {
    return SubtractionSpec(process, {{std::move(g), Scalar(1)}});
  }

  /// Uniform mixture over the first-half vectors of a symplectic basis.
  static SubtractionSpec uniform(Process process, const SymplecticBasis<Scalar>& basis) {
    std::vector<ModeComponent<Scalar>> comps;
    const Eigen::Index k = basis.modes();
    for (Eigen::Index i = 0; i < k; ++i) comps.push_back({basis.mode(i), Scalar(1) / Scalar(k)});
    return SubtractionSpec(process, std::move(comps), true);
  }

  Process process() const { return process_; }
  int sign() const { return sign_of(process_); }
  const std::vector<ModeComponent<Scalar>>& components() const { return components_; }
  bool orthogonal_mixture() const { return orthogonal_mixture_; }
  Eigen::Index dimension() const { return components_.front().g.size(); }

  /// Sum_k gamma_k (P_gk + P_Jgk).
  PhaseMatrix<Scalar> weighted_projector() const {
    PhaseMatrix<Scalar> P = PhaseMatrix<Scalar>::Zero(dimension(), dimension());
    for (const auto& c : components_) P += c.gamma * mode_projector(c.g);
    return P;
  }

 private:
  Process process_;
  std::vector<ModeComponent<Scalar>> components_;
  bool orthogonal_mixture_;
};

/// <n(g)> = ((g, V g) + (Jg, V Jg) - 2) / 4
template <typename Scalar, typename Derived>
Scalar mean_photon_number(const PhaseMatrix<Scalar>& V, const Eigen::MatrixBase<Derived>& g) {
  require_same_dimension(V, g);
  require_normalised(g);
  const PhaseVector<Scalar> Jg = apply_J(g);
  return (g.dot(V * g) + Jg.dot(V * Jg) - Scalar(2)) / Scalar(4);
}

template <typename Scalar, typename Derived>
Scalar mean_photon_number(const CovarianceMatrix<Scalar>& V, const Eigen::MatrixBase<Derived>& g) {
  return mean_photon_number(V.matrix(), g);
}

/// Displaced mean photon number <n(g)> + ((xi, g)^2 + (xi, Jg)^2) / 4.
template <typename Scalar, typename Derived>
Scalar mean_photon_number(const GaussianState<Scalar>& state, const Eigen::MatrixBase<Derived>& g) {
  const PhaseVector<Scalar> Jg = apply_J(g);
  const Scalar a = state.xi().dot(g);
  const Scalar b = state.xi().dot(Jg);
  return mean_photon_number(state.V(), g) + (a * a + b * b) / Scalar(4);
}

template <typename Scalar>
PhaseMatrix<Scalar> shifted(const PhaseMatrix<Scalar>& V, int sign) {
  return V + Scalar(sign) * PhaseMatrix<Scalar>::Identity(V.rows(), V.cols());
}

namespace detail {

template <typename Scalar>
void guard_denominator(Scalar denominator, const PhaseMatrix<Scalar>& V, Process process) {
  const double scale = static_cast<double>((V.trace() + Scalar(V.rows())));
  if (process == Process::subtract && static_cast<double>(denominator) <= tol::vacuum_guard * scale) {
    throw VacuumSubtractionError("cannot subtract a photon from a vacuum-like mode");
  }
}

}  // namespace detail

template <typename Scalar = double>
struct InducedCorrelationMatrix {
  PhaseMatrix<Scalar> A;
  Process process;
};

/// A = 2 (V +- 1) Pbar (V +- 1) / tr((V +- 1) Pbar) with Pbar the weighted projector.
template <typename Scalar>
InducedCorrelationMatrix<Scalar> induced_matrix(const CovarianceMatrix<Scalar>& V,
                                                const SubtractionSpec<Scalar>& spec) {
  require_same_dimension(V.matrix(), spec.components().front().g);
  const PhaseMatrix<Scalar> Vpm = shifted(V.matrix(), spec.sign());
  const PhaseMatrix<Scalar> P = spec.weighted_projector();
  const Scalar denominator = (Vpm * P).trace();
  detail::guard_denominator(denominator, V.matrix(), spec.process());
  PhaseMatrix<Scalar> A = Scalar(2) * Vpm * P * Vpm / denominator;
  A = (A + A.transpose()) / Scalar(2);
  return {std::move(A), spec.process()};
}

/// Gaussian state with one photon added or subtracted according to a spec.
/// A and V^{-1} A V^{-1} are computed once at construction and never again.
template <typename Scalar = double>
class DegaussedState {
 public:
  DegaussedState(GaussianState<Scalar> base, SubtractionSpec<Scalar> spec)
      : base_(std::move(base)), spec_(std::move(spec)) {
    require_same_dimension(base_.V(), spec_.components().front().g);
    if (base_.is_displaced()) {
      // Only the displaced-state path applies; check its normalisation.
      const PhaseMatrix<Scalar> shiftedV =
          shifted(PhaseMatrix<Scalar>(base_.V() + base_.xi() * base_.xi().transpose()), spec_.sign());
      const Scalar denominator = (shiftedV * spec_.weighted_projector()).trace();
      detail::guard_denominator(denominator, base_.V(), spec_.process());
      return;
    }
    A_ = induced_matrix(base_.covariance(), spec_).A;
    const auto llt = factorise<Scalar>(base_.V());
    Vinv_ = llt.solve(PhaseMatrix<Scalar>::Identity(base_.V().rows(), base_.V().cols()));
    M_ = Vinv_ * *A_ * Vinv_;
    M_ = (M_ + M_.transpose()) / Scalar(2);
    witness_ = (Vinv_ * *A_).trace();
  }

  const GaussianState<Scalar>& base() const { return base_; }
  const SubtractionSpec<Scalar>& spec() const { return spec_; }
  Process process() const { return spec_.process(); }
  Eigen::Index modes() const { return base_.modes(); }
  bool is_displaced() const { return !A_.has_value(); }

  const PhaseMatrix<Scalar>& A() const {
    require_centred();
    return *A_;
  }
  const PhaseMatrix<Scalar>& V_inverse() const {
    require_centred();
    return Vinv_;
  }
  /// V^{-1} A V^{-1}
  const PhaseMatrix<Scalar>& zero_form() const {
    require_centred();
    return M_;
  }
  Scalar witness() const {
    require_centred();
    return witness_;
  }

 private:
  void require_centred() const {
    if (!A_) throw DisplacedStateError("closed-form path needs a non-displaced base state");
  }

  GaussianState<Scalar> base_;
  SubtractionSpec<Scalar> spec_;
  std::optional<PhaseMatrix<Scalar>> A_;
  PhaseMatrix<Scalar> Vinv_;
  PhaseMatrix<Scalar> M_;
  Scalar witness_{};
};

/// (1 - (a, A a)/2) exp(-(a, V a)/2)
template <typename Scalar, typename Derived>
std::complex<Scalar> degauss_characteristic(const DegaussedState<Scalar>& state,
                                            const Eigen::MatrixBase<Derived>& alpha) {
  if (state.is_displaced()) throw DisplacedStateError("degauss_characteristic needs a non-displaced state");
  require_same_dimension(state.A(), alpha);
  const Scalar a = alpha.dot(state.A() * alpha);
  const Scalar v = alpha.dot(state.base().V() * alpha);
  return {(Scalar(1) - a / Scalar(2)) * std::exp(-v / Scalar(2)), Scalar(0)};
}

/// ((b, V^{-1} A V^{-1} b) - tr(V^{-1} A) + 2) W_G(b) / 2
template <typename Scalar, typename Derived>
Scalar degauss_wigner(const DegaussedState<Scalar>& state, const Eigen::MatrixBase<Derived>& beta) {
  if (state.is_displaced()) throw DisplacedStateError("degauss_wigner needs a non-displaced state");
  require_same_dimension(state.A(), beta);
  const Scalar poly = (beta.dot(state.zero_form() * beta) - state.witness() + Scalar(2)) / Scalar(2);
  return poly * gaussian_wigner(state.base(), beta);
}

enum class Negativity { negative, touches_zero, non_negative };

inline std::string to_string(Negativity n) {
  switch (n) {
    case Negativity::negative:
      return "negative";
    case Negativity::touches_zero:
      return "touches_zero";
    case Negativity::non_negative:
      return "non_negative";
  }
  return "";
}

/// w > 2: W takes negative values; w = 2: W(0) = 0 and W >= 0; w < 2: W > 0.
inline Negativity classify_witness(double w) {
  if (std::abs(w - 2.0) <= tol::witness_boundary) return Negativity::touches_zero;
  return w > 2.0 ? Negativity::negative : Negativity::non_negative;
}

/// tr(V^{-1} A)
template <typename Scalar>
Scalar negativity_witness(const DegaussedState<Scalar>& state) {
  return state.witness();
}

/// Sum_k gamma_k [(g_k, V^{-1} g_k) + (Jg_k, V^{-1} Jg_k)] = tr(Pbar V^{-1}).
/// Subtraction yields negativity iff this exceeds 2; for addition the
/// corresponding condition (> -2) holds for every state.
template <typename Scalar>
Scalar negativity_witness_overlap_form(const CovarianceMatrix<Scalar>& V, const SubtractionSpec<Scalar>& spec) {
  const auto llt = factorise<Scalar>(V.matrix());
  Scalar total(0);
  for (const auto& c : spec.components()) {
    const PhaseVector<Scalar> Jg = apply_J(c.g);
    total += c.gamma * (c.g.dot(llt.solve(c.g)) + Jg.dot(llt.solve(Jg)));
  }
  return total;
}

/// Zeros of the Wigner function: {b : (b, M b) = c}.
template <typename Scalar = double>
struct ZeroManifold {
  PhaseMatrix<Scalar> M;
  Scalar c;
  bool empty;       // c < 0
  bool point_only;  // c = 0: the origin
};

template <typename Scalar>
ZeroManifold<Scalar> zero_manifold(const DegaussedState<Scalar>& state) {
  const Scalar c = state.witness() - Scalar(2);
  const Negativity cls = classify_witness(static_cast<double>(state.witness()));
  return {state.zero_form(), c, cls == Negativity::non_negative, cls == Negativity::touches_zero};
}

/// Normalised mixing weights lambda_k proportional to
/// gamma_k tr((V + xi xi^T +- 1)(P_gk + P_Jgk)).
template <typename Scalar>
std::vector<Scalar> convex_decomposition_weights(const CovarianceMatrix<Scalar>& V,
                                                 const SubtractionSpec<Scalar>& spec,
                                                 const PhaseVector<Scalar>& xi = PhaseVector<Scalar>()) {
  PhaseMatrix<Scalar> W = V.matrix();
  if (xi.size() != 0) {
    require_same_dimension(W, xi);
    W += xi * xi.transpose();
  }
  const PhaseMatrix<Scalar> Wpm = shifted(W, spec.sign());
  std::vector<Scalar> lambda;
  Scalar total(0);
  for (const auto& c : spec.components()) {
    lambda.push_back(c.gamma * (Wpm * mode_projector(c.g)).trace());
    total += lambda.back();
  }
  detail::guard_denominator(total, V.matrix(), spec.process());
  for (auto& l : lambda) l /= total;
  return lambda;
}

namespace detail {

/// Numerator and denominator of the displaced single-mode Wigner function,
/// W = W_G(b - xi) * numerator / denominator.
template <typename Scalar>
std::pair<Scalar, Scalar> displaced_terms(const GaussianState<Scalar>& base, const Eigen::LLT<PhaseMatrix<Scalar>>& llt,
                                          int sign, const PhaseVector<Scalar>& g, const PhaseVector<Scalar>& beta) {
  const PhaseVector<Scalar>& xi = base.xi();
  const PhaseVector<Scalar> Jg = apply_J(g);
  const PhaseVector<Scalar> d = beta - xi;
  const Scalar s(sign);

  // (1 +- V^{-1}) d projected onto span{g, Jg}
  const PhaseVector<Scalar> w = d + s * llt.solve(d);
  const Scalar wg = g.dot(w);
  const Scalar wJg = Jg.dot(w);
  const Scalar xg = xi.dot(g);
  const Scalar xJg = xi.dot(Jg);

  const Scalar norm_sq = wg * wg + wJg * wJg;
  const Scalar cross = Scalar(2) * (xg * wg + xJg * wJg);
  const Scalar trace_term = xg * xg + xJg * xJg - (g.dot(llt.solve(g)) + Jg.dot(llt.solve(Jg))) - s * Scalar(2);

  const Scalar denominator =
      g.dot(base.V() * g) + Jg.dot(base.V() * Jg) + xg * xg + xJg * xJg + s * Scalar(2);
  return {norm_sq + cross + trace_term, denominator};
}

}  // namespace detail

/// Wigner function of a(g) rho_G a^dag(g) (or a^dag(g) rho_G a(g)) for a
/// possibly displaced Gaussian base state.
template <typename Scalar>
Scalar displaced_degauss_wigner(const GaussianState<Scalar>& base, Process process, const PhaseVector<Scalar>& g,
                                const PhaseVector<Scalar>& beta) {
  require_same_dimension(base.V(), g);
  require_same_dimension(base.V(), beta);
  require_normalised(g);
  const auto llt = factorise<Scalar>(base.V());
  const auto [numerator, denominator] = detail::displaced_terms(base, llt, sign_of(process), g, beta);
  detail::guard_denominator(denominator, base.V(), process);
  return gaussian_wigner(base, beta) * numerator / denominator;
}

/// Mixed-mode version: the convex combination of the single-mode displaced
/// Wigner functions with weights from convex_decomposition_weights.
template <typename Scalar>
Scalar displaced_degauss_wigner(const GaussianState<Scalar>& base, const SubtractionSpec<Scalar>& spec,
                                const PhaseVector<Scalar>& beta) {
  require_same_dimension(base.V(), beta);
  const auto llt = factorise<Scalar>(base.V());
  Scalar numerator(0);
  Scalar denominator(0);
  for (const auto& c : spec.components()) {
    const auto [n, d] = detail::displaced_terms(base, llt, spec.sign(), c.g, beta);
    numerator += c.gamma * n;
    denominator += c.gamma * d;
  }
  detail::guard_denominator(denominator, base.V(), spec.process());
  return gaussian_wigner(base, beta) * numerator / denominator;
}

template <typename Scalar, typename Derived>
Scalar wigner(const DegaussedState<Scalar>& state, const Eigen::MatrixBase<Derived>& beta) {
  if (state.is_displaced()) return displaced_degauss_wigner(state.base(), state.spec(), PhaseVector<Scalar>(beta));
  return degauss_wigner(state, beta);
}

template <typename Scalar = double>
struct NoiseDensity {
  Scalar value;
  Scalar gaussian_value;        // p_c(xi)
  bool pseudo_inverse = false;  // Vc singular: density taken on its support
};

/// p_c(xi) for Vc and the re-weighted densities of the displaced-state
/// decomposition:
///   p-(xi) = (<n(g)>_s + q(xi)) / <n(g)>_G p_c(xi)
///   p+(xi) = (<n(g)>_s + 1 + q(xi)) / (<n(g)>_G + 1) p_c(xi)
/// with q(xi) = ((xi, g)^2 + (xi, Jg)^2) / 4.
template <typename Scalar>
NoiseDensity<Scalar> classical_noise_densities(const PurificationSplit<Scalar>& split, const PhaseVector<Scalar>& g,
                                               Process process, const PhaseVector<Scalar>& xi) {
  const PhaseMatrix<Scalar>& Vc = split.Vc.matrix();
  require_same_dimension(Vc, g);
  require_same_dimension(Vc, xi);
  Eigen::SelfAdjointEigenSolver<PhaseMatrix<Scalar>> solver(Vc);
  const Scalar largest = solver.eigenvalues().cwiseAbs().maxCoeff();
  if (static_cast<double>(largest) <= 1e-12) throw DegenerateNoiseError("classical noise Vc vanishes");
  const Scalar cut = Scalar(tol::noise_support) * largest;

  Scalar quad(0);
  Scalar log_pdet(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < Vc.rows(); ++i) {
    const Scalar lam = solver.eigenvalues()(i);
    if (lam <= cut) continue;
    const Scalar proj = solver.eigenvectors().col(i).dot(xi);
    quad += proj * proj / lam;
    log_pdet += std::log(lam);
    ++rank;
  }
  const Scalar p_c = std::exp(-quad / Scalar(2) - Scalar(rank) / Scalar(2) * std::log(Scalar(2) * Scalar(EIGEN_PI)) -
                              log_pdet / Scalar(2));

  const PhaseMatrix<Scalar> V = split.Vs.matrix() + Vc;
  const Scalar n_s = mean_photon_number(split.Vs.matrix(), g);
  const Scalar n_g = mean_photon_number(V, g);
  const PhaseVector<Scalar> Jg = apply_J(g);
  const Scalar q = (std::pow(xi.dot(g), 2) + std::pow(xi.dot(Jg), 2)) / Scalar(4);
  Scalar factor;
  if (process == Process::subtract) {
    if (static_cast<double>(n_g) <= tol::vacuum_guard) throw VacuumSubtractionError("mode g is in vacuum");
    factor = (n_s + q) / n_g;
  } else {
    factor = (n_s + Scalar(1) + q) / (n_g + Scalar(1));
  }
  return {factor * p_c, p_c, rank < Vc.rows()};
}

}  // namespace cvdg
