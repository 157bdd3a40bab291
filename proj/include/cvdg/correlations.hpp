#pragma once

// Moments and truncated correlations (cumulants) of quadrature products
// Q(f_1)...Q(f_n), taken in the given operator order.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cvdg/degauss.hpp"
#include "cvdg/errors.hpp"
#include "cvdg/gaussian.hpp"
#include "cvdg/partitions.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg {

inline constexpr std::size_t max_moment_order = 8;
inline constexpr std::size_t max_closed_order = 12;

template <typename Scalar>
using VectorList = std::vector<PhaseVector<Scalar>>;

/// <Q(f1) Q(f2)> = (f1, V f2) - i (f1, J f2)
template <typename Scalar, typename DerivedA, typename DerivedB>
std::complex<Scalar> gaussian_two_point(const PhaseMatrix<Scalar>& V, const Eigen::MatrixBase<DerivedA>& f1,
                                        const Eigen::MatrixBase<DerivedB>& f2) {
  require_same_dimension(V, f1);
  require_same_dimension(V, f2);
  return {f1.dot(V * f2), -symplectic_product(f1, f2)};
}

namespace detail {

template <typename Scalar>
void check_vectors(const VectorList<Scalar>& fs, Eigen::Index dim, std::size_t limit) {
  if (fs.size() > limit) throw GuardError("order " + std::to_string(fs.size()) + " exceeds the guard " + std::to_string(limit));
  for (const auto& f : fs) {
    if (f.size() != dim) throw DimensionError("quadrature vector has the wrong dimension");
  }
}

// Wick expansion over the remaining indices (kept in operator order); each
// index either pairs with a later one or, if `xi` is set, stands alone.
template <typename Scalar>
std::complex<Scalar> wick(const PhaseMatrix<Scalar>& V, const PhaseVector<Scalar>* xi, const PhaseMatrix<Scalar>* A,
                          const VectorList<Scalar>& fs, std::vector<int>& rest, bool a_used) {
  using C = std::complex<Scalar>;
  if (rest.empty()) return a_used || A == nullptr ? C(1) : C(0);
  const int first = rest.front();
  C total(0);
  if (xi != nullptr) {
    std::vector<int> tail(rest.begin() + 1, rest.end());
    total += xi->dot(fs[first]) * wick(V, xi, A, fs, tail, a_used);
  }
  for (std::size_t j = 1; j < rest.size(); ++j) {
    const int partner = rest[j];
    std::vector<int> tail;
    tail.reserve(rest.size() - 2);
    for (std::size_t k = 1; k < rest.size(); ++k) {
      if (k != j) tail.push_back(rest[k]);
    }
    total += gaussian_two_point(V, fs[first], fs[partner]) * wick(V, xi, A, fs, tail, a_used);
    if (A != nullptr && !a_used) {
      total += fs[first].dot(*A * fs[partner]) * wick(V, xi, A, fs, tail, true);
    }
  }
  return total;
}

}  // namespace detail

/// tr(rho_G Q(f1)...Q(fn)) for a possibly displaced Gaussian state.
template <typename Scalar>
std::complex<Scalar> gaussian_moment(const GaussianState<Scalar>& state, const VectorList<Scalar>& fs) {
  detail::check_vectors(fs, state.V().rows(), max_moment_order);
  const bool displaced = state.is_displaced();
  if (!displaced && fs.size() % 2 == 1) return {0, 0};
  std::vector<int> idx(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) idx[i] = static_cast<int>(i);
  return detail::wick<Scalar>(state.V(), displaced ? &state.xi() : nullptr, nullptr, fs, idx, false);
}

/// tr(rho Q(f1)...Q(fn)) for a photon-added/subtracted state: Wick sum over
/// pair partitions with at most one factor (f_a, A f_b) per partition.
template <typename Scalar>
std::complex<Scalar> degauss_moment(const DegaussedState<Scalar>& state, const VectorList<Scalar>& fs) {
  if (state.is_displaced()) throw DisplacedStateError("degauss_moment needs a non-displaced state");
  detail::check_vectors(fs, state.base().V().rows(), max_moment_order);
  if (fs.size() % 2 == 1) return {0, 0};
  std::vector<int> idx(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) idx[i] = static_cast<int>(i);
  const std::complex<Scalar> gaussian = detail::wick<Scalar>(state.base().V(), nullptr, nullptr, fs, idx, false);
  const std::complex<Scalar> induced = detail::wick<Scalar>(state.base().V(), nullptr, &state.A(), fs, idx, false);
  return gaussian + induced;
}

template <typename Scalar>
using MomentFunction = std::function<std::complex<Scalar>(const VectorList<Scalar>&)>;

/// Truncated correlation from the defining recursion: the moment minus the
/// product of lower-order truncated correlations over every proper set
/// partition, each block keeping the original operator order.
template <typename Scalar>
std::complex<Scalar> truncated_correlation_recursive(const MomentFunction<Scalar>& moment, const VectorList<Scalar>& fs) {
  using C = std::complex<Scalar>;
  if (fs.size() > max_moment_order) throw GuardError("recursive truncated correlations limited to order 8");
  if (fs.empty()) return C(1);
  std::unordered_map<unsigned, C> memo;
  std::function<C(unsigned)> truncated = [&](unsigned mask) -> C {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(fs.size()); ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    VectorList<Scalar> sub;
    for (int i : members) sub.push_back(fs[static_cast<std::size_t>(i)]);
    C value = moment(sub);
    for (const auto& p : set_partitions(static_cast<int>(members.size()))) {
      if (p.blocks.size() < 2) continue;
      C product(1);
      for (const auto& block : p.blocks) {
        unsigned sub_mask = 0;
        for (int local : block) sub_mask |= 1u << members[static_cast<std::size_t>(local)];
        product *= truncated(sub_mask);
      }
      value -= product;
    }
    memo.emplace(mask, value);
    return value;
  };
  return truncated((1u << fs.size()) - 1u);
}

template <typename Scalar>
std::complex<Scalar> truncated_correlation_recursive(const DegaussedState<Scalar>& state, const VectorList<Scalar>& fs) {
  return truncated_correlation_recursive<Scalar>(
      [&state](const VectorList<Scalar>& sub) { return degauss_moment(state, sub); }, fs);
}

template <typename Scalar>
std::complex<Scalar> truncated_correlation_recursive(const GaussianState<Scalar>& state, const VectorList<Scalar>& fs) {
  return truncated_correlation_recursive<Scalar>(
      [&state](const VectorList<Scalar>& sub) { return gaussian_moment(state, sub); }, fs);
}

/// Closed form: zero for odd orders; <Q Q>_G + (f1, A f2) at order 2; and
/// (-1)^(k-1) (k-1)! sum over pair partitions of prod (f_a, A f_b) at order 2k.
/// The result is complex only at order 2, through the commutator term.
template <typename Scalar>
std::complex<Scalar> truncated_correlation_closed(const DegaussedState<Scalar>& state, const VectorList<Scalar>& fs) {
  if (state.is_displaced()) throw DisplacedStateError("closed-form correlations need a non-displaced state");
  detail::check_vectors(fs, state.base().V().rows(), max_closed_order);
  if (fs.size() % 2 == 1 || fs.empty()) return {0, 0};
  const PhaseMatrix<Scalar>& A = state.A();
  if (fs.size() == 2) return gaussian_two_point(state.base().V(), fs[0], fs[1]) + fs[0].dot(A * fs[1]);

  const int k = static_cast<int>(fs.size() / 2);
  PhaseMatrix<Scalar> gram(fs.size(), fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) gram(i, j) = fs[i].dot(A * fs[j]);
  }
  Scalar sum(0);
  for (const auto& p : pair_partitions(static_cast<int>(fs.size()))) {
    Scalar product(1);
    for (const auto& [a, b] : p.pairs) product *= gram(a, b);
    sum += product;
  }
  Scalar prefactor = (k % 2 == 1) ? Scalar(1) : Scalar(-1);
  for (int i = 2; i < k; ++i) prefactor *= Scalar(i);
  return {prefactor * sum, Scalar(0)};
}

/// Gaussian truncated correlations: the mean at order 1, the two-point
/// function at order 2, zero beyond.
template <typename Scalar>
std::complex<Scalar> truncated_correlation_closed(const GaussianState<Scalar>& state, const VectorList<Scalar>& fs) {
  detail::check_vectors(fs, state.V().rows(), max_closed_order);
  if (fs.size() == 1) return {state.xi().dot(fs[0]), Scalar(0)};
  if (fs.size() == 2) return gaussian_two_point(state.V(), fs[0], fs[1]);
  return {0, 0};
}

/// <Q(f)^n>_T = (-1)^(k-1) (2k-1)!/2^(k-1) (f, A f)^k + (f, V f) delta_{k,1} for n = 2k.
template <typename Scalar, typename Derived>
Scalar cumulant(const DegaussedState<Scalar>& state, const Eigen::MatrixBase<Derived>& f, int n) {
  if (state.is_displaced()) throw DisplacedStateError("cumulant needs a non-displaced state");
  if (n < 1) throw DimensionError("cumulant order must be positive");
  if (n > static_cast<int>(max_closed_order)) throw GuardError("cumulant order limited to 12");
  require_same_dimension(state.A(), f);
  if (n % 2 == 1) return Scalar(0);
  const int k = n / 2;
  const Scalar fAf = f.dot(state.A() * f);
  // (2k-1)!/2^(k-1) = (2k-1)!! (k-1)!
  Scalar coefficient = static_cast<Scalar>(double_factorial(2 * k - 1));
  for (int i = 2; i < k; ++i) coefficient *= Scalar(i);
  if (k % 2 == 0) coefficient = -coefficient;
  Scalar value = coefficient * std::pow(fAf, k);
  if (k == 1) value += f.dot(state.base().V() * f);
  return value;
}

}  // namespace cvdg
