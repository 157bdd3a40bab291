#pragma once

// Shared helpers for the test suites: quadrature oracles and tolerances.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>

namespace cvdg::test {

inline constexpr double pi = 3.14159265358979323846;

/// Adaptive nested Gauss-Kronrod over [-L, L]^2.
inline double integrate_square(const std::function<double(double, double)>& f, double L) {
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [&](double x) {
    return gauss_kronrod<double, 31>::integrate([&](double y) { return f(x, y); }, -L, L, 12, 1e-13);
  };
  return gauss_kronrod<double, 31>::integrate(inner, -L, L, 12, 1e-13);
}

/// Integral of f over the plane for a 2x2 covariance V, in the whitened
/// coordinates b = C z with V = C C^T, truncated at |z_i| <= L.
inline double integrate_plane(const Eigen::Matrix2d& V, const std::function<double(const Eigen::Vector2d&)>& f,
                              double L = 11.0) {
  const Eigen::Matrix2d C = V.llt().matrixL();
  const double jac = C.determinant();
  return jac * integrate_square([&](double x, double y) { return f(C * Eigen::Vector2d(x, y)); }, L);
}

/// (2 pi)^{-2} int chi(a) exp(-i a.b) d^2a for a single mode, with chi decaying
/// like a Gaussian of covariance V^{-1}.
inline double fourier_to_wigner(const Eigen::Matrix2d& V,
                                const std::function<std::complex<double>(const Eigen::Vector2d&)>& chi,
                                const Eigen::Vector2d& beta) {
  const Eigen::Matrix2d W = V.inverse();
  return integrate_plane(W,
                         [&](const Eigen::Vector2d& a) {
                           return (chi(a) * std::exp(std::complex<double>(0, -a.dot(beta)))).real();
                         }) /
         (4.0 * pi * pi);
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Eigen::MatrixXd diag(std::initializer_list<double> values) { return vec(values).asDiagonal(); }

}  // namespace cvdg::test
