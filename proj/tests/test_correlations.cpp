#include <doctest.h>

#include "cvdg/correlations.hpp"
#include "cvdg/fock.hpp"
#include "cvdg/random.hpp"
#include "support.hpp"

#include <set>

using namespace cvdg;
using test::diag;
using test::vec;

namespace {

using List = VectorList<double>;

// High moments weigh the Fock tail like n^(order/2); the oracle needs headroom.
constexpr int moment_cutoff = 50;

DegaussedState<double> vacuum_added() {
  return DegaussedState<double>(GaussianState<double>(CovarianceMatrix<double>::vacuum(1)),
                                SubtractionSpec<double>::single(Process::add, vec({1, 0})));
}

DegaussedState<double> random_state(Eigen::Index m, Rng& rng, int components, double max_db = 6.0,
                                    double max_nu = 2.0) {
  const CovarianceMatrix<double> V = random_covariance(m, max_db, max_nu, rng);
  const Process p = components % 2 ? Process::add : Process::subtract;
  return DegaussedState<double>(GaussianState<double>(V), random_spec(m, components, p, rng));
}

List random_list(Eigen::Index m, std::size_t n, Rng& rng) {
  List fs;
  for (std::size_t i = 0; i < n; ++i) fs.push_back(random_vector(m, 1.0, rng));
  return fs;
}

// Classical cumulants from raw moments mu_0..mu_n of a single variable.
std::vector<double> cumulants_from_moments(const std::vector<double>& mu) {
  std::vector<double> kappa(mu.size(), 0.0);
  for (std::size_t n = 1; n < mu.size(); ++n) {
    double value = mu[n];
    double binom = 1;  // C(n-1, j-1)
    for (std::size_t j = 1; j < n; ++j) {
      value -= binom * kappa[j] * mu[n - j];
      binom = binom * static_cast<double>(n - j) / static_cast<double>(j);
    }
    kappa[n] = value;
  }
  return kappa;
}

}  // namespace

TEST_CASE("partition counts") {
  const int double_fact[] = {1, 1, 3, 15, 105, 945, 10395};
  for (int k = 1; k <= 6; ++k) CHECK(pair_partitions(2 * k).size() == static_cast<std::size_t>(double_fact[k]));
  const int bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) CHECK(set_partitions(n).size() == static_cast<std::size_t>(bell[n]));
  const int even[] = {1, 1, 4, 31, 379};
  for (int k = 1; k <= 4; ++k) CHECK(even_partitions(2 * k).size() == static_cast<std::size_t>(even[k]));
  CHECK(double_factorial(7) == 105.0L);
  CHECK(double_factorial(0) == 1.0L);
}

TEST_CASE("partition structure") {
  for (const auto& p : pair_partitions(6)) {
    std::set<int> seen;
    int last_first = -1;
    for (const auto& [a, b] : p.pairs) {
      CHECK(a < b);
      CHECK(a > last_first);
      last_first = a;
      seen.insert(a);
      seen.insert(b);
    }
    CHECK(seen.size() == 6);
  }
  std::set<std::vector<std::vector<int>>> distinct;
  for (const auto& p : set_partitions(5)) {
    int covered = 0;
    for (const auto& block : p.blocks) covered += static_cast<int>(block.size());
    CHECK(covered == 5);
    distinct.insert(p.blocks);
  }
  CHECK(distinct.size() == 52);
  for (const auto& p : even_partitions(6)) {
    for (const auto& block : p.blocks) CHECK(block.size() % 2 == 0);
  }
  // deterministic order
  CHECK(pair_partitions(4)[0].pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("partition guards") {
  CHECK_THROWS_AS(pair_partitions(3), DimensionError);
  CHECK_THROWS_AS(pair_partitions(14), GuardError);
  CHECK_THROWS_AS(set_partitions(9), GuardError);
  const auto state = vacuum_added();
  CHECK_THROWS_AS(degauss_moment(state, List(10, vec({1, 0}))), GuardError);
  CHECK_THROWS_AS(truncated_correlation_recursive(state, List(9, vec({1, 0}))), GuardError);
  CHECK_THROWS_AS(truncated_correlation_closed(state, List(14, vec({1, 0}))), GuardError);
  CHECK_THROWS_AS(cumulant(state, vec({1, 0}), 13), GuardError);
  CHECK_THROWS_AS(degauss_moment(state, List{vec({1, 0}), vec({1, 0, 0, 0})}), DimensionError);
}

TEST_CASE("gaussian_two_point") {
  const Eigen::MatrixXd V = diag({0.5, 2.0});
  CHECK(gaussian_two_point(V, vec({1, 0}), vec({1, 0})) == std::complex<double>(0.5, 0));
  const auto xp = gaussian_two_point(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)), vec({1, 0}), vec({0, 1}));
  CHECK(xp.imag() == doctest::Approx(-symplectic_product(vec({1, 0}), vec({0, 1}))));
  CHECK(xp == std::complex<double>(0, 1));
  Rng rng(301);
  for (int trial = 0; trial < 50; ++trial) {
    const auto W = random_covariance(2, 6.0, 2.0, rng);
    const Eigen::VectorXd f1 = random_vector(2, 1.3, rng);
    const Eigen::VectorXd f2 = random_vector(2, 0.7, rng);
    CHECK(std::abs(gaussian_two_point(W.matrix(), f1, f2) - std::conj(gaussian_two_point(W.matrix(), f2, f1))) <= 1e-14);
  }
}

TEST_CASE("degauss_moment examples") {
  const auto state = vacuum_added();
  const Eigen::VectorXd x = vec({1, 0});
  CHECK(std::abs(degauss_moment(state, List{x})) == 0.0);
  CHECK(std::abs(degauss_moment(state, List{x, x}) - 3.0) <= 1e-14);
  CHECK(std::abs(degauss_moment(state, List(4, x)) - 15.0) <= 1e-13);
  const auto fock_one = fock::FockState::number_state({1}, 12);
  CHECK(std::abs(fock::fock_moment(fock_one, List(4, x)) - 15.0) <= 1e-10);

  Rng rng(303);
  const auto mixed = random_state(2, rng, 2);
  const Eigen::VectorXd f1 = random_vector(2, 1.0, rng);
  const Eigen::VectorXd f2 = random_vector(2, 1.0, rng);
  CHECK(std::abs(degauss_moment(mixed, List{f1, f2}) -
                 (gaussian_two_point(mixed.base().V(), f1, f2) + f1.dot(mixed.A() * f2))) <= 1e-13);
}

TEST_CASE("truncated correlation examples") {
  const auto state = vacuum_added();
  const Eigen::VectorXd x = vec({1, 0});
  CHECK(std::abs(truncated_correlation_recursive(state, List(4, x)) + 12.0) <= 1e-10);
  CHECK(std::abs(truncated_correlation_closed(state, List(4, x)) + 12.0) <= 1e-12);
  CHECK(std::abs(truncated_correlation_closed(state, List(6, x)) - 240.0) <= 1e-10);
  CHECK(std::abs(truncated_correlation_recursive(state, List(6, x)) - 240.0) <= 1e-8);
  CHECK(std::abs(truncated_correlation_closed(state, List(3, x))) == 0.0);

  const GaussianState<double> g(CovarianceMatrix<double>(diag({0.5, 1.2, 2.0, 0.9})));
  Rng rng(307);
  CHECK(std::abs(truncated_correlation_recursive(g, random_list(2, 3, rng))) <= 1e-12);
  CHECK(std::abs(truncated_correlation_recursive(g, random_list(2, 4, rng))) <= 1e-10);
}

TEST_CASE("cumulant examples") {
  const auto state = vacuum_added();
  const Eigen::VectorXd x = vec({1, 0});
  CHECK(cumulant(state, x, 2) == doctest::Approx(3.0));
  CHECK(cumulant(state, x, 3) == 0.0);
  CHECK(cumulant(state, x, 4) == doctest::Approx(-12.0));
  CHECK(cumulant(state, x, 6) == doctest::Approx(240.0));

  Rng rng(311);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 1 + trial % 3;
    const auto s = random_state(m, rng, 1 + trial % 3);
    const Eigen::VectorXd f = random_vector(m, 1.0, rng);
    for (int n = 2; n <= 12; n += 2) {
      const double closed = truncated_correlation_closed(s, List(static_cast<std::size_t>(n), f)).real();
      CHECK(cumulant(s, f, n) == doctest::Approx(closed).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed form equals the recursion") {
  Rng rng(313);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = 1 + trial % 3;
    const auto s = random_state(m, rng, 1 + trial % 3);
    const std::size_t n = 2 + 2 * static_cast<std::size_t>(trial % 3);
    const List fs = random_list(m, n, rng);
    const auto closed = truncated_correlation_closed(s, fs);
    const auto recursive = truncated_correlation_recursive(s, fs);
    CHECK(std::abs(closed - recursive) < 1e-9 * (1 + std::abs(closed)));
    if (n > 2) CHECK(std::abs(recursive.imag()) <= 1e-10 * (1 + std::abs(recursive)));
  }
}

TEST_CASE("Gaussian states have no connected correlations beyond order two") {
  Rng rng(317);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 1 + trial % 3;
    const GaussianState<double> g(random_covariance(m, 6.0, 2.0, rng), random_vector(m, 0.8, rng));
    for (std::size_t n = 3; n <= 6; ++n) {
      CHECK(std::abs(truncated_correlation_recursive(g, random_list(m, n, rng))) <= 1e-10);
      CHECK(std::abs(truncated_correlation_closed(g, random_list(m, n, rng))) == 0.0);
    }
    const Eigen::VectorXd f = random_vector(m, 1.0, rng);
    CHECK(std::abs(truncated_correlation_recursive(g, List{f}) - g.xi().dot(f)) <= 1e-14);
  }
}

TEST_CASE("moments match the Fock oracle") {
  Rng rng(331);
  for (int trial = 0; trial < 6; ++trial) {
    const auto s = random_state(1, rng, 1 + trial % 2, 4.0, 1.5);
    const auto rho =
        fock::apply_mixture(fock::build_gaussian(s.base().V(), Eigen::VectorXd::Zero(2), moment_cutoff), s.spec()).state;
    for (std::size_t n = 1; n <= 4; ++n) {
      const List fs = random_list(1, n, rng);
      CHECK(std::abs(degauss_moment(s, fs) - fock::fock_moment(rho, fs)) <= 1e-6);
    }
    // cumulants of Q(f) from oracle moments through the classical moment-cumulant relation
    const Eigen::VectorXd f = random_vector(1, 1.0, rng);
    std::vector<double> mu{1.0};
    for (std::size_t n = 1; n <= 6; ++n) mu.push_back(fock::fock_moment(rho, List(n, f)).real());
    const auto kappa = cumulants_from_moments(mu);
    for (int n = 2; n <= 6; ++n) CHECK(std::abs(kappa[static_cast<std::size_t>(n)] - cumulant(s, f, n)) <= 1e-5);
  }
}

TEST_CASE("displaced Gaussian moments match the Fock oracle") {
  Rng rng(337);
  for (int trial = 0; trial < 4; ++trial) {
    const GaussianState<double> g(random_covariance(1, 4.0, 1.5, rng), random_vector(1, 1.0, rng));
    const auto rho = fock::build_gaussian(g, moment_cutoff);
    for (std::size_t n = 1; n <= 4; ++n) {
      const List fs = random_list(1, n, rng);
      CHECK(std::abs(gaussian_moment(g, fs) - fock::fock_moment(rho, fs)) <= 1e-6);
    }
  }
}
