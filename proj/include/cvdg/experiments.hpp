#pragma once

// Experiment recipes behind the command-line driver: named state
// constructors, config parsing, parameter sweeps and CSV output.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cvdg/degauss.hpp"
#include "cvdg/gaussian.hpp"
#include "cvdg/io.hpp"

namespace cvdg::experiments {

/// diag(10^(-s/10), 10^(-s/10), 10^(s/10), 10^(s/10)), squeezing s in dB as
/// a power ratio of the variances.
CovarianceMatrix<double> two_mode_squeezed(double s_dB);

/// V + delta * 1
CovarianceMatrix<double> with_noise(const CovarianceMatrix<double>& V, double delta);

/// sqrt(1 - w) a + sqrt(w) b
Eigen::VectorXd superposition(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double weight_b);

/// Worker count: CVDG_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Evaluates fn(0..n-1) on worker threads; results keep index order. The
/// first exception thrown by any point is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Sweep {
  std::string name;
  double from = 0.0;
  double to = 1.0;
  int steps = 2;

  double value(int i) const { return from + (to - from) * static_cast<double>(i) / (steps - 1); }
};

/// Parsed experiment configuration; paths resolve relative to `base_dir`.
struct Config {
  io::Json json;
  std::filesystem::path base_dir;

  static Config load(const std::string& path);
  static Config from_json(io::Json j, std::filesystem::path base_dir = {});

  GaussianState<double> state() const;
  CovarianceMatrix<double> covariance() const;
  std::optional<SubtractionSpec<double>> spec(Eigen::Index dimension) const;
  Sweep sweep(const std::string& default_name, double from, double to, int steps) const;
  std::uint64_t seed() const;
  int cutoff() const;
};

/// One row of a CSV: numbers, booleans or empty cells.
using Cell = std::variant<std::monostate, double, bool, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;
};

/// 17 significant digits, '.' decimal separator, '\n' line ends.
std::string format_number(double value);
void write_csv(std::ostream& out, const Table& table);

// Recipes. Each is deterministic in its config.

struct PurityPoint {
  double x2_sq;
  double mu_gaussian;
  std::optional<double> mu_subtract;
  std::optional<double> mu_add;
};

/// Purity of the state reduced to g = sqrt(1 - x2_sq) a + sqrt(x2_sq) b.
PurityPoint purity_point(const CovarianceMatrix<double>& V, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         double x2_sq);

Table purity_scan(const Config& config);
Table negativity_scan(const Config& config);
Table wigner_slice(const Config& config, bool oracle);
Table cumulants(const Config& config);

struct ValidationReport {
  bool valid;
  double min_eigenvalue;
  Eigen::VectorXd spectrum;  // empty when invalid
  double purity;             // 1 / sqrt(det V), NaN when invalid
  std::string summary;
};

ValidationReport validate_state(const CovarianceMatrix<double>& V);

}  // namespace cvdg::experiments
