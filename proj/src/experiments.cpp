#include "cvdg/experiments.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "cvdg/correlations.hpp"
#include "cvdg/errors.hpp"
#include "cvdg/fock.hpp"
#include "cvdg/random.hpp"
#include "cvdg/reduction.hpp"

namespace cvdg::experiments {

using io::Json;

CovarianceMatrix<double> two_mode_squeezed(double s_dB) {
  const double squeezed = std::pow(10.0, -s_dB / 10.0);
  const double anti = std::pow(10.0, s_dB / 10.0);
  Eigen::VectorXd d(4);
  d << squeezed, squeezed, anti, anti;
  return CovarianceMatrix<double>(Eigen::MatrixXd(d.asDiagonal()));
}

CovarianceMatrix<double> with_noise(const CovarianceMatrix<double>& V, double delta) {
  return CovarianceMatrix<double>(
      Eigen::MatrixXd(V.matrix() + delta * Eigen::MatrixXd::Identity(V.dimension(), V.dimension())));
}

Eigen::VectorXd superposition(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double weight_b) {
  return std::sqrt(std::max(0.0, 1.0 - weight_b)) * a + std::sqrt(std::max(0.0, weight_b)) * b;
}

unsigned worker_count() {
  if (const char* env = std::getenv("CVDG_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

CovarianceMatrix<double> parse_covariance(const Json& s, const std::filesystem::path& base_dir,
                                          Eigen::VectorXd* xi) {
  if (!s.is_object()) throw ConfigError("\"state\" must be an object");
  if (s.contains("file")) {
    std::filesystem::path path = s.at("file").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    const Json j = io::read_json_file(path.string());
    CovarianceMatrix<double> V = io::covariance_from_json(j);
    if (xi != nullptr) *xi = io::displacement_from_json(j, V.dimension());
    return V;
  }
  if (s.contains("constructor")) {
    const auto name = s.at("constructor").get<std::string>();
    CovarianceMatrix<double> V;
    if (name == "two-mode-squeezed") {
      V = two_mode_squeezed(s.value("s_dB", 0.0));
    } else if (name == "vacuum") {
      V = CovarianceMatrix<double>::vacuum(s.value("m", 1));
    } else if (name == "thermal") {
      V = CovarianceMatrix<double>::thermal(s.value("m", 1), s.value("nu", 1.0));
    } else if (name == "noise") {
      if (!s.contains("base")) throw ConfigError("noise constructor needs a \"base\" state");
      V = with_noise(parse_covariance(s.at("base"), base_dir, nullptr), s.value("delta", 0.0));
    } else {
      throw ConfigError("unknown state constructor '" + name + "'");
    }
    if (xi != nullptr) *xi = Eigen::VectorXd::Zero(V.dimension());
    return V;
  }
  if (s.contains("V")) {
    CovarianceMatrix<double> V = io::covariance_from_json(s);
    if (xi != nullptr) *xi = io::displacement_from_json(s, V.dimension());
    return V;
  }
  throw ConfigError("\"state\" needs one of \"file\", \"constructor\" or an inline \"V\"");
}

const Json& require(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config needs \"" + key + "\"");
  return j.at(key);
}

Eigen::VectorXd vector_or(const Json& j, const std::string& key, const Eigen::VectorXd& fallback,
                          Eigen::Index dimension) {
  if (!j.contains(key)) return fallback;
  Eigen::VectorXd v = io::vector_from_json(j.at(key), key);
  if (v.size() != dimension) throw DimensionError("\"" + key + "\" must have length 2m");
  return v;
}

Eigen::VectorXd unit(Eigen::Index dimension, Eigen::Index i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dimension);
  e(i) = 1.0;
  return e;
}

// Both processes over the same modes.
SubtractionSpec<double> with_process(const SubtractionSpec<double>& spec, Process process) {
  return {process, spec.components(), spec.orthogonal_mixture()};
}

std::optional<double> witness_or_empty(const CovarianceMatrix<double>& V, const SubtractionSpec<double>& spec,
                                       std::vector<std::string>& warnings, const std::string& where) {
  try {
    return negativity_witness(DegaussedState<double>(GaussianState<double>(V), spec));
  } catch (const VacuumSubtractionError& e) {
    warnings.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

Cell cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

Cell negative_cell(const std::optional<double>& w) {
  return w ? Cell(classify_witness(*w) == Negativity::negative) : Cell();
}

}  // namespace

Config Config::load(const std::string& path) {
  return from_json(io::read_json_file(path), std::filesystem::path(path).parent_path());
}

Config Config::from_json(Json j, std::filesystem::path base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  return {std::move(j), std::move(base_dir)};
}

CovarianceMatrix<double> Config::covariance() const {
  if (json.contains("V")) return io::covariance_from_json(json);
  return parse_covariance(require(json, "state"), base_dir, nullptr);
}

GaussianState<double> Config::state() const {
  Eigen::VectorXd xi;
  CovarianceMatrix<double> V = json.contains("V") ? io::covariance_from_json(json)
                                                  : parse_covariance(require(json, "state"), base_dir, &xi);
  if (json.contains("V")) xi = io::displacement_from_json(json, V.dimension());
  if (json.contains("displacement")) {
    xi = io::vector_from_json(json.at("displacement"), "displacement");
    if (xi.size() != V.dimension()) throw DimensionError("displacement must have length 2m");
  }
  return {std::move(V), std::move(xi)};
}

std::optional<SubtractionSpec<double>> Config::spec(Eigen::Index dimension) const {
  if (!json.contains("spec")) return std::nullopt;
  return io::spec_from_json(json.at("spec"), dimension);
}

Sweep Config::sweep(const std::string& default_name, double from, double to, int steps) const {
  Sweep s{default_name, from, to, steps};
  if (json.contains("sweep")) {
    const Json& j = json.at("sweep");
    s.name = j.value("name", default_name);
    s.from = j.value("from", from);
    s.to = j.value("to", to);
    s.steps = j.value("steps", steps);
  }
  if (s.steps < 2) throw ConfigError("sweep needs at least 2 steps");
  return s;
}

std::uint64_t Config::seed() const { return json.value("seed", std::uint64_t{1}); }

int Config::cutoff() const { return json.value("cutoff", fock::default_cutoff); }

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return {buf, result.ptr};
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else if constexpr (std::is_same_v<T, bool>) {
              out << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, long long>) {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

PurityPoint purity_point(const CovarianceMatrix<double>& V, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         double x2_sq) {
  const Eigen::VectorXd g = superposition(a, b, x2_sq);
  const auto subset = ModeSubset<double>::single(g);
  const GaussianState<double> base(V);
  PurityPoint p{x2_sq, purity(reduce(base, subset)), std::nullopt, std::nullopt};
  try {
    p.mu_subtract = purity(reduce(DegaussedState<double>(base, SubtractionSpec<double>::single(Process::subtract, g)), subset));
  } catch (const VacuumSubtractionError&) {
  }
  p.mu_add = purity(reduce(DegaussedState<double>(base, SubtractionSpec<double>::single(Process::add, g)), subset));
  return p;
}

Table purity_scan(const Config& config) {
  const GaussianState<double> state = config.state();
  if (state.is_displaced()) throw DisplacedStateError("purity-scan needs a non-displaced state");
  const Eigen::Index dim = state.V().rows();
  if (dim < 4) throw ConfigError("purity-scan needs at least two modes");
  const Eigen::Index m = dim / 2;
  const Eigen::VectorXd a = vector_or(config.json, "mode_a", unit(dim, 0), dim);
  const Eigen::VectorXd b = vector_or(config.json, "mode_b", unit(dim, m + 1), dim);
  require_normalised(a);
  require_normalised(b);
  if (std::abs(a.dot(b)) > tol::orthogonal_modes) throw ConfigError("mode_a and mode_b must be orthogonal");
  const Sweep sweep = config.sweep("x2_sq", 0.0, 1.0, 101);
  if (std::min(sweep.from, sweep.to) < 0.0 || std::max(sweep.from, sweep.to) > 1.0) {
    throw ConfigError("x2_sq sweep must stay within [0, 1]");
  }

  const auto points = parallel_map<PurityPoint>(static_cast<std::size_t>(sweep.steps), [&](std::size_t i) {
    return purity_point(state.covariance(), a, b, sweep.value(static_cast<int>(i)));
  });
  Table table{{"x2_sq", "mu_gaussian", "mu_subtract", "mu_add"}, {}, {}};
  for (const auto& p : points) {
    table.rows.push_back({p.x2_sq, p.mu_gaussian, cell(p.mu_subtract), cell(p.mu_add)});
    if (!p.mu_subtract) table.warnings.push_back("x2_sq=" + format_number(p.x2_sq) + ": subtraction from vacuum");
  }
  return table;
}

Table negativity_scan(const Config& config) {
  const Sweep sweep = config.sweep("delta", 0.0, 0.5, 51);
  struct Row {
    double value;
    std::optional<double> sub;
    std::optional<double> add;
    std::vector<std::string> warnings;
  };

  std::function<Row(std::size_t)> point;
  if (sweep.name == "delta" || sweep.name == "squeezing") {
    CovarianceMatrix<double> base;
    if (sweep.name == "delta") {
      base = config.covariance();
    } else if (config.json.contains("state") || config.json.contains("V")) {
      throw ConfigError("a squeezing sweep builds its own two-mode state; drop \"state\"");
    }
    const Eigen::Index dim = sweep.name == "delta" ? base.dimension() : 4;
    std::optional<SubtractionSpec<double>> spec = config.spec(dim);
    if (!spec) {
      if (dim != 4) throw ConfigError("negativity-scan needs a \"spec\" unless the state has two modes");
      Eigen::VectorXd g = Eigen::VectorXd::Zero(4);
      g(0) = g(3) = std::sqrt(0.5);
      spec = SubtractionSpec<double>::single(Process::subtract, g);
    }
    const double delta = config.json.value("delta", 0.0);
    const bool over_delta = sweep.name == "delta";
    point = [=](std::size_t i) {
      const double x = sweep.value(static_cast<int>(i));
      const CovarianceMatrix<double> V = over_delta ? with_noise(base, x) : with_noise(two_mode_squeezed(x), delta);
      Row r{x, std::nullopt, std::nullopt, {}};
      const std::string where = sweep.name + "=" + format_number(x);
      r.sub = witness_or_empty(V, with_process(*spec, Process::subtract), r.warnings, where);
      r.add = witness_or_empty(V, with_process(*spec, Process::add), r.warnings, where);
      return r;
    };
  } else if (sweep.name == "mixture_size") {
    const CovarianceMatrix<double> V = config.covariance();
    const Eigen::Index m = V.modes();
    Rng rng(config.seed());
    const Eigen::MatrixXd O = random_orthogonal_symplectic<double>(m, rng);
    point = [=](std::size_t i) {
      const double x = sweep.value(static_cast<int>(i));
      const auto k = static_cast<Eigen::Index>(std::llround(x));
      if (k < 1 || k > m) throw ConfigError("mixture_size must lie in [1, m]");
      const auto basis = SymplecticBasis<double>::from_modes(Eigen::MatrixXd(O.leftCols(k)));
      Row r{static_cast<double>(k), std::nullopt, std::nullopt, {}};
      const std::string where = "mixture_size=" + std::to_string(k);
      r.sub = witness_or_empty(V, SubtractionSpec<double>::uniform(Process::subtract, basis), r.warnings, where);
      r.add = witness_or_empty(V, SubtractionSpec<double>::uniform(Process::add, basis), r.warnings, where);
      return r;
    };
  } else {
    throw ConfigError("negativity-scan sweeps delta, squeezing or mixture_size, not '" + sweep.name + "'");
  }

  const auto rows = parallel_map<Row>(static_cast<std::size_t>(sweep.steps), point);
  Table table{{"sweep_value", "witness_subtract", "witness_add", "negative_subtract", "negative_add"}, {}, {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.value, cell(r.sub), cell(r.add), negative_cell(r.sub), negative_cell(r.add)});
    table.warnings.insert(table.warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  return table;
}

Table wigner_slice(const Config& config, bool oracle) {
  const GaussianState<double> state = config.state();
  const Eigen::Index dim = state.V().rows();
  const auto spec = config.spec(dim);
  if (!spec) throw ConfigError("wigner-slice needs a \"spec\"");
  const DegaussedState<double> degaussed(state, *spec);

  const Json plane = config.json.value("plane", Json::object());
  const Eigen::VectorXd origin = vector_or(plane, "origin", Eigen::VectorXd::Zero(dim), dim);
  const Eigen::VectorXd u = vector_or(plane, "u", unit(dim, 0), dim);
  const Eigen::VectorXd v = vector_or(plane, "v", unit(dim, state.modes()), dim);
  const double extent = plane.value("extent", 3.0);
  const int steps = plane.value("steps", 41);
  if (steps < 2) throw ConfigError("plane needs at least 2 steps");
  const auto coord = [&](int i) { return -extent + 2.0 * extent * i / (steps - 1); };

  std::optional<fock::FockState> fock_state;
  if (oracle) {
    if (state.modes() > fock::max_modes) throw ConfigError("--oracle is limited to two modes");
    fock_state = fock::apply_mixture(fock::build_gaussian(state, config.cutoff()), *spec).state;
  }

  using Row = std::vector<Cell>;
  const auto rows = parallel_map<Row>(static_cast<std::size_t>(steps) * steps, [&](std::size_t idx) {
    const double a = coord(static_cast<int>(idx / steps));
    const double b = coord(static_cast<int>(idx % steps));
    const Eigen::VectorXd beta = origin + a * u + b * v;
    Row r{a, b, wigner(degaussed, beta)};
    if (fock_state) r.emplace_back(fock::fock_wigner(*fock_state, beta));
    return r;
  });
  Table table{{"u", "v", "W"}, rows, {}};
  if (oracle) table.columns.emplace_back("W_oracle");
  return table;
}

Table cumulants(const Config& config) {
  const GaussianState<double> state = config.state();
  const Eigen::Index dim = state.V().rows();
  const Eigen::VectorXd f = io::vector_from_json(require(config.json, "f"), "f");
  if (f.size() != dim) throw DimensionError("\"f\" must have length 2m");
  const int max_order = config.json.value("max_order", 6);
  if (max_order < 1) throw ConfigError("max_order must be positive");
  if (max_order > static_cast<int>(max_moment_order)) throw GuardError("cumulants are limited to order 8");
  const auto spec = config.spec(dim);
  std::optional<DegaussedState<double>> degaussed;
  if (spec) degaussed.emplace(state, *spec);

  Table table{{"order", "closed", "recursive"}, {}, {}};
  for (int n = 1; n <= max_order; ++n) {
    const VectorList<double> fs(static_cast<std::size_t>(n), f);
    const std::complex<double> closed =
        degaussed ? truncated_correlation_closed(*degaussed, fs) : truncated_correlation_closed(state, fs);
    const std::complex<double> recursive =
        degaussed ? truncated_correlation_recursive(*degaussed, fs) : truncated_correlation_recursive(state, fs);
    table.rows.push_back({static_cast<long long>(n), closed.real(), recursive.real()});
  }
  return table;
}

ValidationReport validate_state(const CovarianceMatrix<double>& V) {
  const ValidityReport check = validate(V);
  ValidationReport report{check.valid, check.min_eigenvalue, Eigen::VectorXd(),
                          std::numeric_limits<double>::quiet_NaN(), ""};
  if (!check.valid) {
    report.summary = "invalid: " + check.diagnostic;
    return report;
  }
  report.spectrum = williamson(V).spectrum;
  report.purity = gaussian_purity(V.matrix());
  const bool pure = (report.spectrum.array() - 1.0).abs().maxCoeff() <= 1e-7;
  report.summary = pure ? "valid, pure" : "valid, mixed";
  return report;
}

}  // namespace cvdg::experiments
