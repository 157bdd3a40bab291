#include "cvdg/io.hpp"

#include <fstream>

#include "cvdg/errors.hpp"

namespace cvdg::io {

Eigen::VectorXd vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + " must contain only numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<std::size_t>(r)], what + " row");
    if (row.size() != cols) throw ConfigError(what + " rows have different lengths");
    M.row(r) = row.transpose();
  }
  return M;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Eigen::MatrixXd& M) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(M.row(r).transpose())));
  return out;
}

CovarianceMatrix<double> covariance_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("covariance must be a JSON object");
  if (!j.contains("ordering")) throw ConfigError("covariance needs an \"ordering\" field");
  if (j.at("ordering") != "xxpp") throw ConfigError("only \"xxpp\" quadrature ordering is supported");
  if (!j.contains("m") || !j.at("m").is_number_integer()) throw ConfigError("covariance needs an integer \"m\"");
  if (!j.contains("V")) throw ConfigError("covariance needs a \"V\" matrix");
  const auto m = j.at("m").get<Eigen::Index>();
  if (m < 1) throw ConfigError("\"m\" must be positive");
  const Eigen::MatrixXd V = matrix_from_json(j.at("V"), "V");
  if (V.rows() != 2 * m || V.cols() != 2 * m) throw DimensionError("V must be 2m x 2m");
  return CovarianceMatrix<double>(V);
}

Eigen::VectorXd displacement_from_json(const Json& j, Eigen::Index dimension) {
  if (!j.contains("xi")) return Eigen::VectorXd::Zero(dimension);
  const Eigen::VectorXd xi = vector_from_json(j.at("xi"), "xi");
  if (xi.size() != dimension) throw DimensionError("xi must have length 2m");
  return xi;
}

Json covariance_to_json(const CovarianceMatrix<double>& V, const Eigen::VectorXd* xi) {
  Json out = {{"m", V.modes()}, {"ordering", "xxpp"}, {"V", to_json(Eigen::MatrixXd(V.matrix()))}};
  if (xi != nullptr) out["xi"] = to_json(*xi);
  return out;
}

SubtractionSpec<double> spec_from_json(const Json& j, Eigen::Index dimension) {
  if (!j.is_object()) throw ConfigError("spec must be a JSON object");
  if (!j.contains("sign") || !j.at("sign").is_string()) throw ConfigError("spec needs a \"sign\" string");
  const Process process = process_from_string(j.at("sign").get<std::string>());
  if (!j.contains("components") || !j.at("components").is_array()) {
    throw ConfigError("spec needs a \"components\" array");
  }
  std::vector<ModeComponent<double>> comps;
  for (const auto& c : j.at("components")) {
    if (!c.contains("g")) throw ConfigError("spec component needs \"g\"");
    Eigen::VectorXd g = vector_from_json(c.at("g"), "g");
    if (g.size() != dimension) throw DimensionError("spec mode has the wrong length");
    const double gamma = c.value("gamma", 1.0);
    comps.push_back({std::move(g), gamma});
  }
  return {process, std::move(comps), j.value("orthogonal", false)};
}

Json spec_to_json(const SubtractionSpec<double>& spec) {
  Json comps = Json::array();
  for (const auto& c : spec.components()) comps.push_back({{"g", to_json(c.g)}, {"gamma", c.gamma}});
  Json out = {{"sign", to_string(spec.process())}, {"components", comps}};
  if (spec.orthogonal_mixture()) out["orthogonal"] = true;
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace cvdg::io
