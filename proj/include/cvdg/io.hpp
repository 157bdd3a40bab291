#pragma once

// JSON exchange formats:
//   covariance  {"m": 2, "ordering": "xxpp", "V": [[...]], "xi": [...]}   ("xi" optional)
//   spec        {"sign": "subtract" | "add", "components": [{"g": [...], "gamma": 1.0}]}

#include <json.hpp>

#include <string>

#include "cvdg/degauss.hpp"
#include "cvdg/gaussian.hpp"

namespace cvdg::io {

using Json = nlohmann::json;

Eigen::VectorXd vector_from_json(const Json& j, const std::string& what);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& what);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& M);

/// Parses the covariance format. The matrix is only checked for shape and
/// symmetry; quantum validity is left to the caller.
CovarianceMatrix<double> covariance_from_json(const Json& j);
Eigen::VectorXd displacement_from_json(const Json& j, Eigen::Index dimension);
Json covariance_to_json(const CovarianceMatrix<double>& V, const Eigen::VectorXd* xi = nullptr);

SubtractionSpec<double> spec_from_json(const Json& j, Eigen::Index dimension);
Json spec_to_json(const SubtractionSpec<double>& spec);

Json read_json_file(const std::string& path);

}  // namespace cvdg::io
