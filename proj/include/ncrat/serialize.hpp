#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ncrat/eval.hpp"
#include "ncrat/expr.hpp"
#include "ncrat/idtest.hpp"
#include "ncrat/lab.hpp"
#include "ncrat/realization.hpp"

namespace ncrat::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// n x n grid of [re, im] pairs, row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// MatrixFile: {"format_version", "n", "matrices": [grid, ...]}.
json matrix_file_to_json(const std::vector<ComplexMatrix>& matrices);
std::vector<ComplexMatrix> matrix_file_from_json(const json& j);

json expression_ast_to_json(const Expression& e);

json realization_to_json(const Realization& r);

json verdict_to_json(const IdentityVerdict& v);

json config_to_json(const ConvergenceConfig& cfg);
/// Parses the expression text and validates the schedule; throws
/// ParseException / std::invalid_argument on bad content.
ConvergenceConfig config_from_json(const json& j);

json report_to_json(const ConvergenceReport& report);
std::string report_to_csv(const ConvergenceReport& report);

json outlier_report_to_json(const OutlierReport& report);
std::string outlier_report_to_csv(const OutlierReport& report);

json domain_curve_to_json(const ConvergenceConfig& cfg, const std::vector<DomainCurvePoint>& curve);
std::string domain_curve_to_csv(const std::vector<DomainCurvePoint>& curve);

/// printf %.17g: every double round-trips.
std::string csv_double(double value);

}  // namespace ncrat::io
