#include "ncrat/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ncrat/parse.hpp"

namespace ncrat::io {

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
  return Complex{j[0].get<double>(), j[1].get<double>()};
}

/// NaN-safe number emission: JSON has no NaN, so out-of-domain statistics
/// serialize as null.
json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

json word_to_json(const Word& w) {
  json out = json::array();
  for (const Letter& l : w)
    out.push_back("x" + std::to_string(l.index) + (l.adjoint ? "'" : ""));
  return out;
}

json poly_to_json(const NcPolynomial& p) {
  json terms = json::array();
  for (const NcTerm& t : p.terms())
    terms.push_back(json{{"coeff", complex_to_json(t.coeff)}, {"word", word_to_json(t.word)}});
  return terms;
}

json poly_matrix_to_json(const PolyMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(poly_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json ensemble_to_json(const VariableEnsemble& e) {
  json out{{"kind", std::string(kind_name(e.kind))}};
  if (e.kind == EnsembleKind::ShiftedGue) out["offset"] = complex_to_json(e.param);
  if (e.kind == EnsembleKind::DiagonalConstant) out["value"] = complex_to_json(e.param);
  return out;
}

VariableEnsemble ensemble_from_json(const json& j) {
  VariableEnsemble e;
  const auto kind = kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown ensemble kind: " + j.at("kind").dump());
  e.kind = *kind;
  if (j.contains("offset")) e.param = complex_from_json(j.at("offset"));
  if (j.contains("value")) e.param = complex_from_json(j.at("value"));
  return e;
}

}  // namespace

std::string csv_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("matrix: rows must all have length n");
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix: entries must be finite");
  return m;
}

json matrix_file_to_json(const std::vector<ComplexMatrix>& matrices) {
  if (matrices.empty()) throw std::invalid_argument("matrix file: no matrices");
  const Eigen::Index n = matrices.front().rows();
  json out{{"format_version", kFormatVersion}, {"n", n}};
  json list = json::array();
  for (const auto& m : matrices) {
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("matrix file: matrices must share dimension");
    list.push_back(matrix_to_json(m));
  }
  out["matrices"] = std::move(list);
  return out;
}

std::vector<ComplexMatrix> matrix_file_from_json(const json& j) {
  const json& list = j.at("matrices");
  if (!list.is_array() || list.empty())
    throw std::invalid_argument("matrix file: \"matrices\" must be a non-empty array");
  std::vector<ComplexMatrix> out;
  out.reserve(list.size());
  for (const json& m : list) out.push_back(matrix_from_json(m));
  const Eigen::Index n = out.front().rows();
  if (j.contains("n") && j.at("n").get<Eigen::Index>() != n)
    throw std::invalid_argument("matrix file: \"n\" disagrees with the entry grids");
  for (const auto& m : out)
    if (m.rows() != n) throw std::invalid_argument("matrix file: matrices must share dimension");
  return out;
}

json expression_ast_to_json(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return json{{"kind", "scalar"}, {"value", complex_to_json(e.scalar_value())}};
    case ExprKind::Variable:
      return json{{"kind", "variable"}, {"index", e.variable_index()}};
    case ExprKind::AdjointVariable:
      return json{{"kind", "adjoint_variable"}, {"index", e.variable_index()}};
    case ExprKind::Negation:
      return json{{"kind", "negation"}, {"inner", expression_ast_to_json(e.inner())}};
    case ExprKind::Inverse:
      return json{{"kind", "inverse"}, {"inner", expression_ast_to_json(e.inner())}};
    case ExprKind::Sum:
      return json{{"kind", "sum"},
                  {"left", expression_ast_to_json(e.left())},
                  {"right", expression_ast_to_json(e.right())}};
    case ExprKind::Difference:
      return json{{"kind", "difference"},
                  {"left", expression_ast_to_json(e.left())},
                  {"right", expression_ast_to_json(e.right())}};
    case ExprKind::Product:
      return json{{"kind", "product"},
                  {"left", expression_ast_to_json(e.left())},
                  {"right", expression_ast_to_json(e.right())}};
  }
  throw std::logic_error("unknown expression kind");
}

json realization_to_json(const Realization& r) {
  return json{{"format_version", kFormatVersion},
              {"expression", pretty_print(r.source)},
              {"dim", r.dim},
              {"u", poly_matrix_to_json(r.u)},
              {"A", poly_matrix_to_json(r.A)},
              {"v", poly_matrix_to_json(r.v)}};
}

json verdict_to_json(const IdentityVerdict& v) {
  json out{{"format_version", kFormatVersion},
           {"tolerance", v.tolerance},
           {"seed", v.seed},
           {"max_size", v.max_size},
           {"trials_per_size", v.trials_per_size},
           {"common_domain_points", v.common_domain_points},
           {"common_points_per_size", v.common_points_per_size},
           {"sizes_with_common_point", v.sizes_with_common_point}};
  switch (v.kind) {
    case IdentityVerdict::Kind::Distinct:
      out["verdict"] = "distinct";
      out["witness"] = json{{"size", v.witness->size},
                            {"trial", v.witness->trial},
                            {"deviation", v.witness->deviation}};
      break;
    case IdentityVerdict::Kind::ProbablyEqual:
      out["verdict"] = "probably_equal";
      break;
    case IdentityVerdict::Kind::NoCommonDomainPoint:
      out["verdict"] = "no_common_domain_point";
      break;
  }
  return out;
}

json config_to_json(const ConvergenceConfig& cfg) {
  json ensembles = json::array();
  for (const auto& e : cfg.ensembles) ensembles.push_back(ensemble_to_json(e));
  json out{{"format_version", kFormatVersion},
           {"expression", cfg.expression_text},
           {"ensembles", std::move(ensembles)},
           {"sizes", cfg.sizes},
           {"trials", cfg.trials},
           {"seed", cfg.seed},
           {"tol", cfg.tol}};
  if (cfg.trace_oracle) out["trace_oracle"] = complex_to_json(*cfg.trace_oracle);
  if (cfg.norm_oracle) out["norm_oracle"] = *cfg.norm_oracle;
  return out;
}

ConvergenceConfig config_from_json(const json& j) {
  ConvergenceConfig cfg;
  cfg.expression_text = j.at("expression").get<std::string>();
  cfg.expression = parse(cfg.expression_text);
  for (const json& e : j.at("ensembles")) cfg.ensembles.push_back(ensemble_from_json(e));
  cfg.sizes = j.at("sizes").get<std::vector<Eigen::Index>>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("trace_oracle")) cfg.trace_oracle = complex_from_json(j.at("trace_oracle"));
  if (j.contains("norm_oracle")) cfg.norm_oracle = j.at("norm_oracle").get<double>();
  validate(cfg);
  return cfg;
}

json report_to_json(const ConvergenceReport& report) {
  json sizes = json::array();
  for (const SizeSummary& s : report.per_size) {
    json entry{{"n", s.n},
               {"attempted", s.attempted},
               {"in_domain", s.in_domain},
               {"mean_re_trace", number_or_null(s.mean_re_trace)},
               {"std_re_trace", number_or_null(s.std_re_trace)},
               {"mean_im_trace", number_or_null(s.mean_im_trace)},
               {"std_im_trace", number_or_null(s.std_im_trace)},
               {"mean_norm", number_or_null(s.mean_norm)},
               {"std_norm", number_or_null(s.std_norm)}};
    if (report.config.trace_oracle)
      entry["trace_oracle"] = complex_to_json(*report.config.trace_oracle);
    if (report.config.norm_oracle) entry["norm_oracle"] = *report.config.norm_oracle;
    sizes.push_back(std::move(entry));
  }
  json rows = json::array();
  for (const TrialRow& r : report.rows) {
    rows.push_back(json{{"n", r.n},
                        {"trial", r.trial},
                        {"in_domain", r.in_domain},
                        {"re_trace", number_or_null(r.trace.real())},
                        {"im_trace", number_or_null(r.trace.imag())},
                        {"norm", number_or_null(r.norm)}});
  }
  return json{{"format_version", kFormatVersion},
              {"config", config_to_json(report.config)},
              {"per_size", std::move(sizes)},
              {"rows", std::move(rows)}};
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::string out = "size,trial,in_domain,re_trace,im_trace,norm\n";
  for (const TrialRow& r : report.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.trial) + "," +
           (r.in_domain ? "1" : "0") + "," + csv_double(r.trace.real()) + "," +
           csv_double(r.trace.imag()) + "," + csv_double(r.norm) + "\n";
  }
  return out;
}

json outlier_report_to_json(const OutlierReport& report) {
  json sizes = json::array();
  for (const OutlierSummary& s : report.per_size) {
    sizes.push_back(json{{"n", s.n},
                         {"attempted", s.attempted},
                         {"in_domain", s.in_domain},
                         {"mean_base_trace_re", number_or_null(s.mean_base_trace_re)},
                         {"mean_base_norm", number_or_null(s.mean_base_norm)},
                         {"mean_outlier_trace_re", number_or_null(s.mean_outlier_trace_re)},
                         {"mean_outlier_norm", number_or_null(s.mean_outlier_norm)},
                         {"outlier_norm_oracle", s.outlier_norm_oracle}});
  }
  json rows = json::array();
  for (const OutlierRow& r : report.rows) {
    rows.push_back(json{{"n", r.n},
                        {"trial", r.trial},
                        {"in_domain", r.in_domain},
                        {"re_trace_base_inv", number_or_null(r.base_trace.real())},
                        {"im_trace_base_inv", number_or_null(r.base_trace.imag())},
                        {"norm_base_inv", number_or_null(r.base_norm)},
                        {"re_trace_outlier_inv", number_or_null(r.outlier_trace.real())},
                        {"im_trace_outlier_inv", number_or_null(r.outlier_trace.imag())},
                        {"norm_outlier_inv", number_or_null(r.outlier_norm)}});
  }
  return json{{"format_version", kFormatVersion},
              {"config", config_to_json(report.base)},
              {"outlier_rule", report.rule.name()},
              {"per_size", std::move(sizes)},
              {"rows", std::move(rows)}};
}

std::string outlier_report_to_csv(const OutlierReport& report) {
  std::string out =
      "size,trial,in_domain,re_trace_base_inv,im_trace_base_inv,norm_base_inv,"
      "re_trace_outlier_inv,im_trace_outlier_inv,norm_outlier_inv\n";
  for (const OutlierRow& r : report.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.trial) + "," +
           (r.in_domain ? "1" : "0") + "," + csv_double(r.base_trace.real()) + "," +
           csv_double(r.base_trace.imag()) + "," + csv_double(r.base_norm) + "," +
           csv_double(r.outlier_trace.real()) + "," + csv_double(r.outlier_trace.imag()) + "," +
           csv_double(r.outlier_norm) + "\n";
  }
  return out;
}

json domain_curve_to_json(const ConvergenceConfig& cfg,
                          const std::vector<DomainCurvePoint>& curve) {
  json points = json::array();
  for (const DomainCurvePoint& p : curve) {
    points.push_back(json{{"n", p.n},
                          {"attempted", p.attempted},
                          {"in_domain", p.in_domain},
                          {"fraction", p.fraction}});
  }
  return json{{"format_version", kFormatVersion},
              {"config", config_to_json(cfg)},
              {"curve", std::move(points)}};
}

std::string domain_curve_to_csv(const std::vector<DomainCurvePoint>& curve) {
  std::string out = "size,attempted,in_domain,fraction\n";
  for (const DomainCurvePoint& p : curve) {
    out += std::to_string(p.n) + "," + std::to_string(p.attempted) + "," +
           std::to_string(p.in_domain) + "," + csv_double(p.fraction) + "\n";
  }
  return out;
}

}  // namespace ncrat::io
