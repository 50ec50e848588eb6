#include "ddmon/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "ddmon/format.hpp"

namespace ddmon {

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s(buf);
  // snprintf honours LC_NUMERIC; the CSV contract is '.' regardless
  for (char& c : s) {
    if (c == ',') c = '.';
  }
  return s;
}

namespace io {
namespace {

std::size_t require_count(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::BadDimensions, std::string("missing or invalid '") + key + "'");
  }
  return j.at(key).get<std::size_t>();
}

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows * cols) {
    throw Error(ErrorCode::BadDimensions, std::string(what) + " must be a flat array of " +
                                              std::to_string(rows * cols) + " numbers");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const json& v = j[i * cols + k];
      if (!v.is_number()) throw Error(ErrorCode::BadDimensions, std::string(what) + " has a non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v.get<double>();
    }
  }
  return m;
}

json system_to_json(const LtiSystem& sys) {
  return json{{"n", sys.n()},
              {"m", sys.m()},
              {"p", sys.p()},
              {"A", matrix_to_json(sys.A())},
              {"B", matrix_to_json(sys.B())},
              {"C", matrix_to_json(sys.C())},
              {"D", matrix_to_json(sys.D())}};
}

LtiSystem system_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadDimensions, "system must be a JSON object");
  const std::size_t n = require_count(j, "n");
  const std::size_t m = require_count(j, "m");
  const std::size_t p = require_count(j, "p");
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!j.contains(key)) throw Error(ErrorCode::BadDimensions, std::string("system is missing '") + key + "'");
  }
  return LtiSystem(matrix_from_json(j.at("A"), n, n, "A"), matrix_from_json(j.at("B"), n, m, "B"),
                   matrix_from_json(j.at("C"), p, n, "C"), matrix_from_json(j.at("D"), p, m, "D"));
}

json index_report_to_json(const IndexReport& r) {
  return json{{"nu", r.nu},
              {"mu", r.mu},
              {"mu_of_x0", optional_to_json(r.mu_of_x0)},
              {"t_safe_model", r.t_safe_model},
              {"t_safe_data", r.t_safe_data},
              {"t_safe_heuristic", r.t_safe_heuristic}};
}

json dynamics_to_json(const FeatureDynamics& d) {
  return json{{"q", d.q()}, {"M", matrix_to_json(d.M)}, {"fit_residual", d.fit_residual}};
}

FeatureDynamics dynamics_from_json(const json& j) {
  const std::size_t q = require_count(j, "q");
  if (!j.contains("M") || !j.contains("fit_residual") || !j.at("fit_residual").is_number()) {
    throw Error(ErrorCode::BadDimensions, "dynamics needs 'M' and 'fit_residual'");
  }
  return FeatureDynamics{matrix_from_json(j.at("M"), q, q, "M"), j.at("fit_residual").get<double>()};
}

json scenario_to_json(const AttackScenario& s) {
  json samples = json::array();
  for (std::size_t k = s.start; k < s.inputs.size(); ++k) {
    const Vector u = s.inputs.at(k);
    samples.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  }
  return json{{"start", s.start}, {"m", s.inputs.m()}, {"samples", samples}, {"label", s.label}};
}

AttackScenario scenario_from_json(const json& j) {
  const std::size_t start = require_count(j, "start");
  const std::size_t m = require_count(j, "m");
  if (!j.contains("samples") || !j.at("samples").is_array()) {
    throw Error(ErrorCode::BadDimensions, "attack needs a 'samples' array");
  }
  InputSeries u(m, start);
  std::size_t k = start;
  for (const json& row : j.at("samples")) {
    u.set(k++, matrix_from_json(row, m, 1, "attack sample"));
  }
  AttackScenario s{start, std::move(u), j.value("label", std::string{})};
  s.validate();
  return s;
}

json report_summary_to_json(const DetectionReport& r) {
  std::size_t attacks = 0;
  for (const auto& d : r.detections) attacks += d.verdict == Verdict::Attack ? 1 : 0;
  return json{{"armed_at", optional_to_json(r.armed_at)},
              {"first_detection", optional_to_json(r.first_detection)},
              {"threshold", r.threshold},
              {"N", r.window},
              {"q", r.q},
              {"fit_residual", r.fit_residual},
              {"attack_verdicts", attacks},
              {"attack_window_unprotected", r.attack_window_unprotected}};
}

void write_report_csv(std::ostream& os, const DetectionReport& r) {
  os << "k,residual,verdict\n";
  for (const auto& d : r.detections) {
    os << d.k << ',' << format_double(d.residual) << ',' << (d.verdict == Verdict::Attack ? "Attack" : "NoAttack")
       << '\n';
  }
}

}  // namespace io
}  // namespace ddmon
