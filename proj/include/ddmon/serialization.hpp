#pragma once

#include <iosfwd>

#include "json.hpp"

#include "ddmon/attacks.hpp"
#include "ddmon/features.hpp"
#include "ddmon/indices.hpp"
#include "ddmon/linsys.hpp"
#include "ddmon/monitor.hpp"

namespace ddmon::io {

using nlohmann::json;

/// Flat row-major array.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* what);

/// {"n", "m", "p", "A", "B", "C", "D"} with row-major flat arrays.
json system_to_json(const LtiSystem& sys);
LtiSystem system_from_json(const json& j);

json index_report_to_json(const IndexReport& r);

/// {"q", "M" (row-major), "fit_residual"}.
json dynamics_to_json(const FeatureDynamics& d);
FeatureDynamics dynamics_from_json(const json& j);

/// {"start", "m", "samples" (u(start), u(start+1), ...), "label"}.
json scenario_to_json(const AttackScenario& s);
AttackScenario scenario_from_json(const json& j);

/// {"armed_at", "first_detection", "threshold", "N", "q", ...}; absent
/// optionals are written as null.
json report_summary_to_json(const DetectionReport& r);

/// CSV with header `k,residual,verdict`.
void write_report_csv(std::ostream& os, const DetectionReport& r);

}  // namespace ddmon::io
