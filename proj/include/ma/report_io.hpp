#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ma/iterate.hpp"

namespace ma {

/// Shortest round-trip decimal form, or "NA" for non-finite values.
std::string csv_number(double v);

/// {config, status, iterations, history[], error_l2, error_l2_raw, error_inf, setup_ms, total_wall_ms, message}.
/// Non-finite numbers become null.
nlohmann::json report_to_json(const SolveReport& report, const nlohmann::json& config);

void write_report_json(std::ostream& os, const SolveReport& report, const nlohmann::json& config);

/// Header: i,update_l2,res_l2,res_inf,lambda,inner_iters,wall_ms
void write_history_csv(std::ostream& os, const SolveReport& report);

}  // namespace ma
