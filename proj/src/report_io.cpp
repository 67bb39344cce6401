#include "ma/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace ma {

namespace {

nlohmann::json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "NA";
    return {buf, end};
}

nlohmann::json report_to_json(const SolveReport& report, const nlohmann::json& config) {
    nlohmann::json history = nlohmann::json::array();
    for (const auto& r : report.history) {
        history.push_back({
            {"i", r.i},
            {"update_l2", number_or_null(r.update_l2)},
            {"res_l2", number_or_null(r.res_l2)},
            {"res_inf", number_or_null(r.res_inf)},
            {"lambda", number_or_null(r.lambda)},
            {"inner_iters", r.inner_iters},
            {"wall_ms", r.wall_ms},
        });
    }
    const double nan = std::nan("");
    return {
        {"config", config},
        {"scheme", report.scheme},
        {"status", std::string(to_string(report.status))},
        {"iterations", report.iterations},
        {"history", std::move(history)},
        {"error_l2", number_or_null(report.error ? report.error->l2 : nan)},
        {"error_l2_raw", number_or_null(report.error ? report.error->l2_raw : nan)},
        {"error_inf", number_or_null(report.error ? report.error->inf : nan)},
        {"setup_ms", report.setup_ms},
        {"total_wall_ms", report.total_wall_ms},
        {"message", report.message},
    };
}

void write_report_json(std::ostream& os, const SolveReport& report, const nlohmann::json& config) {
    os << report_to_json(report, config).dump(2) << '\n';
}

void write_history_csv(std::ostream& os, const SolveReport& report) {
    os << "i,update_l2,res_l2,res_inf,lambda,inner_iters,wall_ms\n";
    for (const auto& r : report.history) {
        os << r.i << ',' << csv_number(r.update_l2) << ',' << csv_number(r.res_l2) << ',' << csv_number(r.res_inf) << ','
           << csv_number(r.lambda) << ',' << r.inner_iters << ',' << csv_number(r.wall_ms) << '\n';
    }
}

}  // namespace ma
