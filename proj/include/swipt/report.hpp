#pragma once

#include <string>
#include <utility>
#include <vector>

#include "swipt/dinkelbach.hpp"
#include "swipt/harness.hpp"

namespace swipt {

inline constexpr const char* kCsvHeader =
    "p_max_dbm,inr_db,scheme,avg_ee_bit_per_joule,avg_capacity_bps,"
    "avg_harvested_dbm,avg_rho,feasibility_rate,n_trials";

/// %.9g, with nan / inf / -inf spelled out.
std::string format_number(double v);

/// Throws std::invalid_argument for an empty table.
std::string csv_text(const std::vector<SweepRow>& rows);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);
/// Inverse of csv_text; throws std::runtime_error with the line number.
std::vector<SweepRow> parse_csv(const std::string& text);

enum class Metric { kEnergyEfficiency, kCapacity, kHarvested, kRho, kFeasibility };
Metric parse_metric(const std::string& s);  // ee|capacity|harvest|rho|feasibility
std::string metric_label(Metric m);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// One series per (inr, scheme), in order of first appearance, x = P_max.
std::vector<Series> series_from_rows(const std::vector<SweepRow>& rows,
                                     Metric metric);

std::string svg_text(const std::vector<Series>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label);
void emit_svg(const std::vector<Series>& series, const std::string& path,
              const std::string& title, const std::string& x_label,
              const std::string& y_label);

std::string convergence_csv(const std::vector<double>& trace);

/// Pretty JSON document for one solve.
std::string solve_result_json(const SolveResult& r, const ChannelRealization& ch,
                              const SystemParams& params);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace swipt
