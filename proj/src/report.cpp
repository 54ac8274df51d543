#include "swipt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace swipt {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("csv line " + std::to_string(line) +
                           ": bad number '" + s + "'");
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double metric_value(const SweepRow& r, Metric m) {
  switch (m) {
    case Metric::kEnergyEfficiency: return r.avg_ee_bit_per_joule;
    case Metric::kCapacity: return r.avg_capacity_bps;
    case Metric::kHarvested: return r.avg_harvested_dbm;
    case Metric::kRho: return r.avg_rho;
    case Metric::kFeasibility: return r.feasibility_rate;
  }
  return 0.0;
}

// Round step of roughly span / 5 for axis ticks.
double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to emit");
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_number(r.p_max_dbm) + ',' + format_number(r.inr_db) + ',' +
           to_string(r.scheme) + ',' + format_number(r.avg_ee_bit_per_joule) +
           ',' + format_number(r.avg_capacity_bps) + ',' +
           format_number(r.avg_harvested_dbm) + ',' + format_number(r.avg_rho) +
           ',' + format_number(r.feasibility_rate) + ',' +
           std::to_string(r.n_trials) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  write_text(path, csv_text(rows));
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv line 1: unexpected header");
  std::vector<SweepRow> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw std::runtime_error("csv line " + std::to_string(n) +
                               ": expected 9 fields");
    }
    SweepRow r;
    r.p_max_dbm = parse_double(f[0], n);
    r.inr_db = parse_double(f[1], n);
    if (f[2] == "proposed") {
      r.scheme = Scheme::kProposed;
    } else if (f[2] == "baseline") {
      r.scheme = Scheme::kBaseline;
    } else {
      throw std::runtime_error("csv line " + std::to_string(n) +
                               ": unknown scheme '" + f[2] + "'");
    }
    r.avg_ee_bit_per_joule = parse_double(f[3], n);
    r.avg_capacity_bps = parse_double(f[4], n);
    r.avg_harvested_dbm = parse_double(f[5], n);
    r.avg_rho = parse_double(f[6], n);
    r.feasibility_rate = parse_double(f[7], n);
    r.n_trials = static_cast<int>(parse_double(f[8], n));
    rows.push_back(r);
  }
  return rows;
}

Metric parse_metric(const std::string& s) {
  if (s == "ee") return Metric::kEnergyEfficiency;
  if (s == "capacity") return Metric::kCapacity;
  if (s == "harvest") return Metric::kHarvested;
  if (s == "rho") return Metric::kRho;
  if (s == "feasibility") return Metric::kFeasibility;
  throw std::invalid_argument("unknown metric '" + s +
                              "' (ee, capacity, harvest, rho, feasibility)");
}

std::string metric_label(Metric m) {
  switch (m) {
    case Metric::kEnergyEfficiency: return "Average energy efficiency (bit/J)";
    case Metric::kCapacity: return "Average system capacity (bit/s)";
    case Metric::kHarvested: return "Average harvested power (dBm)";
    case Metric::kRho: return "Average power splitting ratio";
    case Metric::kFeasibility: return "Feasibility rate";
  }
  return "";
}

std::vector<Series> series_from_rows(const std::vector<SweepRow>& rows,
                                     Metric metric) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const SweepRow& r : rows) {
    const std::string label =
        to_string(r.scheme) + ", INR " + format_number(r.inr_db) + " dB";
    auto it = index.find(label);
    if (it == index.end()) {
      it = index.emplace(label, out.size()).first;
      out.push_back({label, {}});
    }
    out[it->second].points.emplace_back(r.p_max_dbm, metric_value(r, metric));
  }
  for (Series& s : out) std::sort(s.points.begin(), s.points.end());
  return out;
}

std::string svg_text(const std::vector<Series>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
  const double width = 720, height = 480;
  const double left = 90, right = 220, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 == x0) { x0 -= 1; x1 += 1; }
  if (y1 == y0) { y0 -= 1; y1 += 1; }
  const double ys = nice_step(y1 - y0);
  y0 = std::floor(y0 / ys) * ys;
  y1 = std::ceil(y1 / ys) * ys;
  const double xs = nice_step(x1 - x0);

  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
  auto num = [](double v) { char b[32]; std::snprintf(b, sizeof b, "%.2f", v); return std::string(b); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
    << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(t))
      << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>"
      << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18)
      << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
  }
  for (double t = y0; t <= y1 + 1e-9 * ys; t += ys) {
    o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
      << "\" text-anchor=\"end\">" << format_number(t) << "</text>\n";
  }
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 15)
    << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << num(top + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 8];
    const bool dashed = series[i].label.rfind("baseline", 0) == 0;
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    bool first = true;
    for (auto [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      o << (first ? "" : " ") << num(px(x)) << ',' << num(py(y));
      first = false;
    }
    o << "\"/>\n";
    const double ly = top + 10 + 18 * static_cast<double>(i);
    o << "<line x1=\"" << num(left + pw + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
      << num(left + pw + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>"
      << "<text x=\"" << num(left + pw + 45) << "\" y=\"" << num(ly + 4) << "\">"
      << escape_xml(series[i].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_svg(const std::vector<Series>& series, const std::string& path,
              const std::string& title, const std::string& x_label,
              const std::string& y_label) {
  write_text(path, svg_text(series, title, x_label, y_label));
}

std::string convergence_csv(const std::vector<double>& trace) {
  std::string out = "iteration,avg_ee_bit_per_joule\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_number(trace[i]) + '\n';
  }
  return out;
}

std::string solve_result_json(const SolveResult& r, const ChannelRealization& ch,
                              const SystemParams& params) {
  using Json = nlohmann::ordered_json;
  auto num = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return format_number(v);
  };
  Json j;
  j["seed"] = ch.seed;
  j["feasible"] = r.feasible;
  j["converged"] = r.converged;
  j["outer_iterations"] = r.outer_iterations;
  j["ee_bit_per_joule"] = num(r.q_star);
  j["capacity_bps"] = num(r.capacity_bps);
  j["harvested_w"] = num(r.harvested_w);
  j["harvested_dbm"] = r.harvested_w > 0.0 ? num(watt_to_dbm(r.harvested_w)) : Json("-inf");
  j["u_tp_w"] = num(r.u_tp_w);
  j["rho"] = num(r.alloc.rho);
  const double total = r.alloc.total_w();
  j["total_power_w"] = num(total);
  j["total_power_dbm"] = total > 0.0 ? num(watt_to_dbm(total)) : Json("-inf");
  j["multipliers"] = {{"alpha", num(r.mults.alpha)}, {"beta", num(r.mults.beta)},
                      {"gamma", num(r.mults.gamma)}, {"lambda", num(r.mults.lambda)},
                      {"theta", num(r.mults.theta)}};
  Json trace = Json::array();
  for (double v : r.ee_trace) trace.push_back(num(v));
  j["ee_trace"] = trace;
  Json powers = Json::array();
  for (double v : r.alloc.p_w) powers.push_back(num(v));
  j["p_w"] = powers;
  j["n_subcarriers"] = params.n_subcarriers;
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace swipt
