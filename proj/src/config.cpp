#include "swipt/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace swipt {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void key_error(const std::string& source, const std::string& key,
                            const std::string& what) {
  throw ConfigError(source + ": key '" + key + "': " + what);
}

double read_number(const Json& v, const std::string& source,
                   const std::string& key) {
  if (!v.is_number()) key_error(source, key, "expected a number");
  return v.get<double>();
}

// inr_db also accepts "-inf" or null for the interference-free case.
double read_db_or_off(const Json& v, const std::string& source,
                      const std::string& key) {
  if (v.is_null() || (v.is_string() && v.get<std::string>() == "-inf")) {
    return -std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) key_error(source, key, "expected a number, \"-inf\" or null");
  return v.get<double>();
}

Json write_db_or_off(double v) {
  if (std::isinf(v) && v < 0.0) return "-inf";
  return v;
}

int read_int(const Json& v, const std::string& source, const std::string& key) {
  if (!v.is_number_integer()) key_error(source, key, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    key_error(source, key, "integer out of range");
  }
  return static_cast<int>(i);
}

std::string read_string(const Json& v, const std::string& source,
                        const std::string& key) {
  if (!v.is_string()) key_error(source, key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> read_list(const Json& v, const std::string& source,
                              const std::string& key, bool allow_off) {
  if (!v.is_array()) key_error(source, key, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    out.push_back(allow_off ? read_db_or_off(v[i], source, k)
                            : read_number(v[i], source, k));
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const Json&, const std::string&)> read;
  std::function<Json(const RunConfig&)> write;
};

#define SWIPT_NUMBER(name)                                                   \
  Field {                                                                    \
    #name,                                                                   \
        [](RunConfig& c, const Json& v, const std::string& s) {              \
          c.name = read_number(v, s, #name);                                 \
        },                                                                   \
        [](const RunConfig& c) { return Json(c.name); }                      \
  }
#define SWIPT_INT(name)                                                      \
  Field {                                                                    \
    #name,                                                                   \
        [](RunConfig& c, const Json& v, const std::string& s) {              \
          c.name = read_int(v, s, #name);                                    \
        },                                                                   \
        [](const RunConfig& c) { return Json(c.name); }                      \
  }
#define SWIPT_STRING(name)                                                   \
  Field {                                                                    \
    #name,                                                                   \
        [](RunConfig& c, const Json& v, const std::string& s) {              \
          c.name = read_string(v, s, #name);                                 \
        },                                                                   \
        [](const RunConfig& c) { return Json(c.name); }                      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      SWIPT_NUMBER(bandwidth_hz),
      SWIPT_INT(n_subcarriers),
      SWIPT_NUMBER(sigma_za_dbm),
      SWIPT_NUMBER(sigma_zs_dbm),
      Field{"inr_db",
            [](RunConfig& c, const Json& v, const std::string& s) {
              c.inr_db = read_db_or_off(v, s, "inr_db");
            },
            [](const RunConfig& c) { return write_db_or_off(c.inr_db); }},
      SWIPT_NUMBER(p_c_dbm),
      SWIPT_NUMBER(epsilon),
      SWIPT_NUMBER(eta),
      SWIPT_NUMBER(p_max_dbm),
      SWIPT_NUMBER(p_pg_dbm),
      SWIPT_NUMBER(p_min_req_dbm),
      SWIPT_NUMBER(p_max_req_dbm),
      SWIPT_NUMBER(r_min_bps),
      SWIPT_NUMBER(carrier_hz),
      SWIPT_NUMBER(distance_m),
      SWIPT_NUMBER(antenna_gain_db),
      SWIPT_NUMBER(shadowing_db),
      SWIPT_NUMBER(breakpoint_m),
      SWIPT_NUMBER(pl_exponent_near),
      SWIPT_NUMBER(pl_exponent_far),
      SWIPT_NUMBER(rician_k_db),
      SWIPT_INT(rho_grid_m),
      SWIPT_INT(l_max),
      SWIPT_NUMBER(outer_eps),
      SWIPT_STRING(loop_order),
      SWIPT_INT(inner_max_iters),
      SWIPT_NUMBER(inner_tol_residual),
      SWIPT_NUMBER(inner_tol_dual),
      SWIPT_STRING(inner_step_rule),
      Field{"p_max_dbm_grid",
            [](RunConfig& c, const Json& v, const std::string& s) {
              c.p_max_dbm_grid = read_list(v, s, "p_max_dbm_grid", false);
            },
            [](const RunConfig& c) { return Json(c.p_max_dbm_grid); }},
      Field{"inr_db_list",
            [](RunConfig& c, const Json& v, const std::string& s) {
              c.inr_db_list = read_list(v, s, "inr_db_list", true);
            },
            [](const RunConfig& c) {
              Json a = Json::array();
              for (double v : c.inr_db_list) a.push_back(write_db_or_off(v));
              return a;
            }},
      SWIPT_INT(n_trials),
      Field{"seed",
            [](RunConfig& c, const Json& v, const std::string& s) {
              if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                key_error(s, "seed", "expected a non-negative integer");
              }
              c.seed = v.get<std::uint64_t>();
            },
            [](const RunConfig& c) { return Json(c.seed); }},
      SWIPT_STRING(scheme),
      SWIPT_INT(verify_instances),
      SWIPT_INT(verify_rho_grid_m),
      SWIPT_STRING(output_csv),
      SWIPT_STRING(output_svg),
      SWIPT_STRING(output_json),
  };
  return table;
}

#undef SWIPT_NUMBER
#undef SWIPT_INT
#undef SWIPT_STRING

std::pair<std::size_t, std::size_t> line_col(const std::string& text,
                                             std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void check_semantics(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& what) {
    throw ConfigError("key '" + key + "': " + what);
  };
  if (c.loop_order != "rho_inside" && c.loop_order != "rho_outside") {
    fail("loop_order", "expected rho_inside or rho_outside");
  }
  if (c.inner_step_rule != "scaled" && c.inner_step_rule != "diminishing") {
    fail("inner_step_rule", "expected scaled or diminishing");
  }
  if (c.scheme != "proposed" && c.scheme != "baseline" && c.scheme != "both") {
    fail("scheme", "expected proposed, baseline or both");
  }
  if (c.l_max < 1) fail("l_max", "must be >= 1");
  if (!(c.outer_eps > 0.0)) fail("outer_eps", "must be > 0");
  if (c.inner_max_iters < 1) fail("inner_max_iters", "must be >= 1");
  if (!(c.inner_tol_residual > 0.0)) fail("inner_tol_residual", "must be > 0");
  if (!(c.inner_tol_dual > 0.0)) fail("inner_tol_dual", "must be > 0");
  if (c.n_trials < 1) fail("n_trials", "must be >= 1");
  if (c.p_max_dbm_grid.empty()) fail("p_max_dbm_grid", "must not be empty");
  if (c.inr_db_list.empty()) fail("inr_db_list", "must not be empty");
  if (c.verify_instances < 1) fail("verify_instances", "must be >= 1");
  if (c.verify_rho_grid_m < 1) fail("verify_rho_grid_m", "must be >= 1");
  for (double v : c.p_max_dbm_grid) {
    if (!std::isfinite(v)) fail("p_max_dbm_grid", "entries must be finite");
  }
  for (double v : c.inr_db_list) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      fail("inr_db_list", "entries must be finite or -inf");
    }
  }
  to_params(c);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(source + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": malformed JSON (" + e.what() + ")");
  }
  if (!root.is_object()) throw ConfigError(source + ": top level must be an object");

  RunConfig cfg;
  for (const auto& [key, value] : root.items()) {
    const Field* field = nullptr;
    for (const Field& f : fields()) {
      if (key == f.key) field = &f;
    }
    if (field == nullptr) key_error(source, key, "unknown key");
    field->read(cfg, value, source);
  }
  try {
    check_semantics(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  Json root = Json::object();
  for (const Field& f : fields()) root[f.key] = f.write(cfg);
  return root.dump(2) + "\n";
}

SystemParams to_params(const RunConfig& c) {
  SystemParams p;
  p.bandwidth_hz = c.bandwidth_hz;
  p.n_subcarriers = c.n_subcarriers;
  p.sigma_za_w = dbm_to_watt(c.sigma_za_dbm);
  p.sigma_zs_w = dbm_to_watt(c.sigma_zs_dbm);
  p.inr_db = c.inr_db;
  p.p_c_w = dbm_to_watt(c.p_c_dbm);
  p.epsilon = c.epsilon;
  p.eta = c.eta;
  p.p_max_w = dbm_to_watt(c.p_max_dbm);
  p.p_pg_w = dbm_to_watt(c.p_pg_dbm);
  p.p_min_req_w = dbm_to_watt(c.p_min_req_dbm);
  p.p_max_req_w = dbm_to_watt(c.p_max_req_dbm);
  p.r_min_bps = c.r_min_bps;
  p.carrier_hz = c.carrier_hz;
  p.distance_m = c.distance_m;
  p.antenna_gain_db = c.antenna_gain_db;
  p.shadowing_lin = db_to_linear(c.shadowing_db);
  p.breakpoint_m = c.breakpoint_m;
  p.pl_exponent_near = c.pl_exponent_near;
  p.pl_exponent_far = c.pl_exponent_far;
  p.rician_k_db = c.rician_k_db;
  p.rho_grid_m = c.rho_grid_m;
  try {
    p.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  return p;
}

OuterOptions to_solver(const RunConfig& c) {
  OuterOptions o;
  o.l_max = c.l_max;
  o.eps = c.outer_eps;
  o.loop_order = c.loop_order == "rho_outside" ? LoopOrder::kRhoOutside
                                               : LoopOrder::kRhoInside;
  o.inner.max_iters = c.inner_max_iters;
  o.inner.tol_residual = c.inner_tol_residual;
  o.inner.tol_dual = c.inner_tol_dual;
  o.inner.step_rule = c.inner_step_rule == "diminishing" ? StepRule::kDiminishing
                                                         : StepRule::kScaled;
  return o;
}

SweepConfig to_sweep(const RunConfig& c) {
  SweepConfig s;
  s.params = to_params(c);
  s.p_max_dbm_grid = c.p_max_dbm_grid;
  s.inr_db_list = c.inr_db_list;
  s.n_trials = c.n_trials;
  s.base_seed = c.seed;
  s.scheme = parse_scheme_selection(c.scheme);
  s.solver = to_solver(c);
  return s;
}

}  // namespace swipt
