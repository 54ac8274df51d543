#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swipt/config.hpp"
#include "swipt/dinkelbach.hpp"
#include "swipt/harness.hpp"
#include "swipt/report.hpp"

namespace py = pybind11;
using namespace swipt;

PYBIND11_MODULE(_core, m) {
  m.doc() = "OFDM power allocation with power-splitting receivers";

  py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("dbm_to_watt", &dbm_to_watt);
  m.def("watt_to_dbm", &watt_to_dbm);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_static("reference", &SystemParams::reference)
      .def("validate", &SystemParams::validate)
      .def_readwrite("bandwidth_hz", &SystemParams::bandwidth_hz)
      .def_readwrite("n_subcarriers", &SystemParams::n_subcarriers)
      .def_readwrite("sigma_za_w", &SystemParams::sigma_za_w)
      .def_readwrite("sigma_zs_w", &SystemParams::sigma_zs_w)
      .def_readwrite("inr_db", &SystemParams::inr_db)
      .def_readwrite("p_c_w", &SystemParams::p_c_w)
      .def_readwrite("epsilon", &SystemParams::epsilon)
      .def_readwrite("eta", &SystemParams::eta)
      .def_readwrite("p_max_w", &SystemParams::p_max_w)
      .def_readwrite("p_pg_w", &SystemParams::p_pg_w)
      .def_readwrite("p_min_req_w", &SystemParams::p_min_req_w)
      .def_readwrite("p_max_req_w", &SystemParams::p_max_req_w)
      .def_readwrite("r_min_bps", &SystemParams::r_min_bps)
      .def_readwrite("carrier_hz", &SystemParams::carrier_hz)
      .def_readwrite("distance_m", &SystemParams::distance_m)
      .def_readwrite("antenna_gain_db", &SystemParams::antenna_gain_db)
      .def_readwrite("rician_k_db", &SystemParams::rician_k_db)
      .def_readwrite("rho_grid_m", &SystemParams::rho_grid_m);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def_readonly("path_gain_lin", &ChannelRealization::path_gain_lin)
      .def_readonly("h2", &ChannelRealization::h2)
      .def_readonly("sigma_i_w", &ChannelRealization::sigma_i_w)
      .def_readonly("seed", &ChannelRealization::seed);

  m.def("generate_channel", &generate_channel, py::arg("params"), py::arg("seed"));
  m.def("path_loss_db", &path_loss_db);

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def_readonly("p_w", &PowerAllocation::p_w)
      .def_readonly("rho", &PowerAllocation::rho);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("alloc", &SolveResult::alloc)
      .def_readonly("q_star", &SolveResult::q_star)
      .def_readonly("capacity_bps", &SolveResult::capacity_bps)
      .def_readonly("harvested_w", &SolveResult::harvested_w)
      .def_readonly("u_tp_w", &SolveResult::u_tp_w)
      .def_readonly("feasible", &SolveResult::feasible)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("outer_iterations", &SolveResult::outer_iterations)
      .def_readonly("ee_trace", &SolveResult::ee_trace);

  m.def("solve", [](const ChannelRealization& ch, const SystemParams& p, int rho_grid_m) {
    OuterOptions o;
    o.rho_grid_m = rho_grid_m;
    py::gil_scoped_release release;
    return dinkelbach_solve(ch, p, o);
  }, py::arg("channel"), py::arg("params"), py::arg("rho_grid_m") = 0);

  m.def("solve_baseline", [](const ChannelRealization& ch, const SystemParams& p, int rho_grid_m) {
    OuterOptions o;
    o.rho_grid_m = rho_grid_m;
    py::gil_scoped_release release;
    return baseline_capacity_solve(ch, p, o);
  }, py::arg("channel"), py::arg("params"), py::arg("rho_grid_m") = 0);

  py::class_<BruteForceResult>(m, "BruteForceResult")
      .def_readonly("alloc", &BruteForceResult::alloc)
      .def_readonly("ee", &BruteForceResult::ee)
      .def_readonly("feasible", &BruteForceResult::feasible);

  m.def("brute_force", [](const ChannelRealization& ch, const SystemParams& p, int rho_grid_m) {
    BruteForceOptions o;
    o.rho_grid_m = rho_grid_m;
    py::gil_scoped_release release;
    return brute_force_solve(ch, p, o);
  }, py::arg("channel"), py::arg("params"), py::arg("rho_grid_m") = 20);

  py::class_<SmallInstance>(m, "SmallInstance")
      .def_readonly("params", &SmallInstance::params)
      .def_readonly("channel", &SmallInstance::channel);
  m.def("random_small_instance", &random_small_instance, py::arg("seed"),
        py::arg("n_subcarriers"));

  // Sweep driven by a JSON config string; returns the CSV table.
  m.def("sweep_csv", [](const std::string& config_json, int threads) {
    SweepConfig cfg = to_sweep(parse_config(config_json));
    cfg.threads = threads;
    std::vector<SweepRow> rows;
    {
      py::gil_scoped_release release;
      rows = sweep(cfg);
    }
    return csv_text(rows);
  }, py::arg("config_json") = "{}", py::arg("threads") = 0);

  m.def("default_config_json", [] { return serialize_config(RunConfig{}); });
}
