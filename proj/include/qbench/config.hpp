#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "qbench/noise.hpp"

namespace qbench {

using Json = nlohmann::ordered_json;

struct DeviceConfig {
  std::array<double, 5> f10_mhz{};
  std::array<double, 5> nonlinearity_mhz{};
  std::array<double, 4> nn_coupling_mhz{};  // pair (q, q+1)
  double nnn_coupling_mhz = 1.3;
  double readout_fidelity = 0.99;
  double init_fidelity = 0.99;
  double flux_noise_uphi0_sqrthz = 1.1;  // informational only
  GateDurations durations;
};

struct RunConfig {
  DeviceConfig device;
  NoiseParams noise;
  std::string gate_error_profile = "none";  // "none" | "device_tables"
  std::uint64_t seed = 1;
  Json experiment = Json::object();

  // noise with the per-gate depolarizing tables attached when the calibrated
  // profile is selected
  NoiseParams resolved_noise() const;
};

// Shipped defaults: the measured device tables.
RunConfig default_config();

// Parse + validate. Unknown keys are rejected with their JSON path; syntax
// errors carry line/column. Throws std::runtime_error.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const Json& j);

Json config_to_json(const RunConfig& cfg);

// Benchmarked per-gate fidelity tables as depolarizing gate errors, plus the
// fixed CZ-pair errors.
GateErrorTable device_gate_error_table();

// The calibrated abstraction used by the GHZ reproduction: device gate-error
// tables, T1 = 30 us everywhere, idle depolarizing 0.05% per 10 ns.
NoiseParams calibrated_ghz_noise();

}  // namespace qbench
