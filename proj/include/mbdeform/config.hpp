#pragma once

// Run configuration: a flat JSON object with dotted keys, e.g.
//
//   { "scenario": "backstep", "n": 20, "sor.lambda": 1.5,
//     "monitor.schedule": [[0, 0.5, 1.5, 0.5], [20, 0.5, 0.5, 0.5]] }
//
// Missing keys take their defaults; unknown keys are rejected.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mbdeform/deform.hpp"

namespace mbdeform {

enum class Scenario { Backstep, SingleBlock };

struct RunConfig {
  Scenario scenario = Scenario::Backstep;
  int n = 20;
  RunSettings settings;
  std::filesystem::path output_dir = "mbdeform_out";
  int cadence = 1;  ///< write every cadence-th snapshot
  double slice_z = 0.5;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates. `source` names the input in error messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

RunConfig load_config(const std::filesystem::path& path);

MultiBlockDomain build_domain(const RunConfig& config);

}  // namespace mbdeform
