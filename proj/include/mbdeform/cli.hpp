#pragma once

#include <string>
#include <vector>

namespace mbdeform {

/// Entry point of the `mbdeform` tool:
///   run <config>            run the scenario, write snapshots and report.csv
///   verify <config>         run the self-checks, one PASS/FAIL line each
///   export <snapshot-dir>   write z-slices of every snapshot file in a directory
/// Returns 0 on success, 1 on a failed run or check, 2 on usage errors.
int cli(int argc, char** argv);
int cli(const std::vector<std::string>& args);

}  // namespace mbdeform
