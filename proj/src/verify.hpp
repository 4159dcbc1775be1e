#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace checkerboard {

// One named invariant check. Upper-bound checks pass when the residual is at
// most the tolerance; lower-bound (margin) checks pass when it exceeds it.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 987654321;
  std::string only;  // prefix filter; empty runs the whole suite
  int path_n = 10;   // longest path length for the enumeration oracle, <= 16
  Eigen::Vector3d chain_p{1.0, 2.0, 2.0};
  double chain_m = 4.0;
};

// Runs the filtered suite in a fixed order. Every check seeds its own
// generator from (seed, name), so results do not depend on which other
// checks run. Throws std::invalid_argument for an unmatched filter or an
// out-of-range path length.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts);

bool all_pass(const std::vector<CheckResult>& checks);

// 17-significant-digit formatting shared by every emitted number.
std::string format_float(double v);

// Byte-stable report: fixed key order, fixed number formatting, nothing
// environment- or time-dependent.
std::string report_json(const VerifyOptions& opts, const std::vector<CheckResult>& checks);

}  // namespace checkerboard
