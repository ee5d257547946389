#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qnl::verify {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  int jobs = 1;
  std::uint64_t seed = 20240531;
};

constexpr int kCriteria = 13;

/// Runs acceptance criterion id (1..13). Never throws; errors are reported as failures.
Criterion run_criterion(int id, const VerifyOptions& opt = {});

/// "criterion 3 PASS ghost forces | ... (1.2 s)"
std::string format(const Criterion& c);

}  // namespace qnl::verify
