#pragma once

// Self-check suite behind `qwsearch verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace qwsearch::cli {

struct Check {
  std::string name;
  double tolerance = 0.0;
  double observed = 0.0;  // error measure compared against tolerance
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  bool full = false;  // n <= 12 instead of n <= 8
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct VerifyReport {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const;
  std::string to_json() const;
};

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace qwsearch::cli
