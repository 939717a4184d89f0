#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cones {

struct SuiteCase {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteCase> cases;

  int passed() const;
  int failed() const;
  bool all_pass() const { return failed() == 0; }
};

// measure-axioms | fubini | monotone | polarize | pcs | cantor
std::vector<std::string> suite_names();

// Runs one named invariant suite. Every case draws its randomness from
// (seed, case index) only, so the result is identical for any jobs
// count and any scheduling. Unknown names throw structural_error.
SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      int jobs = 1);

}  // namespace cones
