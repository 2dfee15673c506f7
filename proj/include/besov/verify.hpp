#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace besov::verify {

enum class Tier { quick, full };

Tier tier_from_string(const std::string& s);

// resolution and effort knobs per tier
struct TierParams {
  int N1 = 256;   // 1D points
  int N2 = 128;   // 2D points per axis
  int solver_iters = 150;
  int solver_restarts = 1;
  int hs_K1 = 48, hs_K2 = 24;
  int hs_M2 = 16;
};

TierParams tier_params(Tier t);

struct CheckResult {
  std::string id;
  bool asserted = true;   // reported-only checks never fail the run
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

struct RunOptions {
  Tier tier = Tier::quick;
  std::uint64_t seed = 1;
  std::vector<std::string> suites;  // empty -> all
};

// Stated runtime budgets assume an 8-thread machine; scale for this host.
double runtime_budget(double seconds_on_8_threads);

std::vector<std::string> suite_names();

// Runs the named suites (module invariants + acceptance criteria) and
// returns one result per check. Acceptance checks are named accept.c1..c14.
std::vector<CheckResult> run_checks(const RunOptions& opts);

bool all_asserted_pass(const std::vector<CheckResult>& results);

}  // namespace besov::verify
