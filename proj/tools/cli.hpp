#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bellkit/serialize.hpp"

namespace bellkit::cli {

/// Exit codes: 0 satisfied / feasible / reproduced, 2 violated / infeasible,
/// 1 usage or I/O error, 3 a reproduce-paper check failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolated = 2;
inline constexpr int kExitCheckFailed = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  Json report;
};

struct ScenarioOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t n_pairs = kDefaultPairs;
  unsigned threads = 1;
};

/// The canonical scenarios, in bundle order.
std::vector<ScenarioCheck> reproduce_paper(const ScenarioOptions& options);

/// Writes <dir>/<name>.json per check plus summary.json. Throws
/// std::runtime_error naming the path on I/O failure.
void write_bundle(const std::vector<ScenarioCheck>& checks, const ScenarioOptions& options,
                  const std::filesystem::path& dir);

}  // namespace bellkit::cli
