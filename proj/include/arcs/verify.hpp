#ifndef ARCS_VERIFY_HPP_
#define ARCS_VERIFY_HPP_

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace arcs
{
struct CriterionResult
{
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;  // seconds allowed
};

inline constexpr int kCriterionCount = 9;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Runs criterion id (1..9). Passing requires both the check and the time budget.
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);

std::vector<CriterionResult> run_all(std::uint64_t seed = kDefaultSeed);

/// "PASS [3] name (0.12 s): detail"
std::string format_line(const CriterionResult & r);

nlohmann::json to_json(const CriterionResult & r);

}  // namespace arcs

#endif  // ARCS_VERIFY_HPP_
