// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include "arcs/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#ifndef ARCS_CLI_PATH
#error "ARCS_CLI_PATH must name the arcs executable"
#endif

namespace
{
int exit_status(int raw)
{
#ifdef WEXITSTATUS
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#else
  return raw;
#endif
}
}  // namespace

int main()
{
  int failed = 0;
  for (int id = 1; id <= arcs::kCriterionCount; ++id) {
    arcs::CriterionResult r = arcs::run_criterion(id);
    std::cout << arcs::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }

  auto dir = std::filesystem::temp_directory_path() / "arcs_acceptance";
  std::filesystem::create_directories(dir);
  std::string cmd = std::string("\"") + ARCS_CLI_PATH + "\" --out \"" + dir.string() + "\" verify-all > \"" + (dir / "log.txt").string() + "\" 2>&1";
  auto t0 = std::chrono::steady_clock::now();
  int code = exit_status(std::system(cmd.c_str()));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = code == 0 && secs < 120;
  std::printf("%s [10] verify-all end to end (%.2f s / 120 s): exit code %d\n", ok ? "PASS" : "FAIL", secs, code);
  failed += ok ? 0 : 1;

  std::printf("%d of %d criteria passed\n", arcs::kCriterionCount + 1 - failed, arcs::kCriterionCount + 1);
  return failed == 0 ? 0 : 1;
}
