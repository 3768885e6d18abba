#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace semrd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Settings shared by every subcommand.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string output;
  double gap_tol_nats = 1e-9;
  double target_tol = 1e-6;
  int max_iters = 10000;
  std::uint64_t size_guard = 0;  // 0: SEMRD_SIZE_GUARD or the default
  std::uint64_t seed = 0;
};

// Runs `semrd <args...>` (args excludes the program name). Returns 0 on
// success, 1 on validation or runtime failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixed CSV number format: 12 significant digits, '.' decimal separator.
std::string format_number(double v);

}  // namespace semrd
