/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qaprlt {

enum ExitCode : int {
  exit_ok = 0,
  exit_input_error = 1,
  exit_not_optimal = 2,
  exit_capacity = 3,
  exit_verify_mismatch = 4,
};

/// "3000000000", "1GB", "1.5GiB", "512M". Decimal for K/M/G/T, binary for Ki/Mi/Gi/Ti.
std::optional<std::uint64_t> parse_byte_size(std::string_view text);

/// Total physical memory in bytes, 0 if unknown.
std::uint64_t physical_memory_bytes();

/// Entry point of the qaprlt executable. `args` excludes the program name.
/// Environment overrides QAPRLT_WORKERS and QAPRLT_MEM_CAP apply unless the
/// corresponding flag is given.
int run_cli(const std::vector<std::string>& args,
            std::ostream& out,
            std::ostream& err,
            const std::atomic<bool>* interrupt = nullptr);

}  // namespace qaprlt
