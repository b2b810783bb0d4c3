/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/commands.hpp>

#include <atomic>
#include <csignal>
#include <iostream>

namespace {

std::atomic<bool> interrupted{false};

extern "C" void on_signal(int) { interrupted.store(true); }

}  // namespace

int main(int argc, char** argv)
{
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::vector<std::string> args(argv + 1, argv + argc);
  return qaprlt::run_cli(args, std::cout, std::cerr, &interrupted);
}
