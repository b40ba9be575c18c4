#include <atomic>
#include <csignal>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {
std::atomic<bool> g_interrupted{false};
extern "C" void on_interrupt(int) { g_interrupted.store(true); }
}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
  return uavr::cli::run(std::vector<std::string>(argv, argv + argc), &g_interrupted);
}
