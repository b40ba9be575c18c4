#pragma once

#include <atomic>
#include <string>
#include <vector>

namespace uavr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 2;
inline constexpr int kIoFailure = 3;
inline constexpr int kTooLarge = 4;
inline constexpr int kInterrupted = 130;

/// Runs one command line (args[0] is the program name). Diagnostics go to
/// standard error; `cancel` is polled by long-running commands.
int run(const std::vector<std::string>& args, const std::atomic<bool>* cancel = nullptr);

}  // namespace uavr::cli
