#ifndef DIATOMIC_RUNNER_HPP
#define DIATOMIC_RUNNER_HPP

#include <atomic>
#include <optional>
#include <string>

#include "diatomic/config.hpp"

namespace diatomic {

struct RunOptions {
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    int workers = 0;  // 0: DIATOMIC_FREEZE_WORKERS env or hardware count
};

// Exit codes: 0 ok, 2 config error, 3 numeric failure, 130 interrupted.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitInterrupted = 130;

// Cooperative interruption flag (set from a SIGINT handler); checked between
// work units so partial outputs are flagged in the manifest.
std::atomic<bool>& interrupt_flag();

int run(const ExperimentConfig& config, const RunOptions& options);

// Convenience: load + run, mapping ConfigError to exit code 2 and numeric
// failures to 3; messages go to stderr.
int run_config_file(const std::string& config_path, const RunOptions& options);

int resolve_workers(int requested);

}  // namespace diatomic

#endif
