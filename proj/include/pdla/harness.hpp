/*
 * Configuration-driven experiment runner behind the CLI: builds models,
 * runs sampler suites, writes PGM/CSV artifacts and drives the verify
 * suites. Artifacts are a pure function of (config bytes, seed); wall-clock
 * timings go to stdout only.
 */
#pragma once

#include <optional>
#include <string>

namespace pdla {

struct HarnessOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_dir_override;
    int threads = 1;
};

int cmd_sample(const std::string& config_path, const HarnessOptions& opts);
int cmd_verify(const std::string& suite, const HarnessOptions& opts);
int cmd_experiment_deblur(const std::string& config_path, const HarnessOptions& opts);

}  // namespace pdla
