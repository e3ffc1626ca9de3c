#include <CLI11.hpp>

#include "pdla/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pdla: proximal Langevin samplers with a primal-dual fixed-point inner solver"};
    app.require_subcommand(1);

    pdla::HarnessOptions opts;
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    auto* dir_opt =
        app.add_option("--out-dir", out_dir, "override the config output directory");
    app.add_option("--threads", opts.threads, "worker threads (1 keeps runs deterministic)")
        ->default_val(1);

    std::string sample_config;
    auto* sample = app.add_subcommand("sample", "run one sampler from a config file");
    sample->fallthrough();
    sample->add_option("config", sample_config, "config file path")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->fallthrough();
    verify->add_option("suite", suite, "prox | pdfp | bounds | samplers")->required();

    std::string exp_config;
    auto* experiment =
        app.add_subcommand("experiment-deblur", "run a (sampler x K) deblurring table");
    experiment->fallthrough();
    experiment->add_option("config", exp_config, "config file path")->required();

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) opts.seed_override = seed;
    if (dir_opt->count() > 0) opts.out_dir_override = out_dir;

    if (*sample) return pdla::cmd_sample(sample_config, opts);
    if (*verify) return pdla::cmd_verify(suite, opts);
    if (*experiment) return pdla::cmd_experiment_deblur(exp_config, opts);
    return 1;
}
