/*
 * Experiment configuration: a small [section] key = value text format with
 * three sections.
 *
 *   [model]    kind = deblur | illposed | toy1d
 *              size = 64            synthetic phantom side (deblur)
 *              image = path.pgm     alternative to size
 *              kernel = motion:7    or uniform:RxC or delta
 *              sigma, lambda_reg, ridge_eps, data_seed
 *              dim_obs, dim_param, condition   (illposed)
 *   [sampler]  kind = ula|mala|prox_ula|prox_mala|ula_pdfp|mala_pdfp
 *              samplers = a, b, ... and K = 1, 100   (experiment command)
 *              delta, rho, K, gamma, lambda, N, burn_in, thin, seed,
 *              exact_tol, max_inner
 *   [output]   dir = out
 *              traces = true | false
 *
 * '#' starts a comment; unknown sections or keys are errors. Validation
 * applies the sampler invariants (delta in (0, rho] for proximal kinds,
 * gamma in (0, 2/(M2 + 1/rho)), lambda <= 1/lambda_max(BB^T)) before any
 * run.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdla/samplers.hpp"

namespace pdla {

struct ModelSection {
    std::string kind = "toy1d";
    std::string image;               // PGM path; empty = synthetic
    std::size_t size = 64;           // synthetic phantom side
    std::string kernel = "motion:7";
    double sigma = 0.01;
    double lambda_reg = 1.0;
    double ridge_eps = 0.0;
    std::uint64_t data_seed = 7;
    std::size_t dim_obs = 45;        // illposed only
    std::size_t dim_param = 256;
    double condition = 100.0;
};

struct SamplerSection {
    std::vector<std::string> kinds{"mala_pdfp"};  // one entry for cmd_sample
    std::vector<int> k_list{1};
    double delta = 0.0;
    double rho = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    long n = 1000;
    long burn_in = 0;
    long thin = 1;
    std::uint64_t seed = 1;
    double exact_tol = 1e-10;
    int max_inner = 500;
};

struct OutputSection {
    std::string dir = "out";
    bool traces = false;
};

struct ExperimentConfig {
    ModelSection model;
    SamplerSection sampler;
    OutputSection output;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// kernel spec strings: "motion:L", "uniform:RxC", "delta"
RealField parse_kernel_spec(const std::string& spec);

struct BuiltModel {
    CompositeTarget target;
    std::optional<ToyTarget> toy;
    std::optional<RealField> truth;
    std::optional<RealField> observation;
    RealField theta0;
};

BuiltModel build_model(const ModelSection& model);

SamplerConfig to_sampler_config(const SamplerSection& s, int K);

}  // namespace pdla
