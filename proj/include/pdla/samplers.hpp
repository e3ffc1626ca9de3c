/*
 * Langevin transition kernels and chain drivers.
 *
 *   ula        theta' = theta - delta*grad U(theta) + sqrt(2 delta) xi
 *   mala       ula proposal + Metropolis correction
 *   prox_ula   theta' = (1 - delta/rho) theta + (delta/rho) prox_{rho U}(theta)
 *              + sqrt(2 delta) xi, prox solved to tolerance
 *   prox_mala  prox_ula proposal + Metropolis correction, with the prox of
 *              the current state reused from the previous accept-reject step
 *   ula_pdfp   prox_ula with the prox replaced by K PDFP iterations started
 *              at (theta, 0)
 *   mala_pdfp  Metropolis-adjusted variant driven by the cached K-step prox
 *              P_n; on acceptance the cache advances to the proposal's
 *              K-step prox, on rejection it is kept
 *
 * The dual variable of the inner solver is always restarted at zero so each
 * transition depends on the current state only (the chains stay Markov).
 * Within a step the generator draws the noise field first and the
 * acceptance uniform second; identical (seed, config, target) triples give
 * bitwise-identical chains. One chain is strictly sequential; chains with
 * distinct streams share targets read-only and may run in parallel.
 */
#pragma once

#include <optional>
#include <vector>

#include "pdla/moreau.hpp"
#include "pdla/rng.hpp"

namespace pdla {

enum class SamplerKind { ula, mala, prox_ula, prox_mala, ula_pdfp, mala_pdfp };

const char* sampler_name(SamplerKind k);
SamplerKind sampler_from_name(const std::string& name);

struct SamplerHooks {
    bool zero_noise = false;                // draw xi = 0 (tests)
    std::optional<double> forced_uniform;   // replace the acceptance draw a (tests)
};

struct SamplerConfig {
    double delta = 0.0;      // step size
    double rho = 0.0;        // Moreau parameter
    int K = 1;               // inner PDFP iterations
    double gamma = 0.0;      // <= 0: default 1/(M2 + 1/rho)
    double lambda = 0.0;     // <= 0: default 1/lambda_max(BB^T)
    long N = 0;              // chain length
    long burn_in = 0;
    std::uint64_t seed = 0;
    long thin = 1;
    double exact_tol = 1e-10;  // exact-mode prox stopping tolerance
    int max_inner = 500;       // exact-mode prox iteration cap
    bool prox_cache_literal = true;  // P0 = theta0; false: P0 = K-step prox(theta0)
    bool store_samples = true;
    std::size_t track_coords = 64;   // scalar traces kept for diagnostics
    bool track_energy = false;
    SamplerHooks hooks;

    MoreauConfig moreau() const {
        MoreauConfig m;
        m.rho = rho;
        m.inner.gamma = gamma;
        m.inner.lambda = lambda;
        m.exact_tol = exact_tol;
        m.max_inner = max_inner;
        return m;
    }
};

void validate_sampler_config(SamplerKind kind, const CompositeTarget& target,
                             const SamplerConfig& cfg);

struct ChainState {
    RealField theta;
    std::optional<RealField> prox_cache;  // P_n for mala_pdfp / cached prox for prox_mala
    CounterRng rng{0};
    long n = 0;
    long accept_count = 0;
    long mh_decisions = 0;
    std::optional<double> energy_cache;   // U(theta), maintained by MALA-type steps
};

ChainState make_chain_state(const RealField& theta0, std::uint64_t seed,
                            std::uint64_t stream = 0);

// single transitions (state updated in place)
void ula_step(ChainState& state,
              const std::function<RealField(const RealField&)>& grad_U,
              double delta, const SamplerHooks& hooks = {});
void mala_step(ChainState& state,
               const std::function<double(const RealField&)>& energy_U,
               const std::function<RealField(const RealField&)>& grad_U,
               double delta, const SamplerHooks& hooks = {});
void prox_ula_step(ChainState& state, const CompositeTarget& target,
                   const SamplerConfig& cfg);
void prox_mala_step(ChainState& state, const CompositeTarget& target,
                    const SamplerConfig& cfg);
void ula_pdfp_step(ChainState& state, const CompositeTarget& target,
                   const SamplerConfig& cfg);
void mala_pdfp_step(ChainState& state, const CompositeTarget& target,
                    const SamplerConfig& cfg);

using StepKernel = std::function<void(ChainState&)>;

// Bind a sampler kind to a target and configuration. ula/mala require a
// smooth energy (zero penalty weight).
StepKernel make_kernel(SamplerKind kind, const CompositeTarget& target,
                       const SamplerConfig& cfg);

struct ChainOutput {
    std::vector<RealField> samples;  // thinned, post burn-in (when stored)
    long n_samples = 0;              // floor((N - burn_in)/thin)
    double acceptance_rate = 0.0;    // over Metropolis decisions; 0 for unadjusted
    RealField mean;                  // streaming mean of retained samples
    RealField variance;              // streaming per-coordinate variance
    double esjd = 0.0;               // mean ||theta_{n+1} - theta_n||^2 post burn-in
    std::vector<std::size_t> tracked_coords;
    std::vector<std::vector<double>> traces;  // one series per tracked coordinate
    std::vector<double> energy_trace;
};

ChainOutput run_chain(const RealField& initial, const StepKernel& kernel,
                      const SamplerConfig& cfg, std::uint64_t stream = 0,
                      const std::function<double(const RealField&)>& energy_fn = {});

// Bisection helper over delta = rho for a ~50% MALA-PDFP acceptance rate.
struct TuneResult {
    double delta = 0.0;
    double acceptance = 0.0;
    int probes = 0;
    bool ok = false;
};

TuneResult tune_step_size(const CompositeTarget& target, const RealField& theta0,
                          SamplerConfig base, double delta_lo, double delta_hi,
                          double accept_lo = 0.40, double accept_hi = 0.60,
                          int max_probes = 8, long probe_steps = 2000);

}  // namespace pdla
