#include "pdla/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pdla {

const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::ula: return "ula";
        case SamplerKind::mala: return "mala";
        case SamplerKind::prox_ula: return "prox_ula";
        case SamplerKind::prox_mala: return "prox_mala";
        case SamplerKind::ula_pdfp: return "ula_pdfp";
        case SamplerKind::mala_pdfp: return "mala_pdfp";
    }
    return "?";
}

SamplerKind sampler_from_name(const std::string& name) {
    for (SamplerKind k : {SamplerKind::ula, SamplerKind::mala, SamplerKind::prox_ula,
                          SamplerKind::prox_mala, SamplerKind::ula_pdfp,
                          SamplerKind::mala_pdfp})
        if (name == sampler_name(k)) return k;
    throw std::invalid_argument("unknown sampler kind: " + name);
}

namespace {

bool is_prox_kind(SamplerKind k) {
    return k != SamplerKind::ula && k != SamplerKind::mala;
}

bool is_pdfp_kind(SamplerKind k) {
    return k == SamplerKind::ula_pdfp || k == SamplerKind::mala_pdfp;
}

RealField draw_noise(ChainState& state, Shape shape, double delta,
                     const SamplerHooks& hooks) {
    if (hooks.zero_noise) return RealField(shape);
    RealField xi = state.rng.normal_field(shape);
    const double s = std::sqrt(2.0 * delta);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= s;
    return xi;
}

double draw_uniform(ChainState& state, const SamplerHooks& hooks) {
    double a = state.rng.next_uniform();  // always consume the stream
    if (hooks.forced_uniform) a = *hooks.forced_uniform;
    return a;
}

// strict a < min(1, exp(log_ratio)) in log space
bool metropolis_accept(double a, double log_ratio) {
    return std::log(a) < std::min(0.0, log_ratio);
}

}  // namespace

void validate_sampler_config(SamplerKind kind, const CompositeTarget& target,
                             const SamplerConfig& cfg) {
    if (!(cfg.delta > 0.0))
        throw std::invalid_argument("sampler config: delta must be positive");
    if (cfg.N < 0 || cfg.burn_in < 0 || cfg.burn_in > cfg.N)
        throw std::invalid_argument("sampler config: need 0 <= burn_in <= N");
    if (cfg.thin < 1) throw std::invalid_argument("sampler config: thin must be >= 1");
    if (is_prox_kind(kind)) {
        if (!(cfg.rho > 0.0))
            throw std::invalid_argument("sampler config: rho must be positive");
        if (cfg.delta > cfg.rho)
            throw std::invalid_argument(
                "sampler config: proximal samplers require delta in (0, rho], got delta = " +
                std::to_string(cfg.delta) + " > rho = " + std::to_string(cfg.rho));
    } else {
        if (target.problem.g.weight != 0.0)
            throw std::invalid_argument(
                std::string(sampler_name(kind)) +
                " requires a differentiable energy (zero penalty weight)");
        const double l_u = target.problem.lipschitz_M2;
        if (cfg.delta > 1.0 / l_u * (1.0 + 1e-12))
            throw std::invalid_argument(
                "sampler config: plain ULA/MALA require delta in (0, 1/L_U] = (0, " +
                std::to_string(1.0 / l_u) + "], got " + std::to_string(cfg.delta));
    }
    if (is_pdfp_kind(kind)) {
        if (cfg.K < 1)
            throw std::invalid_argument("sampler config: K must be a positive integer");
        MoreauConfig m = cfg.moreau();
        PdfpParams p = resolve_inner_params(target.problem, m);
        validate_pdfp_params(target.problem, p, 1.0 / cfg.rho);
    }
}

ChainState make_chain_state(const RealField& theta0, std::uint64_t seed,
                            std::uint64_t stream) {
    ChainState s;
    s.theta = theta0;
    s.rng = CounterRng(seed, stream);
    return s;
}

void ula_step(ChainState& state,
              const std::function<RealField(const RealField&)>& grad_U,
              double delta, const SamplerHooks& hooks) {
    RealField g = grad_U(state.theta);
    g.ensure_finite("ula_step gradient");
    RealField xi = draw_noise(state, state.theta.shape(), delta, hooks);
    for (std::size_t i = 0; i < state.theta.size(); ++i)
        state.theta[i] += -delta * g[i] + xi[i];
    state.theta.ensure_finite("ula_step iterate");
    ++state.n;
}

void mala_step(ChainState& state,
               const std::function<double(const RealField&)>& energy_U,
               const std::function<RealField(const RealField&)>& grad_U,
               double delta, const SamplerHooks& hooks) {
    const RealField& theta = state.theta;
    RealField g = grad_U(theta);
    RealField xi = draw_noise(state, theta.shape(), delta, hooks);

    RealField proposal(theta.shape());
    for (std::size_t i = 0; i < theta.size(); ++i)
        proposal[i] = theta[i] - delta * g[i] + xi[i];
    proposal.ensure_finite("mala_step proposal");

    if (!state.energy_cache) state.energy_cache = energy_U(theta);
    const double u_theta = *state.energy_cache;
    const double u_prop = energy_U(proposal);

    // forward mean: theta - delta*grad U(theta); reverse mean symmetric in Y
    RealField g_prop = grad_U(proposal);
    double fwd = 0.0, rev = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double df = proposal[i] - (theta[i] - delta * g[i]);
        const double dr = theta[i] - (proposal[i] - delta * g_prop[i]);
        fwd += df * df;
        rev += dr * dr;
    }
    const double log_ratio = (u_theta - u_prop) + (fwd - rev) / (4.0 * delta);

    const double a = draw_uniform(state, hooks);
    ++state.mh_decisions;
    if (metropolis_accept(a, log_ratio)) {
        state.theta = std::move(proposal);
        state.energy_cache = u_prop;
        ++state.accept_count;
    }
    ++state.n;
}

namespace {

// drift mean (1 - delta/rho) base + (delta/rho) pull
RealField proximal_mean(const RealField& base, const RealField& pull,
                        double delta, double rho) {
    return axpby(1.0 - delta / rho, base, delta / rho, pull);
}

}  // namespace

void prox_ula_step(ChainState& state, const CompositeTarget& target,
                   const SamplerConfig& cfg) {
    RealField p = prox_energy(state.theta, target, cfg.moreau(), ProxMode::exact);
    RealField xi = draw_noise(state, state.theta.shape(), cfg.delta, cfg.hooks);
    state.theta = proximal_mean(state.theta, p, cfg.delta, cfg.rho) + xi;
    state.theta.ensure_finite("prox_ula_step iterate");
    ++state.n;
}

void prox_mala_step(ChainState& state, const CompositeTarget& target,
                    const SamplerConfig& cfg) {
    MoreauConfig moreau = cfg.moreau();
    if (!state.prox_cache)
        state.prox_cache = prox_energy(state.theta, target, moreau, ProxMode::exact);
    const RealField& theta = state.theta;
    const RealField& p_theta = *state.prox_cache;

    RealField xi = draw_noise(state, theta.shape(), cfg.delta, cfg.hooks);
    RealField proposal = proximal_mean(theta, p_theta, cfg.delta, cfg.rho) + xi;
    proposal.ensure_finite("prox_mala_step proposal");

    RealField p_prop = prox_energy(proposal, target, moreau, ProxMode::exact);

    if (!state.energy_cache) state.energy_cache = target.energy(theta);
    const double u_theta = *state.energy_cache;
    const double u_prop = target.energy(proposal);

    const double fwd = norm2_sq(proposal - proximal_mean(theta, p_theta, cfg.delta, cfg.rho));
    const double rev = norm2_sq(theta - proximal_mean(proposal, p_prop, cfg.delta, cfg.rho));
    const double log_ratio = (u_theta - u_prop) + (fwd - rev) / (4.0 * cfg.delta);

    const double a = draw_uniform(state, cfg.hooks);
    ++state.mh_decisions;
    if (metropolis_accept(a, log_ratio)) {
        state.theta = std::move(proposal);
        state.prox_cache = std::move(p_prop);
        state.energy_cache = u_prop;
        ++state.accept_count;
    }
    ++state.n;
}

void ula_pdfp_step(ChainState& state, const CompositeTarget& target,
                   const SamplerConfig& cfg) {
    MoreauConfig moreau = cfg.moreau();
    PdfpParams p = resolve_inner_params(target.problem, moreau);
    RealField x_k = kstep_prox_subproblem(state.theta, cfg.rho, target.problem, p, cfg.K);
    RealField xi = draw_noise(state, state.theta.shape(), cfg.delta, cfg.hooks);
    state.theta = proximal_mean(state.theta, x_k, cfg.delta, cfg.rho) + xi;
    state.theta.ensure_finite("ula_pdfp_step iterate");
    ++state.n;
}

void mala_pdfp_step(ChainState& state, const CompositeTarget& target,
                    const SamplerConfig& cfg) {
    MoreauConfig moreau = cfg.moreau();
    PdfpParams p = resolve_inner_params(target.problem, moreau);
    if (!state.prox_cache)
        state.prox_cache =
            cfg.prox_cache_literal
                ? state.theta
                : kstep_prox_subproblem(state.theta, cfg.rho, target.problem, p, cfg.K);

    const RealField& theta = state.theta;
    const RealField& cache = *state.prox_cache;

    RealField xi = draw_noise(state, theta.shape(), cfg.delta, cfg.hooks);
    RealField proposal = proximal_mean(theta, cache, cfg.delta, cfg.rho) + xi;
    proposal.ensure_finite("mala_pdfp_step proposal");

    RealField p_tmp = kstep_prox_subproblem(proposal, cfg.rho, target.problem, p, cfg.K);

    if (!state.energy_cache) state.energy_cache = target.energy(theta);
    const double u_theta = *state.energy_cache;
    const double u_prop = target.energy(proposal);

    const double fwd = norm2_sq(proposal - proximal_mean(theta, cache, cfg.delta, cfg.rho));
    const double rev = norm2_sq(theta - proximal_mean(proposal, p_tmp, cfg.delta, cfg.rho));
    const double log_ratio = (u_theta - u_prop) + (fwd - rev) / (4.0 * cfg.delta);

    const double a = draw_uniform(state, cfg.hooks);
    ++state.mh_decisions;
    if (metropolis_accept(a, log_ratio)) {
        state.theta = std::move(proposal);
        state.prox_cache = std::move(p_tmp);
        state.energy_cache = u_prop;
        ++state.accept_count;
    }
    ++state.n;
}

StepKernel make_kernel(SamplerKind kind, const CompositeTarget& target,
                       const SamplerConfig& cfg) {
    validate_sampler_config(kind, target, cfg);
    switch (kind) {
        case SamplerKind::ula:
            return [&target, cfg](ChainState& s) {
                ula_step(s, target.problem.grad_f, cfg.delta, cfg.hooks);
            };
        case SamplerKind::mala:
            return [&target, cfg](ChainState& s) {
                mala_step(s, target.f_value, target.problem.grad_f, cfg.delta, cfg.hooks);
            };
        case SamplerKind::prox_ula:
            return [&target, cfg](ChainState& s) { prox_ula_step(s, target, cfg); };
        case SamplerKind::prox_mala:
            return [&target, cfg](ChainState& s) { prox_mala_step(s, target, cfg); };
        case SamplerKind::ula_pdfp:
            return [&target, cfg](ChainState& s) { ula_pdfp_step(s, target, cfg); };
        case SamplerKind::mala_pdfp:
            return [&target, cfg](ChainState& s) { mala_pdfp_step(s, target, cfg); };
    }
    throw std::invalid_argument("make_kernel: unknown sampler kind");
}

ChainOutput run_chain(const RealField& initial, const StepKernel& kernel,
                      const SamplerConfig& cfg, std::uint64_t stream,
                      const std::function<double(const RealField&)>& energy_fn) {
    ChainState state = make_chain_state(initial, cfg.seed, stream);

    ChainOutput out;
    const std::size_t dim = initial.size();

    // fixed random subset of coordinates for scalar traces
    if (cfg.track_coords > 0) {
        if (dim <= cfg.track_coords) {
            out.tracked_coords.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) out.tracked_coords[i] = i;
        } else {
            CounterRng pick(cfg.seed, 0x7C0DE);
            std::vector<std::size_t> idx(dim);
            for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
            for (std::size_t i = 0; i < cfg.track_coords; ++i) {
                std::size_t j = i + static_cast<std::size_t>(pick.next_u64() % (dim - i));
                std::swap(idx[i], idx[j]);
            }
            out.tracked_coords.assign(idx.begin(), idx.begin() + cfg.track_coords);
            std::sort(out.tracked_coords.begin(), out.tracked_coords.end());
        }
        out.traces.resize(out.tracked_coords.size());
    }

    out.mean = RealField(initial.shape());
    out.variance = RealField(initial.shape());
    RealField m2(initial.shape());

    RealField prev = initial;
    double esjd_sum = 0.0;
    long esjd_count = 0;
    long retained = 0;

    for (long n = 1; n <= cfg.N; ++n) {
        try {
            kernel(state);
        } catch (const std::runtime_error& e) {
            char head[128];
            std::snprintf(head, sizeof(head),
                          "chain failed at step %ld (|theta| = %.6g, theta[0] = %.6g): ",
                          n, norm2(state.theta), state.theta[0]);
            throw std::runtime_error(std::string(head) + e.what());
        }
        if (n > cfg.burn_in) {
            esjd_sum += norm2_sq(state.theta - prev);
            ++esjd_count;
            if ((n - cfg.burn_in) % cfg.thin == 0) {
                ++retained;
                // Welford update
                const double inv = 1.0 / static_cast<double>(retained);
                for (std::size_t i = 0; i < dim; ++i) {
                    const double d = state.theta[i] - out.mean[i];
                    out.mean[i] += d * inv;
                    m2[i] += d * (state.theta[i] - out.mean[i]);
                }
                for (std::size_t t = 0; t < out.tracked_coords.size(); ++t)
                    out.traces[t].push_back(state.theta[out.tracked_coords[t]]);
                if (energy_fn) out.energy_trace.push_back(energy_fn(state.theta));
                if (cfg.store_samples) out.samples.push_back(state.theta);
            }
        }
        prev = state.theta;
    }

    out.n_samples = retained;
    if (retained > 0)
        for (std::size_t i = 0; i < dim; ++i)
            out.variance[i] = m2[i] / static_cast<double>(retained);
    out.esjd = esjd_count > 0 ? esjd_sum / static_cast<double>(esjd_count) : 0.0;
    out.acceptance_rate =
        state.mh_decisions > 0
            ? static_cast<double>(state.accept_count) / static_cast<double>(state.mh_decisions)
            : 0.0;
    return out;
}

TuneResult tune_step_size(const CompositeTarget& target, const RealField& theta0,
                          SamplerConfig base, double delta_lo, double delta_hi,
                          double accept_lo, double accept_hi, int max_probes,
                          long probe_steps) {
    TuneResult res;
    double lo = delta_lo, hi = delta_hi;
    // acceptance decreases with delta: keep lo on the high-acceptance side
    for (int probe = 0; probe < max_probes; ++probe) {
        const double delta = std::sqrt(lo * hi);  // geometric midpoint
        SamplerConfig cfg = base;
        cfg.delta = delta;
        cfg.rho = delta;
        cfg.N = probe_steps;
        cfg.burn_in = 0;
        cfg.thin = 1;
        cfg.store_samples = false;
        cfg.track_coords = 0;
        StepKernel kernel = make_kernel(SamplerKind::mala_pdfp, target, cfg);
        ChainOutput out = run_chain(theta0, kernel, cfg, /*stream=*/911);
        res.delta = delta;
        res.acceptance = out.acceptance_rate;
        res.probes = probe + 1;
        if (out.acceptance_rate >= accept_lo && out.acceptance_rate <= accept_hi) {
            res.ok = true;
            return res;
        }
        if (out.acceptance_rate > accept_hi)
            lo = delta;  // too timid, increase step
        else
            hi = delta;
    }
    return res;
}

}  // namespace pdla
