#include "pdla/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pdla/bounds.hpp"
#include "pdla/diagnostics.hpp"

namespace pdla::verify {

namespace {

CheckResult check(const std::string& name, bool ok, const std::string& detail = "") {
    return CheckResult{name, ok, detail};
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

RealField random_field(Shape shape, CounterRng& rng, double scale = 1.0) {
    RealField f(shape);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = scale * rng.next_normal();
    return f;
}

// strongly convex quadratic f(x) = 0.5*||x - b||^2 plus a weighted L1 after
// a random well-conditioned dense B; the workhorse instance for the solver
// checks
CompositeProblem dense_instance(std::size_t dim, double penalty_weight,
                                std::uint64_t seed, RealField* b_out = nullptr) {
    CounterRng rng(seed);
    RealField bmat({dim, dim});
    for (std::size_t i = 0; i < bmat.size(); ++i) bmat[i] = 0.3 * rng.next_normal();
    for (std::size_t i = 0; i < dim; ++i) bmat.at(i, i) += 1.5;  // keep BB^T away from 0

    RealField b = random_field({dim, 1}, rng);
    if (b_out) *b_out = b;

    CompositeProblem prob;
    prob.B = make_dense_map(bmat);
    prob.lambda_max_BBt = power_iteration(prob.B, 500, 1e-12).value * (1.0 + 1e-9);
    prob.g = SeparablePenalty{penalty_weight};
    prob.lipschitz_M2 = 1.0;
    prob.strong_convexity_m = 1.0;
    prob.grad_f = [b](const RealField& x) { return x - b; };
    return prob;
}

CompositeTarget dense_target(std::size_t dim, double penalty_weight,
                             std::uint64_t seed) {
    CompositeTarget t;
    RealField b;
    t.problem = dense_instance(dim, penalty_weight, seed, &b);
    t.f_value = [b](const RealField& x) { return 0.5 * norm2_sq(x - b); };
    auto B = t.problem.B;
    auto g = t.problem.g;
    t.energy = [b, B, g](const RealField& x) {
        return 0.5 * norm2_sq(x - b) + g.value(B.apply(x));
    };
    t.label = "dense_verify";
    return t;
}

std::vector<CheckResult> prox_suite() {
    std::vector<CheckResult> out;
    CounterRng rng(101);

    // Moreau identity v = prox_{s g}(v) + s prox_{g*/s}(v/s), componentwise
    {
        bool ok = true;
        double worst = 0.0;
        SeparablePenalty g{0.7};
        for (int rep = 0; rep < 50; ++rep) {
            RealField v = random_field({8, 1}, rng, 2.0);
            const double s = 0.1 + 3.0 * rng.next_uniform();
            RealField direct = g.prox(v, s);
            RealField conj = prox_conjugate_scaled((1.0 / s) * v, 1.0 / s, g);
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double resid = std::abs(v[i] - (direct[i] + s * conj[i]));
                worst = std::max(worst, resid);
                ok = ok && resid <= 1e-12;
            }
        }
        out.push_back(check("moreau identity (L1)", ok, "worst residual " + num(worst)));
    }

    // firm nonexpansiveness of soft_threshold and the exact prox
    {
        bool ok = true;
        for (int rep = 0; rep < 50; ++rep) {
            RealField x = random_field({6, 1}, rng, 2.0);
            RealField y = random_field({6, 1}, rng, 2.0);
            RealField px = soft_threshold(x, 0.8), py = soft_threshold(y, 0.8);
            ok = ok && norm2_sq(px - py) <= dot(px - py, x - y) + 1e-8;
        }
        CompositeTarget t = dense_target(6, 0.5, 77);
        MoreauConfig cfg;
        cfg.rho = 0.7;
        cfg.exact_tol = 1e-12;
        cfg.max_inner = 20000;
        for (int rep = 0; rep < 10; ++rep) {
            RealField x = random_field({6, 1}, rng, 2.0);
            RealField y = random_field({6, 1}, rng, 2.0);
            RealField px = prox_energy(x, t, cfg, ProxMode::exact);
            RealField py = prox_energy(y, t, cfg, ProxMode::exact);
            ok = ok && norm2_sq(px - py) <= dot(px - py, x - y) + 1e-8;
        }
        out.push_back(check("firm nonexpansiveness", ok));
    }

    // gradient formula against central differences on the 1-D toy
    {
        ToyTarget toy = make_toy_1d();
        MoreauConfig cfg;
        cfg.rho = 0.5;
        cfg.exact_tol = 1e-10;
        cfg.max_inner = 5000;
        const double h = 1e-5;
        bool ok = true;
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            RealField th({1, 1});
            th[0] = 4.0 * (rng.next_uniform() - 0.5);
            RealField p = prox_energy(th, toy.target, cfg, ProxMode::exact);
            const double grad = moreau_gradient(th, p, cfg.rho)[0];
            RealField hi = th, lo = th;
            hi[0] += h;
            lo[0] -= h;
            const double fd =
                (moreau_value(hi, toy.target, cfg) - moreau_value(lo, toy.target, cfg)) /
                (2.0 * h);
            const double rel = std::abs(grad - fd) / std::max(1e-12, std::abs(fd));
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-4;
        }
        out.push_back(check("moreau gradient vs finite differences", ok,
                            "worst relative error " + num(worst)));
    }

    // same minimizers: argmin U_rho == argmin U on a grid, rho in {0.1, 1, 10}
    {
        ToyTarget toy = make_toy_1d();
        bool ok = true;
        const double step = 1e-3;
        for (double rho : {0.1, 1.0, 10.0}) {
            MoreauConfig cfg;
            cfg.rho = rho;
            double best_x = 0.0, best_v = 1e300;
            for (double x = -1.0; x <= 1.0; x += step) {
                RealField th({1, 1});
                th[0] = x;
                const double v = moreau_value(th, toy.target, cfg);
                if (v < best_v) best_v = v, best_x = x;
            }
            ok = ok && std::abs(best_x - 0.0) <= step;  // argmin U = 0
        }
        out.push_back(check("same minimizers across rho", ok));
    }

    // pointwise convergence U_rho -> U as rho decreases
    {
        ToyTarget toy = make_toy_1d();
        bool ok = true;
        for (int rep = 0; rep < 5; ++rep) {
            RealField th({1, 1});
            th[0] = 3.0 * (rng.next_uniform() - 0.5);
            const double u = toy.target.energy(th);
            double prev_gap = 1e300;
            for (double rho : {1.0, 0.1, 0.01}) {
                MoreauConfig cfg;
                cfg.rho = rho;
                const double gap = std::abs(moreau_value(th, toy.target, cfg) - u);
                ok = ok && gap <= prev_gap + 1e-12;
                prev_gap = gap;
            }
        }
        out.push_back(check("pointwise convergence in rho", ok));
    }
    return out;
}

std::vector<CheckResult> pdfp_suite() {
    std::vector<CheckResult> out;
    CounterRng rng(202);

    // fixed point: residual of T at the converged pair
    {
        bool ok = true;
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t dim = 2 + rep;
            CompositeProblem prob = dense_instance(dim, 0.4, 500 + rep);
            PdfpParams p = default_pdfp_params(prob);
            p.tol = 1e-12;
            p.max_iters = 50000;
            RealField x0 = random_field({dim, 1}, rng);
            RealField v0(prob.B.range_shape());
            PdfpResult res = pdfp_solve(prob, p, x0, v0);
            worst = std::max(worst, res.residual);
            ok = ok && res.residual <= 1e-8;
        }
        out.push_back(check("fixed-point residual <= 1e-8", ok, "worst " + num(worst)));
    }

    // per-step contraction of the weighted distance on a dense instance
    {
        CompositeProblem prob = dense_instance(8, 0.5, 321);
        PdfpParams p = default_pdfp_params(prob);
        p.gamma = 0.8;  // interior of (0, 2)
        p.tol = 1e-13;
        p.max_iters = 100000;
        RealField v0(prob.B.range_shape());
        PdfpResult star = pdfp_solve(prob, p, RealField({8, 1}), v0);

        // rho_min(BB^T) via inverse power iteration surrogate: smallest
        // Rayleigh quotient over many random directions is an upper bound,
        // so shrink it; adequate for a self-check (the unit tests use an
        // eigensolver oracle).
        double rho_min = 1e300;
        for (int rep = 0; rep < 200; ++rep) {
            RealField z = random_field(prob.B.range_shape(), rng);
            RealField btz = prob.B.apply(prob.B.adjoint(z));
            rho_min = std::min(rho_min, dot(z, btz) / norm2_sq(z));
        }
        rho_min *= 0.5;
        ContractionRate eta = contraction_rate_eta(
            prob.strong_convexity_m, std::numeric_limits<double>::infinity(),
            prob.lipschitz_M2, p.gamma, p.lambda, rho_min);

        PdfpState state{random_field({8, 1}, rng, 2.0), RealField(prob.B.range_shape())};
        double d_prev = weighted_norm_sq(state.x - star.x, state.v - star.v, p.gamma, p.lambda);
        bool ok = eta.hypotheses_ok;
        for (int k = 0; k < 200 && ok; ++k) {
            state = pdfp_step(state, prob, p);
            const double d_next =
                weighted_norm_sq(state.x - star.x, state.v - star.v, p.gamma, p.lambda);
            ok = d_next <= eta.eta * d_prev + 1e-9;
            d_prev = d_next;
        }
        out.push_back(check("weighted-norm contraction at rate eta", ok,
                            "eta = " + num(eta.eta)));
    }

    // remark: ||phi(x)-phi(y)|| <= eta_1 ||x-y|| for phi = I - gamma grad f
    {
        CompositeProblem prob = dense_instance(6, 0.0, 55);
        const double gamma = 0.7;
        const double eta1 = std::sqrt(
            1.0 - prob.strong_convexity_m * prob.strong_convexity_m *
                      (2.0 * gamma / prob.lipschitz_M2 - gamma * gamma));
        bool ok = true;
        for (int rep = 0; rep < 100; ++rep) {
            RealField x = random_field({6, 1}, rng, 3.0);
            RealField y = random_field({6, 1}, rng, 3.0);
            RealField px = x, py = y;
            axpy(-gamma, prob.grad_f(x), px);
            axpy(-gamma, prob.grad_f(y), py);
            ok = ok && norm2(px - py) <= eta1 * norm2(x - y) + 1e-12;
        }
        out.push_back(check("eta_1 bound on the gradient-step map", ok,
                            "eta_1 = " + num(eta1)));
    }

    // K-step subproblem error bound on a 1-D instance
    {
        ToyTarget toy = make_toy_1d();
        const CompositeProblem& prob = toy.target.problem;
        const double rho = 1.0;
        PdfpParams p;
        p.gamma = 0.3;  // off the optimum so eta > 0
        p.lambda = 0.8;
        MoreauConfig tight;
        tight.rho = rho;
        tight.inner = p;
        tight.exact_tol = 1e-13;
        tight.max_inner = 100000;
        ContractionRate eta = contraction_rate_eta(1.0, rho, 1.0, p.gamma, p.lambda, 1.0);
        const double c = prob.g.dual_bound(1);
        bool ok = eta.hypotheses_ok;
        for (int rep = 0; rep < 10 && ok; ++rep) {
            RealField th({1, 1});
            th[0] = 5.0 * (rng.next_uniform() - 0.5);
            RealField p_exact = prox_energy(th, toy.target, tight, ProxMode::exact);
            const double grad_sq = norm2_sq(moreau_gradient(th, p_exact, rho));
            for (int K : {1, 2, 5, 10}) {
                RealField xk = kstep_prox_subproblem(th, rho, prob, p, K);
                const double lhs = norm2_sq(xk - p_exact) / (rho * rho);
                const double rhs = std::pow(eta.eta, K) *
                                       (grad_sq + p.gamma * p.gamma * c * c /
                                                      (p.lambda * rho * rho)) +
                                   1e-8;
                ok = ok && lhs <= rhs;
            }
        }
        out.push_back(check("K-step subproblem error bound", ok, "eta = " + num(eta.eta)));
    }

    // zero-iteration solve returns the inputs unchanged
    {
        CompositeProblem prob = dense_instance(4, 0.3, 99);
        PdfpParams p = default_pdfp_params(prob);
        p.max_iters = 0;
        RealField x0 = random_field({4, 1}, rng);
        RealField v0 = random_field(prob.B.range_shape(), rng, 0.1);
        PdfpResult res = pdfp_solve(prob, p, x0, v0);
        out.push_back(check("K = 0 solve is the identity", res.x == x0 && res.v == v0));
    }
    return out;
}

std::vector<CheckResult> bounds_suite() {
    std::vector<CheckResult> out;
    CounterRng rng(303);

    TheoryInputs base;
    base.m = 1.0;
    base.M2 = 1.0;
    base.rho = 0.5;
    base.delta = 0.2;
    base.gamma = 0.3;
    base.lambda = 0.8;
    base.K = 2;
    base.C = 1.0;
    base.d = 1.0;
    base.l = 10.0;
    base.rho_min_BBt = 1.0;
    base.initial_gap = 0.7;

    // expectation bound non-increasing in n
    {
        bool ok = true;
        double prev = expectation_bound(base, 0);
        for (long n : {1L, 2L, 5L, 10L, 100L, 1000L}) {
            const double v = expectation_bound(base, n);
            ok = ok && v <= prev + 1e-12;
            prev = v;
        }
        out.push_back(check("expectation bound non-increasing in n", ok));
    }

    // the mixing term of the TV bound strictly decreases in l
    {
        bool ok = true;
        double prev = 1e300;
        for (double l : {1.0, 2.0, 5.0, 20.0, 80.0}) {
            TheoryInputs in = base;
            in.l = l;
            const double m_rho = moreau_strong_convexity(in.m, in.rho);
            const double mixing =
                0.5 * std::exp(-in.d / 4.0 * std::log(in.rho * m_rho) - l * m_rho / 2.0);
            ok = ok && mixing < prev;
            prev = mixing;
        }
        out.push_back(check("tv bound mixing term decreasing in l", ok));
    }

    // every eta^K-weighted contribution is non-increasing in K
    {
        bool ok = true;
        double prev_kl = 1e300, prev_tv = 1e300, prev_exp = 1e300;
        for (int K : {1, 2, 4, 8, 16, 64}) {
            TheoryInputs in = base;
            in.K = K;
            const double vk = kl_bound(in);
            const double vt = tv_bound(in);
            const double ve = expectation_bound(in, 10);
            ok = ok && vk <= prev_kl + 1e-12 && vt <= prev_tv + 1e-12 &&
                 ve <= prev_exp + 1e-12;
            prev_kl = vk;
            prev_tv = vt;
            prev_exp = ve;
        }
        out.push_back(check("bounds non-increasing in K", ok));
    }

    // hypothesis violation (eta >= 1) is reported, not silently evaluated
    {
        TheoryInputs bad = base;
        bad.rho_min_BBt = 0.0;
        bad.gamma = 1e-9;  // eta -> 1 from both terms
        bool threw = false;
        try {
            (void)expectation_bound(bad, 5);
        } catch (const std::domain_error&) {
            threw = true;
        }
        out.push_back(check("eta >= 1 fixture raises hypothesis violation", threw,
                            "expected-failure case"));
    }

    // Monte-Carlo domination on a small 1-D run, reported as CSV rows
    {
        ToyTarget toy = make_toy_1d();
        SamplerConfig cfg;
        cfg.delta = 0.05;
        cfg.rho = 0.1;
        cfg.K = 1;
        cfg.gamma = 0.06;
        cfg.lambda = 1.0;
        cfg.N = 100;
        cfg.seed = 11;
        BoundCheckReport rep = empirical_bound_check(toy, cfg, {0, 100}, 40);
        std::string csv = bound_report_csv(rep);
        // flatten the rows into the detail column
        for (char& ch : csv)
            if (ch == '\n') ch = ' ';
        out.push_back(check("empirical bounds dominated (40 chains)", rep.all_hold, csv));
    }

    // finite, positive values on random valid inputs
    {
        bool ok = true;
        for (int rep = 0; rep < 100; ++rep) {
            TheoryInputs in = base;
            in.rho = 0.1 + rng.next_uniform();
            in.delta = in.rho * (0.2 + 0.8 * rng.next_uniform());
            in.gamma = 0.5 / (in.M2 + 1.0 / in.rho);
            in.K = 1 + static_cast<int>(rng.next_u64() % 20);
            in.l = 1.0 + 20.0 * rng.next_uniform();
            in.initial_gap = rng.next_uniform();
            const double e = expectation_bound(in, 7);
            const double k = kl_bound(in);
            const double t = tv_bound(in);
            ok = ok && std::isfinite(e) && e >= 0 && std::isfinite(k) && k >= 0 &&
                 std::isfinite(t) && t >= 0;
        }
        out.push_back(check("bounds finite and nonnegative on random inputs", ok));
    }
    return out;
}

std::vector<CheckResult> samplers_suite() {
    std::vector<CheckResult> out;
    ToyTarget toy = make_toy_1d();

    SamplerConfig cfg;
    cfg.delta = 0.1;
    cfg.rho = 0.1;
    cfg.K = 1;
    cfg.N = 500;
    cfg.burn_in = 100;
    cfg.seed = 42;

    // determinism: bitwise-identical replay for every sampler kind
    {
        bool ok = true;
        RealField theta0({1, 1});
        for (SamplerKind kind : {SamplerKind::prox_ula, SamplerKind::prox_mala,
                                 SamplerKind::ula_pdfp, SamplerKind::mala_pdfp}) {
            StepKernel k1 = make_kernel(kind, toy.target, cfg);
            ChainOutput a = run_chain(theta0, k1, cfg);
            ChainOutput b = run_chain(theta0, k1, cfg);
            ok = ok && a.samples == b.samples && a.mean == b.mean &&
                 a.acceptance_rate == b.acceptance_rate;
        }
        out.push_back(check("bitwise deterministic replay", ok));
    }

    // delta = rho reduction: update equals prox + noise exactly
    {
        SamplerConfig c = cfg;
        c.hooks.zero_noise = true;
        ChainState s = make_chain_state(RealField({1, 1}, {2.0}), c.seed);
        prox_ula_step(s, toy.target, c);
        MoreauConfig m = c.moreau();
        RealField p = prox_energy(RealField({1, 1}, {2.0}), toy.target, m, ProxMode::exact);
        out.push_back(check("delta = rho reduces to prox + noise", s.theta == p));
    }

    // Markov guard: the K-step inner solve is a pure function of theta
    {
        const CompositeProblem& prob = toy.target.problem;
        MoreauConfig m = cfg.moreau();
        PdfpParams p = resolve_inner_params(prob, m);
        RealField th({1, 1}, {1.3});
        RealField first = kstep_prox_subproblem(th, cfg.rho, prob, p, 3);
        // interleave unrelated solves, then repeat
        (void)kstep_prox_subproblem(RealField({1, 1}, {-9.0}), cfg.rho, prob, p, 7);
        RealField second = kstep_prox_subproblem(th, cfg.rho, prob, p, 3);
        out.push_back(check("inner solve has no hidden state", first == second));
    }

    // cache coherence over a short MALA-PDFP run
    {
        bool ok = true;
        MoreauConfig m = cfg.moreau();
        PdfpParams p = resolve_inner_params(toy.target.problem, m);
        ChainState s = make_chain_state(RealField({1, 1}, {0.5}), 7);
        long accepted = 0;
        for (int n = 0; n < 400; ++n) {
            const long before = s.accept_count;
            mala_pdfp_step(s, toy.target, cfg);
            if (s.accept_count > before) {
                ++accepted;
                RealField fresh =
                    kstep_prox_subproblem(s.theta, cfg.rho, toy.target.problem, p, cfg.K);
                ok = ok && s.prox_cache && *s.prox_cache == fresh;
            }
        }
        out.push_back(check("prox cache coherent on accepted steps", ok && accepted > 0,
                            std::to_string(accepted) + " accepted"));
    }

    // forced accept / forced reject hooks
    {
        SamplerConfig c = cfg;
        c.hooks.forced_uniform = 0.0;
        ChainState s = make_chain_state(RealField({1, 1}, {1.0}), 3);
        mala_pdfp_step(s, toy.target, c);
        const bool accepted = s.accept_count == 1;
        c.hooks.forced_uniform = 1.0;
        ChainState s2 = make_chain_state(RealField({1, 1}, {1.0}), 3);
        mala_pdfp_step(s2, toy.target, c);
        const bool rejected = s2.accept_count == 0 && s2.theta[0] == 1.0;
        out.push_back(check("acceptance hooks force accept/reject", accepted && rejected));
    }

    // ULA stationary variance on U = x^2/2: var -> 1/(1 - delta/2)
    {
        CompositeTarget gauss;
        gauss.problem.B = make_identity_map({1, 1});
        gauss.problem.lambda_max_BBt = 1.0;
        gauss.problem.g = SeparablePenalty{0.0};
        gauss.problem.lipschitz_M2 = 1.0;
        gauss.problem.strong_convexity_m = 1.0;
        gauss.problem.grad_f = [](const RealField& x) { return x; };
        gauss.f_value = [](const RealField& x) { return 0.5 * norm2_sq(x); };
        gauss.energy = gauss.f_value;

        SamplerConfig c;
        c.delta = 0.1;
        c.N = 200000;
        c.burn_in = 1000;
        c.seed = 5;
        StepKernel k = make_kernel(SamplerKind::ula, gauss, c);
        ChainOutput outp = run_chain(RealField({1, 1}), k, c);
        const double expected = 1.0 / (1.0 - c.delta / 2.0);
        const double rel = std::abs(outp.variance[0] - expected) / expected;
        out.push_back(check("ULA stationary variance", rel < 0.05,
                            "measured " + num(outp.variance[0]) + " expected " +
                                num(expected)));
    }
    return out;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
    if (suite == "prox") return prox_suite();
    if (suite == "pdfp") return pdfp_suite();
    if (suite == "bounds") return bounds_suite();
    if (suite == "samplers") return samplers_suite();
    throw std::invalid_argument("unknown verify suite '" + suite +
                                "' (expected prox, pdfp, bounds or samplers)");
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace pdla::verify
