#include "pdla/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pdla {

double moreau_strong_convexity(double m, double rho) {
    if (m < 0.0 || !(rho > 0.0))
        throw std::invalid_argument("moreau_strong_convexity: need m >= 0, rho > 0");
    return m / (1.0 + rho * m);
}

double theory_eta(const TheoryInputs& in) {
    return contraction_rate_eta(in.m, in.rho, in.M2, in.gamma, in.lambda,
                                in.rho_min_BBt)
        .eta;
}

namespace {

double checked_eta(const TheoryInputs& in) {
    ContractionRate r = contraction_rate_eta(in.m, in.rho, in.M2, in.gamma,
                                             in.lambda, in.rho_min_BBt);
    if (!r.hypotheses_ok)
        throw std::domain_error("theory bounds: eta >= 1, hypotheses unmet "
                                "(need gamma in range and rho_min(BB^T) > 0)");
    return r.eta;
}

}  // namespace

double expectation_bound(const TheoryInputs& in, long n) {
    if (!(in.m > 0.0))
        throw std::domain_error("expectation_bound: requires m > 0");
    const double eta_k = std::pow(checked_eta(in), in.K);
    const double m_rho = moreau_strong_convexity(in.m, in.rho);
    const double rate = 1.0 - m_rho * in.delta * (1.0 - eta_k);
    const double asymptote =
        (2.0 * in.d * in.lambda * in.rho + in.gamma * in.gamma * in.C * in.C * eta_k) /
        (2.0 * in.lambda * in.rho * in.rho * m_rho * (1.0 - eta_k));
    return std::pow(rate, static_cast<double>(n)) * in.initial_gap + asymptote;
}

double kl_bound(const TheoryInputs& in) {
    const double eta_k = std::pow(checked_eta(in), in.K);
    const double d2 = in.delta * in.delta;
    const double r2 = in.rho * in.rho;
    const double first =
        (2.0 * d2 * (1.0 + eta_k) + 3.0 * r2 * eta_k) / (3.0 * r2 * (1.0 - eta_k)) *
        in.initial_gap;
    const double second =
        (in.l * in.d * in.lambda * in.rho *
             (4.0 * d2 * (1.0 + eta_k) + 3.0 * in.delta * in.rho * (1.0 - eta_k) +
              6.0 * r2 * eta_k) +
         in.l * in.gamma * in.gamma * in.C * in.C * eta_k * (4.0 * d2 + 3.0 * r2)) /
        (6.0 * in.lambda * r2 * r2 * (1.0 - eta_k));
    return first + second;
}

double tv_bound(const TheoryInputs& in) {
    if (!(in.m > 0.0)) throw std::domain_error("tv_bound: requires m > 0");
    const double eta_k = std::pow(checked_eta(in), in.K);
    const double m_rho = moreau_strong_convexity(in.m, in.rho);
    const double mixing =
        0.5 * std::exp(-in.d / 4.0 * std::log(in.rho * m_rho) - in.l * m_rho / 2.0);

    const double d2 = in.delta * in.delta;
    const double r2 = in.rho * in.rho;
    const double plain =
        in.lambda * in.d *
        (2.0 * d2 * r2 + 4.0 * in.l * d2 * in.rho + 3.0 * in.l * in.delta * r2);
    const double inexact =
        eta_k * (in.lambda * in.d *
                     (2.0 * d2 * r2 + 3.0 * r2 * r2 + 4.0 * in.l * d2 * in.rho -
                      3.0 * in.l * in.delta * r2 + 6.0 * in.l * r2 * in.rho) +
                 in.l * in.gamma * in.gamma * in.C * in.C * (4.0 * d2 + 3.0 * r2));
    const double discretization =
        std::sqrt((plain + inexact) / (12.0 * in.lambda * r2 * r2 * (1.0 - eta_k)));
    return mixing + discretization;
}

std::array<double, 3> accumulated_sum_bounds(const TheoryInputs& in, long N) {
    const double eta_k = std::pow(checked_eta(in), in.K);
    const double gap = in.initial_gap;
    const double nd = static_cast<double>(N) * in.delta;
    const double lr2 = in.lambda * in.rho * in.rho;
    const double c2 = in.gamma * in.gamma * in.C * in.C;
    const double denom = 1.0 - eta_k;

    std::array<double, 3> b{};
    b[0] = 2.0 / denom * gap +
           nd * (2.0 * in.d * in.lambda * in.rho + c2 * eta_k) / (lr2 * denom);
    b[1] = 2.0 * eta_k / denom * gap +
           nd * eta_k * (2.0 * in.d * in.lambda * in.rho + c2) / (lr2 * denom);
    b[2] = 4.0 * (1.0 + eta_k) / denom * gap +
           4.0 * nd * (in.d * in.lambda * in.rho * (1.0 + eta_k) + c2 * eta_k) /
               (lr2 * denom);
    return b;
}

BoundCheckReport empirical_bound_check(const ToyTarget& toy,
                                       const SamplerConfig& cfg,
                                       const std::vector<long>& checkpoints,
                                       int n_chains) {
    const CompositeTarget& target = toy.target;
    const CompositeProblem& prob = target.problem;
    if (!(prob.strong_convexity_m > 0.0))
        throw std::domain_error("empirical_bound_check: target must have m > 0");
    if (toy.dimension != 1)
        throw std::invalid_argument("empirical_bound_check: 1-D toys only");

    MoreauConfig moreau = cfg.moreau();
    PdfpParams inner = resolve_inner_params(prob, moreau);

    // minimizer by tight PDFP solve on the plain problem
    PdfpParams solve_p = default_pdfp_params(prob);
    solve_p.tol = 1e-12;
    solve_p.max_iters = 100000;
    RealField zero(prob.B.domain_shape());
    RealField v0(prob.B.range_shape());
    PdfpResult star = pdfp_solve(prob, solve_p, zero, v0);

    MoreauConfig tight = moreau;
    tight.exact_tol = 1e-12;
    tight.max_inner = 100000;

    BoundCheckReport rep;
    rep.x_star = star.x[0];
    rep.u_rho_star = moreau_value(star.x, target, tight);

    auto u_rho_gap = [&](const RealField& th) {
        return moreau_value(th, target, tight) - rep.u_rho_star;
    };

    TheoryInputs in;
    in.m = prob.strong_convexity_m;
    in.M2 = prob.lipschitz_M2;
    in.rho = cfg.rho;
    in.delta = cfg.delta;
    in.gamma = inner.gamma;
    in.lambda = inner.lambda;
    in.K = cfg.K;
    in.C = prob.g.dual_bound(prob.B.range_shape().size());
    in.d = static_cast<double>(prob.B.domain_shape().size());
    in.l = static_cast<double>(cfg.N) * cfg.delta;
    in.rho_min_BBt = 1.0;  // hypotheses require B = I here

    // initial gap over theta_0 ~ N(x*, rho I), estimated on a larger draw
    {
        CounterRng rng(cfg.seed, 0x1717);
        const int m_draws = 10000;
        double acc = 0.0;
        for (int i = 0; i < m_draws; ++i) {
            RealField th = star.x;
            th[0] += std::sqrt(cfg.rho) * rng.next_normal();
            acc += u_rho_gap(th);
        }
        in.initial_gap = acc / m_draws;
    }
    rep.inputs = in;

    const long N = cfg.N;
    std::vector<long> checks = checkpoints;
    std::sort(checks.begin(), checks.end());

    // per-chain accumulators
    std::vector<std::vector<double>> gap_at(checks.size());
    std::vector<double> s_grad(n_chains, 0.0), s_err(n_chains, 0.0), s_drift(n_chains, 0.0);

    for (int c = 0; c < n_chains; ++c) {
        ChainState state = make_chain_state(star.x, cfg.seed, 1000 + c);
        state.theta[0] += std::sqrt(cfg.rho) * state.rng.next_normal();

        for (std::size_t ci = 0; ci < checks.size(); ++ci)
            if (checks[ci] == 0) gap_at[ci].push_back(u_rho_gap(state.theta));

        for (long n = 0; n < N; ++n) {
            // diagnostics before the move: exact prox, K-step point
            RealField p_exact = prox_energy(state.theta, target, tight, ProxMode::exact);
            RealField x_k = kstep_prox_subproblem(state.theta, cfg.rho, prob, inner, cfg.K);
            RealField grad = moreau_gradient(state.theta, p_exact, cfg.rho);
            s_grad[c] += cfg.delta * norm2_sq(grad);
            s_err[c] += cfg.delta * norm2_sq(x_k - p_exact) / (cfg.rho * cfg.rho);
            s_drift[c] += cfg.delta * norm2_sq(state.theta - x_k) / (cfg.rho * cfg.rho);

            // the ULA-PDFP move itself
            RealField xi = state.rng.normal_field(state.theta.shape());
            state.theta = axpby(1.0 - cfg.delta / cfg.rho, state.theta,
                                cfg.delta / cfg.rho, x_k);
            axpy(std::sqrt(2.0 * cfg.delta), xi, state.theta);
            ++state.n;

            for (std::size_t ci = 0; ci < checks.size(); ++ci)
                if (checks[ci] == n + 1) gap_at[ci].push_back(u_rho_gap(state.theta));
        }
    }

    auto mean_stderr = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s2 = 0.0;
        for (double x : v) s2 += (x - m) * (x - m);
        s2 /= static_cast<double>(v.size() > 1 ? v.size() - 1 : 1);
        return std::pair<double, double>(m, std::sqrt(s2 / static_cast<double>(v.size())));
    };

    rep.all_hold = true;
    for (std::size_t ci = 0; ci < checks.size(); ++ci) {
        auto [m, se] = mean_stderr(gap_at[ci]);
        BoundCheckRow row;
        row.n = checks[ci];
        row.empirical = m;
        row.mc_stderr = se;
        row.bound = expectation_bound(in, checks[ci]);
        row.holds = m <= row.bound + 3.0 * se;
        rep.all_hold = rep.all_hold && row.holds;
        rep.expectation_rows.push_back(row);
    }

    const std::array<double, 3> sb = accumulated_sum_bounds(in, N);
    const std::vector<double>* sums[3] = {&s_grad, &s_err, &s_drift};
    for (int i = 0; i < 3; ++i) {
        auto [m, se] = mean_stderr(*sums[i]);
        rep.sum_rows[i] = BoundCheckRow{N, m, se, sb[i], m <= sb[i] + 3.0 * se};
        rep.all_hold = rep.all_hold && rep.sum_rows[i].holds;
    }
    return rep;
}

std::string bound_report_csv(const BoundCheckReport& report) {
    std::string csv = "quantity,n,empirical,mc_stderr,bound,holds\n";
    char buf[160];
    auto put = [&](const char* what, const BoundCheckRow& r) {
        std::snprintf(buf, sizeof(buf), "%s,%ld,%.17g,%.17g,%.17g,%d\n", what, r.n,
                      r.empirical, r.mc_stderr, r.bound, r.holds ? 1 : 0);
        csv += buf;
    };
    for (const auto& row : report.expectation_rows) put("expectation_gap", row);
    put("sum_grad_norm", report.sum_rows[0]);
    put("sum_subproblem_error", report.sum_rows[1]);
    put("sum_drift_norm", report.sum_rows[2]);
    return csv;
}

}  // namespace pdla
