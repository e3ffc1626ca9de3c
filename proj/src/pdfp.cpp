#include "pdla/pdfp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace pdla {

PdfpParams default_pdfp_params(const CompositeProblem& prob, double inv_rho) {
    PdfpParams p;
    p.gamma = 1.0 / (prob.lipschitz_M2 + inv_rho);
    p.lambda = prob.lambda_max_BBt > 0.0 ? 1.0 / prob.lambda_max_BBt : 1.0;
    return p;
}

void validate_pdfp_params(const CompositeProblem& prob, const PdfpParams& p,
                          double inv_rho) {
    const double m2 = prob.lipschitz_M2 + inv_rho;
    if (!(p.gamma > 0.0) || !(p.gamma < 2.0 / m2))
        throw std::invalid_argument(
            "pdfp: gamma must lie in (0, 2/(M2 + 1/rho)) = (0, " +
            std::to_string(2.0 / m2) + "), got " + std::to_string(p.gamma));
    if (!(p.lambda > 0.0))
        throw std::invalid_argument("pdfp: lambda must be positive");
    if (prob.lambda_max_BBt > 0.0 &&
        p.lambda > 1.0 / prob.lambda_max_BBt * (1.0 + 1e-12))
        throw std::invalid_argument(
            "pdfp: lambda must not exceed 1/lambda_max(BB^T) = " +
            std::to_string(1.0 / prob.lambda_max_BBt) + ", got " +
            std::to_string(p.lambda));
}

double weighted_norm_sq(const RealField& dx, const RealField& dv,
                        double gamma, double lambda) {
    return norm2_sq(dx) + gamma * gamma / lambda * norm2_sq(dv);
}

PdfpState pdfp_step(const PdfpState& state, const CompositeProblem& prob,
                    const PdfpParams& p) {
    const double gamma = p.gamma, lambda = p.lambda;
    RealField grad = prob.grad_f(state.x);

    // y = x - gamma*grad - gamma*B^T v
    RealField base = state.x;
    axpy(-gamma, grad, base);                     // x - gamma*grad, reused below
    RealField y = base;
    axpy(-gamma, prob.B.adjoint(state.v), y);

    RealField by = prob.B.apply(y);
    RealField varg = state.v;
    axpy(lambda / gamma, by, varg);
    RealField v_next = prox_conjugate_scaled(varg, lambda / gamma, prob.g);

    RealField x_next = base;
    axpy(-gamma, prob.B.adjoint(v_next), x_next);

    if (!x_next.all_finite() || !v_next.all_finite())
        throw std::runtime_error(
            "pdfp_step: non-finite iterate (|x| = " + std::to_string(norm2(x_next)) +
            ", |v| = " + std::to_string(norm2(v_next)) + ")");
    return {std::move(x_next), std::move(v_next)};
}

PdfpResult pdfp_solve(const CompositeProblem& prob, const PdfpParams& p,
                      const RealField& x0, const RealField& v0,
                      std::vector<PdfpTraceRow>* trace) {
    PdfpState state{x0, v0};
    PdfpResult res;
    for (int k = 0; k < p.max_iters; ++k) {
        PdfpState next = pdfp_step(state, prob, p);
        double step_sq = weighted_norm_sq(next.x - state.x, next.v - state.v,
                                          p.gamma, p.lambda);
        state = std::move(next);
        res.iterations = k + 1;
        if (trace) {
            PdfpTraceRow row;
            row.iteration = k + 1;
            row.weighted_step = std::sqrt(step_sq);
            row.objective = prob.f_value
                                ? prob.f_value(state.x) +
                                      prob.g.value(prob.B.apply(state.x))
                                : std::numeric_limits<double>::quiet_NaN();
            trace->push_back(row);
        }
        if (p.tol > 0.0 && std::sqrt(step_sq) < p.tol) {
            res.converged = true;
            break;
        }
    }
    PdfpState probe = pdfp_step(state, prob, p);
    res.residual = std::sqrt(weighted_norm_sq(probe.x - state.x, probe.v - state.v,
                                              p.gamma, p.lambda));
    res.x = std::move(state.x);
    res.v = std::move(state.v);
    return res;
}

CompositeProblem prox_subproblem(const CompositeProblem& prob,
                                 const RealField& theta, double rho) {
    if (!(rho > 0.0))
        throw std::invalid_argument("prox_subproblem: rho must be positive");
    CompositeProblem sub = prob;
    auto grad = prob.grad_f;
    const double inv_rho = 1.0 / rho;
    sub.grad_f = [grad, theta, inv_rho](const RealField& x) {
        RealField g = grad(x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += inv_rho * (x[i] - theta[i]);
        return g;
    };
    sub.lipschitz_M2 = prob.lipschitz_M2 + inv_rho;
    sub.strong_convexity_m = prob.strong_convexity_m + inv_rho;
    return sub;
}

RealField kstep_prox_subproblem(const RealField& theta, double rho,
                                const CompositeProblem& prob,
                                const PdfpParams& p, int K) {
    validate_pdfp_params(prob, p, 1.0 / rho);
    CompositeProblem sub = prox_subproblem(prob, theta, rho);
    PdfpState state{theta, RealField(prob.B.range_shape())};  // x0 = theta, v0 = 0
    for (int k = 0; k < K; ++k) state = pdfp_step(state, sub, p);
    return state.x;
}

std::string pdfp_trace_csv(const std::vector<PdfpTraceRow>& rows) {
    std::string csv = "iteration,weighted_step,objective\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", r.iteration,
                      r.weighted_step, r.objective);
        csv += buf;
    }
    return csv;
}

ContractionRate contraction_rate_eta(double m, double rho, double M2,
                                     double gamma, double lambda,
                                     double rho_min_BBt) {
    const double inv_rho = std::isinf(rho) ? 0.0 : 1.0 / rho;
    const double mm = m + inv_rho;
    const double m2 = M2 + inv_rho;
    const double eta1_sq = 1.0 - mm * mm * (2.0 * gamma / m2 - gamma * gamma);
    const double eta_dual = 1.0 - lambda * rho_min_BBt;
    ContractionRate r;
    r.eta = std::max(eta1_sq, eta_dual);
    r.hypotheses_ok = r.eta < 1.0;
    if (r.eta < 0.0) r.eta = 0.0;
    return r;
}

}  // namespace pdla
