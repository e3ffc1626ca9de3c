/*
 * Primal-dual fixed-point iteration for composite problems
 *
 *   min_x f(x) + g(Bx)
 *
 * with f smooth (M2-Lipschitz gradient), B linear and g having an easy
 * conjugate prox. One step applies the operator pair (T1, T2):
 *
 *   y   = x_k - gamma*grad_f(x_k) - gamma*B^T v_k
 *   v'  = prox_{(lambda/gamma) g*}((lambda/gamma)*B y + v_k)     = T1
 *   x'  = x_k - gamma*grad_f(x_k) - gamma*B^T v'                 = T2
 *
 * Valid parameters: 0 < lambda <= 1/lambda_max(BB^T), 0 < gamma < 2/M2.
 * The iteration is also used as the K-step inner solver for the prox
 * subproblem argmin_x ||x - theta||^2/(2 rho) + f(x) + g(Bx), where the
 * gradient picks up the extra pull (x - theta)/rho and the valid gamma
 * range tightens to (0, 2/(M2 + 1/rho)).
 *
 * Convergence is measured in the weighted norm
 *   ||(dv, dx)||^2 = ||dx||^2 + (gamma^2/lambda)||dv||^2,
 * the quantity that contracts linearly when f is strongly convex and
 * rho_min(BB^T) > 0.
 */
#pragma once

#include <functional>
#include <vector>

#include "pdla/linear_map.hpp"
#include "pdla/penalty.hpp"

namespace pdla {

struct CompositeProblem {
    std::function<RealField(const RealField&)> grad_f;
    double lipschitz_M2 = 1.0;      // M2 > 0, Lipschitz constant of grad f
    double strong_convexity_m = 0.0;  // m >= 0, 0 when unknown
    LinearMap B;
    SeparablePenalty g;
    double lambda_max_BBt = 1.0;    // spectral bound used for the dual step
    std::function<double(const RealField&)> f_value;  // optional, enables
                                                      // objective traces
};

struct PdfpParams {
    double gamma = 0.0;
    double lambda = 0.0;
    int max_iters = 100;   // K when tol == 0
    double tol = 0.0;      // > 0: stop when the weighted step norm drops below
};

// gamma = 1/(M2 + inv_rho) (midpoint of the valid range), lambda =
// 1/lambda_max(BB^T) (largest allowed); inv_rho = 0 for the plain problem.
PdfpParams default_pdfp_params(const CompositeProblem& prob, double inv_rho = 0.0);

void validate_pdfp_params(const CompositeProblem& prob, const PdfpParams& p,
                          double inv_rho = 0.0);

struct PdfpState {
    RealField x;  // primal
    RealField v;  // dual
};

struct PdfpResult {
    RealField x, v;
    double residual = 0.0;  // ||T(v,x) - (v,x)|| in the weighted norm
    int iterations = 0;
    bool converged = false;
};

struct PdfpTraceRow {
    int iteration = 0;
    double weighted_step = 0.0;  // ||T(v,x) - (v,x)|| at this iterate
    double objective = 0.0;      // f + g(Bx) when f_value is set, else NaN
};

// "iteration,weighted_step,objective" rows with a header line
std::string pdfp_trace_csv(const std::vector<PdfpTraceRow>& rows);

double weighted_norm_sq(const RealField& dx, const RealField& dv,
                        double gamma, double lambda);

// One application of T = (T1, T2); grad_f is evaluated once and shared by
// the y- and x-updates.
PdfpState pdfp_step(const PdfpState& state, const CompositeProblem& prob,
                    const PdfpParams& p);

// Runs up to p.max_iters steps (exactly that many when p.tol == 0), then
// reports the fixed-point residual. Non-convergence in tolerance mode is
// flagged, not fatal. A non-null trace receives one row per iteration.
PdfpResult pdfp_solve(const CompositeProblem& prob, const PdfpParams& p,
                      const RealField& x0, const RealField& v0,
                      std::vector<PdfpTraceRow>* trace = nullptr);

// The prox subproblem argmin ||x-theta||^2/(2 rho) + f(x) + g(Bx) expressed
// as a CompositeProblem (gradient shifted by (x - theta)/rho).
CompositeProblem prox_subproblem(const CompositeProblem& prob,
                                 const RealField& theta, double rho);

// x_{n,K} from K PDFP steps on the prox subproblem, started from the primal
// point theta with the dual fixed at zero. The zero dual start is structural:
// it keeps chains built on this routine Markovian.
RealField kstep_prox_subproblem(const RealField& theta, double rho,
                                const CompositeProblem& prob,
                                const PdfpParams& p, int K);

struct ContractionRate {
    double eta = 1.0;
    bool hypotheses_ok = false;  // false when eta >= 1 (assumptions unmet)
};

// eta = max(1 - (m + 1/rho)^2 (2 gamma/(M2 + 1/rho) - gamma^2),
//           1 - lambda * rho_min(BB^T));
// pass rho = infinity for the plain (unshifted) problem.
ContractionRate contraction_rate_eta(double m, double rho, double M2,
                                     double gamma, double lambda,
                                     double rho_min_BBt);

}  // namespace pdla
