/*
 * Closed-form evaluators for the solver/sampler error bounds (contraction
 * rate eta, expectation bound, KL and TV bounds, accumulated-sum bounds)
 * and the Monte-Carlo experiment that checks them on targets satisfying
 * their hypotheses: f m-strongly convex with m > 0, bounded conjugate prox
 * (L1 penalty) and rho_min(BB^T) > 0.
 */
#pragma once

#include <array>
#include <vector>

#include "pdla/samplers.hpp"

namespace pdla {

struct TheoryInputs {
    double m = 0.0;            // strong convexity of f
    double M2 = 1.0;           // Lipschitz constant of grad f
    double rho = 1.0;          // Moreau parameter
    double delta = 0.0;        // sampler step size
    double gamma = 0.0;        // PDFP primal step
    double lambda = 0.0;       // PDFP dual step
    int K = 1;                 // inner iterations
    double C = 0.0;            // bound on the conjugate-prox norm
    double d = 1.0;            // dimension
    double l = 0.0;            // total diffusion time N * delta
    double rho_min_BBt = 0.0;  // smallest eigenvalue of B B^T
    double initial_gap = 0.0;  // E[U_rho(theta_0) - U_rho(x*)]
};

// m / (1 + rho m): strong convexity of the rho-Moreau envelope
double moreau_strong_convexity(double m, double rho);

// eta for the prox subproblem, from the inputs
double theory_eta(const TheoryInputs& in);

// (1 - m_rho delta (1 - eta^K))^n * initial_gap
//   + (2 d lambda rho + gamma^2 C^2 eta^K) / (2 lambda rho^2 m_rho (1 - eta^K));
// throws when the hypotheses fail (m <= 0 or eta >= 1).
double expectation_bound(const TheoryInputs& in, long n);

// upper bound on KL(law of the smoothed diffusion || law of the
// piecewise-drift interpolation of the chain) over [0, l]
double kl_bound(const TheoryInputs& in);

// upper bound on the TV distance between the N-th sample's law and pi_rho,
// for chains started from N(x*, rho I)
double tv_bound(const TheoryInputs& in);

// right-hand sides of the three accumulated-sum inequalities:
//   [0] delta sum E||grad U_rho(theta_n)||^2
//   [1] delta sum E||(x_{n,K} - prox_{rho U}(theta_n))/rho||^2
//   [2] delta sum E||(theta_n - x_{n,K})/rho||^2
std::array<double, 3> accumulated_sum_bounds(const TheoryInputs& in, long N);

struct BoundCheckRow {
    long n = 0;
    double empirical = 0.0;
    double mc_stderr = 0.0;
    double bound = 0.0;
    bool holds = false;  // empirical <= bound + 3 * stderr
};

struct BoundCheckReport {
    TheoryInputs inputs;            // resolved inputs used for the bounds
    double x_star = 0.0;            // minimizer (1-D toys)
    double u_rho_star = 0.0;        // U_rho at the minimizer
    std::vector<BoundCheckRow> expectation_rows;
    std::array<BoundCheckRow, 3> sum_rows;  // accumulated-sum checks at the final N
    bool all_hold = false;
};

// Runs n_chains independent ULA-PDFP chains on a 1-D toy started from
// N(x*, rho I), estimating E[U_rho(theta_n) - U_rho(x*)] at the checkpoints
// and the three accumulated sums over the whole run, each compared against
// its closed-form bound with 3-sigma Monte-Carlo slack.
BoundCheckReport empirical_bound_check(const ToyTarget& toy,
                                       const SamplerConfig& cfg,
                                       const std::vector<long>& checkpoints,
                                       int n_chains);

// "quantity,n,empirical,mc_stderr,bound,holds" rows with a header line
std::string bound_report_csv(const BoundCheckReport& report);

}  // namespace pdla
