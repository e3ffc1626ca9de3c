/*
 * Moreau envelope of the composite energy U = f + g(B.):
 *
 *   U_rho(theta) = min_y ( U(y) + ||y - theta||^2 / (2 rho) )
 *                = U(p) + ||p - theta||^2 / (2 rho),  p = prox_{rho U}(theta),
 *
 * with gradient (theta - p)/rho. The prox point is computed by the PDFP
 * inner solver, either to a step-norm tolerance ("exact" mode) or by a
 * fixed number of iterations.
 */
#pragma once

#include "pdla/targets.hpp"

namespace pdla {

struct MoreauConfig {
    double rho = 1.0;
    PdfpParams inner;        // gamma/lambda <= 0 resolved from the problem
    double exact_tol = 1e-10;
    int max_inner = 500;
};

enum class ProxMode { exact, ksteps };

// Inner PDFP parameters with unset entries resolved to the defaults
// gamma = 1/(M2 + 1/rho), lambda = 1/lambda_max(BB^T).
PdfpParams resolve_inner_params(const CompositeProblem& prob,
                                const MoreauConfig& cfg);

// prox_{rho U}(theta), dual always started at zero and primal at theta.
// ksteps mode runs exactly K iterations; exact mode iterates until the
// weighted step norm drops below cfg.exact_tol or cfg.max_inner is reached.
RealField prox_energy(const RealField& theta, const CompositeTarget& target,
                      const MoreauConfig& cfg, ProxMode mode, int K = 0);

// U(p) + ||p - theta||^2/(2 rho) with p the exact-mode prox point.
double moreau_value(const RealField& theta, const CompositeTarget& target,
                    const MoreauConfig& cfg);

RealField moreau_gradient(const RealField& theta, const RealField& prox_point,
                          double rho);

}  // namespace pdla
