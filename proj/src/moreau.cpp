#include "pdla/moreau.hpp"

namespace pdla {

PdfpParams resolve_inner_params(const CompositeProblem& prob,
                                const MoreauConfig& cfg) {
    PdfpParams p = cfg.inner;
    PdfpParams d = default_pdfp_params(prob, 1.0 / cfg.rho);
    if (p.gamma <= 0.0) p.gamma = d.gamma;
    if (p.lambda <= 0.0) p.lambda = d.lambda;
    return p;
}

RealField prox_energy(const RealField& theta, const CompositeTarget& target,
                      const MoreauConfig& cfg, ProxMode mode, int K) {
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("prox_energy: rho must be positive");
    if (!(cfg.exact_tol > 0.0))
        throw std::invalid_argument("prox_energy: exact_tol must be positive");
    PdfpParams p = resolve_inner_params(target.problem, cfg);
    if (mode == ProxMode::ksteps)
        return kstep_prox_subproblem(theta, cfg.rho, target.problem, p, K);
    validate_pdfp_params(target.problem, p, 1.0 / cfg.rho);
    p.tol = cfg.exact_tol;
    p.max_iters = cfg.max_inner;
    CompositeProblem sub = prox_subproblem(target.problem, theta, cfg.rho);
    RealField v0(target.problem.B.range_shape());
    return pdfp_solve(sub, p, theta, v0).x;
}

double moreau_value(const RealField& theta, const CompositeTarget& target,
                    const MoreauConfig& cfg) {
    RealField p = prox_energy(theta, target, cfg, ProxMode::exact);
    return target.energy(p) + norm2_sq(p - theta) / (2.0 * cfg.rho);
}

RealField moreau_gradient(const RealField& theta, const RealField& prox_point,
                          double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("moreau_gradient: rho must be positive");
    return (1.0 / rho) * (theta - prox_point);
}

}  // namespace pdla
