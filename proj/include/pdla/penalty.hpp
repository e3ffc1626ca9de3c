/*
 * Separable non-smooth penalties and their proximity operators. Only the
 * weighted L1 norm is shipped; its conjugate is the indicator of the
 * L-infinity ball of radius `weight`, whose prox is a componentwise clamp
 * regardless of the prox scaling.
 */
#pragma once

#include "pdla/field.hpp"

namespace pdla {

// componentwise sign(x) * max(|x| - t, 0); prox of t*||.||_1
RealField soft_threshold(const RealField& x, double t);

struct SeparablePenalty {
    enum class Kind { l1 };

    double weight = 0.0;  // regularization weight multiplying ||.||_1
    Kind kind = Kind::l1;

    double value(const RealField& z) const { return weight * norm1(z); }

    // prox of t*g: soft threshold at t*weight
    RealField prox(const RealField& z, double t) const {
        if (weight == 0.0) return z;
        return soft_threshold(z, t * weight);
    }

    // uniform bound on ||prox_{s g*}(v)||_2: the clamp lands in the
    // L-infinity ball of radius weight, so C = weight * sqrt(dual dim)
    double dual_bound(std::size_t dual_dim) const {
        return weight * std::sqrt(static_cast<double>(dual_dim));
    }
};

// prox_{s g*}(v). For weighted L1 this is the projection onto
// [-weight, weight]^d, independent of s; in general it is given by the
// Moreau identity prox_{s g*}(v) = v - s * prox_{g/s}(v/s).
RealField prox_conjugate_scaled(const RealField& v, double s,
                                const SeparablePenalty& g);

}  // namespace pdla
