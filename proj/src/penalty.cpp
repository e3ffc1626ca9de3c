#include "pdla/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace pdla {

RealField soft_threshold(const RealField& x, double t) {
    if (t <= 0.0)
        throw std::invalid_argument("soft_threshold: threshold must be positive, got " +
                                    std::to_string(t));
    RealField r(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = std::abs(x[i]) - t;
        r[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
    }
    return r;
}

RealField prox_conjugate_scaled(const RealField& v, double s,
                                const SeparablePenalty& g) {
    if (s <= 0.0)
        throw std::invalid_argument("prox_conjugate_scaled: scale must be positive");
    RealField r(v.shape());
    const double w = g.weight;
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = std::clamp(v[i], -w, w);
    return r;
}

}  // namespace pdla
