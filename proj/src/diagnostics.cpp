#include "pdla/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pdla {

double psnr(const RealField& reference, const RealField& estimate, double peak) {
    check_same_shape(reference, estimate, "psnr");
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
    double mse = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference[i] - estimate[i];
        mse += d * d;
    }
    mse /= static_cast<double>(reference.size());
    if (mse == 0.0) return 200.0;
    return std::min(200.0, 10.0 * std::log10(peak * peak / mse));
}

double esjd(std::span<const RealField> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("esjd: need at least 2 samples");
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < samples.size(); ++n)
        s += norm2_sq(samples[n + 1] - samples[n]);
    return s / static_cast<double>(samples.size() - 1);
}

double esjd(std::span<const double> series) {
    if (series.size() < 2)
        throw std::invalid_argument("esjd: need at least 2 samples");
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < series.size(); ++n) {
        const double d = series[n + 1] - series[n];
        s += d * d;
    }
    return s / static_cast<double>(series.size() - 1);
}

EssResult ess(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 10) throw std::invalid_argument("ess: need at least 10 samples");

    double m = 0.0;
    for (double v : series) m += v;
    m /= static_cast<double>(n);

    double c0 = 0.0;
    for (double v : series) c0 += (v - m) * (v - m);
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) throw std::domain_error("ess: zero-variance series");

    auto autocov = [&](std::size_t k) {
        double c = 0.0;
        for (std::size_t t = 0; t + k < n; ++t)
            c += (series[t] - m) * (series[t + k] - m);
        return c / static_cast<double>(n);
    };

    // Geyer initial positive sequence: sum pairs (rho_{2m} + rho_{2m+1})
    // while positive; tau = 2 * sum of pair sums - 1 (the m = 0 pair
    // includes rho_0 = 1).
    double pair_total = 0.0;
    for (std::size_t mstart = 0; 2 * mstart + 1 < n; ++mstart) {
        const double r0 = (2 * mstart == 0) ? 1.0 : autocov(2 * mstart) / c0;
        const double r1 = autocov(2 * mstart + 1) / c0;
        const double pair = r0 + r1;
        if (pair <= 0.0) break;
        pair_total += pair;
    }
    double tau = 2.0 * pair_total - 1.0;

    EssResult r;
    r.tau = tau;
    double raw = static_cast<double>(n) / tau;
    if (raw > static_cast<double>(n)) {
        raw = static_cast<double>(n);
        r.clamped = true;
    } else if (raw < 1.0) {
        raw = 1.0;
        r.clamped = true;
    }
    r.value = raw;
    return r;
}

double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample set");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

}  // namespace pdla
