/*
 * Sample-quality measures: PSNR of an estimate against a reference, expected
 * square jumping distance, effective sample size (Geyer initial-positive-
 * sequence truncation) and the Kolmogorov-Smirnov distance against a target
 * CDF. All pure functions.
 */
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdla/field.hpp"

namespace pdla {

// 10*log10(peak^2 / MSE), capped at 200 dB for zero MSE
double psnr(const RealField& reference, const RealField& estimate, double peak = 1.0);

// mean over consecutive pairs of ||theta_{n+1} - theta_n||^2
double esjd(std::span<const RealField> samples);
double esjd(std::span<const double> series);

struct EssResult {
    double value = 0.0;
    double tau = 0.0;     // integrated autocorrelation time estimate
    bool clamped = false; // raw estimate fell outside [1, N]
};

// N / (1 + 2 sum rho_k) with the pair sums (rho_{2m} + rho_{2m+1}) summed
// while positive; clamped to [1, N]. Throws on fewer than 10 samples or a
// zero-variance series.
EssResult ess(std::span<const double> series);

struct DiagnosticsReport {
    double psnr_db = 0.0;
    double esjd_value = 0.0;
    double ess_min = 0.0, ess_mean = 0.0, ess_median = 0.0;
    double acceptance_rate = 0.0;
    long n_samples = 0;
};

// sup_x |F_hat(x) - F(x)| over the sample points
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);

}  // namespace pdla
