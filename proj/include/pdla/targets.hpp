/*
 * Concrete composite targets pi(theta) ~ exp(-U(theta)) with
 * U = f + g(B.), plus synthetic data generation. Targets are immutable
 * after construction and all evaluations are pure.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "pdla/pdfp.hpp"

namespace pdla {

struct CompositeTarget {
    CompositeProblem problem;
    std::function<double(const RealField&)> f_value;  // smooth part of U
    std::function<double(const RealField&)> energy;   // U = f + g(B.)
    std::string label;
};

struct DeblurModel {
    RealField observation;  // y = A(truth) + sigma * noise
    LinearMap A;
    double sigma = 0.0;
    double lambda_reg = 0.0;
    double ridge_eps = 0.0;
};

struct ToyTarget {
    int dimension = 1;
    CompositeTarget target;
    std::function<double(double)> cdf;  // quadrature CDF, 1-D targets only
    double quad_norm_error = 0.0;       // self-consistency estimate of the quadrature
};

// Piecewise-constant test image with values in [0, 1].
RealField make_phantom(Shape shape);

// Uniform horizontal motion-blur kernel of the given length (entries 1/len).
RealField make_motion_kernel(std::size_t length);

// Posterior ||y - A theta||^2/(2 sigma^2) + (ridge/2)||theta||^2
//            + lambda_reg ||grad theta||_1
// with A the periodic convolution by `kernel` and seeded Gaussian noise.
// noise_scale multiplies the drawn noise (0 gives the noiseless y = A(truth)).
std::pair<DeblurModel, CompositeTarget> make_deblur_model(
    const RealField& truth, const RealField& kernel, double sigma,
    double lambda_reg, double ridge_eps, std::uint64_t seed,
    double noise_scale = 1.0);

enum class ToyKind { lasso_posterior };

// U(x) = x^2/2 + |x|: f strongly convex with m = M2 = 1, g = |.|, B = 1.
// The CDF is tabulated by composite Simpson quadrature on [-12, 12] with
// 1e6 panels at construction.
ToyTarget make_toy_1d(ToyKind kind = ToyKind::lasso_posterior);

// Underdetermined or badly conditioned dense forward operator with the same
// posterior form as the deblurring model. Singular values decay
// geometrically from 1 to 1/condition; condition == 1 with a square
// operator degenerates to plain denoising (A = I). The parameter is
// treated as a 2-D image (with a TV gradient penalty operator) when
// dim_param is a perfect square and at least 4, else as a 1-D signal with
// B = I.
CompositeTarget make_illposed_dense(std::size_t dim_obs, std::size_t dim_param,
                                    double condition, double sigma,
                                    double lambda_reg, std::uint64_t seed);

}  // namespace pdla
