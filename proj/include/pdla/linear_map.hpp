/*
 * Linear operators with explicit adjoints: dense matrices, periodic 2-D
 * convolutions, discrete gradients (forward differences, Neumann boundary)
 * and the identity. Operators are immutable after construction; apply and
 * adjoint are pure, so instances are safely shareable across threads.
 */
#pragma once

#include <functional>

#include "pdla/field.hpp"

namespace pdla {

enum class MapKind { dense, convolution, gradient, identity };

class LinearMap {
public:
    LinearMap() = default;
    LinearMap(MapKind kind, Shape domain, Shape range,
              std::function<RealField(const RealField&)> apply,
              std::function<RealField(const RealField&)> adjoint)
        : kind_(kind), domain_(domain), range_(range),
          apply_(std::move(apply)), adjoint_(std::move(adjoint)) {}

    MapKind kind() const { return kind_; }
    const Shape& domain_shape() const { return domain_; }
    const Shape& range_shape() const { return range_; }

    RealField apply(const RealField& x) const {
        if (x.shape() != domain_)
            throw std::invalid_argument("LinearMap::apply: expected shape " +
                                        domain_.str() + ", got " + x.shape().str());
        return apply_(x);
    }

    RealField adjoint(const RealField& y) const {
        if (y.shape() != range_)
            throw std::invalid_argument("LinearMap::adjoint: expected shape " +
                                        range_.str() + ", got " + y.shape().str());
        return adjoint_(y);
    }

private:
    MapKind kind_ = MapKind::identity;
    Shape domain_, range_;
    std::function<RealField(const RealField&)> apply_, adjoint_;
};

LinearMap make_identity_map(Shape shape);

// apply = matrix * x (row-major, range.rows x domain.rows entries viewed as
// a rectangular matrix acting on flattened fields)
LinearMap make_dense_map(const RealField& matrix);

// Periodic-boundary 2-D convolution with a centered kernel; the adjoint is
// correlation with the flipped kernel. The kernel must fit in the image and
// sum to 1 (normalized blur).
LinearMap make_convolution_map(const RealField& kernel, Shape image_shape);

// Discrete gradient: forward differences in x and y, zero difference past
// the last row/column (Neumann), range stacked as (2*rows, cols) with the
// x-differences on top. The adjoint is the negative divergence.
LinearMap make_gradient_map(Shape image_shape);

struct SpectralEstimate {
    double value = 0.0;     // estimate of lambda_max(B B^T)
    bool converged = false;
    int iterations = 0;
};

// Power iteration on B^T B (same nonzero spectrum as B B^T). Converged when
// successive Rayleigh quotients differ by less than tol.
SpectralEstimate power_iteration(const LinearMap& op, int max_iters = 200,
                                 double tol = 1e-8);

}  // namespace pdla
