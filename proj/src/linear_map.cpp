#include "pdla/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdla/rng.hpp"

namespace pdla {

LinearMap make_identity_map(Shape shape) {
    auto id = [](const RealField& x) { return x; };
    return LinearMap(MapKind::identity, shape, shape, id, id);
}

LinearMap make_dense_map(const RealField& matrix) {
    if (!matrix.all_finite())
        throw std::invalid_argument("make_dense_map: matrix has non-finite entries");
    const std::size_t rows = matrix.shape().rows;
    const std::size_t cols = matrix.shape().cols;
    Shape domain{cols, 1};
    Shape range{rows, 1};
    auto apply = [matrix, rows, cols](const RealField& x) {
        RealField y({rows, 1});
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += matrix.at(i, j) * x[j];
            y[i] = s;
        }
        return y;
    };
    auto adjoint = [matrix, rows, cols](const RealField& y) {
        RealField x({cols, 1});
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) x[j] += matrix.at(i, j) * y[i];
        return x;
    };
    return LinearMap(MapKind::dense, domain, range, apply, adjoint);
}

LinearMap make_convolution_map(const RealField& kernel, Shape image_shape) {
    const std::size_t kh = kernel.shape().rows, kw = kernel.shape().cols;
    const std::size_t h = image_shape.rows, w = image_shape.cols;
    if (kh > h || kw > w)
        throw std::invalid_argument("make_convolution_map: kernel " +
                                    kernel.shape().str() + " larger than image " +
                                    image_shape.str());
    double ksum = 0.0;
    for (std::size_t i = 0; i < kernel.size(); ++i) ksum += kernel[i];
    if (std::abs(ksum - 1.0) > 1e-9)
        throw std::invalid_argument("make_convolution_map: kernel entries must sum to 1, got " +
                                    std::to_string(ksum));

    // centered anchor so a symmetric kernel does not translate the image;
    // taps stored as (row offset, col offset, weight)
    struct Tap {
        long dr, dc;
        double weight;
    };
    std::vector<Tap> taps;
    const long ch = static_cast<long>((kh - 1) / 2);
    const long cw = static_cast<long>((kw - 1) / 2);
    for (long p = 0; p < static_cast<long>(kh); ++p)
        for (long q = 0; q < static_cast<long>(kw); ++q)
            taps.push_back({p - ch, q - cw,
                            kernel.at(static_cast<std::size_t>(p),
                                      static_cast<std::size_t>(q))});

    const long lh = static_cast<long>(h), lw = static_cast<long>(w);

    // out(i, j) += weight * x((i - dr) mod h, (j - dc) mod w), accumulated
    // tap by tap over wrap-free contiguous column segments
    auto accumulate = [lh, lw](RealField& out, const RealField& x,
                               const std::vector<Tap>& tps, bool flip) {
        for (const Tap& tap : tps) {
            const long dr = flip ? -tap.dr : tap.dr;
            const long dc = flip ? -tap.dc : tap.dc;
            const double wgt = tap.weight;
            const long lo = std::max(0L, dc);        // j - dc in [0, w) here
            const long hi = std::min(lw, lw + dc);
            for (long i = 0; i < lh; ++i) {
                long r = (i - dr) % lh;
                if (r < 0) r += lh;
                double* dst = out.data() + i * lw;
                const double* src = x.data() + r * lw;
                for (long j = 0; j < lo; ++j) dst[j] += wgt * src[j - dc + lw];
                for (long j = lo; j < hi; ++j) dst[j] += wgt * src[j - dc];
                for (long j = hi; j < lw; ++j) dst[j] += wgt * src[j - dc - lw];
            }
        }
    };

    auto apply = [taps, accumulate, h, w](const RealField& x) {
        RealField out({h, w});
        accumulate(out, x, taps, false);
        return out;
    };
    auto adjoint = [taps, accumulate, h, w](const RealField& y) {
        RealField out({h, w});
        accumulate(out, y, taps, true);
        return out;
    };
    return LinearMap(MapKind::convolution, image_shape, image_shape, apply, adjoint);
}

LinearMap make_gradient_map(Shape image_shape) {
    const std::size_t h = image_shape.rows, w = image_shape.cols;
    if (h < 2 || w < 2)
        throw std::invalid_argument("make_gradient_map: image must be 2-D with sides >= 2, got " +
                                    image_shape.str());
    Shape range{2 * h, w};
    auto apply = [h, w, range](const RealField& x) {
        RealField p(range);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j + 1 < w; ++j)
                p.at(i, j) = x.at(i, j + 1) - x.at(i, j);
        for (std::size_t i = 0; i + 1 < h; ++i)
            for (std::size_t j = 0; j < w; ++j)
                p.at(h + i, j) = x.at(i + 1, j) - x.at(i, j);
        return p;
    };
    auto adjoint = [h, w](const RealField& p) {
        RealField x({h, w});
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j + 1 < w; ++j) {
                double v = p.at(i, j);
                x.at(i, j + 1) += v;
                x.at(i, j) -= v;
            }
        for (std::size_t i = 0; i + 1 < h; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                double v = p.at(h + i, j);
                x.at(i + 1, j) += v;
                x.at(i, j) -= v;
            }
        return x;
    };
    return LinearMap(MapKind::gradient, image_shape, range, apply, adjoint);
}

SpectralEstimate power_iteration(const LinearMap& op, int max_iters, double tol) {
    CounterRng rng(0xB0B5CA1EULL);
    RealField z(op.domain_shape());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.next_uniform() - 0.5;
    double zn = norm2(z);
    if (zn == 0.0) z[0] = 1.0, zn = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] /= zn;

    SpectralEstimate est;
    double prev = 0.0;
    for (int k = 0; k < max_iters; ++k) {
        RealField bz = op.adjoint(op.apply(z));
        double rayleigh = dot(z, bz);
        double n = norm2(bz);
        est.iterations = k + 1;
        if (n == 0.0) {  // z in the null space; for the zero operator this is exact
            est.value = 0.0;
            est.converged = false;
            return est;
        }
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = bz[i] / n;
        est.value = rayleigh;
        if (k > 0 && std::abs(rayleigh - prev) < tol * std::max(1.0, std::abs(rayleigh))) {
            est.converged = true;
            return est;
        }
        prev = rayleigh;
    }
    return est;
}

}  // namespace pdla
