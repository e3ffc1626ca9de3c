#include "pdla/targets.hpp"

#include <cmath>
#include <memory>

#include "pdla/rng.hpp"

namespace pdla {

RealField make_phantom(Shape shape) {
    const std::size_t h = shape.rows, w = shape.cols;
    RealField img(shape, 0.15);
    for (std::size_t i = h / 8; i < h / 2; ++i)
        for (std::size_t j = w / 8; j < w / 2; ++j) img.at(i, j) = 0.55;
    const double cy = 0.65 * h, cx = 0.6 * w, r2 = 0.2 * h * 0.2 * h;
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            if ((i - cy) * (i - cy) + (j - cx) * (j - cx) < r2) img.at(i, j) = 0.95;
    for (std::size_t i = static_cast<std::size_t>(0.15 * h); i < 0.85 * h; ++i)
        for (std::size_t j = static_cast<std::size_t>(0.72 * w); j < 0.80 * w; ++j)
            img.at(i, j) = 0.35;
    for (std::size_t i = static_cast<std::size_t>(0.58 * h); i < 0.66 * h; ++i)
        for (std::size_t j = static_cast<std::size_t>(0.10 * w); j < 0.45 * w; ++j)
            img.at(i, j) = 0.75;
    return img;
}

RealField make_motion_kernel(std::size_t length) {
    RealField k({1, length});
    for (std::size_t i = 0; i < length; ++i) k[i] = 1.0 / static_cast<double>(length);
    return k;
}

std::pair<DeblurModel, CompositeTarget> make_deblur_model(
    const RealField& truth, const RealField& kernel, double sigma,
    double lambda_reg, double ridge_eps, std::uint64_t seed, double noise_scale) {
    if (!(sigma > 0.0)) throw std::invalid_argument("make_deblur_model: sigma must be positive");
    if (lambda_reg < 0.0)
        throw std::invalid_argument("make_deblur_model: lambda_reg must be nonnegative");

    LinearMap A = make_convolution_map(kernel, truth.shape());
    CounterRng rng(seed);
    RealField y = A.apply(truth);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += noise_scale * sigma * rng.next_normal();

    DeblurModel model{y, A, sigma, lambda_reg, ridge_eps};

    const double lam_max_AAt = power_iteration(A).value;
    const double inv_var = 1.0 / (sigma * sigma);

    CompositeTarget t;
    t.label = "deblur_" + truth.shape().str();
    t.problem.B = make_gradient_map(truth.shape());
    t.problem.lambda_max_BBt = 8.0;  // forward-difference gradient bound
    t.problem.g = SeparablePenalty{lambda_reg};
    t.problem.lipschitz_M2 = lam_max_AAt * inv_var + ridge_eps;
    t.problem.strong_convexity_m = ridge_eps;
    t.problem.grad_f = [A, y, inv_var, ridge_eps](const RealField& th) {
        RealField r = A.apply(th) - y;
        RealField g = A.adjoint(r);
        for (std::size_t i = 0; i < g.size(); ++i)
            g[i] = g[i] * inv_var + ridge_eps * th[i];
        return g;
    };
    t.f_value = [A, y, inv_var, ridge_eps](const RealField& th) {
        double s = 0.5 * inv_var * norm2_sq(A.apply(th) - y);
        if (ridge_eps > 0.0) s += 0.5 * ridge_eps * norm2_sq(th);
        return s;
    };
    auto B = t.problem.B;
    t.energy = [A, y, inv_var, ridge_eps, B, lambda_reg](const RealField& th) {
        double s = 0.5 * inv_var * norm2_sq(A.apply(th) - y);
        if (ridge_eps > 0.0) s += 0.5 * ridge_eps * norm2_sq(th);
        return s + lambda_reg * norm1(B.apply(th));
    };
    return {std::move(model), std::move(t)};
}

namespace {

// cumulative composite Simpson table of exp(-U) on [lo, hi]
struct QuadCdf {
    double lo, hi, panel;
    std::vector<double> cum;  // cumulative integral at panel edges
    double total;
};

std::shared_ptr<QuadCdf> tabulate_cdf(const std::function<double(double)>& U,
                                      double lo, double hi, std::size_t panels) {
    auto q = std::make_shared<QuadCdf>();
    q->lo = lo;
    q->hi = hi;
    q->panel = (hi - lo) / static_cast<double>(panels);
    q->cum.resize(panels + 1);
    q->cum[0] = 0.0;
    double left = std::exp(-U(lo));
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = lo + q->panel * static_cast<double>(i);
        const double mid = std::exp(-U(a + 0.5 * q->panel));
        const double right = std::exp(-U(a + q->panel));
        q->cum[i + 1] = q->cum[i] + q->panel / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
    q->total = q->cum[panels];
    return q;
}

}  // namespace

ToyTarget make_toy_1d(ToyKind kind) {
    if (kind != ToyKind::lasso_posterior)
        throw std::invalid_argument("make_toy_1d: unknown toy kind");
    ToyTarget toy;
    toy.dimension = 1;

    CompositeTarget& t = toy.target;
    t.label = "toy1d_lasso";
    t.problem.B = make_identity_map({1, 1});
    t.problem.lambda_max_BBt = 1.0;
    t.problem.g = SeparablePenalty{1.0};
    t.problem.lipschitz_M2 = 1.0;
    t.problem.strong_convexity_m = 1.0;
    t.problem.grad_f = [](const RealField& x) { return x; };
    t.f_value = [](const RealField& x) { return 0.5 * norm2_sq(x); };
    t.energy = [](const RealField& x) { return 0.5 * norm2_sq(x) + norm1(x); };

    auto U = [](double x) { return 0.5 * x * x + std::abs(x); };
    const std::size_t panels = 1'000'000;
    auto fine = tabulate_cdf(U, -12.0, 12.0, panels);
    auto coarse = tabulate_cdf(U, -12.0, 12.0, panels / 2);
    toy.quad_norm_error = std::abs(fine->total - coarse->total) / fine->total;

    toy.cdf = [fine, U](double x) {
        if (x <= fine->lo) return 0.0;
        if (x >= fine->hi) return 1.0;
        const double pos = (x - fine->lo) / fine->panel;
        std::size_t i = static_cast<std::size_t>(pos);
        if (i >= fine->cum.size() - 1) i = fine->cum.size() - 2;
        const double a = fine->lo + fine->panel * static_cast<double>(i);
        const double len = x - a;
        double partial = 0.0;
        if (len > 0.0)  // Simpson on the partial panel [a, x]
            partial = len / 6.0 *
                      (std::exp(-U(a)) + 4.0 * std::exp(-U(a + 0.5 * len)) +
                       std::exp(-U(x)));
        return (fine->cum[i] + partial) / fine->total;
    };
    return toy;
}

namespace {

// orthonormalize the columns of a rows x cols Gaussian matrix (cols <= rows)
RealField random_orthonormal(std::size_t rows, std::size_t cols, CounterRng& rng) {
    RealField q({rows, cols});
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = rng.next_normal();
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            double d = 0.0;
            for (std::size_t r = 0; r < rows; ++r) d += q.at(r, c) * q.at(r, prev);
            for (std::size_t r = 0; r < rows; ++r) q.at(r, c) -= d * q.at(r, prev);
        }
        double n = 0.0;
        for (std::size_t r = 0; r < rows; ++r) n += q.at(r, c) * q.at(r, c);
        n = std::sqrt(n);
        for (std::size_t r = 0; r < rows; ++r) q.at(r, c) /= n;
    }
    return q;
}

bool perfect_square(std::size_t n, std::size_t& side) {
    side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n))));
    return side * side == n;
}

}  // namespace

CompositeTarget make_illposed_dense(std::size_t dim_obs, std::size_t dim_param,
                                    double condition, double sigma,
                                    double lambda_reg, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw std::invalid_argument("make_illposed_dense: sigma must be positive");
    if (!(condition >= 1.0))
        throw std::invalid_argument("make_illposed_dense: condition must be >= 1");

    CounterRng rng(seed);
    std::size_t side = 0;
    const bool two_d = perfect_square(dim_param, side) && side >= 2;
    Shape param_shape = two_d ? Shape{side, side} : Shape{dim_param, 1};

    RealField truth = two_d ? make_phantom(param_shape) : RealField(param_shape);
    if (!two_d) {
        const double levels[] = {0.15, 0.55, 0.95, 0.35};
        for (std::size_t i = 0; i < dim_param; ++i)
            truth[i] = levels[4 * i / dim_param];
    }

    LinearMap A;
    if (condition == 1.0 && dim_obs == dim_param) {
        A = make_identity_map(param_shape);
    } else {
        const std::size_t rank = std::min(dim_obs, dim_param);
        RealField u = random_orthonormal(dim_obs, rank, rng);
        RealField v = random_orthonormal(dim_param, rank, rng);
        RealField mat({dim_obs, dim_param});
        for (std::size_t k = 0; k < rank; ++k) {
            const double s =
                rank > 1 ? std::pow(condition, -static_cast<double>(k) /
                                                   static_cast<double>(rank - 1))
                         : 1.0;
            for (std::size_t i = 0; i < dim_obs; ++i)
                for (std::size_t j = 0; j < dim_param; ++j)
                    mat.at(i, j) += s * u.at(i, k) * v.at(j, k);
        }
        // dense maps act on flat 1-D fields; wrap to carry the image shape
        LinearMap flat = make_dense_map(mat);
        auto apply = [flat, dim_param](const RealField& x) {
            return flat.apply(RealField({dim_param, 1}, x.vec()));
        };
        auto adjoint = [flat, param_shape](const RealField& y) {
            return RealField(param_shape, flat.adjoint(y).vec());
        };
        A = LinearMap(MapKind::dense, param_shape, {dim_obs, 1}, apply, adjoint);
    }

    RealField y = A.apply(truth);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * rng.next_normal();

    const double inv_var = 1.0 / (sigma * sigma);
    CompositeTarget t;
    t.label = "illposed_" + std::to_string(dim_obs) + "_" + std::to_string(dim_param);
    t.problem.B = two_d ? make_gradient_map(param_shape) : make_identity_map(param_shape);
    t.problem.lambda_max_BBt = two_d ? 8.0 : 1.0;
    t.problem.g = SeparablePenalty{lambda_reg};
    t.problem.lipschitz_M2 = inv_var;  // top singular value of A is 1 by construction
    t.problem.strong_convexity_m = 0.0;
    t.problem.grad_f = [A, y, inv_var](const RealField& th) {
        RealField g = A.adjoint(A.apply(th) - y);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= inv_var;
        return g;
    };
    t.f_value = [A, y, inv_var](const RealField& th) {
        return 0.5 * inv_var * norm2_sq(A.apply(th) - y);
    };
    auto B = t.problem.B;
    t.energy = [A, y, inv_var, B, lambda_reg](const RealField& th) {
        return 0.5 * inv_var * norm2_sq(A.apply(th) - y) +
               lambda_reg * norm1(B.apply(th));
    };
    return t;
}

}  // namespace pdla
