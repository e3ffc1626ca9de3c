#include <doctest.h>

#include "pdla/diagnostics.hpp"
#include "pdla/rng.hpp"

using namespace pdla;

TEST_CASE("psnr: cap, direct arithmetic and symmetry") {
    RealField a({4, 4}, std::vector<double>(16, 0.3));
    CHECK(psnr(a, a) == doctest::Approx(200.0));

    RealField zeros({4, 4});
    RealField tenth({4, 4}, std::vector<double>(16, 0.1));
    CHECK(psnr(zeros, tenth) == doctest::Approx(20.0));
    CHECK(psnr(tenth, zeros) == doctest::Approx(psnr(zeros, tenth)));

    CHECK_THROWS_AS((void)psnr(zeros, RealField({2, 2})), std::invalid_argument);
    CHECK_THROWS_AS((void)psnr(zeros, tenth, 0.0), std::invalid_argument);
}

TEST_CASE("esjd: hand examples and error path") {
    std::vector<double> constant(10, 2.0);
    CHECK(esjd(std::span<const double>(constant)) == doctest::Approx(0.0));

    std::vector<double> alternating{0.0, 1.0, 0.0, 1.0};
    CHECK(esjd(std::span<const double>(alternating)) == doctest::Approx(1.0));

    std::vector<double> three{0.0, 2.0, 3.0};
    CHECK(esjd(std::span<const double>(three)) == doctest::Approx(2.5));

    std::vector<double> one{1.0};
    CHECK_THROWS_AS((void)esjd(std::span<const double>(one)), std::invalid_argument);

    std::vector<RealField> fields{RealField({2, 1}, {0.0, 0.0}),
                                  RealField({2, 1}, {1.0, 1.0}),
                                  RealField({2, 1}, {1.0, 0.0})};
    CHECK(esjd(std::span<const RealField>(fields)) == doctest::Approx(1.5));
}

TEST_CASE("ess: iid series estimates close to N") {
    CounterRng rng(41);
    std::vector<double> series(100000);
    for (double& v : series) v = rng.next_normal();
    EssResult r = ess(series);
    CHECK(r.value / static_cast<double>(series.size()) > 0.9);
    CHECK(r.value / static_cast<double>(series.size()) < 1.1);
}

TEST_CASE("ess: AR(1) with phi = 0.5 has ESS/N near 1/3") {
    CounterRng rng(42);
    const std::size_t n = 100000;
    std::vector<double> series(n);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x = 0.5 * x + rng.next_normal();
        series[i] = x;
    }
    EssResult r = ess(series);
    const double ratio = r.value / static_cast<double>(n);
    CHECK(ratio == doctest::Approx(1.0 / 3.0).epsilon(0.15));
}

TEST_CASE("ess: degenerate inputs") {
    std::vector<double> constant(100, 1.0);
    CHECK_THROWS_AS((void)ess(constant), std::domain_error);

    std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)ess(tiny), std::invalid_argument);

    // strongly antithetic series: the raw estimate exceeds N and is clamped
    std::vector<double> anti(1000);
    for (std::size_t i = 0; i < anti.size(); ++i) anti[i] = (i % 2 == 0) ? 1.0 : -1.0;
    CounterRng rng(43);
    for (double& v : anti) v += 0.01 * rng.next_normal();
    EssResult r = ess(anti);
    CHECK(r.value <= static_cast<double>(anti.size()));
    CHECK(r.clamped);
}

TEST_CASE("ks distance: quantile samples, point mass and reordering") {
    auto uniform_cdf = [](double x) { return std::min(1.0, std::max(0.0, x)); };

    // samples at the (i + 0.5)/n quantiles of U[0,1]
    const std::size_t n = 1000;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    CHECK(ks_distance(q, uniform_cdf) <= 1.0 / static_cast<double>(n));

    std::vector<double> point(50, 0.5);
    CHECK(ks_distance(point, uniform_cdf) == doctest::Approx(0.5));

    CounterRng rng(44);
    std::vector<double> shuffled = q;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
    CHECK(ks_distance(shuffled, uniform_cdf) == doctest::Approx(ks_distance(q, uniform_cdf)));

    std::vector<double> empty;
    CHECK_THROWS_AS((void)ks_distance(empty, uniform_cdf), std::invalid_argument);
}
