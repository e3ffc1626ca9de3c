#include <doctest.h>

#include "oracles.hpp"
#include "pdla/bounds.hpp"
#include "pdla/rng.hpp"

using namespace pdla;

namespace {

TheoryInputs pinned_inputs() {
    TheoryInputs in;
    in.m = 1.0;
    in.M2 = 1.0;
    in.rho = 0.5;
    in.delta = 0.2;
    in.gamma = 0.3;
    in.lambda = 0.8;
    in.K = 2;
    in.C = 1.0;
    in.d = 1.0;
    in.l = 10.0;
    in.rho_min_BBt = 1.0;
    in.initial_gap = 0.7;
    return in;
}

oracle::BoundFormulas to_oracle(const TheoryInputs& in) {
    return oracle::BoundFormulas{in.m,      in.M2, in.rho, in.delta,
                                 in.gamma,  in.lambda,
                                 static_cast<double>(in.K),
                                 in.C,      in.d,  in.l,   in.rho_min_BBt,
                                 in.initial_gap};
}

}  // namespace

TEST_CASE("moreau strong convexity: formula and limits") {
    CHECK(moreau_strong_convexity(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(moreau_strong_convexity(0.0, 2.0) == doctest::Approx(0.0));
    CHECK(moreau_strong_convexity(1.0, 1e-2) == doctest::Approx(1.0).epsilon(0.011));
    CHECK(moreau_strong_convexity(1.0, 1e-4) == doctest::Approx(1.0).epsilon(2e-4));
    CHECK_THROWS_AS((void)moreau_strong_convexity(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("every bound evaluator matches the independent formula script") {
    CounterRng rng(51);
    int checked = 0;
    while (checked < 100) {
        TheoryInputs in;
        in.m = 0.2 + 2.0 * rng.next_uniform();
        in.M2 = in.m + 2.0 * rng.next_uniform();
        in.rho = 0.05 + rng.next_uniform();
        in.delta = in.rho * (0.1 + 0.9 * rng.next_uniform());
        in.gamma = (0.2 + 0.6 * rng.next_uniform()) * 2.0 / (in.M2 + 1.0 / in.rho);
        in.lambda = 0.2 + 0.8 * rng.next_uniform();
        in.K = 1 + static_cast<int>(rng.next_u64() % 12);
        in.C = 2.0 * rng.next_uniform();
        in.d = static_cast<double>(1 + rng.next_u64() % 64);
        in.l = 0.5 + 30.0 * rng.next_uniform();
        in.rho_min_BBt = 0.1 + rng.next_uniform();
        in.initial_gap = 2.0 * rng.next_uniform();
        if (theory_eta(in) >= 1.0) continue;
        ++checked;

        oracle::BoundFormulas ref = to_oracle(in);
        const long n = static_cast<long>(rng.next_u64() % 1000);
        CHECK(expectation_bound(in, n) ==
              doctest::Approx(ref.expectation(static_cast<double>(n))).epsilon(1e-12));
        CHECK(kl_bound(in) == doctest::Approx(ref.kl()).epsilon(1e-12));
        CHECK(tv_bound(in) == doctest::Approx(ref.tv()).epsilon(1e-12));

        const long N = 1 + static_cast<long>(rng.next_u64() % 500);
        auto sums = accumulated_sum_bounds(in, N);
        CHECK(sums[0] == doctest::Approx(ref.sum_grad(static_cast<double>(N))).epsilon(1e-12));
        CHECK(sums[1] == doctest::Approx(ref.sum_err(static_cast<double>(N))).epsilon(1e-12));
        CHECK(sums[2] == doctest::Approx(ref.sum_drift(static_cast<double>(N))).epsilon(1e-12));
    }
}

TEST_CASE("expectation bound: n = 0 and asymptote structure") {
    TheoryInputs in = pinned_inputs();
    const double eta_k = std::pow(theory_eta(in), in.K);
    const double m_rho = moreau_strong_convexity(in.m, in.rho);
    const double tail = (2.0 * in.d * in.lambda * in.rho +
                         in.gamma * in.gamma * in.C * in.C * eta_k) /
                        (2.0 * in.lambda * in.rho * in.rho * m_rho * (1.0 - eta_k));
    CHECK(expectation_bound(in, 0) == doctest::Approx(in.initial_gap + tail).epsilon(1e-14));
    CHECK(expectation_bound(in, 100000) == doctest::Approx(tail).epsilon(1e-9));
}

TEST_CASE("bounds: sampled monotonicity in n, l and K") {
    TheoryInputs in = pinned_inputs();
    double prev = expectation_bound(in, 0);
    for (long n : {1L, 3L, 10L, 50L, 400L}) {
        const double v = expectation_bound(in, n);
        CHECK(v <= prev + 1e-13);
        prev = v;
    }
    double prev_tv_mixing = 1e300;
    for (double l : {0.5, 2.0, 8.0, 32.0}) {
        TheoryInputs j = in;
        j.l = l;
        const double m_rho = moreau_strong_convexity(j.m, j.rho);
        const double mixing = 0.5 * std::exp(-j.d / 4.0 * std::log(j.rho * m_rho) -
                                             l * m_rho / 2.0);
        CHECK(mixing < prev_tv_mixing);
        prev_tv_mixing = mixing;
    }
    double prev_kl = 1e300, prev_tv = 1e300;
    for (int K : {1, 2, 4, 8, 32}) {
        TheoryInputs j = in;
        j.K = K;
        CHECK(kl_bound(j) <= prev_kl + 1e-13);
        CHECK(tv_bound(j) <= prev_tv + 1e-13);
        prev_kl = kl_bound(j);
        prev_tv = tv_bound(j);
    }
}

TEST_CASE("hypothesis violations raise domain errors") {
    TheoryInputs in = pinned_inputs();
    in.rho_min_BBt = 0.0;
    in.gamma = 1e-12;
    CHECK_THROWS_AS((void)expectation_bound(in, 3), std::domain_error);
    CHECK_THROWS_AS((void)kl_bound(in), std::domain_error);
    CHECK_THROWS_AS((void)tv_bound(in), std::domain_error);

    TheoryInputs m0 = pinned_inputs();
    m0.m = 0.0;
    CHECK_THROWS_AS((void)expectation_bound(m0, 3), std::domain_error);
}

TEST_CASE("empirical bound check: quadratic edge case (C = 0) holds") {
    // U = x^2/2: g weight 0 so the conjugate prox is bounded by C = 0
    ToyTarget toy;
    toy.dimension = 1;
    toy.target.problem.B = make_identity_map({1, 1});
    toy.target.problem.lambda_max_BBt = 1.0;
    toy.target.problem.g = SeparablePenalty{0.0};
    toy.target.problem.lipschitz_M2 = 1.0;
    toy.target.problem.strong_convexity_m = 1.0;
    toy.target.problem.grad_f = [](const RealField& x) { return x; };
    toy.target.f_value = [](const RealField& x) { return 0.5 * norm2_sq(x); };
    toy.target.energy = toy.target.f_value;

    SamplerConfig cfg;
    cfg.delta = 0.05;
    cfg.rho = 0.1;
    cfg.K = 1;
    cfg.gamma = 0.06;  // off-optimal so eta > 0
    cfg.lambda = 1.0;
    cfg.N = 200;
    cfg.seed = 3;
    BoundCheckReport rep = empirical_bound_check(toy, cfg, {0, 10, 100, 200}, 60);
    CHECK(rep.all_hold);
    CHECK(rep.inputs.C == doctest::Approx(0.0));
    for (const auto& row : rep.expectation_rows) CHECK(row.holds);
}

TEST_CASE("empirical bound check: lasso toy holds and n = 0 is tight") {
    ToyTarget toy = make_toy_1d();
    SamplerConfig cfg;
    cfg.delta = 0.05;
    cfg.rho = 0.1;
    cfg.K = 1;
    cfg.gamma = 0.06;
    cfg.lambda = 1.0;
    cfg.N = 150;
    cfg.seed = 4;
    BoundCheckReport rep = empirical_bound_check(toy, cfg, {0, 10, 100}, 60);
    CHECK(rep.all_hold);
    CHECK(std::abs(rep.x_star) <= 1e-9);
    // at n = 0 the bound is the initial gap plus a positive tail
    CHECK(rep.expectation_rows[0].bound >= rep.expectation_rows[0].empirical);
}

TEST_CASE("bound report serializes as (quantity, n, empirical, bound, holds) rows") {
    ToyTarget toy = make_toy_1d();
    SamplerConfig cfg;
    cfg.delta = 0.05;
    cfg.rho = 0.1;
    cfg.K = 1;
    cfg.gamma = 0.06;
    cfg.lambda = 1.0;
    cfg.N = 50;
    cfg.seed = 7;
    BoundCheckReport rep = empirical_bound_check(toy, cfg, {0, 50}, 20);
    const std::string csv = bound_report_csv(rep);
    CHECK(csv.rfind("quantity,n,empirical,mc_stderr,bound,holds\n", 0) == 0);
    CHECK(csv.find("expectation_gap,0,") != std::string::npos);
    CHECK(csv.find("expectation_gap,50,") != std::string::npos);
    CHECK(csv.find("sum_grad_norm,50,") != std::string::npos);
    CHECK(csv.find("sum_subproblem_error,") != std::string::npos);
    CHECK(csv.find("sum_drift_norm,") != std::string::npos);
}

TEST_CASE("empirical bound check: larger K shrinks the asymptotic gap") {
    ToyTarget toy = make_toy_1d();
    SamplerConfig base;
    base.delta = 0.1;
    base.rho = 0.1;
    base.gamma = 0.002;  // strongly suboptimal: eta close to 1, K = 1 is crude
    base.lambda = 1.0;
    base.N = 400;
    base.seed = 5;

    auto tail_gap = [&](int K) {
        SamplerConfig cfg = base;
        cfg.K = K;
        BoundCheckReport rep = empirical_bound_check(toy, cfg, {400}, 80);
        return rep.expectation_rows[0];
    };
    BoundCheckRow k1 = tail_gap(1);
    BoundCheckRow k20 = tail_gap(20);
    CHECK(k20.empirical < k1.empirical + 3.0 * (k1.mc_stderr + k20.mc_stderr));
}
