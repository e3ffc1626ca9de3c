/*
 * Python bindings for the main operations: model construction, the PDFP
 * solver and prox calculus, the samplers with their diagnostics, and the
 * closed-form theory bounds.
 */
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdla/bounds.hpp"
#include "pdla/config.hpp"
#include "pdla/diagnostics.hpp"

namespace py = pybind11;
using namespace pdla;

namespace {

RealField from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() == 1) {
        RealField f({static_cast<std::size_t>(a.shape(0)), 1});
        std::copy(a.data(), a.data() + a.size(), f.data());
        return f;
    }
    if (a.ndim() == 2) {
        RealField f({static_cast<std::size_t>(a.shape(0)),
                     static_cast<std::size_t>(a.shape(1))});
        std::copy(a.data(), a.data() + a.size(), f.data());
        return f;
    }
    throw std::invalid_argument("expected a 1-D or 2-D float array");
}

py::array_t<double> to_array(const RealField& f) {
    if (f.shape().is_2d()) {
        py::array_t<double> a({f.shape().rows, f.shape().cols});
        std::copy(f.data(), f.data() + f.size(), a.mutable_data());
        return a;
    }
    py::array_t<double> a(static_cast<py::ssize_t>(f.size()));
    std::copy(f.data(), f.data() + f.size(), a.mutable_data());
    return a;
}

SamplerConfig config_from_kwargs(double delta, double rho, int K, double gamma,
                                 double lambda, long n, long burn_in, long thin,
                                 std::uint64_t seed, bool store_samples) {
    SamplerConfig cfg;
    cfg.delta = delta;
    cfg.rho = rho;
    cfg.K = K;
    cfg.gamma = gamma;
    cfg.lambda = lambda;
    cfg.N = n;
    cfg.burn_in = burn_in;
    cfg.thin = thin;
    cfg.seed = seed;
    cfg.store_samples = store_samples;
    return cfg;
}

TheoryInputs inputs_from_kwargs(double m, double M2, double rho, double delta,
                                double gamma, double lambda, int K, double C,
                                double d, double l, double rho_min_BBt,
                                double initial_gap) {
    TheoryInputs in;
    in.m = m;
    in.M2 = M2;
    in.rho = rho;
    in.delta = delta;
    in.gamma = gamma;
    in.lambda = lambda;
    in.K = K;
    in.C = C;
    in.d = d;
    in.l = l;
    in.rho_min_BBt = rho_min_BBt;
    in.initial_gap = initial_gap;
    return in;
}

}  // namespace

PYBIND11_MODULE(pdla, m) {
    m.doc() = "Proximal Langevin samplers with a K-step primal-dual fixed-point inner solver";

    py::class_<BuiltModel>(m, "Model")
        .def_property_readonly("theta0", [](const BuiltModel& b) { return to_array(b.theta0); })
        .def_property_readonly("truth",
                               [](const BuiltModel& b) -> py::object {
                                   if (!b.truth) return py::none();
                                   return to_array(*b.truth);
                               })
        .def_property_readonly("observation",
                               [](const BuiltModel& b) -> py::object {
                                   if (!b.observation) return py::none();
                                   return to_array(*b.observation);
                               })
        .def_property_readonly("label", [](const BuiltModel& b) { return b.target.label; })
        .def("energy",
             [](const BuiltModel& b, const py::array_t<double>& theta) {
                 return b.target.energy(from_array(theta));
             })
        .def("cdf",
             [](const BuiltModel& b, double x) {
                 if (!b.toy) throw std::invalid_argument("cdf: only 1-D toy models carry a CDF");
                 return b.toy->cdf(x);
             });

    m.def("make_toy_1d", []() {
        BuiltModel b;
        b.toy = make_toy_1d();
        b.target = b.toy->target;
        b.theta0 = RealField({1, 1});
        return b;
    });

    m.def(
        "make_deblur_model",
        [](const py::array_t<double>& truth, const py::array_t<double>& kernel,
           double sigma, double lambda_reg, double ridge_eps, std::uint64_t seed) {
            BuiltModel b;
            RealField t = from_array(truth);
            auto [model, target] = make_deblur_model(t, from_array(kernel), sigma,
                                                     lambda_reg, ridge_eps, seed);
            b.target = std::move(target);
            b.truth = std::move(t);
            b.theta0 = model.observation;
            b.observation = std::move(model.observation);
            return b;
        },
        py::arg("truth"), py::arg("kernel"), py::arg("sigma"), py::arg("lambda_reg"),
        py::arg("ridge_eps") = 0.0, py::arg("seed") = 7);

    m.def(
        "make_illposed_dense",
        [](std::size_t dim_obs, std::size_t dim_param, double condition, double sigma,
           double lambda_reg, std::uint64_t seed) {
            BuiltModel b;
            b.target = make_illposed_dense(dim_obs, dim_param, condition, sigma,
                                           lambda_reg, seed);
            b.theta0 = RealField(b.target.problem.B.domain_shape());
            return b;
        },
        py::arg("dim_obs"), py::arg("dim_param"), py::arg("condition"), py::arg("sigma"),
        py::arg("lambda_reg"), py::arg("seed") = 7);

    m.def("phantom", [](std::size_t h, std::size_t w) {
        return to_array(make_phantom({h, w}));
    });
    m.def("motion_kernel",
          [](std::size_t len) { return to_array(make_motion_kernel(len)); });

    m.def(
        "soft_threshold",
        [](const py::array_t<double>& x, double t) {
            return to_array(soft_threshold(from_array(x), t));
        },
        py::arg("x"), py::arg("t"));

    m.def(
        "prox_energy",
        [](const BuiltModel& b, const py::array_t<double>& theta, double rho, int K,
           double exact_tol, int max_inner) {
            MoreauConfig cfg;
            cfg.rho = rho;
            cfg.exact_tol = exact_tol;
            cfg.max_inner = max_inner;
            RealField th = from_array(theta);
            RealField p = K > 0 ? prox_energy(th, b.target, cfg, ProxMode::ksteps, K)
                                : prox_energy(th, b.target, cfg, ProxMode::exact);
            return to_array(p);
        },
        py::arg("model"), py::arg("theta"), py::arg("rho"), py::arg("K") = 0,
        py::arg("exact_tol") = 1e-10, py::arg("max_inner") = 500,
        "K > 0 runs exactly K PDFP iterations; K = 0 solves to exact_tol");

    m.def(
        "run_chain",
        [](const BuiltModel& b, const std::string& sampler, double delta, double rho,
           int K, double gamma, double lambda, long n, long burn_in, long thin,
           std::uint64_t seed, bool store_samples) {
            SamplerConfig cfg = config_from_kwargs(delta, rho, K, gamma, lambda, n,
                                                   burn_in, thin, seed, store_samples);
            SamplerKind kind = sampler_from_name(sampler);
            StepKernel kernel = make_kernel(kind, b.target, cfg);
            ChainOutput out = run_chain(b.theta0, kernel, cfg);

            py::dict r;
            r["mean"] = to_array(out.mean);
            r["variance"] = to_array(out.variance);
            r["acceptance_rate"] = out.acceptance_rate;
            r["esjd"] = out.esjd;
            r["n_samples"] = out.n_samples;
            if (store_samples) {
                py::array_t<double> samples(
                    {static_cast<std::size_t>(out.samples.size()),
                     out.samples.empty() ? std::size_t(0) : out.samples[0].size()});
                for (std::size_t i = 0; i < out.samples.size(); ++i)
                    std::copy(out.samples[i].data(),
                              out.samples[i].data() + out.samples[i].size(),
                              samples.mutable_data() + i * out.samples[i].size());
                r["samples"] = samples;
            }
            return r;
        },
        py::arg("model"), py::arg("sampler"), py::arg("delta"), py::arg("rho") = 0.0,
        py::arg("K") = 1, py::arg("gamma") = 0.0, py::arg("lambda") = 0.0,
        py::arg("N") = 1000, py::arg("burn_in") = 0, py::arg("thin") = 1,
        py::arg("seed") = 0, py::arg("store_samples") = true);

    m.def(
        "tune_step_size",
        [](const BuiltModel& b, double delta_lo, double delta_hi, int K,
           std::uint64_t seed, int max_probes, long probe_steps) {
            SamplerConfig base;
            base.K = K;
            base.seed = seed;
            TuneResult res = tune_step_size(b.target, b.theta0, base, delta_lo, delta_hi,
                                            0.40, 0.60, max_probes, probe_steps);
            py::dict r;
            r["delta"] = res.delta;
            r["acceptance"] = res.acceptance;
            r["probes"] = res.probes;
            r["ok"] = res.ok;
            return r;
        },
        py::arg("model"), py::arg("delta_lo"), py::arg("delta_hi"), py::arg("K") = 1,
        py::arg("seed") = 0, py::arg("max_probes") = 8, py::arg("probe_steps") = 2000);

    m.def(
        "psnr",
        [](const py::array_t<double>& reference, const py::array_t<double>& estimate,
           double peak) { return psnr(from_array(reference), from_array(estimate), peak); },
        py::arg("reference"), py::arg("estimate"), py::arg("peak") = 1.0);

    m.def("ess", [](const std::vector<double>& series) {
        EssResult r = ess(series);
        py::dict d;
        d["value"] = r.value;
        d["tau"] = r.tau;
        d["clamped"] = r.clamped;
        return d;
    });

    m.def("esjd", [](const std::vector<double>& series) {
        return esjd(std::span<const double>(series));
    });

    m.def(
        "ks_distance",
        [](const std::vector<double>& samples, const BuiltModel& b) {
            if (!b.toy)
                throw std::invalid_argument("ks_distance: only toy models carry a CDF");
            return ks_distance(samples, b.toy->cdf);
        },
        py::arg("samples"), py::arg("model"));

    m.def(
        "power_iteration",
        [](const py::array_t<double>& matrix, int max_iters, double tol) {
            SpectralEstimate est =
                power_iteration(make_dense_map(from_array(matrix)), max_iters, tol);
            py::dict d;
            d["value"] = est.value;
            d["converged"] = est.converged;
            d["iterations"] = est.iterations;
            return d;
        },
        py::arg("matrix"), py::arg("max_iters") = 200, py::arg("tol") = 1e-8);

    m.def("moreau_strong_convexity", &moreau_strong_convexity, py::arg("m"),
          py::arg("rho"));

    m.def(
        "contraction_rate_eta",
        [](double m, double rho, double M2, double gamma, double lambda,
           double rho_min_BBt) {
            ContractionRate r = contraction_rate_eta(m, rho, M2, gamma, lambda, rho_min_BBt);
            py::dict d;
            d["eta"] = r.eta;
            d["hypotheses_ok"] = r.hypotheses_ok;
            return d;
        },
        py::arg("m"), py::arg("rho"), py::arg("M2"), py::arg("gamma"), py::arg("lambda"),
        py::arg("rho_min_BBt"));

    auto bind_bound = [&m](const char* name, double (*fn)(const TheoryInputs&)) {
        m.def(
            name,
            [fn](double mm, double M2, double rho, double delta, double gamma,
                 double lambda, int K, double C, double d, double l, double rho_min_BBt,
                 double initial_gap) {
                return fn(inputs_from_kwargs(mm, M2, rho, delta, gamma, lambda, K, C, d,
                                             l, rho_min_BBt, initial_gap));
            },
            py::arg("m"), py::arg("M2"), py::arg("rho"), py::arg("delta"),
            py::arg("gamma"), py::arg("lambda"), py::arg("K"), py::arg("C"),
            py::arg("d"), py::arg("l"), py::arg("rho_min_BBt"),
            py::arg("initial_gap"));
    };
    bind_bound("kl_bound", &kl_bound);
    bind_bound("tv_bound", &tv_bound);

    m.def(
        "expectation_bound",
        [](double mm, double M2, double rho, double delta, double gamma, double lambda,
           int K, double C, double d, double l, double rho_min_BBt, double initial_gap,
           long n) {
            return expectation_bound(
                inputs_from_kwargs(mm, M2, rho, delta, gamma, lambda, K, C, d, l,
                                   rho_min_BBt, initial_gap),
                n);
        },
        py::arg("m"), py::arg("M2"), py::arg("rho"), py::arg("delta"), py::arg("gamma"),
        py::arg("lambda"), py::arg("K"), py::arg("C"), py::arg("d"), py::arg("l"),
        py::arg("rho_min_BBt"), py::arg("initial_gap"), py::arg("n"));
}
