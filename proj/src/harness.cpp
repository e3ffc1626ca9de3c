#include "pdla/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "pdla/config.hpp"
#include "pdla/diagnostics.hpp"
#include "pdla/pgm.hpp"
#include "pdla/verify.hpp"

namespace pdla {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* kCsvHeader =
    "sampler,K,delta,rho,gamma,lambda,N,burn_in,thin,seed,n_samples,"
    "acceptance_rate,psnr_mean,psnr_observation,esjd,ess_min,ess_mean,"
    "ess_median,ks\n";

struct CellResult {
    std::string sampler;
    int K = 0;
    SamplerConfig cfg;
    double gamma_eff = 0.0, lambda_eff = 0.0;
    ChainOutput out;
    double psnr_mean = -1.0, psnr_obs = -1.0;  // < 0 means not applicable
    double ks = -1.0;
    double ess_min = -1.0, ess_mean = -1.0, ess_median = -1.0;
    double wall_seconds = 0.0;
};

void fill_ess(CellResult& cell) {
    std::vector<double> values;
    for (const auto& trace : cell.out.traces) {
        if (trace.size() < 10) continue;
        try {
            values.push_back(ess(trace).value);
        } catch (const std::domain_error&) {
            // zero-variance coordinate (e.g. a never-moving chain); skip
        }
    }
    if (values.empty()) return;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    cell.ess_min = values.front();
    cell.ess_mean = sum / static_cast<double>(values.size());
    cell.ess_median = values[values.size() / 2];
}

std::string csv_row(const CellResult& c) {
    auto opt = [](double v) { return v < 0.0 ? std::string() : fmt(v); };
    std::string row;
    row += c.sampler + ",";
    row += std::to_string(c.K) + ",";
    row += fmt(c.cfg.delta) + "," + fmt(c.cfg.rho) + ",";
    row += opt(c.gamma_eff) + "," + opt(c.lambda_eff) + ",";
    row += std::to_string(c.cfg.N) + "," + std::to_string(c.cfg.burn_in) + ",";
    row += std::to_string(c.cfg.thin) + "," + std::to_string(c.cfg.seed) + ",";
    row += std::to_string(c.out.n_samples) + ",";
    row += fmt(c.out.acceptance_rate) + ",";
    row += opt(c.psnr_mean) + "," + opt(c.psnr_obs) + ",";
    row += fmt(c.out.esjd) + ",";
    row += opt(c.ess_min) + "," + opt(c.ess_mean) + "," + opt(c.ess_median) + ",";
    row += opt(c.ks) + "\n";
    return row;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

CellResult run_cell(const BuiltModel& built, SamplerKind kind,
                    const SamplerConfig& cfg, int K, bool want_energy_trace,
                    std::uint64_t stream) {
    CellResult cell;
    cell.sampler = sampler_name(kind);
    cell.K = K;
    cell.cfg = cfg;

    const bool image_model = built.target.problem.B.domain_shape().is_2d();
    SamplerConfig run_cfg = cfg;
    run_cfg.store_samples = !image_model;  // keep memory flat on image chains
    run_cfg.track_coords = image_model ? 64 : 1;

    if (kind != SamplerKind::ula && kind != SamplerKind::mala) {
        MoreauConfig m = run_cfg.moreau();
        PdfpParams p = resolve_inner_params(built.target.problem, m);
        cell.gamma_eff = p.gamma;
        cell.lambda_eff = p.lambda;
    }

    StepKernel kernel = make_kernel(kind, built.target, run_cfg);
    std::function<double(const RealField&)> energy_fn;
    if (want_energy_trace) energy_fn = built.target.energy;

    const auto t0 = std::chrono::steady_clock::now();
    cell.out = run_chain(built.theta0, kernel, run_cfg, stream, energy_fn);
    cell.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (built.truth) {
        cell.psnr_mean = psnr(*built.truth, cell.out.mean);
        if (built.observation &&
            built.observation->shape() == built.truth->shape())
            cell.psnr_obs = psnr(*built.truth, *built.observation);
    }
    if (built.toy && !cell.out.traces.empty() && !cell.out.traces[0].empty())
        cell.ks = ks_distance(cell.out.traces[0], built.toy->cdf);
    fill_ess(cell);
    return cell;
}

ExperimentConfig load_config(const std::string& path, const HarnessOptions& opts) {
    ExperimentConfig cfg = parse_config_file(path);
    if (opts.seed_override) cfg.sampler.seed = *opts.seed_override;
    if (opts.out_dir_override) cfg.output.dir = *opts.out_dir_override;
    return cfg;
}

}  // namespace

int cmd_sample(const std::string& config_path, const HarnessOptions& opts) {
    ExperimentConfig cfg;
    BuiltModel built;
    SamplerKind kind;
    SamplerConfig scfg;
    try {
        cfg = load_config(config_path, opts);
        if (cfg.sampler.kinds.size() != 1)
            throw std::invalid_argument("sample: exactly one sampler kind expected");
        kind = sampler_from_name(cfg.sampler.kinds[0]);
        scfg = to_sampler_config(cfg.sampler, cfg.sampler.k_list[0]);
        built = build_model(cfg.model);
        validate_sampler_config(kind, built.target, scfg);
    } catch (const std::exception& e) {
        std::cerr << "sample: invalid configuration: " << e.what() << "\n";
        return 2;
    }

    try {
        fs::create_directories(cfg.output.dir);
        CellResult cell = run_cell(built, kind, scfg, cfg.sampler.k_list[0],
                                   cfg.output.traces, /*stream=*/0);

        write_text_atomic(cfg.output.dir + "/diagnostics.csv",
                          std::string(kCsvHeader) + csv_row(cell));
        if (built.target.problem.B.domain_shape().is_2d()) {
            write_pgm(cell.out.mean, cfg.output.dir + "/mean.pgm");
            // variance image normalized by its peak so it fits the PGM range
            double vmax = 0.0;
            for (std::size_t i = 0; i < cell.out.variance.size(); ++i)
                vmax = std::max(vmax, cell.out.variance[i]);
            RealField scaled = cell.out.variance;
            if (vmax > 0.0)
                for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] /= vmax;
            write_pgm(scaled, cfg.output.dir + "/variance.pgm");
        }
        if (cfg.output.traces) {
            std::string trace = "n,energy\n";
            for (std::size_t i = 0; i < cell.out.energy_trace.size(); ++i)
                trace += std::to_string(i) + "," + fmt(cell.out.energy_trace[i]) + "\n";
            write_text_atomic(cfg.output.dir + "/energy_trace.csv", trace);

            // scalar traces of the tracked coordinates, one column each
            std::string scalars = "n";
            for (std::size_t c : cell.out.tracked_coords)
                scalars += ",coord_" + std::to_string(c);
            scalars += "\n";
            const std::size_t rows =
                cell.out.traces.empty() ? 0 : cell.out.traces[0].size();
            for (std::size_t i = 0; i < rows; ++i) {
                scalars += std::to_string(i);
                for (const auto& t : cell.out.traces) scalars += "," + fmt(t[i]);
                scalars += "\n";
            }
            write_text_atomic(cfg.output.dir + "/trace.csv", scalars);
        }
        std::cout << "[sample] " << cell.sampler << " K=" << cell.K
                  << " n_samples=" << cell.out.n_samples
                  << " acceptance=" << cell.out.acceptance_rate
                  << " wall_seconds=" << cell.wall_seconds << "\n";
        return 0;
    } catch (const std::runtime_error& e) {
        const std::string dump = cfg.output.dir + "/failure_state.txt";
        std::error_code ec;
        fs::create_directories(cfg.output.dir, ec);
        std::ofstream out(dump);
        out << e.what() << "\n";
        std::cerr << "sample: numerical failure: " << e.what()
                  << " (state dump: " << dump << ")\n";
        return 3;
    }
}

int cmd_verify(const std::string& suite, const HarnessOptions&) {
    std::vector<verify::CheckResult> results;
    try {
        results = verify::run_suite(suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return 2;
    }
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        std::cout << (r.passed ? "[pass] " : "[FAIL] ") << r.name;
        for (std::size_t i = r.name.size(); i < width + 2; ++i) std::cout << ' ';
        std::cout << r.detail << "\n";
    }
    const bool ok = verify::all_passed(results);
    std::cout << "verify " << suite << ": " << (ok ? "all checks passed" : "FAILURES")
              << " (" << results.size() << " checks)\n";
    return ok ? 0 : 1;
}

int cmd_experiment_deblur(const std::string& config_path, const HarnessOptions& opts) {
    ExperimentConfig cfg;
    BuiltModel built;
    std::vector<std::pair<SamplerKind, int>> cells;
    try {
        cfg = load_config(config_path, opts);
        if (cfg.model.kind != "deblur" && cfg.model.kind != "illposed")
            throw std::invalid_argument("experiment-deblur: model kind must be deblur or illposed");
        if (cfg.sampler.kinds.empty())
            throw std::invalid_argument("experiment-deblur: empty sampler list");
        built = build_model(cfg.model);
        for (const auto& name : cfg.sampler.kinds) {
            SamplerKind kind = sampler_from_name(name);
            const bool uses_k =
                kind == SamplerKind::ula_pdfp || kind == SamplerKind::mala_pdfp;
            if (uses_k)
                for (int K : cfg.sampler.k_list) cells.emplace_back(kind, K);
            else
                cells.emplace_back(kind, 0);  // exact-prox samplers ignore K
        }
        for (const auto& [kind, K] : cells)
            validate_sampler_config(kind, built.target,
                                    to_sampler_config(cfg.sampler, std::max(K, 1)));
    } catch (const std::exception& e) {
        std::cerr << "experiment-deblur: invalid configuration: " << e.what() << "\n";
        return 2;
    }

    try {
        fs::create_directories(cfg.output.dir);
        std::vector<CellResult> results(cells.size());

        // one cell per worker; cells are independent chains on a shared target
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                const auto [kind, K] = cells[i];
                results[i] = run_cell(built, kind,
                                      to_sampler_config(cfg.sampler, std::max(K, 1)),
                                      K, false, /*stream=*/i);
            }
        };
        const int nthreads = std::max(1, opts.threads);
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        std::string csv = kCsvHeader;
        for (std::size_t i = 0; i < results.size(); ++i) {
            csv += csv_row(results[i]);
            const std::string img = cfg.output.dir + "/mean_" + results[i].sampler +
                                    "_K" + std::to_string(results[i].K) + ".pgm";
            if (built.target.problem.B.domain_shape().is_2d())
                write_pgm(results[i].out.mean, img);
            // timings are hardware-dependent: reported on stdout, never in artifacts
            std::cout << "[timing] sampler=" << results[i].sampler
                      << " K=" << results[i].K
                      << " wall_seconds=" << results[i].wall_seconds << "\n";
        }
        write_text_atomic(cfg.output.dir + "/experiment.csv", csv);
        std::cout << "[experiment-deblur] " << results.size() << " cells -> "
                  << cfg.output.dir << "/experiment.csv\n";
        return 0;
    } catch (const std::runtime_error& e) {
        std::cerr << "experiment-deblur: numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace pdla
