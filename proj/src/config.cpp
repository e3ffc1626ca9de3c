#include "pdla/config.hpp"

#include <fstream>
#include <sstream>

#include "pdla/pgm.hpp"

namespace pdla {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        fail(line, key + ": expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        fail(line, key + ": expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(line, key + ": expected true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "model" && section != "sampler" && section != "output")
                fail(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) fail(lineno, "key '" + key + "' outside any section");

        if (section == "model") {
            auto& m = cfg.model;
            if (key == "kind") m.kind = value;
            else if (key == "image") m.image = value;
            else if (key == "size") m.size = static_cast<std::size_t>(to_long(value, lineno, key));
            else if (key == "kernel") m.kernel = value;
            else if (key == "sigma") m.sigma = to_double(value, lineno, key);
            else if (key == "lambda_reg") m.lambda_reg = to_double(value, lineno, key);
            else if (key == "ridge_eps") m.ridge_eps = to_double(value, lineno, key);
            else if (key == "data_seed") m.data_seed = static_cast<std::uint64_t>(to_long(value, lineno, key));
            else if (key == "dim_obs") m.dim_obs = static_cast<std::size_t>(to_long(value, lineno, key));
            else if (key == "dim_param") m.dim_param = static_cast<std::size_t>(to_long(value, lineno, key));
            else if (key == "condition") m.condition = to_double(value, lineno, key);
            else fail(lineno, "unknown [model] key '" + key + "'");
        } else if (section == "sampler") {
            auto& s = cfg.sampler;
            if (key == "kind") s.kinds = {value};
            else if (key == "samplers") s.kinds = split_list(value);
            else if (key == "K") {
                s.k_list.clear();
                for (const auto& item : split_list(value))
                    s.k_list.push_back(static_cast<int>(to_long(item, lineno, key)));
                if (s.k_list.empty()) fail(lineno, "K: empty list");
            } else if (key == "delta") s.delta = to_double(value, lineno, key);
            else if (key == "rho") s.rho = to_double(value, lineno, key);
            else if (key == "gamma") s.gamma = to_double(value, lineno, key);
            else if (key == "lambda") s.lambda = to_double(value, lineno, key);
            else if (key == "N") s.n = to_long(value, lineno, key);
            else if (key == "burn_in") s.burn_in = to_long(value, lineno, key);
            else if (key == "thin") s.thin = to_long(value, lineno, key);
            else if (key == "seed") s.seed = static_cast<std::uint64_t>(to_long(value, lineno, key));
            else if (key == "exact_tol") s.exact_tol = to_double(value, lineno, key);
            else if (key == "max_inner") s.max_inner = static_cast<int>(to_long(value, lineno, key));
            else fail(lineno, "unknown [sampler] key '" + key + "'");
        } else {
            auto& o = cfg.output;
            if (key == "dir") o.dir = value;
            else if (key == "traces") o.traces = to_bool(value, lineno, key);
            else fail(lineno, "unknown [output] key '" + key + "'");
        }
    }
    if (cfg.sampler.kinds.empty())
        throw std::invalid_argument("config: [sampler] must name at least one sampler");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

RealField parse_kernel_spec(const std::string& spec) {
    if (spec == "delta") {
        RealField k({1, 1});
        k[0] = 1.0;
        return k;
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("kernel spec '" + spec +
                                    "': expected motion:L, uniform:RxC or delta");
    const std::string head = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (head == "motion") {
        const long len = std::stol(arg);
        if (len < 1) throw std::invalid_argument("kernel spec: motion length must be >= 1");
        return make_motion_kernel(static_cast<std::size_t>(len));
    }
    if (head == "uniform") {
        const auto x = arg.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("kernel spec: uniform needs RxC, got '" + arg + "'");
        const long r = std::stol(arg.substr(0, x));
        const long c = std::stol(arg.substr(x + 1));
        if (r < 1 || c < 1) throw std::invalid_argument("kernel spec: sides must be >= 1");
        RealField k({static_cast<std::size_t>(r), static_cast<std::size_t>(c)});
        for (std::size_t i = 0; i < k.size(); ++i)
            k[i] = 1.0 / static_cast<double>(k.size());
        return k;
    }
    throw std::invalid_argument("kernel spec '" + spec + "': unknown kind '" + head + "'");
}

BuiltModel build_model(const ModelSection& model) {
    BuiltModel built;
    if (model.kind == "toy1d") {
        built.toy = make_toy_1d();
        built.target = built.toy->target;
        built.theta0 = RealField({1, 1});  // toys start at 0
        return built;
    }
    if (model.kind == "deblur") {
        RealField truth = model.image.empty()
                              ? make_phantom({model.size, model.size})
                              : read_pgm(model.image);
        RealField kernel = parse_kernel_spec(model.kernel);
        auto [dm, target] = make_deblur_model(truth, kernel, model.sigma,
                                              model.lambda_reg, model.ridge_eps,
                                              model.data_seed);
        built.target = std::move(target);
        built.truth = std::move(truth);
        built.theta0 = dm.observation;  // start at the observation
        built.observation = std::move(dm.observation);
        return built;
    }
    if (model.kind == "illposed") {
        built.target = make_illposed_dense(model.dim_obs, model.dim_param,
                                           model.condition, model.sigma,
                                           model.lambda_reg, model.data_seed);
        built.theta0 = RealField(built.target.problem.B.domain_shape());
        return built;
    }
    throw std::invalid_argument("model kind '" + model.kind +
                                "': expected deblur, illposed or toy1d");
}

SamplerConfig to_sampler_config(const SamplerSection& s, int K) {
    SamplerConfig cfg;
    cfg.delta = s.delta;
    cfg.rho = s.rho;
    cfg.K = K;
    cfg.gamma = s.gamma;
    cfg.lambda = s.lambda;
    cfg.N = s.n;
    cfg.burn_in = s.burn_in;
    cfg.thin = s.thin;
    cfg.seed = s.seed;
    cfg.exact_tol = s.exact_tol;
    cfg.max_inner = s.max_inner;
    return cfg;
}

}  // namespace pdla
