// config.cpp

#include "snse/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace snse {

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "simulate") return ExperimentKind::Simulate;
    if (name == "diverge") return ExperimentKind::Diverge;
    if (name == "converge") return ExperimentKind::Converge;
    if (name == "tails") return ExperimentKind::Tails;
    if (name == "bounds") return ExperimentKind::Bounds;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::Diverge: return "diverge";
        case ExperimentKind::Converge: return "converge";
        case ExperimentKind::Tails: return "tails";
        case ExperimentKind::Bounds: return "bounds";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct KeyStore {
    struct Entry {
        std::string value;
        int line;
        bool consumed = false;
    };
    std::map<std::string, Entry> entries;

    [[noreturn]] void fail(const std::string& key, int line, const std::string& msg) const {
        throw ConfigError("config error at line " + std::to_string(line) + ": " + msg +
                          " (key '" + key + "')");
    }

    bool has(const std::string& key) { return entries.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        it->second.consumed = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        it->second.consumed = true;
        const std::string& v = it->second.value;
        if (v == "inf") return std::numeric_limits<double>::infinity();
        try {
            size_t pos = 0;
            double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            fail(key, it->second.line, "expected a number, got '" + v + "'");
        }
    }

    int64_t get_int(const std::string& key, int64_t fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        it->second.consumed = true;
        try {
            size_t pos = 0;
            int64_t out = std::stoll(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            fail(key, it->second.line, "expected an integer, got '" + it->second.value + "'");
        }
    }

    uint64_t get_uint(const std::string& key, uint64_t fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        it->second.consumed = true;
        try {
            size_t pos = 0;
            uint64_t out = std::stoull(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            fail(key, it->second.line,
                 "expected an unsigned integer, got '" + it->second.value + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        it->second.consumed = true;
        if (it->second.value == "true") return true;
        if (it->second.value == "false") return false;
        fail(key, it->second.line, "expected true or false");
    }

    int line_of(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    }

    void check(bool ok, const std::string& key, const std::string& msg) const {
        if (!ok)
            throw ConfigError("config error at line " + std::to_string(line_of(key)) +
                              ": " + msg + " (key '" + key + "')");
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    KeyStore store;
    std::stringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config error at line " + std::to_string(line_no) +
                              ": expected 'section.key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            if (key != "experiment")
                throw ConfigError("config error at line " + std::to_string(line_no) +
                                  ": keys use the form section.key (got '" + key + "')");
        if (store.entries.count(key))
            throw ConfigError("config error at line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        store.entries[key] = {value, line_no, false};
    }

    RunConfig cfg;
    cfg.kind = experiment_from_name(store.get_string("experiment", "simulate"));

    std::string domain = store.get_string("basis.domain", "torus");
    store.check(domain == "sine" || domain == "torus", "basis.domain",
                "basis.domain must be sine or torus");
    cfg.domain = domain == "sine" ? Domain::Sine : Domain::Torus;
    cfg.dim = int(store.get_int("basis.dim", 1));
    store.check(cfg.dim == 1 || cfg.dim == 2, "basis.dim", "basis.dim must be 1 or 2");
    store.check(!(cfg.domain == Domain::Sine && cfg.dim == 2), "basis.dim",
                "dimension 2 requires the torus");
    cfg.modes = int(store.get_int("basis.modes", 64));
    store.check(cfg.modes >= 2 && (cfg.modes & (cfg.modes - 1)) == 0, "basis.modes",
                "basis.modes must be a power of two >= 2");

    std::string ntype = store.get_string("noise.type", "multiplicative");
    store.check(ntype == "additive" || ntype == "multiplicative", "noise.type",
                "noise.type must be additive or multiplicative");
    cfg.noise_type = ntype == "additive" ? NoiseType::Additive : NoiseType::Multiplicative;
    cfg.noise_real = store.get_bool("noise.real", true);
    store.check(!(cfg.noise_type == NoiseType::Multiplicative && !cfg.noise_real),
                "noise.real", "multiplicative noise requires a real-valued W");
    cfg.decay_r = store.get_double("noise.decay_r", 2.0);
    cfg.amp = store.get_double("noise.amp", 1.0);
    store.check(cfg.amp >= 0.0, "noise.amp", "noise.amp must be nonnegative");
    cfg.cutoff = int(store.get_int("noise.cutoff", 0));
    store.check(cfg.cutoff >= 0, "noise.cutoff", "noise.cutoff must be nonnegative");

    int n_modes_total = cfg.dim == 2 ? cfg.modes * cfg.modes : cfg.modes;
    cfg.scheme.id = scheme_from_name(store.get_string("scheme.id", "lie-trotter"));
    cfg.scheme.sigma = int(store.get_int("scheme.sigma", 1));
    store.check(cfg.scheme.sigma >= 1, "scheme.sigma", "sigma must be a positive integer");
    cfg.scheme.lambda = int(store.get_int("scheme.lambda", -1));
    store.check(cfg.scheme.lambda == 1 || cfg.scheme.lambda == -1, "scheme.lambda",
                "lambda must be +1 or -1");
    cfg.scheme.dt = store.get_double("scheme.dt", 1e-3);
    store.check(cfg.scheme.dt > 0.0, "scheme.dt", "dt must be positive");
    cfg.scheme.M = int(store.get_int("scheme.M", n_modes_total));
    store.check(cfg.scheme.M >= 1 && cfg.scheme.M <= n_modes_total, "scheme.M",
                "M must lie in [1, total mode count]");
    cfg.scheme.R = store.get_double("scheme.R", std::numeric_limits<double>::infinity());
    store.check(cfg.scheme.R > 0.0, "scheme.R", "R must be positive");
    cfg.scheme.kappa = store.get_double("scheme.kappa", 0.0);
    store.check(cfg.scheme.kappa >= 0.0, "scheme.kappa", "kappa must be nonnegative");
    cfg.scheme.kappa1 = store.get_double("scheme.kappa1", 0.5 * cfg.dim + 0.5);
    store.check(cfg.scheme.kappa1 > 0.5 * cfg.dim, "scheme.kappa1",
                "kappa1 must exceed d/2");
    cfg.scheme.damping_factor = store.get_double("scheme.damping_factor", 0.5);
    store.check(cfg.scheme.damping_factor == 0.5 || cfg.scheme.damping_factor == 1.0,
                "scheme.damping_factor", "damping_factor must be 0.5 or 1.0");
    cfg.scheme.dealias = store.get_bool("scheme.dealias", true);

    cfg.T = store.get_double("run.T", 1.0);
    store.check(cfg.T > 0.0, "run.T", "T must be positive");
    cfg.scheme.T = cfg.T;
    cfg.paths = int(store.get_int("run.paths", 1));
    store.check(cfg.paths >= 1, "run.paths", "paths must be >= 1");
    cfg.seed = store.get_uint("run.seed", 1);
    cfg.stride = store.get_int("run.stride", 1);
    store.check(cfg.stride >= 1, "run.stride", "stride must be >= 1");

    double steps = cfg.T / cfg.scheme.dt;
    store.check(std::abs(steps - std::llround(steps)) <= 1e-9 * std::max(1.0, steps) &&
                    std::llround(steps) >= 1,
                "scheme.dt", "T/dt must be a positive integer");

    cfg.init_kind = store.get_string("init.kind", "smooth");
    store.check(cfg.init_kind == "smooth" || cfg.init_kind == "mode", "init.kind",
                "init.kind must be smooth or mode");
    cfg.init_scale = store.get_double("init.scale", 1.0);
    cfg.init_mode = int(store.get_int("init.mode", 0));
    store.check(cfg.init_mode >= 0 && cfg.init_mode < n_modes_total, "init.mode",
                "init.mode must be a valid mode rank");
    cfg.init_decay = store.get_double("init.decay", 2.0);

    if (store.has("converge.levels") || cfg.kind == ExperimentKind::Converge) {
        std::string raw_levels = store.get_string("converge.levels", "");
        store.check(!raw_levels.empty(), "converge.levels",
                    "converge runs need converge.levels (dt:M pairs)");
        for (const auto& item : split_list(raw_levels)) {
            size_t colon = item.find(':');
            store.check(colon != std::string::npos, "converge.levels",
                        "levels are dt:M pairs");
            try {
                double dt = std::stod(item.substr(0, colon));
                int M = std::stoi(item.substr(colon + 1));
                cfg.converge.levels.emplace_back(dt, M);
            } catch (const std::exception&) {
                store.check(false, "converge.levels", "levels are dt:M pairs");
            }
        }
        cfg.converge.ref_dt = store.get_double("converge.ref_dt", 0.0);
        store.check(cfg.converge.ref_dt > 0.0, "converge.ref_dt",
                    "converge runs need a positive converge.ref_dt");
        cfg.converge.ref_M = int(store.get_int("converge.ref_M", 0));
        store.check(cfg.converge.ref_M >= 1 && cfg.converge.ref_M <= n_modes_total,
                    "converge.ref_M", "converge.ref_M must lie in [1, total mode count]");
    }

    cfg.tails_quantity =
        tail_quantity_from_name(store.get_string("tails.quantity", "sup-H1"));
    for (const auto& item : split_list(store.get_string("tails.thresholds", ""))) {
        try {
            cfg.thresholds.push_back(std::stod(item));
        } catch (const std::exception&) {
            store.check(false, "tails.thresholds", "thresholds are comma-separated numbers");
        }
    }
    if (cfg.kind == ExperimentKind::Tails)
        store.check(!cfg.thresholds.empty(), "tails.thresholds",
                    "tails runs need tails.thresholds");

    for (const auto& item : split_list(store.get_string("diverge.N_list", ""))) {
        try {
            cfg.N_list.push_back(std::stoll(item));
        } catch (const std::exception&) {
            store.check(false, "diverge.N_list", "N_list is a comma-separated integer list");
        }
    }
    if (cfg.kind == ExperimentKind::Diverge) {
        store.check(!cfg.N_list.empty(), "diverge.N_list", "diverge runs need diverge.N_list");
        bool classical = cfg.scheme.id == SchemeId::ExpEuler ||
                         cfg.scheme.id == SchemeId::SemiMidpoint ||
                         cfg.scheme.id == SchemeId::SemiEuler;
        store.check(classical, "scheme.id",
                    "diverge requires a classical explicit scheme "
                    "(exp-euler, semi-midpoint, semi-euler)");
    }

    cfg.bounds_tail = tail_type_from_name(store.get_string("bounds.tail_type", "poly"));
    for (const auto& item : split_list(store.get_string("bounds.epsilons", ""))) {
        try {
            cfg.bounds_epsilons.push_back(std::stod(item));
        } catch (const std::exception&) {
            store.check(false, "bounds.epsilons", "epsilons are comma-separated numbers");
        }
    }
    if (cfg.kind == ExperimentKind::Bounds)
        store.check(!cfg.bounds_epsilons.empty(), "bounds.epsilons",
                    "bounds runs need bounds.epsilons");
    cfg.gronwall.C = store.get_double("bounds.C", 1.0);
    cfg.gronwall.C1 = store.get_double("bounds.C1", 1.0);
    cfg.gronwall.C_T = store.get_double("bounds.CT", 1.0);
    cfg.gronwall.Cprime = store.get_double("bounds.Cprime", 0.0);
    cfg.gronwall.p = store.get_double("bounds.p", 1.0);
    cfg.gronwall.l = store.get_double("bounds.l", 2.0);
    cfg.gronwall.p1 = store.get_double("bounds.p1", 1.0);
    cfg.gronwall.sigma1 = store.get_double("bounds.sigma1", 1.0);
    cfg.gronwall.sigma2 = store.get_double("bounds.sigma2", 1.0);
    cfg.gronwall.eta = store.get_double("bounds.eta", 1.0);
    cfg.gronwall.kappa = store.get_double("bounds.kappa", 2.0);
    cfg.gronwall.gamma1 = store.get_double("bounds.gamma1", 0.5);
    if (cfg.kind == ExperimentKind::Bounds) {
        try {
            cfg.gronwall.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("config error: " + std::string(e.what()) + " (section 'bounds')");
        }
    }

    for (const auto& [key, entry] : store.entries)
        if (!entry.consumed)
            throw ConfigError("config error at line " + std::to_string(entry.line) +
                              ": unknown key '" + key + "'");

    // CFL advisory for the configured (M, sigma, kappa1)
    {
        SpectralBasis basis(cfg.domain, cfg.dim, cfg.modes);
        cfg.cfl_advisory =
            cfl_max_dt(basis, cfg.scheme.M, cfg.scheme.sigma, cfg.scheme.kappa1);
        cfg.cfl_violated = cfg.scheme.dt > cfg.cfl_advisory;
        cfg.scheme.validate(basis);
    }
    return cfg;
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    kv("experiment", experiment_name(cfg.kind));
    kv("basis.domain", cfg.domain == Domain::Sine ? "sine" : "torus");
    kv("basis.dim", std::to_string(cfg.dim));
    kv("basis.modes", std::to_string(cfg.modes));
    kv("noise.type", cfg.noise_type == NoiseType::Additive ? "additive" : "multiplicative");
    kv("noise.real", cfg.noise_real ? "true" : "false");
    kv("noise.decay_r", fmt_double(cfg.decay_r));
    kv("noise.amp", fmt_double(cfg.amp));
    kv("noise.cutoff", std::to_string(cfg.cutoff));
    kv("scheme.id", scheme_name(cfg.scheme.id));
    kv("scheme.sigma", std::to_string(cfg.scheme.sigma));
    kv("scheme.lambda", std::to_string(cfg.scheme.lambda));
    kv("scheme.dt", fmt_double(cfg.scheme.dt));
    kv("scheme.M", std::to_string(cfg.scheme.M));
    kv("scheme.R", fmt_double(cfg.scheme.R));
    kv("scheme.kappa", fmt_double(cfg.scheme.kappa));
    kv("scheme.kappa1", fmt_double(cfg.scheme.kappa1));
    kv("scheme.damping_factor", fmt_double(cfg.scheme.damping_factor));
    kv("scheme.dealias", cfg.scheme.dealias ? "true" : "false");
    kv("run.T", fmt_double(cfg.T));
    kv("run.paths", std::to_string(cfg.paths));
    kv("run.seed", std::to_string(cfg.seed));
    kv("run.stride", std::to_string(cfg.stride));
    kv("init.kind", cfg.init_kind);
    kv("init.scale", fmt_double(cfg.init_scale));
    kv("init.mode", std::to_string(cfg.init_mode));
    kv("init.decay", fmt_double(cfg.init_decay));
    if (!cfg.converge.levels.empty()) {
        std::string levels;
        for (size_t i = 0; i < cfg.converge.levels.size(); ++i) {
            if (i) levels += ",";
            levels += fmt_double(cfg.converge.levels[i].first) + ":" +
                      std::to_string(cfg.converge.levels[i].second);
        }
        kv("converge.levels", levels);
        kv("converge.ref_dt", fmt_double(cfg.converge.ref_dt));
        kv("converge.ref_M", std::to_string(cfg.converge.ref_M));
    }
    kv("tails.quantity", tail_quantity_name(cfg.tails_quantity));
    if (!cfg.thresholds.empty()) {
        std::string ts;
        for (size_t i = 0; i < cfg.thresholds.size(); ++i) {
            if (i) ts += ",";
            ts += fmt_double(cfg.thresholds[i]);
        }
        kv("tails.thresholds", ts);
    }
    if (!cfg.N_list.empty()) {
        std::string ns;
        for (size_t i = 0; i < cfg.N_list.size(); ++i) {
            if (i) ns += ",";
            ns += std::to_string(cfg.N_list[i]);
        }
        kv("diverge.N_list", ns);
    }
    kv("bounds.tail_type", tail_type_name(cfg.bounds_tail));
    if (!cfg.bounds_epsilons.empty()) {
        std::string es;
        for (size_t i = 0; i < cfg.bounds_epsilons.size(); ++i) {
            if (i) es += ",";
            es += fmt_double(cfg.bounds_epsilons[i]);
        }
        kv("bounds.epsilons", es);
    }
    kv("bounds.C", fmt_double(cfg.gronwall.C));
    kv("bounds.C1", fmt_double(cfg.gronwall.C1));
    kv("bounds.CT", fmt_double(cfg.gronwall.C_T));
    kv("bounds.Cprime", fmt_double(cfg.gronwall.Cprime));
    kv("bounds.p", fmt_double(cfg.gronwall.p));
    kv("bounds.l", fmt_double(cfg.gronwall.l));
    kv("bounds.p1", fmt_double(cfg.gronwall.p1));
    kv("bounds.sigma1", fmt_double(cfg.gronwall.sigma1));
    kv("bounds.sigma2", fmt_double(cfg.gronwall.sigma2));
    kv("bounds.eta", fmt_double(cfg.gronwall.eta));
    kv("bounds.kappa", fmt_double(cfg.gronwall.kappa));
    kv("bounds.gamma1", fmt_double(cfg.gronwall.gamma1));
    return out.str();
}

SpectralBasis make_basis(const RunConfig& cfg) {
    return SpectralBasis(cfg.domain, cfg.dim, cfg.modes);
}

NoiseModel make_noise(const RunConfig& cfg, const SpectralBasis& basis) {
    int cutoff = cfg.cutoff > 0 ? cfg.cutoff : cfg.scheme.M;
    return build_noise(basis, cfg.decay_r, cfg.amp, cfg.noise_type, cfg.noise_real, cutoff);
}

Field make_initial(const RunConfig& cfg, const SpectralBasis& basis) {
    Field psi(basis);
    const auto& sorted = basis.sorted_modes();
    if (cfg.init_kind == "mode") {
        psi.coeffs()[sorted[cfg.init_mode]] = cfg.init_scale;
    } else {
        for (int r = 0; r < basis.n_modes(); ++r) {
            double lam = basis.eigenvalue(sorted[r]);
            psi.coeffs()[sorted[r]] = cfg.init_scale * std::pow(1.0 + lam, -cfg.init_decay);
        }
    }
    return psi;
}

}  // namespace snse
