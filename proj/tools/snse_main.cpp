// snse_main.cpp
// Command line driver: simulate | diverge | converge | tails | bounds.
// Exit codes: 0 success, 2 config error, 3 divergence-aborted convergence
// run, 4 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "snse/config.hpp"
#include "snse/csv.hpp"

namespace {

using namespace snse;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

struct Cli {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
};

int run_experiment(ExperimentKind kind, const Cli& cli) {
    RunConfig cfg = parse_config(read_file(cli.config_path));
    if (cfg.kind != kind)
        throw ConfigError(std::string("config declares experiment '") +
                          experiment_name(cfg.kind) + "' but the subcommand is '" +
                          experiment_name(kind) + "'");

    if (kind == ExperimentKind::Bounds) {
        std::vector<BoundRow> rows;
        for (double eps : cfg.bounds_epsilons) {
            GronwallParams prm = cfg.gronwall;
            prm.epsilon_N = eps;
            try {
                rows.push_back({cfg.bounds_tail, eps, bound_rate(prm, cfg.bounds_tail)});
            } catch (const std::domain_error& e) {
                throw ConfigError("bounds: " + std::string(e.what()) +
                                  " (epsilon_N = " + format_double(eps) + ")");
            }
        }
        write_bounds_csv(join_path(cli.out_dir, "bounds.csv"), rows);
        return 0;
    }

    SpectralBasis basis = make_basis(cfg);
    NoiseModel model = make_noise(cfg, basis);
    Field psi = make_initial(cfg, basis);

    if (cfg.cfl_violated)
        std::cerr << "warning: dt = " << format_double(cfg.scheme.dt)
                  << " exceeds the CFL advisory " << format_double(cfg.cfl_advisory)
                  << " (lambda_M^-(2+2*kappa1*sigma))\n";
    TraceReport trace = trace_check(model, 1.0);
    if (trace.warning)
        std::cerr << "warning: covariance trace in H^1 looks slowly convergent "
                     "(last decade of modes carries "
                  << format_double(trace.last_decade_fraction) << " of the sum)\n";

    switch (kind) {
        case ExperimentKind::Simulate: {
            std::vector<PathRecord> records(cfg.paths);
            int64_t n_steps = cfg.scheme.n_steps();
            parallel_for_indexed(cfg.paths, cli.threads, [&](int64_t p) {
                IncrementPlan plan{cfg.seed, uint32_t(p), n_steps, cfg.T};
                records[p] = simulate_path(model, cfg.scheme, psi, plan, 0, cfg.stride);
            });
            write_diagnostics_csv(join_path(cli.out_dir, "diagnostics.csv"), records);
            return 0;
        }
        case ExperimentKind::Diverge: {
            DivergenceReport report = divergence_demo(model, cfg.scheme, psi, cfg.N_list,
                                                      cfg.paths, cfg.seed, cli.threads);
            write_diverge_csv(join_path(cli.out_dir, "diverge.csv"), report);
            SchemeConfig control = cfg.scheme;
            control.id = SchemeId::LieTrotter;
            DivergenceReport control_report = divergence_demo(
                model, control, psi, cfg.N_list, cfg.paths, cfg.seed, cli.threads);
            write_diverge_csv(join_path(cli.out_dir, "diverge_control.csv"), control_report);
            return 0;
        }
        case ExperimentKind::Converge: {
            ErrorTable table = estimate_strong_error(model, cfg.scheme, cfg.converge, psi,
                                                     cfg.paths, cfg.seed, cli.threads);
            write_converge_csv(join_path(cli.out_dir, "converge.csv"), table);
            return 0;
        }
        case ExperimentKind::Tails: {
            auto sups = collect_suprema(model, cfg.scheme, psi, cfg.tails_quantity,
                                        cfg.paths, cfg.seed, cli.threads);
            TailCurve curve =
                estimate_tail(sups, cfg.tails_quantity, cfg.dim, cfg.thresholds);
            write_tails_csv(join_path(cli.out_dir, "tails.csv"), curve);
            return 0;
        }
        default: break;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-Galerkin simulation lab for stochastic NLS equations"};
    app.require_subcommand(1);

    Cli cli;
    ExperimentKind kind = ExperimentKind::Simulate;
    for (auto [name, k] : {std::pair<const char*, ExperimentKind>{"simulate", ExperimentKind::Simulate},
                           {"diverge", ExperimentKind::Diverge},
                           {"converge", ExperimentKind::Converge},
                           {"tails", ExperimentKind::Tails},
                           {"bounds", ExperimentKind::Bounds}}) {
        auto* sub = app.add_subcommand(name, std::string(name) + " experiment");
        sub->add_option("config", cli.config_path, "run configuration file")->required();
        sub->add_option("--threads", cli.threads, "worker count (never changes output bytes)");
        sub->add_option("--out", cli.out_dir, "output directory");
        ExperimentKind captured = k;
        sub->callback([&kind, captured]() { kind = captured; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run_experiment(kind, cli);
    } catch (const snse::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const snse::DivergenceAborted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const snse::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
