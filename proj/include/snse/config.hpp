// config.hpp
// Flat sectioned key-value run configuration ("section.key = value"), its
// validating parser, the canonical serializer, and factories that turn a
// parsed config into basis / noise / initial data objects.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snse/harness.hpp"
#include "snse/rates.hpp"

namespace snse {

enum class ExperimentKind { Simulate, Diverge, Converge, Tails, Bounds };

ExperimentKind experiment_from_name(const std::string& name);
const char* experiment_name(ExperimentKind kind);

struct RunConfig {
    ExperimentKind kind = ExperimentKind::Simulate;

    Domain domain = Domain::Torus;
    int dim = 1;
    int modes = 64;

    NoiseType noise_type = NoiseType::Multiplicative;
    bool noise_real = true;
    double decay_r = 2.0;
    double amp = 1.0;
    int cutoff = 0;  // 0: defaults to scheme.M

    SchemeConfig scheme;

    double T = 1.0;
    int paths = 1;
    uint64_t seed = 1;
    int64_t stride = 1;

    std::string init_kind = "smooth";  // smooth | mode
    double init_scale = 1.0;
    int init_mode = 0;       // rank of the excited mode (init.kind = mode)
    double init_decay = 2.0; // coefficient decay (1+lambda)^-decay (smooth)

    ConvergeSpec converge;

    TailQuantity tails_quantity = TailQuantity::SupH1;
    std::vector<double> thresholds;

    std::vector<int64_t> N_list;

    TailType bounds_tail = TailType::Poly;
    std::vector<double> bounds_epsilons;
    GronwallParams gronwall;

    // advisory, filled by parse_config
    double cfl_advisory = 0.0;
    bool cfl_violated = false;
};

// Parses and validates; throws ConfigError naming the offending key and line.
RunConfig parse_config(const std::string& text);

// Canonical serialization; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& cfg);

SpectralBasis make_basis(const RunConfig& cfg);
NoiseModel make_noise(const RunConfig& cfg, const SpectralBasis& basis);
Field make_initial(const RunConfig& cfg, const SpectralBasis& basis);

}  // namespace snse
