// noise.hpp
// Q-Wiener increment synthesis. Gaussian draws are counter-based (Philox),
// addressed by (seed, path, fine step, mode), so any increment can be
// regenerated independently of call order or worker count. Coarse-level
// increments are sums of the same underlying fine draws, which is what makes
// the coupled strong-error estimator exact.

#pragma once

#include <cstdint>
#include <vector>

#include "snse/spectral.hpp"

namespace snse {

// Philox 4x32-10 block cipher; returns four 32-bit words per counter.
struct Philox4x32 {
    static std::array<uint32_t, 4> block(uint64_t key, uint32_t c0, uint32_t c1,
                                         uint32_t c2, uint32_t c3);
};

// Two standard normals from one Philox block.
std::array<double, 2> gaussian_pair(uint64_t seed, uint32_t path, uint64_t step,
                                    uint32_t mode);

enum class NoiseType { Additive, Multiplicative };

// How one retained mode (in eigenvalue order) is realized as a real basis
// function on the torus. Sine modes and complex noise use Direct.
enum class PairKind : uint8_t { Direct, CosPair, SinPair };

struct NoiseEntry {
    int flat;         // coefficient slot of this mode
    int mirror;       // slot of -k (CosPair/SinPair), else -1
    PairKind kind;
    double sqrt_q;
};

struct NoiseModel {
    const SpectralBasis* basis = nullptr;
    NoiseType type = NoiseType::Additive;
    bool real_valued = true;
    int cutoff = 0;                  // number of modes carrying noise
    std::vector<double> q;           // covariance eigenvalue per rank < cutoff
    std::vector<NoiseEntry> entries; // one per rank < cutoff
    std::vector<double> alpha;       // damping field on the grid
    double alpha_sup = 0.0;

    bool multiplicative() const { return type == NoiseType::Multiplicative; }
};

// family: q_rank = amp * (1 + lambda_rank)^{-decay_r}. Explicit lists go
// through the q_list overload. Multiplicative noise must be real-valued.
NoiseModel build_noise(const SpectralBasis& basis, double decay_r, double amp,
                       NoiseType type, bool real_valued, int cutoff);
NoiseModel build_noise(const SpectralBasis& basis, const std::vector<double>& q_list,
                       NoiseType type, bool real_valued, int cutoff);

struct TraceReport {
    std::vector<double> partial_sums;  // cumulative sum of q_j (1+lambda_j)^s
    double total = 0.0;
    double last_decade_fraction = 0.0; // mass contributed by ranks > 90%
    bool warning = false;
};

// Numerical check of sum_j q_j (1+lambda_j)^s; warns when the top decade of
// modes still carries more than `tol` of the sum.
TraceReport trace_check(const NoiseModel& model, double s, double tol = 0.05);

struct IncrementPlan {
    uint64_t seed = 0;
    uint32_t path = 0;
    int64_t n_fine = 0;  // fine steps over [0, T]
    double T = 0.0;

    double dt_fine() const { return T / double(n_fine); }
};

// Increment over coarse step `step` at refinement 2^level (coarse step
// spans 2^level fine steps). level = 0 is the finest resolution.
Field sample_increment(const NoiseModel& model, const IncrementPlan& plan,
                       int64_t step, int level);

// Same underlying draws, addressed by an explicit refinement factor.
Field aggregate_increments(const NoiseModel& model, const IncrementPlan& plan,
                           int64_t coarse_step, int64_t refinement);

// Adds the fine increment of step `fine_step` into `accum` (used by the
// interleaved coupled sweep; bit-identical to sample_increment sums).
void accumulate_fine_increment(const NoiseModel& model, const IncrementPlan& plan,
                               int64_t fine_step, Field& accum);

// Real part of the increment on the collocation grid (multiplicative noise).
std::vector<double> increment_on_grid(const Field& increment);

}  // namespace snse
