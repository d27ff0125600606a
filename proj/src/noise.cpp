// noise.cpp

#include "snse/noise.hpp"

#include <cmath>

namespace snse {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    uint64_t p = uint64_t(a) * uint64_t(b);
    lo = uint32_t(p);
    hi = uint32_t(p >> 32);
}

inline void philox_round(uint32_t c[4], const uint32_t key[2]) {
    uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, c[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, c[2], lo1, hi1);
    uint32_t r0 = hi1 ^ c[1] ^ key[0];
    uint32_t r1 = lo1;
    uint32_t r2 = hi0 ^ c[3] ^ key[1];
    uint32_t r3 = lo0;
    c[0] = r0;
    c[1] = r1;
    c[2] = r2;
    c[3] = r3;
}

inline double to_unit(uint32_t hi, uint32_t lo) {
    uint64_t x = (uint64_t(hi) << 32) | lo;
    // (0, 1]: keeps log() in gaussian_pair well-defined
    return double((x >> 11) + 1) * 0x1p-53;
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(uint64_t key, uint32_t c0, uint32_t c1,
                                          uint32_t c2, uint32_t c3) {
    uint32_t c[4] = {c0, c1, c2, c3};
    uint32_t k[2] = {uint32_t(key), uint32_t(key >> 32)};
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k);
        k[0] += kPhiloxW32A;
        k[1] += kPhiloxW32B;
    }
    return {c[0], c[1], c[2], c[3]};
}

std::array<double, 2> gaussian_pair(uint64_t seed, uint32_t path, uint64_t step,
                                    uint32_t mode) {
    auto b = Philox4x32::block(seed, mode, uint32_t(step), uint32_t(step >> 32), path);
    double u1 = to_unit(b[0], b[1]);
    double u2 = to_unit(b[2], b[3]);
    double r = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * kPi * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
}

namespace {

// Chooses the real basis function realizing a torus mode: the lexicographic
// representative of a +-k pair carries cos, the mirror carries sin;
// self-conjugate bins (k = -k mod J) are already real.
NoiseEntry make_entry(const SpectralBasis& basis, int flat, double sqrt_q) {
    NoiseEntry e{flat, -1, PairKind::Direct, sqrt_q};
    if (basis.domain() == Domain::Sine) return e;
    auto k = basis.wave_vector(flat);
    int J = basis.modes_per_axis();
    // a component -J/2 is its own negative on the J-bin circle
    auto neg = [J](int v) { return v == -J / 2 ? -J / 2 : -v; };
    int mx = neg(k[0]);
    int my = neg(k[1]);
    if (mx == k[0] && my == k[1]) return e;  // self-conjugate bin
    int mirror_flat = ((mx + J) % J) + (basis.dim() == 2 ? ((my + J) % J) * J : 0);
    e.mirror = mirror_flat;
    bool representative = (k[0] > mx) || (k[0] == mx && k[1] > my);
    e.kind = representative ? PairKind::CosPair : PairKind::SinPair;
    return e;
}

// |real basis function|^2 on the grid, accumulated into alpha.
void add_alpha(const SpectralBasis& basis, const NoiseEntry& e, double q,
               std::vector<double>& alpha) {
    int n = basis.n_grid();
    if (basis.domain() == Domain::Sine) {
        auto k = basis.wave_vector(e.flat);
        for (int m = 0; m < n; ++m) {
            double x = basis.grid_point(m)[0];
            double s = std::sin(k[0] * x);
            alpha[m] += q * (2.0 / kPi) * s * s;
        }
        return;
    }
    double vol = basis.measure();
    auto k = basis.wave_vector(e.flat);
    for (int m = 0; m < n; ++m) {
        auto x = basis.grid_point(m);
        double phase = k[0] * x[0] + k[1] * x[1];
        double v;
        switch (e.kind) {
            case PairKind::Direct: v = 1.0; break;  // |e^{ikx}|^2, constant
            case PairKind::CosPair: v = 2.0 * std::cos(phase) * std::cos(phase); break;
            case PairKind::SinPair: v = 2.0 * std::sin(phase) * std::sin(phase); break;
            default: v = 0.0;
        }
        alpha[m] += q * v / vol;
    }
}

NoiseModel build_common(const SpectralBasis& basis, std::vector<double> q,
                        NoiseType type, bool real_valued, int cutoff) {
    if (cutoff < 1 || cutoff > basis.n_modes())
        throw ConfigError("noise cutoff exceeds basis mode count");
    for (double v : q)
        if (v < 0.0) throw ConfigError("covariance eigenvalues must be nonnegative");
    if (type == NoiseType::Multiplicative && !real_valued)
        throw ConfigError("multiplicative noise requires a real-valued Wiener process");

    NoiseModel model;
    model.basis = &basis;
    model.type = type;
    model.real_valued = real_valued;
    model.cutoff = cutoff;
    model.q = std::move(q);
    model.entries.reserve(cutoff);
    model.alpha.assign(basis.n_grid(), 0.0);
    const auto& sorted = basis.sorted_modes();
    for (int r = 0; r < cutoff; ++r) {
        NoiseEntry e = make_entry(basis, sorted[r], std::sqrt(model.q[r]));
        model.entries.push_back(e);
        if (type == NoiseType::Multiplicative) add_alpha(basis, e, model.q[r], model.alpha);
    }
    model.alpha_sup = 0.0;
    for (double a : model.alpha) model.alpha_sup = std::max(model.alpha_sup, a);
    return model;
}

}  // namespace

NoiseModel build_noise(const SpectralBasis& basis, double decay_r, double amp,
                       NoiseType type, bool real_valued, int cutoff) {
    if (amp < 0.0) throw ConfigError("noise amplitude must be nonnegative");
    std::vector<double> q(cutoff);
    const auto& sorted = basis.sorted_modes();
    for (int r = 0; r < cutoff; ++r)
        q[r] = amp * std::pow(1.0 + basis.eigenvalue(sorted[r]), -decay_r);
    return build_common(basis, std::move(q), type, real_valued, cutoff);
}

NoiseModel build_noise(const SpectralBasis& basis, const std::vector<double>& q_list,
                       NoiseType type, bool real_valued, int cutoff) {
    if (int(q_list.size()) < cutoff)
        throw ConfigError("explicit covariance list shorter than cutoff");
    std::vector<double> q(q_list.begin(), q_list.begin() + cutoff);
    return build_common(basis, std::move(q), type, real_valued, cutoff);
}

TraceReport trace_check(const NoiseModel& model, double s, double tol) {
    TraceReport report;
    const auto& sorted = model.basis->sorted_modes();
    double acc = 0.0;
    report.partial_sums.reserve(model.cutoff);
    for (int r = 0; r < model.cutoff; ++r) {
        acc += model.q[r] * std::pow(1.0 + model.basis->eigenvalue(sorted[r]), s);
        report.partial_sums.push_back(acc);
    }
    report.total = acc;
    if (acc > 0.0 && model.cutoff >= 10) {
        int head = (model.cutoff * 9) / 10;
        report.last_decade_fraction = (acc - report.partial_sums[head - 1]) / acc;
        report.warning = report.last_decade_fraction > tol;
    }
    return report;
}

namespace {

const double kInvSqrt2 = 0.70710678118654752440;

// Adds sqrt(q) * g into the increment coefficients for one entry, where g is
// the entry's Gaussian draw scaled by sqrt(dt_fine).
inline void deposit(const NoiseModel& model, const NoiseEntry& e,
                    const std::array<double, 2>& g, double scale, bool real_valued,
                    std::vector<cplx>& coeffs) {
    if (!real_valued) {
        coeffs[e.flat] += e.sqrt_q * scale * kInvSqrt2 * cplx(g[0], g[1]);
        return;
    }
    double a = e.sqrt_q * scale * g[0];
    switch (e.kind) {
        case PairKind::Direct:
            coeffs[e.flat] += a;
            break;
        case PairKind::CosPair:
            coeffs[e.flat] += a * kInvSqrt2;
            coeffs[e.mirror] += a * kInvSqrt2;
            break;
        case PairKind::SinPair:
            coeffs[e.flat] += cplx(0.0, -a * kInvSqrt2);
            coeffs[e.mirror] += cplx(0.0, a * kInvSqrt2);
            break;
    }
}

}  // namespace

void accumulate_fine_increment(const NoiseModel& model, const IncrementPlan& plan,
                               int64_t fine_step, Field& accum) {
    if (fine_step < 0 || fine_step >= plan.n_fine)
        throw std::out_of_range("fine step beyond the plan horizon");
    double scale = std::sqrt(plan.dt_fine());
    auto& coeffs = accum.coeffs();
    for (uint32_t r = 0; r < uint32_t(model.entries.size()); ++r) {
        if (model.entries[r].sqrt_q == 0.0) continue;
        auto g = gaussian_pair(plan.seed, plan.path, uint64_t(fine_step), r);
        deposit(model, model.entries[r], g, scale, model.real_valued, coeffs);
    }
}

Field aggregate_increments(const NoiseModel& model, const IncrementPlan& plan,
                           int64_t coarse_step, int64_t refinement) {
    Field out(*model.basis);
    int64_t first = coarse_step * refinement;
    if (first < 0 || first + refinement > plan.n_fine)
        throw std::out_of_range("coarse step beyond the plan horizon");
    for (int64_t s = 0; s < refinement; ++s)
        accumulate_fine_increment(model, plan, first + s, out);
    return out;
}

Field sample_increment(const NoiseModel& model, const IncrementPlan& plan,
                       int64_t step, int level) {
    if (level < 0 || level > 62) throw std::out_of_range("bad refinement level");
    return aggregate_increments(model, plan, step, int64_t(1) << level);
}

std::vector<double> increment_on_grid(const Field& increment) {
    auto values = to_physical(increment);
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
    return out;
}

}  // namespace snse
