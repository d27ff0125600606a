// spectral.cpp
// Basis construction, FFT/DST transforms and the norms used everywhere else.

#include "snse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace snse {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// ---------------------------------------------------------------------------
// Radix-2 complex FFT with a global plan cache. Plans are immutable once
// built, so concurrent use after a warm-up transform is safe; the cache
// itself is guarded by a mutex.
// ---------------------------------------------------------------------------
struct FftPlan {
    int n = 0;
    std::vector<int> bitrev;
    std::vector<cplx> twiddle;  // exp(-2 pi i k / n), k < n/2
};

const FftPlan& fft_plan(int n) {
    static std::mutex mu;
    static std::map<int, FftPlan> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    FftPlan plan;
    plan.n = n;
    plan.bitrev.resize(n);
    for (int i = 0, j = 0; i < n; ++i) {
        plan.bitrev[i] = j;
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
    }
    plan.twiddle.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        double ang = -2.0 * kPi * k / n;
        plan.twiddle[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(plan)).first->second;
}

// In-place DFT; sign=-1 forward (e^{-ikx}), sign=+1 inverse (unnormalized).
void fft(cplx* a, int n, int sign) {
    const FftPlan& plan = fft_plan(n);
    for (int i = 0; i < n; ++i) {
        int j = plan.bitrev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        int stride = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                cplx w = plan.twiddle[k * stride];
                if (sign > 0) w = std::conj(w);
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// 2-D transform on an n x n row-major grid (x index fastest).
void fft2(std::vector<cplx>& a, int n, int sign) {
    std::vector<cplx> col(n);
    for (int y = 0; y < n; ++y) fft(a.data() + y * n, n, sign);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) col[y] = a[y * n + x];
        fft(col.data(), n, sign);
        for (int y = 0; y < n; ++y) a[y * n + x] = col[y];
    }
}

}  // namespace

SpectralBasis::SpectralBasis(Domain domain, int dim, int J)
    : domain_(domain), dim_(dim), J_(J) {
    if (dim != 1 && dim != 2)
        throw ConfigError("basis dimension must be 1 or 2");
    if (!is_pow2(J) || J < 2)
        throw ConfigError("basis mode count per axis must be a power of two >= 2");
    if (domain == Domain::Sine && dim != 1)
        throw ConfigError("sine (Dirichlet) basis is only built in dimension 1");

    if (domain == Domain::Sine) {
        n_modes_ = J;
        n_grid_ = J;
        measure_ = kPi;
        quad_weight_ = kPi / (J + 1);
        eigenvalue_.resize(n_modes_);
        for (int j = 1; j <= J; ++j) eigenvalue_[j - 1] = double(j) * double(j);
        dst_.resize(size_t(n_grid_) * n_modes_);
        for (int m = 0; m < n_grid_; ++m)
            for (int j = 1; j <= J; ++j)
                dst_[size_t(m) * n_modes_ + (j - 1)] =
                    std::sin(double(m + 1) * j * kPi / (J + 1));
    } else {
        n_modes_ = dim == 1 ? J : J * J;
        n_grid_ = n_modes_;
        measure_ = dim == 1 ? 2.0 * kPi : 4.0 * kPi * kPi;
        quad_weight_ = measure_ / n_grid_;
        eigenvalue_.resize(n_modes_);
        for (int i = 0; i < n_modes_; ++i) {
            int kx = torus_wave(i % J_);
            int ky = dim == 2 ? torus_wave(i / J_) : 0;
            eigenvalue_[i] = double(kx) * kx + double(ky) * ky;
        }
        fft_plan(J);  // warm the plan cache while single-threaded
    }

    sorted_.resize(n_modes_);
    for (int i = 0; i < n_modes_; ++i) sorted_[i] = i;
    std::stable_sort(sorted_.begin(), sorted_.end(), [this](int a, int b) {
        if (eigenvalue_[a] != eigenvalue_[b]) return eigenvalue_[a] < eigenvalue_[b];
        auto ka = wave_vector(a), kb = wave_vector(b);
        if (ka[0] != kb[0]) return ka[0] < kb[0];
        return ka[1] < kb[1];
    });
    rank_of_.resize(n_modes_);
    for (int r = 0; r < n_modes_; ++r) rank_of_[sorted_[r]] = r;
}

std::array<int, 2> SpectralBasis::wave_vector(int flat) const {
    if (domain_ == Domain::Sine) return {flat + 1, 0};
    int kx = torus_wave(flat % J_);
    int ky = dim_ == 2 ? torus_wave(flat / J_) : 0;
    return {kx, ky};
}

double SpectralBasis::lambda_M(int M) const {
    if (M < 1 || M > n_modes_) throw ConfigError("mode count M out of range");
    return eigenvalue_[sorted_[M - 1]];
}

std::array<double, 2> SpectralBasis::grid_point(int m) const {
    if (domain_ == Domain::Sine) return {double(m + 1) * kPi / (J_ + 1), 0.0};
    double h = 2.0 * kPi / J_;
    if (dim_ == 1) return {m * h, 0.0};
    return {double(m % J_) * h, double(m / J_) * h};
}

int SpectralBasis::padded_grid_size(int pad) const {
    if (domain_ == Domain::Sine) {
        int jp = pad * (J_ + 1) - 1;
        return jp;
    }
    int P = pad <= 1 ? J_ : next_pow2(pad * J_);
    return dim_ == 1 ? P : P * P;
}

void SpectralBasis::to_grid(const std::vector<cplx>& coeffs, std::vector<cplx>& values) const {
    if (int(coeffs.size()) != n_modes_)
        throw std::invalid_argument("coefficient count does not match basis");
    if (domain_ == Domain::Sine) {
        values.assign(n_grid_, cplx(0.0, 0.0));
        const double scale = std::sqrt(2.0 / kPi);
        for (int m = 0; m < n_grid_; ++m) {
            const double* row = dst_.data() + size_t(m) * n_modes_;
            cplx acc(0.0, 0.0);
            for (int j = 0; j < n_modes_; ++j) acc += row[j] * coeffs[j];
            values[m] = scale * acc;
        }
    } else {
        values = coeffs;
        if (dim_ == 1)
            fft(values.data(), J_, +1);
        else
            fft2(values, J_, +1);
        double norm = 1.0 / std::pow(2.0 * kPi, 0.5 * dim_);
        for (auto& v : values) v *= norm;
    }
}

void SpectralBasis::to_coeffs(const std::vector<cplx>& values, std::vector<cplx>& coeffs) const {
    if (int(values.size()) != n_grid_)
        throw std::invalid_argument("grid value count does not match basis");
    if (domain_ == Domain::Sine) {
        coeffs.assign(n_modes_, cplx(0.0, 0.0));
        const double scale = quad_weight_ * std::sqrt(2.0 / kPi);
        for (int j = 0; j < n_modes_; ++j) {
            cplx acc(0.0, 0.0);
            for (int m = 0; m < n_grid_; ++m)
                acc += dst_[size_t(m) * n_modes_ + j] * values[m];
            coeffs[j] = scale * acc;
        }
    } else {
        coeffs = values;
        if (dim_ == 1)
            fft(coeffs.data(), J_, -1);
        else
            fft2(coeffs, J_, -1);
        double norm = std::pow(2.0 * kPi, 0.5 * dim_) / n_grid_;
        for (auto& c : coeffs) c *= norm;
    }
}

void SpectralBasis::to_grid_padded(const std::vector<cplx>& coeffs, int pad,
                                   std::vector<cplx>& values) const {
    if (pad <= 1) {
        to_grid(coeffs, values);
        return;
    }
    if (domain_ == Domain::Sine) {
        int np = padded_grid_size(pad);
        values.assign(np, cplx(0.0, 0.0));
        const double scale = std::sqrt(2.0 / kPi);
        for (int m = 0; m < np; ++m) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < n_modes_; ++j)
                acc += std::sin(double(m + 1) * (j + 1) * kPi / (np + 1)) * coeffs[j];
            values[m] = scale * acc;
        }
    } else {
        int P = next_pow2(pad * J_);
        int np = dim_ == 1 ? P : P * P;
        values.assign(np, cplx(0.0, 0.0));
        // scatter bins by wave-vector into the larger layout
        for (int i = 0; i < n_modes_; ++i) {
            auto k = wave_vector(i);
            int px = (k[0] + P) % P;
            int py = (k[1] + P) % P;
            values[dim_ == 1 ? px : py * P + px] = coeffs[i];
        }
        if (dim_ == 1)
            fft(values.data(), P, +1);
        else
            fft2(values, P, +1);
        double norm = 1.0 / std::pow(2.0 * kPi, 0.5 * dim_);
        for (auto& v : values) v *= norm;
    }
}

void SpectralBasis::to_coeffs_padded(const std::vector<cplx>& values, int pad,
                                     std::vector<cplx>& coeffs) const {
    if (pad <= 1) {
        to_coeffs(values, coeffs);
        return;
    }
    if (domain_ == Domain::Sine) {
        int np = int(values.size());
        coeffs.assign(n_modes_, cplx(0.0, 0.0));
        const double scale = (kPi / (np + 1)) * std::sqrt(2.0 / kPi);
        for (int j = 0; j < n_modes_; ++j) {
            cplx acc(0.0, 0.0);
            for (int m = 0; m < np; ++m)
                acc += std::sin(double(m + 1) * (j + 1) * kPi / (np + 1)) * values[m];
            coeffs[j] = scale * acc;
        }
    } else {
        int P = next_pow2(pad * J_);
        std::vector<cplx> work = values;
        if (dim_ == 1)
            fft(work.data(), P, -1);
        else
            fft2(work, P, -1);
        double norm = std::pow(2.0 * kPi, 0.5 * dim_) / double(dim_ == 1 ? P : P * P);
        coeffs.assign(n_modes_, cplx(0.0, 0.0));
        for (int i = 0; i < n_modes_; ++i) {
            auto k = wave_vector(i);
            int px = (k[0] + P) % P;
            int py = (k[1] + P) % P;
            coeffs[i] = norm * work[dim_ == 1 ? px : py * P + px];
        }
    }
}

Field::Field(const SpectralBasis& basis, std::vector<cplx> coeffs)
    : basis_(&basis), coeffs_(std::move(coeffs)) {
    if (int(coeffs_.size()) != basis.n_modes())
        throw std::invalid_argument("coefficient count does not match basis");
}

Field& Field::operator+=(const Field& other) {
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    overflowed_ = overflowed_ || other.overflowed_;
    return *this;
}

Field& Field::operator-=(const Field& other) {
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    overflowed_ = overflowed_ || other.overflowed_;
    return *this;
}

Field& Field::operator*=(cplx scale) {
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx scale, Field a) { return a *= scale; }

std::vector<cplx> to_physical(const Field& field) {
    std::vector<cplx> values;
    field.basis().to_grid(field.coeffs(), values);
    return values;
}

Field to_spectral(const SpectralBasis& basis, const std::vector<cplx>& values) {
    Field out(basis);
    basis.to_coeffs(values, out.coeffs());
    return out;
}

Field free_flow(const Field& field, double t) {
    Field out = field;
    const auto& lam = field.basis().eigenvalues();
    for (size_t i = 0; i < out.coeffs().size(); ++i) {
        double ang = -lam[i] * t;
        out.coeffs()[i] *= cplx(std::cos(ang), std::sin(ang));
    }
    return out;
}

Field project_modes(const Field& field, int M) {
    const SpectralBasis& basis = field.basis();
    if (M < 1 || M > basis.n_modes()) throw ConfigError("mode count M out of range");
    if (M == basis.n_modes()) return field;
    Field out = field;
    const auto& sorted = basis.sorted_modes();
    for (int r = M; r < basis.n_modes(); ++r) out.coeffs()[sorted[r]] = cplx(0.0, 0.0);
    return out;
}

double l2_norm(const Field& field) {
    if (field.overflowed()) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (const auto& c : field.coeffs()) s += std::norm(c);
    return std::sqrt(s);
}

double hs_norm(const Field& field, double s) {
    if (field.overflowed()) return std::numeric_limits<double>::infinity();
    const auto& lam = field.basis().eigenvalues();
    double acc = 0.0;
    for (size_t i = 0; i < field.coeffs().size(); ++i)
        acc += std::pow(1.0 + lam[i], s) * std::norm(field.coeffs()[i]);
    return std::sqrt(acc);
}

double lp_norm(const Field& field, double p) {
    if (field.overflowed()) return std::numeric_limits<double>::infinity();
    if (p < 1.0) throw std::invalid_argument("Lp norm requires p >= 1");
    auto values = to_physical(field);
    double w = field.basis().quad_weight();
    double acc = 0.0;
    for (const auto& v : values) acc += w * std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

double linf_norm(const Field& field) {
    if (field.overflowed()) return std::numeric_limits<double>::infinity();
    auto values = to_physical(field);
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double norm(const Field& field, NormKind kind, double param) {
    switch (kind) {
        case NormKind::L2: return l2_norm(field);
        case NormKind::Hs: return hs_norm(field, param);
        case NormKind::Lp: return lp_norm(field, param);
        case NormKind::Linf: return linf_norm(field);
    }
    return 0.0;
}

Field nonlinearity(const Field& field, int sigma, double lambda, bool dealias) {
    const SpectralBasis& basis = field.basis();
    int pad = dealias ? sigma + 1 : 1;
    std::vector<cplx> values;
    basis.to_grid_padded(field.coeffs(), pad, values);
    for (auto& v : values) {
        double a2 = std::norm(v);
        v *= cplx(0.0, lambda) * std::pow(a2, sigma);
    }
    Field out(basis);
    basis.to_coeffs_padded(values, pad, out.coeffs());
    return out;
}

bool finite(const Field& field) {
    for (const auto& c : field.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace snse
