// functionals.cpp

#include "snse/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace snse {

double mass(const Field& field) {
    double n = l2_norm(field);
    return n * n;
}

double energy(const Field& field, int sigma) {
    if (field.overflowed()) return std::numeric_limits<double>::infinity();
    if (sigma < 1) throw std::invalid_argument("energy requires sigma >= 1");
    const auto& lam = field.basis().eigenvalues();
    double grad = 0.0;
    for (size_t j = 0; j < field.coeffs().size(); ++j)
        grad += lam[j] * std::norm(field.coeffs()[j]);
    double p = 2.0 * sigma + 2.0;
    double pot = std::pow(lp_norm(field, p), p);
    return 0.5 * grad + pot / p;
}

double lyapunov_V(const Field& field, int s, int sigma, int lambda) {
    if (s < 1) throw std::invalid_argument("lyapunov_V requires s >= 1");
    const SpectralBasis& basis = field.basis();
    const auto& lam = basis.eigenvalues();

    double lead = 0.0;
    for (size_t j = 0; j < field.coeffs().size(); ++j)
        if (lam[j] > 0.0) lead += std::pow(lam[j], double(s)) * std::norm(field.coeffs()[j]);

    // pairing <(-Lap)^{s-1} v, |v|^{2 sigma} v> in the real inner product
    Field weighted(basis);
    for (size_t j = 0; j < field.coeffs().size(); ++j)
        weighted.coeffs()[j] =
            lam[j] > 0.0 ? std::pow(lam[j], double(s - 1)) * field.coeffs()[j]
                         : cplx(0.0, 0.0);
    auto wv = to_physical(weighted);
    auto uv = to_physical(field);
    double w = basis.quad_weight();
    double pairing = 0.0;
    for (size_t i = 0; i < uv.size(); ++i) {
        cplx cube = std::pow(std::norm(uv[i]), sigma) * uv[i];
        pairing += w * (std::conj(wv[i]) * cube).real();
    }
    return lead - lambda * pairing;
}

double log_log_U(const Field& field, bool full_h2) {
    const auto& lam = field.basis().eigenvalues();
    double acc = 0.0;
    for (size_t j = 0; j < field.coeffs().size(); ++j) {
        double w = full_h2 ? (1.0 + lam[j]) * (1.0 + lam[j]) : lam[j] * lam[j];
        acc += w * std::norm(field.coeffs()[j]);
    }
    return std::log1p(std::log1p(acc));
}

double critical_sobolev_ratio(const Field& field) {
    double h1 = hs_norm(field, 1.0);
    if (h1 == 0.0) throw std::domain_error("critical_sobolev_ratio of the zero field");
    double h2 = hs_norm(field, 2.0);
    double linf = linf_norm(field);
    return linf / (h1 * (1.0 + std::sqrt(std::log1p(h2 * h2))));
}

DiagnosticsRow diagnostics_row(const Field& u, int64_t n, double dt, int sigma,
                               int lambda, int lyapunov_s) {
    DiagnosticsRow row;
    row.n = n;
    row.t = double(n) * dt;
    row.overflow = u.overflowed();
    if (row.overflow) {
        double inf = std::numeric_limits<double>::infinity();
        row.mass = row.energy = row.h1 = row.h2 = row.linf = row.utilde = inf;
        return row;
    }
    row.mass = mass(u);
    row.energy = energy(u, sigma);
    row.h1 = hs_norm(u, 1.0);
    row.h2 = hs_norm(u, 2.0);
    row.linf = linf_norm(u);
    row.utilde = log_log_U(u);
    if (lyapunov_s >= 1) row.lyapunov = lyapunov_V(u, lyapunov_s, sigma, lambda);
    return row;
}

}  // namespace snse
