// schemes.cpp

#include "snse/schemes.hpp"

#include <cmath>

namespace snse {

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::ExpEuler: return "exp-euler";
        case SchemeId::SemiMidpoint: return "semi-midpoint";
        case SchemeId::SemiEuler: return "semi-euler";
        case SchemeId::LieTrotter: return "lie-trotter";
        case SchemeId::ThreePart: return "three-part";
        case SchemeId::TruncExpEuler: return "trunc-exp-euler";
    }
    return "?";
}

SchemeId scheme_from_name(const std::string& name) {
    if (name == "exp-euler") return SchemeId::ExpEuler;
    if (name == "semi-midpoint") return SchemeId::SemiMidpoint;
    if (name == "semi-euler") return SchemeId::SemiEuler;
    if (name == "lie-trotter") return SchemeId::LieTrotter;
    if (name == "three-part") return SchemeId::ThreePart;
    if (name == "trunc-exp-euler") return SchemeId::TruncExpEuler;
    throw ConfigError("unknown scheme id '" + name + "'");
}

int64_t SchemeConfig::n_steps() const {
    double ratio = T / dt;
    int64_t n = int64_t(std::llround(ratio));
    if (n < 1 || std::abs(ratio - double(n)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("T/dt must be a positive integer");
    return n;
}

void SchemeConfig::validate(const SpectralBasis& basis) const {
    if (sigma < 1) throw ConfigError("sigma must be a positive integer");
    if (lambda != 1 && lambda != -1 && lambda != 0)
        throw ConfigError("lambda must be +1 or -1");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (M < 1 || M > basis.n_modes()) throw ConfigError("M out of range for the basis");
    if (!(kappa1 > 0.5 * basis.dim())) throw ConfigError("kappa1 must exceed d/2");
    if (!(R > 0.0)) throw ConfigError("truncation radius R must be positive");
    if (kappa < 0.0) throw ConfigError("truncation index kappa must be nonnegative");
    if (damping_factor != 0.5 && damping_factor != 1.0)
        throw ConfigError("damping_factor must be 0.5 or 1.0");
    n_steps();
}

namespace {

double raw_l2(const Field& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs()) s += std::norm(c);
    return std::sqrt(s);
}

void check_overflow(Field& f, double threshold) {
    if (!finite(f) || raw_l2(f) > threshold) f.mark_overflowed();
}

// drift + noise assembly shared by the Euler-type maps:
//   u + dt * [f(u) - df * alpha u] * drift_on + g(u) dW
// with every pointwise product done on the collocation grid (the cubic-type
// drift optionally on the dealiasing grid).
Field euler_increment_sum(const Field& u, const Field& dW, const NoiseModel& model,
                          const SchemeConfig& cfg, bool drift_on) {
    Field acc = u;
    if (drift_on && cfg.lambda != 0) {
        Field fu = nonlinearity(u, cfg.sigma, double(cfg.lambda), cfg.dealias);
        fu *= cplx(cfg.dt, 0.0);
        acc += fu;
    }
    if (model.multiplicative()) {
        auto uv = to_physical(u);
        auto wv = increment_on_grid(dW);
        std::vector<cplx> term(uv.size());
        double damp = drift_on ? cfg.damping_factor * cfg.dt : 0.0;
        for (size_t i = 0; i < uv.size(); ++i)
            term[i] = uv[i] * (cplx(0.0, 1.0) * wv[i] - damp * model.alpha[i]);
        acc += to_spectral(u.basis(), term);
    } else {
        acc += dW;
    }
    return acc;
}

Field exp_euler_core(const Field& u, const Field& dW, const NoiseModel& model,
                     const SchemeConfig& cfg, bool truncated) {
    if (u.overflowed()) return u;
    bool drift_on = true;
    if (truncated) drift_on = hs_norm(u, cfg.kappa) <= cfg.R;
    Field acc = euler_increment_sum(u, dW, model, cfg, drift_on);
    Field out = free_flow(project_modes(acc, cfg.M), cfg.dt);
    check_overflow(out, cfg.overflow_threshold);
    return out;
}

}  // namespace

Field step_exp_euler(const Field& u, const Field& dW, const NoiseModel& model,
                     const SchemeConfig& cfg) {
    return exp_euler_core(u, dW, model, cfg, false);
}

Field step_trunc_exp_euler(const Field& u, const Field& dW, const NoiseModel& model,
                           const SchemeConfig& cfg) {
    return exp_euler_core(u, dW, model, cfg, true);
}

Field step_semi_implicit(const Field& u, const Field& dW, const NoiseModel& model,
                         const SchemeConfig& cfg, SemiVariant variant) {
    if (u.overflowed()) return u;
    const SpectralBasis& basis = u.basis();

    // a = dt f(u) + g(u) dW, b = damping_factor * alpha * u
    Field a(basis);
    if (cfg.lambda != 0) {
        a = nonlinearity(u, cfg.sigma, double(cfg.lambda), cfg.dealias);
        a *= cplx(cfg.dt, 0.0);
    }
    Field b(basis);
    if (model.multiplicative()) {
        auto uv = to_physical(u);
        std::vector<cplx> noise(uv.size()), damp(uv.size());
        auto wv = increment_on_grid(dW);
        for (size_t i = 0; i < uv.size(); ++i) {
            noise[i] = cplx(0.0, 1.0) * uv[i] * wv[i];
            damp[i] = cfg.damping_factor * model.alpha[i] * uv[i];
        }
        a += to_spectral(basis, noise);
        b = to_spectral(basis, damp);
    } else {
        a += dW;
    }

    Field out(basis);
    const auto& lam = basis.eigenvalues();
    for (size_t j = 0; j < out.coeffs().size(); ++j) {
        cplx half(1.0, 0.0);
        cplx i_half_lam(0.0, 0.5 * lam[j] * cfg.dt);
        cplx cayley = (half - i_half_lam) / (half + i_half_lam);       // S_dt
        cplx t_mid = half / (half + i_half_lam);                       // T_dt
        cplx t_hat = half / (half + cplx(0.0, lam[j] * cfg.dt));       // T-hat_dt
        cplx lin = variant == SemiVariant::Midpoint ? cayley : t_hat;
        cplx damp_mult = variant == SemiVariant::Midpoint ? t_mid : t_hat;
        out.coeffs()[j] = lin * u.coeffs()[j] + cayley * a.coeffs()[j] -
                          cfg.dt * damp_mult * b.coeffs()[j];
    }
    out = project_modes(out, cfg.M);
    check_overflow(out, cfg.overflow_threshold);
    return out;
}

Field step_lie_trotter(const Field& u, const Field& dW, const NoiseModel& model,
                       const SchemeConfig& cfg) {
    if (u.overflowed()) return u;
    const SpectralBasis& basis = u.basis();
    Field v = free_flow(project_modes(u, cfg.M), cfg.dt);
    auto vals = to_physical(v);

    if (model.multiplicative()) {
        auto wv = increment_on_grid(dW);
        for (size_t i = 0; i < vals.size(); ++i) {
            double theta = cfg.lambda == 0
                               ? 0.0
                               : cfg.lambda * std::pow(std::norm(vals[i]), cfg.sigma);
            double phase = theta * cfg.dt + wv[i];
            vals[i] *= cplx(std::cos(phase), std::sin(phase));
        }
        Field out = project_modes(to_spectral(basis, vals), cfg.M);
        check_overflow(out, cfg.overflow_threshold);
        return out;
    }

    for (size_t i = 0; i < vals.size(); ++i) {
        double theta = cfg.lambda == 0
                           ? 0.0
                           : cfg.lambda * std::pow(std::norm(vals[i]), cfg.sigma);
        double phase = theta * cfg.dt;
        vals[i] *= cplx(std::cos(phase), std::sin(phase));
    }
    Field out = project_modes(to_spectral(basis, vals), cfg.M);
    out += project_modes(dW, cfg.M);
    check_overflow(out, cfg.overflow_threshold);
    return out;
}

Field step_three_part(const Field& u, const Field& dW, const NoiseModel& model,
                      const SchemeConfig& cfg) {
    if (u.overflowed()) return u;
    const SpectralBasis& basis = u.basis();
    Field x = free_flow(project_modes(u, cfg.M), cfg.dt);
    auto vals = to_physical(x);

    // frozen nonlinear phase with the Ito damping of the y-subsystem
    for (size_t i = 0; i < vals.size(); ++i) {
        double theta = cfg.lambda == 0
                           ? 0.0
                           : cfg.lambda * std::pow(std::norm(vals[i]), cfg.sigma);
        double decay = model.multiplicative() ? 0.5 * model.alpha[i] * cfg.dt : 0.0;
        vals[i] *= std::exp(-decay) * cplx(std::cos(theta * cfg.dt), std::sin(theta * cfg.dt));
    }

    if (model.multiplicative()) {
        auto wv = increment_on_grid(dW);
        for (size_t i = 0; i < vals.size(); ++i)
            vals[i] *= cplx(std::cos(wv[i]), std::sin(wv[i]));
        Field out = project_modes(to_spectral(basis, vals), cfg.M);
        check_overflow(out, cfg.overflow_threshold);
        return out;
    }
    Field out = project_modes(to_spectral(basis, vals), cfg.M);
    out += project_modes(dW, cfg.M);
    check_overflow(out, cfg.overflow_threshold);
    return out;
}

Field step_scheme(const Field& u, const Field& dW, const NoiseModel& model,
                  const SchemeConfig& cfg) {
    switch (cfg.id) {
        case SchemeId::ExpEuler: return step_exp_euler(u, dW, model, cfg);
        case SchemeId::SemiMidpoint:
            return step_semi_implicit(u, dW, model, cfg, SemiVariant::Midpoint);
        case SchemeId::SemiEuler:
            return step_semi_implicit(u, dW, model, cfg, SemiVariant::Euler);
        case SchemeId::LieTrotter: return step_lie_trotter(u, dW, model, cfg);
        case SchemeId::ThreePart: return step_three_part(u, dW, model, cfg);
        case SchemeId::TruncExpEuler: return step_trunc_exp_euler(u, dW, model, cfg);
    }
    throw std::logic_error("unhandled scheme id");
}

double cfl_max_dt(const SpectralBasis& basis, int M, int sigma, double kappa1, double c) {
    if (!(kappa1 > 0.5 * basis.dim())) throw ConfigError("kappa1 must exceed d/2");
    if (c <= 0.0) throw ConfigError("CFL constant must be positive");
    double lam = basis.lambda_M(M);
    if (lam <= 0.0) return std::numeric_limits<double>::infinity();
    return c * std::pow(lam, -(2.0 + 2.0 * kappa1 * sigma));
}

double blowup_certificate(double u_norm, double dt, int sigma, double alpha_sup,
                          double domain_measure) {
    double growth = std::pow(domain_measure, -double(sigma)) * dt *
                    std::pow(u_norm, 2.0 * sigma);
    return u_norm * (growth - dt * (0.5 * alpha_sup + 1.0) - 1.0);
}

double blowup_certificate(const Field& u, double dt, int sigma, double alpha_sup,
                          double domain_measure) {
    return blowup_certificate(l2_norm(u), dt, sigma, alpha_sup, domain_measure);
}

}  // namespace snse
