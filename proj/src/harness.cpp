// harness.cpp

#include "snse/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace snse {

void parallel_for_indexed(int64_t n, int n_threads,
                          const std::function<void(int64_t)>& fn) {
    if (n_threads <= 1 || n <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next(0);
    auto worker = [&]() {
        for (;;) {
            int64_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int64_t>(n_threads, n);
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

double truncation_statistic(const DiagnosticsRow& row, int dim) {
    if (dim == 1) return row.h1;
    return (1.0 + row.h1) * (1.0 + std::log1p(row.h2 * row.h2));
}

bool truncation_event(const PathRecord& record, int64_t n, double R1, int dim) {
    double sup = 0.0;
    for (const auto& row : record.rows) {
        if (row.n > n) break;
        sup = std::max(sup, truncation_statistic(row, dim));
    }
    return sup <= R1;
}

PathRecord simulate_path(const NoiseModel& model, const SchemeConfig& cfg,
                         const Field& psi, const IncrementPlan& plan, int level,
                         int64_t stride, int lyapunov_s) {
    const SpectralBasis& basis = psi.basis();
    cfg.validate(basis);
    int64_t refinement = int64_t(1) << level;
    int64_t n_steps = cfg.n_steps();
    if (n_steps * refinement != plan.n_fine)
        throw ConfigError("increment plan does not match dt at this level");

    PathRecord rec;
    rec.path = plan.path;
    if (stride < 1) stride = 1;

    Field u = project_modes(psi, cfg.M);
    auto track = [&](const Field& state, int64_t n) {
        DiagnosticsRow row = diagnostics_row(state, n, cfg.dt, cfg.sigma, cfg.lambda,
                                             lyapunov_s);
        if (!row.overflow) {
            rec.sup_l2 = std::max(rec.sup_l2, std::sqrt(row.mass));
            rec.sup_h1 = std::max(rec.sup_h1, row.h1);
            rec.sup_linf = std::max(rec.sup_linf, row.linf);
            rec.sup_utilde = std::max(rec.sup_utilde, row.utilde);
        }
        if (n % stride == 0 || n == n_steps || row.overflow) rec.rows.push_back(row);
        return row.overflow;
    };

    track(u, 0);
    for (int64_t n = 0; n < n_steps && !rec.diverged; ++n) {
        Field dw = sample_increment(model, plan, n, level);
        u = step_scheme(u, dw, model, cfg);
        if (track(u, n + 1)) {
            rec.diverged = true;
            rec.first_overflow_step = n + 1;
        }
    }
    rec.terminal = u.coeffs();
    return rec;
}

FitResult fit_order(const std::vector<double>& dts, const std::vector<double>& errors) {
    if (dts.size() != errors.size() || dts.size() < 3)
        throw std::invalid_argument("order fit needs at least 3 levels");
    size_t n = dts.size();
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(errors[i] > 0.0))
            throw std::invalid_argument("degenerate fit: nonpositive error value");
        x[i] = std::log(dts[i]);
        y[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate fit: identical dt levels");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    // two-sided 95% t quantiles for small residual dof
    static const double t975[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447,
                                  2.365,  2.306, 2.262, 2.228, 2.201, 2.179};
    if (n > 2) {
        size_t dof = n - 2;
        double tq = dof <= 12 ? t975[dof - 1] : 1.96;
        double se = std::sqrt(ss_res / double(dof) / sxx);
        fit.ci_halfwidth = tq * se;
    }
    return fit;
}

ErrorTable estimate_strong_error(const NoiseModel& model, const SchemeConfig& base,
                                 const ConvergeSpec& spec, const Field& psi,
                                 int n_paths, uint64_t seed, int n_threads) {
    const SpectralBasis& basis = psi.basis();
    if (spec.levels.empty()) throw ConfigError("converge run needs at least one level");
    if (!(spec.ref_dt > 0.0)) throw ConfigError("reference dt must be positive");
    if (spec.ref_M < 1 || spec.ref_M > basis.n_modes())
        throw ConfigError("reference M out of range");

    SchemeConfig ref_cfg = base;
    ref_cfg.dt = spec.ref_dt;
    ref_cfg.M = spec.ref_M;
    ref_cfg.validate(basis);
    int64_t n_fine = ref_cfg.n_steps();

    struct LevelPlan {
        SchemeConfig cfg;
        int64_t ratio;
    };
    std::vector<LevelPlan> plans;
    double prev_dt = std::numeric_limits<double>::infinity();
    for (auto [dt, M] : spec.levels) {
        if (!(dt < prev_dt)) throw ConfigError("levels must be strictly ordered by dt");
        prev_dt = dt;
        if (M > spec.ref_M) throw ConfigError("level M exceeds reference M");
        SchemeConfig cfg = base;
        cfg.dt = dt;
        cfg.M = M;
        cfg.validate(basis);
        double ratio = dt / spec.ref_dt;
        int64_t r = int64_t(std::llround(ratio));
        if (r < 1 || (r & (r - 1)) != 0 || std::abs(ratio - double(r)) > 1e-9 * ratio)
            throw ConfigError("reference dt must divide each level dt by a power of two");
        plans.push_back({cfg, r});
    }

    size_t n_levels = plans.size();
    std::vector<std::vector<double>> errors(n_levels, std::vector<double>(n_paths, 0.0));
    // one slot per (path, level+ref): written only by the owning path worker
    std::vector<uint8_t> diverged(size_t(n_paths) * (n_levels + 1), 0);
    std::atomic<bool> any_diverged(false);

    parallel_for_indexed(n_paths, n_threads, [&](int64_t p) {
        if (any_diverged.load()) return;
        IncrementPlan plan{seed, uint32_t(p), n_fine, base.T};
        Field u_ref = project_modes(psi, spec.ref_M);
        std::vector<Field> u_lvl;
        std::vector<Field> accum;
        u_lvl.reserve(n_levels);
        for (const auto& lp : plans) {
            u_lvl.push_back(project_modes(psi, lp.cfg.M));
            accum.emplace_back(basis);
        }
        for (int64_t s = 0; s < n_fine; ++s) {
            Field dw(basis);
            accumulate_fine_increment(model, plan, s, dw);
            u_ref = step_scheme(u_ref, dw, model, ref_cfg);
            for (size_t ell = 0; ell < n_levels; ++ell) {
                accum[ell] += dw;
                if ((s + 1) % plans[ell].ratio == 0) {
                    u_lvl[ell] = step_scheme(u_lvl[ell], accum[ell], model, plans[ell].cfg);
                    accum[ell] = Field(basis);
                }
            }
            if (u_ref.overflowed()) break;
        }
        if (u_ref.overflowed()) {
            diverged[size_t(p) * (n_levels + 1) + n_levels] = 1;
            any_diverged.store(true);
            return;
        }
        for (size_t ell = 0; ell < n_levels; ++ell) {
            if (u_lvl[ell].overflowed()) {
                diverged[size_t(p) * (n_levels + 1) + ell] = 1;
                any_diverged.store(true);
                return;
            }
            Field diff = project_modes(u_ref, plans[ell].cfg.M) - u_lvl[ell];
            errors[ell][p] = l2_norm(diff);
        }
    });

    if (any_diverged.load()) {
        std::string where = "reference";
        for (int64_t p = 0; p < n_paths && where == "reference"; ++p)
            for (size_t ell = 0; ell <= n_levels; ++ell)
                if (diverged[size_t(p) * (n_levels + 1) + ell]) {
                    where = (ell == n_levels ? std::string("reference")
                                             : "level " + std::to_string(ell)) +
                            ", path " + std::to_string(p);
                    break;
                }
        throw DivergenceAborted("convergence run aborted: diverged path at " + where);
    }

    ErrorTable table;
    table.n_paths = n_paths;
    std::vector<double> dts, rms;
    for (size_t ell = 0; ell < n_levels; ++ell) {
        double acc = 0.0;
        for (double e : errors[ell]) acc += e * e;
        ErrorLevel lvl;
        lvl.dt = plans[ell].cfg.dt;
        lvl.M = plans[ell].cfg.M;
        lvl.lambda_M = basis.lambda_M(lvl.M);
        lvl.rms_error = std::sqrt(acc / n_paths);
        lvl.cfl_violation =
            lvl.dt > cfl_max_dt(basis, lvl.M, plans[ell].cfg.sigma, plans[ell].cfg.kappa1);
        table.levels.push_back(lvl);
        dts.push_back(lvl.dt);
        rms.push_back(lvl.rms_error);
    }
    if (n_levels >= 3) table.fit = fit_order(dts, rms);
    return table;
}

TailQuantity tail_quantity_from_name(const std::string& name) {
    if (name == "sup-L2") return TailQuantity::SupL2;
    if (name == "sup-H1") return TailQuantity::SupH1;
    if (name == "sup-Linf") return TailQuantity::SupLinf;
    if (name == "sup-Utilde") return TailQuantity::SupUtilde;
    throw ConfigError("unknown tail quantity '" + name + "'");
}

const char* tail_quantity_name(TailQuantity q) {
    switch (q) {
        case TailQuantity::SupL2: return "sup-L2";
        case TailQuantity::SupH1: return "sup-H1";
        case TailQuantity::SupLinf: return "sup-Linf";
        case TailQuantity::SupUtilde: return "sup-Utilde";
    }
    return "?";
}

namespace {

// shape regressor x(R) and its label for the tail fit
std::pair<std::function<double(double)>, std::string> tail_shape(TailQuantity q, int dim) {
    switch (q) {
        case TailQuantity::SupL2:
        case TailQuantity::SupH1:
            return {[](double R) { return R * R; }, "exp(-eta R^2)"};
        case TailQuantity::SupLinf:
            if (dim == 1) return {[](double R) { return R * R * R * R; }, "exp(-eta R^4)"};
            return {[](double R) { return std::log(std::log(R)); }, "log(R)^-eta"};
        case TailQuantity::SupUtilde:
            return {[](double R) { return std::log(R); }, "R^-eta"};
    }
    return {[](double R) { return R; }, "exp(-eta R)"};
}

}  // namespace

TailCurve estimate_tail(const std::vector<double>& sup_values, TailQuantity quantity,
                        int dim, const std::vector<double>& thresholds) {
    TailCurve curve;
    double prev = -std::numeric_limits<double>::infinity();
    for (double R : thresholds) {
        if (!(R > prev)) throw std::invalid_argument("thresholds must be increasing");
        prev = R;
    }
    size_t n = sup_values.size();
    const double z = 1.959963984540054;
    for (double R : thresholds) {
        size_t count = 0;
        for (double v : sup_values)
            if (v >= R) ++count;
        TailPoint pt;
        pt.R = R;
        pt.p_hat = n > 0 ? double(count) / double(n) : 0.0;
        if (n > 0) {
            double denom = 1.0 + z * z / double(n);
            double center = (pt.p_hat + z * z / (2.0 * n)) / denom;
            double spread = z *
                            std::sqrt(pt.p_hat * (1.0 - pt.p_hat) / double(n) +
                                      z * z / (4.0 * double(n) * double(n))) /
                            denom;
            pt.wilson_lo = std::max(0.0, center - spread);
            pt.wilson_hi = std::min(1.0, center + spread);
        }
        curve.points.push_back(pt);
    }

    auto [xfun, label] = tail_shape(quantity, dim);
    curve.shape = label;
    if (n < 100) return curve;  // raw curve only

    // resolved range: at least 5 hits, probability away from 1
    std::vector<double> xs, ys;
    for (const auto& pt : curve.points) {
        double count = pt.p_hat * double(n);
        if (count >= 5.0 && pt.p_hat <= 0.95 && pt.R > 0.0)
            if (quantity != TailQuantity::SupLinf || dim == 1 || pt.R > 1.0) {
                xs.push_back(xfun(pt.R));
                ys.push_back(std::log(pt.p_hat));
            }
    }
    if (xs.size() < 4) return curve;

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size(); my /= xs.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return curve;
    double slope = sxy / sxx;
    curve.eta_hat = -slope;
    curve.r2 = (sxy * sxy) / (sxx * syy);
    curve.fitted = true;
    return curve;
}

std::vector<double> collect_suprema(const NoiseModel& model, const SchemeConfig& cfg,
                                    const Field& psi, TailQuantity quantity,
                                    int n_paths, uint64_t seed, int n_threads) {
    std::vector<double> sups(n_paths, 0.0);
    int64_t n_steps = cfg.n_steps();
    parallel_for_indexed(n_paths, n_threads, [&](int64_t p) {
        IncrementPlan plan{seed, uint32_t(p), n_steps, cfg.T};
        PathRecord rec = simulate_path(model, cfg, psi, plan, 0, n_steps);
        switch (quantity) {
            case TailQuantity::SupL2: sups[p] = rec.sup_l2; break;
            case TailQuantity::SupH1: sups[p] = rec.sup_h1; break;
            case TailQuantity::SupLinf: sups[p] = rec.sup_linf; break;
            case TailQuantity::SupUtilde: sups[p] = rec.sup_utilde; break;
        }
    });
    return sups;
}

DivergenceReport divergence_demo(const NoiseModel& model, SchemeConfig cfg,
                                 const Field& psi, const std::vector<int64_t>& N_list,
                                 int n_paths, uint64_t seed, int n_threads) {
    const SpectralBasis& basis = psi.basis();
    DivergenceReport report;
    for (int64_t N : N_list) {
        cfg.dt = cfg.T / double(N);
        cfg.validate(basis);

        std::vector<uint8_t> overflowed(n_paths, 0);
        std::vector<double> terminal_sq(n_paths, 0.0);
        std::vector<double> max_norm(n_paths, 0.0);
        std::vector<int64_t> checked(n_paths, 0), passed(n_paths, 0);

        parallel_for_indexed(n_paths, n_threads, [&](int64_t p) {
            IncrementPlan plan{seed, uint32_t(p), N, cfg.T};
            Field u = project_modes(psi, cfg.M);
            double nrm = l2_norm(u);
            max_norm[p] = nrm;
            for (int64_t n = 0; n < N; ++n) {
                Field dw = sample_increment(model, plan, n, 0);
                double cert = blowup_certificate(nrm, cfg.dt, cfg.sigma, model.alpha_sup,
                                                 basis.measure());
                double noise_norm = 0.0;
                if (cert > 0.0) {
                    if (model.multiplicative()) {
                        auto uv = to_physical(u);
                        auto wv = increment_on_grid(dw);
                        double acc = 0.0;
                        for (size_t i = 0; i < uv.size(); ++i)
                            acc += std::norm(uv[i]) * wv[i] * wv[i];
                        noise_norm = std::sqrt(basis.quad_weight() * acc);
                    } else {
                        noise_norm = l2_norm(dw);
                    }
                }
                u = step_scheme(u, dw, model, cfg);
                double next = u.overflowed() ? std::numeric_limits<double>::infinity()
                                             : l2_norm(u);
                if (cert > 0.0 && noise_norm <= cfg.dt * nrm) {
                    ++checked[p];
                    if (next >= cert - 1e-10 * std::max(1.0, cert)) ++passed[p];
                }
                nrm = next;
                if (u.overflowed()) {
                    overflowed[p] = 1;
                    max_norm[p] = std::numeric_limits<double>::infinity();
                    break;
                }
                max_norm[p] = std::max(max_norm[p], nrm);
            }
            if (!overflowed[p]) terminal_sq[p] = nrm * nrm;
        });

        DivergenceRow row;
        row.N = N;
        int64_t n_over = 0;
        double acc = 0.0, mx = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            n_over += overflowed[p];
            if (!overflowed[p]) acc += terminal_sq[p];
            mx = std::max(mx, max_norm[p]);
            row.certificates_checked += checked[p];
            row.certificates_passed += passed[p];
        }
        row.overflow_fraction = double(n_over) / double(n_paths);
        row.cond_moment2 = n_over < n_paths ? acc / double(n_paths - n_over) : 0.0;
        row.max_norm = mx;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace snse
