// harness.hpp
// Monte Carlo driver: trajectory simulation with per-step diagnostics,
// coupled-levels strong-error estimation, convergence-order fitting, tail
// estimation and divergence statistics.
//
// Paths are independent tasks; every reduction is done in path-index order,
// so results are byte-identical regardless of the worker count.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snse/functionals.hpp"
#include "snse/noise.hpp"
#include "snse/schemes.hpp"

namespace snse {

struct DivergenceAborted : std::runtime_error {
    explicit DivergenceAborted(const std::string& what) : std::runtime_error(what) {}
};

struct PathRecord {
    uint32_t path = 0;
    std::vector<DiagnosticsRow> rows;
    std::vector<cplx> terminal;
    bool diverged = false;
    int64_t first_overflow_step = -1;
    double sup_l2 = 0.0;
    double sup_h1 = 0.0;
    double sup_linf = 0.0;
    double sup_utilde = 0.0;
};

// The truncation-event statistic behind the error decomposition: d=1 uses
// the H1 sup, d=2 the (1+H1)(1+log(1+H2^2)) composite.
double truncation_statistic(const DiagnosticsRow& row, int dim);
// Indicator of {sup_{k<=n} statistic <= R1} evaluated from a stride-1 record.
bool truncation_event(const PathRecord& record, int64_t n, double R1, int dim);

// N steps of cfg.id at refinement 2^level of the plan's fine grid.
// Diagnostics rows are recorded every `stride` steps (and at the ends);
// running suprema are tracked at every step. Overflow freezes the path.
PathRecord simulate_path(const NoiseModel& model, const SchemeConfig& cfg,
                         const Field& psi, const IncrementPlan& plan, int level,
                         int64_t stride = 1, int lyapunov_s = 0);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double ci_halfwidth = 0.0;  // 95% half-width on the slope
    double r2 = 1.0;
};

// Least squares of log(err) on log(dt). Throws on fewer than 3 levels or on
// degenerate (zero / identical) errors.
FitResult fit_order(const std::vector<double>& dts, const std::vector<double>& errors);

struct ErrorLevel {
    double dt = 0.0;
    int M = 0;
    double lambda_M = 0.0;
    double rms_error = 0.0;
    bool cfl_violation = false;
};

struct ErrorTable {
    std::vector<ErrorLevel> levels;
    int n_paths = 0;
    FitResult fit;
};

struct ConvergeSpec {
    std::vector<std::pair<double, int>> levels;  // (dt, M), dt strictly decreasing
    double ref_dt = 0.0;
    int ref_M = 0;
};

// Coupled strong-error estimate: every level and the fine-step reference are
// driven by the same Gaussian draws; RMS terminal error per level is
// measured against P^{M_level} of the reference. Any diverged path aborts
// with DivergenceAborted.
ErrorTable estimate_strong_error(const NoiseModel& model, const SchemeConfig& base,
                                 const ConvergeSpec& spec, const Field& psi,
                                 int n_paths, uint64_t seed, int n_threads = 1);

enum class TailQuantity { SupL2, SupH1, SupLinf, SupUtilde };
TailQuantity tail_quantity_from_name(const std::string& name);
const char* tail_quantity_name(TailQuantity q);

struct TailPoint {
    double R = 0.0;
    double p_hat = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

struct TailCurve {
    std::vector<TailPoint> points;
    bool fitted = false;
    double eta_hat = 0.0;   // decay coefficient in the fitted shape
    double r2 = 0.0;
    std::string shape;      // "exp(-eta R^2)", "exp(-eta R^4)", ...
};

// Empirical tail of per-path suprema with Wilson intervals and the shape fit
// appropriate to (quantity, dim). Needs >= 100 paths for the fit.
TailCurve estimate_tail(const std::vector<double>& sup_values, TailQuantity quantity,
                        int dim, const std::vector<double>& thresholds);

struct DivergenceRow {
    int64_t N = 0;
    double overflow_fraction = 0.0;
    double cond_moment2 = 0.0;  // E ||u_N||^2 among non-overflowed paths
    double max_norm = 0.0;
    int64_t certificates_checked = 0;
    int64_t certificates_passed = 0;
};

struct DivergenceReport {
    std::vector<DivergenceRow> rows;
};

// Runs cfg.id for each N in N_list at fixed T (dt = T/N), verifying the
// one-step certificate wherever it is positive and the realized noise term
// is small. Overflow is data here, never an error.
DivergenceReport divergence_demo(const NoiseModel& model, SchemeConfig cfg,
                                 const Field& psi, const std::vector<int64_t>& N_list,
                                 int n_paths, uint64_t seed, int n_threads = 1);

// Per-path suprema of the chosen quantity, path-parallel.
std::vector<double> collect_suprema(const NoiseModel& model, const SchemeConfig& cfg,
                                    const Field& psi, TailQuantity quantity,
                                    int n_paths, uint64_t seed, int n_threads = 1);

// Deterministic static-partition parallel map over [0, n).
void parallel_for_indexed(int64_t n, int n_threads,
                          const std::function<void(int64_t)>& fn);

}  // namespace snse
