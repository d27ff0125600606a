// csv.hpp
// Deterministic CSV artifacts. Floats are serialized with 17 significant
// digits, so identical runs produce byte-identical files.

#pragma once

#include <string>
#include <vector>

#include "snse/harness.hpp"
#include "snse/rates.hpp"

namespace snse {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string format_double(double v);

// columns: path,n,t,mass,energy,h1,h2,linf,Utilde,diverged
void write_diagnostics_csv(const std::string& path, const std::vector<PathRecord>& records);

// columns: R,p_hat,wilson_lo,wilson_hi; the shape fit is appended as a
// trailing comment line.
void write_tails_csv(const std::string& path, const TailCurve& curve);

// columns: N,overflow_frac,cond_moment2,max_norm,certificates_checked,
//          certificates_passed
void write_diverge_csv(const std::string& path, const DivergenceReport& report);

// columns: level,dt,M,lambda_M,rms_error,n_paths,cfl_violation plus a final
// fit summary row (level = "fit": slope, intercept, CI half-width).
void write_converge_csv(const std::string& path, const ErrorTable& table);

struct BoundRow {
    TailType tail_type;
    double epsilon_N;
    double bound;
};

// columns: tail_type,epsilon_N,bound
void write_bounds_csv(const std::string& path, const std::vector<BoundRow>& rows);

}  // namespace snse
