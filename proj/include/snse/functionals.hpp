// functionals.hpp
// Diagnostic functionals evaluated along trajectories: mass, energy, the
// auxiliary Lyapunov functional V, the iterated-log functional, and the
// critical Sobolev interpolation ratio.

#pragma once

#include "snse/spectral.hpp"

namespace snse {

// ||u||_{L2}^2
double mass(const Field& field);

// H(w) = 1/2 ||grad w||^2 + 1/(2 sigma + 2) ||w||_{L^{2s+2}}^{2s+2};
// gradient term spectral, potential term by grid quadrature.
double energy(const Field& field, int sigma);

// V(v) = ||(-Lap)^{s/2} v||^2 - lambda <(-Lap)^{s-1} v, |v|^{2 sigma} v>.
// Zero modes contribute nothing to the (-Lap) powers.
double lyapunov_V(const Field& field, int s, int sigma, int lambda);

// log(1 + log(1 + ||Lap w||^2)); with full_h2 set the H^2 norm replaces
// ||Lap w|| (the variant for periodic/Neumann boundary data).
double log_log_U(const Field& field, bool full_h2 = false);

// ||v||_Linf / (||v||_H1 (1 + sqrt(log(1 + ||v||_H2^2)))); throws
// std::domain_error on the zero field.
double critical_sobolev_ratio(const Field& field);

struct DiagnosticsRow {
    int64_t n = 0;
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double linf = 0.0;
    double utilde = 0.0;
    double lyapunov = 0.0;  // filled only when a Sobolev index is configured
    bool overflow = false;
};

// Row for state u at step n; lyapunov_s < 1 leaves the V column at zero.
DiagnosticsRow diagnostics_row(const Field& u, int64_t n, double dt, int sigma,
                               int lambda, int lyapunov_s = 0);

}  // namespace snse
