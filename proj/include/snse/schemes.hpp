// schemes.hpp
// The six time-stepping maps, the CFL-type stability guard and the one-step
// blow-up certificate for the explicit classical schemes.
//
// All steps are pure functions of (state, increment, model, config) and are
// safe to run concurrently for different paths. A state whose L2 norm leaves
// the overflow threshold is flagged and frozen; divergence statistics treat
// that as data, not as an error.

#pragma once

#include <limits>

#include "snse/noise.hpp"
#include "snse/spectral.hpp"

namespace snse {

enum class SchemeId {
    ExpEuler,       // exponential Euler, linear part integrated exactly
    SemiMidpoint,   // linear-implicit modified mid-point (Cayley transform)
    SemiEuler,      // linear-implicit modified Euler
    LieTrotter,     // free flow composed with the exact frozen stochastic flow
    ThreePart,      // free flow / frozen nonlinear phase / noise flow
    TruncExpEuler,  // exponential Euler with nonlinearity truncation
};

const char* scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);

struct SchemeConfig {
    SchemeId id = SchemeId::LieTrotter;
    int sigma = 1;      // nonlinearity exponent, |u|^{2 sigma} u
    int lambda = -1;    // +1 focusing, -1 defocusing, 0 disables the drift
    double dt = 1e-3;
    int M = 0;          // Galerkin dimension (retained modes)
    double T = 1.0;
    double R = std::numeric_limits<double>::infinity();  // truncation radius
    double kappa = 0.0;         // Sobolev index of the truncation norm
    double kappa1 = 1.0;        // CFL exponent parameter, > d/2
    double damping_factor = 0.5;
    bool dealias = true;
    double overflow_threshold = 1e100;

    int64_t n_steps() const;
    void validate(const SpectralBasis& basis) const;
};

// One step of the configured scheme. dW is the spectral increment for the
// step; multiplicative models read it as a real field on the grid.
Field step_scheme(const Field& u, const Field& dW, const NoiseModel& model,
                  const SchemeConfig& cfg);

Field step_exp_euler(const Field& u, const Field& dW, const NoiseModel& model,
                     const SchemeConfig& cfg);
Field step_trunc_exp_euler(const Field& u, const Field& dW, const NoiseModel& model,
                           const SchemeConfig& cfg);

enum class SemiVariant { Midpoint, Euler };
Field step_semi_implicit(const Field& u, const Field& dW, const NoiseModel& model,
                         const SchemeConfig& cfg, SemiVariant variant);

Field step_lie_trotter(const Field& u, const Field& dW, const NoiseModel& model,
                       const SchemeConfig& cfg);
Field step_three_part(const Field& u, const Field& dW, const NoiseModel& model,
                      const SchemeConfig& cfg);

// Largest advisable step for the splitting scheme: c * lambda_M^-(2+2*kappa1*sigma).
// Advisory only; runs above it get a warning, not a refusal.
double cfl_max_dt(const SpectralBasis& basis, int M, int sigma, double kappa1,
                  double c = 1.0);

// One-step norm lower bound for the explicit classical schemes:
//   |u| * (m^-sigma dt |u|^{2 sigma} - dt (alpha_sup/2 + 1) - 1).
// Valid whenever the realized noise term satisfies |g(u) dW| <= dt |u|;
// a positive value certifies super-linear growth of the next iterate.
double blowup_certificate(double u_norm, double dt, int sigma, double alpha_sup,
                          double domain_measure);
double blowup_certificate(const Field& u, double dt, int sigma, double alpha_sup,
                          double domain_measure);

}  // namespace snse
