// rates.hpp
// Closed-form evaluation of the truncated stochastic Gronwall rate bounds,
// plus a direct numeric check of the discrete recursion-to-conclusion step.
// Constants are user knobs; the bounds are shape envelopes, not absolute
// error bars.

#pragma once

#include <cstdint>
#include <vector>

#include "snse/spectral.hpp"  // ConfigError

namespace snse {

enum class TailType { Poly, Exp, LogLog };

TailType tail_type_from_name(const std::string& name);
const char* tail_type_name(TailType t);

struct GronwallParams {
    double epsilon_N = 0.0;  // one-step aggregate error scale
    double C = 1.0;
    double C_T = 1.0;   // C(T)
    double C1 = 1.0;
    double Cprime = 0.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double p = 1.0;
    double l = 2.0;     // Hoelder exponent, > 1
    double p1 = 1.0;
    double eta = 1.0;
    double kappa = 2.0; // any kappa > 1 admissible
    double gamma1 = 0.5;

    void validate() const;  // positivity constraints, kappa > 1
};

// Literal formula value of the rate bound for the given tail shape. Throws
// std::domain_error when epsilon_N is too large for the asymptotic regime
// (a logarithm argument would drop to 1 or below).
double bound_rate(const GronwallParams& params, TailType type);

struct GronwallVerdict {
    bool hypothesis_ok = false;
    int64_t violated_index = -1;  // first step violating the hypothesis
    bool conclusion_ok = false;
    double tightest_slack = 0.0;  // min over n of (bound_n - a_n)
};

// Checks that a nonnegative sequence satisfying
//   a_{n+1} <= C (1 + R1^{2 sigma1}) sum_{k<=n} a_k dt + eps_N
//              + C sqrt(eps_N) sup_k p_k^{1/(p l)}
// also satisfies the discrete Gronwall conclusion
//   a_n <= (a_0 + B) exp(C (1 + R1^{2 sigma1}) t_n) + C sup_k p_k^{1/(p l)},
// where B collects the eps_N terms. A sequence violating the hypothesis is
// reported with its index and no verdict on the conclusion.
GronwallVerdict check_gronwall_recursion(const std::vector<double>& a, double dt,
                                         double R1, double sigma1, double C,
                                         double Cprime, double eps_N,
                                         const std::vector<double>& tail_probs,
                                         double p = 1.0, double l = 2.0);

}  // namespace snse
