// rates.cpp

#include "snse/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snse {

TailType tail_type_from_name(const std::string& name) {
    if (name == "poly") return TailType::Poly;
    if (name == "exp") return TailType::Exp;
    if (name == "loglog") return TailType::LogLog;
    throw ConfigError("unknown tail type '" + name + "'");
}

const char* tail_type_name(TailType t) {
    switch (t) {
        case TailType::Poly: return "poly";
        case TailType::Exp: return "exp";
        case TailType::LogLog: return "loglog";
    }
    return "?";
}

void GronwallParams::validate() const {
    if (epsilon_N < 0.0) throw ConfigError("epsilon_N must be nonnegative");
    if (C <= 0.0 || C_T <= 0.0 || C1 <= 0.0) throw ConfigError("C, C(T), C1 must be positive");
    if (Cprime < 0.0) throw ConfigError("C' must be nonnegative");
    if (sigma1 < 0.0) throw ConfigError("sigma1 must be nonnegative");
    if (sigma2 <= 0.0) throw ConfigError("sigma2 must be positive");
    if (p < 1.0) throw ConfigError("p must be >= 1");
    if (l <= 1.0) throw ConfigError("l must exceed 1");
    if (p1 < 1.0) throw ConfigError("p1 must be >= 1");
    if (eta <= 0.0) throw ConfigError("eta must be positive");
    if (kappa <= 1.0) throw ConfigError("kappa must exceed 1");
    if (gamma1 <= 0.0 || gamma1 >= 1.0) throw ConfigError("gamma1 must lie in (0,1)");
}

namespace {

// log((eps + sqrt(eps))^{-1}); requires eps + sqrt(eps) < 1
double log_inv_eps(double eps) {
    double arg = eps + std::sqrt(eps);
    if (!(arg > 0.0) || arg >= 1.0)
        throw std::domain_error("epsilon_N too large for asymptotic bound");
    return -std::log(arg);
}

}  // namespace

double bound_rate(const GronwallParams& prm, TailType type) {
    prm.validate();
    double cc1 = 2.0 * prm.C * std::pow(prm.C1, 1.0 / (prm.p * prm.l));
    switch (type) {
        case TailType::Poly: {
            if (prm.sigma1 <= 0.0)
                throw std::domain_error("poly bound needs sigma1 > 0");
            double L = log_inv_eps(prm.epsilon_N) / (prm.kappa * prm.C_T);
            if (!(L > 0.0)) throw std::domain_error("epsilon_N too large for asymptotic bound");
            double expo = prm.p1 / (2.0 * prm.sigma1 * prm.p * prm.l);
            return cc1 * std::pow(L, -expo);
        }
        case TailType::Exp: {
            if (prm.sigma1 < prm.sigma2)
                return prm.C * std::pow(prm.epsilon_N, 1.0 - prm.gamma1);
            double L = log_inv_eps(prm.epsilon_N) / prm.C_T;
            if (!(L > 0.0)) throw std::domain_error("epsilon_N too large for asymptotic bound");
            return cc1 * std::exp(-(prm.eta / (prm.p * prm.l)) *
                                  std::pow(L, prm.sigma2 / prm.sigma1));
        }
        case TailType::LogLog: {
            double inner = log_inv_eps(prm.epsilon_N) - std::log(prm.kappa * prm.C_T);
            if (!(inner > 1.0))
                throw std::domain_error("epsilon_N too large for asymptotic bound");
            double expo = prm.p1 / (prm.p * prm.l);
            return cc1 * std::pow(2.0 * prm.sigma1, expo) * std::pow(std::log(inner), -expo);
        }
    }
    throw std::logic_error("unhandled tail type");
}

GronwallVerdict check_gronwall_recursion(const std::vector<double>& a, double dt,
                                         double R1, double sigma1, double C,
                                         double Cprime, double eps_N,
                                         const std::vector<double>& tail_probs,
                                         double p, double l) {
    if (a.empty()) throw std::invalid_argument("empty sequence");
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    (void)Cprime;  // folded into the sqrt(eps) term after Hoelder

    double sup_tail = 0.0;
    for (double v : tail_probs) sup_tail = std::max(sup_tail, std::pow(v, 1.0 / (p * l)));
    double A = C * (1.0 + std::pow(R1, 2.0 * sigma1));
    double B = eps_N + C * std::sqrt(eps_N) * sup_tail;

    GronwallVerdict verdict;
    verdict.hypothesis_ok = true;
    double running = 0.0;
    for (size_t n = 0; n + 1 < a.size(); ++n) {
        running += a[n] * dt;
        double rhs = A * running + B;
        if (a[n + 1] > rhs * (1.0 + 1e-12) + 1e-300) {
            verdict.hypothesis_ok = false;
            verdict.violated_index = int64_t(n + 1);
            return verdict;
        }
    }

    verdict.conclusion_ok = true;
    verdict.tightest_slack = std::numeric_limits<double>::infinity();
    for (size_t n = 0; n < a.size(); ++n) {
        double t_n = double(n) * dt;
        double bound = (a[0] + B) * std::exp(A * t_n) + C * sup_tail;
        double slack = bound - a[n];
        verdict.tightest_slack = std::min(verdict.tightest_slack, slack);
        if (slack < -1e-12 * std::max(1.0, bound)) verdict.conclusion_ok = false;
    }
    return verdict;
}

}  // namespace snse
