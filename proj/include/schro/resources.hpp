#pragma once

#include <optional>
#include <string>

namespace schro {

enum class CostMethod {
    SchrHeat,
    SchrConvection,
    SchrGeneral,
    SchrSpecial,
    Unitarisation,
    UnitarisationSpecial,
    HamiltonianQuery,
    Boltzmann,
    BlackScholesSchr,
    BlackScholesUnitary,
};

const char* cost_method_name(CostMethod m);
CostMethod parse_cost_method(const std::string& s);

struct CostQuery {
    CostMethod method = CostMethod::SchrHeat;
    std::optional<double> d, m, m_p, T, dt, dx, dp, s, a_max, N, epsilon;
    std::optional<double> N_A;  // reported only, never enters a bound
};

struct CostEstimate {
    double count = 0.0;    // leading-order expression, unit constants, log base 2
    double polylog = 1.0;  // separate factor multiplying the soft-O terms; 1 when there are none
    double tau = 0.0;
    std::string formula;
    std::string polylog_formula;
    double total() const { return count * polylog; }
};

CostEstimate estimate(const CostQuery& q);

// log2^{3.5}(tau/eps) / log2 log2(tau/eps), both logs clamped below at 1
double polylog_factor(double tau, double eps);

// Schrodingerised over unitarised cost for the heat equation under
// d dx^l ~ eps, dp ~ eps: dx (1 + m_p log m_p / (d m log m)) with
// m = log2(d/eps)/l and m_p = log2(1/eps)
struct RatioEstimate {
    double value;
    double m;
    double m_p;
    std::string formula;
};
RatioEstimate heat_cost_ratio(double dx, double ell, int d, double eps);

}  // namespace schro
