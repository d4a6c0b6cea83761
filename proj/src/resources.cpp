#include "schro/resources.hpp"

#include <algorithm>
#include <cmath>

#include "schro/common.hpp"

namespace schro {

namespace {

double need(const std::optional<double>& v, const char* name, CostMethod m) {
    if (!v) throw SchemaError(std::string("estimate ") + cost_method_name(m) + ": missing field '" + name + "'");
    if (!(*v > 0.0) || !std::isfinite(*v))
        throw SchemaError(std::string("estimate: field '") + name + "' must be finite and > 0");
    return *v;
}

double mlogm(double m) { return m * std::max(std::log2(m), 0.0); }

}  // namespace

const char* cost_method_name(CostMethod m) {
    switch (m) {
        case CostMethod::SchrHeat: return "SchrHeat";
        case CostMethod::SchrConvection: return "SchrConvection";
        case CostMethod::SchrGeneral: return "SchrGeneral";
        case CostMethod::SchrSpecial: return "SchrSpecial";
        case CostMethod::Unitarisation: return "Unitarisation";
        case CostMethod::UnitarisationSpecial: return "UnitarisationSpecial";
        case CostMethod::HamiltonianQuery: return "HamiltonianQuery";
        case CostMethod::Boltzmann: return "Boltzmann";
        case CostMethod::BlackScholesSchr: return "BlackScholesSchr";
        case CostMethod::BlackScholesUnitary: return "BlackScholesUnitary";
    }
    return "?";
}

CostMethod parse_cost_method(const std::string& s) {
    for (int k = 0; k <= int(CostMethod::BlackScholesUnitary); ++k)
        if (s == cost_method_name(CostMethod(k))) return CostMethod(k);
    throw SchemaError("unknown cost method '" + s + "'");
}

double polylog_factor(double tau, double eps) {
    if (!(tau > 0.0) || !(eps > 0.0)) throw SchemaError("polylog: tau and eps must be > 0");
    double L = std::max(std::log2(tau / eps), 1.0);
    double LL = std::max(std::log2(L), 1.0);
    return std::pow(L, 3.5) / LL;
}

CostEstimate estimate(const CostQuery& q) {
    const CostMethod M = q.method;
    auto f = [&](const std::optional<double>& v, const char* name) { return need(v, name, M); };
    CostEstimate e;
    e.polylog_formula = "log^3.5(tau/eps)/loglog(tau/eps)";
    switch (M) {
        case CostMethod::SchrHeat:
        case CostMethod::SchrSpecial: {
            double d = f(q.d, "d"), m = f(q.m, "m"), mp = f(q.m_p, "m_p"), T = f(q.T, "T"), dt = f(q.dt, "dt");
            e.count = T / dt * (d * mlogm(m) + mlogm(mp));
            e.formula = "T/dt * (d*m*log m + m_p*log m_p)";
            e.polylog_formula.clear();
            break;
        }
        case CostMethod::SchrConvection: {
            double d = f(q.d, "d"), m = f(q.m, "m");
            e.count = (d + 1.0) * mlogm(m);
            e.formula = "(d+1)*m*log m";
            e.polylog_formula.clear();
            break;
        }
        case CostMethod::SchrGeneral: {
            double d = f(q.d, "d"), m = f(q.m, "m"), mp = f(q.m_p, "m_p"), T = f(q.T, "T"), dp = f(q.dp, "dp");
            double s = f(q.s, "s"), a = f(q.a_max, "a_max"), eps = f(q.epsilon, "epsilon");
            e.tau = s * a * T / dp;
            e.polylog = polylog_factor(e.tau, eps);
            e.count = (d * m + mp) * e.tau + mlogm(mp);
            e.formula = "(d*m + m_p) * s*a_max*T/dp [x polylog] + m_p*log m_p";
            break;
        }
        case CostMethod::Unitarisation: {
            double d = f(q.d, "d"), m = f(q.m, "m"), T = f(q.T, "T"), dt = f(q.dt, "dt");
            double s = f(q.s, "s"), a = f(q.a_max, "a_max"), eps = f(q.epsilon, "epsilon");
            e.tau = s * a * T;
            e.polylog = polylog_factor(e.tau, eps);
            e.count = d * m * (T / dt * s + s * a);
            e.formula = "d*m * (T/dt * s + s*a_max) [x polylog]";
            break;
        }
        case CostMethod::UnitarisationSpecial: {
            double d = f(q.d, "d"), m = f(q.m, "m"), T = f(q.T, "T"), dt = f(q.dt, "dt");
            e.count = T / dt * d * mlogm(m);
            e.formula = "T/dt * d*m*log m";
            e.polylog_formula.clear();
            break;
        }
        case CostMethod::HamiltonianQuery: {
            double d = f(q.d, "d"), m = f(q.m, "m"), mp = f(q.m_p, "m_p"), T = f(q.T, "T");
            double s = f(q.s, "s"), a = f(q.a_max, "a_max"), eps = f(q.epsilon, "epsilon");
            e.tau = s * a * T;
            e.polylog = polylog_factor(e.tau, eps);
            e.count = e.tau * (d * m + mp);
            e.formula = "tau * m_H, tau = s*a_max*T, m_H = d*m + m_p [x polylog]";
            break;
        }
        case CostMethod::Boltzmann: {
            double d = f(q.d, "d"), m = f(q.m, "m"), mp = f(q.m_p, "m_p"), T = f(q.T, "T"), dt = f(q.dt, "dt");
            double dx = f(q.dx, "dx"), dp = f(q.dp, "dp"), N = f(q.N, "N"), eps = f(q.epsilon, "epsilon");
            double mH = d * m + mp;
            e.tau = T * (N * N / dp + 1.0 / dx);
            e.polylog = polylog_factor(e.tau, eps);
            double soft = mH * N * N / dp + mH / dx;
            e.count = soft + T / dt * d * mlogm(m) + mlogm(mp);
            e.formula = "m_H*N^2/dp + m_H/dx [x polylog] + T/dt * d*m*log m + m_p*log m_p";
            break;
        }
        case CostMethod::BlackScholesSchr: {
            double m = f(q.m, "m"), mp = f(q.m_p, "m_p");
            e.count = mlogm(m) + mlogm(mp);
            e.formula = "m*log m + m_p*log m_p";
            e.polylog_formula.clear();
            break;
        }
        case CostMethod::BlackScholesUnitary: {
            double m = f(q.m, "m");
            e.count = mlogm(m);
            e.formula = "m*log m";
            e.polylog_formula.clear();
            break;
        }
    }
    return e;
}

RatioEstimate heat_cost_ratio(double dx, double ell, int d, double eps) {
    if (!(dx > 0.0) || !(ell > 0.0) || d < 1 || !(eps > 0.0) || !(eps < 1.0))
        throw SchemaError("heat_cost_ratio: need dx > 0, l > 0, d >= 1, 0 < eps < 1");
    RatioEstimate r;
    r.m = std::log2(double(d) / eps) / ell;
    r.m_p = std::log2(1.0 / eps);
    double lm = std::log2(r.m), lmp = std::log2(r.m_p);
    if (!(lm > 0.0)) throw SchemaError("heat_cost_ratio: m = log2(d/eps)/l must exceed 1");
    r.value = dx * (1.0 + (ell / d) * (std::log(1.0 / eps) / std::log(double(d) / eps)) * (lmp / lm));
    r.formula = "dx * (1 + (l/d) * log(1/eps)/log(d/eps) * log m_p/log m)";
    return r;
}

}  // namespace schro
