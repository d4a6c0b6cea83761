#pragma once

#include <optional>

#include "schro/grid.hpp"

namespace schro {

// State over (x-register) (x) (p-lattice), index = ix * N + jp.
struct WarpedState {
    CVec values;
    long long nx = 0;
    PGrid pgrid;
    std::optional<Grid> grid;  // absent for plain ODE registers
    double t = 0.0;

    // column ix is the p-profile at x-register index ix
    Eigen::Map<const CMat> as_matrix() const { return {values.data(), pgrid.N, Eigen::Index(nx)}; }
    Eigen::Map<CMat> as_matrix() { return {values.data(), pgrid.N, Eigen::Index(nx)}; }
};

struct Recovery {
    enum class Kind { IntegrateP, PointP };
    Kind kind = Kind::PointP;
    std::optional<double> p_star;  // PointP; defaults to the third node above 0

    static Recovery integrate() { return {Kind::IntegrateP, std::nullopt}; }
    static Recovery point(std::optional<double> p = std::nullopt) { return {Kind::PointP, p}; }
};

// g_j = exp(-alpha(p_j) |p_j|)
RVec warp_profile(const PGrid& pg);

WarpedState extend_initial(const CVec& u0, const PGrid& pg, std::optional<Grid> grid = std::nullopt);

double default_p_star(const PGrid& pg);
int p_index(const PGrid& pg, double p_star);  // throws if off-grid or <= 0

CVec recover(const WarpedState& w, const Recovery& method);

// L = L0 - T s_max
double estimate_domain(double T, double s_max, double L0);

// exp(-alpha(q)|q|) uhat0 with q = p + s t
cplx analytic_mode_solution(cplx uhat0, double s, double t, double p, double alpha_neg);

// Largest speed among modes whose amplitude exceeds rel_tol of the largest amplitude.
double dominant_speed(const RVec& amplitudes, const RVec& speeds, double rel_tol = 1e-8);

// Sum of |profile| on the two leftmost cells over the total.
double containment_fraction(const CVec& profile);

// L2 norm of w restricted to p > 0 (with the Delta x^d Delta p measure omitted).
double positive_p_norm(const WarpedState& w);

// Applies Phi_x^{-1} along every x axis, giving the x-mode coefficients for each p.
CVec x_spectral(const WarpedState& w);

}  // namespace schro
