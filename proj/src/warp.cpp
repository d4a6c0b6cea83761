#include "schro/warp.hpp"

#include <cmath>

#include "schro/fourier.hpp"

namespace schro {

RVec warp_profile(const PGrid& pg) {
    pg.validate();
    RVec g(pg.N);
    for (int j = 0; j < pg.N; ++j) {
        double p = pg.p(j);
        g[j] = std::exp(-pg.alpha(p) * std::abs(p));
    }
    return g;
}

WarpedState extend_initial(const CVec& u0, const PGrid& pg, std::optional<Grid> grid) {
    if (grid && u0.size() != grid->size()) throw SchroError("extend_initial: u0 length must be M^d");
    RVec g = warp_profile(pg);
    WarpedState w;
    w.nx = u0.size();
    w.pgrid = pg;
    w.grid = grid;
    w.values.resize(w.nx * pg.N);
    auto W = w.as_matrix();
    W.noalias() = g.cast<cplx>() * u0.transpose();
    return w;
}

double default_p_star(const PGrid& pg) {
    int j = pg.first_positive() + 2;
    if (j >= pg.N) throw SchroError("pgrid: fewer than three positive nodes");
    return pg.p(j);
}

int p_index(const PGrid& pg, double p_star) {
    if (!(p_star > 0.0)) throw SchroError("PointP: p_star must be > 0");
    double r = (p_star - pg.L) / pg.dp();
    long long j = std::llround(r);
    if (std::abs(r - double(j)) > 1e-8 || j < 0 || j >= pg.N)
        throw SchroError("PointP: p_star=" + std::to_string(p_star) + " is not a grid node");
    if (!(pg.p(int(j)) > 0.0)) throw SchroError("PointP: p_star must be > 0");
    return int(j);
}

CVec recover(const WarpedState& w, const Recovery& method) {
    const PGrid& pg = w.pgrid;
    auto W = w.as_matrix();
    if (method.kind == Recovery::Kind::PointP) {
        double ps = method.p_star ? *method.p_star : default_p_star(pg);
        int j = p_index(pg, ps);
        return std::exp(pg.p(j)) * W.row(j).transpose();
    }
    int j0 = pg.first_positive();
    CVec u = W.middleRows(j0, pg.N - j0).colwise().sum().transpose();
    return u * pg.dp();
}

double estimate_domain(double T, double s_max, double L0) { return L0 - T * s_max; }

cplx analytic_mode_solution(cplx uhat0, double s, double t, double p, double alpha_neg) {
    double q = p + s * t;
    double alpha = q >= 0.0 ? 1.0 : alpha_neg;
    return std::exp(-alpha * std::abs(q)) * uhat0;
}

double dominant_speed(const RVec& amplitudes, const RVec& speeds, double rel_tol) {
    if (amplitudes.size() != speeds.size()) throw SchroError("dominant_speed: size mismatch");
    double amax = amplitudes.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k)
        if (std::abs(amplitudes[k]) > rel_tol * amax) s = std::max(s, speeds[k]);
    return s;
}

double containment_fraction(const CVec& profile) {
    double total = profile.cwiseAbs().sum();
    if (total == 0.0) return 0.0;
    return (std::abs(profile[0]) + std::abs(profile[1])) / total;
}

double positive_p_norm(const WarpedState& w) {
    int j0 = w.pgrid.first_positive();
    return w.as_matrix().middleRows(j0, w.pgrid.N - j0).norm();
}

CVec x_spectral(const WarpedState& w) {
    if (!w.grid) throw SchroError("x_spectral: state has no spatial grid");
    CVec c = w.values;
    grid_transform(c.data(), *w.grid, 1, w.pgrid.N, true);
    return c;
}

}  // namespace schro
