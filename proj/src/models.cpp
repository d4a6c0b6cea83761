#include "schro/models.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "schro/fourier.hpp"

namespace schro {

namespace {

KronOperator term(std::vector<KronFactor> fs, cplx scale = 1.0) {
    KronOperator op;
    op.factors = std::move(fs);
    op.scale = scale;
    return op;
}

std::vector<KronFactor> with(std::vector<KronFactor> fs, const KronFactor& last) {
    fs.push_back(last);
    return fs;
}

KronFactor p_momentum(const PGrid& pg) { return KronFactor::momentum(pg.L, pg.R, pg.N); }

// sum_l P_l^2 as a dense x-register matrix
CMat dense_neg_laplacian(const Grid& g) {
    if (g.size() > 4096) throw SchroError("dense x-register operator: M^d exceeds 4096");
    CMat out = CMat::Zero(g.size(), g.size());
    for (int l = 0; l < g.d; ++l) out += term(axis_factors(g, l, KronFactor::Kind::MomentumSquared)).to_dense();
    return out;
}

RVec mode_sum(const Grid& g, const std::function<double(double)>& f) {
    RVec mu = g.mu();
    RVec out(g.size());
    for (long long i = 0; i < g.size(); ++i) {
        auto j = g.unflatten(i);
        double s = 0.0;
        for (int l = 0; l < g.d; ++l) s += f(mu[j[l]]);
        out[i] = s;
    }
    return out;
}

// multiplies a state laid out as (x-modes, eta) by exp(i theta t), theta = a_i * eta_k + c_i
void phase_modes(CVec& v, const RVec& a, const RVec& c, const RVec& eta, double t) {
    const long long nx = a.size();
    const int N = int(eta.size());
    for (long long i = 0; i < nx; ++i)
        for (int k = 0; k < N; ++k) v[i * N + k] *= std::polar(1.0, (a[i] * eta[k] + c[i]) * t);
}

}  // namespace

// ---------------------------------------------------------------- heat

HeatModel build_heat(const ScalarField& V, const Grid& grid, const PGrid& pgrid) {
    grid.validate();
    pgrid.validate();
    HeatModel m;
    m.grid = grid;
    m.pgrid = pgrid;
    m.V = sample_function(V, grid);
    m.v_constant = (m.V.maxCoeff() - m.V.minCoeff()) <= 1e-14 * std::max(1.0, m.V.cwiseAbs().maxCoeff());
    m.mu2 = mode_sum(grid, [](double mu) { return mu * mu; });

    RVec eta = pgrid.eta();
    for (int l = 0; l < grid.d; ++l) {
        auto fs = axis_factors(grid, l, KronFactor::Kind::MomentumSquared);
        m.H.terms.push_back(term(with(fs, p_momentum(pgrid))));
        m.Hdiag.terms.push_back(term(with(fs, KronFactor::diagonal(eta))));
    }
    m.H.terms.push_back(term({KronFactor::diagonal(m.V), p_momentum(pgrid)}, -1.0));
    m.Hdiag.terms.push_back(term({KronFactor::diagonal(m.V), KronFactor::diagonal(eta)}, -1.0));
    return m;
}

TrotterSplit HeatModel::trotter() const { return {grid, mu2, -V, pgrid.eta()}; }

CMat HeatModel::x_generator() const {
    CMat A = -dense_neg_laplacian(grid);
    A.diagonal() += V.cast<cplx>();
    return A;
}

Eigen::SparseMatrix<cplx> HeatModel::fd_generator() const {
    Eigen::SparseMatrix<cplx> A = periodic_laplacian(grid);
    for (long long i = 0; i < grid.size(); ++i) A.coeffRef(i, i) += V[i];
    return A;
}

WarpedState heat_evolve_exact(const HeatModel& m, const WarpedState& w0, double t) {
    const int N = m.pgrid.N;
    if (w0.values.size() != m.grid.size() * N) throw SchroError("heat_evolve_exact: state size mismatch");
    if (m.v_constant) {
        WarpedState w = w0;
        w.t = w0.t + t;
        grid_transform(w.values.data(), m.grid, 1, N, true);
        to_spectral(w.values.data(), m.grid.size(), N, 1);
        RVec a = (m.mu2.array() - m.V[0]).matrix();
        phase_modes(w.values, a, RVec::Zero(a.size()), m.pgrid.eta(), t);
        to_physical(w.values.data(), m.grid.size(), N, 1);
        grid_transform(w.values.data(), m.grid, 1, N, false);
        return w;
    }
    HermitianSplit split = hermitian_split(m.x_generator());
    SchrodingerisedSystem sys;
    sys.split = split;
    sys.pgrid = m.pgrid;
    sys.w0 = w0;
    WarpedState w = evolve_schrodingerised(sys, t);
    w.grid = m.grid;
    w.t = w0.t + t;
    return w;
}

std::pair<RVec, RVec> heat_mode_scan(const Grid& grid, const CVec& u0) {
    if (u0.size() != grid.size()) throw SchroError("heat_mode_scan: size mismatch");
    CVec c = u0;
    grid_transform(c.data(), grid, 1, 1, true);
    return {c.cwiseAbs(), mode_sum(grid, [](double mu) { return mu * mu; })};
}

// ---------------------------------------------------------------- convection

ConvectionModel build_convection(const Grid& grid, int Np) {
    grid.validate();
    if (Np < 4 || !is_pow2(Np)) throw SchroError("convection: p lattice size must be a power of two >= 4");
    ConvectionModel m;
    m.grid = grid;
    m.Np = Np;
    m.p.resize(Np);
    m.eta.resize(Np);
    for (int j = 0; j < Np; ++j) {
        m.p[j] = -kPi + j * (2.0 * kPi / Np);
        m.eta[j] = j - Np / 2;
    }
    m.mu_sum = mode_sum(grid, [](double mu) { return mu; });
    RVec mu = grid.mu();
    RVec eta2 = m.eta.array().square();
    for (int l = 0; l < grid.d; ++l) {
        std::vector<KronFactor> fs;
        for (int k = 0; k < grid.d; ++k)
            fs.push_back(k == l ? KronFactor::diagonal(mu) : KronFactor::identity(grid.M));
        m.H_direct.terms.push_back(term(fs, -1.0));
        m.H_sin.terms.push_back(term(with(fs, KronFactor::diagonal(eta2)), -1.0));
    }
    return m;
}

CVec convection_evolve_sin(const ConvectionModel& m, const CVec& u0, double t) {
    const long long nx = m.grid.size();
    if (u0.size() != nx) throw SchroError("convection: u0 size mismatch");
    const int N = m.Np;
    RVec s = m.p.array().sin();
    CVec w(nx * N);
    for (long long i = 0; i < nx; ++i)
        for (int k = 0; k < N; ++k) w[i * N + k] = s[k] * u0[i];
    grid_transform(w.data(), m.grid, 1, N, true);
    to_spectral(w.data(), nx, N, 1);
    RVec eta2 = m.eta.array().square();
    phase_modes(w, -m.mu_sum, RVec::Zero(nx), eta2, t);
    to_physical(w.data(), nx, N, 1);
    grid_transform(w.data(), m.grid, 1, N, false);
    // w = sin(p) u is separable; project onto sin(p)
    CVec u(nx);
    double ss = s.squaredNorm();
    for (long long i = 0; i < nx; ++i) {
        cplx acc = 0.0;
        for (int k = 0; k < N; ++k) acc += s[k] * w[i * N + k];
        u[i] = acc / ss;
    }
    return u;
}

CVec convection_evolve_direct(const ConvectionModel& m, const CVec& u0, double t) {
    const long long nx = m.grid.size();
    if (u0.size() != nx) throw SchroError("convection: u0 size mismatch");
    CVec c = u0;
    grid_transform(c.data(), m.grid, 1, 1, true);
    for (long long i = 0; i < nx; ++i) c[i] *= std::polar(1.0, -m.mu_sum[i] * t);
    grid_transform(c.data(), m.grid, 1, 1, false);
    return c;
}

// ---------------------------------------------------------------- Black-Scholes

BlackScholesModel build_black_scholes(double r, double sigma, const Grid& grid, const PGrid& pgrid) {
    grid.validate();
    pgrid.validate();
    if (grid.d != 1) throw SchroError("black-scholes: the log-price grid must be one-dimensional");
    if (!(sigma > 0.0)) throw SchroError("black-scholes: sigma must be > 0");
    BlackScholesModel m;
    m.grid = grid;
    m.pgrid = pgrid;
    m.r = r;
    m.sigma = sigma;
    m.mu = grid.mu();
    const double a = r - 0.5 * sigma * sigma, b = 0.5 * sigma * sigma;
    m.H1_modes = -(b * m.mu.array().square() + r).matrix();
    m.H2_modes = a * m.mu;
    m.commuting = true;
    RVec eta = pgrid.eta();
    KronFactor Px = KronFactor::momentum(grid), P2x = KronFactor::momentum_squared(grid);
    KronFactor Ix = KronFactor::identity(grid.M);
    m.H.terms = {term({Px, KronFactor::identity(pgrid.N)}, a), term({P2x, p_momentum(pgrid)}, b),
                 term({Ix, p_momentum(pgrid)}, r)};
    m.Hdiag.terms = {term({Px, KronFactor::identity(pgrid.N)}, a), term({P2x, KronFactor::diagonal(eta)}, b),
                     term({Ix, KronFactor::diagonal(eta)}, r)};
    return m;
}

double BlackScholesModel::entry(double mu_, double eta) const {
    const double a = r - 0.5 * sigma * sigma, b = 0.5 * sigma * sigma;
    return a * mu_ + (b * mu_ * mu_ + r) * eta;
}

WarpedState bs_evolve(const BlackScholesModel& m, const CVec& V0, double t) {
    WarpedState w = extend_initial(V0, m.pgrid, m.grid);
    const int N = m.pgrid.N;
    grid_transform(w.values.data(), m.grid, 1, N, true);
    to_spectral(w.values.data(), m.grid.size(), N, 1);
    phase_modes(w.values, -m.H1_modes, m.H2_modes, m.pgrid.eta(), t);
    to_physical(w.values.data(), m.grid.size(), N, 1);
    grid_transform(w.values.data(), m.grid, 1, N, false);
    w.t = t;
    return w;
}

CVec bs_exact(const BlackScholesModel& m, const CVec& V0, double t) {
    CVec c = V0;
    grid_transform(c.data(), m.grid, 1, 1, true);
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c[i] *= std::exp(cplx(m.H1_modes[i], m.H2_modes[i]) * t);
    grid_transform(c.data(), m.grid, 1, 1, false);
    return c;
}

LadderResult bs_unitarise(const BlackScholesModel& m, const CVec& V0, double t, int n_steps) {
    CVec c = V0;
    grid_transform(c.data(), m.grid, 1, 1, true);
    CMat H1 = m.H1_modes.cast<cplx>().asDiagonal();
    CMat H2 = m.H2_modes.cast<cplx>().asDiagonal();
    LadderResult r = ladder_evolve(H1, H2, t / n_steps, n_steps, c);
    grid_transform(r.final_top.data(), m.grid, 1, 1, false);
    return r;
}

// ---------------------------------------------------------------- Fokker-Planck

FokkerPlanckModel build_fokker_planck(const ScalarField& V, double sigma, const Grid& grid, const PGrid& pgrid,
                                      FPForm form, const FokkerPlanckOptions& opt) {
    grid.validate();
    pgrid.validate();
    if (!(sigma > 0.0)) throw SchroError("fokker-planck: sigma must be > 0");
    FokkerPlanckModel m;
    m.grid = grid;
    m.pgrid = pgrid;
    m.sigma = sigma;
    m.form = form;
    m.V = sample_function(V, grid);
    const long long n = grid.size();

    RVec e_pos(n), e_neg(n);
    m.to_psi.resize(n);
    m.from_psi.resize(n);
    for (long long i = 0; i < n; ++i) {
        double v = m.V[i] / sigma;
        e_pos[i] = std::exp(v);
        e_neg[i] = std::exp(-v);
        m.to_psi[i] = std::exp(0.5 * v);
        m.from_psi[i] = std::exp(-0.5 * v);
        if (!std::isfinite(e_pos[i]) || !std::isfinite(e_neg[i]) || e_pos[i] == 0.0 || e_neg[i] == 0.0) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "fokker-planck: e^{+-V/sigma} overflows at node %lld (V/sigma = %.6g)", i, v);
            throw SchroError(buf);
        }
    }

    // U = |grad V|^2 / (4 sigma) - Laplacian V / 2
    RVec grad2 = RVec::Zero(n), lap = RVec::Zero(n);
    if (opt.gradV) {
        std::vector<double> x(grid.d);
        for (long long i = 0; i < n; ++i) {
            auto j = grid.unflatten(i);
            for (int k = 0; k < grid.d; ++k) x[k] = grid.x(j[k]);
            auto g = opt.gradV(x);
            if (int(g.size()) != grid.d) throw SchroError("fokker-planck: gradV has wrong dimension");
            for (double gk : g) grad2[i] += gk * gk;
        }
    } else {
        warn("fokker-planck: grad V not supplied; using spectral differentiation");
        for (int l = 0; l < grid.d; ++l) grad2 += spectral_partial(m.V, grid, l, 1).array().square().matrix();
    }
    if (opt.lapV) {
        lap = sample_function(opt.lapV, grid);
    } else {
        warn("fokker-planck: Laplacian of V not supplied; using spectral differentiation");
        for (int l = 0; l < grid.d; ++l) lap += spectral_partial(m.V, grid, l, 2);
    }
    m.U = grad2 / (4.0 * sigma) - 0.5 * lap;

    RVec eta = pgrid.eta();
    if (form == FPForm::Conservation) {
        if (n > 4096) throw SchroError("fokker-planck: conservation form needs M^d <= 4096");
        m.Hx = CMat::Zero(n, n);
        auto half = m.to_psi.cast<cplx>().asDiagonal();
        auto neg = e_neg.cast<cplx>().asDiagonal();
        for (int l = 0; l < grid.d; ++l) {
            CMat P = term(axis_factors(grid, l, KronFactor::Kind::Momentum)).to_dense();
            CMat Al = P * neg * P;
            m.Hx += sigma * (half * Al * half);
        }
        m.Hx = 0.5 * (m.Hx + m.Hx.adjoint()).eval();
        m.H.terms = {term({KronFactor::matrix(m.Hx), p_momentum(pgrid)})};
    } else {
        for (int l = 0; l < grid.d; ++l)
            m.H.terms.push_back(term(with(axis_factors(grid, l, KronFactor::Kind::MomentumSquared), p_momentum(pgrid)), sigma));
        m.H.terms.push_back(term({KronFactor::diagonal(m.U), p_momentum(pgrid)}));
        if (n <= 4096) {
            m.Hx = sigma * dense_neg_laplacian(grid);
            m.Hx.diagonal() += m.U.cast<cplx>();
        }
    }
    if (m.Hx.size()) m.Hdiag.terms = {term({KronFactor::matrix(m.Hx), KronFactor::diagonal(eta)})};
    return m;
}

WarpedState fp_evolve(const FokkerPlanckModel& m, const CVec& f0, double t) {
    if (f0.size() != m.grid.size()) throw SchroError("fp_evolve: f0 size mismatch");
    if (m.Hx.size() == 0) throw SchroError("fp_evolve: grid too large for the dense x-register evolution");
    CVec psi0 = m.to_psi.cast<cplx>().cwiseProduct(f0);
    HermitianSplit split = hermitian_split(CMat(-m.Hx));
    split.stable = true;  // Hx is positive semi-definite up to rounding
    SchrodingerisedSystem sys = assemble_schrodingerised(split, m.pgrid, psi0);
    WarpedState w = evolve_schrodingerised(sys, t);
    w.grid = m.grid;
    return w;
}

CVec fp_recover(const FokkerPlanckModel& m, const WarpedState& w, const Recovery& method) {
    return m.from_psi.cast<cplx>().cwiseProduct(recover(w, method));
}

double fp_steady_residual(const FokkerPlanckModel& m) {
    CVec psi = m.from_psi.cast<cplx>();
    CVec lap = CVec::Zero(psi.size());
    for (int l = 0; l < m.grid.d; ++l)
        lap += term(axis_factors(m.grid, l, KronFactor::Kind::MomentumSquared)).apply(psi);
    CVec num = m.Hx.size() ? CVec(m.Hx * psi) : CVec(m.sigma * lap + m.U.cast<cplx>().cwiseProduct(psi));
    double den = m.sigma * lap.norm();
    return den > 0.0 ? num.norm() / den : num.norm();
}

// ---------------------------------------------------------------- Boltzmann

void QuadratureRule::validate(int d) const {
    if (weights.empty()) throw SchroError("quadrature: need at least one ordinate");
    if (points.size() != weights.size()) throw SchroError("quadrature: points and weights differ in length");
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] > 0.0)) throw SchroError("quadrature: weights must be positive");
        s += weights[k];
        if (int(points[k].size()) != d) throw SchroError("quadrature: point dimension differs from the grid");
        double nrm = 0.0;
        for (double c : points[k]) nrm += c * c;
        if (std::abs(std::sqrt(nrm) - 1.0) > 1e-10) throw SchroError("quadrature: points must be unit vectors");
    }
    if (std::abs(s - 1.0) > 1e-12) throw SchroError("quadrature: weights must sum to 1");
}

QuadratureRule QuadratureRule::two_point() { return {{{1.0}, {-1.0}}, {0.5, 0.5}}; }

BoltzmannModel build_boltzmann(const QuadratureRule& quad, const Grid& grid, const PGrid& pgrid) {
    grid.validate();
    pgrid.validate();
    quad.validate(grid.d);
    BoltzmannModel m;
    m.grid = grid;
    m.pgrid = pgrid;
    m.quad = quad;
    const int N = int(quad.size());
    m.sqrt_w.resize(N);
    for (int k = 0; k < N; ++k) m.sqrt_w[k] = std::sqrt(quad.weights[k]);
    RMat Kr = m.sqrt_w * m.sqrt_w.transpose() - RMat::Identity(N, N);
    m.K = Kr.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<RMat> es(Kr);
    m.K_eig = es.eigenvalues();
    m.K_vec = es.eigenvectors().cast<cplx>();
    m.xi.assign(grid.d, RVec(N));
    for (int l = 0; l < grid.d; ++l)
        for (int k = 0; k < N; ++k) m.xi[l][k] = quad.points[k][l];

    for (int l = 0; l < grid.d; ++l) {
        std::vector<KronFactor> fs{KronFactor::diagonal(m.xi[l])};
        for (auto& f : axis_factors(grid, l, KronFactor::Kind::Momentum)) fs.push_back(f);
        fs.push_back(KronFactor::identity(pgrid.N));
        m.H.terms.push_back(term(fs, -1.0));
    }
    std::vector<KronFactor> fs{KronFactor::matrix(m.K)};
    for (int l = 0; l < grid.d; ++l) fs.push_back(KronFactor::identity(grid.M));
    fs.push_back(p_momentum(pgrid));
    m.H.terms.push_back(term(fs, -1.0));
    return m;
}

CVec boltzmann_scale(const BoltzmannModel& m, const CVec& f) {
    const long long nx = m.grid.size();
    const long long block = f.size() / (long long)m.quad.size();
    if (f.size() % (long long)m.quad.size() != 0 || block % nx != 0) throw SchroError("boltzmann: size mismatch");
    CVec g = f;
    for (std::size_t k = 0; k < m.quad.size(); ++k) g.segment(k * block, block) *= m.sqrt_w[k];
    return g;
}

CVec boltzmann_unscale(const BoltzmannModel& m, const CVec& g) {
    const long long block = g.size() / (long long)m.quad.size();
    CVec f = g;
    for (std::size_t k = 0; k < m.quad.size(); ++k) f.segment(k * block, block) /= m.sqrt_w[k];
    return f;
}

double boltzmann_mass(const BoltzmannModel& m, const CVec& f) {
    const long long nx = m.grid.size();
    if (f.size() != (long long)m.quad.size() * nx) throw SchroError("boltzmann_mass: size mismatch");
    cplx s = 0.0;
    for (std::size_t k = 0; k < m.quad.size(); ++k) s += m.quad.weights[k] * f.segment(k * nx, nx).sum();
    return s.real();
}

Trajectory evolve_boltzmann(const BoltzmannModel& m, const EvolutionPlan& plan, const CVec& F0) {
    plan.validate(true);
    const int No = int(m.quad.size());
    const long long nx = m.grid.size();
    const int Np = m.pgrid.N;
    if (F0.size() != No * nx * Np) throw SchroError("evolve_boltzmann: state size mismatch");
    const double dt = plan.dt;
    const int steps = plan.n_steps();
    auto snaps = plan.snapshot_steps();
    const double norm0 = F0.norm();

    RVec mu = m.grid.mu();
    CVec phT(No * nx);
    for (int k = 0; k < No; ++k)
        for (long long i = 0; i < nx; ++i) {
            auto j = m.grid.unflatten(i);
            double th = 0.0;
            for (int l = 0; l < m.grid.d; ++l) th += m.xi[l][k] * mu[j[l]];
            phT[k * nx + i] = std::polar(1.0, -th * dt);
        }
    RVec eta = m.pgrid.eta();
    CMat phC(Np, No);
    for (int k = 0; k < No; ++k)
        for (int e = 0; e < Np; ++e) phC(e, k) = std::polar(1.0, -m.K_eig[k] * eta[e] * dt);
    CMat Qh = m.K_vec.adjoint();

    Trajectory tr;
    CVec F = F0;
    to_spectral(F.data(), No * nx, Np, 1);
    ++tr.p_transforms;
    auto emit = [&](double t) {
        CVec out = F;
        to_physical(out.data(), No * nx, Np, 1);
        tr.times.push_back(t);
        tr.states.push_back(std::move(out));
    };
    std::size_t si = 0;
    while (si < snaps.size() && snaps[si] == 0) {
        emit(0.0);
        ++si;
    }
    for (int s = 1; s <= steps; ++s) {
        grid_transform(F.data(), m.grid, No, Np, true);
        for (long long r = 0; r < No * nx; ++r) F.segment(r * Np, Np) *= phT[r];
        grid_transform(F.data(), m.grid, No, Np, false);
        tr.x_transforms += 2;
        apply_axis(Qh, F.data(), 1, No, nx * Np);
        for (int k = 0; k < No; ++k)
            for (long long i = 0; i < nx; ++i) F.segment((k * nx + i) * Np, Np).array() *= phC.col(k).array();
        apply_axis(m.K_vec, F.data(), 1, No, nx * Np);
        tr.steps = s;
        if (s < steps)
            while (si < snaps.size() && snaps[si] == s) {
                emit(s * dt);
                ++si;
            }
    }
    to_physical(F.data(), No * nx, Np, 1);
    ++tr.p_transforms;
    while (si < snaps.size()) {
        tr.times.push_back(snaps[si] * dt);
        tr.states.push_back(F);
        ++si;
    }
    if (F.norm() > plan.blowup_factor * norm0) {
        tr.blew_up = true;
        tr.blowup_time = plan.T;
    }
    return tr;
}

// ---------------------------------------------------------------- Liouville

RVec smoothed_delta(const Grid& grid, const std::vector<double>& q0, double omega) {
    if (int(q0.size()) != grid.d) throw SchroError("smoothed_delta: q0 dimension mismatch");
    if (!(omega > 0.0)) throw SchroError("smoothed_delta: omega must be > 0");
    const double len = grid.b - grid.a;
    std::vector<RVec> axis(grid.d, RVec(grid.M));
    for (int l = 0; l < grid.d; ++l)
        for (int j = 0; j < grid.M; ++j) {
            double s = 0.0;
            for (int img = -2; img <= 2; ++img) {
                double z = (grid.x(j) - q0[l] + img * len) / omega;
                s += std::exp(-0.5 * z * z);
            }
            axis[l][j] = s;
        }
    RVec rho(grid.size());
    for (long long i = 0; i < grid.size(); ++i) {
        auto j = grid.unflatten(i);
        double v = 1.0;
        for (int l = 0; l < grid.d; ++l) v *= axis[l][j[l]];
        rho[i] = v;
    }
    double mass = rho.sum() * std::pow(grid.dx(), grid.d);
    return rho / mass;
}

LiouvilleModel build_liouville(const VectorField& F, const Grid& grid, const std::vector<double>& q0, double omega) {
    grid.validate();
    if (int(q0.size()) != grid.d) throw SchroError("liouville: q0 dimension mismatch");
    for (int l = 0; l < grid.d; ++l)
        if (q0[l] < grid.a + 3 * omega || q0[l] > grid.b - 3 * omega)
            throw SchroError("liouville: q0 must lie at least 3 omega inside the grid (support would wrap)");
    const long long n = grid.size();
    if (n > 4096) throw SchroError("liouville: M^d exceeds 4096");
    LiouvilleModel m;
    m.grid = grid;
    m.omega = omega;
    m.q0 = q0;
    m.F.assign(grid.d, RVec(n));
    std::vector<double> x(grid.d);
    for (long long i = 0; i < n; ++i) {
        auto j = grid.unflatten(i);
        for (int l = 0; l < grid.d; ++l) x[l] = grid.x(j[l]);
        auto f = F(x);
        if (int(f.size()) != grid.d) throw SchroError("liouville: F has wrong dimension");
        for (int l = 0; l < grid.d; ++l) {
            if (!std::isfinite(f[l])) throw SchroError("liouville: non-finite F at node " + std::to_string(i));
            m.F[l][i] = f[l];
        }
    }
    CMat A = CMat::Zero(n, n);
    for (int l = 0; l < grid.d; ++l) {
        CMat P = term(axis_factors(grid, l, KronFactor::Kind::Momentum)).to_dense();
        A += P * m.F[l].cast<cplx>().asDiagonal();
    }
    m.sys.A = -kI * A;
    m.sys.u0 = smoothed_delta(grid, q0, omega).cast<cplx>();
    return m;
}

std::vector<double> moment_recover(const Grid& grid, const CVec& rho) {
    if (rho.size() != grid.size()) throw SchroError("moment_recover: size mismatch");
    std::vector<double> q(grid.d, 0.0);
    double mass = 0.0;
    for (long long i = 0; i < grid.size(); ++i) {
        auto j = grid.unflatten(i);
        double r = rho[i].real();
        mass += r;
        for (int l = 0; l < grid.d; ++l) q[l] += grid.x(j[l]) * r;
    }
    if (mass == 0.0) throw SchroError("moment_recover: zero mass");
    for (double& v : q) v /= mass;
    return q;
}

double discrete_mass(const Grid& grid, const CVec& rho) {
    return rho.real().sum() * std::pow(grid.dx(), grid.d);
}

}  // namespace schro
