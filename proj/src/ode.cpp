#include "schro/ode.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "schro/fourier.hpp"

namespace schro {

void LinearSystem::validate() const {
    if (A.rows() < 1 || A.rows() != A.cols()) throw SchroError("linear system: A must be square and non-empty");
    if (u0.size() != A.rows()) throw SchroError("linear system: u0 length must match A");
    if (b.size() != 0 && b.size() != A.rows()) throw SchroError("linear system: b length must match A");
    if (!A.allFinite() || !u0.allFinite() || (b.size() && !b.allFinite()))
        throw SchroError("linear system: non-finite entries");
}

LinearSystem augment_inhomogeneous(const LinearSystem& sys) {
    sys.validate();
    if (!sys.has_source()) return sys;
    const Eigen::Index n = sys.n();
    LinearSystem out;
    out.A = CMat::Zero(n + 1, n + 1);
    out.A.topLeftCorner(n, n) = sys.A;
    out.A.col(n).head(n) = sys.b;
    out.u0.resize(n + 1);
    out.u0.head(n) = sys.u0;
    out.u0[n] = 1.0;
    out.b = CVec::Zero(n + 1);
    return out;
}

namespace {
int row_sparsity(const CMat& M, double tol = 0.0) {
    int s = 0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        int c = 0;
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            if (std::abs(M(i, j)) > tol) ++c;
        s = std::max(s, c);
    }
    return s;
}
}  // namespace

HermitianSplit hermitian_split(const CMat& A) {
    if (A.rows() != A.cols()) throw SchroError("hermitian_split: matrix must be square");
    HermitianSplit s;
    s.H1 = 0.5 * (A + A.adjoint());
    s.H2 = (A - A.adjoint()) / cplx(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(s.H1, Eigen::EigenvaluesOnly);
    s.h1_max_eig = es.eigenvalues().maxCoeff();
    s.h1_min_eig = es.eigenvalues().minCoeff();
    s.stable = s.h1_max_eig <= 1e-10;
    s.sparsity_h1 = row_sparsity(s.H1);
    s.sparsity_h2 = row_sparsity(s.H2);
    s.max_norm_h1 = s.H1.cwiseAbs().maxCoeff();
    s.max_norm_h2 = s.H2.cwiseAbs().maxCoeff();
    s.max_norm_a = A.cwiseAbs().maxCoeff();
    return s;
}

SchrodingerisedSystem assemble_schrodingerised(const HermitianSplit& split, const PGrid& pgrid, const CVec& u0) {
    pgrid.validate();
    const Eigen::Index n = split.H1.rows();
    if (u0.size() != n) throw SchroError("assemble_schrodingerised: u0 length mismatch");
    if (!split.stable)
        warn("H1 is not negative semi-definite (max eigenvalue " + std::to_string(split.h1_max_eig) +
             "); transport in p moves rightward for some components");
    SchrodingerisedSystem sys;
    sys.split = split;
    sys.pgrid = pgrid;

    KronOperator t1;
    t1.factors = {KronFactor::matrix(split.H1), KronFactor::momentum(pgrid.L, pgrid.R, pgrid.N)};
    t1.scale = -1.0;
    KronOperator t2;
    t2.factors = {KronFactor::matrix(split.H2), KronFactor::identity(pgrid.N)};
    sys.H.terms = {t1, t2};

    KronOperator d1;
    d1.factors = {KronFactor::matrix(split.H1), KronFactor::diagonal(pgrid.eta())};
    d1.scale = -1.0;
    sys.Hdiag.terms = {d1, t2};

    sys.w0 = extend_initial(u0, pgrid);
    return sys;
}

double spectral_radius(const CMat& H, double tol, int max_iter) {
    const Eigen::Index n = H.rows();
    if (n == 0) return 0.0;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
    v.normalize();
    double lam = 0.0;
    // power iteration on H^2 avoids sign oscillation between +-rho
    for (int it = 0; it < max_iter; ++it) {
        CVec w = H * (H * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double next = std::sqrt(nw);
        v = w / nw;
        if (std::abs(next - lam) <= tol * std::max(1.0, next)) return next;
        lam = next;
    }
    return lam;
}

std::pair<double, double> weighted_spectral_bounds(const CMat& H, const CVec& v, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    CVec c = es.eigenvectors().adjoint() * v;
    double total = c.squaredNorm();
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (std::norm(c[k]) <= rel_tol * total) continue;
        double lam = es.eigenvalues()[k];
        if (!any) {
            lo = hi = lam;
            any = true;
        }
        lo = std::min(lo, lam);
        hi = std::max(hi, lam);
    }
    return {lo, hi};
}

PGrid default_pgrid(const HermitianSplit& split, const CVec& u0, double T, const PGridOptions& opt) {
    double s_max = spectral_radius(split.H1);
    auto [lo, hi] = weighted_spectral_bounds(split.H1, u0);
    (void)lo;
    PGrid pg;
    pg.L0 = opt.L0;
    pg.alpha_neg = opt.alpha_neg;
    pg.L = estimate_domain(T, std::max(s_max, 1e-12), opt.L0);
    pg.R = std::max(hi, 0.0) * T + opt.margin;
    int N = 2;
    while ((pg.R - pg.L) / N > opt.max_dp && N < opt.max_N) N *= 2;
    pg.N = N;
    return pg;
}

double p_star_for(const PGrid& pg, double lambda_plus, double T, double margin) {
    double target = std::max(lambda_plus * T, 0.0) + margin;
    if (lambda_plus <= 1e-10) return default_p_star(pg);
    for (int j = 0; j < pg.N; ++j)
        if (pg.p(j) > target) return pg.p(j);
    throw SchroError("p_star_for: no grid node beyond " + std::to_string(target) + "; enlarge R");
}

std::vector<WarpedState> evolve_schrodingerised(const SchrodingerisedSystem& sys, const std::vector<double>& times) {
    const PGrid& pg = sys.pgrid;
    const Eigen::Index n = sys.n();
    const int N = pg.N;
    CVec hat = sys.w0.values;
    to_spectral(hat.data(), n, N, 1);
    Eigen::Map<CMat> H(hat.data(), N, n);  // row k is the eta_k block
    RVec eta = pg.eta();

    const bool h2_zero = sys.split.H2.cwiseAbs().maxCoeff() == 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> h1es;
    if (h2_zero) h1es.compute(sys.split.H1);

    std::vector<CMat> out_hat(times.size(), CMat(N, n));
    parallel_for(std::size_t(N), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            RVec lam;
            CMat V;
            if (h2_zero) {
                lam = -eta[k] * h1es.eigenvalues();
                V = h1es.eigenvectors();
            } else {
                CMat Hk = -eta[k] * sys.split.H1 + sys.split.H2;
                Eigen::SelfAdjointEigenSolver<CMat> es(Hk);
                lam = es.eigenvalues();
                V = es.eigenvectors();
            }
            CVec c = V.adjoint() * H.row(Eigen::Index(k)).transpose();
            for (std::size_t ti = 0; ti < times.size(); ++ti) {
                CVec ph(n);
                for (Eigen::Index i = 0; i < n; ++i) ph[i] = std::exp(kI * (lam[i] * times[ti])) * c[i];
                out_hat[ti].row(Eigen::Index(k)) = (V * ph).transpose();
            }
        }
    });

    std::vector<WarpedState> out;
    out.reserve(times.size());
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        WarpedState w = sys.w0;
        w.t = times[ti];
        w.values = Eigen::Map<CVec>(out_hat[ti].data(), N * n);
        to_physical(w.values.data(), n, N, 1);
        out.push_back(std::move(w));
    }
    return out;
}

WarpedState evolve_schrodingerised(const SchrodingerisedSystem& sys, double t) {
    return evolve_schrodingerised(sys, std::vector<double>{t}).front();
}

}  // namespace schro
