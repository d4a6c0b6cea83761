#include "schro/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

namespace schro {

CMat hermitian_function(const CMat& H, const std::function<double(double)>& f) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
    RVec fl = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * fl.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMat hermitian_arccos(const CMat& H) {
    return hermitian_function(H, [](double x) { return std::acos(std::clamp(x, -1.0, 1.0)); });
}

CMat dilation_block(const CMat& H) {
    const Eigen::Index n = H.rows();
    CMat G = CMat::Identity(n, n) - H * H;
    return hermitian_function(G, [](double x) {
        if (x < -1e-12) throw SchroError("dilation: I - H^2 has eigenvalue " + std::to_string(x) + " < 0");
        return std::sqrt(std::max(x, 0.0));
    });
}

DilationStep build_dilation_step(const CMat& H1, const CMat& H2, double dt, DilationVariant variant) {
    if (H1.rows() != H1.cols() || H2.rows() != H1.rows() || H2.cols() != H1.cols())
        throw SchroError("dilation: H1 and H2 must be square and equally sized");
    if (!(dt > 0.0)) throw SchroError("dilation: dt must be > 0");
    const Eigen::Index n = H1.rows();
    DilationStep st;
    st.dt = dt;
    st.variant = variant;
    CMat A = H1 + kI * H2;
    st.norm1_a = A.cwiseAbs().colwise().sum().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H1 + H1.adjoint()));
    st.norm2_h1 = es.eigenvalues().cwiseAbs().maxCoeff();
    char buf[256];
    if (variant == DilationVariant::ExactExp) {
        double lmax = es.eigenvalues().maxCoeff();
        if (lmax > 1e-10) {
            std::snprintf(buf, sizeof buf,
                          "dilation: H1 has eigenvalue %.6g > 0, so ||e^{H1 dt}|| > 1 for every dt > 0", lmax);
            throw SchroError(buf);
        }
        RVec ex = (es.eigenvalues() * dt).array().exp();
        st.Hdt = es.eigenvectors() * ex.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    } else {
        if (st.norm1_a * dt > 1.0 + 1e-12) {
            double adm = 1.0 / st.norm1_a;
            std::snprintf(buf, sizeof buf,
                          "dilation: ||A||_1 dt = %.6g > 1 (||H1||_2 dt = %.6g); admissible dt <= %.17g",
                          st.norm1_a * dt, st.norm2_h1 * dt, adm);
            throw CflError(buf, adm);
        }
        st.Hdt = H1 * dt;
    }
    st.Hdt = 0.5 * (st.Hdt + st.Hdt.adjoint()).eval();
    st.S = dilation_block(st.Hdt);
    st.Utilde.resize(2 * n, 2 * n);
    st.Utilde << st.Hdt, st.S, st.S, -st.Hdt;
    Eigen::SelfAdjointEigenSolver<CMat> es2(0.5 * (H2 + H2.adjoint()));
    CVec ph(n);
    for (Eigen::Index k = 0; k < n; ++k) ph[k] = std::polar(1.0, es2.eigenvalues()[k] * dt);
    st.phase = es2.eigenvectors() * ph.asDiagonal() * es2.eigenvectors().adjoint();
    return st;
}

CMat rotation_form(const DilationStep& step) {
    const Eigen::Index n = step.n();
    CMat C = hermitian_arccos(step.Hdt);
    // e^{i sigma_y (x) C} = I (x) cos C + i sigma_y (x) sin C, with C = V diag(c) V^H
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (C + C.adjoint()));
    const CMat& V = es.eigenvectors();
    RVec c = es.eigenvalues();
    CMat cosC = V * c.array().cos().matrix().cast<cplx>().asDiagonal() * V.adjoint();
    CMat sinC = V * c.array().sin().matrix().cast<cplx>().asDiagonal() * V.adjoint();
    CMat E(2 * n, 2 * n);
    // i sigma_y = [[0, 1], [-1, 0]]
    E << cosC, sinC, -sinC, cosC;
    CMat Z = CMat::Identity(2 * n, 2 * n);
    Z.bottomRightCorner(n, n) *= -1.0;
    return Z * E;
}

DilationOutcome evolutionary_step(const DilationStep& step, const CVec& psi) {
    if (psi.size() != step.n()) throw SchroError("evolutionary_step: size mismatch");
    CVec e = step.phase * psi;
    return {step.Hdt * e, step.S * e};
}

std::pair<CVec, double> postselect(const CVec& top, const CVec& bottom) {
    double t2 = top.squaredNorm(), b2 = bottom.squaredNorm();
    if (t2 + b2 == 0.0) throw SchroError("postselect: zero total norm");
    double p = t2 / (t2 + b2);
    CVec state = t2 > 0.0 ? CVec(top / std::sqrt(t2)) : CVec(CVec::Zero(top.size()));
    return {state, p};
}

DilationLadder::DilationLadder(const DilationStep& step, int n_steps, const CVec& psi0)
    : step_(step), n_steps_(n_steps), n_(step.n()) {
    if (n_steps < 1) throw SchroError("ladder: N_t must be >= 1");
    if (psi0.size() != n_) throw SchroError("ladder: psi0 size mismatch");
    state_ = CVec::Zero((n_steps + 1) * n_);
    state_.head(n_) = psi0;
    norm0_sq_ = psi0.squaredNorm();
    if (norm0_sq_ == 0.0) throw SchroError("ladder: psi0 must be non-zero");
}

CVec DilationLadder::slot(int s) const { return state_.segment(s * n_, n_); }

void DilationLadder::apply(int j) {
    if (j < 1 || j > n_steps_) throw SchroError("ladder: U_j index out of range");
    CVec a = step_.phase * state_.head(n_);
    CVec b = step_.phase * state_.segment(j * n_, n_);
    state_.head(n_) = step_.Hdt * a + step_.S * b;
    state_.segment(j * n_, n_) = step_.S * a - step_.Hdt * b;
    success_log_.push_back(state_.head(n_).squaredNorm() / norm0_sq_);
}

void DilationLadder::run() {
    for (int j = 1; j <= n_steps_; ++j) apply(j);
}

CMat DilationLadder::operator_matrix(int j) const {
    if (j < 1 || j > n_steps_) throw SchroError("ladder: U_j index out of range");
    const Eigen::Index dim = (n_steps_ + 1) * n_;
    if (dim > 4096) throw SchroError("ladder: operator too large to materialise");
    CMat U = CMat::Identity(dim, dim);
    CMat He = step_.Hdt * step_.phase, Se = step_.S * step_.phase;
    U.block(0, 0, n_, n_) = He;
    U.block(0, j * n_, n_, n_) = Se;
    U.block(j * n_, 0, n_, n_) = Se;
    U.block(j * n_, j * n_, n_, n_) = -He;
    return U;
}

LadderResult ladder_evolve(const CMat& H1, const CMat& H2, double dt, int n_steps, const CVec& psi0,
                           DilationVariant variant) {
    DilationStep st = build_dilation_step(H1, H2, dt, variant);
    DilationLadder lad(st, n_steps, psi0);
    lad.run();
    LadderResult r;
    r.final_top = lad.slot(0);
    r.success_prob = r.final_top.squaredNorm() / psi0.squaredNorm();
    r.success_log = lad.success_log();
    return r;
}

}  // namespace schro
