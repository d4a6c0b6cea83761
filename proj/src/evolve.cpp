#include "schro/evolve.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

#include "schro/fourier.hpp"
#include "schro/kron.hpp"
#include "schro/ode.hpp"

namespace schro {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::ExactDiagonal: return "ExactDiagonal";
        case Engine::Trotter1: return "Trotter1";
        case Engine::UpwindFD: return "UpwindFD";
        case Engine::DenseExpm: return "DenseExpm";
    }
    return "?";
}

Engine parse_engine(const std::string& s) {
    if (s == "ExactDiagonal") return Engine::ExactDiagonal;
    if (s == "Trotter1") return Engine::Trotter1;
    if (s == "UpwindFD") return Engine::UpwindFD;
    if (s == "DenseExpm") return Engine::DenseExpm;
    throw SchemaError("unknown engine '" + s + "'");
}

void EvolutionPlan::validate(bool stepping) const {
    if (!(T > 0.0)) throw SchemaError("plan: T must be > 0");
    if (!(dt > 0.0)) throw SchemaError("plan: dt must be > 0");
    if (stepping) {
        double r = T / dt;
        double k = std::round(r);
        if (std::abs(r - k) > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, r))
            throw SchemaError("plan: T/dt must be an integer, got " + std::to_string(r));
    }
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        double t = snapshot_times[i];
        if (t < 0.0 || t > T * (1 + 1e-12)) throw SchemaError("plan: snapshot time outside [0, T]");
        if (i > 0 && t < snapshot_times[i - 1]) throw SchemaError("plan: snapshot times must be sorted");
    }
}

int EvolutionPlan::n_steps() const { return int(std::llround(T / dt)); }

std::vector<int> EvolutionPlan::snapshot_steps() const {
    std::vector<int> out;
    for (double t : snapshot_times) {
        double r = t / dt;
        long long k = std::llround(r);
        if (std::abs(r - double(k)) > 1e-9 * std::max(1.0, r))
            throw SchemaError("plan: snapshot time " + std::to_string(t) + " is not a multiple of dt");
        out.push_back(int(k));
    }
    return out;
}

CVec evolve_exact_diagonal(const CVec& theta, const CVec& w0, double t) {
    if (theta.size() != w0.size()) throw SchroError("evolve_exact_diagonal: size mismatch");
    if (theta.size() && theta.imag().cwiseAbs().maxCoeff() > 1e-12)
        throw SchroError("evolve_exact_diagonal: diagonal entries must be real");
    return evolve_exact_diagonal(RVec(theta.real()), w0, t);
}

CVec evolve_exact_diagonal(const RVec& theta, const CVec& w0, double t) {
    if (theta.size() != w0.size()) throw SchroError("evolve_exact_diagonal: size mismatch");
    CVec out(w0.size());
    for (Eigen::Index k = 0; k < w0.size(); ++k) out[k] = std::polar(1.0, theta[k] * t) * w0[k];
    return out;
}

namespace {

void x_transform(CVec& v, const Grid& g, int N, bool to_modes) { grid_transform(v.data(), g, 1, N, to_modes); }

void record(Trajectory& tr, double t, const CVec& v) {
    tr.times.push_back(t);
    tr.states.push_back(v);
}

}  // namespace

Trajectory evolve_trotter(const TrotterSplit& split, const EvolutionPlan& plan, const CVec& w0) {
    plan.validate(true);
    const Grid& g = split.grid;
    const long long nx = g.size();
    const int N = int(split.eta.size());
    if (split.a_modes.size() != nx || split.b_nodes.size() != nx || w0.size() != nx * N)
        throw SchroError("evolve_trotter: inconsistent sizes");

    const int steps = plan.n_steps();
    auto snaps = plan.snapshot_steps();
    const double dt = plan.dt;
    const double norm0 = w0.norm();

    // per-step phase tables
    CVec phA(nx * N), phB(nx * N);
    for (long long i = 0; i < nx; ++i)
        for (int k = 0; k < N; ++k) {
            phA[i * N + k] = std::polar(1.0, split.a_modes[i] * split.eta[k] * dt);
            phB[i * N + k] = std::polar(1.0, split.b_nodes[i] * split.eta[k] * dt);
        }

    Trajectory tr;
    CVec w = w0;
    to_spectral(w.data(), nx, N, 1);
    ++tr.p_transforms;

    auto emit = [&](double t) {
        CVec out = w;
        to_physical(out.data(), nx, N, 1);
        record(tr, t, out);
    };
    std::size_t si = 0;
    while (si < snaps.size() && snaps[si] == 0) {
        emit(0.0);
        ++si;
    }
    for (int n = 1; n <= steps; ++n) {
        x_transform(w, g, N, true);
        w.array() *= phA.array();
        x_transform(w, g, N, false);
        w.array() *= phB.array();
        tr.x_transforms += 2;
        tr.steps = n;
        if (n < steps) {
            while (si < snaps.size() && snaps[si] == n) {
                emit(n * dt);
                ++si;
            }
        }
    }
    to_physical(w.data(), nx, N, 1);
    ++tr.p_transforms;
    while (si < snaps.size()) {
        record(tr, snaps[si] * dt, w);
        ++si;
    }
    if (w.norm() > plan.blowup_factor * norm0) {
        tr.blew_up = true;
        tr.blowup_time = plan.T;
    }
    return tr;
}

Eigen::SparseMatrix<cplx> periodic_laplacian(const Grid& grid) {
    grid.validate();
    const long long n = grid.size();
    const double c = 1.0 / (grid.dx() * grid.dx());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(std::size_t(n) * (2 * grid.d + 1));
    for (long long idx = 0; idx < n; ++idx) {
        auto j = grid.unflatten(idx);
        trip.emplace_back(idx, idx, -2.0 * grid.d * c);
        for (int ax = 0; ax < grid.d; ++ax) {
            for (int s : {-1, 1}) {
                auto jj = j;
                jj[ax] = (j[ax] + s + grid.M) % grid.M;
                trip.emplace_back(idx, grid.flatten(jj), c);
            }
        }
    }
    Eigen::SparseMatrix<cplx> L(n, n);
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

namespace {

struct SpectrumInfo {
    double max_real;
    double rho;
};

SpectrumInfo spectrum_info(const CMat& A) {
    if (A.rows() > 4096) throw SchroError("fd transport: matrix too large for the eigenvalue check");
    double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if (hermiticity_defect(A) <= 1e-12 * scale) {
        CMat H = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
        return {es.eigenvalues().maxCoeff(), spectral_radius(H)};
    }
    Eigen::ComplexEigenSolver<CMat> es(A, false);
    double mr = -std::numeric_limits<double>::infinity(), rho = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        mr = std::max(mr, es.eigenvalues()[k].real());
        rho = std::max(rho, std::abs(es.eigenvalues()[k]));
    }
    return {mr, rho};
}

}  // namespace

double fd_admissible_dt(const CMat& A, const PGrid& pgrid) {
    auto info = spectrum_info(A);
    if (info.rho == 0.0) return std::numeric_limits<double>::infinity();
    return pgrid.dp() / info.rho;
}

FDTransport build_fd_transport(const CMat& A, const PGrid& pgrid, double dt) {
    pgrid.validate();
    if (A.rows() != A.cols()) throw SchroError("fd transport: A must be square");
    if (!(dt > 0.0)) throw SchroError("fd transport: dt must be > 0");
    auto info = spectrum_info(A);
    double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if (info.max_real > 1e-10 * scale)
        throw SchroError("fd transport: A has an eigenvalue with positive real part (" +
                         std::to_string(info.max_real) + "); the upwind direction is invalid");
    double admissible = info.rho > 0.0 ? pgrid.dp() / info.rho : std::numeric_limits<double>::infinity();
    // the power-iteration estimate carries ~1e-6 relative error
    if (info.rho * dt / pgrid.dp() > 1.0 + 1e-6) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "CFL violated: rho(A) dt/dp = %.6g > 1; admissible dt <= %.17g",
                      info.rho * dt / pgrid.dp(), admissible);
        throw CflError(buf, admissible);
    }
    FDTransport fd;
    fd.A = A.sparseView();
    fd.pgrid = pgrid;
    fd.dt = dt;
    fd.rho = info.rho;
    return fd;
}

FDTransport build_fd_transport(const Eigen::SparseMatrix<cplx>& A, const PGrid& pgrid, double dt) {
    FDTransport fd = build_fd_transport(CMat(A), pgrid, dt);
    fd.A = A;
    return fd;
}

CMat fd_iteration_matrix(const FDTransport& fd) {
    const Eigen::Index n = fd.n();
    const int N = fd.pgrid.N;
    if (n * N > 4096) throw SchroError("fd_iteration_matrix: too large");
    CMat A1 = CMat(fd.A1());
    CMat B = CMat::Zero(n * N, n * N);
    // w_j^{n+1} = (I + A1) w_j - A1 w_{j+1}, j+1 taken periodically
    for (int j = 0; j < N; ++j) {
        int jn = (j + 1) % N;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) {
                B(r * N + j, c * N + j) += (r == c ? 1.0 : 0.0) + A1(r, c);
                B(r * N + j, c * N + jn) -= A1(r, c);
            }
    }
    return B;
}

Trajectory evolve_upwind_fd(const FDTransport& fd, const EvolutionPlan& plan, const CVec& w0) {
    plan.validate(true);
    const Eigen::Index n = fd.n();
    const int N = fd.pgrid.N;
    if (w0.size() != n * N) throw SchroError("evolve_upwind_fd: state size mismatch");
    if (std::abs(plan.dt - fd.dt) > 1e-14 * fd.dt) throw SchroError("evolve_upwind_fd: plan dt differs from the transport dt");
    const int steps = plan.n_steps();
    auto snaps = plan.snapshot_steps();
    const double norm0 = w0.norm();

    Eigen::SparseMatrix<cplx, Eigen::RowMajor> A1t = fd.A1().transpose();
    CMat W = Eigen::Map<const CMat>(w0.data(), N, n);
    CMat D(N, n);
    Trajectory tr;
    std::size_t si = 0;
    auto emit = [&](double t) { record(tr, t, Eigen::Map<const CVec>(W.data(), n * N)); };
    while (si < snaps.size() && snaps[si] == 0) {
        emit(0.0);
        ++si;
    }
    for (int s = 1; s <= steps; ++s) {
        D.topRows(N - 1) = W.topRows(N - 1) - W.bottomRows(N - 1);
        D.row(N - 1) = W.row(N - 1) - W.row(0);
        W += D * A1t;
        tr.steps = s;
        while (si < snaps.size() && snaps[si] == s) {
            emit(s * plan.dt);
            ++si;
        }
        if (!std::isfinite(W.norm()) || W.norm() > plan.blowup_factor * norm0) {
            tr.blew_up = true;
            tr.blowup_time = s * plan.dt;
            emit(s * plan.dt);
            return tr;
        }
    }
    return tr;
}

namespace {

bool skew_hermitian(const CMat& M) {
    const double scale = M.cwiseAbs().maxCoeff();
    return scale > 0.0 && (M + M.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

// H from M = i H
CMat hermitian_part_of(const CMat& M) {
    CMat H = -kI * M;
    return 0.5 * (H + H.adjoint());
}

CVec phases(const RVec& lambda, double t) {
    CVec ph(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) ph[k] = std::polar(1.0, lambda[k] * t);
    return ph;
}

}  // namespace

CMat dense_expm(const CMat& M, double t) {
    if (M.rows() != M.cols()) throw SchroError("dense_expm: matrix must be square");
    if (M.rows() > 4096) throw SchroError("dense_expm: dimension " + std::to_string(M.rows()) + " exceeds the 4096 guard");
    const Eigen::Index n = M.rows();
    // i H with H Hermitian: the eigenbasis keeps the propagator unitary
    if (skew_hermitian(M)) {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part_of(M));
        return es.eigenvectors() * phases(es.eigenvalues(), t).asDiagonal() * es.eigenvectors().adjoint();
    }
    CMat A = M * t;
    double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > 0.25) s = int(std::ceil(std::log2(norm1 / 0.25)));
    A /= std::ldexp(1.0, s);
    CMat E = CMat::Identity(n, n);
    CMat term = CMat::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * A) / double(k);
        E += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-18 * E.cwiseAbs().maxCoeff()) break;
    }
    for (int i = 0; i < s; ++i) E = (E * E).eval();
    return E;
}

CVec dense_expm_oracle(const CMat& M, const CVec& v, double t) {
    if (v.size() != M.rows()) throw SchroError("dense_expm_oracle: size mismatch");
    return dense_expm(M, t) * v;
}

Trajectory evolve_dense(const CMat& generator, const EvolutionPlan& plan, const CVec& w0) {
    plan.validate(false);
    Trajectory tr;
    if (skew_hermitian(generator)) {
        if (generator.rows() > 4096) throw SchroError("evolve_dense: dimension exceeds the 4096 guard");
        if (w0.size() != generator.rows()) throw SchroError("evolve_dense: size mismatch");
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part_of(generator));
        CVec c = es.eigenvectors().adjoint() * w0;
        for (double t : plan.snapshot_times) record(tr, t, es.eigenvectors() * phases(es.eigenvalues(), t).cwiseProduct(c));
    } else {
        for (double t : plan.snapshot_times) record(tr, t, dense_expm_oracle(generator, w0, t));
    }
    if (!tr.states.empty() && tr.states.back().norm() > plan.blowup_factor * w0.norm()) {
        tr.blew_up = true;
        tr.blowup_time = tr.times.back();
    }
    return tr;
}

}  // namespace schro
