#pragma once

#include <cstdint>

#include <Eigen/Sparse>

#include "schro/grid.hpp"

namespace schro {

enum class Engine { ExactDiagonal, Trotter1, UpwindFD, DenseExpm };

const char* engine_name(Engine e);
Engine parse_engine(const std::string& s);

struct EvolutionPlan {
    Engine engine = Engine::ExactDiagonal;
    double dt = 1e-3;
    double T = 1.0;
    std::vector<double> snapshot_times;  // sorted, within [0, T]
    double blowup_factor = 1e6;          // stop when ||w|| > factor * ||w0||

    void validate(bool stepping) const;
    int n_steps() const;
    // step index for each snapshot time (throws if a time is not on the step lattice)
    std::vector<int> snapshot_steps() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CVec> states;
    int steps = 0;
    std::uint64_t x_transforms = 0;  // full x-register transforms in the stepping pipeline
    std::uint64_t p_transforms = 0;
    bool blew_up = false;  // stopped early; states hold everything up to blowup_time
    double blowup_time = 0.0;
};

// w0 .* exp(i theta t); theta must be real to 1e-12
CVec evolve_exact_diagonal(const CVec& theta, const CVec& w0, double t);
CVec evolve_exact_diagonal(const RVec& theta, const CVec& w0, double t);

// First-order splitting for H = diag(a) (x) D_eta in x-frequency plus diag(b) (x) D_eta in position.
// State layout: x-register (j_1 slowest) then p fastest.
struct TrotterSplit {
    Grid grid;
    RVec a_modes;  // length M^d, in x-frequency order
    RVec b_nodes;  // length M^d, at x nodes
    RVec eta;      // length N
};

Trajectory evolve_trotter(const TrotterSplit& split, const EvolutionPlan& plan, const CVec& w0);

// Upwind transport d/dt w - A d/dp w = 0 with periodic closure.
struct FDTransport {
    Eigen::SparseMatrix<cplx> A;
    PGrid pgrid;
    double dt = 0.0;
    double rho = 0.0;  // spectral radius of A
    Eigen::SparseMatrix<cplx> A1() const { return A * cplx(dt / pgrid.dp()); }
    Eigen::Index n() const { return A.rows(); }
};

// Checks eigenvalues of A <= 0 and the CFL bound rho(A) dt / dp <= 1.
FDTransport build_fd_transport(const Eigen::SparseMatrix<cplx>& A, const PGrid& pgrid, double dt);
FDTransport build_fd_transport(const CMat& A, const PGrid& pgrid, double dt);
double fd_admissible_dt(const CMat& A, const PGrid& pgrid);

// One-step iteration matrix in the x-major (p fastest) layout; small instances only.
CMat fd_iteration_matrix(const FDTransport& fd);

Trajectory evolve_upwind_fd(const FDTransport& fd, const EvolutionPlan& plan, const CVec& w0);

// Periodic second-difference matrix (1/dx^2)(u_{j-1} - 2u_j + u_{j+1}) on a d-dimensional grid.
Eigen::SparseMatrix<cplx> periodic_laplacian(const Grid& grid);

// exp(t M) by scaling and squaring with a Taylor kernel; dimension <= 4096.
CMat dense_expm(const CMat& M, double t = 1.0);
CVec dense_expm_oracle(const CMat& M, const CVec& v, double t);

Trajectory evolve_dense(const CMat& generator, const EvolutionPlan& plan, const CVec& w0);

}  // namespace schro
