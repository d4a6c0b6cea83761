#pragma once

#include <utility>

#include "schro/kron.hpp"
#include "schro/warp.hpp"

namespace schro {

// du/dt = A u + b, u(0) = u0; b constant
struct LinearSystem {
    CMat A;
    CVec b;
    CVec u0;

    Eigen::Index n() const { return A.rows(); }
    bool has_source() const { return b.size() > 0 && b.cwiseAbs().maxCoeff() > 0.0; }
    void validate() const;
};

// A = H1 + i H2
struct HermitianSplit {
    CMat H1;
    CMat H2;
    bool stable = true;        // H1 negative semi-definite
    double h1_max_eig = 0.0;
    double h1_min_eig = 0.0;
    int sparsity_h1 = 0;       // max non-zeros per row
    int sparsity_h2 = 0;
    double max_norm_h1 = 0.0;
    double max_norm_h2 = 0.0;
    double max_norm_a = 0.0;
};

// Hamiltonian for d/dt w = i H w on (register) (x) (p lattice).
struct SchrodingerisedSystem {
    HermitianSplit split;
    PGrid pgrid;
    KronSum H;      // -(H1 (x) P_mu) + H2 (x) I
    KronSum Hdiag;  // -(H1 (x) D_mu) + H2 (x) I
    WarpedState w0;

    Eigen::Index n() const { return split.H1.rows(); }
};

LinearSystem augment_inhomogeneous(const LinearSystem& sys);
HermitianSplit hermitian_split(const CMat& A);
SchrodingerisedSystem assemble_schrodingerised(const HermitianSplit& split, const PGrid& pgrid, const CVec& u0);

// Largest |eigenvalue| of a Hermitian matrix by power iteration.
double spectral_radius(const CMat& H, double tol = 1e-6, int max_iter = 10000);

// (min, max) eigenvalue of Hermitian H over eigenvectors carrying more than rel_tol of v's weight.
std::pair<double, double> weighted_spectral_bounds(const CMat& H, const CVec& v, double rel_tol = 1e-10);

struct PGridOptions {
    double L0 = -1.0;
    double alpha_neg = 10.0;
    double margin = 15.0;  // e^{-margin} truncation on the right
    double max_dp = 0.05;
    int max_N = 1 << 16;
};

// Default p-lattice for an ODE input: the left edge from estimate_domain with s_max = rho(H1),
// the right edge past any rightward transport of u0's components.
PGrid default_pgrid(const HermitianSplit& split, const CVec& u0, double T, const PGridOptions& opt = {});

// Smallest grid node above max(lambda_plus T, 0) + margin (falls back to default_p_star).
double p_star_for(const PGrid& pg, double lambda_plus, double T, double margin = 1.5);

// Exact evolution of the ODE-path system: per p-frequency block exp(i t (-eta_k H1 + H2)).
WarpedState evolve_schrodingerised(const SchrodingerisedSystem& sys, double t);
std::vector<WarpedState> evolve_schrodingerised(const SchrodingerisedSystem& sys, const std::vector<double>& times);

}  // namespace schro
