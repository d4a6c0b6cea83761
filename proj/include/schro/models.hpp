#pragma once

#include <optional>

#include "schro/dilation.hpp"
#include "schro/evolve.hpp"
#include "schro/kron.hpp"
#include "schro/ode.hpp"
#include "schro/warp.hpp"

namespace schro {

using VectorField = std::function<std::vector<double>(const std::vector<double>&)>;

// All generators follow d/dt w = i H w.

// ---- heat: u_t = Laplacian u + V u ----
struct HeatModel {
    Grid grid;
    PGrid pgrid;
    RVec V;          // at nodes
    RVec mu2;        // sum_l mu_l^2 per x-mode
    bool v_constant = true;
    KronSum H;       // (sum P_l^2 - V) (x) P_mu
    KronSum Hdiag;   // (sum P_l^2 - V) (x) D_mu

    TrotterSplit trotter() const;     // (sum mu^2) eta in x-frequency, -V eta at nodes
    CMat x_generator() const;         // Laplacian + V on the x-register (dense)
    Eigen::SparseMatrix<cplx> fd_generator() const;  // second differences + V
};

HeatModel build_heat(const ScalarField& V, const Grid& grid, const PGrid& pgrid);
// exact evolution: per-mode phases when V is constant, per-eta eigen blocks otherwise
WarpedState heat_evolve_exact(const HeatModel& m, const WarpedState& w0, double t);
// x-mode amplitudes |u0_hat| and speeds sum mu^2, for the s_max heuristic
std::pair<RVec, RVec> heat_mode_scan(const Grid& grid, const CVec& u0);

// ---- convection: u_t + sum_l d_l u = 0, w = sin(p) u on p in [-pi, pi) ----
struct ConvectionModel {
    Grid grid;
    int Np = 16;
    RVec p;          // p nodes
    RVec eta;        // integer frequencies
    RVec mu_sum;     // sum_l mu_l per x-mode
    KronSum H_sin;   // -sum_l D_l^mu (x) D_eta^2 (spectral basis, diagonal)
    KronSum H_direct;  // -sum_l D_l^mu
};

ConvectionModel build_convection(const Grid& grid, int Np = 16);
CVec convection_evolve_sin(const ConvectionModel& m, const CVec& u0, double t);
CVec convection_evolve_direct(const ConvectionModel& m, const CVec& u0, double t);

// ---- Black-Scholes, forward in tau on the log-price box ----
struct BlackScholesModel {
    Grid grid;
    PGrid pgrid;
    double r = 0.05;
    double sigma = 0.2;
    RVec mu;
    RVec H1_modes;  // -(sigma^2/2 mu^2 + r): dissipative part
    RVec H2_modes;  // (r - sigma^2/2) mu: oscillatory part
    bool commuting = true;
    KronSum H;      // (r - s^2/2)(P (x) I) + (s^2/2 P^2 + r) (x) P_mu
    KronSum Hdiag;  // same with D_mu on p

    // fully diagonal generator entry for x-mode mu and p-mode eta
    double entry(double mu, double eta) const;
};

BlackScholesModel build_black_scholes(double r, double sigma, const Grid& grid, const PGrid& pgrid);
WarpedState bs_evolve(const BlackScholesModel& m, const CVec& V0, double t);
CVec bs_exact(const BlackScholesModel& m, const CVec& V0, double t);
// unitarisation in the x-mode basis; n_steps = 1 is the one-shot dilation over t
LadderResult bs_unitarise(const BlackScholesModel& m, const CVec& V0, double t, int n_steps);

// ---- Fokker-Planck: f_t = sigma div(e^{-V/s} grad(e^{V/s} f)) ----
enum class FPForm { Conservation, HeatForm };

struct FokkerPlanckOptions {
    VectorField gradV;  // analytic gradient; spectral differentiation when absent
    ScalarField lapV;   // analytic Laplacian
};

struct FokkerPlanckModel {
    Grid grid;
    PGrid pgrid;
    double sigma = 1.0;
    FPForm form = FPForm::Conservation;
    RVec V;
    RVec U;          // |grad V|^2 / (4 sigma) - Laplacian V / 2
    RVec to_psi;     // e^{V/(2 sigma)}
    RVec from_psi;   // e^{-V/(2 sigma)}
    CMat Hx;         // sum B_l (Conservation) or sigma sum P_l^2 + U (HeatForm)
    KronSum H;       // Hx (x) P_mu
    KronSum Hdiag;   // Hx (x) D_mu
};

FokkerPlanckModel build_fokker_planck(const ScalarField& V, double sigma, const Grid& grid, const PGrid& pgrid,
                                      FPForm form, const FokkerPlanckOptions& opt = {});
// evolves psi = e^{V/2s} f0 on the Schrodingerised lattice
WarpedState fp_evolve(const FokkerPlanckModel& m, const CVec& f0, double t);
CVec fp_recover(const FokkerPlanckModel& m, const WarpedState& w, const Recovery& method);
// ||Hx psi_ss|| / ||sigma sum P^2 psi_ss|| with psi_ss = e^{-V/(2 sigma)}
double fp_steady_residual(const FokkerPlanckModel& m);

// ---- linear Boltzmann with isotropic scattering, discrete ordinates ----
struct QuadratureRule {
    std::vector<std::vector<double>> points;  // unit vectors
    std::vector<double> weights;              // positive, sum 1

    void validate(int d) const;
    std::size_t size() const { return weights.size(); }
    static QuadratureRule two_point();  // xi = +-1, w = 1/2
};

struct BoltzmannModel {
    Grid grid;
    PGrid pgrid;
    QuadratureRule quad;
    CMat K;                 // Lambda_w^{1/2} Xi Lambda_w^{1/2} - I
    RVec sqrt_w;
    std::vector<RVec> xi;   // per axis l: (xi_{kl})_k
    RVec K_eig;
    CMat K_vec;
    KronSum H;              // -(sum Lambda_xi_l (x) P_l (x) I + K (x) I (x) P_mu)

    long long register_size() const { return (long long)quad.size() * grid.size(); }
};

BoltzmannModel build_boltzmann(const QuadratureRule& quad, const Grid& grid, const PGrid& pgrid);
CVec boltzmann_scale(const BoltzmannModel& m, const CVec& f);    // Lambda_w^{1/2} f
CVec boltzmann_unscale(const BoltzmannModel& m, const CVec& g);
double boltzmann_mass(const BoltzmannModel& m, const CVec& f);   // sum_k w_k sum_j f_k(x_j)
// first-order split: x-frequency transport phase, then the collision block via K's eigenbasis
Trajectory evolve_boltzmann(const BoltzmannModel& m, const EvolutionPlan& plan, const CVec& F0);

// ---- Liouville representation of dq/dt = F(q) ----
struct LiouvilleModel {
    Grid grid;
    double omega = 0.05;
    std::vector<double> q0;
    std::vector<RVec> F;  // F_i at nodes
    LinearSystem sys;     // A = -i sum P_i Lambda_{F_i}, u0 = smoothed delta
};

RVec smoothed_delta(const Grid& grid, const std::vector<double>& q0, double omega);
LiouvilleModel build_liouville(const VectorField& F, const Grid& grid, const std::vector<double>& q0, double omega);
std::vector<double> moment_recover(const Grid& grid, const CVec& rho);
double discrete_mass(const Grid& grid, const CVec& rho);

}  // namespace schro
