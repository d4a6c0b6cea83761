#pragma once

#include <utility>

#include "schro/common.hpp"

namespace schro {

enum class DilationVariant { ExactExp, TheoremArccos };

struct DilationStep {
    CMat Hdt;     // e^{H1 dt} (ExactExp) or H1 dt (TheoremArccos)
    CMat S;       // sqrt(I - Hdt^2)
    CMat Utilde;  // [[Hdt, S], [S, -Hdt]]
    CMat phase;   // e^{i H2 dt}
    double dt = 0.0;
    DilationVariant variant = DilationVariant::ExactExp;
    double norm1_a = 0.0;   // ||H1 + i H2||_1
    double norm2_h1 = 0.0;  // ||H1||_2

    Eigen::Index n() const { return Hdt.rows(); }
};

// f(H) for Hermitian H via eigendecomposition
CMat hermitian_function(const CMat& H, const std::function<double(double)>& f);
// arccos of a Hermitian matrix with spectrum clamped into [-1, 1]
CMat hermitian_arccos(const CMat& H);
// sqrt(I - H^2), eigenvalues of I - H^2 below zero clamped (down to -1e-12) to zero
CMat dilation_block(const CMat& H);

DilationStep build_dilation_step(const CMat& H1, const CMat& H2, double dt,
                                 DilationVariant variant = DilationVariant::ExactExp);

// (sigma_z (x) I) e^{i sigma_y (x) arccos(Hdt)}, built independently of Utilde
CMat rotation_form(const DilationStep& step);

struct DilationOutcome {
    CVec top;
    CVec bottom;
};

DilationOutcome evolutionary_step(const DilationStep& step, const CVec& psi);

// probability = ||top||^2 / (||top||^2 + ||bottom||^2), state = top / ||top||
std::pair<CVec, double> postselect(const CVec& top, const CVec& bottom);

// Slot 0 is the working register; slots 1..N_t are fresh ancilla slots, one per U_j.
class DilationLadder {
public:
    DilationLadder(const DilationStep& step, int n_steps, const CVec& psi0);

    void apply(int j);  // U_j on slots (0, j)
    void run();         // U_1 ... U_{N_t}
    int n_steps() const { return n_steps_; }
    int n_slots() const { return n_steps_ + 1; }
    const CVec& state() const { return state_; }
    CVec slot(int s) const;
    const std::vector<double>& success_log() const { return success_log_; }

    // dense U_j on the full slot register (small instances)
    CMat operator_matrix(int j) const;

private:
    DilationStep step_;
    int n_steps_;
    Eigen::Index n_;
    CVec state_;
    double norm0_sq_;
    std::vector<double> success_log_;
};

struct LadderResult {
    CVec final_top;
    double success_prob = 0.0;
    std::vector<double> success_log;  // cumulative probability after each U_j
};

LadderResult ladder_evolve(const CMat& H1, const CMat& H2, double dt, int n_steps, const CVec& psi0,
                           DilationVariant variant = DilationVariant::ExactExp);

}  // namespace schro
