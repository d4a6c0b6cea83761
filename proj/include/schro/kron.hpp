#pragma once

#include <functional>
#include <vector>

#include "schro/grid.hpp"

namespace schro {

struct KronFactor {
    enum class Kind { Identity, Diagonal, Momentum, MomentumSquared, Dense };
    Kind kind = Kind::Identity;
    int dim = 1;
    CVec diag;         // Diagonal
    CMat dense;        // Dense
    double a = -1.0;   // Momentum / MomentumSquared interval
    double b = 1.0;

    static KronFactor identity(int n);
    static KronFactor diagonal(const CVec& d);
    static KronFactor diagonal(const RVec& d) { return diagonal(CVec(d.cast<cplx>())); }
    static KronFactor momentum(const Grid& g);
    static KronFactor momentum_squared(const Grid& g);
    static KronFactor momentum(double a, double b, int M);
    static KronFactor momentum_squared(double a, double b, int M);
    static KronFactor matrix(const CMat& A);

    CMat to_dense() const;
    RVec mu() const;
};

// scale * (F_1 (x) F_2 (x) ... (x) F_k), first factor slowest.
struct KronOperator {
    std::vector<KronFactor> factors;
    cplx scale{1.0, 0.0};

    long long dim() const;
    CVec apply(const CVec& v) const;
    void apply_inplace(CVec& v) const;
    CMat to_dense() const;  // small instances only
};

struct KronSum {
    std::vector<KronOperator> terms;

    long long dim() const;
    CVec apply(const CVec& v) const;
    CMat to_dense() const;
};

CVec kron_apply(const KronOperator& op, const CVec& v);

using ScalarField = std::function<double(const std::vector<double>&)>;

// Samples f at every node in global index order (j_1 slowest).
RVec sample_function(const ScalarField& f, const Grid& grid);
KronOperator diag_from_function(const ScalarField& f, const Grid& grid);

// I^{(l)} (x) P (x) I^{(d-l-1)} factor lists for axis l of a d-dimensional grid.
std::vector<KronFactor> axis_factors(const Grid& grid, int axis, KronFactor::Kind kind);

double max_abs_diff(const CMat& A, const CMat& B);
double hermiticity_defect(const CMat& H);

}  // namespace schro
