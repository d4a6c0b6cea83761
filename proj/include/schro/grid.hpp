#pragma once

#include <vector>

#include "schro/common.hpp"

namespace schro {

// Uniform periodic lattice on [a,b)^d with M = 2^m points per axis.
struct Grid {
    double a = -1.0;
    double b = 1.0;
    int M = 16;
    int d = 1;

    void validate() const;
    double dx() const { return (b - a) / M; }
    int m() const { return ilog2(M); }
    double x(int j) const { return a + j * dx(); }
    long long size() const;  // M^d

    RVec points() const;  // one axis
    // mu_k = 2 pi (k - M/2) / (b - a), k = 0..M-1
    RVec mu() const;

    // global index, j_1 slowest
    long long flatten(const std::vector<int>& j) const;
    std::vector<int> unflatten(long long idx) const;
};

// Auxiliary p lattice on [L, R) with N points.
struct PGrid {
    double L = -5.0;
    double R = 5.0;
    int N = 512;
    double alpha_neg = 10.0;
    double L0 = -1.0;

    void validate() const;
    double dp() const { return (R - L) / N; }
    double p(int j) const { return L + j * dp(); }
    RVec points() const;
    RVec eta() const;  // Fourier dual of p
    double alpha(double pv) const { return pv >= 0.0 ? 1.0 : alpha_neg; }
    int first_positive() const;  // index of the smallest p_j > 0
};

struct SpectralOps {
    CMat Phi;
    RVec Dmu;
    CMat Pmu;
    RVec Dx;
};

CMat fourier_matrix(int M);
// Unitary DFT with the e^{+2 pi i jk/M}/sqrt(M) convention.
CMat dft_matrix(int M);
SpectralOps momentum_operator(const Grid& grid);

// Phi^{-1} (to_modes) or Phi along every axis of a grid block stored as (outer, M^d, inner).
void grid_transform(cplx* data, const Grid& g, long long outer, long long inner, bool to_modes);

// Spectral derivative of order k of periodic samples on one axis.
RVec spectral_derivative(const RVec& f, const Grid& grid, int order);
// Partial derivative along `axis` of samples over the full grid (global index order).
RVec spectral_partial(const RVec& f, const Grid& grid, int axis, int order);

}  // namespace schro
