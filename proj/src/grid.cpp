#include "schro/grid.hpp"

#include <cmath>

#include "schro/fourier.hpp"

namespace schro {

void Grid::validate() const {
    if (!(b > a)) throw SchroError("grid: need b > a");
    if (M < 2 || !is_pow2(M)) throw SchroError("grid: M must be an even power of two, got " + std::to_string(M));
    if (d < 1) throw SchroError("grid: d must be >= 1");
    double total = std::pow(double(M), d);
    if (total > double(1LL << 40)) throw SchroError("grid: M^d too large");
}

long long Grid::size() const {
    long long n = 1;
    for (int k = 0; k < d; ++k) n *= M;
    return n;
}

RVec Grid::points() const {
    RVec x(M);
    for (int j = 0; j < M; ++j) x[j] = this->x(j);
    return x;
}

RVec Grid::mu() const {
    RVec out(M);
    for (int k = 0; k < M; ++k) out[k] = 2.0 * kPi * (k - M / 2) / (b - a);
    return out;
}

long long Grid::flatten(const std::vector<int>& j) const {
    if (int(j.size()) != d) throw SchroError("flatten: index has wrong dimension");
    long long idx = 0;
    for (int k = 0; k < d; ++k) {
        if (j[k] < 0 || j[k] >= M) throw SchroError("flatten: index out of range");
        idx = idx * M + j[k];
    }
    return idx;
}

std::vector<int> Grid::unflatten(long long idx) const {
    if (idx < 0 || idx >= size()) throw SchroError("unflatten: index out of range");
    std::vector<int> j(d);
    for (int k = d - 1; k >= 0; --k) {
        j[k] = int(idx % M);
        idx /= M;
    }
    return j;
}

void PGrid::validate() const {
    if (!(L < 0.0)) throw SchroError("pgrid: need L < 0");
    if (!(R > 0.0)) throw SchroError("pgrid: need R > 0");
    if (N < 2 || !is_pow2(N)) throw SchroError("pgrid: N must be an even power of two, got " + std::to_string(N));
    if (!(alpha_neg >= 1.0)) throw SchroError("pgrid: alpha_neg must be >= 1");
    if (!(L0 > L && L0 < 0.0)) throw SchroError("pgrid: need L < L0 < 0");
}

RVec PGrid::points() const {
    RVec out(N);
    for (int j = 0; j < N; ++j) out[j] = p(j);
    return out;
}

RVec PGrid::eta() const {
    RVec out(N);
    for (int k = 0; k < N; ++k) out[k] = 2.0 * kPi * (k - N / 2) / (R - L);
    return out;
}

int PGrid::first_positive() const {
    for (int j = 0; j < N; ++j)
        if (p(j) > 1e-12 * dp()) return j;
    throw SchroError("pgrid: no positive node");
}

CMat dft_matrix(int M) {
    if (M < 2 || !is_pow2(M)) throw SchroError("dft_matrix: M must be a power of two >= 2");
    CMat F(M, M);
    double s = 1.0 / std::sqrt(double(M));
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) {
            long long jk = (long long)j * k % M;
            double th = 2.0 * kPi * double(jk) / M;
            F(j, k) = cplx(std::cos(th), std::sin(th)) * s;
        }
    return F;
}

CMat fourier_matrix(int M) {
    if (M < 2 || M % 2 != 0 || !is_pow2(M))
        throw SchroError("fourier_matrix: M must be an even power of two, got " + std::to_string(M));
    // phi_l(x_j) = exp(i mu_l (x_j - a)) = (-1)^j exp(2 pi i j l / M)
    CMat Phi(M, M);
    for (int j = 0; j < M; ++j) {
        double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        for (int l = 0; l < M; ++l) {
            long long jl = (long long)j * l % M;
            double th = 2.0 * kPi * double(jl) / M;
            Phi(j, l) = sgn * cplx(std::cos(th), std::sin(th));
        }
    }
    return Phi;
}

SpectralOps momentum_operator(const Grid& grid) {
    grid.validate();
    SpectralOps ops;
    ops.Phi = fourier_matrix(grid.M);
    ops.Dmu = grid.mu();
    ops.Dx = grid.points();
    // Phi^{-1} = Phi^H / M
    ops.Pmu = ops.Phi * ops.Dmu.cast<cplx>().asDiagonal() * ops.Phi.adjoint() / double(grid.M);
    ops.Pmu = 0.5 * (ops.Pmu + ops.Pmu.adjoint()).eval();
    return ops;
}

void grid_transform(cplx* data, const Grid& g, long long outer, long long inner, bool to_modes) {
    long long o = outer;
    long long in = g.size() / g.M * inner;
    for (int k = 0; k < g.d; ++k) {
        if (to_modes)
            to_spectral(data, o, g.M, in);
        else
            to_physical(data, o, g.M, in);
        o *= g.M;
        in /= g.M;
    }
}

RVec spectral_partial(const RVec& f, const Grid& grid, int axis, int order) {
    if (f.size() != grid.size()) throw SchroError("spectral_partial: size mismatch");
    if (axis < 0 || axis >= grid.d) throw SchroError("spectral_partial: axis out of range");
    long long outer = 1, inner = 1;
    for (int k = 0; k < axis; ++k) outer *= grid.M;
    for (int k = axis + 1; k < grid.d; ++k) inner *= grid.M;
    CVec c = f.cast<cplx>();
    to_spectral(c.data(), outer, grid.M, inner);
    RVec mu = grid.mu();
    for (int k = 0; k < grid.M; ++k) {
        cplx factor = std::pow(kI * mu[k], order);
        // the Nyquist mode has no real odd derivative
        if (k == 0 && order % 2 == 1) factor = 0.0;
        for (long long o = 0; o < outer; ++o) {
            cplx* row = c.data() + (o * grid.M + k) * inner;
            for (long long i = 0; i < inner; ++i) row[i] *= factor;
        }
    }
    to_physical(c.data(), outer, grid.M, inner);
    return c.real();
}

RVec spectral_derivative(const RVec& f, const Grid& grid, int order) {
    if (f.size() != grid.M) throw SchroError("spectral_derivative: size mismatch");
    Grid g1 = grid;
    g1.d = 1;
    return spectral_partial(f, g1, 0, order);
}

}  // namespace schro
