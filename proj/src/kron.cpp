#include "schro/kron.hpp"

#include <cmath>
#include <sstream>

#include "schro/fourier.hpp"

namespace schro {

KronFactor KronFactor::identity(int n) {
    KronFactor f;
    f.kind = Kind::Identity;
    f.dim = n;
    return f;
}

KronFactor KronFactor::diagonal(const CVec& d) {
    KronFactor f;
    f.kind = Kind::Diagonal;
    f.dim = int(d.size());
    f.diag = d;
    return f;
}

KronFactor KronFactor::momentum(double a, double b, int M) {
    if (M < 2 || !is_pow2(M)) throw SchroError("momentum factor: M must be a power of two");
    KronFactor f;
    f.kind = Kind::Momentum;
    f.dim = M;
    f.a = a;
    f.b = b;
    return f;
}

KronFactor KronFactor::momentum_squared(double a, double b, int M) {
    KronFactor f = momentum(a, b, M);
    f.kind = Kind::MomentumSquared;
    return f;
}

KronFactor KronFactor::momentum(const Grid& g) { return momentum(g.a, g.b, g.M); }
KronFactor KronFactor::momentum_squared(const Grid& g) { return momentum_squared(g.a, g.b, g.M); }

KronFactor KronFactor::matrix(const CMat& A) {
    if (A.rows() != A.cols()) throw SchroError("dense factor must be square");
    KronFactor f;
    f.kind = Kind::Dense;
    f.dim = int(A.rows());
    f.dense = A;
    return f;
}

RVec KronFactor::mu() const {
    RVec out(dim);
    for (int k = 0; k < dim; ++k) out[k] = 2.0 * kPi * (k - dim / 2) / (b - a);
    return out;
}

CMat KronFactor::to_dense() const {
    switch (kind) {
        case Kind::Identity:
            return CMat::Identity(dim, dim);
        case Kind::Diagonal:
            return diag.asDiagonal();
        case Kind::Dense:
            return dense;
        case Kind::Momentum:
        case Kind::MomentumSquared: {
            CMat Phi = fourier_matrix(dim);
            RVec m = mu();
            if (kind == Kind::MomentumSquared) m = m.array().square();
            CMat P = Phi * m.cast<cplx>().asDiagonal() * Phi.adjoint() / double(dim);
            return 0.5 * (P + P.adjoint());
        }
    }
    return {};
}

long long KronOperator::dim() const {
    long long n = 1;
    for (const auto& f : factors) n *= f.dim;
    return n;
}

void KronOperator::apply_inplace(CVec& v) const {
    if (v.size() != dim())
        throw SchroError("kron_apply: dimension mismatch (" + std::to_string(v.size()) + " vs " +
                         std::to_string(dim()) + ")");
    long long outer = 1;
    const long long total = dim();
    for (const auto& f : factors) {
        const long long inner = total / (outer * f.dim);
        switch (f.kind) {
            case KronFactor::Kind::Identity:
                break;
            case KronFactor::Kind::Diagonal:
                for (long long o = 0; o < outer; ++o)
                    for (int j = 0; j < f.dim; ++j) {
                        cplx* row = v.data() + (o * f.dim + j) * inner;
                        const cplx s = f.diag[j];
                        for (long long i = 0; i < inner; ++i) row[i] *= s;
                    }
                break;
            case KronFactor::Kind::Momentum:
            case KronFactor::Kind::MomentumSquared: {
                RVec m = f.mu();
                if (f.kind == KronFactor::Kind::MomentumSquared) m = m.array().square();
                to_spectral(v.data(), outer, f.dim, inner);
                for (long long o = 0; o < outer; ++o)
                    for (int j = 0; j < f.dim; ++j) {
                        cplx* row = v.data() + (o * f.dim + j) * inner;
                        for (long long i = 0; i < inner; ++i) row[i] *= m[j];
                    }
                to_physical(v.data(), outer, f.dim, inner);
                break;
            }
            case KronFactor::Kind::Dense:
                apply_axis(f.dense, v.data(), outer, f.dim, inner);
                break;
        }
        outer *= f.dim;
    }
    if (scale != cplx(1.0, 0.0)) v *= scale;
}

CVec KronOperator::apply(const CVec& v) const {
    CVec out = v;
    apply_inplace(out);
    return out;
}

CMat KronOperator::to_dense() const {
    if (dim() > 4096) throw SchroError("KronOperator::to_dense: dimension too large");
    CMat out = CMat::Identity(1, 1);
    for (const auto& f : factors) {
        CMat F = f.to_dense();
        CMat next(out.rows() * F.rows(), out.cols() * F.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(i * F.rows(), j * F.cols(), F.rows(), F.cols()) = out(i, j) * F;
        out = std::move(next);
    }
    return scale * out;
}

long long KronSum::dim() const {
    if (terms.empty()) return 0;
    return terms.front().dim();
}

CVec KronSum::apply(const CVec& v) const {
    CVec out = CVec::Zero(v.size());
    for (const auto& t : terms) out += t.apply(v);
    return out;
}

CMat KronSum::to_dense() const {
    long long n = dim();
    CMat out = CMat::Zero(n, n);
    for (const auto& t : terms) out += t.to_dense();
    return out;
}

CVec kron_apply(const KronOperator& op, const CVec& v) { return op.apply(v); }

RVec sample_function(const ScalarField& f, const Grid& grid) {
    grid.validate();
    const long long n = grid.size();
    RVec out(n);
    std::vector<double> x(grid.d);
    for (long long idx = 0; idx < n; ++idx) {
        auto j = grid.unflatten(idx);
        for (int k = 0; k < grid.d; ++k) x[k] = grid.x(j[k]);
        double v = f(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite function value at node (";
            for (int k = 0; k < grid.d; ++k) os << (k ? "," : "") << j[k];
            os << ") x=(";
            for (int k = 0; k < grid.d; ++k) os << (k ? "," : "") << x[k];
            os << ")";
            throw SchroError(os.str());
        }
        out[idx] = v;
    }
    return out;
}

KronOperator diag_from_function(const ScalarField& f, const Grid& grid) {
    KronOperator op;
    op.factors.push_back(KronFactor::diagonal(sample_function(f, grid)));
    return op;
}

std::vector<KronFactor> axis_factors(const Grid& grid, int axis, KronFactor::Kind kind) {
    std::vector<KronFactor> fs;
    for (int k = 0; k < grid.d; ++k) {
        if (k != axis) {
            fs.push_back(KronFactor::identity(grid.M));
        } else if (kind == KronFactor::Kind::Momentum) {
            fs.push_back(KronFactor::momentum(grid));
        } else if (kind == KronFactor::Kind::MomentumSquared) {
            fs.push_back(KronFactor::momentum_squared(grid));
        } else {
            throw SchroError("axis_factors: unsupported kind");
        }
    }
    return fs;
}

double max_abs_diff(const CMat& A, const CMat& B) { return (A - B).cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMat& H) { return (H - H.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace schro
