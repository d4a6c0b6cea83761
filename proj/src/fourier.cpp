#include "schro/fourier.hpp"

#include <fftw3.h>

#include <atomic>
#include <map>
#include <mutex>
#include <tuple>

namespace schro {

namespace {

std::atomic<std::uint64_t> g_count{0};

using PlanKey = std::tuple<long long, int, long long, int>;

struct PlanCache {
    std::mutex mu;
    std::map<PlanKey, fftw_plan> plans;
    ~PlanCache() {
        for (auto& kv : plans) fftw_destroy_plan(kv.second);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

// In-place plan over the middle axis of an (outer, M, inner) array.
fftw_plan get_plan(long long outer, int M, long long inner, int sign) {
    auto& c = cache();
    std::lock_guard<std::mutex> lk(c.mu);
    PlanKey key{outer, M, inner, sign};
    auto it = c.plans.find(key);
    if (it != c.plans.end()) return it->second;
    fftw_iodim64 dim64{M, inner, inner};
    fftw_iodim64 how[2];
    how[0] = fftw_iodim64{outer, M * inner, M * inner};
    how[1] = fftw_iodim64{inner, 1, 1};
    // the plan is created on a scratch buffer and executed on caller data via new-array execute
    std::vector<fftw_complex> scratch(std::size_t(outer * M * inner));
    fftw_plan p = fftw_plan_guru64_dft(1, &dim64, 2, how, scratch.data(), scratch.data(), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw SchroError("fftw: plan creation failed");
    c.plans.emplace(key, p);
    return p;
}

void alternate_sign(cplx* data, long long outer, int M, long long inner) {
    for (long long o = 0; o < outer; ++o)
        for (int j = 1; j < M; j += 2) {
            cplx* row = data + (o * M + j) * inner;
            for (long long i = 0; i < inner; ++i) row[i] = -row[i];
        }
}

}  // namespace

void to_physical(cplx* data, long long outer, int M, long long inner) {
    fftw_plan p = get_plan(outer, M, inner, FFTW_BACKWARD);
    auto* f = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, f, f);
    alternate_sign(data, outer, M, inner);
    ++g_count;
}

void to_spectral(cplx* data, long long outer, int M, long long inner) {
    alternate_sign(data, outer, M, inner);
    fftw_plan p = get_plan(outer, M, inner, FFTW_FORWARD);
    auto* f = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, f, f);
    const double s = 1.0 / M;
    const long long n = outer * M * inner;
    for (long long i = 0; i < n; ++i) data[i] *= s;
    ++g_count;
}

void apply_axis(const CMat& A, cplx* data, long long outer, int M, long long inner) {
    if (A.rows() != M || A.cols() != M) throw SchroError("apply_axis: matrix size mismatch");
    for (long long o = 0; o < outer; ++o) {
        // block is M x inner row-major == inner x M column-major
        Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> blk(
            data + o * M * inner, M, inner);
        blk = (A * blk).eval();
    }
}

std::uint64_t transform_count() { return g_count.load(); }
void reset_transform_count() { g_count = 0; }

}  // namespace schro
