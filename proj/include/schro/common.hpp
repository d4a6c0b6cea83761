#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace schro {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

class SchroError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// invalid configuration / schema
class SchemaError : public SchroError {
public:
    using SchroError::SchroError;
};

class CflError : public SchroError {
public:
    CflError(const std::string& msg, double admissible_dt)
        : SchroError(msg), admissible_dt_(admissible_dt) {}
    double admissible_dt() const { return admissible_dt_; }

private:
    double admissible_dt_;
};

// ||w|| exceeded the blow-up threshold; partial results may have been kept
class BlowUpError : public SchroError {
public:
    BlowUpError(const std::string& msg, double t) : SchroError(msg), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

// Warnings go through a replaceable sink (stderr by default).
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& msg);

// Worker count: SCHRO_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs body(begin, end) over [0, n) split into contiguous chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 1);

inline bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int ilog2(long long v) {
    int r = 0;
    while ((1LL << r) < v) ++r;
    return r;
}

}  // namespace schro
