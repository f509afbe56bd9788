#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qp {

using cdouble = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double TWO_PI = 6.283185307179586476925286766559;

// fractional part in [0,1)
inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f -= 1.0;  // guard against floor rounding at negative epsilons
    return f;
}

// principal value of an angle difference, mapped into (-pi, pi]
inline double principal_angle(double a) {
    double r = std::remainder(a, TWO_PI);
    if (r <= -TWO_PI / 2) r += TWO_PI;
    return r;
}

struct Interval {
    double lo = 0, hi = 0;
    double width() const { return hi - lo; }
    bool empty() const { return hi <= lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

// merge a sorted sample cloud into intervals: points closer than eta are in one cluster
std::vector<Interval> merge_cloud(std::vector<double> samples, double eta);

// deterministic RNG used everywhere sampling is needed; seed is recorded by callers
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(gen_);
    }
    int uniform_int(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(gen_);
    }
    cdouble unit_complex() {
        double t = uniform(0.0, 1.0);
        return std::polar(1.0, TWO_PI * t);
    }
    VectorXcd gaussian_vector(int n) {
        std::normal_distribution<double> d(0.0, 1.0);
        VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = cdouble(d(gen_), d(gen_));
        return v;
    }
    MatrixXcd gaussian_matrix(int r, int c) {
        std::normal_distribution<double> d(0.0, 1.0);
        MatrixXcd m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = cdouble(d(gen_), d(gen_));
        return m;
    }
    std::mt19937_64& raw() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

// orthonormalize columns (thin QR), returns Q
MatrixXcd orthonormalize(const MatrixXcd& M);

// largest principal angle distance between the column spans of two full-rank frames
double grassmann_distance(const MatrixXcd& A, const MatrixXcd& B);

}  // namespace qp
