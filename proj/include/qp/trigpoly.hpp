#pragma once

#include "qp/common.hpp"

namespace qp {

// Real trigonometric polynomial v(x) = sum_{k=-d}^{d} c_k e^{2 pi i k x},
// stored with the reality constraint c_{-k} = conj(c_k) enforced on construction.
class TrigPoly {
  public:
    TrigPoly() : d_(0), c_(1, cdouble(0, 0)) {}

    // coeffs has size 2d+1, ordered k = -d .. d
    explicit TrigPoly(std::vector<cdouble> coeffs);

    static TrigPoly constant(double c);
    // t * 2 cos(2 pi x):  coefficient t at k = +-1
    static TrigPoly nearest(double t);
    // single pair: a e^{2 pi i k x} + conj(a) e^{-2 pi i k x}
    static TrigPoly pair(int k, cdouble a);

    int degree() const { return d_; }
    cdouble coeff(int k) const {
        if (std::abs(k) > d_) return {0, 0};
        return c_[static_cast<size_t>(k + d_)];
    }

    // evaluation at complex phase z = x + i eps (analytic continuation is exact:
    // each mode picks up e^{-2 pi k eps})
    cdouble eval(cdouble z) const;
    double eval_real(double x) const { return eval(cdouble(x, 0)).real(); }

    // derivative d/dx
    TrigPoly derivative() const;

    double one_norm() const;  // sum_k |c_k|
    double sup_real(int grid = 2048) const;

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator*(double s) const;

    bool is_real_coeffs() const;  // all c_k real (up to 1e-14)

  private:
    int d_;
    std::vector<cdouble> c_;  // index k + d_
};

struct Rational {
    long p = 0;
    long q = 1;
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

Rational reduce(long p, long q);

// frequency: either an explicit rational p/q or an irrational double
struct Frequency {
    double alpha = 0;
    bool rational = false;
    long p = 0, q = 1;

    static Frequency from_rational(long p, long q);
    static Frequency from_double(double a) {
        Frequency f;
        f.alpha = a;
        f.rational = false;
        return f;
    }
};

// best rational approximants of alpha by continued fractions, up to n terms
std::vector<Rational> convergents(double alpha, int n);

// convenience: golden mean (sqrt(5)-1)/2 and its convergents F_n/F_{n+1}
double golden_mean();

}  // namespace qp
