#include "qp/trigpoly.hpp"

#include <numeric>

namespace qp {

TrigPoly::TrigPoly(std::vector<cdouble> coeffs) {
    if (coeffs.empty() || coeffs.size() % 2 == 0)
        throw std::invalid_argument("TrigPoly: need 2d+1 coefficients");
    d_ = static_cast<int>(coeffs.size() / 2);
    c_ = std::move(coeffs);
    // enforce reality of the symbol: c_{-k} = conj(c_k).  Tolerate tiny
    // asymmetry from parsing, reject anything structural.
    for (int k = 1; k <= d_; ++k) {
        cdouble hi = c_[static_cast<size_t>(k + d_)];
        cdouble lo = c_[static_cast<size_t>(-k + d_)];
        if (std::abs(lo - std::conj(hi)) > 1e-12 * (1.0 + std::abs(hi)))
            throw std::invalid_argument("TrigPoly: coefficients violate c_{-k} = conj(c_k)");
        c_[static_cast<size_t>(-k + d_)] = std::conj(hi);
    }
    if (std::abs(c_[static_cast<size_t>(d_)].imag()) > 1e-12)
        throw std::invalid_argument("TrigPoly: c_0 must be real");
    c_[static_cast<size_t>(d_)] = cdouble(c_[static_cast<size_t>(d_)].real(), 0.0);
}

TrigPoly TrigPoly::constant(double c) { return TrigPoly({cdouble(c, 0)}); }

TrigPoly TrigPoly::nearest(double t) {
    return TrigPoly({cdouble(t, 0), cdouble(0, 0), cdouble(t, 0)});
}

TrigPoly TrigPoly::pair(int k, cdouble a) {
    if (k <= 0) throw std::invalid_argument("TrigPoly::pair: k must be positive");
    std::vector<cdouble> c(static_cast<size_t>(2 * k + 1), cdouble(0, 0));
    c[static_cast<size_t>(2 * k)] = a;
    c[0] = std::conj(a);
    return TrigPoly(std::move(c));
}

cdouble TrigPoly::eval(cdouble z) const {
    // e^{2 pi i k z}; for z = x + i eps the mode k carries e^{-2 pi k eps}
    cdouble s(0, 0);
    for (int k = -d_; k <= d_; ++k) {
        cdouble ph = std::exp(cdouble(0, TWO_PI) * static_cast<double>(k) * z);
        s += c_[static_cast<size_t>(k + d_)] * ph;
    }
    return s;
}

TrigPoly TrigPoly::derivative() const {
    std::vector<cdouble> c(c_.size());
    for (int k = -d_; k <= d_; ++k)
        c[static_cast<size_t>(k + d_)] =
            c_[static_cast<size_t>(k + d_)] * cdouble(0, TWO_PI * k);
    return TrigPoly(std::move(c));
}

double TrigPoly::one_norm() const {
    double s = 0;
    for (const auto& v : c_) s += std::abs(v);
    return s;
}

double TrigPoly::sup_real(int grid) const {
    double m = 0;
    for (int i = 0; i < grid; ++i)
        m = std::max(m, std::abs(eval_real(static_cast<double>(i) / grid)));
    return m;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    int d = std::max(d_, o.d_);
    std::vector<cdouble> c(static_cast<size_t>(2 * d + 1), cdouble(0, 0));
    for (int k = -d; k <= d; ++k)
        c[static_cast<size_t>(k + d)] = coeff(k) + o.coeff(k);
    return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::operator*(double s) const {
    std::vector<cdouble> c(c_);
    for (auto& v : c) v *= s;
    return TrigPoly(std::move(c));
}

bool TrigPoly::is_real_coeffs() const {
    for (const auto& v : c_)
        if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v))) return false;
    return true;
}

Rational reduce(long p, long q) {
    if (q == 0) throw std::invalid_argument("rational: zero denominator");
    if (q < 0) { p = -p; q = -q; }
    long g = std::gcd(std::abs(p), q);
    if (g > 1) { p /= g; q /= g; }
    return Rational{p, q};
}

Frequency Frequency::from_rational(long p, long q) {
    Rational r = reduce(p, q);
    Frequency f;
    f.rational = true;
    f.p = r.p;
    f.q = r.q;
    f.alpha = r.value();
    return f;
}

std::vector<Rational> convergents(double alpha, int n) {
    std::vector<Rational> out;
    // standard continued-fraction recursion on the fractional part
    double x = alpha - std::floor(alpha);
    long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // h_{-1}/k_{-1} = 1/0, h_0/k_0 = 0/1
    for (int i = 0; i < n; ++i) {
        if (x < 1e-15) break;
        double inv = 1.0 / x;
        long a = static_cast<long>(std::floor(inv));
        x = inv - static_cast<double>(a);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (q2 > 1) out.push_back(Rational{p2, q2});  // skip the trivial 0/1, 1/1 seeds
        if (q2 > (1L << 40)) break;                   // double precision exhausted
    }
    return out;
}

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

}  // namespace qp
