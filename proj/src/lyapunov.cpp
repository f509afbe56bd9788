#include "qp/cocycle.hpp"

#include <numeric>

namespace qp {

namespace {

// one orbit of length n starting at x: accumulated log |R_jj| of the QR-
// re-orthonormalized product (Oseledets-ordered growth rates)
VectorXd qr_orbit_rates(const Cocycle& c, double x, double eps, long n) {
    const int m = c.dim;
    MatrixXcd Q = MatrixXcd::Identity(m, m);
    VectorXd acc = VectorXd::Zero(m);
    for (long j = 0; j < n; ++j) {
        MatrixXcd B = c.A(cdouble(x + j * c.alpha, eps)) * Q;
        Eigen::HouseholderQR<MatrixXcd> qr(B);
        MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
        Q = qr.householderQ() * MatrixXcd::Identity(m, m);
        for (int i = 0; i < m; ++i) {
            double r = std::abs(R(i, i));
            acc(i) += std::log(std::max(r, 1e-300));
            // keep Q's columns aligned with positive diagonal to avoid phase drift
        }
    }
    return acc / static_cast<double>(n);
}

}  // namespace

LyapunovReport lyapunov_exponents(const Cocycle& c, long n, int x_samples, double eps,
                                  std::uint64_t seed) {
    LyapunovReport rep;
    rep.n = n;
    rep.x_samples = x_samples;
    rep.eps = eps;
    Rng rng(seed);
    MatrixXd all(c.dim, x_samples);
    for (int s = 0; s < x_samples; ++s) {
        double x = rng.uniform(0.0, 1.0);
        all.col(s) = qr_orbit_rates(c, x, eps, n);
    }
    rep.exponents.resize(c.dim);
    rep.stderrs.resize(c.dim);
    for (int i = 0; i < c.dim; ++i) {
        double mean = all.row(i).mean();
        double var = 0;
        for (int s = 0; s < x_samples; ++s) var += std::pow(all(i, s) - mean, 2);
        var /= std::max(1, x_samples - 1);
        rep.exponents[static_cast<size_t>(i)] = mean;
        rep.stderrs[static_cast<size_t>(i)] =
            std::sqrt(var / std::max(1, x_samples));
    }
    return rep;
}

namespace {

struct LineFit {
    double slope = 0, intercept = 0, sse = 0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys, size_t lo,
                 size_t hi) {
    LineFit f;
    double n = static_cast<double>(hi - lo);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = lo; i < hi; ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    for (size_t i = lo; i < hi; ++i)
        f.sse += std::pow(ys[i] - f.slope * xs[i] - f.intercept, 2);
    return f;
}

}  // namespace

AccelerationReport complexified_le(const Cocycle& c, int n_eps, long n, int x_samples,
                                   std::uint64_t seed) {
    AccelerationReport rep;
    const double eps_max = 0.4 * c.eps_radius;
    for (int j = 1; j <= n_eps; ++j)
        rep.eps_grid.push_back(eps_max * j / n_eps);
    std::vector<double> xs;  // regression abscissa 2 pi eps, so slopes are integers
    for (double e : rep.eps_grid) {
        LyapunovReport lr = lyapunov_exponents(c, n, x_samples, e, seed);
        rep.top_le.push_back(lr.exponents[0]);
        xs.push_back(TWO_PI * e);
    }
    const size_t np = xs.size();
    LineFit whole = fit_line(xs, rep.top_le, 0, np);
    double s_first = whole.slope, s_last = whole.slope;
    if (np >= 6) {
        double best = whole.sse;
        for (size_t b = 3; b + 3 <= np; ++b) {
            LineFit f1 = fit_line(xs, rep.top_le, 0, b);
            LineFit f2 = fit_line(xs, rep.top_le, b, np);
            if (f1.sse + f2.sse < best) {
                best = f1.sse + f2.sse;
                s_first = f1.slope;
                s_last = f2.slope;
            }
        }
    }
    rep.segment_slopes = {s_first, s_last};
    rep.turning_point_found = std::abs(s_last - s_first) > 0.5;
    rep.omega = std::round(s_first);
    rep.omega_residual = std::abs(s_first - rep.omega);
    if (rep.turning_point_found) {
        rep.omega_bar = std::round(s_last);
        rep.strip_may_be_small = false;
    } else {
        // no slope break inside the sampled strip: quantization forces the
        // limiting value down to 1 for the families we target, but flag it
        rep.omega_bar = 1.0;
        rep.strip_may_be_small = true;
    }
    return rep;
}

DominanceReport detect_dominated(const Cocycle& c, long n, int j, int x_grid,
                                 double threshold) {
    if (j < 1 || j >= c.dim) throw std::invalid_argument("detect_dominated: bad index");
    DominanceReport rep;
    rep.min_gap_rate = 1e300;
    for (int i = 0; i < x_grid; ++i) {
        double x = static_cast<double>(i) / x_grid;
        VectorXd rates = qr_orbit_rates(c, x, 0.0, n);
        rep.min_gap_rate = std::min(rep.min_gap_rate, rates(j - 1) - rates(j));
    }
    rep.dominated = rep.min_gap_rate >= threshold;
    return rep;
}

}  // namespace qp
