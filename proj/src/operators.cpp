#include "qp/operators.hpp"

#include <algorithm>

namespace qp {

FiniteOperator build_finite(const TrigPoly& v, const TrigPoly& w, double alpha, double x,
                            int N, Boundary bc, double theta) {
    if (N < 1) throw std::invalid_argument("build_finite: N must be positive");
    const int d = v.degree();
    FiniteOperator op;
    op.N = N;
    op.bc = bc;
    op.theta = theta;
    op.H = MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        op.H(n, n) += w.eval_real(x + n * alpha);
        for (int k = -d; k <= d; ++k) {
            long m = n + k;
            if (bc == Boundary::dirichlet) {
                if (m < 0 || m >= N) continue;
                op.H(n, m) += v.coeff(k);
            } else {
                // Bloch condition u_{n+N} = e^{i theta} u_n; winding can exceed
                // one when N <= d, hence the accumulation
                long wind = (m >= 0) ? m / N : -((-m - 1) / N + 1);
                long mm = m - wind * N;
                op.H(n, mm) += v.coeff(k) * std::polar(1.0, theta * static_cast<double>(wind));
            }
        }
    }
    return op;
}

VectorXd eigenvalues(const FiniteOperator& op) {
    MatrixXcd Hs = 0.5 * (op.H + op.H.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Hs, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

namespace {

// banded LDL^T inertia: number of eigenvalues of (H - E) below zero.
// Returns -1 when a pivot is too small to trust (caller jitters and retries).
long banded_negative_pivots(const TrigPoly& v, const TrigPoly& w, double alpha, double x,
                            int N, double E, double pivot_tol) {
    const int d = std::max(1, v.degree());
    // lower band storage: ban(t, j) = M(j+t, j), t = 0..d
    MatrixXcd ban = MatrixXcd::Zero(d + 1, N);
    for (int j = 0; j < N; ++j) {
        ban(0, j) = v.coeff(0) + w.eval_real(x + j * alpha) - E;
        for (int t = 1; t <= d && j + t < N; ++t) ban(t, j) = v.coeff(-t);
    }
    long neg = 0;
    for (int j = 0; j < N; ++j) {
        double p = ban(0, j).real();
        if (std::abs(p) < pivot_tol) return -1;
        if (p < 0) ++neg;
        const int r_max = std::min(d, N - 1 - j);
        for (int r = 1; r <= r_max; ++r) {
            cdouble lr = ban(r, j) / p;
            for (int s = 1; s <= r; ++s)
                ban(r - s, j + s) -= lr * p * std::conj(ban(s, j) / p);
        }
    }
    return neg;
}

}  // namespace

long count_below(const TrigPoly& v, const TrigPoly& w, double alpha, double x, int N,
                 double E) {
    const double scale = 2.0 + v.one_norm() + w.one_norm();
    const double tie = 1e-11 * scale;  // ties counted in: shift E up by a hair
    const double pivot_tol = 1e-13 * scale;
    for (int attempt = 0; attempt < 5; ++attempt) {
        double Ej = E + tie + attempt * 64 * pivot_tol;
        long n = banded_negative_pivots(v, w, alpha, x, N, Ej, pivot_tol);
        if (n >= 0) return n;
    }
    // dense fallback; rare (pivot breakdowns on several jitters in a row)
    VectorXd ev = eigenvalues(build_finite(v, w, alpha, x, N));
    long n = 0;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) <= E + tie) ++n;
    return n;
}

IdsEstimate ids(const TrigPoly& v, const TrigPoly& w, double alpha, double E, int N,
                int M) {
    IdsEstimate r;
    r.E = E;
    r.N = N;
    r.x_samples = M;
    double acc = 0;
    for (int i = 0; i < M; ++i) {
        double x = (i + 0.5) / M;
        acc += static_cast<double>(count_below(v, w, alpha, x, N, E)) / N;
    }
    r.value = acc / M;
    return r;
}

StripBlocks strip_blocks(const TrigPoly& v, const TrigPoly& w, double alpha) {
    const int d = v.degree();
    if (d < 1) throw std::invalid_argument("strip_blocks: hopping degree must be >= 1");
    if (std::abs(v.coeff(d)) == 0.0)
        throw std::invalid_argument("strip_blocks: leading coefficient vanishes");
    StripBlocks sb;
    sb.C = MatrixXcd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) sb.C(j, k) = v.coeff(d + j - k);
    // block components are listed top-down as (u_{nd+d-1}, ..., u_{nd}); the
    // diagonal phases therefore decrease down the diagonal
    sb.V = [v, w, alpha, d](cdouble y) {
        MatrixXcd V = MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j) {
            V(j, j) = v.coeff(0) + w.eval(y + static_cast<double>(d - 1 - j) * alpha);
            for (int k = 0; k < d; ++k)
                if (k != j) V(j, k) = v.coeff(j - k);
        }
        return V;
    };
    return sb;
}

std::pair<MatrixXcd, MatrixXcd> dual_strip_matrices(const TrigPoly& v, double alpha,
                                                    double x) {
    StripBlocks sb = strip_blocks(v, TrigPoly::nearest(1.0), alpha);
    return {sb.C, sb.V(cdouble(x, 0))};
}

FiniteOperator build_strip_finite(const TrigPoly& v, const TrigPoly& w, double alpha,
                                  double x, int Nblocks) {
    const int d = v.degree();
    StripBlocks sb = strip_blocks(v, w, alpha);
    FiniteOperator op;
    op.N = d * Nblocks;
    op.bc = Boundary::dirichlet;
    op.H = MatrixXcd::Zero(op.N, op.N);
    for (int n = 0; n < Nblocks; ++n) {
        double y = x + d * n * alpha;  // phase of the block's lowest site
        op.H.block(n * d, n * d, d, d) = sb.V(cdouble(y, 0));
        if (n + 1 < Nblocks) {
            op.H.block(n * d, (n + 1) * d, d, d) = sb.C;
            op.H.block((n + 1) * d, n * d, d, d) = sb.C.adjoint();
        }
    }
    return op;
}

FloquetSpectrum floquet_spectrum(const TrigPoly& v, const TrigPoly& w, Rational pq,
                                 int x_grid, int bloch_grid) {
    pq = reduce(pq.p, pq.q);
    const int q = static_cast<int>(pq.q);
    const double alpha = pq.value();
    FloquetSpectrum fs;
    fs.pq = pq;
    fs.x_grid.resize(x_grid);
    fs.per_x_lo.assign(x_grid, std::vector<double>(q, 1e300));
    fs.per_x_hi.assign(x_grid, std::vector<double>(q, -1e300));
    fs.cloud.reserve(static_cast<size_t>(x_grid) * bloch_grid * q);
    std::vector<double> lo(q, 1e300), hi(q, -1e300);
    for (int ix = 0; ix < x_grid; ++ix) {
        double x = static_cast<double>(ix) / x_grid;
        fs.x_grid[ix] = x;
        for (int it = 0; it < bloch_grid; ++it) {
            double theta = TWO_PI * it / bloch_grid;
            VectorXd ev = eigenvalues(build_finite(v, w, alpha, x, q, Boundary::bloch, theta));
            for (int j = 0; j < q; ++j) {
                fs.cloud.push_back(ev(j));
                fs.per_x_lo[ix][j] = std::min(fs.per_x_lo[ix][j], ev(j));
                fs.per_x_hi[ix][j] = std::max(fs.per_x_hi[ix][j], ev(j));
                lo[j] = std::min(lo[j], ev(j));
                hi[j] = std::max(hi[j], ev(j));
            }
        }
    }
    std::sort(fs.cloud.begin(), fs.cloud.end());
    fs.bands.resize(q);
    for (int j = 0; j < q; ++j) fs.bands[j] = Interval{lo[j], hi[j]};
    return fs;
}

std::pair<TrigPoly, TrigPoly> aubry_dual(const TrigPoly& v, const TrigPoly& w) {
    return {w, v};
}

double hausdorff_one_sided(const std::vector<double>& A, const std::vector<double>& B) {
    if (A.empty() || B.empty())
        throw std::invalid_argument("hausdorff: empty sample set");
    double worst = 0;
    for (double a : A) {
        auto it = std::lower_bound(B.begin(), B.end(), a);
        double d = 1e300;
        if (it != B.end()) d = std::min(d, *it - a);
        if (it != B.begin()) d = std::min(d, a - *(it - 1));
        worst = std::max(worst, d);
    }
    return worst;
}

double hausdorff(const std::vector<double>& A, const std::vector<double>& B) {
    return std::max(hausdorff_one_sided(A, B), hausdorff_one_sided(B, A));
}

}  // namespace qp
