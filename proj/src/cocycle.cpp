#include "qp/cocycle.hpp"

namespace qp {

SymplecticForm SymplecticForm::standard(int m) {
    SymplecticForm f;
    f.S = MatrixXcd::Zero(2 * m, 2 * m);
    f.S.topRightCorner(m, m) = -MatrixXcd::Identity(m, m);
    f.S.bottomLeftCorner(m, m) = MatrixXcd::Identity(m, m);
    f.P = MatrixXcd::Identity(2 * m, 2 * m);
    return f;
}

SymplecticForm SymplecticForm::strip(const MatrixXcd& C) {
    const int d = static_cast<int>(C.rows());
    SymplecticForm f;
    f.S = MatrixXcd::Zero(2 * d, 2 * d);
    f.S.topRightCorner(d, d) = -C.adjoint();
    f.S.bottomLeftCorner(d, d) = C;
    f.P = MatrixXcd::Identity(2 * d, 2 * d);
    f.P.topLeftCorner(d, d) = C;
    return f;
}

SymplecticForm SymplecticForm::general(const MatrixXcd& S) {
    const int n = static_cast<int>(S.rows());
    if (n % 2 != 0) throw std::invalid_argument("symplectic form: odd dimension");
    const int m = n / 2;
    if ((S + S.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1 + S.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("symplectic form: S is not skew-Hermitian");
    // i S is Hermitian; a balanced signature (m, m) is required
    MatrixXcd iS = cdouble(0, 1) * S;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (iS + iS.adjoint()));
    VectorXd mu = es.eigenvalues();  // ascending
    if (mu(m - 1) > -1e-12 || mu(m) < 1e-12)
        throw std::invalid_argument("symplectic form: signature is not (m, m)");
    // columns sorted positive-first, scaled by sqrt(|mu|):  i S = U diag(I,-I) U^*
    MatrixXcd U(n, n);
    for (int j = 0; j < m; ++j)
        U.col(j) = es.eigenvectors().col(n - 1 - j) * std::sqrt(mu(n - 1 - j));
    for (int j = 0; j < m; ++j)
        U.col(m + j) = es.eigenvectors().col(j) * std::sqrt(-mu(j));
    // i J = Q0 diag(I, -I) Q0^* with the unitary Q0 below, so P = Q0 U^* does it
    MatrixXcd Q0 = MatrixXcd::Zero(n, n);
    const double r = 1.0 / std::sqrt(2.0);
    Q0.topLeftCorner(m, m) = r * MatrixXcd::Identity(m, m);
    Q0.topRightCorner(m, m) = r * MatrixXcd::Identity(m, m);
    Q0.bottomLeftCorner(m, m) = cdouble(0, r) * MatrixXcd::Identity(m, m);
    Q0.bottomRightCorner(m, m) = cdouble(0, -r) * MatrixXcd::Identity(m, m);
    SymplecticForm f;
    f.S = S;
    f.P = Q0 * U.adjoint();
    return f;
}

Cocycle schrodinger_cocycle(const TrigPoly& v, double alpha, double E) {
    Cocycle c;
    c.alpha = alpha;
    c.dim = 2;
    c.E = E;
    c.real_sl2 = true;
    c.form = SymplecticForm::standard(1);
    c.A = [v, E](cdouble z) {
        MatrixXcd A(2, 2);
        A << E - v.eval(z), -1.0, 1.0, 0.0;
        return A;
    };
    c.dA = [](cdouble) {
        MatrixXcd D = MatrixXcd::Zero(2, 2);
        D(0, 0) = 1.0;
        return D;
    };
    return c;
}

Cocycle transfer_cocycle(const TrigPoly& v, const TrigPoly& w, double alpha, double E) {
    const int d = v.degree();
    if (d < 1) throw std::invalid_argument("transfer_cocycle: hopping degree must be >= 1");
    const cdouble vd = v.coeff(d);
    if (std::abs(vd) < 1e-14)
        throw std::invalid_argument("transfer_cocycle: leading coefficient vanishes");
    Cocycle c;
    c.alpha = alpha;
    c.dim = 2 * d;
    c.E = E;
    c.real_sl2 = (d == 1) && v.is_real_coeffs();
    StripBlocks sb = strip_blocks(v, w, alpha);
    c.form = SymplecticForm::strip(sb.C);
    c.A = [v, w, d, vd, E](cdouble z) {
        MatrixXcd A = MatrixXcd::Zero(2 * d, 2 * d);
        // first row in the coordinates U_m = (u_{m+d-1}, ..., u_{m-d})
        for (int k = 1; k <= d - 1; ++k) A(0, d - 1 - k) = -v.coeff(k) / vd;
        A(0, d - 1) = (E - w.eval(z) - v.coeff(0)) / vd;
        for (int k = 1; k <= d; ++k) A(0, d - 1 + k) = -v.coeff(-k) / vd;
        for (int i = 1; i < 2 * d; ++i) A(i, i - 1) = 1.0;
        return A;
    };
    c.dA = [d, vd](cdouble) {
        MatrixXcd D = MatrixXcd::Zero(2 * d, 2 * d);
        D(0, d - 1) = 1.0 / vd;
        return D;
    };
    return c;
}

Cocycle longrange_cocycle(const TrigPoly& v, double alpha, double E) {
    return transfer_cocycle(v, TrigPoly::nearest(1.0), alpha, E);
}

Cocycle strip_cocycle(const TrigPoly& v, const TrigPoly& w, double alpha, double E) {
    const int d = v.degree();
    if (d < 1) throw std::invalid_argument("strip_cocycle: hopping degree must be >= 1");
    StripBlocks sb = strip_blocks(v, w, alpha);
    MatrixXcd C = sb.C;
    Eigen::PartialPivLU<MatrixXcd> Clu(C);
    MatrixXcd Cinv = Clu.inverse();
    MatrixXcd CinvCadj = Cinv * C.adjoint();
    Cocycle c;
    c.alpha = d * alpha;  // the blocked step advances d scalar sites
    c.dim = 2 * d;
    c.E = E;
    c.real_sl2 = (d == 1) && v.is_real_coeffs();
    c.form = SymplecticForm::strip(C);
    auto V = sb.V;
    c.A = [V, Cinv, CinvCadj, d, E](cdouble y) {
        MatrixXcd A = MatrixXcd::Zero(2 * d, 2 * d);
        A.topLeftCorner(d, d) = Cinv * (E * MatrixXcd::Identity(d, d) - V(y));
        A.topRightCorner(d, d) = -CinvCadj;
        A.bottomLeftCorner(d, d) = MatrixXcd::Identity(d, d);
        return A;
    };
    c.dA = [Cinv, d](cdouble) {
        MatrixXcd D = MatrixXcd::Zero(2 * d, 2 * d);
        D.topLeftCorner(d, d) = Cinv;
        return D;
    };
    return c;
}

Cocycle dual_cocycle(const TrigPoly& v, double alpha, double E) {
    return strip_cocycle(v, TrigPoly::nearest(1.0), alpha, E);
}

MatrixXcd iterate(const Cocycle& c, double x, double eps, long n) {
    MatrixXcd M = MatrixXcd::Identity(c.dim, c.dim);
    if (n >= 0) {
        for (long j = 0; j < n; ++j) M = c.A(cdouble(x + j * c.alpha, eps)) * M;
    } else {
        for (long j = 1; j <= -n; ++j) {
            MatrixXcd Aj = c.A(cdouble(x - j * c.alpha, eps));
            M = Aj.partialPivLu().inverse() * M;
        }
    }
    return M;
}

Cocycle iterate_cocycle(const Cocycle& c, int k) {
    if (k < 1) throw std::invalid_argument("iterate_cocycle: k must be >= 1");
    Cocycle out;
    out.alpha = k * c.alpha;
    out.dim = c.dim;
    out.form = c.form;
    out.E = c.E;
    out.real_sl2 = c.real_sl2;
    out.eps_radius = c.eps_radius;
    double step = c.alpha;
    auto A = c.A;
    out.A = [A, k, step](cdouble z) {
        MatrixXcd M = A(z);
        for (int j = 1; j < k; ++j) M = A(z + static_cast<double>(j) * step) * M;
        return M;
    };
    if (c.dA) {
        auto dA = c.dA;
        out.dA = [A, dA, k, step](cdouble z) {
            // product rule over the k factors
            const int n = static_cast<int>(A(z).rows());
            MatrixXcd sum = MatrixXcd::Zero(n, n);
            std::vector<MatrixXcd> pre(static_cast<size_t>(k) + 1);
            pre[0] = MatrixXcd::Identity(n, n);
            for (int j = 0; j < k; ++j)
                pre[static_cast<size_t>(j) + 1] =
                    A(z + static_cast<double>(j) * step) * pre[static_cast<size_t>(j)];
            MatrixXcd post = MatrixXcd::Identity(n, n);
            for (int j = k - 1; j >= 0; --j) {
                sum += post * dA(z + static_cast<double>(j) * step) * pre[static_cast<size_t>(j)];
                post = post * A(z + static_cast<double>(j) * step);
            }
            return sum;
        };
    }
    return out;
}

double check_symplectic(const Cocycle& c, int samples, double eps) {
    if (!c.form) throw std::invalid_argument("check_symplectic: cocycle carries no form");
    const MatrixXcd& S = c.form->S;
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        double x = static_cast<double>(i) / samples;
        MatrixXcd A = c.eval(x, eps);
        worst = std::max(worst, (A.adjoint() * S * A - S).cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {
double spectral_anchor(const TrigPoly& v, const TrigPoly& w) {
    // safely above every finite-volume eigenvalue: |E| <= sum|vhat_k| + sup|w|
    return 2.0 + v.one_norm() + w.sup_real() + 10.0;
}
}  // namespace

EnergyFamily schrodinger_family(const TrigPoly& v, double alpha) {
    EnergyFamily f;
    f.at = [v, alpha](double E) { return schrodinger_cocycle(v, alpha, E); };
    f.anchor = spectral_anchor(TrigPoly::nearest(1.0), v);
    return f;
}

EnergyFamily transfer_family(const TrigPoly& v, const TrigPoly& w, double alpha) {
    EnergyFamily f;
    f.at = [v, w, alpha](double E) { return transfer_cocycle(v, w, alpha, E); };
    f.anchor = spectral_anchor(v, w);
    return f;
}

EnergyFamily longrange_family(const TrigPoly& v, double alpha) {
    return transfer_family(v, TrigPoly::nearest(1.0), alpha);
}

EnergyFamily strip_family(const TrigPoly& v, const TrigPoly& w, double alpha) {
    EnergyFamily f;
    f.at = [v, w, alpha](double E) { return strip_cocycle(v, w, alpha, E); };
    f.anchor = spectral_anchor(v, w);
    return f;
}

EnergyFamily dual_family(const TrigPoly& v, double alpha) {
    return strip_family(v, TrigPoly::nearest(1.0), alpha);
}

double monotonicity_form(const EnergyFamily& fam, double E, const VectorXcd& u, double x,
                         double h) {
    Cocycle c = fam.at(E);
    if (!c.form) throw std::invalid_argument("monotonicity_form: cocycle carries no form");
    const MatrixXcd& S = c.form->S;
    cdouble iso = (u.adjoint() * S * u)(0, 0);
    if (std::abs(iso) > 1e-8 * u.squaredNorm())
        throw std::invalid_argument("monotonicity_form: test vector is not isotropic");
    MatrixXcd A = c.eval(x);
    MatrixXcd dA_fd = (fam.at(E + h).eval(x) - fam.at(E - h).eval(x)) / (2 * h);
    cdouble val = (u.adjoint() * (A.adjoint() * S * dA_fd) * u)(0, 0);
    return val.real();
}

CohomologicalSolution solve_cohomological(const TrigPoly& rho, double alpha, int K,
                                          double threshold) {
    CohomologicalSolution sol;
    sol.mean = rho.coeff(0).real();
    const int d = std::min(K, rho.degree());
    std::vector<cdouble> psi(static_cast<size_t>(2 * std::max(d, 0) + 1), cdouble(0, 0));
    for (int k = 1; k <= d; ++k) {
        cdouble div = std::exp(cdouble(0, TWO_PI * k * alpha)) - 1.0;
        if (std::abs(div) < threshold) {
            sol.skipped.push_back(k);
            continue;
        }
        cdouble pk = rho.coeff(k) / div;
        psi[static_cast<size_t>(k + d)] = pk;
        psi[static_cast<size_t>(-k + d)] = std::conj(pk);
    }
    sol.psi = TrigPoly(std::move(psi));
    // defect on a grid; skipped modes stay in the defect by construction
    double worst = 0;
    const int grid = 1024;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double lhs = sol.psi.eval_real(x + alpha) - sol.psi.eval_real(x);
        double rhs = rho.eval_real(x) - sol.mean;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    sol.residual = worst;
    return sol;
}

}  // namespace qp
