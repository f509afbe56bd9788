#include "qp/lagrangian.hpp"

#include <functional>

namespace qp {

namespace {

// principal value in (-1/2, 1/2] of a phase expressed in full turns
double principal_turns(double t) {
    double r = t - std::round(t);
    if (r <= -0.5) r += 1.0;
    if (r > 0.5) r -= 1.0;
    // round() maps .5 to 1 away from zero; normalize the boundary to +1/2
    if (r == -0.5) r = 0.5;
    return r;
}

MatrixXcd cayley_of(const MatrixXcd& PM) {
    const int m = static_cast<int>(PM.cols());
    MatrixXcd X = PM.topRows(m), Y = PM.bottomRows(m);
    MatrixXcd denom = X - cdouble(0, 1) * Y;
    Eigen::PartialPivLU<MatrixXcd> lu(denom);
    if (std::abs(lu.determinant()) < 1e-300)
        throw std::runtime_error("cayley: X - iY is singular (frame not Lagrangian?)");
    return (X + cdouble(0, 1) * Y) * lu.inverse();
}

double arg_det_unitary(const MatrixXcd& W) {
    // det of a (numerically) unitary matrix; LU keeps it stable
    cdouble det = W.partialPivLu().determinant();
    return std::arg(det);
}

}  // namespace

LagrangianFrame make_frame(const MatrixXcd& X, const MatrixXcd& Y,
                           const SymplecticForm& form) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols())
        throw std::invalid_argument("make_frame: X and Y sizes differ");
    LagrangianFrame f;
    f.form = form;
    f.M = MatrixXcd(2 * X.rows(), X.cols());
    f.M.topRows(X.rows()) = X;
    f.M.bottomRows(Y.rows()) = Y;
    Eigen::JacobiSVD<MatrixXcd> svd(f.M);
    double smax = svd.singularValues().maxCoeff();
    double smin = svd.singularValues().minCoeff();
    if (smin < 1e-10 * std::max(1.0, smax))
        throw std::invalid_argument("make_frame: frame is rank deficient");
    double iso = (f.M.adjoint() * form.S * f.M).cwiseAbs().maxCoeff();
    if (iso > 1e-6 * smax * smax)
        throw std::invalid_argument("make_frame: span is not isotropic for the form");
    return f;
}

LagrangianFrame horizontal_frame(int m, const SymplecticForm& form) {
    return make_frame(MatrixXcd::Identity(m, m), MatrixXcd::Zero(m, m), form);
}

LagrangianFrame vertical_frame(int m, const SymplecticForm& form) {
    return make_frame(MatrixXcd::Zero(m, m), MatrixXcd::Identity(m, m), form);
}

LagrangianFrame line_frame(double y) {
    MatrixXcd X(1, 1), Y(1, 1);
    X(0, 0) = std::cos(M_PI * y);
    Y(0, 0) = std::sin(M_PI * y);
    return make_frame(X, Y, SymplecticForm::standard(1));
}

LagrangianFrame line_frame_padded(int d, double y) {
    MatrixXcd X = MatrixXcd::Zero(d, d), Y = MatrixXcd::Zero(d, d);
    X.topLeftCorner(d - 1, d - 1).setIdentity();
    X(d - 1, d - 1) = std::cos(M_PI * y);
    Y(d - 1, d - 1) = std::sin(M_PI * y);
    return make_frame(X, Y, SymplecticForm::standard(d));
}

LagrangianFrame interleave(const LagrangianFrame& a, const LagrangianFrame& b,
                           const SymplecticForm& form) {
    int ma = a.m(), mb = b.m();
    MatrixXcd X = MatrixXcd::Zero(ma + mb, ma + mb);
    MatrixXcd Y = MatrixXcd::Zero(ma + mb, ma + mb);
    X.topLeftCorner(ma, ma) = a.X();
    X.bottomRightCorner(mb, mb) = b.X();
    Y.topLeftCorner(ma, ma) = a.Y();
    Y.bottomRightCorner(mb, mb) = b.Y();
    return make_frame(X, Y, form);
}

MatrixXcd cayley_W(const LagrangianFrame& f) { return cayley_of(f.form.P * f.M); }

double frame_phase_principal(const LagrangianFrame& f) {
    return arg_det_unitary(cayley_W(f)) / TWO_PI;
}

namespace {

// winding of (1/2pi) arg det W along a matrix path, adaptively subdivided so
// each accepted increment is well below half a turn
double winding_along(const std::function<MatrixXcd(double)>& path, const MatrixXcd& M0,
                     const MatrixXcd& P) {
    struct Seg {
        double t0, t1, u0, u1;
        int depth;
    };
    auto u_at = [&](double t) {
        return arg_det_unitary(cayley_of(P * (path(t) * M0))) / TWO_PI;
    };
    double total = 0;
    std::vector<Seg> stack;
    {
        double u0 = u_at(0.0), u1 = u_at(1.0);
        stack.push_back({0.0, 1.0, u0, u1, 0});
    }
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double d = principal_turns(s.u1 - s.u0);
        if (std::abs(d) <= 0.2 || s.depth >= 40) {
            total += d;
            continue;
        }
        double tm = 0.5 * (s.t0 + s.t1);
        double um = u_at(tm);
        stack.push_back({s.t0, tm, s.u0, um, s.depth + 1});
        stack.push_back({tm, s.t1, um, s.u1, s.depth + 1});
    }
    return total;
}

}  // namespace

double phase_increment(const MatrixXcd& A, const LagrangianFrame& f, HomotopyPath path) {
    const int n = static_cast<int>(A.rows());
    if (path == HomotopyPath::linear) {
        auto lin = [&A, n](double t) {
            return MatrixXcd((1.0 - t) * MatrixXcd::Identity(n, n) + t * A);
        };
        return winding_along(lin, f.M, f.form.P);
    }
    // polar: A = U H, path t -> U^t H^t through principal logarithms
    Eigen::JacobiSVD<MatrixXcd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXcd U = svd.matrixU() * svd.matrixV().adjoint();
    MatrixXcd H = svd.matrixV() * svd.singularValues().asDiagonal() *
                  svd.matrixV().adjoint();
    Eigen::ComplexEigenSolver<MatrixXcd> eu(U);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eh(0.5 * (H + H.adjoint()));
    if (eh.eigenvalues().minCoeff() <= 0)
        throw std::runtime_error("phase_increment: singular matrix has no polar path");
    MatrixXcd Vu = eu.eigenvectors();
    MatrixXcd Vu_inv = Vu.partialPivLu().inverse();
    VectorXd angles(n);
    for (int i = 0; i < n; ++i) angles(i) = std::arg(eu.eigenvalues()(i));
    auto pol = [&, angles](double t) {
        VectorXcd du(n);
        for (int i = 0; i < n; ++i) du(i) = std::polar(1.0, angles(i) * t);
        VectorXd dh(n);
        for (int i = 0; i < n; ++i) dh(i) = std::pow(eh.eigenvalues()(i), t);
        MatrixXcd Ut = Vu * du.asDiagonal() * Vu_inv;
        MatrixXcd Ht = eh.eigenvectors() * dh.asDiagonal() * eh.eigenvectors().adjoint();
        return MatrixXcd(Ut * Ht);
    };
    return winding_along(pol, f.M, f.form.P);
}

double phase_iterate(const Cocycle& c, double x, long k, const LagrangianFrame& f,
                     HomotopyPath path) {
    if (!c.form) throw std::invalid_argument("phase_iterate: cocycle carries no form");
    double total = 0;
    MatrixXcd F = orthonormalize(f.M);
    for (long j = 0; j < k; ++j) {
        MatrixXcd A = c.eval(frac(x + j * c.alpha));
        LagrangianFrame cur;
        cur.M = F;
        cur.form = *c.form;
        total += phase_increment(A, cur, path);
        F = orthonormalize(A * F);
    }
    return total;
}

double phase_between(const LagrangianFrame& a, const LagrangianFrame& b) {
    MatrixXcd Wa = cayley_W(a), Wb = cayley_W(b);
    Eigen::ComplexEigenSolver<MatrixXcd> es(Wa.adjoint() * Wb);
    double sum = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        sum += std::arg(es.eigenvalues()(i));
    return sum / TWO_PI;
}

RotationEstimate rotation_number(const Cocycle& c, double x, long k_max,
                                 const LagrangianFrame& f) {
    RotationEstimate r;
    r.steps = k_max;
    double half = phase_iterate(c, x, k_max / 2, f);
    // reuse: continue the same orbit for the second half
    MatrixXcd F = orthonormalize(f.M);
    for (long j = 0; j < k_max / 2; ++j) F = orthonormalize(c.eval(frac(x + j * c.alpha)) * F);
    LagrangianFrame g;
    g.M = F;
    g.form = *c.form;
    double rest = 0;
    for (long j = k_max / 2; j < k_max; ++j) {
        MatrixXcd A = c.eval(frac(x + j * c.alpha));
        rest += phase_increment(A, g, HomotopyPath::polar);
        g.M = orthonormalize(A * g.M);
    }
    double full = half + rest;
    r.rho = full / k_max;
    double rho_half = half / std::max<long>(1, k_max / 2);
    r.err = static_cast<double>(c.dim) / 2.0 / k_max + std::abs(r.rho - rho_half);
    return r;
}

namespace {

// fractional part of the phase of the k-step orbit at the frame: the frame is
// pushed forward with per-step re-orthonormalization (the Cayley image only
// sees the span), then read off through the form's congruence witness
double orbit_principal_phase(const Cocycle& c, double x, long k,
                             const LagrangianFrame& f) {
    MatrixXcd F = orthonormalize(f.M);
    for (long j = 0; j < k; ++j) F = orthonormalize(c.eval(frac(x + j * c.alpha)) * F);
    return arg_det_unitary(cayley_of(c.form->P * F)) / TWO_PI;
}

bool is_horizontal(const LagrangianFrame& f) {
    return f.Y().cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + f.X().cwiseAbs().maxCoeff());
}

// branch continuation in energy from the anchor, where the principal value is
// the true branch; adaptive steps keep every increment under a quarter turn
double continued_phase(const EnergyFamily& fam, double E_target, double x, long k,
                       const LagrangianFrame& f) {
    const double E0 = fam.anchor;
    double u_prev = orbit_principal_phase(fam.at(E0), x, k, f);
    double phi = u_prev;
    if (E_target == E0) return phi;
    const double range = std::abs(E_target - E0);
    double h = (E_target - E0) / 64.0;
    const double h_floor = range * 1e-12;
    double E = E0;
    while (E != E_target) {
        double En = E + h;
        if ((h > 0 && En > E_target) || (h < 0 && En < E_target)) En = E_target;
        double u = orbit_principal_phase(fam.at(En), x, k, f);
        double d = principal_turns(u - u_prev);
        if (std::abs(d) > 0.25) {
            h *= 0.5;
            if (std::abs(h) < h_floor)
                throw std::runtime_error("energy continuation stalled: phase moves too fast");
            continue;
        }
        phi += d;
        u_prev = u;
        E = En;
        if (std::abs(d) < 0.05) h *= 1.5;
        if (std::abs(h) > range / 16.0) h = (h > 0 ? 1 : -1) * range / 16.0;
    }
    return phi;
}

}  // namespace

double energy_continued_phase(const EnergyFamily& fam, double E, double x, long k,
                              const LagrangianFrame* f) {
    Cocycle c = fam.at(E);
    if (!c.form) throw std::invalid_argument("energy_continued_phase: no form");
    LagrangianFrame frame = f ? *f : horizontal_frame(c.dim / 2, *c.form);
    return continued_phase(fam, E, x, k, frame);
}

double energy_anchored_phase(const EnergyFamily& fam, double E, double x, long k,
                             const LagrangianFrame* f) {
    if (k < 1) throw std::invalid_argument("energy_anchored_phase: k must be >= 1");
    Cocycle c = fam.at(E);
    if (!c.form) throw std::invalid_argument("energy_anchored_phase: no form");
    LagrangianFrame frame =
        f ? *f : horizontal_frame(c.dim / 2, *c.form);
    double u = orbit_principal_phase(c, x, k, frame);
    if (fam.has_operator && is_horizontal(frame)) {
        // exact integer part from the Dirichlet inertia count: the phase sits
        // within half a turn of (d k - count), with known fractional part
        long sites = static_cast<long>(fam.d) * k;
        long cnt = count_below(fam.v, fam.w, fam.alpha, x, static_cast<int>(sites), E);
        return static_cast<double>(sites - cnt) + u;
    }
    return continued_phase(fam, E, x, k, frame);
}

RotationEstimate rotation_number_energy(const EnergyFamily& fam, double E, double x,
                                        long k) {
    RotationEstimate r;
    r.steps = k;
    double phi = energy_anchored_phase(fam, E, x, k);
    double phi_half = energy_anchored_phase(fam, E, x, k / 2);
    r.rho = phi / k;
    r.err = fam.at(E).dim / 2.0 / k + std::abs(r.rho - phi_half / (k / 2));
    return r;
}

double phase_derivative(const Cocycle& c, double x, long k, const LagrangianFrame& f) {
    if (!c.has_dA()) throw std::invalid_argument("phase_derivative: cocycle has no dA");
    if (!c.form) throw std::invalid_argument("phase_derivative: cocycle has no form");
    const int n = c.dim;
    const MatrixXcd& P = c.form->P;
    MatrixXcd Pinv = P.partialPivLu().inverse();
    MatrixXcd J = SymplecticForm::standard(n / 2).S;
    // pulled back to the standard form: At = P A P^{-1}, frames Pt = P M
    MatrixXcd Q = orthonormalize(P * f.M);
    MatrixXcd Mhat = MatrixXcd::Zero(n / 2, n / 2);
    for (long j = 0; j < k; ++j) {
        cdouble z(frac(x + j * c.alpha), 0);
        MatrixXcd At = P * c.A(z) * Pinv;
        MatrixXcd dAt = P * c.dA(z) * Pinv;
        MatrixXcd Sj = Q.adjoint() * (At.adjoint() * J * dAt) * Q;
        MatrixXcd B = At * Q;
        Eigen::HouseholderQR<MatrixXcd> qr(B);
        MatrixXcd R = qr.matrixQR().topRows(n / 2).triangularView<Eigen::Upper>();
        Q = qr.householderQ() * MatrixXcd::Identity(n, n / 2);
        MatrixXcd Rinv = R.triangularView<Eigen::Upper>().solve(
            MatrixXcd::Identity(n / 2, n / 2));
        Mhat = Rinv.adjoint() * (Mhat + Sj) * Rinv;
    }
    MatrixXcd Chat = Q.topRows(n / 2) - cdouble(0, 1) * Q.bottomRows(n / 2);
    MatrixXcd Cinv = Chat.partialPivLu().inverse();
    cdouble tr = (Cinv.adjoint() * Mhat * Cinv).trace();
    return -tr.real() / M_PI;
}

double phase_derivative_fd(const EnergyFamily& fam, double E, double x, long k,
                           const LagrangianFrame& f, double h) {
    double up = orbit_principal_phase(fam.at(E + h), x, k, f);
    double um = orbit_principal_phase(fam.at(E - h), x, k, f);
    // for h small the true difference is far below half a turn, so the
    // principal representative of the fractional difference is exact
    return principal_turns(up - um) / (2 * h);
}

MatrixXcd krein_matrix(const MatrixXcd& V, const SymplecticForm& form) {
    return cdouble(0, -1) * (V.adjoint() * form.S * V);
}

}  // namespace qp
