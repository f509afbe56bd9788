#include "qp/splitting.hpp"

namespace qp {

namespace {

// reference plane for the iteration: leading (or trailing) singular directions
// of a short product
MatrixXcd svd_reference(const Cocycle& c, double y, int cols, bool top) {
    MatrixXcd A20 = iterate(c, y, 0.0, 20);
    Eigen::JacobiSVD<MatrixXcd> svd(A20, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXcd F(c.dim, cols);
    if (top) {
        F = svd.matrixU().leftCols(cols);
    } else {
        F = svd.matrixV().rightCols(cols);
    }
    return F;
}

// forward orthonormal iteration ending at phase x (expanding directions)
MatrixXcd forward_frame(const Cocycle& c, double x, long n, int cols) {
    double y0 = x - static_cast<double>(n) * c.alpha;
    MatrixXcd F = svd_reference(c, frac(y0), cols, true);
    for (long j = 0; j < n; ++j)
        F = orthonormalize(c.eval(frac(y0 + j * c.alpha)) * F);
    return F;
}

// backward iteration through inverses ending at phase x (contracting directions)
MatrixXcd backward_frame(const Cocycle& c, double x, long n, int cols) {
    double y0 = x + static_cast<double>(n) * c.alpha;
    MatrixXcd F = svd_reference(c, frac(y0), cols, false);
    for (long j = 1; j <= n; ++j) {
        MatrixXcd A = c.eval(frac(y0 - j * c.alpha));
        F = orthonormalize(A.partialPivLu().solve(F));
    }
    return F;
}

MatrixXcd intersect_spans(const MatrixXcd& Qa, const MatrixXcd& Qb, int k) {
    const int n = static_cast<int>(Qa.rows());
    MatrixXcd G = 2.0 * MatrixXcd::Identity(n, n) - Qa * Qa.adjoint() - Qb * Qb.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G);
    return es.eigenvectors().leftCols(k);
}

struct RawFrames {
    MatrixXcd Eu, Es, Ec, Ecu, Ecs;
};

RawFrames raw_frames(const Cocycle& c, double x, long n, SplitDims dims) {
    const int d = dims.d, m = dims.m, h = d - m;
    RawFrames f;
    if (h == 0) {
        f.Ec = MatrixXcd::Identity(2 * d, 2 * d);
        f.Eu = MatrixXcd(2 * d, 0);
        f.Es = MatrixXcd(2 * d, 0);
        f.Ecu = f.Ec;
        f.Ecs = f.Ec;
        return f;
    }
    f.Eu = forward_frame(c, x, n, h);
    f.Es = backward_frame(c, x, n, h);
    f.Ecu = forward_frame(c, x, n, d + m);
    f.Ecs = backward_frame(c, x, n, d + m);
    f.Ec = intersect_spans(f.Ecu, f.Ecs, 2 * m);
    return f;
}

double frames_distance(const RawFrames& a, const RawFrames& b) {
    double r = grassmann_distance(a.Ec, b.Ec);
    if (a.Eu.cols() > 0) {
        r = std::max(r, grassmann_distance(a.Eu, b.Eu));
        r = std::max(r, grassmann_distance(a.Es, b.Es));
    }
    return r;
}

}  // namespace

BundleFrames bundle_frames_at(const Cocycle& c, double x, long n_start, SplitDims dims,
                              long* n_used) {
    const int h = dims.d - dims.m;
    BundleFrames out;
    if (h == 0) {
        RawFrames f = raw_frames(c, x, 0, dims);
        out.Eu = f.Eu; out.Es = f.Es; out.Ec = f.Ec; out.Ecu = f.Ecu; out.Ecs = f.Ecs;
        out.invariance_residual = 0;
        out.iterations = 0;
        if (n_used) *n_used = 0;
        return out;
    }
    long n = std::max<long>(n_start, 16);
    RawFrames cur = raw_frames(c, x, n, dims);
    for (int round = 0; round < 12; ++round) {
        RawFrames next = raw_frames(c, x, 2 * n, dims);
        double inc = frames_distance(cur, next);
        cur = next;
        n *= 2;
        if (inc < 1e-9) break;
    }
    out.Eu = cur.Eu; out.Es = cur.Es; out.Ec = cur.Ec; out.Ecu = cur.Ecu; out.Ecs = cur.Ecs;
    out.iterations = n;
    if (n_used) *n_used = n;
    // invariance defect: push the frames one step and compare with a fresh
    // computation at the shifted phase
    RawFrames shifted = raw_frames(c, frac(x + c.alpha), n, dims);
    MatrixXcd A = c.eval(frac(x));
    double r = grassmann_distance(A * cur.Ec, shifted.Ec);
    r = std::max(r, grassmann_distance(A * cur.Eu, shifted.Eu));
    r = std::max(r, grassmann_distance(A * cur.Es, shifted.Es));
    out.invariance_residual = r;
    return out;
}

SplittingReport invariant_bundles(const Cocycle& c, const std::vector<double>& x_grid,
                                  long n_start, SplitDims dims) {
    SplittingReport rep;
    rep.x_grid = x_grid;
    rep.dims = dims;
    for (double x : x_grid) {
        long used = 0;
        rep.frames.push_back(bundle_frames_at(c, x, n_start, dims, &used));
        rep.n_used = std::max(rep.n_used, used);
        rep.max_invariance_residual =
            std::max(rep.max_invariance_residual, rep.frames.back().invariance_residual);
    }
    return rep;
}

MatrixXcd symplectic_frame_hyperbolic(const MatrixXcd& Eu, const MatrixXcd& Es,
                                      const SymplecticForm& S) {
    const int h = static_cast<int>(Eu.cols());
    MatrixXcd M(Eu.rows(), 2 * h);
    M.leftCols(h) = Eu;
    M.rightCols(h) = Es;
    MatrixXcd T = M.adjoint() * S.S * M;
    double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
    double iso = std::max(T.topLeftCorner(h, h).cwiseAbs().maxCoeff(),
                          T.bottomRightCorner(h, h).cwiseAbs().maxCoeff());
    if (iso > 1e-6 * scale)
        throw std::runtime_error("hyperbolic pairing: bundles are not isotropic");
    MatrixXcd K = -T.topRightCorner(h, h);
    Eigen::JacobiSVD<MatrixXcd> svd(K);
    if (svd.singularValues().minCoeff() < 1e-10 * std::max(1.0, svd.singularValues().maxCoeff()))
        throw std::runtime_error("hyperbolic pairing: degenerate cross form");
    MatrixXcd out(Eu.rows(), 2 * h);
    out.leftCols(h) = Eu;
    out.rightCols(h) = Es * K.partialPivLu().inverse();
    return out;
}

MatrixXcd symplectic_frame_center(const MatrixXcd& Ec, const SymplecticForm& S) {
    const int two_m = static_cast<int>(Ec.cols());
    if (two_m % 2 != 0) throw std::invalid_argument("center frame: odd dimension");
    const int m = two_m / 2;
    MatrixXcd H = cdouble(0, -1) * (Ec.adjoint() * S.S * Ec);  // Hermitian Krein matrix
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (H + H.adjoint()));
    VectorXd mu = es.eigenvalues();  // ascending
    if (mu(m - 1) > -1e-12 || mu(m) < 1e-12)
        throw std::runtime_error("center frame: Krein signature is not (m, m)");
    // P = [V+ S+ | V- S-] with S± the inverse square roots of the eigenvalue
    // magnitudes; then P^* H P = diag(I, -I)
    MatrixXcd P(two_m, two_m);
    for (int j = 0; j < m; ++j)
        P.col(j) = es.eigenvectors().col(two_m - 1 - j) / std::sqrt(mu(two_m - 1 - j));
    for (int j = 0; j < m; ++j)
        P.col(m + j) = es.eigenvectors().col(j) / std::sqrt(-mu(j));
    // rotate diag(I,-I) into the standard pairing: N P Q^{-1} with the unitary Q
    MatrixXcd Q(two_m, two_m);
    const double r = 1.0 / std::sqrt(2.0);
    Q.topLeftCorner(m, m) = r * MatrixXcd::Identity(m, m);
    Q.topRightCorner(m, m) = r * MatrixXcd::Identity(m, m);
    Q.bottomLeftCorner(m, m) = cdouble(0, -r) * MatrixXcd::Identity(m, m);
    Q.bottomRightCorner(m, m) = cdouble(0, r) * MatrixXcd::Identity(m, m);
    return Ec * P * Q.adjoint();
}

namespace {

std::vector<int> center_indices(int h, int m) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j) idx.push_back(h + j);
    for (int j = 0; j < m; ++j) idx.push_back(2 * h + m + j);
    return idx;
}

MatrixXcd gather(const MatrixXcd& D, const std::vector<int>& idx) {
    MatrixXcd out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) out(i, j) = D(idx[i], idx[j]);
    return out;
}

// full symplectic change of frame at one phase
MatrixXcd assemble_B(const BundleFrames& fr, const SymplecticForm& S, int h, int m) {
    MatrixXcd Nc = symplectic_frame_center(fr.Ec, S);
    MatrixXcd B(fr.Ec.rows(), 2 * (h + m));
    if (h > 0) {
        MatrixXcd Mh = symplectic_frame_hyperbolic(fr.Eu, fr.Es, S);
        B.leftCols(h) = Mh.leftCols(h);
        B.middleCols(h, m) = Nc.leftCols(m);
        B.middleCols(h + m, h) = Mh.rightCols(h);
        B.rightCols(m) = Nc.rightCols(m);
    } else {
        B.leftCols(m) = Nc.leftCols(m);
        B.rightCols(m) = Nc.rightCols(m);
    }
    return B;
}

}  // namespace

BlockDiagonalization block_diagonalize(const Cocycle& c, const SplittingReport& split) {
    if (!c.form) throw std::invalid_argument("block_diagonalize: cocycle carries no form");
    const int d = split.dims.d, m = split.dims.m, h = d - m;
    BlockDiagonalization bd;
    bd.x_grid = split.x_grid;
    bd.dims = split.dims;
    bd.alpha = c.alpha;
    const MatrixXcd J = SymplecticForm::standard(d).S;
    std::vector<int> cidx = center_indices(h, m);
    for (size_t i = 0; i < split.x_grid.size(); ++i) {
        double x = split.x_grid[i];
        MatrixXcd B = assemble_B(split.frames[i], *c.form, h, m);
        bd.B.push_back(B);
        bd.max_form_defect = std::max(
            bd.max_form_defect, (B.adjoint() * c.form->S * B - J).cwiseAbs().maxCoeff());
        // frames at the shifted phase: reuse the grid when it is the orbit of
        // alpha, otherwise compute fresh
        double xs = frac(x + c.alpha);
        MatrixXcd Bs;
        bool found = false;
        for (size_t j = 0; j < split.x_grid.size(); ++j) {
            if (std::abs(frac(split.x_grid[j] - xs + 0.5) - 0.5) < 1e-12) {
                Bs = assemble_B(split.frames[j], *c.form, h, m);
                found = true;
                break;
            }
        }
        if (!found) {
            BundleFrames fs = bundle_frames_at(c, xs, std::max<long>(split.n_used, 16),
                                               split.dims);
            Bs = assemble_B(fs, *c.form, h, m);
        }
        MatrixXcd D = Bs.partialPivLu().solve(c.eval(frac(x))) * B;
        bd.D.push_back(D);
        bd.center.push_back(gather(D, cidx));
        // coupling: anything outside the u, s and center diagonal blocks
        double coup = 0;
        auto group = [&](int idx) {
            if (idx < h) return 0;                    // u
            if (idx >= h + m && idx < 2 * h + m) return 1;  // s
            return 2;                                 // center
        };
        for (int r = 0; r < 2 * d; ++r)
            for (int cc = 0; cc < 2 * d; ++cc)
                if (group(r) != group(cc)) coup = std::max(coup, std::abs(D(r, cc)));
        bd.max_coupling = std::max(bd.max_coupling, coup);
    }
    return bd;
}

namespace {

// detect the primitive period of a rational frequency
long rational_period(double alpha, double tol = 1e-9) {
    double a = frac(alpha);
    for (long q = 1; q <= 200000; ++q) {
        double pa = a * q;
        if (std::abs(pa - std::round(pa)) < tol * q) return q;
    }
    throw std::invalid_argument("frequency is not rational within tolerance");
}

}  // namespace

cdouble center_monodromy_trace(const BlockDiagonalization& bd, int x_index) {
    long q = rational_period(bd.alpha);
    const double x0 = bd.x_grid[static_cast<size_t>(x_index)];
    const int two_m = static_cast<int>(bd.center.front().rows());
    MatrixXcd M = MatrixXcd::Identity(two_m, two_m);
    for (long s = 0; s < q; ++s) {
        double xs = frac(x0 + s * bd.alpha);
        bool found = false;
        for (size_t j = 0; j < bd.x_grid.size(); ++j) {
            if (std::abs(frac(bd.x_grid[j] - xs + 0.5) - 0.5) < 1e-12) {
                M = bd.center[j] * M;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument(
                "center_monodromy_trace: grid does not contain the orbit");
    }
    return M.trace();
}

CenterRotation center_rotation_number(const BlockDiagonalization& bd, int x_index) {
    const int two_m = static_cast<int>(bd.center.front().rows());
    if (two_m != 2)
        throw std::invalid_argument("center_rotation_number: only 2-dim centers");
    long q = rational_period(bd.alpha);
    const double x0 = bd.x_grid[static_cast<size_t>(x_index)];
    // tracked winding along one period plus the exact monodromy eigen-angle
    SymplecticForm J1 = SymplecticForm::standard(1);
    LagrangianFrame f = horizontal_frame(1, J1);
    MatrixXcd M = MatrixXcd::Identity(2, 2);
    double tracked = 0;
    for (long s = 0; s < q; ++s) {
        double xs = frac(x0 + s * bd.alpha);
        const MatrixXcd* Dc = nullptr;
        for (size_t j = 0; j < bd.x_grid.size(); ++j) {
            if (std::abs(frac(bd.x_grid[j] - xs + 0.5) - 0.5) < 1e-12) {
                Dc = &bd.center[j];
                break;
            }
        }
        if (!Dc)
            throw std::invalid_argument(
                "center_rotation_number: grid does not contain the orbit");
        tracked += phase_increment(*Dc, f, HomotopyPath::polar);
        f.M = orthonormalize(*Dc * f.M);
        M = (*Dc) * M;
    }
    CenterRotation out;
    out.trace = M.trace().real();
    out.on_gap = std::abs(out.trace) >= 2.0;
    double theta;  // monodromy rotation angle in turns, fractional part of q rho
    if (out.on_gap) {
        theta = (out.trace >= 0) ? 0.0 : 0.5;
    } else {
        double t = std::acos(std::min(1.0, std::max(-1.0, out.trace / 2.0))) / TWO_PI;
        // elliptic: the trace leaves the sense of rotation open; pick the branch
        // nearest the tracked winding
        double up = std::round(tracked - t) + t;
        double dn = std::round(tracked + t) - t;
        theta = (std::abs(up - tracked) <= std::abs(dn - tracked)) ? t : -t;
    }
    double total = std::round(tracked - theta) + theta;
    out.rho = total / q;
    out.err = std::abs(total - tracked) / q + 1e-12;
    return out;
}

TransportReport parallel_transport(const std::function<Cocycle(double)>& family,
                                   double t0, double t1, double x, SplitDims dims,
                                   int steps) {
    TransportReport rep;
    const int d = dims.d, m = dims.m, h = d - m;
    if (h < 1)
        throw std::invalid_argument("parallel_transport: needs a hyperbolic part");
    const double range = t1 - t0;
    // the form is shared across the family (it only involves the hopping block)
    const SymplecticForm S = *family(t0).form;
    auto frames_at = [&](double t, MatrixXcd& B, MatrixXcd& Nc) {
        Cocycle c = family(t);
        BundleFrames fr = bundle_frames_at(c, x, 64, dims);
        B = assemble_B(fr, *c.form, h, m);
        Nc = MatrixXcd(2 * d, 2 * m);
        Nc.leftCols(m) = B.middleCols(h, m);
        Nc.rightCols(m) = B.rightCols(m);
    };
    const MatrixXcd J2 = SymplecticForm::standard(m).S;
    std::vector<int> cidx = center_indices(h, m);

    auto run = [&](int n_steps, TransportReport& r) {
        r.t_grid = {t0};
        r.R = {MatrixXcd::Identity(2 * m, 2 * m)};
        double t = t0;
        double dt = range / n_steps;
        MatrixXcd B_ref, Nc_ref;
        frames_at(t, B_ref, Nc_ref);
        Eigen::PartialPivLU<MatrixXcd> B_ref_lu(B_ref);
        while ((range > 0 && t < t1) || (range < 0 && t > t1)) {
            double tn = t + dt;
            if ((range > 0 && tn > t1) || (range < 0 && tn < t1)) tn = t1;
            MatrixXcd B_t, Nc_t;
            frames_at(tn, B_t, Nc_t);
            // graph-transform frame: hyperbolic columns from the reference,
            // center columns from the target
            MatrixXcd Mst = B_ref;
            Mst.middleCols(h, m) = Nc_t.leftCols(m);
            Mst.rightCols(m) = Nc_t.rightCols(m);
            MatrixXcd T = B_ref_lu.solve(Mst);
            double det = std::abs(T.partialPivLu().determinant());
            if (det < 0.5) {
                dt *= 0.5;
                if (std::abs(dt) < 1e-10 * std::abs(range)) {
                    r.ok = false;
                    r.message = "transversality lost: step floor reached";
                    return;
                }
                continue;
            }
            r.min_transversality = std::min(r.min_transversality, det);
            MatrixXcd Q = gather(T, cidx);
            MatrixXcd Qinv = Q.partialPivLu().inverse();
            MatrixXcd Vt = Nc_t * Qinv;          // transported center frame
            MatrixXcd Js = Vt.adjoint() * S.S * Vt;
            // N with N^* Js N = J2, N(s) = I: exact Newton correction
            MatrixXcd N = MatrixXcd::Identity(2 * m, 2 * m);
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                MatrixXcd G = N.adjoint() * Js * N;
                MatrixXcd R0 = J2 - G;
                if (R0.cwiseAbs().maxCoeff() < 1e-12) { converged = true; break; }
                N = N * (MatrixXcd::Identity(2 * m, 2 * m) +
                         0.5 * G.partialPivLu().solve(R0));
            }
            if (!converged) {
                r.ok = false;
                r.message = "symplectic normalization did not converge";
                return;
            }
            MatrixXcd C = Qinv * N;
            r.max_symplectic_defect = std::max(
                r.max_symplectic_defect,
                (C.adjoint() * J2 * C - J2).cwiseAbs().maxCoeff());
            r.R.push_back(C * r.R.back());
            r.t_grid.push_back(tn);
            r.max_log_norm = std::max(r.max_log_norm, std::log(r.R.back().norm()));
            t = tn;
            B_ref = B_t;
            Nc_ref = Nc_t;
            B_ref_lu.compute(B_ref);
        }
    };

    run(steps, rep);
    if (rep.ok) {
        TransportReport fine;
        run(2 * steps, fine);
        if (fine.ok)
            rep.endpoint_shift = (rep.R.back() - fine.R.back()).cwiseAbs().maxCoeff();
        else
            rep.endpoint_shift = 1e300;
    }
    return rep;
}

namespace {

// transported-gauge center block at one phase for a nearby parameter: one
// graph-transform step from the reference frames at (E, x)
MatrixXcd transported_center_block(const std::function<Cocycle(double)>& family,
                                   double E_ref, double E, double x, SplitDims dims) {
    const int d = dims.d, m = dims.m, h = d - m;
    Cocycle c_ref = family(E_ref);
    Cocycle c = family(E);
    std::vector<int> cidx = center_indices(h, m);
    auto transported = [&](double phase) {
        BundleFrames fr_ref = bundle_frames_at(c_ref, phase, 64, dims);
        MatrixXcd B_ref = assemble_B(fr_ref, *c_ref.form, h, m);
        BundleFrames fr = bundle_frames_at(c, phase, 64, dims);
        MatrixXcd B_t = assemble_B(fr, *c.form, h, m);
        MatrixXcd Mst = B_ref;
        Mst.middleCols(h, m) = B_t.middleCols(h, m);
        Mst.rightCols(m) = B_t.rightCols(m);
        MatrixXcd T = B_ref.partialPivLu().solve(Mst);
        MatrixXcd Q = gather(T, cidx);
        MatrixXcd Nc_t(2 * d, 2 * m);
        Nc_t.leftCols(m) = B_t.middleCols(h, m);
        Nc_t.rightCols(m) = B_t.rightCols(m);
        return MatrixXcd(Nc_t * Q.partialPivLu().inverse());
    };
    MatrixXcd V0 = transported(x);
    MatrixXcd V1 = transported(frac(x + c.alpha));
    // least-squares restriction of A to the transported center pair
    MatrixXcd Ablock = (V1.adjoint() * V1).partialPivLu().solve(
        V1.adjoint() * (c.eval(frac(x)) * V0));
    return Ablock;
}

}  // namespace

CenterMonotonicity center_monotonicity_check(const std::function<Cocycle(double)>& family,
                                             double E, const std::vector<double>& x_grid,
                                             SplitDims dims, double h) {
    CenterMonotonicity out;
    out.psi_min = 1e300;
    out.psi_max = -1e300;
    const MatrixXcd J2 = SymplecticForm::standard(dims.m).S;
    int prev_sign = 0;
    for (double x : x_grid) {
        // two-step center maps in the transported gauge at E and E +- h
        auto two_step = [&](double Ev) {
            MatrixXcd D0 = transported_center_block(family, E, Ev, x, dims);
            MatrixXcd D1 = transported_center_block(family, E, Ev,
                                                    frac(x + family(E).alpha), dims);
            return MatrixXcd(D1 * D0);
        };
        MatrixXcd Dp = two_step(E + h), Dm = two_step(E - h), Dc = two_step(E);
        MatrixXcd W = Dc.adjoint() * J2 * ((Dp - Dm) / (2 * h));
        // sample real (isotropic) directions
        for (int s = 0; s < 8; ++s) {
            double th = M_PI * s / 8.0;
            VectorXcd u(2 * dims.m);
            u.setZero();
            u(0) = std::cos(th);
            u(2 * dims.m - 1) = std::sin(th);
            double val = ((u.adjoint() * W * u)(0, 0)).real();
            out.psi_min = std::min(out.psi_min, val);
            out.psi_max = std::max(out.psi_max, val);
            int sg = (val > 0) - (val < 0);
            if (prev_sign != 0 && sg != 0 && sg != prev_sign) ++out.sign_changes;
            if (sg != 0) prev_sign = sg;
            ++out.samples;
        }
    }
    return out;
}

ConeCertificate uh_certificate_cone(const Cocycle& c, double eps0, int x_grid) {
    ConeCertificate out;
    if (c.dim != 2) throw std::invalid_argument("cone certificate: needs a 2x2 cocycle");
    long q = rational_period(c.alpha);
    // expanding eigendirection angle of the monodromy at each grid phase
    std::vector<double> beta(static_cast<size_t>(x_grid));
    double lam_min = 1e300;
    for (int i = 0; i < x_grid; ++i) {
        double x = static_cast<double>(i) / x_grid;
        MatrixXcd M = iterate(c, x, 0.0, q);
        double tr = M.trace().real();
        double det = M.partialPivLu().determinant().real();
        double disc = tr * tr - 4 * det;
        if (disc <= 0) {
            out.certified = false;
            out.reason = "monodromy has non-real eigenvalues on the grid";
            return out;
        }
        double lam = (tr + (tr > 0 ? 1 : -1) * std::sqrt(disc)) / 2;  // larger |eigenvalue|
        lam_min = std::min(lam_min, std::abs(lam));
        // eigenvector (M - lam2 I) column: use (a - lam2, c) trick
        double a = M(0, 0).real(), b = M(0, 1).real(), cc = M(1, 0).real(),
               dd = M(1, 1).real();
        double lam2 = det / lam;
        double vx, vy;
        if (std::abs(b) > std::abs(cc)) {
            vx = b;
            vy = lam - a;
        } else if (std::abs(cc) > 0) {
            vx = lam - dd;
            vy = cc;
        } else {
            vx = (std::abs(a - lam) < std::abs(dd - lam)) ? 1 : 0;
            vy = 1 - vx;
        }
        (void)lam2;
        beta[static_cast<size_t>(i)] = std::atan2(vy, vx);
    }
    // one-step cone image: rotate the expanding direction to angle zero on both
    // ends, then require |image angle| < eps0 strictly for the sampled cone
    double worst = 0;
    double Dmax = 0;
    for (int i = 0; i < x_grid; ++i) {
        double x = static_cast<double>(i) / x_grid;
        // grid index of the shifted phase: the grid is uniform, the shift by
        // alpha = p/q lands back on it only if x_grid is a multiple of q; use
        // fresh eigendirection otherwise
        double xs = frac(x + c.alpha);
        MatrixXcd Ms = iterate(c, xs, 0.0, q);
        double trs = Ms.trace().real();
        double dets = Ms.partialPivLu().determinant().real();
        double discs = trs * trs - 4 * dets;
        if (discs <= 0) {
            out.certified = false;
            out.reason = "monodromy has non-real eigenvalues on the shifted grid";
            return out;
        }
        double lams = (trs + (trs > 0 ? 1 : -1) * std::sqrt(discs)) / 2;
        double as = Ms(0, 0).real(), bs = Ms(0, 1).real(), ccs = Ms(1, 0).real(),
               dds = Ms(1, 1).real();
        double vxs, vys;
        if (std::abs(bs) > std::abs(ccs)) {
            vxs = bs;
            vys = lams - as;
        } else if (std::abs(ccs) > 0) {
            vxs = lams - dds;
            vys = ccs;
        } else {
            vxs = (std::abs(as - lams) < std::abs(dds - lams)) ? 1 : 0;
            vys = 1 - vxs;
        }
        double beta_s = std::atan2(vys, vxs);
        MatrixXcd A = c.eval(x);
        Dmax = std::max(Dmax, A.norm() * A.norm());
        Eigen::Matrix2d R0, R1, Ar;
        R0 << std::cos(beta[static_cast<size_t>(i)]), -std::sin(beta[static_cast<size_t>(i)]),
            std::sin(beta[static_cast<size_t>(i)]), std::cos(beta[static_cast<size_t>(i)]);
        R1 << std::cos(-beta_s), -std::sin(-beta_s), std::sin(-beta_s), std::cos(-beta_s);
        Eigen::Matrix2d Are;
        Are << A(0, 0).real(), A(0, 1).real(), A(1, 0).real(), A(1, 1).real();
        Ar = R1 * Are * R0;
        const int samples = 33;
        for (int s = 0; s < samples; ++s) {
            double y = -eps0 + 2 * eps0 * s / (samples - 1);
            Eigen::Vector2d vdir(std::cos(M_PI * y), std::sin(M_PI * y));
            Eigen::Vector2d im = Ar * vdir;
            double yi = std::atan2(im(1), im(0)) / M_PI;
            // projective angle in (-1/2, 1/2]
            if (yi > 0.5) yi -= 1.0;
            if (yi <= -0.5) yi += 1.0;
            worst = std::max(worst, std::abs(yi));
        }
    }
    if (worst < eps0) {
        out.certified = true;
        out.margin = eps0 - worst;
        double cmargin = std::min(lam_min - 1.0, 1.0);
        out.width_bound = std::max(0.0, cmargin) * std::pow(std::tan(M_PI * eps0), 2) / Dmax;
        out.reason = "cone strictly contracted";
    } else {
        out.certified = false;
        out.margin = eps0 - worst;
        out.reason = "cone not contracted on the grid";
    }
    return out;
}

}  // namespace qp
