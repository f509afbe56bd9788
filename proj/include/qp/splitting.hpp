#pragma once

#include "qp/lagrangian.hpp"

namespace qp {

// invariant splitting data at a single phase: orthonormal frames for the
// unstable/stable bundles and the (2m)-dimensional center, plus the slow
// center-unstable / center-stable intermediates used to cut the center out
struct BundleFrames {
    MatrixXcd Eu, Es, Ec;    // 2d x d-m, 2d x d-m, 2d x 2m
    MatrixXcd Ecu, Ecs;      // 2d x d+m
    double invariance_residual = 0;  // Grassmann defect of A(x) Eu(x) vs Eu(x+alpha) etc.
    long iterations = 0;
};

struct SplitDims {
    int d = 1;  // half-dimension of the cocycle
    int m = 1;  // half-dimension of the center
};

// power/inverse-power iteration for the dominated splitting of index d-m at
// every phase of x_grid; n doubles until the Grassmann increment of all frames
// drops below 1e-9 (or n_max is hit)
struct SplittingReport {
    std::vector<double> x_grid;
    std::vector<BundleFrames> frames;
    SplitDims dims;
    double max_invariance_residual = 0;
    long n_used = 0;
};

SplittingReport invariant_bundles(const Cocycle& c, const std::vector<double>& x_grid,
                                  long n_start, SplitDims dims);

// frames for a single phase (used pointwise by transport and block diagonalization)
BundleFrames bundle_frames_at(const Cocycle& c, double x, long n_start, SplitDims dims,
                              long* n_used = nullptr);

// Step I: pair the unstable/stable bases into a symplectic set:
// returns 2d x 2(d-m) matrix [u-basis | s-basis] with form values
// omega(u_{-i}, u_j) = delta_{ij} and isotropic halves
MatrixXcd symplectic_frame_hyperbolic(const MatrixXcd& Eu, const MatrixXcd& Es,
                                      const SymplecticForm& S);

// Step II: normalize the center frame so the restricted form is J_{2m};
// requires Krein signature (m, m) on the center (throws otherwise)
MatrixXcd symplectic_frame_center(const MatrixXcd& Ec, const SymplecticForm& S);

// full change of frame B(x): columns ordered (u-basis, center-first-half |
// s-basis, center-second-half); B^* S B = J_{2d}
struct BlockDiagonalization {
    std::vector<double> x_grid;
    std::vector<MatrixXcd> B;       // per phase
    std::vector<MatrixXcd> D;       // conjugated cocycle B(x+alpha)^{-1} A(x) B(x)
    SplitDims dims;
    double alpha = 0;
    double max_form_defect = 0;     // |B^* S B - J|
    double max_coupling = 0;        // off block-diagonal mass of D
    std::vector<MatrixXcd> center;  // 2m x 2m center blocks of D
};

BlockDiagonalization block_diagonalize(const Cocycle& c, const SplittingReport& split);

// trace of the center monodromy over the primitive period of the conjugated
// cocycle's frequency (gauge-free: the B factors telescope)
cdouble center_monodromy_trace(const BlockDiagonalization& bd, int x_index = 0);

// rotation number of the conjugated center cocycle over one primitive period:
// the monodromy eigen-angle pins the fractional part exactly (0 or 1/2 when the
// center is hyperbolic or parabolic), the tracked winding sets the integer part
struct CenterRotation {
    double rho = 0;        // per center step, in [0, 1)
    double err = 0;
    double trace = 0;      // real part of the period monodromy trace
    bool on_gap = false;   // |trace| >= 2
};
CenterRotation center_rotation_number(const BlockDiagonalization& bd, int x_index = 0);

// parallel transport of the center frames along a parameter interval via the
// graph-transform construction; per-step factors are symplectic 2x2 matrices
struct TransportReport {
    std::vector<double> t_grid;
    std::vector<MatrixXcd> R;   // accumulated holonomy, R[0] = I
    double max_symplectic_defect = 0;
    double endpoint_shift = 0;         // |R_end - R_end(half step)| stability measure
    double min_transversality = 1e300; // smallest |det M| encountered
    double max_log_norm = 0;           // max log |R|
    bool ok = true;
    std::string message;
};

// family: t -> cocycle (e.g. energy across a band); frames are recomputed per
// node; the transported 2-frame stays within the kernel-transversal gauge fixed
// by the hyperbolic directions at the starting node
TransportReport parallel_transport(const std::function<Cocycle(double)>& family,
                                   double t0, double t1, double x, SplitDims dims,
                                   int steps = 64);

// finite-difference monotonicity statistics of the transported center family
struct CenterMonotonicity {
    double psi_min = 0, psi_max = 0;
    int sign_changes = 0;
    int samples = 0;
};
CenterMonotonicity center_monotonicity_check(const std::function<Cocycle(double)>& family,
                                             double E, const std::vector<double>& x_grid,
                                             SplitDims dims, double h = 1e-5);

// uniform-hyperbolicity certificate for real 2x2 cocycles over a rational
// frequency: checks that a cone of half-width eps0 around the expanding
// eigendirection of the monodromy is mapped strictly inside itself at every
// phase of the grid
struct ConeCertificate {
    bool certified = false;
    double margin = 0;        // worst-case contraction margin of the cone boundary
    double width_bound = 0;   // implied lower bound for the surrounding gap width
    std::string reason;
};
ConeCertificate uh_certificate_cone(const Cocycle& c, double eps0, int x_grid);

}  // namespace qp
