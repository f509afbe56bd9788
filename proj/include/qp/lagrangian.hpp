#pragma once

#include "qp/cocycle.hpp"

namespace qp {

// frame of an S-Lagrangian subspace: 2m x m matrix of full column rank with
// isotropic span; stored together with the form so the Cayley chart can pull
// back to the standard J
struct LagrangianFrame {
    MatrixXcd M;  // 2m x m, columns span the plane
    SymplecticForm form;

    int m() const { return static_cast<int>(M.cols()); }
    MatrixXcd X() const { return M.topRows(m()); }
    MatrixXcd Y() const { return M.bottomRows(m()); }
};

// build a frame from X, Y blocks; throws if rank-deficient or if the isotropy
// defect |M^* S M| exceeds 1e-6
LagrangianFrame make_frame(const MatrixXcd& X, const MatrixXcd& Y,
                           const SymplecticForm& form);

LagrangianFrame horizontal_frame(int m, const SymplecticForm& form);  // span(e_1..e_m)
LagrangianFrame vertical_frame(int m, const SymplecticForm& form);    // span(e_{m+1}..e_{2m})
// planar line at angle pi*y: (cos pi y, sin pi y), J-form
LagrangianFrame line_frame(double y);
// [I_{d-1}; 0] interleaved with the planar line: X = diag(I_{d-1}, cos pi y),
// Y = diag(0_{d-1}, sin pi y)
LagrangianFrame line_frame_padded(int d, double y);

// direct sum in split coordinates: X = diag(X1, X2), Y = diag(Y1, Y2)
LagrangianFrame interleave(const LagrangianFrame& a, const LagrangianFrame& b,
                           const SymplecticForm& form);

// unitary Cayley image W = (X + iY)(X - iY)^{-1} of the pulled-back frame P M
MatrixXcd cayley_W(const LagrangianFrame& f);

// phase of a single frame: (1/2 pi) arg det W, principal branch in (-1/2, 1/2]
double frame_phase_principal(const LagrangianFrame& f);

enum class HomotopyPath { polar, linear };

// winding of t -> det W_{A(t) Lambda} along a path from I to A:
//   polar:  A(t) = U^t P^t from the polar decomposition A = U P
//   linear: A(t) = (1-t) I + t A (valid when invertible along the way)
// returned in the same units as frame_phase (full turns of det W / 2 pi)
double phase_increment(const MatrixXcd& A, const LagrangianFrame& f,
                       HomotopyPath path = HomotopyPath::polar);

// sum of per-step increments along the orbit, frames orthonormalized per step;
// additive under concatenation by construction
double phase_iterate(const Cocycle& c, double x, long k, const LagrangianFrame& f,
                     HomotopyPath path = HomotopyPath::polar);

// phase difference eta between two frames (path-independent representative,
// straight-line in the Cayley chart)
double phase_between(const LagrangianFrame& a, const LagrangianFrame& b);

struct RotationEstimate {
    double rho = 0;
    double err = 0;
    long steps = 0;
};

// fibred rotation number lim phase_iterate / k; err is the a-priori window d/k
// plus the sampled drift
RotationEstimate rotation_number(const Cocycle& c, double x, long k_max,
                                 const LagrangianFrame& f);

// energy-branch phase phi_k(E) of the k-step iterate at Lambda (horizontal by
// default): anchored above the spectrum where the principal branch is exact.
// With operator data and a horizontal frame the integer part comes from the
// Dirichlet inertia count; otherwise the branch is continued in E.
double energy_anchored_phase(const EnergyFamily& fam, double E, double x, long k,
                             const LagrangianFrame* f = nullptr);

// same branch, but always through continuation in E from the anchor (never
// consults eigenvalue counts; used to cross-validate the counting identity)
double energy_continued_phase(const EnergyFamily& fam, double E, double x, long k,
                              const LagrangianFrame* f = nullptr);

// rotation number of the energy family at E from the anchored branch, k steps
RotationEstimate rotation_number_energy(const EnergyFamily& fam, double E, double x,
                                        long k);

// derivative of the phase of the k-step iterate along a parametrized family,
// via the trace identity; the family must provide dA.  Stable form: frames are
// orthonormalized each step and the accumulated form matrix is propagated by
// the inverse R factors.
double phase_derivative(const Cocycle& c, double x, long k, const LagrangianFrame& f);

// finite-difference counterpart on an EnergyFamily (for cross-checks)
double phase_derivative_fd(const EnergyFamily& fam, double E, double x, long k,
                           const LagrangianFrame& f, double h = 1e-6);

// Krein matrix G = (1/i) V^* S V of a set of column vectors
MatrixXcd krein_matrix(const MatrixXcd& V, const SymplecticForm& form);

}  // namespace qp
