#pragma once

#include "qp/splitting.hpp"

namespace qp {

// spectral-gap bookkeeping for rational approximants

struct Band {
    Interval I;
};

struct Gap {
    Interval I;
    long ell = 0;  // number of bands below
    long k = 0;    // label: unique solution of ell = -k p (mod q), |k| <= q/2
};

struct BandStructure {
    Rational pq;
    std::vector<Interval> bands;  // disjoint, ascending
    std::vector<Gap> gaps;        // interior gaps only
};

// cluster a sample cloud into bands separated by more than eta
BandStructure detect_gaps(const std::vector<double>& cloud, double eta, Rational pq);

// band structure from exact per-phase Floquet envelopes (union over the grid)
BandStructure band_structure(const FloquetSpectrum& fs);

// assign labels; ell comes from exact Bloch counting at gap midpoints
void label_gaps(BandStructure& bs, const TrigPoly& v, const TrigPoly& w);

// finite-volume eigenvalue count vs the phase of the k-step iterate at the
// horizontal plane: count = d*N - phi (integer branch) resp. d*N - phi - 1/2
struct CountPhase {
    long count = 0;       // eigenvalues of the Dirichlet restriction below E
    double phase = 0;     // anchored branch value phi
    double predicted = 0; // d*N - phi (- 1/2 when E is an eigenvalue)
    bool consistent = false;
};
CountPhase count_vs_phase(const TrigPoly& v, const TrigPoly& w, Rational pq, double x,
                          int N, double E, bool E_is_eigenvalue_of_N);

// intersection of the primal and dual gaps with matching labels; nonempty for
// the labels where both sides open
struct JointGap {
    long k = 0;
    Interval primal, dual, joint;
};
std::vector<JointGap> joint_gap(const TrigPoly& v, const TrigPoly& w, Rational pq,
                                int x_grid, int bloch_grid = 64);

// evaluate both sides of the gap-width bound heuristic: the measured gap width
// against the accumulated center norms; diagnostic only
struct GapBoundDiagnostic {
    long k = 0;
    double width = 0;
    double bound_scale = 0;  // sum of |C_m|^2-type weights entering the bound
    double ratio = 0;
};
std::vector<GapBoundDiagnostic> gap_bound_diagnostic(const TrigPoly& v, const TrigPoly& w,
                                                     Rational pq, double x,
                                                     const BandStructure& bs);

// pointwise check of  d_v * (1 - N(E)) = rho_x(E)  over an energy grid
struct IdsRotationCheck {
    std::vector<double> E;
    std::vector<double> lhs;  // d (1 - N(E))
    std::vector<double> rhs;  // anchored rotation number
    double max_abs_diff = 0;
};
IdsRotationCheck ids_rotation_check(const TrigPoly& v, const TrigPoly& w, Rational pq,
                                    const std::vector<double>& E_grid, double x,
                                    int N_vol = 2000, int x_samples = 32);

// Hoelder-type scaling experiment: one-sided Hausdorff distances of spectra for
// consecutive rational approximants, normalized by |alpha - alpha'|^(1/2)
struct HolderRow {
    Rational a1, a2;
    double hausdorff = 0;
    double ratio = 0;  // hausdorff / sqrt(|alpha1 - alpha2|)
};
std::vector<HolderRow> holder_experiment(const TrigPoly& v, const TrigPoly& w,
                                         const std::vector<Rational>& alphas,
                                         int x_grid = 64, int bloch_grid = 48);

// trace of the center monodromy as a function of energy; on gaps |a| >= 2, on
// bands the trace sweeps (-2, 2)
struct TraceProfile {
    std::vector<double> E;
    std::vector<double> a;       // real part of the center trace
    std::vector<double> im_a;    // imaginary parts (should vanish)
};
TraceProfile trace_profile(const TrigPoly& v, const TrigPoly& w, Rational pq,
                           const std::vector<double>& E_grid, double x);

}  // namespace qp
