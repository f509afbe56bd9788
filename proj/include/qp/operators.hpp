#pragma once

#include "qp/trigpoly.hpp"

namespace qp {

// self-adjoint finite-range quasiperiodic operator
//   (L u)_n = sum_{k=-d}^{d} vhat_k u_{n+k} + w(x + n alpha) u_n
// restricted to n = 0..N-1 with either Dirichlet or Bloch boundary phase.
enum class Boundary { dirichlet, bloch };

struct FiniteOperator {
    MatrixXcd H;
    int N = 0;
    Boundary bc = Boundary::dirichlet;
    double theta = 0;  // Bloch phase, only meaningful for bc == bloch
};

FiniteOperator build_finite(const TrigPoly& v, const TrigPoly& w, double alpha, double x,
                            int N, Boundary bc = Boundary::dirichlet, double theta = 0);

// sorted (ascending) eigenvalues of a Hermitian finite operator
VectorXd eigenvalues(const FiniteOperator& op);

// number of eigenvalues of the Dirichlet restriction that are <= E (ties counted in);
// banded LDL^T inertia count with a dense fallback on small pivots
long count_below(const TrigPoly& v, const TrigPoly& w, double alpha, double x, int N,
                 double E);

// integrated density of states at energy E: eigenvalue counting fraction averaged
// over M equidistributed phases, volume N
struct IdsEstimate {
    double E = 0;
    double value = 0;
    int N = 0;
    int x_samples = 0;
};
IdsEstimate ids(const TrigPoly& v, const TrigPoly& w, double alpha, double E,
                int N = 2000, int M = 32);

// --- strip (blocked) form ------------------------------------------------
//
// For hopping degree d, sites are grouped in blocks of d with components listed
// top-down as (u_{nd+d-1}, ..., u_{nd}).  The hopping block C_d is upper
// triangular with first row (vhat_d, ..., vhat_1) and vhat_d on the diagonal;
// the in-block matrix V_d(y) is Hermitian with (V_d)_{jk} = vhat_{j-k} off the
// diagonal and diagonal entries vhat_0 + w at the per-site phases.
struct StripBlocks {
    MatrixXcd C;                          // d x d hopping block
    std::function<MatrixXcd(cdouble)> V;  // y -> V_d(y); y is the phase of the block's lowest site
};

StripBlocks strip_blocks(const TrigPoly& v, const TrigPoly& w, double alpha);

// hopping block and in-block matrix in the convention above for the potential
// 2 cos(2 pi x), evaluated at x; for degree-1 v this returns a 1x1 pair
std::pair<MatrixXcd, MatrixXcd> dual_strip_matrices(const TrigPoly& v, double alpha,
                                                    double x);

// blocked restriction to N blocks (d*N sites), Dirichlet; equals the scalar
// restriction up to the within-block component ordering
FiniteOperator build_strip_finite(const TrigPoly& v, const TrigPoly& w, double alpha,
                                  double x, int Nblocks);

// --- periodic (Floquet) spectra ------------------------------------------

struct FloquetSpectrum {
    Rational pq;
    std::vector<double> cloud;                          // all sampled eigenvalues, sorted
    std::vector<Interval> bands;                        // per-index envelopes over the sample grid
    std::vector<std::vector<double>> per_x_lo, per_x_hi; // band edges per phase sample
    std::vector<double> x_grid;
};

// spectrum of the periodic approximant alpha = p/q via q x q Bloch matrices,
// sampled over x_grid phases and bloch_grid boundary angles
FloquetSpectrum floquet_spectrum(const TrigPoly& v, const TrigPoly& w, Rational pq,
                                 int x_grid = 256, int bloch_grid = 64);

// dual pair: swap the roles of hopping and potential symbols
std::pair<TrigPoly, TrigPoly> aubry_dual(const TrigPoly& v, const TrigPoly& w);

// Hausdorff distance between two closed sets given as sorted sample clouds
double hausdorff(const std::vector<double>& A, const std::vector<double>& B);
// one-sided: sup_{a in A} dist(a, B)
double hausdorff_one_sided(const std::vector<double>& A, const std::vector<double>& B);

}  // namespace qp
