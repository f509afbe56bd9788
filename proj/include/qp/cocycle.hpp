#pragma once

#include "qp/operators.hpp"

#include <functional>
#include <optional>

namespace qp {

// skew-Hermitian nondegenerate form S together with a congruence witness P
// satisfying P^* J P = S, where J = [[0,-I],[I,0]]
struct SymplecticForm {
    MatrixXcd S;
    MatrixXcd P;

    static SymplecticForm standard(int m);  // S = J_{2m}, P = I
    // strip form S_d = [[0, -C^*],[C, 0]] with witness P = diag(C, I)
    static SymplecticForm strip(const MatrixXcd& C);
    // generic: factor an arbitrary skew-Hermitian nondegenerate S
    static SymplecticForm general(const MatrixXcd& S);
};

// one-frequency cocycle (alpha, A) with optional analytic continuation in the
// phase and optional derivative of A in its construction parameter (energy)
struct Cocycle {
    double alpha = 0;
    int dim = 2;  // 2m
    std::function<MatrixXcd(cdouble)> A;   // z = x + i eps
    std::function<MatrixXcd(cdouble)> dA;  // d/dE A, empty if not applicable
    std::optional<SymplecticForm> form;
    double E = 0;             // construction parameter when applicable
    bool real_sl2 = false;    // true for real 2x2 transfer cocycles of Schrodinger type
    double eps_radius = 0.5;  // half-width of the analyticity strip used by callers

    MatrixXcd eval(double x, double eps = 0) const { return A(cdouble(x, eps)); }
    bool has_dA() const { return static_cast<bool>(dA); }
};

// transfer cocycle of u_{n+1} + u_{n-1} + v(x + n alpha) u_n = E u_n:
//   S(x) = [[E - v(x), -1], [1, 0]]
Cocycle schrodinger_cocycle(const TrigPoly& v, double alpha, double E);

// companion transfer cocycle of the finite-range operator with hopping symbol v
// (degree d) and potential w:
//   (L u)_n = sum_k vhat_k u_{n+k} + w(x + n alpha) u_n = E u_n
// written on U_m = (u_{m+d-1}, ..., u_{m-d}); size 2d, frequency alpha
Cocycle transfer_cocycle(const TrigPoly& v, const TrigPoly& w, double alpha, double E);

// same with the potential fixed to 2 cos(2 pi x)
Cocycle longrange_cocycle(const TrigPoly& v, double alpha, double E);

// blocked d-step form over frequency d*alpha:
//   A(y) = [[C^{-1}(E - V(y)), -C^{-1} C^*], [I, 0]],  S_d-symplectic
Cocycle dual_cocycle(const TrigPoly& v, double alpha, double E);
// generic-potential variant of the blocked form
Cocycle strip_cocycle(const TrigPoly& v, const TrigPoly& w, double alpha, double E);

// n-step iterate A_n(x) at phase x (+ i eps); n < 0 uses inverses at shifted phases
MatrixXcd iterate(const Cocycle& c, double x, double eps, long n);

// the k-step iterate as a cocycle over frequency k*alpha (dA by the product rule)
Cocycle iterate_cocycle(const Cocycle& c, int k);

// sup over a phase grid of |A^* S A - S|_inf
double check_symplectic(const Cocycle& c, int samples = 64, double eps = 0);

// --- Lyapunov exponents ----------------------------------------------------

struct LyapunovReport {
    std::vector<double> exponents;  // descending, all dim of them
    std::vector<double> stderrs;
    long n = 0;
    int x_samples = 0;
    double eps = 0;
};

LyapunovReport lyapunov_exponents(const Cocycle& c, long n = 20000, int x_samples = 16,
                                  double eps = 0, std::uint64_t seed = 20240915);

struct AccelerationReport {
    std::vector<double> eps_grid;
    std::vector<double> top_le;      // L_1(eps), top exponent along the grid
    double omega = 0;                // acceleration at eps = 0+ (slope / 2 pi), rounded
    double omega_residual = 0;       // distance of slope/2pi from the nearest integer
    double omega_bar = 1;            // limiting acceleration past the first slope break
    bool turning_point_found = false;
    bool strip_may_be_small = false; // no slope break seen inside the sampled strip
    std::vector<double> segment_slopes;
};

// top exponent along an eps grid in (0, 0.4 * eps_radius]; piecewise-linear
// slope analysis in eps gives the acceleration
AccelerationReport complexified_le(const Cocycle& c, int n_eps = 12, long n = 20000,
                                   int x_samples = 8, std::uint64_t seed = 20240915);

// check for a dominated splitting of index j: min over the phase grid of the
// singular-value gap rate (1/n) log(sigma_j / sigma_{j+1}) of A_n
struct DominanceReport {
    bool dominated = false;
    double min_gap_rate = 0;
};
DominanceReport detect_dominated(const Cocycle& c, long n, int j, int x_grid = 64,
                                 double threshold = 1e-3);

// --- energy monotonicity ----------------------------------------------------

// energy-parametrized cocycle family E -> (alpha, A^E)
struct EnergyFamily {
    std::function<Cocycle(double)> at;
    // conservative upper bound for finite-volume spectra of the underlying
    // operator (used to anchor phase branches above the spectrum)
    double anchor = 0;
    // symbols of the underlying operator, when there is one: they give exact
    // integer phase branches through eigenvalue counts
    bool has_operator = false;
    TrigPoly v, w;  // hopping and potential
    double alpha = 0;
    int d = 1;  // hopping degree = block size of the cocycle step
};

EnergyFamily schrodinger_family(const TrigPoly& v, double alpha);
EnergyFamily transfer_family(const TrigPoly& v, const TrigPoly& w, double alpha);
EnergyFamily longrange_family(const TrigPoly& v, double alpha);
EnergyFamily dual_family(const TrigPoly& v, double alpha);
EnergyFamily strip_family(const TrigPoly& v, const TrigPoly& w, double alpha);

// value of the energy-derivative form u^* (A^* S dA) u at phase x, computed by
// central differences on the family; u must be S-isotropic (checked), the value
// is then real and gauge independent
double monotonicity_form(const EnergyFamily& fam, double E, const VectorXcd& u, double x,
                         double h = 1e-5);

// --- cohomological equation --------------------------------------------------

// solve psi(x + alpha) - psi(x) = rho(x) - rho_hat_0 mode by mode up to degree K;
// modes whose divisor |e^{2 pi i k alpha} - 1| falls below `threshold` are skipped
struct CohomologicalSolution {
    TrigPoly psi;
    double residual = 0;          // sup norm of the defect on a grid
    std::vector<int> skipped;     // modes dropped for small divisors
    double mean = 0;              // rho_hat_0
};
CohomologicalSolution solve_cohomological(const TrigPoly& rho, double alpha, int K,
                                          double threshold = 1e-8);

}  // namespace qp
