#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"
#include "permafinetti/expansion.hpp"

namespace permafinetti {

// C_ell = (e^ell ell! / ell^(ell+1/2))^(1/2), strictly decreasing in ell.
// Direct interleaved product for ell <= 170, log-space beyond.
double c_const(int ell);

// Unique root in (0,1) of
//   2 + 2^(1/4) C_2 x ((1-x^(ell-1))/(1-x))^(3/4)
//     = (ell+1)^(1/4) C_(ell+1) x^((ell+1)/2) / (1-x)^(3/4).
// Bisection on the monotone form obtained by dividing out x^((ell+1)/2);
// absolute tolerance 1e-12, at most 200 iterations.
double x_root(int ell);

// kappa-bar_ell = (ell+1)^(1/4) C_(ell+1) / (1 - x_ell)^(3/4): the certified
// constant of the singularity-free error bound kappa * gamma^((ell+1)/2).
double kappa_upper(int ell);

struct ConstantsRow {
    int ell;
    double c;            // C_ell
    double x;            // x_ell
    double kappa;        // kappa-bar_ell
};

std::vector<ConstantsRow> constants_table(int lmax);
// Both emit 12 significant digits per value.
std::string constants_to_json(const std::vector<ConstantsRow>& rows);
std::string constants_to_csv(const std::vector<ConstantsRow>& rows);

// (ell+1)^(1/4) C_(ell+1) gamma^((ell+1)/2) / (1-gamma)^(3/4).
// Requires gamma < 1 (use err_bound_kappa otherwise), a unit-bounded source
// matrix, and 1 <= ell <= n.
double err_bound_main(const ExpansionParams& params, int ell);

// kappa-bar_ell * gamma^((ell+1)/2); no restriction on gamma.
double err_bound_kappa(const ExpansionParams& params, int ell);

// Bound on |normalized permanent - H_1|:
// gamma(1/2) + 3^(1/4) C_3 gamma^(3/2) / (1-gamma)^(3/4). Requires gamma < 1.
double err_bound_h1(const ExpansionParams& params);

// Bound on |normalized permanent - H_2| (requires n >= 2, gamma < 1):
// sqrt(3) sum_j ((1/N^2) sum_k |a_{j,k}|^2 min{n/3, 1/(1-beta)})^(3/2)
//   + 2^(1/2) C_4 gamma^2 / (1-gamma)^(3/4).
double err_bound_h2(const ComplexMatrix& z);

struct G2Bound {
    double refined;  // product form; always <= coarse
    double coarse;   // gamma(1/2)
};

// |G_2| bounds (requires n >= 2 and unit-bounded source).
G2Bound bound_g2(const ExpansionParams& params);

// Majorant of |G_3|: sqrt(3) sum_j ((1/N^2) sum_k |a_{j,k}|^2
// min{n/3, 1/(1-beta)})^(3/2). Evaluates for any n (G_3 itself is zero for
// n < 3). Requires unit-bounded source.
double bound_g3(const ComplexMatrix& z);

// Hadamard-type bound for matrices with zero column sums:
// n! N^(N/2) / ((N-n)^((N-n)/2) n^(n/2)) * prod_k alpha_k^(1/2), with
// 0^0 = 1 at N = n. Always >= |Per A|.
double hadamard_zero_colsum(const ComplexMatrix& a);

// Square-matrix bound N! prod_k ((1/N) sum_j |z_{j,k}|^2)^(1/2) >= |Per Z|.
double hadamard_square(const ComplexMatrix& z);

// Embedding variant for zero-column-sum matrices:
// N!/(N-n)! * prod_k alpha_k^(1/2). Never smaller than hadamard_zero_colsum.
double hadamard_embed(const ComplexMatrix& a);

// The classical constant-16 bound 16 n / N.
double bobkov_bound(std::size_t n, std::size_t n_rows);

struct BoundPair {
    double lhs;
    double rhs;
};

// lhs = |[y^m] prod_k (w1_k + w2_k y)|,
// rhs = C(n,m) (mean |w2|^2)^(m/2) (mean |w1|^2)^((n-m)/2); lhs <= rhs.
BoundPair lemma_coeff_pair(std::span<const Complex> w1, std::span<const Complex> w2,
                           std::size_t m);

// lhs = |[x_1...x_n] (sum_k b_k x_k)^(n-m) prod_j (1 + sum_k a_{j,k} x_k)|,
// rhs = n! N^(N/2) alpha^(m/2) beta_b^((n-m)/2) / ((N-m)^((N-m)/2) m^(m/2)).
// Requires zero column sums and 0 <= m <= min{n, N}.
BoundPair lemma_mixed_pair(const ComplexMatrix& a, std::span<const Complex> b,
                           std::size_t m, const Caps& caps = {});

// lhs = sum_{m=0}^r (m+1)^t x^m, rhs = ((1-x^(r+1))/(1-x))^(1+t) with the
// x -> 1 limit (r+1)^(1+t). Requires t, x in [0,1].
BoundPair lemma_geom_pair(unsigned r, double t, double x);

// Normalized elementary symmetric means (e_ell / C(n,ell))^(1/ell) of
// nonnegative inputs; the sequence is non-increasing (Maclaurin). Used by
// the property suites.
std::vector<double> maclaurin_means(std::span<const double> g);

}  // namespace permafinetti
