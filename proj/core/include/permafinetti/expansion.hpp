#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"
#include "permafinetti/multilinear.hpp"

namespace permafinetti {

// Column means, deviations and the scalar statistics (alpha, beta, gamma)
// of a matrix. Instances are produced only by analyze() and are immutable,
// so they can be shared freely across threads.
class ExpansionParams {
public:
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }

    std::span<const Complex> column_means() const { return column_means_; }

    // Row-major N x n deviations a_{j,k} = z_{j,k} - mean_k; every column
    // sums to zero up to roundoff.
    std::span<const Complex> deviations() const { return deviations_; }
    Complex deviation(std::size_t j, std::size_t k) const {
        return deviations_[j * n_cols_ + k];
    }

    // alpha_k = (1/N) sum_j |a_{j,k}|^2
    std::span<const double> column_second_moments() const { return column_second_moments_; }

    double alpha() const { return alpha_; }  // mean of the alpha_k
    double beta() const { return beta_; }    // (1/n) sum_k |mean_k|^2
    // gamma = (n alpha / N) * min{n, 1/(1-beta)}, with 1/(1-beta) read as
    // +inf when beta >= 1.
    double gamma() const { return gamma_; }

    bool unit_bounded() const { return unit_bounded_; }

private:
    friend ExpansionParams analyze(const ComplexMatrix& z);
    ExpansionParams() = default;

    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<Complex> column_means_;
    std::vector<Complex> deviations_;
    std::vector<double> column_second_moments_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    bool unit_bounded_ = false;
};

ExpansionParams analyze(const ComplexMatrix& z);

// gamma(d) = (n alpha / N) * min{d n, 1/(1-beta)}; gamma_d(p, 1) == p.gamma().
double gamma_d(const ExpansionParams& params, double d);

// W_m(x) = [y^m] prod_j (1 + U_j(x) y) reduced modulo squares, where U_j is
// the j-th deviation row as a linear form. Computed through the power-sum
// recursion m W_m = -sum_{k=0}^{m-2} W_k V_{m-k} with
// V_i(x) = sum_j (-U_j(x))^i. Supported on subsets of size exactly m, so it
// vanishes identically for m > n. Valid for 0 <= m <= N.
MultilinearPoly w_poly(const ComplexMatrix& z, std::size_t m, const Caps& caps = {});

// G_m(Z) = (N-m)!/((n-m)! N!) [x_1...x_n] W_m(x) (sum_k mean_k x_k)^{n-m},
// factorial ratios folded multiplicatively. Requires m <= n.
Complex g_term(const ComplexMatrix& z, std::size_t m, const Caps& caps = {});

// Closed form for G_2: -((N-2)!/N!) sum_{|K|=2} (sum_j prod_{k in K} a_{j,k})
// prod_{k not in K} mean_k, by direct subset summation. Requires n >= 2.
Complex g2_closed(const ComplexMatrix& z);

// Closed form for G_3 (requires n >= 3):
// 2 ((N-3)!/N!) sum_{|K|=3} (sum_j prod_{k in K} a_{j,k}) prod_{k not in K} mean_k.
Complex g3_closed(const ComplexMatrix& z);

// H_ell(Z) = sum_{m=0}^{ell} G_m(Z). H_1 = prod_k mean_k; H_n equals the
// normalized permanent. Requires 1 <= ell <= n.
Complex h_approx(const ComplexMatrix& z, std::size_t ell, const Caps& caps = {});

}  // namespace permafinetti
