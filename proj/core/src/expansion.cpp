#include "permafinetti/expansion.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "permafinetti/errors.hpp"

namespace permafinetti {

namespace {

// T[S] = sum_j prod_{k in S} a_{j,k} over all subset masks S. O(N 2^n).
std::vector<Complex> subset_product_sums(std::span<const Complex> deviations,
                                         std::size_t n_rows, std::size_t n_cols) {
    const std::size_t table = std::size_t{1} << n_cols;
    std::vector<Complex> sums(table, Complex{});
    std::vector<Complex> row_prod(table);
    for (std::size_t j = 0; j < n_rows; ++j) {
        const Complex* a = deviations.data() + j * n_cols;
        row_prod[0] = 1.0;
        for (std::size_t s = 1; s < table; ++s) {
            const int k = std::countr_zero(static_cast<std::uint32_t>(s));
            row_prod[s] = row_prod[s & (s - 1)] * a[k];
        }
        for (std::size_t s = 0; s < table; ++s) sums[s] += row_prod[s];
    }
    return sums;
}

// V_i(x) = sum_j (-U_j(x))^i in the quotient ring: supported on |S| = i with
// V_i[S] = (-1)^i i! T[S].
MultilinearPoly v_poly(const std::vector<Complex>& sums, int n_vars, std::size_t i) {
    MultilinearPoly v(n_vars);
    double fact = 1.0;
    for (std::size_t m = 2; m <= i; ++m) fact *= static_cast<double>(m);
    const double signed_fact = (i % 2 == 0) ? fact : -fact;
    const std::uint32_t full = v.full_mask();
    for (std::uint32_t s = 0; s <= full; ++s) {
        if (static_cast<std::size_t>(std::popcount(s)) == i) {
            v.coeff(s) = signed_fact * sums[s];
        }
    }
    return v;
}

// W_0..W_top through the recursion m W_m = -sum_{k=0}^{m-2} W_k V_{m-k}.
// W_1 is identically zero because the deviation columns sum to zero.
std::vector<MultilinearPoly> w_tables(const ExpansionParams& params, std::size_t top,
                                      const Caps& caps) {
    const auto n_cols = params.n_cols();
    check_bitmask_cap(n_cols, caps);
    const int n_vars = static_cast<int>(n_cols);
    const auto sums = subset_product_sums(params.deviations(), params.n_rows(), n_cols);

    std::vector<MultilinearPoly> w;
    w.reserve(top + 1);
    w.push_back(MultilinearPoly::one(n_vars));
    if (top >= 1) w.push_back(MultilinearPoly(n_vars));
    for (std::size_t m = 2; m <= top; ++m) {
        MultilinearPoly acc(n_vars);
        if (m <= n_cols) {
            for (std::size_t k = 0; k + 2 <= m; ++k) {
                if (w[k].is_zero()) continue;
                acc += w[k] * v_poly(sums, n_vars, m - k);
            }
            acc.scale(Complex{-1.0 / static_cast<double>(m), 0.0});
        }
        // For m > n every monomial would contain a squared variable, so W_m
        // vanishes in the quotient ring and the zero table is exact.
        w.push_back(std::move(acc));
    }
    return w;
}

// P_r = (sum_k mean_k x_k)^r / r!, built incrementally so the factorial
// never appears as a bare number.
MultilinearPoly scaled_mean_power_step(MultilinearPoly p, std::span<const Complex> means,
                                       std::size_t r) {
    p.mul_affine(Complex{}, means);
    p.scale(Complex{1.0 / static_cast<double>(r), 0.0});
    return p;
}

double factorial_ratio(std::size_t n_rows, std::size_t m) {
    // (N-m)!/N! = prod_{i=0}^{m-1} 1/(N-i)
    double ratio = 1.0;
    for (std::size_t i = 0; i < m; ++i) ratio /= static_cast<double>(n_rows - i);
    return ratio;
}

}  // namespace

ExpansionParams analyze(const ComplexMatrix& z) {
    ExpansionParams p;
    p.n_rows_ = z.rows();
    p.n_cols_ = z.cols();
    p.unit_bounded_ = z.unit_bounded();

    const std::size_t n_rows = p.n_rows_;
    const std::size_t n_cols = p.n_cols_;
    p.column_means_.assign(n_cols, Complex{});
    for (std::size_t j = 0; j < n_rows; ++j) {
        for (std::size_t k = 0; k < n_cols; ++k) p.column_means_[k] += z(j, k);
    }
    for (Complex& mean : p.column_means_) mean /= static_cast<double>(n_rows);

    p.deviations_.resize(n_rows * n_cols);
    p.column_second_moments_.assign(n_cols, 0.0);
    for (std::size_t j = 0; j < n_rows; ++j) {
        for (std::size_t k = 0; k < n_cols; ++k) {
            const Complex a = z(j, k) - p.column_means_[k];
            p.deviations_[j * n_cols + k] = a;
            p.column_second_moments_[k] += std::norm(a);
        }
    }
    double alpha = 0.0;
    for (double& moment : p.column_second_moments_) {
        moment /= static_cast<double>(n_rows);
        alpha += moment;
    }
    p.alpha_ = alpha / static_cast<double>(n_cols);

    double beta = 0.0;
    for (const Complex& mean : p.column_means_) beta += std::norm(mean);
    p.beta_ = beta / static_cast<double>(n_cols);

    const double inv_gap = p.beta_ < 1.0 ? 1.0 / (1.0 - p.beta_)
                                         : std::numeric_limits<double>::infinity();
    p.gamma_ = (static_cast<double>(n_cols) * p.alpha_ / static_cast<double>(n_rows)) *
               std::min(static_cast<double>(n_cols), inv_gap);
    return p;
}

double gamma_d(const ExpansionParams& params, double d) {
    if (!(d > 0.0)) throw std::domain_error("gamma_d requires d > 0");
    const double inv_gap = params.beta() < 1.0
                               ? 1.0 / (1.0 - params.beta())
                               : std::numeric_limits<double>::infinity();
    return (static_cast<double>(params.n_cols()) * params.alpha() /
            static_cast<double>(params.n_rows())) *
           std::min(d * static_cast<double>(params.n_cols()), inv_gap);
}

MultilinearPoly w_poly(const ComplexMatrix& z, std::size_t m, const Caps& caps) {
    if (m > z.rows()) throw std::domain_error("w_poly requires 0 <= m <= N");
    if (m > z.cols()) {
        check_bitmask_cap(z.cols(), caps);
        return MultilinearPoly(static_cast<int>(z.cols()));
    }
    return w_tables(analyze(z), m, caps).back();
}

Complex g_term(const ComplexMatrix& z, std::size_t m, const Caps& caps) {
    const std::size_t n_cols = z.cols();
    if (m > n_cols) throw std::domain_error("g_term requires m <= n");
    const ExpansionParams params = analyze(z);
    const auto w = w_tables(params, m, caps);

    MultilinearPoly power = MultilinearPoly::one(static_cast<int>(n_cols));
    for (std::size_t r = 1; r <= n_cols - m; ++r) {
        power = scaled_mean_power_step(std::move(power), params.column_means(), r);
    }
    return factorial_ratio(z.rows(), m) * w.back().top_coeff_with(power);
}

Complex g2_closed(const ComplexMatrix& z) {
    const std::size_t n_cols = z.cols();
    if (n_cols < 2) throw std::domain_error("g2_closed requires n >= 2");
    const ExpansionParams params = analyze(z);
    const auto means = params.column_means();

    Complex total{};
    for (std::size_t k1 = 0; k1 < n_cols; ++k1) {
        for (std::size_t k2 = k1 + 1; k2 < n_cols; ++k2) {
            Complex pair_sum{};
            for (std::size_t j = 0; j < z.rows(); ++j) {
                pair_sum += params.deviation(j, k1) * params.deviation(j, k2);
            }
            Complex rest{1.0, 0.0};
            for (std::size_t k = 0; k < n_cols; ++k) {
                if (k != k1 && k != k2) rest *= means[k];
            }
            total += pair_sum * rest;
        }
    }
    return -factorial_ratio(z.rows(), 2) * total;
}

Complex g3_closed(const ComplexMatrix& z) {
    const std::size_t n_cols = z.cols();
    if (n_cols < 3) throw std::domain_error("g3_closed requires n >= 3");
    const ExpansionParams params = analyze(z);
    const auto means = params.column_means();

    Complex total{};
    for (std::size_t k1 = 0; k1 < n_cols; ++k1) {
        for (std::size_t k2 = k1 + 1; k2 < n_cols; ++k2) {
            for (std::size_t k3 = k2 + 1; k3 < n_cols; ++k3) {
                Complex triple_sum{};
                for (std::size_t j = 0; j < z.rows(); ++j) {
                    triple_sum += params.deviation(j, k1) * params.deviation(j, k2) *
                                  params.deviation(j, k3);
                }
                Complex rest{1.0, 0.0};
                for (std::size_t k = 0; k < n_cols; ++k) {
                    if (k != k1 && k != k2 && k != k3) rest *= means[k];
                }
                total += triple_sum * rest;
            }
        }
    }
    return 2.0 * factorial_ratio(z.rows(), 3) * total;
}

Complex h_approx(const ComplexMatrix& z, std::size_t ell, const Caps& caps) {
    const std::size_t n_cols = z.cols();
    if (ell < 1 || ell > n_cols) throw std::domain_error("h_approx requires 1 <= ell <= n");
    const ExpansionParams params = analyze(z);
    const auto w = w_tables(params, ell, caps);

    // Walk the scaled powers upward once; the term of order m pairs W_m with
    // P_{n-m}, so contributions start at r = n - ell.
    Complex total{};
    MultilinearPoly power = MultilinearPoly::one(static_cast<int>(n_cols));
    if (n_cols <= ell) total += factorial_ratio(z.rows(), n_cols) *
                                w[n_cols].top_coeff_with(power);
    for (std::size_t r = 1; r <= n_cols; ++r) {
        power = scaled_mean_power_step(std::move(power), params.column_means(), r);
        if (n_cols - r <= ell) {
            const std::size_t m = n_cols - r;
            total += factorial_ratio(z.rows(), m) * w[m].top_coeff_with(power);
        }
    }
    return total;
}

}  // namespace permafinetti
