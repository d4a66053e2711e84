#include "permafinetti/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "permafinetti/multilinear.hpp"

namespace permafinetti {

namespace {

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

double binomial(std::size_t n, std::size_t m) {
    if (m > n) return 0.0;
    m = std::min(m, n - m);
    double b = 1.0;
    for (std::size_t i = 1; i <= m; ++i) {
        b *= static_cast<double>(n - m + i);
        b /= static_cast<double>(i);
    }
    return b;
}

// x^p with the 0^0 = 1 convention (std::pow already honors it, kept explicit).
double pow00(double x, double p) {
    if (x == 0.0 && p == 0.0) return 1.0;
    return std::pow(x, p);
}

double inv_gap_or_inf(double beta) {
    return beta < 1.0 ? 1.0 / (1.0 - beta) : std::numeric_limits<double>::infinity();
}

void require_unit_bounded(const ExpansionParams& params, const char* where) {
    if (!params.unit_bounded()) {
        throw std::domain_error(std::string(where) + " requires a unit-bounded matrix");
    }
}

void require_zero_colsums(const ComplexMatrix& a, const char* where) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
        Complex sum{};
        for (std::size_t j = 0; j < a.rows(); ++j) sum += a(j, k);
        if (std::abs(sum) > 1e-10) {
            throw std::domain_error(std::string(where) + " requires zero column sums");
        }
    }
}

// sum_j ((1/N^2) sum_k |a_{j,k}|^2 min{n/3, 1/(1-beta)})^(3/2), the row-wise
// majorant shared by bound_g3 and err_bound_h2.
double g3_majorant(const ExpansionParams& params) {
    const double n_rows = static_cast<double>(params.n_rows());
    const double pivot =
        std::min(static_cast<double>(params.n_cols()) / 3.0, inv_gap_or_inf(params.beta()));
    double total = 0.0;
    for (std::size_t j = 0; j < params.n_rows(); ++j) {
        double row = 0.0;
        for (std::size_t k = 0; k < params.n_cols(); ++k) {
            row += std::norm(params.deviation(j, k));
        }
        total += std::pow(row * pivot / (n_rows * n_rows), 1.5);
    }
    return std::sqrt(3.0) * total;
}

// Left side of the defining equation for x_ell. The (1-x^(ell-1))/(1-x)
// factor is evaluated as the explicit geometric sum for small ell (no
// cancellation near 1) and in closed form beyond, where x^(ell-1) is far
// from 1 anywhere that matters.
double root_eq_lhs(int ell, double c2_term, double x) {
    double geom;
    if (ell <= 64) {
        geom = 0.0;
        double xp = 1.0;
        for (int i = 0; i + 2 <= ell; ++i) {
            geom += xp;
            xp *= x;
        }
    } else {
        geom = x < 1.0 ? (1.0 - std::pow(x, ell - 1)) / (1.0 - x)
                       : static_cast<double>(ell - 1);
    }
    return 2.0 + c2_term * x * std::pow(geom, 0.75);
}

double root_eq_rhs(int ell, double cl_term, double x) {
    return cl_term * std::pow(x, 0.5 * (ell + 1)) / std::pow(1.0 - x, 0.75);
}

std::string format12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double c_const(int ell) {
    if (ell < 1) throw std::domain_error("c_const requires ell >= 1");
    if (ell <= 170) {
        // C^2 = ell^(-1/2) prod_{i=1..ell} (e i / ell); interleaved so no
        // intermediate overflows or underflows.
        double sq = std::pow(static_cast<double>(ell), -0.5);
        for (int i = 1; i <= ell; ++i) {
            sq *= std::numbers::e * static_cast<double>(i) / static_cast<double>(ell);
        }
        return std::sqrt(sq);
    }
    const double l = static_cast<double>(ell);
    const double log_sq = l + std::lgamma(l + 1.0) - (l + 0.5) * std::log(l);
    return std::exp(0.5 * log_sq);
}

double x_root(int ell) {
    if (ell < 1) throw std::domain_error("x_root requires ell >= 1");
    const double c2_term = std::pow(2.0, 0.25) * c_const(2);
    const double cl_term = std::pow(ell + 1.0, 0.25) * c_const(ell + 1);

    // Dividing both sides by x^((ell+1)/2) makes the left side decreasing and
    // the right side increasing, so rhs - lhs crosses zero exactly once.
    auto shifted = [&](double x) {
        const double div = std::pow(x, 0.5 * (ell + 1));
        return root_eq_rhs(ell, cl_term, x) / div - root_eq_lhs(ell, c2_term, x) / div;
    };

    double lo = 1e-9;
    double hi = 1.0 - 1e-9;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (shifted(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double kappa_upper(int ell) {
    return std::pow(ell + 1.0, 0.25) * c_const(ell + 1) / std::pow(1.0 - x_root(ell), 0.75);
}

std::vector<ConstantsRow> constants_table(int lmax) {
    if (lmax < 1) throw std::domain_error("constants_table requires lmax >= 1");
    std::vector<ConstantsRow> rows;
    rows.reserve(lmax);
    for (int ell = 1; ell <= lmax; ++ell) {
        rows.push_back({ell, c_const(ell), x_root(ell), kappa_upper(ell)});
    }
    return rows;
}

std::string constants_to_json(const std::vector<ConstantsRow>& rows) {
    std::ostringstream out;
    out << "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) out << ",";
        out << "{\"l\":" << rows[i].ell << ",\"C\":" << format12(rows[i].c)
            << ",\"x\":" << format12(rows[i].x)
            << ",\"kappa_upper\":" << format12(rows[i].kappa) << "}";
    }
    out << "]}";
    return out.str();
}

std::string constants_to_csv(const std::vector<ConstantsRow>& rows) {
    std::ostringstream out;
    out << "l,C_l,x_l,kappa_upper_l\n";
    for (const ConstantsRow& row : rows) {
        out << row.ell << "," << format12(row.c) << "," << format12(row.x) << ","
            << format12(row.kappa) << "\n";
    }
    return out.str();
}

double err_bound_main(const ExpansionParams& params, int ell) {
    require_unit_bounded(params, "err_bound_main");
    if (ell < 1 || static_cast<std::size_t>(ell) > params.n_cols()) {
        throw std::domain_error("err_bound_main requires 1 <= ell <= n");
    }
    const double gamma = params.gamma();
    if (!(gamma < 1.0)) {
        throw std::domain_error(
            "err_bound_main requires gamma < 1; use err_bound_kappa for gamma >= 1");
    }
    return std::pow(ell + 1.0, 0.25) * c_const(ell + 1) * std::pow(gamma, 0.5 * (ell + 1)) /
           std::pow(1.0 - gamma, 0.75);
}

double err_bound_kappa(const ExpansionParams& params, int ell) {
    require_unit_bounded(params, "err_bound_kappa");
    if (ell < 1 || static_cast<std::size_t>(ell) > params.n_cols()) {
        throw std::domain_error("err_bound_kappa requires 1 <= ell <= n");
    }
    return kappa_upper(ell) * std::pow(params.gamma(), 0.5 * (ell + 1));
}

double err_bound_h1(const ExpansionParams& params) {
    require_unit_bounded(params, "err_bound_h1");
    const double gamma = params.gamma();
    if (!(gamma < 1.0)) throw std::domain_error("err_bound_h1 requires gamma < 1");
    return gamma_d(params, 0.5) + std::pow(3.0, 0.25) * c_const(3) * std::pow(gamma, 1.5) /
                                      std::pow(1.0 - gamma, 0.75);
}

double err_bound_h2(const ComplexMatrix& z) {
    if (z.cols() < 2) throw std::domain_error("err_bound_h2 requires n >= 2");
    const ExpansionParams params = analyze(z);
    require_unit_bounded(params, "err_bound_h2");
    const double gamma = params.gamma();
    if (!(gamma < 1.0)) throw std::domain_error("err_bound_h2 requires gamma < 1");
    return g3_majorant(params) + std::sqrt(2.0) * c_const(4) * gamma * gamma /
                                     std::pow(1.0 - gamma, 0.75);
}

G2Bound bound_g2(const ExpansionParams& params) {
    require_unit_bounded(params, "bound_g2");
    const std::size_t n = params.n_cols();
    if (n < 2) throw std::domain_error("bound_g2 requires n >= 2");
    const double coarse = gamma_d(params, 0.5);
    const double beta = params.beta();
    const double beta_pow = pow00(beta, 0.5 * (n - 2));
    const double peak =
        std::max(beta_pow, 0.5 * static_cast<double>(n) * (1.0 - beta) * beta_pow);
    const double shape = static_cast<double>(params.n_rows()) * static_cast<double>(n - 1) /
                         (static_cast<double>(params.n_rows() - 1) * static_cast<double>(n));
    return {coarse * peak * shape, coarse};
}

double bound_g3(const ComplexMatrix& z) {
    const ExpansionParams params = analyze(z);
    require_unit_bounded(params, "bound_g3");
    return g3_majorant(params);
}

double hadamard_zero_colsum(const ComplexMatrix& a) {
    require_zero_colsums(a, "hadamard_zero_colsum");
    const std::size_t n_rows = a.rows();
    const std::size_t n = a.cols();
    const ExpansionParams params = analyze(a);
    // The deviations equal the entries here (zero column sums), so alpha_k is
    // the plain second moment of column k.
    double moment_prod = 1.0;
    for (double alpha_k : params.column_second_moments()) moment_prod *= alpha_k;

    double prefactor;
    if (n_rows <= 60) {
        prefactor = factorial(n) * pow00(static_cast<double>(n_rows), 0.5 * n_rows) /
                    (pow00(static_cast<double>(n_rows - n), 0.5 * (n_rows - n)) *
                     pow00(static_cast<double>(n), 0.5 * n));
    } else {
        double log_pref = std::lgamma(static_cast<double>(n) + 1.0) +
                          0.5 * n_rows * std::log(static_cast<double>(n_rows)) -
                          0.5 * n * std::log(static_cast<double>(n));
        if (n_rows > n) {
            log_pref -= 0.5 * (n_rows - n) * std::log(static_cast<double>(n_rows - n));
        }
        prefactor = std::exp(log_pref);
    }
    return prefactor * std::sqrt(moment_prod);
}

double hadamard_square(const ComplexMatrix& z) {
    if (z.rows() != z.cols()) throw std::domain_error("hadamard_square requires N = n");
    const std::size_t n_rows = z.rows();
    double moment_prod = 1.0;
    for (std::size_t k = 0; k < n_rows; ++k) {
        double moment = 0.0;
        for (std::size_t j = 0; j < n_rows; ++j) moment += std::norm(z(j, k));
        moment_prod *= moment / static_cast<double>(n_rows);
    }
    return factorial(n_rows) * std::sqrt(moment_prod);
}

double hadamard_embed(const ComplexMatrix& a) {
    require_zero_colsums(a, "hadamard_embed");
    const ExpansionParams params = analyze(a);
    double moment_prod = 1.0;
    for (double alpha_k : params.column_second_moments()) moment_prod *= alpha_k;
    double prefactor = 1.0;
    for (std::size_t m = 0; m < a.cols(); ++m) {
        prefactor *= static_cast<double>(a.rows() - m);
    }
    return prefactor * std::sqrt(moment_prod);
}

double bobkov_bound(std::size_t n, std::size_t n_rows) {
    if (n > n_rows) throw std::domain_error("bobkov_bound requires n <= N");
    return 16.0 * static_cast<double>(n) / static_cast<double>(n_rows);
}

BoundPair lemma_coeff_pair(std::span<const Complex> w1, std::span<const Complex> w2,
                           std::size_t m) {
    const std::size_t n = w1.size();
    if (w2.size() != n || n < 1) {
        throw std::invalid_argument("lemma_coeff_pair needs equal-length vectors");
    }
    if (m > n) throw std::domain_error("lemma_coeff_pair requires 0 <= m <= n");

    std::vector<Complex> c(n + 1, Complex{});
    c[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t t = std::min(k + 1, n); t >= 1; --t) {
            c[t] = w1[k] * c[t] + w2[k] * c[t - 1];
        }
        c[0] *= w1[k];
    }
    const double lhs = std::abs(c[m]);

    double mean1 = 0.0;
    double mean2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mean1 += std::norm(w1[k]);
        mean2 += std::norm(w2[k]);
    }
    mean1 /= static_cast<double>(n);
    mean2 /= static_cast<double>(n);
    const double rhs = binomial(n, m) * pow00(mean2, 0.5 * m) * pow00(mean1, 0.5 * (n - m));
    return {lhs, rhs};
}

BoundPair lemma_mixed_pair(const ComplexMatrix& a, std::span<const Complex> b,
                           std::size_t m, const Caps& caps) {
    const std::size_t n_rows = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != n) throw std::invalid_argument("lemma_mixed_pair: b must have n entries");
    if (m > std::min(n, n_rows)) {
        throw std::domain_error("lemma_mixed_pair requires 0 <= m <= min{n, N}");
    }
    require_zero_colsums(a, "lemma_mixed_pair");
    check_bitmask_cap(n, caps);

    MultilinearPoly p = MultilinearPoly::one(static_cast<int>(n));
    for (std::size_t r = 0; r < n - m; ++r) p.mul_affine(Complex{}, b);
    for (std::size_t j = 0; j < n_rows; ++j) p.mul_affine(Complex{1.0, 0.0}, a.row(j));
    const double lhs = std::abs(p.coeff(p.full_mask()));

    double alpha = 0.0;
    for (const Complex& entry : a.entries()) alpha += std::norm(entry);
    alpha /= static_cast<double>(n * n_rows);
    double beta_b = 0.0;
    for (const Complex& bk : b) beta_b += std::norm(bk);
    beta_b /= static_cast<double>(n);

    const double rhs = factorial(n) * pow00(static_cast<double>(n_rows), 0.5 * n_rows) *
                       pow00(alpha, 0.5 * m) * pow00(beta_b, 0.5 * (n - m)) /
                       (pow00(static_cast<double>(n_rows - m), 0.5 * (n_rows - m)) *
                        pow00(static_cast<double>(m), 0.5 * m));
    return {lhs, rhs};
}

BoundPair lemma_geom_pair(unsigned r, double t, double x) {
    if (t < 0.0 || t > 1.0 || x < 0.0 || x > 1.0) {
        throw std::domain_error("lemma_geom_pair requires t, x in [0, 1]");
    }
    double lhs = 0.0;
    double geom = 0.0;
    double xp = 1.0;
    for (unsigned m = 0; m <= r; ++m) {
        lhs += std::pow(m + 1.0, t) * xp;
        geom += xp;  // sum_{m=0}^r x^m == (1-x^(r+1))/(1-x), valid at x = 1 too
        xp *= x;
    }
    return {lhs, std::pow(geom, 1.0 + t)};
}

std::vector<double> maclaurin_means(std::span<const double> g) {
    const std::size_t n = g.size();
    if (n == 0) return {};
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (g[k] < 0.0) throw std::domain_error("maclaurin_means requires nonnegative inputs");
        for (std::size_t t = std::min(k + 1, n); t >= 1; --t) e[t] += g[k] * e[t - 1];
    }
    std::vector<double> means(n);
    for (std::size_t ell = 1; ell <= n; ++ell) {
        means[ell - 1] = std::pow(e[ell] / binomial(n, ell), 1.0 / static_cast<double>(ell));
    }
    return means;
}

}  // namespace permafinetti
