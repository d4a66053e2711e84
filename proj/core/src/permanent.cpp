#include "permafinetti/permanent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "permafinetti/errors.hpp"
#include "permafinetti/multilinear.hpp"

namespace permafinetti {

namespace {

void check_naive_cap(const ComplexMatrix& z, const Caps& caps) {
    const double terms = injection_count(z.rows(), z.cols());
    if (!(terms <= caps.naive_terms)) {
        std::ostringstream msg;
        msg << "per_naive would enumerate N!/(N-n)! = " << terms
            << " injections, above the cap " << caps.naive_terms;
        throw resource_limit_error(msg.str());
    }
}

// Depth-first enumeration over injections, column by column. `col_scale[k]`
// is folded into every term at depth k, which is how per_normalized keeps
// the factorial ratio inside the accumulation.
Complex injection_sum(const ComplexMatrix& z, const std::vector<double>& col_scale) {
    const std::size_t n_rows = z.rows();
    const std::size_t n_cols = z.cols();
    std::vector<char> used(n_rows, 0);
    Complex total{};

    auto recurse = [&](auto&& self, std::size_t k, Complex prefix) -> void {
        if (k == n_cols) {
            total += prefix;
            return;
        }
        const double scale = col_scale.empty() ? 1.0 : col_scale[k];
        for (std::size_t j = 0; j < n_rows; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            self(self, k + 1, prefix * (z(j, k) * scale));
            used[j] = 0;
        }
    };
    recurse(recurse, 0, Complex{1.0, 0.0});
    return total;
}

Complex genfunc_product(const ComplexMatrix& z, bool normalized, const Caps& caps) {
    check_bitmask_cap(z.cols(), caps);
    const std::size_t n_rows = z.rows();
    const std::size_t n_cols = z.cols();
    MultilinearPoly p = MultilinearPoly::one(static_cast<int>(n_cols));
    for (std::size_t j = 0; j < n_rows; ++j) {
        p.mul_affine(Complex{1.0, 0.0}, z.row(j));
        if (normalized && j < n_cols) {
            // Interleave the (N-n)!/N! ratio one divisor at a time so the
            // table never holds the unnormalized magnitudes.
            p.scale(Complex{1.0 / static_cast<double>(n_rows - j), 0.0});
        }
    }
    return p.coeff(p.full_mask());
}

}  // namespace

double injection_count(std::size_t n_rows, std::size_t n_cols) {
    double terms = 1.0;
    for (std::size_t m = 0; m < n_cols; ++m) {
        terms *= static_cast<double>(n_rows - m);
        if (!std::isfinite(terms)) return terms;
    }
    return terms;
}

Complex per_naive(const ComplexMatrix& z, const Caps& caps) {
    check_naive_cap(z, caps);
    return injection_sum(z, {});
}

Complex per_genfunc(const ComplexMatrix& z, const Caps& caps) {
    return genfunc_product(z, false, caps);
}

Complex per_identical_columns(std::span<const Complex> col, std::size_t n) {
    const std::size_t n_rows = col.size();
    if (n < 1 || n > n_rows) {
        throw std::domain_error("per_identical_columns requires 1 <= n <= N");
    }
    // Truncated univariate product prod_j (1 + col_j y) up to degree n.
    std::vector<Complex> c(n + 1, Complex{});
    c[0] = 1.0;
    std::size_t degree = 0;
    for (const Complex& z : col) {
        degree = std::min(degree + 1, n);
        for (std::size_t k = degree; k >= 1; --k) c[k] += z * c[k - 1];
    }
    Complex result = c[n];
    for (std::size_t m = 2; m <= n; ++m) result *= static_cast<double>(m);
    return result;
}

Complex per_normalized(const ComplexMatrix& z, const Caps& caps) {
    const std::size_t n_rows = z.rows();
    const std::size_t n_cols = z.cols();
    if (static_cast<int>(n_cols) <= std::min(caps.bitmask_vars, 30)) {
        return genfunc_product(z, true, caps);
    }
    if (injection_count(n_rows, n_cols) <= caps.naive_terms) {
        std::vector<double> col_scale(n_cols);
        for (std::size_t k = 0; k < n_cols; ++k) {
            col_scale[k] = 1.0 / static_cast<double>(n_rows - k);
        }
        return injection_sum(z, col_scale);
    }
    std::ostringstream msg;
    msg << "per_normalized: no exact route fits the caps (n=" << n_cols
        << " above bitmask cap " << caps.bitmask_vars << ", N!/(N-n)! = "
        << injection_count(n_rows, n_cols) << " above naive cap " << caps.naive_terms << ")";
    throw resource_limit_error(msg.str());
}

Complex permanent(const ComplexMatrix& z, PermanentMethod method, const Caps& caps,
                  PermanentMethod* method_used) {
    PermanentMethod chosen = method;
    if (method == PermanentMethod::Auto) {
        chosen = static_cast<int>(z.cols()) <= std::min(caps.bitmask_vars, 30)
                     ? PermanentMethod::Genfunc
                     : PermanentMethod::Naive;
    }
    if (method_used != nullptr) *method_used = chosen;
    return chosen == PermanentMethod::Genfunc ? per_genfunc(z, caps) : per_naive(z, caps);
}

}  // namespace permafinetti
