#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"

namespace permafinetti {

// A polynomial in n variables reduced modulo (x_1^2, ..., x_n^2): each
// surviving monomial is a product of distinct variables, so coefficients are
// indexed by the subset bitmask S of {0, ..., n-1}. In this quotient ring the
// product of two monomials vanishes whenever their variable sets intersect,
// which is exactly what coefficient extraction of x_1...x_n needs.
class MultilinearPoly {
public:
    // Zero polynomial in n variables (2^n coefficients).
    explicit MultilinearPoly(int n_vars);

    static MultilinearPoly one(int n_vars);
    // c + sum_k linear[k] * x_k
    static MultilinearPoly affine(int n_vars, Complex c, std::span<const Complex> linear);

    int vars() const { return n_vars_; }
    std::size_t size() const { return coeffs_.size(); }
    std::uint32_t full_mask() const {
        return static_cast<std::uint32_t>(coeffs_.size() - 1);
    }

    Complex coeff(std::uint32_t mask) const { return coeffs_[mask]; }
    Complex& coeff(std::uint32_t mask) { return coeffs_[mask]; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    MultilinearPoly& operator+=(const MultilinearPoly& other);
    MultilinearPoly& operator-=(const MultilinearPoly& other);
    void scale(Complex factor);

    // In-place multiplication by (c + sum_k linear[k] x_k). One descending
    // pass over the table: coeff[S] <- c*coeff[S] + sum_{k in S} b_k coeff[S\{k}].
    void mul_affine(Complex c, std::span<const Complex> linear);

    // Product in the quotient ring: (fg)[S] = sum over T subset of S of
    // f[T] g[S\T]. Submask enumeration, O(3^n) worst case; zero coefficients
    // of *this are skipped, so homogeneous factors cost much less.
    MultilinearPoly operator*(const MultilinearPoly& other) const;

    // Coefficient of x_1...x_n in (*this) * other, without materializing the
    // product: sum_S coeff[S] * other[full\S]. O(2^n).
    Complex top_coeff_with(const MultilinearPoly& other) const;

    bool is_zero(double tol = 0.0) const;

private:
    int n_vars_;
    std::vector<Complex> coeffs_;
};

struct AffineForm {
    Complex constant;
    std::vector<Complex> linear;
};

// Product of affine forms reduced modulo squares. All forms must share the
// same number of variables, which must not exceed caps.bitmask_vars.
MultilinearPoly ml_affine_product(std::span<const AffineForm> forms, const Caps& caps = {});

// Throws resource_limit_error if a 2^n coefficient table would exceed the cap,
// with the memory requirement spelled out in the message.
void check_bitmask_cap(std::size_t n_vars, const Caps& caps);

}  // namespace permafinetti
