#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"

namespace permafinetti {

// A real signed measure on S^n for a finite alphabet S of size d, stored as
// a dense array of d^n cells. Cell index encodes (x_1, ..., x_n) in base d
// with x_1 the most significant digit.
class DenseSignedMeasure {
public:
    DenseSignedMeasure(int alphabet, int length, const Caps& caps = {});
    static DenseSignedMeasure from_values(int alphabet, int length,
                                          std::vector<double> values, const Caps& caps = {});

    int alphabet() const { return d_; }
    int length() const { return n_; }
    std::size_t cells() const { return values_.size(); }

    double operator[](std::size_t idx) const { return values_[idx]; }
    double& operator[](std::size_t idx) { return values_[idx]; }
    const std::vector<double>& values() const { return values_; }

    std::size_t encode(std::span<const int> point) const;
    std::vector<int> decode(std::size_t idx) const;

    double total_mass() const;

    DenseSignedMeasure& operator+=(const DenseSignedMeasure& other);
    DenseSignedMeasure& operator-=(const DenseSignedMeasure& other);
    void scale(double factor);

    friend DenseSignedMeasure operator-(DenseSignedMeasure lhs,
                                        const DenseSignedMeasure& rhs) {
        lhs -= rhs;
        return lhs;
    }

private:
    int d_;
    int n_;
    std::vector<double> values_;
};

// Total variation distance sup_A |R(A) - R'(A)| = max of the positive and
// negative part masses of R - R'.
double tv(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime);

// Product variation: exact sup over rectangles A_1 x ... x A_n of
// |(R - R')(A)|, by enumerating all (2^d)^n subset tuples. Always <= tv.
// Throws resource_limit_error (suggesting sup_fn_lower) past caps.rect_tuples.
double pv(const DenseSignedMeasure& r, const DenseSignedMeasure& r_prime,
          const Caps& caps = {});

// A tensor-product test function f = f_1 x ... x f_n with every factor value
// bounded by 1 in modulus.
class ProductFunction {
public:
    // `factors` is n x d row-major: factors[k*d + s] = f_k(s).
    ProductFunction(int alphabet, int length, std::vector<Complex> factors);

    int alphabet() const { return d_; }
    int length() const { return n_; }
    Complex factor(int k, int s) const { return factors_[static_cast<std::size_t>(k) * d_ + s]; }

private:
    int d_;
    int n_;
    std::vector<Complex> factors_;
};

// integral of f with respect to R: sum_x R(x) prod_k f_k(x_k).
Complex integral(const DenseSignedMeasure& r, const ProductFunction& f);

// {"d":..,"n":..,"index_legend":..,"values":[...]}
std::string measure_to_json(const DenseSignedMeasure& r);

}  // namespace permafinetti
