#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace permafinetti {

using Complex = std::complex<double>;

// An N x n complex matrix with n <= N, stored row-major. Entries are
// validated to be finite at construction; the matrix is immutable afterwards.
class ComplexMatrix {
public:
    // `entries` is row-major with n_rows * n_cols elements.
    ComplexMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Complex> entries);

    // Convenience constructor from nested rows (mostly for tests and fixtures).
    explicit ComplexMatrix(const std::vector<std::vector<Complex>>& rows);

    std::size_t rows() const { return n_rows_; }
    std::size_t cols() const { return n_cols_; }

    Complex operator()(std::size_t j, std::size_t k) const {
        return entries_[j * n_cols_ + k];
    }

    std::span<const Complex> row(std::size_t j) const {
        return {entries_.data() + j * n_cols_, n_cols_};
    }

    const std::vector<Complex>& entries() const { return entries_; }

    // max |z_{j,k}| <= 1 + 1e-12, evaluated once at construction. Bound
    // computations in the bounds module require it.
    bool unit_bounded() const { return unit_bounded_; }

    std::vector<Complex> column(std::size_t k) const;

    // Returns a copy with rows reordered as perm (perm[j] = source row index).
    ComplexMatrix permuted_rows(const std::vector<std::size_t>& perm) const;
    ComplexMatrix permuted_cols(const std::vector<std::size_t>& perm) const;

private:
    std::size_t n_rows_;
    std::size_t n_cols_;
    std::vector<Complex> entries_;
    bool unit_bounded_;
};

// JSON schema: {"N":int,"n":int,"entries":[[{"re":f,"im":f},...],...]} row-major.
ComplexMatrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const ComplexMatrix& z);

// CSV: one row per line, entries like "1.5+2i", "-3", "0.25i".
ComplexMatrix matrix_from_csv(const std::string& text);

// Loads a matrix file, trying JSON first and falling back to CSV.
ComplexMatrix load_matrix_file(const std::string& path);

// Parses a single complex literal of the form "a", "bi", "a+bi", "a-bi".
Complex parse_complex(const std::string& token);

}  // namespace permafinetti
