#pragma once

#include <span>

#include "permafinetti/caps.hpp"
#include "permafinetti/complex_matrix.hpp"

namespace permafinetti {

// Number of injections of n columns into N rows, N!/(N-n)!, as a double
// (may be +inf for large arguments).
double injection_count(std::size_t n_rows, std::size_t n_cols);

// Exact permanent by direct enumeration of injections. Serves as the oracle
// for the other routes. Refuses to run if the injection count exceeds
// caps.naive_terms.
Complex per_naive(const ComplexMatrix& z, const Caps& caps = {});

// Exact permanent as the coefficient of x_1...x_n in
// prod_j (1 + sum_k z_{j,k} x_k), computed in the ring modulo squares.
// O(N n 2^n); requires n <= caps.bitmask_vars.
Complex per_genfunc(const ComplexMatrix& z, const Caps& caps = {});

// Exact permanent of the N x n matrix whose columns all equal `col`:
// n! [y^n] prod_j (1 + col_j y). O(N n).
Complex per_identical_columns(std::span<const Complex> col, std::size_t n);

// (N-n)!/N! * Per Z with the factorial ratio folded multiplicatively into
// the accumulation, so N! is never materialized. Auto-selects the
// generating-function route when n fits the bitmask cap, otherwise falls
// back to enumeration.
Complex per_normalized(const ComplexMatrix& z, const Caps& caps = {});

enum class PermanentMethod { Auto, Naive, Genfunc };

// Dispatch used by the CLI; `method_used` (optional) receives the route taken.
Complex permanent(const ComplexMatrix& z, PermanentMethod method, const Caps& caps = {},
                  PermanentMethod* method_used = nullptr);

}  // namespace permafinetti
