#pragma once

#include <array>
#include <vector>

namespace wlseno {

// Monomial exponent tuples of total degree <= degree in `dim` variables,
// graded lexicographic order (degree ascending, then lex on exponents).
// Index 0 is always the constant term. Unused trailing exponents are zero,
// so the same table works for dim 1..3.
struct MultiIndexSet {
    int dim = 0;
    int degree = 0;
    std::vector<std::array<int, 3>> exps;

    int count() const { return static_cast<int>(exps.size()); }

    static MultiIndexSet make(int dim, int degree);
};

// binom(degree + dim, dim): number of monomials of total degree <= degree.
int n_poly_coeffs(int dim, int degree);

double factorial(int n);

} // namespace wlseno
