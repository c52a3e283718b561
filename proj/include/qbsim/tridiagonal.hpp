// tridiagonal.hpp: lowest eigenpairs of real symmetric chain matrices
//
// A chain is tridiagonal, optionally closed into a ring by a corner element
// (periodic boundary). Eigenvalues come from bisection on an inertia count;
// eigenvectors from inverse iteration with a pivoted band LU.

#pragma once

#include <cstddef>
#include <vector>

namespace qbsim::tridiagonal {

struct Chain {
    std::vector<double> diag;
    // Open chain: n-1 entries, off[i] couples i and i+1.
    // Periodic: n entries, off[n-1] couples n-1 and 0.
    std::vector<double> off;
    bool periodic = false;

    std::size_t size() const { return diag.size(); }
    void validate() const;
};

// Number of eigenvalues strictly below x.
std::size_t count_below(const Chain& chain, double x);

// The k smallest eigenvalues, ascending.
std::vector<double> lowest_eigenvalues(const Chain& chain, std::size_t k);

struct Eigenpairs {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // unit Euclidean norm
};

Eigenpairs lowest_eigenpairs(const Chain& chain, std::size_t k);

// y = A x for the chain matrix.
std::vector<double> multiply(const Chain& chain, const std::vector<double>& x);

} // namespace qbsim::tridiagonal
