#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace clam {

// Evaluates c[0] + c[1] z + c[2] z^2 + ...
double horner(std::span<const double> coeffs, double z);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);  // squared Euclidean norm
double norm(std::span<const double> v);

// Incremental row-space tracker backed by modified Gram-Schmidt with one
// re-orthogonalization pass. A row counts as dependent when its residual
// after projection is at most rel_tol times its own norm.
class RowSpace {
public:
    explicit RowSpace(double rel_tol = 1e-8) : rel_tol_(rel_tol) {}

    // Returns true and extends the basis when the row is independent.
    bool insert(std::span<const double> row);
    bool contains(std::span<const double> row) const;
    std::size_t rank() const { return basis_.size(); }

private:
    std::vector<double> reduce(std::span<const double> row) const;

    std::vector<std::vector<double>> basis_;
    double rel_tol_;
};

// Rank of a real matrix given as rows, with relative tolerance.
std::size_t real_rank(const std::vector<std::vector<double>>& rows, double rel_tol = 1e-8);

// Eigenvalues of a symmetric n x n matrix (row-major, full storage) via
// cyclic Jacobi rotations. Returned unsorted.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n);

}  // namespace clam
