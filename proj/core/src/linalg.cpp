#include "clam/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace clam {

double horner(std::span<const double> coeffs, double z) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i > 0; --i) acc = acc * z + coeffs[i - 1];
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double norm(std::span<const double> v) { return std::sqrt(norm2(v)); }

std::vector<double> RowSpace::reduce(std::span<const double> row) const {
    std::vector<double> r(row.begin(), row.end());
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis_) {
            const double c = dot(r, b);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * b[i];
        }
    }
    return r;
}

bool RowSpace::contains(std::span<const double> row) const {
    const double n0 = norm(row);
    if (n0 == 0.0) return true;
    return norm(reduce(row)) <= rel_tol_ * n0;
}

bool RowSpace::insert(std::span<const double> row) {
    const double n0 = norm(row);
    if (n0 == 0.0) return false;
    auto r = reduce(row);
    const double nr = norm(r);
    if (nr <= rel_tol_ * n0) return false;
    const double inv = 1.0 / nr;
    for (auto& x : r) x *= inv;
    basis_.push_back(std::move(r));
    return true;
}

std::size_t real_rank(const std::vector<std::vector<double>>& rows, double rel_tol) {
    RowSpace space(rel_tol);
    for (const auto& r : rows) space.insert(r);
    return space.rank();
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw std::invalid_argument("jacobi_eigenvalues: bad matrix size");
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += at(p, q) * at(p, q);
        return s;
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(at(i, j)));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    const double stop = 1e-30 * scale * scale * static_cast<double>(n) * static_cast<double>(n);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_norm2() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
    return eig;
}

}  // namespace clam
