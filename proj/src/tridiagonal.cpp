#include "qbsim/tridiagonal.hpp"

#include "qbsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace qbsim::tridiagonal {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double pivot_floor(const Chain& c) {
    double m = 1.0;
    for (double o : c.off) m = std::max(m, o * o);
    return std::numeric_limits<double>::min() * m;
}

std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& off, std::size_t n, double x,
                        double pivmin) {
    std::size_t count = 0;
    double q = d[0] - x;
    for (std::size_t i = 0;;) {
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
        if (++i == n) break;
        q = d[i] - x - off[i - 1] * off[i - 1] / q;
    }
    return count;
}

// Ring of n >= 3 sites: inertia of the leading open chain plus the sign of the
// Schur complement of the last site.
std::size_t ring_count(const Chain& c, double x, double pivmin) {
    const std::size_t n = c.size();
    const std::size_t m = n - 1;
    std::size_t count = 0;
    double schur = 0.0;
    double q = 0.0, z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double u = 0.0;
        if (i == 0) u += c.off[n - 1];
        if (i == m - 1) u += c.off[n - 2];
        if (i == 0) {
            q = c.diag[0] - x;
            z = u;
        } else {
            const double l = c.off[i - 1] / q;
            q = c.diag[i] - x - l * c.off[i - 1];
            z = u - l * z;
        }
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
        schur += z * z / q;
    }
    if (c.diag[m] - x - schur < 0.0) ++count;
    return count;
}

std::pair<double, double> gershgorin(const Chain& c) {
    const std::size_t n = c.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(c.off[i - 1]);
        else if (c.periodic) r += std::abs(c.off[n - 1]);
        if (i + 1 < n) r += std::abs(c.off[i]);
        else if (c.periodic) r += std::abs(c.off[n - 1]);
        lo = std::min(lo, c.diag[i] - r);
        hi = std::max(hi, c.diag[i] + r);
    }
    return {lo, hi};
}

// Pivoted LU of a general band matrix with kl sub- and ku super-diagonals.
// Row i stores columns [i - kl, i + kl + ku] to leave room for pivoting fill.
class BandLU {
public:
    BandLU(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), a_(n * width_, 0.0), l_(n * kl, 0.0), piv_(n) {}

    double& at(std::size_t i, std::size_t j) { return a_[i * width_ + (j + kl_ - i)]; }

    void factor(double tiny) {
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t last = std::min(n_ - 1, k + kl_);
            const std::size_t right = std::min(n_ - 1, k + kl_ + ku_);
            std::size_t p = k;
            for (std::size_t r = k + 1; r <= last; ++r)
                if (std::abs(at(r, k)) > std::abs(at(p, k))) p = r;
            piv_[k] = p;
            if (p != k)
                for (std::size_t j = k; j <= right; ++j) std::swap(at(k, j), at(p, j));
            if (std::abs(at(k, k)) < tiny) at(k, k) = at(k, k) < 0.0 ? -tiny : tiny;
            const double pivot = at(k, k);
            for (std::size_t r = k + 1; r <= last; ++r) {
                const double mult = at(r, k) / pivot;
                l_[k * kl_ + (r - k - 1)] = mult;
                at(r, k) = 0.0;
                if (mult == 0.0) continue;
                for (std::size_t j = k + 1; j <= right; ++j) at(r, j) -= mult * at(k, j);
            }
        }
    }

    void solve(std::vector<double>& b) {
        for (std::size_t k = 0; k < n_; ++k) {
            std::swap(b[k], b[piv_[k]]);
            const std::size_t last = std::min(n_ - 1, k + kl_);
            for (std::size_t r = k + 1; r <= last; ++r) b[r] -= l_[k * kl_ + (r - k - 1)] * b[k];
        }
        for (std::size_t k = n_; k-- > 0;) {
            const std::size_t right = std::min(n_ - 1, k + kl_ + ku_);
            double s = b[k];
            for (std::size_t j = k + 1; j <= right; ++j) s -= at(k, j) * b[j];
            b[k] = s / at(k, k);
        }
    }

private:
    std::size_t n_, kl_, ku_, width_;
    std::vector<double> a_;
    std::vector<double> l_;
    std::vector<std::size_t> piv_;
};

// Site order that turns a ring into a band of half-width 2: 0, n-1, 1, n-2, ...
std::vector<std::size_t> band_order(const Chain& c) {
    const std::size_t n = c.size();
    std::vector<std::size_t> order(n);
    if (!c.periodic) {
        std::iota(order.begin(), order.end(), 0);
        return order;
    }
    for (std::size_t pos = 0; pos < n; ++pos) order[pos] = pos % 2 == 0 ? pos / 2 : n - 1 - pos / 2;
    return order;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& v) {
    const double nrm = std::sqrt(dot(v, v));
    for (double& x : v) x /= nrm;
}

} // namespace

void Chain::validate() const {
    const std::size_t n = diag.size();
    if (n < 3) throw ValidationError("tridiagonal: chain needs at least 3 sites");
    if (off.size() != (periodic ? n : n - 1))
        throw ValidationError("tridiagonal: off-diagonal length does not match the boundary condition");
    for (double v : diag)
        if (!std::isfinite(v)) throw ValidationError("tridiagonal: non-finite diagonal");
    for (double v : off)
        if (!std::isfinite(v)) throw ValidationError("tridiagonal: non-finite off-diagonal");
}

std::size_t count_below(const Chain& chain, double x) {
    chain.validate();
    const double pivmin = pivot_floor(chain);
    return chain.periodic ? ring_count(chain, x, pivmin) : sturm_count(chain.diag, chain.off, chain.size(), x, pivmin);
}

std::vector<double> lowest_eigenvalues(const Chain& chain, std::size_t k) {
    chain.validate();
    if (k > chain.size()) throw ValidationError("tridiagonal: more eigenvalues requested than sites");
    const double pivmin = pivot_floor(chain);
    auto count = [&](double x) {
        return chain.periodic ? ring_count(chain, x, pivmin)
                              : sturm_count(chain.diag, chain.off, chain.size(), x, pivmin);
    };
    auto [lo, hi] = gershgorin(chain);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    lo -= 2.0 * eps * scale + pivmin;
    hi += 2.0 * eps * scale + pivmin;

    std::vector<double> values(k);
    double left = lo;
    for (std::size_t j = 0; j < k; ++j) {
        // smallest x with count(x) > j
        double a = left, b = hi;
        while (b - a > 2.0 * eps * std::max(std::abs(a), std::abs(b)) + pivmin) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (count(mid) > j) b = mid;
            else a = mid;
        }
        values[j] = 0.5 * (a + b);
        left = a;
    }
    return values;
}

std::vector<double> multiply(const Chain& chain, const std::vector<double>& x) {
    const std::size_t n = chain.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = chain.diag[i] * x[i];
        if (i > 0) s += chain.off[i - 1] * x[i - 1];
        if (i + 1 < n) s += chain.off[i] * x[i + 1];
        y[i] = s;
    }
    if (chain.periodic) {
        y[0] += chain.off[n - 1] * x[n - 1];
        y[n - 1] += chain.off[n - 1] * x[0];
    }
    return y;
}

Eigenpairs lowest_eigenpairs(const Chain& chain, std::size_t k) {
    Eigenpairs out;
    out.values = lowest_eigenvalues(chain, k);
    const std::size_t n = chain.size();
    const std::size_t w = chain.periodic ? 2 : 1;
    const auto order = band_order(chain);
    std::vector<std::size_t> position(n);
    for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;

    auto [lo, hi] = gershgorin(chain);
    const double norm = std::max(std::abs(lo), std::abs(hi));
    const double tiny = eps * norm;

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    std::vector<std::vector<double>> vectors;  // in band order
    for (std::size_t j = 0; j < k; ++j) {
        const double shift = out.values[j];
        BandLU lu(n, w, w);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pi = position[i];
            lu.at(pi, pi) = chain.diag[i] - shift;
            const std::size_t next = i + 1 < n ? i + 1 : (chain.periodic ? 0 : n);
            if (next == n) continue;
            const std::size_t pj = position[next];
            lu.at(pi, pj) += chain.off[i];
            lu.at(pj, pi) += chain.off[i];
        }
        lu.factor(tiny);

        std::vector<double> x(n);
        for (double& v : x) v = uniform(rng);
        normalize(x);
        for (int iter = 0; iter < 8; ++iter) {
            std::vector<double> y = x;
            lu.solve(y);
            for (const auto& prev : vectors) {
                const double c = dot(prev, y);
                for (std::size_t i = 0; i < n; ++i) y[i] -= c * prev[i];
            }
            normalize(y);
            const double overlap = std::abs(dot(x, y));
            x = std::move(y);
            if (iter >= 1 && 1.0 - overlap < 1e-15) break;
        }
        vectors.push_back(std::move(x));
    }

    out.vectors.reserve(k);
    for (const auto& v : vectors) {
        std::vector<double> natural(n);
        for (std::size_t p = 0; p < n; ++p) natural[order[p]] = v[p];
        out.vectors.push_back(std::move(natural));
    }
    // The Rayleigh quotient is accurate to the square of the vector error,
    // which beats the inertia-count bisection on long rings.
    for (std::size_t j = 0; j < k; ++j) out.values[j] = dot(out.vectors[j], multiply(chain, out.vectors[j]));
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out.values[a] < out.values[b]; });
    Eigenpairs sorted;
    for (std::size_t j : idx) {
        sorted.values.push_back(out.values[j]);
        sorted.vectors.push_back(std::move(out.vectors[j]));
    }
    return sorted;
}

} // namespace qbsim::tridiagonal
