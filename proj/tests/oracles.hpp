#pragma once

// Test-side oracles, independent of the library code paths they check.

#include "ssr/dvr.hpp"
#include "ssr/scalar.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace ssr::oracle {

// v(det) of a square submatrix by Laplace expansion over exact scalars
inline Scalar minor_det(const MatK& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.empty()) return Scalar::one(m.proto().backend());
    Scalar acc = Scalar::zero(m.proto().backend());
    for (size_t k = 0; k < cols.size(); ++k) {
        std::vector<int> sub_rows(rows.begin() + 1, rows.end());
        std::vector<int> sub_cols;
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != k) sub_cols.push_back(cols[j]);
        Scalar term = m.at(rows[0], cols[k]) * minor_det(m, sub_rows, sub_cols);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

inline void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) { out.push_back(cur); return; }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

// Determinantal-divisor oracle: g_j = min valuation over all j x j minors,
// e_j = g_j - g_{j-1}.  Exact and independent of any pivoting.
inline std::vector<int> smith_exponents_by_minors(const MatK& m) {
    int n = std::min(m.rows(), m.cols());
    std::vector<int> g;
    for (int j = 1; j <= n; ++j) {
        std::vector<std::vector<int>> row_sets, col_sets;
        subsets_of_size(m.rows(), j, row_sets);
        subsets_of_size(m.cols(), j, col_sets);
        int best = VAL_INFINITY;
        for (const auto& rs : row_sets)
            for (const auto& cs : col_sets)
                best = std::min(best, minor_det(m, rs, cs).valuation());
        if (best == VAL_INFINITY) break;
        g.push_back(best);
    }
    std::vector<int> e;
    for (size_t j = 0; j < g.size(); ++j) e.push_back(j == 0 ? g[0] : g[j] - g[j - 1]);
    return e;
}

// extended-Euclid inverse, used to pin residue examples
inline std::int64_t invmod_oracle(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    return ((t % m) + m) % m;
}

// random helpers shared by the suites ------------------------------------

inline Scalar random_unit(Rng& rng, const Backend& b) {
    if (b.kind == BackendKind::padic) {
        std::int64_t n = 0, d = 0;
        do { n = rng.range(-9, 9); } while (n == 0 || n % b.p == 0);
        do { d = rng.range(1, 9); } while (d % b.p == 0);
        return Scalar::from_rational(b, Rational(n, d));
    }
    std::vector<std::int64_t> nc{rng.range(1, b.p - 1), rng.range(0, b.p - 1)};
    std::vector<std::int64_t> dc{1, rng.range(0, b.p - 1)};
    return Scalar::from_ratfunc(b, RatFunc(FpPoly(b.p, nc), FpPoly(b.p, dc)));
}

// integral scalar with valuation in [0, maxval], or zero
inline Scalar random_integral(Rng& rng, const Backend& b, int maxval, int zero_percent = 15) {
    if (static_cast<int>(rng.below(100)) < zero_percent) return Scalar::zero(b);
    int e = static_cast<int>(rng.below(static_cast<std::uint64_t>(maxval) + 1));
    return Scalar::uniformizer_pow(b, e) * random_unit(rng, b);
}

inline MatK random_integral_matrix(Rng& rng, const Backend& b, int rows, int cols, int maxval) {
    MatK m(rows, cols, Scalar::zero(b));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = random_integral(rng, b, maxval);
    return m;
}

// product of a few elementary operations: integral, determinant a unit
inline MatK random_unimodular(Rng& rng, const Backend& b, int n, int ops = 8) {
    MatK u = MatK::identity(n, Scalar::one(b));
    for (int k = 0; k < ops; ++k) {
        int kind = static_cast<int>(rng.below(3));
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (kind == 0 && i != j) {
            u.swap_rows(i, j);
        } else if (kind == 1) {
            Scalar unit = random_unit(rng, b);
            for (int c = 0; c < n; ++c) u.at(i, c) = u.at(i, c) * unit;
        } else if (i != j) {
            Scalar f = random_integral(rng, b, 1, 25);
            for (int c = 0; c < n; ++c) u.at(i, c) = u.at(i, c) + f * u.at(j, c);
        }
    }
    return u;
}

// random full-rank lattice given by pivot exponents and above-pivot noise
inline Lattice random_lattice(Rng& rng, const Backend& b, int dim, int spread = 2) {
    MatK m = MatK::zero(dim, dim, Scalar::zero(b));
    for (int j = 0; j < dim; ++j) {
        m.at(j, j) = Scalar::uniformizer_pow(b, static_cast<int>(rng.below(2 * spread + 1)) - spread);
        for (int i = 0; i < j; ++i)
            m.at(i, j) = random_integral(rng, b, spread, 40);
    }
    return Lattice(m);
}

} // namespace ssr::oracle
