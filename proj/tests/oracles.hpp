#pragma once

// Independent reference implementations used only to cross-check the library.
// Everything here is deliberately written with a different structure from the
// production code: odometer loops instead of recursion, exhaustive search
// instead of branch-and-bound, textbook elimination instead of LAPACK.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// Adaptive Simpson quadrature.
inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double integrate_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return integrate_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           integrate_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return integrate_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 28);
}

// Coefficients of prod_i (1 - z r_i), degree = roots.size().
inline std::vector<cd> poly_from_roots(const std::vector<cd>& roots) {
    std::vector<cd> coeffs{1.0};
    for (const cd& r : roots) {
        std::vector<cd> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * r;
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

// det(I - z M) for a row-major n x n matrix, by partial-pivot elimination.
inline cd det_i_minus_zm(const std::vector<cd>& m, long n, cd z) {
    std::vector<cd> b(static_cast<std::size_t>(n) * n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            b[i * n + j] = (i == j ? 1.0 : 0.0) - z * m[i * n + j];
    cd det = 1.0;
    for (long col = 0; col < n; ++col) {
        long pivot = col;
        for (long r = col + 1; r < n; ++r)
            if (std::abs(b[r * n + col]) > std::abs(b[pivot * n + col])) pivot = r;
        if (b[pivot * n + col] == 0.0) return 0.0;
        if (pivot != col) {
            for (long j = 0; j < n; ++j) std::swap(b[pivot * n + j], b[col * n + j]);
            det = -det;
        }
        det *= b[col * n + col];
        for (long r = col + 1; r < n; ++r) {
            const cd factor = b[r * n + col] / b[col * n + col];
            for (long j = col; j < n; ++j) b[r * n + j] -= factor * b[col * n + j];
        }
    }
    return det;
}

struct TupleSumsRef {
    cd distinct = 0.0;
    cd repeated = 0.0;
};

// Odometer enumeration of a_{i1 i2} ... a_{ik i1} over all k-tuples,
// optionally restricted to tuples containing required_vertex (0-based).
inline TupleSumsRef tuple_sums_reference(const std::vector<cd>& a, long n, int k,
                                         long required_vertex = -1) {
    TupleSumsRef out;
    std::vector<long> idx(static_cast<std::size_t>(k), 0);
    std::vector<long> sorted(static_cast<std::size_t>(k));
    while (true) {
        bool has_required = required_vertex < 0;
        for (int e = 0; e < k && !has_required; ++e) has_required = idx[e] == required_vertex;
        if (has_required) {
            cd prod = 1.0;
            for (int e = 0; e < k; ++e) prod *= a[idx[e] * n + idx[(e + 1) % k]];
            sorted.assign(idx.begin(), idx.end());
            std::sort(sorted.begin(), sorted.end());
            const bool distinct =
                std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
            (distinct ? out.distinct : out.repeated) += prod;
        }
        int pos = k - 1;
        while (pos >= 0 && ++idx[pos] == n) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

struct MatchRef {
    std::vector<std::pair<int, int>> kept;  // (predicted index, observed index), dist <= tol
    double total = 0.0;                     // over kept pairs
    int full_cardinality = 0;               // min(p, m)
};

// Exhaustive minimum-total-distance injective assignment (both directions),
// then the same tolerance post-pass the library applies.
inline MatchRef match_reference(const std::vector<cd>& observed, const std::vector<cd>& predicted,
                                double tol) {
    const int p = static_cast<int>(predicted.size());
    const int m = static_cast<int>(observed.size());
    const int c = std::min(p, m);
    MatchRef out;
    out.full_cardinality = c;
    if (c == 0) return out;

    std::vector<int> perm(static_cast<std::size_t>(std::max(p, m)));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, int>> best_pairs;
    do {
        double total = 0.0;
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(c));
        for (int i = 0; i < c; ++i) {
            const int pi = p <= m ? i : perm[i];
            const int oi = p <= m ? perm[i] : i;
            total += std::abs(predicted[pi] - observed[oi]);
            pairs.emplace_back(pi, oi);
        }
        if (total < best) {
            best = total;
            best_pairs = std::move(pairs);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (const auto& [pi, oi] : best_pairs) {
        const double dist = std::abs(predicted[pi] - observed[oi]);
        if (dist <= tol) {
            out.kept.emplace_back(pi, oi);
            out.total += dist;
        }
    }
    return out;
}

inline double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
    const double mu = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

}  // namespace oracle
