#include "speclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lapack_interop.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace {

void sort_spectrum(std::vector<std::complex<double>>& w) {
    std::sort(w.begin(), w.end(), [](std::complex<double> a, std::complex<double> b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return std::arg(a) < std::arg(b);
    });
}

void guard_finite(const std::complex<double>& t, int k) {
    if (std::isfinite(t.real()) && std::isfinite(t.imag())) return;
    std::ostringstream os;
    os << "trace_powers: magnitude not representable at k=" << k;
    throw ComputeError(os.str());
}

// Sum over ij of X_ij * Y_ji (column-major).
template <typename T>
std::complex<double> cross_trace(const std::vector<T>& x, const std::vector<T>& y, long n) {
    std::complex<double> acc = 0.0;
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i)
            acc += std::complex<double>(x[static_cast<size_t>(j) * static_cast<size_t>(n) +
                                          static_cast<size_t>(i)]) *
                   std::complex<double>(y[static_cast<size_t>(i) * static_cast<size_t>(n) +
                                          static_cast<size_t>(j)]);
    return acc;
}

template <typename T>
std::complex<double> plain_trace(const std::vector<T>& x, long n) {
    std::complex<double> acc = 0.0;
    for (long i = 0; i < n; ++i)
        acc += std::complex<double>(
            x[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)]);
    return acc;
}

template <typename T>
void gemm(const std::vector<T>& a, const std::vector<T>& b, std::vector<T>& c, long n) {
    if constexpr (std::is_same_v<T, double>)
        detail::gemm_real(a.data(), b.data(), c.data(), n);
    else
        detail::gemm_complex(a.data(), b.data(), c.data(), n);
}

// Traces of powers 1..K from at most two products (M^2, M^3) for K <= 6,
// extending by one product per extra power beyond that.
template <typename T>
std::vector<std::complex<double>> dense_trace_powers(const std::vector<T>& m, long n, int K) {
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<size_t>(K));
    out.push_back(plain_trace(m, n));
    guard_finite(out.back(), 1);
    if (K == 1) return out;

    std::vector<T> p2(m.size());
    gemm(m, m, p2, n);
    out.push_back(plain_trace(p2, n));
    guard_finite(out.back(), 2);
    if (K == 2) return out;

    std::vector<T> p3(m.size());
    gemm(p2, m, p3, n);
    out.push_back(plain_trace(p3, n));
    guard_finite(out.back(), 3);

    if (K >= 4) out.push_back(cross_trace(p2, p2, n));
    if (K >= 5) out.push_back(cross_trace(p3, p2, n));
    if (K >= 6) out.push_back(cross_trace(p3, p3, n));
    for (int k = 4; k <= std::min(K, 6); ++k) guard_finite(out[static_cast<size_t>(k) - 1], k);

    if (K > 6) {
        // p3 holds M^3; continue the chain one product at a time.
        std::vector<T> prev = p3, next(m.size());
        for (int k = 4; k <= K - 3; ++k) {
            gemm(prev, m, next, n);
            prev.swap(next);  // prev = M^k
            out.push_back(cross_trace(prev, p3, n));
            guard_finite(out.back(), k + 3);
        }
    }
    return out;
}

// CSR * CSR with a dense accumulator row.
CsrStorage csr_multiply(const CsrStorage& x, const CsrStorage& a, long n) {
    CsrStorage out;
    out.real = x.real && a.real;
    out.row_start.reserve(static_cast<size_t>(n) + 1);
    out.row_start.push_back(0);
    std::vector<std::complex<double>> acc(static_cast<size_t>(n), 0.0);
    std::vector<long> touched;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (long i = 0; i < n; ++i) {
        touched.clear();
        for (long p = x.row_start[static_cast<size_t>(i)];
             p < x.row_start[static_cast<size_t>(i) + 1]; ++p) {
            const long k = x.col[static_cast<size_t>(p)];
            const std::complex<double> v = x.val[static_cast<size_t>(p)];
            for (long q = a.row_start[static_cast<size_t>(k)];
                 q < a.row_start[static_cast<size_t>(k) + 1]; ++q) {
                const long j = a.col[static_cast<size_t>(q)];
                if (!seen[static_cast<size_t>(j)]) {
                    seen[static_cast<size_t>(j)] = 1;
                    touched.push_back(j);
                }
                acc[static_cast<size_t>(j)] += v * a.val[static_cast<size_t>(q)];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (const long j : touched) {
            out.col.push_back(j);
            out.val.push_back(acc[static_cast<size_t>(j)]);
            acc[static_cast<size_t>(j)] = 0.0;
            seen[static_cast<size_t>(j)] = 0;
        }
        out.row_start.push_back(static_cast<long>(out.col.size()));
    }
    return out;
}

std::complex<double> csr_trace(const CsrStorage& x, long n) {
    std::complex<double> t = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto begin = x.col.begin() + x.row_start[static_cast<size_t>(i)];
        const auto end = x.col.begin() + x.row_start[static_cast<size_t>(i) + 1];
        const auto it = std::lower_bound(begin, end, i);
        if (it != end && *it == i) t += x.val[static_cast<size_t>(it - x.col.begin())];
    }
    return t;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const ModelMatrix& m, long dense_ceiling) {
    ModelMatrix dense = m.densified(dense_ceiling);
    auto& d = dense.dense_storage();
    std::vector<std::complex<double>> w = d.real
                                              ? detail::lapack_eigs_real(d.re, dense.dim())
                                              : detail::lapack_eigs_complex(d.cx, dense.dim());
    sort_spectrum(w);
    return w;
}

std::vector<std::complex<double>> trace_powers(const ModelMatrix& m, int K, long dense_ceiling) {
    if (K < 1) throw ValidationError("trace_powers: K must be >= 1");
    const long n = m.dim();
    if (m.is_dense()) {
        const auto& d = m.dense_storage();
        return d.real ? dense_trace_powers(d.re, n, K) : dense_trace_powers(d.cx, n, K);
    }
    const auto& csr = m.csr_storage();
    if (csr.uniform != 0.0 || K > 6)
        return trace_powers(m.densified(dense_ceiling), K, dense_ceiling);
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<size_t>(K));
    out.push_back(csr_trace(csr, n));
    guard_finite(out.back(), 1);
    CsrStorage power = csr;
    for (int k = 2; k <= K; ++k) {
        power = csr_multiply(power, csr, n);
        out.push_back(csr_trace(power, n));
        guard_finite(out.back(), k);
    }
    return out;
}

TruncatedPowerSeries newton_coefficients(const std::vector<std::complex<double>>& traces, int K) {
    if (K < 1) throw ValidationError("newton_coefficients: K must be >= 1");
    if (static_cast<int>(traces.size()) < K)
        throw ValidationError("newton_coefficients: need at least K traces");
    // k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i; coefficient of z^k is (-1)^k e_k.
    std::vector<std::complex<double>> e(static_cast<size_t>(K) + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        std::complex<double> acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= k; ++i) {
            acc += sign * e[static_cast<size_t>(k - i)] * traces[static_cast<size_t>(i) - 1];
            sign = -sign;
        }
        e[static_cast<size_t>(k)] = acc / static_cast<double>(k);
    }
    TruncatedPowerSeries series;
    series.coefficients.resize(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        series.coefficients[static_cast<size_t>(k)] =
            (k % 2 == 0 ? 1.0 : -1.0) * e[static_cast<size_t>(k)];
    return series;
}

std::complex<double> reverse_charpoly_eval(const ModelMatrix& m, std::complex<double> z,
                                           long dense_ceiling) {
    const long n = m.dim();
    ModelMatrix dense = m.densified(dense_ceiling);
    auto& d = dense.dense_storage();
    std::vector<std::complex<double>> b(static_cast<size_t>(n) * static_cast<size_t>(n));
    if (d.real) {
        for (size_t idx = 0; idx < b.size(); ++idx) b[idx] = -z * d.re[idx];
    } else {
        for (size_t idx = 0; idx < b.size(); ++idx) b[idx] = -z * d.cx[idx];
    }
    for (long i = 0; i < n; ++i)
        b[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)] += 1.0;
    return detail::lu_det_complex(b, n);
}

OutlierSplit detect_outliers(const std::vector<std::complex<double>>& eigs,
                             const OutlierRule& rule) {
    if (eigs.empty()) throw ValidationError("detect_outliers: empty spectrum");
    std::vector<std::complex<double>> sorted = eigs;
    sort_spectrum(sorted);

    size_t split = 0;  // first bulk index
    switch (rule.kind) {
        case OutlierRule::Kind::FixedRadius: {
            if (!(rule.radius > 0.0)) throw ValidationError("detect_outliers: radius must be > 0");
            while (split < sorted.size() && std::abs(sorted[split]) > rule.radius) ++split;
            break;
        }
        case OutlierRule::Kind::LargestGap: {
            if (!(rule.min_gap_ratio > 1.0))
                throw ValidationError("detect_outliers: gap ratio must exceed 1");
            double best_ratio = 0.0;
            size_t best_pos = 0;  // 0 means no split
            for (size_t i = 0; i + 1 < sorted.size(); ++i) {
                const double hi = std::abs(sorted[i]);
                if (hi <= rule.bulk_level) break;  // moduli only decrease from here
                const double lo = std::abs(sorted[i + 1]);
                const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
                if (ratio > best_ratio) {
                    best_ratio = ratio;
                    best_pos = i + 1;
                }
            }
            if (best_pos > 0 && best_ratio >= rule.min_gap_ratio) split = best_pos;
            break;
        }
    }
    OutlierSplit out;
    out.outliers.assign(sorted.begin(), sorted.begin() + static_cast<long>(split));
    out.bulk.assign(sorted.begin() + static_cast<long>(split), sorted.end());
    out.bulk_radius = out.bulk.empty() ? 0.0 : std::abs(out.bulk.front());
    return out;
}

SpectrumResult compute_spectrum(const ModelMatrix& m, int K, const OutlierRule& rule,
                                long dense_ceiling) {
    SpectrumResult result;
    result.eigenvalues = eigenvalues(m, dense_ceiling);
    OutlierSplit split = detect_outliers(result.eigenvalues, rule);
    result.bulk_radius = split.bulk_radius;
    result.outliers = std::move(split.outliers);
    result.trace_powers = trace_powers(m, K, dense_ceiling);
    return result;
}

}  // namespace speclab
