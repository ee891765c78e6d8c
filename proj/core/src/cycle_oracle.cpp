#include "speclab/cycle_oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/rng.hpp"

namespace speclab {

namespace {

// 64-bit integer that throws instead of wrapping.
struct CheckedI64 {
    long long v = 0;
    CheckedI64() = default;
    CheckedI64(long long x) : v(x) {}

    friend CheckedI64 operator*(CheckedI64 a, CheckedI64 b) {
        CheckedI64 r;
        if (__builtin_mul_overflow(a.v, b.v, &r.v))
            throw ComputeError("64-bit overflow in exact tuple enumeration");
        return r;
    }
    CheckedI64& operator+=(CheckedI64 b) {
        if (__builtin_add_overflow(v, b.v, &v))
            throw ComputeError("64-bit overflow in exact tuple enumeration");
        return *this;
    }
    friend bool operator==(CheckedI64 a, CheckedI64 b) { return a.v == b.v; }
    friend bool operator!=(CheckedI64 a, CheckedI64 b) { return a.v != b.v; }
};

// Walks every k-tuple (i_1..i_k), accumulating the closed products
// a[i_1 i_2]...a[i_k i_1] into `distinct` (all indices different) and
// `repeated` (the rest). Zero partial products are pruned; with
// `required >= 0` only tuples visiting that index contribute.
template <typename T>
class CycleEnumerator {
public:
    CycleEnumerator(const T* a, long n, int k, long required = -1)
        : a_(a), n_(n), k_(k), required_(required), used_(static_cast<size_t>(n), 0) {}

    void run() {
        for (long i0 = 0; i0 < n_; ++i0) {
            first_ = i0;
            used_[static_cast<size_t>(i0)] = 1;
            extend(1, i0, T(1));
            used_[static_cast<size_t>(i0)] = 0;
        }
    }

    T distinct = T(0);
    T repeated = T(0);

private:
    void extend(int depth, long prev, T prod) {
        if (depth == k_) {
            if (required_ >= 0 && used_[static_cast<size_t>(required_)] == 0) return;
            T closed = prod * a_[prev * n_ + first_];
            if (closed != T(0)) (dups_ == 0 ? distinct : repeated) += closed;
            return;
        }
        const T* row = a_ + prev * n_;
        for (long j = 0; j < n_; ++j) {
            T next = prod * row[j];
            if (next == T(0)) continue;
            const bool dup = used_[static_cast<size_t>(j)] != 0;
            dups_ += dup;
            ++used_[static_cast<size_t>(j)];
            extend(depth + 1, j, next);
            --used_[static_cast<size_t>(j)];
            dups_ -= dup;
        }
    }

    const T* a_;
    long n_;
    int k_;
    long required_;
    long first_ = 0;
    int dups_ = 0;
    std::vector<unsigned char> used_;
};

// Same walk, but every edge slot branches between the A entry and the
// (pre-scaled) C entry; leaves are bucketed by source mix and distinctness.
template <typename T>
class MixedEnumerator {
public:
    MixedEnumerator(const T* a, const T* c, long n, int k)
        : a_(a), c_(c), n_(n), k_(k), used_(static_cast<size_t>(n), 0) {}

    void run() {
        for (long i0 = 0; i0 < n_; ++i0) {
            first_ = i0;
            used_[static_cast<size_t>(i0)] = 1;
            extend(1, i0, T(1), false, false);
            used_[static_cast<size_t>(i0)] = 0;
        }
    }

    T pure_a_distinct = T(0);
    T pure_a_repeated = T(0);
    T pure_c = T(0);
    T mixed_distinct = T(0);
    T mixed_repeated = T(0);

private:
    void deposit(T value, bool any_a, bool any_c) {
        if (value == T(0)) return;
        if (any_a && any_c) {
            (dups_ == 0 ? mixed_distinct : mixed_repeated) += value;
        } else if (any_a) {
            (dups_ == 0 ? pure_a_distinct : pure_a_repeated) += value;
        } else {
            pure_c += value;
        }
    }

    void extend(int depth, long prev, T prod, bool any_a, bool any_c) {
        if (depth == k_) {
            const long e = prev * n_ + first_;
            deposit(prod * a_[e], true, any_c);
            deposit(prod * c_[e], any_a, true);
            return;
        }
        for (long j = 0; j < n_; ++j) {
            const long e = prev * n_ + j;
            const bool dup = used_[static_cast<size_t>(j)] != 0;
            dups_ += dup;
            ++used_[static_cast<size_t>(j)];
            T via_a = prod * a_[e];
            if (via_a != T(0)) extend(depth + 1, j, via_a, true, any_c);
            T via_c = prod * c_[e];
            if (via_c != T(0)) extend(depth + 1, j, via_c, any_a, true);
            --used_[static_cast<size_t>(j)];
            dups_ -= dup;
        }
    }

    const T* a_;
    const T* c_;
    long n_;
    int k_;
    long first_ = 0;
    int dups_ = 0;
    std::vector<unsigned char> used_;
};

void check_caps(long n, int k, const OracleCaps& caps) {
    if (k < 1) throw ValidationError("cycle length must be >= 1");
    if (n < 1) throw ValidationError("matrix dimension must be >= 1");
    if (n > caps.max_n || k > caps.max_k)
        throw ResourceError("tuple enumeration cap exceeded: n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + " (caps n<=" +
                            std::to_string(caps.max_n) + ", k<=" + std::to_string(caps.max_k) +
                            ")");
}

std::vector<double> dense_real_buffer(const ModelMatrix& m) {
    const long n = m.dim();
    std::vector<double> buf(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) buf[static_cast<size_t>(i * n + j)] = m.entry(i, j).real();
    return buf;
}

std::vector<std::complex<double>> dense_complex_buffer(const ModelMatrix& m) {
    const long n = m.dim();
    std::vector<std::complex<double>> buf(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) buf[static_cast<size_t>(i * n + j)] = m.entry(i, j);
    return buf;
}

TupleSums enumerate_sums(const ModelMatrix& a, int k, long required) {
    const long n = a.dim();
    TupleSums out;
    if (a.is_real()) {
        auto buf = dense_real_buffer(a);
        CycleEnumerator<double> e(buf.data(), n, k, required);
        e.run();
        out.distinct_sum = e.distinct;
        out.repeated_sum = e.repeated;
    } else {
        auto buf = dense_complex_buffer(a);
        CycleEnumerator<std::complex<double>> e(buf.data(), n, k, required);
        e.run();
        out.distinct_sum = e.distinct;
        out.repeated_sum = e.repeated;
    }
    return out;
}

MomentStat reduce_samples(const std::vector<std::complex<double>>& xs) {
    MomentStat out;
    const auto t = static_cast<double>(xs.size());
    std::complex<double> sum = 0.0;
    for (const auto& x : xs) sum += x;
    out.value = sum / t;
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (const auto& x : xs) ss += std::norm(x - out.value);
    out.std_error = std::sqrt(ss / (t - 1.0) / t);
    return out;
}

}  // namespace

TupleSums tuple_sums(const ModelMatrix& a, int k, OracleCaps caps) {
    check_caps(a.dim(), k, caps);
    return enumerate_sums(a, k, -1);
}

TupleSumsInt tuple_sums_int(const std::vector<long long>& a, long n, int k, OracleCaps caps) {
    check_caps(n, k, caps);
    if (a.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
        throw ValidationError("entry array size does not match dimension");
    std::vector<CheckedI64> buf(a.begin(), a.end());
    CycleEnumerator<CheckedI64> e(buf.data(), n, k);
    e.run();
    return {e.distinct.v, e.repeated.v};
}

TraceDecomposition mixed_trace_decomposition(const ModelMatrix& a, const ModelMatrix& c,
                                             double scale, int k, OracleCaps caps) {
    if (a.dim() != c.dim()) throw ValidationError("matrix dimensions do not match");
    const long n = a.dim();
    check_caps(n, k, caps);

    TraceDecomposition out;
    out.k = k;
    if (a.is_real() && c.is_real()) {
        auto abuf = dense_real_buffer(a);
        auto cbuf = dense_real_buffer(c);
        for (auto& v : cbuf) v *= scale;
        MixedEnumerator<double> e(abuf.data(), cbuf.data(), n, k);
        e.run();
        out.pure_a = e.pure_a_distinct + e.pure_a_repeated;
        out.pure_c = e.pure_c;
        out.mixed_distinct = e.mixed_distinct;
        out.mixed_repeated = e.mixed_repeated;
        out.distinct_sum = e.pure_a_distinct;
        out.repeated_sum = e.pure_a_repeated;
    } else {
        auto abuf = dense_complex_buffer(a);
        auto cbuf = dense_complex_buffer(c);
        for (auto& v : cbuf) v *= scale;
        MixedEnumerator<std::complex<double>> e(abuf.data(), cbuf.data(), n, k);
        e.run();
        out.pure_a = e.pure_a_distinct + e.pure_a_repeated;
        out.pure_c = e.pure_c;
        out.mixed_distinct = e.mixed_distinct;
        out.mixed_repeated = e.mixed_repeated;
        out.distinct_sum = e.pure_a_distinct;
        out.repeated_sum = e.pure_a_repeated;
    }
    return out;
}

PerturbedCycleSums perturbed_cycle_sums(const ModelMatrix& a, long support_vertex, int k, int ell,
                                        OracleCaps caps) {
    const long n = a.dim();
    if (ell < 1 || ell > k - 1) throw ValidationError("need 1 <= ell <= k-1");
    if (support_vertex < 1 || support_vertex > n)
        throw ValidationError("support vertex outside [1,n]");
    check_caps(n, k, caps);
    TupleSums sums = enumerate_sums(a, k - ell, support_vertex - 1);
    return {sums.distinct_sum, sums.repeated_sum};
}

MomentCampaignResult moment_campaign_t(const EntryLaw& law, long n, int k, long trials,
                                       std::uint64_t master_seed, double tuple_budget) {
    if (n < 1) throw ValidationError("matrix dimension must be >= 1");
    if (k < 1) throw ValidationError("cycle length must be >= 1");
    if (trials < 1) throw ValidationError("trial count must be >= 1");
    const double cost = std::pow(static_cast<double>(n), k) * static_cast<double>(trials);
    if (!(cost <= tuple_budget))
        throw ResourceError("moment campaign cost n^k * trials = " + std::to_string(cost) +
                            " exceeds budget " + std::to_string(tuple_budget));

    const double norm = std::pow(static_cast<double>(n), 0.5 * k);
    std::vector<std::complex<double>> t_vals, t_abs2, t_sq, r_vals, r_abs2, r_sq;
    t_vals.reserve(static_cast<size_t>(trials));

    for (long trial = 0; trial < trials; ++trial) {
        Rng rng(derive_stream_seed(master_seed, static_cast<std::uint64_t>(trial)));
        ModelMatrix a = sample_iid_matrix(law, n, rng, std::max(n, kDefaultDenseCeiling));
        TupleSums sums = enumerate_sums(a, k, -1);
        const std::complex<double> t = sums.distinct_sum / static_cast<double>(k) / norm;
        const std::complex<double> r = sums.repeated_sum / norm;
        t_vals.push_back(t);
        t_abs2.push_back(std::norm(t));
        t_sq.push_back(t * t);
        r_vals.push_back(r);
        r_abs2.push_back(std::norm(r));
        r_sq.push_back(r * r);
    }

    MomentCampaignResult out;
    out.n = n;
    out.k = k;
    out.trials = trials;
    out.t.mean = reduce_samples(t_vals);
    out.t.abs_square = reduce_samples(t_abs2);
    out.t.square = reduce_samples(t_sq);
    out.r.mean = reduce_samples(r_vals);
    out.r.abs_square = reduce_samples(r_abs2);
    out.r.square = reduce_samples(r_sq);
    return out;
}

}  // namespace speclab
