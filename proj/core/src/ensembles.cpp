#include "speclab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "speclab/errors.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

ModelMatrix sample_iid_matrix(const EntryLaw& law, long n, Rng& rng, long dense_ceiling) {
    if (n < 1) throw ValidationError("sample_iid_matrix: dimension must be positive");
    if (n > dense_ceiling) {
        std::ostringstream os;
        os << "sample_iid_matrix: n=" << n << " exceeds dense ceiling " << dense_ceiling;
        throw ResourceError(os.str());
    }
    ModelMatrix m = law.is_real() ? ModelMatrix::dense_real(n) : ModelMatrix::dense_complex(n);
    m.provenance.law = law.describe();
    auto& d = m.dense_storage();
    const size_t total = static_cast<size_t>(n) * static_cast<size_t>(n);
    if (d.real) {
        for (size_t idx = 0; idx < total; ++idx) d.re[idx] = law.sample(rng).real();
    } else {
        for (size_t idx = 0; idx < total; ++idx) d.cx[idx] = law.sample(rng);
    }
    return m;
}

ModelMatrix sample_sparse_bernoulli(double d, long n, Rng& rng) {
    if (n < 1) throw ValidationError("sample_sparse_bernoulli: dimension must be positive");
    if (!(d > 0.0) || d >= static_cast<double>(n))
        throw ValidationError("sample_sparse_bernoulli: need 0 < d < n");
    const double p = d / static_cast<double>(n);
    CsrStorage csr;
    csr.real = true;
    csr.row_start.reserve(static_cast<size_t>(n) + 1);
    csr.row_start.push_back(0);
    const size_t expect = static_cast<size_t>(d * static_cast<double>(n) * 1.3) + 16;
    csr.col.reserve(expect);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j)
            if (uniform01(rng) < p) csr.col.push_back(j);
        csr.row_start.push_back(static_cast<long>(csr.col.size()));
    }
    csr.val.assign(csr.col.size(), 1.0);
    ModelMatrix m = ModelMatrix::from_csr(n, std::move(csr));
    std::ostringstream os;
    os << "bernoulli(d=" << d << ",n=" << n << ")";
    m.provenance.law = os.str();
    return m;
}

ModelMatrix build_perturbation(const PerturbationSpec& spec, long n) {
    if (n < spec.min_dimension())
        throw ValidationError("build_perturbation: perturbation does not fit in dimension");
    ModelMatrix out = [&] {
        switch (spec.cls()) {
            case PerturbationSpec::Class::FullMean:
                return ModelMatrix::uniform(n, spec.mean_mu() / static_cast<double>(n));
            case PerturbationSpec::Class::FactoredLowRank: {
                ModelMatrix m = ModelMatrix::dense_complex(n);
                const auto& us = spec.u_columns();
                const auto& vs = spec.v_columns();
                for (size_t k = 0; k < us.size(); ++k)
                    for (long j = 0; j < n; ++j) {
                        const std::complex<double> vj = vs[k][static_cast<size_t>(j)];
                        if (vj == 0.0) continue;
                        for (long i = 0; i < n; ++i)
                            m.complex_at(i, j) += us[k][static_cast<size_t>(i)] * vj;
                    }
                return m;
            }
            default: {
                auto entries = spec.materialize_entries(n);
                CsrStorage csr;
                csr.real = spec.is_real();
                csr.row_start.assign(static_cast<size_t>(n) + 1, 0);
                for (const auto& e : entries) csr.row_start[static_cast<size_t>(e.row)]++;
                for (size_t i = 1; i < csr.row_start.size(); ++i)
                    csr.row_start[i] += csr.row_start[i - 1];
                csr.col.resize(entries.size());
                csr.val.resize(entries.size());
                size_t pos = 0;
                for (const auto& e : entries) {
                    csr.col[pos] = e.col - 1;
                    csr.val[pos] = e.value;
                    ++pos;
                }
                return ModelMatrix::from_csr(n, std::move(csr));
            }
        }
    }();
    out.provenance.perturbation = spec.describe();
    out.provenance.unproven_regime = spec.unproven_regime();
    return out;
}

namespace {

// Characteristic coefficients of det(I - zB) for a small dense block, via
// power traces and the Newton recurrence.
TruncatedPowerSeries small_reverse_char(const std::vector<std::complex<double>>& b, long m) {
    if (m == 0) return TruncatedPowerSeries{{1.0}};
    std::vector<std::complex<double>> power = b, traces;
    traces.reserve(static_cast<size_t>(m));
    auto trace_of = [m](const std::vector<std::complex<double>>& x) {
        std::complex<double> t = 0.0;
        for (long i = 0; i < m; ++i) t += x[static_cast<size_t>(i * m + i)];
        return t;
    };
    traces.push_back(trace_of(power));
    std::vector<std::complex<double>> next(static_cast<size_t>(m * m));
    for (long k = 2; k <= m; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (long j = 0; j < m; ++j)
            for (long l = 0; l < m; ++l) {
                const std::complex<double> blj = b[static_cast<size_t>(j * m + l)];
                if (blj == 0.0) continue;
                for (long i = 0; i < m; ++i)
                    next[static_cast<size_t>(j * m + i)] +=
                        power[static_cast<size_t>(l * m + i)] * blj;
            }
        power.swap(next);
        traces.push_back(trace_of(power));
    }
    return newton_coefficients(traces, static_cast<int>(m));
}

}  // namespace

TruncatedPowerSeries reverse_char_of_perturbation(const PerturbationSpec& spec, long n, int K) {
    if (K < 1) throw ValidationError("reverse_char_of_perturbation: K must be >= 1");
    if (n < spec.min_dimension())
        throw ValidationError("reverse_char_of_perturbation: perturbation does not fit");

    TruncatedPowerSeries series;
    switch (spec.cls()) {
        case PerturbationSpec::Class::DiagonalSpikes:
            series = poly_from_inverse_roots(spec.thetas(), K);
            break;
        case PerturbationSpec::Class::JordanBlock: {
            std::vector<std::complex<double>> roots(static_cast<size_t>(spec.jordan_size()),
                                                    spec.jordan_theta());
            series = poly_from_inverse_roots(roots, K);
            break;
        }
        case PerturbationSpec::Class::FullMean:
            series = poly_from_inverse_roots({spec.mean_mu()}, K);
            break;
        case PerturbationSpec::Class::SparseEntries: {
            // det(I - zC) equals the determinant restricted to the touched
            // index set; everything outside contributes identity rows.
            std::set<long> touched;
            for (const auto& e : spec.entries()) {
                touched.insert(e.row);
                touched.insert(e.col);
            }
            std::vector<long> order(touched.begin(), touched.end());
            const long m = static_cast<long>(order.size());
            std::vector<std::complex<double>> block(static_cast<size_t>(m * m), 0.0);
            for (const auto& e : spec.entries()) {
                const long i = static_cast<long>(
                    std::lower_bound(order.begin(), order.end(), e.row) - order.begin());
                const long j = static_cast<long>(
                    std::lower_bound(order.begin(), order.end(), e.col) - order.begin());
                block[static_cast<size_t>(j * m + i)] += e.value;
            }
            series = small_reverse_char(block, m);
            break;
        }
        case PerturbationSpec::Class::FactoredLowRank: {
            // det(I_n - z U V^T) = det(I_r - z V^T U).
            const auto& us = spec.u_columns();
            const auto& vs = spec.v_columns();
            const long r = static_cast<long>(us.size());
            const size_t len = us.front().size();
            std::vector<std::complex<double>> gram(static_cast<size_t>(r * r), 0.0);
            for (long a = 0; a < r; ++a)
                for (long b = 0; b < r; ++b) {
                    std::complex<double> s = 0.0;
                    for (size_t i = 0; i < len; ++i)
                        s += vs[static_cast<size_t>(a)][i] * us[static_cast<size_t>(b)][i];
                    gram[static_cast<size_t>(b * r + a)] = s;
                }
            series = small_reverse_char(gram, r);
            break;
        }
    }
    series.trim_trailing(1e-12);
    if (series.order() > K) series.coefficients.resize(static_cast<size_t>(K) + 1);
    series.validity_radius = std::numeric_limits<double>::infinity();
    series.sampled = false;
    return series;
}

ModelMatrix assemble_model(const ModelMatrix& a, const ModelMatrix& c, ScalingSpec scaling,
                           long dense_ceiling) {
    const long n = a.dim();
    if (c.dim() != n) throw ValidationError("assemble_model: dimension mismatch");
    const double alpha = scaling.factor(n);

    auto merge_provenance = [&](ModelMatrix& out) {
        out.scaling = scaling;
        out.provenance.law = a.provenance.law.empty() ? c.provenance.law : a.provenance.law;
        out.provenance.perturbation = c.provenance.perturbation.empty()
                                          ? a.provenance.perturbation
                                          : c.provenance.perturbation;
        out.provenance.seed = a.provenance.seed ? a.provenance.seed : c.provenance.seed;
        out.provenance.unproven_regime =
            a.provenance.unproven_regime || c.provenance.unproven_regime;
    };

    if (a.is_dense() || c.is_dense()) {
        ModelMatrix base = a.is_dense() ? a : a.densified(dense_ceiling);
        const ModelMatrix& add = c;
        const bool result_real = base.is_real() && add.is_real();
        ModelMatrix out = base;
        if (!result_real && out.is_real()) out.promote_to_complex();
        auto& d = out.dense_storage();
        const size_t total = static_cast<size_t>(n) * static_cast<size_t>(n);
        if (d.real) {
            for (size_t idx = 0; idx < total; ++idx) d.re[idx] *= alpha;
        } else {
            for (size_t idx = 0; idx < total; ++idx) d.cx[idx] *= alpha;
        }
        if (add.is_dense()) {
            const auto& ds = add.dense_storage();
            if (d.real) {
                for (size_t idx = 0; idx < total; ++idx) d.re[idx] += ds.re[idx];
            } else if (ds.real) {
                for (size_t idx = 0; idx < total; ++idx) d.cx[idx] += ds.re[idx];
            } else {
                for (size_t idx = 0; idx < total; ++idx) d.cx[idx] += ds.cx[idx];
            }
        } else {
            const auto& csr = add.csr_storage();
            if (csr.uniform != 0.0) {
                if (d.real) {
                    for (size_t idx = 0; idx < total; ++idx) d.re[idx] += csr.uniform.real();
                } else {
                    for (size_t idx = 0; idx < total; ++idx) d.cx[idx] += csr.uniform;
                }
            }
            for (long i = 0; i < n; ++i)
                for (long p = csr.row_start[static_cast<size_t>(i)];
                     p < csr.row_start[static_cast<size_t>(i) + 1]; ++p) {
                    const long j = csr.col[static_cast<size_t>(p)];
                    const size_t idx =
                        static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i);
                    if (d.real)
                        d.re[idx] += csr.val[static_cast<size_t>(p)].real();
                    else
                        d.cx[idx] += csr.val[static_cast<size_t>(p)];
                }
        }
        merge_provenance(out);
        return out;
    }

    // Both sparse: sorted row merge.
    const auto& sa = a.csr_storage();
    const auto& sc = c.csr_storage();
    CsrStorage out;
    out.real = sa.real && sc.real;
    out.uniform = alpha * sa.uniform + sc.uniform;
    out.row_start.reserve(static_cast<size_t>(n) + 1);
    out.row_start.push_back(0);
    out.col.reserve(sa.col.size() + sc.col.size());
    out.val.reserve(sa.col.size() + sc.col.size());
    for (long i = 0; i < n; ++i) {
        long pa = sa.row_start[static_cast<size_t>(i)];
        const long ea = sa.row_start[static_cast<size_t>(i) + 1];
        long pc = sc.row_start[static_cast<size_t>(i)];
        const long ec = sc.row_start[static_cast<size_t>(i) + 1];
        while (pa < ea || pc < ec) {
            long j;
            std::complex<double> v = 0.0;
            const long ja = pa < ea ? sa.col[static_cast<size_t>(pa)] : n;
            const long jc = pc < ec ? sc.col[static_cast<size_t>(pc)] : n;
            j = std::min(ja, jc);
            if (ja == j) v += alpha * sa.val[static_cast<size_t>(pa++)];
            if (jc == j) v += sc.val[static_cast<size_t>(pc++)];
            out.col.push_back(j);
            out.val.push_back(v);
        }
        out.row_start.push_back(static_cast<long>(out.col.size()));
    }
    ModelMatrix result = ModelMatrix::from_csr(n, std::move(out));
    merge_provenance(result);
    return result;
}

}  // namespace speclab
