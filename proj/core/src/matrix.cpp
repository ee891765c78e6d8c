#include "speclab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

double ScalingSpec::factor(long n) const {
    switch (kind) {
        case Kind::InvSqrtN:
            return 1.0 / std::sqrt(static_cast<double>(n));
        case Kind::None:
            return 1.0;
        case Kind::InvSqrtDn:
            if (!(dn > 0.0)) throw ValidationError("ScalingSpec: d_n must be positive");
            return 1.0 / std::sqrt(dn);
    }
    throw ValidationError("ScalingSpec: unknown kind");
}

std::string ScalingSpec::describe() const {
    switch (kind) {
        case Kind::InvSqrtN:
            return "1/sqrt(n)";
        case Kind::None:
            return "none";
        case Kind::InvSqrtDn: {
            std::ostringstream os;
            os << "1/sqrt(d_n), d_n=" << dn;
            return os.str();
        }
    }
    return "?";
}

ModelMatrix ModelMatrix::dense_real(long n) {
    if (n < 1) throw ValidationError("ModelMatrix: dimension must be positive");
    ModelMatrix m;
    m.n_ = n;
    m.dense_ = true;
    m.dense_data_.real = true;
    m.dense_data_.re.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    return m;
}

ModelMatrix ModelMatrix::dense_complex(long n) {
    if (n < 1) throw ValidationError("ModelMatrix: dimension must be positive");
    ModelMatrix m;
    m.n_ = n;
    m.dense_ = true;
    m.dense_data_.real = false;
    m.dense_data_.cx.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
    return m;
}

ModelMatrix ModelMatrix::from_csr(long n, CsrStorage csr) {
    if (n < 1) throw ValidationError("ModelMatrix: dimension must be positive");
    check_csr(csr, n);
    ModelMatrix m;
    m.n_ = n;
    m.dense_ = false;
    m.csr_data_ = std::move(csr);
    return m;
}

ModelMatrix ModelMatrix::uniform(long n, std::complex<double> per_entry) {
    CsrStorage csr;
    csr.row_start.assign(static_cast<size_t>(n) + 1, 0);
    csr.uniform = per_entry;
    csr.real = per_entry.imag() == 0.0;
    return from_csr(n, std::move(csr));
}

bool ModelMatrix::is_real() const { return dense_ ? dense_data_.real : csr_data_.real; }

DenseStorage& ModelMatrix::dense_storage() {
    if (!dense_) throw ValidationError("ModelMatrix: not dense");
    return dense_data_;
}

const DenseStorage& ModelMatrix::dense_storage() const {
    if (!dense_) throw ValidationError("ModelMatrix: not dense");
    return dense_data_;
}

CsrStorage& ModelMatrix::csr_storage() {
    if (dense_) throw ValidationError("ModelMatrix: not sparse");
    return csr_data_;
}

const CsrStorage& ModelMatrix::csr_storage() const {
    if (dense_) throw ValidationError("ModelMatrix: not sparse");
    return csr_data_;
}

std::complex<double> ModelMatrix::entry(long i, long j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw ValidationError("ModelMatrix::entry: index out of range");
    if (dense_) {
        const size_t idx = static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i);
        return dense_data_.real ? std::complex<double>(dense_data_.re[idx], 0.0)
                                : dense_data_.cx[idx];
    }
    const auto begin = csr_data_.col.begin() + csr_data_.row_start[static_cast<size_t>(i)];
    const auto end = csr_data_.col.begin() + csr_data_.row_start[static_cast<size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    std::complex<double> v = csr_data_.uniform;
    if (it != end && *it == j) v += csr_data_.val[static_cast<size_t>(it - csr_data_.col.begin())];
    return v;
}

double& ModelMatrix::real_at(long i, long j) {
    auto& d = dense_storage();
    if (!d.real) throw ValidationError("ModelMatrix::real_at: storage is complex");
    return d.re[static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i)];
}

std::complex<double>& ModelMatrix::complex_at(long i, long j) {
    auto& d = dense_storage();
    if (d.real) throw ValidationError("ModelMatrix::complex_at: storage is real");
    return d.cx[static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i)];
}

std::complex<double> ModelMatrix::trace() const {
    std::complex<double> t = 0.0;
    if (dense_) {
        for (long i = 0; i < n_; ++i) {
            const size_t idx = static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(i);
            t += dense_data_.real ? std::complex<double>(dense_data_.re[idx], 0.0)
                                  : dense_data_.cx[idx];
        }
        return t;
    }
    for (long i = 0; i < n_; ++i) {
        const auto begin = csr_data_.col.begin() + csr_data_.row_start[static_cast<size_t>(i)];
        const auto end = csr_data_.col.begin() + csr_data_.row_start[static_cast<size_t>(i) + 1];
        const auto it = std::lower_bound(begin, end, i);
        if (it != end && *it == i)
            t += csr_data_.val[static_cast<size_t>(it - csr_data_.col.begin())];
    }
    return t + static_cast<double>(n_) * csr_data_.uniform;
}

long ModelMatrix::stored_nonzeros() const {
    if (dense_) return n_ * n_;
    return csr_data_.nnz();
}

ModelMatrix ModelMatrix::densified(long dense_ceiling) const {
    if (n_ > dense_ceiling) {
        std::ostringstream os;
        os << "densify: dimension " << n_ << " exceeds dense ceiling " << dense_ceiling;
        throw ResourceError(os.str());
    }
    if (dense_) return *this;
    ModelMatrix out = is_real() && csr_data_.uniform.imag() == 0.0
                          ? dense_real(n_)
                          : dense_complex(n_);
    out.scaling = scaling;
    out.provenance = provenance;
    auto& d = out.dense_data_;
    if (csr_data_.uniform != 0.0) {
        if (d.real)
            std::fill(d.re.begin(), d.re.end(), csr_data_.uniform.real());
        else
            std::fill(d.cx.begin(), d.cx.end(), csr_data_.uniform);
    }
    for (long i = 0; i < n_; ++i) {
        for (long p = csr_data_.row_start[static_cast<size_t>(i)];
             p < csr_data_.row_start[static_cast<size_t>(i) + 1]; ++p) {
            const long j = csr_data_.col[static_cast<size_t>(p)];
            const size_t idx =
                static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i);
            if (d.real)
                d.re[idx] += csr_data_.val[static_cast<size_t>(p)].real();
            else
                d.cx[idx] += csr_data_.val[static_cast<size_t>(p)];
        }
    }
    return out;
}

void ModelMatrix::promote_to_complex() {
    auto& d = dense_storage();
    if (!d.real) return;
    d.cx.resize(d.re.size());
    for (size_t i = 0; i < d.re.size(); ++i) d.cx[i] = d.re[i];
    d.re.clear();
    d.re.shrink_to_fit();
    d.real = false;
}

void check_csr(const CsrStorage& csr, long n) {
    if (static_cast<long>(csr.row_start.size()) != n + 1)
        throw ValidationError("CSR: row_start size mismatch");
    if (csr.row_start.front() != 0 ||
        csr.row_start.back() != static_cast<long>(csr.col.size()) ||
        csr.col.size() != csr.val.size())
        throw ValidationError("CSR: inconsistent structure arrays");
    for (long i = 0; i < n; ++i) {
        const long a = csr.row_start[static_cast<size_t>(i)];
        const long b = csr.row_start[static_cast<size_t>(i) + 1];
        if (a > b) throw ValidationError("CSR: row_start not monotone");
        for (long p = a; p < b; ++p) {
            const long j = csr.col[static_cast<size_t>(p)];
            if (j < 0 || j >= n) throw ValidationError("CSR: column index out of range");
            if (p > a && csr.col[static_cast<size_t>(p - 1)] >= j)
                throw ValidationError("CSR: columns not strictly increasing in row");
        }
    }
}

void write_matrix_market(const ModelMatrix& m, std::ostream& os) {
    const long n = m.dim();
    std::vector<std::pair<std::pair<long, long>, std::complex<double>>> entries;
    if (m.is_dense() || m.csr_storage().uniform != 0.0) {
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                const auto v = m.entry(i, j);
                if (v != 0.0) entries.push_back({{i, j}, v});
            }
    } else {
        const auto& csr = m.csr_storage();
        for (long i = 0; i < n; ++i)
            for (long p = csr.row_start[static_cast<size_t>(i)];
                 p < csr.row_start[static_cast<size_t>(i) + 1]; ++p)
                entries.push_back({{i, csr.col[static_cast<size_t>(p)]},
                                   csr.val[static_cast<size_t>(p)]});
    }
    os << "%%MatrixMarket matrix coordinate complex general\n";
    os << n << " " << n << " " << entries.size() << "\n";
    os.precision(17);
    for (const auto& [ij, v] : entries)
        os << ij.first + 1 << " " << ij.second + 1 << " " << v.real() << " " << v.imag() << "\n";
}

}  // namespace speclab
