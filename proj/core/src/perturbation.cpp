#include "speclab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

PerturbationSpec PerturbationSpec::sparse_entries(std::vector<PerturbationEntry> entries) {
    for (const auto& e : entries)
        if (e.row < 1 || e.col < 1)
            throw ValidationError("sparse_entries: indices are 1-based and must be positive");
    std::map<std::pair<long, long>, std::complex<double>> merged;
    for (const auto& e : entries) merged[{e.row, e.col}] += e.value;
    PerturbationSpec spec;
    spec.cls_ = Class::SparseEntries;
    for (const auto& [rc, v] : merged)
        if (v != 0.0) spec.entries_.push_back({rc.first, rc.second, v});
    return spec;
}

PerturbationSpec PerturbationSpec::diagonal_spikes(std::vector<std::complex<double>> thetas) {
    PerturbationSpec spec;
    spec.cls_ = Class::DiagonalSpikes;
    spec.thetas_ = std::move(thetas);
    return spec;
}

PerturbationSpec PerturbationSpec::jordan_block(std::complex<double> theta, long size, long offset) {
    if (size < 1) throw ValidationError("jordan_block: size must be positive");
    if (offset < 0) throw ValidationError("jordan_block: offset must be nonnegative");
    PerturbationSpec spec;
    spec.cls_ = Class::JordanBlock;
    spec.jordan_theta_ = theta;
    spec.jordan_size_ = size;
    spec.jordan_offset_ = offset;
    return spec;
}

PerturbationSpec PerturbationSpec::full_mean(std::complex<double> mu) {
    PerturbationSpec spec;
    spec.cls_ = Class::FullMean;
    spec.mu_ = mu;
    return spec;
}

PerturbationSpec PerturbationSpec::factored_low_rank(
    std::vector<std::vector<std::complex<double>>> u_columns,
    std::vector<std::vector<std::complex<double>>> v_columns) {
    if (u_columns.size() != v_columns.size() || u_columns.empty())
        throw ValidationError("factored_low_rank: need matching nonempty factor column lists");
    const size_t n = u_columns.front().size();
    if (n == 0) throw ValidationError("factored_low_rank: zero-length columns");
    for (const auto& c : u_columns)
        if (c.size() != n) throw ValidationError("factored_low_rank: ragged U columns");
    for (const auto& c : v_columns)
        if (c.size() != n) throw ValidationError("factored_low_rank: ragged V columns");
    PerturbationSpec spec;
    spec.cls_ = Class::FactoredLowRank;
    spec.u_cols_ = std::move(u_columns);
    spec.v_cols_ = std::move(v_columns);
    return spec;
}

bool PerturbationSpec::finite_support() const {
    return cls_ == Class::SparseEntries || cls_ == Class::DiagonalSpikes ||
           cls_ == Class::JordanBlock;
}

bool PerturbationSpec::is_real() const {
    auto real = [](std::complex<double> v) { return v.imag() == 0.0; };
    switch (cls_) {
        case Class::SparseEntries:
            return std::all_of(entries_.begin(), entries_.end(),
                               [&](const auto& e) { return real(e.value); });
        case Class::DiagonalSpikes:
            return std::all_of(thetas_.begin(), thetas_.end(), real);
        case Class::JordanBlock:
            return real(jordan_theta_);
        case Class::FullMean:
            return real(mu_);
        case Class::FactoredLowRank:
            for (const auto& col : u_cols_)
                if (!std::all_of(col.begin(), col.end(), real)) return false;
            for (const auto& col : v_cols_)
                if (!std::all_of(col.begin(), col.end(), real)) return false;
            return true;
    }
    return true;
}

double PerturbationSpec::max_entry_modulus() const {
    double m = 0.0;
    switch (cls_) {
        case Class::SparseEntries:
            for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
            return m;
        case Class::DiagonalSpikes:
            for (const auto& t : thetas_) m = std::max(m, std::abs(t));
            return m;
        case Class::JordanBlock:
            m = std::abs(jordan_theta_);
            if (jordan_size_ > 1) m = std::max(m, 1.0);
            return m;
        case Class::FullMean:
            return std::abs(mu_);
        case Class::FactoredLowRank:
            for (size_t k = 0; k < u_cols_.size(); ++k)
                for (size_t i = 0; i < u_cols_[k].size(); ++i)
                    for (size_t j = 0; j < v_cols_[k].size(); ++j)
                        m = std::max(m, std::abs(u_cols_[k][i] * v_cols_[k][j]));
            return m;
    }
    return m;
}

long PerturbationSpec::nonzero_count() const {
    switch (cls_) {
        case Class::SparseEntries:
            return static_cast<long>(entries_.size());
        case Class::DiagonalSpikes:
            return static_cast<long>(
                std::count_if(thetas_.begin(), thetas_.end(),
                              [](std::complex<double> t) { return t != 0.0; }));
        case Class::JordanBlock: {
            long c = jordan_size_ - 1;  // superdiagonal ones
            if (jordan_theta_ != 0.0) c += jordan_size_;
            return c;
        }
        default:
            return -1;
    }
}

long PerturbationSpec::min_dimension() const {
    switch (cls_) {
        case Class::SparseEntries: {
            long m = 1;
            for (const auto& e : entries_) m = std::max({m, e.row, e.col});
            return m;
        }
        case Class::DiagonalSpikes:
            return std::max<long>(1, static_cast<long>(thetas_.size()));
        case Class::JordanBlock:
            return jordan_offset_ + jordan_size_;
        case Class::FullMean:
            return 1;
        case Class::FactoredLowRank:
            return static_cast<long>(u_cols_.front().size());
    }
    return 1;
}

long PerturbationSpec::rank_bound() const {
    switch (cls_) {
        case Class::SparseEntries: {
            // Rank is at most the number of distinct occupied rows.
            std::vector<long> rows;
            for (const auto& e : entries_) rows.push_back(e.row);
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
            return static_cast<long>(rows.size());
        }
        case Class::DiagonalSpikes:
            return nonzero_count();
        case Class::JordanBlock:
            return jordan_size_;
        case Class::FullMean:
            return 1;
        case Class::FactoredLowRank:
            return static_cast<long>(u_cols_.size());
    }
    return 0;
}

std::vector<PerturbationEntry> PerturbationSpec::materialize_entries(long n) const {
    if (!finite_support())
        throw ValidationError("materialize_entries: class has no finite support list");
    if (min_dimension() > n)
        throw ValidationError("materialize_entries: perturbation does not fit in dimension");
    std::vector<PerturbationEntry> out;
    switch (cls_) {
        case Class::SparseEntries:
            out = entries_;
            break;
        case Class::DiagonalSpikes:
            for (size_t i = 0; i < thetas_.size(); ++i)
                if (thetas_[i] != 0.0)
                    out.push_back({static_cast<long>(i) + 1, static_cast<long>(i) + 1, thetas_[i]});
            break;
        case Class::JordanBlock:
            for (long i = 0; i < jordan_size_; ++i) {
                const long r = jordan_offset_ + i + 1;
                if (jordan_theta_ != 0.0) out.push_back({r, r, jordan_theta_});
                if (i + 1 < jordan_size_) out.push_back({r, r + 1, 1.0});
            }
            break;
        default:
            break;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::pair{a.row, a.col} < std::pair{b.row, b.col};
    });
    return out;
}

std::string PerturbationSpec::describe() const {
    std::ostringstream os;
    auto put_complex = [&](std::complex<double> v) {
        os << v.real();
        if (v.imag() != 0.0) os << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
    };
    switch (cls_) {
        case Class::SparseEntries:
            os << "entries[";
            for (size_t i = 0; i < entries_.size(); ++i) {
                if (i) os << ",";
                os << "(" << entries_[i].row << "," << entries_[i].col << ",";
                put_complex(entries_[i].value);
                os << ")";
            }
            os << "]";
            break;
        case Class::DiagonalSpikes:
            os << "spikes[";
            for (size_t i = 0; i < thetas_.size(); ++i) {
                if (i) os << ",";
                put_complex(thetas_[i]);
            }
            os << "]";
            break;
        case Class::JordanBlock:
            os << "jordan(";
            put_complex(jordan_theta_);
            os << ",size=" << jordan_size_ << ",offset=" << jordan_offset_ << ")";
            break;
        case Class::FullMean:
            os << "fullmean(";
            put_complex(mu_);
            os << ")";
            break;
        case Class::FactoredLowRank:
            os << "factored(rank=" << u_cols_.size() << ",n=" << u_cols_.front().size() << ")";
            break;
    }
    return os.str();
}

}  // namespace speclab
