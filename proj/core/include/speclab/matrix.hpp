#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace speclab {

inline constexpr long kDefaultDenseCeiling = 4000;

// Which model regime scaled the assembled matrix.
struct ScalingSpec {
    enum class Kind { InvSqrtN, None, InvSqrtDn };
    Kind kind = Kind::None;
    double dn = 0.0;

    static ScalingSpec inv_sqrt_n() { return {Kind::InvSqrtN, 0.0}; }
    static ScalingSpec none() { return {Kind::None, 0.0}; }
    static ScalingSpec inv_sqrt_dn(double dn) { return {Kind::InvSqrtDn, dn}; }

    double factor(long n) const;
    std::string describe() const;
};

struct MatrixProvenance {
    std::string law;           // entry distribution, empty for deterministic matrices
    std::string perturbation;  // perturbation description, empty when absent
    std::uint64_t seed = 0;
    bool unproven_regime = false;  // factored low-rank perturbations outside the proved classes
};

// Column-major dense storage. Real matrices keep a compact real array so the
// eigensolver can run the real path without conversion.
struct DenseStorage {
    std::vector<double> re;                  // used when real == true
    std::vector<std::complex<double>> cx;    // used when real == false
    bool real = true;
};

// CSR with sorted, duplicate-free column indices per row, plus an optional
// uniform shift added to every entry (factored storage for mean-profile
// perturbations; keeps memory O(nnz)).
struct CsrStorage {
    std::vector<long> row_start;  // size n+1
    std::vector<long> col;
    std::vector<std::complex<double>> val;
    std::complex<double> uniform = 0.0;
    bool real = true;

    long nnz() const { return static_cast<long>(col.size()); }
};

class ModelMatrix {
public:
    static ModelMatrix dense_real(long n);
    static ModelMatrix dense_complex(long n);
    static ModelMatrix from_csr(long n, CsrStorage csr);
    static ModelMatrix uniform(long n, std::complex<double> per_entry);

    long dim() const { return n_; }
    bool is_dense() const { return dense_; }
    bool is_real() const;

    DenseStorage& dense_storage();
    const DenseStorage& dense_storage() const;
    CsrStorage& csr_storage();
    const CsrStorage& csr_storage() const;

    // 0-based element access; O(log row nnz) on sparse storage.
    std::complex<double> entry(long i, long j) const;
    double& real_at(long i, long j);                // dense real storage
    std::complex<double>& complex_at(long i, long j);  // dense complex storage

    std::complex<double> trace() const;
    long stored_nonzeros() const;

    // Dense copy; refuses above the ceiling instead of thrashing memory.
    ModelMatrix densified(long dense_ceiling = kDefaultDenseCeiling) const;
    // Widens dense real storage to complex in place.
    void promote_to_complex();

    ScalingSpec scaling;
    MatrixProvenance provenance;

private:
    ModelMatrix() = default;

    long n_ = 0;
    bool dense_ = true;
    DenseStorage dense_data_;
    CsrStorage csr_data_;
};

// Validates CSR structural invariants (sorted, in-range, duplicate-free).
void check_csr(const CsrStorage& csr, long n);

// Coordinate Matrix Market export of the stored nonzeros (uniform shift
// densifies; intended for small cross-check matrices).
void write_matrix_market(const ModelMatrix& m, std::ostream& os);

}  // namespace speclab
