#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walg/errors.hpp"

namespace walg {

/// Residue in [0, p). All containers of residues are interpreted relative to a Field.
using Res = std::uint32_t;
using Vec = std::vector<Res>;
/// Sparse vector: strictly increasing column indices, no stored zeros.
using SparseVec = std::vector<std::pair<int, Res>>;

bool is_prime(std::uint64_t n);

/// Prime field F_p. Construction rejects composite moduli with NotPrime.
class Field {
public:
    explicit Field(std::uint64_t p);

    std::uint32_t p() const noexcept { return p_; }

    Res add(Res a, Res b) const noexcept {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Res sub(Res a, Res b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Res neg(Res a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Res mul(Res a, Res b) const noexcept {
        return static_cast<Res>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    /// a + b*c
    Res fma(Res a, Res b, Res c) const noexcept {
        return static_cast<Res>((a + static_cast<std::uint64_t>(b) * c) % p_);
    }
    Res pow(Res a, std::uint64_t e) const noexcept;
    /// Throws std::domain_error on zero.
    Res inv(Res a) const;
    Res from_int(long long v) const noexcept;
    /// Symmetric lift into (-p/2, p/2].
    long long to_signed(Res a) const noexcept;

    bool operator==(const Field& o) const noexcept { return p_ == o.p_; }
    bool operator!=(const Field& o) const noexcept { return p_ != o.p_; }

private:
    std::uint32_t p_;
};

/// Value-semantics scalar carrying its modulus.
class FScalar {
public:
    FScalar(long long value, const Field& f);
    FScalar(Res residue, std::uint32_t modulus, bool /*raw*/) : r_(residue), p_(modulus) {}

    Res residue() const noexcept { return r_; }
    std::uint32_t modulus() const noexcept { return p_; }
    Field field() const { return Field(p_); }

    FScalar operator+(const FScalar& o) const;
    FScalar operator-(const FScalar& o) const;
    FScalar operator*(const FScalar& o) const;
    FScalar operator/(const FScalar& o) const;
    FScalar operator-() const;
    FScalar inverse() const;
    bool operator==(const FScalar& o) const noexcept { return r_ == o.r_ && p_ == o.p_; }
    bool operator!=(const FScalar& o) const noexcept { return !(*this == o); }
    bool is_zero() const noexcept { return r_ == 0; }

private:
    void check_same(const FScalar& o) const;
    Res r_;
    std::uint32_t p_;
};

/// Polynomial in a formal parameter t over F_p; trailing zeros are always trimmed.
class TPoly {
public:
    explicit TPoly(const Field& f) : f_(f) {}
    TPoly(const Field& f, Vec coeffs);
    static TPoly constant(const Field& f, Res c);
    static TPoly monomial(const Field& f, Res c, int degree);

    const Field& field() const noexcept { return f_; }
    const Vec& coeffs() const noexcept { return c_; }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    Res coeff(int k) const noexcept { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : 0; }
    Res eval(Res t) const;

    TPoly operator+(const TPoly& o) const;
    TPoly operator-(const TPoly& o) const;
    TPoly operator*(const TPoly& o) const;
    TPoly scaled(Res s) const;
    bool operator==(const TPoly& o) const { return f_ == o.f_ && c_ == o.c_; }

private:
    void trim();
    Field f_;
    Vec c_;
};

std::vector<FScalar> tpoly_coefficients(const TPoly& expr);

/// Dense matrix over F_p, row-major.
class FMatrix {
public:
    FMatrix() : FMatrix(Field(2), 0, 0) {}
    FMatrix(const Field& f, int rows, int cols);
    static FMatrix identity(const Field& f, int n);
    static FMatrix from_rows(const Field& f, const std::vector<Vec>& rows, int cols);
    static FMatrix from_ints(const Field& f, const std::vector<std::vector<long long>>& rows);

    const Field& field() const noexcept { return f_; }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Res at(int r, int c) const { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
    Res& at(int r, int c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
    Vec row(int r) const;
    Vec col(int c) const;
    void set_row(int r, const Vec& v);
    void set_col(int c, const Vec& v);

    Vec apply(const Vec& x) const;
    FMatrix operator*(const FMatrix& o) const;
    FMatrix operator+(const FMatrix& o) const;
    FMatrix operator-(const FMatrix& o) const;
    FMatrix scaled(Res s) const;
    FMatrix transpose() const;
    FMatrix power(std::uint64_t e) const;
    bool is_zero() const;
    bool operator==(const FMatrix& o) const { return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_; }
    double density() const;

    /// Reduced row echelon form with leftmost pivots; returns pivot columns.
    std::vector<int> rref_in_place();
    int rank() const;
    /// Null-space basis. Each row has a unit entry at its own free column (its last nonzero entry)
    /// and zeros at all other free columns; rows are ordered by free column.
    std::vector<Vec> kernel() const;
    /// One solution with every free variable zero, or nullopt when inconsistent.
    std::optional<Vec> solve(const Vec& b) const;
    std::optional<FMatrix> inverse() const;

private:
    Field f_;
    int rows_, cols_;
    Vec d_;
};

/// Incremental Gaussian elimination over rows of fixed width; leftmost pivots.
class EchelonBuilder {
public:
    EchelonBuilder(const Field& f, int cols);

    int cols() const noexcept { return cols_; }
    int rank() const noexcept { return static_cast<int>(rows_.size()); }
    /// Returns true when the row was independent of those inserted so far.
    bool insert(const Vec& row);
    bool insert_sparse(const SparseVec& row);
    /// Remainder of v after elimination by the current pivots.
    Vec reduce(Vec v) const;
    bool in_span(const Vec& v) const;
    /// Fully reduced basis sorted by pivot column.
    std::vector<Vec> rref_rows() const;
    std::vector<int> pivots() const;

private:
    Field f_;
    int cols_;
    std::vector<Vec> rows_;          // each normalized: unit at pivot, zeros left of pivot
    std::vector<int> pivot_of_row_;
    std::vector<int> row_of_pivot_;  // -1 when column is free
};

/// Kernel from sparse rows; output identical to FMatrix::kernel for the same matrix.
std::vector<Vec> kernel_sparse(const Field& f, const std::vector<SparseVec>& rows, int cols);

struct LinearSolveOptions {
    /// Systems whose density falls below this are eliminated row by row in sparse form.
    double sparse_density_threshold = 0.1;
};
std::vector<Vec> kernel_auto(const Field& f, const std::vector<SparseVec>& rows, int cols,
                             const LinearSolveOptions& opt = {});

SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, int n);
bool is_zero_vec(const Vec& v);
Vec vec_add(const Field& f, const Vec& a, const Vec& b);
Vec vec_scale(const Field& f, const Vec& a, Res s);
/// a += s*b
void vec_axpy(const Field& f, Vec& a, Res s, const Vec& b);
Res dot(const Field& f, const Vec& a, const Vec& b);

} // namespace walg
