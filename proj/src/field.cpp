#include "walg/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace walg {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::uint64_t p) {
    if (p >= (1ULL << 31)) throw WalgError(ErrorKind::NotPrime, "modulus too large: " + std::to_string(p));
    if (!is_prime(p)) throw WalgError(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    p_ = static_cast<std::uint32_t>(p);
}

Res Field::pow(Res a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1 % p_, b = a % p_;
    while (e) {
        if (e & 1) r = r * b % p_;
        b = b * b % p_;
        e >>= 1;
    }
    return static_cast<Res>(r);
}

Res Field::inv(Res a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

Res Field::from_int(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Res>(r);
}

long long Field::to_signed(Res a) const noexcept {
    return a > p_ / 2 ? static_cast<long long>(a) - p_ : static_cast<long long>(a);
}

// ---------------------------------------------------------------- FScalar

FScalar::FScalar(long long value, const Field& f) : r_(f.from_int(value)), p_(f.p()) {}

void FScalar::check_same(const FScalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("FScalar moduli differ");
}

FScalar FScalar::operator+(const FScalar& o) const {
    check_same(o);
    return FScalar(Field(p_).add(r_, o.r_), p_, true);
}
FScalar FScalar::operator-(const FScalar& o) const {
    check_same(o);
    return FScalar(Field(p_).sub(r_, o.r_), p_, true);
}
FScalar FScalar::operator*(const FScalar& o) const {
    check_same(o);
    return FScalar(Field(p_).mul(r_, o.r_), p_, true);
}
FScalar FScalar::operator/(const FScalar& o) const {
    check_same(o);
    return *this * o.inverse();
}
FScalar FScalar::operator-() const { return FScalar(Field(p_).neg(r_), p_, true); }
FScalar FScalar::inverse() const { return FScalar(Field(p_).inv(r_), p_, true); }

// ---------------------------------------------------------------- TPoly

TPoly::TPoly(const Field& f, Vec coeffs) : f_(f), c_(std::move(coeffs)) {
    for (auto& x : c_) x %= f_.p();
    trim();
}

TPoly TPoly::constant(const Field& f, Res c) { return TPoly(f, Vec{c}); }

TPoly TPoly::monomial(const Field& f, Res c, int degree) {
    Vec v(static_cast<std::size_t>(degree) + 1, 0);
    v[degree] = c;
    return TPoly(f, std::move(v));
}

void TPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Res TPoly::eval(Res t) const {
    Res acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = f_.fma(*it, acc, t);
    return acc;
}

TPoly TPoly::operator+(const TPoly& o) const {
    Vec r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.add(coeff(static_cast<int>(i)), o.coeff(static_cast<int>(i)));
    return TPoly(f_, std::move(r));
}

TPoly TPoly::operator-(const TPoly& o) const {
    Vec r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_.sub(coeff(static_cast<int>(i)), o.coeff(static_cast<int>(i)));
    return TPoly(f_, std::move(r));
}

TPoly TPoly::operator*(const TPoly& o) const {
    if (is_zero() || o.is_zero()) return TPoly(f_);
    Vec r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_.fma(r[i + j], c_[i], o.c_[j]);
    return TPoly(f_, std::move(r));
}

TPoly TPoly::scaled(Res s) const {
    Vec r = c_;
    for (auto& x : r) x = f_.mul(x, s);
    return TPoly(f_, std::move(r));
}

std::vector<FScalar> tpoly_coefficients(const TPoly& expr) {
    std::vector<FScalar> out;
    out.reserve(expr.coeffs().size());
    for (Res c : expr.coeffs()) out.emplace_back(c, expr.field().p(), true);
    return out;
}

// ---------------------------------------------------------------- vectors

SparseVec to_sparse(const Vec& v) {
    SparseVec s;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (v[i]) s.emplace_back(i, v[i]);
    return s;
}

Vec to_dense(const SparseVec& v, int n) {
    Vec d(n, 0);
    for (auto [i, c] : v) d[i] = c;
    return d;
}

bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Res x) { return x == 0; });
}

Vec vec_add(const Field& f, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
    return r;
}

Vec vec_scale(const Field& f, const Vec& a, Res s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], s);
    return r;
}

void vec_axpy(const Field& f, Vec& a, Res s, const Vec& b) {
    if (s == 0) return;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i]) a[i] = f.fma(a[i], s, b[i]);
}

Res dot(const Field& f, const Vec& a, const Vec& b) {
    std::uint64_t acc = 0;
    const std::uint64_t p = f.p();
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<std::uint64_t>(a[i]) * b[i];
        if (acc >= (1ULL << 62)) acc %= p;
    }
    return static_cast<Res>(acc % p);
}

// ---------------------------------------------------------------- FMatrix

FMatrix::FMatrix(const Field& f, int rows, int cols)
    : f_(f), rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, 0) {}

FMatrix FMatrix::identity(const Field& f, int n) {
    FMatrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1 % f.p();
    return m;
}

FMatrix FMatrix::from_rows(const Field& f, const std::vector<Vec>& rows, int cols) {
    FMatrix m(f, static_cast<int>(rows.size()), cols);
    for (int r = 0; r < m.rows_; ++r) m.set_row(r, rows[r]);
    return m;
}

FMatrix FMatrix::from_ints(const Field& f, const std::vector<std::vector<long long>>& rows) {
    int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    FMatrix m(f, static_cast<int>(rows.size()), cols);
    for (int r = 0; r < m.rows_; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = f.from_int(rows[r][c]);
    return m;
}

Vec FMatrix::row(int r) const {
    return Vec(d_.begin() + static_cast<std::ptrdiff_t>(r) * cols_, d_.begin() + static_cast<std::ptrdiff_t>(r + 1) * cols_);
}

Vec FMatrix::col(int c) const {
    Vec v(rows_);
    for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
}

void FMatrix::set_row(int r, const Vec& v) {
    for (int c = 0; c < cols_; ++c) at(r, c) = v[c] % f_.p();
}

void FMatrix::set_col(int c, const Vec& v) {
    for (int r = 0; r < rows_; ++r) at(r, c) = v[r] % f_.p();
}

Vec FMatrix::apply(const Vec& x) const {
    Vec y(rows_, 0);
    for (int r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        const Res* row = &d_[static_cast<std::size_t>(r) * cols_];
        for (int c = 0; c < cols_; ++c) {
            acc += static_cast<std::uint64_t>(row[c]) * x[c];
            if (acc >= (1ULL << 62)) acc %= f_.p();
        }
        y[r] = static_cast<Res>(acc % f_.p());
    }
    return y;
}

FMatrix FMatrix::operator*(const FMatrix& o) const {
    FMatrix r(f_, rows_, o.cols_);
    std::vector<std::uint64_t> acc(o.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int k = 0; k < cols_; ++k) {
            Res a = at(i, k);
            if (!a) continue;
            const Res* orow = &o.d_[static_cast<std::size_t>(k) * o.cols_];
            for (int j = 0; j < o.cols_; ++j) {
                acc[j] += static_cast<std::uint64_t>(a) * orow[j];
                if (acc[j] >= (1ULL << 62)) acc[j] %= f_.p();
            }
        }
        for (int j = 0; j < o.cols_; ++j) r.at(i, j) = static_cast<Res>(acc[j] % f_.p());
    }
    return r;
}

FMatrix FMatrix::operator+(const FMatrix& o) const {
    FMatrix r(*this);
    for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] = f_.add(d_[i], o.d_[i]);
    return r;
}

FMatrix FMatrix::operator-(const FMatrix& o) const {
    FMatrix r(*this);
    for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] = f_.sub(d_[i], o.d_[i]);
    return r;
}

FMatrix FMatrix::scaled(Res s) const {
    FMatrix r(*this);
    for (auto& x : r.d_) x = f_.mul(x, s);
    return r;
}

FMatrix FMatrix::transpose() const {
    FMatrix t(f_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

FMatrix FMatrix::power(std::uint64_t e) const {
    FMatrix r = identity(f_, rows_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool FMatrix::is_zero() const { return is_zero_vec(d_); }

double FMatrix::density() const {
    if (d_.empty()) return 0.0;
    auto nz = std::count_if(d_.begin(), d_.end(), [](Res x) { return x != 0; });
    return static_cast<double>(nz) / static_cast<double>(d_.size());
}

std::vector<int> FMatrix::rref_in_place() {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int sel = -1;
        for (int i = r; i < rows_; ++i)
            if (at(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < cols_; ++j) std::swap(at(sel, j), at(r, j));
        Res inv = f_.inv(at(r, c));
        for (int j = c; j < cols_; ++j) at(r, j) = f_.mul(at(r, j), inv);
        for (int i = 0; i < rows_; ++i) {
            if (i == r) continue;
            Res factor = at(i, c);
            if (!factor) continue;
            Res nf = f_.neg(factor);
            for (int j = c; j < cols_; ++j)
                if (at(r, j)) at(i, j) = f_.fma(at(i, j), nf, at(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int FMatrix::rank() const {
    FMatrix m(*this);
    return static_cast<int>(m.rref_in_place().size());
}

namespace {
std::vector<Vec> kernel_from_rref(const Field& f, const std::vector<Vec>& rref, const std::vector<int>& pivots, int cols) {
    std::vector<int> row_of(cols, -1);
    for (int i = 0; i < static_cast<int>(pivots.size()); ++i) row_of[pivots[i]] = i;
    std::vector<Vec> out;
    for (int fc = 0; fc < cols; ++fc) {
        if (row_of[fc] >= 0) continue;
        Vec v(cols, 0);
        v[fc] = 1 % f.p();
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i) v[pivots[i]] = f.neg(rref[i][fc]);
        out.push_back(std::move(v));
    }
    return out;
}
} // namespace

std::vector<Vec> FMatrix::kernel() const {
    FMatrix m(*this);
    auto piv = m.rref_in_place();
    std::vector<Vec> rows;
    rows.reserve(piv.size());
    for (int i = 0; i < static_cast<int>(piv.size()); ++i) rows.push_back(m.row(i));
    return kernel_from_rref(f_, rows, piv, cols_);
}

std::optional<Vec> FMatrix::solve(const Vec& b) const {
    if (static_cast<int>(b.size()) != rows_) throw std::invalid_argument("solve: right-hand side length mismatch");
    FMatrix aug(f_, rows_, cols_ + 1);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_) = b[r] % f_.p();
    }
    auto piv = aug.rref_in_place();
    if (!piv.empty() && piv.back() == cols_) return std::nullopt;
    Vec x(cols_, 0);
    for (int i = 0; i < static_cast<int>(piv.size()); ++i) x[piv[i]] = aug.at(i, cols_);
    return x;
}

std::optional<FMatrix> FMatrix::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    int n = rows_;
    FMatrix aug(f_, n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, n + r) = 1 % f_.p();
    }
    auto piv = aug.rref_in_place();
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    FMatrix inv(f_, n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
    return inv;
}

// ---------------------------------------------------------------- EchelonBuilder

EchelonBuilder::EchelonBuilder(const Field& f, int cols) : f_(f), cols_(cols), row_of_pivot_(cols, -1) {}

Vec EchelonBuilder::reduce(Vec v) const {
    for (int c = 0; c < cols_; ++c) {
        if (!v[c]) continue;
        int r = row_of_pivot_[c];
        if (r < 0) continue;
        vec_axpy(f_, v, f_.neg(v[c]), rows_[r]);
    }
    return v;
}

bool EchelonBuilder::in_span(const Vec& v) const { return is_zero_vec(reduce(v)); }

bool EchelonBuilder::insert(const Vec& row) {
    Vec v = reduce(row);
    int piv = -1;
    for (int c = 0; c < cols_; ++c)
        if (v[c]) {
            piv = c;
            break;
        }
    if (piv < 0) return false;
    Res inv = f_.inv(v[piv]);
    for (int c = piv; c < cols_; ++c) v[c] = f_.mul(v[c], inv);
    row_of_pivot_[piv] = static_cast<int>(rows_.size());
    pivot_of_row_.push_back(piv);
    rows_.push_back(std::move(v));
    return true;
}

bool EchelonBuilder::insert_sparse(const SparseVec& row) { return insert(to_dense(row, cols_)); }

std::vector<int> EchelonBuilder::pivots() const {
    std::vector<int> p = pivot_of_row_;
    std::sort(p.begin(), p.end());
    return p;
}

std::vector<Vec> EchelonBuilder::rref_rows() const {
    std::vector<int> piv = pivots();
    std::vector<Vec> out;
    out.reserve(piv.size());
    // Back-substitute from the rightmost pivot so every pivot column is cleared.
    std::vector<Vec> reduced(piv.size());
    for (int i = static_cast<int>(piv.size()) - 1; i >= 0; --i) {
        Vec v = rows_[row_of_pivot_[piv[i]]];
        for (int j = i + 1; j < static_cast<int>(piv.size()); ++j)
            if (v[piv[j]]) vec_axpy(f_, v, f_.neg(v[piv[j]]), reduced[j]);
        reduced[i] = std::move(v);
    }
    for (auto& v : reduced) out.push_back(std::move(v));
    return out;
}

std::vector<Vec> kernel_sparse(const Field& f, const std::vector<SparseVec>& rows, int cols) {
    // Leading-term elimination through a dense accumulator; stored rows stay sparse with 1 at the pivot.
    std::vector<SparseVec> ech;
    std::vector<int> row_of_pivot(cols, -1);
    Vec acc(cols, 0);
    // Sparsest rows first limits fill-in.
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].size() < rows[b].size(); });
    for (std::size_t idx : order) {
        const SparseVec& r = rows[idx];
        if (static_cast<int>(ech.size()) == cols) break;
        if (r.empty()) continue;
        int lo = cols;
        for (auto [c, v] : r) {
            acc[c] = f.add(acc[c], v % f.p());
            lo = std::min(lo, c);
        }
        int lead = -1;
        for (int c = lo; c < cols; ++c) {
            if (!acc[c]) continue;
            int rp = row_of_pivot[c];
            if (rp < 0) {
                lead = c;
                break;
            }
            Res s = f.neg(acc[c]);
            for (auto [k, v] : ech[rp]) acc[k] = f.fma(acc[k], s, v);
        }
        if (lead < 0) continue;
        Res inv = f.inv(acc[lead]);
        SparseVec v;
        for (int c = lead; c < cols; ++c)
            if (acc[c]) {
                v.emplace_back(c, f.mul(acc[c], inv));
                acc[c] = 0;
            }
        row_of_pivot[lead] = static_cast<int>(ech.size());
        ech.push_back(std::move(v));
    }
    // Back-substitute from the rightmost pivot; reduced rows carry only the pivot and free columns.
    std::vector<SparseVec> reduced(cols);
    for (int c0 = cols - 1; c0 >= 0; --c0) {
        if (row_of_pivot[c0] < 0) continue;
        const SparseVec& src = ech[row_of_pivot[c0]];
        for (auto [c, v] : src) acc[c] = v;
        for (std::size_t k = 1; k < src.size(); ++k) {
            int c = src[k].first;
            if (row_of_pivot[c] < 0 || !acc[c]) continue;
            Res s = f.neg(acc[c]);
            for (auto [j, v] : reduced[c]) acc[j] = f.fma(acc[j], s, v);
        }
        SparseVec out;
        for (int c = c0; c < cols; ++c)
            if (acc[c]) {
                if (c == c0 || row_of_pivot[c] < 0) out.emplace_back(c, acc[c]);
                acc[c] = 0;
            }
        reduced[c0] = std::move(out);
    }
    // One kernel vector per free column, matching kernel_from_rref.
    std::vector<int> free_index(cols, -1);
    std::vector<Vec> out;
    for (int c = 0; c < cols; ++c)
        if (row_of_pivot[c] < 0) {
            free_index[c] = static_cast<int>(out.size());
            Vec v(cols, 0);
            v[c] = 1 % f.p();
            out.push_back(std::move(v));
        }
    for (int c0 = 0; c0 < cols; ++c0)
        for (std::size_t k = 1; k < reduced[c0].size(); ++k) {
            auto [c, v] = reduced[c0][k];
            out[free_index[c]][c0] = f.neg(v);
        }
    return out;
}

std::vector<Vec> kernel_auto(const Field& f, const std::vector<SparseVec>& rows, int cols, const LinearSolveOptions& opt) {
    std::size_t nnz = 0;
    for (const auto& r : rows) nnz += r.size();
    double cells = static_cast<double>(rows.size()) * std::max(cols, 1);
    double density = cells > 0 ? static_cast<double>(nnz) / cells : 0.0;
    if (density < opt.sparse_density_threshold) return kernel_sparse(f, rows, cols);
    std::vector<Vec> dense;
    dense.reserve(rows.size());
    for (const auto& r : rows) dense.push_back(to_dense(r, cols));
    return FMatrix::from_rows(f, dense, cols).kernel();
}

} // namespace walg
