#include "walg/reduced.hpp"

#include "walg/parallel.hpp"

#include <algorithm>

namespace walg {

namespace {

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// Basis matrix whose row k is adapted basis vector k in standard coordinates, and its inverse.
FMatrix adapted_matrix(const GradedNilpotentDatum& d) { return FMatrix::from_rows(d.field(), d.adapted_rows, d.dim()); }

/// Coordinates at the last nonzero column of each kernel row (the free columns).
std::vector<int> last_nonzero_cols(const std::vector<Vec>& rows) {
    std::vector<int> out;
    for (const auto& r : rows) {
        int c = static_cast<int>(r.size()) - 1;
        while (c >= 0 && r[c] == 0) --c;
        out.push_back(c);
    }
    return out;
}

std::optional<Vec> coords_in(const Field& f, const std::vector<Vec>& basis, const std::vector<int>& cols, const Vec& x) {
    Vec c(basis.size(), 0);
    Vec rec(x.size(), 0);
    for (std::size_t s = 0; s < basis.size(); ++s) {
        c[s] = x[cols[s]];
        if (c[s]) vec_axpy(f, rec, c[s], basis[s]);
    }
    if (rec != x) return std::nullopt;
    return c;
}

std::vector<SparseMatrix> adapted_actions(const GradedNilpotentDatum& d, const FDModule& M) {
    const Field& f = d.field();
    FMatrix B = adapted_matrix(d);
    std::vector<SparseMatrix> out;
    for (int k = 0; k < d.dim(); ++k) {
        FMatrix acc(f, M.dim, M.dim);
        for (int i = 0; i < d.dim(); ++i)
            if (B.at(k, i)) acc = acc + M.action[i].scaled(B.at(k, i));
        out.push_back(SparseMatrix::from_dense(acc));
    }
    return out;
}

Vec apply_mono(const Field& f, const std::vector<SparseMatrix>& rho, const Mono& c, Vec v) {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        for (int t = 0; t < c[k]; ++t) v = rho[k].apply(v, f);
    return v;
}

Vec unit_vec(int n, int i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

} // namespace

EtaCharacter EtaCharacter::from_slice(const GradedNilpotentDatum& d, const std::vector<long long>& coeffs) {
    if (coeffs.size() != d.v.size())
        throw WalgError(ErrorKind::ConfigError, "eta needs " + std::to_string(d.v.size()) + " slice coordinates, got " +
                                                    std::to_string(coeffs.size()));
    const Field& f = d.field();
    EtaCharacter e;
    Vec vv(d.dim(), 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        e.v_coefficients.push_back(f.from_int(coeffs[k]));
        vec_axpy(f, vv, f.from_int(coeffs[k]), d.v[k]);
    }
    e.eta = d.chi;
    for (int i = 0; i < d.dim(); ++i) e.eta[i] = f.add(e.eta[i], d.algebra->form(vv, d.algebra->unit(i)));
    return e;
}

EtaCharacter EtaCharacter::from_functional(const GradedNilpotentDatum& d, Vec eta) {
    if (eta.size() != static_cast<std::size_t>(d.dim())) throw WalgError(ErrorKind::ConfigError, "eta has wrong length");
    auto probe = gg_module_zero_probe(d, eta);
    if (probe.zero) throw WalgError(ErrorKind::EtaOutsideSlice, probe.witness);
    EtaCharacter e;
    e.eta = std::move(eta);
    return e;
}

ZeroProbe gg_module_zero_probe(const GradedNilpotentDatum& d, const Vec& eta) {
    const Field& f = d.field();
    for (int u : d.m_units) {
        Res diff = f.pow(f.sub(d.chi[u], eta[u]), f.p());
        if (diff != 0)
            return {true, d.algebra->label(u) + "^p - eta(" + d.algebra->label(u) + ")^p acts on 1 + I by " +
                              std::to_string(diff)};
    }
    return {false, ""};
}

Vec eta_adapted(const GradedNilpotentDatum& d, const Vec& eta) {
    Vec out;
    for (const auto& row : d.adapted_rows) out.push_back(dot(d.field(), eta, row));
    return out;
}

std::vector<Mono> restricted_monomials(int n, int p) {
    long long total = ipow(p, n);
    std::vector<Mono> out;
    out.reserve(static_cast<std::size_t>(total));
    for (long long idx = 0; idx < total; ++idx) {
        Mono m(n, 0);
        long long x = idx;
        for (int k = 0; k < n; ++k) {
            m[k] = static_cast<std::uint16_t>(x % p);
            x /= p;
        }
        out.push_back(std::move(m));
    }
    return out;
}

long long restricted_index(const Mono& m, int p) {
    long long idx = 0;
    for (int k = static_cast<int>(m.size()) - 1; k >= 0; --k) idx = idx * p + m[k];
    return idx;
}

Vec SparseMatrix::apply(const Vec& v, const Field& f) const {
    Vec out(dim, 0);
    for (int j = 0; j < dim; ++j)
        if (v[j])
            for (auto [i, c] : cols[j]) out[i] = f.fma(out[i], v[j], c);
    return out;
}

FMatrix SparseMatrix::dense(const Field& f) const {
    FMatrix m(f, dim, dim);
    for (int j = 0; j < dim; ++j)
        for (auto [i, c] : cols[j]) m.at(i, j) = c;
    return m;
}

SparseMatrix SparseMatrix::from_dense(const FMatrix& m) {
    SparseMatrix s;
    s.dim = m.cols();
    for (int j = 0; j < m.cols(); ++j) s.cols.push_back(to_sparse(m.col(j)));
    return s;
}

FDModule direct_sum(const FDModule& a, const FDModule& b) {
    FDModule out;
    out.name = a.name + " + " + b.name;
    out.dim = a.dim + b.dim;
    for (std::size_t i = 0; i < a.action.size(); ++i) {
        FMatrix m(a.action[i].field(), out.dim, out.dim);
        for (int r = 0; r < a.dim; ++r)
            for (int c = 0; c < a.dim; ++c) m.at(r, c) = a.action[i].at(r, c);
        for (int r = 0; r < b.dim; ++r)
            for (int c = 0; c < b.dim; ++c) m.at(a.dim + r, a.dim + c) = b.action[i].at(r, c);
        out.action.push_back(std::move(m));
    }
    return out;
}

CheckRecord check_module(const RestrictedLieAlgebra& L, const FDModule& M, const Vec& eta) {
    const Field& f = L.field();
    CheckRecord rec{"module_axioms", true, "", nlohmann::json::object()};
    auto rho = [&](const Vec& x) {
        FMatrix acc(f, M.dim, M.dim);
        for (int i = 0; i < L.dim(); ++i)
            if (x[i]) acc = acc + M.action[i].scaled(x[i]);
        return acc;
    };
    for (int i = 0; i < L.dim() && rec.pass; ++i)
        for (int j = i + 1; j < L.dim(); ++j) {
            FMatrix lhs = M.action[i] * M.action[j] - M.action[j] * M.action[i];
            if (!(lhs == rho(L.bracket(L.unit(i), L.unit(j))))) {
                rec.pass = false;
                rec.witness = "bracket fails on (" + L.label(i) + "," + L.label(j) + ")";
                break;
            }
        }
    for (int i = 0; i < L.dim() && rec.pass; ++i) {
        FMatrix lhs = M.action[i].power(f.p()) - rho(L.pmap(L.unit(i)));
        FMatrix rhs = FMatrix::identity(f, M.dim).scaled(f.pow(eta[i], f.p()));
        if (!(lhs == rhs)) {
            rec.pass = false;
            rec.witness = "p-th power relation fails on " + L.label(i);
        }
    }
    return rec;
}

ReducedEnvelope::ReducedEnvelope(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta)
    : d_(std::move(d)), eng_(d_->adapted, [&] {
          PbwConfig c;
          c.nfree = d_->dim();
          c.restricted = true;
          c.eta = eta_adapted(*d_, eta.eta);
          return c;
      }()) {}

long long ReducedEnvelope::dim() const { return ipow(d_->prime(), d_->dim()); }

Elem ReducedEnvelope::multiply(const Elem& a, const Elem& b) { return eng_.act_elem(a, b); }

Elem ReducedEnvelope::basis_element(long long index) const {
    Mono m(d_->dim(), 0);
    for (int k = 0; k < d_->dim(); ++k) {
        m[k] = static_cast<std::uint16_t>(index % d_->prime());
        index /= d_->prime();
    }
    return elem_monomial(std::move(m));
}

ReducedGG::ReducedGG(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta)
    : d_(std::move(d)), eta_(eta), eng_(d_->adapted, [&] {
          auto probe = gg_module_zero_probe(*d_, eta.eta);
          if (probe.zero) throw WalgError(ErrorKind::EtaOutsideSlice, probe.witness);
          PbwConfig c;
          c.nfree = d_->mdim;
          c.tail_char = eta_adapted(*d_, d_->chi);
          c.restricted = true;
          c.eta = eta_adapted(*d_, eta.eta);
          return c;
      }()) {
    basis_ = restricted_monomials(d_->mdim, d_->prime());
    const int p = d_->prime();
    for (int k = 0; k < d_->dim(); ++k) {
        SparseMatrix s;
        s.dim = dim();
        for (const auto& m : basis_) {
            SparseVec col;
            for (const auto& [mm, c] : eng_.act(k, m)) col.emplace_back(static_cast<int>(restricted_index(mm, p)), c);
            std::sort(col.begin(), col.end());
            s.cols.push_back(std::move(col));
        }
        rho_.push_back(std::move(s));
    }
}

FDModule ReducedGG::as_module() const {
    const Field& f = field();
    FMatrix Binv = *adapted_matrix(*d_).inverse();
    std::vector<FMatrix> dense;
    for (const auto& r : rho_) dense.push_back(r.dense(f));
    FDModule M;
    M.name = "Q^eta";
    M.dim = dim();
    M.action.assign(d_->dim(), FMatrix(f, dim(), dim()));
    parallel_for(d_->dim(), [&](int i) {
        for (int k = 0; k < d_->dim(); ++k)
            if (Binv.at(i, k)) M.action[i] = M.action[i] + dense[k].scaled(Binv.at(i, k));
    });
    return M;
}

Vec ReducedGG::vacuum() const { return unit_vec(dim(), 0); }

Vec ReducedGG::to_vec(const Elem& x) const {
    Vec v(dim(), 0);
    for (const auto& [m, c] : x) v[restricted_index(m, d_->prime())] = c;
    return v;
}

Elem ReducedGG::to_elem(const Vec& v) const {
    Elem e;
    for (int i = 0; i < dim(); ++i)
        if (v[i]) e.emplace(basis_[i], v[i]);
    return e;
}

Vec ReducedGG::project(const Elem& q) {
    Elem out;
    for (const auto& [m, c] : q) elem_axpy(field(), out, c, eng_.act_mono(m, eng_.one()));
    return to_vec(out);
}

Vec ReducedGG::left_multiply(const Vec& a, const Vec& b) { return to_vec(eng_.act_elem(to_elem(a), to_elem(b))); }

std::vector<int> ReducedGG::free_basis_indices() const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i) {
        bool ok = true;
        for (int k = 0; k < d_->r; ++k)
            if (basis_[i][k]) ok = false;
        if (ok) out.push_back(i);
    }
    return out;
}

ReducedW::ReducedW(ReducedGG& gg, const WPresentation* pres) : gg_(gg) {
    const GradedNilpotentDatum& d = gg.datum();
    const Field& f = gg.field();
    const int n = gg.dim();
    Vec chi_ad = eta_adapted(d, d.chi);
    std::vector<SparseVec> rows;
    for (int k = d.mdim; k < d.dim(); ++k) {
        std::vector<SparseVec> local(n);
        for (int j = 0; j < n; ++j) {
            for (auto [i, c] : gg.rho(k).cols[j]) local[i].emplace_back(j, c);
        }
        for (int i = 0; i < n; ++i) {
            SparseVec row = local[i];
            Res neg = f.neg(chi_ad[k]);
            if (neg) {
                auto it = std::find_if(row.begin(), row.end(), [&](auto& e) { return e.first == i; });
                if (it == row.end()) {
                    row.emplace_back(i, neg);
                    std::sort(row.begin(), row.end());
                } else {
                    it->second = f.add(it->second, neg);
                    if (!it->second) row.erase(it);
                }
            }
            if (!row.empty()) rows.push_back(std::move(row));
        }
    }
    basis_ = kernel_auto(f, rows, n);
    coord_cols_ = last_nonzero_cols(basis_);
    long long want = ipow(d.prime(), d.r);
    if (static_cast<long long>(basis_.size()) != want)
        throw WalgError(ErrorKind::DimensionMismatch, "dim U_eta(g,e) = " + std::to_string(basis_.size()) +
                                                          ", expected " + std::to_string(want));
    if (pres)
        for (const auto& t : pres->theta) theta_.push_back(gg.project(t));
}

std::optional<Vec> ReducedW::coords(const Vec& x) const { return coords_in(gg_.field(), basis_, coord_cols_, x); }

const std::vector<Vec>& ReducedW::theta_monomials() {
    if (!theta_mono_.empty() || theta_.empty()) return theta_mono_;
    const int p = gg_.datum().prime();
    auto exps = restricted_monomials(static_cast<int>(theta_.size()), p);
    for (const auto& a : exps) {
        int i = 0;
        while (i < static_cast<int>(a.size()) && a[i] == 0) ++i;
        if (i == static_cast<int>(a.size())) {
            theta_mono_.push_back(gg_.vacuum());
            continue;
        }
        Mono rest = a;
        --rest[i];
        theta_mono_.push_back(gg_.left_multiply(theta_[i], theta_mono_[restricted_index(rest, p)]));
    }
    return theta_mono_;
}

std::vector<CheckRecord> ReducedW::checks() {
    const GradedNilpotentDatum& d = gg_.datum();
    const Field& f = gg_.field();
    const int n = gg_.dim();
    std::vector<CheckRecord> out;
    out.push_back({"reduced_w_dimension", static_cast<long long>(dim()) == ipow(d.prime(), d.r), "",
                   {{"dim", dim()}, {"expected", ipow(d.prime(), d.r)}}});
    if (theta_.empty()) return out;

    CheckRecord span{"theta_images_span", true, "", nlohmann::json::object()};
    EchelonBuilder eb(f, n);
    bool inside = true;
    for (const auto& v : theta_monomials()) {
        eb.insert(v);
        if (!coords(v)) inside = false;
    }
    span.pass = inside && eb.rank() == dim();
    span.data = {{"rank", eb.rank()}, {"dim", dim()}};
    if (!span.pass) span.witness = inside ? "rank deficit" : "a theta monomial is not ad(m)-invariant";
    out.push_back(span);

    CheckRecord shape{"theta_reduced_shape", true, "", nlohmann::json::object()};
    for (int i = 0; i < d.r && shape.pass; ++i) {
        const int di = d.kazhdan[i];
        for (int c = 0; c < n; ++c) {
            Res coef = theta_[i][c];
            if (!coef) continue;
            int deg = gg_.kazhdan_of(c);
            const Mono& m = gg_.basis()[c];
            bool is_xi = mono_total(m) == 1 && m[i] == 1;
            bool bad = deg > di || (deg == di && (is_xi ? coef != 1 : mono_total(m) <= 1));
            if (!bad && is_xi && deg == di) continue;
            if (bad) {
                shape.pass = false;
                shape.witness = "theta_" + std::to_string(i) + " at basis index " + std::to_string(c);
                break;
            }
        }
        if (shape.pass) {
            Mono xi(d.mdim, 0);
            xi[i] = 1;
            if (theta_[i][restricted_index(xi, d.prime())] != 1) {
                shape.pass = false;
                shape.witness = "theta_" + std::to_string(i) + " lacks its leading term";
            }
        }
    }
    out.push_back(shape);

    CheckRecord assoc{"right_action_associative", true, "", nlohmann::json::object()};
    CheckRecord endo{"right_action_commutes_with_g", true, "", nlohmann::json::object()};
    for (int i = 0; i < d.r; ++i) {
        for (int j = 0; j < d.r && assoc.pass; ++j) {
            Vec tij = multiply(theta_[i], theta_[j]);
            for (int q = 0; q < n; ++q) {
                Vec eq = unit_vec(n, q);
                if (multiply(multiply(eq, theta_[i]), theta_[j]) != multiply(eq, tij)) {
                    assoc.pass = false;
                    assoc.witness = "pair (" + std::to_string(i) + "," + std::to_string(j) + ") at basis " + std::to_string(q);
                    break;
                }
            }
        }
        for (int k = 0; k < d.dim() && endo.pass; ++k)
            for (int q = 0; q < n; ++q) {
                Vec eq = unit_vec(n, q);
                if (gg_.rho(k).apply(multiply(eq, theta_[i]), f) != multiply(gg_.rho(k).apply(eq, f), theta_[i])) {
                    endo.pass = false;
                    endo.witness = "theta_" + std::to_string(i) + " and variable " + std::to_string(k);
                    break;
                }
            }
    }
    out.push_back(assoc);
    out.push_back(endo);

    // Invariant-space product against composition of right multiplications, on basis pairs.
    CheckRecord comp{"product_matches_endomorphism_composition", true, "", nlohmann::json::object()};
    std::vector<FMatrix> R;
    for (const auto& b : basis_) {
        FMatrix m(f, n, n);
        for (int q = 0; q < n; ++q) m.set_col(q, multiply(unit_vec(n, q), b));
        R.push_back(std::move(m));
    }
    for (int s = 0; s < dim() && comp.pass; ++s)
        for (int t = 0; t < dim(); ++t) {
            auto c = coords(multiply(basis_[s], basis_[t]));
            FMatrix lhs(f, n, n);
            if (c)
                for (int u = 0; u < dim(); ++u)
                    if ((*c)[u]) lhs = lhs + R[u].scaled((*c)[u]);
            if (!c || !(lhs == R[t] * R[s])) {
                comp.pass = false;
                comp.witness = "basis pair (" + std::to_string(s) + "," + std::to_string(t) + ")";
                break;
            }
        }
    comp.data = {{"pairs", dim() * dim()}};
    out.push_back(comp);
    return out;
}

nlohmann::json ReducedW::multiplication_table() {
    nlohmann::json prods = nlohmann::json::array();
    for (int s = 0; s < dim(); ++s)
        for (int t = 0; t < dim(); ++t) {
            auto c = coords(multiply(basis_[s], basis_[t]));
            if (!c) throw WalgError(ErrorKind::DimensionMismatch, "product leaves the invariant space");
            prods.push_back({s, t, *c});
        }
    return {{"dim", dim()}, {"products", prods}};
}

CheckRecord verify_faithful(const GradedNilpotentDatum& d, const Vec& eta, const FDModule& M) {
    const Field& f = d.field();
    const int p = d.prime();
    const int D = d.dim();
    CheckRecord rec{"faithful", true, "", nlohmann::json::object()};
    (void)eta;
    auto rho = adapted_actions(d, M);
    auto monos = restricted_monomials(D, p);
    const long long P = static_cast<long long>(monos.size());
    // Kernel of u -> (u e_b)_b, refined one module basis vector at a time.
    std::vector<Vec> K;
    for (long long c = 0; c < P; ++c) K.push_back(unit_vec(static_cast<int>(P), static_cast<int>(c)));
    int used = 0;
    for (int b = 0; b < M.dim && !K.empty(); ++b) {
        ++used;
        std::vector<Vec> img(P);
        for (long long c = 0; c < P; ++c) {
            const Mono& m = monos[c];
            int i = 0;
            while (i < D && m[i] == 0) ++i;
            if (i == D) {
                img[c] = unit_vec(M.dim, b);
                continue;
            }
            Mono rest = m;
            --rest[i];
            img[c] = rho[i].apply(img[restricted_index(rest, p)], f);
        }
        FMatrix A(f, M.dim, static_cast<int>(K.size()));
        for (std::size_t k = 0; k < K.size(); ++k) {
            Vec col(M.dim, 0);
            for (long long c = 0; c < P; ++c)
                if (K[k][c]) vec_axpy(f, col, K[k][c], img[c]);
            A.set_col(static_cast<int>(k), col);
        }
        std::vector<Vec> next;
        for (const auto& kv : A.kernel()) {
            Vec u(P, 0);
            for (std::size_t k = 0; k < K.size(); ++k)
                if (kv[k]) vec_axpy(f, u, kv[k], K[k]);
            next.push_back(std::move(u));
        }
        K = std::move(next);
    }
    rec.pass = K.empty();
    rec.data = {{"module", M.name}, {"uea_dim", P}, {"module_dim", M.dim}, {"vectors_used", used}, {"kernel_dim", K.size()}};
    if (!rec.pass) rec.witness = "kernel of dimension " + std::to_string(K.size());
    return rec;
}

std::vector<CheckRecord> verify_matrix_iso(ReducedGG& gg, ReducedW& w) {
    const GradedNilpotentDatum& d = gg.datum();
    const Field& f = gg.field();
    const int p = d.prime();
    const int n = gg.dim();
    std::vector<CheckRecord> out;
    auto free_idx = gg.free_basis_indices();
    const std::vector<Vec>& thetas = w.theta().empty() ? w.basis() : w.theta_monomials();

    CheckRecord qfree{"q_eta_free_over_reduced_w", true, "", nlohmann::json::object()};
    EchelonBuilder eb(f, n);
    for (int i : free_idx)
        for (const auto& t : thetas) eb.insert(gg.left_multiply(unit_vec(n, i), t));
    long long products = static_cast<long long>(free_idx.size() * thetas.size());
    qfree.pass = eb.rank() == n && products == n && static_cast<long long>(free_idx.size()) == ipow(p, d.d_chi());
    qfree.data = {{"free_rank", free_idx.size()}, {"reduced_w_dim", thetas.size()}, {"products", products}, {"rank", eb.rank()}, {"dim_q_eta", n}};
    if (!qfree.pass) qfree.witness = "rank " + std::to_string(eb.rank()) + " of " + std::to_string(n);
    out.push_back(qfree);

    CheckRecord rmod{"right_module_axiom", true, "", nlohmann::json::object()};
    if (!w.theta().empty())
        for (int i : free_idx) {
            for (std::size_t a = 0; a < w.theta().size() && rmod.pass; ++a)
                for (std::size_t b = 0; b < w.theta().size(); ++b) {
                    Vec v = unit_vec(n, i);
                    Vec lhs = gg.left_multiply(gg.left_multiply(v, w.theta()[a]), w.theta()[b]);
                    Vec rhs = gg.left_multiply(v, w.multiply(w.theta()[a], w.theta()[b]));
                    if (lhs != rhs) {
                        rmod.pass = false;
                        rmod.witness = "v_" + std::to_string(i) + " with theta pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
                        break;
                    }
                }
            if (!rmod.pass) break;
        }
    out.push_back(rmod);

    CheckRecord phi{"phi_eta_bijective", true, "", nlohmann::json::object()};
    const int D = d.dim();
    auto monos = restricted_monomials(D, p);
    const long long P = static_cast<long long>(monos.size());
    const long long width = static_cast<long long>(free_idx.size()) * n;
    std::vector<std::vector<Vec>> img(P);
    EchelonBuilder ph(f, static_cast<int>(width));
    for (long long c = 0; c < P; ++c) {
        const Mono& m = monos[c];
        int i = 0;
        while (i < D && m[i] == 0) ++i;
        if (i == D) {
            for (int v : free_idx) img[c].push_back(unit_vec(n, v));
        } else {
            Mono rest = m;
            --rest[i];
            for (const auto& x : img[restricted_index(rest, p)]) img[c].push_back(gg.rho(i).apply(x, f));
        }
        Vec row;
        row.reserve(width);
        for (const auto& x : img[c]) row.insert(row.end(), x.begin(), x.end());
        ph.insert(row);
    }
    phi.pass = P == width && ph.rank() == P;
    phi.data = {{"uea_dim", P}, {"target_dim", width}, {"rank", ph.rank()}};
    if (!phi.pass) phi.witness = "rank " + std::to_string(ph.rank()) + " of " + std::to_string(P);
    out.push_back(phi);
    return out;
}

FDModule baby_verma(const GradedNilpotentDatum& d, const Vec& eta, const std::vector<long long>& lambda) {
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = L.field();
    const int n = d.pyramid.n();
    if (static_cast<int>(lambda.size()) != n) throw WalgError(ErrorKind::ConfigError, "weight needs one entry per diagonal unit");
    std::vector<int> lower, diag, upper;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) (i > j ? lower : i == j ? diag : upper).push_back(gl_index(n, i, j));
    for (int u : diag)
        if (eta[u]) throw WalgError(ErrorKind::IncompatibleWeight, "eta(" + L.label(u) + ") != 0 on the torus");
    for (int u : upper)
        if (eta[u]) throw WalgError(ErrorKind::IncompatibleWeight, "eta(" + L.label(u) + ") != 0 on the upper nilradical");
    std::vector<int> order = lower;
    order.insert(order.end(), diag.begin(), diag.end());
    order.insert(order.end(), upper.begin(), upper.end());
    std::vector<Vec> rows;
    std::vector<std::string> labels;
    Vec tail(order.size(), 0), eta_new(order.size(), 0);
    std::vector<int> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        rows.push_back(L.unit(order[k]));
        labels.push_back(L.label(order[k]));
        eta_new[k] = eta[order[k]];
        pos[order[k]] = static_cast<int>(k);
    }
    for (int i = 0; i < n; ++i) tail[pos[gl_index(n, i, i)]] = f.from_int(lambda[i]);
    auto Lb = std::make_shared<const RestrictedLieAlgebra>(L.change_basis(rows, labels));
    PbwConfig c;
    c.nfree = static_cast<int>(lower.size());
    c.tail_char = tail;
    c.restricted = true;
    c.eta = eta_new;
    PbwEngine eng(Lb, c);
    auto basis = restricted_monomials(c.nfree, d.prime());
    FDModule M;
    M.name = "baby_verma(";
    for (int i = 0; i < n; ++i) M.name += (i ? "," : "") + std::to_string(f.from_int(lambda[i]));
    M.name += ")";
    M.dim = static_cast<int>(basis.size());
    for (int i = 0; i < L.dim(); ++i) {
        FMatrix m(f, M.dim, M.dim);
        for (int j = 0; j < M.dim; ++j)
            for (const auto& [mm, cc] : eng.act(pos[i], basis[j])) m.at(static_cast<int>(restricted_index(mm, d.prime())), j) = cc;
        M.action.push_back(std::move(m));
    }
    return M;
}

FDModule regular_module(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta) {
    const Field& f = d->field();
    const int p = d->prime();
    ReducedEnvelope U(d, eta);
    FMatrix Binv = *adapted_matrix(*d).inverse();
    auto basis = restricted_monomials(d->dim(), p);
    FDModule M;
    M.name = "regular";
    M.dim = static_cast<int>(basis.size());
    for (int i = 0; i < d->dim(); ++i) {
        FMatrix m(f, M.dim, M.dim);
        for (int j = 0; j < M.dim; ++j) {
            Elem img;
            for (int k = 0; k < d->dim(); ++k)
                if (Binv.at(i, k)) elem_axpy(f, img, Binv.at(i, k), U.engine().act(k, basis[j]));
            for (const auto& [mm, cc] : img) m.at(static_cast<int>(restricted_index(mm, p)), j) = cc;
        }
        M.action.push_back(std::move(m));
    }
    return M;
}

SkryabinResult skryabin_roundtrip(ReducedW& w, const FDModule& V, int hom_limit) {
    ReducedGG& gg = w.gg();
    const GradedNilpotentDatum& d = gg.datum();
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = gg.field();
    const int nq = gg.dim();
    SkryabinResult res;
    res.dim_v = V.dim;

    auto axioms = check_module(L, V, gg.eta().eta);
    if (!axioms.pass) throw WalgError(ErrorKind::NotAModule, axioms.witness);
    res.checks.push_back(axioms);

    // Whittaker vectors.
    std::vector<SparseVec> rows;
    for (int u : d.m_units) {
        FMatrix A = V.action[u] - FMatrix::identity(f, V.dim).scaled(d.chi[u]);
        for (int r = 0; r < V.dim; ++r) {
            auto s = to_sparse(A.row(r));
            if (!s.empty()) rows.push_back(std::move(s));
        }
    }
    auto W = kernel_auto(f, rows, V.dim);
    auto wcols = last_nonzero_cols(W);
    const int nw = static_cast<int>(W.size());
    res.dim_w = nw;
    long long pd = ipow(d.prime(), d.d_chi());
    CheckRecord kw{"kac_weisfeiler", V.dim % pd == 0 && V.dim == pd * nw, "",
                   {{"dim_v", V.dim}, {"dim_whittaker", nw}, {"p_d_chi", pd}}};
    if (!kw.pass) kw.witness = "dim V = " + std::to_string(V.dim) + ", p^d_chi dim W = " + std::to_string(pd * nw);
    res.checks.push_back(kw);

    auto rhoV = adapted_actions(d, V);
    auto act_q_on_v = [&](const Vec& q, const Vec& v) {
        Vec out(V.dim, 0);
        for (int c = 0; c < nq; ++c)
            if (q[c]) vec_axpy(f, out, q[c], apply_mono(f, rhoV, gg.basis()[c], v));
        return out;
    };
    // Balancing relations over generators of U_eta(g,e).
    const std::vector<Vec>& gens = w.theta().empty() ? w.basis() : w.theta();
    CheckRecord stable{"whittaker_stable_under_reduced_w", true, "", nlohmann::json::object()};
    std::vector<std::vector<Vec>> gen_on_w(gens.size());
    for (std::size_t s = 0; s < gens.size(); ++s)
        for (int t = 0; t < nw; ++t) {
            auto c = coords_in(f, W, wcols, act_q_on_v(gens[s], W[t]));
            if (!c) {
                stable.pass = false;
                stable.witness = "generator " + std::to_string(s) + " moves a Whittaker vector out";
                c = Vec(nw, 0);
            }
            gen_on_w[s].push_back(*c);
        }
    res.checks.push_back(stable);

    const int nt = nq * nw;
    res.dim_tensor = nt;
    std::vector<SparseVec> rel;
    for (int q = 0; q < nq; ++q)
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Vec qs = gg.left_multiply(unit_vec(nq, q), gens[s]);
            for (int t = 0; t < nw; ++t) {
                Vec row(nt, 0);
                for (int c = 0; c < nq; ++c)
                    if (qs[c]) row[c * nw + t] = f.add(row[c * nw + t], qs[c]);
                for (int t2 = 0; t2 < nw; ++t2)
                    if (gen_on_w[s][t][t2]) row[q * nw + t2] = f.sub(row[q * nw + t2], gen_on_w[s][t][t2]);
                auto sp = to_sparse(row);
                if (!sp.empty()) rel.push_back(std::move(sp));
            }
        }
    const int dim_vprime = static_cast<int>(kernel_auto(f, rel, nt).size());

    // Psi(e_c (x) w_t) = y^c w_t
    FMatrix Psi(f, V.dim, nt);
    parallel_for(nq, [&](int c) {
        for (int t = 0; t < nw; ++t) Psi.set_col(c * nw + t, apply_mono(f, rhoV, gg.basis()[c], W[t]));
    });
    CheckRecord kills{"psi_kills_relations", true, "", nlohmann::json::object()};
    for (const auto& r : rel) {
        Vec img(V.dim, 0);
        for (auto [col, v] : r)
            for (int a = 0; a < V.dim; ++a) img[a] = f.fma(img[a], v, Psi.at(a, col));
        if (!is_zero_vec(img)) {
            kills.pass = false;
            kills.witness = "a balancing relation maps to a nonzero vector";
            break;
        }
    }
    res.checks.push_back(kills);

    CheckRecord equi{"psi_equivariant", true, "", nlohmann::json::object()};
    FDModule QM = gg.as_module();
    std::vector<char> equi_ok(L.dim(), 1);
    parallel_for(L.dim(), [&](int x) {
        FMatrix lhs(f, V.dim, nt);
        for (int c = 0; c < nq; ++c) {
            Vec qc = QM.action[x].col(c);
            for (int t = 0; t < nw; ++t) {
                Vec img(V.dim, 0);
                for (int c2 = 0; c2 < nq; ++c2)
                    if (qc[c2]) vec_axpy(f, img, qc[c2], Psi.col(c2 * nw + t));
                lhs.set_col(c * nw + t, img);
            }
        }
        equi_ok[x] = lhs == V.action[x] * Psi;
    });
    for (int x = 0; x < L.dim(); ++x)
        if (!equi_ok[x]) {
            equi.pass = false;
            equi.witness = "fails for " + L.label(x);
            break;
        }
    res.checks.push_back(equi);

    int rk = Psi.rank();
    CheckRecord bij{"psi_bijective", rk == V.dim && dim_vprime == V.dim, "",
                    {{"dim_v", V.dim}, {"dim_tensor_quotient", dim_vprime}, {"rank_psi", rk}}};
    if (!bij.pass) bij.witness = "rank " + std::to_string(rk) + ", dim V' " + std::to_string(dim_vprime);
    res.checks.push_back(bij);

    if (V.dim <= hom_limit) {
        // Hom_g(V', V) as maps X: Q^eta (x) W -> V killing relations and commuting with g.
        const int nv = V.dim;
        auto var = [&](int a, int col) { return a * nt + col; };
        std::vector<SparseVec> eqs;
        auto push = [&](std::map<int, Res>& acc) {
            SparseVec s;
            for (auto [k, v] : acc)
                if (v) s.emplace_back(k, v);
            if (!s.empty()) eqs.push_back(std::move(s));
        };
        for (const auto& r : rel)
            for (int a = 0; a < nv; ++a) {
                std::map<int, Res> acc;
                for (auto [col, v] : r) acc[var(a, col)] = f.add(acc[var(a, col)], v);
                push(acc);
            }
        for (int x = 0; x < L.dim(); ++x)
            for (int c = 0; c < nq; ++c) {
                Vec qc = QM.action[x].col(c);
                for (int t = 0; t < nw; ++t)
                    for (int a = 0; a < nv; ++a) {
                        std::map<int, Res> acc;
                        for (int c2 = 0; c2 < nq; ++c2)
                            if (qc[c2]) acc[var(a, c2 * nw + t)] = f.add(acc[var(a, c2 * nw + t)], qc[c2]);
                        for (int b = 0; b < nv; ++b)
                            if (V.action[x].at(a, b))
                                acc[var(b, c * nw + t)] = f.sub(acc[var(b, c * nw + t)], V.action[x].at(a, b));
                        push(acc);
                    }
            }
        auto ker = kernel_auto(f, eqs, nv * nt);
        // X kills the relations, so it factors through V'.
        res.hom_dim = static_cast<int>(ker.size());
    }
    return res;
}

Vec central_character(const GradedNilpotentDatum& d, const WPresentation& w, const Vec& eta) {
    const Field& f = d.field();
    Vec ead = eta_adapted(d, eta);
    Vec out;
    for (std::size_t i = 0; i < w.theta.size(); ++i) {
        Elem top = homogeneous_part(w.theta[i], d.kazhdan, w.degree[i]);
        Res val = 0;
        for (const auto& [m, c] : top) {
            Res term = c;
            for (std::size_t k = 0; k < m.size(); ++k) term = f.mul(term, f.pow(f.pow(ead[k], f.p()), m[k]));
            val = f.add(val, term);
        }
        out.push_back(val);
    }
    return out;
}

Vec conjugate_eta(const GradedNilpotentDatum& d, const Vec& eta, int unit, Res t) {
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = d.field();
    FMatrix E = L.to_matrix(L.unit(unit));
    Vec out(d.dim(), 0);
    for (int i = 0; i < d.dim(); ++i) {
        FMatrix X = L.to_matrix(L.unit(i));
        FMatrix Y = X - (E * X - X * E).scaled(t) - (E * X * E).scaled(f.mul(t, t));
        out[i] = dot(f, eta, L.from_matrix(Y));
    }
    return out;
}

std::vector<CheckRecord> central_reduction_chain(std::shared_ptr<const GradedNilpotentDatum> d,
                                                 const WPresentation& w, const std::vector<EtaCharacter>& etas) {
    const Field& f = d->field();
    CheckRecord dims{"reduced_dims_constant", true, "", nlohmann::json::array()};
    CheckRecord cc{"central_character_on_q_eta", true, "", nlohmann::json::object()};
    CheckRecord orbit{"m_orbit_same_central_character", true, "", nlohmann::json::object()};
    long long want_w = ipow(d->prime(), d->r), want_q = ipow(d->prime(), d->mdim);
    auto probe = [&](const Vec& eta, const std::string& tag) {
        auto e = EtaCharacter::from_functional(*d, eta);
        ReducedGG gg(d, e);
        int wd = -1;
        try {
            ReducedW rw(gg);
            wd = rw.dim();
        } catch (const WalgError&) {
        }
        Vec chr = central_character(*d, w, eta);
        for (std::size_t i = 0; i < w.phi.size(); ++i) {
            Vec img = gg.project(w.phi[i]);
            Vec want = vec_scale(f, gg.vacuum(), chr[i]);
            if (img != want && cc.pass) {
                cc.pass = false;
                cc.witness = tag + ": Phi_" + std::to_string(i) + " is not the predicted scalar";
            }
        }
        dims.data.push_back({{"eta", tag}, {"uea_dim", ipow(d->prime(), d->dim())}, {"q_eta_dim", gg.dim()}, {"reduced_w_dim", wd}});
        if (gg.dim() != want_q || wd != want_w) {
            dims.pass = false;
            dims.witness = tag + ": dims " + std::to_string(gg.dim()) + ", " + std::to_string(wd);
        }
        return chr;
    };
    for (std::size_t k = 0; k < etas.size(); ++k) {
        std::string tag = "eta_" + std::to_string(k);
        Vec c0 = probe(etas[k].eta, tag);
        for (int u : d->m_units) {
            Vec moved = conjugate_eta(*d, etas[k].eta, u, 1);
            if (moved == etas[k].eta) continue;
            Vec c1 = probe(moved, tag + "^" + d->algebra->label(u));
            if (c1 != c0 && orbit.pass) {
                orbit.pass = false;
                orbit.witness = tag + " conjugated by 1+" + d->algebra->label(u);
            }
        }
    }
    if (w.phi.empty()) cc.witness = "no p-centre generators supplied";
    return {dims, cc, orbit};
}

} // namespace walg
