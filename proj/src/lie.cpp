#include "walg/lie.hpp"

#include <sstream>

namespace walg {

RestrictedLieAlgebra::RestrictedLieAlgebra(const Field& f, std::vector<std::string> labels, Vec bracket_tensor,
                                           std::vector<Vec> ppower, FMatrix gram,
                                           std::optional<MatrixRealization> realization,
                                           std::vector<long long> bracket_lifts)
    : f_(f), dim_(static_cast<int>(labels.size())), labels_(std::move(labels)), c_(std::move(bracket_tensor)),
      pp_(std::move(ppower)), gram_(std::move(gram)), real_(std::move(realization)), lifts_(std::move(bracket_lifts)) {
    const std::size_t d = static_cast<std::size_t>(dim_);
    if (c_.size() != d * d * d) throw std::invalid_argument("bracket tensor has wrong size");
    if (pp_.size() != d) throw std::invalid_argument("ppower table has wrong size");
    if (gram_.rows() != dim_ || gram_.cols() != dim_) throw std::invalid_argument("Gram matrix has wrong shape");
    if (!lifts_.empty() && lifts_.size() != c_.size()) throw std::invalid_argument("lift tensor has wrong size");
    sparse_.resize(d * d);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            SparseVec& s = sparse_[i * d + j];
            for (int k = 0; k < dim_; ++k)
                if (Res c = structure_constant(i, j, k)) s.emplace_back(k, c);
        }
}

std::optional<long long> RestrictedLieAlgebra::structure_lift(int i, int j, int k) const {
    if (lifts_.empty()) return std::nullopt;
    return lifts_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
}

Vec RestrictedLieAlgebra::bracket(const Vec& x, const Vec& y) const {
    Vec r(dim_, 0);
    for (int i = 0; i < dim_; ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < dim_; ++j) {
            if (!y[j]) continue;
            Res s = f_.mul(x[i], y[j]);
            for (auto [k, c] : bracket_basis(i, j)) r[k] = f_.fma(r[k], s, c);
        }
    }
    return r;
}

FMatrix RestrictedLieAlgebra::ad(const Vec& x) const {
    FMatrix m(f_, dim_, dim_);
    for (int j = 0; j < dim_; ++j) m.set_col(j, bracket(x, unit(j)));
    return m;
}

Vec RestrictedLieAlgebra::pmap(const Vec& x) const {
    if (real_) {
        FMatrix X = to_matrix(x);
        return from_matrix(X.power(f_.p()));
    }
    int support = -1, count = 0;
    for (int i = 0; i < dim_; ++i)
        if (x[i]) {
            support = i;
            ++count;
        }
    if (count == 0) return zero();
    if (count == 1) return vec_scale(f_, pp_[support], f_.pow(x[support], f_.p()));
    throw WalgError(ErrorKind::Unsupported, "p-map of a non-basis element needs a matrix realization");
}

Res RestrictedLieAlgebra::form(const Vec& x, const Vec& y) const { return dot(f_, x, gram_.apply(y)); }

const MatrixRealization& RestrictedLieAlgebra::realization() const {
    if (!real_) throw WalgError(ErrorKind::Unsupported, "algebra has no matrix realization");
    return *real_;
}

FMatrix RestrictedLieAlgebra::to_matrix(const Vec& x) const {
    const auto& R = realization();
    FMatrix m(f_, R.n, R.n);
    for (int i = 0; i < dim_; ++i)
        if (x[i]) m = m + R.basis[i].scaled(x[i]);
    return m;
}

Vec RestrictedLieAlgebra::from_matrix(const FMatrix& m) const {
    const auto& R = realization();
    Vec flat(static_cast<std::size_t>(R.n) * R.n);
    for (int r = 0; r < R.n; ++r)
        for (int c = 0; c < R.n; ++c) flat[r * R.n + c] = m.at(r, c);
    return R.coords.apply(flat);
}

Vec RestrictedLieAlgebra::unit(int i) const {
    Vec v(dim_, 0);
    v[i] = 1 % f_.p();
    return v;
}

RestrictedLieAlgebra RestrictedLieAlgebra::change_basis(const std::vector<Vec>& b, std::vector<std::string> labels) const {
    FMatrix B = FMatrix::from_rows(f_, b, dim_);
    auto Binv = B.inverse();
    if (!Binv) throw std::invalid_argument("change_basis: rows are not a basis");
    const int d = dim_;
    // New coordinates of an old-coordinate row vector c: c * Binv.
    auto to_new = [&](const Vec& old) {
        Vec r(d, 0);
        for (int l = 0; l < d; ++l)
            if (old[l])
                for (int k = 0; k < d; ++k) r[k] = f_.fma(r[k], old[l], Binv->at(l, k));
        return r;
    };
    Vec tensor(static_cast<std::size_t>(d) * d * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vec nb = to_new(bracket(b[i], b[j]));
            for (int k = 0; k < d; ++k) tensor[(static_cast<std::size_t>(i) * d + j) * d + k] = nb[k];
        }
    FMatrix gram(f_, d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram.at(i, j) = form(b[i], b[j]);
    std::vector<Vec> pp(d);
    for (int i = 0; i < d; ++i) pp[i] = to_new(pmap(b[i]));
    std::optional<MatrixRealization> real;
    if (real_) {
        MatrixRealization R;
        R.n = real_->n;
        for (int i = 0; i < d; ++i) R.basis.push_back(to_matrix(b[i]));
        R.coords = Binv->transpose() * real_->coords;
        real = std::move(R);
    }
    return RestrictedLieAlgebra(f_, std::move(labels), std::move(tensor), std::move(pp), std::move(gram), std::move(real));
}

nlohmann::json RestrictedLieAlgebra::to_json() const {
    nlohmann::json j;
    j["prime"] = f_.p();
    j["dim"] = dim_;
    j["labels"] = labels_;
    auto br = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i)
        for (int jj = 0; jj < dim_; ++jj)
            for (int k = 0; k < dim_; ++k) {
                auto lift = structure_lift(i, jj, k);
                long long v = lift ? *lift : f_.to_signed(structure_constant(i, jj, k));
                if (v) br.push_back({i, jj, k, v});
            }
    j["bracket"] = br;
    auto pp = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
            if (pp_[i][k]) pp.push_back({i, k, f_.to_signed(pp_[i][k])});
    j["ppower"] = pp;
    auto fm = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
            if (gram_.at(i, k)) fm.push_back({i, k, f_.to_signed(gram_.at(i, k))});
    j["form"] = fm;
    return j;
}

RestrictedLieAlgebra build_gl(int n, std::uint64_t p) {
    if (n < 1) throw std::invalid_argument("build_gl: n must be positive");
    Field f(p);
    const int d = n * n;
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            labels.push_back(n < 10 ? "E_" + std::to_string(i + 1) + std::to_string(j + 1)
                                    : "E_" + std::to_string(i + 1) + "," + std::to_string(j + 1));
    Vec tensor(static_cast<std::size_t>(d) * d * d, 0);
    std::vector<long long> lifts(tensor.size(), 0);
    auto put = [&](int a, int b, int k, long long v) {
        std::size_t idx = (static_cast<std::size_t>(a) * d + b) * d + k;
        lifts[idx] += v;
        tensor[idx] = f.from_int(lifts[idx]);
    };
    // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    int a = gl_index(n, i, j), b = gl_index(n, k, l);
                    if (j == k) put(a, b, gl_index(n, i, l), 1);
                    if (l == i) put(a, b, gl_index(n, k, j), -1);
                }
    std::vector<Vec> pp(d, Vec(d, 0));
    for (int i = 0; i < n; ++i) pp[gl_index(n, i, i)][gl_index(n, i, i)] = 1;
    // trace(E_ij E_kl) = delta_jk delta_il
    FMatrix gram(f, d, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram.at(gl_index(n, i, j), gl_index(n, j, i)) = 1;
    MatrixRealization R;
    R.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            FMatrix m(f, n, n);
            m.at(i, j) = 1;
            R.basis.push_back(std::move(m));
        }
    R.coords = FMatrix::identity(f, d);
    return RestrictedLieAlgebra(f, std::move(labels), std::move(tensor), std::move(pp), std::move(gram), std::move(R),
                                std::move(lifts));
}

RestrictedLieAlgebra algebra_from_json(const nlohmann::json& j) {
    try {
        Field f(j.at("prime").get<std::uint64_t>());
        int d = j.at("dim").get<int>();
        if (d < 1) throw WalgError(ErrorKind::ConfigError, "dim must be positive");
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        else
            for (int i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
        if (static_cast<int>(labels.size()) != d) throw WalgError(ErrorKind::ConfigError, "labels length differs from dim");
        auto check_idx = [d](int i) {
            if (i < 0 || i >= d) throw WalgError(ErrorKind::ConfigError, "basis index out of range: " + std::to_string(i));
        };
        Vec tensor(static_cast<std::size_t>(d) * d * d, 0);
        std::vector<long long> lifts(tensor.size(), 0);
        for (const auto& e : j.at("bracket")) {
            int a = e.at(0), b = e.at(1), k = e.at(2);
            long long c = e.at(3);
            check_idx(a), check_idx(b), check_idx(k);
            std::size_t idx = (static_cast<std::size_t>(a) * d + b) * d + k;
            lifts[idx] += c;
            tensor[idx] = f.from_int(lifts[idx]);
        }
        std::vector<Vec> pp(d, Vec(d, 0));
        if (j.contains("ppower"))
            for (const auto& e : j.at("ppower")) {
                int a = e.at(0), k = e.at(1);
                check_idx(a), check_idx(k);
                pp[a][k] = f.add(pp[a][k], f.from_int(e.at(2).get<long long>()));
            }
        FMatrix gram(f, d, d);
        if (j.contains("form"))
            for (const auto& e : j.at("form")) {
                int a = e.at(0), b = e.at(1);
                check_idx(a), check_idx(b);
                gram.at(a, b) = f.add(gram.at(a, b), f.from_int(e.at(2).get<long long>()));
            }
        return RestrictedLieAlgebra(f, std::move(labels), std::move(tensor), std::move(pp), std::move(gram), std::nullopt,
                                    std::move(lifts));
    } catch (const nlohmann::json::exception& ex) {
        throw WalgError(ErrorKind::ConfigError, std::string("malformed algebra JSON: ") + ex.what());
    }
}

bool ValidationReport::all_pass() const {
    for (const auto& it : items)
        if (!it.pass) return false;
    return true;
}

const ValidationItem* ValidationReport::find(const std::string& name) const {
    for (const auto& it : items)
        if (it.name == name) return &it;
    return nullptr;
}

ValidationReport validate(const RestrictedLieAlgebra& L) {
    const Field& f = L.field();
    const int d = L.dim();
    ValidationReport rep;

    ValidationItem anti{"antisymmetry", true, ""};
    for (int i = 0; i < d && anti.pass; ++i)
        for (int j = i; j < d && anti.pass; ++j)
            for (int k = 0; k < d; ++k)
                if (L.structure_constant(i, j, k) != f.neg(L.structure_constant(j, i, k))) {
                    anti.pass = false;
                    anti.witness = "c(" + std::to_string(i) + "," + std::to_string(j) + ";" + std::to_string(k) + ")";
                    break;
                }
    rep.items.push_back(anti);

    ValidationItem jac{"jacobi", true, ""};
    for (int i = 0; i < d && jac.pass; ++i)
        for (int j = 0; j < d && jac.pass; ++j)
            for (int k = 0; k < d && jac.pass; ++k) {
                Vec a = L.unit(i), b = L.unit(j), c = L.unit(k);
                Vec s = L.bracket(a, L.bracket(b, c));
                s = vec_add(f, s, L.bracket(b, L.bracket(c, a)));
                s = vec_add(f, s, L.bracket(c, L.bracket(a, b)));
                if (!is_zero_vec(s)) {
                    jac.pass = false;
                    jac.witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
                }
            }
    rep.items.push_back(jac);

    ValidationItem sym{"form_symmetric", true, ""};
    for (int i = 0; i < d && sym.pass; ++i)
        for (int j = 0; j < d; ++j)
            if (L.gram().at(i, j) != L.gram().at(j, i)) {
                sym.pass = false;
                sym.witness = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                break;
            }
    rep.items.push_back(sym);

    ValidationItem inv{"form_invariant", true, ""};
    for (int i = 0; i < d && inv.pass; ++i)
        for (int j = 0; j < d && inv.pass; ++j)
            for (int k = 0; k < d; ++k) {
                Vec x = L.unit(i), y = L.unit(j), z = L.unit(k);
                if (L.form(L.bracket(x, y), z) != L.form(x, L.bracket(y, z))) {
                    inv.pass = false;
                    inv.witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
                    break;
                }
            }
    rep.items.push_back(inv);

    ValidationItem nd{"form_nondegenerate", true, ""};
    if (L.gram().rank() < d) {
        nd.pass = false;
        auto ker = L.gram().kernel();
        nd.witness = "radical vector " + format_vector(L, ker.front());
    }
    rep.items.push_back(nd);

    ValidationItem res{"restricted", true, ""};
    for (int i = 0; i < d; ++i) {
        FMatrix lhs = L.ad(L.ppower_basis(i));
        FMatrix rhs = L.ad(L.unit(i)).power(f.p());
        if (!(lhs == rhs)) {
            res.pass = false;
            res.witness = "basis vector " + L.label(i);
            break;
        }
    }
    rep.items.push_back(res);
    return rep;
}

RestrictedLieAlgebra load_validated_algebra(const nlohmann::json& j) {
    RestrictedLieAlgebra L = algebra_from_json(j);
    auto rep = validate(L);
    for (const auto& it : rep.items)
        if (!it.pass) throw WalgError(ErrorKind::ConfigError, "algebra fails " + it.name + " at " + it.witness);
    return L;
}

bool is_nilpotent(const RestrictedLieAlgebra& L, const Vec& x) {
    return L.ad(x).power(static_cast<std::uint64_t>(L.dim())).is_zero();
}

LinearFunctional chi_from_e(const RestrictedLieAlgebra& L, const Vec& e) {
    if (!is_nilpotent(L, e)) throw WalgError(ErrorKind::NotNilpotent, "ad e is not nilpotent: " + format_vector(L, e));
    // chi_i = sum_j e_j g_{ji}
    return L.gram().transpose().apply(e);
}

std::vector<Vec> centralizer(const RestrictedLieAlgebra& L, const Vec& x) { return L.ad(x).kernel(); }

std::string format_vector(const RestrictedLieAlgebra& L, const Vec& x) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < L.dim(); ++i) {
        if (!x[i]) continue;
        long long c = L.field().to_signed(x[i]);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        long long a = c < 0 ? -c : c;
        if (a != 1) os << a << "*";
        os << L.label(i);
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace walg
