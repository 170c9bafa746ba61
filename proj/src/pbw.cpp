#include "walg/pbw.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace walg {

std::size_t MonoHash::operator()(const Mono& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : m) h = (h ^ x) * 1099511628211ull;
    return h;
}

Elem elem_constant(int nvars, Res c) {
    Elem e;
    if (c) e.emplace(Mono(nvars, 0), c);
    return e;
}

Elem elem_monomial(Mono m, Res c) {
    Elem e;
    if (c) e.emplace(std::move(m), c);
    return e;
}

void elem_axpy(const Field& f, Elem& acc, Res s, const Elem& x) {
    if (!s) return;
    for (const auto& [m, c] : x) {
        auto [it, inserted] = acc.try_emplace(m, 0);
        it->second = f.fma(it->second, s, c);
        if (!it->second) acc.erase(it);
    }
}

Elem elem_scale(const Field& f, const Elem& x, Res s) {
    Elem out;
    if (!s) return out;
    for (const auto& [m, c] : x) out.emplace(m, f.mul(c, s));
    return out;
}

Elem elem_sub(const Field& f, const Elem& a, const Elem& b) {
    Elem out = a;
    elem_axpy(f, out, f.neg(1 % f.p()), b);
    return out;
}

bool elem_is_zero(const Elem& x) { return x.empty(); }

int mono_total(const Mono& m) {
    int s = 0;
    for (auto x : m) s += x;
    return s;
}

int mono_degree(const Mono& m, const std::vector<int>& degrees) {
    int s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * degrees[i];
    return s;
}

int elem_degree(const Elem& x, const std::vector<int>& degrees) {
    int best = -1;
    for (const auto& [m, c] : x) best = std::max(best, mono_degree(m, degrees));
    return best;
}

std::string dump_elem(const Elem& x) {
    std::vector<std::string> lines;
    for (const auto& [m, c] : x) {
        std::ostringstream os;
        os << c << "·x^(";
        for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
        os << ")";
        lines.push_back(os.str());
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

PbwEngine::PbwEngine(std::shared_ptr<const RestrictedLieAlgebra> alg, PbwConfig cfg)
    : alg_(std::move(alg)), cfg_(std::move(cfg)), memo_(alg_->dim()) {
    const int dim = alg_->dim();
    if (cfg_.nfree < 0 || cfg_.nfree > dim) throw std::invalid_argument("nfree out of range");
    if (cfg_.tail_char.empty()) cfg_.tail_char.assign(dim, 0);
    if (cfg_.degree.empty()) cfg_.degree.assign(dim, 1);
    if (cfg_.restricted) {
        if (cfg_.eta.size() != static_cast<std::size_t>(dim)) throw std::invalid_argument("eta has wrong length");
        for (Res v : cfg_.eta) eta_p_.push_back(field().pow(v, field().p()));
    }
}

std::size_t PbwEngine::memo_size() const {
    std::size_t s = 0;
    for (const auto& m : memo_) s += m.size();
    return s;
}

const Elem& PbwEngine::act(int k, const Mono& a) {
    auto& memo = memo_[k];
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    Elem r = compute(k, a);
    return memo.emplace(a, std::move(r)).first->second;
}

Elem PbwEngine::compute(int k, const Mono& a) {
    const Field& f = field();
    const int n = cfg_.nfree;
    int i1 = 0;
    while (i1 < n && a[i1] == 0) ++i1;
    auto raised = [&](int var) {
        Mono b = a;
        ++b[var];
        if (mono_degree(b, cfg_.degree) > cfg_.cap)
            throw WalgError(ErrorKind::DegreeOverflow,
                            "monomial of degree " + std::to_string(mono_degree(b, cfg_.degree)) + " exceeds cap " +
                                std::to_string(cfg_.cap));
        return elem_monomial(std::move(b));
    };
    if (i1 == n) {
        if (k < n) return raised(k);
        return elem_constant(n, cfg_.tail_char[k]);
    }
    if (k < i1) return raised(k);
    if (k == i1) {
        if (!cfg_.restricted || a[k] + 1 < static_cast<int>(f.p())) return raised(k);
        // y_k^p = y_k^{[p]} + eta(y_k)^p on the remaining factors.
        Mono rest = a;
        rest[k] = 0;
        Elem out = elem_monomial(rest, eta_p_[k]);
        const Vec& pp = alg_->ppower_basis(k);
        for (int l = 0; l < static_cast<int>(pp.size()); ++l)
            if (pp[l]) elem_axpy(f, out, pp[l], act(l, rest));
        return out;
    }
    // y_k y_{i1} rest = y_{i1} (y_k rest) + [y_k, y_{i1}] rest
    Mono rest = a;
    --rest[i1];
    Elem inner = act(k, rest);
    Elem out = act(i1, inner);
    for (auto [l, c] : alg_->bracket_basis(k, i1)) elem_axpy(f, out, c, act(l, rest));
    return out;
}

Elem PbwEngine::act(int k, const Elem& x) {
    Elem out;
    for (const auto& [m, c] : x) elem_axpy(field(), out, c, act(k, m));
    return out;
}

Elem PbwEngine::act_linear(const Vec& y, const Elem& x) {
    Elem out;
    for (int k = 0; k < static_cast<int>(y.size()); ++k)
        if (y[k]) elem_axpy(field(), out, y[k], act(k, x));
    return out;
}

Elem PbwEngine::act_mono(const Mono& b, const Elem& x) {
    Elem cur = x;
    for (int k = static_cast<int>(b.size()) - 1; k >= 0; --k)
        for (int t = 0; t < b[k]; ++t) cur = act(k, cur);
    return cur;
}

Elem PbwEngine::act_elem(const Elem& u, const Elem& x) {
    Elem out;
    for (const auto& [m, c] : u) elem_axpy(field(), out, c, act_mono(m, x));
    return out;
}

namespace {

PbwConfig ug_config(const GradedNilpotentDatum& d, int cap) {
    PbwConfig c;
    c.nfree = d.dim();
    c.degree = d.kazhdan;
    c.cap = cap;
    return c;
}

PbwConfig q_config(const GradedNilpotentDatum& d, int cap, const Vec& chi_ad) {
    PbwConfig c;
    c.nfree = d.mdim;
    c.tail_char = chi_ad;
    c.degree = d.kazhdan;
    c.cap = cap;
    return c;
}

Vec adapted_chi(const GradedNilpotentDatum& d) {
    Vec out;
    for (const auto& row : d.adapted_rows) out.push_back(dot(d.field(), d.chi, row));
    return out;
}

} // namespace

WContext::WContext(std::shared_ptr<const GradedNilpotentDatum> d, int cap)
    : d_(std::move(d)),
      cap_(cap),
      to_ad_(FMatrix::from_rows(d_->field(), d_->adapted_rows, d_->dim()).inverse()->transpose()),
      chi_ad_(adapted_chi(*d_)),
      ug_(d_->adapted, ug_config(*d_, cap)),
      q_(d_->adapted, q_config(*d_, cap, chi_ad_)) {}

Torus WContext::torus_of(const Mono& a) const {
    Torus t(d_->pyramid.rows(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t r = 0; r < t.size(); ++r) t[r] += a[i] * d_->adapted_torus[i][r];
    return t;
}

Vec WContext::to_adapted(const Vec& x) const { return to_ad_.apply(x); }

Vec WContext::from_adapted(const Vec& y) const {
    Vec out(d_->dim(), 0);
    for (int k = 0; k < d_->dim(); ++k)
        if (y[k]) vec_axpy(field(), out, y[k], d_->adapted_rows[k]);
    return out;
}

Elem WContext::straighten_multiply(const Elem& u, const Elem& v) { return ug_.act_elem(u, v); }

Elem WContext::reduce_mod_I(const Elem& u) const {
    const Field& f = field();
    const int md = d_->mdim;
    Elem out;
    for (const auto& [m, c] : u) {
        Res s = c;
        for (std::size_t k = md; k < m.size() && s; ++k) s = f.mul(s, f.pow(chi_ad_[k], m[k]));
        if (!s) continue;
        Mono head(m.begin(), m.begin() + md);
        elem_axpy(f, out, s, elem_monomial(std::move(head)));
    }
    return out;
}

Elem WContext::rep(const Elem& q) const {
    Elem out;
    for (const auto& [m, c] : q) {
        Mono full = m;
        full.resize(d_->dim(), 0);
        out.emplace(std::move(full), c);
    }
    return out;
}

Elem WContext::q_multiply(const Elem& a, const Elem& b) { return q_.act_elem(a, b); }

Elem WContext::act_on_q(const Vec& x, const Elem& q) { return q_.act_linear(to_adapted(x), q); }

Elem WContext::ad_action(const Vec& x, const Elem& q) {
    for (int i = 0; i < d_->dim(); ++i)
        if (x[i] && std::find(d_->n_units.begin(), d_->n_units.end(), i) == d_->n_units.end())
            throw WalgError(ErrorKind::NotInM, format_vector(*d_->algebra, x) + " is not in n");
    Elem xq = act_on_q(x, q_.one());
    return elem_sub(field(), act_on_q(x, q), q_multiply(q, xq));
}

const std::vector<Vec>& WContext::factor_images(int unit, int k) {
    auto key = std::make_pair(unit, k);
    auto it = factor_cache_.find(key);
    if (it != factor_cache_.end()) return it->second;
    const RestrictedLieAlgebra& L = *d_->algebra;
    const Field& f = field();
    FMatrix X = L.to_matrix(d_->adapted_rows[k]);
    FMatrix E = L.to_matrix(L.unit(unit));
    FMatrix Y1 = E * X - X * E;
    FMatrix Y2 = (E * X * E).scaled(f.neg(1 % f.p()));
    std::vector<Vec> imgs{to_adapted(L.from_matrix(X)), to_adapted(L.from_matrix(Y1)), to_adapted(L.from_matrix(Y2))};
    return factor_cache_.emplace(key, std::move(imgs)).first->second;
}

const std::vector<Elem>& WContext::group_action_mono(int unit, const Mono& a) {
    auto& memo = group_memo_[unit];
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    std::vector<Elem> state{q_.one()};
    for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k)
        for (int rep = 0; rep < a[k]; ++rep) {
            const auto& Y = factor_images(unit, k);
            std::vector<Elem> next(state.size() + 2);
            for (std::size_t s = 0; s < state.size(); ++s)
                for (int j = 0; j < 3; ++j)
                    if (!is_zero_vec(Y[j]) && !state[s].empty())
                        elem_axpy(field(), next[s + j], 1, q_.act_linear(Y[j], state[s]));
            state = std::move(next);
        }
    while (state.size() > 1 && state.back().empty()) state.pop_back();
    return memo.emplace(a, std::move(state)).first->second;
}

std::vector<Elem> WContext::group_action(int unit, const Elem& q) {
    if (std::find(d_->n_units.begin(), d_->n_units.end(), unit) == d_->n_units.end())
        throw WalgError(ErrorKind::NotInM, d_->algebra->label(unit) + " does not generate a root subgroup of N");
    std::vector<Elem> out;
    for (const auto& [m, c] : q) {
        const auto& img = group_action_mono(unit, m);
        if (out.size() < img.size()) out.resize(img.size());
        for (std::size_t k = 0; k < img.size(); ++k) elem_axpy(field(), out[k], c, img[k]);
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

std::vector<Mono> WContext::filtered_basis(int j) const {
    const int n = d_->mdim;
    std::vector<Mono> out;
    Mono cur(n, 0);
    std::function<void(int, int)> rec = [&](int var, int budget) {
        if (var == n) {
            out.push_back(cur);
            return;
        }
        int deg = d_->kazhdan[var];
        for (int e = 0; e * deg <= budget; ++e) {
            cur[var] = static_cast<std::uint16_t>(e);
            rec(var + 1, budget - e * deg);
        }
        cur[var] = 0;
    };
    if (j >= 0) rec(0, j);
    std::sort(out.begin(), out.end());
    return out;
}

long long monomial_count(const std::vector<int>& degrees, int j) {
    if (j < 0) return 0;
    std::vector<long long> ways(j + 1, 0);
    ways[0] = 1;
    for (int d : degrees) {
        if (d <= 0) throw std::invalid_argument("generator degrees must be positive");
        for (int s = d; s <= j; ++s) ways[s] += ways[s - d];
    }
    long long total = 0;
    for (auto w : ways) total += w;
    return total;
}

int default_cap(const GradedNilpotentDatum& d) { return 2 * d.max_ge_degree() + 6; }

} // namespace walg
