#include "walg/walg.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace walg {

std::vector<int> ge_degrees(const GradedNilpotentDatum& d) {
    return std::vector<int>(d.kazhdan.begin(), d.kazhdan.begin() + d.r);
}

std::vector<int> uhat_degrees(const GradedNilpotentDatum& d) {
    std::vector<int> out = ge_degrees(d);
    for (int k = d.r; k < d.mdim; ++k) out.push_back(d.prime() * d.kazhdan[k]);
    return out;
}

namespace {

using RowKey = std::tuple<int, int, Mono>;

/// Columns in increasing (degree, monomial) order, so the top monomial of a kernel vector is its
/// last nonzero entry.
std::vector<Mono> order_columns(std::vector<Mono> cols, const std::vector<int>& kaz) {
    std::sort(cols.begin(), cols.end(), [&](const Mono& a, const Mono& b) {
        int da = mono_degree(a, kaz), db = mono_degree(b, kaz);
        return da != db ? da < db : a < b;
    });
    return cols;
}

InvariantSpace solve_invariants(WContext& ctx, int j, InvariantFlavor flavor, bool check) {
    const GradedNilpotentDatum& d = ctx.datum();
    const Field& f = ctx.field();
    if (flavor == InvariantFlavor::Lie && !d.lagrangian())
        throw WalgError(ErrorKind::Unsupported, "Lie invariants need a Lagrangian l");
    if (j > ctx.cap())
        throw WalgError(ErrorKind::CapTooSmall,
                        "degree " + std::to_string(j) + " above cap " + std::to_string(ctx.cap()));
    InvariantSpace inv;
    inv.bound = j;
    inv.flavor = flavor;
    inv.reduction = flavor == InvariantFlavor::Group
                        ? "group invariance imposed on root subgroups 1+tE, E a matrix unit of n; each t-power separately"
                        : "annihilated by ad(z) for z in a basis of n";
    std::map<Torus, std::vector<Mono>> blocks;
    for (auto& m : ctx.filtered_basis(j)) blocks[ctx.torus_of(m)].push_back(m);

    for (auto& [torus, monos] : blocks) {
        auto cols = order_columns(monos, d.kazhdan);
        std::map<RowKey, SparseVec> rows;
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            for (int u : d.n_units) {
                if (flavor == InvariantFlavor::Group) {
                    const auto& img = ctx.group_action_mono(u, cols[c]);
                    for (int k = 1; k < static_cast<int>(img.size()); ++k)
                        for (const auto& [tm, coef] : img[k]) rows[{u, k, tm}].push_back({c, coef});
                } else {
                    Elem img = ctx.ad_action(d.algebra->unit(u), elem_monomial(cols[c]));
                    for (const auto& [tm, coef] : img) rows[{u, 0, tm}].push_back({c, coef});
                }
            }
        }
        std::vector<SparseVec> rv;
        rv.reserve(rows.size());
        for (auto& [k, r] : rows) rv.push_back(std::move(r));
        auto ker = kernel_auto(f, rv, static_cast<int>(cols.size()));
        for (const auto& v : ker) {
            Elem e;
            int top = -1;
            for (int c = 0; c < static_cast<int>(v.size()); ++c)
                if (v[c]) {
                    e.emplace(cols[c], v[c]);
                    top = c;
                }
            inv.basis.push_back(std::move(e));
            inv.pivot_degree.push_back(mono_degree(cols[top], d.kazhdan));
            inv.block.push_back(torus);
        }
    }
    auto degrees = flavor == InvariantFlavor::Group ? ge_degrees(d) : uhat_degrees(d);
    for (int k = 0; k <= j; ++k) {
        inv.dims.push_back(std::count_if(inv.pivot_degree.begin(), inv.pivot_degree.end(),
                                         [&](int pd) { return pd <= k; }));
        inv.expected.push_back(monomial_count(degrees, k));
    }
    if (check)
        for (int k = 0; k <= j; ++k)
            if (inv.dims[k] != inv.expected[k])
                throw WalgError(ErrorKind::DimensionMismatch,
                                std::string(flavor == InvariantFlavor::Group ? "group" : "lie") + " invariants: dim F_" +
                                    std::to_string(k) + " = " + std::to_string(inv.dims[k]) + ", expected " +
                                    std::to_string(inv.expected[k]));
    return inv;
}

/// Dense coordinates of elements over the union of their monomials, columns ordered by
/// (degree, monomial) descending so leftmost pivots are top monomials.
struct Coordinates {
    std::vector<Mono> cols;
    std::map<Mono, int> index;

    Coordinates(const std::vector<const Elem*>& elems, const std::vector<int>& kaz) {
        std::set<Mono> all;
        for (const auto* e : elems)
            for (const auto& [m, c] : *e) all.insert(m);
        cols = order_columns({all.begin(), all.end()}, kaz);
        std::reverse(cols.begin(), cols.end());
        for (int i = 0; i < static_cast<int>(cols.size()); ++i) index[cols[i]] = i;
    }
    Vec dense(const Elem& e) const {
        Vec v(cols.size(), 0);
        for (const auto& [m, c] : e) v[index.at(m)] = c;
        return v;
    }
    Elem sparse(const Vec& v) const {
        Elem e;
        for (int i = 0; i < static_cast<int>(v.size()); ++i)
            if (v[i]) e.emplace(cols[i], v[i]);
        return e;
    }
};

/// Rank of a family and whether every member of `family` lies in span(`space`).
std::pair<int, bool> rank_and_containment(const Field& f, const std::vector<Elem>& family,
                                          const std::vector<Elem>& space, const std::vector<int>& kaz) {
    std::vector<const Elem*> ptrs;
    for (const auto& e : family) ptrs.push_back(&e);
    for (const auto& e : space) ptrs.push_back(&e);
    Coordinates co(ptrs, kaz);
    EchelonBuilder fam(f, static_cast<int>(co.cols.size()));
    for (const auto& e : family) fam.insert(co.dense(e));
    EchelonBuilder sp(f, static_cast<int>(co.cols.size()));
    for (const auto& e : space) sp.insert(co.dense(e));
    bool contained = true;
    for (const auto& e : family)
        if (!sp.in_span(co.dense(e))) contained = false;
    return {fam.rank(), contained};
}

std::string mono_text(const Mono& m) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
    os << ")";
    return os.str();
}

Mono unit_mono(int n, int k) {
    Mono m(n, 0);
    m[k] = 1;
    return m;
}

bool group_invariant(WContext& ctx, const Elem& q, std::string* witness) {
    for (int u : ctx.datum().n_units) {
        auto img = ctx.group_action(u, q);
        for (std::size_t k = 1; k < img.size(); ++k)
            if (!img[k].empty()) {
                if (witness)
                    *witness = "t^" + std::to_string(k) + " coefficient under " + ctx.datum().algebra->label(u) +
                               " is nonzero";
                return false;
            }
    }
    return true;
}

bool lie_invariant(WContext& ctx, const Elem& q, std::string* witness) {
    for (int u : ctx.datum().n_units)
        if (!ctx.ad_action(ctx.datum().algebra->unit(u), q).empty()) {
            if (witness) *witness = "ad " + ctx.datum().algebra->label(u) + " is nonzero";
            return false;
        }
    return true;
}

Elem commutator(WContext& ctx, const Elem& a, const Elem& b) {
    return elem_sub(ctx.field(), ctx.q_multiply(a, b), ctx.q_multiply(b, a));
}

} // namespace

InvariantSpace invariants_group(WContext& ctx, int j, bool check) {
    return solve_invariants(ctx, j, InvariantFlavor::Group, check);
}

InvariantSpace invariants_lie(WContext& ctx, int j, bool check) {
    return solve_invariants(ctx, j, InvariantFlavor::Lie, check);
}

std::vector<Elem> invariants_in_block(const InvariantSpace& inv, const Torus& block, int j) {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < inv.basis.size(); ++i)
        if (inv.block[i] == block && inv.pivot_degree[i] <= j) out.push_back(inv.basis[i]);
    return out;
}

WPresentation pbw_generators(WContext& ctx, const InvariantSpace& inv) {
    const GradedNilpotentDatum& d = ctx.datum();
    const Field& f = ctx.field();
    const int nv = d.mdim;
    WPresentation w;
    int maxd = 0;
    for (int i = 0; i < d.r; ++i) maxd = std::max(maxd, d.kazhdan[i]);
    if (inv.bound < maxd)
        throw WalgError(ErrorKind::CapTooSmall, "invariants needed through degree " + std::to_string(maxd));

    CheckRecord leading{"theta_leading_term", true, "", nlohmann::json::object()};
    CheckRecord stray{"theta_no_stray_linear_term", true, "", nlohmann::json::object()};
    CheckRecord parity{f.p() == 2 ? "theta_even_degrees" : "theta_parity", true, "", nlohmann::json::object()};
    CheckRecord weight{"theta_torus_weight", true, "", nlohmann::json::object()};
    CheckRecord invariant{"theta_invariant", true, "", nlohmann::json::object()};

    for (int i = 0; i < d.r; ++i) {
        const int di = d.kazhdan[i];
        const Torus& alpha = d.adapted_torus[i];
        auto V = invariants_in_block(inv, alpha, di);
        // Pure g^e monomials of top degree in this block.
        std::vector<Mono> targets;
        for (auto& m : ctx.filtered_basis(di)) {
            if (ctx.kazhdan_of(m) != di || ctx.torus_of(m) != alpha) continue;
            bool pure = true;
            for (int k = d.r; k < nv; ++k)
                if (m[k]) pure = false;
            if (pure) targets.push_back(m);
        }
        FMatrix A(f, static_cast<int>(targets.size()), static_cast<int>(V.size()));
        Vec b(targets.size(), 0);
        const Mono xi = unit_mono(nv, i);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (targets[t] == xi) b[t] = 1 % f.p();
            for (std::size_t v = 0; v < V.size(); ++v) {
                auto it = V[v].find(targets[t]);
                if (it != V[v].end()) A.at(static_cast<int>(t), static_cast<int>(v)) = it->second;
            }
        }
        auto sol = A.solve(b);
        if (!sol)
            throw WalgError(ErrorKind::SelectionFailed,
                            "no invariant with leading term " + d.adapted->label(i));
        Elem theta;
        for (std::size_t v = 0; v < V.size(); ++v) elem_axpy(f, theta, (*sol)[v], V[v]);
        // Remove the ambiguity: reduce at the pivots of the echelon basis of solutions of A c = 0.
        std::vector<Elem> amb;
        for (const auto& kv : A.kernel()) {
            Elem e;
            for (std::size_t v = 0; v < V.size(); ++v) elem_axpy(f, e, kv[v], V[v]);
            if (!e.empty()) amb.push_back(std::move(e));
        }
        if (!amb.empty()) {
            std::vector<const Elem*> ptrs{&theta};
            for (const auto& e : amb) ptrs.push_back(&e);
            Coordinates co(ptrs, d.kazhdan);
            EchelonBuilder eb(f, static_cast<int>(co.cols.size()));
            for (const auto& e : amb) eb.insert(co.dense(e));
            theta = co.sparse(eb.reduce(co.dense(theta)));
        }

        Elem top = homogeneous_part(theta, d.kazhdan, di);
        for (const auto& [m, c] : top) {
            bool pure = true;
            for (int k = d.r; k < nv; ++k)
                if (m[k]) pure = false;
            if (pure && (m == xi ? c != 1 % f.p() : c != 0) && leading.pass) {
                leading.pass = false;
                leading.witness = "Theta_" + std::to_string(i) + " has " + mono_text(m);
            }
            if (mono_total(m) == 1 && m != xi && stray.pass) {
                stray.pass = false;
                stray.witness = "Theta_" + std::to_string(i) + " contains linear " + mono_text(m);
            }
        }
        for (const auto& [m, c] : theta) {
            int dm = ctx.kazhdan_of(m);
            bool bad = f.p() == 2 ? (dm % 2 != 0) : ((dm - di) % 2 != 0);
            if (bad && parity.pass) {
                parity.pass = false;
                parity.witness = "Theta_" + std::to_string(i) + " term " + mono_text(m);
            }
            if (ctx.torus_of(m) != alpha && weight.pass) {
                weight.pass = false;
                weight.witness = "Theta_" + std::to_string(i) + " term " + mono_text(m);
            }
        }
        std::string wit;
        bool ok = inv.flavor == InvariantFlavor::Group ? group_invariant(ctx, theta, &wit) : lie_invariant(ctx, theta, &wit);
        if (!ok && invariant.pass) {
            invariant.pass = false;
            invariant.witness = "Theta_" + std::to_string(i) + ": " + wit;
        }
        w.theta.push_back(std::move(theta));
        w.degree.push_back(di);
        w.torus.push_back(alpha);
    }
    w.checks = {leading, stray, parity, weight, invariant};
    return w;
}

ThetaMonomials::ThetaMonomials(WContext& ctx, const std::vector<Elem>& gens, std::vector<int> degrees)
    : ctx_(ctx), gens_(gens), deg_(std::move(degrees)) {}

const Elem& ThetaMonomials::get(const Mono& b) {
    auto it = cache_.find(b);
    if (it != cache_.end()) return it->second;
    int i = 0;
    while (i < static_cast<int>(b.size()) && b[i] == 0) ++i;
    Elem val;
    if (i == static_cast<int>(b.size())) {
        val = ctx_.q().one();
    } else {
        Mono rest = b;
        --rest[i];
        val = ctx_.q_multiply(gens_[i], get(rest));
    }
    return cache_.emplace(b, std::move(val)).first->second;
}

std::vector<Mono> ThetaMonomials::exponents(int j) const {
    const int n = static_cast<int>(deg_.size());
    std::vector<Mono> out;
    Mono cur(n, 0);
    std::function<void(int, int)> rec = [&](int var, int budget) {
        if (var == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e * deg_[var] <= budget; ++e) {
            cur[var] = static_cast<std::uint16_t>(e);
            rec(var + 1, budget - e * deg_[var]);
        }
        cur[var] = 0;
    };
    if (j >= 0) rec(0, j);
    std::sort(out.begin(), out.end());
    return out;
}

CheckRecord monomial_basis_check(WContext& ctx, const WPresentation& w, const InvariantSpace& inv, int j) {
    CheckRecord rec{"pbw_monomial_basis", true, "", nlohmann::json::object()};
    ThetaMonomials tm(ctx, w.theta, w.degree);
    std::vector<Elem> fam;
    for (const auto& b : tm.exponents(j)) fam.push_back(tm.get(b));
    std::vector<Elem> space;
    for (std::size_t i = 0; i < inv.basis.size(); ++i)
        if (inv.pivot_degree[i] <= j) space.push_back(inv.basis[i]);
    auto [rank, contained] = rank_and_containment(ctx.field(), fam, space, ctx.kazhdan());
    rec.data = {{"degree", j}, {"products", fam.size()}, {"rank", rank}, {"invariant_dim", space.size()}};
    rec.pass = contained && rank == static_cast<int>(fam.size()) && fam.size() == space.size();
    if (!rec.pass)
        rec.witness = "rank " + std::to_string(rank) + " of " + std::to_string(fam.size()) + " products, invariant dim " +
                      std::to_string(space.size()) + (contained ? "" : ", a product is not invariant");
    return rec;
}

std::optional<Elem> expand_in_theta(WContext& ctx, ThetaMonomials& tm, const Elem& x, int bound) {
    auto exps = tm.exponents(bound);
    std::vector<const Elem*> ptrs{&x};
    for (const auto& b : exps) ptrs.push_back(&tm.get(b));
    Coordinates co(ptrs, ctx.kazhdan());
    FMatrix A(ctx.field(), static_cast<int>(co.cols.size()), static_cast<int>(exps.size()));
    for (std::size_t c = 0; c < exps.size(); ++c) A.set_col(static_cast<int>(c), co.dense(tm.get(exps[c])));
    auto sol = A.solve(co.dense(x));
    if (!sol) return std::nullopt;
    if (A.apply(*sol) != co.dense(x)) return std::nullopt;
    Elem out;
    for (std::size_t c = 0; c < exps.size(); ++c)
        if ((*sol)[c]) out.emplace(exps[c], (*sol)[c]);
    return out;
}

std::vector<std::pair<int, int>> all_pairs(int r) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out.emplace_back(i, j);
    return out;
}

StructureConstants structure_constants(WContext& ctx, const WPresentation& w,
                                       const std::vector<std::pair<int, int>>& pairs) {
    const GradedNilpotentDatum& d = ctx.datum();
    const Field& f = ctx.field();
    const RestrictedLieAlgebra& L = *d.algebra;
    const int r = d.r;
    StructureConstants sc;
    ThetaMonomials tm(ctx, w.theta, w.degree);
    FMatrix geT = FMatrix::from_rows(f, d.ge, d.dim()).transpose();

    CheckRecord inspan{"commutator_in_filtered_span", true, "", nlohmann::json::object()};
    CheckRecord lead{"commutator_leading_term", true, "", nlohmann::json::object()};
    CheckRecord anti{"commutator_antisymmetry", true, "", nlohmann::json::object()};
    for (auto [i, j] : pairs) {
        Elem comm = commutator(ctx, w.theta[i], w.theta[j]);
        int bound = std::max(0, w.degree[i] + w.degree[j] - 2);
        auto ex = expand_in_theta(ctx, tm, comm, bound);
        if (!ex) {
            if (inspan.pass) {
                inspan.pass = false;
                inspan.witness = "[Theta_" + std::to_string(i) + ",Theta_" + std::to_string(j) + "] outside F_" +
                                 std::to_string(bound);
            }
            continue;
        }
        auto c = geT.solve(L.bracket(d.ge[i], d.ge[j]));
        if (!c) {
            lead.pass = false;
            lead.witness = "[x_" + std::to_string(i) + ",x_" + std::to_string(j) + "] outside g^e";
        } else {
            for (int k = 0; k < r; ++k) {
                const int top = w.degree[i] + w.degree[j] - 2;
                if (w.degree[k] != top && w.degree[k] != top - 1) continue;
                auto it = ex->find(unit_mono(r, k));
                Res got = it == ex->end() ? 0 : it->second;
                Res want = w.degree[k] == top ? (*c)[k] : 0;
                if (got != want && lead.pass) {
                    lead.pass = false;
                    lead.witness = "[Theta_" + std::to_string(i) + ",Theta_" + std::to_string(j) + "] coefficient of Theta_" +
                                   std::to_string(k) + " is " + std::to_string(got) + ", expected " + std::to_string(want);
                }
            }
        }
        sc.expansion[{i, j}] = std::move(*ex);
    }
    for (const auto& [key, ex] : sc.expansion) {
        auto it = sc.expansion.find({key.second, key.first});
        if (it == sc.expansion.end()) continue;
        Elem sum = ex;
        elem_axpy(f, sum, 1, it->second);
        if (!sum.empty() && anti.pass) {
            anti.pass = false;
            anti.witness = "pair (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
        }
    }
    sc.checks = {inspan, lead, anti};
    return sc;
}

CheckRecord jacobi_check(WContext& ctx, const WPresentation& w) {
    CheckRecord rec{"commutator_jacobi", true, "", nlohmann::json::object()};
    const int r = static_cast<int>(w.theta.size());
    int checked = 0, skipped = 0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            for (int k = j + 1; k < r; ++k) {
                if (w.degree[i] + w.degree[j] + w.degree[k] - 2 > ctx.cap()) {
                    ++skipped;
                    continue;
                }
                Elem s = commutator(ctx, commutator(ctx, w.theta[i], w.theta[j]), w.theta[k]);
                elem_axpy(ctx.field(), s, 1, commutator(ctx, commutator(ctx, w.theta[j], w.theta[k]), w.theta[i]));
                elem_axpy(ctx.field(), s, 1, commutator(ctx, commutator(ctx, w.theta[k], w.theta[i]), w.theta[j]));
                ++checked;
                if (!s.empty() && rec.pass) {
                    rec.pass = false;
                    rec.witness = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
                }
            }
    rec.data = {{"checked", checked}, {"skipped_above_cap", skipped}};
    return rec;
}

Elem symbol_product(const Field& f, const Elem& a, const Elem& b) {
    Elem out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Mono m = ma;
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint16_t>(m[i] + mb[i]);
            elem_axpy(f, out, f.mul(ca, cb), elem_monomial(std::move(m)));
        }
    return out;
}

Elem homogeneous_part(const Elem& x, const std::vector<int>& degrees, int deg) {
    Elem out;
    for (const auto& [m, c] : x)
        if (mono_degree(m, degrees) == deg) out.emplace(m, c);
    return out;
}

int pcentre_cap(const GradedNilpotentDatum& d) {
    int maxall = 0, maxge = 0;
    for (int k = 0; k < d.mdim; ++k) maxall = std::max(maxall, d.kazhdan[k]);
    for (int k = 0; k < d.r; ++k) maxge = std::max(maxge, d.kazhdan[k]);
    return d.prime() * maxall + maxge;
}

void pcentre_generators(WContext& ctx, WPresentation& w) {
    const GradedNilpotentDatum& d = ctx.datum();
    const Field& f = ctx.field();
    const int p = d.prime();
    int maxd = 0;
    for (int k = 0; k < d.mdim; ++k) maxd = std::max(maxd, d.kazhdan[k]);
    if (ctx.cap() < p * maxd)
        throw WalgError(ErrorKind::CapTooSmall,
                        "cap " + std::to_string(ctx.cap()) + " below p(max n + 2) = " + std::to_string(p * maxd));
    auto xi = [&](int k, const Elem& q) {
        Elem a = q;
        for (int t = 0; t < p; ++t) a = ctx.q().act(k, a);
        Elem b = ctx.q().act_linear(d.adapted->pmap(d.adapted->unit(k)), q);
        return elem_sub(f, a, b);
    };
    w.phi.clear();
    w.theta_hat.clear();
    for (int i = 0; i < d.r; ++i) {
        Elem top = homogeneous_part(w.theta[i], d.kazhdan, w.degree[i]);
        Elem phi;
        for (const auto& [m, c] : top) {
            Elem term = ctx.q().one();
            for (int k = 0; k < d.mdim; ++k)
                for (int e = 0; e < m[k]; ++e) term = xi(k, term);
            elem_axpy(f, phi, c, term);
        }
        w.phi.push_back(std::move(phi));
    }
    for (int k = d.r; k < d.mdim; ++k) w.theta_hat.push_back(xi(k, ctx.q().one()));

    CheckRecord ginv{"phi_group_invariant", true, "", nlohmann::json::object()};
    CheckRecord linv{"theta_hat_lie_invariant", true, "", nlohmann::json::object()};
    CheckRecord sym{"phi_symbol_is_pth_power", true, "", nlohmann::json::object()};
    CheckRecord pc{"phi_central", true, "", nlohmann::json::object()};
    CheckRecord hc{"theta_hat_central", true, "", nlohmann::json::object()};
    int pc_checked = 0, pc_skipped = 0, hc_checked = 0, hc_skipped = 0;
    for (int i = 0; i < d.r; ++i) {
        std::string wit;
        if (!group_invariant(ctx, w.phi[i], &wit) && ginv.pass) {
            ginv.pass = false;
            ginv.witness = "Phi_" + std::to_string(i) + ": " + wit;
        }
        Elem top = homogeneous_part(w.theta[i], d.kazhdan, w.degree[i]);
        Elem pw = elem_constant(d.mdim, 1);
        for (int t = 0; t < p; ++t) pw = symbol_product(f, pw, top);
        if (homogeneous_part(w.phi[i], d.kazhdan, p * w.degree[i]) != pw || elem_degree(w.phi[i], d.kazhdan) != p * w.degree[i]) {
            if (sym.pass) {
                sym.pass = false;
                sym.witness = "Phi_" + std::to_string(i);
            }
        }
        for (int j = 0; j < d.r; ++j) {
            if (p * w.degree[i] + w.degree[j] > ctx.cap()) {
                ++pc_skipped;
                continue;
            }
            ++pc_checked;
            if (!commutator(ctx, w.phi[i], w.theta[j]).empty() && pc.pass) {
                pc.pass = false;
                pc.witness = "[Phi_" + std::to_string(i) + ",Theta_" + std::to_string(j) + "] != 0";
            }
        }
    }
    for (std::size_t h = 0; h < w.theta_hat.size(); ++h) {
        std::string wit;
        if (d.lagrangian() && !lie_invariant(ctx, w.theta_hat[h], &wit) && linv.pass) {
            linv.pass = false;
            linv.witness = "Theta_hat_" + std::to_string(h) + ": " + wit;
        }
        const int dh = p * d.kazhdan[d.r + static_cast<int>(h)];
        for (int j = 0; j < d.r; ++j) {
            if (dh + w.degree[j] > ctx.cap()) {
                ++hc_skipped;
                continue;
            }
            ++hc_checked;
            if (!commutator(ctx, w.theta_hat[h], w.theta[j]).empty() && hc.pass) {
                hc.pass = false;
                hc.witness = "[Theta_hat_" + std::to_string(h) + ",Theta_" + std::to_string(j) + "] != 0";
            }
        }
    }
    pc.data = {{"checked", pc_checked}, {"skipped_above_cap", pc_skipped}};
    hc.data = {{"checked", hc_checked}, {"skipped_above_cap", hc_skipped}};
    for (auto& c : {ginv, linv, sym, pc, hc}) w.checks.push_back(c);
}

CheckRecord verify_uhat_decomposition(WContext& ctx, const WPresentation& w, const InvariantSpace& lie, int j) {
    const GradedNilpotentDatum& d = ctx.datum();
    CheckRecord rec{"uhat_decomposition", true, "", nlohmann::json::object()};
    std::vector<Elem> gens = w.theta;
    gens.insert(gens.end(), w.theta_hat.begin(), w.theta_hat.end());
    ThetaMonomials tm(ctx, gens, uhat_degrees(d));
    std::vector<Elem> fam;
    for (const auto& b : tm.exponents(j)) fam.push_back(tm.get(b));
    std::vector<Elem> space;
    for (std::size_t i = 0; i < lie.basis.size(); ++i)
        if (lie.pivot_degree[i] <= j) space.push_back(lie.basis[i]);
    auto [rank, contained] = rank_and_containment(ctx.field(), fam, space, ctx.kazhdan());
    rec.pass = contained && rank == static_cast<int>(fam.size()) && fam.size() == space.size() &&
               static_cast<long long>(fam.size()) == monomial_count(uhat_degrees(d), j);
    rec.data = {{"degree", j}, {"products", fam.size()}, {"rank", rank}, {"lie_invariant_dim", space.size()}};
    if (!rec.pass) rec.witness = "rank " + std::to_string(rank) + " of " + std::to_string(fam.size());
    return rec;
}

CheckRecord verify_q_freeness(WContext& ctx, const WPresentation& w, int j) {
    const GradedNilpotentDatum& d = ctx.datum();
    CheckRecord rec{"q_free_over_w", true, "", nlohmann::json::object()};
    ThetaMonomials tm(ctx, w.theta, w.degree);
    auto all = ctx.filtered_basis(j);
    std::vector<Elem> fam;
    for (const auto& a : all) {
        bool only_bar_a = true;
        for (int k = 0; k < d.r; ++k)
            if (a[k]) only_bar_a = false;
        if (!only_bar_a) continue;
        for (const auto& b : tm.exponents(j - ctx.kazhdan_of(a)))
            fam.push_back(ctx.q_multiply(elem_monomial(a), tm.get(b)));
    }
    std::vector<const Elem*> ptrs;
    for (const auto& e : fam) ptrs.push_back(&e);
    Coordinates co(ptrs, ctx.kazhdan());
    EchelonBuilder eb(ctx.field(), static_cast<int>(co.cols.size()));
    for (const auto& e : fam) eb.insert(co.dense(e));
    rec.pass = eb.rank() == static_cast<int>(fam.size()) && fam.size() == all.size();
    rec.data = {{"degree", j}, {"products", fam.size()}, {"rank", eb.rank()}, {"dim_FjQ", all.size()}};
    if (!rec.pass) rec.witness = "rank " + std::to_string(eb.rank()) + ", dim F_j Q " + std::to_string(all.size());
    return rec;
}

WSummary summarize(WContext& ctx, int j) {
    WSummary s;
    int maxd = 0;
    for (int k = 0; k < ctx.datum().r; ++k) maxd = std::max(maxd, ctx.datum().kazhdan[k]);
    s.group = invariants_group(ctx, std::max(j, maxd), false);
    s.pres = pbw_generators(ctx, s.group);
    s.sc = structure_constants(ctx, s.pres, all_pairs(ctx.datum().r));
    return s;
}

CheckRecord verify_independence(WContext& a, WContext& b, int j) {
    CheckRecord rec{"independence", true, "", nlohmann::json::object()};
    WSummary sa = summarize(a, j), sb = summarize(b, j);
    std::vector<long long> da(sa.group.dims.begin(), sa.group.dims.begin() + j + 1);
    std::vector<long long> db(sb.group.dims.begin(), sb.group.dims.begin() + j + 1);
    bool dims_equal = da == db;

    auto profile = [](const WSummary& s, int i) {
        std::vector<std::pair<int, int>> prof;
        const int r = static_cast<int>(s.pres.theta.size());
        for (int k = 0; k < r; ++k) {
            auto it = s.sc.expansion.find({i, k});
            int deg = -1;
            if (it != s.sc.expansion.end())
                for (const auto& [m, c] : it->second) deg = std::max(deg, mono_degree(m, s.pres.degree));
            prof.emplace_back(s.pres.degree[k], deg);
        }
        std::sort(prof.begin(), prof.end());
        return prof;
    };
    const int ra = static_cast<int>(sa.pres.theta.size()), rb = static_cast<int>(sb.pres.theta.size());
    std::vector<int> match(ra, -1);
    std::vector<bool> used(rb, false);
    bool matched = ra == rb;
    std::vector<int> order(ra);
    for (int i = 0; i < ra; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sa.pres.degree[x] < sa.pres.degree[y]; });
    for (int i : order) {
        auto pi = profile(sa, i);
        for (int k = 0; k < rb; ++k)
            if (!used[k] && sb.pres.degree[k] == sa.pres.degree[i] && profile(sb, k) == pi) {
                match[i] = k;
                used[k] = true;
                break;
            }
        if (match[i] < 0) matched = false;
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (int i = 0; i < ra; ++i) pairs.push_back({i, match[i]});
    rec.data = {{"dims_a", da},
                {"dims_b", db},
                {"certificate", {{"level", matched ? "matched" : "dimensions-only"}, {"matching", pairs}}}};
    rec.pass = dims_equal && matched;
    if (!dims_equal) rec.witness = "filtered dimensions differ";
    else if (!matched) rec.witness = "no degree- and profile-preserving generator matching";
    return rec;
}

} // namespace walg
