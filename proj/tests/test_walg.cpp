#include <doctest.h>

#include <map>

#include "test_support.hpp"

using namespace walg;

namespace {

// Polynomial-algebra count by brute force over exponent vectors.
long long brute_count(const std::vector<int>& degrees, int j, std::size_t k = 0) {
    if (k == degrees.size()) return 1;
    long long total = 0;
    for (int used = 0; used <= j; used += degrees[k]) total += brute_count(degrees, j - used, k + 1);
    return total;
}

// dim of the common kernel in F_j Q of a family of linear maps Q -> Q, assembled from scratch.
long long kernel_dim(WContext& ctx, int j, const std::function<std::vector<Elem>(const Elem&)>& maps) {
    auto basis = ctx.filtered_basis(j);
    std::map<std::pair<std::size_t, Mono>, int> row_of;
    std::vector<std::vector<std::pair<int, Res>>> cols(basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) {
        auto imgs = maps(elem_monomial(basis[c]));
        for (std::size_t s = 0; s < imgs.size(); ++s)
            for (const auto& [m, v] : imgs[s]) {
                auto key = std::make_pair(s, m);
                auto it = row_of.emplace(key, static_cast<int>(row_of.size())).first;
                cols[c].push_back({it->second, v});
            }
    }
    if (row_of.empty()) return static_cast<long long>(basis.size());
    FMatrix M(ctx.field(), static_cast<int>(row_of.size()), static_cast<int>(basis.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (auto [r, v] : cols[c]) M.at(r, static_cast<int>(c)) = v;
    return static_cast<long long>(basis.size()) - M.rank();
}

long long group_oracle(WContext& ctx, int j) {
    const auto& d = ctx.datum();
    return kernel_dim(ctx, j, [&](const Elem& q) {
        std::vector<Elem> out;
        for (int unit : d.n_units) {
            auto ga = ctx.group_action(unit, q);
            for (std::size_t k = 1; k < 8; ++k) out.push_back(k < ga.size() ? ga[k] : Elem{});
        }
        return out;
    });
}

long long lie_oracle(WContext& ctx, int j) {
    const auto& d = ctx.datum();
    return kernel_dim(ctx, j, [&](const Elem& q) {
        std::vector<Elem> out;
        for (const auto& x : d.m) out.push_back(ctx.ad_action(x, q));
        return out;
    });
}

Elem casimir_in_q(WContext& ctx, int n) {
    const auto& d = ctx.datum();
    const Field& f = ctx.field();
    const int D = d.dim();
    auto linear = [&](const Vec& y) {
        Elem x;
        for (int k = 0; k < D; ++k)
            if (y[k]) {
                Mono m(D, 0);
                m[k] = 1;
                x[m] = y[k];
            }
        return x;
    };
    Elem c;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            elem_axpy(f, c, 1,
                      ctx.straighten_multiply(linear(ctx.to_adapted(d.algebra->unit(gl_index(n, i, j)))),
                                              linear(ctx.to_adapted(d.algebra->unit(gl_index(n, j, i))))));
    return ctx.reduce_mod_I(c);
}

bool all_pass(const std::vector<CheckRecord>& recs) {
    for (const auto& r : recs)
        if (!r.pass) return false;
    return true;
}

} // namespace

TEST_CASE("filtered invariant dimensions for gl_2 at p = 3") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, pcentre_cap(*d));
    auto inv = invariants_group(ctx, 8);
    CHECK(inv.dims == std::vector<long long>{1, 1, 2, 2, 4, 4, 6, 6, 9});
    CHECK(inv.expected == inv.dims);
    CHECK(ge_degrees(*d) == std::vector<int>{2, 4});
    CHECK(uhat_degrees(*d) == std::vector<int>{2, 4, 6});
    auto lie = invariants_lie(ctx, 6);
    CHECK(lie.dims[2] == 2);
    CHECK(lie.dims[4] == 4);
    CHECK(lie.dims[6] == 7);
}

TEST_CASE("invariant dimensions agree with a from-scratch kernel computation") {
    struct Case {
        std::vector<int> part;
        std::uint64_t p;
        int j;
    };
    for (const auto& c : {Case{{2}, 3, 8}, Case{{2}, 5, 10}, Case{{3}, 2, 8}, Case{{2, 1}, 3, 6}}) {
        auto d = test::datum(c.part, c.p);
        WContext ctx(d, std::max(pcentre_cap(*d), c.j));
        auto grp = invariants_group(ctx, c.j);
        for (int j = 0; j <= c.j; ++j) {
            CHECK(grp.dims[j] == group_oracle(ctx, j));
            CHECK(grp.dims[j] == brute_count(ge_degrees(*d), j));
        }
        if (d->lagrangian()) {
            auto lie = invariants_lie(ctx, c.j);
            for (int j = 0; j <= c.j; ++j) {
                CHECK(lie.dims[j] == lie_oracle(ctx, j));
                CHECK(lie.dims[j] == brute_count(uhat_degrees(*d), j));
            }
        }
    }
}

TEST_CASE("gl_3 regular at p = 2 has two invariants through degree 2") {
    auto d = test::datum({3}, 2);
    WContext ctx(d, 12);
    auto inv = invariants_group(ctx, 2);
    CHECK(inv.dims[2] == 2);
    CHECK(ge_degrees(*d) == std::vector<int>{2, 4, 6});
}

TEST_CASE("Theta(E12) differs from half the Casimir by a polynomial in the identity") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, pcentre_cap(*d));
    auto inv = invariants_group(ctx, 4);
    auto w = pbw_generators(ctx, inv);
    REQUIRE(w.theta.size() == 2);
    CHECK(w.degree == std::vector<int>{2, 4});
    CHECK(w.theta[0] == elem_monomial(Mono{1, 0, 0}));
    const Field& f = ctx.field();
    Elem diff = elem_sub(f, w.theta[1], elem_scale(f, casimir_in_q(ctx, 2), f.inv(2)));
    for (const auto& [m, c] : diff) {
        CHECK(m[1] == 0);
        CHECK(m[2] == 0);
    }
    // Canonical normalisation: x1 + x2^2 + 2 x2 + 2 x0 x2.
    Elem expected{{Mono{0, 1, 0}, 1}, {Mono{0, 0, 2}, 1}, {Mono{0, 0, 1}, 2}, {Mono{1, 0, 1}, 2}};
    CHECK(w.theta[1] == expected);
    CHECK(all_pass(w.checks));
}

TEST_CASE("generators, relations and Jacobi on small cases") {
    for (auto [part, p] : {std::pair<std::vector<int>, std::uint64_t>{{2}, 5}, {{3}, 2}, {{2, 1}, 3}, {{3}, 3}}) {
        auto d = test::datum(part, p);
        WContext ctx(d, std::max(pcentre_cap(*d), 8));
        int J = std::max(6, d->max_ge_degree() + 2);
        auto inv = invariants_group(ctx, J);
        auto w = pbw_generators(ctx, inv);
        CHECK(static_cast<int>(w.theta.size()) == d->r);
        CHECK(all_pass(w.checks));
        CHECK(monomial_basis_check(ctx, w, inv, J).pass);
        auto sc = structure_constants(ctx, w, all_pairs(d->r));
        CHECK(all_pass(sc.checks));
        CHECK(jacobi_check(ctx, w).pass);
        // Regular nilpotents give a commutative algebra.
        if (part.size() == 1)
            for (const auto& [ij, e] : sc.expansion) CHECK(e.empty());
        // Oracle for antisymmetry: recompute commutators directly in Q.
        for (int i = 0; i < d->r; ++i)
            for (int j = 0; j < d->r; ++j) {
                Elem c = elem_sub(ctx.field(), ctx.q_multiply(w.theta[i], w.theta[j]), ctx.q_multiply(w.theta[j], w.theta[i]));
                if (part.size() == 1) CHECK(c.empty());
            }
    }
}

TEST_CASE("the gl_3 (2,1) algebra is not commutative") {
    auto d = test::datum({2, 1}, 3);
    WContext ctx(d, pcentre_cap(*d));
    auto inv = invariants_group(ctx, 6);
    auto w = pbw_generators(ctx, inv);
    bool some_nonzero = false;
    for (int i = 0; i < d->r; ++i)
        for (int j = 0; j < d->r; ++j)
            if (!elem_sub(ctx.field(), ctx.q_multiply(w.theta[i], w.theta[j]), ctx.q_multiply(w.theta[j], w.theta[i])).empty())
                some_nonzero = true;
    CHECK(some_nonzero);
}

TEST_CASE("p-centre generators are central with p-th power symbols") {
    for (auto [part, p] : {std::pair<std::vector<int>, std::uint64_t>{{2}, 3}, {{3}, 2}}) {
        auto d = test::datum(part, p);
        WContext ctx(d, pcentre_cap(*d));
        auto inv = invariants_group(ctx, d->max_ge_degree() + 2);
        auto w = pbw_generators(ctx, inv);
        pcentre_generators(ctx, w);
        CHECK(static_cast<int>(w.phi.size()) == d->r);
        CHECK(static_cast<int>(w.theta_hat.size()) == d->mdim - d->r);
        CHECK(all_pass(w.checks));
        for (std::size_t i = 0; i < w.phi.size(); ++i) {
            // Top Kazhdan degree of Phi_i is p times that of Theta_i.
            CHECK(elem_degree(w.phi[i], ctx.kazhdan()) == static_cast<int>(p) * w.degree[i]);
            for (const auto& t : w.theta)
                CHECK(ctx.q_multiply(w.phi[i], t) == ctx.q_multiply(t, w.phi[i]));
        }
        CHECK(verify_q_freeness(ctx, w, d->max_ge_degree() + 2).pass);
        auto lie = invariants_lie(ctx, std::max(d->max_ge_degree() + 2, static_cast<int>(p) * 2));
        CHECK(verify_uhat_decomposition(ctx, w, lie, lie.bound).pass);
    }
}

TEST_CASE("p-centre with too small a cap raises CapTooSmall") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, 8);
    auto inv = invariants_group(ctx, 4);
    auto w = pbw_generators(ctx, inv);
    try {
        pcentre_generators(ctx, w);
        FAIL("expected CapTooSmall");
    } catch (const WalgError& e) {
        CHECK(e.kind() == ErrorKind::CapTooSmall);
    }
    CHECK(pcentre_cap(*d) == 3 * 4 + 4);
}

TEST_CASE("independence of the good grading and of the Lagrangian") {
    auto base = test::datum({2, 1}, 3, LagrangianChoice::Positive);
    const int cap = pcentre_cap(*base);
    WContext a(base, cap);
    for (auto c : {LagrangianChoice::Negative, LagrangianChoice::Zero}) {
        WContext b(test::datum({2, 1}, 3, c), cap);
        CHECK(verify_independence(a, b, 6).pass);
    }
    auto even1 = std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(Pyramid{{2, 1}, {-1, -1}}, 3));
    auto even2 = std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(Pyramid{{2, 1}, {-1, 1}}, 3));
    WContext e1(even1, cap), e2(even2, cap);
    CHECK(verify_independence(e1, e2, 6).pass);
}
