#include <doctest.h>

#include "test_support.hpp"

using namespace walg;

namespace {

std::shared_ptr<const RestrictedLieAlgebra> gl(int n, std::uint64_t p) {
    return std::make_shared<const RestrictedLieAlgebra>(build_gl(n, p));
}

PbwConfig free_config(int dim) {
    PbwConfig c;
    c.nfree = dim;
    c.tail_char = Vec(dim, 0);
    c.eta = Vec(dim, 0);
    c.degree = std::vector<int>(dim, 1);
    return c;
}

// Image of an ordered PBW element under a representation given by matrices of basis elements.
FMatrix represent(const Field& f, const std::vector<FMatrix>& gens, const Elem& x) {
    const int n = gens[0].rows();
    FMatrix out(f, n, n);
    for (const auto& [m, c] : x) {
        FMatrix term = FMatrix::identity(f, n);
        for (std::size_t k = 0; k < m.size(); ++k)
            for (int r = 0; r < m[k]; ++r) term = term * gens[k];
        out = out + term.scaled(c);
    }
    return out;
}

Elem random_elem(std::mt19937_64& g, const Field& f, int nvars, int terms, int maxexp) {
    Elem x;
    for (int t = 0; t < terms; ++t) {
        Mono m(nvars, 0);
        for (auto& a : m) a = static_cast<std::uint16_t>(g() % (maxexp + 1));
        elem_axpy(f, x, static_cast<Res>(g() % f.p()), elem_monomial(m));
    }
    return x;
}

Elem linear(int nvars, const Vec& y) {
    Elem x;
    for (int k = 0; k < nvars; ++k)
        if (y[k]) {
            Mono m(nvars, 0);
            m[k] = 1;
            x[m] = y[k];
        }
    return x;
}

} // namespace

TEST_CASE("straightening E21 E12 in U(gl_2)") {
    auto L = gl(2, 3);
    PbwEngine eng(L, free_config(4));
    const int e11 = gl_index(2, 0, 0), e12 = gl_index(2, 0, 1), e21 = gl_index(2, 1, 0), e22 = gl_index(2, 1, 1);
    Mono x12(4, 0);
    x12[e12] = 1;
    // E21 E12 = E12 E21 - E11 + E22
    Elem expected;
    Mono m;
    m = Mono(4, 0), m[e12] = 1, m[e21] = 1, expected[m] = 1;
    m = Mono(4, 0), m[e11] = 1, expected[m] = 2;
    m = Mono(4, 0), m[e22] = 1, expected[m] = 1;
    CHECK(eng.act(e21, x12) == expected);
    // Already ordered: E11 E12 is a single monomial.
    m = Mono(4, 0), m[e11] = 1, m[e12] = 1;
    CHECK(eng.act(e11, x12) == elem_monomial(m));
    CHECK(dump_elem(expected) == "1·x^(0,0,0,1)\n1·x^(0,1,1,0)\n2·x^(1,0,0,0)\n");
}

TEST_CASE("straightening agrees with the natural and adjoint representations") {
    for (auto [n, p] : {std::pair<int, std::uint64_t>{2, 3}, {2, 5}, {3, 2}}) {
        auto L = gl(n, p);
        const Field& f = L->field();
        PbwEngine eng(L, free_config(L->dim()));
        std::vector<FMatrix> nat, adj;
        for (int k = 0; k < L->dim(); ++k) {
            nat.push_back(L->to_matrix(L->unit(k)));
            adj.push_back(L->ad(L->unit(k)));
        }
        auto g = test::rng();
        for (int s = 0; s < 8; ++s) {
            Elem a = random_elem(g, f, L->dim(), 3, 2);
            Elem b = random_elem(g, f, L->dim(), 3, 2);
            Elem ab = eng.act_elem(a, b);
            CHECK(represent(f, nat, ab) == represent(f, nat, a) * represent(f, nat, b));
            CHECK(represent(f, adj, ab) == represent(f, adj, a) * represent(f, adj, b));
        }
    }
}

TEST_CASE("straightening is associative") {
    auto L = gl(2, 3);
    const Field& f = L->field();
    PbwEngine eng(L, free_config(4));
    auto g = test::rng();
    for (int s = 0; s < 10; ++s) {
        Elem a = random_elem(g, f, 4, 2, 2), b = random_elem(g, f, 4, 2, 2), c = random_elem(g, f, 4, 2, 2);
        CHECK(eng.act_elem(eng.act_elem(a, b), c) == eng.act_elem(a, eng.act_elem(b, c)));
    }
}

TEST_CASE("restricted quotient matches the natural representation at eta = 0") {
    auto L = gl(2, 3);
    const Field& f = L->field();
    PbwConfig c = free_config(4);
    c.restricted = true;
    PbwEngine eng(L, c);
    std::vector<FMatrix> nat;
    for (int k = 0; k < 4; ++k) nat.push_back(L->to_matrix(L->unit(k)));
    auto g = test::rng();
    for (int s = 0; s < 10; ++s) {
        Elem a = random_elem(g, f, 4, 3, 2), b = random_elem(g, f, 4, 3, 2);
        Elem ab = eng.act_elem(a, b);
        for (const auto& [m, coeff] : ab)
            for (auto e : m) CHECK(e < 3);
        CHECK(represent(f, nat, ab) == represent(f, nat, a) * represent(f, nat, b));
    }
    // E12^3 = E12^[3] = 0 and E11^3 = E11.
    Mono sq(4, 0);
    sq[gl_index(2, 0, 1)] = 2;
    CHECK(eng.act(gl_index(2, 0, 1), sq).empty());
    Mono d2(4, 0);
    d2[gl_index(2, 0, 0)] = 2;
    Mono d1(4, 0);
    d1[gl_index(2, 0, 0)] = 1;
    CHECK(eng.act(gl_index(2, 0, 0), d2) == elem_monomial(d1));
}

TEST_CASE("Q = U(g)/U(g)m_chi for gl_2 at p = 3") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, 12);
    const Field& f = ctx.field();
    CHECK(ctx.nvars() == 3);
    CHECK(ctx.chi_adapted() == Vec{0, 0, 0, 1});
    // Adapted variables: 0 = I, 1 = E12, 2 = E11, 3 = E21 (in m).
    const Vec e11 = {1, 0, 0, 0}, e21 = {0, 0, 1, 0};
    CHECK(ctx.to_adapted(e11) == Vec{0, 0, 1, 0});
    CHECK(ctx.from_adapted(ctx.to_adapted(e21)) == e21);

    Elem x11 = elem_monomial(Mono{0, 0, 1});
    // [E21, E11] = E21, which acts on the generator by chi(E21) = 1.
    CHECK(ctx.ad_action(e21, x11) == elem_constant(3, 1));
    // Ad(1 + t E21) E11 = E11 + t E21, so modulo I: E11 + t.
    auto ga = ctx.group_action(gl_index(2, 1, 0), x11);
    REQUIRE(ga.size() == 2);
    CHECK(ga[0] == x11);
    CHECK(ga[1] == elem_constant(3, 1));
    CHECK_THROWS_AS(ctx.ad_action(e11, x11), WalgError);
    CHECK_THROWS_AS(ctx.group_action(gl_index(2, 0, 0), x11), WalgError);

    // reduce_mod_I replaces each E21 by chi(E21) = 1.
    Elem u;
    elem_axpy(f, u, 2, elem_monomial(Mono{0, 1, 0, 2}));
    elem_axpy(f, u, 1, elem_monomial(Mono{1, 0, 0, 0}));
    Elem expected;
    elem_axpy(f, expected, 2, elem_monomial(Mono{0, 1, 0}));
    elem_axpy(f, expected, 1, elem_monomial(Mono{1, 0, 0}));
    CHECK(ctx.reduce_mod_I(u) == expected);
    CHECK(ctx.rep(expected) == Elem{{Mono{0, 1, 0, 0}, 2}, {Mono{1, 0, 0, 0}, 1}});
}

TEST_CASE("the image of the Casimir in Q is invariant") {
    for (std::uint64_t p : {3u, 5u}) {
        auto d = test::datum({2}, p);
        WContext ctx(d, 12);
        const Field& f = ctx.field();
        const int D = d->dim();
        Elem casimir;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Elem a = linear(D, ctx.to_adapted(d->algebra->unit(gl_index(2, i, j))));
                Elem b = linear(D, ctx.to_adapted(d->algebra->unit(gl_index(2, j, i))));
                elem_axpy(f, casimir, 1, ctx.straighten_multiply(a, b));
            }
        Elem q = ctx.reduce_mod_I(casimir);
        CHECK(ctx.ad_action(d->algebra->unit(gl_index(2, 1, 0)), q).empty());
        auto ga = ctx.group_action(gl_index(2, 1, 0), q);
        REQUIRE(ga.size() == 1);
        CHECK(ga[0] == q);
        CHECK(elem_degree(q, ctx.kazhdan()) == 4);
    }
}

TEST_CASE("group action at t^1 is the adjoint action") {
    for (auto part : {std::vector<int>{2}, {3}, {2, 1}}) {
        auto d = test::datum(part, 3);
        WContext ctx(d, 40);
        const Field& f = ctx.field();
        auto g = test::rng();
        for (int unit : d->n_units)
            for (int s = 0; s < 4; ++s) {
                Elem q = random_elem(g, f, ctx.nvars(), 2, 1);
                auto ga = ctx.group_action(unit, q);
                Elem t0 = ga.empty() ? Elem{} : ga[0];
                Elem t1 = ga.size() > 1 ? ga[1] : Elem{};
                CHECK(t0 == q);
                CHECK(t1 == ctx.ad_action(d->algebra->unit(unit), q));
            }
    }
}

TEST_CASE("filtered basis sizes and monomial counts") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, 12);
    CHECK(ctx.filtered_basis(0).size() == 1);
    CHECK(ctx.filtered_basis(2).size() == 3);
    CHECK(ctx.filtered_basis(4).size() == 7);
    // Oracle: count of (a, b, c) with 2a + 4b + 2c <= j.
    for (int j = 0; j <= 10; ++j) {
        long long brute = 0;
        for (int a = 0; 2 * a <= j; ++a)
            for (int b = 0; 2 * a + 4 * b <= j; ++b)
                for (int c = 0; 2 * a + 4 * b + 2 * c <= j; ++c) ++brute;
        CHECK(static_cast<long long>(ctx.filtered_basis(j).size()) == brute);
        CHECK(monomial_count({2, 4, 2}, j) == brute);
    }
    CHECK(monomial_count({2, 4}, 4) == 4);
    CHECK(monomial_count({2, 4}, -1) == 0);
    CHECK(default_cap(*d) == 2 * 2 + 6);
}

TEST_CASE("exceeding the cap raises DegreeOverflow") {
    auto d = test::datum({2}, 3);
    WContext ctx(d, 4);
    try {
        ctx.q().act(1, Mono{0, 1, 0});
        FAIL("expected DegreeOverflow");
    } catch (const WalgError& e) {
        CHECK(e.kind() == ErrorKind::DegreeOverflow);
    }
}

TEST_CASE("elem helpers") {
    Field f(5);
    Elem a = elem_monomial(Mono{1, 0}, 3);
    Elem b = elem_monomial(Mono{0, 2}, 4);
    Elem s;
    elem_axpy(f, s, 1, a);
    elem_axpy(f, s, 2, b);
    CHECK(s.size() == 2);
    CHECK(s.at(Mono{0, 2}) == 3);
    CHECK(elem_is_zero(elem_sub(f, s, s)));
    CHECK(elem_scale(f, a, 0).empty());
    CHECK(elem_degree(s, {2, 4}) == 8);
    CHECK(elem_degree(Elem{}, {2, 4}) == -1);
    CHECK(mono_total(Mono{1, 2, 3}) == 6);
    CHECK(mono_degree(Mono{1, 2}, {2, 4}) == 10);
}
