#include <doctest.h>

#include "test_support.hpp"

using namespace walg;

namespace {
Vec e_of(int n, const std::vector<std::pair<int, int>>& units) {
    Vec e(n * n, 0);
    for (auto [i, j] : units) e[gl_index(n, i, j)] = 1;
    return e;
}
} // namespace

TEST_CASE("gl_2 basics") {
    auto L = build_gl(2, 3);
    CHECK(L.dim() == 4);
    CHECK(L.form(L.unit(gl_index(2, 0, 1)), L.unit(gl_index(2, 1, 0))) == 1);
    CHECK(L.bracket(L.unit(gl_index(2, 0, 0)), L.unit(gl_index(2, 0, 1))) == L.unit(gl_index(2, 0, 1)));
    CHECK(validate(L).all_pass());
    CHECK_THROWS_AS(build_gl(2, 4), WalgError);
}

TEST_CASE("gl_3 Gram matrix invertible over F_2") {
    auto L = build_gl(3, 2);
    // Oracle: trace form pairs E_ij with E_ji only, so the Gram matrix is a permutation matrix.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    CHECK(L.gram().at(gl_index(3, i, j), gl_index(3, k, l)) == ((j == k && i == l) ? 1u : 0u));
    CHECK(L.gram().rank() == 9);
}

TEST_CASE("bracket matches the matrix commutator on all basis pairs") {
    for (int n : {2, 3}) {
        auto L = build_gl(n, 5);
        for (int a = 0; a < L.dim(); ++a)
            for (int b = 0; b < L.dim(); ++b) {
                FMatrix A = L.to_matrix(L.unit(a)), B = L.to_matrix(L.unit(b));
                CHECK(L.to_matrix(L.bracket(L.unit(a), L.unit(b))) == A * B - B * A);
            }
    }
}

TEST_CASE("p-map is the matrix p-th power and ad is restricted") {
    for (std::uint64_t p : {2u, 3u}) {
        auto L = build_gl(3, p);
        auto g = test::rng();
        for (int s = 0; s < 10; ++s) {
            Vec x = test::random_vec(g, L.field(), L.dim());
            CHECK(L.to_matrix(L.pmap(x)) == L.to_matrix(x).power(p));
            CHECK(L.ad(L.pmap(x)) == L.ad(x).power(p));
        }
    }
}

TEST_CASE("validation reports injected faults") {
    auto j = build_gl(2, 3).to_json();
    // Flip the sign of one structure constant.
    for (auto& e : j["bracket"])
        if (e[0] == 0 && e[1] == 1) {
            e[3] = -e[3].get<long long>();
            break;
        }
    auto rep = validate(algebra_from_json(j));
    REQUIRE(rep.find("antisymmetry"));
    CHECK_FALSE(rep.find("antisymmetry")->pass);
    CHECK_FALSE(rep.find("antisymmetry")->witness.empty());
    CHECK_THROWS_AS(load_validated_algebra(j), WalgError);
}

TEST_CASE("sl_2 over F_2 has a degenerate trace form") {
    // Basis e, h, f with [h,e]=2e=0, [h,f]=-2f=0, [e,f]=h; trace form (e,f)=1, (h,h)=2=0.
    nlohmann::json j = {{"prime", 2},
                        {"dim", 3},
                        {"labels", {"e", "h", "f"}},
                        {"bracket", {{0, 2, 1, 1}, {2, 0, 1, -1}, {1, 0, 0, 2}, {0, 1, 0, -2}, {1, 2, 2, -2}, {2, 1, 2, 2}}},
                        {"ppower", {{1, 1, 1}}},
                        {"form", {{0, 2, 1}, {2, 0, 1}, {1, 1, 2}}}};
    auto rep = validate(algebra_from_json(j));
    REQUIRE(rep.find("form_nondegenerate"));
    CHECK_FALSE(rep.find("form_nondegenerate")->pass);
    CHECK(rep.surrogate_checks_only);
}

TEST_CASE("chi from e") {
    auto L2 = build_gl(2, 3);
    auto chi = chi_from_e(L2, L2.unit(gl_index(2, 0, 1)));
    CHECK(chi == Vec{0, 0, 1, 0});  // chi(E_21) = 1
    CHECK(chi_from_e(L2, L2.zero()) == L2.zero());
    CHECK_THROWS_AS(chi_from_e(L2, L2.unit(gl_index(2, 0, 0))), WalgError);
    auto L3 = build_gl(3, 2);
    Vec e = e_of(3, {{0, 1}, {1, 2}});
    Vec want(9, 0);
    // Oracle: chi(x) = trace(e x) computed from matrices.
    for (int i = 0; i < 9; ++i) {
        FMatrix prod = L3.to_matrix(e) * L3.to_matrix(L3.unit(i));
        Res tr = 0;
        for (int k = 0; k < 3; ++k) tr = L3.field().add(tr, prod.at(k, k));
        want[i] = tr;
    }
    CHECK(chi_from_e(L3, e) == want);
    CHECK(want[gl_index(3, 1, 0)] == 1);
    CHECK(want[gl_index(3, 2, 1)] == 1);
}

TEST_CASE("centralizers") {
    auto L2 = build_gl(2, 3);
    auto c = centralizer(L2, L2.unit(gl_index(2, 0, 1)));
    CHECK(c.size() == 2);
    EchelonBuilder eb(L2.field(), 4);
    for (const auto& v : c) eb.insert(v);
    Vec identity(4, 0);
    identity[0] = identity[3] = 1;
    CHECK(eb.in_span(L2.unit(gl_index(2, 0, 1))));
    CHECK(eb.in_span(identity));
    CHECK(centralizer(L2, L2.zero()).size() == 4);
    // Regular nilpotent in gl_3: dim g^e = sum (2i-1) lambda'_i = 1*3 for the conjugate partition (1,1,1).
    auto L3 = build_gl(3, 5);
    CHECK(centralizer(L3, e_of(3, {{0, 1}, {1, 2}})).size() == 3);
}

TEST_CASE("centralizer dimension plus rank of ad e, and parity") {
    struct Case {
        int n;
        std::vector<std::pair<int, int>> units;
    };
    for (std::uint64_t p : {2u, 3u, 5u})
        for (const auto& c : std::vector<Case>{{2, {{0, 1}}}, {3, {{0, 1}, {1, 2}}}, {3, {{0, 1}}}, {4, {{0, 1}, {2, 3}}}, {4, {{0, 1}, {1, 2}, {2, 3}}}}) {
            auto L = build_gl(c.n, p);
            Vec e = e_of(c.n, c.units);
            int dc = static_cast<int>(centralizer(L, e).size());
            CHECK(dc + L.ad(e).rank() == L.dim());
            CHECK((L.dim() - dc) % 2 == 0);
        }
}

TEST_CASE("form invariance on random triples") {
    auto L = build_gl(3, 7);
    auto g = test::rng();
    for (int s = 0; s < 50; ++s) {
        Vec x = test::random_vec(g, L.field(), 9), y = test::random_vec(g, L.field(), 9), z = test::random_vec(g, L.field(), 9);
        CHECK(L.form(L.bracket(x, y), z) == L.form(x, L.bracket(y, z)));
    }
}
