#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"

using namespace walg;

namespace {

Vec unit_vec(int n, int i, int j) {
    Vec v(n * n, 0);
    v[gl_index(n, i, j)] = 1;
    return v;
}

int span_rank(const Field& f, const Subspace& s, int dim) {
    return s.empty() ? 0 : FMatrix::from_rows(f, s, dim).rank();
}

bool same_span(const Field& f, const Subspace& a, const Subspace& b, int dim) {
    Subspace both = a;
    both.insert(both.end(), b.begin(), b.end());
    int ra = span_rank(f, a, dim);
    return ra == static_cast<int>(a.size()) && ra == span_rank(f, b, dim) && ra == span_rank(f, both, dim);
}

bool all_pass(const std::vector<ValidationItem>& items) {
    return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.pass; });
}

const ValidationItem* find_item(const std::vector<ValidationItem>& items, const std::string& name) {
    for (const auto& i : items)
        if (i.name == name) return &i;
    return nullptr;
}

// Nested-row criterion for pyramids: each shorter row lies inside the row below it.
bool nested_rows(const Pyramid& py) {
    for (int r = 1; r < py.rows(); ++r) {
        int lo = py.row_offsets[r - 1], hi = lo + 2 * (py.partition[r - 1] - 1);
        int a = py.row_offsets[r], b = a + 2 * (py.partition[r] - 1);
        if (a < lo || b > hi) return false;
    }
    return true;
}

bool all_columns_same_parity(const Pyramid& py) {
    auto cols = py.box_col();
    return std::all_of(cols.begin(), cols.end(), [&](int c) { return (c - cols[0]) % 2 == 0; });
}

// m(alpha) from the definition: 1 + least j >= 0 with g^e meeting g_alpha(j), via ad e on each piece.
MTable m_alpha_oracle(const GradedNilpotentDatum& d) {
    const auto& L = *d.algebra;
    std::map<std::pair<Torus, int>, std::vector<int>> pieces;
    for (int i = 0; i < L.dim(); ++i) pieces[{d.torus[i], d.weight[i]}].push_back(i);
    FMatrix ade = L.ad(d.e);
    MTable out;
    for (const auto& [key, idx] : pieces) {
        const auto& [t, j] = key;
        if (j < 0 || std::all_of(t.begin(), t.end(), [](int x) { return x == 0; })) continue;
        FMatrix sub(L.field(), L.dim(), static_cast<int>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c)
            for (int row = 0; row < L.dim(); ++row) sub.at(row, static_cast<int>(c)) = ade.at(row, idx[c]);
        if (sub.rank() == static_cast<int>(idx.size())) continue;
        auto it = out.find(t);
        if (it == out.end() || 1 + j < it->second) out[t] = 1 + j;
    }
    return out;
}

} // namespace

TEST_CASE("Dynkin pyramid offsets are centred") {
    CHECK(dynkin_pyramid({2}).row_offsets == std::vector<int>{-1});
    CHECK(dynkin_pyramid({3}).row_offsets == std::vector<int>{-2});
    CHECK(dynkin_pyramid({2, 1}).row_offsets == std::vector<int>{-1, 0});
    CHECK(dynkin_pyramid({2, 2}).row_columns(1) == std::vector<int>{1, -1});
    CHECK_THROWS_AS(dynkin_pyramid({1, 2}), WalgError);
    CHECK_THROWS_AS(dynkin_pyramid({}), WalgError);
    CHECK_THROWS_AS(dynkin_pyramid({2, 0}), WalgError);
}

TEST_CASE("gl_2 regular nilpotent at p = 3") {
    auto d = test::datum({2}, 3);
    const Field& f = d->field();
    CHECK(d->weight == std::vector<int>{0, 2, -2, 0});
    CHECK(d->e == unit_vec(2, 0, 1));
    // chi(x) = tr(e x) picks out the E21 coefficient.
    CHECK(d->chi == unit_vec(2, 1, 0));
    CHECK(d->r == 2);
    CHECK(d->mdim == 3);
    CHECK(d->d_chi() == 1);
    CHECK(same_span(f, d->m, {unit_vec(2, 1, 0)}, 4));
    CHECK(same_span(f, d->ge, {unit_vec(2, 0, 1), Vec{1, 0, 0, 1}}, 4));
    CHECK(same_span(f, d->v, {unit_vec(2, 1, 0), unit_vec(2, 1, 1)}, 4));
    CHECK(same_span(f, d->bar_a, {unit_vec(2, 0, 0)}, 4));
    CHECK(d->kazhdan == std::vector<int>{2, 4, 2, 0});
    CHECK(d->l.empty());
    CHECK(all_pass(check_datum(*d)));
}

TEST_CASE("gl_3 regular nilpotent at p = 2 is even") {
    auto d = test::datum({3}, 2);
    for (int w : d->weight) CHECK(w % 2 == 0);
    CHECK(d->m.size() == 3);
    CHECK(d->r == 3);
    CHECK(d->mdim == 6);
    CHECK(d->d_chi() == 3);
    for (int i = 0; i < d->dim(); ++i) CHECK(d->kazhdan[i] == d->adapted_weight[i] + 2);
    std::vector<int> ge_kaz(d->kazhdan.begin(), d->kazhdan.begin() + d->r);
    std::sort(ge_kaz.begin(), ge_kaz.end());
    CHECK(ge_kaz == std::vector<int>{2, 4, 6});
    CHECK(all_pass(check_datum(*d)));
    auto even = find_item(check_datum(*d), "even_at_p2");
    REQUIRE(even != nullptr);
    CHECK(even->pass);
}

TEST_CASE("odd Dynkin grading is rejected at p = 2") {
    CHECK_THROWS_AS(grading_from_pyramid(dynkin_pyramid({2, 1}), 2), WalgError);
    try {
        grading_from_pyramid(dynkin_pyramid({2, 1}), 2);
    } catch (const WalgError& e) {
        CHECK(e.kind() == ErrorKind::OddGradingAtP2);
    }
}

TEST_CASE("gl_3 (2,1) Dynkin grading has a Lagrangian in degree -1") {
    for (auto c : {LagrangianChoice::Positive, LagrangianChoice::Negative, LagrangianChoice::Zero}) {
        auto d = test::datum({2, 1}, 3, c);
        CHECK(d->dim_of_degree(-1) == 2);
        CHECK(d->r == 5);
        CHECK(d->d_chi() == 2);
        CHECK(d->mdim == (c == LagrangianChoice::Zero ? 8 : 7));
        if (c == LagrangianChoice::Zero) {
            CHECK(d->l.empty());
            CHECK(d->m.size() == 1);
        } else {
            CHECK(d->l.size() == 1);
            CHECK(d->m.size() == 2);
            // Oracle: omega(x, y) = tr(e [x, y]) from matrices pairs l with l' nondegenerately.
            const auto& L = *d->algebra;
            FMatrix X = L.to_matrix(d->l[0]), Y = L.to_matrix(d->lprime[0]), E = L.to_matrix(d->e);
            FMatrix prod = E * (X * Y - Y * X);
            Res tr = 0;
            for (int i = 0; i < 3; ++i) tr = L.field().add(tr, prod.at(i, i));
            CHECK(tr != 0);
            auto lag = lagrangian_l(*d);
            CHECK(all_pass(lag.checks));
        }
        CHECK(all_pass(check_datum(*d)));
    }
}

TEST_CASE("good grading axioms detect a bad weight assignment") {
    auto L = build_gl(2, 3);
    Vec e = unit_vec(2, 0, 1);
    // E22 in degree 4 breaks [E12, E21] = E11 - E22 being homogeneous of degree 0.
    auto items = check_grading_axioms(L, e, {0, 2, -2, 4}, 2);
    auto br = find_item(items, "bracket_respects_grading");
    REQUIRE(br != nullptr);
    CHECK_FALSE(br->pass);
    CHECK_FALSE(br->witness.empty());
    // The zero grading is a grading, but e is not in degree 2.
    auto zero = check_grading_axioms(L, e, {0, 0, 0, 0}, 2);
    CHECK_FALSE(find_item(zero, "e_homogeneous")->pass);
}

TEST_CASE("goodness fails when ad e has a kernel in negative degree") {
    auto L = build_gl(3, 5);
    Vec e = unit_vec(3, 0, 1);
    // Third box far to the left: E32 sits in degree -4 and commutes with e.
    std::vector<int> col = {1, -1, -5};
    std::vector<int> w(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) w[gl_index(3, i, j)] = col[i] - col[j];
    auto g = goodness_from_weights(L, e, w, 2);
    CHECK_FALSE(g.good);
    CHECK(g.surjectivity_agrees);
    CHECK(L.bracket(e, g.witness) == L.zero());
    CHECK_THROWS_AS(grading_from_pyramid(Pyramid{{2, 1}, {-1, 3}}, 5), WalgError);
}

TEST_CASE("enumeration matches the nested-row criterion") {
    for (std::vector<int> part : {std::vector<int>{2}, {1, 1}, {2, 1}, {3, 1}, {2, 2}, {2, 1, 1}, {3, 2}}) {
        for (std::uint64_t p : {2u, 3u, 5u}) {
            std::set<std::vector<int>> expected;
            const int lam1 = part[0];
            std::vector<int> offs(part.size(), -lam1);
            offs[0] = -(lam1 - 1);
            while (true) {
                Pyramid py{part, offs};
                if (nested_rows(py) && (p != 2 || all_columns_same_parity(py))) expected.insert(offs);
                int r = static_cast<int>(offs.size()) - 1;
                while (r >= 1 && offs[r] == lam1) offs[r--] = -lam1;
                if (r < 1) break;
                ++offs[r];
            }
            std::set<std::vector<int>> got;
            for (const auto& py : enumerate_integral_good_gradings(part, p)) got.insert(py.row_offsets);
            CHECK(got == expected);
        }
    }
    CHECK(enumerate_integral_good_gradings({2, 1}, 3).size() == 3);
    CHECK(enumerate_integral_good_gradings({2, 1}, 2).size() == 2);
    CHECK(enumerate_integral_good_gradings({2, 2}, 3).size() == 1);
}

TEST_CASE("every enumerated grading passes all datum checks") {
    for (std::uint64_t p : {2u, 3u})
        for (std::vector<int> part : {std::vector<int>{2, 1}, {3, 1}, {2, 2}})
            for (const auto& py : enumerate_integral_good_gradings(part, p)) {
                auto d = grading_from_pyramid(py, p);
                CHECK(is_good(d).good);
                CHECK(all_pass(check_datum(d)));
            }
}

TEST_CASE("m(alpha) agrees with the definition and is symmetric") {
    for (std::vector<int> part : {std::vector<int>{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
        auto d = test::datum(part, 5);
        auto res = m_alpha_table(*d);
        CHECK(res.symmetric);
        CHECK(res.table == m_alpha_oracle(*d));
    }
    auto d21 = test::datum({2, 1}, 3);
    auto t21 = m_alpha_table(*d21).table;
    CHECK(t21.size() == 2);
    for (const auto& [alpha, m] : t21) CHECK(m == 2);
    auto d22 = test::datum({2, 2}, 3);
    for (const auto& [alpha, m] : m_alpha_table(*d22).table) CHECK(m == 1);
    CHECK_THROWS(m_alpha_table(grading_from_pyramid(Pyramid{{2, 1}, {-1, -1}}, 3)));
}

TEST_CASE("polytope membership matches brute-force goodness") {
    for (std::vector<int> part : {std::vector<int>{2, 1}, {2, 2}, {3, 1}}) {
        auto d = test::datum(part, 5);
        auto table = m_alpha_table(*d).table;
        const int rows = static_cast<int>(part.size());
        for (int c : {1, 2}) {
            std::vector<int> delta(rows, 0);
            // Sweep delta with delta_0 = 0 over a window of radius 3.
            std::vector<int> free(rows - 1, -3);
            while (true) {
                for (int r = 1; r < rows; ++r) delta[r] = free[r - 1];
                CHECK(polytope_contains(table, delta, c) == is_good_cocharacter(*d, delta, c).good);
                int k = rows - 2;
                while (k >= 0 && free[k] == 3) free[k--] = -3;
                if (k < 0) break;
                ++free[k];
            }
        }
        CHECK(polytope_contains(table, std::vector<int>(rows, 0), 1));
    }
    // Boundary: |<alpha, delta>| = m(alpha) is excluded for (2,1) where m = 2.
    auto d = test::datum({2, 1}, 5);
    auto table = m_alpha_table(*d).table;
    CHECK(polytope_contains(table, {0, 1}, 1));
    CHECK_FALSE(polytope_contains(table, {0, 2}, 1));
    CHECK_FALSE(is_good_cocharacter(*d, {0, 2}, 1).good);
    CHECK(pyramid_from_delta({2, 1}, {0, 1}).row_offsets == std::vector<int>{-1, -1});
}

TEST_CASE("centralizer dimension and slice properties") {
    for (std::uint64_t p : {3u, 5u})
        for (std::vector<int> part : {std::vector<int>{2}, {3}, {2, 1}, {2, 2}, {3, 1}}) {
            auto d = test::datum(part, p);
            const auto& L = *d->algebra;
            // dim g^e equals the sum of (2i - 1) lambda_i over the partition.
            int expected = 0;
            for (std::size_t i = 0; i < part.size(); ++i) expected += (2 * static_cast<int>(i) + 1) * part[i];
            CHECK(d->r == expected);
            CHECK(static_cast<int>(centralizer(L, d->e).size()) == d->r);
            CHECK(static_cast<int>(d->v.size()) == d->r);
            CHECK(d->dim_of_degree(-1) + d->dim_of_degree(0) == static_cast<std::size_t>(d->r));
            CHECK((L.dim() - d->r) % 2 == 0);
            for (int k = 0; k < d->r; ++k) CHECK(L.bracket(d->e, d->adapted_rows[k]) == L.zero());
            CHECK(static_cast<int>(d->bar_a.size()) == d->mdim - d->r);
            CHECK(d->mdim + static_cast<int>(d->m.size()) == L.dim());
        }
}
