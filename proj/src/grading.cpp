#include "walg/grading.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace walg {

int Pyramid::n() const { return std::accumulate(partition.begin(), partition.end(), 0); }

std::vector<int> Pyramid::row_columns(int r) const {
    std::vector<int> cols;
    for (int k = 0; k < partition[r]; ++k) cols.push_back(row_offsets[r] + 2 * (partition[r] - 1 - k));
    return cols;
}

std::vector<int> Pyramid::box_row() const {
    std::vector<int> out;
    for (int r = 0; r < rows(); ++r)
        for (int k = 0; k < partition[r]; ++k) out.push_back(r);
    return out;
}

std::vector<int> Pyramid::box_col() const {
    std::vector<int> out;
    for (int r = 0; r < rows(); ++r)
        for (int c : row_columns(r)) out.push_back(c);
    return out;
}

void validate_partition(const std::vector<int>& partition) {
    if (partition.empty()) throw WalgError(ErrorKind::ConfigError, "empty partition");
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (partition[i] <= 0) throw WalgError(ErrorKind::ConfigError, "partition parts must be positive");
        if (i > 0 && partition[i] > partition[i - 1])
            throw WalgError(ErrorKind::ConfigError, "partition must be weakly decreasing");
    }
}

Pyramid dynkin_pyramid(const std::vector<int>& partition) {
    validate_partition(partition);
    Pyramid py{partition, {}};
    for (int len : partition) py.row_offsets.push_back(-(len - 1));
    return py;
}

const char* lagrangian_choice_name(LagrangianChoice c) {
    switch (c) {
    case LagrangianChoice::Positive: return "positive";
    case LagrangianChoice::Negative: return "negative";
    case LagrangianChoice::Zero: return "zero";
    }
    return "?";
}

bool lex_positive(const Torus& t) {
    for (int x : t)
        if (x != 0) return x > 0;
    return false;
}

int pair_torus(const Torus& a, const std::vector<int>& delta) {
    int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * delta[i];
    return s;
}

std::size_t GradedNilpotentDatum::dim_of_degree(int j) const {
    return static_cast<std::size_t>(std::count(weight.begin(), weight.end(), j));
}

int GradedNilpotentDatum::max_ge_degree() const {
    int mx = 0;
    for (int i = 0; i < r; ++i) mx = std::max(mx, adapted_weight[i]);
    return mx;
}

std::vector<Vec> GradedNilpotentDatum::degree_piece(int j) const {
    std::vector<Vec> out;
    for (int i = 0; i < dim(); ++i)
        if (weight[i] == j) out.push_back(algebra->unit(i));
    return out;
}

namespace {

struct PyramidWeights {
    Vec e;
    std::vector<int> weight;
    std::vector<Torus> torus;
};

PyramidWeights pyramid_weights(const Pyramid& py, const Field& f) {
    const int n = py.n();
    auto row = py.box_row();
    auto col = py.box_col();
    PyramidWeights w;
    w.e.assign(static_cast<std::size_t>(n) * n, 0);
    w.weight.resize(static_cast<std::size_t>(n) * n);
    w.torus.resize(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            int idx = gl_index(n, b, c);
            w.weight[idx] = col[b] - col[c];
            Torus t(py.rows(), 0);
            t[row[b]] += 1;
            t[row[c]] -= 1;
            w.torus[idx] = t;
        }
    int label = 0;
    for (int r = 0; r < py.rows(); ++r) {
        for (int k = 0; k + 1 < py.partition[r]; ++k) w.e[gl_index(n, label + k, label + k + 1)] = 1 % f.p();
        label += py.partition[r];
    }
    return w;
}

using PieceKey = std::pair<int, Torus>;

std::map<PieceKey, std::vector<int>> pieces_of(const std::vector<int>& weight, const std::vector<Torus>& torus) {
    std::map<PieceKey, std::vector<int>> pieces;
    for (int i = 0; i < static_cast<int>(weight.size()); ++i) pieces[{weight[i], torus[i]}].push_back(i);
    return pieces;
}

/// Restriction of a linear map given by columns (full coordinates) to coordinates `rows`.
FMatrix restrict_rows(const Field& f, const std::vector<Vec>& images, const std::vector<int>& rows) {
    FMatrix m(f, static_cast<int>(rows.size()), static_cast<int>(images.size()));
    for (int c = 0; c < static_cast<int>(images.size()); ++c)
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) m.at(r, c) = images[c][rows[r]];
    return m;
}

Vec embed(const Vec& local, const std::vector<int>& idx, int dim) {
    Vec v(dim, 0);
    for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] = local[k];
    return v;
}

std::string label_for(const RestrictedLieAlgebra& L, const Vec& x) {
    std::string s = format_vector(L, x);
    int terms = 0;
    for (Res c : x)
        if (c) ++terms;
    return terms > 1 ? "(" + s + ")" : s;
}

Res omega(const RestrictedLieAlgebra& L, const LinearFunctional& chi, const Vec& x, const Vec& y) {
    return dot(L.field(), chi, L.bracket(y, x));
}

} // namespace

std::vector<ValidationItem> check_grading_axioms(const RestrictedLieAlgebra& L, const Vec& e,
                                                 const std::vector<int>& weights, int e_degree) {
    std::vector<ValidationItem> out;
    ValidationItem eh{"e_homogeneous", true, ""};
    for (int i = 0; i < L.dim(); ++i)
        if (e[i] && weights[i] != e_degree) {
            eh.pass = false;
            eh.witness = L.label(i) + " has degree " + std::to_string(weights[i]);
            break;
        }
    out.push_back(eh);
    ValidationItem br{"bracket_respects_grading", true, ""};
    for (int i = 0; i < L.dim() && br.pass; ++i)
        for (int j = 0; j < L.dim() && br.pass; ++j)
            for (auto [k, c] : L.bracket_basis(i, j))
                if (weights[k] != weights[i] + weights[j]) {
                    br.pass = false;
                    br.witness = "[" + L.label(i) + "," + L.label(j) + "] has component " + L.label(k);
                    break;
                }
    out.push_back(br);
    return out;
}

GoodnessResult goodness_from_weights(const RestrictedLieAlgebra& L, const Vec& e, const std::vector<int>& weights,
                                     int e_degree) {
    const Field& f = L.field();
    GoodnessResult res;
    std::map<int, std::vector<int>> by_weight;
    for (int i = 0; i < L.dim(); ++i) by_weight[weights[i]].push_back(i);
    auto image_cols = [&](const std::vector<int>& src) {
        std::vector<Vec> cols;
        for (int i : src) cols.push_back(L.bracket(e, L.unit(i)));
        return cols;
    };
    bool surj_good = true;
    for (const auto& [w, idx] : by_weight) {
        // Injectivity on g(w) for w/(e_degree/2) <= -1.
        if (2 * w <= -e_degree && res.good) {
            auto cols = image_cols(idx);
            std::vector<int> all(L.dim());
            std::iota(all.begin(), all.end(), 0);
            auto ker = restrict_rows(f, cols, all).kernel();
            if (!ker.empty()) {
                res.good = false;
                res.failing_degree = w;
                res.witness = embed(ker.front(), idx, L.dim());
            }
        }
        // Surjectivity onto g(w) from g(w - e_degree) when (w - e_degree) >= -e_degree/2.
        if (2 * (w - e_degree) >= -e_degree) {
            auto it = by_weight.find(w - e_degree);
            int rank = 0;
            if (it != by_weight.end()) rank = restrict_rows(f, image_cols(it->second), idx).rank();
            if (rank < static_cast<int>(idx.size())) surj_good = false;
        }
    }
    res.surjectivity_agrees = (surj_good == res.good);
    return res;
}

GoodnessResult is_good(const GradedNilpotentDatum& d) { return goodness_from_weights(*d.algebra, d.e, d.weight, 2); }

GradedNilpotentDatum grading_from_pyramid(const Pyramid& py, std::uint64_t p, LagrangianChoice choice) {
    validate_partition(py.partition);
    if (py.row_offsets.size() != py.partition.size())
        throw WalgError(ErrorKind::ConfigError, "one offset per partition row required");
    const int n = py.n();
    GradedNilpotentDatum d;
    d.algebra = std::make_shared<const RestrictedLieAlgebra>(build_gl(n, p));
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = L.field();
    const int dim = L.dim();
    d.pyramid = py;
    d.choice = choice;
    auto pw = pyramid_weights(py, f);
    d.e = pw.e;
    d.weight = pw.weight;
    d.torus = pw.torus;
    d.chi = chi_from_e(L, d.e);

    if (f.p() == 2)
        for (int w : d.weight)
            if (w % 2 != 0) throw WalgError(ErrorKind::OddGradingAtP2, "odd degree present in a grading at p = 2");
    auto good = is_good(d);
    if (!good.good)
        throw WalgError(ErrorKind::NotGood, "ad e not injective in degree " + std::to_string(good.failing_degree) +
                                                ", witness " + format_vector(L, good.witness));

    auto pieces = pieces_of(d.weight, d.torus);
    // Centralizer and slice, bi-homogeneous piece by piece.
    for (const auto& [key, idx] : pieces) {
        const auto& [w, t] = key;
        std::vector<Vec> images;
        for (int i : idx) images.push_back(L.bracket(d.e, L.unit(i)));
        auto tgt = pieces.find({w + 2, t});
        std::vector<int> tgt_idx = tgt == pieces.end() ? std::vector<int>{} : tgt->second;
        auto ker = restrict_rows(f, images, tgt_idx).kernel();
        for (auto& k : ker) d.ge.push_back(embed(k, idx, dim));

        auto src = pieces.find({w - 2, t});
        std::vector<Vec> img;
        if (src != pieces.end())
            for (int i : src->second) img.push_back(L.bracket(d.e, L.unit(i)));
        FMatrix im = restrict_rows(f, img, idx).transpose();  // rows: images in local coords
        auto piv = im.rref_in_place();
        std::vector<bool> is_piv(idx.size(), false);
        for (int c : piv) is_piv[c] = true;
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (!is_piv[k]) d.v.push_back(L.unit(idx[k]));
    }

    std::vector<int> gm1_pos, gm1_neg;
    for (int i = 0; i < dim; ++i)
        if (d.weight[i] == -1) (lex_positive(d.torus[i]) ? gm1_pos : gm1_neg).push_back(i);
    std::vector<int> l_units, lp_units;
    switch (choice) {
    case LagrangianChoice::Positive: l_units = gm1_pos, lp_units = gm1_neg; break;
    case LagrangianChoice::Negative: l_units = gm1_neg, lp_units = gm1_pos; break;
    case LagrangianChoice::Zero:
        lp_units = gm1_pos;
        lp_units.insert(lp_units.end(), gm1_neg.begin(), gm1_neg.end());
        std::sort(lp_units.begin(), lp_units.end());
        break;
    }
    for (int i : l_units) d.l.push_back(L.unit(i));
    for (int i : lp_units) d.lprime.push_back(L.unit(i));

    std::set<int> in_m(l_units.begin(), l_units.end());
    for (int i = 0; i < dim; ++i)
        if (d.weight[i] <= -2) in_m.insert(i);
    std::vector<int> m_units(in_m.begin(), in_m.end());
    std::stable_sort(m_units.begin(), m_units.end(), [&](int a, int b) { return d.weight[a] < d.weight[b]; });
    d.m_units = m_units;
    for (int i : m_units) d.m.push_back(L.unit(i));
    for (int i = 0; i < dim; ++i)
        if (!in_m.count(i)) d.bar_p.push_back(L.unit(i));

    // n = l^{perp omega} + sum_{j<-1} g(j); must be spanned by matrix units.
    std::vector<int> gm1 = gm1_pos;
    gm1.insert(gm1.end(), gm1_neg.begin(), gm1_neg.end());
    std::sort(gm1.begin(), gm1.end());
    std::vector<int> perp_units;
    for (int i : gm1) {
        bool ok = true;
        for (int j : l_units)
            if (omega(L, d.chi, L.unit(i), L.unit(j))) ok = false;
        if (ok) perp_units.push_back(i);
    }
    {
        FMatrix pm(f, static_cast<int>(l_units.size()), static_cast<int>(gm1.size()));
        for (std::size_t a = 0; a < l_units.size(); ++a)
            for (std::size_t b = 0; b < gm1.size(); ++b)
                pm.at(static_cast<int>(a), static_cast<int>(b)) = omega(L, d.chi, L.unit(gm1[b]), L.unit(l_units[a]));
        if (static_cast<int>(gm1.size()) - pm.rank() != static_cast<int>(perp_units.size()))
            throw WalgError(ErrorKind::Unsupported, "omega-complement of l is not spanned by matrix units");
    }
    std::set<int> in_n(perp_units.begin(), perp_units.end());
    for (int i = 0; i < dim; ++i)
        if (d.weight[i] <= -2) in_n.insert(i);
    d.n_units.assign(in_n.begin(), in_n.end());
    std::stable_sort(d.n_units.begin(), d.n_units.end(), [&](int a, int b) { return d.weight[a] < d.weight[b]; });
    for (int i : d.n_units) d.n.push_back(L.unit(i));

    // bar-a: elements of bar-p orthogonal to v, piece by piece.
    for (const auto& [key, idx] : pieces) {
        std::vector<int> local;
        for (int i : idx)
            if (!in_m.count(i)) local.push_back(i);
        if (local.empty()) continue;
        FMatrix pm(f, static_cast<int>(d.v.size()), static_cast<int>(local.size()));
        for (std::size_t a = 0; a < d.v.size(); ++a)
            for (std::size_t b = 0; b < local.size(); ++b)
                pm.at(static_cast<int>(a), static_cast<int>(b)) = L.form(d.v[a], L.unit(local[b]));
        for (auto& k : pm.kernel()) d.bar_a.push_back(embed(k, local, dim));
    }

    auto vec_weight = [&](const Vec& x) {
        for (int i = 0; i < dim; ++i)
            if (x[i]) return std::make_pair(d.weight[i], d.torus[i]);
        return std::make_pair(0, Torus(py.rows(), 0));
    };
    d.r = static_cast<int>(d.ge.size());
    d.mdim = static_cast<int>(d.bar_p.size());
    d.s = static_cast<int>(d.m.size());
    if (d.r + static_cast<int>(d.bar_a.size()) != d.mdim)
        throw WalgError(ErrorKind::NotGood, "g^e and bar-a do not complement each other in bar-p");
    std::vector<std::string> labels;
    for (const auto* part : {&d.ge, &d.bar_a, &d.m})
        for (const auto& x : *part) {
            d.adapted_rows.push_back(x);
            auto [w, t] = vec_weight(x);
            d.adapted_weight.push_back(w);
            d.adapted_torus.push_back(t);
            d.kazhdan.push_back(w + 2);
            labels.push_back(label_for(L, x));
        }
    d.adapted = std::make_shared<const RestrictedLieAlgebra>(L.change_basis(d.adapted_rows, labels));

    auto lag = lagrangian_l(d);
    for (const auto& it : lag.checks)
        if (!it.pass && (choice != LagrangianChoice::Zero || it.name == "l_isotropic" || it.name == "chi_l_pmap"))
            throw WalgError(ErrorKind::NotLagrangian, it.name + ": " + it.witness);
    return d;
}

Subspace slice_complement(const GradedNilpotentDatum& d) { return d.v; }

LagrangianResult lagrangian_l(const GradedNilpotentDatum& d) {
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = L.field();
    LagrangianResult res{d.l, d.lprime, {}};
    ValidationItem iso{"l_isotropic", true, ""};
    for (const auto& x : d.l)
        for (const auto& y : d.l)
            if (omega(L, d.chi, x, y) && iso.pass) {
                iso.pass = false;
                iso.witness = format_vector(L, x) + " , " + format_vector(L, y);
            }
    res.checks.push_back(iso);
    ValidationItem maxi{"l_maximal", 2 * d.l.size() == d.dim_of_degree(-1), ""};
    if (!maxi.pass) maxi.witness = "dim l = " + std::to_string(d.l.size());
    res.checks.push_back(maxi);
    ValidationItem split{"g(-1)_split", d.l.size() + d.lprime.size() == d.dim_of_degree(-1), ""};
    res.checks.push_back(split);
    auto gm1 = d.degree_piece(-1);
    FMatrix om(f, static_cast<int>(gm1.size()), static_cast<int>(gm1.size()));
    for (std::size_t a = 0; a < gm1.size(); ++a)
        for (std::size_t b = 0; b < gm1.size(); ++b)
            om.at(static_cast<int>(a), static_cast<int>(b)) = omega(L, d.chi, gm1[a], gm1[b]);
    ValidationItem nd{"omega_nondegenerate", om.rank() == static_cast<int>(gm1.size()), ""};
    res.checks.push_back(nd);
    ValidationItem cp{"chi_l_pmap", true, ""};
    for (const auto& x : d.l)
        if (dot(f, d.chi, L.pmap(x))) {
            cp.pass = false;
            cp.witness = format_vector(L, x);
        }
    res.checks.push_back(cp);
    return res;
}

std::vector<ValidationItem> check_datum(const GradedNilpotentDatum& d) {
    const RestrictedLieAlgebra& L = *d.algebra;
    const Field& f = L.field();
    const int dim = L.dim();
    std::vector<ValidationItem> out = check_grading_axioms(L, d.e, d.weight, 2);

    auto good = is_good(d);
    out.push_back({"good", good.good, good.good ? "" : format_vector(L, good.witness)});
    out.push_back({"good_surjectivity_agrees", good.surjectivity_agrees, ""});

    ValidationItem pair{"form_pairing", true, ""};
    for (int i = 0; i < dim && pair.pass; ++i)
        for (int j = 0; j < dim; ++j)
            if (L.gram().at(i, j) && d.weight[i] != -d.weight[j]) {
                pair.pass = false;
                pair.witness = "(" + L.label(i) + "," + L.label(j) + ")";
                break;
            }
    out.push_back(pair);

    ValidationItem pp{"ppower_degree", true, ""};
    for (int i = 0; i < dim && pp.pass; ++i) {
        Vec x = L.pmap(L.unit(i));
        for (int k = 0; k < dim; ++k)
            if (x[k] && d.weight[k] != static_cast<int>(f.p()) * d.weight[i]) {
                pp.pass = false;
                pp.witness = L.label(i);
                break;
            }
    }
    out.push_back(pp);

    std::size_t neg = 0;
    for (int w : d.weight)
        if (w < -1) ++neg;
    ValidationItem md{"m_decomposition", d.m.size() == d.l.size() + neg, ""};
    out.push_back(md);
    if (d.lagrangian()) out.push_back({"dim_m_equals_d_chi", static_cast<int>(d.m.size()) == d.d_chi(), ""});
    out.push_back({"bar_p_complements_m", static_cast<int>(d.bar_p.size() + d.m.size()) == dim, ""});

    // v complements [g,e] and sits in degrees < 1.
    std::vector<Vec> span = d.v;
    for (int i = 0; i < dim; ++i) span.push_back(L.bracket(L.unit(i), d.e));
    ValidationItem vc{"v_complements_image", FMatrix::from_rows(f, span, dim).rank() == dim &&
                                                 static_cast<int>(d.v.size()) == d.r, ""};
    out.push_back(vc);
    ValidationItem vd{"v_degrees_below_one", true, ""};
    for (const auto& x : d.v)
        for (int i = 0; i < dim; ++i)
            if (x[i] && d.weight[i] >= 1) {
                vd.pass = false;
                vd.witness = format_vector(L, x);
            }
    out.push_back(vd);
    FMatrix gv(f, d.r, static_cast<int>(d.v.size()));
    for (int a = 0; a < d.r; ++a)
        for (std::size_t b = 0; b < d.v.size(); ++b) gv.at(a, static_cast<int>(b)) = L.form(d.ge[a], d.v[b]);
    out.push_back({"ge_v_pairing_nondegenerate", gv.rank() == d.r && static_cast<int>(d.v.size()) == d.r, ""});

    ValidationItem ba{"bar_a_orthogonal_to_v", true, ""};
    for (const auto& x : d.bar_a)
        for (const auto& y : d.v)
            if (L.form(x, y)) ba.pass = false;
    out.push_back(ba);
    out.push_back({"dim_bar_a", static_cast<int>(d.bar_a.size()) == d.mdim - d.r, ""});

    std::size_t near0 = d.dim_of_degree(-1) + d.dim_of_degree(0);
    out.push_back({"dim_ge_equals_g(-1)+g(0)", near0 == static_cast<std::size_t>(d.r), ""});
    out.push_back({"dim_parity", (dim - d.r) % 2 == 0, ""});

    ValidationItem g0{"g0_odd_degrees_vanish", true, ""};
    for (int i = 0; i < dim; ++i)
        if (std::all_of(d.torus[i].begin(), d.torus[i].end(), [](int x) { return x == 0; }) && d.weight[i] % 2 != 0) {
            g0.pass = false;
            g0.witness = L.label(i);
        }
    out.push_back(g0);

    if (f.p() == 2) {
        bool even = std::all_of(d.weight.begin(), d.weight.end(), [](int w) { return w % 2 == 0; });
        out.push_back({"even_at_p2", even, ""});
    }
    for (auto& it : lagrangian_l(d).checks)
        if (d.choice != LagrangianChoice::Zero || it.name != "l_maximal") out.push_back(it);
    return out;
}

std::vector<Torus> restricted_roots(const GradedNilpotentDatum& d) {
    std::set<Torus> roots;
    for (const auto& t : d.torus)
        if (std::any_of(t.begin(), t.end(), [](int x) { return x != 0; })) roots.insert(t);
    return {roots.begin(), roots.end()};
}

MAlphaResult m_alpha_table(const GradedNilpotentDatum& d) {
    if (!d.is_dynkin()) throw std::invalid_argument("m_alpha_table requires the Dynkin grading");
    MAlphaResult res;
    std::map<Torus, int> least;
    for (int i = 0; i < d.r; ++i) {
        const Torus& t = d.adapted_torus[i];
        if (std::all_of(t.begin(), t.end(), [](int x) { return x == 0; })) continue;
        int w = d.adapted_weight[i];
        if (w < 0) continue;
        auto it = least.find(t);
        if (it == least.end() || w < it->second) least[t] = w;
    }
    for (const auto& [t, w] : least) res.table[t] = 1 + w;
    for (const auto& [t, m] : res.table) {
        Torus neg = t;
        for (int& x : neg) x = -x;
        auto it = res.table.find(neg);
        if (it == res.table.end() || it->second != m) res.symmetric = false;
    }
    return res;
}

bool polytope_contains(const MTable& mtable, const std::vector<int>& delta, int c) {
    for (const auto& [alpha, m] : mtable)
        if (std::abs(pair_torus(alpha, delta)) >= c * m) return false;
    return true;
}

GoodnessResult is_good_cocharacter(const GradedNilpotentDatum& dynkin, const std::vector<int>& delta, int c) {
    std::vector<int> w(dynkin.weight.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = c * dynkin.weight[i] - pair_torus(dynkin.torus[i], delta);
    return goodness_from_weights(*dynkin.algebra, dynkin.e, w, 2 * c);
}

Pyramid pyramid_from_delta(const std::vector<int>& partition, const std::vector<int>& delta) {
    Pyramid py = dynkin_pyramid(partition);
    for (std::size_t r = 0; r < py.row_offsets.size(); ++r) py.row_offsets[r] -= delta[r];
    return py;
}

std::vector<Pyramid> enumerate_integral_good_gradings(const std::vector<int>& partition, std::uint64_t p) {
    validate_partition(partition);
    Field f(p);
    const int rows = static_cast<int>(partition.size());
    const int lam1 = partition[0];
    const int n = std::accumulate(partition.begin(), partition.end(), 0);
    RestrictedLieAlgebra L = build_gl(n, p);
    std::vector<Pyramid> out;
    std::vector<int> offs(rows, -lam1);
    offs[0] = -(lam1 - 1);
    while (true) {
        Pyramid py{partition, offs};
        auto pw = pyramid_weights(py, f);
        bool even = std::all_of(pw.weight.begin(), pw.weight.end(), [](int w) { return w % 2 == 0; });
        if ((p != 2 || even) && goodness_from_weights(L, pw.e, pw.weight, 2).good) out.push_back(py);
        int r = rows - 1;
        while (r >= 1 && offs[r] == lam1) offs[r--] = -lam1;
        if (r < 1) break;
        ++offs[r];
    }
    return out;
}

} // namespace walg
