#include "walg/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "walg/parallel.hpp"
#include "walg/reduced.hpp"
#include "walg/walg.hpp"

namespace walg {

namespace {

using nlohmann::json;

const char* kAxioms = "good grading axioms";
const char* kPolytope = "good-grading polytope";
const char* kMAlpha = "m(alpha) symmetry";
const char* kPbw = "PBW theorem: gr U(g,e) is polynomial on g^e";
const char* kExtPbw = "extended PBW theorem: gr U-hat(g,e) is polynomial on bar-p";
const char* kShape = "PBW generators: leading term, no stray linear term, parity";
const char* kRelations = "relations among PBW generators";
const char* kPCentre = "p-centre of U(g,e) and U-hat(g,e)";
const char* kFree = "Q free over U(g,e)";
const char* kIndep = "independence of l and of the good grading";
const char* kRedDim = "dim U_eta(g,e) = p^{dim g^e}";
const char* kRedShape = "reduced generators have no terms with |a| <= 1 besides x_i";
const char* kEnd = "U_eta(g,e) as invariants and as End(Q^eta)^op";
const char* kMatrix = "U_eta(g) is Mat_{p^d_chi}(U_eta(g,e))";
const char* kFaithful = "Q^eta is a faithful U_eta(g)-module";
const char* kSkryabin = "Skryabin equivalence at the reduced level";
const char* kCentral = "central reduction and M-orbit invariance";

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw WalgError(ErrorKind::ConfigError, msg);
}

std::vector<int> int_array(const json& j, const std::string& key) {
    require(j.is_array(), key + " must be an array of integers");
    std::vector<int> out;
    for (const auto& x : j) {
        require(x.is_number_integer(), key + " must be an array of integers");
        out.push_back(x.get<int>());
    }
    return out;
}

std::vector<long long> ll_array(const json& j, const std::string& key) {
    require(j.is_array(), key + " must be an array of integers");
    std::vector<long long> out;
    for (const auto& x : j) {
        require(x.is_number_integer(), key + " must be an array of integers");
        out.push_back(x.get<long long>());
    }
    return out;
}

std::optional<std::vector<int>> parse_pyramid(const json& j) {
    if (j.is_string()) {
        require(j.get<std::string>() == "dynkin", "pyramid must be \"dynkin\" or an offset array");
        return std::nullopt;
    }
    return int_array(j, "pyramid");
}

json pyramid_json(const Pyramid& py) { return {{"partition", py.partition}, {"offsets", py.row_offsets}}; }

json lines(const std::string& s) {
    json out = json::array();
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

CheckRecord table_record(const std::string& name, const InvariantSpace& inv) {
    CheckRecord r{name, inv.dims == inv.expected, "", {{"bound", inv.bound}, {"dims", inv.dims}, {"expected", inv.expected}}};
    for (std::size_t j = 0; j < inv.dims.size() && !r.pass; ++j)
        if (inv.dims[j] != inv.expected[j]) {
            r.witness = "j = " + std::to_string(j) + ": " + std::to_string(inv.dims[j]) + " vs " + std::to_string(inv.expected[j]);
            break;
        }
    return r;
}

int max_ge_kazhdan(const GradedNilpotentDatum& d) {
    int m = 0;
    for (int k = 0; k < d.r; ++k) m = std::max(m, d.kazhdan[k]);
    return m;
}

struct WBundle {
    std::unique_ptr<WContext> ctx;
    InvariantSpace group;
    WPresentation pres;
};

WBundle presentation(std::shared_ptr<const GradedNilpotentDatum> d, int cap, int bound) {
    WBundle b;
    b.ctx = std::make_unique<WContext>(d, cap);
    b.group = invariants_group(*b.ctx, bound, false);
    b.pres = pbw_generators(*b.ctx, b.group);
    return b;
}

} // namespace

LagrangianChoice parse_choice(const std::string& s) {
    if (s == "positive") return LagrangianChoice::Positive;
    if (s == "negative") return LagrangianChoice::Negative;
    if (s == "zero") return LagrangianChoice::Zero;
    throw WalgError(ErrorKind::ConfigError, "lagrangian must be positive, negative or zero");
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::istringstream is(s);
    for (std::string tok; std::getline(is, tok, ',');) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(tok, &pos));
            require(pos == tok.size(), "bad integer '" + tok + "'");
        } catch (const std::logic_error&) {
            throw WalgError(ErrorKind::ConfigError, "bad integer '" + tok + "'");
        }
    }
    return out;
}

std::uint64_t seed_from_env() {
    const char* s = std::getenv("WALG_SEED");
    if (!s || !*s) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    require(*end == '\0', "WALG_SEED must be a nonnegative integer");
    return v;
}

JobConfig JobConfig::from_json(const json& j) {
    require(j.is_object(), "config must be a JSON object");
    static const std::vector<std::string> known = {"prime", "partition", "pyramid", "lagrangian", "J", "cap", "eta",
                                                   "random_etas", "verma_weights", "polytope_window", "compare",
                                                   "dump_table", "reduced_limit", "algebra"};
    for (auto it = j.begin(); it != j.end(); ++it)
        require(std::find(known.begin(), known.end(), it.key()) != known.end(), "unknown key '" + it.key() + "'");
    require(!j.contains("algebra"), "only gl_n given by a partition is supported");
    JobConfig c;
    require(j.contains("prime") && j["prime"].is_number_unsigned(), "prime must be a positive integer");
    c.prime = j["prime"].get<std::uint64_t>();
    require(is_prime(c.prime), std::to_string(c.prime) + " is not prime");
    require(j.contains("partition"), "partition is required");
    c.partition = int_array(j["partition"], "partition");
    validate_partition(c.partition);
    if (j.contains("pyramid")) c.offsets = parse_pyramid(j["pyramid"]);
    if (c.offsets) require(c.offsets->size() == c.partition.size(), "pyramid needs one offset per row");
    if (j.contains("lagrangian")) {
        require(j["lagrangian"].is_string(), "lagrangian must be a string");
        c.choice = parse_choice(j["lagrangian"].get<std::string>());
    }
    if (j.contains("J")) {
        require(j["J"].is_number_integer() && j["J"].get<int>() >= 0, "J must be a nonnegative integer");
        c.J = j["J"].get<int>();
    }
    if (j.contains("cap")) {
        require(j["cap"].is_number_integer() && j["cap"].get<int>() >= 0, "cap must be a nonnegative integer");
        c.cap = j["cap"].get<int>();
    }
    if (j.contains("eta")) {
        require(j["eta"].is_array(), "eta must be an array of coordinate arrays");
        for (const auto& e : j["eta"]) c.etas.push_back(ll_array(e, "eta entry"));
    }
    if (j.contains("random_etas")) {
        require(j["random_etas"].is_number_integer() && j["random_etas"].get<int>() >= 0, "random_etas must be >= 0");
        c.random_etas = j["random_etas"].get<int>();
    }
    if (j.contains("verma_weights")) {
        require(j["verma_weights"].is_array(), "verma_weights must be an array");
        for (const auto& w : j["verma_weights"]) c.verma_weights.push_back(ll_array(w, "verma weight"));
    }
    if (j.contains("polytope_window")) {
        require(j["polytope_window"].is_number_integer() && j["polytope_window"].get<int>() >= 0,
                "polytope_window must be >= 0");
        c.polytope_window = j["polytope_window"].get<int>();
    }
    if (j.contains("compare")) {
        require(j["compare"].is_array(), "compare must be an array");
        for (const auto& t : j["compare"]) {
            require(t.is_object(), "compare entries are objects");
            CompareTarget ct;
            if (t.contains("pyramid")) ct.offsets = parse_pyramid(t["pyramid"]);
            if (t.contains("lagrangian")) ct.choice = parse_choice(t["lagrangian"].get<std::string>());
            c.compare.push_back(ct);
        }
    }
    if (j.contains("reduced_limit")) {
        require(j["reduced_limit"].is_number_integer() && j["reduced_limit"].get<long long>() > 0,
                "reduced_limit must be a positive integer");
        c.reduced_limit = j["reduced_limit"].get<long long>();
    }
    if (j.contains("dump_table")) {
        require(j["dump_table"].is_boolean(), "dump_table must be a boolean");
        c.dump_table = j["dump_table"].get<bool>();
    }
    return c;
}

std::shared_ptr<const GradedNilpotentDatum> build_datum(const JobConfig& cfg, const std::optional<std::vector<int>>& offsets,
                                                        LagrangianChoice choice) {
    Pyramid py = offsets ? Pyramid{cfg.partition, *offsets} : dynkin_pyramid(cfg.partition);
    return std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(py, cfg.prime, choice));
}

int extended_bound(const GradedNilpotentDatum& d, int J) {
    int least = 0;
    for (int k = d.r; k < d.mdim; ++k) least = least ? std::min(least, d.kazhdan[k]) : d.kazhdan[k];
    return std::max(J, d.prime() * least);
}

CheckRecord polytope_sweep(const GradedNilpotentDatum& dynkin, int window) {
    auto mt = m_alpha_table(dynkin).table;
    const int rows = dynkin.pyramid.rows();
    const int side = 2 * window + 1;
    long long total = 1;
    for (int i = 0; i < rows; ++i) total *= side;
    CheckRecord rec{"polytope_matches_goodness", true, "", json::object()};
    std::vector<std::vector<char>> verdict(2, std::vector<char>(total, 0));
    std::vector<long long> inside(2, 0);
    for (int c = 1; c <= 2; ++c)
        parallel_for(static_cast<int>(total), [&](int idx) {
            std::vector<int> delta(rows);
            long long x = idx;
            for (int i = 0; i < rows; ++i, x /= side) delta[i] = static_cast<int>(x % side) - window;
            verdict[c - 1][idx] = polytope_contains(mt, delta, c) == is_good_cocharacter(dynkin, delta, c).good;
        });
    for (int c = 1; c <= 2 && rec.pass; ++c)
        for (long long idx = 0; idx < total; ++idx) {
            std::vector<int> delta(rows);
            long long x = idx;
            for (int i = 0; i < rows; ++i, x /= side) delta[i] = static_cast<int>(x % side) - window;
            if (polytope_contains(mt, delta, c)) ++inside[c - 1];
            if (!verdict[c - 1][idx]) {
                rec.pass = false;
                rec.witness = "c = " + std::to_string(c) + ", delta = " + json(delta).dump();
                break;
            }
        }
    rec.data = {{"window", window}, {"cocharacters", total}, {"inside_c1", inside[0]}, {"inside_c2", inside[1]}};
    return rec;
}

Report run_gradings(const JobConfig& cfg) {
    Report rep("gradings " + json(cfg.partition).dump() + " p=" + std::to_string(cfg.prime));
    auto t0 = Clock::now();
    auto d = build_datum(cfg);
    rep.add_items(kAxioms, check_datum(*d));
    json listed = json::array();
    for (const auto& py : enumerate_integral_good_gradings(cfg.partition, cfg.prime)) {
        auto dd = grading_from_pyramid(py, cfg.prime);
        auto g = is_good(dd);
        listed.push_back({{"pyramid", pyramid_json(py)}, {"weights", dd.weight}, {"good", g.good},
                          {"surjectivity_agrees", g.surjectivity_agrees}});
        rep.add(kAxioms, CheckRecord{"listed_grading_is_good", g.good && g.surjectivity_agrees,
                                     g.good ? "" : "ad e fails injectivity in degree " + std::to_string(g.failing_degree),
                                     {{"offsets", py.row_offsets}}});
    }
    rep.section("good_gradings", listed);
    auto dyn = build_datum(cfg, std::nullopt, LagrangianChoice::Positive);
    auto ma = m_alpha_table(*dyn);
    json mt = json::array();
    for (const auto& [alpha, m] : ma.table) mt.push_back({{"alpha", alpha}, {"m", m}});
    rep.section("m_alpha", mt);
    rep.add(kMAlpha, CheckRecord{"m_alpha_symmetric", ma.symmetric, ma.symmetric ? "" : "m(alpha) != m(-alpha)", json::object()});
    rep.add(kPolytope, polytope_sweep(*dyn, cfg.polytope_window));
    rep.timing("gradings", since(t0));
    return rep;
}

Report run_walg(const JobConfig& cfg) {
    Report rep("walg " + json(cfg.partition).dump() + " p=" + std::to_string(cfg.prime) + " J=" + std::to_string(cfg.J));
    auto d = build_datum(cfg);
    const int Jhat = extended_bound(*d, cfg.J);
    const int Jg = std::max(cfg.J, max_ge_kazhdan(*d));
    const int cap = cfg.cap.value_or(std::max({pcentre_cap(*d), Jg, Jhat}));
    rep.section("datum", {{"pyramid", pyramid_json(d->pyramid)}, {"lagrangian", lagrangian_choice_name(d->choice)},
                          {"dim_ge", d->r}, {"dim_bar_p", d->mdim}, {"kazhdan", d->kazhdan}, {"cap", cap}});
    WContext ctx(d, cap);
    auto t0 = Clock::now();
    InvariantSpace group;
    try {
        group = invariants_group(ctx, Jg, false);
    } catch (const WalgError& e) {
        rep.add_error(kPbw, "pbw_dimension_law", e);
        return rep;
    }
    rep.add(kPbw, table_record("pbw_dimension_law", group));
    rep.timing("group invariants", since(t0));

    std::optional<InvariantSpace> lie;
    if (d->lagrangian()) {
        t0 = Clock::now();
        try {
            lie = invariants_lie(ctx, Jhat, false);
            rep.add(kExtPbw, table_record("extended_pbw_dimension_law", *lie));
        } catch (const WalgError& e) {
            rep.add_error(kExtPbw, "extended_pbw_dimension_law", e);
        }
        rep.timing("Lie invariants", since(t0));
    } else {
        rep.section("extended_pbw", "skipped: l is not Lagrangian");
    }

    t0 = Clock::now();
    WPresentation w;
    try {
        w = pbw_generators(ctx, group);
    } catch (const WalgError& e) {
        rep.add_error(kShape, "pbw_generators", e);
        return rep;
    }
    rep.add(kShape, w.checks);
    json dumps = json::array();
    for (std::size_t i = 0; i < w.theta.size(); ++i)
        dumps.push_back({{"index", i}, {"degree", w.degree[i]}, {"torus", w.torus[i]}, {"terms", lines(dump_elem(w.theta[i]))}});
    rep.section("theta", dumps);
    rep.add(kPbw, monomial_basis_check(ctx, w, group, Jg));
    rep.timing("generators", since(t0));

    t0 = Clock::now();
    auto sc = structure_constants(ctx, w, all_pairs(d->r));
    rep.add(kRelations, sc.checks);
    json comm = json::array();
    for (const auto& [ij, e] : sc.expansion) comm.push_back({{"i", ij.first}, {"j", ij.second}, {"terms", lines(dump_elem(e))}});
    rep.section("commutators", comm);
    rep.add(kRelations, jacobi_check(ctx, w));
    rep.timing("relations", since(t0));

    t0 = Clock::now();
    const std::size_t before = w.checks.size();
    try {
        pcentre_generators(ctx, w);
        rep.add(kPCentre, std::vector<CheckRecord>(w.checks.begin() + static_cast<long>(before), w.checks.end()));
        if (lie) rep.add(kPCentre, verify_uhat_decomposition(ctx, w, *lie, Jhat));
    } catch (const WalgError& e) {
        rep.add_error(kPCentre, "pcentre_generators", e);
    }
    rep.add(kFree, verify_q_freeness(ctx, w, Jg));
    rep.timing("p-centre and freeness", since(t0));

    for (const auto& t : cfg.compare) {
        t0 = Clock::now();
        try {
            auto d2 = build_datum(cfg, t.offsets, t.choice);
            WContext ctx2(d2, cap);
            auto rec = verify_independence(ctx, ctx2, cfg.J);
            rec.data["against"] = {{"pyramid", pyramid_json(d2->pyramid)}, {"lagrangian", lagrangian_choice_name(t.choice)}};
            rep.add(kIndep, rec);
        } catch (const WalgError& e) {
            rep.add_error(kIndep, "independence", e);
        }
        rep.timing("independence", since(t0));
    }
    return rep;
}

Report run_reduced(const JobConfig& cfg) {
    Report rep("reduced " + json(cfg.partition).dump() + " p=" + std::to_string(cfg.prime));
    auto d = build_datum(cfg);
    const double uea_dim = std::pow(static_cast<double>(d->prime()), d->dim());
    if (uea_dim > cfg.reduced_limit) {
        rep.section("skipped", "p^dim g = " + std::to_string(static_cast<long long>(uea_dim)) + " exceeds reduced_limit " +
                                   std::to_string(cfg.reduced_limit));
        return rep;
    }
    auto t0 = Clock::now();
    WBundle wb;
    try {
        wb = presentation(d, pcentre_cap(*d), max_ge_kazhdan(*d));
        pcentre_generators(*wb.ctx, wb.pres);
    } catch (const WalgError& e) {
        rep.add_error(kRedShape, "global_generators", e);
        return rep;
    }
    rep.timing("global generators", since(t0));

    std::vector<EtaCharacter> etas;
    std::vector<std::string> tags;
    etas.push_back(EtaCharacter::from_slice(*d, std::vector<long long>(d->v.size(), 0)));
    tags.push_back("chi");
    for (const auto& e : cfg.etas) {
        etas.push_back(EtaCharacter::from_slice(*d, e));
        tags.push_back("v" + json(e).dump());
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<long long> coord(0, static_cast<long long>(cfg.prime) - 1);
    for (int k = 0; k < cfg.random_etas; ++k) {
        std::vector<long long> e(d->v.size());
        for (auto& x : e) x = coord(rng);
        etas.push_back(EtaCharacter::from_slice(*d, e));
        tags.push_back("v" + json(e).dump());
    }

    json dims = json::array();
    for (std::size_t k = 0; k < etas.size(); ++k) {
        t0 = Clock::now();
        ReducedGG gg(d, etas[k]);
        std::unique_ptr<ReducedW> rw;
        try {
            rw = std::make_unique<ReducedW>(gg, &wb.pres);
        } catch (const WalgError& e) {
            rep.add_error(kRedDim, "reduced_w_dimension[" + tags[k] + "]", e);
            continue;
        }
        auto tagged = [&](std::vector<CheckRecord> cs) {
            for (auto& c : cs) c.name += "[" + tags[k] + "]";
            return cs;
        };
        auto cs = tagged(rw->checks());
        rep.add(kRedDim, cs[0]);
        for (std::size_t i = 1; i < cs.size(); ++i)
            rep.add(cs[i].name.rfind("product_matches", 0) == 0 || cs[i].name.rfind("right_", 0) == 0 ? kEnd : kRedShape, cs[i]);
        rep.add(kMatrix, tagged(verify_matrix_iso(gg, *rw)));
        rep.add(kFaithful, tagged({verify_faithful(*d, etas[k].eta, gg.as_module())}));
        dims.push_back({{"eta", tags[k]}, {"q_eta", gg.dim()}, {"reduced_w", rw->dim()}});
        if (cfg.dump_table && k == 0) rep.section("multiplication_table", rw->multiplication_table());
        rep.timing("reduced algebra at " + tags[k], since(t0));

        t0 = Clock::now();
        std::vector<FDModule> modules{gg.as_module()};
        auto weights = cfg.verma_weights;
        if (weights.empty()) {
            weights.assign(2, std::vector<long long>(d->pyramid.n(), 0));
            weights[1][0] = 1;
        }
        std::vector<FDModule> vermas;
        for (const auto& lam : weights) {
            try {
                vermas.push_back(baby_verma(*d, etas[k].eta, lam));
            } catch (const WalgError& e) {
                if (e.kind() != ErrorKind::IncompatibleWeight) throw;
                rep.section("baby_verma_" + tags[k], e.what());
                break;
            }
        }
        if (!vermas.empty()) {
            auto f = verify_faithful(*d, etas[k].eta, vermas[0]);
            rep.add(kFaithful, CheckRecord{"fault_injection_detected[" + tags[k] + "]", !f.pass,
                                           f.pass ? "baby Verma reported faithful" : "", f.data});
        }
        modules.insert(modules.end(), vermas.begin(), vermas.end());
        const std::size_t sum_idx = modules.size();
        if (vermas.size() >= 2) modules.push_back(direct_sum(vermas[0], vermas[1]));
        // One regular module per datum, at chi.
        if (k == 0) modules.push_back(regular_module(d, etas[k]));
        std::vector<int> wdims;
        for (const auto& V : modules) {
            try {
                auto sk = skryabin_roundtrip(*rw, V);
                wdims.push_back(sk.dim_w);
                for (auto& c : sk.checks) {
                    c.name += "[" + tags[k] + ", " + V.name + "]";
                    rep.add(kSkryabin, c);
                }
                if (sk.hom_dim)
                    rep.add(kSkryabin, CheckRecord{"intertwiner_exists[" + tags[k] + ", " + V.name + "]", *sk.hom_dim >= 1,
                                                   *sk.hom_dim >= 1 ? "" : "no g-map from the tensor product",
                                                   {{"hom_dim", *sk.hom_dim}}});
            } catch (const WalgError& e) {
                rep.add_error(kSkryabin, "skryabin[" + tags[k] + ", " + V.name + "]", e);
                wdims.push_back(-1);
            }
        }
        if (vermas.size() >= 2) {
            int a = wdims[1], b = wdims[2], s = wdims[sum_idx];
            rep.add(kSkryabin, CheckRecord{"whittaker_additive[" + tags[k] + "]", a >= 0 && b >= 0 && s == a + b,
                                           s == a + b ? "" : "dim W(V1+V2) != dim W(V1) + dim W(V2)",
                                           {{"dims", {a, b, s}}}});
        }
        rep.timing("modules at " + tags[k], since(t0));
    }
    rep.section("dimensions", dims);

    t0 = Clock::now();
    rep.add(kCentral, central_reduction_chain(d, wb.pres, etas));
    rep.timing("central reduction", since(t0));
    return rep;
}

} // namespace walg
