// Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "walg/reduced.hpp"
#include "walg/suites.hpp"

using namespace walg;

namespace {

struct Instance {
    std::vector<int> partition;
    std::uint64_t p;
    std::vector<std::vector<long long>> shifted;  // slice coordinates of the shifted characters
    int w_dim;
};

const std::vector<Instance> kInstances = {
    {{2}, 3, {{1, 0}, {0, 2}}, 9},
    {{3}, 2, {{1, 0, 0}, {0, 1, 1}}, 8},
    {{2}, 5, {{1, 0}, {3, 4}}, 25},
};

std::shared_ptr<const GradedNilpotentDatum> dynkin(const std::vector<int>& part, std::uint64_t p,
                                                   LagrangianChoice c = LagrangianChoice::Positive) {
    return std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(dynkin_pyramid(part), p, c));
}

std::string name_of(const Instance& in) {
    std::ostringstream os;
    os << "gl_" << in.partition.size() << "(";
    int n = 0;
    for (std::size_t i = 0; i < in.partition.size(); ++i) {
        os << (i ? "," : "") << in.partition[i];
        n += in.partition[i];
    }
    os << ")/p=" << in.p;
    std::string s = os.str();
    s.replace(3, 1, std::to_string(n));
    return s;
}

long long brute_count(const std::vector<int>& degrees, int j, std::size_t k = 0) {
    if (k == degrees.size()) return 1;
    long long total = 0;
    for (int used = 0; used <= j; used += degrees[k]) total += brute_count(degrees, j - used, k + 1);
    return total;
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail.clear();
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& s) {
        if (pass) detail += (detail.empty() ? "" : "; ") + s;
    }
};

WPresentation presentation(WContext& ctx) {
    return pbw_generators(ctx, invariants_group(ctx, ctx.datum().max_ge_degree() + 2));
}

Outcome pbw_law() {
    Outcome o;
    for (const auto& in : kInstances) {
        auto d = dynkin(in.partition, in.p);
        auto t0 = std::chrono::steady_clock::now();
        WContext ctx(d, std::max(8, pcentre_cap(*d)));
        auto inv = invariants_group(ctx, 8, false);
        auto deg = ge_degrees(*d);
        for (int j = 0; j <= 8; ++j)
            if (inv.dims[j] != brute_count(deg, j)) o.fail(name_of(in) + " j=" + std::to_string(j));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s >= 10) o.fail(name_of(in) + " took " + std::to_string(s) + " s");
        o.note(name_of(in) + " ok");
    }
    return o;
}

Outcome extended_pbw_law() {
    Outcome o;
    for (const auto& in : kInstances) {
        auto d = dynkin(in.partition, in.p);
        const int bound = extended_bound(*d, 8);
        auto t0 = std::chrono::steady_clock::now();
        WContext ctx(d, std::max(bound, pcentre_cap(*d)));
        auto inv = invariants_lie(ctx, bound, false);
        auto deg = uhat_degrees(*d);
        for (int j = 0; j <= bound; ++j)
            if (inv.dims[j] != brute_count(deg, j)) o.fail(name_of(in) + " j=" + std::to_string(j));
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s >= 30) o.fail(name_of(in) + " took " + std::to_string(s) + " s");
        o.note(name_of(in) + " through j=" + std::to_string(bound));
    }
    return o;
}

Outcome generator_shape() {
    Outcome o;
    std::vector<std::pair<std::vector<int>, std::uint64_t>> cases;
    for (const auto& in : kInstances) cases.push_back({in.partition, in.p});
    cases.push_back({{2, 1}, 3});
    for (const auto& [part, p] : cases) {
        auto d = dynkin(part, p);
        WContext ctx(d, pcentre_cap(*d));
        auto w = presentation(ctx);
        int seen = 0;
        for (const auto& c : w.checks)
            if (c.name == "theta_no_stray_linear_term" || c.name == "theta_parity" || c.name == "theta_even_degrees") {
                ++seen;
                if (!c.pass) o.fail(c.name + ": " + c.witness);
            }
        if (seen != 2) o.fail("shape checks missing");
    }
    o.note(std::to_string(cases.size()) + " instances");
    return o;
}

Outcome reduced_dimension() {
    Outcome o;
    for (const auto& in : kInstances) {
        auto d = dynkin(in.partition, in.p);
        std::vector<std::vector<long long>> coords{std::vector<long long>(d->v.size(), 0)};
        coords.insert(coords.end(), in.shifted.begin(), in.shifted.end());
        std::string dims;
        for (const auto& c : coords) {
            ReducedGG gg(d, EtaCharacter::from_slice(*d, c));
            ReducedW w(gg);
            if (w.dim() != in.w_dim || w.dim() != ipow(static_cast<long long>(in.p), d->r))
                o.fail(name_of(in) + " dim " + std::to_string(w.dim()));
            dims += (dims.empty() ? "" : "/") + std::to_string(w.dim());
        }
        o.note(name_of(in) + " " + dims);
    }
    return o;
}

Outcome matrix_iso() {
    Outcome o;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& in = kInstances[i];
        auto d = dynkin(in.partition, in.p);
        ReducedGG gg(d, EtaCharacter::from_slice(*d, std::vector<long long>(d->v.size(), 0)));
        ReducedW w(gg);
        const long long p = static_cast<long long>(in.p);
        const long long pd = ipow(p, d->d_chi());
        if (gg.dim() != pd * w.dim()) o.fail(name_of(in) + " dim Q != p^d_chi dim W");
        if (ipow(p, d->dim()) != pd * pd * w.dim()) o.fail(name_of(in) + " p^dim g != p^(2 d_chi) dim W");
        for (const auto& c : verify_matrix_iso(gg, w))
            if (!c.pass) o.fail(name_of(in) + " " + c.name + ": " + c.witness);
        o.note(name_of(in) + " " + std::to_string(gg.dim()) + "=" + std::to_string(pd) + "x" + std::to_string(w.dim()) + ", " +
               std::to_string(ipow(p, d->dim())) + "=" + std::to_string(pd * pd) + "x" + std::to_string(w.dim()));
    }
    return o;
}

Outcome faithful() {
    Outcome o;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& in = kInstances[i];
        auto d = dynkin(in.partition, in.p);
        auto eta = EtaCharacter::from_slice(*d, std::vector<long long>(d->v.size(), 0));
        ReducedGG gg(d, eta);
        auto rec = verify_faithful(*d, eta.eta, gg.as_module());
        if (!rec.pass || rec.data["kernel_dim"] != 0) o.fail(name_of(in) + ": " + rec.witness);
        o.note(name_of(in) + " kernel 0");
    }
    return o;
}

Outcome skryabin() {
    Outcome o;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& in = kInstances[i];
        auto d = dynkin(in.partition, in.p);
        auto eta = EtaCharacter::from_slice(*d, std::vector<long long>(d->v.size(), 0));
        ReducedGG gg(d, eta);
        WContext ctx(d, pcentre_cap(*d));
        auto pres = presentation(ctx);
        ReducedW w(gg, &pres);
        std::vector<long long> zero(d->pyramid.n(), 0), one = zero;
        one[0] = 1;
        std::vector<FDModule> mods{regular_module(d, eta), baby_verma(*d, eta.eta, zero), baby_verma(*d, eta.eta, one)};
        const long long pd = ipow(static_cast<long long>(in.p), d->d_chi());
        for (const auto& V : mods) {
            auto res = skryabin_roundtrip(w, V);
            if (V.dim % pd != 0) o.fail(name_of(in) + " " + V.name + " dim not divisible");
            for (const auto& c : res.checks)
                if (!c.pass) o.fail(name_of(in) + " " + V.name + " " + c.name + ": " + c.witness);
        }
        o.note(name_of(in) + " regular(" + std::to_string(mods[0].dim) + ") + 2 baby Vermas(" + std::to_string(mods[1].dim) + ")");
    }
    return o;
}

Outcome independence() {
    Outcome o;
    auto pos = dynkin({2, 1}, 3, LagrangianChoice::Positive);
    const int cap = std::max(pcentre_cap(*pos), 8);
    WContext a(pos, cap);
    for (auto c : {LagrangianChoice::Negative, LagrangianChoice::Zero}) {
        WContext b(dynkin({2, 1}, 3, c), cap);
        auto rec = verify_independence(a, b, 8);
        if (!rec.pass) o.fail(std::string("Dynkin positive vs ") + lagrangian_choice_name(c) + ": " + rec.witness);
    }
    auto even1 = std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(Pyramid{{2, 1}, {-1, -1}}, 3));
    auto even2 = std::make_shared<const GradedNilpotentDatum>(grading_from_pyramid(Pyramid{{2, 1}, {-1, 1}}, 3));
    WContext e1(even1, cap), e2(even2, cap);
    auto rec = verify_independence(e1, e2, 8);
    if (!rec.pass) o.fail("pyramids [-1,-1] vs [-1,1]: " + rec.witness);
    o.note("Lagrangian positive/negative/zero and pyramids [-1,-1]/[-1,1] through j=8");
    return o;
}

Outcome polytope() {
    Outcome o;
    for (auto part : {std::vector<int>{2, 1}, std::vector<int>{2, 2}}) {
        auto rec = polytope_sweep(*dynkin(part, 3), 3);
        if (!rec.pass) o.fail(rec.witness);
        o.note(std::to_string(rec.data["cocharacters"].get<long long>()) + " cocharacters");
    }
    return o;
}

Outcome pcentre() {
    Outcome o;
    for (const auto& in : kInstances) {
        auto d = dynkin(in.partition, in.p);
        WContext ctx(d, pcentre_cap(*d));
        auto w = presentation(ctx);
        const std::size_t before = w.checks.size();
        pcentre_generators(ctx, w);
        int seen = 0;
        for (std::size_t k = before; k < w.checks.size(); ++k) {
            const auto& c = w.checks[k];
            ++seen;
            if (!c.pass) o.fail(name_of(in) + " " + c.name + ": " + c.witness);
            if (c.data.contains("skipped_above_cap") && c.data["skipped_above_cap"] != 0)
                o.fail(name_of(in) + " " + c.name + " skipped terms above the cap");
        }
        if (seen == 0) o.fail(name_of(in) + " no p-centre checks ran");
        o.note(name_of(in) + " " + std::to_string(seen) + " checks");
    }
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"PBW dimension law", pbw_law},
        {"extended PBW dimension law", extended_pbw_law},
        {"generator shape", generator_shape},
        {"reduced W-algebra dimension", reduced_dimension},
        {"Q-freeness and matrix isomorphism", matrix_iso},
        {"faithfulness of Q^eta", faithful},
        {"Skryabin round trip", skryabin},
        {"independence of grading and Lagrangian", independence},
        {"good-grading polytope", polytope},
        {"p-centre surrogate", pcentre},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const WalgError& e) {
            o.fail(std::string(error_kind_name(e.kind())) + ": " + e.what());
        } catch (const std::exception& e) {
            o.fail(e.what());
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("criterion %2zu %s  %-40s %7.2fs  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), s,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
