#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "walg/grading.hpp"

namespace walg {

/// Exponent vector of an ordered PBW monomial y_0^{a_0} y_1^{a_1} ...
using Mono = std::vector<std::uint16_t>;
/// Sparse combination of monomials; no zero coefficients stored.
using Elem = std::map<Mono, Res>;

struct MonoHash {
    std::size_t operator()(const Mono& m) const noexcept;
};

Elem elem_constant(int nvars, Res c);
Elem elem_monomial(Mono m, Res c = 1);
/// acc += s * x
void elem_axpy(const Field& f, Elem& acc, Res s, const Elem& x);
Elem elem_scale(const Field& f, const Elem& x, Res s);
Elem elem_sub(const Field& f, const Elem& a, const Elem& b);
bool elem_is_zero(const Elem& x);
int mono_total(const Mono& m);
int mono_degree(const Mono& m, const std::vector<int>& degrees);
/// Largest weighted degree among the terms; -1 for zero.
int elem_degree(const Elem& x, const std::vector<int>& degrees);
/// Canonical dump: one sorted "coeff·x^(a_0,...)" line per term.
std::string dump_elem(const Elem& x);

/// Configuration of a left module over U(L) with PBW basis on the first nfree variables.
/// Variables at index >= nfree act on the generating vector through tail_char, so the module is
/// U(L) tensored over the tail subalgebra with that character. The restricted variant imposes
/// y^p = y^{[p]} + eta(y)^p.
struct PbwConfig {
    int nfree = 0;
    Vec tail_char;            // length dim; entries below nfree ignored
    bool restricted = false;
    Vec eta;                  // length dim, used when restricted
    std::vector<int> degree;  // weighted degree per variable, for the cap
    int cap = INT_MAX;
};

class PbwEngine {
public:
    PbwEngine(std::shared_ptr<const RestrictedLieAlgebra> alg, PbwConfig cfg);

    const RestrictedLieAlgebra& algebra() const { return *alg_; }
    const PbwConfig& config() const { return cfg_; }
    const Field& field() const { return alg_->field(); }

    /// y_k . x^a. Throws DegreeOverflow when a produced monomial exceeds the cap.
    const Elem& act(int k, const Mono& a);
    Elem act(int k, const Elem& x);
    /// y . x for y in algebra coordinates.
    Elem act_linear(const Vec& y, const Elem& x);
    /// y^b . x with b indexed by variable (length at most dim).
    Elem act_mono(const Mono& b, const Elem& x);
    /// sum_b c_b y^b . x
    Elem act_elem(const Elem& u, const Elem& x);
    Elem one() const { return elem_constant(cfg_.nfree, 1); }
    std::size_t memo_size() const;

private:
    Elem compute(int k, const Mono& a);
    std::shared_ptr<const RestrictedLieAlgebra> alg_;
    PbwConfig cfg_;
    Vec eta_p_;
    std::vector<std::unordered_map<Mono, Elem, MonoHash>> memo_;
};

/// U(g) and Q = U(g)/U(g)m_chi in the adapted basis of a datum. Q-monomials range over bar-p
/// (the first mdim adapted variables); m is evaluated through chi. Not thread-safe.
class WContext {
public:
    WContext(std::shared_ptr<const GradedNilpotentDatum> d, int cap);

    const GradedNilpotentDatum& datum() const { return *d_; }
    std::shared_ptr<const GradedNilpotentDatum> datum_ptr() const { return d_; }
    const Field& field() const { return d_->field(); }
    int cap() const { return cap_; }
    int nvars() const { return d_->mdim; }
    const std::vector<int>& kazhdan() const { return d_->kazhdan; }
    int kazhdan_of(const Mono& a) const { return mono_degree(a, d_->kazhdan); }
    Torus torus_of(const Mono& a) const;
    PbwEngine& ug() { return ug_; }
    PbwEngine& q() { return q_; }

    /// Adapted coordinates of a standard-coordinate element.
    Vec to_adapted(const Vec& x) const;
    Vec from_adapted(const Vec& y) const;
    const Vec& chi_adapted() const { return chi_ad_; }

    Elem straighten_multiply(const Elem& u, const Elem& v);
    /// Image of a canonical U(g) element in Q.
    Elem reduce_mod_I(const Elem& u) const;
    /// Canonical representative in U(g) of a Q element.
    Elem rep(const Elem& q) const;
    /// rep(a) . b; restricted to invariants this is the algebra product.
    Elem q_multiply(const Elem& a, const Elem& b);
    /// x . q for x in standard coordinates.
    Elem act_on_q(const Vec& x, const Elem& q);
    /// [x, u] + I for x in n (standard coordinates). Throws NotInM otherwise.
    Elem ad_action(const Vec& x, const Elem& q);
    /// Ad(1 + tE) applied to q for the matrix unit E of standard index `unit` in n.
    /// Entry k of the result is the coefficient of t^k.
    std::vector<Elem> group_action(int unit, const Elem& q);
    const std::vector<Elem>& group_action_mono(int unit, const Mono& a);
    /// All Q monomials of Kazhdan degree <= j.
    std::vector<Mono> filtered_basis(int j) const;

private:
    const std::vector<Vec>& factor_images(int unit, int k);
    std::shared_ptr<const GradedNilpotentDatum> d_;
    int cap_;
    FMatrix to_ad_;  // maps standard coordinates to adapted coordinates
    Vec chi_ad_;
    PbwEngine ug_, q_;
    std::map<std::pair<int, int>, std::vector<Vec>> factor_cache_;
    std::map<int, std::unordered_map<Mono, std::vector<Elem>, MonoHash>> group_memo_;
};

/// Number of monomials in generators of the given weighted degrees with total degree <= j.
long long monomial_count(const std::vector<int>& degrees, int j);
/// Default truncation cap 2 max(n_i) + 6 over g^e degrees n_i.
int default_cap(const GradedNilpotentDatum& d);

} // namespace walg
