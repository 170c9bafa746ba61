#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "walg/check.hpp"
#include "walg/pbw.hpp"

namespace walg {

enum class InvariantFlavor { Group, Lie };

/// Invariants in F_bound Q, one reduced-echelon basis per torus-weight block.
/// Each basis element's top monomial (its pivot) carries coefficient 1 and no other element
/// of the same block has a nonzero coefficient there.
struct InvariantSpace {
    int bound = 0;
    InvariantFlavor flavor = InvariantFlavor::Group;
    std::vector<Elem> basis;
    std::vector<int> pivot_degree;
    std::vector<Torus> block;
    std::vector<long long> dims;      // dims[j] = dim F_j for 0 <= j <= bound
    std::vector<long long> expected;  // polynomial-algebra count per j
    /// Group invariance is imposed through root subgroups u_E(t), E a matrix unit of n.
    std::string reduction;
};

/// Kazhdan degrees n_i + 2 of g^e.
std::vector<int> ge_degrees(const GradedNilpotentDatum& d);
/// n_i + 2 for g^e followed by p(n_j + 2) for bar-a.
std::vector<int> uhat_degrees(const GradedNilpotentDatum& d);

/// Throws DimensionMismatch when some F_j disagrees with the count, unless check is false.
InvariantSpace invariants_group(WContext& ctx, int j, bool check = true);
InvariantSpace invariants_lie(WContext& ctx, int j, bool check = true);

/// Elements of the invariant space in the given block with top degree <= j.
std::vector<Elem> invariants_in_block(const InvariantSpace& inv, const Torus& block, int j);

struct WPresentation {
    std::vector<Elem> theta;       // Theta(x_i), i < r
    std::vector<int> degree;       // n_i + 2
    std::vector<Torus> torus;
    std::vector<Elem> phi;         // p-centre generators for g^e
    std::vector<Elem> theta_hat;   // x^p - x^{[p]} + I for bar-a
    std::vector<CheckRecord> checks;
};

/// Canonical PBW generators; requires invariants through max(n_i) + 2. Throws SelectionFailed.
WPresentation pbw_generators(WContext& ctx, const InvariantSpace& inv);

/// Ordered products Theta^b, memoized.
class ThetaMonomials {
public:
    ThetaMonomials(WContext& ctx, const std::vector<Elem>& gens, std::vector<int> degrees);
    const Elem& get(const Mono& b);
    /// All exponent vectors with weighted degree <= j, sorted.
    std::vector<Mono> exponents(int j) const;
    const std::vector<int>& degrees() const { return deg_; }

private:
    WContext& ctx_;
    std::vector<Elem> gens_;
    std::vector<int> deg_;
    std::map<Mono, Elem> cache_;
};

CheckRecord monomial_basis_check(WContext& ctx, const WPresentation& w, const InvariantSpace& inv, int j);

/// Coordinates of x in the Theta^b basis with |b| <= bound; nullopt when x is outside that span.
std::optional<Elem> expand_in_theta(WContext& ctx, ThetaMonomials& tm, const Elem& x, int bound);

struct StructureConstants {
    std::map<std::pair<int, int>, Elem> expansion;  // keyed (i, j), exponents over Theta
    std::vector<CheckRecord> checks;
};
StructureConstants structure_constants(WContext& ctx, const WPresentation& w,
                                       const std::vector<std::pair<int, int>>& pairs);
std::vector<std::pair<int, int>> all_pairs(int r);
/// Jacobi identity for every triple whose degree fits under the cap.
CheckRecord jacobi_check(WContext& ctx, const WPresentation& w);

/// Fills phi and theta_hat with their checks. Throws CapTooSmall.
void pcentre_generators(WContext& ctx, WPresentation& w);
/// Commutative product in S(bar-p), used for symbols.
Elem symbol_product(const Field& f, const Elem& a, const Elem& b);
/// Part of x in weighted degree exactly deg.
Elem homogeneous_part(const Elem& x, const std::vector<int>& degrees, int deg);

CheckRecord verify_uhat_decomposition(WContext& ctx, const WPresentation& w, const InvariantSpace& lie, int j);
CheckRecord verify_q_freeness(WContext& ctx, const WPresentation& w, int j);

/// Everything needed to compare two W-algebras of the same e.
struct WSummary {
    InvariantSpace group;
    WPresentation pres;
    StructureConstants sc;
};
WSummary summarize(WContext& ctx, int j);
/// Equal filtered dimension tables plus a greedy generator matching by degree and commutator profile.
CheckRecord verify_independence(WContext& a, WContext& b, int j);

/// Smallest cap allowing every p-centre check.
int pcentre_cap(const GradedNilpotentDatum& d);

} // namespace walg
