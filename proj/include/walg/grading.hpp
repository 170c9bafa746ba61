#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "walg/lie.hpp"

namespace walg {

/// Young-diagram rows placed on a column lattice; boxes in a row sit at offset, offset+2, ...
/// Boxes are labelled row by row, right to left, so e is a sum of superdiagonal matrix units.
struct Pyramid {
    std::vector<int> partition;
    std::vector<int> row_offsets;

    int n() const;
    int rows() const { return static_cast<int>(partition.size()); }
    std::vector<int> row_columns(int r) const;
    /// Per box label (0-based): row index and column.
    std::vector<int> box_row() const;
    std::vector<int> box_col() const;
    bool operator==(const Pyramid& o) const { return partition == o.partition && row_offsets == o.row_offsets; }
};

void validate_partition(const std::vector<int>& partition);
Pyramid dynkin_pyramid(const std::vector<int>& partition);

/// Which half of g(-1) is placed in m.
enum class LagrangianChoice { Positive, Negative, Zero };
const char* lagrangian_choice_name(LagrangianChoice c);

using Torus = std::vector<int>;
using Subspace = std::vector<Vec>;

/// Good grading data for a nilpotent e in gl_n built from a pyramid. Subspaces are row bases in
/// standard coordinates. The adapted basis lists g^e, then bar-a, then m.
struct GradedNilpotentDatum {
    std::shared_ptr<const RestrictedLieAlgebra> algebra;
    Pyramid pyramid;
    LagrangianChoice choice = LagrangianChoice::Positive;
    Vec e;
    LinearFunctional chi;
    std::vector<int> weight;    // per standard basis index
    std::vector<Torus> torus;   // per standard basis index

    Subspace l, lprime, m, n, bar_p, ge, v, bar_a;
    std::vector<int> m_units;   // standard indices spanning m
    std::vector<int> n_units;   // standard indices spanning n

    std::shared_ptr<const RestrictedLieAlgebra> adapted;
    Subspace adapted_rows;
    int r = 0;       // dim g^e
    int mdim = 0;    // dim bar-p
    int s = 0;       // dim m
    std::vector<int> adapted_weight;
    std::vector<Torus> adapted_torus;
    std::vector<int> kazhdan;   // n_i + 2 per adapted index

    int prime() const { return static_cast<int>(algebra->field().p()); }
    const Field& field() const { return algebra->field(); }
    int dim() const { return algebra->dim(); }
    bool lagrangian() const { return 2 * l.size() == dim_of_degree(-1); }
    std::size_t dim_of_degree(int j) const;
    int d_chi() const { return (dim() - r) / 2; }
    bool is_dynkin() const { return pyramid == dynkin_pyramid(pyramid.partition); }
    /// Largest adapted g^e degree n_i.
    int max_ge_degree() const;
    std::vector<Vec> degree_piece(int j) const;
};

/// Throws NotGood, OddGradingAtP2, NotLagrangian.
GradedNilpotentDatum grading_from_pyramid(const Pyramid& py, std::uint64_t p,
                                          LagrangianChoice choice = LagrangianChoice::Positive);

struct GoodnessResult {
    bool good = true;
    int failing_degree = 0;
    Vec witness;                      // kernel vector of ad e in a negative degree
    bool surjectivity_agrees = true;  // equivalent criterion computed independently
};

/// Grading axioms for arbitrary per-basis weights with e in degree e_degree.
std::vector<ValidationItem> check_grading_axioms(const RestrictedLieAlgebra& L, const Vec& e,
                                                 const std::vector<int>& weights, int e_degree);
/// ad e injective on g(w) for w <= -e_degree/2, with the surjectivity cross-check.
GoodnessResult goodness_from_weights(const RestrictedLieAlgebra& L, const Vec& e, const std::vector<int>& weights,
                                     int e_degree);
GoodnessResult is_good(const GradedNilpotentDatum& d);

/// All invariants of a datum, one item each.
std::vector<ValidationItem> check_datum(const GradedNilpotentDatum& d);

using MTable = std::map<Torus, int>;
struct MAlphaResult {
    MTable table;
    bool symmetric = true;
};
/// Requires the Dynkin pyramid.
MAlphaResult m_alpha_table(const GradedNilpotentDatum& d);
/// |<alpha, delta>| < c * m(alpha) for every alpha in the table.
bool polytope_contains(const MTable& mtable, const std::vector<int>& delta, int c);
/// Brute-force goodness of c*lambda - delta from the Dynkin datum.
GoodnessResult is_good_cocharacter(const GradedNilpotentDatum& dynkin, const std::vector<int>& delta, int c);
/// Pyramid of the integral cocharacter lambda - delta.
Pyramid pyramid_from_delta(const std::vector<int>& partition, const std::vector<int>& delta);

/// First-row offset fixed at its Dynkin value; other offsets range over [-lambda_1, lambda_1].
/// For p = 2 only even gradings are kept.
std::vector<Pyramid> enumerate_integral_good_gradings(const std::vector<int>& partition, std::uint64_t p);

Subspace slice_complement(const GradedNilpotentDatum& d);

struct LagrangianResult {
    Subspace l, lprime;
    std::vector<ValidationItem> checks;
};
LagrangianResult lagrangian_l(const GradedNilpotentDatum& d);

/// Restricted roots: nonzero torus weights of matrix units.
std::vector<Torus> restricted_roots(const GradedNilpotentDatum& d);
bool lex_positive(const Torus& t);
int pair_torus(const Torus& a, const std::vector<int>& delta);

} // namespace walg
