#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walg/field.hpp"

namespace walg {

/// Faithful matrix model: basis element i acts as basis[i]; coords maps vec(X) (row-major n*n) to coordinates.
struct MatrixRealization {
    int n = 0;
    std::vector<FMatrix> basis;
    FMatrix coords;  // dim x (n*n)
};

/// Finite-dimensional restricted Lie algebra over F_p with an invariant symmetric form.
/// Immutable after construction.
class RestrictedLieAlgebra {
public:
    RestrictedLieAlgebra(const Field& f, std::vector<std::string> labels, Vec bracket_tensor,
                         std::vector<Vec> ppower, FMatrix gram,
                         std::optional<MatrixRealization> realization = std::nullopt,
                         std::vector<long long> bracket_lifts = {});

    const Field& field() const noexcept { return f_; }
    int dim() const noexcept { return dim_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }

    /// c_{ij}^k
    Res structure_constant(int i, int j, int k) const { return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k]; }
    /// Integer lift of c_{ij}^k when one was supplied (build_gl and JSON input).
    std::optional<long long> structure_lift(int i, int j, int k) const;
    /// [b_i, b_j] as a sparse coordinate vector.
    const SparseVec& bracket_basis(int i, int j) const { return sparse_[static_cast<std::size_t>(i) * dim_ + j]; }
    Vec bracket(const Vec& x, const Vec& y) const;
    /// Column j holds [x, b_j].
    FMatrix ad(const Vec& x) const;

    const Vec& ppower_basis(int i) const { return pp_[i]; }
    /// x^{[p]} for arbitrary x; needs a matrix realization unless x is a multiple of a basis vector.
    Vec pmap(const Vec& x) const;

    const FMatrix& gram() const noexcept { return gram_; }
    Res form(const Vec& x, const Vec& y) const;

    bool has_realization() const noexcept { return real_.has_value(); }
    const MatrixRealization& realization() const;
    FMatrix to_matrix(const Vec& x) const;
    Vec from_matrix(const FMatrix& m) const;

    Vec unit(int i) const;
    Vec zero() const { return Vec(dim_, 0); }

    /// Same algebra in the basis given by the rows of b (old coordinates). Requires b invertible.
    RestrictedLieAlgebra change_basis(const std::vector<Vec>& b, std::vector<std::string> labels) const;

    nlohmann::json to_json() const;

private:
    Field f_;
    int dim_;
    std::vector<std::string> labels_;
    Vec c_;
    std::vector<SparseVec> sparse_;
    std::vector<Vec> pp_;
    FMatrix gram_;
    std::optional<MatrixRealization> real_;
    std::vector<long long> lifts_;
};

/// gl_n over F_p with basis E_ij at index (i-1)*n + (j-1).
RestrictedLieAlgebra build_gl(int n, std::uint64_t p);
inline int gl_index(int n, int i, int j) { return i * n + j; }  // zero-based i, j

/// Structure-constant JSON input. Checks are not run here; see validate.
RestrictedLieAlgebra algebra_from_json(const nlohmann::json& j);

struct ValidationItem {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    /// Group-level hypotheses are only checked through Lie-algebra surrogates.
    bool surrogate_checks_only = true;
    bool all_pass() const;
    const ValidationItem* find(const std::string& name) const;
};

ValidationReport validate(const RestrictedLieAlgebra& L);
/// Loads JSON and rejects algebras failing any check (ConfigError).
RestrictedLieAlgebra load_validated_algebra(const nlohmann::json& j);

using LinearFunctional = Vec;

bool is_nilpotent(const RestrictedLieAlgebra& L, const Vec& x);
/// chi(x) = (e, x). Throws NotNilpotent.
LinearFunctional chi_from_e(const RestrictedLieAlgebra& L, const Vec& e);
/// Basis of ker(ad x), in the trailing-pivot echelon form of FMatrix::kernel.
std::vector<Vec> centralizer(const RestrictedLieAlgebra& L, const Vec& x);

std::string format_vector(const RestrictedLieAlgebra& L, const Vec& x);

} // namespace walg
