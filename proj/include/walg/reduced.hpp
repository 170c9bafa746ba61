#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "walg/check.hpp"
#include "walg/walg.hpp"

namespace walg {

/// A p-character eta in chi + hat-m. When built from slice coordinates, eta = chi + (v, .).
struct EtaCharacter {
    Vec eta;             // standard coordinates
    Vec v_coefficients;  // coordinates in the v basis; empty when built from a functional

    /// Throws ConfigError when the coefficient count differs from dim v.
    static EtaCharacter from_slice(const GradedNilpotentDatum& d, const std::vector<long long>& coeffs);
    /// Throws EtaOutsideSlice unless eta agrees with chi on m.
    static EtaCharacter from_functional(const GradedNilpotentDatum& d, Vec eta);
};

/// Reports whether Q^eta vanishes: it does exactly when some z in m has (chi(z) - eta(z))^p != 0,
/// because z^p - z^{[p]} - eta(z)^p then acts on the generator by a nonzero scalar.
struct ZeroProbe {
    bool zero = false;
    std::string witness;
};
ZeroProbe gg_module_zero_probe(const GradedNilpotentDatum& d, const Vec& eta);

/// eta (standard coordinates) evaluated on the adapted basis.
Vec eta_adapted(const GradedNilpotentDatum& d, const Vec& eta);
/// Restricted exponent vectors of length n in base-p index order.
std::vector<Mono> restricted_monomials(int n, int p);
long long restricted_index(const Mono& m, int p);

/// Column-sparse square matrix.
struct SparseMatrix {
    int dim = 0;
    std::vector<SparseVec> cols;
    Vec apply(const Vec& v, const Field& f) const;
    FMatrix dense(const Field& f) const;
    static SparseMatrix from_dense(const FMatrix& m);
};

/// Finite-dimensional module: one action matrix per standard basis vector of g.
struct FDModule {
    std::string name;
    int dim = 0;
    std::vector<FMatrix> action;
};
FDModule direct_sum(const FDModule& a, const FDModule& b);
/// Bracket relations on basis pairs and x^p - x^{[p]} = eta(x)^p on basis vectors.
CheckRecord check_module(const RestrictedLieAlgebra& L, const FDModule& M, const Vec& eta);

/// U_eta(g) on restricted monomials in the adapted basis; products computed on demand.
class ReducedEnvelope {
public:
    ReducedEnvelope(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta);
    long long dim() const;
    Elem multiply(const Elem& a, const Elem& b);
    Elem basis_element(long long index) const;
    PbwEngine& engine() { return eng_; }

private:
    std::shared_ptr<const GradedNilpotentDatum> d_;
    PbwEngine eng_;
};

/// Reduced Gelfand-Graev module Q^eta with basis the restricted monomials over bar-p.
class ReducedGG {
public:
    ReducedGG(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta);

    const GradedNilpotentDatum& datum() const { return *d_; }
    const Field& field() const { return d_->field(); }
    const EtaCharacter& eta() const { return eta_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Mono>& basis() const { return basis_; }
    int kazhdan_of(int index) const { return mono_degree(basis_[index], d_->kazhdan); }
    /// Action of adapted variable k.
    const SparseMatrix& rho(int k) const { return rho_[k]; }
    FDModule as_module() const;
    Vec vacuum() const;
    Vec to_vec(const Elem& x) const;
    Elem to_elem(const Vec& v) const;
    /// pi_eta of a Q element (unrestricted exponents).
    Vec project(const Elem& q);
    /// rep(a) . b for a, b in Q^eta.
    Vec left_multiply(const Vec& a, const Vec& b);
    /// Basis vectors of the free right module over U_eta(g,e): monomials in bar-a only.
    std::vector<int> free_basis_indices() const;
    PbwEngine& engine() { return eng_; }

private:
    std::shared_ptr<const GradedNilpotentDatum> d_;
    EtaCharacter eta_;
    PbwEngine eng_;
    std::vector<Mono> basis_;
    std::vector<SparseMatrix> rho_;
};

/// U_eta(g,e) realized as (Q^eta)^{ad m}.
class ReducedW {
public:
    /// Throws DimensionMismatch unless dim = p^{dim g^e}.
    ReducedW(ReducedGG& gg, const WPresentation* pres = nullptr);

    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Vec>& basis() const { return basis_; }
    Vec multiply(const Vec& a, const Vec& b) { return gg_.left_multiply(a, b); }
    /// Coordinates in the basis; nullopt when x is not invariant.
    std::optional<Vec> coords(const Vec& x) const;
    const std::vector<Vec>& theta() const { return theta_; }
    /// theta^a for restricted a, in base-p index order.
    const std::vector<Vec>& theta_monomials();
    std::vector<CheckRecord> checks();
    nlohmann::json multiplication_table();
    ReducedGG& gg() { return gg_; }

private:
    ReducedGG& gg_;
    std::vector<Vec> basis_;
    std::vector<int> coord_cols_;
    std::vector<Vec> theta_;
    std::vector<Vec> theta_mono_;
};

/// Kernel of U_eta(g) -> End(M), built from growing sets of module basis vectors.
CheckRecord verify_faithful(const GradedNilpotentDatum& d, const Vec& eta, const FDModule& M);
/// Q^eta free over U_eta(g,e) of rank p^{d_chi}, and phi_eta bijective.
std::vector<CheckRecord> verify_matrix_iso(ReducedGG& gg, ReducedW& w);

/// Induced from the upper Borel with weight lambda on the diagonal. Throws IncompatibleWeight.
FDModule baby_verma(const GradedNilpotentDatum& d, const Vec& eta, const std::vector<long long>& lambda);

/// Left regular U_eta(g)-module on restricted monomials in the adapted basis.
FDModule regular_module(std::shared_ptr<const GradedNilpotentDatum> d, const EtaCharacter& eta);

struct SkryabinResult {
    int dim_v = 0, dim_w = 0, dim_tensor = 0;
    std::vector<CheckRecord> checks;
    std::optional<int> hom_dim;  // dim Hom_g(V', V), computed when dim V <= hom_limit
};
/// Whittaker vectors W = V^{m_chi}, V' = Q^eta (x) W over U_eta(g,e), and the canonical map V' -> V.
/// Throws NotAModule. A failing round trip is reported through the checks.
SkryabinResult skryabin_roundtrip(ReducedW& w, const FDModule& V, int hom_limit = 16);

/// Value of Phi_i on Q^eta: sum over top terms of Theta_i of lambda_a prod eta(x_k)^{p a_k}.
Vec central_character(const GradedNilpotentDatum& d, const WPresentation& w, const Vec& eta);
/// eta composed with Ad((1 + tE)^{-1}) for E a matrix unit of m.
Vec conjugate_eta(const GradedNilpotentDatum& d, const Vec& eta, int unit, Res t);
std::vector<CheckRecord> central_reduction_chain(std::shared_ptr<const GradedNilpotentDatum> d,
                                                 const WPresentation& w, const std::vector<EtaCharacter>& etas);

} // namespace walg
