#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ncpi/coeff_algebra.hpp"
#include "ncpi/matrix.hpp"

namespace ncpi {

/// A canonical word: basis indices (k_0,...,k_n) standing for
/// e_{k0} X e_{k1} ... X e_{kn}. Length is degree + 1.
struct Word {
    std::vector<std::uint16_t> idx;

    int degree() const { return static_cast<int>(idx.size()) - 1; }
    bool operator==(const Word& o) const { return idx == o.idx; }
    // Order: degree first, then lexicographic indices.
    bool operator<(const Word& o) const {
        if (idx.size() != o.idx.size()) return idx.size() < o.idx.size();
        return idx < o.idx;
    }
};

using CanonicalPoly = std::map<Word, Cplx>;

/// One monomial b_0 X b_1 ... X b_n; degree n, coefficients in B.
/// Labels are display hints carried through the algebra ("b0", "1", ...);
/// an empty label means the coefficient has no printable name.
class Monomial {
public:
    Monomial() = default;
    Monomial(std::vector<CMat> coeffs, std::vector<std::string> labels);
    explicit Monomial(std::vector<CMat> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<CMat>& coeffs() const { return coeffs_; }
    const CMat& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Word concatenation: merges the boundary coefficients b_n c_0.
    static Monomial concat(const Monomial& a, const Monomial& b);
    Monomial adjoint() const;
    Monomial slice(int first, int last) const;  // coefficients [first, last]

    CMat evaluate(const CMat& X) const;
    double coeff_norm_product() const;

private:
    std::vector<CMat> coeffs_;
    std::vector<std::string> labels_;
};

enum class Rep { Stored, Canonical, Best };

/// A B-valued non-commutative polynomial: weighted sum of monomials.
/// Immutable; the canonical form is computed once on demand (racing writers
/// would store the same value).
class NCPoly {
public:
    struct Term {
        Cplx weight;
        Monomial mono;
    };

    static NCPoly zero(AlgebraPtr alg);
    static NCPoly unit(AlgebraPtr alg);
    static NCPoly indeterminate(AlgebraPtr alg);
    /// Degree-0 polynomial from a coefficient; validates span membership.
    static NCPoly coefficient(AlgebraPtr alg, CMat b, std::string label = "");
    /// Assembles from raw terms, validating every coefficient against B.
    static NCPoly from_terms(AlgebraPtr alg, std::vector<Term> terms);
    static NCPoly scalar(AlgebraPtr alg, Cplx c);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_stored_zero() const { return terms_.empty(); }
    int max_degree() const;

    NCPoly add(const NCPoly& q) const;
    NCPoly sub(const NCPoly& q) const;
    NCPoly scale(Cplx c) const;
    NCPoly mul(const NCPoly& q) const;
    NCPoly adjoint() const;
    NCPoly pow(unsigned k) const;

    /// Substitutes m.X for the indeterminate and multiplies out.
    CMat evaluate(const MatrixModel& m) const;

    /// Multilinear expansion over the orthonormal basis of B; entries with
    /// |weight| <= drop threshold are removed. Throws cap_error past the
    /// canonical term cap.
    const CanonicalPoly& canonical() const;

    /// Upper bound for the expansion size of canonical(), without computing it.
    std::size_t canonical_size_estimate() const;

    bool canonical_is_zero() const { return canonical().empty(); }
    bool canonical_degree0_only() const;

    /// Upper bound on |||p|||_R: sum over terms of |w| prod_i ||b_i|| R^deg,
    /// taken on the chosen representation (Best = min of the two; canonical
    /// only when its size estimate fits the cap).
    double norm_R_upper(double R, Rep rep = Rep::Best) const;

    /// Rebuilds the polynomial from its canonical form (basis-word terms).
    NCPoly canonical_rep() const;

private:
    NCPoly(AlgebraPtr alg, std::vector<Term> terms);
    void check_same_algebra(const NCPoly& q) const;
    void enforce_caps() const;

    AlgebraPtr alg_;
    std::vector<Term> terms_;
    mutable std::shared_ptr<const CanonicalPoly> canon_;
};

/// Entrywise comparison of canonical forms; missing entries count as zero.
bool canonical_equal(const NCPoly& p, const NCPoly& q, double tol);

}  // namespace ncpi
