#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncpi/ncpoly.hpp"

namespace ncpi {

using WordPair = std::pair<Word, Word>;
using CanonicalTensor = std::map<WordPair, Cplx>;

/// An element of B<X> (x) B<X>: weighted sum of monomial pairs l (x) r.
/// Immutable, same canonical-form discipline as NCPoly.
class TensorElem {
public:
    struct Term {
        Cplx weight;
        Monomial left;
        Monomial right;
    };

    static TensorElem zero(AlgebraPtr alg);
    static TensorElem simple(AlgebraPtr alg, Cplx w, Monomial left, Monomial right);
    static TensorElem from_terms(AlgebraPtr alg, std::vector<Term> terms);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_stored_zero() const { return terms_.empty(); }

    TensorElem add(const TensorElem& v) const;
    TensorElem sub(const TensorElem& v) const;
    TensorElem scale(Cplx c) const;

    const CanonicalTensor& canonical() const;
    std::size_t canonical_size_estimate() const;
    bool canonical_is_zero() const { return canonical().empty(); }

    /// Kronecker evaluation sum_i w_i eval(l_i) (x) eval(r_i) as an N^2 x N^2 matrix.
    CMat kron_evaluate(const MatrixModel& m) const;

private:
    TensorElem(AlgebraPtr alg, std::vector<Term> terms);
    void check_same_algebra(const TensorElem& v) const;
    void enforce_caps() const;

    AlgebraPtr alg_;
    std::vector<Term> terms_;
    mutable std::shared_ptr<const CanonicalTensor> canon_;

    friend TensorElem sharp(const TensorElem&, const TensorElem&);
    friend TensorElem bimodule_act(const NCPoly&, const TensorElem&, const NCPoly&);
};

/// The proof's bilinear map: (a1 (x) a2) # (a3 (x) a4) = (a1 a3) (x) (a4 a2).
/// Note the right factors compose in reversed order.
TensorElem sharp(const TensorElem& u, const TensorElem& v);

/// Bimodule action p.(l (x) r).q = (p l) (x) (r q), extended bilinearly.
TensorElem bimodule_act(const NCPoly& p, const TensorElem& u, const NCPoly& q);

/// Multiplication map mu(l (x) r) = l r.
NCPoly mu(const TensorElem& u);

/// (mu o (id (x) E)) after evaluation: sum_i w_i eval(l_i) E[eval(r_i)].
CMat mu_idE_eval(const TensorElem& u, const MatrixModel& m);

struct PiUpperResult {
    double value;
    std::string representation;  // "stored" or "canonical"
};

/// Certified upper bound on the projective tensor norm of the evaluated
/// element: sum_i |w_i| ||eval(l_i)|| ||eval(r_i)||, minimized over the stored
/// and (when its size fits the cap) canonical representations.
PiUpperResult pi_upper(const TensorElem& u, const MatrixModel& m, Rep rep = Rep::Best);

/// Operator norm of the Kronecker evaluation; a lower bound for the
/// projective norm, used only as a consistency check.
double spatial_norm(const TensorElem& u, const MatrixModel& m);

/// X (x) 1 - 1 (x) X as a formal tensor.
TensorElem x_commutator_tensor(const AlgebraPtr& alg);

bool canonical_equal(const TensorElem& u, const TensorElem& v, double tol);

}  // namespace ncpi
