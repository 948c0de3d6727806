#include "ncpi/tensor2.hpp"

#include <algorithm>
#include <cmath>

#include "ncpi/errors.hpp"

namespace ncpi {

namespace {

std::vector<std::pair<std::uint16_t, Cplx>> components(const CoeffAlgebra& alg, const CMat& b) {
    const CVec c = alg.coords(b);
    std::vector<std::pair<std::uint16_t, Cplx>> out;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (c(k) != Cplx(0.0, 0.0)) out.emplace_back(static_cast<std::uint16_t>(k), c(k));
    }
    return out;
}

}  // namespace

TensorElem::TensorElem(AlgebraPtr alg, std::vector<Term> terms)
    : alg_(std::move(alg)), terms_(std::move(terms)) {
    if (!alg_) throw std::invalid_argument("TensorElem: null algebra");
}

TensorElem TensorElem::zero(AlgebraPtr alg) { return TensorElem(std::move(alg), {}); }

TensorElem TensorElem::simple(AlgebraPtr alg, Cplx w, Monomial left, Monomial right) {
    return TensorElem(std::move(alg), {Term{w, std::move(left), std::move(right)}});
}

TensorElem TensorElem::from_terms(AlgebraPtr alg, std::vector<Term> terms) {
    TensorElem u(std::move(alg), std::move(terms));
    u.enforce_caps();
    return u;
}

void TensorElem::check_same_algebra(const TensorElem& v) const {
    if (alg_ != v.alg_) throw std::invalid_argument("TensorElem: operands use different coefficient algebras");
}

void TensorElem::enforce_caps() const {
    const Limits& lim = alg_->limits();
    for (const Term& t : terms_) {
        if (t.left.degree() > lim.degree_cap || t.right.degree() > lim.degree_cap)
            throw cap_error("TensorElem: degree cap exceeded");
    }
    if (terms_.size() > lim.stored_term_cap) throw cap_error("TensorElem: stored term cap exceeded");
}

TensorElem TensorElem::add(const TensorElem& v) const {
    check_same_algebra(v);
    std::vector<Term> t = terms_;
    t.insert(t.end(), v.terms_.begin(), v.terms_.end());
    TensorElem out(alg_, std::move(t));
    out.enforce_caps();
    return out;
}

TensorElem TensorElem::sub(const TensorElem& v) const { return add(v.scale(Cplx(-1, 0))); }

TensorElem TensorElem::scale(Cplx c) const {
    if (c == Cplx(0, 0)) return zero(alg_);
    std::vector<Term> t = terms_;
    for (Term& term : t) term.weight *= c;
    return TensorElem(alg_, std::move(t));
}

std::size_t TensorElem::canonical_size_estimate() const {
    double est = 0.0;
    for (const Term& t : terms_) {
        double prod = 1.0;
        for (const CMat& b : t.left.coeffs()) prod *= static_cast<double>(components(*alg_, b).size());
        for (const CMat& b : t.right.coeffs()) prod *= static_cast<double>(components(*alg_, b).size());
        est += prod;
        if (est > 1e18) return static_cast<std::size_t>(1e18);
    }
    return static_cast<std::size_t>(est);
}

const CanonicalTensor& TensorElem::canonical() const {
    if (canon_) return *canon_;
    const Limits& lim = alg_->limits();
    if (canonical_size_estimate() > lim.canonical_term_cap)
        throw cap_error("TensorElem: canonical expansion exceeds the term cap");

    auto out = std::make_shared<CanonicalTensor>();
    for (const Term& t : terms_) {
        std::vector<std::vector<std::pair<std::uint16_t, Cplx>>> comps;
        const std::size_t nl = t.left.coeffs().size();
        bool dead = false;
        for (const CMat& b : t.left.coeffs()) {
            comps.push_back(components(*alg_, b));
            if (comps.back().empty()) dead = true;
        }
        for (const CMat& b : t.right.coeffs()) {
            comps.push_back(components(*alg_, b));
            if (comps.back().empty()) dead = true;
        }
        if (dead) continue;

        WordPair wp;
        wp.first.idx.resize(nl);
        wp.second.idx.resize(comps.size() - nl);
        auto expand = [&](auto&& self, std::size_t pos, Cplx weight) -> void {
            if (pos == comps.size()) {
                (*out)[wp] += weight;
                return;
            }
            for (const auto& [k, c] : comps[pos]) {
                if (pos < nl)
                    wp.first.idx[pos] = k;
                else
                    wp.second.idx[pos - nl] = k;
                self(self, pos + 1, weight * c);
            }
        };
        expand(expand, 0, t.weight);
    }

    for (auto it = out->begin(); it != out->end();) {
        if (std::abs(it->second) <= lim.drop_threshold)
            it = out->erase(it);
        else
            ++it;
    }
    canon_ = out;
    return *canon_;
}

CMat TensorElem::kron_evaluate(const MatrixModel& m) const {
    if (m.algebra != alg_) throw std::invalid_argument("TensorElem: model uses a different algebra");
    const int n = alg_->ambient_dim();
    CMat out = CMat::Zero(n * n, n * n);
    for (const Term& t : terms_) out += t.weight * kron(t.left.evaluate(m.X), t.right.evaluate(m.X));
    return out;
}

TensorElem sharp(const TensorElem& u, const TensorElem& v) {
    u.check_same_algebra(v);
    std::vector<TensorElem::Term> t;
    t.reserve(u.terms_.size() * v.terms_.size());
    for (const auto& a : u.terms_) {
        for (const auto& b : v.terms_) {
            // (a1 (x) a2) # (a3 (x) a4) = (a1 a3) (x) (a4 a2)
            t.push_back(TensorElem::Term{a.weight * b.weight, Monomial::concat(a.left, b.left),
                                         Monomial::concat(b.right, a.right)});
        }
    }
    TensorElem out(u.alg_, std::move(t));
    out.enforce_caps();
    return out;
}

TensorElem bimodule_act(const NCPoly& p, const TensorElem& u, const NCPoly& q) {
    if (p.algebra() != u.algebra() || q.algebra() != u.algebra())
        throw std::invalid_argument("bimodule_act: operands use different coefficient algebras");
    std::vector<TensorElem::Term> t;
    t.reserve(p.term_count() * u.term_count() * q.term_count());
    for (const auto& a : p.terms()) {
        for (const auto& mid : u.terms()) {
            for (const auto& b : q.terms()) {
                t.push_back(TensorElem::Term{a.weight * mid.weight * b.weight,
                                             Monomial::concat(a.mono, mid.left),
                                             Monomial::concat(mid.right, b.mono)});
            }
        }
    }
    TensorElem out(u.algebra(), std::move(t));
    out.enforce_caps();
    return out;
}

NCPoly mu(const TensorElem& u) {
    std::vector<NCPoly::Term> t;
    t.reserve(u.term_count());
    for (const auto& a : u.terms()) t.push_back(NCPoly::Term{a.weight, Monomial::concat(a.left, a.right)});
    return NCPoly::from_terms(u.algebra(), std::move(t));
}

CMat mu_idE_eval(const TensorElem& u, const MatrixModel& m) {
    if (m.algebra != u.algebra()) throw std::invalid_argument("mu_idE_eval: model uses a different algebra");
    const CoeffAlgebra& B = *m.algebra;
    const int n = B.ambient_dim();
    CMat out = CMat::Zero(n, n);
    for (const auto& t : u.terms())
        out += t.weight * (t.left.evaluate(m.X) * B.expectation(t.right.evaluate(m.X)));
    return out;
}

PiUpperResult pi_upper(const TensorElem& u, const MatrixModel& m, Rep rep) {
    if (m.algebra != u.algebra()) throw std::invalid_argument("pi_upper: model uses a different algebra");

    auto stored_value = [&]() {
        double s = 0.0;
        for (const auto& t : u.terms())
            s += std::abs(t.weight) * operator_norm(t.left.evaluate(m.X)) *
                 operator_norm(t.right.evaluate(m.X));
        return s;
    };
    auto canonical_value = [&]() {
        // Norms of evaluated basis words are shared across pairs.
        std::map<Word, double> cache;
        auto word_norm = [&](const Word& w) {
            auto it = cache.find(w);
            if (it != cache.end()) return it->second;
            CMat v = m.algebra->basis_elem(w.idx[0]);
            for (std::size_t i = 1; i < w.idx.size(); ++i) v = v * m.X * m.algebra->basis_elem(w.idx[i]);
            const double nrm = operator_norm(v);
            cache.emplace(w, nrm);
            return nrm;
        };
        double s = 0.0;
        for (const auto& [wp, c] : u.canonical()) s += std::abs(c) * word_norm(wp.first) * word_norm(wp.second);
        return s;
    };

    switch (rep) {
        case Rep::Stored: return {stored_value(), "stored"};
        case Rep::Canonical: return {canonical_value(), "canonical"};
        case Rep::Best: {
            const double sv = stored_value();
            if (u.canonical_size_estimate() > u.algebra()->limits().best_rep_budget)
                return {sv, "stored"};
            const double cv = canonical_value();
            return cv < sv ? PiUpperResult{cv, "canonical"} : PiUpperResult{sv, "stored"};
        }
    }
    return {stored_value(), "stored"};
}

double spatial_norm(const TensorElem& u, const MatrixModel& m) {
    const int n = u.algebra()->ambient_dim();
    if (n > u.algebra()->limits().spatial_dim_cap)
        throw cap_error("spatial_norm: ambient dimension exceeds the Kronecker evaluation cap");
    return operator_norm(u.kron_evaluate(m));
}

TensorElem x_commutator_tensor(const AlgebraPtr& alg) {
    const CMat id = alg->identity();
    Monomial one({id}, {"1"});
    Monomial x({id, id}, {"1", "1"});
    return TensorElem::from_terms(
        alg, {TensorElem::Term{Cplx(1, 0), x, one}, TensorElem::Term{Cplx(-1, 0), one, x}});
}

bool canonical_equal(const TensorElem& u, const TensorElem& v, double tol) {
    if (u.algebra() != v.algebra()) return false;
    const CanonicalTensor& a = u.canonical();
    const CanonicalTensor& b = v.canonical();
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            if (std::abs(ia->second) > tol) return false;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            if (std::abs(ib->second) > tol) return false;
            ++ib;
        } else {
            if (std::abs(ia->second - ib->second) > tol) return false;
            ++ia;
            ++ib;
        }
    }
    return true;
}

}  // namespace ncpi
