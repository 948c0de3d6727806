#include "ncpi/ncpoly.hpp"

#include <algorithm>
#include <cmath>

#include "ncpi/errors.hpp"

namespace ncpi {

namespace {

std::string merge_labels(const std::string& a, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    if (a.empty() || b.empty()) return {};
    return "(" + a + "*" + b + ")";
}

std::string adjoint_label(const std::string& a) {
    if (a.empty() || a == "1") return a;
    return a + "'";
}

// Sparse basis decomposition of one coefficient. Exactly-zero coordinates are
// skipped; everything else is kept so canonical forms stay exact.
std::vector<std::pair<std::uint16_t, Cplx>> components(const CoeffAlgebra& alg, const CMat& b) {
    const CVec c = alg.coords(b);
    std::vector<std::pair<std::uint16_t, Cplx>> out;
    out.reserve(static_cast<std::size_t>(c.size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (c(k) != Cplx(0.0, 0.0)) out.emplace_back(static_cast<std::uint16_t>(k), c(k));
    }
    return out;
}

}  // namespace

Monomial::Monomial(std::vector<CMat> coeffs, std::vector<std::string> labels)
    : coeffs_(std::move(coeffs)), labels_(std::move(labels)) {
    if (coeffs_.empty()) throw std::invalid_argument("Monomial: needs at least one coefficient");
    if (labels_.size() != coeffs_.size()) throw std::invalid_argument("Monomial: label/coefficient mismatch");
}

Monomial::Monomial(std::vector<CMat> coeffs)
    : Monomial(std::move(coeffs), {}) {}

Monomial Monomial::concat(const Monomial& a, const Monomial& b) {
    std::vector<CMat> coeffs;
    std::vector<std::string> labels;
    coeffs.reserve(a.coeffs_.size() + b.coeffs_.size() - 1);
    labels.reserve(coeffs.capacity());
    for (std::size_t i = 0; i + 1 < a.coeffs_.size(); ++i) {
        coeffs.push_back(a.coeffs_[i]);
        labels.push_back(a.labels_[i]);
    }
    coeffs.push_back(a.coeffs_.back() * b.coeffs_.front());
    labels.push_back(merge_labels(a.labels_.back(), b.labels_.front()));
    for (std::size_t i = 1; i < b.coeffs_.size(); ++i) {
        coeffs.push_back(b.coeffs_[i]);
        labels.push_back(b.labels_[i]);
    }
    return Monomial(std::move(coeffs), std::move(labels));
}

Monomial Monomial::adjoint() const {
    std::vector<CMat> coeffs;
    std::vector<std::string> labels;
    coeffs.reserve(coeffs_.size());
    labels.reserve(coeffs_.size());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) coeffs.push_back(it->adjoint());
    for (auto it = labels_.rbegin(); it != labels_.rend(); ++it) labels.push_back(adjoint_label(*it));
    return Monomial(std::move(coeffs), std::move(labels));
}

Monomial Monomial::slice(int first, int last) const {
    std::vector<CMat> coeffs(coeffs_.begin() + first, coeffs_.begin() + last + 1);
    std::vector<std::string> labels(labels_.begin() + first, labels_.begin() + last + 1);
    return Monomial(std::move(coeffs), std::move(labels));
}

CMat Monomial::evaluate(const CMat& X) const {
    CMat out = coeffs_.front();
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out = out * X * coeffs_[i];
    return out;
}

double Monomial::coeff_norm_product() const {
    double prod = 1.0;
    for (const CMat& b : coeffs_) prod *= operator_norm(b);
    return prod;
}

// Monomials created through Monomial's own constructors carry no labels;
// NCPoly factories fill them in.
static std::vector<std::string> unit_labels(std::size_t n) {
    return std::vector<std::string>(n, "1");
}

NCPoly::NCPoly(AlgebraPtr alg, std::vector<Term> terms) : alg_(std::move(alg)), terms_(std::move(terms)) {
    if (!alg_) throw std::invalid_argument("NCPoly: null algebra");
}

NCPoly NCPoly::zero(AlgebraPtr alg) { return NCPoly(std::move(alg), {}); }

NCPoly NCPoly::unit(AlgebraPtr alg) {
    CMat id = alg->identity();
    return NCPoly(std::move(alg), {Term{Cplx(1, 0), Monomial({std::move(id)}, {"1"})}});
}

NCPoly NCPoly::indeterminate(AlgebraPtr alg) {
    CMat id = alg->identity();
    return NCPoly(std::move(alg), {Term{Cplx(1, 0), Monomial({id, id}, unit_labels(2))}});
}

NCPoly NCPoly::coefficient(AlgebraPtr alg, CMat b, std::string label) {
    if (b.rows() != alg->ambient_dim() || b.cols() != alg->ambient_dim())
        throw std::invalid_argument("NCPoly::coefficient: wrong dimension");
    if (!alg->in_span(b))
        throw std::invalid_argument("NCPoly::coefficient: coefficient is not in span(B)");
    return NCPoly(std::move(alg), {Term{Cplx(1, 0), Monomial({std::move(b)}, {std::move(label)})}});
}

NCPoly NCPoly::scalar(AlgebraPtr alg, Cplx c) {
    CMat id = alg->identity();
    return NCPoly(std::move(alg), {Term{c, Monomial({std::move(id)}, {"1"})}});
}

NCPoly NCPoly::from_terms(AlgebraPtr alg, std::vector<Term> terms) {
    for (const Term& t : terms) {
        for (const CMat& b : t.mono.coeffs()) {
            if (b.rows() != alg->ambient_dim() || b.cols() != alg->ambient_dim())
                throw std::invalid_argument("NCPoly::from_terms: coefficient has wrong dimension");
            if (!alg->in_span(b))
                throw std::invalid_argument("NCPoly::from_terms: coefficient is not in span(B)");
        }
    }
    NCPoly p(std::move(alg), std::move(terms));
    p.enforce_caps();
    return p;
}

int NCPoly::max_degree() const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

void NCPoly::check_same_algebra(const NCPoly& q) const {
    if (alg_ != q.alg_) throw std::invalid_argument("NCPoly: operands use different coefficient algebras");
}

void NCPoly::enforce_caps() const {
    const Limits& lim = alg_->limits();
    if (max_degree() > lim.degree_cap)
        throw cap_error("NCPoly: degree " + std::to_string(max_degree()) + " exceeds the degree cap " +
                        std::to_string(lim.degree_cap));
    if (terms_.size() > lim.stored_term_cap) throw cap_error("NCPoly: stored term cap exceeded");
}

NCPoly NCPoly::add(const NCPoly& q) const {
    check_same_algebra(q);
    std::vector<Term> t = terms_;
    t.insert(t.end(), q.terms_.begin(), q.terms_.end());
    NCPoly out(alg_, std::move(t));
    out.enforce_caps();
    return out;
}

NCPoly NCPoly::sub(const NCPoly& q) const { return add(q.scale(Cplx(-1, 0))); }

NCPoly NCPoly::scale(Cplx c) const {
    if (c == Cplx(0, 0)) return zero(alg_);
    std::vector<Term> t = terms_;
    for (Term& term : t) term.weight *= c;
    return NCPoly(alg_, std::move(t));
}

NCPoly NCPoly::mul(const NCPoly& q) const {
    check_same_algebra(q);
    std::vector<Term> t;
    t.reserve(terms_.size() * q.terms_.size());
    for (const Term& a : terms_)
        for (const Term& b : q.terms_)
            t.push_back(Term{a.weight * b.weight, Monomial::concat(a.mono, b.mono)});
    NCPoly out(alg_, std::move(t));
    out.enforce_caps();
    return out;
}

NCPoly NCPoly::adjoint() const {
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const Term& a : terms_) t.push_back(Term{std::conj(a.weight), a.mono.adjoint()});
    return NCPoly(alg_, std::move(t));
}

NCPoly NCPoly::pow(unsigned k) const {
    NCPoly out = unit(alg_);
    for (unsigned i = 0; i < k; ++i) out = out.mul(*this);
    return out;
}

CMat NCPoly::evaluate(const MatrixModel& m) const {
    if (m.algebra != alg_) throw std::invalid_argument("NCPoly::evaluate: model uses a different algebra");
    CMat out = CMat::Zero(alg_->ambient_dim(), alg_->ambient_dim());
    for (const Term& t : terms_) out += t.weight * t.mono.evaluate(m.X);
    return out;
}

std::size_t NCPoly::canonical_size_estimate() const {
    double est = 0.0;
    for (const Term& t : terms_) {
        double prod = 1.0;
        for (const CMat& b : t.mono.coeffs()) prod *= static_cast<double>(components(*alg_, b).size());
        est += prod;
        if (est > 1e18) return static_cast<std::size_t>(1e18);
    }
    return static_cast<std::size_t>(est);
}

const CanonicalPoly& NCPoly::canonical() const {
    if (canon_) return *canon_;
    const Limits& lim = alg_->limits();
    if (canonical_size_estimate() > lim.canonical_term_cap)
        throw cap_error("NCPoly: canonical expansion exceeds the term cap");

    auto out = std::make_shared<CanonicalPoly>();
    for (const Term& t : terms_) {
        const auto& coeffs = t.mono.coeffs();
        std::vector<std::vector<std::pair<std::uint16_t, Cplx>>> comps;
        comps.reserve(coeffs.size());
        bool dead = false;
        for (const CMat& b : coeffs) {
            comps.push_back(components(*alg_, b));
            if (comps.back().empty()) {
                dead = true;
                break;
            }
        }
        if (dead) continue;

        Word w;
        w.idx.resize(coeffs.size());
        // Depth-first cartesian product over the component lists.
        auto expand = [&](auto&& self, std::size_t pos, Cplx weight) -> void {
            if (pos == comps.size()) {
                (*out)[w] += weight;
                return;
            }
            for (const auto& [k, c] : comps[pos]) {
                w.idx[pos] = k;
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

bool NCPoly::canonical_degree0_only() const {
    for (const auto& [w, c] : canonical()) {
        if (w.degree() > 0) return false;
    }
    return true;
}

double NCPoly::norm_R_upper(double R, Rep rep) const {
    if (R <= 0.0) throw std::invalid_argument("norm_R_upper: R must be positive");
    auto stored_value = [&]() {
        double s = 0.0;
        for (const Term& t : terms_)
            s += std::abs(t.weight) * t.mono.coeff_norm_product() * std::pow(R, t.mono.degree());
        return s;
    };
    auto canonical_value = [&]() {
        const auto& norms = alg_->basis_op_norms();
        double s = 0.0;
        for (const auto& [w, c] : canonical()) {
            double prod = 1.0;
            for (std::uint16_t k : w.idx) prod *= norms[k];
            s += std::abs(c) * prod * std::pow(R, w.degree());
        }
        return s;
    };
    switch (rep) {
        case Rep::Stored: return stored_value();
        case Rep::Canonical: return canonical_value();
        case Rep::Best: {
            const double sv = stored_value();
            if (canonical_size_estimate() > alg_->limits().best_rep_budget) return sv;
            return std::min(sv, canonical_value());
        }
    }
    return stored_value();
}

NCPoly NCPoly::canonical_rep() const {
    std::vector<Term> t;
    for (const auto& [w, c] : canonical()) {
        std::vector<CMat> coeffs;
        std::vector<std::string> labels;
        coeffs.reserve(w.idx.size());
        labels.reserve(w.idx.size());
        for (std::uint16_t k : w.idx) {
            coeffs.push_back(alg_->basis_elem(k));
            labels.push_back("e" + std::to_string(k));
        }
        t.push_back(Term{c, Monomial(std::move(coeffs), std::move(labels))});
    }
    NCPoly out(alg_, std::move(t));
    out.enforce_caps();
    return out;
}

bool canonical_equal(const NCPoly& p, const NCPoly& q, double tol) {
    if (p.algebra() != q.algebra()) return false;
    const CanonicalPoly& a = p.canonical();
    const CanonicalPoly& b = q.canonical();
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
