#include <doctest.h>

#include "ncpi/derivation.hpp"
#include "test_helpers.hpp"

using namespace ncpi;
using namespace ncpi::test;

TEST_CASE("fdq(X) = 1 (x) 1") {
    auto alg = diagonal(2);
    const TensorElem d = fdq(NCPoly::indeterminate(alg));
    REQUIRE(d.term_count() == 1);
    const Monomial one = NCPoly::unit(alg).terms()[0].mono;
    CHECK(canonical_equal(d, TensorElem::simple(alg, Cplx(1), one, one), 1e-14));
}

TEST_CASE("fdq kills coefficients") {
    auto alg = blocks({2, 1}, 3);
    Rng rng(1);
    const CMat b = random_coefficient(rng, *alg, 1.0);
    CHECK(fdq(NCPoly::coefficient(alg, b)).is_stored_zero());
    CHECK(fdq(NCPoly::unit(alg)).is_stored_zero());
}

TEST_CASE("fdq of b0 X b1 X b2 is the two-split sum") {
    auto alg = diagonal(3);
    Rng rng(2);
    const CMat b0 = random_coefficient(rng, *alg, 1.0);
    const CMat b1 = random_coefficient(rng, *alg, 1.0);
    const CMat b2 = random_coefficient(rng, *alg, 1.0);
    const NCPoly p = NCPoly::from_terms(alg, {{Cplx(1), Monomial({b0, b1, b2}, {"", "", ""})}});

    const TensorElem got = fdq(p);
    REQUIRE(got.term_count() == 2);

    // b0 (x) b1 X b2 + b0 X b1 (x) b2, built by hand.
    const TensorElem want = TensorElem::from_terms(
        alg, {{Cplx(1), Monomial({b0}, {""}), Monomial({b1, b2}, {"", ""})},
              {Cplx(1), Monomial({b0, b1}, {"", ""}), Monomial({b2}, {""})}});
    CHECK(canonical_equal(got, want, 1e-13));
}

TEST_CASE("fdq(X^2) = 1 (x) X + X (x) 1") {
    auto alg = diagonal(2);
    const NCPoly x = NCPoly::indeterminate(alg);
    const Monomial one = NCPoly::unit(alg).terms()[0].mono;
    const Monomial xm = x.terms()[0].mono;
    const TensorElem want = TensorElem::simple(alg, Cplx(1), one, xm)
                                .add(TensorElem::simple(alg, Cplx(1), xm, one));
    CHECK(canonical_equal(fdq(x.pow(2)), want, 1e-13));
}

TEST_CASE("fdq satisfies the Leibniz rule") {
    Rng rng(3);
    for (int it = 0; it < 40; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 4));
        AlgebraPtr alg;
        switch (it % 3) {
            case 0: alg = scalars(n); break;
            case 1: alg = diagonal(n); break;
            default: alg = blocks(random_partition(rng, n), n); break;
        }
        const int deg = alg->dim() > 3 ? 1 : 2;
        const NCPoly p = random_poly(rng, alg, deg, 2, 1.0);
        const NCPoly q = random_poly(rng, alg, deg, 2, 1.0);
        const NCPoly one = NCPoly::unit(alg);
        const TensorElem lhs = fdq(p.mul(q));
        const TensorElem rhs = bimodule_act(one, fdq(p), q).add(bimodule_act(p, fdq(q), one));
        CHECK(canonical_equal(lhs, rhs, 1e-12));
    }
}

TEST_CASE("fdq is linear") {
    Rng rng(4);
    auto alg = diagonal(3);
    for (int it = 0; it < 15; ++it) {
        const NCPoly p = random_poly(rng, alg, 2, 3, 1.0);
        const NCPoly q = random_poly(rng, alg, 2, 3, 1.0);
        const Cplx c(rng.normal(), rng.normal());
        CHECK(canonical_equal(fdq(p.scale(c).add(q)), fdq(p).scale(c).add(fdq(q)), 1e-10));
    }
}

TEST_CASE("canonical fdq vanishes exactly on canonical degree-0 polynomials") {
    Rng rng(5);
    for (int it = 0; it < 30; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 4));
        auto alg = (it % 2) ? diagonal(n) : blocks(random_partition(rng, n), n);
        const NCPoly p = random_poly(rng, alg, alg->dim() > 3 ? 2 : 3, 3, 1.0);
        const bool fdq_zero = fdq(p).canonical_is_zero();
        const bool deg0 = p.canonical_degree0_only();
        CHECK(fdq_zero == deg0);
    }
}

TEST_CASE("split pairs reconstruct their source word") {
    // Distinct canonical words of degree >= 1 have disjoint split sets: a
    // split (l, r) determines the word l X r and the split position.
    auto alg = diagonal(2);
    const CMat e0 = alg->basis_elem(0);
    const CMat e1 = alg->basis_elem(1);
    const NCPoly w1 = NCPoly::from_terms(alg, {{Cplx(1), Monomial({e0, e1, e0}, {"", "", ""})}});
    const NCPoly w2 = NCPoly::from_terms(alg, {{Cplx(1), Monomial({e1, e0, e0}, {"", "", ""})}});

    const TensorElem d1 = fdq(w1);
    const TensorElem d2 = fdq(w2);
    const auto& c1 = d1.canonical();
    const auto& c2 = d2.canonical();
    for (const auto& [k, v] : c1) CHECK(c2.find(k) == c2.end());
}
