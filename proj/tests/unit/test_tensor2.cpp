#include <doctest.h>

#include "ncpi/derivation.hpp"
#include "ncpi/errors.hpp"
#include "ncpi/tensor2.hpp"
#include "test_helpers.hpp"

using namespace ncpi;
using namespace ncpi::test;

namespace {

Monomial mono_of(const AlgebraPtr& alg, std::vector<CMat> coeffs) {
    std::vector<std::string> labels(coeffs.size(), "");
    return Monomial(std::move(coeffs), std::move(labels));
}

TensorElem simple(const AlgebraPtr& alg, const Monomial& l, const Monomial& r) {
    return TensorElem::simple(alg, Cplx(1), l, r);
}

// Independent Kronecker product: plain quadruple loop.
CMat kron_oracle(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

}  // namespace

TEST_CASE("sharp follows (a1 (x) a2) # (a3 (x) a4) = (a1 a3) (x) (a4 a2)") {
    auto alg = diagonal(2);
    Rng rng(1);
    const CMat a1 = random_coefficient(rng, *alg, 1.0);
    const CMat a2 = random_coefficient(rng, *alg, 1.0);
    const CMat a3 = random_coefficient(rng, *alg, 1.0);
    const CMat a4 = random_coefficient(rng, *alg, 1.0);

    const TensorElem u = simple(alg, mono_of(alg, {a1}), mono_of(alg, {a2}));
    const TensorElem v = simple(alg, mono_of(alg, {a3}), mono_of(alg, {a4}));
    const TensorElem got = sharp(u, v);
    const TensorElem want = simple(alg, mono_of(alg, {a1 * a3}), mono_of(alg, {a4 * a2}));
    CHECK(canonical_equal(got, want, 1e-12));
}

TEST_CASE("sharp unit laws") {
    auto alg = diagonal(3);
    const TensorElem one_one = simple(alg, mono_of(alg, {alg->identity()}), mono_of(alg, {alg->identity()}));
    const TensorElem comm = x_commutator_tensor(alg);
    CHECK(canonical_equal(sharp(one_one, comm), comm, 1e-12));

    Rng rng(2);
    const CMat b = random_coefficient(rng, *alg, 1.0);
    const TensorElem xb =
        simple(alg, mono_of(alg, {alg->identity(), alg->identity()}), mono_of(alg, {b}));
    CHECK(canonical_equal(sharp(xb, one_one), xb, 1e-12));
}

TEST_CASE("sharp is bilinear") {
    Rng rng(3);
    auto alg = diagonal(3);
    auto rand_tensor = [&](int terms) {
        std::vector<TensorElem::Term> t;
        for (int i = 0; i < terms; ++i) {
            const NCPoly l = random_poly(rng, alg, 2, 1, 1.0);
            const NCPoly r = random_poly(rng, alg, 2, 1, 1.0);
            t.push_back({Cplx(rng.normal(), rng.normal()), l.terms()[0].mono, r.terms()[0].mono});
        }
        return TensorElem::from_terms(alg, std::move(t));
    };
    for (int it = 0; it < 10; ++it) {
        const TensorElem u = rand_tensor(2), up = rand_tensor(2), v = rand_tensor(2);
        CHECK(canonical_equal(sharp(u.add(up), v), sharp(u, v).add(sharp(up, v)), 1e-10));
        CHECK(canonical_equal(sharp(v, u.add(up)), sharp(v, u).add(sharp(v, up)), 1e-10));
    }
}

TEST_CASE("bimodule action on simple tensors") {
    auto alg = diagonal(2);
    Rng rng(4);
    const CMat b = random_coefficient(rng, *alg, 1.0);
    const NCPoly one = NCPoly::unit(alg);
    const NCPoly x = NCPoly::indeterminate(alg);
    const NCPoly bp = NCPoly::coefficient(alg, b);

    const TensorElem u = x_commutator_tensor(alg);
    CHECK(canonical_equal(bimodule_act(one, u, one), u, 1e-12));

    const TensorElem one_one = simple(alg, mono_of(alg, {alg->identity()}), mono_of(alg, {alg->identity()}));
    const TensorElem xx =
        simple(alg, mono_of(alg, {alg->identity(), alg->identity()}),
               mono_of(alg, {alg->identity(), alg->identity()}));
    CHECK(canonical_equal(bimodule_act(x, one_one, x), xx, 1e-12));

    Rng rng2(5);
    const CMat l = random_coefficient(rng2, *alg, 1.0);
    const CMat r = random_coefficient(rng2, *alg, 1.0);
    const TensorElem lr = simple(alg, mono_of(alg, {l}), mono_of(alg, {r}));
    const TensorElem want = simple(alg, mono_of(alg, {b * l}), mono_of(alg, {r}));
    CHECK(canonical_equal(bimodule_act(bp, lr, one), want, 1e-12));
}

TEST_CASE("mu collapses tensors to products") {
    auto alg = diagonal(2);
    const NCPoly x = NCPoly::indeterminate(alg);
    const Monomial xm = x.terms()[0].mono;
    const Monomial one_m = NCPoly::unit(alg).terms()[0].mono;

    CHECK(canonical_equal(mu(simple(alg, xm, xm)), x.mul(x), 1e-12));
    CHECK(canonical_equal(mu(simple(alg, one_m, one_m)), NCPoly::unit(alg), 1e-12));

    Rng rng(6);
    const CMat b0 = random_coefficient(rng, *alg, 1.0);
    const CMat b1 = random_coefficient(rng, *alg, 1.0);
    // mu(b0 X (x) b1) = b0 X b1
    const TensorElem t = simple(alg, mono_of(alg, {b0, alg->identity()}), mono_of(alg, {b1}));
    const NCPoly want = NCPoly::from_terms(alg, {{Cplx(1), mono_of(alg, {b0, b1})}});
    CHECK(canonical_equal(mu(t), want, 1e-12));
}

TEST_CASE("mu composed with the bimodule action is p mu(u) q") {
    Rng rng(7);
    for (int it = 0; it < 10; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 4));
        auto alg = diagonal(n);
        const NCPoly p = random_poly(rng, alg, 2, 2, 1.0);
        const NCPoly q = random_poly(rng, alg, 2, 2, 1.0);
        const NCPoly h = random_poly(rng, alg, 2, 2, 1.0);
        const TensorElem u = fdq(h);
        if (u.is_stored_zero()) continue;
        CHECK(canonical_equal(mu(bimodule_act(p, u, q)), p.mul(mu(u)).mul(q), 1e-10));
    }
}

TEST_CASE("mu_idE_eval applies E to the right leg only") {
    auto alg_any = blocks({2, 1}, 3);
    Rng rng(8);
    const MatrixModel m0 = random_model(rng, 3, SubalgebraSpec::scalars());
    const MatrixModel m = make_model(alg_any, m0.X);

    // X (x) 1 evaluates to X E[1] = X.
    const Monomial xm = NCPoly::indeterminate(alg_any).terms()[0].mono;
    const Monomial one_m = NCPoly::unit(alg_any).terms()[0].mono;
    CHECK(max_abs_diff(mu_idE_eval(simple(alg_any, xm, one_m), m), m.X) < 1e-13);

    // 1 (x) X over scalars evaluates to tau(X) 1.
    auto alg_s = scalars(3);
    const MatrixModel ms = make_model(alg_s, m0.X);
    const Monomial xs = NCPoly::indeterminate(alg_s).terms()[0].mono;
    const Monomial ones = NCPoly::unit(alg_s).terms()[0].mono;
    const CMat want = ntrace(ms.X) * CMat::Identity(3, 3);
    CHECK(max_abs_diff(mu_idE_eval(simple(alg_s, ones, xs), ms), want) < 1e-13);
}

TEST_CASE("mu_idE_eval over the diagonal matches the diagonal-part oracle") {
    Rng rng(9);
    for (int it = 0; it < 10; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 5));
        const MatrixModel m = random_model(rng, n, SubalgebraSpec::diagonal());
        const NCPoly l = random_poly(rng, m.algebra, 3, 1, 1.0);
        const NCPoly r = random_poly(rng, m.algebra, 3, 1, 1.0);
        const TensorElem u = simple(m.algebra, l.terms()[0].mono, r.terms()[0].mono);
        const CMat want = l.evaluate(m) * diag_part_oracle(r.evaluate(m));
        CHECK(max_abs_diff(mu_idE_eval(u, m), want) < 1e-11);
    }
}

TEST_CASE("mu_idE_eval is linear") {
    Rng rng(10);
    const MatrixModel m = random_model(rng, 4, SubalgebraSpec::diagonal());
    const NCPoly p = random_poly(rng, m.algebra, 3, 3, 1.0);
    const NCPoly q = random_poly(rng, m.algebra, 3, 3, 1.0);
    const TensorElem u = fdq(p);
    const TensorElem v = fdq(q);
    const Cplx c(0.7, -0.3);
    const CMat lhs = mu_idE_eval(u.scale(c).add(v), m);
    const CMat rhs = c * mu_idE_eval(u, m) + mu_idE_eval(v, m);
    CHECK(max_abs_diff(lhs, rhs) < 1e-11);
}

TEST_CASE("pi_upper on frozen examples") {
    auto alg = scalars(2);
    CMat x(2, 2);
    x << Cplx(0), Cplx(1), Cplx(1), Cplx(0);  // ||X|| = 1
    const MatrixModel m = make_model(alg, x);

    const Monomial one_m = NCPoly::unit(alg).terms()[0].mono;
    const Monomial xm = NCPoly::indeterminate(alg).terms()[0].mono;

    CHECK(pi_upper(simple(alg, one_m, one_m), m).value == doctest::Approx(1.0));

    const Cplx c(0.3, 0.4);
    const TensorElem single = TensorElem::simple(alg, c, xm, xm);
    CHECK(pi_upper(single, m, Rep::Stored).value == doctest::Approx(std::abs(c)));

    const TensorElem pair = simple(alg, xm, one_m).add(simple(alg, one_m, xm));
    CHECK(pi_upper(pair, m, Rep::Stored).value <= 2.0 + 1e-12);
}

TEST_CASE("spatial norm agrees with the dense Kronecker oracle") {
    Rng rng(11);
    for (int it = 0; it < 10; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 4));
        const MatrixModel m = random_model(rng, n, SubalgebraSpec::diagonal());
        const NCPoly p = random_poly(rng, m.algebra, 3, 3, 1.0);
        const TensorElem u = fdq(p);
        if (u.is_stored_zero()) continue;

        CMat acc = CMat::Zero(n * n, n * n);
        for (const auto& t : u.terms())
            acc += t.weight * kron_oracle(t.left.evaluate(m.X), t.right.evaluate(m.X));
        Eigen::JacobiSVD<CMat> svd(acc);
        const double want = svd.singularValues()(0);
        CHECK(spatial_norm(u, m) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("spatial norm is dominated by pi_upper") {
    Rng rng(12);
    for (int it = 0; it < 20; ++it) {
        const int n = static_cast<int>(rng.uniform_int(2, 5));
        const MatrixModel m = random_model(
            rng, n, (it % 2) ? SubalgebraSpec::diagonal() : SubalgebraSpec::blocks({}));
        const NCPoly p = random_poly(rng, m.algebra, 3, 3, 1.0);
        const TensorElem u = fdq(p);
        if (u.is_stored_zero()) continue;
        CHECK(spatial_norm(u, m) <= pi_upper(u, m).value + 1e-9);
    }
}

TEST_CASE("frozen spatial examples") {
    auto alg = scalars(2);
    CMat x(2, 2);
    x << Cplx(0), Cplx(1), Cplx(1), Cplx(0);
    const MatrixModel m = make_model(alg, x);
    const Monomial one_m = NCPoly::unit(alg).terms()[0].mono;
    const Monomial xm = NCPoly::indeterminate(alg).terms()[0].mono;
    CHECK(spatial_norm(simple(alg, one_m, one_m), m) == doctest::Approx(1.0));
    CHECK(spatial_norm(simple(alg, xm, one_m), m) == doctest::Approx(1.0));
}

TEST_CASE("spatial norm enforces the dimension cap") {
    Limits lim;
    lim.spatial_dim_cap = 3;
    auto alg = CoeffAlgebra::build(SubalgebraSpec::diagonal(), 4, lim);
    Rng rng(13);
    const MatrixModel m0 = random_model(rng, 4, SubalgebraSpec::diagonal());
    const MatrixModel m = make_model(alg, m0.X);
    const TensorElem u = x_commutator_tensor(alg);
    CHECK_THROWS_AS(spatial_norm(u, m), cap_error);
}
