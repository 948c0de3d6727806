#include "ncpi/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ncpi/errors.hpp"

namespace ncpi {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Largest degree whose canonical expansion (including fdq splits) fits the
// budget, assuming fully dense coefficients.
int feasible_canonical_degree(const CoeffAlgebra& alg, int terms, int max_degree, std::size_t budget) {
    const double d = std::max(1, alg.dim());
    int best = 0;
    for (int n = 1; n <= max_degree; ++n) {
        const double cost = static_cast<double>(terms) * n * std::pow(d, n + 1);
        if (cost <= static_cast<double>(budget))
            best = n;
        else
            break;
    }
    return best;
}

// Largest per-factor degree for the Leibniz check: the product's fdq
// expansion costs ~ terms^2 * 2k * d^(2k+1).
int feasible_pair_degree(const CoeffAlgebra& alg, int terms, int max_degree, std::size_t budget) {
    const double d = std::max(1, alg.dim());
    int best = 0;
    for (int k = 1; 2 * k <= max_degree; ++k) {
        const double cost = static_cast<double>(terms) * terms * (2.0 * k) * std::pow(d, 2 * k + 1);
        if (cost <= static_cast<double>(budget))
            best = k;
        else
            break;
    }
    return best;
}

NCPoly engineered_cancellation(Rng& rng, const AlgebraPtr& alg, int deg, int terms, double scale) {
    const int variant = static_cast<int>(rng.uniform_int(0, 2));
    const NCPoly q = random_poly(rng, alg, std::max(1, deg), std::max(1, terms / 2), scale);
    switch (variant) {
        case 0: {
            // q - q + b: cancels down to an element of B.
            const CMat b = random_coefficient(rng, *alg, scale);
            return q.sub(q).add(NCPoly::coefficient(alg, b));
        }
        case 1:
            // 2q - q - q: cancels to zero.
            return q.scale(Cplx(2, 0)).sub(q).sub(q);
        default: {
            // (b1+b2) X w - b1 X w - b2 X w + r: cancellation hidden behind a
            // distributed coefficient, with a surviving remainder r.
            const CMat b1 = random_coefficient(rng, *alg, scale);
            const CMat b2 = random_coefficient(rng, *alg, scale);
            const CMat w = random_coefficient(rng, *alg, scale);
            std::vector<NCPoly::Term> t;
            t.push_back(NCPoly::Term{Cplx(1, 0), Monomial({b1 + b2, w}, {"", ""})});
            t.push_back(NCPoly::Term{Cplx(-1, 0), Monomial({b1, w}, {"", ""})});
            t.push_back(NCPoly::Term{Cplx(-1, 0), Monomial({b2, w}, {"", ""})});
            const NCPoly cancel = NCPoly::from_terms(alg, std::move(t));
            const NCPoly r = random_poly(rng, alg, std::max(1, deg), 1, scale);
            return cancel.add(r);
        }
    }
}

Quantiles make_quantiles(std::vector<double> v) {
    Quantiles q;
    if (v.empty()) return q;
    std::sort(v.begin(), v.end());
    auto at = [&](double f) {
        const auto i = static_cast<std::size_t>(std::llround(f * static_cast<double>(v.size() - 1)));
        return v[i];
    };
    q.min = v.front();
    q.p25 = at(0.25);
    q.p50 = at(0.50);
    q.p75 = at(0.75);
    q.max = v.back();
    return q;
}

}  // namespace

CheckReport check_telescoping(const NCPoly& p, const MatrixModel& m, double tol,
                              const std::string& digest) {
    CheckReport r;
    r.check_name = "telescoping";
    r.inputs_digest = digest;
    r.representation_used = "stored";
    const CMat px = p.evaluate(m);
    const CMat lhs = mu_idE_eval(sharp(fdq(p), x_commutator_tensor(p.algebra())), m);
    const CMat rhs = px - m.algebra->expectation(px);
    r.lhs = operator_norm(lhs);
    r.rhs = operator_norm(rhs);
    r.margin = r.rhs - r.lhs;
    r.residual = operator_norm(lhs - rhs);
    r.pass = r.residual <= tol * (1.0 + operator_norm(px));
    return r;
}

CheckReport check_poincare(const NCPoly& p, const MatrixModel& m, NormVariant variant, double tol,
                           const std::string& digest) {
    CheckReport r;
    r.check_name = variant == NormVariant::L2 ? "poincare_l2" : "poincare_op";
    r.inputs_digest = digest;
    const CMat px = p.evaluate(m);
    const CMat diff = px - m.algebra->expectation(px);
    r.lhs = variant == NormVariant::L2 ? l2_norm(diff) : operator_norm(diff);
    const PiUpperResult pu = pi_upper(fdq(p), m);
    r.representation_used = pu.representation;
    r.rhs = 2.0 * l2_norm(m.X) * pu.value;
    r.margin = r.rhs - r.lhs;
    r.pass = r.margin >= -tol;
    return r;
}

CheckReport check_kernel(const NCPoly& p, const std::string& digest) {
    CheckReport r;
    r.check_name = "kernel";
    r.inputs_digest = digest;
    r.representation_used = "canonical";
    const std::size_t fdq_entries = fdq(p).canonical().size();
    std::size_t high_words = 0;
    for (const auto& [w, c] : p.canonical()) {
        if (w.degree() > 0) ++high_words;
    }
    r.lhs = static_cast<double>(fdq_entries);
    r.rhs = static_cast<double>(high_words);
    r.pass = (fdq_entries == 0) == (high_words == 0);
    return r;
}

double sobolev_norm(const NCPoly& p, const MatrixModel& m) {
    return operator_norm(p.evaluate(m)) + pi_upper(fdq(p), m).value;
}

double growth_constant(double norm_x, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("growth_constant: R must be positive");
    if (norm_x < 0.0) throw std::invalid_argument("growth_constant: ||X|| must be nonnegative");
    if (norm_x >= radius)
        throw std::domain_error("growth_constant: requires ||X|| < R (functional-calculus radius)");
    auto f = [&](double n) { return n * std::pow(norm_x, n - 1.0) / std::pow(radius, n); };
    double best = f(1.0);
    if (norm_x > 0.0) {
        const double q = norm_x / radius;
        const double n_star = -1.0 / std::log(q);  // real maximizer of n q^n
        for (double n : {std::floor(n_star), std::ceil(n_star)}) {
            if (n >= 1.0) best = std::max(best, f(n));
        }
    }
    return best;
}

std::vector<CheckReport> check_lemma4_bounds(const NCPoly& p, double radius, const MatrixModel& m,
                                             double tol, const std::string& digest) {
    const double norm_x = operator_norm(m.X);
    if (norm_x >= radius)
        throw std::domain_error("check_lemma4_bounds: requires ||X|| < R");

    // All three bounds are taken on the same stored representation of p.
    std::vector<CheckReport> out;
    const TensorElem dp = fdq(p);
    const double norm_r = p.norm_R_upper(radius, Rep::Stored);
    const double pi_stored = pi_upper(dp, m, Rep::Stored).value;

    CheckReport a;
    a.check_name = "lemma4_funcalc";
    a.inputs_digest = digest;
    a.representation_used = "stored";
    a.lhs = operator_norm(p.evaluate(m));
    a.rhs = norm_r;
    a.margin = a.rhs - a.lhs;
    a.pass = a.margin >= -tol;
    out.push_back(a);

    CheckReport b;
    b.check_name = "lemma4_spatial_le_pi";
    b.inputs_digest = digest;
    b.representation_used = "stored";
    if (m.dim() <= m.algebra->limits().spatial_dim_cap) {
        b.lhs = spatial_norm(dp, m);
        b.rhs = pi_stored;
        b.margin = b.rhs - b.lhs;
        b.pass = b.margin >= -tol;
    } else {
        b.pass = true;
        b.note = "skipped: ambient dimension above the Kronecker cap";
    }
    out.push_back(b);

    CheckReport c;
    c.check_name = "lemma4_pi_le_growth";
    c.inputs_digest = digest;
    c.representation_used = "stored";
    c.lhs = pi_stored;
    c.rhs = growth_constant(norm_x, radius) * norm_r;
    c.margin = c.rhs - c.lhs;
    c.pass = c.margin >= -tol;
    out.push_back(c);
    return out;
}

CheckReport check_expectation_contract(const CoeffAlgebra& alg, const CMat& a, const CMat& b,
                                       const CMat& b_prime, double tol, const std::string& digest) {
    CheckReport r;
    r.check_name = "expectation_contract";
    r.inputs_digest = digest;
    const CMat ea = alg.expectation(a);
    const double na = operator_norm(a);

    const double r_idem = operator_norm(alg.expectation(ea) - ea) / (1.0 + na);
    const double r_trace = std::abs(ntrace(ea) - ntrace(a)) / (1.0 + na);
    const double r_bimod = operator_norm(alg.expectation(b * a * b_prime) - b * ea * b_prime) /
                           (1.0 + na * operator_norm(b) * operator_norm(b_prime));
    const double r_op = std::max(0.0, operator_norm(ea) - na) / (1.0 + na);
    const double r_l2 = std::max(0.0, l2_norm(ea) - l2_norm(a)) / (1.0 + l2_norm(a));

    r.residual = std::max({r_idem, r_trace, r_bimod, r_op, r_l2});
    r.pass = r.residual <= tol;
    return r;
}

CheckReport check_leibniz(const NCPoly& p, const NCPoly& q, double tol, const std::string& digest) {
    CheckReport r;
    r.check_name = "leibniz";
    r.inputs_digest = digest;
    r.representation_used = "canonical";
    const NCPoly one = NCPoly::unit(p.algebra());
    const TensorElem lhs = fdq(p.mul(q));
    const TensorElem rhs = bimodule_act(one, fdq(p), q).add(bimodule_act(p, fdq(q), one));
    r.pass = canonical_equal(lhs, rhs, tol);
    // Largest entry of the canonical difference, for the report.
    double worst = 0.0;
    const auto& ca = lhs.canonical();
    const auto& cb = rhs.canonical();
    for (const auto& [k, v] : ca) {
        auto it = cb.find(k);
        worst = std::max(worst, std::abs(v - (it == cb.end() ? Cplx(0, 0) : it->second)));
    }
    for (const auto& [k, v] : cb) {
        if (ca.find(k) == ca.end()) worst = std::max(worst, std::abs(v));
    }
    r.residual = worst;
    return r;
}

SuiteResult run_suite(const SuiteConfig& config) {
    config.validate();
    SuiteResult result;
    result.config = config;

    std::ostringstream cfg;
    cfg << "seed=" << config.seed << ";trials=" << config.trials << ";dim=[" << config.dim_min << ","
        << config.dim_max << "];B=" << config.b_spec.name() << ";deg=" << config.max_degree
        << ";terms=" << config.max_terms << ";scale=" << config.coeff_scale << ";rf=" << config.r_factor
        << ";tol=" << config.tolerance;
    result.config_digest = hex64(fnv1a(cfg.str()));

    std::vector<double> margins_l2;
    std::vector<double> margins_op;
    double min_margin = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    bool any_margin = false;

    auto push = [&](CheckReport r) {
        auto& stats = result.summary.per_check[r.check_name];
        stats.count += 1;
        if (!r.pass) stats.failures += 1;
        max_residual = std::max(max_residual, r.residual);
        if (r.check_name == "poincare_l2") margins_l2.push_back(r.margin);
        if (r.check_name == "poincare_op") margins_op.push_back(r.margin);
        if (r.check_name.rfind("poincare", 0) == 0 || r.check_name.rfind("lemma4", 0) == 0) {
            if (r.note.empty()) {
                min_margin = std::min(min_margin, r.margin);
                any_margin = true;
            }
        }
        result.reports.push_back(std::move(r));
    };

    for (int trial = 0; trial < config.trials; ++trial) {
        const auto t = static_cast<std::uint64_t>(trial);
        const std::string digest =
            "seed=" + std::to_string(config.seed) + ";trial=" + std::to_string(trial) + ";cfg=" + result.config_digest;

        // Any per-trial error becomes a failed report; the suite never aborts.
        auto guarded = [&](const char* name, auto&& fn) {
            try {
                fn();
            } catch (const std::exception& e) {
                CheckReport err;
                err.check_name = name;
                err.inputs_digest = digest;
                err.pass = false;
                err.note = std::string("error: ") + e.what();
                push(std::move(err));
            }
        };

        Rng model_rng = Rng::stream(config.seed, t, 0);
        int n = static_cast<int>(model_rng.uniform_int(config.dim_min, config.dim_max));
        const SubalgebraSpec spec = resolve_mixed(config.b_spec, t);
        if (spec.kind == SubalgebraSpec::Kind::Blocks && !spec.block_sizes.empty()) {
            // Explicit block sizes pin the ambient dimension.
            n = 0;
            for (int s : spec.block_sizes) n += s;
        } else if (spec.kind == SubalgebraSpec::Kind::Generators && !spec.generators.empty()) {
            n = static_cast<int>(spec.generators.front().rows());
        }

        MatrixModel model;
        try {
            model = random_model(model_rng, n, spec, config.limits, config.tolerance);
        } catch (const std::exception& e) {
            CheckReport err;
            err.check_name = "model_build";
            err.inputs_digest = digest;
            err.pass = false;
            err.note = std::string("error: ") + e.what();
            push(std::move(err));
            continue;
        }
        const AlgebraPtr& alg = model.algebra;
        const double radius = config.r_factor * operator_norm(model.X);

        guarded("main_checks", [&] {
            Rng rng = Rng::stream(config.seed, t, 1);
            const NCPoly p = random_poly(rng, alg, config.max_degree, config.max_terms, config.coeff_scale);
            push(check_telescoping(p, model, config.tolerance, digest));
            push(check_poincare(p, model, NormVariant::L2, config.tolerance, digest));
            push(check_poincare(p, model, NormVariant::Op, config.tolerance, digest));
            for (auto& r : check_lemma4_bounds(p, radius, model, config.tolerance, digest)) push(std::move(r));
        });

        guarded("kernel", [&] {
            Rng rng = Rng::stream(config.seed, t, 2);
            const int terms = std::min(config.max_terms, 4);
            const int deg =
                feasible_canonical_degree(*alg, terms, config.max_degree, config.canonical_budget);
            const NCPoly pk = (trial % 4 == 3)
                                  ? engineered_cancellation(rng, alg, deg, terms, config.coeff_scale)
                                  : random_poly(rng, alg, deg, terms, config.coeff_scale);
            push(check_kernel(pk, digest));
        });

        guarded("leibniz", [&] {
            Rng rng = Rng::stream(config.seed, t, 3);
            const int terms = std::min(config.max_terms, 3);
            const int deg = feasible_pair_degree(*alg, terms, config.max_degree, config.canonical_budget);
            const NCPoly pl = random_poly(rng, alg, deg, terms, config.coeff_scale);
            const NCPoly ql = random_poly(rng, alg, deg, terms, config.coeff_scale);
            push(check_leibniz(pl, ql, config.limits.drop_threshold, digest));
        });

        guarded("expectation_contract", [&] {
            Rng rng = Rng::stream(config.seed, t, 4);
            CMat a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
            const CMat b = random_coefficient(rng, *alg, config.coeff_scale);
            const CMat bp = random_coefficient(rng, *alg, config.coeff_scale);
            push(check_expectation_contract(*alg, a, b, bp, std::max(config.tolerance, 1e-10), digest));
        });
    }

    result.summary.trials = config.trials;
    result.summary.checks = static_cast<int>(result.reports.size());
    int failures = 0;
    for (const auto& r : result.reports)
        if (!r.pass) ++failures;
    result.summary.failures = failures;
    result.summary.max_residual = max_residual;
    result.summary.min_margin = any_margin ? min_margin : 0.0;
    result.summary.poincare_l2_margins = make_quantiles(std::move(margins_l2));
    result.summary.poincare_op_margins = make_quantiles(std::move(margins_op));
    return result;
}

}  // namespace ncpi
