#pragma once

#include <map>
#include <string>
#include <vector>

#include "ncpi/derivation.hpp"
#include "ncpi/models_rng.hpp"
#include "ncpi/ncpoly.hpp"
#include "ncpi/tensor2.hpp"

namespace ncpi {

/// One executed check. For inequality checks pass <=> margin >= -tol; for
/// identity checks pass <=> residual <= tol * scale.
struct CheckReport {
    std::string check_name;
    std::string inputs_digest;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;    // rhs - lhs
    double residual = 0.0;  // identity checks
    bool pass = false;
    std::string representation_used = "-";
    std::string note;  // empty unless the trial hit an error
};

enum class NormVariant { L2, Op };

/// Telescoping identity from the proof:
/// (mu o (id (x) E))(fdq(p) # (X (x) 1 - 1 (x) X)) = p(X) - E[p(X)].
CheckReport check_telescoping(const NCPoly& p, const MatrixModel& m, double tol,
                              const std::string& digest = "adhoc");

/// Main inequality |p(X) - E[p(X)]|_2 <= 2 |X|_2 piUpper(fdq(p)); the Op
/// variant replaces the left norm with the operator norm.
CheckReport check_poincare(const NCPoly& p, const MatrixModel& m, NormVariant variant, double tol,
                           const std::string& digest = "adhoc");

/// Formal kernel statement: canonical fdq(p) = 0 iff the canonical form of p
/// holds degree-0 words only.
CheckReport check_kernel(const NCPoly& p, const std::string& digest = "adhoc");

/// ||p(X)|| + piUpper(fdq(p)): upper bound on the Sobolev-type norm.
double sobolev_norm(const NCPoly& p, const MatrixModel& m);

/// C = sup_n n ||X||^{n-1} / R^n, exact (the sequence is unimodal; the
/// supremum sits at n = 1 or next to the real maximizer -1/ln(||X||/R)).
/// Requires ||X|| < R.
double growth_constant(double norm_x, double radius);

/// The three functional-calculus bounds, all on one shared (stored)
/// representation of p: ||p(X)|| <= |||p|||_R; spatial <= pi-upper;
/// pi-upper(fdq p) <= C |||p|||_R.
std::vector<CheckReport> check_lemma4_bounds(const NCPoly& p, double radius, const MatrixModel& m,
                                             double tol, const std::string& digest = "adhoc");

/// Conditional-expectation contract: idempotent, trace-preserving,
/// B-bimodular, contractive (operator and L2 norms).
CheckReport check_expectation_contract(const CoeffAlgebra& alg, const CMat& a, const CMat& b,
                                       const CMat& b_prime, double tol,
                                       const std::string& digest = "adhoc");

/// Leibniz law fdq(pq) = 1.fdq(p).q + p.fdq(q).1, canonically.
CheckReport check_leibniz(const NCPoly& p, const NCPoly& q, double tol,
                          const std::string& digest = "adhoc");

struct Quantiles {
    double min = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, max = 0.0;
};

struct PerCheckStats {
    int count = 0;
    int failures = 0;
};

struct SuiteSummary {
    int trials = 0;
    int checks = 0;
    int failures = 0;
    double max_residual = 0.0;
    double min_margin = 0.0;  // over all inequality checks; 0 when none ran
    Quantiles poincare_l2_margins;
    Quantiles poincare_op_margins;
    std::map<std::string, PerCheckStats> per_check;
    bool all_pass() const { return failures == 0; }
};

struct SuiteResult {
    SuiteConfig config;
    std::string config_digest;
    SuiteSummary summary;
    std::vector<CheckReport> reports;
};

/// Runs every check over seeded random models and polynomials. Deterministic
/// given the config; per-trial errors are recorded, never abort the suite.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace ncpi
