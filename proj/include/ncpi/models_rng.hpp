#pragma once

#include <cstdint>

#include "ncpi/coeff_algebra.hpp"
#include "ncpi/ncpoly.hpp"
#include "ncpi/rng.hpp"

namespace ncpi {

/// Configuration for a verification suite run. Everything a run needs is
/// here, so (config, seed) fully determines the report.
struct SuiteConfig {
    std::uint64_t seed = 42;
    int trials = 100;
    int dim_min = 2;
    int dim_max = 8;
    SubalgebraSpec b_spec = SubalgebraSpec::mixed();
    int max_degree = 6;
    int max_terms = 8;
    double coeff_scale = 1.0;
    double r_factor = 2.0;  // R = r_factor * ||X||; > 1 keeps ||X|| < R
    double tolerance = 1e-9;
    Limits limits;
    /// Budget for canonical expansions drawn by the suite's canonical-form
    /// checks (kernel, Leibniz); degrees are lowered until the estimated
    /// expansion fits.
    std::size_t canonical_budget = 200000;

    void validate() const;
};

/// X = (G + G*)/2 with iid standard complex Gaussian entries, rescaled to
/// ||X|| = 1; B built per spec. Blocks with no explicit sizes get a random
/// partition of N.
MatrixModel random_model(Rng& rng, int ambient_dim, const SubalgebraSpec& spec,
                         const Limits& limits = {}, double tolerance = 1e-9);

/// Random polynomial: 1..max_terms monomials, degree uniform in
/// [0, max_degree], coefficients random in span(B) with operator norm
/// <= coeff_scale.
NCPoly random_poly(Rng& rng, const AlgebraPtr& alg, int max_degree, int max_terms,
                   double coeff_scale);

/// Random coefficient in span(B) with operator norm <= coeff_scale.
CMat random_coefficient(Rng& rng, const CoeffAlgebra& alg, double coeff_scale);

/// Random partition of n into parts of size 1..3 (keeps block algebras small).
std::vector<int> random_partition(Rng& rng, int n);

/// Resolves the Mixed pseudo-spec by cycling scalars/diagonal/blocks.
SubalgebraSpec resolve_mixed(const SubalgebraSpec& spec, std::uint64_t trial);

}  // namespace ncpi
