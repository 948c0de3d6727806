#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncpi/matrix.hpp"

namespace ncpi {

/// Hard caps that keep formal expansions desk-sized. Exceeding any of them
/// raises cap_error.
struct Limits {
    int degree_cap = 12;
    std::size_t stored_term_cap = 100000;
    std::size_t canonical_term_cap = 2000000;
    /// Best-representation norm bounds try the canonical form only below this
    /// expansion size; above it they fall back to the stored representation.
    std::size_t best_rep_budget = 4096;
    int spatial_dim_cap = 16;   // Kronecker evaluation allowed for N <= cap
    int algebra_dim_cap = 256;  // generator closure guard
    double drop_threshold = 1e-12;  // canonical weights below this are dropped
};

/// How to build the coefficient subalgebra B inside M_N.
struct SubalgebraSpec {
    enum class Kind { Scalars, Diagonal, Blocks, Generators, Mixed };
    Kind kind = Kind::Scalars;
    std::vector<int> block_sizes;  // Blocks; empty = drawn at random in suites
    std::vector<CMat> generators;  // Generators; empty falls back to Scalars

    static SubalgebraSpec scalars() { return {Kind::Scalars, {}, {}}; }
    static SubalgebraSpec diagonal() { return {Kind::Diagonal, {}, {}}; }
    static SubalgebraSpec blocks(std::vector<int> sizes) { return {Kind::Blocks, std::move(sizes), {}}; }
    static SubalgebraSpec generators_of(std::vector<CMat> gens) { return {Kind::Generators, {}, std::move(gens)}; }
    static SubalgebraSpec mixed() { return {Kind::Mixed, {}, {}}; }

    std::string name() const;
};

/// A unital *-subalgebra B of M_N carried by a tau-orthonormal basis.
/// The conditional expectation E is the tau-orthogonal projection onto
/// span(basis); for a unital *-subalgebra of a tracial matrix algebra this
/// is the unique tau-preserving conditional expectation, so it is a
/// B-bimodule map and contractive.
class CoeffAlgebra {
public:
    /// Builds B from a spec and validates all structural invariants:
    /// orthonormal basis, closure under products and adjoints, unit in span.
    static std::shared_ptr<const CoeffAlgebra> build(const SubalgebraSpec& spec, int ambient_dim,
                                                     const Limits& limits = {}, double tolerance = 1e-9);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<CMat>& basis() const { return basis_; }
    const CMat& basis_elem(int k) const { return basis_.at(static_cast<std::size_t>(k)); }
    bool contains_unit() const { return contains_unit_; }
    double tolerance() const { return tolerance_; }
    const Limits& limits() const { return limits_; }
    const std::string& spec_name() const { return spec_name_; }

    CMat identity() const { return CMat::Identity(ambient_dim_, ambient_dim_); }

    /// E[a] = sum_k tau(e_k* a) e_k.
    CMat expectation(const CMat& a) const;

    /// Coordinates of a in the orthonormal basis: c_k = tau(e_k* a).
    CVec coords(const CMat& a) const;

    CMat from_coords(const CVec& c) const;

    /// Residual ||a - E[a]||_op; a is in span(basis) when this is small.
    double span_residual(const CMat& a) const;

    bool in_span(const CMat& a) const {
        return span_residual(a) <= tolerance_ * (1.0 + operator_norm(a));
    }

    /// Operator norms of the basis elements (used by canonical norm bounds).
    const std::vector<double>& basis_op_norms() const { return basis_op_norms_; }

private:
    CoeffAlgebra() = default;
    void validate() const;

    int ambient_dim_ = 0;
    std::vector<CMat> basis_;
    std::vector<double> basis_op_norms_;
    bool contains_unit_ = false;
    double tolerance_ = 1e-9;
    Limits limits_;
    std::string spec_name_;
};

using AlgebraPtr = std::shared_ptr<const CoeffAlgebra>;

/// A concrete model (M_N, tau, B, E, X) with X self-adjoint.
struct MatrixModel {
    AlgebraPtr algebra;
    CMat X;

    int dim() const { return algebra->ambient_dim(); }
};

/// Validates dimensions and self-adjointness of X.
MatrixModel make_model(AlgebraPtr algebra, CMat X);

}  // namespace ncpi
