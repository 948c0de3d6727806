#include "ncpi/coeff_algebra.hpp"

#include <sstream>

#include "ncpi/errors.hpp"

namespace ncpi {

namespace {

// Modified Gram-Schmidt in the tau-inner product. Appends the part of `cand`
// orthogonal to `basis` if it is numerically nonzero.
bool gs_extend(std::vector<CMat>& basis, CMat cand, double rel_floor) {
    const double scale = l2_norm(cand);
    if (scale <= 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
        for (const CMat& e : basis) {
            cand -= tau_inner(e, cand) * e;
        }
    }
    const double resid = l2_norm(cand);
    if (resid <= rel_floor * (1.0 + scale)) return false;
    basis.push_back(cand / resid);
    return true;
}

std::vector<CMat> block_units(int ambient_dim, const std::vector<int>& sizes) {
    std::vector<CMat> out;
    const double root_n = std::sqrt(static_cast<double>(ambient_dim));
    int offset = 0;
    for (int s : sizes) {
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j) {
                CMat e = CMat::Zero(ambient_dim, ambient_dim);
                e(offset + i, offset + j) = root_n;  // tau-normalized matrix unit
                out.push_back(std::move(e));
            }
        }
        offset += s;
    }
    return out;
}

}  // namespace

std::string SubalgebraSpec::name() const {
    switch (kind) {
        case Kind::Scalars: return "scalars";
        case Kind::Diagonal: return "diagonal";
        case Kind::Blocks: {
            std::ostringstream os;
            os << "blocks[";
            for (std::size_t i = 0; i < block_sizes.size(); ++i)
                os << (i ? "," : "") << block_sizes[i];
            os << "]";
            return os.str();
        }
        case Kind::Generators: return "generators(" + std::to_string(generators.size()) + ")";
        case Kind::Mixed: return "mixed";
    }
    return "?";
}

std::shared_ptr<const CoeffAlgebra> CoeffAlgebra::build(const SubalgebraSpec& spec, int ambient_dim,
                                                        const Limits& limits, double tolerance) {
    if (ambient_dim <= 0) throw std::invalid_argument("CoeffAlgebra: ambient dimension must be positive");

    auto alg = std::shared_ptr<CoeffAlgebra>(new CoeffAlgebra());
    alg->ambient_dim_ = ambient_dim;
    alg->limits_ = limits;
    alg->tolerance_ = tolerance;

    const int n = ambient_dim;
    switch (spec.kind) {
        case SubalgebraSpec::Kind::Scalars:
            alg->basis_ = {CMat::Identity(n, n)};  // tau(I*I) = 1 already
            break;
        case SubalgebraSpec::Kind::Diagonal: {
            std::vector<int> ones(static_cast<std::size_t>(n), 1);
            alg->basis_ = block_units(n, ones);
            break;
        }
        case SubalgebraSpec::Kind::Blocks: {
            int total = 0;
            for (int s : spec.block_sizes) {
                if (s <= 0) throw std::invalid_argument("CoeffAlgebra: block sizes must be positive");
                total += s;
            }
            if (total != n)
                throw std::invalid_argument("CoeffAlgebra: block sizes must sum to the ambient dimension");
            alg->basis_ = block_units(n, spec.block_sizes);
            break;
        }
        case SubalgebraSpec::Kind::Generators: {
            if (spec.generators.empty()) {
                // Degenerate spec falls back to scalars.
                alg->basis_ = {CMat::Identity(n, n)};
                break;
            }
            std::vector<CMat> seed = {CMat::Identity(n, n)};
            for (const CMat& g : spec.generators) {
                if (g.rows() != n || g.cols() != n)
                    throw std::invalid_argument("CoeffAlgebra: generator has wrong dimension");
                seed.push_back(g);
                seed.push_back(g.adjoint());
            }
            std::vector<CMat>& basis = alg->basis_;
            constexpr double kGsFloor = 1e-10;
            for (const CMat& s : seed) gs_extend(basis, s, kGsFloor);
            // Close under products until the span stabilizes.
            bool grew = true;
            while (grew) {
                grew = false;
                const std::size_t d = basis.size();
                for (std::size_t i = 0; i < d; ++i) {
                    for (std::size_t j = 0; j < d; ++j) {
                        if (gs_extend(basis, basis[i] * basis[j], kGsFloor)) grew = true;
                        if (basis.size() > static_cast<std::size_t>(limits.algebra_dim_cap))
                            throw cap_error("CoeffAlgebra: generator closure exceeded the dimension cap");
                    }
                }
            }
            break;
        }
        case SubalgebraSpec::Kind::Mixed:
            throw std::invalid_argument("CoeffAlgebra: 'mixed' is a suite spec, not a concrete subalgebra");
    }

    alg->spec_name_ = spec.name();
    alg->basis_op_norms_.reserve(alg->basis_.size());
    for (const CMat& e : alg->basis_) alg->basis_op_norms_.push_back(operator_norm(e));
    alg->contains_unit_ = alg->span_residual(alg->identity()) <= tolerance * 2.0;
    alg->validate();
    return alg;
}

CMat CoeffAlgebra::expectation(const CMat& a) const {
    if (a.rows() != ambient_dim_ || a.cols() != ambient_dim_)
        throw std::invalid_argument("expectation: dimension mismatch");
    CMat out = CMat::Zero(ambient_dim_, ambient_dim_);
    for (const CMat& e : basis_) out += tau_inner(e, a) * e;
    return out;
}

CVec CoeffAlgebra::coords(const CMat& a) const {
    if (a.rows() != ambient_dim_ || a.cols() != ambient_dim_)
        throw std::invalid_argument("coords: dimension mismatch");
    CVec c(dim());
    for (int k = 0; k < dim(); ++k) c(k) = tau_inner(basis_[static_cast<std::size_t>(k)], a);
    return c;
}

CMat CoeffAlgebra::from_coords(const CVec& c) const {
    if (c.size() != dim()) throw std::invalid_argument("from_coords: wrong coordinate count");
    CMat out = CMat::Zero(ambient_dim_, ambient_dim_);
    for (int k = 0; k < dim(); ++k) out += c(k) * basis_[static_cast<std::size_t>(k)];
    return out;
}

double CoeffAlgebra::span_residual(const CMat& a) const {
    return operator_norm(a - expectation(a));
}

void CoeffAlgebra::validate() const {
    if (basis_.empty()) throw std::invalid_argument("CoeffAlgebra: empty basis");
    const double tol = tolerance_;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const Cplx g = tau_inner(basis_[j], basis_[k]);
            const Cplx want = (j == k) ? Cplx(1, 0) : Cplx(0, 0);
            if (std::abs(g - want) > tol)
                throw std::invalid_argument("CoeffAlgebra: basis is not tau-orthonormal");
        }
    }
    if (!contains_unit_)
        throw std::invalid_argument("CoeffAlgebra: identity not in span (B must be unital)");
    for (std::size_t j = 0; j < basis_.size(); ++j) {
        const CMat adj = basis_[j].adjoint();
        if (span_residual(adj) > tol * (1.0 + operator_norm(adj)))
            throw std::invalid_argument("CoeffAlgebra: span not closed under adjoint");
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const CMat prod = basis_[j] * basis_[k];
            if (span_residual(prod) > tol * (1.0 + operator_norm(prod)))
                throw std::invalid_argument("CoeffAlgebra: span not closed under multiplication");
        }
    }
}

MatrixModel make_model(AlgebraPtr algebra, CMat X) {
    if (!algebra) throw std::invalid_argument("make_model: null algebra");
    const int n = algebra->ambient_dim();
    if (X.rows() != n || X.cols() != n) throw std::invalid_argument("make_model: X has wrong dimension");
    if (!is_hermitian(X, algebra->tolerance()))
        throw std::invalid_argument("make_model: X must be self-adjoint");
    return MatrixModel{std::move(algebra), std::move(X)};
}

}  // namespace ncpi
