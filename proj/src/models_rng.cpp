#include "ncpi/models_rng.hpp"

#include <stdexcept>

namespace ncpi {

void SuiteConfig::validate() const {
    if (trials < 0) throw std::invalid_argument("SuiteConfig: trials must be >= 0");
    if (dim_min < 1 || dim_max < dim_min) throw std::invalid_argument("SuiteConfig: empty dimension range");
    if (max_degree < 0 || max_terms < 1) throw std::invalid_argument("SuiteConfig: empty degree/term range");
    if (coeff_scale <= 0.0) throw std::invalid_argument("SuiteConfig: coeff_scale must be positive");
    if (r_factor <= 1.0) throw std::invalid_argument("SuiteConfig: R_factor must exceed 1");
    if (tolerance <= 0.0) throw std::invalid_argument("SuiteConfig: tolerance must be positive");
}

MatrixModel random_model(Rng& rng, int ambient_dim, const SubalgebraSpec& spec,
                         const Limits& limits, double tolerance) {
    if (ambient_dim < 1) throw std::invalid_argument("random_model: dimension must be positive");

    SubalgebraSpec concrete = spec;
    if (concrete.kind == SubalgebraSpec::Kind::Blocks && concrete.block_sizes.empty())
        concrete.block_sizes = random_partition(rng, ambient_dim);

    auto alg = CoeffAlgebra::build(concrete, ambient_dim, limits, tolerance);

    const int n = ambient_dim;
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.cnormal();
    CMat x = (g + g.adjoint()) / 2.0;
    const double nrm = operator_norm(x);
    if (nrm > 0.0) x /= nrm;
    else x = CMat::Identity(n, n);  // measure-zero fallback
    return make_model(std::move(alg), std::move(x));
}

CMat random_coefficient(Rng& rng, const CoeffAlgebra& alg, double coeff_scale) {
    CVec c(alg.dim());
    for (int k = 0; k < alg.dim(); ++k) c(k) = rng.cnormal();
    CMat b = alg.from_coords(c);
    const double nrm = operator_norm(b);
    if (nrm > coeff_scale) b *= coeff_scale / nrm;
    return b;
}

NCPoly random_poly(Rng& rng, const AlgebraPtr& alg, int max_degree, int max_terms,
                   double coeff_scale) {
    const int n_terms = static_cast<int>(rng.uniform_int(1, max_terms));
    std::vector<NCPoly::Term> terms;
    terms.reserve(static_cast<std::size_t>(n_terms));
    for (int t = 0; t < n_terms; ++t) {
        const int deg = static_cast<int>(rng.uniform_int(0, max_degree));
        std::vector<CMat> coeffs;
        std::vector<std::string> labels(static_cast<std::size_t>(deg) + 1, "");
        coeffs.reserve(static_cast<std::size_t>(deg) + 1);
        for (int i = 0; i <= deg; ++i) coeffs.push_back(random_coefficient(rng, *alg, coeff_scale));
        terms.push_back(NCPoly::Term{Cplx(1, 0), Monomial(std::move(coeffs), std::move(labels))});
    }
    return NCPoly::from_terms(alg, std::move(terms));
}

std::vector<int> random_partition(Rng& rng, int n) {
    std::vector<int> sizes;
    int remaining = n;
    while (remaining > 0) {
        const int s = static_cast<int>(rng.uniform_int(1, std::min(remaining, 3)));
        sizes.push_back(s);
        remaining -= s;
    }
    return sizes;
}

SubalgebraSpec resolve_mixed(const SubalgebraSpec& spec, std::uint64_t trial) {
    if (spec.kind != SubalgebraSpec::Kind::Mixed) return spec;
    switch (trial % 3) {
        case 0: return SubalgebraSpec::scalars();
        case 1: return SubalgebraSpec::diagonal();
        default: return SubalgebraSpec::blocks({});  // sizes drawn per model
    }
}

}  // namespace ncpi
