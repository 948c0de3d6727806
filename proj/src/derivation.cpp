#include "ncpi/derivation.hpp"

namespace ncpi {

TensorElem fdq(const NCPoly& p) {
    std::vector<TensorElem::Term> out;
    for (const auto& t : p.terms()) {
        const int n = t.mono.degree();
        for (int i = 1; i <= n; ++i) {
            out.push_back(TensorElem::Term{t.weight, t.mono.slice(0, i - 1), t.mono.slice(i, n)});
        }
    }
    return TensorElem::from_terms(p.algebra(), std::move(out));
}

}  // namespace ncpi
