#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ncpi/ncpoly.hpp"
#include "ncpi/tensor2.hpp"

namespace ncpi {

/// AST for polynomial expressions. Grammar (whitespace free between tokens):
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ['^' uint] ["'"]
///   atom   := 'X' | 't' | name | number['i'] | '(' expr ')'
/// Juxtaposition is not multiplication; '*' is required. Names e0, e1, ...
/// are reserved references into the model's orthonormal basis.
struct ExprAST {
    enum class Kind { Indeterminate, Coeff, Scalar, Add, Sub, Neg, Mul, Pow, Adjoint };
    Kind kind;
    Cplx scalar{};                                // Scalar
    std::string name;                             // Coeff
    unsigned exponent = 0;                        // Pow
    std::vector<std::unique_ptr<ExprAST>> child;  // operands
};

/// Parses the grammar above. Throws parse_error with a character position.
std::unique_ptr<ExprAST> parse_expr_text(std::string_view text);

/// Name resolution context for lowering an AST to a polynomial.
struct ModelContext {
    AlgebraPtr algebra;
    std::map<std::string, CMat> coeff_table;
    /// When set, unknown names are materialized deterministically (seeded by
    /// the name) as elements of B; otherwise they are errors.
    bool materialize_unknown = false;
};

NCPoly lower(const ExprAST& ast, ModelContext& ctx);

/// parse + lower in one step.
NCPoly parse_poly(std::string_view text, ModelContext& ctx);

/// Canonical printing: terms sorted by degree then word indices, weights in
/// shortest round-trip decimal form. parse(print_canonical(p)) is canonically
/// equal to p.
std::string print_canonical(const NCPoly& p);
std::string print_canonical(const TensorElem& u);

/// Label-based printing of the stored representation; falls back to the
/// canonical form when a coefficient has no printable name.
std::string print_stored(const NCPoly& p);
std::string print_stored(const TensorElem& u);

}  // namespace ncpi
