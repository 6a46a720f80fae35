#pragma once

#include <optional>
#include <tuple>

#include "morita/bimodule.hpp"

namespace morita {

/// The computed tensor product M (x)_A N: the quotient of the basis-pair
/// span by the balancing relations (m.a)(x)n - m(x)(a.n), carrying the
/// induced outer bimodule structure. The pure tensor m_i (x) n_j sits at
/// ambient index i*dim(N)+j; projection and section translate between
/// ambient and quotient coordinates, with projection . section = identity.
struct TensorSpace {
    BimodulePtr left_factor;   // C-A
    BimodulePtr right_factor;  // A-D
    AlgebraPtr middle;         // A
    BimodulePtr quotient;      // C-D structure on the quotient
    Matrix projection;         // q x (dim M * dim N)
    Matrix section;            // (dim M * dim N) x q

    std::size_t ambient_dim() const { return left_factor->dim * right_factor->dim; }
    std::size_t ambient_index(std::size_t i, std::size_t j) const {
        return i * right_factor->dim + j;
    }
};

/// Builds M (x)_A N. The relations are generated from basis triples
/// (m_i, a_b, n_j), which suffices by bilinearity.
TensorSpace tensor_over(const BimodulePtr& m, const BimodulePtr& n);

/// The raw relation matrix rows (m_i.a_b)(x)n_j - m_i(x)(a_b.n_j), one per
/// basis triple in lex order. Exposed so an independent oracle can rank it.
Matrix tensor_relation_matrix(const Bimodule& m, const Bimodule& n);

struct BalanceCheck {
    bool balanced = true;
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> witness;  // (i, b, j), 0-based
};

/// Whether beta(m_i . a_b, n_j) = beta(m_i, a_b . n_j) for all basis triples;
/// on failure reports the first offending triple.
BalanceCheck is_balanced(const BilinearBlockMap& beta, const Algebra& over);

/// The unique linear map f on t.quotient with f . projection = beta (as a
/// map on the ambient tensor space). Throws NotBalanced when beta is not.
Matrix factor_balanced(const BilinearBlockMap& beta, const TensorSpace& t);

/// Descends f (x) g through the two quotients; throws RelationsNotPreserved
/// (with a witness relation) when f (x) g does not map source relations into
/// target relations.
Matrix induced_tensor_map(const Matrix& f, const Matrix& g, const TensorSpace& source,
                          const TensorSpace& target);

}  // namespace morita
