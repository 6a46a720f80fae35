#pragma once

#include "morita/algebra.hpp"

namespace morita {

/// An A-B-bimodule by action tensors on a chosen basis:
///   b_a . m_i = sum_j left_action[a][i][j] m_j
///   m_i . b_b = sum_j right_action[i][b][j] m_j
struct Bimodule {
    AlgebraPtr left;   // A
    AlgebraPtr right;  // B
    std::size_t dim = 0;
    std::vector<Scalar> left_action;   // dim(A) * dim * dim
    std::vector<Scalar> right_action;  // dim * dim(B) * dim
    std::string name;

    const Scalar* left_row(std::size_t a, std::size_t i) const {
        return left_action.data() + (a * dim + i) * dim;
    }
    const Scalar* right_row(std::size_t i, std::size_t b) const {
        return right_action.data() + (i * right->dim + b) * dim;
    }
    Scalar& l(std::size_t a, std::size_t i, std::size_t j) {
        return left_action[(a * dim + i) * dim + j];
    }
    Scalar& r(std::size_t i, std::size_t b, std::size_t j) {
        return right_action[(i * right->dim + b) * dim + j];
    }

    bool operator==(const Bimodule& o) const {
        return *left == *o.left && *right == *o.right && dim == o.dim &&
               left_action == o.left_action && right_action == o.right_action;
    }
};

using BimodulePtr = std::shared_ptr<const Bimodule>;

void check_bimodule_shape(const Bimodule& m);

Vec act_left(const Bimodule& m, const Vec& a, const Vec& x);
Vec act_right(const Bimodule& m, const Vec& x, const Vec& b);

/// Module axioms for both sides, the commuting-actions condition, and the
/// unitality facts: a side is unital when the span of all basis actions is
/// the whole module (surjectivity of the action map, no shortcut through
/// identities).
VerificationReport verify_bimodule(const Bimodule& m);

bool left_unital(const Bimodule& m);
bool right_unital(const Bimodule& m);

/// The algebra as a bimodule over itself; both actions are multiplication.
BimodulePtr regular_bimodule(const AlgebraPtr& a);

BimodulePtr zero_bimodule(const AlgebraPtr& a, const AlgebraPtr& b);

/// A left A-module packaged as a bimodule whose right side is the base field
/// acting by scalars.
BimodulePtr left_module_as_bimodule(const AlgebraPtr& a, std::size_t dim,
                                    std::vector<Scalar> left_action, std::string name);
BimodulePtr right_module_as_bimodule(const AlgebraPtr& b, std::size_t dim,
                                     std::vector<Scalar> right_action, std::string name);

struct DirectSumBimodule {
    BimodulePtr sum;
    std::vector<std::size_t> offsets;  // start of each summand
};
DirectSumBimodule direct_sum_bimodule(const std::vector<BimodulePtr>& parts, std::string name);

/// Quotient of m by the sub-bimodule generated by the given elements, with
/// the canonical projection/section pair.
struct BimoduleQuotient {
    BimodulePtr quotient;
    Matrix projection;  // q x dim(m)
    Matrix section;     // dim(m) x q
};
BimoduleQuotient bimodule_quotient(const BimodulePtr& m, const std::vector<Vec>& generators,
                                   std::string name);

/// Blockwise bilinear data t[i][j][k] sending m_i x n_j to sum_k t[i][j][k] z_k.
struct BilinearBlockMap {
    BimodulePtr left_factor;
    BimodulePtr right_factor;
    BimodulePtr codomain;
    std::vector<Scalar> tensor;  // leftdim * rightdim * outdim

    const Scalar* row(std::size_t i, std::size_t j) const {
        return tensor.data() + (i * right_factor->dim + j) * codomain->dim;
    }
    Scalar& t(std::size_t i, std::size_t j, std::size_t k) {
        return tensor[(i * right_factor->dim + j) * codomain->dim + k];
    }

    bool operator==(const BilinearBlockMap& o) const {
        return *left_factor == *o.left_factor && *right_factor == *o.right_factor &&
               *codomain == *o.codomain && tensor == o.tensor;
    }
};

BilinearBlockMap zero_block_map(BimodulePtr l, BimodulePtr r, BimodulePtr cod);
void check_block_map_shape(const BilinearBlockMap& b);
Vec eval(const BilinearBlockMap& b, const Vec& x, const Vec& y);

}  // namespace morita
