#include "morita/tensor_space.hpp"

#include <sstream>

namespace morita {

Matrix tensor_relation_matrix(const Bimodule& m, const Bimodule& n) {
    const FieldSpec& f = m.left->field;
    const std::size_t M = m.dim, N = n.dim, A = m.right->dim;
    Matrix rel(f, M * A * N, M * N);
    std::size_t r = 0;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t b = 0; b < A; ++b)
            for (std::size_t j = 0; j < N; ++j, ++r) {
                // (m_i . a_b) (x) n_j
                const Scalar* ia = m.right_row(i, b);
                for (std::size_t k = 0; k < M; ++k) rel.at(r, k * N + j) += ia[k];
                // - m_i (x) (a_b . n_j)
                const Scalar* bj = n.left_row(b, j);
                for (std::size_t k = 0; k < N; ++k) rel.at(r, i * N + k) -= bj[k];
            }
    return rel;
}

TensorSpace tensor_over(const BimodulePtr& m, const BimodulePtr& n) {
    check_bimodule_shape(*m);
    check_bimodule_shape(*n);
    if (!(*m->right == *n->left))
        throw AlgebraMismatch("tensor_over: middle algebras disagree ('" + m->name + "' (x) '" +
                              n->name + "')");
    const FieldSpec& f = m->left->field;
    const std::size_t amb = m->dim * n->dim;

    // relations fed incrementally; identical canonical form, cheaper on the
    // large structured systems the surgery pipeline produces
    RrefAccumulator acc(f, amb);
    {
        const std::size_t M = m->dim, N = n->dim, A = m->right->dim;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t b = 0; b < A; ++b)
                for (std::size_t j = 0; j < N; ++j) {
                    Vec rel = zero_vec(f, amb);
                    const Scalar* ia = m->right_row(i, b);
                    for (std::size_t k = 0; k < M; ++k) rel[k * N + j] += ia[k];
                    const Scalar* bj = n->left_row(b, j);
                    for (std::size_t k = 0; k < N; ++k) rel[i * N + k] -= bj[k];
                    if (!is_zero_vec(rel)) acc.add_row(std::move(rel));
                }
    }
    QuotientBasis qb = quotient_from_echelon(acc.to_echelon(), amb);
    const std::size_t q = qb.representatives.size();

    auto quot = std::make_shared<Bimodule>();
    quot->left = m->left;
    quot->right = n->right;
    quot->dim = q;
    quot->name = m->name + "(x)" + n->name;
    quot->left_action.assign(m->left->dim * q * q, Scalar::zero(f));
    quot->right_action.assign(q * n->right->dim * q, Scalar::zero(f));

    const std::size_t N = n->dim;
    for (std::size_t x = 0; x < q; ++x) {
        Vec ambient = qb.section.col(x);
        // left action of C through the left factor
        for (std::size_t a = 0; a < m->left->dim; ++a) {
            Vec image = zero_vec(f, amb);
            for (std::size_t i = 0; i < m->dim; ++i)
                for (std::size_t j = 0; j < N; ++j) {
                    const Scalar& coeff = ambient[i * N + j];
                    if (coeff.is_zero()) continue;
                    const Scalar* row = m->left_row(a, i);
                    for (std::size_t k = 0; k < m->dim; ++k) image[k * N + j].add_mul(coeff, row[k]);
                }
            Vec out = apply_matrix(qb.projection, image);
            for (std::size_t j = 0; j < q; ++j) quot->l(a, x, j) = out[j];
        }
        // right action of D through the right factor
        for (std::size_t b = 0; b < n->right->dim; ++b) {
            Vec image = zero_vec(f, amb);
            for (std::size_t i = 0; i < m->dim; ++i)
                for (std::size_t j = 0; j < N; ++j) {
                    const Scalar& coeff = ambient[i * N + j];
                    if (coeff.is_zero()) continue;
                    const Scalar* row = n->right_row(j, b);
                    for (std::size_t k = 0; k < N; ++k) image[i * N + k].add_mul(coeff, row[k]);
                }
            Vec out = apply_matrix(qb.projection, image);
            for (std::size_t j = 0; j < q; ++j) quot->r(x, b, j) = out[j];
        }
    }

    return TensorSpace{m, n, m->right, quot, std::move(qb.projection), std::move(qb.section)};
}

BalanceCheck is_balanced(const BilinearBlockMap& beta, const Algebra& over) {
    check_block_map_shape(beta);
    const Bimodule& m = *beta.left_factor;
    const Bimodule& n = *beta.right_factor;
    if (!(*m.right == over) || !(*n.left == over))
        throw MalformedInput("is_balanced: the map's domains are not modules over the given algebra");
    const FieldSpec& f = over.field;
    const std::size_t out_dim = beta.codomain->dim;
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t b = 0; b < over.dim; ++b)
            for (std::size_t j = 0; j < n.dim; ++j) {
                Vec lhs = zero_vec(f, out_dim), rhs = zero_vec(f, out_dim);
                const Scalar* ib = m.right_row(i, b);
                for (std::size_t k = 0; k < m.dim; ++k) {
                    if (ib[k].is_zero()) continue;
                    const Scalar* row = beta.row(k, j);
                    for (std::size_t t = 0; t < out_dim; ++t) lhs[t].add_mul(ib[k], row[t]);
                }
                const Scalar* bj = n.left_row(b, j);
                for (std::size_t k = 0; k < n.dim; ++k) {
                    if (bj[k].is_zero()) continue;
                    const Scalar* row = beta.row(i, k);
                    for (std::size_t t = 0; t < out_dim; ++t) rhs[t].add_mul(bj[k], row[t]);
                }
                if (lhs != rhs) return BalanceCheck{false, std::make_tuple(i, b, j)};
            }
    return BalanceCheck{};
}

Matrix factor_balanced(const BilinearBlockMap& beta, const TensorSpace& t) {
    check_block_map_shape(beta);
    if (!(*beta.left_factor == *t.left_factor) || !(*beta.right_factor == *t.right_factor))
        throw MalformedInput("factor_balanced: tensor space was not built from the map's domains");
    BalanceCheck bc = is_balanced(beta, *t.middle);
    if (!bc.balanced) {
        auto [i, b, j] = *bc.witness;
        std::ostringstream w;
        w << "factor_balanced: map is not balanced at (m=" << i + 1 << ", a=" << b + 1
          << ", n=" << j + 1 << ")";
        throw NotBalanced(w.str());
    }
    const FieldSpec& f = beta.codomain->left->field;
    const std::size_t q = t.quotient->dim;
    const std::size_t out_dim = beta.codomain->dim;
    // beta as a linear map on the ambient tensor space
    Matrix ambient(f, out_dim, t.ambient_dim());
    for (std::size_t i = 0; i < beta.left_factor->dim; ++i)
        for (std::size_t j = 0; j < beta.right_factor->dim; ++j) {
            const Scalar* row = beta.row(i, j);
            for (std::size_t k = 0; k < out_dim; ++k) ambient.at(k, t.ambient_index(i, j)) = row[k];
        }
    Matrix factored = mul(ambient, t.section);
    if (!(mul(factored, t.projection) == ambient))
        throw InvariantViolated("factor_balanced: factored map does not restore the ambient map");
    return factored;
}

Matrix induced_tensor_map(const Matrix& f, const Matrix& g, const TensorSpace& source,
                          const TensorSpace& target) {
    if (f.cols() != source.left_factor->dim || f.rows() != target.left_factor->dim ||
        g.cols() != source.right_factor->dim || g.rows() != target.right_factor->dim)
        throw MalformedInput("induced_tensor_map: factor map shapes do not match the tensor spaces");
    const FieldSpec& field = f.field();
    const std::size_t sN = source.right_factor->dim;
    const std::size_t tN = target.right_factor->dim;
    Matrix kron(field, target.ambient_dim(), source.ambient_dim());
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t k = 0; k < f.cols(); ++k) {
            if (f.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < g.rows(); ++j)
                for (std::size_t l = 0; l < g.cols(); ++l)
                    kron.at(i * tN + j, k * sN + l).add_mul(f.at(i, k), g.at(j, l));
        }
    // descent: f (x) g must map ker(projection_source) into ker(projection_target)
    for (const Vec& v : kernel_basis(source.projection)) {
        Vec image = apply_matrix(target.projection, apply_matrix(kron, v));
        if (!is_zero_vec(image))
            throw RelationsNotPreserved(
                "induced_tensor_map: relation not preserved; source kernel vector " + vec_str(v) +
                " maps to nonzero class " + vec_str(image));
    }
    return mul(target.projection, mul(kron, source.section));
}

}  // namespace morita
