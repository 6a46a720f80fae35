#include "morita/bimodule.hpp"

#include <sstream>

namespace morita {

void check_bimodule_shape(const Bimodule& m) {
    if (!m.left || !m.right) throw MalformedInput("bimodule '" + m.name + "': missing algebra");
    if (m.left->field != m.right->field)
        throw FieldMismatch("bimodule '" + m.name + "': algebras over different fields");
    if (m.left_action.size() != m.left->dim * m.dim * m.dim)
        throw MalformedInput("bimodule '" + m.name + "': left action tensor has wrong size");
    if (m.right_action.size() != m.dim * m.right->dim * m.dim)
        throw MalformedInput("bimodule '" + m.name + "': right action tensor has wrong size");
    for (const Scalar& s : m.left_action)
        if (s.field() != m.left->field) throw FieldMismatch("bimodule '" + m.name + "': mixed fields");
    for (const Scalar& s : m.right_action)
        if (s.field() != m.left->field) throw FieldMismatch("bimodule '" + m.name + "': mixed fields");
}

Vec act_left(const Bimodule& m, const Vec& a, const Vec& x) {
    const FieldSpec& f = m.left->field;
    Vec out = zero_vec(f, m.dim);
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (a[p].is_zero()) continue;
        for (std::size_t i = 0; i < m.dim; ++i) {
            if (x[i].is_zero()) continue;
            Scalar coeff = a[p] * x[i];
            const Scalar* row = m.left_row(p, i);
            for (std::size_t j = 0; j < m.dim; ++j) out[j].add_mul(coeff, row[j]);
        }
    }
    return out;
}

Vec act_right(const Bimodule& m, const Vec& x, const Vec& b) {
    const FieldSpec& f = m.left->field;
    Vec out = zero_vec(f, m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t p = 0; p < b.size(); ++p) {
            if (b[p].is_zero()) continue;
            Scalar coeff = x[i] * b[p];
            const Scalar* row = m.right_row(i, p);
            for (std::size_t j = 0; j < m.dim; ++j) out[j].add_mul(coeff, row[j]);
        }
    }
    return out;
}

namespace {

// target[*] += coeff * row[*]
inline void axpy(Vec& target, const Scalar& coeff, const Scalar* row) {
    if (coeff.is_zero()) return;
    for (std::size_t k = 0; k < target.size(); ++k) target[k].add_mul(coeff, row[k]);
}

}  // namespace

bool left_unital(const Bimodule& m) {
    if (m.dim == 0) return true;
    Matrix images(m.left->field, m.left->dim * m.dim, m.dim);
    std::size_t r = 0;
    for (std::size_t a = 0; a < m.left->dim; ++a)
        for (std::size_t i = 0; i < m.dim; ++i, ++r) {
            const Scalar* row = m.left_row(a, i);
            for (std::size_t j = 0; j < m.dim; ++j) images.at(r, j) = row[j];
        }
    return rank(images) == m.dim;
}

bool right_unital(const Bimodule& m) {
    if (m.dim == 0) return true;
    Matrix images(m.left->field, m.dim * m.right->dim, m.dim);
    std::size_t r = 0;
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t b = 0; b < m.right->dim; ++b, ++r) {
            const Scalar* row = m.right_row(i, b);
            for (std::size_t j = 0; j < m.dim; ++j) images.at(r, j) = row[j];
        }
    return rank(images) == m.dim;
}

VerificationReport verify_bimodule(const Bimodule& m) {
    check_bimodule_shape(m);
    const FieldSpec& f = m.left->field;
    VerificationReport report;
    const Algebra& A = *m.left;
    const Algebra& B = *m.right;

    ReportSection& la = report.section("left associativity");
    for (std::size_t a = 0; a < A.dim; ++a)
        for (std::size_t b = 0; b < A.dim; ++b)
            for (std::size_t i = 0; i < m.dim; ++i) {
                ++la.checks;
                // (b_a b_b) . m_i  vs  b_a . (b_b . m_i)
                Vec lhs = zero_vec(f, m.dim), rhs = zero_vec(f, m.dim);
                const Scalar* ab = A.product_row(a, b);
                for (std::size_t p = 0; p < A.dim; ++p) axpy(lhs, ab[p], m.left_row(p, i));
                const Scalar* bi = m.left_row(b, i);
                for (std::size_t j = 0; j < m.dim; ++j) axpy(rhs, bi[j], m.left_row(a, j));
                if (lhs != rhs)
                    la.fail("(a=" + std::to_string(a + 1) + ", a'=" + std::to_string(b + 1) +
                            ", m=" + std::to_string(i + 1) + ")");
            }

    ReportSection& ra = report.section("right associativity");
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t a = 0; a < B.dim; ++a)
            for (std::size_t b = 0; b < B.dim; ++b) {
                ++ra.checks;
                // m_i . (b_a b_b)  vs  (m_i . b_a) . b_b
                Vec lhs = zero_vec(f, m.dim), rhs = zero_vec(f, m.dim);
                const Scalar* ab = B.product_row(a, b);
                for (std::size_t p = 0; p < B.dim; ++p) axpy(lhs, ab[p], m.right_row(i, p));
                const Scalar* ia = m.right_row(i, a);
                for (std::size_t j = 0; j < m.dim; ++j) axpy(rhs, ia[j], m.right_row(j, b));
                if (lhs != rhs)
                    ra.fail("(m=" + std::to_string(i + 1) + ", b=" + std::to_string(a + 1) +
                            ", b'=" + std::to_string(b + 1) + ")");
            }

    ReportSection& comm = report.section("commuting actions");
    for (std::size_t a = 0; a < A.dim; ++a)
        for (std::size_t i = 0; i < m.dim; ++i)
            for (std::size_t b = 0; b < B.dim; ++b) {
                ++comm.checks;
                // (b_a . m_i) . b_b  vs  b_a . (m_i . b_b)
                Vec lhs = zero_vec(f, m.dim), rhs = zero_vec(f, m.dim);
                const Scalar* ai = m.left_row(a, i);
                for (std::size_t j = 0; j < m.dim; ++j) axpy(lhs, ai[j], m.right_row(j, b));
                const Scalar* ib = m.right_row(i, b);
                for (std::size_t j = 0; j < m.dim; ++j) axpy(rhs, ib[j], m.left_row(a, j));
                if (lhs != rhs)
                    comm.fail("(a=" + std::to_string(a + 1) + ", m=" + std::to_string(i + 1) +
                              ", b=" + std::to_string(b + 1) + ")");
            }

    report.facts["left_unital"] = left_unital(m) ? "true" : "false";
    report.facts["right_unital"] = right_unital(m) ? "true" : "false";
    return report;
}

BimodulePtr regular_bimodule(const AlgebraPtr& a) {
    auto m = std::make_shared<Bimodule>();
    m->left = a;
    m->right = a;
    m->dim = a->dim;
    m->name = a->name;
    m->left_action = a->mul;
    m->right_action = a->mul;
    return m;
}

BimodulePtr zero_bimodule(const AlgebraPtr& a, const AlgebraPtr& b) {
    if (a->field != b->field) throw FieldMismatch("zero_bimodule: algebras over different fields");
    auto m = std::make_shared<Bimodule>();
    m->left = a;
    m->right = b;
    m->dim = 0;
    m->name = "0";
    return m;
}

BimodulePtr left_module_as_bimodule(const AlgebraPtr& a, std::size_t dim,
                                    std::vector<Scalar> left_action, std::string name) {
    auto m = std::make_shared<Bimodule>();
    m->left = a;
    m->right = std::make_shared<Algebra>(field_algebra(a->field));
    m->dim = dim;
    m->name = std::move(name);
    m->left_action = std::move(left_action);
    m->right_action.assign(dim * dim, Scalar::zero(a->field));
    for (std::size_t i = 0; i < dim; ++i) m->r(i, 0, i) = Scalar::one(a->field);
    check_bimodule_shape(*m);
    return m;
}

BimodulePtr right_module_as_bimodule(const AlgebraPtr& b, std::size_t dim,
                                     std::vector<Scalar> right_action, std::string name) {
    auto m = std::make_shared<Bimodule>();
    m->left = std::make_shared<Algebra>(field_algebra(b->field));
    m->right = b;
    m->dim = dim;
    m->name = std::move(name);
    m->right_action = std::move(right_action);
    m->left_action.assign(dim * dim, Scalar::zero(b->field));
    for (std::size_t i = 0; i < dim; ++i) m->l(0, i, i) = Scalar::one(b->field);
    check_bimodule_shape(*m);
    return m;
}

DirectSumBimodule direct_sum_bimodule(const std::vector<BimodulePtr>& parts, std::string name) {
    if (parts.empty()) throw MalformedInput("direct_sum_bimodule: no summands");
    auto m = std::make_shared<Bimodule>();
    m->left = parts[0]->left;
    m->right = parts[0]->right;
    m->name = std::move(name);
    std::vector<std::size_t> offsets;
    std::size_t total = 0;
    for (const auto& p : parts) {
        if (!(*p->left == *m->left) || !(*p->right == *m->right))
            throw AlgebraMismatch("direct_sum_bimodule: summands over different algebras");
        offsets.push_back(total);
        total += p->dim;
    }
    m->dim = total;
    const FieldSpec& f = m->left->field;
    m->left_action.assign(m->left->dim * total * total, Scalar::zero(f));
    m->right_action.assign(total * m->right->dim * total, Scalar::zero(f));
    for (std::size_t s = 0; s < parts.size(); ++s) {
        const Bimodule& p = *parts[s];
        const std::size_t off = offsets[s];
        for (std::size_t a = 0; a < m->left->dim; ++a)
            for (std::size_t i = 0; i < p.dim; ++i) {
                const Scalar* row = p.left_row(a, i);
                for (std::size_t j = 0; j < p.dim; ++j) m->l(a, off + i, off + j) = row[j];
            }
        for (std::size_t i = 0; i < p.dim; ++i)
            for (std::size_t b = 0; b < m->right->dim; ++b) {
                const Scalar* row = p.right_row(i, b);
                for (std::size_t j = 0; j < p.dim; ++j) m->r(off + i, b, off + j) = row[j];
            }
    }
    return DirectSumBimodule{m, std::move(offsets)};
}

BimoduleQuotient bimodule_quotient(const BimodulePtr& m, const std::vector<Vec>& generators,
                                   std::string name) {
    check_bimodule_shape(*m);
    const FieldSpec& f = m->left->field;
    // closure of the generators under all basis actions
    std::vector<Vec> span = generators;
    Matrix span_matrix = row_span_basis(Matrix::from_rows(f, span, m->dim));
    for (;;) {
        std::vector<Vec> next;
        for (std::size_t r = 0; r < span_matrix.rows(); ++r) {
            Vec v = span_matrix.row(r);
            next.push_back(v);
            for (std::size_t a = 0; a < m->left->dim; ++a)
                next.push_back(act_left(*m, unit_vec(f, m->left->dim, a), v));
            for (std::size_t b = 0; b < m->right->dim; ++b)
                next.push_back(act_right(*m, v, unit_vec(f, m->right->dim, b)));
        }
        Matrix grown = row_span_basis(Matrix::from_rows(f, next, m->dim));
        if (grown.rows() == span_matrix.rows()) break;
        span_matrix = std::move(grown);
    }

    QuotientBasis qb = quotient_basis(span_matrix);
    auto q = std::make_shared<Bimodule>();
    q->left = m->left;
    q->right = m->right;
    q->dim = qb.representatives.size();
    q->name = std::move(name);
    q->left_action.assign(m->left->dim * q->dim * q->dim, Scalar::zero(f));
    q->right_action.assign(q->dim * m->right->dim * q->dim, Scalar::zero(f));
    for (std::size_t x = 0; x < q->dim; ++x) {
        Vec ambient = qb.section.col(x);
        for (std::size_t a = 0; a < m->left->dim; ++a) {
            Vec img = apply_matrix(qb.projection, act_left(*m, unit_vec(f, m->left->dim, a), ambient));
            for (std::size_t j = 0; j < q->dim; ++j) q->l(a, x, j) = img[j];
        }
        for (std::size_t b = 0; b < m->right->dim; ++b) {
            Vec img = apply_matrix(qb.projection, act_right(*m, ambient, unit_vec(f, m->right->dim, b)));
            for (std::size_t j = 0; j < q->dim; ++j) q->r(x, b, j) = img[j];
        }
    }
    return BimoduleQuotient{q, std::move(qb.projection), std::move(qb.section)};
}

BilinearBlockMap zero_block_map(BimodulePtr l, BimodulePtr r, BimodulePtr cod) {
    BilinearBlockMap b;
    b.left_factor = std::move(l);
    b.right_factor = std::move(r);
    b.codomain = std::move(cod);
    b.tensor.assign(b.left_factor->dim * b.right_factor->dim * b.codomain->dim,
                    Scalar::zero(b.left_factor->left->field));
    return b;
}

void check_block_map_shape(const BilinearBlockMap& b) {
    if (!b.left_factor || !b.right_factor || !b.codomain)
        throw MalformedInput("bilinear map: missing factor");
    if (b.tensor.size() != b.left_factor->dim * b.right_factor->dim * b.codomain->dim)
        throw MalformedInput("bilinear map: tensor has wrong size");
}

Vec eval(const BilinearBlockMap& b, const Vec& x, const Vec& y) {
    const FieldSpec& f = b.codomain->left->field;
    Vec out = zero_vec(f, b.codomain->dim);
    for (std::size_t i = 0; i < b.left_factor->dim; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.right_factor->dim; ++j) {
            if (y[j].is_zero()) continue;
            Scalar coeff = x[i] * y[j];
            const Scalar* row = b.row(i, j);
            for (std::size_t k = 0; k < b.codomain->dim; ++k) out[k].add_mul(coeff, row[k]);
        }
    }
    return out;
}

}  // namespace morita
