#include "morita/algebra.hpp"

#include <sstream>

namespace morita {

void check_algebra_shape(const Algebra& a) {
    if (a.mul.size() != a.dim * a.dim * a.dim)
        throw MalformedInput("algebra '" + a.name + "': multiplication tensor has " +
                             std::to_string(a.mul.size()) + " entries, expected dim^3");
    for (const Scalar& s : a.mul)
        if (s.field() != a.field) throw FieldMismatch("algebra '" + a.name + "': mixed-field entries");
    for (const Vec& e : a.idempotents)
        if (e.size() != a.dim)
            throw MalformedInput("algebra '" + a.name + "': idempotent vector of wrong length");
    if (a.identity && a.identity->size() != a.dim)
        throw MalformedInput("algebra '" + a.name + "': identity vector of wrong length");
}

Vec multiply(const Algebra& a, const Vec& x, const Vec& y) {
    if (x.size() != a.dim || y.size() != a.dim) throw MalformedInput("element length mismatch");
    Vec out = zero_vec(a.field, a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < a.dim; ++j) {
            if (y[j].is_zero()) continue;
            Scalar coeff = x[i] * y[j];
            const Scalar* row = a.product_row(i, j);
            for (std::size_t k = 0; k < a.dim; ++k) out[k].add_mul(coeff, row[k]);
        }
    }
    return out;
}

Matrix left_mul_matrix(const Algebra& a, const Vec& x) {
    Matrix m(a.field, a.dim, a.dim);
    for (std::size_t j = 0; j < a.dim; ++j) {
        Vec out = multiply(a, x, unit_vec(a.field, a.dim, j));
        for (std::size_t k = 0; k < a.dim; ++k) m.at(k, j) = out[k];
    }
    return m;
}

Matrix right_mul_matrix(const Algebra& a, const Vec& x) {
    Matrix m(a.field, a.dim, a.dim);
    for (std::size_t j = 0; j < a.dim; ++j) {
        Vec out = multiply(a, unit_vec(a.field, a.dim, j), x);
        for (std::size_t k = 0; k < a.dim; ++k) m.at(k, j) = out[k];
    }
    return m;
}

VerificationReport verify_algebra(const Algebra& a) {
    check_algebra_shape(a);
    VerificationReport report;

    ReportSection& assoc = report.section("associativity");
    Vec lhs = zero_vec(a.field, a.dim), rhs = zero_vec(a.field, a.dim);
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < a.dim; ++k) {
                ++assoc.checks;
                for (std::size_t m = 0; m < a.dim; ++m) {
                    lhs[m] = Scalar::zero(a.field);
                    rhs[m] = Scalar::zero(a.field);
                }
                // (b_i b_j) b_k vs b_i (b_j b_k)
                const Scalar* ij = a.product_row(i, j);
                for (std::size_t m = 0; m < a.dim; ++m) {
                    if (ij[m].is_zero()) continue;
                    const Scalar* mk = a.product_row(m, k);
                    for (std::size_t t = 0; t < a.dim; ++t) lhs[t].add_mul(ij[m], mk[t]);
                }
                const Scalar* jk = a.product_row(j, k);
                for (std::size_t m = 0; m < a.dim; ++m) {
                    if (jk[m].is_zero()) continue;
                    const Scalar* im = a.product_row(i, m);
                    for (std::size_t t = 0; t < a.dim; ++t) rhs[t].add_mul(jk[m], im[t]);
                }
                if (lhs != rhs) {
                    std::ostringstream w;
                    w << "(i=" << i + 1 << ", j=" << j + 1 << ", k=" << k + 1 << "): (b_i b_j) b_k = "
                      << vec_str(lhs) << " but b_i (b_j b_k) = " << vec_str(rhs);
                    assoc.fail(w.str());
                }
            }

    ReportSection& idem = report.section("idempotents");
    for (std::size_t n = 0; n < a.idempotents.size(); ++n) {
        ++idem.checks;
        Vec sq = multiply(a, a.idempotents[n], a.idempotents[n]);
        if (sq != a.idempotents[n])
            idem.fail("E[" + std::to_string(n + 1) + "] is not idempotent: e*e = " + vec_str(sq));
    }

    ReportSection& orth = report.section("orthogonality");
    for (std::size_t m = 0; m < a.idempotents.size(); ++m)
        for (std::size_t n = 0; n < a.idempotents.size(); ++n) {
            if (m == n) continue;
            ++orth.checks;
            Vec prod = multiply(a, a.idempotents[m], a.idempotents[n]);
            if (!is_zero_vec(prod))
                orth.fail("E[" + std::to_string(m + 1) + "]*E[" + std::to_string(n + 1) +
                          "] = " + vec_str(prod) + " != 0");
        }

    ReportSection& complete = report.section("completeness");
    Vec sum = zero_vec(a.field, a.dim);
    for (const Vec& e : a.idempotents)
        for (std::size_t k = 0; k < a.dim; ++k) sum[k] += e[k];
    for (std::size_t j = 0; j < a.dim; ++j) {
        ++complete.checks;
        Vec bj = unit_vec(a.field, a.dim, j);
        if (multiply(a, sum, bj) != bj)
            complete.fail("sum(E) * b_" + std::to_string(j + 1) + " != b_" + std::to_string(j + 1));
        if (multiply(a, bj, sum) != bj)
            complete.fail("b_" + std::to_string(j + 1) + " * sum(E) != b_" + std::to_string(j + 1));
    }
    report.facts["sum_of_idempotents_is_identity"] = complete.passed() ? "true" : "false";

    if (a.identity) {
        ReportSection& ident = report.section("declared identity");
        ++ident.checks;
        if (*a.identity != sum)
            ident.fail("declared identity " + vec_str(*a.identity) + " differs from sum(E) " +
                       vec_str(sum));
    }
    return report;
}

std::optional<Vec> find_identity(const Algebra& a) {
    check_algebra_shape(a);
    if (a.dim == 0) return Vec{};
    // x * b_j = b_j and b_j * x = b_j for all j, as linear equations in x
    Matrix system(a.field, 2 * a.dim * a.dim, a.dim);
    Vec target = zero_vec(a.field, 2 * a.dim * a.dim);
    std::size_t row = 0;
    for (std::size_t j = 0; j < a.dim; ++j)
        for (std::size_t k = 0; k < a.dim; ++k, ++row) {
            for (std::size_t i = 0; i < a.dim; ++i) system.at(row, i) = a.c(i, j, k);
            if (j == k) target[row] = Scalar::one(a.field);
        }
    for (std::size_t j = 0; j < a.dim; ++j)
        for (std::size_t k = 0; k < a.dim; ++k, ++row) {
            for (std::size_t i = 0; i < a.dim; ++i) system.at(row, i) = a.c(j, i, k);
            if (j == k) target[row] = Scalar::one(a.field);
        }
    return solve(system, target);
}

Algebra matrix_algebra(const FieldSpec& f, std::size_t k) {
    if (k == 0) throw MalformedInput("matrix_algebra: k = 0");
    Algebra a;
    a.field = f;
    a.dim = k * k;
    a.name = "M" + std::to_string(k);
    a.mul.assign(a.dim * a.dim * a.dim, Scalar::zero(f));
    // e_ab * e_cd = delta_bc e_ad
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q)
            for (std::size_t r = 0; r < k; ++r)
                a.c(p * k + q, q * k + r, p * k + r) = Scalar::one(f);
    for (std::size_t p = 0; p < k; ++p) a.idempotents.push_back(unit_vec(f, a.dim, p * k + p));
    Vec id = zero_vec(f, a.dim);
    for (std::size_t p = 0; p < k; ++p) id[p * k + p] = Scalar::one(f);
    a.identity = id;
    return a;
}

Algebra field_algebra(const FieldSpec& f) {
    Algebra a;
    a.field = f;
    a.dim = 1;
    a.name = "k";
    a.mul = {Scalar::one(f)};
    a.idempotents = {Vec{Scalar::one(f)}};
    a.identity = Vec{Scalar::one(f)};
    return a;
}

Algebra zero_algebra(const FieldSpec& f) {
    Algebra a;
    a.field = f;
    a.dim = 0;
    a.name = "0";
    a.identity = Vec{};
    return a;
}

Algebra direct_sum(const Algebra& x, const Algebra& y) {
    if (x.field != y.field) throw FieldMismatch("direct sum over different fields");
    Algebra a;
    a.field = x.field;
    a.dim = x.dim + y.dim;
    a.name = x.name + "+" + y.name;
    a.mul.assign(a.dim * a.dim * a.dim, Scalar::zero(a.field));
    for (std::size_t i = 0; i < x.dim; ++i)
        for (std::size_t j = 0; j < x.dim; ++j)
            for (std::size_t k = 0; k < x.dim; ++k) a.c(i, j, k) = x.c(i, j, k);
    for (std::size_t i = 0; i < y.dim; ++i)
        for (std::size_t j = 0; j < y.dim; ++j)
            for (std::size_t k = 0; k < y.dim; ++k)
                a.c(x.dim + i, x.dim + j, x.dim + k) = y.c(i, j, k);
    auto extend = [&](const Vec& v, std::size_t off) {
        Vec out = zero_vec(a.field, a.dim);
        for (std::size_t i = 0; i < v.size(); ++i) out[off + i] = v[i];
        return out;
    };
    for (const Vec& e : x.idempotents) a.idempotents.push_back(extend(e, 0));
    for (const Vec& e : y.idempotents) a.idempotents.push_back(extend(e, x.dim));
    if (x.identity && y.identity) {
        Vec id = extend(*x.identity, 0);
        Vec idy = extend(*y.identity, x.dim);
        for (std::size_t i = 0; i < a.dim; ++i) id[i] += idy[i];
        a.identity = id;
    }
    return a;
}

Algebra transported_algebra(const Algebra& a, const Matrix& p) {
    if (p.rows() != a.dim || p.cols() != a.dim) throw MalformedInput("basis change shape mismatch");
    auto pinv = inverse(p);
    if (!pinv) throw MalformedInput("basis change matrix is singular");
    Algebra out;
    out.field = a.field;
    out.dim = a.dim;
    out.name = a.name + "'";
    out.mul.assign(a.dim * a.dim * a.dim, Scalar::zero(a.field));
    std::vector<Vec> new_basis;
    for (std::size_t i = 0; i < a.dim; ++i) new_basis.push_back(p.col(i));
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j) {
            Vec prod = apply_matrix(*pinv, multiply(a, new_basis[i], new_basis[j]));
            for (std::size_t k = 0; k < a.dim; ++k) out.c(i, j, k) = prod[k];
        }
    for (const Vec& e : a.idempotents) out.idempotents.push_back(apply_matrix(*pinv, e));
    if (a.identity) out.identity = apply_matrix(*pinv, *a.identity);
    return out;
}

Echelon corner_span(const Algebra& a, const Vec& e, const Vec& f) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < a.dim; ++i)
        rows.push_back(multiply(a, multiply(a, e, unit_vec(a.field, a.dim, i)), f));
    return rref(Matrix::from_rows(a.field, rows, a.dim));
}

CornerAlgebra corner_subalgebra(const Algebra& a, const Vec& e) {
    check_algebra_shape(a);
    if (multiply(a, e, e) != e)
        throw NotIdempotent("corner_subalgebra: e*e != e for e = " + vec_str(e));
    Echelon basis = corner_span(a, e, e);
    const std::size_t m = basis.pivots.size();
    Algebra corner;
    corner.field = a.field;
    corner.dim = m;
    corner.name = a.name + "_corner";
    corner.mul.assign(m * m * m, Scalar::zero(a.field));
    Matrix embedding(a.field, a.dim, m);
    std::vector<Vec> basis_vecs;
    for (std::size_t i = 0; i < m; ++i) {
        Vec v = basis.reduced.row(i);
        basis_vecs.push_back(v);
        for (std::size_t r = 0; r < a.dim; ++r) embedding.at(r, i) = v[r];
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Vec prod = coords_in_span(basis, multiply(a, basis_vecs[i], basis_vecs[j]));
            for (std::size_t k = 0; k < m; ++k) corner.c(i, j, k) = prod[k];
        }
    Vec e_coords = coords_in_span(basis, e);
    corner.idempotents = {e_coords};
    corner.identity = e_coords;
    if (m == 0) {
        corner.idempotents.clear();
        corner.identity = Vec{};
    }
    return CornerAlgebra{std::move(corner), std::move(embedding), std::move(basis)};
}

}  // namespace morita
