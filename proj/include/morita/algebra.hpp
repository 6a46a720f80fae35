#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morita/matrix.hpp"
#include "morita/report.hpp"

namespace morita {

/// A finite-dimensional associative algebra given by structure constants
/// c[i][j][k] (basis product b_i * b_j = sum_k c[i][j][k] b_k), together with
/// a designated complete orthogonal idempotent set E. At this scale a finite
/// complete E forces a two-sided identity, namely the sum over E.
struct Algebra {
    FieldSpec field;
    std::size_t dim = 0;
    std::vector<Scalar> mul;          // dim^3, index (i*dim + j)*dim + k
    std::vector<Vec> idempotents;     // the set E, as coordinate vectors
    std::optional<Vec> identity;      // equals the sum over E when present
    std::string name;

    const Scalar& c(std::size_t i, std::size_t j, std::size_t k) const {
        return mul[(i * dim + j) * dim + k];
    }
    Scalar& c(std::size_t i, std::size_t j, std::size_t k) { return mul[(i * dim + j) * dim + k]; }

    /// Structure constants of b_i * b_j as a length-dim span.
    const Scalar* product_row(std::size_t i, std::size_t j) const {
        return mul.data() + (i * dim + j) * dim;
    }

    bool operator==(const Algebra& o) const {
        return field == o.field && dim == o.dim && mul == o.mul && idempotents == o.idempotents &&
               identity == o.identity;
    }
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Throws MalformedInput if tensors and element vectors have wrong sizes.
void check_algebra_shape(const Algebra& a);

Vec multiply(const Algebra& a, const Vec& x, const Vec& y);
Matrix left_mul_matrix(const Algebra& a, const Vec& x);   // y -> x*y
Matrix right_mul_matrix(const Algebra& a, const Vec& x);  // y -> y*x

/// Checks associativity on all basis triples, idempotence and pairwise
/// orthogonality of E, and that the sum over E is a two-sided identity.
VerificationReport verify_algebra(const Algebra& a);

/// The unique two-sided identity, if the defining linear system is solvable.
std::optional<Vec> find_identity(const Algebra& a);

/// M_k(f) on the matrix-unit basis e_ab (index a*k+b), E = {e_11, ..., e_kk}.
Algebra matrix_algebra(const FieldSpec& f, std::size_t k);

/// The field itself as a one-dimensional algebra.
Algebra field_algebra(const FieldSpec& f);

/// The zero algebra (dim 0); a legal degenerate block.
Algebra zero_algebra(const FieldSpec& f);

/// Block-diagonal direct sum; E is the union of the summands' sets.
Algebra direct_sum(const Algebra& a, const Algebra& b);

/// The same algebra under the basis change with columns of p as the new basis
/// (expressed in old coordinates). Idempotents and identity are transported.
Algebra transported_algebra(const Algebra& a, const Matrix& p);

/// The corner e*a*e on the canonical (echelon) basis of its span, with e as
/// identity. `embedding` has the corner basis vectors as columns.
struct CornerAlgebra {
    Algebra algebra;
    Matrix embedding;  // dim(a) x corner_dim
    Echelon basis;     // echelon of the corner span, for coordinate reading
};
CornerAlgebra corner_subalgebra(const Algebra& a, const Vec& e);

/// Canonical echelon basis of the subspace e*a*f = span{ e * b_i * f }.
Echelon corner_span(const Algebra& a, const Vec& e, const Vec& f);

}  // namespace morita
