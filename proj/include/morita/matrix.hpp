#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "morita/field.hpp"

namespace morita {

using Vec = std::vector<Scalar>;

Vec zero_vec(const FieldSpec& f, std::size_t n);
Vec unit_vec(const FieldSpec& f, std::size_t n, std::size_t i);
void add_scaled(Vec& target, const Scalar& c, const Vec& v);
bool is_zero_vec(const Vec& v);
std::string vec_str(const Vec& v);

/// Dense matrix over one exact field, row-major. Linear maps act on column
/// coordinate vectors: rows = codomain dimension, cols = domain dimension.
class Matrix {
public:
    Matrix() : Matrix(FieldSpec{}, 0, 0) {}
    Matrix(FieldSpec f, std::size_t rows, std::size_t cols);
    static Matrix identity(const FieldSpec& f, std::size_t n);
    static Matrix from_rows(const FieldSpec& f, const std::vector<Vec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    Scalar& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;

    bool operator==(const Matrix& o) const;

    std::string str() const;

private:
    std::size_t rows_, cols_;
    FieldSpec field_;
    std::vector<Scalar> entries_;
};

Matrix mul(const Matrix& a, const Matrix& b);
Vec apply_matrix(const Matrix& m, const Vec& v);
Matrix transpose(const Matrix& m);
Matrix vstack(const Matrix& a, const Matrix& b);

/// Reduced row echelon form with lex-first pivot selection: columns are
/// scanned left to right, the first row with a nonzero entry is used. This
/// rule makes every downstream canonical basis deterministic.
struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
};
Echelon rref(Matrix m);

std::size_t rank(const Matrix& m);

/// Basis of the right null space, derived from the reduced echelon form and
/// ordered by free column (pivot-lex). Size = cols - rank.
std::vector<Vec> kernel_basis(const Matrix& m);

/// A particular solution of a x = b, if any.
std::optional<Vec> solve(const Matrix& a, const Vec& b);

std::optional<Matrix> inverse(const Matrix& m);

/// Canonical coordinates for the quotient of an ambient space by the row span
/// of `relations`. Representatives are the non-pivot columns (lex-first);
/// projection maps ambient coordinates onto the quotient, section embeds the
/// quotient back, and projection . section = identity.
struct QuotientBasis {
    std::vector<std::size_t> representatives;
    Matrix projection;  // q x c
    Matrix section;     // c x q
};
QuotientBasis quotient_basis(const Matrix& relations);

/// Canonical basis of the row span: the nonzero rows of the RREF.
Matrix row_span_basis(const Matrix& m);

/// Incremental reduced-echelon builder. Feeding rows one at a time yields the
/// same canonical form as rref() of the stacked matrix (the reduced echelon
/// form only depends on the row space), but skips zero and sparse rows
/// cheaply; used where relation systems are large.
class RrefAccumulator {
public:
    RrefAccumulator(FieldSpec f, std::size_t cols);

    void add_row(Vec row);

    std::size_t rank() const { return rows_.size(); }
    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    Echelon to_echelon() const;

private:
    FieldSpec field_;
    std::size_t cols_;
    std::vector<Vec> rows_;              // sorted by pivot column
    std::vector<std::size_t> pivots_;    // pivot column per row
};

/// QuotientBasis of the ambient space by the row space of a reduced echelon.
QuotientBasis quotient_from_echelon(const Echelon& e, std::size_t cols);

/// Coordinates of v in a row_span_basis matrix (rows are RREF). Throws
/// InvariantViolated if v is not in the span.
Vec coords_in_span(const Echelon& basis, const Vec& v);

}  // namespace morita
