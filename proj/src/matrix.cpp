#include "morita/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace morita {

Vec zero_vec(const FieldSpec& f, std::size_t n) { return Vec(n, Scalar::zero(f)); }

Vec unit_vec(const FieldSpec& f, std::size_t n, std::size_t i) {
    Vec v = zero_vec(f, n);
    v[i] = Scalar::one(f);
    return v;
}

void add_scaled(Vec& target, const Scalar& c, const Vec& v) {
    if (c.is_zero()) return;
    for (std::size_t i = 0; i < target.size(); ++i) target[i].add_mul(c, v[i]);
}

bool is_zero_vec(const Vec& v) {
    for (const Scalar& x : v)
        if (!x.is_zero()) return false;
    return true;
}

std::string vec_str(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

Matrix::Matrix(FieldSpec f, std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), field_(f), entries_(rows * cols, Scalar::zero(f)) {}

Matrix Matrix::identity(const FieldSpec& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_rows(const FieldSpec& f, const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw MalformedInput("row length mismatch");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

Vec Matrix::row(std::size_t i) const {
    Vec v;
    v.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v.push_back(at(i, j));
    return v;
}

Vec Matrix::col(std::size_t j) const {
    Vec v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
    return v;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && entries_ == o.entries_;
}

std::string Matrix::str() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) out << "; ";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) out << " ";
            out << at(i, j).str();
        }
    }
    out << "]";
    return out.str();
}

Matrix mul(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field()) throw FieldMismatch("matrix product over different fields");
    if (a.cols() != b.rows()) throw MalformedInput("matrix product shape mismatch");
    Matrix out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j).add_mul(aik, b.at(k, j));
        }
    return out;
}

Vec apply_matrix(const Matrix& m, const Vec& v) {
    if (v.size() != m.cols()) throw MalformedInput("matrix-vector shape mismatch");
    Vec out = zero_vec(m.field(), m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (v[j].is_zero()) continue;
        for (std::size_t i = 0; i < m.rows(); ++i) out[i].add_mul(m.at(i, j), v[j]);
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.field(), m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
    return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols() || a.field() != b.field()) throw MalformedInput("vstack shape mismatch");
    Matrix out(a.field(), a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
    return out;
}

Echelon rref(Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(sel, j));
        Scalar inv = m.at(row, col).inv();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            Scalar factor = -m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j).add_mul(factor, m.at(row, j));
        }
        pivots.push_back(col);
        ++row;
    }
    return Echelon{std::move(m), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vec> kernel_basis(const Matrix& m) {
    Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v = zero_vec(m.field(), m.cols());
        v[f] = Scalar::one(m.field());
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced.at(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw MalformedInput("solve shape mismatch");
    Matrix aug(a.field(), a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    Echelon e = rref(std::move(aug));
    Vec x = zero_vec(a.field(), a.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == a.cols()) return std::nullopt;  // inconsistent row
        x[e.pivots[i]] = e.reduced.at(i, a.cols());
    }
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw MalformedInput("inverse of non-square matrix");
    std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = Scalar::one(m.field());
    }
    Echelon e = rref(std::move(aug));
    if (e.pivots.size() != n || (n > 0 && e.pivots.back() >= n)) return std::nullopt;
    Matrix out(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = e.reduced.at(i, n + j);
    return out;
}

QuotientBasis quotient_basis(const Matrix& relations) {
    return quotient_from_echelon(rref(relations), relations.cols());
}

QuotientBasis quotient_from_echelon(const Echelon& e, std::size_t c) {
    std::vector<bool> is_pivot(c, false);
    std::vector<std::size_t> pivot_row(c, 0);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        is_pivot[e.pivots[i]] = true;
        pivot_row[e.pivots[i]] = i;
    }
    std::vector<std::size_t> reps;
    std::vector<std::size_t> rep_index(c, 0);
    for (std::size_t j = 0; j < c; ++j) {
        if (is_pivot[j]) continue;
        rep_index[j] = reps.size();
        reps.push_back(j);
    }
    const std::size_t q = reps.size();
    Matrix projection(e.reduced.field(), q, c);
    for (std::size_t j = 0; j < c; ++j) {
        if (!is_pivot[j]) {
            projection.at(rep_index[j], j) = Scalar::one(e.reduced.field());
        } else {
            std::size_t r = pivot_row[j];
            for (std::size_t f = 0; f < q; ++f) projection.at(f, j) = -e.reduced.at(r, reps[f]);
        }
    }
    Matrix section(e.reduced.field(), c, q);
    for (std::size_t f = 0; f < q; ++f) section.at(reps[f], f) = Scalar::one(e.reduced.field());
    return QuotientBasis{std::move(reps), std::move(projection), std::move(section)};
}

RrefAccumulator::RrefAccumulator(FieldSpec f, std::size_t cols) : field_(f), cols_(cols) {}

void RrefAccumulator::add_row(Vec row) {
    if (row.size() != cols_) throw MalformedInput("RrefAccumulator: row length mismatch");
    std::size_t pivot = cols_;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (row[c].is_zero()) continue;
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), c);
        if (it != pivots_.end() && *it == c) {
            const Vec& basis = rows_[static_cast<std::size_t>(it - pivots_.begin())];
            Scalar factor = -row[c];
            for (std::size_t j = c; j < cols_; ++j) row[j].add_mul(factor, basis[j]);
        } else {
            pivot = c;
            break;
        }
    }
    if (pivot == cols_) return;  // row lies in the current span
    Scalar inv = row[pivot].inv();
    for (std::size_t j = pivot; j < cols_; ++j) row[j] *= inv;
    // clear existing pivot columns beyond the new pivot
    for (std::size_t idx = 0; idx < pivots_.size(); ++idx) {
        if (pivots_[idx] <= pivot || row[pivots_[idx]].is_zero()) continue;
        Scalar factor = -row[pivots_[idx]];
        for (std::size_t j = pivots_[idx]; j < cols_; ++j)
            row[j].add_mul(factor, rows_[idx][j]);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r][pivot].is_zero()) continue;
        Scalar factor = -rows_[r][pivot];
        for (std::size_t j = pivot; j < cols_; ++j) rows_[r][j].add_mul(factor, row[j]);
    }
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), pivot);
    const std::size_t pos = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, pivot);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(row));
}

Echelon RrefAccumulator::to_echelon() const {
    return Echelon{Matrix::from_rows(field_, rows_, cols_), pivots_};
}

Matrix row_span_basis(const Matrix& m) {
    Echelon e = rref(m);
    Matrix out(m.field(), e.pivots.size(), m.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = e.reduced.at(i, j);
    return out;
}

Vec coords_in_span(const Echelon& basis, const Vec& v) {
    // rows of basis.reduced are in RREF: coordinates read off at pivot columns
    Vec coords;
    coords.reserve(basis.pivots.size());
    for (std::size_t p : basis.pivots) coords.push_back(v[p]);
    Vec check = v;
    for (std::size_t i = 0; i < basis.pivots.size(); ++i)
        add_scaled(check, -coords[i], basis.reduced.row(i));
    if (!is_zero_vec(check))
        throw InvariantViolated("vector not contained in the expected subspace: " + vec_str(v));
    return coords;
}

}  // namespace morita
