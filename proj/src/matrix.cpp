#include "dgforge/matrix.hpp"

#include <sstream>

namespace dgforge {

Matrix Matrix::identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (a_[k] != o.a_[k]) return false;
    return true;
}

static void check_dims(bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("matrix dimension mismatch in ") + what);
}

Matrix Matrix::operator+(const Matrix& o) const {
    check_dims(rows_ == o.rows_ && cols_ == o.cols_, "addition");
    Matrix r(field_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    check_dims(rows_ == o.rows_ && cols_ == o.cols_, "subtraction");
    Matrix r(field_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    check_dims(cols_ == o.rows_, "multiplication");
    Matrix r(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
    Matrix r(field_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
    return r;
}

Matrix Matrix::transposed() const {
    Matrix r(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Matrix Matrix::column(std::size_t j) const {
    Matrix r(field_, rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
    return r;
}

void Matrix::set_column(std::size_t j, const Matrix& col) {
    check_dims(col.rows() == rows_ && col.cols() == 1, "set_column");
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = col.at(i, 0);
}

Matrix Matrix::hcat(const Matrix& l, const Matrix& r) {
    check_dims(l.rows() == r.rows(), "hcat");
    Matrix m(l.field(), l.rows(), l.cols() + r.cols());
    for (std::size_t i = 0; i < l.rows(); ++i) {
        for (std::size_t j = 0; j < l.cols(); ++j) m.at(i, j) = l.at(i, j);
        for (std::size_t j = 0; j < r.cols(); ++j) m.at(i, l.cols() + j) = r.at(i, j);
    }
    return m;
}

Matrix Matrix::vcat(const Matrix& t, const Matrix& b) {
    check_dims(t.cols() == b.cols(), "vcat");
    Matrix m(t.field(), t.rows() + b.rows(), t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) {
        for (std::size_t i = 0; i < t.rows(); ++i) m.at(i, j) = t.at(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) m.at(t.rows() + i, j) = b.at(i, j);
    }
    return m;
}

std::string Matrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).str();
        os << (i + 1 == rows_ ? "]" : ";\n");
    }
    if (rows_ == 0) os << "[]";
    return os.str();
}

RowReduceResult row_reduce(const Matrix& m) {
    RowReduceResult res;
    Matrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && a.at(piv, c).is_zero()) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
        Scalar inv = a.at(r, c).inverse();
        for (std::size_t j = c; j < a.cols(); ++j) a.at(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a.at(i, c).is_zero()) continue;
            Scalar f = a.at(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    res.reduced = std::move(a);
    return res;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).rank; }

Matrix kernel_basis(const Matrix& m) {
    RowReduceResult rr = row_reduce(m);
    const Field& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : rr.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix k(f, m.cols(), free_cols.size());
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        std::size_t fc = free_cols[t];
        k.at(fc, t) = Scalar::one(f);
        for (std::size_t r = 0; r < rr.rank; ++r)
            k.at(rr.pivots[r], t) = -rr.reduced.at(r, fc);
    }
    return k;
}

std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& rhs) {
    check_dims(m.rows() == rhs.rows(), "solve_linear");
    RowReduceResult rr = row_reduce(Matrix::hcat(m, rhs));
    // No pivot may fall into the rhs block.
    for (std::size_t c : rr.pivots)
        if (c >= m.cols()) return std::nullopt;
    Matrix x(m.field(), m.cols(), rhs.cols());
    for (std::size_t r = 0; r < rr.rank; ++r)
        for (std::size_t j = 0; j < rhs.cols(); ++j)
            x.at(rr.pivots[r], j) = rr.reduced.at(r, m.cols() + j);
    if (!(m * x == rhs))
        throw ConsistencyError("solve_linear verification failed");
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    return solve_linear(m, Matrix::identity(m.field(), m.rows()));
}

Matrix column_space_basis(const Matrix& m) {
    RowReduceResult rr = row_reduce(m);
    Matrix b(m.field(), m.rows(), rr.rank);
    for (std::size_t t = 0; t < rr.pivots.size(); ++t)
        b.set_column(t, m.column(rr.pivots[t]));
    return b;
}

bool columns_contained(const Matrix& span, const Matrix& probe) {
    return rank(Matrix::hcat(span, probe)) == rank(span);
}

}  // namespace dgforge
