#include "ppm/matrix.hpp"

#include <algorithm>
#include <ostream>

namespace ppm {

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<ExactScalar> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) throw Error(ErrorKind::InvalidArgument, "matrix entry count mismatch");
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::diagonal(const std::vector<ExactScalar>& diag) {
    QMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

QMatrix QMatrix::block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const {
    if (row0 + rows > rows_ || col0 + cols > cols_) throw Error(ErrorKind::InvalidArgument, "block out of range");
    QMatrix b(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

QMatrix QMatrix::concat(const QMatrix& other) const {
    if (rows_ != other.rows_) throw Error(ErrorKind::InvalidArgument, "row count mismatch in concat");
    QMatrix c(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < other.cols_; ++j) c(i, cols_ + j) = other(i, j);
    }
    return c;
}

bool QMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const ExactScalar& x) { return x == 0; });
}

bool QMatrix::is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::InvalidArgument, "shape mismatch in +");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::InvalidArgument, "shape mismatch in -");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidArgument, "shape mismatch in *");
    QMatrix c(a.rows_, b.cols_);
    ExactScalar t;
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const ExactScalar& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                if (b(k, j) == 0) continue;
                t = aik * b(k, j);
                c(i, j) += t;
            }
        }
    }
    return c;
}

QMatrix operator*(const ExactScalar& s, const QMatrix& a) {
    QMatrix c = a;
    for (auto& x : c.data_) x *= s;
    return c;
}

std::ostream& operator<<(std::ostream& os, const QMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

namespace {

/// Gauss-Jordan to reduced row echelon form; returns pivot columns.
std::vector<std::size_t> row_reduce(QMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pr = row;
        while (pr < m.rows() && m(pr, col) == 0) ++pr;
        if (pr == m.rows()) continue;
        if (pr != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pr, j), m(row, j));
        ExactScalar inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            ExactScalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

ExactScalar determinant(const QMatrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
    QMatrix m = a;
    const std::size_t n = m.rows();
    ExactScalar det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = col;
        while (pr < n && m(pr, col) == 0) ++pr;
        if (pr == n) return 0;
        if (pr != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(pr, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            ExactScalar f = m(i, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

QMatrix inverse(const QMatrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    const std::size_t n = a.rows();
    QMatrix aug = a.concat(QMatrix::identity(n));
    auto pivots = row_reduce(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw Error(ErrorKind::Singular, "matrix is singular");
    return aug.block(0, n, n, n);
}

std::size_t rank(const QMatrix& a) {
    QMatrix m = a;
    return row_reduce(m).size();
}

QMatrix kernel(const QMatrix& a) {
    QMatrix m = a;
    auto pivots = row_reduce(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    QMatrix basis(a.cols(), free_cols.size());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        basis(free_cols[f], f) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], f) = -m(r, free_cols[f]);
    }
    return basis;
}

QMatrix power(const QMatrix& a, long e) {
    if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "power of a non-square matrix");
    QMatrix base = e < 0 ? inverse(a) : a;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    QMatrix result = QMatrix::identity(a.rows());
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

Polynomial char_poly(const QMatrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    // Berkowitz: v holds coefficients, highest degree first, of the char poly
    // of the leading r x r principal submatrix.
    std::vector<ExactScalar> v{ExactScalar(1)};
    for (std::size_t r = 0; r < n; ++r) {
        // Partition the (r+1) x (r+1) leading block as [[A_r, C], [R, a_rr]].
        // Toeplitz column: 1, -a_rr, -R C, -R A_r C, ..., -R A_r^{r-1} C.
        std::vector<ExactScalar> col(r + 2);
        col[0] = 1;
        col[1] = -a(r, r);
        std::vector<ExactScalar> w(r);
        for (std::size_t i = 0; i < r; ++i) w[i] = a(i, r);
        for (std::size_t j = 2; j < r + 2; ++j) {
            ExactScalar s = 0;
            for (std::size_t i = 0; i < r; ++i) s += a(r, i) * w[i];
            col[j] = -s;
            std::vector<ExactScalar> next(r);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t l = 0; l < r; ++l) next[i] += a(i, l) * w[l];
            w = std::move(next);
        }
        std::vector<ExactScalar> out(r + 2);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= i && j < v.size(); ++j) out[i] += col[i - j] * v[j];
        v = std::move(out);
    }
    Polynomial poly(v.rbegin(), v.rend());
    return poly;
}

std::size_t NewtonPolygon::degree() const {
    std::size_t d = infinite_slopes;
    for (const auto& s : slopes) d += s.multiplicity;
    return d;
}

ExactScalar NewtonPolygon::total_valuation() const {
    ExactScalar t = 0;
    for (const auto& s : slopes) t += s.valuation * static_cast<unsigned long>(s.multiplicity);
    return t;
}

bool NewtonPolygon::all_zero() const {
    return infinite_slopes == 0 &&
           std::all_of(slopes.begin(), slopes.end(), [](const Slope& s) { return s.valuation == 0; });
}

NewtonPolygon newton_polygon(const Polynomial& poly, const PContext& ctx) {
    NewtonPolygon np;
    if (poly.empty() || poly.back() == 0) throw Error(ErrorKind::InvalidArgument, "newton polygon of a zero polynomial");
    std::size_t start = 0;
    while (poly[start] == 0) ++start;
    np.infinite_slopes = start;

    struct Point {
        long x;
        ExactScalar y;
    };
    std::vector<Point> hull;
    for (std::size_t i = start; i < poly.size(); ++i) {
        if (poly[i] == 0) continue;
        Point pt{static_cast<long>(i), ExactScalar(vp(poly[i], ctx).value())};
        // Lower convex hull: drop the last point while it lies on or above the chord.
        while (hull.size() >= 2) {
            const Point& a = hull[hull.size() - 2];
            const Point& b = hull.back();
            ExactScalar cross = (b.y - a.y) * (pt.x - a.x) - (pt.y - a.y) * (b.x - a.x);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    // Hull slopes increase left to right; root valuations are their negatives,
    // so walk the hull backwards to list valuations in increasing order.
    for (std::size_t i = hull.size() - 1; i >= 1; --i) {
        const Point& a = hull[i - 1];
        const Point& b = hull[i];
        ExactScalar slope = (b.y - a.y) / ExactScalar(b.x - a.x);
        np.slopes.push_back(Slope{-slope, static_cast<std::size_t>(b.x - a.x)});
    }
    return np;
}

}  // namespace ppm
