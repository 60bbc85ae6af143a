#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ppm/scalar.hpp"

namespace ppm {

/// Dense exact rational matrix, row-major. Square in every public contract;
/// rectangular shapes appear only as generator stacks inside lattice code.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);
    explicit QMatrix(std::size_t n) : QMatrix(n, n) {}
    QMatrix(std::size_t rows, std::size_t cols, std::vector<ExactScalar> entries);

    static QMatrix identity(std::size_t n);
    static QMatrix diagonal(const std::vector<ExactScalar>& diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    ExactScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const ExactScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QMatrix transpose() const;
    QMatrix block(std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols) const;
    /// Columns [col0, col0 + count).
    QMatrix columns(std::size_t col0, std::size_t count) const { return block(0, col0, rows_, count); }
    /// Horizontal concatenation [this | other].
    QMatrix concat(const QMatrix& other) const;

    bool is_zero() const;
    bool is_identity() const;

    friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator*(const ExactScalar& s, const QMatrix& a);
    friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExactScalar> data_;
};

std::ostream& operator<<(std::ostream& os, const QMatrix& m);

ExactScalar determinant(const QMatrix& a);
/// Throws Singular when det a = 0.
QMatrix inverse(const QMatrix& a);
std::size_t rank(const QMatrix& a);
/// Basis of the right null space, one column per basis vector (reduced echelon form).
QMatrix kernel(const QMatrix& a);
/// a^e; negative e inverts first.
QMatrix power(const QMatrix& a, long e);

/// Polynomial coefficients, lowest degree first.
using Polynomial = std::vector<ExactScalar>;

/// Monic characteristic polynomial det(xI - A), by Berkowitz's division-free recurrence.
Polynomial char_poly(const QMatrix& a);

/// One edge of a Newton polygon: the root valuation and how many roots share it.
struct Slope {
    ExactScalar valuation;
    std::size_t multiplicity;
    friend bool operator==(const Slope&, const Slope&) = default;
};

/// Root valuations of a polynomial over an algebraic closure of Q_p.
/// Slopes are already negated hull slopes, so they ARE the root valuations,
/// listed in increasing order. Zero roots are counted separately.
struct NewtonPolygon {
    std::vector<Slope> slopes;
    std::size_t infinite_slopes = 0;

    std::size_t degree() const;
    /// Sum of valuation times multiplicity over finite slopes.
    ExactScalar total_valuation() const;
    bool all_zero() const;
    friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

NewtonPolygon newton_polygon(const Polynomial& poly, const PContext& ctx);

}  // namespace ppm
