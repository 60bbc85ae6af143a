#pragma once

#include <vector>

#include "ppm/matrix.hpp"

namespace ppm {

/// A full-rank Z_p-lattice in Q_p^n, i.e. a compact open subgroup of the
/// additive group. Stored in canonical p-adic Hermite form: the basis columns
/// are upper triangular, column i has diagonal entry p^{e_i}, and each entry
/// above the diagonal in row i is the unique element of Z[1/p] ∩ [0, p^{e_i})
/// in its class modulo p^{e_i} Z_p. Equality is entry-wise equality of bases.
class Lattice {
public:
    /// Lattice spanned by the columns of an n x m generator matrix (must have rank n).
    static Lattice from_generators(const PContext& ctx, const QMatrix& generators);
    static Lattice standard(const PContext& ctx, std::size_t n);
    /// p^{e_1} Z_p ⊕ ... ⊕ p^{e_n} Z_p.
    static Lattice diagonal(const PContext& ctx, const std::vector<long>& exponents);

    const PContext& ctx() const { return ctx_; }
    std::size_t dim() const { return basis_.rows(); }
    const QMatrix& basis() const { return basis_; }
    /// Diagonal exponents e_i of the canonical basis.
    std::vector<long> exponents() const;
    /// v_p(det basis) = sum of the diagonal exponents.
    long log_covolume() const;

    bool contains(const QMatrix& vectors) const;
    bool contains(const Lattice& other) const;
    Lattice dual() const;
    Lattice scaled(long e) const;

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.ctx_.p() == b.ctx_.p() && a.basis_ == b.basis_; }

private:
    Lattice(PContext ctx, QMatrix basis) : ctx_(ctx), basis_(std::move(basis)) {}
    PContext ctx_;
    QMatrix basis_;
};

/// Canonical Hermite basis of the Z_p-span of the columns of `generators`.
/// Throws InvalidArgument when the columns do not span Q_p^n.
QMatrix hermite_form(const QMatrix& generators, std::uint64_t p);

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersect(const Lattice& a, const Lattice& b);
/// e with [big : small] = p^e. Throws NotNested unless small ⊆ big.
long lattice_index(const Lattice& big, const Lattice& small);
/// Lattice spanned by A applied to the basis. Throws Singular when det A = 0.
Lattice apply(const QMatrix& a, const Lattice& lattice);

/// Smith form of an invertible matrix over the local ring Z_(p):
/// m = left * diag(p^{e_i}) * right with left, right in GL_n(Z_(p)).
struct LocalSmithForm {
    std::vector<long> exponents;  // increasing
    QMatrix left;
    QMatrix right;
};
LocalSmithForm local_smith_form(const QMatrix& m, std::uint64_t p);

/// Exponents e_1 <= ... <= e_n aligning `lattice` with diag(p^{e_i}) * `reference`.
std::vector<long> elementary_divisors(const Lattice& reference, const Lattice& lattice);

}  // namespace ppm
