#include "ppm/lattice.hpp"

#include <numeric>

namespace ppm {

namespace {

long val(const ExactScalar& x, std::uint64_t p) { return vp(x, p).value(); }

/// Representative of x modulo p^e Z_p inside Z[1/p] ∩ [0, p^e).
ExactScalar canonical_residue(const ExactScalar& x, long e, std::uint64_t p) {
    if (x == 0) return 0;
    long t = std::max<long>(0, -val(x, p));  // x * p^t is p-integral
    if (e + t <= 0) return 0;
    BigInt modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), p, static_cast<unsigned long>(e + t));
    BigInt r = residue(x * p_power(p, t), modulus);
    return ExactScalar(r) * p_power(p, -t);
}

void subtract_column_multiple(QMatrix& m, std::size_t target, std::size_t source, const ExactScalar& factor,
                              std::size_t last_row) {
    for (std::size_t i = 0; i <= last_row; ++i) {
        if (m(i, source) != 0) m(i, target) -= factor * m(i, source);
    }
}

}  // namespace

QMatrix hermite_form(const QMatrix& generators, std::uint64_t p) {
    const std::size_t n = generators.rows();
    QMatrix g = generators;
    std::vector<bool> used(g.cols(), false);
    std::vector<std::size_t> pivot_col(n);

    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t row = n - 1 - step;
        std::size_t best = g.cols();
        long best_val = 0;
        for (std::size_t c = 0; c < g.cols(); ++c) {
            if (used[c] || g(row, c) == 0) continue;
            long v = val(g(row, c), p);
            if (best == g.cols() || v < best_val) {
                best = c;
                best_val = v;
            }
        }
        if (best == g.cols()) throw Error(ErrorKind::InvalidArgument, "generators do not span a full-rank lattice");
        used[best] = true;
        pivot_col[row] = best;
        ExactScalar pivot = g(row, best);
        for (std::size_t c = 0; c < g.cols(); ++c) {
            if (used[c] || g(row, c) == 0) continue;
            ExactScalar f = g(row, c) / pivot;
            subtract_column_multiple(g, c, best, f, row);
        }
        // Scale the pivot column by a unit so the pivot becomes p^{best_val}.
        ExactScalar unit = p_power(p, best_val) / pivot;
        for (std::size_t i = 0; i <= row; ++i) g(i, best) *= unit;
    }

    QMatrix h(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) h(i, j) = g(i, pivot_col[j]);

    std::vector<long> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = val(h(i, i), p);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t ii = j; ii-- > 0;) {
            ExactScalar rep = canonical_residue(h(ii, j), e[ii], p);
            if (rep == h(ii, j)) continue;
            ExactScalar f = (h(ii, j) - rep) / h(ii, ii);
            subtract_column_multiple(h, j, ii, f, ii);
            h(ii, j) = rep;
        }
    }
    return h;
}

Lattice Lattice::from_generators(const PContext& ctx, const QMatrix& generators) {
    return Lattice(ctx, hermite_form(generators, ctx.p()));
}

Lattice Lattice::standard(const PContext& ctx, std::size_t n) { return Lattice(ctx, QMatrix::identity(n)); }

Lattice Lattice::diagonal(const PContext& ctx, const std::vector<long>& exponents) {
    std::vector<ExactScalar> d;
    for (long e : exponents) d.push_back(p_power(ctx.p(), e));
    return Lattice(ctx, QMatrix::diagonal(d));
}

std::vector<long> Lattice::exponents() const {
    std::vector<long> e(dim());
    for (std::size_t i = 0; i < dim(); ++i) e[i] = val(basis_(i, i), ctx_.p());
    return e;
}

long Lattice::log_covolume() const {
    auto e = exponents();
    return std::accumulate(e.begin(), e.end(), 0L);
}

bool Lattice::contains(const QMatrix& vectors) const {
    // Coordinates in the basis must be p-integral; back-substitute the triangular system.
    const std::size_t n = dim();
    if (vectors.rows() != n) throw Error(ErrorKind::InvalidArgument, "dimension mismatch in contains");
    for (std::size_t c = 0; c < vectors.cols(); ++c) {
        std::vector<ExactScalar> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = vectors(i, c);
        for (std::size_t ii = n; ii-- > 0;) {
            ExactScalar coord = v[ii] / basis_(ii, ii);
            if (!is_p_integral(coord, ctx_.p())) return false;
            if (coord == 0) continue;
            for (std::size_t r = 0; r <= ii; ++r) v[r] -= coord * basis_(r, ii);
        }
    }
    return true;
}

bool Lattice::contains(const Lattice& other) const { return contains(other.basis()); }

Lattice Lattice::dual() const { return from_generators(ctx_, inverse(basis_).transpose()); }

Lattice Lattice::scaled(long e) const { return from_generators(ctx_, p_power(ctx_.p(), e) * basis_); }

namespace {
void require_compatible(const Lattice& a, const Lattice& b) {
    if (a.ctx().p() != b.ctx().p())
        throw Error(ErrorKind::InvalidArgument, "lattices over different primes");
    if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidArgument, "lattices of different dimension");
}
}  // namespace

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    require_compatible(a, b);
    return Lattice::from_generators(a.ctx(), a.basis().concat(b.basis()));
}

Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
    require_compatible(a, b);
    return lattice_sum(a.dual(), b.dual()).dual();
}

long lattice_index(const Lattice& big, const Lattice& small) {
    require_compatible(big, small);
    if (!big.contains(small)) throw Error(ErrorKind::NotNested, "second lattice is not contained in the first");
    return small.log_covolume() - big.log_covolume();
}

Lattice apply(const QMatrix& a, const Lattice& lattice) {
    if (!a.is_square() || a.rows() != lattice.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch in apply");
    if (determinant(a) == 0) throw Error(ErrorKind::Singular, "cannot apply a singular matrix to a lattice");
    return Lattice::from_generators(lattice.ctx(), a * lattice.basis());
}

LocalSmithForm local_smith_form(const QMatrix& m, std::uint64_t p) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "smith form of a non-square matrix");
    const std::size_t n = m.rows();
    QMatrix d = m;
    QMatrix left = QMatrix::identity(n);   // invariant: m = left * d * right
    QMatrix right = QMatrix::identity(n);
    LocalSmithForm out;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = n, pc = n;
        long best = 0;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (d(i, j) == 0) continue;
                long v = val(d(i, j), p);
                if (pr == n || v < best) {
                    pr = i;
                    pc = j;
                    best = v;
                }
            }
        if (pr == n) throw Error(ErrorKind::Singular, "smith form of a singular matrix");
        // Row swap k <-> pr in d is compensated by a column swap in left.
        for (std::size_t j = 0; j < n; ++j) std::swap(d(k, j), d(pr, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(left(i, k), left(i, pr));
        for (std::size_t i = 0; i < n; ++i) std::swap(d(i, k), d(i, pc));
        for (std::size_t j = 0; j < n; ++j) std::swap(right(k, j), right(pc, j));

        const ExactScalar pivot = d(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (d(i, k) == 0) continue;
            ExactScalar f = d(i, k) / pivot;  // p-integral by minimality
            for (std::size_t j = k; j < n; ++j) d(i, j) -= f * d(k, j);
            for (std::size_t r = 0; r < n; ++r) left(r, k) += f * left(r, i);
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (d(k, j) == 0) continue;
            ExactScalar f = d(k, j) / pivot;
            d(k, j) = 0;
            for (std::size_t c = 0; c < n; ++c) right(k, c) += f * right(j, c);
        }
        // Normalize the pivot to p^best; absorb the unit into left.
        ExactScalar unit = pivot / p_power(p, best);
        d(k, k) = p_power(p, best);
        for (std::size_t r = 0; r < n; ++r) left(r, k) *= unit;
        out.exponents.push_back(best);
    }
    out.left = std::move(left);
    out.right = std::move(right);
    return out;
}

std::vector<long> elementary_divisors(const Lattice& reference, const Lattice& lattice) {
    require_compatible(reference, lattice);
    return local_smith_form(inverse(reference.basis()) * lattice.basis(), reference.ctx().p()).exponents;
}

}  // namespace ppm
