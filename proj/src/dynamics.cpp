#include "ppm/dynamics.hpp"

#include <algorithm>

namespace ppm {

GeneratorSet::GeneratorSet(const PContext& ctx, std::vector<QMatrix> gens) : ctx_(ctx), n_(0), gens_(std::move(gens)) {
    if (gens_.empty()) throw Error(ErrorKind::InvalidArgument, "generator set is empty");
    n_ = gens_.front().rows();
    for (const auto& g : gens_) {
        if (!g.is_square() || g.rows() != n_) throw Error(ErrorKind::InvalidArgument, "generators must be square of equal size");
        inverses_.push_back(inverse(g));  // throws Singular
    }
}

std::string Word::to_string() const {
    if (letters.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) s += '*';
        s += 'g' + std::to_string(letters[i].generator + 1);
        if (letters[i].inverted) s += "^-1";
    }
    return s;
}

QMatrix Word::evaluate(const GeneratorSet& g) const {
    QMatrix m = QMatrix::identity(g.dim());
    for (const auto& l : letters) m = m * (l.inverted ? g.inverses()[l.generator] : g.gens()[l.generator]);
    return m;
}

bool type_r_matrix(const QMatrix& a, const PContext& ctx) {
    Polynomial f = char_poly(a);
    if (f.front() == 0) throw Error(ErrorKind::Singular, "type R test of a singular matrix");
    if (vp(f.front(), ctx) != Valuation(0)) return false;
    return std::all_of(f.begin(), f.end(), [&](const ExactScalar& c) { return is_p_integral(c, ctx.p()); });
}

std::optional<Word> type_r_witness_search(const GeneratorSet& g, std::size_t word_len) {
    struct Node {
        Word word;
        QMatrix value;
    };
    std::vector<Node> layer{{Word{}, QMatrix::identity(g.dim())}};
    const std::size_t m = g.gens().size();
    for (std::size_t len = 1; len <= word_len; ++len) {
        std::vector<Node> next;
        for (const auto& node : layer) {
            for (std::size_t idx = 0; idx < 2 * m; ++idx) {
                Letter l{idx / 2, idx % 2 == 1};
                if (!node.word.letters.empty()) {
                    const Letter& last = node.word.letters.back();
                    if (last.generator == l.generator && last.inverted != l.inverted) continue;
                }
                Node child{node.word, node.value * (l.inverted ? g.inverses()[l.generator] : g.gens()[l.generator])};
                child.word.letters.push_back(l);
                if (!type_r_matrix(child.value, g.ctx())) return child.word;
                next.push_back(std::move(child));
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

const char* to_string(BoundednessResult::Verdict v) {
    switch (v) {
        case BoundednessResult::Verdict::Bounded: return "Bounded";
        case BoundednessResult::Verdict::Unbounded: return "Unbounded";
        case BoundednessResult::Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(BlockOrigin o) {
    switch (o) {
        case BlockOrigin::FixedVectors: return "fixed-vectors";
        case BlockOrigin::BoundedQuotient: return "bounded-quotient";
        case BlockOrigin::Extracted: return "extracted";
    }
    return "?";
}

namespace {

bool fixes(const GeneratorSet& g, const Lattice& l) {
    for (std::size_t i = 0; i < g.gens().size(); ++i)
        if (!(apply(g.gens()[i], l) == l) || !(apply(g.inverses()[i], l) == l)) return false;
    return true;
}

}  // namespace

BoundednessResult bounded_group(const GeneratorSet& g, const BoundednessCaps& caps) {
    const Lattice origin = Lattice::standard(g.ctx(), g.dim());
    BoundednessResult result;
    Lattice current = origin;
    for (std::size_t round = 1; round <= caps.rounds; ++round) {
        Lattice next = current;
        for (std::size_t i = 0; i < g.gens().size(); ++i) {
            next = lattice_sum(next, apply(g.gens()[i], current));
            next = lattice_sum(next, apply(g.inverses()[i], current));
        }
        result.rounds = round;
        if (next == current) {
            ensure(fixes(g, current), "saturated lattice is not invariant");
            result.verdict = BoundednessResult::Verdict::Bounded;
            result.lattice = std::move(current);
            return result;
        }
        current = std::move(next);
        result.divisor_trace.push_back(elementary_divisors(origin, current));

        const auto& t = result.divisor_trace;
        if (t.size() >= 4 && t.back().front() < -caps.divisor_threshold) {
            bool monotone = true;
            for (std::size_t j = t.size() - 3; j < t.size(); ++j) monotone = monotone && t[j].front() < t[j - 1].front();
            if (monotone) {
                result.verdict = BoundednessResult::Verdict::Unbounded;
                return result;
            }
        }
    }
    result.verdict = BoundednessResult::Verdict::Inconclusive;
    return result;
}

NotTypeRError::NotTypeRError(Word witness)
    : Error(ErrorKind::NotTypeR, "word " + witness.to_string() + " has an eigenvalue off the unit circle"),
      witness_(std::move(witness)) {}

FlagInconclusive::FlagInconclusive(const std::string& why, QMatrix partial_basis, std::vector<std::size_t> partial_dims)
    : Error(ErrorKind::Inconclusive, why), basis_(std::move(partial_basis)), dims_(std::move(partial_dims)) {}

namespace {

std::vector<QMatrix> conjugate_all(const std::vector<QMatrix>& gens, const QMatrix& basis) {
    QMatrix inv = inverse(basis);
    std::vector<QMatrix> out;
    for (const auto& g : gens) out.push_back(inv * g * basis);
    return out;
}

QMatrix stack_rows(const std::vector<QMatrix>& ms) {
    std::size_t rows = 0;
    for (const auto& m : ms) rows += m.rows();
    QMatrix s(rows, ms.front().cols());
    std::size_t r = 0;
    for (const auto& m : ms)
        for (std::size_t i = 0; i < m.rows(); ++i, ++r)
            for (std::size_t j = 0; j < m.cols(); ++j) s(r, j) = m(i, j);
    return s;
}

QMatrix common_fixed_space(const std::vector<QMatrix>& gens) {
    std::vector<QMatrix> shifted;
    for (const auto& g : gens) shifted.push_back(g - QMatrix::identity(g.rows()));
    return kernel(stack_rows(shifted));
}

/// Columns of `sub` followed by unit vectors completing them to a basis.
QMatrix complete_basis(const QMatrix& sub) {
    const std::size_t n = sub.rows();
    QMatrix basis = sub;
    for (std::size_t i = 0; i < n && basis.cols() < n; ++i) {
        QMatrix e(n, 1);
        e(i, 0) = 1;
        QMatrix candidate = basis.concat(e);
        if (rank(candidate) == candidate.cols()) basis = candidate;
    }
    return basis;
}

bool is_invariant(const std::vector<QMatrix>& gens, const QMatrix& sub) {
    const std::size_t d = rank(sub);
    for (const auto& g : gens)
        if (rank(sub.concat(g * sub)) != d) return false;
    return true;
}

/// a/b with |a|, |b| <= sqrt(m/2) and a/b ≡ x (mod m).
std::optional<ExactScalar> rational_reconstruct(const BigInt& x, const BigInt& m) {
    BigInt bound;
    BigInt half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    BigInt r0 = m, r1 = x, t0 = 0, t1 = 1;
    mpz_mod(r1.get_mpz_t(), r1.get_mpz_t(), m.get_mpz_t());
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    BigInt gcd;
    mpz_gcd(gcd.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (gcd != 1) return std::nullopt;
    ExactScalar q(r1, t1);
    q.canonicalize();
    return q;
}

/// Replaces a p-adic approximation of a subspace (columns) by nearby rational data.
std::optional<QMatrix> reconstruct_subspace(const QMatrix& approx, std::uint64_t p, long precision) {
    if (precision < 2) return std::nullopt;
    // Column echelon form with p-adically dominant pivots.
    QMatrix m = approx;
    std::vector<bool> pivot_row(m.rows(), false);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        std::size_t best_r = m.rows(), best_c = m.cols();
        long best = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (pivot_row[r]) continue;
            for (std::size_t cc = c; cc < m.cols(); ++cc) {
                if (m(r, cc) == 0) continue;
                long v = vp(m(r, cc), p).value();
                if (best_r == m.rows() || v < best) best_r = r, best_c = cc, best = v;
            }
        }
        if (best_r == m.rows()) return std::nullopt;
        for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, c), m(r, best_c));
        ExactScalar inv = 1 / m(best_r, c);
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= inv;
        for (std::size_t cc = 0; cc < m.cols(); ++cc) {
            if (cc == c || m(best_r, cc) == 0) continue;
            ExactScalar f = m(best_r, cc);
            for (std::size_t r = 0; r < m.rows(); ++r) m(r, cc) -= f * m(r, c);
        }
        pivot_row[best_r] = true;
    }
    BigInt modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), p, static_cast<unsigned long>(precision));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (pivot_row[r]) continue;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m(r, c) == 0) continue;
            long shift = std::max<long>(0, -vp(m(r, c), p).value());
            auto q = rational_reconstruct(residue(m(r, c) * p_power(p, shift), modulus), modulus);
            if (!q) return std::nullopt;
            m(r, c) = *q * p_power(p, -shift);
        }
    }
    return m;
}

/// Stable directions of the decreasing intersection of w(Z_p^r) over words w.
std::optional<QMatrix> extract_bounded_subspace(const GeneratorSet& g, const FlagCaps& caps) {
    Lattice current = Lattice::standard(g.ctx(), g.dim());
    std::vector<std::vector<long>> history;
    for (std::size_t round = 1; round <= caps.rounds; ++round) {
        Lattice next = current;
        for (std::size_t i = 0; i < g.gens().size(); ++i) {
            next = lattice_intersect(next, apply(g.gens()[i], current));
            next = lattice_intersect(next, apply(g.inverses()[i], current));
        }
        current = std::move(next);
        auto smith = local_smith_form(current.basis(), g.ctx().p());
        history.push_back(smith.exponents);
        if (history.size() < 4 || smith.exponents.back() <= caps.divisor_threshold) continue;

        std::vector<std::size_t> stable;
        long top_stable = 0, bottom_moving = 0;
        bool have_moving = false;
        for (std::size_t i = 0; i < smith.exponents.size(); ++i) {
            long e = smith.exponents[i];
            bool steady = e <= caps.divisor_threshold && history[history.size() - 4][i] == e;
            if (steady) {
                stable.push_back(i);
                top_stable = std::max(top_stable, e);
            } else if (!have_moving || e < bottom_moving) {
                bottom_moving = e;
                have_moving = true;
            }
        }
        if (stable.empty()) return std::nullopt;
        QMatrix directions(g.dim(), stable.size());
        for (std::size_t c = 0; c < stable.size(); ++c)
            for (std::size_t r = 0; r < g.dim(); ++r) directions(r, c) = smith.left(r, stable[c]);
        if (is_invariant(g.gens(), directions)) return directions;
        auto rational = reconstruct_subspace(directions, g.ctx().p(), bottom_moving - top_stable);
        if (rational && is_invariant(g.gens(), *rational)) return rational;
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<QMatrix> diagonal_blocks(const std::vector<QMatrix>& conj, std::size_t lo, std::size_t hi) {
    std::vector<QMatrix> out;
    for (const auto& c : conj) out.push_back(c.block(lo, lo, hi - lo, hi - lo));
    return out;
}

}  // namespace

FlagDecomposition ku_flag(const GeneratorSet& g, const FlagCaps& caps) {
    if (auto witness = type_r_witness_search(g, caps.word_len)) throw NotTypeRError(*witness);

    const std::size_t n = g.dim();
    const BoundednessCaps bcaps{caps.rounds, caps.divisor_threshold};
    QMatrix basis = QMatrix::identity(n);
    std::vector<std::size_t> dims{0};
    std::vector<BlockOrigin> origins;

    auto split = [&](std::size_t offset, const QMatrix& sub) {
        QMatrix completion = complete_basis(sub);
        QMatrix tail = basis.columns(offset, n - offset) * completion;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n - offset; ++j) basis(i, offset + j) = tail(i, j);
        dims.push_back(offset + sub.cols());
    };

    while (dims.back() < n) {
        const std::size_t d = dims.back();
        auto conj = conjugate_all(g.gens(), basis);
        auto quotient = diagonal_blocks(conj, d, n);
        QMatrix fixed = common_fixed_space(quotient);
        if (fixed.cols() == n - d) {
            dims.push_back(n);
            origins.push_back(BlockOrigin::FixedVectors);
            break;
        }
        if (fixed.cols() > 0) {
            split(d, fixed);
            origins.push_back(BlockOrigin::FixedVectors);
            continue;
        }
        GeneratorSet quotient_set(g.ctx(), quotient);
        if (bounded_group(quotient_set, bcaps).verdict == BoundednessResult::Verdict::Bounded) {
            dims.push_back(n);
            origins.push_back(BlockOrigin::BoundedQuotient);
            break;
        }
        auto sub = extract_bounded_subspace(quotient_set, caps);
        if (!sub) throw FlagInconclusive("no bounded invariant subspace found in a quotient of dimension " +
                                             std::to_string(n - d), basis, dims);
        QMatrix change = complete_basis(*sub);
        auto restricted = diagonal_blocks(conjugate_all(quotient, change), 0, sub->cols());
        if (bounded_group(GeneratorSet(g.ctx(), restricted), bcaps).verdict != BoundednessResult::Verdict::Bounded)
            throw FlagInconclusive("extracted subspace failed the boundedness check", basis, dims);
        split(d, *sub);
        origins.push_back(BlockOrigin::Extracted);
    }

    FlagDecomposition flag;
    flag.flag_basis = basis;
    flag.dims = dims;
    flag.origins = origins;
    flag.conjugated = conjugate_all(g.gens(), basis);
    for (std::size_t b = 0; b + 1 < dims.size(); ++b) {
        auto blocks = diagonal_blocks(flag.conjugated, dims[b], dims[b + 1]);
        const std::size_t size = dims[b + 1] - dims[b];
        bool trivial = std::all_of(blocks.begin(), blocks.end(), [](const QMatrix& m) { return m.is_identity(); });
        if (trivial) {
            flag.quotient_lattices.push_back(Lattice::standard(g.ctx(), size));
            continue;
        }
        auto bounded = bounded_group(GeneratorSet(g.ctx(), blocks), bcaps);
        if (bounded.verdict != BoundednessResult::Verdict::Bounded)
            throw FlagInconclusive("quotient " + std::to_string(b + 1) + " is not certified bounded", basis, dims);
        flag.quotient_lattices.push_back(*bounded.lattice);
    }
    if (auto violation = check_flag(g, flag)) throw Error(ErrorKind::InvariantViolation, *violation);
    return flag;
}

std::optional<std::string> check_flag(const GeneratorSet& g, const FlagDecomposition& flag) {
    const std::size_t n = g.dim();
    if (flag.dims.empty() || flag.dims.front() != 0 || flag.dims.back() != n) return "flag dimensions do not span the space";
    for (std::size_t i = 1; i < flag.dims.size(); ++i)
        if (flag.dims[i] <= flag.dims[i - 1]) return "flag dimensions are not strictly increasing";
    if (flag.quotient_lattices.size() != flag.length()) return "one lattice per quotient is required";
    if (determinant(flag.flag_basis) == 0) return "flag basis is singular";
    auto conj = conjugate_all(g.gens(), flag.flag_basis);
    for (std::size_t k = 0; k < conj.size(); ++k) {
        const QMatrix& c = conj[k];
        for (std::size_t b = 0; b < flag.length(); ++b) {
            const std::size_t lo = flag.dims[b], hi = flag.dims[b + 1];
            for (std::size_t i = hi; i < n; ++i)
                for (std::size_t j = lo; j < hi; ++j)
                    if (c(i, j) != 0) return "generator " + std::to_string(k + 1) + " is not block upper triangular";
            QMatrix block = c.block(lo, lo, hi - lo, hi - lo);
            if (!(apply(block, flag.quotient_lattices[b]) == flag.quotient_lattices[b]))
                return "generator " + std::to_string(k + 1) + " moves the lattice of quotient " + std::to_string(b + 1);
        }
    }
    return std::nullopt;
}

}  // namespace ppm
