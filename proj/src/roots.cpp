#include "ppm/roots.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "ppm/oracle.hpp"

namespace ppm {

PadicApproxMatrix::PadicApproxMatrix(const PContext& ctx, unsigned level, std::size_t n)
    : ctx_(ctx), level_(level), n_(n), modulus_(ctx.power(level)), a_(n * n, 0) {}

PadicApproxMatrix::PadicApproxMatrix(const PContext& ctx, unsigned level, std::size_t n, std::vector<BigInt> entries)
    : PadicApproxMatrix(ctx, level, n) {
    if (level == 0) throw Error(ErrorKind::InvalidArgument, "level must be at least 1");
    if (n == 0 || entries.size() != n * n) throw Error(ErrorKind::InvalidArgument, "entry count does not match dimension");
    a_ = std::move(entries);
    for (auto& x : a_) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t());
    std::vector<std::uint64_t> low;
    for (const auto& x : a_) low.push_back(BigInt(x % ctx.p()).get_ui());
    if (!invertible_mod_p(ModMatrix(n, ctx.p(), low), ctx.p()))
        throw Error(ErrorKind::BadDomain, "matrix is not invertible mod p");
}

PadicApproxMatrix PadicApproxMatrix::identity(const PContext& ctx, unsigned level, std::size_t n) {
    PadicApproxMatrix m(ctx, level, n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = level == 0 ? 0 : 1;
    return m;
}

PadicApproxMatrix PadicApproxMatrix::from_rational(const QMatrix& m, const PContext& ctx, unsigned level) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "square matrix expected");
    std::vector<BigInt> e;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e.push_back(reduce_mod(m(i, j), level, ctx).value());
    return PadicApproxMatrix(ctx, level, m.rows(), std::move(e));
}

ResidueScalar PadicApproxMatrix::entry(std::size_t i, std::size_t j) const { return ResidueScalar(ctx_, (*this)(i, j), level_); }

PadicApproxMatrix PadicApproxMatrix::operator*(const PadicApproxMatrix& o) const {
    if (o.n_ != n_ || o.level_ != level_ || o.ctx_.p() != ctx_.p())
        throw Error(ErrorKind::InvalidArgument, "incompatible residue matrices");
    PadicApproxMatrix r(ctx_, level_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            BigInt s = 0;
            for (std::size_t k = 0; k < n_; ++k) s += a_[i * n_ + k] * o.a_[k * n_ + j];
            mpz_mod(r.a_[i * n_ + j].get_mpz_t(), s.get_mpz_t(), modulus_.get_mpz_t());
        }
    return r;
}

PadicApproxMatrix PadicApproxMatrix::pow(const BigInt& e) const {
    if (e < 0) return inverse().pow(-e);
    PadicApproxMatrix result = identity(ctx_, level_, n_), base = *this;
    for (BigInt x = e; x > 0; x >>= 1) {
        if (mpz_odd_p(x.get_mpz_t())) result = result * base;
        if (x > 1) base = base * base;
    }
    return result;
}

PadicApproxMatrix PadicApproxMatrix::reduce(unsigned lower_level) const {
    if (lower_level == 0 || lower_level > level_) throw Error(ErrorKind::InvalidArgument, "cannot reduce to that level");
    return PadicApproxMatrix(ctx_, lower_level, n_, a_);
}

PadicApproxMatrix PadicApproxMatrix::inverse() const {
    const BigInt& q = modulus_;
    const std::uint64_t p = ctx_.p();
    std::vector<BigInt> a = a_;
    PadicApproxMatrix inv = identity(ctx_, level_, n_);
    auto at = [&](std::vector<BigInt>& v, std::size_t i, std::size_t j) -> BigInt& { return v[i * n_ + j]; };
    for (std::size_t c = 0; c < n_; ++c) {
        std::size_t piv = c;
        while (piv < n_ && mpz_divisible_ui_p(at(a, piv, c).get_mpz_t(), p)) ++piv;
        ensure(piv < n_, "residue matrix lost invertibility");
        for (std::size_t j = 0; j < n_; ++j) {
            std::swap(at(a, c, j), at(a, piv, j));
            std::swap(at(inv.a_, c, j), at(inv.a_, piv, j));
        }
        BigInt s;
        mpz_invert(s.get_mpz_t(), at(a, c, c).get_mpz_t(), q.get_mpz_t());
        for (std::size_t j = 0; j < n_; ++j) {
            at(a, c, j) = at(a, c, j) * s % q;
            at(inv.a_, c, j) = at(inv.a_, c, j) * s % q;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == c || at(a, i, c) == 0) continue;
            BigInt f = at(a, i, c);
            for (std::size_t j = 0; j < n_; ++j) {
                at(a, i, j) -= f * at(a, c, j);
                mpz_mod(at(a, i, j).get_mpz_t(), at(a, i, j).get_mpz_t(), q.get_mpz_t());
                at(inv.a_, i, j) -= f * at(inv.a_, c, j);
                mpz_mod(at(inv.a_, i, j).get_mpz_t(), at(inv.a_, i, j).get_mpz_t(), q.get_mpz_t());
            }
        }
    }
    return inv;
}

QMatrix PadicApproxMatrix::to_rational() const {
    QMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = ExactScalar((*this)(i, j));
    return m;
}

bool PadicApproxMatrix::congruent_identity(unsigned j) const {
    const BigInt pj = ctx_.power(j);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t c = 0; c < n_; ++c) {
            BigInt d = a_[i * n_ + c] - (i == c ? 1 : 0);
            if (!mpz_divisible_p(d.get_mpz_t(), pj.get_mpz_t())) return false;
        }
    return true;
}

std::ostream& operator<<(std::ostream& os, const PadicApproxMatrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << "] mod " << m.ctx().p() << "^" << m.level();
}

AxbElement axb_power(const AxbElement& x, unsigned long k) {
    const PContext ctx(x.a.p());
    ResidueScalar ak(ctx, 1, x.a.level()), sum(ctx, 0, x.a.level());
    for (unsigned long i = 0; i < k; ++i) {
        sum = sum + ak;
        ak = ak * x.a;
    }
    return {ak, sum * x.b};
}

const char* to_string(RootResult::Status s) {
    switch (s) {
        case RootResult::Status::Found: return "Found";
        case RootResult::Status::Obstructed: return "Obstructed";
        case RootResult::Status::NoRoot: return "NoRoot";
    }
    return "?";
}

bool is_unipotent(const QMatrix& u) {
    if (!u.is_square()) return false;
    return power(u - QMatrix::identity(u.rows()), static_cast<long>(u.rows())).is_zero();
}

QMatrix nilpotent_log(const QMatrix& u) {
    if (!is_unipotent(u)) throw Error(ErrorKind::NotUnipotent, "matrix is not unipotent");
    const std::size_t n = u.rows();
    const QMatrix nil = u - QMatrix::identity(n);
    QMatrix term = nil, sum(n);
    for (std::size_t j = 1; j < n; ++j) {
        sum = sum + ExactScalar(j % 2 == 1 ? 1 : -1, static_cast<unsigned long>(j)) * term;
        term = term * nil;
    }
    return sum;
}

QMatrix nilpotent_exp(const QMatrix& nil) {
    if (!nil.is_square() || !power(nil, static_cast<long>(nil.rows())).is_zero())
        throw Error(ErrorKind::NotUnipotent, "matrix is not nilpotent");
    const std::size_t n = nil.rows();
    QMatrix term = QMatrix::identity(n), sum = term;
    for (std::size_t j = 1; j < n; ++j) {
        term = ExactScalar(1, static_cast<unsigned long>(j)) * (term * nil);
        sum = sum + term;
    }
    return sum;
}

RootResult unipotent_root(const QMatrix& u, unsigned long k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    QMatrix x = nilpotent_exp(ExactScalar(1, k) * nilpotent_log(u));
    ensure(power(x, static_cast<long>(k)) == u, "unipotent root failed verification");
    RootResult r;
    r.status = RootResult::Status::Found;
    r.exact = std::move(x);
    return r;
}

RootResult congruence_root(const PadicApproxMatrix& a, unsigned long k) {
    const std::uint64_t p = a.ctx().p();
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    if (k % p == 0) throw Error(ErrorKind::PDividesK, std::to_string(p) + " divides k = " + std::to_string(k));
    const unsigned start = p == 2 ? 2 : 1;
    if (a.level() < start || !a.congruent_identity(start))
        throw Error(ErrorKind::BadDomain, p == 2 ? "A must be congruent to I mod 4" : "A must be congruent to I mod p");

    const std::size_t n = a.dim();
    const BigInt pb(static_cast<unsigned long>(p));
    BigInt k_inv;
    mpz_invert(k_inv.get_mpz_t(), BigInt(k).get_mpz_t(), pb.get_mpz_t());
    PadicApproxMatrix x = PadicApproxMatrix::identity(a.ctx(), a.level(), n);
    for (unsigned m = start; m < a.level(); ++m) {
        PadicApproxMatrix xk = x.pow(k);
        const BigInt pm = a.ctx().power(m);
        std::vector<BigInt> next = x.entries();
        for (std::size_t i = 0; i < n * n; ++i) {
            BigInt d = a.entries()[i] - xk.entries()[i];
            ensure(mpz_divisible_p(d.get_mpz_t(), pm.get_mpz_t()), "lifting invariant lost");
            BigInt y = d / pm * k_inv;
            mpz_mod(y.get_mpz_t(), y.get_mpz_t(), pb.get_mpz_t());
            next[i] += pm * y;
        }
        x = PadicApproxMatrix(a.ctx(), a.level(), n, std::move(next));
    }
    ensure(x.pow(k) == a, "congruence root failed verification");
    RootResult r;
    r.status = RootResult::Status::Found;
    r.approx = std::move(x);
    r.verified_level = a.level();
    return r;
}

namespace {

struct Solutions {
    std::vector<std::uint64_t> particular;
    std::vector<std::vector<std::uint64_t>> kernel;
};

/// All solutions of M y = rhs over F_p; M given as columns.
std::optional<Solutions> solve_mod_p(const std::vector<std::vector<std::uint64_t>>& columns,
                                     std::vector<std::uint64_t> rhs, std::uint64_t p) {
    const std::size_t rows = rhs.size(), cols = columns.size();
    std::vector<std::vector<std::uint64_t>> m(rows, std::vector<std::uint64_t>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = columns[j][i] % p;
        m[i][cols] = rhs[i] % p;
    }
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        BigInt inv;
        mpz_invert(inv.get_mpz_t(), BigInt(m[r][c]).get_mpz_t(), BigInt(p).get_mpz_t());
        const std::uint64_t s = inv.get_ui();
        for (auto& x : m[r]) x = mul_mod(x, s, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const std::uint64_t f = m[i][c];
            for (std::size_t j = 0; j <= cols; ++j) m[i][j] = (m[i][j] + p - mul_mod(f, m[r][j], p)) % p;
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (m[i][cols] != 0) return std::nullopt;
    Solutions s;
    s.particular.assign(cols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) s.particular[pivots[i]] = m[i][cols];
    for (std::size_t free = 0; free < cols; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        std::vector<std::uint64_t> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = (p - m[i][free]) % p;
        s.kernel.push_back(std::move(v));
    }
    return s;
}

ModMatrix mod_p(const PadicApproxMatrix& m) {
    const std::uint64_t p = m.ctx().p();
    std::vector<std::uint64_t> e;
    for (const auto& x : m.entries()) e.push_back(BigInt(x % p).get_ui());
    return ModMatrix(m.dim(), p, std::move(e));
}

}  // namespace

std::vector<PadicApproxMatrix> roots_mod_p(const PadicApproxMatrix& a, unsigned long k, const FiniteRootCaps& caps) {
    const std::uint64_t p = a.ctx().p();
    const std::size_t n = a.dim();
    BigInt total = a.ctx().power(static_cast<unsigned>(n * n));
    if (total > BigInt(static_cast<unsigned long>(caps.residue_candidates)))
        throw Error(ErrorKind::CapExceeded, "too many residue candidates: " + total.get_str());
    const ModMatrix target = mod_p(a);
    std::vector<PadicApproxMatrix> out;
    ModMatrix x(n, p);
    const std::size_t count = total.get_ui();
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::size_t v = idx;
        for (std::size_t e = n * n; e-- > 0; v /= p) x(e / n, e % n) = v % p;
        if (!invertible_mod_p(x, p) || !(x.pow(k) == target)) continue;
        std::vector<BigInt> entries;
        for (auto e : x.entries()) entries.emplace_back(static_cast<unsigned long>(e));
        out.emplace_back(a.ctx(), a.level(), n, std::move(entries));
    }
    return out;
}

std::optional<PadicApproxMatrix> lift_root(const PadicApproxMatrix& a, const PadicApproxMatrix& x0, unsigned long k,
                                           unsigned* deepest, const FiniteRootCaps& caps) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    const std::uint64_t p = a.ctx().p();
    const std::size_t n = a.dim();
    const unsigned top = a.level();
    const BigInt pb(static_cast<unsigned long>(p));
    std::size_t nodes = 0;
    unsigned best = 0;

    const PadicApproxMatrix start(a.ctx(), top, n, x0.entries());
    if (!(start.reduce(1).pow(k) == a.reduce(1))) throw Error(ErrorKind::InvalidArgument, "starting matrix is not a root mod p");

    // Defect operator Y -> sum_i Ad(X^{-1})^i (Y) mod p, in the basis E_ab.
    auto defect_columns = [&](const ModMatrix& xp) {
        const ModMatrix xinv = inverse_mod(xp, p);
        std::vector<std::vector<std::uint64_t>> cols;
        for (std::size_t b = 0; b < n * n; ++b) {
            ModMatrix y(n, p), sum(n, p);
            y(b / n, b % n) = 1;
            for (unsigned long i = 0; i < k; ++i) {
                for (std::size_t e = 0; e < n * n; ++e) sum(e / n, e % n) = (sum(e / n, e % n) + y(e / n, e % n)) % p;
                y = xinv * y * xp;
            }
            cols.push_back(sum.entries());
        }
        return cols;
    };
    const ModMatrix a_inv_p = inverse_mod(mod_p(a), p);

    std::function<std::optional<PadicApproxMatrix>(const PadicApproxMatrix&, unsigned)> dfs =
        [&](const PadicApproxMatrix& x, unsigned j) -> std::optional<PadicApproxMatrix> {
        best = std::max(best, j);
        if (j >= top) return x;
        if (++nodes > caps.lift_nodes)
            throw Error(ErrorKind::CapExceeded, "root lifting visited more than " + std::to_string(caps.lift_nodes) + " nodes");
        const BigInt pj = a.ctx().power(j);
        PadicApproxMatrix xk = x.pow(k);
        ModMatrix rhs(n, p);
        for (std::size_t e = 0; e < n * n; ++e) {
            BigInt d = a.entries()[e] - xk.entries()[e];
            ensure(mpz_divisible_p(d.get_mpz_t(), pj.get_mpz_t()), "lifting invariant lost");
            BigInt q = d / pj;
            mpz_mod(q.get_mpz_t(), q.get_mpz_t(), pb.get_mpz_t());
            rhs(e / n, e % n) = q.get_ui();
        }
        rhs = a_inv_p * rhs;
        auto sols = solve_mod_p(defect_columns(mod_p(x)), rhs.entries(), p);
        if (!sols) return std::nullopt;
        const std::size_t dim = sols->kernel.size();
        std::vector<std::uint64_t> coeff(dim, 0);
        for (;;) {
            std::vector<std::uint64_t> y = sols->particular;
            for (std::size_t t = 0; t < dim; ++t)
                for (std::size_t e = 0; e < y.size(); ++e) y[e] = (y[e] + mul_mod(coeff[t], sols->kernel[t][e], p)) % p;
            std::vector<BigInt> step;
            for (std::size_t e = 0; e < n * n; ++e) step.push_back(BigInt(e / n == e % n ? 1 : 0) + pj * BigInt(y[e]));
            PadicApproxMatrix next = x * PadicApproxMatrix(a.ctx(), top, n, std::move(step));
            if (auto found = dfs(next, j + 1)) return found;
            std::size_t t = 0;
            while (t < dim && ++coeff[t] == p) coeff[t++] = 0;
            if (t == dim) break;
        }
        return std::nullopt;
    };
    auto result = dfs(start, 1);
    if (deepest) *deepest = best;
    if (result) ensure(result->pow(k) == a, "lifted root failed verification");
    return result;
}

RootResult finite_root(const PadicApproxMatrix& a, unsigned long k, const FiniteRootCaps& caps) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    RootResult r;
    unsigned deepest = 0;
    for (const auto& x : roots_mod_p(a, k, caps)) {
        unsigned reached = 0;
        if (auto root = lift_root(a, x, k, &reached, caps)) {
            r.status = RootResult::Status::Found;
            r.approx = std::move(root);
            r.verified_level = a.level();
            return r;
        }
        deepest = std::max(deepest, reached);
    }
    r.status = RootResult::Status::NoRoot;
    r.witness_level = deepest + 1;
    r.reason = "no k-th root modulo " + std::to_string(a.ctx().p()) + "^" + std::to_string(r.witness_level);
    return r;
}

RootResult axb_root(const AxbElement& elem, unsigned long k, const FiniteRootCaps& caps) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    const ResidueScalar& a = elem.a;
    const ResidueScalar& b = elem.b;
    if (a.p() != b.p() || a.level() != b.level()) throw Error(ErrorKind::InvalidArgument, "a and b must share p and level");
    if (!a.is_unit()) throw Error(ErrorKind::BadDomain, "a must be a unit");
    const PContext ctx(a.p());
    const unsigned level = a.level();
    PadicApproxMatrix a_mat(ctx, level, 1, {a.value()});

    auto valuation = [&](const ResidueScalar& x) -> unsigned {
        return x.value() == 0 ? level : static_cast<unsigned>(vp(x.value(), a.p()).value());
    };

    std::optional<ResidueScalar> best_alpha, best_sum;
    unsigned best_v = level + 1, deepest = 0;
    for (const auto& x : roots_mod_p(a_mat, k, caps)) {
        unsigned reached = 0;
        auto root = lift_root(a_mat, x, k, &reached, caps);
        deepest = std::max(deepest, reached);
        if (!root) continue;
        ResidueScalar alpha = root->entry(0, 0);
        ResidueScalar sum = axb_power({alpha, ResidueScalar(ctx, 1, level)}, k).b;
        unsigned v = valuation(sum);
        if (v < best_v) {
            best_v = v;
            best_alpha = alpha;
            best_sum = sum;
        }
    }
    RootResult r;
    if (!best_alpha) {
        r.status = RootResult::Status::NoRoot;
        r.witness_level = deepest + 1;
        r.reason = "a has no k-th root modulo " + std::to_string(a.p()) + "^" + std::to_string(r.witness_level);
        return r;
    }
    if (best_v >= level)
        throw Error(ErrorKind::PrecisionExhausted,
                    "1 + alpha + ... + alpha^(k-1) vanishes modulo p^" + std::to_string(level) + "; raise the precision");
    const unsigned vb = valuation(b);
    if (best_v > vb) {
        r.status = RootResult::Status::Obstructed;
        r.reason = "1 + alpha + ... + alpha^(k-1) has valuation " + std::to_string(best_v) + " for every root alpha, above v(b) = " +
                   std::to_string(vb) + "; the root beta = b / (1 + ... + alpha^(k-1)) exists over Q_p but not over Z_p";
        return r;
    }
    const unsigned out_level = level - best_v;
    const BigInt shift = ctx.power(best_v);
    ResidueScalar sum_unit(ctx, best_sum->value() / shift, out_level);
    ResidueScalar b_part(ctx, b.value() / shift, out_level);
    AxbElement root{best_alpha->reduce(out_level), sum_unit.inverse() * b_part};
    AxbElement check = axb_power(root, k);
    ensure(check.a == a.reduce(out_level) && check.b == b.reduce(out_level), "axb root failed verification");
    r.status = RootResult::Status::Found;
    r.axb = root;
    r.verified_level = out_level;
    if (best_v > 0)
        r.reason = "verified modulo p^" + std::to_string(out_level) + " after dividing by p^" + std::to_string(best_v);
    return r;
}

}  // namespace ppm
