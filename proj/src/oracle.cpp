#include "ppm/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <tuple>
#include <unordered_set>

namespace ppm {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    if (q <= 0xffffffffULL) return a * b % q;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t pow_u64(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

namespace {

std::uint64_t inverse_unit(std::uint64_t a, std::uint64_t q) {
    __int128 r0 = q, r1 = a % q, t0 = 0, t1 = 1;
    while (r1 != 0) {
        __int128 quot = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - quot * t1);
    }
    if (r0 != 1) throw Error(ErrorKind::BadDomain, "not a unit modulo " + std::to_string(q));
    if (t0 < 0) t0 += q;
    return static_cast<std::uint64_t>(t0);
}

}  // namespace

ModMatrix::ModMatrix(std::size_t n, std::uint64_t modulus) : n_(n), q_(modulus), a_(n * n, 0) {}

ModMatrix::ModMatrix(std::size_t n, std::uint64_t modulus, std::vector<std::uint64_t> entries)
    : n_(n), q_(modulus), a_(std::move(entries)) {
    if (a_.size() != n * n) throw Error(ErrorKind::InvalidArgument, "entry count does not match dimension");
    for (auto& x : a_) x %= q_;
}

ModMatrix ModMatrix::identity(std::size_t n, std::uint64_t modulus) {
    ModMatrix m(n, modulus);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % modulus;
    return m;
}

ModMatrix ModMatrix::from_rational(const QMatrix& m, std::uint64_t p, unsigned level) {
    if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "square matrix expected");
    const std::uint64_t q = pow_u64(p, level);
    ModMatrix r(m.rows(), q);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = residue(m(i, j), BigInt(static_cast<unsigned long>(q))).get_ui();
    return r;
}

ModMatrix ModMatrix::operator*(const ModMatrix& o) const {
    ModMatrix r(n_, q_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const std::uint64_t x = a_[i * n_ + k];
            if (!x) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                std::uint64_t& c = r.a_[i * n_ + j];
                c = (c + mul_mod(x, o.a_[k * n_ + j], q_)) % q_;
            }
        }
    return r;
}

ModMatrix ModMatrix::pow(std::uint64_t e) const {
    ModMatrix result = identity(n_, q_), base = *this;
    for (; e; e >>= 1) {
        if (e & 1) result = result * base;
        if (e > 1) base = base * base;
    }
    return result;
}

ModMatrix ModMatrix::reduce(std::uint64_t smaller_modulus) const {
    if (q_ % smaller_modulus != 0) throw Error(ErrorKind::InvalidArgument, "modulus does not divide");
    ModMatrix r(n_, smaller_modulus, a_);
    return r;
}

bool ModMatrix::is_identity() const { return *this == identity(n_, q_); }

std::string ModMatrix::key() const {
    std::string k(a_.size() * 8, '\0');
    for (std::size_t i = 0; i < a_.size(); ++i)
        for (int b = 0; b < 8; ++b) k[i * 8 + b] = static_cast<char>((a_[i] >> (56 - 8 * b)) & 0xff);
    return k;
}

QMatrix ModMatrix::to_rational() const {
    QMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = ExactScalar(BigInt(static_cast<unsigned long>((*this)(i, j))));
    return m;
}

bool invertible_mod_p(const ModMatrix& m, std::uint64_t p) {
    ModMatrix r = m.reduce(p);
    const std::size_t n = r.dim();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && r(piv, c) == 0) ++piv;
        if (piv == n) return false;
        for (std::size_t j = 0; j < n; ++j) std::swap(r(c, j), r(piv, j));
        const std::uint64_t inv = inverse_unit(r(c, c), p);
        for (std::size_t i = c + 1; i < n; ++i) {
            const std::uint64_t f = mul_mod(r(i, c), inv, p);
            for (std::size_t j = c; j < n; ++j) r(i, j) = (r(i, j) + p - mul_mod(f, r(c, j), p)) % p;
        }
    }
    return true;
}

ModMatrix inverse_mod(const ModMatrix& m, std::uint64_t p) {
    const std::size_t n = m.dim();
    const std::uint64_t q = m.modulus();
    ModMatrix a = m, inv = ModMatrix::identity(n, q);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c) % p == 0) ++piv;
        if (piv == n) throw Error(ErrorKind::Singular, "matrix is not invertible mod p");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(c, j), a(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const std::uint64_t s = inverse_unit(a(c, c), q);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) = mul_mod(a(c, j), s, q);
            inv(c, j) = mul_mod(inv(c, j), s, q);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            const std::uint64_t f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = (a(i, j) + q - mul_mod(f, a(c, j), q)) % q;
                inv(i, j) = (inv(i, j) + q - mul_mod(f, inv(c, j), q)) % q;
            }
        }
    }
    return inv;
}

bool FiniteGroupTable::contains(const ModMatrix& m) const {
    return std::binary_search(elements_.begin(), elements_.end(), m);
}

FiniteGroupTable enumerate(const PContext& ctx, unsigned level, const std::vector<ModMatrix>& gens, std::size_t cap) {
    if (level == 0) throw Error(ErrorKind::InvalidArgument, "level must be at least 1");
    if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "at least one generator is required");
    const std::uint64_t p = ctx.p();
    if (ctx.power(level) >= BigInt(1UL << 62)) throw Error(ErrorKind::InvalidArgument, "modulus too large for enumeration");
    const std::uint64_t q = pow_u64(p, level);
    const std::size_t n = gens.front().dim();
    for (const auto& g : gens) {
        if (g.dim() != n || g.modulus() != q) throw Error(ErrorKind::InvalidArgument, "generators must share size and modulus");
        if (!invertible_mod_p(g, p)) throw Error(ErrorKind::Singular, "generator is not invertible mod p");
    }

    FiniteGroupTable t(ctx);
    t.level_ = level;
    t.n_ = n;
    t.gens_ = gens;
    const bool packed = ctx.power(static_cast<unsigned>(level * n * n)) < BigInt(1UL << 63);
    auto pack = [&](const ModMatrix& m) {
        std::uint64_t key = 0;
        for (auto x : m.entries()) key = key * q + x;
        return key;
    };
    std::unordered_set<std::uint64_t> seen_packed;
    std::unordered_set<std::string> seen_wide;
    auto insert = [&](const ModMatrix& m) { return packed ? seen_packed.insert(pack(m)).second : seen_wide.insert(m.key()).second; };
    std::deque<ModMatrix> frontier;
    ModMatrix id = ModMatrix::identity(n, q);
    insert(id);
    frontier.push_back(id);
    t.elements_.push_back(id);
    while (!frontier.empty()) {
        ModMatrix x = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            ModMatrix y = x * g;
            if (!insert(y)) continue;
            if (t.elements_.size() >= cap)
                throw Error(ErrorKind::CapExceeded, "group has more than " + std::to_string(cap) + " elements");
            t.elements_.push_back(y);
            frontier.push_back(std::move(y));
        }
    }
    std::sort(t.elements_.begin(), t.elements_.end());

    for (const auto& x : t.elements_) {
        for (const auto& g : gens) ensure(t.contains(x * g), "enumerated set is not closed under products");
        ensure(t.contains(inverse_mod(x, p)), "enumerated set is not closed under inverses");
    }
    const BigInt full = gl_order(n, p, level);
    ensure(mpz_divisible_ui_p(full.get_mpz_t(), t.order()) != 0, "group order does not divide |GL|");
    return t;
}

std::vector<ModMatrix> gl_generators(std::size_t n, std::uint64_t p, unsigned level) {
    const std::uint64_t q = pow_u64(p, level);
    std::vector<ModMatrix> gens;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            ModMatrix e = ModMatrix::identity(n, q);
            e(i, j) = 1;
            gens.push_back(e);
        }
    for (const auto& u : unit_generators(p, level)) {
        ModMatrix d = ModMatrix::identity(n, q);
        d(0, 0) = u(0, 0);
        gens.push_back(d);
    }
    return gens;
}

std::vector<ModMatrix> unit_generators(std::uint64_t p, unsigned level) {
    const std::uint64_t q = pow_u64(p, level);
    auto one = [&](std::uint64_t u) { return ModMatrix(1, q, {u}); };
    if (p == 2) {
        if (level == 1) return {one(1)};
        if (level == 2) return {one(3)};
        return {one(q - 1), one(5)};
    }
    const std::uint64_t phi = (p - 1) * (q / p);
    std::vector<std::uint64_t> prime_factors;
    for (const auto& [f, e] : factor(BigInt(static_cast<unsigned long>(phi)))) prime_factors.push_back(f.get_ui());
    for (std::uint64_t g = 2; g < q; ++g) {
        if (g % p == 0) continue;
        const ModMatrix x = one(g);
        bool primitive = true;
        for (auto f : prime_factors) primitive = primitive && !x.pow(phi / f).is_identity();
        if (primitive) return {x};
    }
    return {one(1)};
}

PowerImage power_surjective(const FiniteGroupTable& t, std::uint64_t k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    std::unordered_set<std::string> image;
    for (const auto& x : t.elements()) image.insert(x.pow(k).key());
    return {image.size() == t.order(), image.size()};
}

F1Check validate_f1(const FiniteGroupTable& t, std::uint64_t k) {
    F1Check c;
    c.surjective = power_surjective(t, k).surjective;
    c.coprime = std::gcd(static_cast<std::uint64_t>(t.order()), k) == 1;
    c.agree = c.surjective == c.coprime;
    c.details = "order " + std::to_string(t.order()) + ", k " + std::to_string(k) + ": power map " +
                (c.surjective ? "surjective" : "not surjective") + ", " + (c.coprime ? "coprime" : "not coprime");
    return c;
}

IndexCheck congruence_index_check(const FiniteGroupTable& t, unsigned j) {
    if (j == 0 || j > t.level()) throw Error(ErrorKind::InvalidArgument, "congruence level out of range");
    const std::uint64_t q = pow_u64(t.ctx().p(), j);
    std::unordered_set<std::string> images;
    std::size_t kernel = 0;
    for (const auto& x : t.elements()) {
        ModMatrix r = x.reduce(q);
        if (r.is_identity()) ++kernel;
        images.insert(r.key());
    }
    return {t.order(), kernel, images.size()};
}

bool reduction_compatible(const FiniteGroupTable& upper, const FiniteGroupTable& lower) {
    if (upper.level() != lower.level() + 1 || upper.dim() != lower.dim())
        throw Error(ErrorKind::InvalidArgument, "tables are not at consecutive levels");
    const std::uint64_t q = pow_u64(lower.ctx().p(), lower.level());
    std::vector<ModMatrix> images;
    for (const auto& x : upper.elements()) images.push_back(x.reduce(q));
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    return images == lower.elements();
}

bool subgroup_inherits(const FiniteGroupTable& t, const FiniteGroupTable& sub, std::uint64_t k) {
    for (const auto& x : sub.elements())
        if (!t.contains(x)) throw Error(ErrorKind::NotASubgroup, "table is not contained in the ambient group");
    return !power_surjective(t, k).surjective || power_surjective(sub, k).surjective;
}

}  // namespace ppm
