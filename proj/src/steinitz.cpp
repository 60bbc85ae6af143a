#include "ppm/steinitz.hpp"

#include <algorithm>
#include <sstream>

namespace ppm {

void Supernatural::add(const BigInt& p, std::optional<unsigned long> e) {
    if (infinite_.count(p)) return;
    if (!e) {
        finite_.erase(p);
        infinite_.insert(p);
        return;
    }
    if (*e == 0) return;
    finite_[p] += *e;
}

Supernatural Supernatural::from_integer(const BigInt& n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "supernatural numbers start at 1");
    Supernatural s;
    s.finite_ = factor(n);
    return s;
}

Supernatural Supernatural::prime_infinity(const BigInt& p) {
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw Error(ErrorKind::InvalidArgument, p.get_str() + " is not prime");
    Supernatural s;
    s.infinite_.insert(p);
    return s;
}

std::optional<unsigned long> Supernatural::exponent(const BigInt& p) const {
    if (infinite_.count(p)) return std::nullopt;
    auto it = finite_.find(p);
    return it == finite_.end() ? 0UL : it->second;
}

bool Supernatural::contains_prime(const BigInt& p) const { return infinite_.count(p) || finite_.count(p); }

BigInt Supernatural::value() const {
    if (!is_finite()) throw Error(ErrorKind::InvalidArgument, "supernatural number " + to_string(*this) + " is infinite");
    BigInt v = 1;
    for (const auto& [p, e] : finite_) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        v *= pe;
    }
    return v;
}

Supernatural operator*(const Supernatural& a, const Supernatural& b) {
    Supernatural r = a;
    for (const auto& p : b.infinite_) r.add(p, std::nullopt);
    for (const auto& [p, e] : b.finite_) r.add(p, e);
    return r;
}

Supernatural lcm(const Supernatural& a, const Supernatural& b) {
    Supernatural r = a * b;
    Supernatural out;
    for (const auto& [p, e] : r.finite_part()) {
        unsigned long m = std::max(*a.exponent(p), *b.exponent(p));
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), m);
        out = out * Supernatural::from_integer(pe);
    }
    for (const auto& p : r.infinite_primes()) out = out * Supernatural::prime_infinity(p);
    return out;
}

bool coprime(const BigInt& k, const Supernatural& n) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    for (const auto& [p, e] : factor(k))
        if (n.contains_prime(p)) return false;
    return true;
}

bool profinite_surjective(const BigInt& k, const Supernatural& n) { return coprime(k, n); }

namespace {

BigInt pollard_rho(const BigInt& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        auto f = [&](const BigInt& v) {
            BigInt r = v * v + c;
            mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
            return r;
        };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            BigInt diff = abs(x - y);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) return d;
    }
}

void factor_into(BigInt n, std::map<BigInt, unsigned long>& out) {
    for (unsigned long q = 2; q < 1000 && q * q <= n; ++q) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            ++out[BigInt(q)];
            n /= q;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
        ++out[n];
        return;
    }
    BigInt d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::map<BigInt, unsigned long> factor(const BigInt& n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "factor expects a positive integer");
    std::map<BigInt, unsigned long> out;
    factor_into(n, out);
    return out;
}

std::string to_string(const Supernatural& s) {
    if (s.is_one()) return "1";
    std::set<BigInt> primes = s.infinite_primes();
    for (const auto& [p, e] : s.finite_part()) primes.insert(p);
    std::string out;
    for (const auto& p : primes) {
        if (!out.empty()) out += " · ";
        out += p.get_str();
        auto e = s.exponent(p);
        if (!e) out += "^inf";
        else if (*e > 1) out += "^" + std::to_string(*e);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Supernatural& s) { return os << to_string(s); }

Supernatural parse_supernatural(const std::string& text) {
    std::string t = text;
    for (std::size_t pos; (pos = t.find("·")) != std::string::npos;) t.replace(pos, std::string("·").size(), "*");
    Supernatural out;
    std::stringstream ss(t);
    std::string token;
    bool any = false;
    while (std::getline(ss, token, '*')) {
        token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                    token.end());
        if (token.empty()) throw Error(ErrorKind::Parse, "empty factor in \"" + text + "\"");
        any = true;
        auto caret = token.find('^');
        std::string base = token.substr(0, caret);
        BigInt p;
        if (base.empty() || !std::all_of(base.begin(), base.end(), ::isdigit) || p.set_str(base, 10) != 0)
            throw Error(ErrorKind::Parse, "bad factor \"" + token + "\"");
        if (caret == std::string::npos && p == 1) continue;
        if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw Error(ErrorKind::Parse, base + " is not prime");
        if (caret == std::string::npos) {
            out = out * Supernatural::from_integer(p);
            continue;
        }
        std::string exp = token.substr(caret + 1);
        if (exp == "inf" || exp == "∞") {
            out = out * Supernatural::prime_infinity(p);
            continue;
        }
        if (exp.empty() || !std::all_of(exp.begin(), exp.end(), ::isdigit) || exp.size() > 9)
            throw Error(ErrorKind::Parse, "bad exponent in \"" + token + "\"");
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), std::stoul(exp));
        out = out * Supernatural::from_integer(pe);
    }
    if (!any) throw Error(ErrorKind::Parse, "empty supernatural number");
    return out;
}

CatalogId parse_catalog_id(const std::string& name) {
    if (name == "GLn_Zp") return CatalogId::GLn_Zp;
    if (name == "UnitsZp") return CatalogId::UnitsZp;
    if (name == "AdditiveZp") return CatalogId::AdditiveZp;
    if (name == "PrincipalCongruence") return CatalogId::PrincipalCongruence;
    throw Error(ErrorKind::UnknownCatalogEntry, "unknown catalog group \"" + name + "\"");
}

const char* to_string(CatalogId id) {
    switch (id) {
        case CatalogId::GLn_Zp: return "GLn_Zp";
        case CatalogId::UnitsZp: return "UnitsZp";
        case CatalogId::AdditiveZp: return "AdditiveZp";
        case CatalogId::PrincipalCongruence: return "PrincipalCongruence";
    }
    return "?";
}

BigInt gl_order(std::size_t n, std::uint64_t p, unsigned m) {
    if (n == 0 || m == 0) throw Error(ErrorKind::InvalidArgument, "gl_order needs n, m >= 1");
    BigInt pn, order = 1;
    mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
    BigInt pi = 1;
    for (std::size_t i = 0; i < n; ++i, pi *= p) order *= pn - pi;
    BigInt lift;
    mpz_ui_pow_ui(lift.get_mpz_t(), p, n * n * (m - 1));
    return order * lift;
}

Supernatural ord_catalog(const CatalogEntry& entry, const PContext& ctx) {
    const BigInt p(static_cast<unsigned long>(ctx.p()));
    const Supernatural pro_p = Supernatural::prime_infinity(p);
    switch (entry.id) {
        case CatalogId::GLn_Zp:
            return Supernatural::from_integer(gl_order(entry.n, ctx.p())) * pro_p;
        case CatalogId::UnitsZp:
            if (ctx.p() == 2) return Supernatural::from_integer(2) * pro_p;
            return Supernatural::from_integer(p - 1) * pro_p;
        case CatalogId::AdditiveZp:
            return pro_p;
        case CatalogId::PrincipalCongruence:
            if (entry.level == 0) throw Error(ErrorKind::InvalidArgument, "congruence level must be at least 1");
            return pro_p;
    }
    throw Error(ErrorKind::UnknownCatalogEntry, "unknown catalog group");
}

}  // namespace ppm
