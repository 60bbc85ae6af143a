#include "ppm/scalar.hpp"

#include <array>
#include <cctype>
#include <ostream>

namespace ppm {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NotPIntegral: return "NotPIntegral";
        case ErrorKind::NotNested: return "NotNested";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::NotUnipotent: return "NotUnipotent";
        case ErrorKind::BadDomain: return "BadDomain";
        case ErrorKind::PDividesK: return "PDividesK";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::UnknownCatalogEntry: return "UnknownCatalogEntry";
        case ErrorKind::NotTypeR: return "NotTypeR";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::NotASubgroup: return "NotASubgroup";
        case ErrorKind::UnsupportedCharacteristic: return "UnsupportedCharacteristic";
        case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
    if (v.is_infinite()) return os << "inf";
    return os << v.value();
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (e > 0) {
        if (e & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto b : bases) {
        if (n % b == 0) return n == b;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are a deterministic witness set for all n < 2^64.
    for (auto a : bases) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PContext::PContext(std::uint64_t p, unsigned precision_n) : p_(p), precision_(precision_n) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
    if (precision_n < 1) throw Error(ErrorKind::InvalidArgument, "precision must be at least 1");
}

BigInt PContext::power(unsigned m) const {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), p_, m);
    return r;
}

ResidueScalar::ResidueScalar(const PContext& ctx, BigInt value, unsigned level)
    : p_(ctx.p()), level_(level), modulus_(ctx.power(level)), value_(std::move(value)) {
    mpz_mod(value_.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
}

bool ResidueScalar::is_unit() const {
    if (level_ == 0) return true;
    return mpz_divisible_ui_p(value_.get_mpz_t(), p_) == 0;
}

ResidueScalar ResidueScalar::inverse() const {
    ResidueScalar r = *this;
    if (!is_unit()) throw Error(ErrorKind::BadDomain, "residue is not a unit");
    if (level_ == 0) return r;
    mpz_invert(r.value_.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
    return r;
}

ResidueScalar ResidueScalar::pow(const BigInt& e) const {
    ResidueScalar r = *this;
    if (e < 0) return inverse().pow(-e);
    mpz_powm(r.value_.get_mpz_t(), value_.get_mpz_t(), e.get_mpz_t(), modulus_.get_mpz_t());
    return r;
}

ResidueScalar ResidueScalar::reduce(unsigned lower_level) const {
    if (lower_level > level_) throw Error(ErrorKind::InvalidArgument, "cannot raise residue level");
    return ResidueScalar(PContext(p_), value_, lower_level);
}

namespace {
void require_same_ring(const ResidueScalar& a, const ResidueScalar& b) {
    if (a.p() != b.p() || a.level() != b.level())
        throw Error(ErrorKind::InvalidArgument, "residues live in different rings");
}
}  // namespace

ResidueScalar operator+(const ResidueScalar& a, const ResidueScalar& b) {
    require_same_ring(a, b);
    ResidueScalar r = a;
    r.value_ += b.value_;
    if (r.value_ >= r.modulus_) r.value_ -= r.modulus_;
    return r;
}

ResidueScalar operator-(const ResidueScalar& a, const ResidueScalar& b) {
    require_same_ring(a, b);
    ResidueScalar r = a;
    r.value_ -= b.value_;
    if (r.value_ < 0) r.value_ += r.modulus_;
    return r;
}

ResidueScalar operator*(const ResidueScalar& a, const ResidueScalar& b) {
    require_same_ring(a, b);
    ResidueScalar r = a;
    r.value_ *= b.value_;
    mpz_mod(r.value_.get_mpz_t(), r.value_.get_mpz_t(), r.modulus_.get_mpz_t());
    return r;
}

Valuation vp(const BigInt& x, std::uint64_t p) {
    if (x == 0) return Valuation::infinity();
    BigInt rest;
    BigInt prime(static_cast<unsigned long>(p));
    auto count = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t());
    return Valuation(static_cast<long>(count));
}

Valuation vp(const ExactScalar& x, std::uint64_t p) {
    if (x == 0) return Valuation::infinity();
    return Valuation(vp(x.get_num(), p).value() - vp(x.get_den(), p).value());
}

Valuation vp(const ExactScalar& x, const PContext& ctx) { return vp(x, ctx.p()); }

bool is_p_integral(const ExactScalar& x, std::uint64_t p) {
    return mpz_divisible_ui_p(x.get_den().get_mpz_t(), p) == 0;
}

BigInt residue(const ExactScalar& x, const BigInt& modulus) {
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), modulus.get_mpz_t()) == 0) {
        if (modulus == 1) return 0;
        throw Error(ErrorKind::NotPIntegral, "denominator not invertible modulo " + modulus.get_str());
    }
    BigInt r = x.get_num() * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

ResidueScalar reduce_mod(const ExactScalar& x, unsigned m, const PContext& ctx) {
    if (!is_p_integral(x, ctx.p()))
        throw Error(ErrorKind::NotPIntegral, to_string(x) + " has negative " + std::to_string(ctx.p()) + "-adic valuation");
    return ResidueScalar(ctx, residue(x, ctx.power(m)), m);
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw Error(ErrorKind::Parse, "malformed scalar '" + std::string(whole) + "'");
    for (std::size_t j = i; j < text.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            throw Error(ErrorKind::Parse, "malformed scalar '" + std::string(whole) + "'");
    }
    BigInt v(std::string(text.substr(i)), 10);
    return negative ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

ExactScalar parse_scalar(std::string_view text) {
    auto t = trim(text);
    auto slash = t.find('/');
    if (slash == std::string_view::npos) return ExactScalar(parse_integer(t, text));
    BigInt num = parse_integer(trim(t.substr(0, slash)), text);
    BigInt den = parse_integer(trim(t.substr(slash + 1)), text);
    if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    ExactScalar q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const ExactScalar& x) { return x.get_str(); }

ExactScalar p_power(std::uint64_t p, long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return ExactScalar(r);
    ExactScalar q(BigInt(1), r);
    q.canonicalize();
    return q;
}

}  // namespace ppm
