#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ppm/error.hpp"

namespace ppm {

/// Exact rational scalar. GMP keeps it in lowest terms with a positive denominator.
using ExactScalar = mpq_class;
using BigInt = mpz_class;

/// Integer extended by +infinity (the valuation of zero).
class Valuation {
public:
    constexpr explicit Valuation(long value) : value_(value), infinite_(false) {}
    static constexpr Valuation infinity() { return Valuation(); }

    constexpr bool is_infinite() const { return infinite_; }
    long value() const {
        if (infinite_) throw Error(ErrorKind::InvalidArgument, "finite value of an infinite valuation");
        return value_;
    }

    friend constexpr bool operator==(const Valuation& a, const Valuation& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }
    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return Valuation(a.value_ + b.value_);
    }

private:
    constexpr Valuation() : value_(0), infinite_(true) {}
    long value_;
    bool infinite_;
};

std::ostream& operator<<(std::ostream& os, const Valuation& v);

/// Deterministic primality test for 64-bit integers.
bool is_prime(std::uint64_t n);

/// The prime p of Q_p and the residue precision N used for approximate outputs.
class PContext {
public:
    PContext(std::uint64_t p, unsigned precision_n = 20);

    std::uint64_t p() const { return p_; }
    unsigned precision() const { return precision_; }
    PContext with_precision(unsigned precision_n) const { return PContext(p_, precision_n); }
    /// p^m as a big integer.
    BigInt power(unsigned m) const;

    friend bool operator==(const PContext&, const PContext&) = default;

private:
    std::uint64_t p_;
    unsigned precision_;
};

/// An element of Z/p^m.
class ResidueScalar {
public:
    ResidueScalar(const PContext& ctx, BigInt value, unsigned level);

    const BigInt& value() const { return value_; }
    unsigned level() const { return level_; }
    const BigInt& modulus() const { return modulus_; }
    std::uint64_t p() const { return p_; }

    bool is_unit() const;
    ResidueScalar inverse() const;  // throws BadDomain for non-units
    ResidueScalar pow(const BigInt& e) const;
    /// Image in Z/p^m' for m' <= level.
    ResidueScalar reduce(unsigned lower_level) const;

    friend ResidueScalar operator+(const ResidueScalar& a, const ResidueScalar& b);
    friend ResidueScalar operator-(const ResidueScalar& a, const ResidueScalar& b);
    friend ResidueScalar operator*(const ResidueScalar& a, const ResidueScalar& b);
    friend bool operator==(const ResidueScalar& a, const ResidueScalar& b) {
        return a.p_ == b.p_ && a.level_ == b.level_ && a.value_ == b.value_;
    }

private:
    std::uint64_t p_;
    unsigned level_;
    BigInt modulus_;
    BigInt value_;
};

/// v_p(x); +infinity for x = 0.
Valuation vp(const ExactScalar& x, const PContext& ctx);
Valuation vp(const BigInt& x, std::uint64_t p);
Valuation vp(const ExactScalar& x, std::uint64_t p);

/// True when x lies in Z_(p), i.e. the denominator is prime to p.
bool is_p_integral(const ExactScalar& x, std::uint64_t p);

/// x mod p^m for p-integral x. Throws NotPIntegral otherwise.
ResidueScalar reduce_mod(const ExactScalar& x, unsigned m, const PContext& ctx);

/// x mod p^m as a plain integer in [0, p^m).
BigInt residue(const ExactScalar& x, const BigInt& modulus);

/// Parses "a" or "a/b" with optional sign. Throws Parse on malformed input or b = 0.
ExactScalar parse_scalar(std::string_view text);
std::string to_string(const ExactScalar& x);

/// num/den in lowest terms.
inline ExactScalar rational(long num, long den) {
    ExactScalar q(num, den);
    q.canonicalize();
    return q;
}

/// p^e as an exact scalar (e may be negative).
ExactScalar p_power(std::uint64_t p, long e);

}  // namespace ppm
