#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "ppm/scalar.hpp"

namespace ppm {

/// Formal product of prime powers with exponents in N ∪ {∞}; stores only primes present.
class Supernatural {
public:
    Supernatural() = default;  // 1

    static Supernatural from_integer(const BigInt& n);
    static Supernatural prime_infinity(const BigInt& p);

    const std::map<BigInt, unsigned long>& finite_part() const { return finite_; }
    const std::set<BigInt>& infinite_primes() const { return infinite_; }

    bool is_one() const { return finite_.empty() && infinite_.empty(); }
    bool is_finite() const { return infinite_.empty(); }
    /// nullopt for an infinite exponent.
    std::optional<unsigned long> exponent(const BigInt& p) const;
    bool contains_prime(const BigInt& p) const;
    /// Integer value; InvalidArgument if some exponent is infinite.
    BigInt value() const;

    friend Supernatural operator*(const Supernatural& a, const Supernatural& b);
    friend bool operator==(const Supernatural&, const Supernatural&) = default;

private:
    void add(const BigInt& p, std::optional<unsigned long> e);

    std::map<BigInt, unsigned long> finite_;
    std::set<BigInt> infinite_;
};

Supernatural lcm(const Supernatural& a, const Supernatural& b);
bool coprime(const BigInt& k, const Supernatural& n);
/// Power map x -> x^k is onto a profinite group of order n exactly when k is coprime to n.
bool profinite_surjective(const BigInt& k, const Supernatural& n);

/// Prime factorization with multiplicities, primes increasing. n >= 1.
std::map<BigInt, unsigned long> factor(const BigInt& n);

std::string to_string(const Supernatural& s);
std::ostream& operator<<(std::ostream& os, const Supernatural& s);
/// Accepts "1", "2^4 · 3^inf · 5" and the same with '*' as separator.
Supernatural parse_supernatural(const std::string& text);

enum class CatalogId { GLn_Zp, UnitsZp, AdditiveZp, PrincipalCongruence };

struct CatalogEntry {
    CatalogId id;
    std::size_t n = 1;
    unsigned level = 1;  // PrincipalCongruence only
};

/// "GLn_Zp", "UnitsZp", "AdditiveZp", "PrincipalCongruence"; UnknownCatalogEntry otherwise.
CatalogId parse_catalog_id(const std::string& name);
const char* to_string(CatalogId id);

/// |GL(n, Z/p^m)| = |GL(n, F_p)| * p^{n^2 (m-1)}.
BigInt gl_order(std::size_t n, std::uint64_t p, unsigned m = 1);

Supernatural ord_catalog(const CatalogEntry& entry, const PContext& ctx);

}  // namespace ppm
