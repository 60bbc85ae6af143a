#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppm/matrix.hpp"
#include "ppm/steinitz.hpp"

namespace ppm {

/// Square matrix over Z/q with machine-word entries in [0, q); q < 2^63.
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(std::size_t n, std::uint64_t modulus);
    ModMatrix(std::size_t n, std::uint64_t modulus, std::vector<std::uint64_t> entries);

    static ModMatrix identity(std::size_t n, std::uint64_t modulus);
    /// Reduces a p-integral rational matrix; NotPIntegral otherwise.
    static ModMatrix from_rational(const QMatrix& m, std::uint64_t p, unsigned level);

    std::size_t dim() const { return n_; }
    std::uint64_t modulus() const { return q_; }
    std::uint64_t& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<std::uint64_t>& entries() const { return a_; }

    ModMatrix operator*(const ModMatrix& o) const;
    ModMatrix pow(std::uint64_t e) const;
    ModMatrix reduce(std::uint64_t smaller_modulus) const;
    bool is_identity() const;
    /// Row-major entries as fixed-width bytes; sorting keys sorts matrices lexicographically.
    std::string key() const;
    QMatrix to_rational() const;

    friend bool operator==(const ModMatrix&, const ModMatrix&) = default;
    friend auto operator<=>(const ModMatrix& a, const ModMatrix& b) { return a.a_ <=> b.a_; }

private:
    std::size_t n_ = 0;
    std::uint64_t q_ = 1;
    std::vector<std::uint64_t> a_;
};

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q);
std::uint64_t pow_u64(std::uint64_t base, unsigned e);

/// Determinant mod p is nonzero.
bool invertible_mod_p(const ModMatrix& m, std::uint64_t p);
/// Inverse over Z/p^m; Singular when not invertible mod p.
ModMatrix inverse_mod(const ModMatrix& m, std::uint64_t p);

class FiniteGroupTable {
public:
    const PContext& ctx() const { return ctx_; }
    unsigned level() const { return level_; }
    std::size_t dim() const { return n_; }
    std::size_t order() const { return elements_.size(); }
    /// Sorted lexicographically by entries.
    const std::vector<ModMatrix>& elements() const { return elements_; }
    const std::vector<ModMatrix>& generators() const { return gens_; }
    bool contains(const ModMatrix& m) const;

private:
    friend FiniteGroupTable enumerate(const PContext&, unsigned, const std::vector<ModMatrix>&, std::size_t);
    FiniteGroupTable(const PContext& ctx) : ctx_(ctx) {}

    PContext ctx_;
    unsigned level_ = 1;
    std::size_t n_ = 0;
    std::vector<ModMatrix> elements_;
    std::vector<ModMatrix> gens_;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Closure of the generators mod p^level; CapExceeded beyond `cap` elements.
FiniteGroupTable enumerate(const PContext& ctx, unsigned level, const std::vector<ModMatrix>& gens,
                           std::size_t cap = kDefaultEnumerationCap);

/// Transvections plus unit diagonals generating GL(n, Z/p^level).
std::vector<ModMatrix> gl_generators(std::size_t n, std::uint64_t p, unsigned level);
/// A generating set of (Z/p^level)^* as 1x1 matrices.
std::vector<ModMatrix> unit_generators(std::uint64_t p, unsigned level);

struct PowerImage {
    bool surjective;
    std::size_t image_size;
};
PowerImage power_surjective(const FiniteGroupTable& t, std::uint64_t k);

struct F1Check {
    bool agree;
    bool surjective;
    bool coprime;
    std::string details;
};
/// Compares the power map with coprimality of k and the group order.
F1Check validate_f1(const FiniteGroupTable& t, std::uint64_t k);

struct IndexCheck {
    std::size_t order;
    std::size_t kernel_order;  // elements congruent to I mod p^j
    std::size_t image_order;   // distinct reductions mod p^j
    bool holds() const { return order == kernel_order * image_order; }
};
/// |K| against [K : K_j] * |K_j| for the congruence kernel K_j of reduction mod p^j.
IndexCheck congruence_index_check(const FiniteGroupTable& t, unsigned j);

/// Reductions of the level-m table mod p^(m-1) cover the lower table exactly.
bool reduction_compatible(const FiniteGroupTable& upper, const FiniteGroupTable& lower);

/// Surjectivity of P_k on t implies it on every subgroup; checked for `sub`.
bool subgroup_inherits(const FiniteGroupTable& t, const FiniteGroupTable& sub, std::uint64_t k);

}  // namespace ppm
