#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppm/matrix.hpp"

namespace ppm {

/// An n x n matrix over Z/p^level, invertible mod p.
class PadicApproxMatrix {
public:
    PadicApproxMatrix(const PContext& ctx, unsigned level, std::size_t n, std::vector<BigInt> entries);

    static PadicApproxMatrix identity(const PContext& ctx, unsigned level, std::size_t n);
    /// Reduction of a p-integral matrix; NotPIntegral otherwise.
    static PadicApproxMatrix from_rational(const QMatrix& m, const PContext& ctx, unsigned level);

    const PContext& ctx() const { return ctx_; }
    unsigned level() const { return level_; }
    std::size_t dim() const { return n_; }
    const BigInt& modulus() const { return modulus_; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    ResidueScalar entry(std::size_t i, std::size_t j) const;
    const std::vector<BigInt>& entries() const { return a_; }

    PadicApproxMatrix operator*(const PadicApproxMatrix& o) const;
    PadicApproxMatrix pow(const BigInt& e) const;
    PadicApproxMatrix reduce(unsigned lower_level) const;
    PadicApproxMatrix inverse() const;
    /// Entries as integer representatives in [0, p^level).
    QMatrix to_rational() const;
    /// Congruent to I modulo p^j.
    bool congruent_identity(unsigned j) const;

    friend bool operator==(const PadicApproxMatrix& a, const PadicApproxMatrix& b) {
        return a.ctx_.p() == b.ctx_.p() && a.level_ == b.level_ && a.n_ == b.n_ && a.a_ == b.a_;
    }
    friend std::ostream& operator<<(std::ostream& os, const PadicApproxMatrix& m);

private:
    PadicApproxMatrix(const PContext& ctx, unsigned level, std::size_t n);

    PContext ctx_;
    unsigned level_;
    std::size_t n_;
    BigInt modulus_;
    std::vector<BigInt> a_;
};

/// (a, b) in the group of pairs with (a, b)(c, d) = (ac, b + a d).
struct AxbElement {
    ResidueScalar a;
    ResidueScalar b;
};

/// (a, b)^k = (a^k, (1 + a + ... + a^{k-1}) b).
AxbElement axb_power(const AxbElement& x, unsigned long k);

struct RootResult {
    enum class Status { Found, Obstructed, NoRoot };
    Status status = Status::NoRoot;
    std::optional<QMatrix> exact;
    std::optional<PadicApproxMatrix> approx;
    std::optional<AxbElement> axb;
    /// Level at which the root was verified (residue results only).
    unsigned verified_level = 0;
    /// NoRoot: the smallest level with no k-th root.
    unsigned witness_level = 0;
    std::string reason;

    bool found() const { return status == Status::Found; }
};

const char* to_string(RootResult::Status s);

bool is_unipotent(const QMatrix& u);
/// sum_{j>=1} (-1)^{j+1} (u - I)^j / j; NotUnipotent unless (u - I)^n = 0.
QMatrix nilpotent_log(const QMatrix& u);
/// sum_j N^j / j!; NotUnipotent unless N^n = 0.
QMatrix nilpotent_exp(const QMatrix& nil);

RootResult unipotent_root(const QMatrix& u, unsigned long k);

/// Hensel lifting on the congruence kernel: A = I mod p (mod 4 for p = 2), p not dividing k.
RootResult congruence_root(const PadicApproxMatrix& a, unsigned long k);

struct FiniteRootCaps {
    /// Bound on p^(n^2) for the exhaustive search mod p.
    std::size_t residue_candidates = 10'000'000;
    /// Bound on lifting nodes visited across all branches.
    std::size_t lift_nodes = 1'000'000;
};

/// All X in GL(n, F_p) with X^k = A mod p, in lexicographic order.
std::vector<PadicApproxMatrix> roots_mod_p(const PadicApproxMatrix& a, unsigned long k, const FiniteRootCaps& caps = {});

/// Lifts a root of A mod p to a root mod p^level by depth-first search over all branches.
/// nullopt when every branch dies; `deepest` receives the highest level reached.
std::optional<PadicApproxMatrix> lift_root(const PadicApproxMatrix& a, const PadicApproxMatrix& x, unsigned long k,
                                           unsigned* deepest = nullptr, const FiniteRootCaps& caps = {});

RootResult finite_root(const PadicApproxMatrix& a, unsigned long k, const FiniteRootCaps& caps = {});

/// k-th root in the unit-by-additive semidirect product, at the level of `elem.a`.
RootResult axb_root(const AxbElement& elem, unsigned long k, const FiniteRootCaps& caps = {});

}  // namespace ppm
