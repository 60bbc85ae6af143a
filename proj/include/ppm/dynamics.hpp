#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppm/lattice.hpp"

namespace ppm {

/// A finitely generated subgroup of GL(n, Q_p), given by invertible rational generators.
class GeneratorSet {
public:
    GeneratorSet(const PContext& ctx, std::vector<QMatrix> gens);

    const PContext& ctx() const { return ctx_; }
    std::size_t dim() const { return n_; }
    const std::vector<QMatrix>& gens() const { return gens_; }
    const std::vector<QMatrix>& inverses() const { return inverses_; }

private:
    PContext ctx_;
    std::size_t n_;
    std::vector<QMatrix> gens_;
    std::vector<QMatrix> inverses_;
};

struct Letter {
    std::size_t generator;
    bool inverted;
    friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word in the generators, applied left to right as a matrix product.
struct Word {
    std::vector<Letter> letters;
    std::string to_string() const;  // e.g. "g1*g2^-1"
    QMatrix evaluate(const GeneratorSet& g) const;
    friend bool operator==(const Word&, const Word&) = default;
};

/// All eigenvalues of A have absolute value 1: char poly integral with unit constant term.
bool type_r_matrix(const QMatrix& a, const PContext& ctx);

/// Breadth-first over reduced words of length 1..word_len; the first non-type-R word, if any.
/// A necessary-condition filter only: passing says nothing about longer words.
std::optional<Word> type_r_witness_search(const GeneratorSet& g, std::size_t word_len);

struct BoundednessCaps {
    std::size_t rounds = 64;
    long divisor_threshold = 32;
};

struct BoundednessResult {
    enum class Verdict { Bounded, Unbounded, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    /// Invariant lattice when Bounded (fixed exactly by every generator and inverse).
    std::optional<Lattice> lattice;
    /// Elementary divisors of L_k against Z_p^n, one row per saturation round.
    std::vector<std::vector<long>> divisor_trace;
    std::size_t rounds = 0;
};

const char* to_string(BoundednessResult::Verdict v);

/// Increasing saturation L_{k+1} = L_k + sum_g g(L_k) + g^{-1}(L_k) from Z_p^n.
/// Unbounded verdicts are evidence (monotone divergence), not proofs.
BoundednessResult bounded_group(const GeneratorSet& g, const BoundednessCaps& caps = {});

struct FlagCaps {
    std::size_t rounds = 64;
    long divisor_threshold = 32;
    std::size_t word_len = 4;
};

/// How the subspace V_i / V_{i-1} was obtained.
enum class BlockOrigin {
    FixedVectors,     // common fixed vectors of the quotient action
    BoundedQuotient,  // whole remaining quotient, certified bounded
    Extracted,        // stable directions of the decreasing intersection, certified
};

const char* to_string(BlockOrigin o);

/// Flag {0} = V_0 ⊂ V_1 ⊂ ... ⊂ V_m = Q_p^n with bounded action on every quotient.
/// In the basis flag_basis every generator is block upper triangular at the cuts
/// dims[1..m-1]; its diagonal blocks generate the compact part K and the strictly
/// block-triangular parts lie in the split unipotent group U.
struct FlagDecomposition {
    QMatrix flag_basis;
    std::vector<std::size_t> dims;  // 0 = d_0 < d_1 < ... < d_m = n
    std::vector<Lattice> quotient_lattices;
    std::vector<BlockOrigin> origins;
    /// flag_basis^{-1} g flag_basis for each generator.
    std::vector<QMatrix> conjugated;

    std::size_t length() const { return dims.size() - 1; }
};

/// Raised by ku_flag when the sampled words include a non-type-R element.
class NotTypeRError : public Error {
public:
    explicit NotTypeRError(Word witness);
    const Word& witness() const { return witness_; }

private:
    Word witness_;
};

/// Raised by ku_flag when a quotient cannot be certified within the caps.
class FlagInconclusive : public Error {
public:
    FlagInconclusive(const std::string& why, QMatrix partial_basis, std::vector<std::size_t> partial_dims);
    const QMatrix& partial_basis() const { return basis_; }
    const std::vector<std::size_t>& partial_dims() const { return dims_; }

private:
    QMatrix basis_;
    std::vector<std::size_t> dims_;
};

FlagDecomposition ku_flag(const GeneratorSet& g, const FlagCaps& caps = {});

/// Exact re-check of the flag invariants; returns a description of the first violation.
std::optional<std::string> check_flag(const GeneratorSet& g, const FlagDecomposition& flag);

}  // namespace ppm
