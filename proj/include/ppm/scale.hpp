#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ppm/lattice.hpp"

namespace ppm {

/// Result of the tidying iteration. s(alpha) = p^scale_exponent.
struct ScaleReport {
    long scale_exponent = 0;
    Lattice minimizing_lattice;
    /// (k, e_k) with [alpha(L_k) : alpha(L_k) ∩ L_k] = p^{e_k}; non-increasing in k.
    std::vector<std::pair<std::size_t, long>> iteration_trace;
    bool method_agreement = false;

    std::size_t iterations() const { return iteration_trace.empty() ? 0 : iteration_trace.back().first; }
};

/// Raised when tidying has not reached the Newton value within the cap.
class TidyCapExceeded : public Error {
public:
    TidyCapExceeded(std::vector<std::pair<std::size_t, long>> trace, long target);
    const std::vector<std::pair<std::size_t, long>>& trace() const { return trace_; }

private:
    std::vector<std::pair<std::size_t, long>> trace_;
};

/// Scale exponent from the Newton polygon: the sum of -v over root valuations v < 0,
/// i.e. log_p of the product of |lambda|_p over eigenvalues outside the unit disc.
long scale_newton(const QMatrix& a, const PContext& ctx);

/// n * (1 + max |numerator of a slope|) * 4.
std::size_t default_tidy_cap(const QMatrix& a, const PContext& ctx);

/// Intersects L_{k+1} = L_k ∩ alpha(L_k) starting from `start` (default Z_p^n)
/// until the displacement index reaches the Newton value.
ScaleReport scale_tidy(const QMatrix& a, const PContext& ctx, std::optional<Lattice> start = std::nullopt,
                       std::optional<std::size_t> cap = std::nullopt);

/// A lattice fixed by A, or nullopt when s(A) or s(A^{-1}) is nontrivial.
std::optional<Lattice> invariant_lattice(const QMatrix& a, const PContext& ctx);

}  // namespace ppm
