#include "ppm/scale.hpp"

#include <algorithm>

namespace ppm {

namespace {

std::string describe_trace(const std::vector<std::pair<std::size_t, long>>& trace, long target) {
    std::string s = "tidying did not reach scale exponent " + std::to_string(target) + "; trace:";
    for (auto [k, e] : trace) s += " (" + std::to_string(k) + "," + std::to_string(e) + ")";
    return s;
}

NewtonPolygon invertible_polygon(const QMatrix& a, const PContext& ctx) {
    if (!a.is_square()) throw Error(ErrorKind::InvalidArgument, "scale of a non-square matrix");
    auto np = newton_polygon(char_poly(a), ctx);
    if (np.infinite_slopes > 0) throw Error(ErrorKind::Singular, "scale of a singular matrix");
    return np;
}

}  // namespace

TidyCapExceeded::TidyCapExceeded(std::vector<std::pair<std::size_t, long>> trace, long target)
    : Error(ErrorKind::CapExceeded, describe_trace(trace, target)), trace_(std::move(trace)) {}

long scale_newton(const QMatrix& a, const PContext& ctx) {
    ExactScalar total = 0;
    for (const auto& s : invertible_polygon(a, ctx).slopes)
        if (s.valuation < 0) total -= s.valuation * static_cast<unsigned long>(s.multiplicity);
    // Vertices of a Newton polygon are integer points, so this is an integer.
    ensure(total.get_den() == 1, "non-integral scale exponent");
    return total.get_num().get_si();
}

std::size_t default_tidy_cap(const QMatrix& a, const PContext& ctx) {
    long excursion = 0;
    for (const auto& s : invertible_polygon(a, ctx).slopes)
        excursion = std::max(excursion, std::abs(s.valuation.get_num().get_si()));
    return a.rows() * static_cast<std::size_t>(1 + excursion) * 4;
}

ScaleReport scale_tidy(const QMatrix& a, const PContext& ctx, std::optional<Lattice> start,
                       std::optional<std::size_t> cap) {
    const long target = scale_newton(a, ctx);
    const std::size_t limit = cap.value_or(default_tidy_cap(a, ctx));
    Lattice current = start.value_or(Lattice::standard(ctx, a.rows()));
    if (current.dim() != a.rows()) throw Error(ErrorKind::InvalidArgument, "start lattice dimension mismatch");

    ScaleReport report{target, current, {}, false};
    for (std::size_t k = 0; k <= limit; ++k) {
        Lattice image = apply(a, current);
        Lattice meet = lattice_intersect(current, image);
        long e = lattice_index(image, meet);
        ensure(e >= target, "displacement index below the Newton scale");
        ensure(report.iteration_trace.empty() || e <= report.iteration_trace.back().second,
               "tidying trace increased");
        report.iteration_trace.emplace_back(k, e);
        if (e == target) {
            report.minimizing_lattice = std::move(current);
            report.method_agreement = true;
            return report;
        }
        current = std::move(meet);
    }
    throw TidyCapExceeded(std::move(report.iteration_trace), target);
}

std::optional<Lattice> invariant_lattice(const QMatrix& a, const PContext& ctx) {
    QMatrix inv = inverse(a);
    if (scale_newton(a, ctx) != 0 || scale_newton(inv, ctx) != 0) return std::nullopt;
    Lattice current = Lattice::standard(ctx, a.rows());
    // All slopes are zero, so the orbit of Z_p^n is bounded and the saturation stabilizes.
    constexpr std::size_t kMaxRounds = 4096;
    for (std::size_t round = 0; round < kMaxRounds; ++round) {
        Lattice next = lattice_sum(lattice_sum(current, apply(a, current)), apply(inv, current));
        if (next == current) {
            ensure(apply(a, current) == current, "saturated lattice is not invariant");
            return current;
        }
        current = std::move(next);
    }
    throw Error(ErrorKind::CapExceeded, "invariant lattice saturation did not stabilize");
}

}  // namespace ppm
