// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "ppm/analyzer.hpp"
#include "ppm/dynamics.hpp"
#include "ppm/oracle.hpp"
#include "ppm/roots.hpp"
#include "ppm/scale.hpp"

using namespace ppm;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct ScaleSample {
    QMatrix a;
    PContext ctx;
};

std::vector<ScaleSample> scale_sample() {
    std::mt19937_64 rng(testing::kSeed);
    std::vector<ScaleSample> out;
    for (int t = 0; t < 240; ++t) {
        std::size_t n = 2 + (t % 2);
        PContext ctx(testing::pick_prime(rng));
        QMatrix a = testing::random_invertible(rng, n, 50);
        out.push_back({a, ctx});
    }
    return out;
}

Outcome tidy_matches_newton(const std::vector<ScaleSample>& sample) {
    auto t0 = Clock::now();
    std::size_t bad = 0;
    for (const auto& s : sample) {
        try {
            if (scale_tidy(s.a, s.ctx).scale_exponent != scale_newton(s.a, s.ctx)) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << sample.size() << " matrices, " << bad << " mismatches, " << secs << " s";
    return {bad == 0 && secs < 60, os.str()};
}

Outcome scale_power_and_determinant_laws(const std::vector<ScaleSample>& sample) {
    std::size_t bad = 0;
    for (const auto& s : sample) {
        long e = scale_newton(s.a, s.ctx);
        for (long n = 1; n <= 5; ++n)
            if (scale_newton(power(s.a, n), s.ctx) != n * e) ++bad;
        long e_inv = scale_newton(inverse(s.a), s.ctx);
        if (e - e_inv != -vp(determinant(s.a), s.ctx).value()) ++bad;
        if (scale_tidy(power(s.a, 3), s.ctx).scale_exponent != 3 * e) ++bad;
    }
    std::ostringstream os;
    os << sample.size() << " matrices, " << bad << " violations";
    return {bad == 0, os.str()};
}

Outcome power_map_oracle() {
    auto t0 = Clock::now();
    struct Case {
        std::string name;
        FiniteGroupTable table;
        std::size_t expected;
    };
    std::vector<Case> cases;
    for (std::uint64_t p : {2, 3, 5})
        for (unsigned m = 1; m <= 3; ++m) {
            PContext ctx(p);
            std::uint64_t q = pow_u64(p, m);
            cases.push_back({"units mod " + std::to_string(q), enumerate(ctx, m, unit_generators(p, m)),
                             static_cast<std::size_t>(q / p * (p - 1))});
        }
    for (auto [p, m, order] : std::vector<std::tuple<std::uint64_t, unsigned, std::size_t>>{
             {2, 1, 6}, {2, 2, 96}, {3, 1, 48}, {3, 2, 3888}}) {
        PContext ctx(p);
        cases.push_back({"GL(2, Z/" + std::to_string(pow_u64(p, m)) + ")", enumerate(ctx, m, gl_generators(2, p, m)),
                         order});
    }
    std::size_t bad = 0, checks = 0;
    std::string first;
    for (const auto& c : cases) {
        if (c.table.order() != c.expected) {
            ++bad;
            if (first.empty()) first = c.name + " has order " + std::to_string(c.table.order());
        }
        for (std::uint64_t k = 1; k <= 30; ++k) {
            ++checks;
            if (!validate_f1(c.table, k).agree) {
                ++bad;
                if (first.empty()) first = c.name + " disagrees at k=" + std::to_string(k);
            }
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << cases.size() << " groups, " << checks << " checks, " << bad << " disagreements, " << secs << " s";
    if (!first.empty()) os << "; first: " << first;
    return {bad == 0 && secs < 60, os.str()};
}

Outcome unipotent_roots() {
    std::mt19937_64 rng(testing::kSeed + 4);
    std::size_t bad = 0;
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + t % 5;
        unsigned long k = 1 + rng() % 12;
        QMatrix u = testing::random_unipotent(rng, n, 20, t % 3 == 0);
        RootResult r = unipotent_root(u, k);
        if (!r.found() || !r.exact || power(*r.exact, static_cast<long>(k)) != u) ++bad;
    }
    std::ostringstream os;
    os << "100 unipotents, " << bad << " failures";
    return {bad == 0, os.str()};
}

PadicApproxMatrix random_congruence_element(std::mt19937_64& rng, const PContext& ctx, unsigned level, std::size_t n) {
    BigInt q = ctx.power(level);
    BigInt step = ctx.p() == 2 ? BigInt(4) : BigInt(ctx.p());
    std::vector<BigInt> entries(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BigInt x = BigInt(static_cast<unsigned long>(rng() % 1000000007ul)) * step;
            if (i == j) x += 1;
            mpz_mod(x.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
            entries[i * n + j] = x;
        }
    return PadicApproxMatrix(ctx, level, n, entries);
}

unsigned long random_coprime_exponent(std::mt19937_64& rng, std::uint64_t p) {
    for (;;) {
        unsigned long k = 1 + rng() % 12;
        if (k % p != 0) return k;
    }
}

Outcome congruence_roots() {
    std::mt19937_64 rng(testing::kSeed + 5);
    std::size_t bad = 0, total = 0;
    for (std::uint64_t p : {3, 5, 2}) {
        PContext ctx(p, 20);
        for (int t = 0; t < 100; ++t) {
            std::size_t n = 1 + t % 3;
            unsigned long k = random_coprime_exponent(rng, p);
            PadicApproxMatrix a = random_congruence_element(rng, ctx, 20, n);
            RootResult r = congruence_root(a, k);
            ++total;
            if (!r.found() || !r.approx || r.approx->level() != 20 || r.approx->pow(BigInt(k)) != a) ++bad;
        }
    }
    std::ostringstream os;
    os << total << " inputs mod p^20, " << bad << " failures";
    return {bad == 0, os.str()};
}

Outcome flag_worked_example() {
    PContext ctx(3);
    QMatrix g1(2, 2, {1, 1, 0, 1});
    QMatrix g2(2, 2, {1, rational(1, 3), 0, 1});
    GeneratorSet g(ctx, {g1, g2});
    FlagDecomposition f = ku_flag(g);
    std::vector<std::string> problems;
    if (f.dims != std::vector<std::size_t>{0, 1, 2}) problems.push_back("dims");
    if (rank(f.flag_basis.columns(0, 1).concat(QMatrix(2, 1, {1, 0}))) != 1) problems.push_back("V_1");
    if (auto err = check_flag(g, f)) problems.push_back(*err);
    for (std::size_t b = 0; b < f.length(); ++b) {
        std::size_t lo = f.dims[b], sz = f.dims[b + 1] - lo;
        for (const QMatrix& c : f.conjugated) {
            QMatrix block = c.block(lo, lo, sz, sz);
            if (apply(block, f.quotient_lattices[b]) != f.quotient_lattices[b] ||
                apply(inverse(block), f.quotient_lattices[b]) != f.quotient_lattices[b])
                problems.push_back("quotient " + std::to_string(b + 1) + " lattice moved");
        }
    }
    std::ostringstream os;
    os << "dims";
    for (auto d : f.dims) os << ' ' << d;
    for (const auto& s : problems) os << "; " << s;
    return {problems.empty(), os.str()};
}

Outcome additive_examples() {
    std::size_t bad = 0;
    for (std::uint64_t p : {2, 3, 5, 7}) {
        PContext ctx(p);
        if (analyze(GroupSpec::catalog(GroupKind::AdditiveZp, ctx), p).conclusion != Conclusion::NotDense) ++bad;
        for (unsigned long k = 1; k <= 60; ++k)
            if (analyze(GroupSpec::catalog(GroupKind::AdditiveQp, ctx), k).conclusion != Conclusion::SurjectiveAndDense)
                ++bad;
    }
    std::ostringstream os;
    os << "p in {2,3,5,7}, " << bad << " wrong verdicts";
    return {bad == 0, os.str()};
}

bool coprime_to(unsigned long k, unsigned long m) { return std::gcd(k, m) == 1; }

Conclusion expected_verdict(GroupKind kind, std::uint64_t p, unsigned long k) {
    auto dense_if = [](bool b) { return b ? Conclusion::SurjectiveAndDense : Conclusion::NotDense; };
    switch (kind) {
        case GroupKind::GL_Zp:
            return dense_if(coprime_to(k, (p - 1) * (p + 1) * p));
        case GroupKind::UnitsZp:
        case GroupKind::AxB_ZpUnits:
            return dense_if(coprime_to(k, p == 2 ? 2 : (p - 1) * p));
        case GroupKind::GL_Qp:
        case GroupKind::Borel_Qp:
            return k == 1 ? Conclusion::SurjectiveAndDense : Conclusion::NotDense;
        default:
            return Conclusion::SurjectiveAndDense;
    }
}

Outcome catalog_truth_table() {
    OracleCache cache;
    AnalyzeOptions opts;
    opts.cache = &cache;
    std::size_t bad = 0, rows = 0, confirmed = 0;
    std::string first;
    for (std::uint64_t p : {2, 3, 5}) {
        PContext ctx(p);
        std::vector<GroupSpec> groups{
            GroupSpec::catalog(GroupKind::GL_Zp, ctx, 2),      GroupSpec::catalog(GroupKind::UnitsZp, ctx),
            GroupSpec::catalog(GroupKind::AxB_ZpUnits, ctx),   GroupSpec::catalog(GroupKind::GL_Qp, ctx, 2),
            GroupSpec::catalog(GroupKind::Borel_Qp, ctx, 2),   GroupSpec::catalog(GroupKind::UpperUnipotent_Qp, ctx, 3),
        };
        for (const auto& g : groups)
            for (unsigned long k : {2ul, 3ul, 5ul, 6ul, 7ul, static_cast<unsigned long>(p)}) {
                ++rows;
                PowerVerdict v = analyze(g, k, opts);
                bool oracle_ok = true;
                for (const auto& o : v.certificate.oracle) {
                    if (o.skipped) continue;
                    ++confirmed;
                    bool want = v.conclusion == Conclusion::SurjectiveAndDense;
                    if (want && !o.surjective) oracle_ok = false;
                }
                if (v.conclusion == Conclusion::NotDense && !v.certificate.oracle.empty()) {
                    bool any_fail = false;
                    for (const auto& o : v.certificate.oracle) any_fail |= !o.skipped && !o.surjective;
                    if (!any_fail && v.certificate.oracle.back().level >= 2 && !v.certificate.oracle.back().skipped)
                        oracle_ok = false;
                }
                if (v.conclusion != expected_verdict(g.kind, p, k) || !oracle_ok) {
                    ++bad;
                    if (first.empty())
                        first = g.name() + " p=" + std::to_string(p) + " k=" + std::to_string(k) + " gave " +
                                to_string(v.conclusion);
                }
            }
    }
    std::ostringstream os;
    os << rows << " rows over p in {2,3,5}, " << confirmed << " finite levels confirmed, " << bad << " mismatches";
    if (!first.empty()) os << "; first: " << first;
    return {bad == 0, os.str()};
}

Outcome invariant_sweep() {
    std::mt19937_64 rng(testing::kSeed + 9);
    std::size_t roots = 0, bounded = 0, flags = 0, violations = 0;
    std::string first;
    auto violation = [&](const std::string& what) {
        ++violations;
        if (first.empty()) first = what;
    };

    for (int t = 0; t < 60; ++t) {
        QMatrix u = testing::random_unipotent(rng, 1 + t % 4, 9, true);
        unsigned long k = 1 + rng() % 12;
        RootResult r = unipotent_root(u, k);
        if (r.found()) {
            ++roots;
            if (power(*r.exact, static_cast<long>(k)) != u) violation("unipotent root");
        }
    }
    for (std::uint64_t p : {2, 3, 5, 7}) {
        PContext ctx(p, 12);
        for (int t = 0; t < 40; ++t) {
            std::size_t n = 1 + t % 2;
            unsigned long k = 1 + rng() % 12;
            std::vector<BigInt> entries(n * n);
            for (;;) {
                std::vector<std::uint64_t> low(n * n);
                for (std::size_t i = 0; i < n * n; ++i) {
                    std::uint64_t x = rng() % pow_u64(p, 6);
                    entries[i] = BigInt(static_cast<unsigned long>(x));
                    low[i] = x % p;
                }
                if (invertible_mod_p(ModMatrix(n, p, low), p)) break;
            }
            PadicApproxMatrix a(ctx, 6, n, entries);
            RootResult r = finite_root(a, k);
            if (r.found()) {
                ++roots;
                if (r.approx->pow(BigInt(k)) != a.reduce(r.approx->level())) violation("finite root");
            }
            if (k % p != 0) {
                PadicApproxMatrix c = random_congruence_element(rng, ctx, 12, n);
                RootResult cr = congruence_root(c, k);
                if (cr.found()) {
                    ++roots;
                    if (cr.approx->pow(BigInt(k)) != c) violation("congruence root");
                } else {
                    violation("congruence root missing");
                }
            }
            ResidueScalar ua(ctx, BigInt(static_cast<unsigned long>(1 + rng() % (pow_u64(p, 6) - 1))), 6);
            if (!ua.is_unit()) continue;
            ResidueScalar ub(ctx, BigInt(static_cast<unsigned long>(rng() % pow_u64(p, 6))), 6);
            RootResult ar = axb_root(AxbElement{ua, ub}, k);
            if (ar.found()) {
                ++roots;
                AxbElement back = axb_power(*ar.axb, k);
                unsigned lvl = back.a.level();
                if (!(back.a == ua.reduce(lvl)) || !(back.b == ub.reduce(lvl)))
                    violation("semidirect root");
            }
        }
    }
    for (int t = 0; t < 80; ++t) {
        PContext ctx(testing::pick_prime(rng));
        std::vector<QMatrix> gens;
        std::size_t count = 1 + t % 2;
        for (std::size_t i = 0; i < count; ++i) gens.push_back(testing::random_invertible(rng, 2, 4));
        GeneratorSet g(ctx, gens);
        BoundednessResult b = bounded_group(g);
        if (b.verdict == BoundednessResult::Verdict::Bounded) {
            ++bounded;
            if (!b.lattice) {
                violation("bounded without lattice");
                continue;
            }
            for (const auto& m : gens)
                if (apply(m, *b.lattice) != *b.lattice) violation("bounded lattice moved");
        }
    }
    for (int t = 0; t < 40; ++t) {
        PContext ctx(testing::pick_prime(rng));
        std::size_t n = 2 + t % 2;
        QMatrix s = testing::random_invertible(rng, n, 3);
        std::vector<QMatrix> gens;
        for (int i = 0; i < 2; ++i) gens.push_back(s * testing::random_unipotent(rng, n, 4, false) * inverse(s));
        if (t % 4 == 0) gens.push_back(s * QMatrix::diagonal(std::vector<ExactScalar>(n, ExactScalar(-1))) * inverse(s));
        GeneratorSet g(ctx, gens);
        try {
            FlagDecomposition f = ku_flag(g, FlagCaps{64, 32, 2});
            ++flags;
            if (auto err = check_flag(g, f)) violation("flag: " + *err);
        } catch (const FlagInconclusive&) {
        }
    }
    std::ostringstream os;
    os << "seed " << testing::kSeed << ", " << roots << " roots, " << bounded << " bounded groups, " << flags
       << " flags, " << violations << " violations";
    if (!first.empty()) os << "; first: " << first;
    return {violations == 0 && roots > 0 && bounded > 0 && flags > 0, os.str()};
}

}  // namespace

int main() {
    auto sample = scale_sample();
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"tidy scale matches Newton scale", [&] { return tidy_matches_newton(sample); }},
        {"scale power and determinant laws", [&] { return scale_power_and_determinant_laws(sample); }},
        {"power map coprimality against brute force", power_map_oracle},
        {"unipotent roots power back exactly", unipotent_roots},
        {"congruence roots mod p^20", congruence_roots},
        {"flag of the unipotent pair at p=3", flag_worked_example},
        {"additive group examples", additive_examples},
        {"catalog truth table with oracle confirmation", catalog_truth_table},
        {"invariant sweep", invariant_sweep},
    };
    int failures = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %d %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
