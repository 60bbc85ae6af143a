#include "ppm/analyzer.hpp"

#include <gmpxx.h>

#include <numeric>
#include <regex>

#include "ppm/roots.hpp"

namespace ppm {

GroupSpec GroupSpec::catalog(GroupKind kind, const PContext& ctx, std::size_t n) {
    if (kind == GroupKind::FinitelyGenerated) throw Error(ErrorKind::InvalidArgument, "use GroupSpec::generated");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    return GroupSpec{kind, ctx, n, nullptr};
}

GroupSpec GroupSpec::generated(GeneratorSet gens) {
    auto shared = std::make_shared<const GeneratorSet>(std::move(gens));
    return GroupSpec{GroupKind::FinitelyGenerated, shared->ctx(), shared->dim(), shared};
}

std::string GroupSpec::name() const {
    const std::string dim = "(" + std::to_string(n) + ")";
    switch (kind) {
        case GroupKind::AdditiveQp: return "AdditiveQp" + dim;
        case GroupKind::AdditiveZp: return "AdditiveZp";
        case GroupKind::UnitsZp: return "UnitsZp";
        case GroupKind::GL_Zp: return "GL_Zp" + dim;
        case GroupKind::GL_Qp: return "GL_Qp" + dim;
        case GroupKind::UpperUnipotent_Qp: return "UpperUnipotent_Qp" + dim;
        case GroupKind::Borel_Qp: return "Borel_Qp" + dim;
        case GroupKind::AxB_ZpUnits: return "AxB_ZpUnits";
        case GroupKind::FinitelyGenerated:
            return "FinitelyGenerated(" + std::to_string(gens->gens().size()) + " generators, n=" + std::to_string(n) + ")";
    }
    return "?";
}

GroupSpec parse_group_spec(const std::string& text, const PContext& ctx) {
    static const std::regex form(R"(\s*([A-Za-z_]+)\s*(?:\(\s*(\d+)\s*\))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, form)) throw Error(ErrorKind::UnknownCatalogEntry, "unknown group \"" + text + "\"");
    const std::string id = m[1];
    std::size_t n = 1;
    if (m[2].matched) {
        if (m[2].length() > 3) throw Error(ErrorKind::InvalidArgument, "dimension too large");
        n = std::stoul(m[2]);
    }
    static const std::map<std::string, GroupKind> names{
        {"AdditiveQp", GroupKind::AdditiveQp},   {"AdditiveZp", GroupKind::AdditiveZp},
        {"UnitsZp", GroupKind::UnitsZp},         {"GL_Zp", GroupKind::GL_Zp},
        {"GL_Qp", GroupKind::GL_Qp},             {"UpperUnipotent_Qp", GroupKind::UpperUnipotent_Qp},
        {"Borel_Qp", GroupKind::Borel_Qp},       {"AxB_ZpUnits", GroupKind::AxB_ZpUnits},
        {"AxB", GroupKind::AxB_ZpUnits},
    };
    auto it = names.find(id);
    if (it == names.end()) throw Error(ErrorKind::UnknownCatalogEntry, "unknown group \"" + text + "\"");
    const bool scalar = it->second == GroupKind::AdditiveZp || it->second == GroupKind::UnitsZp ||
                        it->second == GroupKind::AxB_ZpUnits;
    if (scalar && n != 1) throw Error(ErrorKind::InvalidArgument, id + " has no dimension parameter");
    return GroupSpec::catalog(it->second, ctx, n);
}

namespace {

Supernatural units_order(const PContext& ctx) {
    return ord_catalog({CatalogId::UnitsZp}, ctx);
}

}  // namespace

CatalogFacts catalog_facts(const GroupSpec& spec) {
    const PContext& ctx = spec.ctx;
    const std::string n = std::to_string(spec.n);
    switch (spec.kind) {
        case GroupKind::AdditiveQp:
            return {"Q_p^" + n, "trivial", true, true, Supernatural()};
        case GroupKind::UpperUnipotent_Qp:
            return {"U_" + n + "(Q_p)", "trivial", true, true, Supernatural()};
        case GroupKind::AdditiveZp:
            return {"trivial", "Z_p", true, false, ord_catalog({CatalogId::AdditiveZp}, ctx)};
        case GroupKind::UnitsZp:
            return {"trivial", "Z_p^*", true, false, units_order(ctx)};
        case GroupKind::GL_Zp:
            return {"trivial", "GL_" + n + "(Z_p)", true, false, ord_catalog({CatalogId::GLn_Zp, spec.n}, ctx)};
        case GroupKind::GL_Qp:
            return {"trivial", "GL_" + n + "(Q_p)", false, false, std::nullopt};
        case GroupKind::Borel_Qp:
            return {"U_" + n + "(Q_p)", "diagonal torus (Q_p^*)^" + n, false, false, std::nullopt};
        case GroupKind::AxB_ZpUnits:
            return {"Q_p", "Z_p^*", true, false, units_order(ctx)};
        case GroupKind::FinitelyGenerated:
            break;
    }
    throw Error(ErrorKind::InvalidArgument, "no catalog facts for finitely generated groups");
}

const char* to_string(Conclusion c) {
    switch (c) {
        case Conclusion::SurjectiveAndDense: return "SurjectiveAndDense";
        case Conclusion::NotDense: return "NotDense";
        case Conclusion::Inconclusive: return "Inconclusive";
    }
    return "?";
}

bool PowerVerdict::cites(const std::string& criterion) const {
    return std::any_of(justification.begin(), justification.end(), [&](const Citation& c) { return c.criterion == criterion; });
}

const FiniteGroupTable* OracleCache::get(const std::string& key) const {
    auto it = tables_.find(key);
    return it == tables_.end() ? nullptr : it->second.get();
}

const FiniteGroupTable& OracleCache::put(const std::string& key, FiniteGroupTable table) {
    auto& slot = tables_[key];
    slot = std::make_unique<FiniteGroupTable>(std::move(table));
    return *slot;
}

namespace {

class SpotRng {
public:
    explicit SpotRng(std::uint64_t seed) : state_(gmp_randinit_default) { state_.seed(static_cast<unsigned long>(seed)); }
    BigInt below(const BigInt& bound) { return state_.get_z_range(bound); }
    BigInt unit(const PContext& ctx, unsigned level) {
        const BigInt q = ctx.power(level);
        for (;;) {
            BigInt x = below(q);
            if (!mpz_divisible_ui_p(x.get_mpz_t(), ctx.p())) return x;
        }
    }
    ExactScalar rational(long bound) {
        BigInt num = below(2 * bound + 1) - bound;
        BigInt den = below(bound) + 1;
        ExactScalar q(num, den);
        q.canonicalize();
        return q;
    }

private:
    gmp_randclass state_;
};

constexpr std::size_t kSpotCandidateLimit = 100'000;

/// Root extraction on random elements of a compact or unipotent catalog group.
void spot_check(const GroupSpec& spec, unsigned long k, const AnalyzeOptions& opt, PowerVerdict& v) {
    const PContext& ctx = spec.ctx;
    const unsigned level = opt.spot_level ? opt.spot_level : ctx.precision();
    SpotRng rng(opt.seed ^ (k * 0x9e3779b97f4a7c15ULL));
    std::size_t tried = 0, ok = 0;
    std::string how;
    for (std::size_t t = 0; t < opt.spot_checks; ++t) {
        switch (spec.kind) {
            case GroupKind::GL_Zp: {
                if (ctx.power(static_cast<unsigned>(spec.n * spec.n)) > BigInt(static_cast<unsigned long>(kSpotCandidateLimit))) {
                    how = "skipped: residue search space too large";
                    break;
                }
                std::vector<BigInt> e;
                PadicApproxMatrix a = [&] {
                    for (;;) {
                        e.clear();
                        for (std::size_t i = 0; i < spec.n * spec.n; ++i) e.push_back(rng.below(ctx.power(level)));
                        try {
                            return PadicApproxMatrix(ctx, level, spec.n, e);
                        } catch (const Error&) {
                        }
                    }
                }();
                ++tried;
                ok += finite_root(a, k).found();
                how = "finite_root on random elements mod p^" + std::to_string(level);
                break;
            }
            case GroupKind::UnitsZp: {
                PadicApproxMatrix a(ctx, level, 1, {rng.unit(ctx, level)});
                ++tried;
                ok += finite_root(a, k).found();
                how = "finite_root on random units mod p^" + std::to_string(level);
                break;
            }
            case GroupKind::AdditiveZp: {
                ResidueScalar b(ctx, rng.below(ctx.power(level)), level);
                ResidueScalar kk(ctx, BigInt(k) % ctx.power(level), level);
                ++tried;
                if (kk.is_unit()) ok += kk * (kk.inverse() * b) == b;
                how = "b / k mod p^" + std::to_string(level);
                break;
            }
            case GroupKind::AxB_ZpUnits: {
                AxbElement x{ResidueScalar(ctx, rng.unit(ctx, level), level),
                             ResidueScalar(ctx, rng.below(ctx.power(level)), level)};
                ++tried;
                auto r = axb_root(x, k);
                ok += r.found() && r.verified_level == level;
                how = "axb_root on random pairs mod p^" + std::to_string(level);
                break;
            }
            case GroupKind::UpperUnipotent_Qp: {
                QMatrix u = QMatrix::identity(spec.n);
                for (std::size_t i = 0; i < spec.n; ++i)
                    for (std::size_t j = i + 1; j < spec.n; ++j) u(i, j) = rng.rational(50);
                ++tried;
                ok += unipotent_root(u, k).found();
                how = "exact unipotent_root on random elements";
                break;
            }
            case GroupKind::AdditiveQp: {
                QMatrix x(spec.n, 1);
                for (std::size_t i = 0; i < spec.n; ++i) x(i, 0) = rng.rational(50);
                ++tried;
                ok += ExactScalar(static_cast<long>(k)) * (ExactScalar(1, k) * x) == x;
                how = "exact division by k";
                break;
            }
            default:
                return;
        }
    }
    v.certificate.spot_checks = tried;
    v.certificate.spot_successes = ok;
    v.justification.push_back({"spot-root-extraction", std::to_string(ok) + "/" + std::to_string(tried) + " roots found (" + how + ")"});
    ensure(ok == tried, "spot root extraction failed on a group reported surjective");
}

std::string cache_key(const GroupSpec& spec, unsigned level) {
    return spec.name() + "@" + std::to_string(spec.ctx.p()) + "^" + std::to_string(level);
}

/// Compares the verdict with the power map on the quotients mod p^m, m <= oracle_levels.
void oracle_confirm(const GroupSpec& spec, unsigned long k, const AnalyzeOptions& opt, PowerVerdict& v) {
    const std::uint64_t p = spec.ctx.p();
    GroupSpec model = spec;
    if (spec.kind == GroupKind::AxB_ZpUnits) model = GroupSpec::catalog(GroupKind::UnitsZp, spec.ctx);
    bool all = true, beyond_first = false;
    std::string detail;
    for (unsigned m = 1; m <= opt.oracle_levels; ++m) {
        const std::uint64_t q = pow_u64(p, m);
        OracleConfirmation c{m};
        const FiniteGroupTable* table = opt.cache ? opt.cache->get(cache_key(model, m)) : nullptr;
        std::optional<FiniteGroupTable> local;
        const std::string key = cache_key(model, m);
        if (!table && !(opt.cache && opt.cache->too_large(key))) {
            std::vector<ModMatrix> gens;
            switch (model.kind) {
                case GroupKind::GL_Zp: gens = gl_generators(model.n, p, m); break;
                case GroupKind::UnitsZp: gens = unit_generators(p, m); break;
                case GroupKind::AdditiveZp: gens = {ModMatrix(2, q, {1, 1, 0, 1})}; break;
                default: return;
            }
            try {
                FiniteGroupTable t = enumerate(model.ctx, m, gens, opt.oracle_cap);
                if (opt.cache) table = &opt.cache->put(key, std::move(t));
                else table = &local.emplace(std::move(t));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::CapExceeded) throw;
                if (opt.cache) opt.cache->mark_too_large(key);
            }
        }
        if (table) {
            c.order = table->order();
            c.surjective = power_surjective(*table, k).surjective;
            all = all && c.surjective;
            beyond_first = beyond_first || m >= 2;
            detail += (detail.empty() ? "" : ", ") + std::string("mod p^") + std::to_string(m) + ": order " +
                      std::to_string(c.order) + (c.surjective ? " surjective" : " not surjective");
        } else {
            c.skipped = true;
            detail += (detail.empty() ? "" : ", ") + std::string("mod p^") + std::to_string(m) + ": skipped (cap)";
        }
        v.certificate.oracle.push_back(c);
    }
    if (detail.empty()) return;
    v.justification.push_back({"finite-quotient-oracle", detail});
    if (v.conclusion == Conclusion::SurjectiveAndDense) ensure(all, "finite quotient oracle disagrees with the verdict");
    else if (beyond_first) ensure(!all, "finite quotient oracle disagrees with the verdict");
}

std::string describe_flag(const FlagDecomposition& f) {
    std::string s = "flag dims";
    for (auto d : f.dims) s += " " + std::to_string(d);
    s += "; quotients:";
    for (auto o : f.origins) s += std::string(" ") + to_string(o);
    return s;
}

}  // namespace

PowerVerdict analyze(const GroupSpec& spec, unsigned long k, const AnalyzeOptions& opt) {
    if (opt.characteristic != 0)
        throw Error(ErrorKind::UnsupportedCharacteristic,
                    "only characteristic 0 (Q_p) is supported; requested " + std::to_string(opt.characteristic));
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
    PowerVerdict v;
    v.k = k;
    const std::uint64_t p = spec.ctx.p();
    auto dense_iff = [&] {
        v.justification.push_back({"dense-iff-surjective", "density of the k-th powers and surjectivity coincide here"});
    };

    if (k == 1) {
        v.conclusion = Conclusion::SurjectiveAndDense;
        v.justification.push_back({"trivial-power", "x -> x^1 is the identity"});
        dense_iff();
        return v;
    }

    if (spec.kind == GroupKind::FinitelyGenerated) {
        const GeneratorSet& g = *spec.gens;
        if (auto w = type_r_witness_search(g, opt.flag_caps.word_len)) {
            v.conclusion = Conclusion::NotDense;
            v.certificate.witness = w->to_string();
            v.justification.push_back({"type-r-necessary", "word " + w->to_string() +
                                                               " has an eigenvalue with absolute value different from 1"});
            dense_iff();
            return v;
        }
        v.conclusion = Conclusion::Inconclusive;
        v.justification.push_back({"type-r-necessary", "no word up to length " + std::to_string(opt.flag_caps.word_len) +
                                                           " violates the type R condition"});
        try {
            auto flag = ku_flag(g, opt.flag_caps);
            v.certificate.flag_report = describe_flag(flag);
            v.certificate.flag = std::move(flag);
            v.justification.push_back({"flag-decomposition", v.certificate.flag_report});
        } catch (const FlagInconclusive& e) {
            v.certificate.flag_report = std::string("partial flag: ") + e.what();
            v.justification.push_back({"flag-decomposition", v.certificate.flag_report});
        }
        v.justification.push_back({"no-positive-claim", "density is not decided from generators alone"});
        return v;
    }

    const CatalogFacts facts = catalog_facts(spec);
    v.justification.push_back({"catalog-structure", "split unipotent radical " + facts.unipotent_radical + ", quotient " +
                                                        facts.quotient + (facts.quotient_compact ? " (compact)" : " (not compact)")});

    if (facts.split_unipotent) {
        v.conclusion = Conclusion::SurjectiveAndDense;
        v.justification.push_back({"split-unipotent-divisible", "unipotent groups over Q_p are uniquely divisible (log/exp)"});
        dense_iff();
        spot_check(spec, k, opt, v);
        return v;
    }

    if (!facts.quotient_compact) {
        v.conclusion = Conclusion::NotDense;
        const std::string witness = "diag(" + std::to_string(p) + std::string(spec.n > 1 ? ", 1" : "") +
                                    std::string(spec.n > 2 ? ", ..." : "") + ")";
        v.certificate.witness = witness;
        v.justification.push_back({"split-torus-obstruction",
                                   "the quotient contains a split torus; " + witness +
                                       " has determinant valuation 1, while k-th powers lie in the open subgroup with "
                                       "determinant valuation in " + std::to_string(k) + "Z"});
        dense_iff();
        return v;
    }

    const Supernatural& order = *facts.quotient_order;
    v.certificate.order = order;
    const bool coprime_k = profinite_surjective(BigInt(k), order);
    v.conclusion = coprime_k ? Conclusion::SurjectiveAndDense : Conclusion::NotDense;
    v.justification.push_back({"profinite-coprime-order", "Ord = " + to_string(order) + ", k = " + std::to_string(k) +
                                                              (coprime_k ? " is coprime" : " shares a prime")});
    if (spec.kind == GroupKind::AxB_ZpUnits) {
        v.justification.push_back({"split-unipotent-divisible", "the normal subgroup Q_p is divisible"});
        v.justification.push_back({"normal-subgroup-composite",
                                   std::string("surjective on Q_p and ") + (coprime_k ? "" : "not ") + "on the quotient Z_p^*"});
    }
    if (coprime_k && spec.kind != GroupKind::AdditiveZp)
        v.justification.push_back({"nilpotent-extension-lift", "roots lift level by level through the congruence filtration"});
    dense_iff();
    if (coprime_k) spot_check(spec, k, opt, v);
    oracle_confirm(spec, k, opt, v);
    return v;
}

namespace {

bool is_algebraic(GroupKind k) {
    return k == GroupKind::AdditiveQp || k == GroupKind::GL_Qp || k == GroupKind::UpperUnipotent_Qp || k == GroupKind::Borel_Qp;
}

bool is_profinite(GroupKind k) {
    return k == GroupKind::AdditiveZp || k == GroupKind::UnitsZp || k == GroupKind::GL_Zp;
}

bool generators_fit(const GeneratorSet& g, const GroupSpec& spec) {
    if (g.dim() != spec.n) return false;
    const std::uint64_t p = spec.ctx.p();
    auto integral = [&](const QMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!is_p_integral(m(i, j), p)) return false;
        return true;
    };
    for (std::size_t t = 0; t < g.gens().size(); ++t) {
        const QMatrix& m = g.gens()[t];
        bool upper = true, unitri = true;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < i; ++j) upper = upper && m(i, j) == 0;
            unitri = unitri && m(i, i) == 1;
        }
        switch (spec.kind) {
            case GroupKind::GL_Qp: break;
            case GroupKind::GL_Zp:
                if (!integral(m) || !integral(g.inverses()[t])) return false;
                break;
            case GroupKind::Borel_Qp:
                if (!upper) return false;
                break;
            case GroupKind::UpperUnipotent_Qp:
                if (!upper || !unitri) return false;
                break;
            default: return false;
        }
    }
    return true;
}

}  // namespace

bool is_catalog_subgroup(const GroupSpec& spec, const GroupSpec& sub) {
    if (spec.ctx.p() != sub.ctx.p()) return false;
    using K = GroupKind;
    const std::size_t n = spec.n, m = sub.n;
    if (sub.kind == K::FinitelyGenerated) {
        if (spec.kind == K::FinitelyGenerated) return spec.gens == sub.gens;
        return generators_fit(*sub.gens, spec);
    }
    if (spec.kind == K::FinitelyGenerated) return false;
    if (spec.kind == sub.kind) return m <= n;
    switch (sub.kind) {
        case K::AdditiveZp:
            return spec.kind == K::AdditiveQp || spec.kind == K::AxB_ZpUnits ||
                   (n >= 2 && (spec.kind == K::GL_Zp || spec.kind == K::GL_Qp || spec.kind == K::UpperUnipotent_Qp ||
                               spec.kind == K::Borel_Qp));
        case K::AdditiveQp:
            return (m == 1 && spec.kind == K::AxB_ZpUnits) ||
                   (m + 1 <= n && (spec.kind == K::UpperUnipotent_Qp || spec.kind == K::Borel_Qp || spec.kind == K::GL_Qp));
        case K::UnitsZp:
            return spec.kind == K::GL_Zp || spec.kind == K::GL_Qp || spec.kind == K::Borel_Qp || spec.kind == K::AxB_ZpUnits;
        case K::GL_Zp:
        case K::Borel_Qp:
            return m <= n && spec.kind == K::GL_Qp;
        case K::UpperUnipotent_Qp:
            return m <= n && (spec.kind == K::Borel_Qp || spec.kind == K::GL_Qp);
        case K::AxB_ZpUnits:
            return n >= 2 && (spec.kind == K::Borel_Qp || spec.kind == K::GL_Qp);
        default:
            return false;
    }
}

SubgroupVerdict analyze_subgroup(const GroupSpec& spec, const GroupSpec& sub, unsigned long k, const AnalyzeOptions& opt) {
    if (!is_catalog_subgroup(spec, sub))
        throw Error(ErrorKind::NotASubgroup, sub.name() + " is not a subgroup of " + spec.name());
    SubgroupVerdict r;
    r.parent = analyze(spec, k, opt);
    r.sub = analyze(sub, k, opt);
    if (r.parent.conclusion != Conclusion::SurjectiveAndDense) return r;

    std::string rule;
    if (is_algebraic(spec.kind) && is_algebraic(sub.kind)) rule = "algebraic-subgroup-inheritance";
    else if (is_profinite(spec.kind) && is_profinite(sub.kind)) rule = "profinite-subgroup-inheritance";
    if (!rule.empty()) {
        ensure(r.sub.conclusion == Conclusion::SurjectiveAndDense, "subgroup inheritance contradicted by direct analysis");
        r.inherited = true;
        r.sub.justification.push_back({rule, "inherited from " + spec.name()});
    } else if (r.sub.conclusion != Conclusion::SurjectiveAndDense) {
        r.sub.justification.push_back({"closed-subgroup-non-inheritance",
                                       sub.name() + " is closed in " + spec.name() + " but not algebraic; surjectivity does not pass down"});
    }
    return r;
}

}  // namespace ppm
