#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppm/dynamics.hpp"
#include "ppm/oracle.hpp"
#include "ppm/steinitz.hpp"

namespace ppm {

enum class GroupKind {
    AdditiveQp,
    AdditiveZp,
    UnitsZp,
    GL_Zp,
    GL_Qp,
    UpperUnipotent_Qp,
    Borel_Qp,
    AxB_ZpUnits,
    FinitelyGenerated,
};

struct GroupSpec {
    GroupKind kind;
    PContext ctx;
    std::size_t n = 1;
    std::shared_ptr<const GeneratorSet> gens;  // FinitelyGenerated only

    static GroupSpec catalog(GroupKind kind, const PContext& ctx, std::size_t n = 1);
    static GroupSpec generated(GeneratorSet gens);

    /// e.g. "GL_Zp(2)", "UnitsZp", "FinitelyGenerated(3 generators, n=2)".
    std::string name() const;
};

/// Parses "AdditiveQp(2)", "AdditiveZp", "UnitsZp", "GL_Zp(2)", "GL_Qp(2)", "UpperUnipotent_Qp(3)",
/// "Borel_Qp(2)", "AxB_ZpUnits" (also "AxB"). Missing dimensions default to 1. UnknownCatalogEntry otherwise.
GroupSpec parse_group_spec(const std::string& text, const PContext& ctx);

/// Hardcoded structure of a catalog group.
struct CatalogFacts {
    std::string unipotent_radical;  // split unipotent radical, "trivial" if none
    std::string quotient;           // the quotient by that radical
    bool quotient_compact;
    bool split_unipotent;  // the whole group is split unipotent
    std::optional<Supernatural> quotient_order;
};
CatalogFacts catalog_facts(const GroupSpec& spec);

enum class Conclusion { SurjectiveAndDense, NotDense, Inconclusive };
const char* to_string(Conclusion c);

struct Citation {
    std::string criterion;
    std::string detail;
};

struct OracleConfirmation {
    unsigned level;
    std::size_t order = 0;
    bool surjective = false;
    bool skipped = false;  // cap exceeded
};

struct Certificate {
    std::optional<Supernatural> order;
    std::size_t spot_checks = 0;
    std::size_t spot_successes = 0;
    std::optional<std::string> witness;
    std::optional<FlagDecomposition> flag;
    std::string flag_report;
    std::vector<OracleConfirmation> oracle;
};

struct PowerVerdict {
    unsigned long k = 1;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::vector<Citation> justification;
    Certificate certificate;

    bool cites(const std::string& criterion) const;
};

/// Finite quotient tables reused across analyses.
class OracleCache {
public:
    const FiniteGroupTable* get(const std::string& key) const;
    const FiniteGroupTable& put(const std::string& key, FiniteGroupTable table);
    /// Quotients that exceeded the enumeration cap.
    bool too_large(const std::string& key) const { return too_large_.count(key) > 0; }
    void mark_too_large(const std::string& key) { too_large_.insert(key); }

private:
    std::map<std::string, std::unique_ptr<FiniteGroupTable>> tables_;
    std::set<std::string> too_large_;
};

struct AnalyzeOptions {
    std::uint64_t seed = 20261016;
    std::size_t spot_checks = 50;
    /// Residue level of spot root extraction; 0 means the context precision.
    unsigned spot_level = 0;
    /// Confirm compact verdicts on enumerable quotients mod p^m for m up to this level.
    unsigned oracle_levels = 2;
    std::size_t oracle_cap = kDefaultEnumerationCap;
    OracleCache* cache = nullptr;
    /// Characteristic of the base field; only 0 (Q_p) is supported.
    std::uint64_t characteristic = 0;
    FlagCaps flag_caps{};
};

PowerVerdict analyze(const GroupSpec& spec, unsigned long k, const AnalyzeOptions& options = {});

/// sub must be contained in spec via the standard block embedding; NotASubgroup otherwise.
bool is_catalog_subgroup(const GroupSpec& spec, const GroupSpec& sub);

struct SubgroupVerdict {
    PowerVerdict parent;
    PowerVerdict sub;
    bool inherited = false;
};

SubgroupVerdict analyze_subgroup(const GroupSpec& spec, const GroupSpec& sub, unsigned long k,
                                 const AnalyzeOptions& options = {});

}  // namespace ppm
