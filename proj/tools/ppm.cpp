#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ppm/io.hpp"

using namespace ppm;
using io::json;

namespace {

enum Exit { kOk = 0, kInconclusive = 2, kInputError = 3, kInternal = 4 };

struct Globals {
    std::optional<std::uint64_t> prime;
    unsigned precision = 20;
    bool json_out = false;
    std::uint64_t seed = 20261016;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvariantViolation: return kInternal;
        case ErrorKind::Inconclusive:
        case ErrorKind::CapExceeded:
        case ErrorKind::PrecisionExhausted: return kInconclusive;
        default: return kInputError;
    }
}

void emit(const Globals& g, const json& j, const std::string& text) {
    if (g.json_out) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

PContext context(const Globals& g, const json& doc) { return PContext(io::resolve_prime(doc, g.prime), g.precision); }

PContext context(const Globals& g) {
    if (!g.prime) throw Error(ErrorKind::InvalidArgument, "no prime given: use -p");
    return PContext(*g.prime, g.precision);
}

std::string matrix_text(const QMatrix& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

std::string lattice_text(const Lattice& l) {
    std::string s = "exponents";
    for (long e : l.exponents()) s += " " + std::to_string(e);
    return s + "\nbasis " + matrix_text(l.basis()) + "\n";
}

int run_scale(const Globals& g, const std::string& path) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    QMatrix a = io::matrix_from_json(doc);
    long e = scale_newton(a, ctx), inv = scale_newton(inverse(a), ctx);
    BigInt s;
    mpz_ui_pow_ui(s.get_mpz_t(), ctx.p(), static_cast<unsigned long>(e));
    emit(g, {{"p", ctx.p()}, {"scale_exponent", e}, {"scale", s.get_str()}, {"inverse_scale_exponent", inv}},
         "s(A) = " + std::to_string(ctx.p()) + "^" + std::to_string(e) + "\ns(A^-1) = " + std::to_string(ctx.p()) + "^" +
             std::to_string(inv) + "\n");
    return kOk;
}

int run_tidy(const Globals& g, const std::string& path, std::optional<std::size_t> cap) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    QMatrix a = io::matrix_from_json(doc);
    try {
        ScaleReport r = scale_tidy(a, ctx, std::nullopt, cap);
        std::string text = "scale exponent " + std::to_string(r.scale_exponent) + " after " + std::to_string(r.iterations()) +
                           " tidying steps\ntrace";
        for (const auto& [k, e] : r.iteration_trace) text += " (" + std::to_string(k) + ", " + std::to_string(e) + ")";
        text += "\nminimizing lattice " + lattice_text(r.minimizing_lattice);
        emit(g, io::scale_report_to_json(r), text);
        return kOk;
    } catch (const TidyCapExceeded& e) {
        json trace = json::array();
        for (const auto& [k, x] : e.trace()) trace.push_back({{"step", k}, {"exponent", x}});
        emit(g, {{"error", "CapExceeded"}, {"message", e.what()}, {"trace", trace}}, std::string(e.what()) + "\n");
        return kInconclusive;
    }
}

int run_typer(const Globals& g, const std::string& path, std::size_t word_len) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    GeneratorSet gens(ctx, io::generators_from_json(doc));
    json per = json::array();
    std::string text;
    for (std::size_t i = 0; i < gens.gens().size(); ++i) {
        bool r = type_r_matrix(gens.gens()[i], ctx);
        per.push_back({{"generator", i + 1}, {"type_r", r}});
        text += "g" + std::to_string(i + 1) + (r ? " type R\n" : " not type R\n");
    }
    auto w = type_r_witness_search(gens, word_len);
    json out{{"p", ctx.p()}, {"generators", per}, {"word_len", word_len}, {"witness", w ? json(w->to_string()) : json(nullptr)}};
    text += w ? "witness " + w->to_string() + "\n" : "no witness up to length " + std::to_string(word_len) + "\n";
    emit(g, out, text);
    return kOk;
}

int run_flag(const Globals& g, const std::string& path, const FlagCaps& caps) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    GeneratorSet gens(ctx, io::generators_from_json(doc));
    try {
        FlagDecomposition f = ku_flag(gens, caps);
        std::string text = "flag dims";
        for (auto d : f.dims) text += " " + std::to_string(d);
        text += "\nbasis " + matrix_text(f.flag_basis) + "\n";
        for (std::size_t b = 0; b < f.length(); ++b)
            text += "quotient " + std::to_string(b + 1) + " (" + to_string(f.origins[b]) + "): " + lattice_text(f.quotient_lattices[b]);
        emit(g, io::flag_to_json(f), text);
        return kOk;
    } catch (const NotTypeRError& e) {
        emit(g, {{"error", "NotTypeR"}, {"witness", e.witness().to_string()}, {"message", e.what()}},
             std::string("not type R: ") + e.what() + "\n");
        return kInputError;
    } catch (const FlagInconclusive& e) {
        emit(g,
             {{"error", "Inconclusive"}, {"message", e.what()}, {"partial_dims", e.partial_dims()},
              {"partial_basis", io::matrix_to_json(e.partial_basis(), ctx.p())}},
             std::string("inconclusive: ") + e.what() + "\n");
        return kInconclusive;
    }
}

int run_order(const Globals& g, const std::string& what, std::size_t n, unsigned level, std::optional<unsigned long> k) {
    Supernatural order;
    std::string label = what;
    if (!what.empty() && std::isdigit(static_cast<unsigned char>(what.front()))) {
        order = parse_supernatural(what);
    } else {
        CatalogId id = parse_catalog_id(what);
        order = ord_catalog({id, n, level}, context(g));
        if (id == CatalogId::GLn_Zp || id == CatalogId::PrincipalCongruence) label += "(" + std::to_string(n) + ")";
    }
    json out{{"group", label}, {"order", to_string(order)}};
    std::string text = "Ord(" + label + ") = " + to_string(order) + "\n";
    if (k) {
        bool s = profinite_surjective(*k, order);
        out["k"] = *k;
        out["coprime"] = s;
        out["surjective"] = s;
        text += "k = " + std::to_string(*k) + (s ? " is coprime: P_k surjective\n" : " is not coprime: P_k not surjective\n");
    }
    emit(g, out, text);
    return kOk;
}

int run_root(const Globals& g, const std::string& path, const std::string& kind, unsigned long k, std::optional<unsigned> level_opt) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    const unsigned level = level_opt.value_or(g.precision);
    RootResult r;
    if (kind == "unipotent") r = unipotent_root(io::matrix_from_json(doc), k);
    else if (kind == "congruence") r = congruence_root(PadicApproxMatrix::from_rational(io::matrix_from_json(doc), ctx, level), k);
    else if (kind == "finite") r = finite_root(PadicApproxMatrix::from_rational(io::matrix_from_json(doc), ctx, level), k);
    else r = axb_root(io::axb_from_json(doc, ctx, level), k);

    std::string text = std::string(to_string(r.status)) + "\n";
    if (r.exact) text += matrix_text(*r.exact) + "\n";
    if (r.approx) {
        std::ostringstream os;
        os << *r.approx;
        text += os.str() + "\n";
    }
    if (r.axb) text += "(" + r.axb->a.value().get_str() + ", " + r.axb->b.value().get_str() + ") mod " + std::to_string(ctx.p()) + "^" +
                       std::to_string(r.axb->a.level()) + "\n";
    if (!r.reason.empty()) text += r.reason + "\n";
    emit(g, io::root_result_to_json(r), text);
    return kOk;
}

int run_oracle(const Globals& g, const std::string& path, unsigned level, unsigned long k, std::size_t cap) {
    json doc = io::read_json_file(path);
    PContext ctx = context(g, doc);
    std::vector<ModMatrix> gens;
    for (const auto& m : io::generators_from_json(doc)) gens.push_back(ModMatrix::from_rational(m, ctx.p(), level));
    FiniteGroupTable t = enumerate(ctx, level, gens, cap);
    PowerImage img = power_surjective(t, k);
    F1Check f1 = validate_f1(t, k);
    json out{{"order", t.order()}, {"image_size", img.image_size}, {"surjective", img.surjective}, {"f1_agree", f1.agree}};
    emit(g, out,
         "order " + std::to_string(t.order()) + "\nimage size " + std::to_string(img.image_size) + "\nsurjective " +
             (img.surjective ? "yes" : "no") + "\ncoprime criterion " + (f1.agree ? "agrees" : "DISAGREES") + "\n");
    return f1.agree ? kOk : kInternal;
}

GroupSpec group_from_argument(const Globals& g, const std::string& arg) {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
        json doc = io::read_json_file(arg);
        return GroupSpec::generated(GeneratorSet(context(g, doc), io::generators_from_json(doc)));
    }
    return parse_group_spec(arg, context(g));
}

std::string verdict_text(const GroupSpec& spec, const PowerVerdict& v) {
    std::string text = spec.name() + ", k = " + std::to_string(v.k) + ": " + to_string(v.conclusion) + "\n";
    for (const auto& c : v.justification) text += "  [" + c.criterion + "] " + c.detail + "\n";
    return text;
}

int run_analyze(const Globals& g, const std::string& group, unsigned long k, const std::string& sub, AnalyzeOptions opt) {
    opt.seed = g.seed;
    GroupSpec spec = group_from_argument(g, group);
    if (sub.empty()) {
        PowerVerdict v = analyze(spec, k, opt);
        emit(g, io::verdict_to_json(spec, v), verdict_text(spec, v));
        return v.conclusion == Conclusion::Inconclusive ? kInconclusive : kOk;
    }
    GroupSpec subgroup = group_from_argument(g, sub);
    SubgroupVerdict r = analyze_subgroup(spec, subgroup, k, opt);
    json out{{"group", io::verdict_to_json(spec, r.parent)}, {"subgroup", io::verdict_to_json(subgroup, r.sub)}, {"inherited", r.inherited}};
    emit(g, out, verdict_text(spec, r.parent) + verdict_text(subgroup, r.sub));
    return r.parent.conclusion == Conclusion::Inconclusive || r.sub.conclusion == Conclusion::Inconclusive ? kInconclusive : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power maps on p-adic matrix groups: scale, tidying, type R, flags, orders, roots, finite oracles and verdicts"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("-p,--prime", g.prime, "Prime p (may also come from the input file)");
    app.add_option("--precision", g.precision, "Residue working precision N")->check(CLI::PositiveNumber);
    app.add_flag("--json", g.json_out, "Machine-readable output");
    app.add_option("--seed", g.seed, "Seed for randomized spot checks");

    std::string input;
    auto* scale = app.add_subcommand("scale", "Scale exponent of a matrix from its Newton polygon");
    scale->add_option("input", input, "Matrix JSON file")->required();

    std::optional<std::size_t> tidy_cap;
    auto* tidy = app.add_subcommand("tidy", "Tidy a lattice for a matrix and report the minimizing lattice");
    tidy->add_option("input", input, "Matrix JSON file")->required();
    tidy->add_option("--cap", tidy_cap, "Maximum tidying steps");

    std::size_t word_len = 4;
    auto* typer = app.add_subcommand("typer", "Type R test of generators and short words");
    typer->add_option("input", input, "Generator JSON file")->required();
    typer->add_option("--word-len", word_len, "Longest word to sample");

    FlagCaps caps;
    auto* flag = app.add_subcommand("flag", "Flag with bounded quotient actions");
    flag->add_option("input", input, "Generator JSON file")->required();
    flag->add_option("--word-len", caps.word_len, "Longest word for the type R sampler");
    flag->add_option("--rounds", caps.rounds, "Saturation rounds");
    flag->add_option("--threshold", caps.divisor_threshold, "Elementary divisor divergence threshold");

    std::size_t order_n = 1;
    unsigned order_level = 1;
    std::optional<unsigned long> order_k;
    auto* order = app.add_subcommand("order", "Supernatural order of a catalog group, or a supernatural number to test");
    order->add_option("input", input, "GLn_Zp, UnitsZp, AdditiveZp, PrincipalCongruence, or e.g. \"2^4 * 3^inf\"")->required();
    order->add_option("-n", order_n, "Matrix size")->check(CLI::PositiveNumber);
    order->add_option("--level", order_level, "Congruence level")->check(CLI::PositiveNumber);
    order->add_option("-k", order_k, "Test surjectivity of the k-th power map")->check(CLI::PositiveNumber);

    std::string root_kind = "finite";
    unsigned long k = 2;
    std::optional<unsigned> root_level;
    auto* root = app.add_subcommand("root", "k-th roots");
    root->add_option("input", input, "Matrix JSON file, or {\"p\", \"a\", \"b\"} for --kind axb")->required();
    root->add_option("--kind", root_kind, "unipotent|congruence|finite|axb")
        ->check(CLI::IsMember({"unipotent", "congruence", "finite", "axb"}));
    root->add_option("-k", k, "Exponent")->required()->check(CLI::PositiveNumber);
    root->add_option("--level", root_level, "Residue level (default: precision)")->check(CLI::PositiveNumber);

    unsigned oracle_level = 1;
    std::size_t oracle_cap = kDefaultEnumerationCap;
    auto* oracle = app.add_subcommand("oracle", "Enumerate a finite matrix group mod p^m and test the k-th power map");
    oracle->add_option("input", input, "Generator JSON file")->required();
    oracle->add_option("--level", oracle_level, "Level m")->check(CLI::PositiveNumber);
    oracle->add_option("-k", k, "Exponent")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--cap", oracle_cap, "Element cap");

    std::string sub;
    AnalyzeOptions opt;
    auto* an = app.add_subcommand("analyze", "Density and surjectivity verdict for P_k");
    an->add_option("input", input, "Catalog group, e.g. GL_Zp(2), or a generator JSON file")->required();
    an->add_option("-k", k, "Exponent")->required()->check(CLI::PositiveNumber);
    an->add_option("--sub", sub, "Subgroup to analyze alongside");
    an->add_option("--characteristic", opt.characteristic, "Characteristic of the base field (only 0 is supported)");
    an->add_option("--spot-checks", opt.spot_checks, "Random root extractions for positive verdicts");
    an->add_option("--oracle-levels", opt.oracle_levels, "Finite quotient levels to confirm against");
    an->add_option("--word-len", opt.flag_caps.word_len, "Longest word for the type R sampler");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*scale) return run_scale(g, input);
        if (*tidy) return run_tidy(g, input, tidy_cap);
        if (*typer) return run_typer(g, input, word_len);
        if (*flag) return run_flag(g, input, caps);
        if (*order) return run_order(g, input, order_n, order_level, order_k);
        if (*root) return run_root(g, input, root_kind, k, root_level);
        if (*oracle) return run_oracle(g, input, oracle_level, k, oracle_cap);
        if (*an) return run_analyze(g, input, k, sub, opt);
    } catch (const Error& e) {
        if (g.json_out) std::cout << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
