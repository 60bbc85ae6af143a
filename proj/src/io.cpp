#include "ppm/io.hpp"

#include <fstream>

namespace ppm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains(name)) bad(std::string("missing field \"") + name + "\"");
    return doc.at(name);
}

ExactScalar scalar_from_json(const json& v) {
    if (v.is_string()) return parse_scalar(v.get<std::string>());
    if (v.is_number_integer()) return ExactScalar(BigInt(v.dump()));
    bad("scalars must be strings \"a/b\" or integers, got " + v.dump());
}

std::uint64_t prime_field(const json& v) {
    if (!v.is_number_unsigned()) bad("\"p\" must be a positive integer");
    return v.get<std::uint64_t>();
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
}

std::uint64_t resolve_prime(const json& doc, std::optional<std::uint64_t> cli_prime) {
    std::optional<std::uint64_t> file_prime;
    if (doc.is_object() && doc.contains("p")) file_prime = prime_field(doc.at("p"));
    if (file_prime && cli_prime && *file_prime != *cli_prime)
        throw Error(ErrorKind::InvalidArgument, "prime " + std::to_string(*cli_prime) + " on the command line disagrees with p = " +
                                                    std::to_string(*file_prime) + " in the input");
    if (file_prime) return *file_prime;
    if (cli_prime) return *cli_prime;
    throw Error(ErrorKind::InvalidArgument, "no prime given: use -p or a \"p\" field");
}

QMatrix matrix_from_json(const json& doc) {
    const json& rows = field(doc, "entries");
    if (!rows.is_array() || rows.empty()) bad("\"entries\" must be a non-empty array of rows");
    const std::size_t n = rows.size();
    if (doc.contains("n") && (!doc.at("n").is_number_unsigned() || doc.at("n").get<std::size_t>() != n))
        bad("\"n\" does not match the number of rows");
    QMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) bad("row " + std::to_string(i + 1) + " must have " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = scalar_from_json(rows[i][j]);
    }
    return m;
}

namespace {
json entries_to_json(const QMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}
}  // namespace

json matrix_to_json(const QMatrix& m, std::uint64_t p) { return {{"p", p}, {"n", m.rows()}, {"entries", entries_to_json(m)}}; }

json lattice_to_json(const Lattice& l) {
    json j = matrix_to_json(l.basis(), l.ctx().p());
    j["lattice"] = true;
    return j;
}

Lattice lattice_from_json(const json& doc, const PContext& ctx) {
    if (!doc.is_object() || !doc.contains("lattice") || doc.at("lattice") != true) bad("expected a lattice document");
    return Lattice::from_generators(ctx, matrix_from_json(doc));
}

std::vector<QMatrix> generators_from_json(const json& doc) {
    const json& list = field(doc, "gens");
    if (!list.is_array() || list.empty()) bad("\"gens\" must be a non-empty array of matrices");
    std::vector<QMatrix> gens;
    for (const auto& g : list) {
        if (g.is_object() && g.contains("p") && doc.contains("p") && g.at("p") != doc.at("p")) bad("generator primes disagree");
        gens.push_back(matrix_from_json(g));
    }
    return gens;
}

json generators_to_json(const std::vector<QMatrix>& gens, std::uint64_t p) {
    json list = json::array();
    for (const auto& g : gens) list.push_back(matrix_to_json(g, p));
    return {{"p", p}, {"gens", list}};
}

json residue_matrix_to_json(const PadicApproxMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(row);
    }
    return {{"p", m.ctx().p()}, {"n", m.dim()}, {"level", m.level()}, {"entries", rows}};
}

AxbElement axb_from_json(const json& doc, const PContext& ctx, unsigned level) {
    return {reduce_mod(scalar_from_json(field(doc, "a")), level, ctx), reduce_mod(scalar_from_json(field(doc, "b")), level, ctx)};
}

json axb_to_json(const AxbElement& x) {
    return {{"p", x.a.p()}, {"level", x.a.level()}, {"a", x.a.value().get_str()}, {"b", x.b.value().get_str()}};
}

json root_result_to_json(const RootResult& r) {
    json j{{"status", to_string(r.status)}};
    if (r.exact) j["root"] = {{"n", r.exact->rows()}, {"entries", entries_to_json(*r.exact)}};
    if (r.approx) j["root"] = residue_matrix_to_json(*r.approx);
    if (r.axb) j["root"] = axb_to_json(*r.axb);
    if (r.verified_level) j["verified_level"] = r.verified_level;
    if (r.status == RootResult::Status::NoRoot) j["witness_level"] = r.witness_level;
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json scale_report_to_json(const ScaleReport& r) {
    json trace = json::array();
    for (const auto& [k, e] : r.iteration_trace) trace.push_back({{"step", k}, {"exponent", e}});
    const auto p = r.minimizing_lattice.ctx().p();
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), p, static_cast<unsigned long>(r.scale_exponent));
    return {{"p", p},
            {"scale_exponent", r.scale_exponent},
            {"scale", scale.get_str()},
            {"iterations", r.iterations()},
            {"trace", trace},
            {"method_agreement", r.method_agreement},
            {"minimizing_lattice", lattice_to_json(r.minimizing_lattice)}};
}

json flag_to_json(const FlagDecomposition& f) {
    const auto p = f.quotient_lattices.front().ctx().p();
    json lattices = json::array(), origins = json::array(), conj = json::array();
    for (const auto& l : f.quotient_lattices) lattices.push_back(lattice_to_json(l));
    for (auto o : f.origins) origins.push_back(to_string(o));
    for (const auto& c : f.conjugated) conj.push_back(matrix_to_json(c, p));
    return {{"p", p},
            {"dims", f.dims},
            {"flag_basis", matrix_to_json(f.flag_basis, p)},
            {"origins", origins},
            {"quotient_lattices", lattices},
            {"conjugated_generators", conj}};
}

json verdict_to_json(const GroupSpec& spec, const PowerVerdict& v) {
    json citations = json::array(), steps = json::array();
    for (const auto& c : v.justification) {
        if (std::find(citations.begin(), citations.end(), c.criterion) == citations.end()) citations.push_back(c.criterion);
        steps.push_back({{"criterion", c.criterion}, {"detail", c.detail}});
    }
    json cert = json::object();
    if (v.certificate.order) cert["order"] = to_string(*v.certificate.order);
    if (v.certificate.spot_checks) cert["spot_checks"] = {{"tried", v.certificate.spot_checks}, {"found", v.certificate.spot_successes}};
    if (v.certificate.witness) cert["witness"] = *v.certificate.witness;
    if (v.certificate.flag) cert["flag"] = flag_to_json(*v.certificate.flag);
    if (!v.certificate.flag_report.empty()) cert["flag_report"] = v.certificate.flag_report;
    if (!v.certificate.oracle.empty()) {
        json levels = json::array();
        for (const auto& o : v.certificate.oracle) {
            json l{{"level", o.level}};
            if (o.skipped) l["skipped"] = true;
            else l.update({{"order", o.order}, {"surjective", o.surjective}});
            levels.push_back(l);
        }
        cert["oracle"] = levels;
    }
    return {{"group", spec.name()},   {"p", spec.ctx.p()},    {"k", v.k},
            {"conclusion", to_string(v.conclusion)}, {"citations", citations}, {"justification", steps},
            {"certificate", cert}};
}

}  // namespace ppm::io
