#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppm/analyzer.hpp"
#include "ppm/roots.hpp"
#include "ppm/scale.hpp"

namespace ppm::io {

using nlohmann::json;

/// Reads and parses a JSON file; Parse errors for unreadable or malformed input.
json read_json_file(const std::string& path);

/// The prime from the document's "p" field, the command line, or both when they agree.
std::uint64_t resolve_prime(const json& doc, std::optional<std::uint64_t> cli_prime);

/// {"p": int, "n": int, "entries": [["a/b", ...], ...]}; entries may be strings or integers.
QMatrix matrix_from_json(const json& doc);
json matrix_to_json(const QMatrix& m, std::uint64_t p);

/// Canonical basis in the matrix format plus "lattice": true.
json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const json& doc, const PContext& ctx);

/// {"p": int, "gens": [matrix, ...]}; each matrix may omit "p".
std::vector<QMatrix> generators_from_json(const json& doc);
json generators_to_json(const std::vector<QMatrix>& gens, std::uint64_t p);

/// Residue matrices carry "level" and integer entries in [0, p^level).
json residue_matrix_to_json(const PadicApproxMatrix& m);

/// {"p": int, "a": scalar, "b": scalar}, reduced mod p^level.
AxbElement axb_from_json(const json& doc, const PContext& ctx, unsigned level);
json axb_to_json(const AxbElement& x);

json root_result_to_json(const RootResult& r);
json scale_report_to_json(const ScaleReport& r);
json flag_to_json(const FlagDecomposition& f);
json verdict_to_json(const GroupSpec& spec, const PowerVerdict& v);

}  // namespace ppm::io
