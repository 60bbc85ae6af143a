#include "doctest.h"
#include "ppm/io.hpp"

using namespace ppm;
using io::json;

TEST_CASE("matrix documents round trip") {
    QMatrix m(2, 2, {rational(1, 3), -2, 0, rational(-5, 7)});
    json j = io::matrix_to_json(m, 3);
    CHECK(j["entries"][0][0] == "1/3");
    CHECK(io::matrix_from_json(j) == m);
    CHECK(io::matrix_from_json(json::parse(R"({"n": 1, "entries": [[4]]})")) == QMatrix(1, 1, {4}));
}

TEST_CASE("malformed matrix documents are parse errors") {
    for (const char* text : {R"({"entries": []})", R"({"n": 3, "entries": [["1"]]})", R"({"entries": [["1", "2"]]})",
                             R"({"entries": [["1/0"]]})", R"({"entries": [[1.5]]})", R"({"n": 1})"}) {
        try {
            io::matrix_from_json(json::parse(text));
            FAIL(text);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
        }
    }
}

TEST_CASE("prime resolution") {
    json doc = json::parse(R"({"p": 3})");
    CHECK(io::resolve_prime(doc, std::nullopt) == 3);
    CHECK(io::resolve_prime(doc, 3) == 3);
    CHECK(io::resolve_prime(json::object(), 5) == 5);
    CHECK_THROWS_AS(io::resolve_prime(doc, 5), Error);
    CHECK_THROWS_AS(io::resolve_prime(json::object(), std::nullopt), Error);
}

TEST_CASE("lattices carry the lattice tag") {
    PContext ctx(5);
    Lattice l = Lattice::diagonal(ctx, {-1, 2});
    json j = io::lattice_to_json(l);
    CHECK(j["lattice"] == true);
    CHECK(io::lattice_from_json(j, ctx) == l);
    CHECK_THROWS_AS(io::lattice_from_json(io::matrix_to_json(l.basis(), 5), ctx), Error);
}

TEST_CASE("generator documents") {
    std::vector<QMatrix> gens{QMatrix::identity(2), QMatrix(2, 2, {1, 1, 0, 1})};
    json j = io::generators_to_json(gens, 7);
    CHECK(io::generators_from_json(j) == gens);
    CHECK_THROWS_AS(io::generators_from_json(json::parse(R"({"gens": []})")), Error);
}

TEST_CASE("semidirect elements and verdicts") {
    PContext ctx(5);
    AxbElement x = io::axb_from_json(json::parse(R"({"p": 5, "a": "6", "b": "1/2"})"), ctx, 2);
    CHECK(x.a.value() == 6);
    CHECK(x.b.value() == 13);
    CHECK(io::axb_to_json(x)["b"] == "13");

    GroupSpec spec = GroupSpec::catalog(GroupKind::GL_Qp, ctx, 2);
    json v = io::verdict_to_json(spec, analyze(spec, 2));
    CHECK(v["conclusion"] == "NotDense");
    CHECK(v["citations"].size() >= 2);
    CHECK(v["certificate"]["witness"] == "diag(5, 1)");
}
