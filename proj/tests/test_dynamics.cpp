#include "doctest.h"
#include "generators.hpp"
#include "ppm/dynamics.hpp"
#include "ppm/scale.hpp"

using namespace ppm;

namespace {
QMatrix mat(std::size_t n, std::initializer_list<ExactScalar> entries) {
    return QMatrix(n, n, std::vector<ExactScalar>(entries));
}
}  // namespace

TEST_CASE("generator set validation") {
    PContext ctx(3);
    CHECK_THROWS_AS(GeneratorSet(ctx, {}), Error);
    CHECK_THROWS_AS(GeneratorSet(ctx, {mat(2, {1, 2, 2, 4})}), Error);
    CHECK_THROWS_AS(GeneratorSet(ctx, {QMatrix::identity(2), QMatrix::identity(3)}), Error);
}

TEST_CASE("words print and evaluate left to right") {
    PContext ctx(3);
    QMatrix a = mat(2, {1, 1, 0, 1}), b = mat(2, {0, -1, 1, 0});
    GeneratorSet g(ctx, {a, b});
    Word w{{{0, false}, {1, true}}};
    CHECK(w.to_string() == "g1*g2^-1");
    CHECK(w.evaluate(g) == a * inverse(b));
    CHECK(Word{}.to_string() == "e");
}

TEST_CASE("type_r_matrix examples") {
    PContext ctx(3);
    CHECK(type_r_matrix(QMatrix::identity(2), ctx));
    CHECK(type_r_matrix(mat(2, {1, ExactScalar(1, 3), 0, 1}), ctx));
    CHECK(type_r_matrix(QMatrix::diagonal({2, ExactScalar(1, 2)}), ctx));
    CHECK_FALSE(type_r_matrix(QMatrix::diagonal({3, 1}), ctx));
    CHECK_FALSE(type_r_matrix(QMatrix::diagonal({3, ExactScalar(1, 3)}), ctx));
    CHECK_THROWS_AS(type_r_matrix(mat(2, {1, 2, 2, 4}), ctx), Error);
}

TEST_CASE("type R agrees with vanishing scales in both directions") {
    std::mt19937_64 rng(testing::kSeed);
    for (int t = 0; t < 150; ++t) {
        PContext ctx(testing::pick_prime(rng));
        QMatrix a = testing::random_invertible(rng, 3, 6);
        bool zero = scale_newton(a, ctx) == 0 && scale_newton(inverse(a), ctx) == 0;
        CHECK(type_r_matrix(a, ctx) == zero);
    }
}

TEST_CASE("witness search finds the shortest offending word") {
    PContext ctx(3);
    GeneratorSet g(ctx, {mat(2, {1, 1, 0, 1}), mat(2, {1, 0, ExactScalar(1, 3), 1})});
    CHECK_FALSE(type_r_witness_search(g, 1).has_value());
    auto w = type_r_witness_search(g, 2);
    REQUIRE(w.has_value());
    CHECK(w->letters.size() == 2);
    CHECK_FALSE(type_r_matrix(w->evaluate(g), ctx));

    GeneratorSet bad(ctx, {QMatrix::identity(2), QMatrix::diagonal({3, 1})});
    auto w1 = type_r_witness_search(bad, 3);
    REQUIRE(w1.has_value());
    CHECK(w1->to_string() == "g2");
}

TEST_CASE("bounded_group examples") {
    PContext ctx(3);
    auto r = bounded_group(GeneratorSet(ctx, {mat(2, {0, -1, 1, 0})}));
    CHECK(r.verdict == BoundednessResult::Verdict::Bounded);
    CHECK(r.lattice == Lattice::standard(ctx, 2));

    auto u = bounded_group(GeneratorSet(ctx, {mat(2, {1, 1, 0, 1}), mat(2, {1, ExactScalar(1, 3), 0, 1})}));
    CHECK(u.verdict == BoundednessResult::Verdict::Bounded);
    CHECK(u.lattice == Lattice::diagonal(ctx, {-1, 0}));

    auto d = bounded_group(GeneratorSet(ctx, {mat(2, {1, 1, 0, 1}), QMatrix::diagonal({ExactScalar(1, 3), 1})}));
    CHECK(d.verdict == BoundednessResult::Verdict::Unbounded);
    CHECK(d.divisor_trace.back().front() < -32);

    auto small = bounded_group(GeneratorSet(ctx, {QMatrix::diagonal({3, 1})}), BoundednessCaps{5, 32});
    CHECK(small.verdict == BoundednessResult::Verdict::Inconclusive);
    CHECK(small.rounds == 5);
}

TEST_CASE("bounded lattices are invariant under random type R generators") {
    std::mt19937_64 rng(testing::kSeed + 1);
    int bounded = 0;
    for (int t = 0; t < 60; ++t) {
        PContext ctx(testing::pick_prime(rng));
        QMatrix a = testing::random_invertible(rng, 2, 5);
        if (!type_r_matrix(a, ctx)) continue;
        GeneratorSet g(ctx, {a});
        auto r = bounded_group(g);
        REQUIRE(r.verdict == BoundednessResult::Verdict::Bounded);
        CHECK(apply(a, *r.lattice) == *r.lattice);
        ++bounded;
    }
    CHECK(bounded > 5);
}

TEST_CASE("flag of a unipotent pair splits along fixed vectors") {
    PContext ctx(5);
    GeneratorSet g(ctx, {mat(2, {1, 1, 0, 1}), mat(2, {1, ExactScalar(1, 5), 0, 1})});
    auto f = ku_flag(g);
    CHECK(f.dims == std::vector<std::size_t>{0, 1, 2});
    CHECK(f.flag_basis.columns(0, 1) == QMatrix(2, 1, {1, 0}));
    CHECK(f.quotient_lattices[0] == Lattice::standard(ctx, 1));
    CHECK(f.quotient_lattices[1] == Lattice::standard(ctx, 1));
    CHECK(f.origins == std::vector<BlockOrigin>{BlockOrigin::FixedVectors, BlockOrigin::FixedVectors});
    CHECK_FALSE(check_flag(g, f).has_value());
}

TEST_CASE("compact groups give a single block") {
    PContext ctx(3);
    for (auto gens : std::vector<std::vector<QMatrix>>{{QMatrix::diagonal({2, ExactScalar(1, 2)})},
                                                      {QMatrix::identity(2)},
                                                      {mat(2, {1, 1, 0, 1}), mat(2, {0, -1, 1, 0})}}) {
        GeneratorSet g(ctx, gens);
        auto f = ku_flag(g);
        CHECK(f.length() == 1);
        CHECK_FALSE(check_flag(g, f).has_value());
    }
}

TEST_CASE("flag with a bounded nontrivial quotient") {
    PContext ctx(3);
    QMatrix g1(3, 3, {1, 1, 5, 0, 0, -1, 0, 1, 0});
    GeneratorSet g(ctx, {g1, QMatrix(3, 3, {1, ExactScalar(1, 3), 0, 0, 1, 0, 0, 0, 1})});
    auto f = ku_flag(g);
    CHECK(f.dims.front() == 0);
    CHECK(f.dims.back() == 3);
    CHECK_FALSE(check_flag(g, f).has_value());
    CHECK(f.origins.back() == BlockOrigin::BoundedQuotient);
}

TEST_CASE("ku_flag rejects sampled non type R words") {
    PContext ctx(3);
    GeneratorSet g(ctx, {mat(2, {1, 1, 0, 1}), mat(2, {1, 0, ExactScalar(1, 3), 1})});
    try {
        ku_flag(g, FlagCaps{64, 32, 3});
        FAIL("expected NotTypeR");
    } catch (const NotTypeRError& e) {
        CHECK(e.kind() == ErrorKind::NotTypeR);
        CHECK_FALSE(type_r_matrix(e.witness().evaluate(g), ctx));
    }
}

TEST_CASE("decreasing intersection extracts a bounded direction") {
    PContext ctx(3);
    FlagCaps caps{64, 32, 0};
    try {
        ku_flag(GeneratorSet(ctx, {QMatrix::diagonal({3, 2})}), caps);
        FAIL("expected Inconclusive");
    } catch (const FlagInconclusive& e) {
        CHECK(e.partial_dims() == std::vector<std::size_t>{0, 1});
        CHECK(rank(e.partial_basis().columns(0, 1).concat(QMatrix(2, 1, {0, 1}))) == 1);
    }

    QMatrix s = mat(2, {1, 2, 1, 3});
    try {
        ku_flag(GeneratorSet(ctx, {s * QMatrix::diagonal({3, 2}) * inverse(s)}), caps);
        FAIL("expected Inconclusive");
    } catch (const FlagInconclusive& e) {
        REQUIRE(e.partial_dims() == std::vector<std::size_t>{0, 1});
        CHECK(rank(e.partial_basis().columns(0, 1).concat(s.columns(1, 1))) == 1);
    }
}

TEST_CASE("check_flag reports broken flags") {
    PContext ctx(5);
    GeneratorSet g(ctx, {mat(2, {1, 1, 0, 1})});
    auto f = ku_flag(g);
    auto broken = f;
    broken.flag_basis = mat(2, {0, 1, 1, 0});
    CHECK(check_flag(g, broken).has_value());
    broken = f;
    broken.dims = {0, 2, 1};
    CHECK(check_flag(g, broken).has_value());
}

TEST_CASE("random conjugated unipotent groups admit certified flags") {
    std::mt19937_64 rng(testing::kSeed + 2);
    for (int t = 0; t < 25; ++t) {
        PContext ctx(testing::pick_prime(rng));
        QMatrix s = testing::random_invertible(rng, 3, 3);
        std::vector<QMatrix> gens;
        for (int k = 0; k < 2; ++k) gens.push_back(s * testing::random_unipotent(rng, 3, 4, false) * inverse(s));
        GeneratorSet g(ctx, gens);
        auto f = ku_flag(g, FlagCaps{64, 32, 2});
        CHECK_FALSE(check_flag(g, f).has_value());
    }
}
