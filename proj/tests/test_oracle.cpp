#include <numeric>
#include <optional>

#include "doctest.h"
#include "generators.hpp"
#include "ppm/oracle.hpp"

using namespace ppm;

namespace {
ModMatrix m2(std::uint64_t q, std::vector<std::uint64_t> e) { return ModMatrix(2, q, std::move(e)); }
ModMatrix m1(std::uint64_t q, std::uint64_t v) { return ModMatrix(1, q, {v}); }

std::vector<ModMatrix> random_gens(std::mt19937_64& rng, std::uint64_t p, unsigned level, std::size_t n) {
    const std::uint64_t q = pow_u64(p, level);
    std::uniform_int_distribution<std::uint64_t> entry(0, q - 1);
    std::vector<ModMatrix> gens;
    std::size_t count = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    while (gens.size() < count) {
        ModMatrix m(n, q);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
        if (invertible_mod_p(m, p)) gens.push_back(m);
    }
    return gens;
}
std::optional<FiniteGroupTable> try_enumerate(std::uint64_t p, unsigned level, const std::vector<ModMatrix>& gens) {
    try {
        return enumerate(PContext(p), level, gens, 100'000);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CapExceeded) throw;
        return std::nullopt;
    }
}
}  // namespace

TEST_CASE("modular matrix basics") {
    ModMatrix a = m2(9, {2, 1, 0, 5});
    ModMatrix inv = inverse_mod(a, 3);
    CHECK((a * inv).is_identity());
    CHECK(a.pow(0).is_identity());
    CHECK(a.pow(3) == a * a * a);
    CHECK(a.reduce(3) == m2(3, {2, 1, 0, 2}));
    CHECK_THROWS_AS(inverse_mod(m2(9, {3, 0, 0, 1}), 3), Error);
    CHECK(ModMatrix::from_rational(QMatrix(2, 2, {rational(1, 2), -1, 0, 1}), 3, 2) == m2(9, {5, 8, 0, 1}));
    CHECK(mul_mod((1ULL << 62) + 1, (1ULL << 62) + 3, (1ULL << 62) + 7) == 24);
}

TEST_CASE("enumerate examples") {
    PContext ctx2(2), ctx3(3);
    auto gl22 = enumerate(ctx2, 1, {m2(2, {0, 1, 1, 0}), m2(2, {1, 1, 0, 1})});
    CHECK(gl22.order() == 6);
    CHECK(enumerate(ctx2, 1, {ModMatrix::identity(2, 2)}).order() == 1);
    auto u9 = enumerate(ctx3, 2, {m1(9, 2)});
    CHECK(u9.order() == 6);
    std::vector<ModMatrix> expected;
    for (std::uint64_t v : {1, 2, 4, 5, 7, 8}) expected.push_back(m1(9, v));
    CHECK(u9.elements() == expected);
    CHECK_THROWS_AS(enumerate(ctx3, 2, {m1(9, 3)}), Error);
    try {
        enumerate(ctx3, 2, gl_generators(2, 3, 2), 100);
        FAIL("expected CapExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CapExceeded);
    }
}

TEST_CASE("full linear groups have the expected orders") {
    CHECK(enumerate(PContext(2), 2, gl_generators(2, 2, 2)).order() == 96);
    CHECK(enumerate(PContext(3), 1, gl_generators(2, 3, 1)).order() == 48);
    CHECK(enumerate(PContext(3), 2, gl_generators(2, 3, 2)).order() == 3888);
    CHECK(enumerate(PContext(2), 1, gl_generators(3, 2, 1)).order() == 168);
    for (std::uint64_t p : {2, 3, 5})
        for (unsigned m = 1; m <= 3; ++m)
            CHECK(enumerate(PContext(p), m, unit_generators(p, m)).order() == gl_order(1, p, m).get_ui());
}

TEST_CASE("power_surjective examples") {
    PContext ctx(2);
    auto gl22 = enumerate(ctx, 1, gl_generators(2, 2, 1));
    CHECK(power_surjective(gl22, 5).surjective);
    auto cubes = power_surjective(gl22, 3);
    CHECK_FALSE(cubes.surjective);
    CHECK(cubes.image_size == 4);
    CHECK(power_surjective(gl22, 1).surjective);
}

TEST_CASE("validate_f1 examples") {
    auto u9 = enumerate(PContext(3), 2, {m1(9, 2)});
    auto five = validate_f1(u9, 5);
    CHECK(five.agree);
    CHECK(five.surjective);
    auto two = validate_f1(u9, 2);
    CHECK(two.agree);
    CHECK_FALSE(two.surjective);
    CHECK(power_surjective(u9, 2).image_size == 3);
    auto trivial = enumerate(PContext(5), 1, {ModMatrix::identity(2, 5)});
    for (std::uint64_t k = 1; k < 10; ++k) CHECK(validate_f1(trivial, k).agree);
}

TEST_CASE("validate_f1 agrees on random small groups") {
    std::mt19937_64 rng(testing::kSeed);
    for (int t = 0; t < 40; ++t) {
        std::uint64_t p = testing::pick_prime(rng);
        unsigned level = std::uniform_int_distribution<unsigned>(1, 2)(rng);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        auto table = try_enumerate(p, level, random_gens(rng, p, level, n));
        if (!table) continue;
        for (std::uint64_t k = 1; k <= 12; ++k) {
            auto c = validate_f1(*table, k);
            CHECK_MESSAGE(c.agree, c.details);
        }
    }
}

TEST_CASE("order is index times kernel order") {
    std::mt19937_64 rng(testing::kSeed + 1);
    for (int t = 0; t < 25; ++t) {
        std::uint64_t p = testing::pick_prime(rng);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        auto table = try_enumerate(p, 2, random_gens(rng, p, 2, n));
        if (!table) continue;
        CHECK(congruence_index_check(*table, 1).holds());
        CHECK(congruence_index_check(*table, 2).kernel_order == 1);
    }
    auto gl = enumerate(PContext(3), 2, gl_generators(2, 3, 2));
    auto c = congruence_index_check(gl, 1);
    CHECK(c.image_order == 48);
    CHECK(c.kernel_order == 81);
}

TEST_CASE("reduction maps the level two table onto level one") {
    for (std::uint64_t p : {2, 3}) {
        auto upper = enumerate(PContext(p), 2, gl_generators(2, p, 2));
        auto lower = enumerate(PContext(p), 1, gl_generators(2, p, 1));
        CHECK(reduction_compatible(upper, lower));
    }
    std::mt19937_64 rng(testing::kSeed + 2);
    for (int t = 0; t < 20; ++t) {
        std::uint64_t p = testing::pick_prime(rng);
        auto gens = random_gens(rng, p, 2, 2);
        std::vector<ModMatrix> reduced;
        for (const auto& g : gens) reduced.push_back(g.reduce(p));
        auto upper = try_enumerate(p, 2, gens);
        if (!upper) continue;
        CHECK(reduction_compatible(*upper, enumerate(PContext(p), 1, reduced)));
    }
}

TEST_CASE("surjectivity passes to subgroups") {
    std::mt19937_64 rng(testing::kSeed + 3);
    for (std::uint64_t p : {2, 3}) {
        auto gl = enumerate(PContext(p), 2, gl_generators(2, p, 2));
        for (int t = 0; t < 10; ++t) {
            auto sub = enumerate(PContext(p), 2, random_gens(rng, p, 2, 2));
            for (std::uint64_t k = 1; k <= 13; ++k) CHECK(subgroup_inherits(gl, sub, k));
        }
    }
    auto small = enumerate(PContext(3), 2, {m1(9, 2)});
    auto other = enumerate(PContext(3), 2, {ModMatrix::identity(2, 9)});
    CHECK_THROWS_AS(subgroup_inherits(small, other, 5), Error);
}
