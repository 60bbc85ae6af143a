#include "doctest.h"
#include "generators.hpp"
#include "ppm/matrix.hpp"

using namespace ppm;

namespace {

QMatrix mat(std::size_t n, std::initializer_list<const char*> entries) {
    std::vector<ExactScalar> v;
    for (auto e : entries) v.push_back(parse_scalar(e));
    return QMatrix(n, n, v);
}

Polynomial poly(std::initializer_list<ExactScalar> c) { return Polynomial(c); }

ExactScalar evaluate(const Polynomial& f, const ExactScalar& x) {
    ExactScalar r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + *it;
    return r;
}

}  // namespace

TEST_CASE("char_poly examples") {
    CHECK(char_poly(QMatrix::identity(2)) == poly({1, -2, 1}));
    const long p = 3;
    CHECK(char_poly(QMatrix::diagonal({ExactScalar(1, p), 1})) ==
          poly({ExactScalar(1, p), -(1 + ExactScalar(1, p)), 1}));
    CHECK(char_poly(mat(2, {"0", "3", "1", "0"})) == poly({-3, 0, 1}));
}

TEST_CASE("char_poly agrees with det(xI - A) at sample points") {
    // Independent route: Gaussian-elimination determinants at n + 2 rational points.
    std::mt19937_64 rng(testing::kSeed);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + trial % 5;
        QMatrix a = testing::random_matrix(rng, n, 20);
        Polynomial f = char_poly(a);
        REQUIRE(f.size() == n + 1);
        CHECK(f.back() == 1);
        for (long t = -2; t <= static_cast<long>(n); ++t) {
            ExactScalar x = rational(t * 7 + 1, 3);
            CHECK(evaluate(f, x) == determinant(x * QMatrix::identity(n) - a));
        }
    }
}

TEST_CASE("newton_polygon examples") {
    PContext ctx(3);
    auto np = newton_polygon(poly({-1, 1}), ctx);
    CHECK(np.slopes == std::vector<Slope>{{0, 1}});

    np = newton_polygon(poly({-3, 0, 1}), ctx);
    CHECK(np.slopes == std::vector<Slope>{{ExactScalar(1, 2), 2}});

    np = newton_polygon(poly({ExactScalar(1, 3), -(1 + ExactScalar(1, 3)), 1}), ctx);
    CHECK(np.slopes == std::vector<Slope>{{-1, 1}, {0, 1}});

    np = newton_polygon(poly({0, 0, 5, 1}), PContext(5));
    CHECK(np.infinite_slopes == 2);
    CHECK(np.slopes == std::vector<Slope>{{1, 1}});
    CHECK(np.degree() == 3);
}

TEST_CASE("newton slopes match valuations of known rational roots") {
    // Oracle: build prod (x - r_i) and compare with sorted v_p(r_i).
    std::mt19937_64 rng(testing::kSeed + 7);
    for (int trial = 0; trial < 200; ++trial) {
        PContext ctx(testing::pick_prime(rng));
        std::size_t deg = 1 + trial % 5;
        Polynomial f{1};
        std::vector<long> expected;
        for (std::size_t i = 0; i < deg; ++i) {
            ExactScalar r = testing::random_nonzero_rational(rng, 60);
            expected.push_back(vp(r, ctx).value());
            Polynomial g(f.size() + 1);
            for (std::size_t j = 0; j < f.size(); ++j) {
                g[j + 1] += f[j];
                g[j] -= r * f[j];
            }
            f = g;
        }
        std::sort(expected.begin(), expected.end());
        std::vector<long> got;
        for (const auto& s : newton_polygon(f, ctx).slopes)
            for (std::size_t m = 0; m < s.multiplicity; ++m) {
                REQUIRE(s.valuation.get_den() == 1);
                got.push_back(s.valuation.get_num().get_si());
            }
        CHECK(got == expected);
    }
}

TEST_CASE("slope sum equals valuation of the determinant") {
    std::mt19937_64 rng(testing::kSeed + 3);
    for (int trial = 0; trial < 150; ++trial) {
        PContext ctx(testing::pick_prime(rng));
        QMatrix a = testing::random_invertible(rng, 2 + trial % 3, 50);
        auto np = newton_polygon(char_poly(a), ctx);
        CHECK(np.total_valuation() == vp(determinant(a), ctx).value());
        for (std::size_t i = 1; i < np.slopes.size(); ++i) CHECK(np.slopes[i - 1].valuation < np.slopes[i].valuation);
    }
}

TEST_CASE("inverse, kernel and power") {
    QMatrix a = mat(2, {"1", "1/3", "0", "1"});
    CHECK(inverse(a) == mat(2, {"1", "-1/3", "0", "1"}));
    CHECK(power(a, 3) == mat(2, {"1", "1", "0", "1"}));
    CHECK(power(a, -3) == mat(2, {"1", "-1", "0", "1"}));
    CHECK_THROWS_AS(inverse(mat(2, {"1", "2", "2", "4"})), Error);
    QMatrix k = kernel(mat(2, {"1", "2", "2", "4"}));
    CHECK(k.cols() == 1);
    CHECK((mat(2, {"1", "2", "2", "4"}) * k).is_zero());
    CHECK(rank(mat(2, {"1", "2", "2", "4"})) == 1);
}
