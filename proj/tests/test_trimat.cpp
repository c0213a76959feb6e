#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trijd/errors.hpp"

#include <random>

using namespace trijd;
using fixture::ut2;

namespace {

// Full n x n matrix over Z/m with zeros below the diagonal.
std::vector<oracle::Vec> dense(const TriMatSpec& s, const TriMatElement& a)
{
    std::vector<oracle::Vec> out(s.n(), oracle::Vec(s.n(), 0));
    for (std::size_t i = 1; i <= s.n(); ++i)
        for (std::size_t j = i; j <= s.n(); ++j)
            out[i - 1][j - 1] = entry(s, a, i, j);
    return out;
}

TriMatElement random_element(const TriMatSpec& s, std::mt19937_64& rng)
{
    return s.element_at(rng() % s.size());
}

} // namespace

TEST_CASE("build_spec")
{
    TriMatSpec s2 = fixture::ut(2, 3);
    CHECK(s2.n() == 2);
    CHECK(s2.size() == 27);
    TriMatSpec s3 = fixture::ut(3, 3);
    CHECK(s3.size() == 729);
    CHECK(s3.slot(1, 1) == 0);
    CHECK(s3.slot(1, 3) == 2);
    CHECK(s3.slot(2, 2) == 3);
    CHECK(s3.slot(3, 3) == 5);
    CHECK_THROWS_AS(s3.slot(2, 1), std::out_of_range);

    SUBCASE("a composition map that breaks associativity is rejected")
    {
        auto z3 = std::make_shared<const FiniteRing>(ring_zmod(3));
        auto mult = tabulate(3, 3, [](Elem a, Elem x) { return static_cast<Elem>(a * x % 3); });
        auto m = std::make_shared<const Bimodule>(bimodule_new(z3, z3, AbelianGroup({3}), mult, mult));
        auto one = std::make_shared<const BalancedMap>(balanced_map_new(m, m, m, {1}));
        auto two = std::make_shared<const BalancedMap>(balanced_map_new(m, m, m, {2}));
        std::map<BlockKey, ModulePtr> modules;
        for (std::size_t i = 1; i <= 4; ++i)
            for (std::size_t j = i + 1; j <= 4; ++j)
                modules[{i, j}] = m;
        std::map<CompKey, CompPtr> comps;
        for (std::size_t i = 1; i <= 4; ++i)
            for (std::size_t j = i + 1; j <= 4; ++j)
                for (std::size_t k = j + 1; k <= 4; ++k)
                    comps[{i, j, k}] = one;
        // (m12 m23) m34 picks up a factor 2 that m12 (m23 m34) does not.
        comps[{1, 2, 3}] = two;
        CHECK_THROWS_AS(build_spec(4, std::vector<RingPtr>(4, z3), modules, comps), AxiomError);
    }
    SUBCASE("missing module")
    {
        auto z3 = std::make_shared<const FiniteRing>(ring_zmod(3));
        CHECK_THROWS_AS(build_spec(2, {z3, z3}, {}, {}), ShapeError);
    }
}

TEST_CASE("multiplication agrees with dense matrices")
{
    TriMatSpec s = fixture::ut(2, 3);
    CHECK(is_zero(mul(s, ut2(1, 2, 0), ut2(0, 1, 1))));

    std::mt19937_64 rng(3);
    for (std::size_t n : {2, 3}) {
        TriMatSpec t = fixture::ut(n, 3);
        for (int trial = 0; trial < 200; ++trial) {
            TriMatElement a = random_element(t, rng), b = random_element(t, rng);
            CHECK(dense(t, mul(t, a, b)) == oracle::matmul(dense(t, a), dense(t, b), 3));
        }
        for (int trial = 0; trial < 20; ++trial) {
            TriMatElement a = random_element(t, rng);
            CHECK(mul(t, a, one(t)) == a);
            CHECK(mul(t, one(t), a) == a);
        }
    }
    CHECK(is_zero(mul(s, unit_e(s, 1), unit_e(s, 2))));
}

TEST_CASE("ring axioms of T hold exhaustively on UT2(F3)")
{
    TriMatSpec s = fixture::ut(2, 3);
    for (std::uint64_t x = 0; x < s.size(); ++x)
        for (std::uint64_t y = 0; y < s.size(); ++y) {
            TriMatElement a = s.element_at(x), b = s.element_at(y);
            for (std::uint64_t z = 0; z < s.size(); z += 5) {
                TriMatElement c = s.element_at(z);
                REQUIRE(mul(s, mul(s, a, b), c) == mul(s, a, mul(s, b, c)));
                REQUIRE(mul(s, a, add(s, b, c)) == add(s, mul(s, a, b), mul(s, a, c)));
            }
        }
}

TEST_CASE("units and Peirce projections")
{
    TriMatSpec s = fixture::ut(3, 5);
    TriMatElement sum = zero(s);
    for (std::size_t i = 1; i <= 3; ++i) {
        sum = add(s, sum, unit_e(s, i));
        CHECK(mul(s, unit_e(s, i), unit_e(s, i)) == unit_e(s, i));
    }
    CHECK(sum == one(s));
    CHECK_THROWS_AS(unit_e(s, 4), std::out_of_range);

    TriMatSpec s2 = fixture::ut(2, 3);
    CHECK(unit_e(s2, 1) == ut2(1, 0, 0));
    CHECK(peirce(s2, ut2(1, 2, 1), 1, 2) == ut2(0, 2, 0));
    CHECK(is_zero(peirce(s2, one(s2), 1, 2)));
    CHECK_THROWS_AS(peirce(s2, one(s2), 2, 1), std::out_of_range);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        TriMatElement a = random_element(s, rng);
        TriMatElement total = zero(s);
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = i; j <= 3; ++j) {
                TriMatElement p = peirce(s, a, i, j);
                // E_ii A E_jj computed by multiplication.
                CHECK(p == mul(s, mul(s, unit_e(s, i), a), unit_e(s, j)));
                total = add(s, total, p);
            }
        CHECK(total == a);
    }
}

TEST_CASE("canonical basis and coordinates")
{
    TriMatSpec s = fixture::ut(2, 3);
    CanonicalBasis b = canonical_basis(s);
    REQUIRE(b.size() == 3);
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(b.order(r) == 3);
    CHECK(to_coords(s, b, unit_e(s, 1)) == Coords{1, 0, 0});
    for (std::uint64_t k = 0; k < s.size(); ++k) {
        TriMatElement a = s.element_at(k);
        CHECK(from_coords(s, b, to_coords(s, b, a)) == a);
        CHECK(s.index_of(a) == k);
    }
    CHECK_THROWS_AS(from_coords(s, b, Coords{3, 0, 0}), std::out_of_range);
    CHECK(format_element(s, ut2(1, 2, 0)) == "{1,1:[1] 1,2:[2] 2,2:[0]}");
}
