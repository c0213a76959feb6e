#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trijd/errors.hpp"
#include "trijd/linmap.hpp"

#include <numeric>
#include <random>
#include <set>

using namespace trijd;
using fixture::ut2;

namespace {

// Every x in prod Z/d_u satisfying the system, by exhaustion.
std::set<oracle::Vec> brute_solutions(const LinearSystem& sys)
{
    std::set<oracle::Vec> out;
    const std::size_t n = sys.unknown_moduli.size();
    oracle::Vec x(n, 0);
    while (true) {
        bool ok = true;
        for (std::size_t k = 0; k < sys.rows.size() && ok; ++k) {
            std::int64_t s = 0;
            for (std::size_t u = 0; u < n; ++u)
                s += sys.rows[k][u] * x[u];
            ok = oracle::rem(s, sys.row_moduli[k]) == 0;
        }
        if (ok)
            out.insert(x);
        std::size_t u = 0;
        while (u < n && ++x[u] == sys.unknown_moduli[u])
            x[u++] = 0;
        if (u == n)
            return out;
    }
}

// Subgroup of prod Z/d_u generated by the rows.
std::set<oracle::Vec> generated(const zmod::Matrix& gens, const std::vector<std::int64_t>& moduli)
{
    const std::size_t n = moduli.size();
    std::int64_t e = 1;
    for (auto d : moduli)
        e = std::lcm(e, d);
    std::set<oracle::Vec> out{oracle::Vec(n, 0)};
    for (const auto& g : gens) {
        std::set<oracle::Vec> next;
        for (const auto& v : out)
            for (std::int64_t k = 0; k < e; ++k) {
                oracle::Vec w(n);
                for (std::size_t u = 0; u < n; ++u)
                    w[u] = oracle::rem(v[u] + k * g[u], moduli[u]);
                next.insert(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

std::set<oracle::Vec> as_set(const zmod::Matrix& m)
{
    return {m.begin(), m.end()};
}

LinearSystem system(std::vector<std::int64_t> unknowns, zmod::Matrix rows, std::vector<std::int64_t> moduli)
{
    LinearSystem sys;
    sys.unknown_moduli = std::move(unknowns);
    for (std::size_t k = 0; k < rows.size(); ++k)
        sys.add_row(rows[k], moduli[k]);
    return sys;
}

} // namespace

TEST_CASE("kernel_solve on small systems")
{
    SUBCASE("[1 2] over Z/3")
    {
        auto sys = system({3, 3}, {{1, 2}}, {3});
        SolutionSpace s = kernel_solve(sys);
        CHECK(s.cardinality() == "3");
        CHECK(as_set(s.elements(100)) == brute_solutions(sys));
        CHECK(brute_solutions(sys) == std::set<oracle::Vec>{{0, 0}, {1, 1}, {2, 2}});
    }
    SUBCASE("[2] over Z/4")
    {
        auto sys = system({4}, {{2}}, {4});
        SolutionSpace s = kernel_solve(sys);
        CHECK(s.cardinality() == "2");
        CHECK(as_set(s.elements(100)) == std::set<oracle::Vec>{{0}, {2}});
    }
    SUBCASE("empty system")
    {
        SolutionSpace s = kernel_solve(system({3, 3, 3}, {}, {}));
        CHECK(s.cardinality() == "27");
        CHECK(s.is_prime_field());
    }
    SUBCASE("inconsistent moduli")
    {
        // 1 * x with x in Z/2 is not well defined modulo 3.
        CHECK_THROWS_AS(kernel_solve(system({2}, {{1}}, {3})), FormatError);
    }
}

TEST_CASE("kernel_solve and the Howell route agree with exhaustion on mixed moduli")
{
    std::mt19937_64 rng(2024);
    const std::vector<std::int64_t> pool{2, 3, 4, 6, 8, 9, 12};
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng() % 3;
        std::vector<std::int64_t> unknowns(n);
        for (auto& d : unknowns)
            d = pool[rng() % pool.size()];
        LinearSystem sys;
        sys.unknown_moduli = unknowns;
        const std::size_t rows = rng() % 4;
        for (std::size_t k = 0; k < rows; ++k) {
            const std::int64_t m = pool[rng() % pool.size()];
            zmod::Row row(n);
            for (std::size_t u = 0; u < n; ++u) {
                // Smallest coefficient step compatible with Z/d_u -> Z/m.
                const std::int64_t step = m / std::gcd(m, unknowns[u]);
                row[u] = step * static_cast<std::int64_t>(rng() % m);
            }
            sys.add_row(row, m);
        }
        const auto expected = brute_solutions(sys);
        SolutionSpace s = kernel_solve(sys);
        CHECK(s.cardinality_u64() == expected.size());
        const auto elems = s.elements(1'000'000);
        CHECK(elems.size() == expected.size());
        CHECK(as_set(elems) == expected);
        for (auto d : s.moduli) {
            // Generator orders are prime powers.
            auto f = zmod::factorize(d);
            CHECK(f.size() == 1);
        }
        CHECK(generated(kernel_span_howell(sys), unknowns) == expected);
    }
}

TEST_CASE("AddMap basics")
{
    TriMatSpec s = fixture::ut(2, 3);
    CanonicalBasis b = canonical_basis(s);
    AddMap zero_map(b);
    AddMap id = AddMap::identity(b);
    for (std::uint64_t k = 0; k < s.size(); ++k) {
        TriMatElement a = s.element_at(k);
        CHECK(is_zero(apply(s, b, zero_map, a)));
        CHECK(apply(s, b, id, a) == a);
    }
    CHECK(id.is_well_defined());
    CHECK((id - id).is_zero());
    CHECK(id.scaled(3).is_zero());

    // ad_{E11}: X -> E11 X - X E11, oracle by direct multiplication.
    const TriMatElement e11 = unit_e(s, 1);
    AddMap ad = tabulate_map(s, b, [&](const TriMatElement& x) { return sub(s, mul(s, e11, x), mul(s, x, e11)); });
    for (Elem a = 0; a < 3; ++a)
        for (Elem m = 0; m < 3; ++m)
            for (Elem c = 0; c < 3; ++c)
                CHECK(apply(s, b, ad, ut2(a, m, c)) == ut2(0, m, 0));
    CHECK(apply(s, b, component(s, b, ad, 1, 2), ut2(0, 1, 0)) == ut2(0, 1, 0));
    CHECK(component(s, b, zero_map, 1, 1).is_zero());
    CHECK_THROWS_AS(component(s, b, ad, 2, 1), std::out_of_range);

    // Peirce completeness on generators.
    AddMap total(b);
    for (std::size_t i = 1; i <= 2; ++i)
        for (std::size_t j = i; j <= 2; ++j)
            total = total + component(s, b, ad, i, j);
    CHECK(total == ad);

    TriMatSpec other = fixture::ut(2, 5);
    CHECK_THROWS_AS(apply(other, canonical_basis(other), ad, zero(other)), std::invalid_argument);
}

TEST_CASE("apply is additive")
{
    for (auto m : {2, 3, 4, 6}) {
        TriMatSpec s = fixture::ut(3, m);
        CanonicalBasis b = canonical_basis(s);
        std::mt19937_64 rng(m);
        std::vector<std::int64_t> entries(b.size() * b.size());
        for (auto& x : entries)
            x = static_cast<std::int64_t>(rng() % m);
        AddMap d = AddMap::from_entries(b, entries);
        for (int trial = 0; trial < 1000; ++trial) {
            TriMatElement x = s.element_at(rng() % s.size()), y = s.element_at(rng() % s.size());
            REQUIRE(apply(s, b, d, add(s, x, y)) == add(s, apply(s, b, d, x), apply(s, b, d, y)));
        }
    }
}

TEST_CASE("enumerate_addmaps")
{
    auto count = [](const TriMatSpec& s, std::uint64_t cap) {
        std::set<AddMap> seen;
        enumerate_addmaps(canonical_basis(s), cap, [&](const AddMap& m) {
            CHECK(m.is_well_defined());
            seen.insert(m);
        });
        return seen.size();
    };
    TriMatSpec f2 = fixture::ut(2, 2), f3 = fixture::ut(2, 3);
    CHECK(count_addmaps(canonical_basis(f2)) == 512);
    CHECK(count(f2, 1000) == 512);
    CHECK(count_addmaps(canonical_basis(f3)) == 19683);
    CHECK(count(f3, 20000) == 19683);
    try {
        count(f3, 100);
        FAIL("expected CapError");
    } catch (const CapError& e) {
        CHECK(e.count() == 19683);
        CHECK(e.cap() == 100);
    }
    CHECK(decimal_product({6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6}) ==
          "6140942214464815497216");
}
