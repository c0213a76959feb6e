#pragma once

// Small instances built directly through the library constructors.

#include "trijd/finalg.hpp"
#include "trijd/trimat.hpp"

#include <map>
#include <memory>

namespace fixture {

using namespace trijd;

// UT_n(Z/m): every ring Z/m, every module Z/m, multiplication everywhere.
inline TriMatSpec ut(std::size_t n, std::int64_t m)
{
    auto ring = std::make_shared<const FiniteRing>(ring_zmod(m));
    AbelianGroup g({m});
    auto mult = tabulate(m, m, [m](Elem a, Elem x) { return static_cast<Elem>(a * x % m); });
    auto module = std::make_shared<const Bimodule>(bimodule_new(ring, ring, g, mult, mult));
    std::vector<RingPtr> rings(n, ring);
    std::map<BlockKey, ModulePtr> modules;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            modules[{i, j}] = module;
    std::map<CompKey, CompPtr> comps;
    auto comp = std::make_shared<const BalancedMap>(balanced_map_new(module, module, module, {1}));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = j + 1; k <= n; ++k)
                comps[{i, j, k}] = comp;
    return build_spec(n, rings, modules, comps);
}

// (a, m, b) in UT2: blocks (1,1), (1,2), (2,2).
inline TriMatElement ut2(Elem a, Elem m, Elem b)
{
    return TriMatElement{{a, m, b}};
}

} // namespace fixture
