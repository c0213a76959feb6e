#include "trijd/trimat.hpp"

#include "trijd/errors.hpp"

#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace trijd {

namespace {

std::string block_name(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

} // namespace

std::size_t TriMatSpec::slot(std::size_t i, std::size_t j) const
{
    if (i < 1 || j > n_ || i > j)
        throw std::out_of_range("block index " + block_name(i, j) + " outside the upper triangle of n=" +
                                std::to_string(n_));
    // Rows 1..i-1 contribute n, n-1, ..., n-i+2 slots.
    return (i - 1) * n_ - (i - 1) * (i - 2) / 2 + (j - i);
}

const FiniteRing& TriMatSpec::ring(std::size_t i) const
{
    return *ring_ptr(i);
}

const RingPtr& TriMatSpec::ring_ptr(std::size_t i) const
{
    if (i < 1 || i > n_)
        throw std::out_of_range("ring index " + std::to_string(i));
    return rings_[i - 1];
}

const Bimodule& TriMatSpec::module(std::size_t i, std::size_t j) const
{
    return *module_ptr(i, j);
}

const ModulePtr& TriMatSpec::module_ptr(std::size_t i, std::size_t j) const
{
    auto it = modules_.find({i, j});
    if (it == modules_.end())
        throw std::out_of_range("no module at " + block_name(i, j));
    return it->second;
}

const BalancedMap& TriMatSpec::comp(std::size_t i, std::size_t j, std::size_t k) const
{
    return *comp_ptr(i, j, k);
}

const CompPtr& TriMatSpec::comp_ptr(std::size_t i, std::size_t j, std::size_t k) const
{
    auto it = comps_.find({i, j, k});
    if (it == comps_.end())
        throw std::out_of_range("no composition map for (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ")");
    return it->second;
}

const AbelianGroup& TriMatSpec::block_group(std::size_t i, std::size_t j) const
{
    return *slot_groups_[slot(i, j)];
}

Elem TriMatSpec::block_mul(std::size_t i, std::size_t l, std::size_t k, Elem x, Elem y) const
{
    if (i == l && l == k)
        return ring(i).mul(x, y);
    if (i == l)
        return module(l, k).act_left(x, y);
    if (l == k)
        return module(i, l).act_right(x, y);
    return comp(i, l, k).apply(x, y);
}

TriMatElement TriMatSpec::element_at(std::uint64_t index) const
{
    TriMatElement a;
    a.blocks.assign(block_count(), 0);
    for (std::size_t s = block_count(); s-- > 0;) {
        const std::uint64_t d = slot_groups_[s]->size();
        a.blocks[s] = static_cast<Elem>(index % d);
        index /= d;
    }
    return a;
}

std::uint64_t TriMatSpec::index_of(const TriMatElement& a) const
{
    std::uint64_t index = 0;
    for (std::size_t s = 0; s < block_count(); ++s)
        index = index * slot_groups_[s]->size() + a.blocks[s];
    return index;
}

TriMatSpec build_spec(std::size_t n, std::vector<RingPtr> rings, std::map<BlockKey, ModulePtr> modules,
                      std::map<CompKey, CompPtr> comps, const ValidationOptions& opts)
{
    if (n < 2)
        throw ShapeError("build_spec: need at least two blocks");
    if (rings.size() != n)
        throw ShapeError("build_spec: expected " + std::to_string(n) + " rings, got " + std::to_string(rings.size()));
    for (std::size_t i = 0; i < n; ++i)
        if (!rings[i])
            throw ShapeError("build_spec: ring " + std::to_string(i + 1) + " missing");

    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            auto it = modules.find({i, j});
            if (it == modules.end() || !it->second)
                throw ShapeError("build_spec: module " + block_name(i, j) + " missing");
            if (it->second->left_ring_ptr() != rings[i - 1] || it->second->right_ring_ptr() != rings[j - 1])
                throw ShapeError("build_spec: module " + block_name(i, j) + " is not an (R_" + std::to_string(i) +
                                 ", R_" + std::to_string(j) + ")-bimodule");
        }
    for (const auto& [key, m] : modules) {
        auto [i, j] = key;
        if (i < 1 || j > n || i >= j)
            throw ShapeError("build_spec: unexpected module " + block_name(i, j));
    }
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = j + 1; k <= n; ++k) {
                auto it = comps.find({i, j, k});
                const std::string name = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
                if (it == comps.end() || !it->second)
                    throw ShapeError("build_spec: composition map " + name + " missing");
                const BalancedMap& c = *it->second;
                if (&c.left() != modules[{i, j}].get() || &c.right() != modules[{j, k}].get() ||
                    &c.target() != modules[{i, k}].get())
                    throw ShapeError("build_spec: composition map " + name + " has the wrong modules");
            }
    for (const auto& [key, c] : comps) {
        auto [i, j, k] = key;
        if (i < 1 || k > n || !(i < j && j < k))
            throw ShapeError("build_spec: unexpected composition map");
    }

    TriMatSpec spec;
    spec.n_ = n;
    spec.rings_ = std::move(rings);
    spec.modules_ = std::move(modules);
    spec.comps_ = std::move(comps);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i; j <= n; ++j) {
            spec.slot_blocks_.emplace_back(i, j);
            const AbelianGroup* g = i == j ? &spec.rings_[i - 1]->carrier() : &spec.modules_.at({i, j})->carrier();
            spec.slot_groups_.push_back(g);
            if (spec.size_ > std::numeric_limits<std::uint64_t>::max() / g->size())
                spec.size_ = std::numeric_limits<std::uint64_t>::max();
            else
                spec.size_ *= g->size();
        }

    // (x y) z = x (y z) for x in M_ij, y in M_jk, z in M_kl.
    ValidationStats stats;
    std::mt19937_64 rng(opts.seed);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = j + 1; k <= n; ++k)
                for (std::size_t l = k + 1; l <= n; ++l) {
                    const BalancedMap& ijk = spec.comp(i, j, k);
                    const BalancedMap& ikl = spec.comp(i, k, l);
                    const BalancedMap& jkl = spec.comp(j, k, l);
                    const BalancedMap& ijl = spec.comp(i, j, l);
                    const std::uint64_t a = spec.module(i, j).size();
                    const std::uint64_t b = spec.module(j, k).size();
                    const std::uint64_t c = spec.module(k, l).size();
                    auto check = [&](Elem x, Elem y, Elem z) {
                        if (ikl.apply(ijk.apply(x, y), z) != ijl.apply(x, jkl.apply(y, z))) {
                            std::ostringstream os;
                            os << "(i,j,k,l)=(" << i << "," << j << "," << k << "," << l << "), m_ij="
                               << format_coords(spec.module(i, j).carrier().decode(x))
                               << ", m_jk=" << format_coords(spec.module(j, k).carrier().decode(y))
                               << ", m_kl=" << format_coords(spec.module(k, l).carrier().decode(z));
                            throw AxiomError("composition associativity", os.str());
                        }
                    };
                    const long double total = static_cast<long double>(a) * b * c;
                    if (total <= static_cast<long double>(opts.tuple_cap)) {
                        for (Elem x = 0; x < a; ++x)
                            for (Elem y = 0; y < b; ++y)
                                for (Elem z = 0; z < c; ++z)
                                    check(x, y, z);
                        stats.tuples_checked += a * b * c;
                    } else {
                        stats.exhaustive = false;
                        for (std::uint64_t t = 0; t < opts.tuple_cap; ++t)
                            check(static_cast<Elem>(rng() % a), static_cast<Elem>(rng() % b),
                                  static_cast<Elem>(rng() % c));
                        stats.tuples_checked += opts.tuple_cap;
                    }
                }
    spec.stats_ = stats;
    return spec;
}

TriMatElement zero(const TriMatSpec& spec)
{
    return TriMatElement{std::vector<Elem>(spec.block_count(), 0)};
}

TriMatElement one(const TriMatSpec& spec)
{
    TriMatElement a = zero(spec);
    for (std::size_t i = 1; i <= spec.n(); ++i)
        a.blocks[spec.slot(i, i)] = spec.ring(i).one();
    return a;
}

TriMatElement unit_e(const TriMatSpec& spec, std::size_t i)
{
    if (i < 1 || i > spec.n())
        throw std::out_of_range("unit_e: index " + std::to_string(i) + " outside 1.." + std::to_string(spec.n()));
    return block_element(spec, i, i, spec.ring(i).one());
}

TriMatElement block_element(const TriMatSpec& spec, std::size_t i, std::size_t j, Elem x)
{
    TriMatElement a = zero(spec);
    a.blocks[spec.slot(i, j)] = x;
    return a;
}

TriMatElement add(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b)
{
    TriMatElement c = zero(spec);
    for (std::size_t s = 0; s < c.blocks.size(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        c.blocks[s] = spec.block_group(i, j).add(a.blocks[s], b.blocks[s]);
    }
    return c;
}

TriMatElement sub(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b)
{
    TriMatElement c = zero(spec);
    for (std::size_t s = 0; s < c.blocks.size(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        c.blocks[s] = spec.block_group(i, j).sub(a.blocks[s], b.blocks[s]);
    }
    return c;
}

TriMatElement neg(const TriMatSpec& spec, const TriMatElement& a)
{
    TriMatElement c = zero(spec);
    for (std::size_t s = 0; s < c.blocks.size(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        c.blocks[s] = spec.block_group(i, j).neg(a.blocks[s]);
    }
    return c;
}

TriMatElement scale(const TriMatSpec& spec, const TriMatElement& a, std::int64_t k)
{
    TriMatElement c = zero(spec);
    for (std::size_t s = 0; s < c.blocks.size(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        c.blocks[s] = spec.block_group(i, j).scale(a.blocks[s], k);
    }
    return c;
}

TriMatElement mul(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b)
{
    TriMatElement c = zero(spec);
    const std::size_t n = spec.n();
    for (std::size_t t = 1; t <= n; ++t)
        for (std::size_t k = t; k <= n; ++k) {
            const AbelianGroup& g = spec.block_group(t, k);
            Elem acc = 0;
            for (std::size_t l = t; l <= k; ++l) {
                Elem x = a.blocks[spec.slot(t, l)];
                Elem y = b.blocks[spec.slot(l, k)];
                if (x == 0 || y == 0)
                    continue;
                acc = g.add(acc, spec.block_mul(t, l, k, x, y));
            }
            c.blocks[spec.slot(t, k)] = acc;
        }
    return c;
}

TriMatElement peirce(const TriMatSpec& spec, const TriMatElement& a, std::size_t i, std::size_t j)
{
    if (i > j)
        throw std::out_of_range("peirce: reversed indices " + block_name(i, j));
    std::size_t s = spec.slot(i, j);
    TriMatElement c = zero(spec);
    c.blocks[s] = a.blocks[s];
    return c;
}

Elem entry(const TriMatSpec& spec, const TriMatElement& a, std::size_t i, std::size_t j)
{
    return a.blocks[spec.slot(i, j)];
}

bool is_zero(const TriMatElement& a)
{
    for (Elem x : a.blocks)
        if (x != 0)
            return false;
    return true;
}

CanonicalBasis canonical_basis(const TriMatSpec& spec)
{
    CanonicalBasis basis;
    for (std::size_t s = 0; s < spec.block_count(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        basis.slot_offset.push_back(basis.generators.size());
        const AbelianGroup& g = spec.block_group(i, j);
        for (std::size_t t = 0; t < g.rank(); ++t)
            basis.generators.push_back({i, j, t, g.orders()[t]});
    }
    return basis;
}

Coords to_coords(const TriMatSpec& spec, const CanonicalBasis& basis, const TriMatElement& a)
{
    Coords v;
    v.reserve(basis.size());
    for (std::size_t s = 0; s < spec.block_count(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        Coords c = spec.block_group(i, j).decode(a.blocks[s]);
        v.insert(v.end(), c.begin(), c.end());
    }
    return v;
}

TriMatElement from_coords(const TriMatSpec& spec, const CanonicalBasis& basis, const Coords& v)
{
    if (v.size() != basis.size())
        throw std::out_of_range("from_coords: expected " + std::to_string(basis.size()) + " coordinates");
    for (std::size_t r = 0; r < v.size(); ++r)
        if (v[r] < 0 || v[r] >= basis.order(r))
            throw std::out_of_range("from_coords: coordinate " + std::to_string(r) + " out of range");
    TriMatElement a = zero(spec);
    for (std::size_t s = 0; s < spec.block_count(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        const AbelianGroup& g = spec.block_group(i, j);
        a.blocks[s] = g.encode(std::span<const std::int64_t>(v.data() + basis.slot_offset[s], g.rank()));
    }
    return a;
}

TriMatElement basis_element(const TriMatSpec& spec, const CanonicalBasis& basis, std::size_t r)
{
    const BasisGenerator& g = basis.generators.at(r);
    return block_element(spec, g.i, g.j, spec.block_group(g.i, g.j).generator(g.local));
}

std::string format_element(const TriMatSpec& spec, const TriMatElement& a)
{
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t s = 0; s < spec.block_count(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        os << (first ? "" : " ") << i << "," << j << ":" << format_coords(spec.block_group(i, j).decode(a.blocks[s]));
        first = false;
    }
    os << "}";
    return os.str();
}

} // namespace trijd
