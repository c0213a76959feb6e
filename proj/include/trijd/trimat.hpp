#pragma once

// The generalized triangular matrix ring T_n(R, M): validated instances,
// block arithmetic, matrix units, Peirce projections and coordinates.
//
// Block indices are 1-based and always satisfy 1 <= i <= j <= n. Lower
// blocks are not stored; asking for one is an error.

#include "trijd/finalg.hpp"

#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace trijd {

using BlockKey = std::pair<std::size_t, std::size_t>;
using CompKey = std::tuple<std::size_t, std::size_t, std::size_t>;

// One element per upper-triangular block, blocks in lexicographic (i, j) order.
struct TriMatElement {
    std::vector<Elem> blocks;

    bool operator==(const TriMatElement&) const = default;
    auto operator<=>(const TriMatElement&) const = default;
};

class TriMatSpec {
public:
    std::size_t n() const noexcept { return n_; }
    std::size_t block_count() const noexcept { return n_ * (n_ + 1) / 2; }

    // Position of block (i, j) in TriMatElement::blocks.
    std::size_t slot(std::size_t i, std::size_t j) const;
    BlockKey block_of_slot(std::size_t s) const { return slot_blocks_.at(s); }

    const FiniteRing& ring(std::size_t i) const;
    const Bimodule& module(std::size_t i, std::size_t j) const;
    const BalancedMap& comp(std::size_t i, std::size_t j, std::size_t k) const;
    const RingPtr& ring_ptr(std::size_t i) const;
    const ModulePtr& module_ptr(std::size_t i, std::size_t j) const;
    const CompPtr& comp_ptr(std::size_t i, std::size_t j, std::size_t k) const;

    // Carrier of block (i, j): R_i on the diagonal, M_ij above it.
    const AbelianGroup& block_group(std::size_t i, std::size_t j) const;

    // Product of x in block (i, l) and y in block (l, k), landing in (i, k).
    // Dispatches to ring multiplication, a module action or a composition map.
    Elem block_mul(std::size_t i, std::size_t l, std::size_t k, Elem x, Elem y) const;

    // |T|, saturated at UINT64_MAX.
    std::uint64_t size() const noexcept { return size_; }
    // The element with mixed-radix index `index` over the block sizes.
    TriMatElement element_at(std::uint64_t index) const;
    // Inverse of element_at.
    std::uint64_t index_of(const TriMatElement& a) const;

    const ValidationStats& validation() const noexcept { return stats_; }

private:
    friend TriMatSpec build_spec(std::size_t, std::vector<RingPtr>, std::map<BlockKey, ModulePtr>,
                                 std::map<CompKey, CompPtr>, const ValidationOptions&);

    std::size_t n_ = 0;
    std::vector<RingPtr> rings_;
    std::map<BlockKey, ModulePtr> modules_;
    std::map<CompKey, CompPtr> comps_;
    std::vector<BlockKey> slot_blocks_;
    std::vector<const AbelianGroup*> slot_groups_;
    std::uint64_t size_ = 1;
    ValidationStats stats_;
};

// Validates shapes, ring identities of every module and composition map, and
// the associativity (m_ij m_jk) m_kl = m_ij (m_jk m_kl) over all quadruples.
TriMatSpec build_spec(std::size_t n, std::vector<RingPtr> rings, std::map<BlockKey, ModulePtr> modules,
                      std::map<CompKey, CompPtr> comps, const ValidationOptions& opts = {});

TriMatElement zero(const TriMatSpec& spec);
TriMatElement one(const TriMatSpec& spec);
// E_ii: the identity of R_i at (i, i).
TriMatElement unit_e(const TriMatSpec& spec, std::size_t i);
// The element whose only nonzero block is x at (i, j).
TriMatElement block_element(const TriMatSpec& spec, std::size_t i, std::size_t j, Elem x);

TriMatElement add(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b);
TriMatElement sub(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b);
TriMatElement neg(const TriMatSpec& spec, const TriMatElement& a);
TriMatElement scale(const TriMatSpec& spec, const TriMatElement& a, std::int64_t k);
TriMatElement mul(const TriMatSpec& spec, const TriMatElement& a, const TriMatElement& b);

// E_ii A E_jj. Throws std::out_of_range for i > j or indices outside 1..n.
TriMatElement peirce(const TriMatSpec& spec, const TriMatElement& a, std::size_t i, std::size_t j);
// Block (i, j) entry of a.
Elem entry(const TriMatSpec& spec, const TriMatElement& a, std::size_t i, std::size_t j);

bool is_zero(const TriMatElement& a);

// Ordered additive generators of T: blocks lexicographic by (i, j), then the
// cyclic generators of each block's carrier.
struct BasisGenerator {
    std::size_t i;
    std::size_t j;
    std::size_t local;
    std::int64_t order;
};

struct CanonicalBasis {
    std::vector<BasisGenerator> generators;
    std::vector<std::size_t> slot_offset; // first coordinate of each block slot

    std::size_t size() const noexcept { return generators.size(); }
    std::int64_t order(std::size_t r) const { return generators[r].order; }
};

CanonicalBasis canonical_basis(const TriMatSpec& spec);
Coords to_coords(const TriMatSpec& spec, const CanonicalBasis& basis, const TriMatElement& a);
// Throws std::out_of_range if a coordinate is outside [0, order).
TriMatElement from_coords(const TriMatSpec& spec, const CanonicalBasis& basis, const Coords& v);
// The r-th basis generator as an element.
TriMatElement basis_element(const TriMatSpec& spec, const CanonicalBasis& basis, std::size_t r);

std::string format_element(const TriMatSpec& spec, const TriMatElement& a);

} // namespace trijd
