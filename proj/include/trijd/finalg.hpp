#pragma once

// Finite algebraic building blocks: abelian groups given by cyclic orders,
// finite unital rings, bimodules and balanced composition maps. Every
// constructor validates its axioms exhaustively (or by sampling beyond a
// configurable tuple cap) and throws AxiomError with a witness on failure.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trijd {

// An element is its index in the carrier's enumeration.
using Elem = std::uint32_t;
using Coords = std::vector<std::int64_t>;

struct ValidationOptions {
    // Above this many tuples an axiom is checked on `tuple_cap` random tuples
    // instead of exhaustively.
    std::uint64_t tuple_cap = 20'000'000;
    std::uint64_t seed = 0x7269'6a64;
};

struct ValidationStats {
    bool exhaustive = true;
    std::uint64_t tuples_checked = 0;
};

// Direct sum of cyclic groups Z/d_1 + ... + Z/d_k. Elements are coordinate
// vectors enumerated lexicographically (the first coordinate is the most
// significant digit); the zero element has index 0.
class AbelianGroup {
public:
    AbelianGroup() = default;
    explicit AbelianGroup(std::vector<std::int64_t> orders);

    const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
    std::size_t rank() const noexcept { return orders_.size(); }
    std::uint64_t size() const noexcept { return size_; }
    std::int64_t exponent() const noexcept { return exponent_; }

    Coords decode(Elem x) const;
    Elem encode(std::span<const std::int64_t> coords) const;

    Elem zero() const noexcept { return 0; }
    Elem add(Elem x, Elem y) const;
    Elem sub(Elem x, Elem y) const;
    Elem neg(Elem x) const;
    Elem scale(Elem x, std::int64_t k) const;
    Elem generator(std::size_t t) const;
    std::int64_t order_of(Elem x) const;

    bool operator==(const AbelianGroup& other) const { return orders_ == other.orders_; }

private:
    std::vector<std::int64_t> orders_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_ = 1;
    std::int64_t exponent_ = 1;
};

class FiniteRing {
public:
    const AbelianGroup& carrier() const noexcept { return carrier_; }
    std::uint64_t size() const noexcept { return carrier_.size(); }
    Elem one() const noexcept { return one_; }
    Elem zero() const noexcept { return 0; }

    Elem add(Elem a, Elem b) const { return carrier_.add(a, b); }
    Elem sub(Elem a, Elem b) const { return carrier_.sub(a, b); }
    Elem neg(Elem a) const { return carrier_.neg(a); }
    Elem mul(Elem a, Elem b) const { return mul_[static_cast<std::size_t>(a) * size() + b]; }

    // Set for rings built by ring_zmod.
    std::optional<std::int64_t> modulus() const noexcept { return modulus_; }

    // For rings built from Cayley tables: the caller's element labels mapped
    // to internal indices and back. Empty for ring_zmod.
    const std::vector<Elem>& label_to_elem() const noexcept { return label_to_elem_; }
    const std::vector<std::uint32_t>& elem_to_label() const noexcept { return elem_to_label_; }
    Elem from_label(std::uint32_t label) const;

    const ValidationStats& validation() const noexcept { return stats_; }

private:
    friend FiniteRing ring_zmod(std::int64_t m);
    friend FiniteRing ring_from_tables(const std::vector<std::vector<std::uint32_t>>&,
                                       const std::vector<std::vector<std::uint32_t>>&, std::uint32_t,
                                       const ValidationOptions&);

    AbelianGroup carrier_;
    std::vector<Elem> mul_;
    Elem one_ = 0;
    std::optional<std::int64_t> modulus_;
    std::vector<Elem> label_to_elem_;
    std::vector<std::uint32_t> elem_to_label_;
    ValidationStats stats_;
};

using RingPtr = std::shared_ptr<const FiniteRing>;

// Z/m with residue arithmetic. Throws std::invalid_argument for m < 2.
FiniteRing ring_zmod(std::int64_t m);

// A ring from Cayley tables over labels 0..N-1. The additive group is
// decomposed into cyclic factors; `one` is a label. Throws AxiomError naming
// the first violating tuple.
FiniteRing ring_from_tables(const std::vector<std::vector<std::uint32_t>>& add_table,
                            const std::vector<std::vector<std::uint32_t>>& mul_table, std::uint32_t one,
                            const ValidationOptions& opts = {});

// Re-checks associativity, biadditivity and the identity law.
ValidationStats validate_ring(const FiniteRing& ring, const ValidationOptions& opts = {});

// Row-major |A| x |B| table of f(a, b).
std::vector<Elem> tabulate(std::uint64_t rows, std::uint64_t cols, const std::function<Elem(Elem, Elem)>& f);

// (left ring, right ring)-bimodule on a finite abelian group.
class Bimodule {
public:
    const FiniteRing& left_ring() const noexcept { return *left_; }
    const FiniteRing& right_ring() const noexcept { return *right_; }
    const RingPtr& left_ring_ptr() const noexcept { return left_; }
    const RingPtr& right_ring_ptr() const noexcept { return right_; }
    const AbelianGroup& carrier() const noexcept { return carrier_; }
    std::uint64_t size() const noexcept { return carrier_.size(); }

    Elem act_left(Elem r, Elem m) const { return left_table_[static_cast<std::size_t>(r) * size() + m]; }
    Elem act_right(Elem m, Elem s) const
    {
        return right_table_[static_cast<std::size_t>(m) * right_->size() + s];
    }

    const ValidationStats& validation() const noexcept { return stats_; }

private:
    friend Bimodule bimodule_new(RingPtr, RingPtr, AbelianGroup, std::vector<Elem>, std::vector<Elem>,
                                 const ValidationOptions&);

    RingPtr left_;
    RingPtr right_;
    AbelianGroup carrier_;
    std::vector<Elem> left_table_;
    std::vector<Elem> right_table_;
    ValidationStats stats_;
};

using ModulePtr = std::shared_ptr<const Bimodule>;

// `left_table` is |left| x |M| (r, m) -> r.m and `right_table` is
// |M| x |right| (m, s) -> m.s, both row-major.
Bimodule bimodule_new(RingPtr left, RingPtr right, AbelianGroup carrier, std::vector<Elem> left_table,
                      std::vector<Elem> right_table, const ValidationOptions& opts = {});

// Biadditive map M_ij x M_jk -> M_ik, given on generator pairs.
class BalancedMap {
public:
    const Bimodule& left() const noexcept { return *left_; }
    const Bimodule& right() const noexcept { return *right_; }
    const Bimodule& target() const noexcept { return *target_; }

    Elem apply(Elem m, Elem n) const { return table_[static_cast<std::size_t>(m) * right_->size() + n]; }
    const std::vector<Elem>& generator_table() const noexcept { return gen_table_; }

    const ValidationStats& validation() const noexcept { return stats_; }

private:
    friend BalancedMap balanced_map_new(ModulePtr, ModulePtr, ModulePtr, std::vector<Elem>,
                                        const ValidationOptions&);

    ModulePtr left_;
    ModulePtr right_;
    ModulePtr target_;
    std::vector<Elem> gen_table_;
    std::vector<Elem> table_;
    ValidationStats stats_;
};

using CompPtr = std::shared_ptr<const BalancedMap>;

// `gen_table` is rank(M_ij) x rank(M_jk), row-major, entries are elements of
// the target. The full table is the biadditive extension.
BalancedMap balanced_map_new(ModulePtr left, ModulePtr right, ModulePtr target, std::vector<Elem> gen_table,
                             const ValidationOptions& opts = {});

std::vector<Elem> annihilator_left(const Bimodule& m);
std::vector<Elem> annihilator_right(const Bimodule& m);
bool is_faithful_left(const Bimodule& m);
bool is_faithful_right(const Bimodule& m);

std::string format_coords(const Coords& c);

} // namespace trijd
