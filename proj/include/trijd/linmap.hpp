#pragma once

// Additive self-maps of T as integer matrices over the canonical basis, and
// exact solution spaces of homogeneous linear systems over Z/m.

#include "trijd/trimat.hpp"
#include "trijd/zmod.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace trijd {

// Column c holds the coordinates of D(g_c); entry (r, c) lives in Z/order(r).
class AddMap {
public:
    AddMap() = default;
    explicit AddMap(const CanonicalBasis& basis);
    static AddMap identity(const CanonicalBasis& basis);
    // Reads entries row-major, reducing entry (r, c) mod order(r).
    static AddMap from_entries(const CanonicalBasis& basis, const std::vector<std::int64_t>& entries);

    std::size_t dim() const noexcept { return orders_.size(); }
    const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
    const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

    std::int64_t at(std::size_t r, std::size_t c) const { return entries_[r * dim() + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t v);

    bool is_zero() const;
    // order(c) * column c == 0, i.e. the map is well defined on the group.
    bool is_well_defined() const;
    bool conforms_to(const CanonicalBasis& basis) const;

    AddMap operator+(const AddMap& other) const;
    AddMap operator-(const AddMap& other) const;
    AddMap scaled(std::int64_t k) const;

    bool operator==(const AddMap&) const = default;
    auto operator<=>(const AddMap&) const = default;

private:
    std::vector<std::int64_t> orders_;
    std::vector<std::int64_t> entries_;
};

// Throws std::invalid_argument when D was built over a different basis.
TriMatElement apply(const TriMatSpec& spec, const CanonicalBasis& basis, const AddMap& d, const TriMatElement& a);

// A -> E_ii D(A) E_jj. Throws std::out_of_range for i > j.
AddMap component(const TriMatSpec& spec, const CanonicalBasis& basis, const AddMap& d, std::size_t i, std::size_t j);

// The additive map determined by its values on the basis generators.
AddMap tabulate_map(const TriMatSpec& spec, const CanonicalBasis& basis,
                    const std::function<TriMatElement(const TriMatElement&)>& on_generator);

// Homogeneous system: sum_u rows[k][u] * x_u == 0 (mod row_moduli[k]) with
// x_u in Z/unknown_moduli[u]. Each coefficient must be compatible with its
// unknown's modulus: rows[k][u] * unknown_moduli[u] == 0 (mod row_moduli[k]).
struct LinearSystem {
    std::vector<std::int64_t> unknown_moduli;
    zmod::Matrix rows;
    std::vector<std::int64_t> row_moduli;

    void add_row(zmod::Row row, std::int64_t modulus);
};

// Independent cyclic generators of the solution group. Generator g has order
// moduli[g] (a prime power); the group is their direct sum.
struct SolutionSpace {
    std::vector<std::int64_t> unknown_moduli;
    zmod::Matrix generators;
    std::vector<std::int64_t> moduli;

    std::string cardinality() const;           // exact decimal
    std::uint64_t cardinality_u64() const;     // saturates at UINT64_MAX
    bool is_prime_field() const;
    // Every element of the group, for small spaces (throws CapError above cap).
    zmod::Matrix elements(std::uint64_t cap) const;
};

// Exact solution space. Over a single prime modulus this is Gaussian
// elimination; otherwise the group is split into p-primary parts and each is
// solved by Smith reduction over Z/p^e. Throws FormatError on inconsistent
// moduli.
SolutionSpace kernel_solve(const LinearSystem& sys);

// Generating set (not necessarily independent) of the same solution group,
// computed through the Howell form over Z/lcm of all moduli.
zmod::Matrix kernel_span_howell(const LinearSystem& sys);

// Hom-compatible maps are counted by prod over (r, c) of gcd(order r, order c).
std::uint64_t count_addmaps(const CanonicalBasis& basis);

// Visits every hom-compatible AddMap exactly once in a fixed order. Throws
// CapError carrying the count when it exceeds `cap`.
void enumerate_addmaps(const CanonicalBasis& basis, std::uint64_t cap, const std::function<void(const AddMap&)>& visit);

std::string decimal_product(const std::vector<std::int64_t>& factors);

} // namespace trijd
