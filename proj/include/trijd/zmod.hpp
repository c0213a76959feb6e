#pragma once

// Exact linear algebra over Z/m: residue helpers, Smith reduction over the
// chain rings Z/p^e, and Howell normal form over arbitrary Z/m.

#include <cstdint>
#include <utility>
#include <vector>

namespace trijd::zmod {

using Row = std::vector<std::int64_t>;
using Matrix = std::vector<Row>;

std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

// Inverse of a modulo m; requires gcd(a, m) == 1.
std::int64_t inverse(std::int64_t a, std::int64_t m);

// Largest k with p^k | a, capped at `cap` (a == 0 yields cap).
int valuation(std::int64_t a, std::int64_t p, int cap);

std::int64_t ipow(std::int64_t base, int exp);

// Prime factorisation as (p, e) pairs in increasing p.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

// Result of Smith reduction of an R x N matrix over Z/p^e. Column
// operations are accumulated in `col_transform` (N x N, invertible), so that
// A * col_transform has the same row space as diag(p^exponents[i]).
// exponents[i] == e marks a zero diagonal slot (including i >= R).
struct LocalSmith {
    std::int64_t p = 0;
    int e = 0;
    std::vector<int> exponents;
    Matrix col_transform;
};

LocalSmith smith_local(Matrix a, std::size_t cols, std::int64_t p, int e);

// Row-echelon form over Z/p^e by invertible row operations; the returned
// rows (at most `cols`) span the same submodule as the input.
Matrix echelon_local(Matrix a, std::size_t cols, std::int64_t p, int e);

// Howell normal form over Z/m. Rows are returned in echelon order; the form
// spans the same submodule and supports exact membership tests.
Matrix howell_form(Matrix a, std::size_t cols, std::int64_t m);

// True if v lies in the row span of a Howell form `h` over Z/m.
bool howell_contains(const Matrix& h, Row v, std::int64_t m);

// Generators of { z in (Z/m)^cols : a z = 0 } read off the Howell form of
// [a^T | I]. Not necessarily independent.
Matrix howell_kernel(const Matrix& a, std::size_t cols, std::int64_t m);

} // namespace trijd::zmod
