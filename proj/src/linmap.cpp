#include "trijd/linmap.hpp"

#include "trijd/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace trijd {

AddMap::AddMap(const CanonicalBasis& basis)
{
    orders_.reserve(basis.size());
    for (const auto& g : basis.generators)
        orders_.push_back(g.order);
    entries_.assign(orders_.size() * orders_.size(), 0);
}

AddMap AddMap::identity(const CanonicalBasis& basis)
{
    AddMap m(basis);
    for (std::size_t r = 0; r < m.dim(); ++r)
        m.set(r, r, 1);
    return m;
}

AddMap AddMap::from_entries(const CanonicalBasis& basis, const std::vector<std::int64_t>& entries)
{
    AddMap m(basis);
    if (entries.size() != m.entries_.size())
        throw std::invalid_argument("AddMap::from_entries: expected " + std::to_string(m.entries_.size()) + " entries");
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            m.set(r, c, entries[r * m.dim() + c]);
    return m;
}

void AddMap::set(std::size_t r, std::size_t c, std::int64_t v)
{
    entries_.at(r * dim() + c) = zmod::mod(v, orders_.at(r));
}

bool AddMap::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](std::int64_t x) { return x == 0; });
}

bool AddMap::is_well_defined() const
{
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c)
            if (static_cast<__int128>(at(r, c)) * orders_[c] % orders_[r] != 0)
                return false;
    return true;
}

bool AddMap::conforms_to(const CanonicalBasis& basis) const
{
    if (basis.size() != dim())
        return false;
    for (std::size_t r = 0; r < dim(); ++r)
        if (basis.order(r) != orders_[r])
            return false;
    return true;
}

AddMap AddMap::operator+(const AddMap& other) const
{
    if (orders_ != other.orders_)
        throw std::invalid_argument("AddMap: basis mismatch");
    AddMap out = *this;
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c)
            out.set(r, c, at(r, c) + other.at(r, c));
    return out;
}

AddMap AddMap::operator-(const AddMap& other) const
{
    return *this + other.scaled(-1);
}

AddMap AddMap::scaled(std::int64_t k) const
{
    AddMap out = *this;
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c)
            out.set(r, c, static_cast<std::int64_t>(static_cast<__int128>(at(r, c)) * zmod::mod(k, orders_[r]) % orders_[r]));
    return out;
}

TriMatElement apply(const TriMatSpec& spec, const CanonicalBasis& basis, const AddMap& d, const TriMatElement& a)
{
    if (!d.conforms_to(basis))
        throw std::invalid_argument("apply: map and element use different bases");
    const Coords x = to_coords(spec, basis, a);
    Coords y(d.dim(), 0);
    for (std::size_t r = 0; r < d.dim(); ++r) {
        const std::int64_t q = d.orders()[r];
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < d.dim(); ++c)
            if (x[c] != 0)
                acc = (acc + d.at(r, c) * x[c]) % q;
        y[r] = acc;
    }
    return from_coords(spec, basis, y);
}

AddMap component(const TriMatSpec& spec, const CanonicalBasis& basis, const AddMap& d, std::size_t i, std::size_t j)
{
    if (i > j)
        throw std::out_of_range("component: reversed indices (" + std::to_string(i) + "," + std::to_string(j) + ")");
    const std::size_t s = spec.slot(i, j);
    const std::size_t first = basis.slot_offset[s];
    const std::size_t last = first + spec.block_group(i, j).rank();
    AddMap out(basis);
    for (std::size_t r = first; r < last; ++r)
        for (std::size_t c = 0; c < d.dim(); ++c)
            out.set(r, c, d.at(r, c));
    return out;
}

AddMap tabulate_map(const TriMatSpec& spec, const CanonicalBasis& basis,
                    const std::function<TriMatElement(const TriMatElement&)>& on_generator)
{
    AddMap out(basis);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        Coords y = to_coords(spec, basis, on_generator(basis_element(spec, basis, c)));
        for (std::size_t r = 0; r < basis.size(); ++r)
            out.set(r, c, y[r]);
    }
    return out;
}

void LinearSystem::add_row(zmod::Row row, std::int64_t modulus)
{
    for (auto& x : row)
        x = zmod::mod(x, modulus);
    rows.push_back(std::move(row));
    row_moduli.push_back(modulus);
}

std::string decimal_product(const std::vector<std::int64_t>& factors)
{
    std::vector<int> digits{1}; // little-endian base 10
    for (std::int64_t f : factors) {
        std::int64_t carry = 0;
        for (auto& d : digits) {
            std::int64_t v = d * f + carry;
            d = static_cast<int>(v % 10);
            carry = v / 10;
        }
        while (carry > 0) {
            digits.push_back(static_cast<int>(carry % 10));
            carry /= 10;
        }
    }
    std::string s;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        s.push_back(static_cast<char>('0' + *it));
    return s;
}

std::string SolutionSpace::cardinality() const
{
    return decimal_product(moduli);
}

std::uint64_t SolutionSpace::cardinality_u64() const
{
    std::uint64_t total = 1;
    for (auto m : moduli) {
        if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(m))
            return std::numeric_limits<std::uint64_t>::max();
        total *= static_cast<std::uint64_t>(m);
    }
    return total;
}

bool SolutionSpace::is_prime_field() const
{
    auto primes = [](std::int64_t m) { return zmod::factorize(m); };
    if (unknown_moduli.empty())
        return true;
    auto f = primes(unknown_moduli.front());
    if (f.size() != 1 || f.front().second != 1)
        return false;
    return std::all_of(unknown_moduli.begin(), unknown_moduli.end(),
                       [&](std::int64_t m) { return m == unknown_moduli.front(); });
}

zmod::Matrix SolutionSpace::elements(std::uint64_t cap) const
{
    const std::uint64_t count = cardinality_u64();
    if (count > cap)
        throw CapError("SolutionSpace::elements", count, cap);
    const std::size_t n = unknown_moduli.size();
    zmod::Matrix out;
    out.reserve(count);
    std::vector<std::int64_t> coef(generators.size(), 0);
    for (std::uint64_t k = 0; k < count; ++k) {
        zmod::Row v(n, 0);
        for (std::size_t g = 0; g < generators.size(); ++g)
            if (coef[g] != 0)
                for (std::size_t u = 0; u < n; ++u)
                    v[u] = (v[u] + coef[g] * generators[g][u]) % unknown_moduli[u];
        out.push_back(std::move(v));
        for (std::size_t g = 0; g < coef.size(); ++g) {
            if (++coef[g] < moduli[g])
                break;
            coef[g] = 0;
        }
    }
    return out;
}

namespace {

void check_system(const LinearSystem& sys)
{
    const std::size_t n = sys.unknown_moduli.size();
    if (sys.rows.size() != sys.row_moduli.size())
        throw FormatError("linear system: row and modulus counts differ");
    for (auto m : sys.unknown_moduli)
        if (m < 1)
            throw FormatError("linear system: unknown modulus must be positive");
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
        const auto& row = sys.rows[k];
        const std::int64_t m = sys.row_moduli[k];
        if (m < 1)
            throw FormatError("linear system: row modulus must be positive");
        if (row.size() != n)
            throw FormatError("linear system: row " + std::to_string(k) + " has the wrong length");
        for (std::size_t u = 0; u < n; ++u)
            if (static_cast<__int128>(zmod::mod(row[u], m)) * sys.unknown_moduli[u] % m != 0)
                throw FormatError("linear system: inconsistent moduli at row " + std::to_string(k) + ", unknown " +
                                  std::to_string(u));
    }
}

// Solves the p-primary part. Unknown u lives in Z/p^a_u, embedded in Z/p^e
// as z_u = p^(e - a_u) y_u; row k is scaled from Z/p^b_k into Z/p^e.
void solve_primary(const LinearSystem& sys, std::int64_t p, SolutionSpace& out)
{
    const std::size_t n = sys.unknown_moduli.size();
    std::vector<int> a(n);
    int e = 0;
    for (std::size_t u = 0; u < n; ++u) {
        a[u] = zmod::valuation(sys.unknown_moduli[u], p, 62);
        e = std::max(e, a[u]);
    }
    std::vector<int> b(sys.rows.size());
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
        b[k] = zmod::valuation(sys.row_moduli[k], p, 62);
        e = std::max(e, b[k]);
    }
    const std::int64_t q = zmod::ipow(p, e);

    zmod::Matrix pending;
    for (std::size_t u = 0; u < n; ++u)
        if (a[u] < e) {
            zmod::Row r(n, 0);
            r[u] = zmod::ipow(p, a[u]);
            pending.push_back(std::move(r));
        }

    const std::size_t batch = 4 * n + 16;
    zmod::Matrix reduced;
    auto flush = [&] {
        reduced.insert(reduced.end(), std::make_move_iterator(pending.begin()), std::make_move_iterator(pending.end()));
        pending.clear();
        reduced = zmod::echelon_local(std::move(reduced), n, p, e);
    };
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
        if (b[k] == 0)
            continue;
        zmod::Row r(n, 0);
        bool nonzero = false;
        for (std::size_t u = 0; u < n; ++u) {
            std::int64_t coef = zmod::mod(sys.rows[k][u], sys.row_moduli[k]);
            if (coef == 0)
                continue;
            if (a[u] >= b[k]) {
                coef = static_cast<std::int64_t>(static_cast<__int128>(coef) * zmod::ipow(p, a[u] - b[k]) % q);
            } else {
                // Compatibility guarantees p^(b - a) divides the coefficient.
                coef = coef / zmod::ipow(p, b[k] - a[u]) % q;
            }
            r[u] = coef;
            nonzero = nonzero || coef != 0;
        }
        if (nonzero)
            pending.push_back(std::move(r));
        if (pending.size() >= batch)
            flush();
    }
    flush();

    zmod::LocalSmith smith = zmod::smith_local(std::move(reduced), n, p, e);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = smith.exponents[i];
        if (k == 0)
            continue;
        const std::int64_t shift = zmod::ipow(p, e - k);
        zmod::Row gen(n, 0);
        bool nonzero = false;
        for (std::size_t u = 0; u < n; ++u) {
            if (a[u] == 0)
                continue;
            const std::int64_t z = static_cast<std::int64_t>(static_cast<__int128>(smith.col_transform[u][i]) * shift % q);
            const std::int64_t pa = zmod::ipow(p, a[u]);
            const std::int64_t y = z / zmod::ipow(p, e - a[u]) % pa;
            // CRT lift: y mod p^a, 0 mod the cofactor.
            const std::int64_t d = sys.unknown_moduli[u];
            const std::int64_t cof = d / pa;
            const std::int64_t lift =
                static_cast<std::int64_t>(static_cast<__int128>(y) * cof % d * zmod::inverse(cof % pa, pa) % d);
            gen[u] = lift;
            nonzero = nonzero || lift != 0;
        }
        if (!nonzero)
            continue;
        out.generators.push_back(std::move(gen));
        out.moduli.push_back(zmod::ipow(p, k));
    }
}

} // namespace

SolutionSpace kernel_solve(const LinearSystem& sys)
{
    check_system(sys);
    SolutionSpace out;
    out.unknown_moduli = sys.unknown_moduli;
    std::int64_t m = 1;
    for (auto d : sys.unknown_moduli)
        m = zmod::lcm(m, d);
    for (auto [p, e] : zmod::factorize(m)) {
        (void)e;
        solve_primary(sys, p, out);
    }
    return out;
}

zmod::Matrix kernel_span_howell(const LinearSystem& sys)
{
    check_system(sys);
    const std::size_t n = sys.unknown_moduli.size();
    std::int64_t m = 1;
    for (auto d : sys.unknown_moduli)
        m = zmod::lcm(m, d);
    for (auto d : sys.row_moduli)
        m = zmod::lcm(m, d);

    // Uniform modulus: z_u = (m / d_u) y_u; row k scaled by m / m_k.
    zmod::Matrix rows;
    for (std::size_t u = 0; u < n; ++u) {
        zmod::Row r(n, 0);
        r[u] = sys.unknown_moduli[u] % m;
        if (r[u] != 0)
            rows.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < sys.rows.size(); ++k) {
        zmod::Row r(n, 0);
        for (std::size_t u = 0; u < n; ++u) {
            const std::int64_t coef = zmod::mod(sys.rows[k][u], sys.row_moduli[k]);
            r[u] = static_cast<std::int64_t>(static_cast<__int128>(coef) * sys.unknown_moduli[u] / sys.row_moduli[k] % m);
        }
        rows.push_back(std::move(r));
    }
    zmod::Matrix kernel = zmod::howell_kernel(rows, n, m);
    zmod::Matrix out;
    for (auto& z : kernel) {
        zmod::Row y(n);
        for (std::size_t u = 0; u < n; ++u)
            y[u] = z[u] / (m / sys.unknown_moduli[u]) % sys.unknown_moduli[u];
        out.push_back(std::move(y));
    }
    return out;
}

std::uint64_t count_addmaps(const CanonicalBasis& basis)
{
    std::uint64_t total = 1;
    for (const auto& gr : basis.generators)
        for (const auto& gc : basis.generators) {
            auto g = static_cast<std::uint64_t>(zmod::gcd(gr.order, gc.order));
            if (total > std::numeric_limits<std::uint64_t>::max() / g)
                return std::numeric_limits<std::uint64_t>::max();
            total *= g;
        }
    return total;
}

void enumerate_addmaps(const CanonicalBasis& basis, std::uint64_t cap, const std::function<void(const AddMap&)>& visit)
{
    const std::uint64_t count = count_addmaps(basis);
    if (count > cap)
        throw CapError("enumerate_addmaps", count, cap);
    const std::size_t n = basis.size();
    std::vector<std::int64_t> step(n * n), choices(n * n), digit(n * n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const std::int64_t g = zmod::gcd(basis.order(r), basis.order(c));
            choices[r * n + c] = g;
            step[r * n + c] = basis.order(r) / g;
        }
    AddMap m(basis);
    for (std::uint64_t k = 0; k < count; ++k) {
        visit(m);
        // Odometer with the last entry fastest.
        for (std::size_t u = n * n; u-- > 0;) {
            if (++digit[u] < choices[u]) {
                m.set(u / n, u % n, digit[u] * step[u]);
                break;
            }
            digit[u] = 0;
            m.set(u / n, u % n, 0);
        }
    }
}

} // namespace trijd
