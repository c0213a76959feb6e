#include "trijd/finalg.hpp"

#include "trijd/errors.hpp"
#include "trijd/zmod.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace trijd {

namespace {

std::uint64_t saturating_product(std::initializer_list<std::uint64_t> sizes)
{
    std::uint64_t total = 1;
    for (auto s : sizes) {
        if (s != 0 && total > std::numeric_limits<std::uint64_t>::max() / s)
            return std::numeric_limits<std::uint64_t>::max();
        total *= s;
    }
    return total;
}

// Calls fn on every N-tuple of indices below `sizes`, or on tuple_cap random
// tuples when the full range is larger.
template <std::size_t N, class Fn>
void scan_tuples(const std::array<std::uint64_t, N>& sizes, const ValidationOptions& opts, ValidationStats& stats,
                 Fn&& fn)
{
    std::uint64_t total = 1;
    for (auto s : sizes) {
        if (s == 0)
            return;
        total = saturating_product({total, s});
    }
    std::array<Elem, N> t{};
    if (total <= opts.tuple_cap) {
        for (std::uint64_t k = 0; k < total; ++k) {
            fn(t);
            for (std::size_t d = N; d-- > 0;) {
                if (++t[d] < sizes[d])
                    break;
                t[d] = 0;
            }
        }
        stats.tuples_checked += total;
        return;
    }
    stats.exhaustive = false;
    std::mt19937_64 rng(opts.seed);
    for (std::uint64_t k = 0; k < opts.tuple_cap; ++k) {
        for (std::size_t d = 0; d < N; ++d)
            t[d] = static_cast<Elem>(rng() % sizes[d]);
        fn(t);
    }
    stats.tuples_checked += opts.tuple_cap;
}

void merge(ValidationStats& into, const ValidationStats& from)
{
    into.exhaustive = into.exhaustive && from.exhaustive;
    into.tuples_checked += from.tuples_checked;
}

std::string describe(const AbelianGroup& g, Elem x)
{
    return format_coords(g.decode(x));
}

std::string describe(const FiniteRing& r, Elem x)
{
    if (!r.elem_to_label().empty())
        return "#" + std::to_string(r.elem_to_label()[x]);
    return describe(r.carrier(), x);
}

template <class... Parts>
std::string witness(const Parts&... parts)
{
    std::ostringstream os;
    os << "(";
    bool first = true;
    ((os << (first ? "" : ", ") << parts, first = false), ...);
    os << ")";
    return os.str();
}

} // namespace

std::string format_coords(const Coords& c)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c.size(); ++i)
        os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
}

AbelianGroup::AbelianGroup(std::vector<std::int64_t> orders) : orders_(std::move(orders))
{
    strides_.assign(orders_.size(), 1);
    for (std::size_t t = orders_.size(); t-- > 0;) {
        if (orders_[t] < 2)
            throw std::invalid_argument("AbelianGroup: cyclic orders must exceed 1");
        strides_[t] = size_;
        if (size_ > std::numeric_limits<Elem>::max() / static_cast<std::uint64_t>(orders_[t]))
            throw std::invalid_argument("AbelianGroup: carrier too large");
        size_ *= static_cast<std::uint64_t>(orders_[t]);
        exponent_ = zmod::lcm(exponent_, orders_[t]);
    }
}

Coords AbelianGroup::decode(Elem x) const
{
    Coords c(orders_.size());
    for (std::size_t t = 0; t < orders_.size(); ++t)
        c[t] = static_cast<std::int64_t>((x / strides_[t]) % static_cast<std::uint64_t>(orders_[t]));
    return c;
}

Elem AbelianGroup::encode(std::span<const std::int64_t> coords) const
{
    if (coords.size() != orders_.size())
        throw std::invalid_argument("AbelianGroup::encode: coordinate count mismatch");
    std::uint64_t x = 0;
    for (std::size_t t = 0; t < orders_.size(); ++t)
        x += static_cast<std::uint64_t>(zmod::mod(coords[t], orders_[t])) * strides_[t];
    return static_cast<Elem>(x);
}

Elem AbelianGroup::add(Elem x, Elem y) const
{
    std::uint64_t out = 0;
    for (std::size_t t = 0; t < orders_.size(); ++t) {
        const auto d = static_cast<std::uint64_t>(orders_[t]);
        std::uint64_t s = (x / strides_[t]) % d + (y / strides_[t]) % d;
        if (s >= d)
            s -= d;
        out += s * strides_[t];
    }
    return static_cast<Elem>(out);
}

Elem AbelianGroup::neg(Elem x) const
{
    std::uint64_t out = 0;
    for (std::size_t t = 0; t < orders_.size(); ++t) {
        const auto d = static_cast<std::uint64_t>(orders_[t]);
        std::uint64_t v = (x / strides_[t]) % d;
        out += (v == 0 ? 0 : d - v) * strides_[t];
    }
    return static_cast<Elem>(out);
}

Elem AbelianGroup::sub(Elem x, Elem y) const
{
    return add(x, neg(y));
}

Elem AbelianGroup::scale(Elem x, std::int64_t k) const
{
    Coords c = decode(x);
    for (std::size_t t = 0; t < c.size(); ++t)
        c[t] = static_cast<std::int64_t>(static_cast<__int128>(c[t]) * zmod::mod(k, orders_[t]) % orders_[t]);
    return encode(c);
}

Elem AbelianGroup::generator(std::size_t t) const
{
    if (t >= orders_.size())
        throw std::out_of_range("AbelianGroup::generator");
    return static_cast<Elem>(strides_[t]);
}

std::int64_t AbelianGroup::order_of(Elem x) const
{
    std::int64_t ord = 1;
    Coords c = decode(x);
    for (std::size_t t = 0; t < c.size(); ++t)
        ord = zmod::lcm(ord, orders_[t] / zmod::gcd(c[t], orders_[t]));
    return ord;
}

Elem FiniteRing::from_label(std::uint32_t label) const
{
    if (label_to_elem_.empty()) {
        if (label >= size())
            throw std::out_of_range("FiniteRing: element out of range");
        return label;
    }
    if (label >= label_to_elem_.size())
        throw std::out_of_range("FiniteRing: label out of range");
    return label_to_elem_[label];
}

std::vector<Elem> tabulate(std::uint64_t rows, std::uint64_t cols, const std::function<Elem(Elem, Elem)>& f)
{
    std::vector<Elem> out(rows * cols);
    for (std::uint64_t a = 0; a < rows; ++a)
        for (std::uint64_t b = 0; b < cols; ++b)
            out[a * cols + b] = f(static_cast<Elem>(a), static_cast<Elem>(b));
    return out;
}

FiniteRing ring_zmod(std::int64_t m)
{
    if (m < 2)
        throw std::invalid_argument("ring_zmod: invalid modulus " + std::to_string(m));
    if (m > 1 << 12)
        throw std::invalid_argument("ring_zmod: modulus too large for tabulated arithmetic");
    FiniteRing r;
    r.carrier_ = AbelianGroup({m});
    r.mul_ = tabulate(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m),
                      [m](Elem a, Elem b) { return static_cast<Elem>(static_cast<std::int64_t>(a) * b % m); });
    r.one_ = 1;
    r.modulus_ = m;
    r.stats_ = validate_ring(r);
    return r;
}

namespace {

// Validates the additive Cayley table and returns the zero label.
std::uint32_t check_addition(const std::vector<std::vector<std::uint32_t>>& add, const ValidationOptions& opts,
                             ValidationStats& stats)
{
    const std::size_t n = add.size();
    std::optional<std::uint32_t> zero;
    for (std::uint32_t z = 0; z < n && !zero; ++z) {
        bool ok = true;
        for (std::uint32_t a = 0; a < n && ok; ++a)
            ok = add[z][a] == a;
        if (ok)
            zero = z;
    }
    if (!zero)
        throw AxiomError("additive identity", "(none)");
    for (std::uint32_t a = 0; a < n; ++a) {
        bool has_inverse = false;
        for (std::uint32_t b = 0; b < n; ++b) {
            if (add[a][b] != add[b][a])
                throw AxiomError("additive commutativity", witness("#" + std::to_string(a), "#" + std::to_string(b)));
            has_inverse = has_inverse || add[a][b] == *zero;
        }
        if (!has_inverse)
            throw AxiomError("additive inverse", witness("#" + std::to_string(a)));
    }
    scan_tuples<3>({n, n, n}, opts, stats, [&](const std::array<Elem, 3>& t) {
        if (add[add[t[0]][t[1]]][t[2]] != add[t[0]][add[t[1]][t[2]]])
            throw AxiomError("additive associativity",
                             witness("#" + std::to_string(t[0]), "#" + std::to_string(t[1]), "#" + std::to_string(t[2])));
    });
    return *zero;
}

// Cyclic decomposition of the group given by an addition table. Returns the
// cyclic orders and, per label, its coordinates.
std::pair<std::vector<std::int64_t>, std::vector<Coords>>
decompose_group(const std::vector<std::vector<std::uint32_t>>& add, std::uint32_t zero)
{
    const std::size_t n = add.size();
    // Presentation: generators e_a for every label, relations e_a + e_b = e_{a+b}, e_0 = 0.
    zmod::Matrix relations;
    relations.reserve(n * (n + 1) / 2 + 1);
    {
        zmod::Row r(n, 0);
        r[zero] = 1;
        relations.push_back(std::move(r));
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            zmod::Row r(n, 0);
            r[a] += 1;
            r[b] += 1;
            r[add[a][b]] -= 1;
            relations.push_back(std::move(r));
        }

    std::vector<std::int64_t> orders;
    std::vector<Coords> coords(n);
    for (auto [p, e] : zmod::factorize(static_cast<std::int64_t>(n))) {
        auto reduced = zmod::echelon_local(relations, n, p, e);
        auto smith = zmod::smith_local(std::move(reduced), n, p, e);
        for (std::size_t i = 0; i < n; ++i) {
            int k = smith.exponents[i];
            if (k == 0)
                continue;
            const std::int64_t q = zmod::ipow(p, k);
            orders.push_back(q);
            for (std::size_t a = 0; a < n; ++a)
                coords[a].push_back(zmod::mod(smith.col_transform[a][i], q));
        }
    }
    return {orders, coords};
}

} // namespace

FiniteRing ring_from_tables(const std::vector<std::vector<std::uint32_t>>& add_table,
                            const std::vector<std::vector<std::uint32_t>>& mul_table, std::uint32_t one,
                            const ValidationOptions& opts)
{
    const std::size_t n = add_table.size();
    if (n < 2)
        throw ShapeError("ring_from_tables: need at least two elements");
    if (mul_table.size() != n || one >= n)
        throw ShapeError("ring_from_tables: table sizes disagree");
    for (std::size_t a = 0; a < n; ++a) {
        if (add_table[a].size() != n || mul_table[a].size() != n)
            throw ShapeError("ring_from_tables: tables must be square");
        for (std::size_t b = 0; b < n; ++b)
            if (add_table[a][b] >= n || mul_table[a][b] >= n)
                throw ShapeError("ring_from_tables: table entry out of range");
    }

    ValidationStats stats;
    const std::uint32_t zero = check_addition(add_table, opts, stats);
    auto [orders, coords] = decompose_group(add_table, zero);

    FiniteRing r;
    r.carrier_ = AbelianGroup(orders);
    if (r.carrier_.size() != n)
        throw AxiomError("additive group decomposition", "(order mismatch)");
    r.label_to_elem_.resize(n);
    r.elem_to_label_.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (std::uint32_t a = 0; a < n; ++a) {
        Elem x = r.carrier_.encode(coords[a]);
        if (seen[x])
            throw AxiomError("additive group decomposition", "(labels collide)");
        seen[x] = true;
        r.label_to_elem_[a] = x;
        r.elem_to_label_[x] = a;
    }
    // The decomposition must be a homomorphism.
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            if (r.carrier_.add(r.label_to_elem_[a], r.label_to_elem_[b]) != r.label_to_elem_[add_table[a][b]])
                throw AxiomError("additive group decomposition", witness("#" + std::to_string(a), "#" + std::to_string(b)));

    r.mul_.assign(n * n, 0);
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            r.mul_[static_cast<std::size_t>(r.label_to_elem_[a]) * n + r.label_to_elem_[b]] =
                r.label_to_elem_[mul_table[a][b]];
    r.one_ = r.label_to_elem_[one];
    merge(stats, validate_ring(r, opts));
    r.stats_ = stats;
    return r;
}

ValidationStats validate_ring(const FiniteRing& ring, const ValidationOptions& opts)
{
    ValidationStats stats;
    const std::uint64_t n = ring.size();
    for (Elem a = 0; a < n; ++a) {
        if (ring.mul(ring.one(), a) != a || ring.mul(a, ring.one()) != a)
            throw AxiomError("multiplicative identity", witness(describe(ring, a)));
        if (ring.mul(0, a) != 0 || ring.mul(a, 0) != 0)
            throw AxiomError("zero annihilates", witness(describe(ring, a)));
    }
    scan_tuples<3>({n, n, n}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [a, b, c] = t;
        if (ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c)))
            throw AxiomError("multiplicative associativity", witness(describe(ring, a), describe(ring, b), describe(ring, c)));
        if (ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)))
            throw AxiomError("left distributivity", witness(describe(ring, a), describe(ring, b), describe(ring, c)));
        if (ring.mul(ring.add(a, b), c) != ring.add(ring.mul(a, c), ring.mul(b, c)))
            throw AxiomError("right distributivity", witness(describe(ring, a), describe(ring, b), describe(ring, c)));
    });
    return stats;
}

Bimodule bimodule_new(RingPtr left, RingPtr right, AbelianGroup carrier, std::vector<Elem> left_table,
                      std::vector<Elem> right_table, const ValidationOptions& opts)
{
    if (!left || !right)
        throw ShapeError("bimodule_new: missing ring");
    const std::uint64_t nm = carrier.size();
    const std::uint64_t nl = left->size();
    const std::uint64_t nr = right->size();
    if (left_table.size() != nl * nm || right_table.size() != nm * nr)
        throw ShapeError("bimodule_new: action tables have the wrong size");
    for (Elem x : left_table)
        if (x >= nm)
            throw ShapeError("bimodule_new: left action leaves the carrier");
    for (Elem x : right_table)
        if (x >= nm)
            throw ShapeError("bimodule_new: right action leaves the carrier");

    Bimodule mod;
    mod.left_ = std::move(left);
    mod.right_ = std::move(right);
    mod.carrier_ = std::move(carrier);
    mod.left_table_ = std::move(left_table);
    mod.right_table_ = std::move(right_table);

    const FiniteRing& lr = *mod.left_;
    const FiniteRing& rr = *mod.right_;
    const AbelianGroup& g = mod.carrier_;
    auto dm = [&](Elem m) { return describe(g, m); };
    ValidationStats stats;

    for (Elem m = 0; m < nm; ++m) {
        if (mod.act_left(lr.one(), m) != m)
            throw AxiomError("left unital 1.m = m", witness(dm(m)));
        if (mod.act_right(m, rr.one()) != m)
            throw AxiomError("right unital m.1 = m", witness(dm(m)));
    }
    scan_tuples<3>({nl, nl, nm}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [r, s, m] = t;
        if (mod.act_left(lr.mul(r, s), m) != mod.act_left(r, mod.act_left(s, m)))
            throw AxiomError("left action (rs)m = r(sm)", witness(describe(lr, r), describe(lr, s), dm(m)));
        if (mod.act_left(lr.add(r, s), m) != g.add(mod.act_left(r, m), mod.act_left(s, m)))
            throw AxiomError("left action (r+s)m = rm+sm", witness(describe(lr, r), describe(lr, s), dm(m)));
    });
    scan_tuples<3>({nl, nm, nm}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [r, m, n] = t;
        if (mod.act_left(r, g.add(m, n)) != g.add(mod.act_left(r, m), mod.act_left(r, n)))
            throw AxiomError("left action r(m+n) = rm+rn", witness(describe(lr, r), dm(m), dm(n)));
    });
    scan_tuples<3>({nm, nr, nr}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [m, r, s] = t;
        if (mod.act_right(m, rr.mul(r, s)) != mod.act_right(mod.act_right(m, r), s))
            throw AxiomError("right action m(rs) = (mr)s", witness(dm(m), describe(rr, r), describe(rr, s)));
        if (mod.act_right(m, rr.add(r, s)) != g.add(mod.act_right(m, r), mod.act_right(m, s)))
            throw AxiomError("right action m(r+s) = mr+ms", witness(dm(m), describe(rr, r), describe(rr, s)));
    });
    scan_tuples<3>({nm, nm, nr}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [m, n, s] = t;
        if (mod.act_right(g.add(m, n), s) != g.add(mod.act_right(m, s), mod.act_right(n, s)))
            throw AxiomError("right action (m+n)s = ms+ns", witness(dm(m), dm(n), describe(rr, s)));
    });
    scan_tuples<3>({nl, nm, nr}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [r, m, s] = t;
        if (mod.act_right(mod.act_left(r, m), s) != mod.act_left(r, mod.act_right(m, s)))
            throw AxiomError("bimodule compatibility (rm)s = r(ms)", witness(describe(lr, r), dm(m), describe(rr, s)));
    });
    mod.stats_ = stats;
    return mod;
}

BalancedMap balanced_map_new(ModulePtr left, ModulePtr right, ModulePtr target, std::vector<Elem> gen_table,
                             const ValidationOptions& opts)
{
    if (!left || !right || !target)
        throw ShapeError("balanced_map_new: missing module");
    if (left->right_ring_ptr() != right->left_ring_ptr())
        throw ShapeError("balanced_map_new: middle rings differ");
    if (target->left_ring_ptr() != left->left_ring_ptr() || target->right_ring_ptr() != right->right_ring_ptr())
        throw ShapeError("balanced_map_new: target rings do not match the outer rings");

    const AbelianGroup& gl = left->carrier();
    const AbelianGroup& gr = right->carrier();
    const AbelianGroup& gt = target->carrier();
    if (gen_table.size() != gl.rank() * gr.rank())
        throw ShapeError("balanced_map_new: generator table has the wrong size");

    // The biadditive extension is well defined iff every generator image is
    // killed by both generator orders.
    for (std::size_t a = 0; a < gl.rank(); ++a)
        for (std::size_t b = 0; b < gr.rank(); ++b) {
            Elem v = gen_table[a * gr.rank() + b];
            if (v >= gt.size())
                throw ShapeError("balanced_map_new: generator image outside the target");
            if (gt.scale(v, gl.orders()[a]) != 0 || gt.scale(v, gr.orders()[b]) != 0)
                throw AxiomError("biadditive extension well-defined",
                                 witness("left generator " + std::to_string(a), "right generator " + std::to_string(b)));
        }

    BalancedMap map;
    map.left_ = std::move(left);
    map.right_ = std::move(right);
    map.target_ = std::move(target);
    map.gen_table_ = std::move(gen_table);

    const std::uint64_t nl = gl.size();
    const std::uint64_t nr = gr.size();
    map.table_.assign(nl * nr, 0);
    std::vector<Coords> right_coords(nr);
    for (Elem n = 0; n < nr; ++n)
        right_coords[n] = gr.decode(n);
    for (Elem m = 0; m < nl; ++m) {
        Coords cm = gl.decode(m);
        for (Elem n = 0; n < nr; ++n) {
            Elem acc = 0;
            for (std::size_t a = 0; a < cm.size(); ++a) {
                if (cm[a] == 0)
                    continue;
                for (std::size_t b = 0; b < right_coords[n].size(); ++b) {
                    std::int64_t k = cm[a] * right_coords[n][b];
                    if (k != 0)
                        acc = gt.add(acc, gt.scale(map.gen_table_[a * gr.rank() + b], k));
                }
            }
            map.table_[static_cast<std::size_t>(m) * nr + n] = acc;
        }
    }

    const Bimodule& ml = *map.left_;
    const Bimodule& mr = *map.right_;
    const Bimodule& mt = *map.target_;
    const FiniteRing& ri = ml.left_ring();
    const FiniteRing& rj = ml.right_ring();
    const FiniteRing& rk = mr.right_ring();
    ValidationStats stats;
    scan_tuples<3>({nl, rj.size(), nr}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [m, r, n] = t;
        if (map.apply(ml.act_right(m, r), n) != map.apply(m, mr.act_left(r, n)))
            throw AxiomError("balanced (m.r)n = m(r.n)", witness(describe(gl, m), describe(rj, r), describe(gr, n)));
    });
    scan_tuples<3>({ri.size(), nl, nr}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [r, m, n] = t;
        if (map.apply(ml.act_left(r, m), n) != mt.act_left(r, map.apply(m, n)))
            throw AxiomError("left equivariant (r.m)n = r.(mn)", witness(describe(ri, r), describe(gl, m), describe(gr, n)));
    });
    scan_tuples<3>({nl, nr, rk.size()}, opts, stats, [&](const std::array<Elem, 3>& t) {
        auto [m, n, s] = t;
        if (map.apply(m, mr.act_right(n, s)) != mt.act_right(map.apply(m, n), s))
            throw AxiomError("right equivariant m(n.s) = (mn).s", witness(describe(gl, m), describe(gr, n), describe(rk, s)));
    });
    map.stats_ = stats;
    return map;
}

std::vector<Elem> annihilator_left(const Bimodule& m)
{
    std::vector<Elem> out;
    for (Elem r = 0; r < m.left_ring().size(); ++r) {
        bool kills = true;
        for (Elem x = 0; x < m.size() && kills; ++x)
            kills = m.act_left(r, x) == 0;
        if (kills)
            out.push_back(r);
    }
    return out;
}

std::vector<Elem> annihilator_right(const Bimodule& m)
{
    std::vector<Elem> out;
    for (Elem s = 0; s < m.right_ring().size(); ++s) {
        bool kills = true;
        for (Elem x = 0; x < m.size() && kills; ++x)
            kills = m.act_right(x, s) == 0;
        if (kills)
            out.push_back(s);
    }
    return out;
}

bool is_faithful_left(const Bimodule& m)
{
    return annihilator_left(m).size() == 1;
}

bool is_faithful_right(const Bimodule& m)
{
    return annihilator_right(m).size() == 1;
}

} // namespace trijd
