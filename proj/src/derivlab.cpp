#include "trijd/derivlab.hpp"

#include "trijd/errors.hpp"
#include "trijd/parallel.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace trijd {

std::string_view kind_name(DerivKind kind)
{
    switch (kind) {
    case DerivKind::derivation:
        return "derivation";
    case DerivKind::jordan_linearized:
        return "jordan_linearized";
    case DerivKind::jordan_squared:
        return "jordan_squared";
    case DerivKind::antiderivation:
        return "antiderivation";
    }
    return "?";
}

DerivKind parse_kind(std::string_view text)
{
    if (text == "deriv" || text == "derivation")
        return DerivKind::derivation;
    if (text == "jordan-lin" || text == "jordan_linearized")
        return DerivKind::jordan_linearized;
    if (text == "jordan-sq" || text == "jordan_squared")
        return DerivKind::jordan_squared;
    if (text == "antideriv" || text == "antiderivation")
        return DerivKind::antiderivation;
    throw std::invalid_argument("unknown derivation kind '" + std::string(text) + "'");
}

std::string_view status_name(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass:
        return "pass";
    case CheckStatus::fail:
        return "fail";
    case CheckStatus::skipped:
        return "skipped";
    }
    return "?";
}

Lab::Lab(TriMatSpec spec, LabOptions opts) : spec_(std::move(spec)), opts_(opts), basis_(canonical_basis(spec_))
{
    const std::size_t n = basis_.size();
    for (std::size_t r = 0; r < n; ++r)
        gens_.push_back(basis_element(spec_, basis_, r));
    products_.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            products_.push_back(to_coords(spec_, basis_, mul(spec_, gens_[a], gens_[b])));
}

TriMatElement Lab::apply(const AddMap& d, const TriMatElement& a) const
{
    return trijd::apply(spec_, basis_, d, a);
}

namespace {

bool is_pair_kind(DerivKind kind)
{
    return kind != DerivKind::jordan_squared;
}

// Leibniz-type defect of d on the pair (a, b); zero iff the identity holds.
TriMatElement pair_defect(const Lab& lab, const AddMap& d, DerivKind kind, const TriMatElement& a,
                          const TriMatElement& b, const TriMatElement& da, const TriMatElement& db)
{
    const TriMatSpec& s = lab.spec();
    switch (kind) {
    case DerivKind::derivation:
        return sub(s, lab.apply(d, mul(s, a, b)), add(s, mul(s, da, b), mul(s, a, db)));
    case DerivKind::antiderivation:
        return sub(s, lab.apply(d, mul(s, a, b)), add(s, mul(s, db, a), mul(s, b, da)));
    case DerivKind::jordan_linearized: {
        TriMatElement lhs = lab.apply(d, add(s, mul(s, a, b), mul(s, b, a)));
        TriMatElement rhs = add(s, add(s, mul(s, da, b), mul(s, a, db)), add(s, mul(s, db, a), mul(s, b, da)));
        return sub(s, lhs, rhs);
    }
    case DerivKind::jordan_squared:
        break;
    }
    throw std::logic_error("pair_defect: not a pair kind");
}

TriMatElement squared_defect(const Lab& lab, const AddMap& d, const TriMatElement& a)
{
    const TriMatSpec& s = lab.spec();
    TriMatElement da = lab.apply(d, a);
    return sub(s, lab.apply(d, mul(s, a, a)), add(s, mul(s, da, a), mul(s, a, da)));
}

void require_element_cap(const Lab& lab, const char* what)
{
    if (lab.spec().size() > lab.options().element_cap)
        throw CapError(what, lab.spec().size(), lab.options().element_cap);
}

} // namespace

Membership is_member(const Lab& lab, const AddMap& d, DerivKind kind)
{
    if (!d.conforms_to(lab.basis()))
        throw std::invalid_argument("is_member: map does not conform to the instance basis");
    const TriMatSpec& s = lab.spec();
    Membership out;
    if (is_pair_kind(kind)) {
        const std::size_t n = lab.basis().size();
        std::vector<TriMatElement> images;
        images.reserve(n);
        for (std::size_t a = 0; a < n; ++a)
            images.push_back(lab.apply(d, lab.generator(a)));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                TriMatElement defect = pair_defect(lab, d, kind, lab.generator(a), lab.generator(b), images[a], images[b]);
                if (!is_zero(defect)) {
                    out.member = false;
                    out.witness = "a=g" + std::to_string(a) + " b=g" + std::to_string(b) + " defect=" +
                                  format_element(s, defect);
                    return out;
                }
            }
        return out;
    }
    require_element_cap(lab, "is_member(jordan_squared)");
    for (std::uint64_t k = 0; k < s.size(); ++k) {
        TriMatElement a = s.element_at(k);
        TriMatElement defect = squared_defect(lab, d, a);
        if (!is_zero(defect)) {
            out.member = false;
            out.witness = "a=" + format_element(s, a) + " defect=" + format_element(s, defect);
            return out;
        }
    }
    return out;
}

std::uint64_t MapSpace::cardinality_u64() const
{
    SolutionSpace tmp;
    tmp.moduli = moduli;
    return tmp.cardinality_u64();
}

std::vector<AddMap> MapSpace::elements(std::uint64_t cap) const
{
    const std::uint64_t count = cardinality_u64();
    if (count > cap)
        throw CapError("MapSpace::elements", count, cap);
    std::vector<AddMap> out;
    if (generators.empty()) {
        return out;
    }
    out.reserve(count);
    std::vector<std::int64_t> coef(generators.size(), 0);
    AddMap zero_map = generators.front().scaled(0);
    for (std::uint64_t k = 0; k < count; ++k) {
        AddMap m = zero_map;
        for (std::size_t g = 0; g < generators.size(); ++g)
            if (coef[g] != 0)
                m = m + generators[g].scaled(coef[g]);
        out.push_back(std::move(m));
        for (std::size_t g = 0; g < coef.size(); ++g) {
            if (++coef[g] < moduli[g])
                break;
            coef[g] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

LinearSystem derivation_system(const Lab& lab, DerivKind kind)
{
    const CanonicalBasis& basis = lab.basis();
    const TriMatSpec& s = lab.spec();
    const std::size_t n = basis.size();
    const std::size_t unknowns = n * n;
    auto u = [n](std::size_t r, std::size_t c) { return r * n + c; };

    LinearSystem sys;
    sys.unknown_moduli.resize(unknowns);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            sys.unknown_moduli[u(r, c)] = basis.order(r);

    // Hom compatibility: order(c) * x_rc == 0 in Z/order(r).
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (basis.order(c) % basis.order(r) != 0) {
                zmod::Row row(unknowns, 0);
                row[u(r, c)] = basis.order(c);
                sys.add_row(std::move(row), basis.order(r));
            }

    struct Chunk {
        zmod::Matrix rows;
        std::vector<std::int64_t> moduli;
    };
    auto emit = [&](Chunk& chunk, std::vector<zmod::Row>& rows) {
        for (std::size_t r = 0; r < n; ++r) {
            bool nonzero = false;
            for (auto& x : rows[r]) {
                x = zmod::mod(x, basis.order(r));
                nonzero = nonzero || x != 0;
            }
            if (nonzero) {
                chunk.rows.push_back(std::move(rows[r]));
                chunk.moduli.push_back(basis.order(r));
            }
        }
    };

    const std::size_t items = is_pair_kind(kind) ? n * n : (require_element_cap(lab, "solve_space(jordan_squared)"), s.size());
    const unsigned threads = lab.options().threads;
    const std::size_t chunk_count = std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(items, 1));
    std::vector<Chunk> chunks(chunk_count);

    parallel_chunks(items, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Chunk& out = chunks[chunk];
        for (std::size_t item = begin; item < end; ++item) {
            std::vector<zmod::Row> rows(n, zmod::Row(unknowns, 0));
            if (is_pair_kind(kind)) {
                const std::size_t a = item / n;
                const std::size_t b = item % n;
                // Left-hand side: D applied to the product term.
                Coords lhs = lab.product(a, b);
                if (kind == DerivKind::jordan_linearized) {
                    const Coords& ba = lab.product(b, a);
                    for (std::size_t c = 0; c < n; ++c)
                        lhs[c] += ba[c];
                }
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        rows[r][u(r, c)] += lhs[c];
                for (std::size_t sgen = 0; sgen < n; ++sgen) {
                    for (std::size_t r = 0; r < n; ++r) {
                        switch (kind) {
                        case DerivKind::derivation:
                            // D(a) b + a D(b)
                            rows[r][u(sgen, a)] -= lab.product(sgen, b)[r];
                            rows[r][u(sgen, b)] -= lab.product(a, sgen)[r];
                            break;
                        case DerivKind::antiderivation:
                            // D(b) a + b D(a)
                            rows[r][u(sgen, b)] -= lab.product(sgen, a)[r];
                            rows[r][u(sgen, a)] -= lab.product(b, sgen)[r];
                            break;
                        case DerivKind::jordan_linearized:
                            rows[r][u(sgen, a)] -= lab.product(sgen, b)[r];
                            rows[r][u(sgen, b)] -= lab.product(a, sgen)[r];
                            rows[r][u(sgen, b)] -= lab.product(sgen, a)[r];
                            rows[r][u(sgen, a)] -= lab.product(b, sgen)[r];
                            break;
                        case DerivKind::jordan_squared:
                            break;
                        }
                    }
                }
            } else {
                const TriMatElement x = s.element_at(item);
                const Coords alpha = to_coords(s, basis, x);
                const Coords square = to_coords(s, basis, mul(s, x, x));
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        rows[r][u(r, c)] += square[c];
                for (std::size_t sgen = 0; sgen < n; ++sgen) {
                    const Coords right = to_coords(s, basis, mul(s, lab.generator(sgen), x));
                    const Coords left = to_coords(s, basis, mul(s, x, lab.generator(sgen)));
                    for (std::size_t c = 0; c < n; ++c) {
                        if (alpha[c] == 0)
                            continue;
                        for (std::size_t r = 0; r < n; ++r)
                            rows[r][u(sgen, c)] -= alpha[c] * (right[r] + left[r]);
                    }
                }
            }
            emit(out, rows);
        }
    });
    for (auto& chunk : chunks)
        for (std::size_t k = 0; k < chunk.rows.size(); ++k)
            sys.add_row(std::move(chunk.rows[k]), chunk.moduli[k]);
    return sys;
}

MapSpace solve_space(const Lab& lab, DerivKind kind)
{
    SolutionSpace solved = kernel_solve(derivation_system(lab, kind));
    MapSpace out;
    out.kind = kind;
    out.moduli = solved.moduli;
    for (const auto& g : solved.generators) {
        AddMap m = AddMap::from_entries(lab.basis(), g);
        Membership check = is_member(lab, m, kind);
        if (!check.member || !m.is_well_defined())
            throw std::logic_error("solve_space: generator failed re-verification: " + check.witness);
        out.generators.push_back(std::move(m));
    }
    return out;
}

std::vector<AddMap> oracle_members(const Lab& lab, DerivKind kind)
{
    std::vector<AddMap> out;
    enumerate_addmaps(lab.basis(), lab.options().oracle_cap, [&](const AddMap& m) {
        if (is_member(lab, m, kind).member)
            out.push_back(m);
    });
    std::sort(out.begin(), out.end());
    return out;
}

SpaceComparison compare_spaces(const Lab& lab, const MapSpace& derivations, const MapSpace& jordan)
{
    SpaceComparison out;
    out.derivation_cardinality = derivations.cardinality();
    out.jordan_cardinality = jordan.cardinality();
    out.derivation_subset_jordan = std::all_of(derivations.generators.begin(), derivations.generators.end(),
                                               [&](const AddMap& m) {
                                                   return is_member(lab, m, DerivKind::jordan_linearized).member;
                                               });
    for (const auto& g : jordan.generators)
        if (!is_member(lab, g, DerivKind::derivation).member)
            out.jordan_only_generators.push_back(g);
    // Inclusion plus equal order, or equivalently every Jordan generator is a derivation.
    out.equal = out.derivation_subset_jordan && out.jordan_only_generators.empty() &&
                out.derivation_cardinality == out.jordan_cardinality;
    return out;
}

SpaceComparison compare_spaces(const Lab& lab)
{
    return compare_spaces(lab, solve_space(lab, DerivKind::derivation),
                          solve_space(lab, DerivKind::jordan_linearized));
}

std::vector<AddMap> counterexample_scan(const Lab& lab)
{
    std::vector<AddMap> out;
    for (auto& g : solve_space(lab, DerivKind::jordan_linearized).generators)
        if (!is_member(lab, g, DerivKind::derivation).member)
            out.push_back(std::move(g));
    return out;
}

bool HypothesisReport::faithful() const
{
    return faithful_right_m1n && std::all_of(faithful_left.begin(), faithful_left.end(), [](bool b) { return b; });
}

HypothesisReport check_hypotheses(const TriMatSpec& spec)
{
    HypothesisReport out;
    const std::size_t n = spec.n();
    for (std::size_t i = 1; i < n; ++i)
        out.faithful_left.push_back(is_faithful_left(spec.module(i, n)));
    out.faithful_right_m1n = is_faithful_right(spec.module(1, n));
    out.two_torsion_free = true;
    for (std::size_t s = 0; s < spec.block_count(); ++s) {
        auto [i, j] = spec.block_of_slot(s);
        for (auto d : spec.block_group(i, j).orders())
            if (d % 2 == 0)
                out.two_torsion_free = false;
    }
    return out;
}

AddMap inner_derivation(const Lab& lab, const TriMatElement& a)
{
    const TriMatSpec& s = lab.spec();
    return tabulate_map(s, lab.basis(), [&](const TriMatElement& x) { return sub(s, mul(s, a, x), mul(s, x, a)); });
}

namespace {

// Shared state for one checker run over one map.
class Checker {
public:
    Checker(const Lab& lab, const AddMap& d, std::string id) : lab_(lab), d_(d), s_(lab.spec())
    {
        entry_.id = std::move(id);
        block_images_.resize(s_.block_count());
    }

    const TriMatSpec& spec() const { return s_; }
    std::size_t n() const { return s_.n(); }

    std::uint64_t block_size(std::size_t i, std::size_t j) const { return s_.block_group(i, j).size(); }
    TriMatElement blk(std::size_t i, std::size_t j, Elem x) const { return block_element(s_, i, j, x); }

    TriMatElement D(const TriMatElement& a) const { return lab_.apply(d_, a); }

    // D of the element with only block (i, j) = x, memoised per block.
    const TriMatElement& D_block(std::size_t i, std::size_t j, Elem x)
    {
        auto& cache = block_images_[s_.slot(i, j)];
        if (cache.empty()) {
            cache.reserve(block_size(i, j));
            for (Elem y = 0; y < block_size(i, j); ++y)
                cache.push_back(D(blk(i, j, y)));
        }
        return cache[x];
    }

    // D_st of the block element x at (i, j).
    Elem Dst(std::size_t s, std::size_t t, std::size_t i, std::size_t j, Elem x)
    {
        return entry(s_, D_block(i, j, x), s, t);
    }

    Elem E(std::size_t i) const { return s_.ring(i).one(); }
    const AbelianGroup& group(std::size_t i, std::size_t j) const { return s_.block_group(i, j); }

    std::string fmt(std::size_t i, std::size_t j, Elem x) const { return format_coords(group(i, j).decode(x)); }
    std::string fmt(const TriMatElement& a) const { return format_element(s_, a); }

    void expect(bool ok, const std::function<std::string()>& witness)
    {
        ++entry_.checks;
        if (!ok && entry_.status != CheckStatus::fail) {
            entry_.status = CheckStatus::fail;
            entry_.witness = witness();
        }
    }
    bool failed() const { return entry_.status == CheckStatus::fail; }

    LemmaEntry& result() { return entry_; }
    LemmaEntry finish()
    {
        return entry_;
    }

private:
    const Lab& lab_;
    const AddMap& d_;
    const TriMatSpec& s_;
    LemmaEntry entry_;
    std::vector<std::vector<TriMatElement>> block_images_;
};

std::string idx(std::initializer_list<std::pair<const char*, std::size_t>> parts)
{
    std::ostringstream os;
    bool first = true;
    for (auto [name, v] : parts) {
        os << (first ? "" : " ") << name << "=" << v;
        first = false;
    }
    return os.str();
}

// Zero outside the allowed blocks of an image.
template <class Allowed>
void expect_support(Checker& ck, const TriMatElement& image, Allowed allowed, const std::string& where)
{
    for (std::size_t s = 1; s <= ck.n(); ++s)
        for (std::size_t t = s; t <= ck.n(); ++t) {
            if (allowed(s, t))
                continue;
            Elem v = entry(ck.spec(), image, s, t);
            ck.expect(v == 0, [&] {
                return where + ": block (" + std::to_string(s) + "," + std::to_string(t) + ") = " + ck.fmt(s, t, v);
            });
        }
}

} // namespace

LemmaEntry check_lemma_e_image(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "E_image");
    for (std::size_t i = 1; i <= ck.n(); ++i) {
        const TriMatElement& image = ck.D_block(i, i, ck.E(i));
        expect_support(ck, image, [i](std::size_t s, std::size_t t) { return (t == i && s < i) || (s == i && t > i); },
                       "D(E_" + std::to_string(i) + std::to_string(i) + ")");
    }
    return ck.finish();
}

LemmaEntry check_lemma_diag_action(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "diag_action");
    for (std::size_t i = 1; i <= ck.n(); ++i)
        for (Elem r = 0; r < ck.block_size(i, i); ++r)
            expect_support(ck, ck.D_block(i, i, r),
                           [i](std::size_t s, std::size_t t) { return (t == i && s <= i) || (s == i && t >= i); },
                           idx({{"i", i}}) + " r=" + ck.fmt(i, i, r));
    return ck.finish();
}

LemmaEntry check_lemma_block_support(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "block_support");
    for (std::size_t i = 1; i <= ck.n(); ++i)
        for (std::size_t j = i + 1; j <= ck.n(); ++j)
            for (Elem m = 0; m < ck.block_size(i, j); ++m)
                expect_support(ck, ck.D_block(i, j, m),
                               [i, j](std::size_t s, std::size_t t) { return (t == j && s <= i) || (s == i && t >= j); },
                               idx({{"i", i}, {"j", j}}) + " m=" + ck.fmt(i, j, m));
    return ck.finish();
}

LemmaEntry check_lemma_matrix_formula(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "matrix_formula");
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();

    auto check_one = [&](const TriMatElement& a) {
        const TriMatElement image = ck.D(a);
        for (std::size_t i = 1; i <= n; ++i) {
            Elem expected = ck.Dst(i, i, i, i, entry(s, a, i, i));
            ck.expect(entry(s, image, i, i) == expected,
                      [&] { return "A=" + ck.fmt(a) + " d_" + std::to_string(i) + std::to_string(i); });
            for (std::size_t j = i + 1; j <= n; ++j) {
                const AbelianGroup& g = ck.group(i, j);
                Elem sum = 0;
                for (std::size_t k = i; k <= j; ++k)
                    sum = g.add(sum, ck.Dst(i, j, i, k, entry(s, a, i, k)));
                for (std::size_t k = i + 1; k <= j; ++k)
                    sum = g.add(sum, ck.Dst(i, j, k, j, entry(s, a, k, j)));
                ck.expect(entry(s, image, i, j) == sum, [&] {
                    return "A=" + ck.fmt(a) + " d_" + std::to_string(i) + std::to_string(j) + " = " +
                           ck.fmt(i, j, entry(s, image, i, j)) + ", formula gives " + ck.fmt(i, j, sum);
                });
            }
        }
    };

    if (s.size() <= lab.options().element_cap) {
        for (std::uint64_t k = 0; k < s.size() && !ck.failed(); ++k)
            check_one(s.element_at(k));
        ck.result().note = "exhaustive";
    } else {
        std::mt19937_64 rng(lab.options().seed);
        for (std::size_t k = 0; k < lab.options().formula_samples && !ck.failed(); ++k)
            check_one(s.element_at(rng() % s.size()));
        ck.result().note = "sampled " + std::to_string(lab.options().formula_samples) + " elements, seed " +
                          std::to_string(lab.options().seed);
    }
    return ck.finish();
}

LemmaEntry check_lemma_right_tail(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "right_tail");
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t t = j + 1; t <= n; ++t) {
                const Elem tail = ck.Dst(j, t, j, j, ck.E(j));
                for (Elem m = 0; m < ck.block_size(i, j); ++m) {
                    Elem lhs = ck.Dst(i, t, i, j, m);
                    Elem rhs = s.block_mul(i, j, t, m, tail);
                    ck.expect(lhs == rhs, [&] {
                        return idx({{"i", i}, {"j", j}, {"s", t}}) + " m=" + ck.fmt(i, j, m) + ": D_is(m)=" +
                               ck.fmt(i, t, lhs) + " m*D_js(E_jj)=" + ck.fmt(i, t, rhs);
                    });
                }
            }
    return ck.finish();
}

LemmaEntry check_lemma_unit_antisym(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "unit_antisym");
    const std::size_t n = ck.n();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            Elem sum = ck.group(i, j).add(ck.Dst(i, j, i, i, ck.E(i)), ck.Dst(i, j, j, j, ck.E(j)));
            ck.expect(sum == 0, [&] {
                return idx({{"i", i}, {"j", j}}) + ": D_ij(E_ii)+D_ij(E_jj)=" + ck.fmt(i, j, sum);
            });
        }
    return ck.finish();
}

LemmaEntry check_lemma_left_tail(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "left_tail");
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t r = 1; r < i; ++r) {
                const Elem head = ck.Dst(r, i, i, i, ck.E(i));
                for (Elem m = 0; m < ck.block_size(i, j); ++m) {
                    Elem lhs = ck.Dst(r, j, i, j, m);
                    Elem rhs = s.block_mul(r, i, j, head, m);
                    ck.expect(lhs == rhs, [&] {
                        return idx({{"s", r}, {"i", i}, {"j", j}}) + " m=" + ck.fmt(i, j, m) + ": D_sj(m)=" +
                               ck.fmt(r, j, lhs) + " D_si(E_ii)*m=" + ck.fmt(r, j, rhs);
                    });
                }
            }
    return ck.finish();
}

LemmaEntry check_corollary_full_image(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "full_image");
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (Elem m = 0; m < ck.block_size(i, j); ++m) {
                TriMatElement expected = zero(s);
                for (std::size_t k = 1; k < i; ++k)
                    expected.blocks[s.slot(k, j)] = s.block_mul(k, i, j, ck.Dst(k, i, i, i, ck.E(i)), m);
                expected.blocks[s.slot(i, j)] = ck.Dst(i, j, i, j, m);
                for (std::size_t t = j + 1; t <= n; ++t)
                    expected.blocks[s.slot(i, t)] = s.block_mul(i, j, t, m, ck.Dst(j, t, j, j, ck.E(j)));
                const TriMatElement& image = ck.D_block(i, j, m);
                ck.expect(image == expected, [&] {
                    return idx({{"i", i}, {"j", j}}) + " m=" + ck.fmt(i, j, m) + ": D(m)=" + ck.fmt(image) +
                           " expected " + ck.fmt(expected);
                });
            }
    return ck.finish();
}

LemmaEntry check_lemma_product_rule(const Lab& lab, const AddMap& d)
{
    Checker ck(lab, d, "product_rule");
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i; j <= n; ++j)
            for (std::size_t t = j + 1; t <= n; ++t)
                for (Elem m = 0; m < ck.block_size(i, j); ++m)
                    for (Elem x = 0; x < ck.block_size(j, t); ++x) {
                        const TriMatElement mm = ck.blk(i, j, m);
                        const TriMatElement xx = ck.blk(j, t, x);
                        TriMatElement lhs = ck.D(mul(s, mm, xx));
                        TriMatElement rhs = add(s, mul(s, ck.D_block(i, j, m), xx), mul(s, mm, ck.D_block(j, t, x)));
                        ck.expect(lhs == rhs, [&] {
                            return idx({{"i", i}, {"j", j}, {"t", t}}) + " m=" + ck.fmt(i, j, m) + " n=" + ck.fmt(j, t, x) +
                                   ": D(mn)=" + ck.fmt(lhs) + " D(m)n+mD(n)=" + ck.fmt(rhs);
                        });
                    }
    return ck.finish();
}

std::vector<LemmaEntry> check_product_components(const Lab& lab, const AddMap& d)
{
    const TriMatSpec& s = lab.spec();
    const std::size_t n = s.n();
    std::vector<LemmaEntry> out;

    {
        Checker ck(lab, d, "product_comp_it");
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                for (std::size_t t = j + 1; t <= n; ++t)
                    for (Elem m = 0; m < ck.block_size(i, j); ++m)
                        for (Elem x = 0; x < ck.block_size(j, t); ++x) {
                            Elem prod = s.block_mul(i, j, t, m, x);
                            Elem lhs = ck.Dst(i, t, i, t, prod);
                            Elem rhs = ck.group(i, t).add(s.block_mul(i, j, t, ck.Dst(i, j, i, j, m), x),
                                                          s.block_mul(i, j, t, m, ck.Dst(j, t, j, t, x)));
                            ck.expect(lhs == rhs, [&] {
                                return idx({{"i", i}, {"j", j}, {"t", t}}) + " m=" + ck.fmt(i, j, m) +
                                       " n=" + ck.fmt(j, t, x);
                            });
                        }
        out.push_back(ck.finish());
    }
    {
        Checker ck(lab, d, "product_comp_st");
        for (std::size_t r = 1; r <= n; ++r)
            for (std::size_t i = r + 1; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j)
                    for (std::size_t t = j + 1; t <= n; ++t)
                        for (Elem m = 0; m < ck.block_size(i, j); ++m)
                            for (Elem x = 0; x < ck.block_size(j, t); ++x) {
                                Elem prod = s.block_mul(i, j, t, m, x);
                                Elem lhs = ck.Dst(r, t, i, t, prod);
                                Elem rhs = s.block_mul(r, j, t, ck.Dst(r, j, i, j, m), x);
                                ck.expect(lhs == rhs, [&] {
                                    return idx({{"s", r}, {"i", i}, {"j", j}, {"t", t}}) + " m=" + ck.fmt(i, j, m) +
                                           " n=" + ck.fmt(j, t, x);
                                });
                            }
        out.push_back(ck.finish());
    }
    {
        Checker ck(lab, d, "product_comp_ik");
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                for (std::size_t t = j + 1; t <= n; ++t)
                    for (std::size_t k = t + 1; k <= n; ++k)
                        for (Elem m = 0; m < ck.block_size(i, j); ++m)
                            for (Elem x = 0; x < ck.block_size(j, t); ++x) {
                                Elem prod = s.block_mul(i, j, t, m, x);
                                Elem lhs = ck.Dst(i, k, i, t, prod);
                                Elem rhs = s.block_mul(i, j, k, m, ck.Dst(j, k, j, t, x));
                                ck.expect(lhs == rhs, [&] {
                                    return idx({{"i", i}, {"j", j}, {"t", t}, {"k", k}}) + " m=" + ck.fmt(i, j, m) +
                                           " n=" + ck.fmt(j, t, x);
                                });
                            }
        out.push_back(ck.finish());
    }
    {
        // D_{i,b}(x) y = D_ij(x y) for x in T_ab, y in T_bj, i < a <= b < j.
        Checker ck(lab, d, "tail_shift");
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t a = i + 1; a <= n; ++a)
                for (std::size_t b = a; b <= n; ++b)
                    for (std::size_t j = b + 1; j <= n; ++j)
                        for (Elem x = 0; x < ck.block_size(a, b); ++x)
                            for (Elem y = 0; y < ck.block_size(b, j); ++y) {
                                Elem lhs = s.block_mul(i, b, j, ck.Dst(i, b, a, b, x), y);
                                Elem rhs = ck.Dst(i, j, a, j, s.block_mul(a, b, j, x, y));
                                ck.expect(lhs == rhs, [&] {
                                    return idx({{"i", i}, {"i+t", a}, {"i+k", b}, {"j", j}}) + " x=" + ck.fmt(a, b, x) +
                                           " y=" + ck.fmt(b, j, y);
                                });
                            }
        out.push_back(ck.finish());
    }
    {
        // D_ij(x y) = x D_kj(y) for x in T_ik, y in T_kt, i <= k <= t < j.
        Checker ck(lab, d, "left_factor");
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = i; k <= n; ++k)
                for (std::size_t t = k; t <= n; ++t)
                    for (std::size_t j = t + 1; j <= n; ++j)
                        for (Elem x = 0; x < ck.block_size(i, k); ++x)
                            for (Elem y = 0; y < ck.block_size(k, t); ++y) {
                                Elem lhs = ck.Dst(i, j, i, t, s.block_mul(i, k, t, x, y));
                                Elem rhs = s.block_mul(i, k, j, x, ck.Dst(k, j, k, t, y));
                                ck.expect(lhs == rhs, [&] {
                                    return idx({{"i", i}, {"k", k}, {"t", t}, {"j", j}}) + " x=" + ck.fmt(i, k, x) +
                                           " y=" + ck.fmt(k, t, y);
                                });
                            }
        out.push_back(ck.finish());
    }
    return out;
}

std::vector<LemmaEntry> check_edge_leibniz(const Lab& lab, const AddMap& d, const HypothesisReport& hyp)
{
    const TriMatSpec& s = lab.spec();
    const std::size_t n = s.n();
    std::vector<LemmaEntry> out;
    {
        Checker ck(lab, d, "edge_left");
        for (std::size_t i = 1; i < n; ++i)
            for (Elem a = 0; a < ck.block_size(i, i); ++a)
                for (Elem m = 0; m < ck.block_size(i, n); ++m) {
                    const TriMatElement aa = ck.blk(i, i, a);
                    const TriMatElement mm = ck.blk(i, n, m);
                    TriMatElement lhs = ck.D(mul(s, aa, mm));
                    TriMatElement rhs = add(s, mul(s, ck.D_block(i, i, a), mm), mul(s, aa, ck.D_block(i, n, m)));
                    ck.expect(lhs == rhs, [&] {
                        return idx({{"i", i}}) + " a=" + ck.fmt(i, i, a) + " m=" + ck.fmt(i, n, m) +
                               ": D(am)=" + ck.fmt(lhs) + " D(a)m+aD(m)=" + ck.fmt(rhs);
                    });
                }
        out.push_back(ck.finish());
    }
    {
        Checker ck(lab, d, "edge_right");
        for (Elem m = 0; m < ck.block_size(1, n); ++m)
            for (Elem a = 0; a < ck.block_size(n, n); ++a) {
                const TriMatElement aa = ck.blk(n, n, a);
                const TriMatElement mm = ck.blk(1, n, m);
                TriMatElement lhs = ck.D(mul(s, mm, aa));
                TriMatElement rhs = add(s, mul(s, ck.D_block(1, n, m), aa), mul(s, mm, ck.D_block(n, n, a)));
                ck.expect(lhs == rhs, [&] {
                    return "m=" + ck.fmt(1, n, m) + " a=" + ck.fmt(n, n, a) + ": D(ma)=" + ck.fmt(lhs) +
                           " D(m)a+mD(a)=" + ck.fmt(rhs);
                });
            }
        out.push_back(ck.finish());
    }
    {
        Checker ck(lab, d, "diag_leibniz");
        std::vector<std::size_t> skipped;
        for (std::size_t i = 1; i <= n; ++i) {
            const bool gate = i < n ? hyp.faithful_left[i - 1] : hyp.faithful_right_m1n;
            if (!gate) {
                skipped.push_back(i);
                continue;
            }
            const FiniteRing& r = s.ring(i);
            for (Elem a = 0; a < r.size(); ++a)
                for (Elem b = 0; b < r.size(); ++b) {
                    Elem lhs = ck.Dst(i, i, i, i, r.mul(a, b));
                    Elem rhs = r.add(r.mul(ck.Dst(i, i, i, i, a), b), r.mul(a, ck.Dst(i, i, i, i, b)));
                    ck.expect(lhs == rhs, [&] {
                        return idx({{"i", i}}) + " a=" + ck.fmt(i, i, a) + " b=" + ck.fmt(i, i, b);
                    });
                }
        }
        if (skipped.size() == n) {
            ck.result().status = CheckStatus::skipped;
            ck.result().note = "faithfulness hypotheses fail for every diagonal block";
        } else if (!skipped.empty()) {
            std::string list;
            for (auto i : skipped)
                list += (list.empty() ? "" : ",") + std::to_string(i);
            ck.result().note = "skipped blocks " + list + " (faithfulness fails)";
        }
        out.push_back(ck.finish());
    }
    return out;
}

LemmaEntry check_major(const Lab& lab, const AddMap& d, const std::optional<HypothesisReport>& hyp)
{
    Checker ck(lab, d, "major");
    if (hyp && !hyp->faithful()) {
        ck.result().status = CheckStatus::skipped;
        ck.result().note = "faithfulness hypotheses fail";
        return ck.finish();
    }
    const TriMatSpec& s = ck.spec();
    const std::size_t n = ck.n();

    auto check_pair = [&](const TriMatElement& a, const TriMatElement& b, const TriMatElement& da,
                          const TriMatElement& db, const TriMatElement& dab) {
        TriMatElement lhs = add(s, mul(s, da, b), mul(s, a, db));
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                ck.expect(entry(s, lhs, i, j) == entry(s, dab, i, j), [&] {
                    return idx({{"i", i}, {"j", j}}) + " A=" + ck.fmt(a) + " B=" + ck.fmt(b);
                });
    };

    // Basis pairs: the identity is biadditive in (A, B), so these cover all of T x T.
    const std::size_t g = lab.basis().size();
    std::vector<TriMatElement> gen_images;
    for (std::size_t a = 0; a < g; ++a)
        gen_images.push_back(ck.D(lab.generator(a)));
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < g; ++b)
            check_pair(lab.generator(a), lab.generator(b), gen_images[a], gen_images[b],
                       ck.D(mul(s, lab.generator(a), lab.generator(b))));

    const long double pairs = static_cast<long double>(s.size()) * static_cast<long double>(s.size());
    if (pairs <= static_cast<long double>(lab.options().pair_cap)) {
        std::vector<TriMatElement> images;
        images.reserve(s.size());
        for (std::uint64_t k = 0; k < s.size(); ++k)
            images.push_back(ck.D(s.element_at(k)));
        for (std::uint64_t x = 0; x < s.size() && !ck.failed(); ++x) {
            const TriMatElement a = s.element_at(x);
            for (std::uint64_t y = 0; y < s.size() && !ck.failed(); ++y) {
                const TriMatElement b = s.element_at(y);
                check_pair(a, b, images[x], images[y], images[s.index_of(mul(s, a, b))]);
            }
        }
        ck.result().note = "exhaustive over all pairs";
    } else {
        std::mt19937_64 rng(lab.options().seed);
        for (std::size_t k = 0; k < lab.options().major_samples && !ck.failed(); ++k) {
            const TriMatElement a = s.element_at(rng() % s.size());
            const TriMatElement b = s.element_at(rng() % s.size());
            check_pair(a, b, ck.D(a), ck.D(b), ck.D(mul(s, a, b)));
        }
        ck.result().note = "all basis pairs plus " + std::to_string(lab.options().major_samples) +
                          " sampled pairs, seed " + std::to_string(lab.options().seed);
    }
    return ck.finish();
}

std::vector<LemmaEntry> run_all_checkers(const Lab& lab, const AddMap& d, const HypothesisReport& hyp)
{
    std::vector<LemmaEntry> out;
    out.push_back(check_lemma_e_image(lab, d));
    out.push_back(check_lemma_diag_action(lab, d));
    out.push_back(check_lemma_block_support(lab, d));
    out.push_back(check_lemma_matrix_formula(lab, d));
    out.push_back(check_lemma_right_tail(lab, d));
    out.push_back(check_lemma_unit_antisym(lab, d));
    out.push_back(check_lemma_left_tail(lab, d));
    out.push_back(check_corollary_full_image(lab, d));
    out.push_back(check_lemma_product_rule(lab, d));
    for (auto& e : check_product_components(lab, d))
        out.push_back(std::move(e));
    for (auto& e : check_edge_leibniz(lab, d, hyp))
        out.push_back(std::move(e));
    out.push_back(check_major(lab, d, hyp));
    return out;
}

} // namespace trijd
