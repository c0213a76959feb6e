#include "trijd/instance.hpp"

#include "trijd/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

namespace trijd {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw FormatError("instance: " + what);
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object())
        bad(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }))
            bad("unknown key '" + key + "' in " + where);
    }
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        bad(where + " is missing '" + key + "'");
    return *it;
}

std::uint64_t get_u64(const json& v, const std::string& where)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        bad(where + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

Table get_table(const json& v, const std::string& where)
{
    if (!v.is_array())
        bad(where + " must be an array of arrays");
    Table t;
    for (const auto& row : v) {
        if (!row.is_array())
            bad(where + " must be an array of arrays");
        std::vector<std::uint32_t> r;
        for (const auto& x : row) {
            std::uint64_t e = get_u64(x, where);
            if (e > UINT32_MAX)
                bad(where + " entry out of range");
            r.push_back(static_cast<std::uint32_t>(e));
        }
        t.push_back(std::move(r));
    }
    return t;
}

std::vector<std::size_t> parse_key(const std::string& key, std::size_t parts, const std::string& where)
{
    std::vector<std::size_t> out;
    const char* p = key.data();
    const char* end = key.data() + key.size();
    while (true) {
        std::size_t v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || next == p)
            bad("malformed " + where + " key '" + key + "'");
        out.push_back(v);
        p = next;
        if (p == end)
            break;
        if (*p != ',')
            bad("malformed " + where + " key '" + key + "'");
        ++p;
    }
    if (out.size() != parts)
        bad("malformed " + where + " key '" + key + "'");
    return out;
}

template <class Desc>
Desc parse_shorthand_or_table(const json& v, std::initializer_list<const char*> shorthands, const std::string& where)
{
    Desc d;
    if (v.is_string()) {
        d.shorthand = v.get<std::string>();
        if (std::none_of(shorthands.begin(), shorthands.end(), [&](const char* s) { return d.shorthand == s; }))
            bad("unknown shorthand '" + d.shorthand + "' in " + where);
    } else {
        d.table = get_table(v, where);
    }
    return d;
}

json table_json(const Table& t)
{
    json out = json::array();
    for (const auto& row : t)
        out.push_back(row);
    return out;
}

template <class Desc>
json shorthand_or_table_json(const Desc& d)
{
    if (!d.shorthand.empty())
        return d.shorthand;
    return table_json(d.table);
}

json to_json(const InstanceFile& inst)
{
    json doc;
    doc["n"] = inst.n;
    json rings = json::array();
    for (const auto& r : inst.rings) {
        json jr;
        jr["kind"] = r.kind;
        if (r.kind == "zmod") {
            jr["modulus"] = r.modulus;
        } else {
            jr["add"] = table_json(r.add);
            jr["mul"] = table_json(r.mul);
            jr["one"] = r.one;
        }
        rings.push_back(std::move(jr));
    }
    doc["rings"] = std::move(rings);
    json modules = json::object();
    for (const auto& [key, m] : inst.modules) {
        json jm;
        jm["orders"] = m.orders;
        jm["left"] = shorthand_or_table_json(m.left);
        jm["right"] = shorthand_or_table_json(m.right);
        modules[std::to_string(key.first) + "," + std::to_string(key.second)] = std::move(jm);
    }
    doc["modules"] = std::move(modules);
    if (!inst.comps.empty()) {
        json comps = json::object();
        for (const auto& [key, c] : inst.comps) {
            auto [i, j, k] = key;
            comps[std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k)] = shorthand_or_table_json(c);
        }
        doc["comps"] = std::move(comps);
    }
    json caps = json::object();
    if (inst.caps.element_cap)
        caps["element_cap"] = *inst.caps.element_cap;
    if (inst.caps.oracle_cap)
        caps["oracle_cap"] = *inst.caps.oracle_cap;
    if (inst.caps.seed)
        caps["seed"] = *inst.caps.seed;
    if (!caps.empty())
        doc["caps"] = std::move(caps);
    return doc;
}

} // namespace

InstanceFile parse_instance(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }
    only_keys(doc, {"n", "rings", "modules", "comps", "caps"}, "document");

    InstanceFile inst;
    inst.n = get_u64(require(doc, "n", "document"), "n");
    if (inst.n < 2 || inst.n > 16)
        bad("n must be between 2 and 16");

    const json& rings = require(doc, "rings", "document");
    if (!rings.is_array() || rings.size() != inst.n)
        bad("rings must be an array of n entries");
    for (std::size_t i = 0; i < rings.size(); ++i) {
        const std::string where = "ring " + std::to_string(i + 1);
        const json& jr = rings[i];
        if (!jr.is_object())
            bad(where + " must be an object");
        const json& kind = require(jr, "kind", where);
        if (!kind.is_string())
            bad(where + " kind must be a string");
        RingDesc r;
        r.kind = kind.get<std::string>();
        if (r.kind == "zmod") {
            only_keys(jr, {"kind", "modulus"}, where);
            r.modulus = static_cast<std::int64_t>(get_u64(require(jr, "modulus", where), where + " modulus"));
        } else if (r.kind == "tables") {
            only_keys(jr, {"kind", "add", "mul", "one"}, where);
            r.add = get_table(require(jr, "add", where), where + " add");
            r.mul = get_table(require(jr, "mul", where), where + " mul");
            r.one = static_cast<std::uint32_t>(get_u64(require(jr, "one", where), where + " one"));
        } else {
            bad(where + " has unknown kind '" + r.kind + "'");
        }
        inst.rings.push_back(std::move(r));
    }

    const json& modules = require(doc, "modules", "document");
    if (!modules.is_object())
        bad("modules must be an object");
    for (const auto& [key, jm] : modules.items()) {
        auto ij = parse_key(key, 2, "module");
        const std::string where = "module " + key;
        if (ij[0] < 1 || ij[0] >= ij[1] || ij[1] > inst.n)
            bad(where + " is not an upper block");
        only_keys(jm, {"orders", "left", "right"}, where);
        ModuleDesc m;
        const json& orders = require(jm, "orders", where);
        if (!orders.is_array())
            bad(where + " orders must be an array");
        for (const auto& d : orders)
            m.orders.push_back(static_cast<std::int64_t>(get_u64(d, where + " orders")));
        m.left = parse_shorthand_or_table<ActionDesc>(require(jm, "left", where), {"mult"}, where + " left");
        m.right = parse_shorthand_or_table<ActionDesc>(require(jm, "right", where), {"mult"}, where + " right");
        inst.modules[{ij[0], ij[1]}] = std::move(m);
    }
    for (std::size_t i = 1; i <= inst.n; ++i)
        for (std::size_t j = i + 1; j <= inst.n; ++j)
            if (!inst.modules.count({i, j}))
                bad("module " + std::to_string(i) + "," + std::to_string(j) + " is missing");

    if (auto it = doc.find("comps"); it != doc.end()) {
        if (!it->is_object())
            bad("comps must be an object");
        for (const auto& [key, jc] : it->items()) {
            auto ijk = parse_key(key, 3, "comp");
            if (ijk[0] < 1 || ijk[0] >= ijk[1] || ijk[1] >= ijk[2] || ijk[2] > inst.n)
                bad("comp " + key + " is not a valid block triple");
            inst.comps[{ijk[0], ijk[1], ijk[2]}] =
                parse_shorthand_or_table<CompDesc>(jc, {"mult", "zero"}, "comp " + key);
        }
    }
    for (std::size_t i = 1; i <= inst.n; ++i)
        for (std::size_t j = i + 1; j <= inst.n; ++j)
            for (std::size_t k = j + 1; k <= inst.n; ++k)
                if (!inst.comps.count({i, j, k}))
                    bad("comp " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                        " is missing");

    if (auto it = doc.find("caps"); it != doc.end()) {
        only_keys(*it, {"element_cap", "oracle_cap", "seed"}, "caps");
        if (auto c = it->find("element_cap"); c != it->end())
            inst.caps.element_cap = get_u64(*c, "caps.element_cap");
        if (auto c = it->find("oracle_cap"); c != it->end())
            inst.caps.oracle_cap = get_u64(*c, "caps.oracle_cap");
        if (auto c = it->find("seed"); c != it->end())
            inst.caps.seed = get_u64(*c, "caps.seed");
    }
    return inst;
}

std::string serialize_instance(const InstanceFile& inst)
{
    return to_json(inst).dump(2) + "\n";
}

std::string instance_digest(const InstanceFile& inst)
{
    const std::string canonical = to_json(inst).dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("instance_digest: SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

namespace {

std::string block_label(std::size_t i, std::size_t j)
{
    return std::to_string(i) + "," + std::to_string(j);
}

void check_table_shape(const Table& t, std::uint64_t rows, std::uint64_t cols, std::uint64_t bound,
                       const std::string& where)
{
    if (t.size() != rows)
        throw ShapeError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(t.size()));
    for (const auto& row : t) {
        if (row.size() != cols)
            throw ShapeError(where + ": expected " + std::to_string(cols) + " columns");
        for (auto x : row)
            if (x >= bound)
                throw ShapeError(where + ": entry " + std::to_string(x) + " out of range");
    }
}

// r . x for a zmod ring acting coordinatewise by multiplication.
Elem mult_action(const FiniteRing& ring, const AbelianGroup& m, Elem r, Elem x)
{
    return m.scale(x, ring.carrier().decode(r)[0]);
}

std::vector<Elem> build_action(const ActionDesc& a, const FiniteRing& ring, const AbelianGroup& m, bool left,
                               const std::string& where)
{
    const std::uint64_t rs = ring.size();
    const std::uint64_t ms = m.size();
    if (a.shorthand == "mult") {
        if (!ring.modulus())
            throw FormatError("instance: " + where + ": 'mult' needs a zmod ring");
        return left ? tabulate(rs, ms, [&](Elem r, Elem x) { return mult_action(ring, m, r, x); })
                    : tabulate(ms, rs, [&](Elem x, Elem r) { return mult_action(ring, m, r, x); });
    }
    // Tables are given over ring labels; zmod rings label residues directly.
    auto label = [&](Elem r) -> std::uint32_t { return ring.elem_to_label().empty() ? r : ring.elem_to_label()[r]; };
    if (left) {
        check_table_shape(a.table, rs, ms, ms, where);
        return tabulate(rs, ms, [&](Elem r, Elem x) { return a.table[label(r)][x]; });
    }
    check_table_shape(a.table, ms, rs, ms, where);
    return tabulate(ms, rs, [&](Elem x, Elem r) { return a.table[x][label(r)]; });
}

std::vector<Elem> build_comp_table(const CompDesc& c, const Bimodule& l, const Bimodule& r, const Bimodule& t,
                                   const std::string& where)
{
    const std::size_t rl = l.carrier().rank();
    const std::size_t rr = r.carrier().rank();
    if (c.shorthand == "zero" || (c.shorthand == "mult" && (rl == 0 || rr == 0 || t.carrier().rank() == 0)))
        return std::vector<Elem>(rl * rr, 0);
    if (c.shorthand == "mult") {
        if (rl != 1 || rr != 1 || t.carrier().rank() != 1)
            throw FormatError("instance: " + where + ": 'mult' needs cyclic modules");
        const std::int64_t one = 1;
        return {t.carrier().encode(std::span<const std::int64_t>(&one, 1))};
    }
    check_table_shape(c.table, rl, rr, t.size(), where);
    std::vector<Elem> out;
    for (const auto& row : c.table)
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

} // namespace

TriMatSpec build_instance(const InstanceFile& inst, const ValidationOptions& opts)
{
    std::vector<RingPtr> rings;
    for (const auto& r : inst.rings) {
        if (r.kind == "zmod") {
            if (r.modulus < 2)
                throw FormatError("instance: zmod modulus must be at least 2");
            rings.push_back(std::make_shared<const FiniteRing>(ring_zmod(r.modulus)));
        } else {
            rings.push_back(std::make_shared<const FiniteRing>(ring_from_tables(r.add, r.mul, r.one, opts)));
        }
    }
    if (rings.size() != inst.n)
        throw ShapeError("instance: expected " + std::to_string(inst.n) + " rings");

    std::map<BlockKey, ModulePtr> modules;
    for (const auto& [key, m] : inst.modules) {
        auto [i, j] = key;
        if (j > inst.n)
            throw ShapeError("instance: module " + block_label(i, j) + " outside n");
        const std::string where = "module " + block_label(i, j);
        for (auto d : m.orders)
            if (d < 2)
                throw FormatError("instance: " + where + ": cyclic orders must exceed 1");
        AbelianGroup carrier(m.orders);
        const FiniteRing& left = *rings[i - 1];
        const FiniteRing& right = *rings[j - 1];
        auto lt = build_action(m.left, left, carrier, true, where + " left");
        auto rt = build_action(m.right, right, carrier, false, where + " right");
        modules[key] = std::make_shared<const Bimodule>(
            bimodule_new(rings[i - 1], rings[j - 1], carrier, std::move(lt), std::move(rt), opts));
    }

    std::map<CompKey, CompPtr> comps;
    for (const auto& [key, c] : inst.comps) {
        auto [i, j, k] = key;
        auto l = modules.find({i, j});
        auto r = modules.find({j, k});
        auto t = modules.find({i, k});
        const std::string where = "comp " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k);
        if (l == modules.end() || r == modules.end() || t == modules.end())
            throw ShapeError("instance: " + where + " refers to a missing module");
        auto table = build_comp_table(c, *l->second, *r->second, *t->second, where);
        comps[key] = std::make_shared<const BalancedMap>(
            balanced_map_new(l->second, r->second, t->second, std::move(table), opts));
    }
    return build_spec(inst.n, std::move(rings), std::move(modules), std::move(comps), opts);
}

namespace {

InstanceFile uniform(std::size_t n, std::int64_t modulus)
{
    InstanceFile inst;
    inst.n = n;
    for (std::size_t i = 0; i < n; ++i)
        inst.rings.push_back({"zmod", modulus, {}, {}, 0});
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            inst.modules[{i, j}] = {{modulus}, {"mult", {}}, {"mult", {}}};
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = j + 1; k <= n; ++k)
                inst.comps[{i, j, k}] = {"mult", {}};
    return inst;
}

// Upper triangular 2x2 matrices over F_2 acting on column vectors of F_2^2,
// with R_2 = F_2. Labels encode [[a, b], [0, c]] as 4a + 2b + c; the module
// element (v1, v2) has index 2 v1 + v2.
InstanceFile nc_ut2f2()
{
    InstanceFile inst;
    inst.n = 2;
    RingDesc r1;
    r1.kind = "tables";
    r1.add.assign(8, std::vector<std::uint32_t>(8));
    r1.mul.assign(8, std::vector<std::uint32_t>(8));
    for (std::uint32_t x = 0; x < 8; ++x)
        for (std::uint32_t y = 0; y < 8; ++y) {
            const std::uint32_t a = x >> 2, b = (x >> 1) & 1, c = x & 1;
            const std::uint32_t p = y >> 2, q = (y >> 1) & 1, s = y & 1;
            r1.add[x][y] = x ^ y;
            r1.mul[x][y] = ((a & p) << 2) | ((((a & q) ^ (b & s))) << 1) | (c & s);
        }
    r1.one = 5;
    inst.rings.push_back(std::move(r1));
    inst.rings.push_back({"zmod", 2, {}, {}, 0});

    ModuleDesc m;
    m.orders = {2, 2};
    m.left.table.assign(8, std::vector<std::uint32_t>(4));
    for (std::uint32_t x = 0; x < 8; ++x)
        for (std::uint32_t v = 0; v < 4; ++v) {
            const std::uint32_t a = x >> 2, b = (x >> 1) & 1, c = x & 1;
            const std::uint32_t v1 = v >> 1, v2 = v & 1;
            m.left.table[x][v] = (((a & v1) ^ (b & v2)) << 1) | (c & v2);
        }
    m.right.shorthand = "mult";
    inst.modules[{1, 2}] = std::move(m);
    return inst;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"ut2_f2", "ut2_f3",         "ut3_f2",    "ut3_f3",   "ut3_f5", "ut4_f2",
            "ut2_z4", "ut3_z6",         "mixed_mod", "nc_ut2f2", "nonfaithful_m0"};
}

InstanceFile preset(std::string_view name)
{
    struct Uniform {
        const char* name;
        std::size_t n;
        std::int64_t modulus;
    };
    static constexpr Uniform uniforms[] = {{"ut2_f2", 2, 2}, {"ut2_f3", 2, 3}, {"ut3_f2", 3, 2}, {"ut3_f3", 3, 3},
                                           {"ut3_f5", 3, 5}, {"ut4_f2", 4, 2}, {"ut2_z4", 2, 4}, {"ut3_z6", 3, 6}};
    for (const auto& u : uniforms)
        if (name == u.name)
            return uniform(u.n, u.modulus);
    if (name == "mixed_mod") {
        InstanceFile inst = uniform(3, 6);
        for (auto& [key, m] : inst.modules)
            m.orders = {3};
        return inst;
    }
    if (name == "nonfaithful_m0") {
        InstanceFile inst = uniform(2, 3);
        inst.modules[{1, 2}].orders.clear();
        return inst;
    }
    if (name == "nc_ut2f2")
        return nc_ut2f2();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

InstanceFile load_instance(const std::string& path)
{
    static constexpr std::string_view prefix = "preset:";
    if (path.starts_with(prefix))
        return preset(std::string_view(path).substr(prefix.size()));
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

} // namespace trijd
