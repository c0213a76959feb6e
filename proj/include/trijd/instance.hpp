#pragma once

// Instance documents (JSON) describing a triangular matrix ring, the shipped
// preset gallery, and conversion to a validated TriMatSpec.

#include "trijd/trimat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trijd {

using Table = std::vector<std::vector<std::uint32_t>>;

struct RingDesc {
    std::string kind; // "zmod" or "tables"
    std::int64_t modulus = 0;
    Table add;
    Table mul;
    std::uint32_t one = 0;

    bool operator==(const RingDesc&) const = default;
};

// Either a shorthand ("mult") or an explicit table. Left tables are indexed
// [ring label][module element], right tables [module element][ring label];
// entries are module element indices.
struct ActionDesc {
    std::string shorthand;
    Table table;

    bool operator==(const ActionDesc&) const = default;
};

struct ModuleDesc {
    std::vector<std::int64_t> orders;
    ActionDesc left;
    ActionDesc right;

    bool operator==(const ModuleDesc&) const = default;
};

// "mult", "zero", or a rank(M_ij) x rank(M_jk) table of target elements.
struct CompDesc {
    std::string shorthand;
    Table table;

    bool operator==(const CompDesc&) const = default;
};

struct Caps {
    std::optional<std::uint64_t> element_cap;
    std::optional<std::uint64_t> oracle_cap;
    std::optional<std::uint64_t> seed;

    bool operator==(const Caps&) const = default;
};

struct InstanceFile {
    std::size_t n = 0;
    std::vector<RingDesc> rings;
    std::map<BlockKey, ModuleDesc> modules;
    std::map<CompKey, CompDesc> comps;
    Caps caps;

    bool operator==(const InstanceFile&) const = default;
};

// Throws FormatError on malformed documents, unknown keys, or missing parts.
InstanceFile parse_instance(std::string_view text);
// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_instance(const InstanceFile& inst);
// "sha256:" followed by the hex digest of the compact canonical form.
std::string instance_digest(const InstanceFile& inst);

// Expands shorthands and validates. Throws FormatError for unusable
// shorthands, ShapeError for inconsistent shapes, AxiomError for failed axioms.
TriMatSpec build_instance(const InstanceFile& inst, const ValidationOptions& opts = {});

std::vector<std::string> preset_names();
// Throws std::invalid_argument for unknown names.
InstanceFile preset(std::string_view name);

// Reads a file, or a preset when `path` is "preset:NAME".
InstanceFile load_instance(const std::string& path);

} // namespace trijd
