#pragma once

// Derivations and Jordan derivations of T: membership tests, exact solution
// spaces, hypothesis checks and the structural identities every Jordan
// derivation of T satisfies, each checked over its full quantifier range.

#include "trijd/linmap.hpp"
#include "trijd/trimat.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trijd {

enum class DerivKind {
    derivation,        // D(ab) = D(a)b + aD(b)
    jordan_linearized, // D(ab+ba) = D(a)b + aD(b) + D(b)a + bD(a)
    jordan_squared,    // D(a^2) = D(a)a + aD(a)
    antiderivation,    // D(ab) = D(b)a + bD(a)
};

inline constexpr DerivKind all_kinds[] = {DerivKind::derivation, DerivKind::jordan_linearized,
                                          DerivKind::jordan_squared, DerivKind::antiderivation};

std::string_view kind_name(DerivKind kind);
// Accepts the CLI spellings (deriv, jordan-lin, jordan-sq, antideriv) and the
// enumerator names. Throws std::invalid_argument otherwise.
DerivKind parse_kind(std::string_view text);

struct LabOptions {
    // Largest |T| for element-wise work (jordan_squared, exhaustive sweeps).
    std::uint64_t element_cap = 100'000;
    // Largest number of hom-compatible maps the brute-force oracle may visit.
    std::uint64_t oracle_cap = 1'000'000;
    // Largest |T|^2 for exhaustive pair sweeps in check_major.
    std::uint64_t pair_cap = 1'000'000;
    std::uint64_t seed = 0x5eed'2024;
    unsigned threads = 1;
    std::size_t formula_samples = 200;
    std::size_t major_samples = 500;
};

// A validated instance with its canonical basis and the products of all
// basis generator pairs.
class Lab {
public:
    Lab(TriMatSpec spec, LabOptions opts = {});

    const TriMatSpec& spec() const noexcept { return spec_; }
    const CanonicalBasis& basis() const noexcept { return basis_; }
    const LabOptions& options() const noexcept { return opts_; }
    const TriMatElement& generator(std::size_t r) const { return gens_[r]; }
    // Coordinates of g_a g_b.
    const Coords& product(std::size_t a, std::size_t b) const { return products_[a * basis_.size() + b]; }

    TriMatElement apply(const AddMap& d, const TriMatElement& a) const;

private:
    TriMatSpec spec_;
    LabOptions opts_;
    CanonicalBasis basis_;
    std::vector<TriMatElement> gens_;
    std::vector<Coords> products_;
};

struct Membership {
    bool member = true;
    std::string witness; // empty for members
};

// Pair kinds are checked on all ordered pairs of basis generators (their
// defects are biadditive); jordan_squared on every element of T, refused with
// CapError above element_cap.
Membership is_member(const Lab& lab, const AddMap& d, DerivKind kind);

struct MapSpace {
    DerivKind kind = DerivKind::derivation;
    std::vector<AddMap> generators;
    std::vector<std::int64_t> moduli;

    std::string cardinality() const { return decimal_product(moduli); }
    std::uint64_t cardinality_u64() const;
    // All members, sorted; CapError above cap.
    std::vector<AddMap> elements(std::uint64_t cap) const;
};

// The linear system whose solutions are exactly the hom-compatible maps of
// the given kind. Unknown r * dim + c is matrix entry (r, c).
LinearSystem derivation_system(const Lab& lab, DerivKind kind);

// Exact space of all maps of the given kind; every generator is re-verified
// with is_member.
MapSpace solve_space(const Lab& lab, DerivKind kind);

// Brute force: every hom-compatible map passing is_member, sorted.
std::vector<AddMap> oracle_members(const Lab& lab, DerivKind kind);

struct SpaceComparison {
    bool derivation_subset_jordan = false;
    bool equal = false;
    std::string derivation_cardinality;
    std::string jordan_cardinality;
    std::vector<AddMap> jordan_only_generators;
};

SpaceComparison compare_spaces(const Lab& lab);
SpaceComparison compare_spaces(const Lab& lab, const MapSpace& derivations, const MapSpace& jordan);

// Generators of the linearized Jordan space that are not derivations.
std::vector<AddMap> counterexample_scan(const Lab& lab);

struct HypothesisReport {
    std::vector<bool> faithful_left;  // M_in faithful over R_i, i = 1..n-1
    bool faithful_right_m1n = false;  // M_1n faithful over R_n
    bool two_torsion_free = false;    // x + x = 0 implies x = 0 in T

    bool faithful() const;
    bool all_true() const { return faithful() && two_torsion_free; }
};

HypothesisReport check_hypotheses(const TriMatSpec& spec);

// X -> AX - XA.
AddMap inner_derivation(const Lab& lab, const TriMatElement& a);

enum class CheckStatus { pass, fail, skipped };
std::string_view status_name(CheckStatus s);

struct LemmaEntry {
    std::string id;
    CheckStatus status = CheckStatus::pass;
    std::uint64_t checks = 0;
    std::string witness; // set on failure
    std::string note;
};

LemmaEntry check_lemma_e_image(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_diag_action(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_block_support(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_matrix_formula(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_right_tail(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_unit_antisym(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_left_tail(const Lab& lab, const AddMap& d);
LemmaEntry check_corollary_full_image(const Lab& lab, const AddMap& d);
LemmaEntry check_lemma_product_rule(const Lab& lab, const AddMap& d);
// Five entries: the three component corollaries of the product rule, then
// the D_{i,i+k} and D_ij(m_ik m_kt) identities.
std::vector<LemmaEntry> check_product_components(const Lab& lab, const AddMap& d);
// Three entries: left edge, right edge, diagonal Leibniz. The diagonal
// identity for block i is skipped unless its faithfulness flag holds.
std::vector<LemmaEntry> check_edge_leibniz(const Lab& lab, const AddMap& d, const HypothesisReport& hyp);
// Skipped unless hyp.faithful(); pass std::nullopt to run unconditionally.
LemmaEntry check_major(const Lab& lab, const AddMap& d, const std::optional<HypothesisReport>& hyp);

// Every checker in a fixed order.
std::vector<LemmaEntry> run_all_checkers(const Lab& lab, const AddMap& d, const HypothesisReport& hyp);

} // namespace trijd
