#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "definitions.hpp"
#include "fixtures.hpp"
#include "trijd/derivlab.hpp"
#include "trijd/errors.hpp"
#include "trijd/instance.hpp"

#include <random>

using namespace trijd;
using fixture::ut2;

namespace {

Lab preset_lab(const char* name, LabOptions opts = {})
{
    return Lab(build_instance(preset(name)), opts);
}

AddMap random_map(const Lab& lab, std::mt19937_64& rng)
{
    const CanonicalBasis& b = lab.basis();
    std::vector<std::int64_t> e(b.size() * b.size());
    for (auto& x : e)
        x = static_cast<std::int64_t>(rng() % 1000);
    AddMap m = AddMap::from_entries(b, e);
    // Project onto hom-compatible maps by zeroing incompatible entries.
    for (std::size_t r = 0; r < b.size(); ++r)
        for (std::size_t c = 0; c < b.size(); ++c)
            if (b.order(c) * m.at(r, c) % b.order(r) != 0)
                m.set(r, c, 0);
    return m;
}

bool all_pass(const std::vector<LemmaEntry>& entries)
{
    bool ok = true;
    for (const auto& e : entries) {
        INFO(e.id << ": " << e.witness);
        CHECK(e.status != CheckStatus::fail);
        ok = ok && e.status != CheckStatus::fail;
    }
    return ok;
}

const LemmaEntry& find(const std::vector<LemmaEntry>& entries, const std::string& id)
{
    for (const auto& e : entries)
        if (e.id == id)
            return e;
    throw std::out_of_range(id);
}

} // namespace

TEST_CASE("kind names")
{
    CHECK(parse_kind("deriv") == DerivKind::derivation);
    CHECK(parse_kind("jordan-lin") == DerivKind::jordan_linearized);
    CHECK(parse_kind("jordan-sq") == DerivKind::jordan_squared);
    CHECK(parse_kind("antideriv") == DerivKind::antiderivation);
    for (DerivKind k : all_kinds)
        CHECK(parse_kind(kind_name(k)) == k);
    CHECK_THROWS_AS(parse_kind("jordan"), std::invalid_argument);
}

TEST_CASE("is_member agrees with the definition on every pair of elements")
{
    SUBCASE("all 512 maps of UT2(F2)")
    {
        Lab lab = preset_lab("ut2_f2");
        enumerate_addmaps(lab.basis(), 1000, [&](const AddMap& m) {
            for (DerivKind k : all_kinds)
                REQUIRE(is_member(lab, m, k).member == oracle::member_by_definition(lab, m, k));
        });
    }
    SUBCASE("random and solved maps on UT2(Z/4) and a noncommutative instance")
    {
        for (const char* name : {"ut2_z4", "nc_ut2f2"}) {
            Lab lab = preset_lab(name);
            std::mt19937_64 rng(17);
            for (DerivKind k : all_kinds) {
                for (int trial = 0; trial < 40; ++trial) {
                    AddMap m = random_map(lab, rng);
                    CHECK(is_member(lab, m, k).member == oracle::member_by_definition(lab, m, k));
                }
                for (const auto& g : solve_space(lab, k).generators)
                    CHECK(oracle::member_by_definition(lab, g, k));
            }
        }
    }
}

TEST_CASE("membership examples")
{
    Lab lab = preset_lab("ut2_f3");
    AddMap zero_map(lab.basis());
    for (DerivKind k : all_kinds)
        CHECK(is_member(lab, zero_map, k).member);
    AddMap ad = inner_derivation(lab, unit_e(lab.spec(), 1));
    for (Elem a = 0; a < 3; ++a)
        for (Elem m = 0; m < 3; ++m)
            CHECK(lab.apply(ad, ut2(a, m, 1)) == ut2(0, m, 0));
    CHECK(is_member(lab, ad, DerivKind::derivation).member);
    CHECK(is_member(lab, ad, DerivKind::jordan_linearized).member);
    Membership idm = is_member(lab, AddMap::identity(lab.basis()), DerivKind::derivation);
    CHECK_FALSE(idm.member);
    CHECK_FALSE(idm.witness.empty());
}

TEST_CASE("inner derivations")
{
    for (const auto& name : preset_names()) {
        Lab lab = preset_lab(name.c_str());
        const TriMatSpec& s = lab.spec();
        CHECK(inner_derivation(lab, one(s)).is_zero());
        std::mt19937_64 rng(1);
        for (int trial = 0; trial < 10; ++trial) {
            TriMatElement a = s.element_at(rng() % s.size()), b = s.element_at(rng() % s.size());
            AddMap da = inner_derivation(lab, a);
            CHECK(is_member(lab, da, DerivKind::derivation).member);
            CHECK(da + inner_derivation(lab, b) == inner_derivation(lab, add(s, a, b)));
        }
    }
}

TEST_CASE("solve_space matches the enumeration oracle on UT2(F2)")
{
    Lab lab = preset_lab("ut2_f2");
    for (DerivKind k : all_kinds) {
        MapSpace space = solve_space(lab, k);
        CHECK(space.elements(1000) == oracle_members(lab, k));
        CHECK(is_member(lab, AddMap(lab.basis()), k).member);
    }
}

TEST_CASE("solved spaces do not depend on the thread count")
{
    LabOptions one_thread, many;
    many.threads = 4;
    for (const char* name : {"ut3_f3", "ut3_z6", "nc_ut2f2"}) {
        Lab a = preset_lab(name, one_thread), b = preset_lab(name, many);
        for (DerivKind k : all_kinds) {
            LinearSystem sa = derivation_system(a, k), sb = derivation_system(b, k);
            CHECK(sa.rows == sb.rows);
            CHECK(sa.row_moduli == sb.row_moduli);
            MapSpace xa = solve_space(a, k), xb = solve_space(b, k);
            CHECK(xa.generators == xb.generators);
            CHECK(xa.moduli == xb.moduli);
        }
    }
}

TEST_CASE("jordan_squared needs the element cap")
{
    LabOptions tight;
    tight.element_cap = 100;
    Lab lab = preset_lab("ut3_f3", tight);
    CHECK_THROWS_AS(solve_space(lab, DerivKind::jordan_squared), CapError);
    CHECK_NOTHROW(solve_space(lab, DerivKind::jordan_linearized));
}

TEST_CASE("compare_spaces and counterexample_scan")
{
    for (const char* name : {"ut2_f3", "ut3_f3"}) {
        Lab lab = preset_lab(name);
        SpaceComparison c = compare_spaces(lab);
        CHECK(c.equal);
        CHECK(c.derivation_subset_jordan);
        CHECK(counterexample_scan(lab).empty());
    }
    // Outside the hypotheses nothing is asserted about equality, only that
    // every reported witness really separates the two kinds.
    for (const char* name : {"ut2_f2", "nonfaithful_m0", "mixed_mod"}) {
        Lab lab = preset_lab(name);
        CHECK(compare_spaces(lab).derivation_subset_jordan);
        for (const auto& w : counterexample_scan(lab)) {
            CHECK(is_member(lab, w, DerivKind::jordan_linearized).member);
            CHECK_FALSE(is_member(lab, w, DerivKind::derivation).member);
        }
    }
}

TEST_CASE("squared and linearized forms agree without 2-torsion")
{
    for (const char* name : {"ut2_f3", "ut3_f3", "nonfaithful_m0"}) {
        Lab lab = preset_lab(name);
        MapSpace lin = solve_space(lab, DerivKind::jordan_linearized);
        MapSpace sq = solve_space(lab, DerivKind::jordan_squared);
        for (const auto& g : lin.generators)
            CHECK(is_member(lab, g, DerivKind::jordan_squared).member);
        CHECK(lin.cardinality() == sq.cardinality());
    }
}

TEST_CASE("hypotheses")
{
    HypothesisReport h = check_hypotheses(build_instance(preset("ut3_f3")));
    CHECK(h.faithful_left == std::vector<bool>{true, true});
    CHECK(h.faithful_right_m1n);
    CHECK(h.two_torsion_free);
    CHECK(h.all_true());

    InstanceFile zero13 = preset("ut3_f3");
    zero13.modules[{1, 3}].orders.clear();
    HypothesisReport z = check_hypotheses(build_instance(zero13));
    CHECK_FALSE(z.faithful_left[0]);
    CHECK(z.faithful_left[1]);
    CHECK_FALSE(z.faithful_right_m1n);

    CHECK_FALSE(check_hypotheses(build_instance(preset("ut2_f2"))).two_torsion_free);
    HypothesisReport nf = check_hypotheses(build_instance(preset("nonfaithful_m0")));
    CHECK_FALSE(nf.faithful_left[0]);
    CHECK_FALSE(nf.faithful_right_m1n);
    HypothesisReport mm = check_hypotheses(build_instance(preset("mixed_mod")));
    CHECK_FALSE(mm.faithful());
}

TEST_CASE("checkers pass on the zero map and inner derivations")
{
    for (const char* name : {"ut2_f3", "ut3_f3", "ut4_f2", "nc_ut2f2"}) {
        Lab lab = preset_lab(name);
        HypothesisReport hyp = check_hypotheses(lab.spec());
        CHECK(all_pass(run_all_checkers(lab, AddMap(lab.basis()), hyp)));
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 3; ++trial) {
            AddMap d = inner_derivation(lab, lab.spec().element_at(rng() % lab.spec().size()));
            CHECK(all_pass(run_all_checkers(lab, d, hyp)));
        }
    }
}

TEST_CASE("checker examples on UT2(F3)")
{
    Lab lab = preset_lab("ut2_f3");
    const TriMatSpec& s = lab.spec();
    HypothesisReport hyp = check_hypotheses(s);

    // ad_{E12}: D(E11) = -E12 and D(E22) = E12, so the unit identity is
    // exercised with nonzero terms.
    AddMap ad12 = inner_derivation(lab, ut2(0, 1, 0));
    CHECK(lab.apply(ad12, unit_e(s, 1)) == ut2(0, 2, 0));
    CHECK(lab.apply(ad12, unit_e(s, 2)) == ut2(0, 1, 0));
    LemmaEntry anti = check_lemma_unit_antisym(lab, ad12);
    CHECK(anti.status == CheckStatus::pass);
    CHECK(anti.checks == 1);

    // Left tail has an empty range for n = 2.
    CHECK(check_lemma_left_tail(lab, ad12).checks == 0);

    // Edge Leibniz: 9 pairs (a, m) on the left edge.
    auto edges = check_edge_leibniz(lab, ad12, hyp);
    CHECK(find(edges, "edge_left").checks == 9);
    CHECK(find(edges, "edge_right").checks == 9);
    CHECK(find(edges, "diag_leibniz").status == CheckStatus::pass);

    LemmaEntry major = check_major(lab, ad12, hyp);
    CHECK(major.status == CheckStatus::pass);
    CHECK(major.note == "exhaustive over all pairs");
    // 9 basis pairs plus 27^2 element pairs, one block each.
    CHECK(major.checks == 9 + 27 * 27);

    LemmaEntry formula = check_lemma_matrix_formula(lab, ad12);
    CHECK(formula.status == CheckStatus::pass);
    CHECK(formula.note == "exhaustive");
}

TEST_CASE("checkers catch maps that are not Jordan derivations")
{
    Lab lab = preset_lab("ut3_f3");
    HypothesisReport hyp = check_hypotheses(lab.spec());
    AddMap id = AddMap::identity(lab.basis());
    // D = id sends E11 to E11, which lies in a forbidden block.
    LemmaEntry e = check_lemma_e_image(lab, id);
    CHECK(e.status == CheckStatus::fail);
    CHECK(e.witness.find("D(E_11)") != std::string::npos);
    CHECK(check_lemma_product_rule(lab, id).status == CheckStatus::fail);
    CHECK(check_major(lab, id, hyp).status == CheckStatus::fail);

    // A map moving the (1,2) generator onto (2,2) breaks block support.
    AddMap leak(lab.basis());
    leak.set(lab.basis().slot_offset[lab.spec().slot(2, 2)], lab.basis().slot_offset[lab.spec().slot(1, 2)], 1);
    CHECK(check_lemma_block_support(lab, leak).status == CheckStatus::fail);
    CHECK(check_corollary_full_image(lab, leak).status == CheckStatus::fail);
    CHECK(check_lemma_matrix_formula(lab, leak).status == CheckStatus::fail);
}

TEST_CASE("hypothesis-dependent checkers are skipped outside their hypotheses")
{
    Lab lab = preset_lab("nonfaithful_m0");
    HypothesisReport hyp = check_hypotheses(lab.spec());
    for (const auto& g : solve_space(lab, DerivKind::jordan_linearized).generators) {
        CHECK(find(check_edge_leibniz(lab, g, hyp), "diag_leibniz").status == CheckStatus::skipped);
        CHECK(check_major(lab, g, hyp).status == CheckStatus::skipped);
        CHECK(check_major(lab, g, std::nullopt).status != CheckStatus::skipped);
    }
}

TEST_CASE("every checker passes on the solved Jordan basis of UT3(F3)")
{
    Lab lab = preset_lab("ut3_f3");
    HypothesisReport hyp = check_hypotheses(lab.spec());
    MapSpace jordan = solve_space(lab, DerivKind::jordan_linearized);
    REQUIRE(!jordan.generators.empty());
    for (const auto& g : jordan.generators) {
        auto entries = run_all_checkers(lab, g, hyp);
        CHECK(entries.size() == 18);
        CHECK(all_pass(entries));
    }
}
