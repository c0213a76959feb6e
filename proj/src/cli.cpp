#include "trijd/cli.hpp"

#include "trijd/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace trijd::cli {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

LabOptions lab_options(const InstanceFile& inst, const Options& opts)
{
    LabOptions lo;
    if (auto v = opts.element_cap ? opts.element_cap : inst.caps.element_cap)
        lo.element_cap = *v;
    if (auto v = opts.oracle_cap ? opts.oracle_cap : inst.caps.oracle_cap)
        lo.oracle_cap = *v;
    if (auto v = opts.seed ? opts.seed : inst.caps.seed)
        lo.seed = *v;
    lo.threads = std::max(1u, opts.threads);
    return lo;
}

namespace {

// Runs body, mapping library exceptions onto the exit code contract.
template <class Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const AxiomError& e) {
        err << "axiom failure: " << e.axiom() << "\n  witness: " << e.witness() << "\n";
        return exit_axiom;
    } catch (const CapError& e) {
        err << "refused: " << e.what() << "\n";
        return exit_cap;
    } catch (const FormatError& e) {
        err << "parse failure: " << e.what() << "\n";
        return exit_parse;
    } catch (const ShapeError& e) {
        err << "parse failure: " << e.what() << "\n";
        return exit_parse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

// Loading failures (unreadable file, unknown preset, malformed JSON) are all
// parse failures.
InstanceFile load_or_parse_failure(const std::string& path)
{
    try {
        return load_instance(path);
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
}

struct Loaded {
    InstanceFile inst;
    std::unique_ptr<Lab> lab;
};

Loaded load_lab(const std::string& path, const Options& opts)
{
    Loaded l;
    l.inst = load_or_parse_failure(path);
    l.lab = std::make_unique<Lab>(build_instance(l.inst), lab_options(l.inst, opts));
    return l;
}

ordered_json matrix_json(const AddMap& m)
{
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < m.dim(); ++c)
            row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json space_json(const MapSpace& s)
{
    ordered_json out;
    out["kind"] = kind_name(s.kind);
    out["cardinality"] = s.cardinality();
    out["moduli"] = s.moduli;
    ordered_json gens = ordered_json::array();
    for (const auto& g : s.generators)
        gens.push_back(matrix_json(g));
    out["generators"] = std::move(gens);
    return out;
}

ordered_json basis_json(const Lab& lab)
{
    ordered_json out = ordered_json::array();
    for (const auto& g : lab.basis().generators)
        out.push_back({{"block", std::to_string(g.i) + "," + std::to_string(g.j)},
                       {"local", g.local},
                       {"order", g.order}});
    return out;
}

ordered_json hypotheses_json(const HypothesisReport& h)
{
    ordered_json out;
    ordered_json left = ordered_json::array();
    for (bool b : h.faithful_left)
        left.push_back(b);
    out["faithful_left"] = std::move(left);
    out["faithful_right_m1n"] = h.faithful_right_m1n;
    out["two_torsion_free"] = h.two_torsion_free;
    out["all_true"] = h.all_true();
    return out;
}

ordered_json entry_json(const LemmaEntry& e)
{
    ordered_json out;
    out["id"] = e.id;
    out["status"] = status_name(e.status);
    out["checks"] = e.checks;
    if (!e.witness.empty())
        out["witness"] = e.witness;
    if (!e.note.empty())
        out["note"] = e.note;
    return out;
}

ordered_json compare_json(const Lab& lab, const MapSpace& derivs, const MapSpace& jordan)
{
    SpaceComparison cmp = compare_spaces(lab, derivs, jordan);
    ordered_json out;
    out["derivation_cardinality"] = cmp.derivation_cardinality;
    out["jordan_cardinality"] = cmp.jordan_cardinality;
    out["derivation_subset_jordan"] = cmp.derivation_subset_jordan;
    out["equal"] = cmp.equal;
    ordered_json witnesses = ordered_json::array();
    for (const auto& g : cmp.jordan_only_generators) {
        Membership as_jordan = is_member(lab, g, DerivKind::jordan_linearized);
        Membership as_deriv = is_member(lab, g, DerivKind::derivation);
        ordered_json w;
        w["matrix"] = matrix_json(g);
        w["reverified"] = as_jordan.member && !as_deriv.member;
        w["derivation_defect"] = as_deriv.witness;
        witnesses.push_back(std::move(w));
    }
    out["counterexamples"] = std::move(witnesses);
    return out;
}

// Lemma entries for every generator of the Jordan space. Returns the number
// of failed entries through `failures`.
ordered_json lemmas_json(const Lab& lab, const MapSpace& jordan, const HypothesisReport& hyp, std::size_t& failures)
{
    failures = 0;
    ordered_json out = ordered_json::array();
    for (std::size_t g = 0; g < jordan.generators.size(); ++g) {
        ordered_json entries = ordered_json::array();
        for (const auto& e : run_all_checkers(lab, jordan.generators[g], hyp)) {
            if (e.status == CheckStatus::fail)
                ++failures;
            entries.push_back(entry_json(e));
        }
        out.push_back({{"generator", g}, {"entries", std::move(entries)}});
    }
    return out;
}

ordered_json instance_json(const InstanceFile& inst, const Lab& lab)
{
    ordered_json out;
    out["digest"] = instance_digest(inst);
    out["n"] = inst.n;
    out["order"] = std::to_string(lab.spec().size());
    return out;
}

std::string dump(const ordered_json& doc)
{
    return doc.dump(2) + "\n";
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

} // namespace

int cmd_validate(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto l = load_lab(path, opts);
        const TriMatSpec& s = l.lab->spec();
        out << "valid: n=" << s.n() << " |T|=" << s.size() << " rank=" << l.lab->basis().size()
            << " digest=" << instance_digest(l.inst) << "\n";
        // Every axiom check across rings, modules, composition maps and quadruples.
        ValidationStats total;
        auto tally = [&](const ValidationStats& v) {
            total.exhaustive = total.exhaustive && v.exhaustive;
            total.tuples_checked += v.tuples_checked;
        };
        for (std::size_t i = 1; i <= s.n(); ++i) {
            tally(s.ring(i).validation());
            for (std::size_t j = i + 1; j <= s.n(); ++j) {
                tally(s.module(i, j).validation());
                for (std::size_t k = j + 1; k <= s.n(); ++k)
                    tally(s.comp(i, j, k).validation());
            }
        }
        tally(s.validation());
        out << "axioms: " << (total.exhaustive ? "exhaustive" : "sampled") << ", " << total.tuples_checked
            << " tuples\n";
        return exit_ok;
    });
}

int cmd_solve(const std::string& path, DerivKind kind, bool oracle, const Options& opts, std::ostream& out,
              std::ostream& err)
{
    return guarded(err, [&] {
        auto l = load_lab(path, opts);
        const Lab& lab = *l.lab;
        auto t0 = Clock::now();
        MapSpace space = solve_space(lab, kind);
        ordered_json doc;
        doc["instance"] = instance_json(l.inst, lab);
        doc["space"] = space_json(space);
        int code = exit_ok;
        if (oracle) {
            std::vector<AddMap> brute = oracle_members(lab, kind);
            std::vector<AddMap> solved = space.elements(lab.options().oracle_cap);
            const bool match = brute == solved;
            doc["oracle"] = {{"maps_enumerated", count_addmaps(lab.basis())},
                             {"members", brute.size()},
                             {"match", match}};
            if (!match) {
                err << "oracle mismatch: solver found " << solved.size() << " maps, enumeration " << brute.size()
                    << "\n";
                code = exit_failure;
            }
        }
        if (opts.timing)
            doc["timing_ms"] = ms_since(t0);
        out << dump(doc);
        return code;
    });
}

int cmd_compare(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto l = load_lab(path, opts);
        const Lab& lab = *l.lab;
        ordered_json doc;
        doc["instance"] = instance_json(l.inst, lab);
        doc["hypotheses"] = hypotheses_json(check_hypotheses(lab.spec()));
        doc["compare"] = compare_json(lab, solve_space(lab, DerivKind::derivation),
                                      solve_space(lab, DerivKind::jordan_linearized));
        out << dump(doc);
        return exit_ok;
    });
}

int cmd_lemmas(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto l = load_lab(path, opts);
        const Lab& lab = *l.lab;
        HypothesisReport hyp = check_hypotheses(lab.spec());
        std::size_t failures = 0;
        ordered_json doc;
        doc["instance"] = instance_json(l.inst, lab);
        doc["hypotheses"] = hypotheses_json(hyp);
        doc["seed"] = lab.options().seed;
        doc["lemmas"] = lemmas_json(lab, solve_space(lab, DerivKind::jordan_linearized), hyp, failures);
        doc["failures"] = failures;
        out << dump(doc);
        // Failures outside the hypotheses are findings; inside them they are defects.
        if (failures > 0 && hyp.all_true()) {
            err << failures << " checker failures on an instance satisfying every hypothesis\n";
            return exit_failure;
        }
        return exit_ok;
    });
}

std::string build_report(const InstanceFile& inst, const Options& opts)
{
    auto t0 = Clock::now();
    Lab lab(build_instance(inst), lab_options(inst, opts));
    HypothesisReport hyp = check_hypotheses(lab.spec());

    ordered_json doc;
    doc["format"] = "trijd-report/1";
    doc["instance"] = instance_json(inst, lab);
    doc["seed"] = lab.options().seed;
    doc["caps"] = {{"element_cap", lab.options().element_cap},
                   {"oracle_cap", lab.options().oracle_cap},
                   {"pair_cap", lab.options().pair_cap}};
    doc["basis"] = basis_json(lab);
    doc["hypotheses"] = hypotheses_json(hyp);

    ordered_json spaces = ordered_json::array();
    std::optional<MapSpace> derivs, jordan;
    for (DerivKind kind : all_kinds) {
        try {
            MapSpace s = solve_space(lab, kind);
            spaces.push_back(space_json(s));
            if (kind == DerivKind::derivation)
                derivs = std::move(s);
            else if (kind == DerivKind::jordan_linearized)
                jordan = std::move(s);
        } catch (const CapError& e) {
            spaces.push_back({{"kind", kind_name(kind)}, {"refused", e.what()}});
        }
    }
    doc["spaces"] = std::move(spaces);
    doc["compare"] = compare_json(lab, *derivs, *jordan);
    std::size_t failures = 0;
    doc["lemmas"] = lemmas_json(lab, *jordan, hyp, failures);
    doc["lemma_failures"] = failures;
    if (opts.timing)
        doc["timing_ms"] = ms_since(t0);
    return dump(doc);
}

int cmd_report(const std::string& path, const std::string& out_path, const Options& opts, std::ostream& out,
               std::ostream& err)
{
    return guarded(err, [&] {
        InstanceFile inst = load_or_parse_failure(path);
        std::string text = build_report(inst, opts);
        if (out_path == "-") {
            out << text;
            return exit_ok;
        }
        std::ofstream file(out_path, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot write '" + out_path + "'");
        file << text;
        out << "report written to " << out_path << "\n";
        return exit_ok;
    });
}

int cmd_presets(const std::optional<std::string>& write_dir, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        for (const auto& name : preset_names()) {
            out << name << "\n";
            if (write_dir) {
                std::filesystem::create_directories(*write_dir);
                std::ofstream file(std::filesystem::path(*write_dir) / (name + ".json"), std::ios::binary);
                if (!file)
                    throw std::runtime_error("cannot write preset files to '" + *write_dir + "'");
                file << serialize_instance(preset(name));
            }
        }
        return exit_ok;
    });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Derivations and Jordan derivations of generalized triangular matrix rings"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opts;
    std::uint64_t seed = 0, element_cap = 0, oracle_cap = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Seed for sampled checks");
    auto* ecap_opt = app.add_option("--element-cap", element_cap, "Largest |T| for element-wise work");
    auto* ocap_opt = app.add_option("--oracle-cap", oracle_cap, "Largest map count for the enumeration oracle");
    app.add_option("--threads", opts.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_flag("--timing", opts.timing, "Include wall-clock timings (output is then not reproducible)");

    std::string path;
    auto* validate = app.add_subcommand("validate", "Validate an instance");
    validate->add_option("file", path, "Instance file or preset:NAME")->required();

    auto* solve = app.add_subcommand("solve", "Solve for a space of maps");
    std::string kind_text = "deriv";
    bool oracle = false;
    solve->add_option("file", path, "Instance file or preset:NAME")->required();
    solve->add_option("--kind", kind_text, "deriv | jordan-lin | jordan-sq | antideriv")
        ->check(CLI::IsMember({"deriv", "jordan-lin", "jordan-sq", "antideriv"}));
    solve->add_flag("--oracle", oracle, "Cross-check against exhaustive enumeration");

    auto* compare = app.add_subcommand("compare", "Compare derivations with Jordan derivations");
    compare->add_option("file", path, "Instance file or preset:NAME")->required();

    auto* lemmas = app.add_subcommand("lemmas", "Run every structural checker on the Jordan space");
    lemmas->add_option("file", path, "Instance file or preset:NAME")->required();

    auto* report = app.add_subcommand("report", "Write the full report");
    std::string out_path = "-";
    report->add_option("file", path, "Instance file or preset:NAME")->required();
    report->add_option("-o,--output", out_path, "Output path, - for stdout");

    auto* presets = app.add_subcommand("presets", "List shipped presets");
    std::string write_dir;
    auto* write_opt = presets->add_option("--write", write_dir, "Also write NAME.json files to this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_parse;
    }
    if (*seed_opt)
        opts.seed = seed;
    if (*ecap_opt)
        opts.element_cap = element_cap;
    if (*ocap_opt)
        opts.oracle_cap = oracle_cap;

    if (*validate)
        return cmd_validate(path, opts, out, err);
    if (*solve)
        return cmd_solve(path, parse_kind(kind_text), oracle, opts, out, err);
    if (*compare)
        return cmd_compare(path, opts, out, err);
    if (*lemmas)
        return cmd_lemmas(path, opts, out, err);
    if (*report)
        return cmd_report(path, out_path, opts, out, err);
    if (*presets)
        return cmd_presets(*write_opt ? std::optional<std::string>(write_dir) : std::nullopt, out, err);
    return exit_failure;
}

} // namespace trijd::cli
