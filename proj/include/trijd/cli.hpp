#pragma once

// Command implementations behind the trijd executable. Each command returns
// its process exit code and never throws.

#include "trijd/derivlab.hpp"
#include "trijd/instance.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace trijd::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1, // verification mismatch or unexpected error
    exit_axiom = 2,
    exit_parse = 3,
    exit_cap = 4,
};

// Command-line overrides; unset values fall back to the instance caps, then
// to the library defaults.
struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> element_cap;
    std::optional<std::uint64_t> oracle_cap;
    unsigned threads = 1;
    bool timing = false;
};

LabOptions lab_options(const InstanceFile& inst, const Options& opts);

int cmd_validate(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const std::string& path, DerivKind kind, bool oracle, const Options& opts, std::ostream& out,
              std::ostream& err);
int cmd_compare(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_lemmas(const std::string& path, const Options& opts, std::ostream& out, std::ostream& err);
// Writes the full report to out_path ("-" for stdout).
int cmd_report(const std::string& path, const std::string& out_path, const Options& opts, std::ostream& out,
               std::ostream& err);
// Lists presets; with a directory, also writes NAME.json files there.
int cmd_presets(const std::optional<std::string>& write_dir, std::ostream& out, std::ostream& err);

// The full report document for an instance, as written by cmd_report.
std::string build_report(const InstanceFile& inst, const Options& opts);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace trijd::cli
