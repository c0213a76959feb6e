#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trijd {

// A violated algebraic axiom. `witness` names the offending tuple so the
// failure can be reproduced by hand.
class AxiomError : public std::runtime_error {
public:
    AxiomError(std::string axiom, std::string witness)
        : std::runtime_error(axiom + " violated at " + witness),
          axiom_(std::move(axiom)), witness_(std::move(witness)) {}

    const std::string& axiom() const noexcept { return axiom_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string axiom_;
    std::string witness_;
};

// Inconsistent shapes: missing modules, mismatched rings, wrong table sizes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed instance documents or linear systems.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation refused because its size exceeds a configured cap. Carries
// the size so callers never truncate silently.
class CapError : public std::runtime_error {
public:
    CapError(const std::string& what, std::uint64_t count, std::uint64_t cap)
        : std::runtime_error(what + ": count " + std::to_string(count) +
                             " exceeds cap " + std::to_string(cap)),
          count_(count), cap_(cap) {}

    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t count_;
    std::uint64_t cap_;
};

} // namespace trijd
