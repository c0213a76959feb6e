#pragma once

// Membership straight from the definitions, quantified over every pair of
// elements of T (every element for the squared form). Independent of the
// basis-pair reduction and the linear systems used by the library.

#include "trijd/derivlab.hpp"

namespace oracle {

inline bool member_by_definition(const trijd::Lab& lab, const trijd::AddMap& d, trijd::DerivKind kind)
{
    using namespace trijd;
    const TriMatSpec& s = lab.spec();
    // Images are computed on first use so that non-members exit early.
    std::vector<TriMatElement> images(s.size());
    std::vector<char> known(s.size(), 0);
    auto image = [&](std::uint64_t x) -> const TriMatElement& {
        if (!known[x]) {
            images[x] = lab.apply(d, s.element_at(x));
            known[x] = 1;
        }
        return images[x];
    };
    auto D = [&](const TriMatElement& x) { return image(s.index_of(x)); };
    for (std::uint64_t x = 0; x < s.size(); ++x) {
        const TriMatElement a = s.element_at(x);
        const TriMatElement da = image(x);
        if (kind == DerivKind::jordan_squared) {
            if (D(mul(s, a, a)) != add(s, mul(s, da, a), mul(s, a, da)))
                return false;
            continue;
        }
        for (std::uint64_t y = 0; y < s.size(); ++y) {
            const TriMatElement b = s.element_at(y);
            const TriMatElement db = image(y);
            bool ok = true;
            switch (kind) {
            case DerivKind::derivation:
                ok = D(mul(s, a, b)) == add(s, mul(s, da, b), mul(s, a, db));
                break;
            case DerivKind::antiderivation:
                ok = D(mul(s, a, b)) == add(s, mul(s, db, a), mul(s, b, da));
                break;
            default:
                ok = D(add(s, mul(s, a, b), mul(s, b, a))) ==
                     add(s, add(s, mul(s, da, b), mul(s, a, db)), add(s, mul(s, db, a), mul(s, b, da)));
            }
            if (!ok)
                return false;
        }
    }
    return true;
}

} // namespace oracle
