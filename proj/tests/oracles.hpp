#pragma once

// Brute-force reference computations shared by the unit and acceptance
// tests. Nothing here calls the solver code paths it is used to check.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;

inline std::int64_t rem(std::int64_t a, std::int64_t m)
{
    a %= m;
    return a < 0 ? a + m : a;
}

// Every vector of (Z/m)^cols, in odometer order.
inline std::vector<Vec> all_vectors(std::size_t cols, std::int64_t m)
{
    std::vector<Vec> out;
    Vec v(cols, 0);
    while (true) {
        out.push_back(v);
        std::size_t k = 0;
        while (k < cols && ++v[k] == m)
            v[k++] = 0;
        if (k == cols)
            return out;
    }
}

// The set of all Z/m-combinations of the rows.
inline std::set<Vec> span(const std::vector<Vec>& rows, std::size_t cols, std::int64_t m)
{
    std::set<Vec> out{Vec(cols, 0)};
    for (const auto& r : rows) {
        std::set<Vec> next;
        for (const auto& v : out)
            for (std::int64_t k = 0; k < m; ++k) {
                Vec w(cols);
                for (std::size_t c = 0; c < cols; ++c)
                    w[c] = rem(v[c] + k * r[c], m);
                next.insert(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

// { z : A z = 0 over Z/m } by exhaustion.
inline std::set<Vec> kernel(const std::vector<Vec>& a, std::size_t cols, std::int64_t m)
{
    std::set<Vec> out;
    for (const auto& z : all_vectors(cols, m)) {
        bool ok = true;
        for (const auto& row : a) {
            std::int64_t s = 0;
            for (std::size_t c = 0; c < cols; ++c)
                s += row[c] * z[c];
            ok = ok && rem(s, m) == 0;
        }
        if (ok)
            out.insert(z);
    }
    return out;
}

// Plain 2x2 / 3x3 upper triangular product over Z/m on full matrices.
inline std::vector<Vec> matmul(const std::vector<Vec>& a, const std::vector<Vec>& b, std::int64_t m)
{
    const std::size_t n = a.size();
    std::vector<Vec> c(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < n; ++k)
                s += a[i][k] * b[k][j];
            c[i][j] = rem(s, m);
        }
    return c;
}

} // namespace oracle
