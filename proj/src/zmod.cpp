#include "trijd/zmod.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <tuple>

namespace trijd::zmod {

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t lcm(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return a / gcd(a, b) * b;
}

namespace {

// Returns (g, s, t) with s*a + t*b == g == gcd(a, b).
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t old_r = a, r = b;
    std::int64_t old_s = 1, s = 0;
    std::int64_t old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

void axpy(Row& y, std::int64_t factor, const Row& x, std::int64_t m)
{
    if (factor == 0)
        return;
    for (std::size_t k = 0; k < y.size(); ++k)
        if (x[k] != 0)
            y[k] = mod(y[k] + mulmod(factor, x[k], m), m);
}

void reduce_rows(Matrix& a, std::size_t cols, std::int64_t m)
{
    for (auto& row : a) {
        if (row.size() != cols)
            throw std::invalid_argument("zmod: ragged matrix");
        for (auto& v : row)
            v = mod(v, m);
    }
}

// Unit w with a*w == gcd(a, m) (mod m).
std::int64_t normalizing_unit(std::int64_t a, std::int64_t m)
{
    std::int64_t g = gcd(a, m);
    std::int64_t cofactor = m / g;
    if (cofactor == 1)
        return 1;
    std::int64_t w = inverse(mod(a / g, cofactor), cofactor);
    while (gcd(w, m) != 1)
        w += cofactor;
    return w;
}

} // namespace

std::int64_t inverse(std::int64_t a, std::int64_t m)
{
    auto [g, s, t] = ext_gcd(mod(a, m), m);
    (void)t;
    if (g != 1)
        throw std::domain_error("zmod::inverse: not a unit");
    return mod(s, m);
}

int valuation(std::int64_t a, std::int64_t p, int cap)
{
    if (a == 0)
        return cap;
    int k = 0;
    while (k < cap && a % p == 0) {
        a /= p;
        ++k;
    }
    return k;
}

std::int64_t ipow(std::int64_t base, int exp)
{
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

LocalSmith smith_local(Matrix a, std::size_t cols, std::int64_t p, int e)
{
    const std::int64_t q = ipow(p, e);
    reduce_rows(a, cols, q);

    LocalSmith out;
    out.p = p;
    out.e = e;
    out.exponents.assign(cols, e);
    out.col_transform.assign(cols, Row(cols, 0));
    for (std::size_t i = 0; i < cols; ++i)
        out.col_transform[i][i] = 1;
    Matrix& v = out.col_transform;

    auto swap_cols = [&](std::size_t x, std::size_t y) {
        if (x == y)
            return;
        for (auto& row : a)
            std::swap(row[x], row[y]);
        for (auto& row : v)
            std::swap(row[x], row[y]);
    };

    const std::size_t rank_bound = std::min(a.size(), cols);
    for (std::size_t t = 0; t < rank_bound; ++t) {
        int best = e;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = t; i < a.size() && best > 0; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                int val = valuation(a[i][j], p, e);
                if (val < best) {
                    best = val;
                    bi = i;
                    bj = j;
                    if (best == 0)
                        break;
                }
            }
        if (best == e)
            break;
        std::swap(a[t], a[bi]);
        swap_cols(t, bj);

        const std::int64_t pk = ipow(p, best);
        const std::int64_t unit_inv = inverse(a[t][t] / pk, q);
        for (auto& x : a[t])
            x = mulmod(x, unit_inv, q);

        for (std::size_t i = t + 1; i < a.size(); ++i) {
            if (a[i][t] == 0)
                continue;
            axpy(a[i], q - a[i][t] / pk, a[t], q);
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            if (a[t][j] == 0)
                continue;
            const std::int64_t factor = q - a[t][j] / pk;
            for (auto& row : a)
                row[j] = mod(row[j] + mulmod(factor, row[t], q), q);
            for (auto& row : v)
                row[j] = mod(row[j] + mulmod(factor, row[t], q), q);
        }
        out.exponents[t] = best;
    }
    return out;
}

Matrix echelon_local(Matrix a, std::size_t cols, std::int64_t p, int e)
{
    const std::int64_t q = ipow(p, e);
    reduce_rows(a, cols, q);

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        int best = e;
        std::size_t bi = r;
        for (std::size_t i = r; i < a.size(); ++i) {
            int val = valuation(a[i][c], p, e);
            if (val < best) {
                best = val;
                bi = i;
                if (best == 0)
                    break;
            }
        }
        if (best == e)
            continue;
        std::swap(a[r], a[bi]);
        const std::int64_t pk = ipow(p, best);
        const std::int64_t unit_inv = inverse(a[r][c] / pk, q);
        for (auto& x : a[r])
            x = mulmod(x, unit_inv, q);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            if (a[i][c] == 0)
                continue;
            axpy(a[i], q - a[i][c] / pk, a[r], q);
        }
        ++r;
    }
    a.resize(r);
    return a;
}

Matrix howell_form(Matrix a, std::size_t cols, std::int64_t m)
{
    reduce_rows(a, cols, m);

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            if (a[i][c] == 0)
                continue;
            auto [g, s, t] = ext_gcd(a[r][c], a[i][c]);
            const std::int64_t u = -a[i][c] / g;
            const std::int64_t w = a[r][c] / g;
            Row top(cols), bottom(cols);
            for (std::size_t k = 0; k < cols; ++k) {
                top[k] = mod(mulmod(mod(s, m), a[r][k], m) + mulmod(mod(t, m), a[i][k], m), m);
                bottom[k] = mod(mulmod(mod(u, m), a[r][k], m) + mulmod(mod(w, m), a[i][k], m), m);
            }
            a[r] = std::move(top);
            a[i] = std::move(bottom);
        }
        if (a[r][c] == 0)
            continue;

        const std::int64_t unit = normalizing_unit(a[r][c], m);
        for (auto& x : a[r])
            x = mulmod(x, unit, m);
        const std::int64_t pivot = a[r][c];

        for (std::size_t k = 0; k < r; ++k) {
            const std::int64_t q = a[k][c] / pivot;
            if (q != 0)
                axpy(a[k], m - q % m, a[r], m);
        }

        Row ann(cols);
        bool nonzero = false;
        const std::int64_t scale = m / pivot;
        for (std::size_t k = 0; k < cols; ++k) {
            ann[k] = mulmod(scale, a[r][k], m);
            nonzero = nonzero || ann[k] != 0;
        }
        if (nonzero)
            a.push_back(std::move(ann));
        ++r;
    }
    a.resize(std::min(r, a.size()));
    return a;
}

bool howell_contains(const Matrix& h, Row v, std::int64_t m)
{
    for (auto& x : v)
        x = mod(x, m);
    std::size_t next_col = 0;
    for (const auto& row : h) {
        std::size_t c = 0;
        while (c < row.size() && row[c] == 0)
            ++c;
        if (c == row.size())
            continue;
        for (std::size_t k = next_col; k < c; ++k)
            if (v[k] != 0)
                return false;
        if (v[c] % row[c] != 0)
            return false;
        axpy(v, m - (v[c] / row[c]) % m, row, m);
        next_col = c + 1;
    }
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

Matrix howell_kernel(const Matrix& a, std::size_t cols, std::int64_t m)
{
    const std::size_t rows = a.size();
    Matrix aug(cols, Row(rows + cols, 0));
    for (std::size_t u = 0; u < cols; ++u) {
        for (std::size_t r = 0; r < rows; ++r)
            aug[u][r] = mod(a[r][u], m);
        aug[u][rows + u] = 1;
    }
    Matrix h = howell_form(std::move(aug), rows + cols, m);

    Matrix kernel;
    for (const auto& row : h) {
        bool leading_zero = std::all_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(rows),
                                        [](std::int64_t x) { return x == 0; });
        if (leading_zero)
            kernel.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(rows), row.end());
    }
    return kernel;
}

} // namespace trijd::zmod
