#pragma once

// Brute-force helpers shared by the unit tests.

#include <random>
#include <set>
#include <vector>

#include "prism/zmod.hpp"

namespace oracle {

using prism::Modulus;
using prism::u64;
using prism::Vec;

// all vectors of (Z/q)^n
inline std::vector<Vec> all_vectors(const Modulus& m, std::size_t n) {
    std::vector<Vec> out;
    Vec v(n, 0);
    while (true) {
        out.push_back(v);
        std::size_t i = 0;
        while (i < n && ++v[i] == m.q) v[i++] = 0;
        if (i == n) break;
    }
    return out;
}

// row span by closure under adding generators
inline std::set<Vec> span_set(const Modulus& m, std::size_t n, const std::vector<Vec>& gens) {
    std::set<Vec> seen{Vec(n, 0)};
    std::vector<Vec> frontier{Vec(n, 0)};
    while (!frontier.empty()) {
        std::vector<Vec> next;
        for (const auto& v : frontier)
            for (const auto& g : gens) {
                Vec w(n);
                for (std::size_t i = 0; i < n; ++i) w[i] = m.add(v[i], g[i]);
                if (seen.insert(w).second) next.push_back(w);
            }
        frontier.swap(next);
    }
    return seen;
}

inline Vec random_vec(std::mt19937_64& rng, const Modulus& m, std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = rng() % m.q;
    return v;
}

inline long log_p(u64 p, std::size_t count) {
    long k = 0;
    while (count > 1) {
        count /= p;
        ++k;
    }
    return k;
}

}  // namespace oracle
