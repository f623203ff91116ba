#pragma once

#include <map>
#include <string>

#include "prism/series.hpp"

namespace prism {

// phi(f)(z) = f(z^p), the Frobenius lift with delta(z) = 0
TruncSeries frobenius(const TruncSeries& f);

// (phi(f) - f^p)/p; the result carries one p-digit less than f.
TruncSeries delta_eval(const TruncSeries& f);

// delta(d) is a unit in A/(p, z)
bool is_distinguished(const TruncSeries& d);

struct DeltaPresentation {
    u64 p = 2;
    int M = 1;
    int Z = 1;
    // delta-values of named generators; v1 carries only z with delta(z) = 0
    std::map<std::string, TruncSeries> generator_delta;

    Modulus modulus() const { return Modulus(p, M); }
};

struct OrientedPrism {
    DeltaPresentation presentation;
    Eisenstein E;
    TruncSeries d;

    u64 p() const { return E.p; }
    int e() const { return E.degree(); }
};

OrientedPrism make_breuil_kisin(u64 p, int M, int Z, const std::vector<i64>& eisenstein);

// d is a non-zero-divisor on A/p at the working truncation
bool is_transversal(const OrientedPrism& prism);

}  // namespace prism
