#pragma once

#include <vector>

#include "prism/series.hpp"

namespace prism {

inline constexpr int kWittLmax = 5;

// Coefficient ring C = (Z/p^M)[z]/z^Z; Z = 1 gives Z/p^M.
struct CoeffRing {
    Modulus mod;
    int Z = 1;
    TruncSeries zero() const { return TruncSeries(mod, Z); }
    TruncSeries scalar(i64 c) const { return TruncSeries::constant(mod, Z, c); }
    bool operator==(const CoeffRing& o) const { return mod == o.mod && Z == o.Z; }
};

class WittVector {
public:
    WittVector() = default;
    WittVector(const CoeffRing& C, std::vector<TruncSeries> comps);
    static WittVector zero(const CoeffRing& C, int L);

    const CoeffRing& ring() const { return C_; }
    int length() const { return static_cast<int>(x_.size()); }
    const TruncSeries& operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
    const std::vector<TruncSeries>& components() const { return x_; }
    bool operator==(const WittVector& o) const { return C_ == o.C_ && x_ == o.x_; }

private:
    CoeffRing C_;
    std::vector<TruncSeries> x_;
};

std::vector<TruncSeries> ghost(const WittVector& x);
WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);
WittVector witt_neg(const WittVector& x);
WittVector frobenius_W(const WittVector& x);
WittVector verschiebung(const WittVector& x);
WittVector teichmuller(const TruncSeries& a, int L);
WittVector delta_W(const WittVector& x);

enum class CartierWitt { ok, fail_nilpotence, fail_unit };
const char* to_string(CartierWitt r);

// S is the coefficient ring of xi; its nilradical is (p, z).
CartierWitt cartier_witt_check(const WittVector& xi);

}  // namespace prism
