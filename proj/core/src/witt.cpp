#include "prism/witt.hpp"

namespace prism {

namespace {

void check_length(int L) {
    if (L < 1) throw MalformedInput("witt: length must be positive");
    if (L > kWittLmax)
        throw CapabilityError("witt: length " + std::to_string(L) + " exceeds L_max = " + std::to_string(kWittLmax));
}

// Integer-faithful working precision: results mod p^M after dividing by up to p^{L}.
Modulus lift_modulus(const CoeffRing& C, int L) { return Modulus(C.mod.p, C.mod.M + L + 1); }

std::vector<TruncSeries> lifted(const WittVector& x, const Modulus& K) {
    std::vector<TruncSeries> out;
    for (const auto& c : x.components()) out.push_back(c.with_modulus(K));
    return out;
}

std::vector<TruncSeries> ghost_of(const std::vector<TruncSeries>& x) {
    const u64 p = x.front().modulus().p;
    std::vector<TruncSeries> w;
    for (std::size_t n = 0; n < x.size(); ++n) {
        TruncSeries s(x[0].modulus(), x[0].Z());
        u64 pi = 1, e = 1;
        for (std::size_t k = 0; k < n; ++k) e *= p;
        for (std::size_t i = 0; i <= n; ++i) {
            s += x[i].pow(e).scaled(pi);
            pi *= p;
            e /= p;
        }
        w.push_back(s);
    }
    return w;
}

// exact division by p^k of a residue known mod p^K; result kept as a residue mod p^K
TruncSeries div_ppow(const TruncSeries& a, int k) {
    const Modulus& m = a.modulus();
    TruncSeries r(m, a.Z());
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= m.p;
    for (int i = 0; i < a.Z(); ++i) {
        if (a[i] % pk) throw InternalConsistency("witt: ghost inversion hit a non-divisible component");
        r[i] = a[i] / pk;
    }
    return r;
}

WittVector from_ghost(const CoeffRing& C, const std::vector<TruncSeries>& w) {
    const u64 p = C.mod.p;
    std::vector<TruncSeries> x;
    for (std::size_t n = 0; n < w.size(); ++n) {
        TruncSeries s = w[n];
        u64 pi = 1, e = 1;
        for (std::size_t k = 0; k < n; ++k) e *= p;
        for (std::size_t i = 0; i < n; ++i) {
            s -= x[i].pow(e).scaled(pi);
            pi *= p;
            e /= p;
        }
        x.push_back(div_ppow(s, static_cast<int>(n)));
    }
    std::vector<TruncSeries> out;
    for (auto& c : x) out.push_back(c.with_modulus(C.mod));
    return WittVector(C, out);
}

void same_ring(const WittVector& x, const WittVector& y) {
    if (!(x.ring() == y.ring()) || x.length() != y.length()) throw MalformedInput("witt: operands differ in ring or length");
}

}  // namespace

WittVector::WittVector(const CoeffRing& C, std::vector<TruncSeries> comps) : C_(C), x_(std::move(comps)) {
    check_length(length());
    for (auto& c : x_)
        if (c.modulus() != C.mod || c.Z() != C.Z) throw MalformedInput("witt: component outside the coefficient ring");
}

WittVector WittVector::zero(const CoeffRing& C, int L) {
    return WittVector(C, std::vector<TruncSeries>(static_cast<std::size_t>(L), C.zero()));
}

std::vector<TruncSeries> ghost(const WittVector& x) { return ghost_of(x.components()); }

WittVector witt_add(const WittVector& x, const WittVector& y) {
    same_ring(x, y);
    Modulus K = lift_modulus(x.ring(), x.length());
    auto a = ghost_of(lifted(x, K)), b = ghost_of(lifted(y, K));
    for (std::size_t n = 0; n < a.size(); ++n) a[n] += b[n];
    return from_ghost(x.ring(), a);
}

WittVector witt_mul(const WittVector& x, const WittVector& y) {
    same_ring(x, y);
    Modulus K = lift_modulus(x.ring(), x.length());
    auto a = ghost_of(lifted(x, K)), b = ghost_of(lifted(y, K));
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = a[n] * b[n];
    return from_ghost(x.ring(), a);
}

WittVector witt_neg(const WittVector& x) {
    Modulus K = lift_modulus(x.ring(), x.length());
    auto a = ghost_of(lifted(x, K));
    for (auto& w : a) w = -w;
    return from_ghost(x.ring(), a);
}

WittVector frobenius_W(const WittVector& x) {
    if (x.length() < 2) throw MalformedInput("frobenius_W: length must be at least 2");
    Modulus K = lift_modulus(x.ring(), x.length());
    auto a = ghost_of(lifted(x, K));
    a.erase(a.begin());
    return from_ghost(x.ring(), a);
}

WittVector verschiebung(const WittVector& x) {
    std::vector<TruncSeries> c{x.ring().zero()};
    for (int i = 0; i < x.length() && static_cast<int>(c.size()) < kWittLmax; ++i) c.push_back(x[i]);
    return WittVector(x.ring(), c);
}

WittVector teichmuller(const TruncSeries& a, int L) {
    CoeffRing C{a.modulus(), a.Z()};
    std::vector<TruncSeries> c(static_cast<std::size_t>(L), C.zero());
    c[0] = a;
    return WittVector(C, c);
}

WittVector delta_W(const WittVector& x) {
    if (x.length() < 2) throw MalformedInput("delta_W: length must be at least 2");
    Modulus K = lift_modulus(x.ring(), x.length());
    auto w = ghost_of(lifted(x, K));
    const u64 p = K.p;
    std::vector<TruncSeries> g;
    for (std::size_t n = 0; n + 1 < w.size(); ++n) g.push_back(div_ppow(w[n + 1] - w[n].pow(p), 1));
    return from_ghost(x.ring(), g);
}

const char* to_string(CartierWitt r) {
    switch (r) {
        case CartierWitt::ok: return "ok";
        case CartierWitt::fail_nilpotence: return "fail_nilpotence";
        case CartierWitt::fail_unit: return "fail_unit";
    }
    return "?";
}

CartierWitt cartier_witt_check(const WittVector& xi) {
    const u64 p = xi.ring().mod.p;
    if (xi[0][0] % p != 0) return CartierWitt::fail_nilpotence;
    if (xi.length() < 2) return CartierWitt::fail_unit;
    WittVector d = delta_W(xi);
    return d[0][0] % p != 0 ? CartierWitt::ok : CartierWitt::fail_unit;
}

}  // namespace prism
