#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "prism/errors.hpp"
#include "prism/filtration.hpp"

using namespace prism;

namespace {

std::vector<i64> zpow(int n) {
    std::vector<i64> r(static_cast<std::size_t>(n) + 1, 0);
    r.back() = 1;
    return r;
}

Vec unit(std::size_t n, std::size_t a) {
    Vec v(n, 0);
    v[a] = 1;
    return v;
}

// (Z/p^N)[z]/(z^Z) as a QuotCoeffs
QuotCoeffs zring(u64 p, int N, int Z) {
    Modulus m(p, N);
    Vec G(static_cast<std::size_t>(Z) + 1, 0);
    G.back() = 1;
    return QuotCoeffs{m, G, Z};
}

Vec from_ints(const QuotCoeffs& T, const std::vector<i64>& c) {
    Vec v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = T.mod.reduce(c[i]);
    return T.reduce(v);
}

// log_p of the number of ring elements with the property
template <class Pred>
long count_log(const QuotCoeffs& T, Pred pred) {
    std::size_t c = 0;
    for (const auto& v : oracle::all_vectors(T.mod, T.size()))
        if (pred(v)) ++c;
    return oracle::log_p(T.mod.p, c);
}

}  // namespace

TEST_CASE("koszul lengths against enumeration") {
    const QuotCoeffs T = zring(3, 2, 2);  // Z/9[z]/z^2, 81 elements
    const long lT = 4;
    const std::vector<std::vector<i64>> cands{{3}, {0, 1}, {3, 1}, {1}, {0, 3}, {6, 3}};
    for (const auto& a : cands) {
        Vec x = from_ints(T, a);
        auto L = koszul_lengths(T, {x});
        long ann = count_log(T, [&](const Vec& v) { return vzero(T.mul(v, x)); });
        CHECK(L[1] == ann);
        CHECK(L[0] == ann);  // |T/xT| = |ann x| for finite T
        for (const auto& b : cands) {
            Vec y = from_ints(T, b);
            auto L2 = koszul_lengths(T, {x, y});
            long h2 = count_log(T, [&](const Vec& v) { return vzero(T.mul(v, x)) && vzero(T.mul(v, y)); });
            std::set<Vec> ideal;
            for (const auto& u : oracle::all_vectors(T.mod, T.size()))
                for (const auto& w : oracle::all_vectors(T.mod, T.size())) {
                    Vec s = T.mul(u, x), t = T.mul(w, y);
                    for (std::size_t i = 0; i < s.size(); ++i) s[i] = T.mod.add(s[i], t[i]);
                    ideal.insert(s);
                }
            long h0 = lT - oracle::log_p(3, ideal.size());
            CHECK(L2[0] == h0);
            CHECK(L2[2] == h2);
            CHECK(L2[0] - L2[1] + L2[2] == 0);
        }
    }
}

TEST_CASE("breuil-kisin quotient ideals are filtered koszul-regular") {
    KoszulWindow W;
    W.p = 3;
    W.N = 4;
    W.Z = 12;
    for (int n = 1; n <= 3; ++n) {
        auto rep = filtered_koszul(W, {{-3, 1}, zpow(n)}, {0, n}, 1);
        CHECK(rep.regular());
        CHECK(rep.graded_regular());
        CHECK(rep.strict);
        CHECK(rep.filtered_regular());
        CHECK(rep.h1_excess() == 0);
    }
    auto p2 = filtered_koszul(KoszulWindow{2, 4, 12, {}, false}, {{2, 2, 1}, zpow(3)}, {0, 3}, 1);
    CHECK(p2.filtered_regular());
}

TEST_CASE("(z, z) is rejected") {
    for (bool fp : {true, false}) {
        KoszulWindow W{3, 4, 10, {}, fp};
        auto rep = koszul_report(W, {zpow(1), zpow(1)});
        CHECK_FALSE(rep.regular());
        CHECK(rep.lengths[1] > 0);
        // over Z_p the truncation (p^N, z^Z) accounts for the whole of H_1
        if (fp) CHECK(rep.h1_excess() > 0);
        auto frep = filtered_koszul(W, {zpow(1), zpow(1)}, {1, 1}, 1);
        CHECK_FALSE(frep.filtered_regular());
    }
    // a single non-zero element of F_p[[z]] is regular
    CHECK(koszul_report(KoszulWindow{3, 4, 10, {}, true}, {zpow(2)}).regular());
    // weights must be honest
    CHECK_THROWS_AS(filtered_koszul(KoszulWindow{}, {zpow(1)}, {2}, 1), MalformedInput);
}

TEST_CASE("scp of the d-adic filtration is the (d^p, p)-adic filtration") {
    for (const auto& [p, coeffs] : std::vector<std::pair<u64, std::vector<i64>>>{{3, {-3, 1}}, {2, {-2, 1}}, {2, {2, 2, 1}}}) {
        Eisenstein E{p, coeffs};
        const int N = 3;
        const int J = 3 * static_cast<int>(p) + 1;
        auto F = dadic_filtration(E, N, J);
        auto G = scp(F, p);
        CHECK(G.decreasing());
        // ideal powers of (d^p, p) by products of generators
        const Modulus mod(p, N);
        QuotCoeffs B{mod, eisenstein_power(E, mod, J), E.degree() * J};
        Vec d = from_ints(B, coeffs);
        Vec dp = B.one();
        for (u64 t = 0; t < p; ++t) dp = B.mul(dp, d);
        Vec pv = B.zero();
        pv[0] = p % mod.q;
        std::vector<Vec> power{B.one()};
        for (int m = 0; m <= 3; ++m) {
            std::vector<Vec> gens;
            for (const auto& g : power)
                for (std::size_t a = 0; a < B.size(); ++a) gens.push_back(B.mul(g, unit(B.size(), a)));
            CHECK(G.piece(m) == Lattice::span(mod, B.size(), gens));
            std::vector<Vec> next;
            for (const auto& g : power) {
                next.push_back(B.mul(g, dp));
                next.push_back(B.mul(g, pv));
            }
            power = next;
        }
    }
}

TEST_CASE("scp of the trivial filtration is p-adic") {
    const Modulus mod(3, 4);
    FilteredModule F;
    F.pieces.push_back(Lattice::full(mod, 2));
    auto G = scp(F, 3);
    for (int m = 0; m <= 5; ++m) CHECK(G.piece(m) == Lattice::full(mod, 2).scaled(mod.ppow(m)));
}

TEST_CASE("scp on a rank-one module by enumeration") {
    const Modulus mod(3, 3);
    // F^0 = Z/27, F^1..F^3 = 3Z/27, F^4.. F^6 = 9Z/27
    FilteredModule F;
    const std::vector<int> val{0, 1, 1, 1, 2, 2, 2};
    for (int v : val) F.pieces.push_back(Lattice::span(mod, 1, {Vec{mod.ppow(v)}}));
    auto G = scp(F, 3);
    for (int m = 0; m <= 5; ++m) {
        std::set<u64> seen;
        for (u64 x0 = 0; x0 < mod.q; ++x0)
            for (u64 x1 = 0; x1 < mod.q; ++x1)
                for (u64 x2 = 0; x2 < mod.q; ++x2) {
                    // sum_t p^{m-t} x_t with x_t in F^{3t}, t <= 2
                    u64 s = 0;
                    const u64 xs[3] = {x0, x1, x2};
                    for (int t = 0; t <= std::min(m, 2); ++t) {
                        u64 xt = mod.mul(xs[t], mod.ppow(val[static_cast<std::size_t>(3 * t)]));
                        s = mod.add(s, mod.mul(xt, mod.ppow(m - t)));
                    }
                    seen.insert(s);
                }
        CHECK(G.piece(m).length() == oracle::log_p(3, seen.size()));
    }
}

TEST_CASE("filtered envelope") {
    auto P = make_breuil_kisin(3, 3, 60, {-3, 1});
    auto pres = make_presentation(P, {zpow(1)});
    EnvelopeBounds b;
    b.D = 4;
    auto we = filtered_envelope(pres, 1, 1, b);
    CHECK(we.filtration.decreasing());
    CHECK(we.filtration.underlying() == we.env.lattice);
    REQUIRE(we.monomial_weight.size() >= 4);
    CHECK(we.monomial_weight[1] == 1);
    CHECK(we.monomial_weight[3] == 3);
}
