#include <doctest.h>

#include <random>

#include "prism/witt.hpp"

using namespace prism;

namespace {

WittVector random_witt(std::mt19937_64& rng, const CoeffRing& C, int L) {
    std::vector<TruncSeries> c;
    for (int i = 0; i < L; ++i) c.push_back(C.scalar(static_cast<i64>(rng() % C.mod.q)));
    return WittVector(C, c);
}

WittVector from_ints(const CoeffRing& C, const std::vector<i64>& v) {
    std::vector<TruncSeries> c;
    for (i64 x : v) c.push_back(C.scalar(x));
    return WittVector(C, c);
}

void check_ghost_hom(const WittVector& x, const WittVector& y) {
    auto gx = ghost(x), gy = ghost(y);
    auto gs = ghost(witt_add(x, y)), gp = ghost(witt_mul(x, y));
    for (std::size_t n = 0; n < gx.size(); ++n) {
        CHECK(gs[n] == gx[n] + gy[n]);
        CHECK(gp[n] == gx[n] * gy[n]);
    }
}

}  // namespace

TEST_CASE("ghost components") {
    CoeffRing C{Modulus(3, 4), 1};
    auto V1 = from_ints(C, {0, 1, 0});
    auto g = ghost(V1);
    CHECK(g[0] == C.scalar(0));
    CHECK(g[1] == C.scalar(3));
    CHECK(g[2] == C.scalar(3));
    auto t = teichmuller(C.scalar(2), 3);
    auto gt = ghost(t);
    CHECK(gt[1] == C.scalar(8));
    CHECK(gt[2] == C.scalar(512));
    CHECK(ghost(WittVector::zero(C, 3))[2] == C.scalar(0));
}

TEST_CASE("witt ring operations") {
    CoeffRing C{Modulus(3, 4), 1};
    auto a = teichmuller(C.scalar(5), 3), b = teichmuller(C.scalar(7), 3);
    CHECK(witt_add(a, WittVector::zero(C, 3)) == a);
    CHECK(witt_mul(a, b) == teichmuller(C.scalar(35), 3));
    CHECK(frobenius_W(a) == teichmuller(C.scalar(125), 2));
    CHECK(delta_W(a) == WittVector::zero(C, 2));
    CHECK_THROWS_AS(WittVector::zero(C, 6), CapabilityError);
}

TEST_CASE("ghost homomorphism exhaustive p=2 M=2 L=2") {
    CoeffRing C{Modulus(2, 2), 1};
    for (i64 a = 0; a < 4; ++a)
        for (i64 b = 0; b < 4; ++b)
            for (i64 c = 0; c < 4; ++c)
                for (i64 d = 0; d < 4; ++d) check_ghost_hom(from_ints(C, {a, b}), from_ints(C, {c, d}));
}

TEST_CASE("ghost homomorphism random p=3 M=4") {
    std::mt19937_64 rng(1);
    CoeffRing C{Modulus(3, 4), 1};
    for (int t = 0; t < 30; ++t) {
        int L = 1 + t % 4;
        auto x = random_witt(rng, C, L), y = random_witt(rng, C, L);
        check_ghost_hom(x, y);
        auto fv = frobenius_W(verschiebung(x));
        auto gfv = ghost(fv), gx = ghost(x);
        for (int n = 0; n < L; ++n) CHECK(gfv[static_cast<std::size_t>(n)] == gx[static_cast<std::size_t>(n)].scaled(3));
        if (L >= 2) {
            auto gd = ghost(delta_W(x));
            for (int n = 0; n + 1 < L; ++n) {
                auto lhs = gd[static_cast<std::size_t>(n)].scaled(3);
                auto rhs = gx[static_cast<std::size_t>(n) + 1] - gx[static_cast<std::size_t>(n)].pow(3);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("cartier witt anchors") {
    for (u64 p : {2u, 3u, 5u}) {
        CoeffRing S{Modulus(p, 1), 1};
        CHECK(cartier_witt_check(from_ints(S, {0, 1, 0})) == CartierWitt::ok);
        CHECK(cartier_witt_check(from_ints(S, {1, 0, 0})) == CartierWitt::fail_nilpotence);
        CHECK(cartier_witt_check(from_ints(S, {0, 0, 1, 0})) == CartierWitt::fail_unit);
    }
}
