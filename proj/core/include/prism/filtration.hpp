#pragma once

// Filtered Koszul complexes, weighted envelopes and the scp convolution on finite windows.

#include <vector>

#include "prism/envelope.hpp"
#include "prism/rewrite.hpp"
#include "prism/zmod.hpp"

namespace prism {

// Lengths of H_0..H_c of the Koszul complex of xs over the finite ring T.
std::vector<long> koszul_lengths(const QuotCoeffs& T, const std::vector<Vec>& xs);

// Truncation window for Koszul computations:
//   base empty  -> (Z/p^N)[z]/(z^Z), i.e. A = Z_p[[z]] cut by (p^N, z^Z)
//   base = G    -> (Z/p^N)[z]/(G) for monic G
// over_fp replaces Z/p^N by F_p.
struct KoszulWindow {
    u64 p = 2;
    int N = 4;
    int Z = 12;
    std::vector<i64> base;
    bool over_fp = false;

    // truncation parameters that are regular in the ambient ring
    int params() const { return (base.empty() ? 1 : 0) + (over_fp ? 0 : 1); }
    QuotCoeffs ring() const;
    KoszulWindow refined() const;
};

struct FilteredKoszulReport {
    std::vector<long> lengths;          // H_k of the truncated complex
    std::vector<long> expected;         // C(t, k) * length(H_0): contribution of the truncation alone
    std::vector<long> graded_lengths;   // same for the leading forms
    std::vector<long> graded_expected;
    bool h0_stable = false;             // length(H_0) unchanged under refinement
    bool graded_h0_stable = false;
    bool strict = false;                // gr of the quotient filtration = gr T / (leading forms)
    std::vector<long> quotient_graded;  // length of gr^m of T/(xs) in the stable range

    bool is_regular = false;
    bool is_graded_regular = false;

    // excess length of H_1 over the truncation contribution
    long h1_excess() const { return lengths.size() > 1 ? lengths[1] - expected[1] : 0; }
    bool regular() const { return is_regular; }
    bool graded_regular() const { return is_graded_regular; }
    bool filtered_regular() const { return is_regular && is_graded_regular && strict; }
};

// xs are integer polynomials in z; weights[j] is the filtration weight of xs[j] for the
// filtration where z has weight wz (wz = 0: trivial filtration).
FilteredKoszulReport filtered_koszul(const KoszulWindow& W, const std::vector<std::vector<i64>>& xs,
                                     const std::vector<int>& weights, int wz);

// Unfiltered variant; regular() decides Koszul regularity at the truncation.
FilteredKoszulReport koszul_report(const KoszulWindow& W, const std::vector<std::vector<i64>>& xs);

// Decreasing chain F^0 ⊇ F^1 ⊇ ... ⊇ F^{top}, F^m = 0 beyond top; F^m = F^0 for m <= 0.
struct FilteredModule {
    std::vector<Lattice> pieces;

    const Lattice& underlying() const { return pieces.front(); }
    int top() const { return static_cast<int>(pieces.size()) - 1; }
    Lattice piece(int m) const;
    bool decreasing() const;

    // F^m = span of generators of weight >= m
    static FilteredModule from_generators(const Modulus& mod, std::size_t rank, const std::vector<Vec>& gens,
                                          const std::vector<int>& weights);
};

// weight m piece = sum_t p^{m-t} F^{p t}
FilteredModule scp(const FilteredModule& F, u64 p);

// d-adic filtration on (Z/p^N)[z]/(E^J), coordinates z^0..z^{eJ-1}
FilteredModule dadic_filtration(const Eisenstein& E, int N, int J);

struct WeightedEnvelope {
    EnvelopeLattice env;
    int wz = 0;
    std::vector<int> monomial_weight;  // weight of m_k, k <= D
    FilteredModule filtration;         // F^m of the window lattice
};

// Envelope of A/(d, r) where z has weight wz and r has weight w;
// weight(delta^k(r/d)) = p^k w, products additive.
WeightedEnvelope filtered_envelope(const QrspPresentation& pres, int w, int wz, const EnvelopeBounds& bounds);

}  // namespace prism
