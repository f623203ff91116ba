#pragma once

// Z/p^M(i)(R/A) as the two-term complex can - c.phi : N^{>=i}/N^{>=j} -> N^{>=0}/N^{>=j} mod p^M.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prism/nygaard.hpp"

namespace prism {

// smallest j with (p-1) j > p i, times M
int choose_truncation(int i, u64 p, int M);
// choose_truncation raised until phi(d)^{j-i} lies in N^{>=j} + p^M
int sound_truncation(int i, u64 p, int M);

struct SyntomicBounds {
    int Z = 60;
    int jmax = 64;      // largest admissible truncation
    int extra_D = 0;    // added to the automatic degree window
    int extra_N = 0;    // added to the internal p-precision
    bool check_j = true;
    bool check_precision = true;
    long budget_ms = 0;  // 0: unlimited
};

struct SyntomicResult {
    u64 p = 0;
    int M = 0;
    int e = 0;
    std::vector<i64> eisenstein;
    std::vector<std::vector<i64>> relations;
    int i = 0;
    int j_used = 0;
    std::vector<u64> h0, h1;  // invariant factors, descending
    long euler = 0;           // length(source) - length(target)
    long source_length = 0;   // N^{>=i}/(N^{>=j} + p^M)
    long target_length = 0;   // N^{>=0}/(N^{>=j} + p^M)
    bool j_stable = true;
    bool precision_stable = true;
    Ledger ledger;             // internal (N, Zc)
    int window_J = 0;
    int window_D = 0;
    double runtime_ms = 0;

    bool stable() const { return j_stable && precision_stable; }
    static long log_length(const std::vector<u64>& f, u64 p);
};

SyntomicResult syntomic(const QrspPresentation& pres, int i, int M, const SyntomicBounds& bounds = {});

struct SweepCell {
    std::size_t config = 0;  // index into the presentation list
    int i = 0;
    std::string status;      // "ok", "unstable" or "error"
    std::string error;
    std::optional<SyntomicResult> result;
};

// cells in (config, i) order; jobs <= 1 runs sequentially
std::vector<SweepCell> sweep(const std::vector<QrspPresentation>& family, int i_min, int i_max, int M,
                             const SyntomicBounds& bounds, int jobs = 1,
                             const std::function<void(const SweepCell&)>& on_done = {});

}  // namespace prism
