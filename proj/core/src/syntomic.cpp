#include "prism/syntomic.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "prism/errors.hpp"

namespace prism {

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
    Clock::time_point start = Clock::now();
    long ms = 0;
    void check(const char* where) const {
        if (ms <= 0) return;
        auto used = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        if (used > ms) throw BudgetError(std::string("budget of ") + std::to_string(ms) + " ms exhausted during " + where);
    }
};

std::vector<Vec> rows_of(const Lattice& L) {
    std::vector<Vec> r;
    for (std::size_t u = 0; u < L.size(); ++u) r.push_back(L.generators().row_vec(u));
    return r;
}

std::vector<Vec> identity_rows(std::size_t n) {
    std::vector<Vec> g;
    for (std::size_t t = 0; t < n; ++t) {
        Vec e(n, 0);
        e[t] = 1;
        g.push_back(std::move(e));
    }
    return g;
}

struct Cohomology {
    std::vector<u64> h0, h1;
    long src = 0, tgt = 0;
    bool operator==(const Cohomology& o) const { return h0 == o.h0 && h1 == o.h1; }
};

// the complex at truncation j on a prepared filtration
Cohomology compute_cell(const NygaardFiltration& nf, int i, int j, int M, const Budget& budget) {
    const auto& tw = nf.twist;
    const Modulus& mod = tw.window->modulus();
    const std::size_t R = tw.rank();
    const u64 pM = mod.pow(mod.p, static_cast<u64>(M));
    const Lattice C = Lattice::full(mod, R);
    const Lattice& Ni = nf.coeffs_at(i);
    const Lattice& Nj = nf.coeffs_at(j);
    const Lattice V = lattice_join(Nj, C.scaled(pM));
    const Lattice U = lattice_join(Nj, Ni.scaled(pM));

    auto s = rows_of(Ni);
    std::vector<Vec> F;
    for (const auto& su : s) {
        budget.check("divided Frobenius");
        Vec cf = divided_frobenius_coeffs(nf, su, i);
        Vec f(R);
        for (std::size_t t = 0; t < R; ++t) f[t] = mod.sub(su[t], cf[t]);
        F.push_back(std::move(f));
    }
    budget.check("kernel");
    const auto Iq = identity_rows(s.size());
    Lattice K = preimage(Iq, s.size(), F, V);
    Lattice Ksyz = preimage(Iq, s.size(), s, U);
    if (!is_sublattice(Ksyz, K)) throw InternalConsistency("syntomic: can - c.phi does not preserve the truncation");
    Cohomology out;
    out.h0 = quotient_invariants(K, Ksyz);
    out.h1 = quotient_invariants(C, lattice_join(V, Lattice::span(mod, R, F)));
    out.src = Ni.length() - U.length();
    out.tgt = C.length() - V.length();
    return out;
}

struct Prepared {
    EnvelopeLattice env;
    NygaardFiltration nf;
};

Prepared prepare(const QrspPresentation& pres, int i, int M, int J, const SyntomicBounds& b, int extra_D, int extra_N,
                 int extra_Z) {
    EnvelopeBounds eb = nygaard_bounds(pres, J, i);
    eb.D += extra_D;
    while (true) {
        u64 cap = 1;
        for (int t = 0; t <= eb.K; ++t) cap *= pres.p();
        if (cap - 1 >= static_cast<u64>(eb.D)) break;
        ++eb.K;
    }
    eb.Z = b.Z + extra_Z;
    eb.N = envelope_precision(pres, M, J) + extra_N;
    Prepared pr;
    pr.env = build_envelope(pres, eb, false);
    pr.nf = nygaard_filtration(build_frobenius_twist(pr.env, std::max(i, 0)), J);
    return pr;
}

}  // namespace

long SyntomicResult::log_length(const std::vector<u64>& f, u64 p) {
    long s = 0;
    for (u64 q : f)
        for (u64 x = q; x > 1; x /= p) ++s;
    return s;
}

int choose_truncation(int i, u64 p, int M) {
    if (i < 0) throw MalformedInput("truncation: weight must be non-negative");
    if (M < 1) throw MalformedInput("truncation: M must be positive");
    const long pl = static_cast<long>(p);
    long j = 0;
    while ((pl - 1) * j <= pl * i) ++j;
    return static_cast<int>(j * M);
}

int sound_truncation(int i, u64 p, int M) {
    int j = choose_truncation(i, p, M);
    const long pl = static_cast<long>(p);
    while (pl * (j - i - M + 1) < j) ++j;
    return j;
}

SyntomicResult syntomic(const QrspPresentation& pres, int i, int M, const SyntomicBounds& bounds) {
    Budget budget;
    budget.ms = bounds.budget_ms;
    SyntomicResult res;
    res.p = pres.p();
    res.M = M;
    res.e = pres.e();
    res.eisenstein = pres.prism.E.coeffs;
    res.relations = pres.relations;
    res.i = i;
    if (M < 1) throw MalformedInput("syntomic: M must be positive");
    if (i < 0 || pres.zero_ring) {
        res.ledger = {M, bounds.Z};
        res.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - budget.start).count();
        return res;
    }
    const int j = sound_truncation(i, pres.p(), M);
    if (j > bounds.jmax)
        throw PrecisionExhausted("syntomic: truncation " + std::to_string(j) + " exceeds jmax " + std::to_string(bounds.jmax));
    res.j_used = j;
    // depth j + 1 also carries the recomputation at j + 1
    const int J = j + 1;
    Prepared pr = prepare(pres, i, M, J, bounds, bounds.extra_D, bounds.extra_N, 0);
    budget.check("envelope window");
    res.window_J = J;
    res.window_D = pr.env.D;
    res.ledger = pr.env.ledger;
    Cohomology main = compute_cell(pr.nf, i, j, M, budget);
    res.h0 = main.h0;
    res.h1 = main.h1;
    res.source_length = main.src;
    res.target_length = main.tgt;
    res.euler = main.src - main.tgt;
    if (bounds.check_j) {
        budget.check("j-stability");
        res.j_stable = compute_cell(pr.nf, i, j + 1, M, budget) == main;
    }
    if (bounds.check_precision) {
        budget.check("precision stability");
        Prepared fine = prepare(pres, i, M, J, bounds, bounds.extra_D + 2, bounds.extra_N + 1, 20);
        res.precision_stable = compute_cell(fine.nf, i, j, M, budget) == main;
    }
    res.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - budget.start).count();
    return res;
}

std::vector<SweepCell> sweep(const std::vector<QrspPresentation>& family, int i_min, int i_max, int M,
                             const SyntomicBounds& bounds, int jobs, const std::function<void(const SweepCell&)>& on_done) {
    std::vector<SweepCell> cells;
    for (std::size_t c = 0; c < family.size(); ++c)
        for (int i = i_min; i <= i_max; ++i) {
            SweepCell cell;
            cell.config = c;
            cell.i = i;
            cells.push_back(std::move(cell));
        }
    std::atomic<std::size_t> next{0};
    std::mutex done_mu;
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            SweepCell& cell = cells[k];
            try {
                cell.result = syntomic(family[cell.config], cell.i, M, bounds);
                cell.status = cell.result->stable() ? "ok" : "unstable";
            } catch (const std::exception& ex) {
                cell.status = "error";
                cell.error = ex.what();
            }
            if (on_done) {
                std::lock_guard<std::mutex> lk(done_mu);
                on_done(cell);
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return cells;
}

}  // namespace prism
