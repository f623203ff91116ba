#include "prism/filtration.hpp"

#include <algorithm>
#include <bit>

#include "prism/errors.hpp"

namespace prism {

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Vec unit_vec(std::size_t n, std::size_t a) {
    Vec v(n, 0);
    v[a] = 1;
    return v;
}

Vec lift_poly(const QuotCoeffs& T, const std::vector<i64>& c) {
    Vec v;
    for (i64 x : c) v.push_back(T.mod.reduce(x));
    return T.reduce(v);
}

Lattice ideal_span(const QuotCoeffs& T, const std::vector<Vec>& xs) {
    std::vector<Vec> g;
    for (const auto& x : xs)
        for (std::size_t b = 0; b < T.size(); ++b) g.push_back(T.mul(x, unit_vec(T.size(), b)));
    return Lattice::span(T.mod, T.size(), g);
}

// F^m T for the filtration with z of weight wz; T = (Z/p^N)[z]/(z^Z)
Lattice zpiece(const QuotCoeffs& T, int wz, int m) {
    std::vector<Vec> g;
    for (std::size_t a = 0; a < T.size(); ++a)
        if (static_cast<int>(a) * wz >= m) g.push_back(unit_vec(T.size(), a));
    return Lattice::span(T.mod, T.size(), g);
}

struct Leading {
    std::vector<std::vector<i64>> forms;
};

Leading leading_forms(const std::vector<std::vector<i64>>& xs, const std::vector<int>& weights, int wz) {
    Leading L;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        int low = -1;
        for (std::size_t a = 0; a < xs[j].size(); ++a)
            if (xs[j][a] != 0) {
                int w = static_cast<int>(a) * wz;
                if (low < 0 || w < low) low = w;
            }
        if (low != weights[j])
            throw MalformedInput("filtered_koszul: weight violation for element " + std::to_string(j) + " (declared " +
                                 std::to_string(weights[j]) + ", actual " + std::to_string(low) + ")");
        std::vector<i64> f(xs[j].size(), 0);
        for (std::size_t a = 0; a < xs[j].size(); ++a)
            if (static_cast<int>(a) * wz == low) f[a] = xs[j][a];
        L.forms.push_back(std::move(f));
    }
    return L;
}

bool decide_regular(const std::vector<long>& len, const std::vector<long>& expected, bool h0_stable, int t,
                    const std::vector<Vec>& xs) {
    const std::size_t c = xs.size();
    if (c == 0) return true;
    if (c == 1 && t >= 2) return !vzero(xs.front());
    if (!h0_stable) return false;
    for (std::size_t k = 1; k < len.size(); ++k)
        if (len[k] != expected[k]) return false;
    return true;
}

std::vector<Vec> lift_all(const QuotCoeffs& T, const std::vector<std::vector<i64>>& xs) {
    std::vector<Vec> v;
    for (const auto& x : xs) v.push_back(lift_poly(T, x));
    return v;
}

}  // namespace

std::vector<long> koszul_lengths(const QuotCoeffs& T, const std::vector<Vec>& xs) {
    const int c = static_cast<int>(xs.size());
    if (c > 16) throw CapabilityError("koszul: too many elements");
    const std::size_t n = T.size();
    std::vector<std::vector<unsigned>> masks(static_cast<std::size_t>(c) + 1);
    std::vector<std::size_t> index(1u << c);
    for (unsigned s = 0; s < (1u << c); ++s) {
        auto k = static_cast<std::size_t>(std::popcount(s));
        index[s] = masks[k].size();
        masks[k].push_back(s);
    }
    // rows of d_k : K_k -> K_{k-1}
    auto differential = [&](int k) {
        std::vector<Vec> rows;
        const std::size_t cols = masks[static_cast<std::size_t>(k) - 1].size() * n;
        for (unsigned S : masks[static_cast<std::size_t>(k)])
            for (std::size_t a = 0; a < n; ++a) {
                Vec row(cols, 0);
                int pos = 0;
                for (int j = 0; j < c; ++j) {
                    if (!(S >> j & 1u)) continue;
                    Vec img = T.mul(xs[static_cast<std::size_t>(j)], unit_vec(n, a));
                    std::size_t off = index[S & ~(1u << j)] * n;
                    for (std::size_t i = 0; i < n; ++i) {
                        u64 v = pos % 2 ? T.mod.neg(img[i]) : img[i];
                        row[off + i] = T.mod.add(row[off + i], v);
                    }
                    ++pos;
                }
                rows.push_back(std::move(row));
            }
        return ZModMatrix::from_rows(T.mod, cols, rows);
    };
    std::vector<long> ker(static_cast<std::size_t>(c) + 1), im(static_cast<std::size_t>(c) + 2, 0);
    ker[0] = static_cast<long>(n) * T.mod.M;
    for (int k = 1; k <= c; ++k) {
        ZModMatrix D = differential(k);
        ker[static_cast<std::size_t>(k)] = kernel(D).length();
        im[static_cast<std::size_t>(k)] = Lattice::span(D).length();
    }
    std::vector<long> h(static_cast<std::size_t>(c) + 1);
    for (int k = 0; k <= c; ++k) h[static_cast<std::size_t>(k)] = ker[static_cast<std::size_t>(k)] - im[static_cast<std::size_t>(k) + 1];
    return h;
}

QuotCoeffs KoszulWindow::ring() const {
    Modulus m(p, over_fp ? 1 : N);
    QuotCoeffs T;
    T.mod = m;
    if (base.empty()) {
        T.G.assign(static_cast<std::size_t>(Z) + 1, 0);
        T.G.back() = 1;
        T.n = Z;
    } else {
        for (i64 x : base) T.G.push_back(m.reduce(x));
        if (T.G.back() != 1) throw MalformedInput("koszul: base polynomial must be monic");
        T.n = static_cast<int>(base.size()) - 1;
    }
    return T;
}

KoszulWindow KoszulWindow::refined() const {
    KoszulWindow W = *this;
    if (!over_fp) W.N += 1;
    if (base.empty()) W.Z += 1;
    return W;
}

FilteredKoszulReport filtered_koszul(const KoszulWindow& W, const std::vector<std::vector<i64>>& xs,
                                     const std::vector<int>& weights, int wz) {
    if (weights.size() != xs.size()) throw MalformedInput("filtered_koszul: one weight per element");
    if (wz < 0) throw MalformedInput("filtered_koszul: negative weight");
    if (wz > 0 && !W.base.empty()) throw CapabilityError("filtered_koszul: weighted z needs the power-series window");
    FilteredKoszulReport R;
    const int t = W.params();
    const QuotCoeffs T = W.ring(), T2 = W.refined().ring();
    auto xv = lift_all(T, xs);

    R.lengths = koszul_lengths(T, xv);
    for (std::size_t k = 0; k < R.lengths.size(); ++k) R.expected.push_back(binom(t, static_cast<int>(k)) * R.lengths[0]);
    R.h0_stable = koszul_lengths(T2, lift_all(T2, xs))[0] == R.lengths[0];
    R.is_regular = decide_regular(R.lengths, R.expected, R.h0_stable, t, xv);

    Leading L = wz > 0 ? leading_forms(xs, weights, wz) : Leading{xs};
    if (wz == 0)
        for (int w : weights)
            if (w != 0) throw MalformedInput("filtered_koszul: weight violation under the trivial filtration");
    auto lv = lift_all(T, L.forms);
    R.graded_lengths = koszul_lengths(T, lv);
    for (std::size_t k = 0; k < R.graded_lengths.size(); ++k)
        R.graded_expected.push_back(binom(t, static_cast<int>(k)) * R.graded_lengths[0]);
    R.graded_h0_stable = koszul_lengths(T2, lift_all(T2, L.forms))[0] == R.graded_lengths[0];
    R.is_graded_regular = decide_regular(R.graded_lengths, R.graded_expected, R.graded_h0_stable, t, lv);

    if (wz == 0) {
        R.strict = true;
        R.quotient_graded = {R.lengths[0]};
        return R;
    }
    // gr of the induced filtration on T/I against gr T/(leading forms), on the range where
    // the former does not see the truncation
    Lattice I = ideal_span(T, xv), I2 = ideal_span(T2, lift_all(T2, xs));
    auto gr_quot = [&](const QuotCoeffs& R_, const Lattice& J, int m) {
        return lattice_join(zpiece(R_, wz, m), J).length() - lattice_join(zpiece(R_, wz, m + 1), J).length();
    };
    R.strict = true;
    const int mmax = (W.Z - 1) * wz;
    for (int m = 0; m <= mmax; ++m) {
        long lhs = gr_quot(T, I, m);
        if (lhs != gr_quot(T2, I2, m)) break;
        std::vector<Vec> hom, part;
        for (std::size_t a = 0; a < T.size(); ++a)
            if (static_cast<int>(a) * wz == m) hom.push_back(unit_vec(T.size(), a));
        for (std::size_t j = 0; j < lv.size(); ++j)
            for (std::size_t b = 0; b < T.size(); ++b)
                if (static_cast<int>(b) * wz + weights[j] == m) part.push_back(T.mul(lv[j], unit_vec(T.size(), b)));
        long rhs = Lattice::span(T.mod, T.size(), hom).length() - Lattice::span(T.mod, T.size(), part).length();
        R.quotient_graded.push_back(lhs);
        if (lhs != rhs) R.strict = false;
    }
    return R;
}

FilteredKoszulReport koszul_report(const KoszulWindow& W, const std::vector<std::vector<i64>>& xs) {
    return filtered_koszul(W, xs, std::vector<int>(xs.size(), 0), 0);
}

Lattice FilteredModule::piece(int m) const {
    if (m <= 0) return pieces.front();
    if (m > top()) return Lattice(pieces.front().modulus(), pieces.front().ambient_rank());
    return pieces[static_cast<std::size_t>(m)];
}

bool FilteredModule::decreasing() const {
    for (std::size_t m = 0; m + 1 < pieces.size(); ++m)
        if (!is_sublattice(pieces[m + 1], pieces[m])) return false;
    return true;
}

FilteredModule FilteredModule::from_generators(const Modulus& mod, std::size_t rank, const std::vector<Vec>& gens,
                                               const std::vector<int>& weights) {
    if (gens.size() != weights.size()) throw MalformedInput("filtered module: one weight per generator");
    int top = 0;
    for (int w : weights) top = std::max(top, w);
    FilteredModule F;
    for (int m = 0; m <= top; ++m) {
        std::vector<Vec> g;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (weights[i] >= m) g.push_back(gens[i]);
        F.pieces.push_back(Lattice::span(mod, rank, g));
    }
    return F;
}

FilteredModule scp(const FilteredModule& F, u64 p) {
    const Lattice& U = F.underlying();
    const Modulus& mod = U.modulus();
    FilteredModule out;
    for (int m = 0; m <= mod.M + F.top() + 1; ++m) {
        Lattice acc(mod, U.ambient_rank());
        for (int t = 0; t <= m; ++t) {
            long pt = static_cast<long>(p) * t;
            if (pt > F.top() || m - t >= mod.M) continue;
            acc = lattice_join(acc, F.piece(static_cast<int>(pt)).scaled(mod.ppow(m - t)));
        }
        if (acc.size() == 0) break;
        out.pieces.push_back(std::move(acc));
    }
    if (out.pieces.empty()) out.pieces.push_back(Lattice(mod, U.ambient_rank()));
    return out;
}

FilteredModule dadic_filtration(const Eisenstein& E, int N, int J) {
    Modulus mod(E.p, N);
    QuotCoeffs B{mod, eisenstein_power(E, mod, J), E.degree() * J};
    Vec d = B.reduce(lift_poly(B, E.coeffs));
    FilteredModule F;
    Vec dm = B.one();
    for (int m = 0; m < J; ++m) {
        std::vector<Vec> g;
        for (std::size_t a = 0; a < B.size(); ++a) g.push_back(B.mul(dm, unit_vec(B.size(), a)));
        F.pieces.push_back(Lattice::span(mod, B.size(), g));
        dm = B.mul(dm, d);
    }
    return F;
}

WeightedEnvelope filtered_envelope(const QrspPresentation& pres, int w, int wz, const EnvelopeBounds& bounds) {
    if (w < 0 || wz < 0) throw MalformedInput("filtered_envelope: negative weight");
    WeightedEnvelope out;
    out.wz = wz;
    if (!pres.zero_ring) {
        KoszulWindow W;
        W.p = pres.p();
        W.N = std::max(4, pres.s + 2);
        W.Z = std::max(12, pres.e() * W.N + 2);
        std::vector<std::vector<i64>> xs{pres.prism.E.coeffs};
        std::vector<int> ws{0};
        if (!pres.rel.empty()) {
            xs.push_back(pres.rel);
            ws.push_back(w);
        }
        auto rep = filtered_koszul(W, xs, ws, wz);
        if (!rep.filtered_regular()) throw PresentationError("filtered_envelope: (d, r) is not filtered Koszul-regular");
    }
    out.env = build_envelope(pres, bounds);
    const auto& env = out.env;
    if (!env.window) {
        out.filtration.pieces.push_back(env.lattice);
        return out;
    }
    const auto& Wd = *env.window;
    int top = 0;
    std::vector<Vec> gens;
    std::vector<int> weights;
    for (int k = 0; k <= env.D; ++k) {
        out.monomial_weight.push_back(k * w);
        for (int a = 0; a < Wd.n(); ++a) {
            gens.push_back(Wd.project(Wd.z_mono(a, k)));
            weights.push_back(a * wz + k * w);
            top = std::max(top, weights.back());
        }
    }
    for (int m = 0; m <= top; ++m) {
        std::vector<Vec> g;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (weights[i] >= m) g.push_back(gens[i]);
        out.filtration.pieces.push_back(Wd.quotient().span_projected(g));
    }
    return out;
}

}  // namespace prism
