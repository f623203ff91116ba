#include "prism/rewrite.hpp"

#include "prism/delta.hpp"

namespace prism {

Vec SeriesCoeffs::mul(const Vec& a, const Vec& b) const {
    Vec r(size(), 0);
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; i + j < n; ++j)
            if (b[j]) r[i + j] = mod.add(r[i + j], mod.mul(a[i], b[j]));
    }
    return r;
}

Vec QuotCoeffs::reduce(const Vec& f) const {
    Vec r = f;
    const std::size_t e = static_cast<std::size_t>(n);
    for (std::size_t k = r.size(); k-- > e;) {
        u64 c = r[k];
        if (!c) continue;
        r[k] = 0;
        for (std::size_t j = 0; j < e; ++j)
            if (G[j]) r[k - e + j] = mod.sub(r[k - e + j], mod.mul(c, G[j]));
    }
    r.resize(e, 0);
    return r;
}

Vec QuotCoeffs::mul(const Vec& a, const Vec& b) const {
    const std::size_t e = size();
    Vec r(2 * e, 0);
    for (std::size_t i = 0; i < e; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < e; ++j)
            if (b[j]) r[i + j] = mod.add(r[i + j], mod.mul(a[i], b[j]));
    }
    return reduce(r);
}

std::vector<int> base_p_digits(std::size_t k, u64 p) {
    std::vector<int> d;
    while (k) {
        d.push_back(static_cast<int>(k % p));
        k /= p;
    }
    return d;
}

namespace {

template <class Ring>
Vec vadd(const Ring& R, const Vec& a, const Vec& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = R.mod.add(a[i], b[i]);
    return r;
}

std::size_t degree_of(const std::vector<int>& s, u64 p) {
    std::size_t d = 0, pw = 1;
    for (int x : s) {
        d += static_cast<std::size_t>(x) * pw;
        pw *= p;
    }
    return d;
}

}  // namespace

template <class Ring>
Poly Rewriter<Ring>::monomial(std::size_t k) const {
    if (k > static_cast<std::size_t>(Dmax_)) throw InternalConsistency("rewrite: monomial beyond the degree window");
    Poly r = zero();
    r[k] = R_.one();
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::constant(const Vec& c) const {
    Poly r = zero();
    if (!vzero(c)) r[0] = c;
    return r;
}

template <class Ring>
int Rewriter<Ring>::degree(const Poly& a) const {
    for (std::size_t k = a.size(); k-- > 0;)
        if (!a[k].empty() && !vzero(a[k])) return static_cast<int>(k);
    return -1;
}

template <class Ring>
Poly Rewriter<Ring>::add(const Poly& a, const Poly& b) const {
    Poly r = zero();
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = vadd(R_, a[k], b[k]);
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::sub(const Poly& a, const Poly& b) const {
    Poly r = a;
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (b[k].empty()) continue;
        if (r[k].empty()) r[k] = R_.zero();
        for (std::size_t i = 0; i < r[k].size(); ++i) r[k][i] = R_.mod.sub(r[k][i], b[k][i]);
    }
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::scale(const Poly& a, const Vec& c) const {
    Poly r = zero();
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a[k].empty()) r[k] = R_.mul(a[k], c);
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::scale_int(const Poly& a, u64 c) const {
    Poly r = zero();
    const u64 cc = c % R_.mod.q;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].empty()) continue;
        r[k] = a[k];
        for (auto& x : r[k]) x = R_.mod.mul(x, cc);
    }
    return r;
}

template <class Ring>
const Poly& Rewriter<Ring>::normal(const std::vector<int>& s) const {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    std::size_t t = 0;
    while (t < s.size() && s[t] < static_cast<int>(p_)) ++t;
    Poly res = zero();
    if (t == s.size()) {
        std::size_t k = degree_of(s, p_);
        if (k > static_cast<std::size_t>(Dmax_)) throw InternalConsistency("rewrite: product beyond the degree window");
        res[k] = R_.one();
    } else {
        if (t >= rules_.size()) throw InternalConsistency("rewrite: missing rule for x_" + std::to_string(t) + "^p");
        std::vector<int> base = s;
        base[t] -= static_cast<int>(p_);
        const Poly& rule = rules_[t];
        for (std::size_t k = 0; k < rule.size(); ++k) {
            if (rule[k].empty() || vzero(rule[k])) continue;
            std::vector<int> s2 = base;
            auto dk = base_p_digits(k, p_);
            if (dk.size() > s2.size()) s2.resize(dk.size(), 0);
            for (std::size_t i = 0; i < dk.size(); ++i) s2[i] += dk[i];
            const Poly& sub = normal(s2);
            for (std::size_t j = 0; j < sub.size(); ++j)
                if (!sub[j].empty()) res[j] = vadd(R_, res[j], R_.mul(rule[k], sub[j]));
        }
    }
    return memo_.emplace(s, std::move(res)).first->second;
}

template <class Ring>
const Poly& Rewriter<Ring>::mono_product(std::size_t i, std::size_t j) const {
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = prod_memo_.find(key);
    if (it != prod_memo_.end()) return *it->second;
    auto a = base_p_digits(i, p_), b = base_p_digits(j, p_);
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t t = 0; t < b.size(); ++t) a[t] += b[t];
    const Poly& r = normal(a);
    prod_memo_.emplace(key, &r);
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::mul(const Poly& a, const Poly& b) const {
    Poly r = zero();
    const std::size_t D = static_cast<std::size_t>(Dmax_);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty() || vzero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].empty()) continue;
            Vec c = R_.mul(a[i], b[j]);
            if (vzero(c)) continue;
            if (i + j > D) throw InternalConsistency("rewrite: product beyond the degree window");
            const Poly& n = mono_product(i, j);
            for (std::size_t k = 0; k < n.size(); ++k)
                if (!n[k].empty()) r[k] = vadd(R_, r[k], R_.mul(c, n[k]));
        }
    }
    return r;
}

template <class Ring>
Poly Rewriter<Ring>::pow(const Poly& a, u64 n) const {
    Poly r = constant(R_.one());
    Poly b = a;
    while (n) {
        if (n & 1) r = mul(r, b);
        n >>= 1;
        if (n) b = mul(b, b);
    }
    return r;
}

template class Rewriter<SeriesCoeffs>;
template class Rewriter<QuotCoeffs>;

namespace {

u64 binom(u64 n, u64 k) {
    u64 r = 1;
    for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Deriver {
    const Rewriter<SeriesCoeffs>& rw;
    Modulus mod;
    int Z;
    std::map<std::size_t, std::pair<Poly, bool>> dmono;

    TruncSeries ser(const Vec& v) const {
        TruncSeries s(mod, Z);
        if (!v.empty()) s.coeffs() = v;
        return s;
    }
    // delta of a coefficient, one p-digit lost at the top
    Vec delta_c(const Vec& c) const { return delta_eval(ser(c)).with_modulus(mod).coeffs(); }

    // sum_{i=1}^{p-1} C(p,i)/p a^i b^{p-i}
    Poly cross(const Poly& a, const Poly& b) const {
        const u64 p = mod.p;
        Poly r = rw.zero();
        for (u64 i = 1; i < p; ++i)
            r = rw.add(r, rw.scale_int(rw.mul(rw.pow(a, i), rw.pow(b, p - i)), binom(p, i) / p));
        return r;
    }

    const Poly& delta_mono(std::size_t k) {
        auto it = dmono.find(k);
        if (it != dmono.end()) return it->second.first;
        const u64 p = mod.p;
        auto dig = base_p_digits(k, p);
        Poly a = rw.constant(rw.ring().one()), da = rw.zero();
        std::size_t pw = 1;
        for (std::size_t j = 0; j < dig.size(); ++j, pw *= p) {
            for (int c = 0; c < dig[j]; ++c) {
                Poly xnext = rw.monomial(pw * p);
                const Poly& xp = rw.rules().at(j);
                Poly nd = rw.add(rw.mul(rw.pow(a, p), xnext), rw.mul(xp, da));
                nd = rw.add(nd, rw.scale_int(rw.mul(da, xnext), p));
                a = rw.mul(a, rw.monomial(pw));
                da = std::move(nd);
            }
        }
        return dmono.emplace(k, std::make_pair(std::move(da), true)).first->second.first;
    }

    Poly delta_poly(const Poly& g) {
        const u64 p = mod.p;
        Poly D = rw.zero(), S = rw.zero();
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (g[k].empty() || vzero(g[k])) continue;
            Poly T = rw.zero();
            T[k] = g[k];
            Vec gp = ser(g[k]).pow(p).coeffs();
            Vec dg = delta_c(g[k]);
            const Poly& dm = delta_mono(k);
            Poly mp = rw.pow(rw.monomial(k), p);
            Poly dT = rw.add(rw.scale(dm, gp), rw.scale(mp, dg));
            dT = rw.add(dT, rw.scale_int(rw.scale(dm, dg), p));
            D = rw.sub(rw.add(D, dT), cross(S, T));
            S = rw.add(S, T);
        }
        return D;
    }
};

}  // namespace

RuleSet derive_rules(const Eisenstein& E, const std::vector<i64>& r, int N, int Z, int Dmax) {
    const u64 p = E.p;
    RuleSet out;
    out.p = p;
    int T = 0;
    std::size_t pw = 1;
    while (pw * p <= static_cast<std::size_t>(std::max(Dmax, 1))) {
        pw *= p;
        ++T;
    }
    out.T = T;
    out.Z = Z;
    // each nested delta costs one digit
    Modulus mod(p, N + T + 1);
    out.mod = Modulus(p, N);
    SeriesCoeffs S{mod, Z};
    Rewriter<SeriesCoeffs> rw(S, p, static_cast<int>(pw));
    Deriver dv{rw, mod, Z, {}};

    if (T == 0) return out;
    TruncSeries d = E.series(mod, Z);
    TruncSeries rr = TruncSeries::from_coeffs(mod, Z, r);
    TruncSeries dd = delta_eval(d).with_modulus(mod);
    TruncSeries dr = delta_eval(rr).with_modulus(mod);
    if (!dd.is_unit()) throw InternalConsistency("derive_rules: delta(d) is not a unit");
    TruncSeries inv = dd.inverse();

    Poly R0 = rw.zero(), F0 = rw.zero();
    R0[0] = (dr * inv).coeffs();
    F0[0] = R0[0];
    R0[p] = (-(d.frobenius() * inv)).coeffs();
    F0[p] = (-(d.pow(p) * inv)).coeffs();
    rw.add_rule(R0);
    std::vector<Poly> frob{F0};

    std::size_t pt = p;
    for (int t = 1; t < T; ++t, pt *= p) {
        const Poly& F = frob.back();
        TruncSeries H = dv.ser(F[pt]);
        Poly G = F;
        G[pt].clear();
        Poly dG = dv.delta_poly(G);
        Poly Hx = rw.zero();
        Hx[pt] = H.coeffs();
        Poly cr = dv.cross(G, Hx);
        TruncSeries dH = dv.ser(dv.delta_c(H.coeffs()));
        TruncSeries unit = TruncSeries::constant(mod, Z, 1) - dH;
        if (!unit.is_unit()) throw InternalConsistency("derive_rules: 1 - delta(H) is not a unit");
        TruncSeries uinv = unit.inverse();
        Poly num = rw.sub(dG, cr);
        TruncSeries top = H.frobenius() - TruncSeries::constant(mod, Z, static_cast<i64>(p));
        num[pt * p] = vadd(S, num[pt * p], top.coeffs());
        Poly Rt = rw.scale(num, uinv.coeffs());
        Poly Ft = Rt;
        Ft[pt * p] = vadd(S, Ft[pt * p], TruncSeries::constant(mod, Z, static_cast<i64>(p)).coeffs());
        rw.add_rule(Rt);
        frob.push_back(Ft);
    }

    auto down = [&](const Poly& a) {
        Poly b(a.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!a[k].empty()) b[k] = dv.ser(a[k]).with_modulus(out.mod).coeffs();
        return b;
    };
    for (const auto& x : rw.rules()) out.rules.push_back(down(x));
    for (const auto& x : frob) out.frob.push_back(down(x));
    return out;
}

}  // namespace prism
