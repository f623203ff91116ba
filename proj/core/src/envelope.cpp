#include "prism/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prism/filtration.hpp"

namespace prism {

namespace {

int max_precision(u64 p) {
    // largest L with p^L < 2^62
    int L = 0;
    u128 q = 1;
    while (q * p < (static_cast<u128>(1) << 62)) {
        q *= p;
        ++L;
    }
    return L;
}

Vec reduce_coeffs(const Modulus& m, const std::vector<i64>& c) {
    Vec v;
    for (i64 x : c) v.push_back(m.reduce(x));
    return v;
}

// f = q*g + rem for monic g
bool divide_exact(const Modulus& m, Vec f, const Vec& g, Vec& q) {
    const std::size_t e = g.size() - 1;
    q.assign(f.size() > e ? f.size() - e : 1, 0);
    for (std::size_t k = f.size(); k-- > e;) {
        u64 c = f[k];
        if (!c) continue;
        q[k - e] = c;
        for (std::size_t j = 0; j <= e; ++j) f[k - e + j] = m.sub(f[k - e + j], m.mul(c, g[j]));
    }
    for (std::size_t k = 0; k < std::min(e, f.size()); ++k)
        if (f[k]) return false;
    return true;
}

std::string digits_name(const std::vector<int>& ex) {
    std::string s;
    for (std::size_t t = 0; t < ex.size(); ++t) {
        if (!ex[t]) continue;
        if (!s.empty()) s += "*";
        s += "x" + std::to_string(t);
        if (ex[t] > 1) s += "^" + std::to_string(ex[t]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace

std::string QrspPresentation::describe() const {
    std::ostringstream o;
    o << "E = " << prism.E.to_string();
    if (zero_ring) o << ", R = 0";
    else if (rel.empty()) o << ", R = A/d";
    else o << ", length(R) = " << length << ", s = " << s;
    return o.str();
}

QrspPresentation make_presentation(const OrientedPrism& prism, const std::vector<std::vector<i64>>& relations) {
    QrspPresentation P;
    P.prism = prism;
    P.relations = relations;
    const u64 p = prism.p();
    const int e = prism.e();
    const int L = max_precision(p);
    Modulus mL(p, L);
    QuotCoeffs Abar{mL, reduce_coeffs(mL, prism.E.coeffs), e};

    std::vector<std::vector<i64>> nontrivial;
    std::vector<Vec> bars;
    for (const auto& r : relations) {
        if (r.empty()) continue;
        Vec rbar = Abar.reduce(reduce_coeffs(mL, r));
        if (vzero(rbar)) {
            // exact test over Z: E | r
            Vec q;
            std::vector<i64> rr = r;
            bool divisible = true;
            {
                std::vector<__int128> f(rr.begin(), rr.end());
                for (std::size_t k = f.size(); k-- > static_cast<std::size_t>(e);) {
                    __int128 c = f[k];
                    for (int j = 0; j <= e; ++j) f[k - static_cast<std::size_t>(e) + static_cast<std::size_t>(j)] -= c * prism.E.coeffs[static_cast<std::size_t>(j)];
                }
                for (int k = 0; k < std::min<int>(e, static_cast<int>(f.size())); ++k) divisible = divisible && f[static_cast<std::size_t>(k)] == 0;
            }
            if (!divisible) throw CapabilityError("presentation: relation agrees with a multiple of d beyond the supported p-precision");
            continue;  // r in dA: r/d already lies in A
        }
        if (rbar[0] % p != 0) {
            P.zero_ring = true;
            continue;
        }
        nontrivial.push_back(r);
        bars.push_back(rbar);
    }
    if (P.zero_ring) return P;
    if (nontrivial.size() >= 2) {
        KoszulWindow W;
        W.p = p;
        W.N = L - 1;
        W.base = prism.E.coeffs;
        FilteredKoszulReport rep = koszul_report(W, nontrivial);
        std::ostringstream o;
        o << "presentation: relations are not Koszul-regular in A/d (H_1 length " << rep.lengths.at(1)
          << ", expected " << rep.expected.at(1) << ")";
        if (!rep.regular()) throw PresentationError(o.str());
        // regular sequences of non-units in a discrete valuation ring have length at most one
        throw PresentationError("presentation: at most one non-unit relation is supported");
    }
    if (nontrivial.empty()) return P;
    P.rel = nontrivial.front();
    std::vector<Vec> rows;
    for (int b = 0; b < e; ++b) {
        Vec zb(static_cast<std::size_t>(b) + 1, 0);
        zb[static_cast<std::size_t>(b)] = 1;
        rows.push_back(Abar.mul(bars.front(), Abar.reduce(zb)));
    }
    long span = Lattice::span(mL, static_cast<std::size_t>(e), rows).length();
    long len = static_cast<long>(e) * L - span;
    if (span <= 0 || len >= static_cast<long>(e) * L)
        throw CapabilityError("presentation: relation too divisible by p for the supported precision");
    P.length = static_cast<int>(len);
    P.s = static_cast<int>((len + e - 1) / e);
    return P;
}

QuotientSpace::QuotientSpace(const Modulus& m, std::size_t n, const std::vector<Vec>& rel_rows) : mod_(m), n_(n) {
    ZModMatrix H = howell_form(ZModMatrix::from_rows(m, n, rel_rows));
    std::vector<char> unit_col(n, 0);
    std::vector<std::size_t> unit_rows, other_rows;
    std::vector<std::size_t> piv(H.rows());
    for (std::size_t i = 0; i < H.rows(); ++i) {
        std::size_t c = 0;
        while (H.at(i, c) == 0) ++c;
        piv[i] = c;
        if (H.at(i, c) == 1) {
            unit_col[c] = 1;
            unit_rows.push_back(i);
        } else {
            other_rows.push_back(i);
        }
    }
    where_.assign(n, -1);
    for (std::size_t c = 0; c < n; ++c)
        if (!unit_col[c]) {
            where_[c] = static_cast<long>(cols_.size());
            cols_.push_back(c);
        }
    for (std::size_t i : unit_rows) {
        UnitRow u;
        u.pivot = piv[i];
        for (std::size_t c = piv[i] + 1; c < n; ++c) {
            u64 a = H.at(i, c);
            if (!a) continue;
            if (where_[c] < 0) throw InternalConsistency("quotient: Howell rows not reduced above unit pivots");
            u.tail.emplace_back(static_cast<std::size_t>(where_[c]), a);
        }
        units_.push_back(std::move(u));
    }
    std::vector<Vec> rest;
    for (std::size_t i : other_rows) {
        Vec w(cols_.size());
        for (std::size_t j = 0; j < cols_.size(); ++j) w[j] = H.at(i, cols_[j]);
        rest.push_back(std::move(w));
    }
    rel_ = Lattice::span(m, cols_.size(), rest);
}

Vec QuotientSpace::project(const Vec& v) const {
    if (v.size() != n_) throw MalformedInput("quotient: vector length mismatch");
    Vec w(cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j) w[j] = v[cols_[j]];
    for (const auto& u : units_) {
        u64 c = v[u.pivot];
        if (!c) continue;
        for (const auto& [j, a] : u.tail) w[j] = mod_.sub(w[j], mod_.mul(c, a));
    }
    return w;
}

Vec QuotientSpace::lift(const Vec& w) const {
    Vec v(n_, 0);
    for (std::size_t j = 0; j < cols_.size(); ++j) v[cols_[j]] = w[j];
    return v;
}

Lattice QuotientSpace::span(const std::vector<Vec>& ambient_vectors) const {
    std::vector<Vec> g;
    g.reserve(ambient_vectors.size());
    for (const auto& v : ambient_vectors) g.push_back(project(v));
    return span_projected(g);
}

Lattice QuotientSpace::span_projected(const std::vector<Vec>& projected) const {
    std::vector<Vec> g = projected;
    for (std::size_t i = 0; i < rel_.size(); ++i) g.push_back(rel_.generators().row_vec(i));
    return Lattice::span(mod_, dim(), g);
}

DeltaWindow::DeltaWindow(const QrspPresentation& pres, int J, int N, int D2, int Zc)
    : pres_(pres), mod_(pres.p(), N), J_(J), D2_(pres.trivial() ? 0 : D2), Zc_(Zc) {
    if (pres.zero_ring) throw MalformedInput("window: R = 0 has no envelope window");
    if (J < 1) throw MalformedInput("window: depth J must be positive");
    const u64 p = pres.p();
    const int e = pres.e();
    Vec Ev = reduce_coeffs(mod_, pres.prism.E.coeffs);
    B_ = QuotCoeffs{mod_, eisenstein_power(pres.prism.E, mod_, J), e * J};
    Abar_ = QuotCoeffs{mod_, Ev, e};
    d_ = B_.reduce(Ev);
    r_ = pres.rel.empty() ? B_.zero() : B_.reduce(reduce_coeffs(mod_, pres.rel));
    if (!pres.rel.empty()) {
        Vec rb = Abar_.reduce(reduce_coeffs(mod_, pres.rel));
        for (int b = 0; b < e; ++b) {
            Vec zb(static_cast<std::size_t>(b) + 1, 0);
            zb[static_cast<std::size_t>(b)] = 1;
            rbar_rows_.push_back(Abar_.mul(rb, Abar_.reduce(zb)));
        }
    }
    rw_ = std::make_shared<Rewriter<QuotCoeffs>>(B_, p, D2_);
    if (!pres.rel.empty() && static_cast<u64>(D2_) >= p) {
        if (Zc < envelope_zprec(pres, N, J))
            throw PrecisionExhausted("window: z-precision " + std::to_string(Zc) + " below the required " +
                                     std::to_string(envelope_zprec(pres, N, J)));
        RuleSet rs = derive_rules(pres.prism.E, pres.rel, N, Zc, D2_);
        auto conv = [&](const Poly& a) {
            Poly b = rw_->zero();
            for (std::size_t k = 0; k < a.size(); ++k)
                if (!a[k].empty()) b[k] = B_.reduce(a[k]);
            return b;
        };
        for (const auto& x : rs.rules) rw_->add_rule(conv(x));
        for (const auto& x : rs.frob) frob_.push_back(conv(x));
    }
    std::vector<Vec> rows;
    if (!pres.rel.empty()) {
        for (int k = 0; k < D2_; ++k) {
            Poly base = rw_->sub(rw_->scale(rw_->mono_product(1, static_cast<std::size_t>(k)), d_),
                                 rw_->scale(rw_->monomial(static_cast<std::size_t>(k)), r_));
            for (int a = 0; a < B_.n; ++a) {
                Vec za = B_.zero();
                za[static_cast<std::size_t>(a)] = 1;
                rows.push_back(to_vec(rw_->scale(base, za)));
            }
        }
    }
    Q_ = std::make_shared<QuotientSpace>(mod_, dim(), rows);
}

std::size_t DeltaWindow::col(int k, int a) const {
    return static_cast<std::size_t>(D2_ - k) * static_cast<std::size_t>(B_.n) + static_cast<std::size_t>(B_.n - 1 - a);
}

Vec DeltaWindow::to_vec(const Poly& a) const {
    Vec v(dim(), 0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].empty()) continue;
        if (static_cast<int>(k) > D2_) throw InternalConsistency("window: element beyond the degree window");
        for (int i = 0; i < B_.n; ++i) v[col(static_cast<int>(k), i)] = a[k][static_cast<std::size_t>(i)];
    }
    return v;
}

Poly DeltaWindow::to_poly(const Vec& v) const {
    Poly a = rw_->zero();
    for (int k = 0; k <= D2_; ++k) {
        Vec c(static_cast<std::size_t>(B_.n));
        for (int i = 0; i < B_.n; ++i) c[static_cast<std::size_t>(i)] = v[col(k, i)];
        if (!vzero(c)) a[static_cast<std::size_t>(k)] = std::move(c);
    }
    return a;
}

Poly DeltaWindow::z_mono(int a, int k) const {
    Poly r = rw_->zero();
    Vec c = B_.zero();
    c[static_cast<std::size_t>(a)] = 1;
    r[static_cast<std::size_t>(k)] = c;
    return r;
}

const Poly& DeltaWindow::phi_mono(std::size_t k) const {
    auto it = phi_memo_.find(k);
    if (it != phi_memo_.end()) return it->second;
    Poly r;
    if (k == 0) {
        r = rw_->constant(B_.one());
    } else {
        const u64 p = pres_.p();
        std::size_t j = 0, pw = 1;
        while ((k / pw) % p == 0) {
            pw *= p;
            ++j;
        }
        if (j >= frob_.size()) throw InternalConsistency("window: Frobenius of x_" + std::to_string(j) + " beyond the window");
        r = rw_->mul(phi_mono(k - pw), frob_[j]);
    }
    return phi_memo_.emplace(k, std::move(r)).first->second;
}

Vec DeltaWindow::phi_coeff(const Vec& c, int prec) const {
    prec = std::clamp(prec, 0, J_);
    if (prec == 0) return B_.zero();
    QuotCoeffs Bp{mod_, eisenstein_power(pres_.prism.E, mod_, prec), pres_.e() * prec};
    Vec low = Bp.reduce(c);
    const u64 p = pres_.p();
    Vec up(low.size() * p, 0);
    for (std::size_t i = 0; i < low.size(); ++i) up[i * p] = low[i];
    return B_.reduce(up);
}

Poly DeltaWindow::phi(const Poly& a, int prec) const {
    Poly r = rw_->zero();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].empty() || vzero(a[k])) continue;
        Vec c = phi_coeff(a[k], prec);
        if (vzero(c)) continue;
        r = rw_->add(r, rw_->scale(phi_mono(k), c));
    }
    return r;
}

Poly DeltaWindow::delta_mono(std::size_t k) const {
    const u64 p = pres_.p();
    auto dig = base_p_digits(k, p);
    Poly a = rw_->constant(B_.one()), da = rw_->zero();
    std::size_t pw = 1;
    for (std::size_t j = 0; j < dig.size(); ++j, pw *= p) {
        for (int c = 0; c < dig[j]; ++c) {
            Poly x = rw_->monomial(pw), xnext = rw_->monomial(pw * p);
            Poly nd = rw_->add(rw_->mul(rw_->pow(a, p), xnext), rw_->mul(rw_->pow(x, p), da));
            nd = rw_->add(nd, rw_->scale_int(rw_->mul(da, xnext), p));
            a = rw_->mul(a, x);
            da = std::move(nd);
        }
    }
    return da;
}

bool DeltaWindow::divide_by_d(const Poly& v, Poly& y) const {
    y = rw_->zero();
    const int e = pres_.e();
    Vec Ev = reduce_coeffs(mod_, pres_.prism.E.coeffs);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].empty() || vzero(v[k])) continue;
        Vec cbar = Abar_.reduce(v[k]);
        Vec beta = B_.zero();
        if (!vzero(cbar)) {
            if (rbar_rows_.empty()) return false;
            Vec coef;
            if (!solve_combination(rbar_rows_, static_cast<std::size_t>(e), mod_, cbar, coef)) return false;
            for (int b = 0; b < e; ++b) beta[static_cast<std::size_t>(b)] = coef[static_cast<std::size_t>(b)];
        }
        Vec w = v[k];
        if (!vzero(beta)) {
            Vec rb = B_.mul(r_, beta);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = mod_.sub(w[i], rb[i]);
        }
        Vec q;
        if (!divide_exact(mod_, w, Ev, q)) throw InternalConsistency("window: remainder after removing the relation part");
        q.resize(static_cast<std::size_t>(B_.n), 0);
        y[k] = y[k].empty() ? q : rw_->add(rw_->constant(y[k]), rw_->constant(q))[0];
        if (!vzero(beta)) {
            if (static_cast<int>(k) + 1 > D2_) throw InternalConsistency("window: division left the degree window");
            y = rw_->add(y, rw_->scale(rw_->mono_product(1, k), beta));
        }
    }
    return true;
}

std::string DeltaWindow::monomial_name(std::size_t k) const { return digits_name(base_p_digits(k, pres_.p())); }

const Lattice& DeltaWindow::dpower(int j) const {
    auto it = dpow_memo_.find(j);
    if (it != dpow_memo_.end()) return it->second;
    std::vector<Vec> g;
    if (j < J_) {
        Vec dj = B_.one();
        for (int t = 0; t < j; ++t) dj = B_.mul(dj, d_);
        const int amax = pres_.e() * (J_ - j);
        for (int k = 0; k <= D2_; ++k)
            for (int a = 0; a < amax; ++a) {
                Vec za = B_.zero();
                za[static_cast<std::size_t>(a)] = 1;
                Poly m = rw_->zero();
                m[static_cast<std::size_t>(k)] = B_.mul(dj, za);
                g.push_back(project(m));
            }
    }
    return dpow_memo_.emplace(j, Q_->span_projected(g)).first->second;
}

std::vector<Vec> EnvelopeLattice::generators() const {
    std::vector<Vec> g;
    if (!window) return g;
    for (int k = 0; k <= D; ++k)
        for (int a = 0; a < window->n(); ++a) g.push_back(window->project(window->z_mono(a, k)));
    return g;
}

long EnvelopeLattice::length() const {
    if (!window) return 0;
    return lattice.length() - window->quotient().relations().length();
}

int envelope_precision(const QrspPresentation& pres, int M, int J) {
    if (pres.rel.empty()) return M;
    return std::max(M, pres.s * J);
}

int envelope_zprec(const QrspPresentation& pres, int N, int J) { return pres.e() * (J + N) + 1; }

namespace {

// span of d^j z^a m_k, k <= kmax
Lattice dpower_span(const DeltaWindow& W, int j, int kmax) {
    if (j >= W.J()) return W.quotient().span_projected({});
    const auto& B = W.coeffs();
    Vec dj = B.one();
    for (int t = 0; t < j; ++t) dj = B.mul(dj, W.d());
    std::vector<Vec> g;
    const int amax = W.presentation().e() * (W.J() - j);
    kmax = std::min(kmax, W.D2());
    for (int k = 0; k <= kmax; ++k)
        for (int a = 0; a < amax; ++a) {
            Vec za = B.zero();
            za[static_cast<std::size_t>(a)] = 1;
            Poly m = W.rw().zero();
            m[static_cast<std::size_t>(k)] = B.mul(dj, za);
            g.push_back(W.project(m));
        }
    return W.quotient().span_projected(g);
}

std::vector<Vec> lattice_rows(const Lattice& L) {
    std::vector<Vec> r;
    for (std::size_t i = 0; i < L.size(); ++i) r.push_back(L.generators().row_vec(i));
    return r;
}

Lattice window_syzygies_upto(const EnvelopeLattice& env, int Dr) {
    const auto& W = *env.window;
    std::vector<Vec> f;
    for (int k = 0; k <= Dr; ++k)
        for (int a = 0; a < W.n(); ++a) f.push_back(W.project(W.z_mono(a, k)));
    std::vector<Vec> g;
    for (std::size_t t = 0; t < f.size(); ++t) {
        Vec e(f.size(), 0);
        e[t] = 1;
        g.push_back(std::move(e));
    }
    return preimage(g, f.size(), f, W.quotient().relations());
}

// least t with window[p] inside p^{N-1} + d^{J-t}
int p_torsion_depth(const EnvelopeLattice& env) {
    const auto& W = *env.window;
    const auto& Q = W.quotient();
    auto gens = lattice_rows(env.lattice);
    std::vector<Vec> fp;
    for (const auto& g : gens) {
        Vec h = g;
        for (auto& x : h) x = W.modulus().mul(x, env.presentation.p());
        fp.push_back(std::move(h));
    }
    Lattice kp = preimage(gens, Q.dim(), fp, Q.relations());
    const Lattice top = Lattice::full(W.modulus(), Q.dim()).scaled(W.modulus().ppow(W.N() - 1));
    for (int t = 0; t <= W.J(); ++t)
        if (is_sublattice(kp, lattice_join(top, dpower_span(W, W.J() - t, env.D + W.J())))) return t;
    return -1;
}

void certify(EnvelopeLattice& env) {
    auto& cert = env.certificate;
    const auto& W = *env.window;
    const auto& rw = W.rw();
    const u64 p = env.presentation.p();
    const int D = env.D;
    for (int a = 0; a <= D; ++a)
        for (int b = a; a + b <= D; ++b)
            if (!env.lattice.contains(W.project(rw.mono_product(static_cast<std::size_t>(a), static_cast<std::size_t>(b)))))
                cert.closure_defects.push_back("product m_" + std::to_string(a) + "*m_" + std::to_string(b));
    for (int k = 1; static_cast<u64>(k) * p <= static_cast<u64>(D); ++k)
        if (!env.lattice.contains(W.project(W.delta_mono(static_cast<std::size_t>(k)))))
            cert.closure_defects.push_back("delta(m_" + std::to_string(k) + ")");

    auto gens = lattice_rows(env.lattice);
    const auto& Q = W.quotient();
    // multiplication by d
    std::vector<Vec> fd;
    for (const auto& g : gens) fd.push_back(W.project(W.mul_scalar(W.lift(g), W.d())));
    Lattice kd = preimage(gens, Q.dim(), fd, Q.relations());
    cert.d_torsion_free = is_sublattice(kd, dpower_span(W, W.J() - 1, D + W.J() - 1));

    cert.p_torsion_depth = p_torsion_depth(env);
}

}  // namespace

Lattice window_syzygies(const EnvelopeLattice& env) {
    if (!env.window) return Lattice();
    return window_syzygies_upto(env, env.D);
}

EnvelopeLattice build_envelope(const QrspPresentation& pres, const EnvelopeBounds& bounds, bool certify_result) {
    EnvelopeLattice env;
    env.presentation = pres;
    env.bounds = bounds;
    const u64 p = pres.p();
    const int M = pres.prism.presentation.M;
    if (bounds.K < 0 || bounds.D < 0 || bounds.Z < 1) throw MalformedInput("envelope: bounds must be non-negative");
    if (pres.zero_ring) {
        env.lattice = Lattice(Modulus(p, M), 0);
        env.ledger = {M, bounds.Z};
        env.certificate.d_torsion_free = env.certificate.p_torsion_free = env.certificate.stable = true;
        env.certificate.p_torsion_depth = 0;
        return env;
    }
    env.J = bounds.J > 0 ? bounds.J : std::max(1, bounds.D);
    const int N = bounds.N > 0 ? bounds.N : envelope_precision(pres, M, env.J);
    if (pres.trivial()) {
        env.D = 0;
    } else {
        u64 cap = 1;
        for (int t = 0; t <= bounds.K; ++t) cap *= p;
        env.D = static_cast<int>(std::min<u64>(static_cast<u64>(bounds.D), cap - 1));
    }
    const int Zc = std::max(bounds.Z, envelope_zprec(pres, N, env.J));
    const int D2 = pres.trivial() ? 0 : env.D + env.J + 1;
    env.window = std::make_shared<DeltaWindow>(pres, env.J, N, D2, Zc);
    env.ledger = {N, Zc};
    env.lattice = env.window->quotient().span_projected(env.generators());
    for (int k = 0; k <= env.D; ++k) {
        MonomialInfo mi;
        mi.degree = static_cast<std::size_t>(k);
        mi.exponents = base_p_digits(static_cast<std::size_t>(k), p);
        mi.name = env.window->monomial_name(static_cast<std::size_t>(k));
        env.provenance.push_back(std::move(mi));
    }
    if (!certify_result) return env;
    certify(env);
    EnvelopeBounds finer = bounds;
    finer.K += 1;
    finer.D += 2;
    finer.Z += 20;
    finer.J = env.J;
    finer.N = N;
    EnvelopeLattice big = build_envelope(pres, finer, false);
    env.certificate.stable = window_syzygies_upto(big, env.D) == window_syzygies(env);
    // p-torsion-freeness of the limit: the depth grows strictly slower than J
    EnvelopeBounds deeper = bounds;
    deeper.J = env.J + 2;
    deeper.N = 0;
    const int t0 = env.certificate.p_torsion_depth;
    const int t1 = p_torsion_depth(build_envelope(pres, deeper, false));
    env.certificate.p_torsion_free = t0 >= 0 && t0 < env.J && t1 >= 0 && t1 < deeper.J && t1 - t0 < 2;
    return env;
}

std::vector<Lattice> hodge_tate_filtration(const EnvelopeLattice& env, int jmax) {
    std::vector<Lattice> out;
    if (!env.window) {
        for (int j = 0; j <= jmax; ++j) out.push_back(env.lattice);
        return out;
    }
    for (int j = 0; j <= jmax; ++j) {
        if (j == 0) out.push_back(env.lattice);
        else out.push_back(lattice_meet(env.lattice, dpower_span(*env.window, j, env.D + j)));
    }
    return out;
}

LocalElement delta_local(const LocalElement& f) {
    const Eisenstein& E = f.eisenstein();
    if (f.pole() == 0) return LocalElement(E, delta_eval(f.numerator()));
    LocalElement inv = invert_phi_d(E, f.ledger());
    LocalElement phi_f = LocalElement(E, f.numerator().frobenius()) * inv.pow(static_cast<u64>(f.pole()));
    LocalElement diff = phi_f - f.pow(E.p);
    return LocalElement(E, diff.numerator().divided_by_p(), diff.pole());
}

}  // namespace prism
