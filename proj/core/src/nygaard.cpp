#include "prism/nygaard.hpp"

#include <algorithm>
#include <map>

#include "prism/errors.hpp"

namespace prism {

namespace {

// d^j z^a m_k for k <= kmax, a < e(J-j), projected; row index k*amax + a
std::vector<Vec> dpower_rows(const DeltaWindow& W, int j, int kmax) {
    std::vector<Vec> g;
    if (j >= W.J()) return g;
    const auto& B = W.coeffs();
    Vec dj = B.one();
    for (int t = 0; t < j; ++t) dj = B.mul(dj, W.d());
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
    return g;
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

// d^j-spans of degree <= kmax, built on demand
struct DepthChain {
    const DeltaWindow& W;
    int kmax;
    std::map<int, Lattice> memo;

    const Lattice& at(int j) {
        auto it = memo.find(j);
        if (it == memo.end()) it = memo.emplace(j, W.quotient().span_projected(dpower_rows(W, j, kmax))).first;
        return it->second;
    }
    // largest j <= J with v in d^j
    int depth(const Vec& v) {
        int j = 0;
        while (j < W.J() && at(j + 1).contains(v)) ++j;
        return j;
    }
};

int pick_depth_bound(const DeltaWindow& W) { return W.D2() - W.J(); }

// rows d^i z^a m_k (k <= kmax) followed by the relations
std::vector<Vec> division_rows(const DeltaWindow& W, int i, int kmax) {
    auto rows = dpower_rows(W, i, kmax);
    const auto& rel = W.quotient().relations();
    for (std::size_t t = 0; t < rel.size(); ++t) rows.push_back(rel.generators().row_vec(t));
    return rows;
}

// y with d^i y = f, from a projected f
Poly divide_projected(const DeltaWindow& W, const CombinationSolver& S, const Vec& f, int i, int kmax) {
    Vec c;
    if (!S.solve(f, c)) throw ContainmentError("divided Frobenius: element not in N^{>=" + std::to_string(i) + "}");
    Poly y = W.rw().zero();
    const std::size_t amax = static_cast<std::size_t>(W.presentation().e() * (W.J() - i));
    const std::size_t nr = i < W.J() ? amax * static_cast<std::size_t>(std::min(kmax, W.D2()) + 1) : 0;
    for (std::size_t b = 0; b < nr; ++b) {
        if (!c[b]) continue;
        const std::size_t k = b / amax, a = b % amax;
        if (y[k].empty()) y[k] = W.coeffs().zero();
        y[k][a] = W.modulus().add(y[k][a], c[b]);
    }
    return y;
}

}  // namespace

Poly FrobTwistLattice::combine(const Vec& coeffs) const {
    const auto& W = *window;
    const std::size_t nn = static_cast<std::size_t>(W.n());
    Poly r = W.rw().zero();
    for (int k = 0; k <= Dt; ++k) {
        Vec c(coeffs.begin() + static_cast<long>(static_cast<std::size_t>(k) * nn),
              coeffs.begin() + static_cast<long>(static_cast<std::size_t>(k + 1) * nn));
        if (vzero(c)) continue;
        r = W.rw().add(r, W.mul_scalar(W.phi_mono(static_cast<std::size_t>(k)), c));
    }
    return r;
}

EnvelopeBounds nygaard_bounds(const QrspPresentation& pres, int J, int imax) {
    EnvelopeBounds b;
    b.J = J;
    const int p = static_cast<int>(pres.p());
    const int Dt = (J - 1) / p + 1;
    b.D = std::max(1, p * (p * Dt + imax));
    b.K = 0;
    long cap = p;
    while (cap - 1 < b.D) {
        cap *= p;
        ++b.K;
    }
    return b;
}

FrobTwistLattice build_frobenius_twist(const EnvelopeLattice& env, int imax) {
    if (!env.window) throw MalformedInput("twist: R = 0 has no envelope window");
    if (imax < 0) throw MalformedInput("twist: imax must be non-negative");
    FrobTwistLattice tw;
    tw.window = env.window;
    tw.imax = imax;
    const auto& W = *env.window;
    const u64 p = W.presentation().p();
    const int J = W.J();
    DepthChain chain{W, std::max(pick_depth_bound(W), 0), {}};

    if (W.presentation().trivial()) {
        tw.Dt = 0;
        tw.saturated = true;
    } else {
        const int kscan = pick_depth_bound(W) / static_cast<int>(p);
        if (kscan < 1) throw PrecisionExhausted("twist: degree window too small for phi(x_0)");
        // d-adic depth of phi(x_t); products add depth
        std::vector<int> xdepth;
        for (u64 pw = 1; static_cast<int>(pw) <= kscan; pw *= p)
            xdepth.push_back(chain.depth(W.project(W.phi_mono(pw))));
        auto lower = [&](int k) {
            auto dig = base_p_digits(static_cast<std::size_t>(k), p);
            int s = 0;
            for (std::size_t t = 0; t < dig.size(); ++t) s += dig[t] * xdepth[t];
            return s;
        };
        int Dt = 0;
        for (int k = 1; k <= kscan; ++k)
            if (lower(k) < J) Dt = k;
        if (kscan < static_cast<int>(p) * Dt + imax)
            throw PrecisionExhausted("twist: degree window " + std::to_string(W.D2()) + " cannot certify phi(m_k) in d^J for k <= " +
                                     std::to_string(static_cast<int>(p) * Dt + imax));
        tw.Dt = Dt;
        tw.saturated = true;
    }

    const u64 pu = p;
    for (int k = 0; k <= tw.Dt; ++k) {
        const Poly& f = W.phi_mono(static_cast<std::size_t>(k));
        for (int a = 0; a < W.n(); ++a) {
            Vec za = W.coeffs().zero();
            za[static_cast<std::size_t>(a)] = 1;
            Poly g = W.mul_scalar(f, za);
            tw.images.push_back(W.project(g));
            tw.gens.push_back(std::move(g));
        }
        tw.depth.push_back(chain.depth(W.project(f)));
        MonomialInfo mi;
        mi.degree = static_cast<std::size_t>(k) * pu;
        mi.exponents = base_p_digits(static_cast<std::size_t>(k), p);
        mi.name = "phi(" + W.monomial_name(static_cast<std::size_t>(k)) + ")";
        tw.provenance.push_back(std::move(mi));
    }
    tw.lattice = W.quotient().span_projected(tw.images);
    tw.syzygies = preimage(identity_rows(tw.images.size()), tw.images.size(), tw.images, W.quotient().relations());
    std::vector<Vec> low;
    const int kmax = std::min(W.D2(), static_cast<int>(p) * tw.Dt);
    for (int k = 0; k <= kmax; ++k)
        for (int a = 0; a < W.n(); ++a) low.push_back(W.project(W.z_mono(a, k)));
    tw.contained = is_sublattice(tw.lattice, W.quotient().span_projected(low));
    return tw;
}

const Lattice& NygaardFiltration::at(int j) const {
    if (j < 0) return pieces.front();
    if (j > jmax()) throw PrecisionExhausted("nygaard: piece " + std::to_string(j) + " beyond jmax");
    return pieces[static_cast<std::size_t>(j)];
}

const Lattice& NygaardFiltration::coeffs_at(int j) const {
    if (j < 0) return coeff_pieces.front();
    if (j > jmax()) throw PrecisionExhausted("nygaard: piece " + std::to_string(j) + " beyond jmax");
    return coeff_pieces[static_cast<std::size_t>(j)];
}

namespace {
int division_degree(const FrobTwistLattice& tw, int j) {
    return static_cast<int>(tw.window->presentation().p()) * tw.Dt + std::min(j, tw.imax);
}
}  // namespace

NygaardFiltration nygaard_filtration(const FrobTwistLattice& twist, int jmax) {
    if (jmax < 0) throw MalformedInput("nygaard: jmax must be non-negative");
    NygaardFiltration nf;
    nf.twist = twist;
    const auto& W = *twist.window;
    const auto ids = identity_rows(twist.images.size());
    for (int j = 0; j <= jmax; ++j) {
        Lattice Dj = W.quotient().span_projected(dpower_rows(W, j, division_degree(twist, j)));
        nf.pieces.push_back(lattice_meet(twist.lattice, Dj));
        nf.coeff_pieces.push_back(preimage(ids, ids.size(), twist.images, Dj));
    }
    for (int i = 0; i <= twist.imax; ++i)
        nf.division.push_back(std::make_shared<const CombinationSolver>(division_rows(W, i, division_degree(twist, i)),
                                                                        W.quotient().dim(), W.modulus()));
    return nf;
}

Vec divided_frobenius_coeffs(const NygaardFiltration& nf, const Vec& c, int i) {
    const auto& tw = nf.twist;
    const auto& W = *tw.window;
    if (i < 0) throw MalformedInput("divided Frobenius: negative weight");
    if (i > tw.imax) throw PrecisionExhausted("divided Frobenius: weight beyond the twist window");
    Vec f = W.quotient().dim() ? Vec(W.quotient().dim(), 0) : Vec{};
    for (std::size_t t = 0; t < c.size(); ++t)
        if (c[t])
            for (std::size_t s = 0; s < f.size(); ++s) f[s] = W.modulus().add(f[s], W.modulus().mul(c[t], tw.images[t][s]));
    Poly y = divide_projected(W, *nf.division[static_cast<std::size_t>(i)], f, i, division_degree(tw, i));
    const std::size_t nn = static_cast<std::size_t>(W.n());
    Vec out(tw.rank(), 0);
    for (int k = 0; k <= tw.Dt && static_cast<std::size_t>(k) < y.size(); ++k) {
        if (y[static_cast<std::size_t>(k)].empty()) continue;
        Vec pc = W.phi_coeff(y[static_cast<std::size_t>(k)], W.J() - i);
        for (std::size_t a = 0; a < nn; ++a) out[static_cast<std::size_t>(k) * nn + a] = pc[a];
    }
    return out;
}

Vec divided_frobenius(const NygaardFiltration& nf, const Vec& f, int i) {
    const auto& tw = nf.twist;
    const auto& W = *tw.window;
    if (i < 0) throw MalformedInput("divided Frobenius: negative weight");
    if (i > tw.imax) throw PrecisionExhausted("divided Frobenius: weight beyond the twist window");
    Poly y = divide_projected(W, *nf.division[static_cast<std::size_t>(i)], f, i, division_degree(tw, i));
    Vec v = W.project(W.phi(y, W.J() - i));
    if (!tw.lattice.contains(v)) throw ContainmentError("divided Frobenius: image outside the Frobenius twist");
    return v;
}

Vec can_map(const NygaardFiltration& nf, const Vec& f, int i) {
    if (i >= 0 && i <= nf.jmax() && !nf.at(i).contains(f))
        throw ContainmentError("can: element not in N^{>=" + std::to_string(i) + "}");
    return f;
}

}  // namespace prism
