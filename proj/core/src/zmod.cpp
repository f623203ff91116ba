#include "prism/zmod.hpp"

#include <algorithm>
#include <utility>

namespace prism {

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Modulus::Modulus(u64 p_, int M_) : p(p_), M(M_) {
    if (!is_prime(p)) throw MalformedInput("modulus: p = " + std::to_string(p) + " is not prime");
    if (M < 1) throw MalformedInput("modulus: exponent M must be positive");
    u128 acc = 1;
    for (int i = 0; i < M; ++i) {
        acc *= p;
        if (acc > (u128(1) << 62))
            throw MalformedInput("modulus: p^M exceeds 2^62 (p = " + std::to_string(p) +
                                 ", M = " + std::to_string(M) + ")");
    }
    q = static_cast<u64>(acc);
}

u64 Modulus::pow(u64 a, u64 e) const {
    u64 r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 Modulus::reduce(i64 v) const {
    i64 r = v % static_cast<i64>(q);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

int Modulus::val(u64 a) const {
    if (a == 0) return M;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

u64 Modulus::ppow(int k) const {
    if (k >= M) return 0;
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

u64 Modulus::inv(u64 a) const {
    if (a % p == 0) throw MalformedInput("modulus: inverse of a non-unit");
    // extended Euclid on signed 128-bit
    __int128 t = 0, nt = 1, r = q, nr = a % q;
    while (nr) {
        __int128 k = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - k * nt);
        std::tie(r, nr) = std::make_pair(nr, r - k * nr);
    }
    if (t < 0) t += q;
    return static_cast<u64>(t);
}

ZMod ZMod::operator+(const ZMod& o) const {
    if (mod != o.mod) throw MalformedInput("zmod: mixed moduli");
    return from_raw(mod, mod.add(residue, o.residue));
}
ZMod ZMod::operator-(const ZMod& o) const {
    if (mod != o.mod) throw MalformedInput("zmod: mixed moduli");
    return from_raw(mod, mod.sub(residue, o.residue));
}
ZMod ZMod::operator*(const ZMod& o) const {
    if (mod != o.mod) throw MalformedInput("zmod: mixed moduli");
    return from_raw(mod, mod.mul(residue, o.residue));
}

ZModMatrix ZModMatrix::identity(const Modulus& m, std::size_t n) {
    ZModMatrix r(m, n, n);
    for (std::size_t i = 0; i < n; ++i) r.at(i, i) = 1 % m.q;
    return r;
}

ZModMatrix ZModMatrix::from_rows(const Modulus& m, std::size_t cols, const std::vector<Vec>& rows) {
    ZModMatrix r(m, 0, cols);
    r.a_.reserve(rows.size() * cols);
    for (const auto& v : rows) r.append_row(v);
    return r;
}

void ZModMatrix::append_row(const Vec& v) {
    if (v.size() != cols_) throw MalformedInput("matrix: row length mismatch");
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
}

ZModMatrix ZModMatrix::operator*(const ZModMatrix& o) const {
    if (mod_ != o.mod_) throw MalformedInput("matrix: mixed moduli");
    if (cols_ != o.rows_) throw MalformedInput("matrix: shape mismatch");
    ZModMatrix r(mod_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            u64 a = at(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = mod_.add(r.at(i, j), mod_.mul(a, o.at(k, j)));
        }
    return r;
}

Vec vec_times(const Modulus& m, const Vec& v, const ZModMatrix& a) {
    if (v.size() != a.rows()) throw MalformedInput("vector/matrix shape mismatch");
    Vec r(a.cols(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        const u64* row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) r[j] = m.add(r[j], m.mul(v[i], row[j]));
    }
    return r;
}

namespace {

// row_i -= f * row_r from column c on
inline void axpy(const Modulus& m, u64* dst, const u64* src, u64 f, std::size_t c, std::size_t n) {
    if (!f) return;
    u64 nf = m.neg(f);
    for (std::size_t j = c; j < n; ++j)
        if (src[j]) dst[j] = m.add(dst[j], static_cast<u64>(static_cast<u128>(nf) * src[j] % m.q));
}

inline void scale(const Modulus& m, u64* dst, u64 f, std::size_t c, std::size_t n) {
    for (std::size_t j = c; j < n; ++j)
        if (dst[j]) dst[j] = static_cast<u64>(static_cast<u128>(f) * dst[j] % m.q);
}

struct Howell {
    std::vector<Vec> rows;
    std::vector<std::size_t> pivot;
};

Howell howell_rows(const Modulus& m, std::size_t n, std::vector<Vec> rows) {
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const Vec& v) { return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; }); }),
               rows.end());
    std::vector<std::size_t> pivot;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t best = rows.size();
        int bestv = m.M;
        for (std::size_t i = r; i < rows.size(); ++i) {
            u64 a = rows[i][col];
            if (!a) continue;
            int v = m.val(a);
            if (v < bestv) {
                bestv = v;
                best = i;
                if (v == 0) break;
            }
        }
        if (best == rows.size()) continue;
        std::swap(rows[r], rows[best]);
        u64* pr = rows[r].data();
        u64 pv = m.ppow(bestv);
        u64 unit = pr[col] / pv;
        if (unit != 1) scale(m, pr, m.inv(unit), col, n);
        std::vector<std::size_t> touched;
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            u64 a = rows[i][col];
            if (!a) continue;
            axpy(m, rows[i].data(), pr, a / pv, col, n);
            touched.push_back(i);
        }
        if (bestv > 0) {
            Vec ann(rows[r]);
            scale(m, ann.data(), m.ppow(m.M - bestv), col, n);
            if (std::any_of(ann.begin() + col, ann.end(), [](u64 x) { return x != 0; }))
                rows.push_back(std::move(ann));
        }
        pivot.push_back(col);
        ++r;
        // rows emptied by this step leave the pool; untouched rows keep a nonzero entry
        for (std::size_t t = touched.size(); t-- > 0;) {
            std::size_t i = touched[t];
            if (std::any_of(rows[i].begin() + static_cast<std::ptrdiff_t>(col) + 1, rows[i].end(),
                            [](u64 x) { return x != 0; }))
                continue;
            std::swap(rows[i], rows.back());
            rows.pop_back();
        }
    }
    rows.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t c = pivot[k];
        u64 pv = rows[k][c];
        for (std::size_t i = 0; i < k; ++i) {
            u64 a = rows[i][c];
            if (a >= pv) axpy(m, rows[i].data(), rows[k].data(), a / pv, c, n);
        }
    }
    return {std::move(rows), std::move(pivot)};
}

std::vector<Vec> rows_of(const ZModMatrix& a) {
    std::vector<Vec> r;
    r.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) r.push_back(a.row_vec(i));
    return r;
}

bool is_zero_prefix(const Vec& v, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j)
        if (v[j]) return false;
    return true;
}

}  // namespace

ZModMatrix howell_form(const ZModMatrix& m) {
    auto h = howell_rows(m.modulus(), m.cols(), rows_of(m));
    return ZModMatrix::from_rows(m.modulus(), m.cols(), h.rows);
}

Lattice::Lattice(const Modulus& m, std::size_t rank) : mod_(m), rank_(rank), h_(m, 0, rank) {}

Lattice Lattice::span(const Modulus& m, std::size_t rank, const std::vector<Vec>& gens) {
    for (const auto& g : gens)
        if (g.size() != rank) throw MalformedInput("lattice: generator length mismatch");
    Lattice L(m, rank);
    auto h = howell_rows(m, rank, gens);
    L.h_ = ZModMatrix::from_rows(m, rank, h.rows);
    L.pivot_ = std::move(h.pivot);
    return L;
}

Lattice Lattice::span(const ZModMatrix& gens) {
    return span(gens.modulus(), gens.cols(), rows_of(gens));
}

Lattice Lattice::full(const Modulus& m, std::size_t rank) {
    return span(ZModMatrix::identity(m, rank));
}

long Lattice::length() const {
    long s = 0;
    for (std::size_t k = 0; k < h_.rows(); ++k) s += mod_.M - mod_.val(h_.at(k, pivot_[k]));
    return s;
}

bool Lattice::reduce(Vec& v) const {
    for (std::size_t k = 0; k < h_.rows(); ++k) {
        std::size_t c = pivot_[k];
        u64 a = v[c];
        if (!a) continue;
        u64 pv = h_.at(k, c);
        if (a % pv) return false;
        axpy(mod_, v.data(), h_.row(k), a / pv, c, rank_);
    }
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

bool Lattice::contains(const Vec& v) const {
    if (v.size() != rank_) throw MalformedInput("lattice: vector length mismatch");
    Vec w(v);
    for (auto& x : w) x %= mod_.q;
    return reduce(w);
}

Lattice Lattice::scaled(u64 c) const {
    std::vector<Vec> g = rows_of(h_);
    for (auto& v : g) scale(mod_, v.data(), c % mod_.q, 0, rank_);
    return span(mod_, rank_, g);
}

bool contains(const Lattice& L, const Vec& v) { return L.contains(v); }

Lattice kernel(const ZModMatrix& m) {
    const Modulus& md = m.modulus();
    std::size_t R = m.rows(), C = m.cols();
    std::vector<Vec> aug;
    aug.reserve(R);
    for (std::size_t i = 0; i < R; ++i) {
        Vec v(C + R, 0);
        std::copy(m.row(i), m.row(i) + C, v.begin());
        v[C + i] = 1 % md.q;
        aug.push_back(std::move(v));
    }
    auto h = howell_rows(md, C + R, std::move(aug));
    std::vector<Vec> ker;
    for (auto& v : h.rows)
        if (is_zero_prefix(v, C)) ker.emplace_back(v.begin() + C, v.end());
    return Lattice::span(md, R, ker);
}

Lattice lattice_join(const Lattice& a, const Lattice& b) {
    if (a.modulus() != b.modulus() || a.ambient_rank() != b.ambient_rank())
        throw MalformedInput("lattice: window mismatch");
    std::vector<Vec> g = rows_of(a.generators());
    auto gb = rows_of(b.generators());
    g.insert(g.end(), gb.begin(), gb.end());
    return Lattice::span(a.modulus(), a.ambient_rank(), g);
}

Lattice lattice_meet(const Lattice& a, const Lattice& b) {
    if (a.modulus() != b.modulus() || a.ambient_rank() != b.ambient_rank())
        throw MalformedInput("lattice: window mismatch");
    std::size_t n = a.ambient_rank();
    std::vector<Vec> aug;
    for (std::size_t i = 0; i < a.generators().rows(); ++i) {
        Vec v(2 * n);
        std::copy(a.generators().row(i), a.generators().row(i) + n, v.begin());
        std::copy(a.generators().row(i), a.generators().row(i) + n, v.begin() + n);
        aug.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < b.generators().rows(); ++i) {
        Vec v(2 * n, 0);
        std::copy(b.generators().row(i), b.generators().row(i) + n, v.begin());
        aug.push_back(std::move(v));
    }
    auto h = howell_rows(a.modulus(), 2 * n, std::move(aug));
    std::vector<Vec> out;
    for (auto& v : h.rows)
        if (is_zero_prefix(v, n)) out.emplace_back(v.begin() + n, v.end());
    return Lattice::span(a.modulus(), n, out);
}

bool is_sublattice(const Lattice& small, const Lattice& big) {
    for (std::size_t i = 0; i < small.generators().rows(); ++i)
        if (!big.contains(small.generators().row_vec(i))) return false;
    return true;
}

std::vector<int> quotient_exponents(const Lattice& big, const Lattice& small) {
    if (!is_sublattice(small, big)) throw ContainmentError("quotient_invariants: small is not contained in big");
    const int M = big.modulus().M;
    std::vector<long> ell(M + 2, 0);
    long base = small.length();
    for (int j = 0; j <= M; ++j)
        ell[j] = lattice_join(big.scaled(big.modulus().ppow(j)), small).length() - base;
    std::vector<int> out;
    for (int e = M; e >= 1; --e) {
        long at_least_e = ell[e - 1] - ell[e];
        long at_least_e1 = ell[e] - ell[e + 1];
        for (long k = 0; k < at_least_e - at_least_e1; ++k) out.push_back(e);
    }
    return out;
}

std::vector<u64> quotient_invariants(const Lattice& big, const Lattice& small) {
    std::vector<u64> out;
    for (int e : quotient_exponents(big, small)) {
        u64 v = 1;
        for (int i = 0; i < e; ++i) v *= big.modulus().p;
        out.push_back(v);
    }
    return out;
}

Lattice preimage(const std::vector<Vec>& g, std::size_t g_rank, const std::vector<Vec>& f,
                 const Lattice& T) {
    if (g.size() != f.size()) throw MalformedInput("preimage: generator/image count mismatch");
    const Modulus& m = T.modulus();
    std::size_t n = T.ambient_rank();
    std::vector<Vec> aug;
    for (std::size_t t = 0; t < g.size(); ++t) {
        Vec v(n + g_rank, 0);
        std::copy(f[t].begin(), f[t].end(), v.begin());
        std::copy(g[t].begin(), g[t].end(), v.begin() + n);
        aug.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < T.generators().rows(); ++i) {
        Vec v(n + g_rank, 0);
        std::copy(T.generators().row(i), T.generators().row(i) + n, v.begin());
        aug.push_back(std::move(v));
    }
    auto h = howell_rows(m, n + g_rank, std::move(aug));
    std::vector<Vec> out;
    for (auto& v : h.rows)
        if (is_zero_prefix(v, n)) out.emplace_back(v.begin() + n, v.end());
    return Lattice::span(m, g_rank, out);
}

CombinationSolver::CombinationSolver(const std::vector<Vec>& rows, std::size_t rank, const Modulus& m)
    : mod_(m), rank_(rank), k_(rows.size()) {
    std::vector<Vec> aug;
    for (std::size_t t = 0; t < k_; ++t) {
        Vec w(rank + k_, 0);
        std::copy(rows[t].begin(), rows[t].end(), w.begin());
        w[rank + t] = 1 % m.q;
        aug.push_back(std::move(w));
    }
    auto h = howell_rows(m, rank + k_, std::move(aug));
    for (std::size_t r = 0; r < h.rows.size() && h.pivot[r] < rank; ++r) {
        rows_.push_back(std::move(h.rows[r]));
        pivot_.push_back(h.pivot[r]);
    }
}

bool CombinationSolver::solve(const Vec& v, Vec& coeffs) const {
    const std::size_t n = rank_ + k_;
    Vec w(n, 0);
    std::copy(v.begin(), v.end(), w.begin());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        std::size_t c = pivot_[r];
        u64 a = w[c];
        if (!a) continue;
        u64 pv = rows_[r][c];
        if (a % pv) return false;
        axpy(mod_, w.data(), rows_[r].data(), a / pv, c, n);
    }
    if (!is_zero_prefix(w, rank_)) return false;
    coeffs.assign(k_, 0);
    for (std::size_t t = 0; t < k_; ++t) coeffs[t] = mod_.neg(w[rank_ + t]);
    return true;
}

bool solve_combination(const std::vector<Vec>& rows, std::size_t rank, const Modulus& m,
                       const Vec& v, Vec& coeffs) {
    return CombinationSolver(rows, rank, m).solve(v, coeffs);
}

}  // namespace prism
