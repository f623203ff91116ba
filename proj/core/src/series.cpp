#include "prism/series.hpp"

#include <algorithm>
#include <sstream>

#include "prism/delta.hpp"

namespace prism {

namespace {
void same_modulus(const TruncSeries& a, const TruncSeries& b) {
    if (a.modulus() != b.modulus()) throw MalformedInput("series: mixed moduli");
}
}  // namespace

TruncSeries TruncSeries::from_coeffs(const Modulus& m, int Z, const std::vector<i64>& coeffs) {
    TruncSeries s(m, Z);
    for (std::size_t i = 0; i < coeffs.size() && static_cast<int>(i) < Z; ++i) s.c_[i] = m.reduce(coeffs[i]);
    return s;
}

TruncSeries TruncSeries::constant(const Modulus& m, int Z, i64 c) {
    TruncSeries s(m, Z);
    s.c_[0] = m.reduce(c);
    return s;
}

TruncSeries TruncSeries::monomial(const Modulus& m, int Z, int k, i64 c) {
    TruncSeries s(m, Z);
    if (k < Z) s.c_[static_cast<std::size_t>(k)] = m.reduce(c);
    return s;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    TruncSeries r(*this);
    r += o;
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
    TruncSeries r(*this);
    r -= o;
    return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
    same_modulus(*this, o);
    if (o.Z() < Z()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = mod_.add(c_[i], o.c_[i]);
    return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) {
    same_modulus(*this, o);
    if (o.Z() < Z()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = mod_.sub(c_[i], o.c_[i]);
    return *this;
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries r(*this);
    for (auto& x : r.c_) x = mod_.neg(x);
    return r;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    same_modulus(*this, o);
    const std::size_t n = std::min(c_.size(), o.c_.size());
    TruncSeries r(mod_, static_cast<int>(n));
    const u64 q = mod_.q;
    for (std::size_t i = 0; i < n; ++i) {
        if (!c_[i]) continue;
        const u128 a = c_[i];
        for (std::size_t j = 0; i + j < n; ++j) {
            if (!o.c_[j]) continue;
            u64 t = static_cast<u64>(a * o.c_[j] % q);
            u64& d = r.c_[i + j];
            d += t;
            if (d >= q) d -= q;
        }
    }
    return r;
}

TruncSeries TruncSeries::scaled(u64 c) const {
    TruncSeries r(*this);
    c %= mod_.q;
    for (auto& x : r.c_) x = mod_.mul(x, c);
    return r;
}

TruncSeries TruncSeries::pow(u64 n) const {
    TruncSeries r = constant(mod_, Z(), 1);
    TruncSeries b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

bool TruncSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
}

int TruncSeries::z_valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i]) return static_cast<int>(i);
    return Z();
}

int TruncSeries::p_valuation() const {
    int v = mod_.M;
    for (u64 x : c_) v = std::min(v, mod_.val(x));
    return v;
}

TruncSeries TruncSeries::inverse() const {
    if (!is_unit()) throw MalformedInput("series: inverse of a non-unit");
    const std::size_t n = c_.size();
    TruncSeries r(mod_, Z());
    u64 inv0 = mod_.inv(c_[0]);
    r.c_[0] = inv0;
    for (std::size_t k = 1; k < n; ++k) {
        u64 s = 0;
        for (std::size_t j = 1; j <= k; ++j) s = mod_.add(s, mod_.mul(c_[j], r.c_[k - j]));
        r.c_[k] = mod_.mul(mod_.neg(s), inv0);
    }
    return r;
}

TruncSeries TruncSeries::frobenius() const {
    TruncSeries r(mod_, Z());
    const std::size_t p = mod_.p;
    for (std::size_t i = 0; i * p < c_.size(); ++i) r.c_[i * p] = c_[i];
    return r;
}

TruncSeries TruncSeries::shifted(int k) const {
    TruncSeries r(mod_, Z());
    for (int i = 0; i + k < Z(); ++i)
        if (i + k >= 0) r.c_[static_cast<std::size_t>(i + k)] = c_[static_cast<std::size_t>(i)];
    return r;
}

TruncSeries TruncSeries::truncated(int Z) const {
    TruncSeries r(mod_, Z);
    for (int i = 0; i < Z && i < this->Z(); ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
    return r;
}

TruncSeries TruncSeries::with_modulus(const Modulus& m) const {
    if (m.p != mod_.p) throw MalformedInput("series: change of prime");
    TruncSeries r(m, Z());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] % m.q;
    return r;
}

TruncSeries TruncSeries::divided_by_p() const {
    if (mod_.M <= 1) throw PrecisionExhausted("series: no p-digit left to divide by p");
    Modulus m(mod_.p, mod_.M - 1);
    TruncSeries r(m, Z());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] % mod_.p) throw InternalConsistency("series: exact division by p failed");
        r.c_[i] = c_[i] / mod_.p;
    }
    return r;
}

std::string TruncSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i]) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i];
        if (i == 1) os << "*z";
        if (i > 1) os << "*z^" << i;
    }
    if (first) os << "0";
    os << " + O(z^" << c_.size() << ") mod " << mod_.p << "^" << mod_.M;
    return os.str();
}

namespace {
std::pair<std::string, std::string> eisenstein_check(u64 p, const std::vector<i64>& coeffs) {
    if (!is_prime(p)) return {"prime", "p must be prime"};
    if (coeffs.size() < 2) return {"degree", "degree must be at least 1"};
    if (coeffs.back() != 1) return {"monic", "leading coefficient must be 1 (monic)"};
    const i64 pp = static_cast<i64>(p);
    for (std::size_t i = 1; i + 1 < coeffs.size(); ++i)
        if (coeffs[i] % pp != 0)
            return {"middle_coefficients", "coefficient of z^" + std::to_string(i) + " must be divisible by p"};
    if (coeffs[0] % pp != 0) return {"constant_term", "constant term must be p times a unit (not divisible by p)"};
    if ((coeffs[0] / pp) % pp == 0) return {"constant_term", "constant term must be p times a unit (divisible by p^2)"};
    return {};
}
}  // namespace

std::string Eisenstein::violation() const { return eisenstein_check(p, coeffs).second; }

std::string Eisenstein::violated_rule() const { return eisenstein_check(p, coeffs).first; }

void Eisenstein::validate() const {
    auto v = violation();
    if (!v.empty()) throw OrientationError("eisenstein " + to_string() + ": " + v);
}

std::string Eisenstein::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << "]";
    return os.str();
}

DivResult divide_monic(const TruncSeries& f, const Vec& g) {
    const Modulus& m = f.modulus();
    const int e = static_cast<int>(g.size()) - 1;
    if (e < 0 || g.back() % m.q != 1 % m.q) throw MalformedInput("divide_monic: divisor must be monic");
    Vec r = f.coeffs();
    const int n = f.Z();
    TruncSeries q(m, n);
    for (int k = n - 1; k >= e; --k) {
        u64 c = r[static_cast<std::size_t>(k)];
        if (!c) continue;
        q[k - e] = c;
        for (int j = 0; j <= e; ++j) {
            u64& t = r[static_cast<std::size_t>(k - e + j)];
            t = m.sub(t, m.mul(c, g[static_cast<std::size_t>(j)] % m.q));
        }
    }
    TruncSeries rem(m, n);
    for (int k = 0; k < std::min(e, n); ++k) rem[k] = r[static_cast<std::size_t>(k)];
    return {q, rem};
}

DivResult weierstrass_divide(const TruncSeries& f, const Eisenstein& E) {
    E.validate();
    if (E.p != f.modulus().p) throw MalformedInput("weierstrass_divide: prime mismatch");
    Vec g;
    for (i64 c : E.coeffs) g.push_back(f.modulus().reduce(c));
    return divide_monic(f, g);
}

Vec eisenstein_power(const Eisenstein& E, const Modulus& m, int J) {
    Vec acc{1 % m.q};
    for (int t = 0; t < J; ++t) {
        Vec nxt(acc.size() + E.coeffs.size() - 1, 0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < E.coeffs.size(); ++j)
                nxt[i + j] = m.add(nxt[i + j], m.mul(acc[i], m.reduce(E.coeffs[j])));
        acc = std::move(nxt);
    }
    return acc;
}

LocalElement::LocalElement(const Eisenstein& E, const TruncSeries& num, int pole)
    : E_(E), num_(num), pole_(pole), ledger_{num.modulus().M, num.Z()} {
    if (pole < 0) throw MalformedInput("local element: negative pole");
    check();
    *this = normalized();
}

void LocalElement::check() const {
    if (ledger_.M_eff <= 0 || ledger_.Z_eff <= pole_ * E_.degree())
        throw PrecisionExhausted("local element: ledger exhausted (M_eff = " + std::to_string(ledger_.M_eff) +
                                 ", Z_eff = " + std::to_string(ledger_.Z_eff) + ", pole = " +
                                 std::to_string(pole_) + ")");
}

LocalElement LocalElement::normalized() const {
    LocalElement r(*this);
    const int loss = E_.degree() * ledger_.M_eff;
    while (r.pole_ > 0) {
        auto [q, rem] = weierstrass_divide(r.num_, E_);
        if (!rem.is_zero()) break;
        int z = r.ledger_.Z_eff - loss;
        if (z <= 0) throw PrecisionExhausted("local element: pole normalization consumed the z-window");
        r.num_ = q.truncated(z);
        r.ledger_.Z_eff = z;
        --r.pole_;
    }
    if (r.num_.is_zero()) r.pole_ = 0;
    r.check();
    return r;
}

TruncSeries LocalElement::numerator_over(int r) const {
    if (r < pole_) throw MalformedInput("local element: target pole below the current pole");
    TruncSeries d = E_.series(num_.modulus(), num_.Z());
    return num_ * d.pow(static_cast<u64>(r - pole_));
}

LocalElement LocalElement::at_ledger(const Ledger& l) const {
    LocalElement r(*this);
    int M = std::min(l.M_eff, ledger_.M_eff);
    int Z = std::min(l.Z_eff, ledger_.Z_eff);
    r.num_ = num_.with_precision(M).truncated(Z);
    r.ledger_ = {M, Z};
    r.check();
    return r.normalized();
}

namespace {
Ledger common(const Ledger& a, const Ledger& b) {
    return {std::min(a.M_eff, b.M_eff), std::min(a.Z_eff, b.Z_eff)};
}
}  // namespace

LocalElement LocalElement::operator+(const LocalElement& o) const {
    Ledger l = common(ledger_, o.ledger_);
    LocalElement a = at_ledger(l), b = o.at_ledger(l);
    int r = std::max(a.pole_, b.pole_);
    l = common(a.ledger_, b.ledger_);
    TruncSeries s = a.numerator_over(r).with_precision(l.M_eff).truncated(l.Z_eff) +
                    b.numerator_over(r).with_precision(l.M_eff).truncated(l.Z_eff);
    return LocalElement(E_, s, r);
}

LocalElement LocalElement::operator-(const LocalElement& o) const { return *this + o.scaled(o.num_.modulus().q - 1); }

LocalElement LocalElement::operator*(const LocalElement& o) const {
    Ledger l = common(ledger_, o.ledger_);
    LocalElement a = at_ledger(l), b = o.at_ledger(l);
    l = common(a.ledger_, b.ledger_);
    TruncSeries s = a.num_.with_precision(l.M_eff).truncated(l.Z_eff) * b.num_.with_precision(l.M_eff).truncated(l.Z_eff);
    return LocalElement(E_, s, a.pole_ + b.pole_);
}

LocalElement LocalElement::scaled(u64 c) const {
    LocalElement r(*this);
    r.num_ = num_.scaled(c);
    return r.normalized();
}

LocalElement LocalElement::pow(u64 n) const {
    LocalElement r(E_, TruncSeries::constant(num_.modulus(), num_.Z(), 1), 0);
    LocalElement b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

bool LocalElement::equals(const LocalElement& o) const { return (*this - o).is_zero(); }

LocalElement invert_phi_d(const Eisenstein& E, const Ledger& target) {
    E.validate();
    if (target.M_eff < 1) throw PrecisionExhausted("invert_phi_d: M_eff must be at least 1");
    const int M = target.M_eff, Z = target.Z_eff;
    const u64 p = E.p;
    Modulus m(p, M), m1(p, M + 1);
    TruncSeries d = E.series(m, Z);
    TruncSeries dd = delta_eval(E.series(m1, Z));  // lives mod p^M
    TruncSeries u = dd.scaled(m.q - p % m.q);      // -p delta(d)
    TruncSeries dp = d.pow(p);
    TruncSeries num(m, Z);
    TruncSeries upow = TruncSeries::constant(m, Z, 1);
    for (int j = 0; j < M; ++j) {
        num += upow * dp.pow(static_cast<u64>(M - 1 - j));
        upow = upow * u;
    }
    return LocalElement(E, num, static_cast<int>(p) * M);
}

}  // namespace prism
