#pragma once

// Normal-form arithmetic in A[x_0, x_1, ...]/(x_t^p - R_t), x_t = delta^t(r/d).
// A monomial prod x_t^{e_t} with digits e_t < p is indexed by k = sum e_t p^t.

#include <map>
#include <memory>
#include <vector>

#include "prism/series.hpp"

namespace prism {

// Truncated series ring (Z/p^N)[[z]]/z^Z; elements are Vec of length Z.
struct SeriesCoeffs {
    Modulus mod;
    int Z = 1;

    std::size_t size() const { return static_cast<std::size_t>(Z); }
    Vec zero() const { return Vec(size(), 0); }
    Vec one() const {
        Vec v = zero();
        v[0] = 1 % mod.q;
        return v;
    }
    Vec mul(const Vec& a, const Vec& b) const;
};

// (Z/p^N)[z]/(G) for a monic G of degree n; elements are Vec of length n.
struct QuotCoeffs {
    Modulus mod;
    Vec G;  // monic, length n+1
    int n = 1;

    std::size_t size() const { return static_cast<std::size_t>(n); }
    Vec zero() const { return Vec(size(), 0); }
    Vec one() const {
        Vec v = zero();
        v[0] = 1 % mod.q;
        return v;
    }
    Vec mul(const Vec& a, const Vec& b) const;
    // reduce an arbitrary-length polynomial
    Vec reduce(const Vec& f) const;
};

inline bool vzero(const Vec& a) {
    for (u64 x : a)
        if (x) return false;
    return true;
}

// Polynomial in normal monomials; entry k is the coefficient of m_k, empty means zero.
using Poly = std::vector<Vec>;

std::vector<int> base_p_digits(std::size_t k, u64 p);

template <class Ring>
class Rewriter {
public:
    Rewriter(const Ring& R, u64 p, int Dmax) : R_(R), p_(p), Dmax_(Dmax) {}

    const Ring& ring() const { return R_; }
    u64 p() const { return p_; }
    int Dmax() const { return Dmax_; }
    // x_t^p = rules[t]
    void add_rule(Poly r) { rules_.push_back(std::move(r)); }
    const std::vector<Poly>& rules() const { return rules_; }

    Poly zero() const { return Poly(static_cast<std::size_t>(Dmax_) + 1); }
    Poly monomial(std::size_t k) const;
    Poly constant(const Vec& c) const;
    int degree(const Poly& a) const;

    Poly add(const Poly& a, const Poly& b) const;
    Poly sub(const Poly& a, const Poly& b) const;
    Poly scale(const Poly& a, const Vec& c) const;
    Poly scale_int(const Poly& a, u64 c) const;
    Poly mul(const Poly& a, const Poly& b) const;
    Poly pow(const Poly& a, u64 n) const;
    // m_i * m_j in normal form
    const Poly& mono_product(std::size_t i, std::size_t j) const;
    // normal form of an exponent vector
    const Poly& normal(const std::vector<int>& s) const;

private:
    Ring R_;
    u64 p_;
    int Dmax_;
    std::vector<Poly> rules_;
    mutable std::map<std::vector<int>, Poly> memo_;
    mutable std::map<std::pair<std::size_t, std::size_t>, const Poly*> prod_memo_;
};

// Rules R_0..R_{T-1} derived at the z-level, T = floor(log_p Dmax).
struct RuleSet {
    u64 p = 2;
    int T = 0;          // number of rules
    Modulus mod;        // precision of the coefficients
    int Z = 1;
    std::vector<Poly> rules;  // over SeriesCoeffs, each of size p^T + 1
    std::vector<Poly> frob;   // phi(x_t) = rules[t] + p x_{t+1}
};

// d = E(z), r the relation; coefficients carry N good p-digits and z-precision Z.
RuleSet derive_rules(const Eisenstein& E, const std::vector<i64>& r, int N, int Z, int Dmax);

}  // namespace prism
