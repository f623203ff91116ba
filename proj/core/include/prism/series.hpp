#pragma once

#include <string>
#include <vector>

#include "prism/errors.hpp"
#include "prism/zmod.hpp"

namespace prism {

// Element of (Z/p^M)[[z]]/z^Z.
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(const Modulus& m, int Z) : mod_(m), c_(static_cast<std::size_t>(Z), 0) {
        if (Z < 1) throw MalformedInput("series: z-precision must be positive");
    }
    static TruncSeries from_coeffs(const Modulus& m, int Z, const std::vector<i64>& coeffs);
    static TruncSeries constant(const Modulus& m, int Z, i64 c);
    static TruncSeries monomial(const Modulus& m, int Z, int k, i64 c = 1);

    const Modulus& modulus() const { return mod_; }
    int Z() const { return static_cast<int>(c_.size()); }
    u64 operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    u64& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const Vec& coeffs() const { return c_; }
    Vec& coeffs() { return c_; }

    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries operator-() const;
    TruncSeries& operator+=(const TruncSeries& o);
    TruncSeries& operator-=(const TruncSeries& o);
    TruncSeries scaled(u64 c) const;
    TruncSeries pow(u64 n) const;
    bool operator==(const TruncSeries& o) const { return mod_ == o.mod_ && c_ == o.c_; }
    bool operator!=(const TruncSeries& o) const { return !(*this == o); }

    bool is_zero() const;
    // smallest k with nonzero coefficient, Z if zero
    int z_valuation() const;
    // minimal p-adic valuation of the coefficients, M if zero
    int p_valuation() const;
    bool is_unit() const { return c_[0] % mod_.p != 0; }
    TruncSeries inverse() const;

    // z -> z^p
    TruncSeries frobenius() const;
    // multiply by z^k
    TruncSeries shifted(int k) const;
    TruncSeries truncated(int Z) const;
    // coefficients reinterpreted modulo p^{M'} (M' <= M) or lifted to p^{M'} (M' > M, same integers)
    TruncSeries with_modulus(const Modulus& m) const;
    TruncSeries with_precision(int M) const { return with_modulus(Modulus(mod_.p, M)); }
    // exact division by p; result lives mod p^{M-1}. Throws InternalConsistency if not divisible.
    TruncSeries divided_by_p() const;

    std::string to_string() const;

private:
    Modulus mod_;
    Vec c_;
};

// Monic Eisenstein polynomial, little-endian integer coefficients.
struct Eisenstein {
    u64 p = 2;
    std::vector<i64> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    TruncSeries series(const Modulus& m, int Z) const { return TruncSeries::from_coeffs(m, Z, coeffs); }
    // empty string when valid, otherwise the violated rule
    std::string violation() const;
    // identifier of the violated rule: prime, degree, monic, middle_coefficients, constant_term
    std::string violated_rule() const;
    void validate() const;
    std::string to_string() const;
};

// f = q*g + rem with g monic of degree e (as polynomials in the truncated representative).
struct DivResult {
    TruncSeries q;
    TruncSeries rem;
};
DivResult divide_monic(const TruncSeries& f, const Vec& g_monic);

// f = q*E + rem, deg rem < e.
DivResult weierstrass_divide(const TruncSeries& f, const Eisenstein& E);

// coefficients of E^J mod p^M (monic, degree eJ)
Vec eisenstein_power(const Eisenstein& E, const Modulus& m, int J);

struct Ledger {
    int M_eff = 0;
    int Z_eff = 0;
    bool operator==(const Ledger& o) const { return M_eff == o.M_eff && Z_eff == o.Z_eff; }
};

// numerator / d^pole, canonical: pole = 0 or d does not divide the numerator.
class LocalElement {
public:
    LocalElement() = default;
    LocalElement(const Eisenstein& E, const TruncSeries& num, int pole = 0);

    const TruncSeries& numerator() const { return num_; }
    int pole() const { return pole_; }
    const Ledger& ledger() const { return ledger_; }
    const Eisenstein& eisenstein() const { return E_; }

    LocalElement operator+(const LocalElement& o) const;
    LocalElement operator-(const LocalElement& o) const;
    LocalElement operator*(const LocalElement& o) const;
    LocalElement pow(u64 n) const;
    LocalElement scaled(u64 c) const;
    // restrict to a coarser ledger
    LocalElement at_ledger(const Ledger& l) const;
    bool is_zero() const { return num_.is_zero(); }
    // compared after moving both to the common (coarser) ledger
    bool equals(const LocalElement& o) const;
    LocalElement normalized() const;
    // numerator written over d^r for r >= pole
    TruncSeries numerator_over(int r) const;

private:
    Eisenstein E_;
    TruncSeries num_;
    int pole_ = 0;
    Ledger ledger_;

    void check() const;
};

// 1/(d^p + p delta(d)) as d^{-p} sum_{j<M_eff} (-p delta(d) d^{-p})^j
LocalElement invert_phi_d(const Eisenstein& E, const Ledger& target);

}  // namespace prism
