#pragma once

// Prismatic envelope of R = A/(d, r) over a Breuil-Kisin prism, computed in the
// rewriting model: Delta = A[x_0, x_1, ...]/(x_t^p - R_t, d x_0 - r) with x_t = delta^t(r/d).
// Finite windows are Delta/(p^N, d^J) restricted to monomial degree <= D.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prism/delta.hpp"
#include "prism/rewrite.hpp"
#include "prism/zmod.hpp"

namespace prism {

struct QrspPresentation {
    OrientedPrism prism;
    std::vector<std::vector<i64>> relations;  // little-endian integer polynomials in z

    // derived by make_presentation
    std::vector<i64> rel;    // the effective relation, empty when R = A/d
    int length = 0;          // Z_p-length of R (pi-adic valuation of the relation)
    int s = 0;               // least s with p^s in (d, rel)
    bool zero_ring = false;  // some relation is a unit mod d

    u64 p() const { return prism.p(); }
    int e() const { return prism.e(); }
    bool trivial() const { return rel.empty() && !zero_ring; }
    std::string describe() const;
};

// Validates relations; several non-trivial relations are rejected by Koszul homology.
QrspPresentation make_presentation(const OrientedPrism& prism, const std::vector<std::vector<i64>>& relations);

// (Z/p^N)^n / Rel written in the coordinates left after eliminating unit pivots of Rel.
class QuotientSpace {
public:
    QuotientSpace() = default;
    QuotientSpace(const Modulus& m, std::size_t n, const std::vector<Vec>& rel_rows);

    const Modulus& modulus() const { return mod_; }
    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return cols_.size(); }
    const Lattice& relations() const { return rel_; }
    Vec project(const Vec& v) const;
    Vec lift(const Vec& w) const;
    // span of projected ambient vectors together with the relations
    Lattice span(const std::vector<Vec>& ambient_vectors) const;
    Lattice span_projected(const std::vector<Vec>& projected) const;

private:
    struct UnitRow {
        std::size_t pivot;
        std::vector<std::pair<std::size_t, u64>> tail;  // in quotient coordinates
    };
    Modulus mod_;
    std::size_t n_ = 0;
    std::vector<std::size_t> cols_;        // surviving ambient columns
    std::vector<long> where_;              // ambient column -> quotient coordinate or -1
    std::vector<UnitRow> units_;
    Lattice rel_;
};

// Delta/(p^N, d^J) on monomial degrees 0..D2. Relations reach degree D2, so classes
// of elements of degree <= D2 - J are faithful.
class DeltaWindow {
public:
    DeltaWindow(const QrspPresentation& pres, int J, int N, int D2, int Zc);

    const QrspPresentation& presentation() const { return pres_; }
    const Modulus& modulus() const { return mod_; }
    int J() const { return J_; }
    int N() const { return mod_.M; }
    int D2() const { return D2_; }
    int Zc() const { return Zc_; }
    int faithful_degree() const { return D2_ - J_; }
    // coefficient length e*J
    int n() const { return B_.n; }
    std::size_t dim() const { return static_cast<std::size_t>(D2_ + 1) * static_cast<std::size_t>(B_.n); }
    std::size_t col(int k, int a) const;

    const QuotCoeffs& coeffs() const { return B_; }
    const Rewriter<QuotCoeffs>& rw() const { return *rw_; }
    const QuotientSpace& quotient() const { return *Q_; }
    const Vec& d() const { return d_; }
    const Vec& r() const { return r_; }

    Vec to_vec(const Poly& a) const;
    Poly to_poly(const Vec& v) const;
    Poly z_mono(int a, int k) const;  // z^a m_k
    Vec project(const Poly& a) const { return Q_->project(to_vec(a)); }
    Poly lift(const Vec& w) const { return to_poly(Q_->lift(w)); }

    // phi(m_k) = prod phi(x_t)^{e_t}
    const Poly& phi_mono(std::size_t k) const;
    // phi on a coefficient known modulo d^prec
    Vec phi_coeff(const Vec& c, int prec) const;
    // phi of an element whose coefficients are known modulo d^prec
    Poly phi(const Poly& a, int prec) const;
    // delta(m_k) via the product rule; needs p*k <= D2
    Poly delta_mono(std::size_t k) const;
    Poly mul_scalar(const Poly& a, const Vec& c) const { return rw_->scale(a, c); }

    // writes v = d*y + (relations); y is known modulo d^{J-1}. False if v is not in d*Delta.
    bool divide_by_d(const Poly& v, Poly& y) const;

    // name of m_k in the delta-iterates
    std::string monomial_name(std::size_t k) const;

    // d^j times the whole window (z^a m_k, k <= D2); cached
    const Lattice& dpower(int j) const;

private:
    QrspPresentation pres_;
    Modulus mod_;
    int J_, D2_, Zc_;
    QuotCoeffs B_;
    QuotCoeffs Abar_;  // A/(p^N, d)
    std::shared_ptr<Rewriter<QuotCoeffs>> rw_;
    std::shared_ptr<QuotientSpace> Q_;
    std::vector<Poly> frob_;
    Vec d_, r_;
    std::vector<Vec> rbar_rows_;
    mutable std::map<std::size_t, Poly> phi_memo_;
    mutable std::map<int, Lattice> dpow_memo_;
};

struct EnvelopeBounds {
    int K = 3;   // delta-depth
    int D = 6;   // monomial degree
    int Z = 60;  // z-precision
    int J = 0;   // d-adic depth of the window, 0 selects D
    int N = 0;   // internal p-precision, 0 selects the exact value
};

struct EnvelopeCertificate {
    std::vector<std::string> closure_defects;
    bool d_torsion_free = false;
    bool p_torsion_free = false;
    int p_torsion_depth = -1;  // least t with (Delta/(p^N, d^J))[p] inside p^{N-1} + d^{J-t}
    bool stable = false;
    bool certified() const { return closure_defects.empty() && d_torsion_free && p_torsion_free && stable; }
};

struct MonomialInfo {
    std::size_t degree = 0;
    std::vector<int> exponents;  // exponent of x_t = delta^t(r/d)
    std::string name;
};

struct EnvelopeLattice {
    QrspPresentation presentation;
    EnvelopeBounds bounds;
    int D = 0;  // effective degree window
    int J = 0;
    Ledger ledger;  // (N, Zc) actually used
    std::shared_ptr<const DeltaWindow> window;
    Lattice lattice;  // image of Fil_D Delta in the window, quotient coordinates
    std::vector<MonomialInfo> provenance;
    EnvelopeCertificate certificate;

    // z^a m_k for k <= D in quotient coordinates
    std::vector<Vec> generators() const;
    // Z_p-length of the window module
    long length() const;
};

// exact p-precision for a window of depth J
int envelope_precision(const QrspPresentation& pres, int M, int J);
// z-precision needed to reduce modulo (p^N, d^J)
int envelope_zprec(const QrspPresentation& pres, int N, int J);

EnvelopeLattice build_envelope(const QrspPresentation& pres, const EnvelopeBounds& bounds, bool certify = true);

// F^j = window ∩ d^j Delta, j = 0..jmax
std::vector<Lattice> hodge_tate_filtration(const EnvelopeLattice& env, int jmax);

// delta on A[1/d]: (phi(num) phi(d)^{-pole} - f^p)/p
LocalElement delta_local(const LocalElement& f);

// syzygies of z^a m_k (k <= D) in the window: canonical presentation data
Lattice window_syzygies(const EnvelopeLattice& env);

}  // namespace prism
