#pragma once

// Frobenius twist, Nygaard filtration, can and the divided Frobenius inside an envelope window.
// The twist is the A-span of z^a phi(m_k); elements are handled either in quotient
// coordinates of the window or in coefficients over these generators.

#include <memory>
#include <vector>

#include "prism/envelope.hpp"

namespace prism {

struct FrobTwistLattice {
    std::shared_ptr<const DeltaWindow> window;
    int Dt = 0;                           // generators z^a phi(m_k), k <= Dt
    int imax = 0;                         // largest division by d supported
    std::vector<Poly> gens;               // index t = k*n + a
    std::vector<Vec> images;              // projected generators
    Lattice lattice;                      // span of the images, quotient coordinates
    Lattice syzygies;                     // coefficient vectors with zero image
    std::vector<MonomialInfo> provenance; // phi(m_k), k <= Dt
    std::vector<int> depth;               // d-adic depth of phi(m_k) (J when zero in the window)
    bool saturated = false;               // phi(m_k) vanishes in the window for Dt < k <= p*Dt + imax
    bool contained = false;               // lies in the envelope lattice of degree p*Dt

    std::size_t rank() const { return gens.size(); }
    int n() const { return window ? window->n() : 0; }
    // element of the window with the given generator coefficients
    Poly combine(const Vec& coeffs) const;
};

// Degree window needed for a twist with depth J and divisions up to imax.
EnvelopeBounds nygaard_bounds(const QrspPresentation& pres, int J, int imax);

FrobTwistLattice build_frobenius_twist(const EnvelopeLattice& env, int imax);

struct NygaardFiltration {
    FrobTwistLattice twist;
    std::vector<Lattice> pieces;        // N^{>=j} in quotient coordinates, j = 0..jmax
    std::vector<Lattice> coeff_pieces;  // the same as generator coefficients
    // writes elements of N^{>=i} as d^i-multiples, i <= twist.imax
    std::vector<std::shared_ptr<const CombinationSolver>> division;

    int jmax() const { return static_cast<int>(pieces.size()) - 1; }
    const Lattice& at(int j) const;
    const Lattice& coeffs_at(int j) const;
};

NygaardFiltration nygaard_filtration(const FrobTwistLattice& twist, int jmax);

// phi(f / d^i) in quotient coordinates; f must lie in N^{>=i}. The result is checked
// against the twist lattice.
Vec divided_frobenius(const NygaardFiltration& nf, const Vec& f, int i);
// the same on generator coefficients, result in generator coefficients
Vec divided_frobenius_coeffs(const NygaardFiltration& nf, const Vec& c, int i);
// inclusion N^{>=i} -> twist
Vec can_map(const NygaardFiltration& nf, const Vec& f, int i);

}  // namespace prism
