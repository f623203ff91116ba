#include "prism/delta.hpp"

#include <algorithm>

namespace prism {

TruncSeries frobenius(const TruncSeries& f) { return f.frobenius(); }

TruncSeries delta_eval(const TruncSeries& f) {
    return (f.frobenius() - f.pow(f.modulus().p)).divided_by_p();
}

bool is_distinguished(const TruncSeries& d) {
    if (d.modulus().M < 2) {
        // delta needs a second p-digit; lift the residues and evaluate
        return is_distinguished(d.with_precision(2));
    }
    return delta_eval(d)[0] % d.modulus().p != 0;
}

OrientedPrism make_breuil_kisin(u64 p, int M, int Z, const std::vector<i64>& eisenstein) {
    Eisenstein E{p, eisenstein};
    E.validate();
    if (Z <= E.degree()) throw MalformedInput("make_breuil_kisin: z-precision must exceed deg E");
    OrientedPrism pr;
    pr.presentation.p = p;
    pr.presentation.M = M;
    pr.presentation.Z = Z;
    Modulus m(p, M);
    pr.presentation.generator_delta.emplace("z", TruncSeries(m, Z));
    pr.E = E;
    pr.d = E.series(m, Z);
    if (!is_distinguished(E.series(Modulus(p, std::max(M, 2)), Z))) throw InternalConsistency("make_breuil_kisin: Eisenstein E is not distinguished");
    return pr;
}

bool is_transversal(const OrientedPrism& prism) {
    // mod p, d = z^e * unit; multiplication by d on F_p[[z]]/z^Z is injective on the window z^0..z^{Z-e-1}
    Modulus m(prism.p(), 1);
    const int Z = prism.presentation.Z;
    TruncSeries d = prism.d.with_modulus(m);
    const int v = d.z_valuation();
    if (v >= Z) return false;
    for (int k = 0; k + v < Z; ++k) {
        TruncSeries img = d * TruncSeries::monomial(m, Z, k);
        if (img.z_valuation() != k + v) return false;
    }
    return true;
}

}  // namespace prism
