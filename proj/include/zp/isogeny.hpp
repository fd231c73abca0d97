#pragma once

#include "zp/periods.hpp"

#include <array>
#include <optional>
#include <vector>

namespace zp {

/// Sublattice Z(a w1 + b w2) + Z(d w2) of index M = a d, cyclic quotient.
struct CyclicSublattice {
    long a = 1, b = 0, d = 1;
    long M() const { return a * d; }
    friend bool operator==(const CyclicSublattice&, const CyclicSublattice&) = default;
};

/// psi(M) = M prod_{p | M} (1 + 1/p)
long psi(long M);

/// All (a, b; 0, d) with a d = M, 0 <= b < d, gcd(a, b, d) = 1.
std::vector<CyclicSublattice> cyclic_sublattices(long M);

/// Isogeny C/L -> C/L', z -> M z, for the sublattice L' of L. The target basis is
/// reduced; `homology` expresses the images of the source basis in the target
/// basis, column by column.
struct IsogenyPair {
    Lattice target;
    IntMat2 homology;
    IntMat2 target_gamma;  ///< SL2 element used to reduce the target basis
};
IsogenyPair isogeny_pair(const Lattice& lat, const CyclicSublattice& sub, const PrecisionContext& ctx);

/// The dual map C/L' -> C/L, z -> z, in the same bases; composing gives M times the identity.
IntMat2 dual_homology(const CyclicSublattice& sub, const IsogenyPair& pair);

/// Lower-triangular de Rham matrix (a, 0; b, c) with A P1 = P2 B.
struct DeRham {
    Complex a, b, c;
    Real upper_entry;  ///< |(P2 B P1^-1)_{12}| before it is discarded
};
DeRham solve_de_rham(const FullPeriodMatrix& P1, const FullPeriodMatrix& P2, const IntMat2& homology,
                     const PrecisionContext& ctx);

struct IsogenyWitness {
    long M = 1;
    DeRham de_rham;
    IntMat2 homology;
    Real residual;
};

struct PeriodIdentityCheck {
    Real residual;       ///< ||A P1 - P2 B||_max
    Real scale;          ///< ||P2||_max
    Real det_residual;   ///< |a c - M|
    bool homology_det_ok = false;

    bool passed(const PrecisionContext& ctx) const;
};
PeriodIdentityCheck verify_period_identity(const IsogenyWitness& w, const FullPeriodMatrix& P1, const FullPeriodMatrix& P2,
                            const PrecisionContext& ctx);

/// End-to-end witness for one sublattice: periods of both lattices, homology,
/// de Rham side and residual.
struct IsogenyRecord {
    CyclicSublattice sub;
    Lattice target;
    FullPeriodMatrix P1, P2;
    IsogenyWitness witness;
    PeriodIdentityCheck check;
};
IsogenyRecord build_isogeny(const Lattice& lat, const CyclicSublattice& sub, const PrecisionContext& ctx);

/// Advisory recognition of z as a root of A z^2 + B z + C with |A|,|B|,|C| <= bound
/// (A = 0 allowed for rationals). Returns (A, B, C), gcd 1, first nonzero positive.
std::optional<std::array<long, 3>> recognize_quadratic(const Complex& z, long bound, const PrecisionContext& ctx);

}  // namespace zp
