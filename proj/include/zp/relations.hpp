#pragma once

#include "zp/isogeny.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zp {

enum class Role { Cm, Singular };

/// One coordinate of a point with unlikely isogenies. `period.h` is the value
/// matrix used in the identities; the polynomial variables X_{i,j,k} are
/// X = pi1^-1 h, and the raw values are h~ = (pi1 pi2)^-1 h.
struct Coordinate {
    int index = 1;
    Role role = Role::Cm;
    StructuredPeriod period;
    Mat2 pi1;
    Mat2 pi2;

    Coordinate() = default;
    Coordinate(int k, Role r, StructuredPeriod sp, mpfr_prec_t bits);

    Mat2 values() const;
    Mat2 h_tilde() const;
};

/// Isogeny from coordinate `source` to coordinate `target`: A P_source = P_target B.
struct IsogenyLink {
    int source = 0, target = 0;
    IsogenyWitness witness;
};

struct RelationInstance {
    std::vector<Coordinate> coords;
    std::vector<IsogenyLink> links;

    const Coordinate& coord(int k) const;  ///< throws DomainError if absent
};

enum class Way { FirstWay, SecondWay, FourCoordinate };
std::string to_string(Way w);

/// Ingredients of one first-way pair (CM source -> singular target).
struct FirstWayTerms {
    int k_sing = 0, k_cm = 0;
    Complex a, b, c;
    Mat2 pi_sing, pi_cm;
    long p = 0, q = 0, r = 0, s = 0;
    Complex H1, H2;
};

/// Ingredients of the second way on a CM -> CM pair.
struct SecondWayTerms {
    int k_src = 0, k_tgt = 0;
    Complex a, b, c;
    Mat2 pi_src, pi_tgt;
    long p = 0, q = 0, r = 0, s = 0;
    Complex H1, H2, H3, H4;
};

struct RelationWitness {
    Way way = Way::FirstWay;
    int case_id = 0;
    std::vector<Complex> H;
    std::vector<long> rhs;
    Real residual;          ///< |lhs - rhs| of the scalar identity in force
    Real scale;             ///< magnitude the residual is compared against
    Real entry_residual;    ///< worst entrywise identity residual (0 if none)
    std::optional<int> vanishing;  ///< index into H of the entry forced to vanish
    std::vector<FirstWayTerms> first;
    std::optional<SecondWayTerms> second;

    bool holds(const PrecisionContext& ctx) const;
};

/// top: (a h22 - b h12, -c h12); bottom: (-h21, h11) (a, 0; b, c).
std::array<Complex, 2> g_vector(const Mat2& h, const Complex& a, const Complex& b, const Complex& c, bool top);

/// Both coordinates CM; the link runs from h2 (periods varpi') to h3 (varpi).
RelationWitness second_way(const Coordinate& src, const Coordinate& tgt, const IsogenyWitness& iso,
                           const PrecisionContext& ctx);

/// Singular target, CM source with period varpi0.
RelationWitness first_way(const Coordinate& sing, const Coordinate& cm, const IsogenyWitness& iso,
                          const PrecisionContext& ctx);

/// r2 s2 H1' H2' = r1 s1 H1'' H2'' from two first-way pairs; degenerate pairs are delegated.
RelationWitness four_coordinate(const RelationWitness& pair1, const RelationWitness& pair2,
                                const PrecisionContext& ctx);

/// Case 1..6 selection by the singular/CM types of the isogenous coordinates.
RelationWitness dispatch_case(const RelationInstance& inst, const PrecisionContext& ctx);

/// One link: the pair relation chosen by the roles of its endpoints. Two links: dispatch_case.
RelationWitness evaluate_instance(const RelationInstance& inst, const PrecisionContext& ctx);

// Instances built by construction so that the identities hold exactly.
struct SyntheticOptions {
    long degree = 2;
    bool zero_r = false;
    bool zero_s = false;
    bool random_pi = false;
};
RelationInstance synthetic_first_way(std::uint64_t seed, const SyntheticOptions& opt, const PrecisionContext& ctx);
RelationInstance synthetic_second_way(std::uint64_t seed, const SyntheticOptions& opt, const PrecisionContext& ctx);
/// Coordinates 1, 3 singular and 2, 4 CM with links 2 -> 1 and 4 -> 3.
RelationInstance synthetic_four_coordinate(std::uint64_t seed, const SyntheticOptions& opt1,
                                           const SyntheticOptions& opt2, const PrecisionContext& ctx);

/// Coordinates 1, 2 singular sharing the CM coordinate 3; links 3 -> 1 and 3 -> 2.
RelationInstance synthetic_shared_cm(std::uint64_t seed, const SyntheticOptions& opt1, const SyntheticOptions& opt2,
                                     const PrecisionContext& ctx);
/// Adds a singular coordinate k_sing and a consistent link from the existing CM coordinate k_cm.
RelationInstance attach_first_way(const RelationInstance& base, int k_cm, int k_sing, std::uint64_t seed,
                                  const SyntheticOptions& opt, const PrecisionContext& ctx);

/// Second-way instance from actual curves: C/(1, tau) and its quotient by `sub`.
RelationInstance genuine_second_way(const Complex& tau, const CyclicSublattice& sub, const PrecisionContext& ctx);

}  // namespace zp
