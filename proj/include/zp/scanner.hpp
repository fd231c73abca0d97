#pragma once

#include "zp/modular.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zp {

/// Rational curve t -> (j_1(t), ..., j_n(t)) in Y(1)^n.
struct CurveModel {
    int n = 0;
    std::vector<RatFunc> maps;
    std::vector<std::string> roles;  ///< optional "smooth" | "cm" | "singular" per coordinate
    bool allow_equal = false;        ///< permit j_i = j_k identically

    /// Throws DomainError unless at least two maps are nonconstant and no two
    /// maps coincide (unless allow_equal).
    void validate() const;
};

/// Text format: `n = <int>`, `j<i> = <num coeffs> / <den coeffs>` (integers,
/// constant first, separated by spaces or commas, optional brackets; the
/// denominator defaults to 1), optional `role<i> = smooth|cm|singular`,
/// `allow_equal = true`, `#` comments.
CurveModel parse_curve(std::istream& in);
CurveModel parse_curve_text(const std::string& text);
CurveModel read_curve_file(const std::string& path);

struct LevelPair {
    int i1 = 1, i2 = 2;
    long M = 2;
    friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

/// Primitive integer polynomial whose roots are the t with Phi_M(j_i1(t), j_i2(t)) = 0.
IntPoly stratum_poly(const CurveModel& curve, int i1, int i2, const ModularPolynomial& phi);
IntPoly stratum_poly(const CurveModel& curve, int i1, int i2, long M);

struct ScanPoint {
    LevelPair pair1;
    std::optional<LevelPair> pair2;
    AlgebraicPointSet points;
    Real height_t;
    std::vector<Real> heights_j;          ///< per coordinate
    std::vector<bool> singular_modulus;   ///< per coordinate, advisory
    Real soundness;                       ///< worst relative |Phi| over roots and pairs
};

/// Double-stratum hit where the second level has no exact Phi (confirmed numerically only).
struct NumericOnlyHit {
    LevelPair exact_pair;
    LevelPair numeric_pair;
    Complex t;
    Real residual;  ///< relative |Phi_N(j_i3(t), j_i4(t))|
};

struct ScanOptions {
    std::vector<long> levels{2, 3};
    std::vector<std::pair<int, int>> pairs;  ///< empty: all i < k
    long max_exact_level = 5;
    bool single_stratum = true;
    bool flag_singular_moduli = true;
    int jobs = 1;
};

struct ScanResult {
    std::vector<ScanPoint> points;  ///< double-stratum points first, then single-stratum
    std::vector<NumericOnlyHit> numeric_only;
    std::size_t double_count() const;
};

/// Relative size |Phi(x, y)| / sum |c_ik| |x|^i |y|^k.
Real phi_relative_value(const ModularPolynomial& phi, const Complex& x, const Complex& y);

ScanPoint make_scan_point(const CurveModel& curve, const IntPoly& defining, const LevelPair& p1,
                          const std::optional<LevelPair>& p2, bool flag_singular, const PrecisionContext& ctx);

std::vector<ScanPoint> unlikely_points(const CurveModel& curve, const std::vector<long>& levels,
                                       const std::vector<std::pair<int, int>>& pairs, const PrecisionContext& ctx);
ScanResult scan(const CurveModel& curve, const ScanOptions& opt, const PrecisionContext& ctx);

/// Parses "2..5" or "2,3,7".
std::vector<long> parse_levels(const std::string& spec);

}  // namespace zp
