#pragma once

#include "zp/polyrel.hpp"
#include "zp/scanner.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace zp {

using json = nlohmann::json;

/// Precision and seed stamped into every output document.
struct RunInfo {
    int bits = kDefaultPrecisionBits;
    std::uint64_t seed = 0;
};

json header(const std::string& schema, const RunInfo& run);

/// {"re": "...", "im": "..."} with enough decimal digits to round-trip the precision.
json to_json(const Complex& z);
json to_json(const Mat2& m);
Complex complex_from_json(const json& j, mpfr_prec_t bits);
Mat2 mat2_from_json(const json& j, mpfr_prec_t bits);
/// Residuals as plain numbers (doubles).
double to_number(const Real& x);

json periods_json(const Lattice& lat, const FullPeriodMatrix& P, const PrecisionContext& ctx, const RunInfo& run);
json isogeny_json(const Complex& tau, long M, const std::vector<IsogenyRecord>& recs, const PrecisionContext& ctx,
                  const RunInfo& run);
json phi_json(const ModularPolynomial& phi, const RunInfo& run);

struct PolynomialCheck {
    int degree = -1;
    bool homogeneous = false;
    std::size_t terms = 0;
    Real vanishing_residual;
    NonMembershipCertificate nonmembership;
};
/// Builds R for the witness, evaluates it at the instance and searches for a certificate.
PolynomialCheck check_polynomial(const RelationWitness& w, const RelationInstance& inst, int attempts,
                                 std::uint64_t seed, const PrecisionContext& ctx);
bool polynomial_check_passed(const PolynomialCheck& pc, const PrecisionContext& ctx);

json certificate_json(const NonMembershipCertificate& c);
json relation_json(const RelationWitness& w, const PolynomialCheck& pc, const PrecisionContext& ctx, const RunInfo& run);
json check_relation_json(const RelationWitness& w, const PolynomialCheck& pc, const PrecisionContext& ctx,
                         const RunInfo& run);

json instance_to_json(const RelationInstance& inst, const RunInfo& run);
RelationInstance instance_from_json(const json& j, const PrecisionContext& ctx);

json scan_report_json(const CurveModel& curve, const ScanOptions& opt, const ScanResult& res, const RunInfo& run);
/// One row per point: kind,i1,i2,M,i3,i4,N,degree_bound,height_t,heights_j,singular_moduli,t_minpoly.
std::string scan_report_csv(const json& report);

/// Minimal JSON Schema check (type, properties, required, additionalProperties,
/// items, enum, const, minimum, maximum, minItems, maxItems, oneOf, local $ref).
/// Returns the list of violations; empty means valid.
std::vector<std::string> validate_schema(const json& doc, const json& schema);

}  // namespace zp
