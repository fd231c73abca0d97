#include "zp/context.hpp"

#include "zp/errors.hpp"

#include <cstdlib>
#include <string>

namespace zp {

namespace {

int checked_bits(int bits) {
    if (bits < kMinPrecisionBits) {
        throw DomainError("precision must be at least 64 bits, got " + std::to_string(bits));
    }
    return bits;
}

Real default_tol(int bits) { return power_of_two(-(checked_bits(bits) / 2), bits); }

}  // namespace

PrecisionContext::PrecisionContext(int bits) : PrecisionContext(bits, default_tol(bits)) {}

PrecisionContext::PrecisionContext(int bits, const Real& tol, std::size_t max_terms)
    : bits_(checked_bits(bits)),
      tol_(tol.with_precision(bits)),
      max_terms_(max_terms),
      pi_(const_pi(bits)) {
    if (tol_.sign() <= 0) throw DomainError("tolerance must be positive");
    if (max_terms_ == 0) throw DomainError("max_terms must be positive");
    two_pi_i_ = Complex(Real(bits), pi_ * 2L);
}

PrecisionContext PrecisionContext::doubled() const {
    return PrecisionContext(2 * bits_, power_of_two(-bits_, 2 * bits_), max_terms_);
}

int precision_from_environment(int fallback) {
    const char* env = std::getenv("ZP_PRECISION_BITS");
    if (env == nullptr || *env == '\0') return fallback;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < kMinPrecisionBits || v > (1L << 20)) return fallback;
    return static_cast<int>(v);
}

}  // namespace zp
