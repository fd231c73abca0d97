#pragma once

#include "zp/relations.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zp {

/// Variable X_{i,j,k}: entry (i, j) of the value matrix of coordinate k (all 1-based).
struct Var {
    int i = 1, j = 1, k = 1;
    int id() const { return 4 * (k - 1) + 2 * (i - 1) + (j - 1); }
    static Var from_id(int id) { return {(id % 4) / 2 + 1, id % 2 + 1, id / 4 + 1}; }
    std::string name() const;
};

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Complex> {
    static bool is_zero(const Complex& c) { return c.is_zero(); }
    static Complex to_complex(const Complex& c, mpfr_prec_t) { return c; }
    static std::string str(const Complex& c) { return c.to_string(20); }
};

template <>
struct CoeffTraits<mpq_class> {
    static bool is_zero(const mpq_class& c) { return c == 0; }
    static Complex to_complex(const mpq_class& c, mpfr_prec_t bits) { return Complex(Real(c, bits)); }
    static std::string str(const mpq_class& c) { return c.get_str(); }
};

using Assignment = std::map<int, Complex>;

/// Sets X_{i,j,k} to the entries of m.
void assign_matrix(Assignment& values, int k, const Mat2& m);

/// Sparse polynomial in the X_{i,j,k}. A monomial is the sorted multiset of its variable ids.
template <class C>
class MultiPoly {
public:
    using Monomial = std::vector<int>;
    using Traits = CoeffTraits<C>;

    MultiPoly() = default;

    static MultiPoly constant(const C& c) {
        MultiPoly p;
        p.add_term({}, c);
        return p;
    }
    static MultiPoly variable(Var v, const C& one) {
        MultiPoly p;
        p.add_term({v.id()}, one);
        return p;
    }

    const std::map<Monomial, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Monomial& m, const C& c) {
        if (Traits::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second = it->second + c;
        if (Traits::is_zero(it->second)) terms_.erase(it);
    }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.size()));
        return d;
    }
    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        std::size_t d = terms_.begin()->first.size();
        for (const auto& [m, c] : terms_)
            if (m.size() != d) return false;
        return true;
    }
    std::set<int> variables() const {
        std::set<int> v;
        for (const auto& [m, c] : terms_) v.insert(m.begin(), m.end());
        return v;
    }

    /// max |coefficient|
    Real coeff_norm(mpfr_prec_t bits) const {
        Real n(bits);
        for (const auto& [m, c] : terms_) n = max(n, abs(Traits::to_complex(c, bits)));
        return n;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m;
                m.reserve(ma.size() + mb.size());
                std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
                r.add_term(m, ca * cb);
            }
        return r;
    }
    friend MultiPoly operator*(const C& s, const MultiPoly& a) {
        MultiPoly r;
        for (const auto& [m, c] : a.terms_) r.add_term(m, s * c);
        return r;
    }

    /// Evaluation with powers of each variable cached; throws MissingAssignment.
    Complex evaluate(const Assignment& values, mpfr_prec_t bits) const;

    /// Exact evaluation at a rational point (exact coefficients only).
    C evaluate_exact(const std::map<int, mpq_class>& point) const;

    std::string to_string() const;

private:
    std::map<Monomial, C> terms_;
};

template <class C>
MultiPoly<C> multiply(const MultiPoly<C>& a, const MultiPoly<C>& b) {
    return a * b;
}

/// Ideal generated by det(X_{.,.,k}) - 1 over the smooth coordinates k.
struct IdealI0 {
    std::set<int> smooth_coords;
    MultiPoly<mpq_class> generator(int k) const;
};

struct NonMembershipCertificate {
    enum class Status { Certified, Inconclusive };
    Status status = Status::Inconclusive;
    std::map<int, mpq_class> point;  ///< a point of Z(I0) where R does not vanish
    Complex value;
    Real threshold;
    int attempts_used = 0;

    bool certified() const { return status == Status::Certified; }
};

/// Samples rational points of Z(I0) (x22 solved from det = 1 for smooth k) and
/// certifies R not in I0 at the first point with |R| > sqrt(tol) ||R||.
NonMembershipCertificate not_in_I0(const MultiPoly<Complex>& R, const IdealI0& I0, int attempts,
                                   std::uint64_t seed, const PrecisionContext& ctx);
/// Exact variant: certifies at the first point with R != 0.
NonMembershipCertificate not_in_I0(const MultiPoly<mpq_class>& R, const IdealI0& I0, int attempts,
                                   std::uint64_t seed, const PrecisionContext& ctx);

/// Coefficients of one isogeny pair in a relation polynomial: de Rham entries
/// (a, 0; b, c), the coordinate g is built from (k_g) and the one H multiplies (k_h),
/// with their base changes h = Pi X.
template <class C>
struct PairCoefficients {
    C a, b, c;
    std::array<std::array<C, 2>, 2> pi_g, pi_h;
    int k_g = 0, k_h = 0;
};

/// H_{which+1} as a polynomial. which = 0, 1: g = (-G21, G11)(a, 0; b, c), H = g h;
/// which = 2, 3: g = (a G22 - b G12, -c G12). First way: G = h_sing (only its first
/// column enters), h = h_cm. Second way: G = h_target, h = h_source.
/// For which = 0: R = c G11 h21 + (b G11 - a G21) h11.
template <class C>
MultiPoly<C> build_R_degenerate(const PairCoefficients<C>& pc, int which, const C& one);

MultiPoly<Complex> build_R_degenerate(const FirstWayTerms& t, int which, const PrecisionContext& ctx);
/// Second way: H1..H4 (which = 0..3) with h3 the target (right), h2 the source (left).
MultiPoly<Complex> build_R_degenerate(const SecondWayTerms& t, int which, const PrecisionContext& ctx);

/// Product relations: first way single pair H1 H2 - (rs/2 pi i) det(h_cm)^2 (degree 4);
/// two pairs r2 s2 H1' H2' - r1 s1 H1'' H2'' (degree 4);
/// second way H1 H2 H3 H4 - pqrs det(h3)^2 det(h2)^2 (degree 8).
MultiPoly<Complex> build_R_product(const RelationWitness& w, const PrecisionContext& ctx);

/// Degenerate branch when some H is forced to vanish, otherwise the product relation.
MultiPoly<Complex> build_R(const RelationWitness& w, const PrecisionContext& ctx);

/// Smooth coordinates touched by the relation (the CM ones).
IdealI0 ideal_for(const RelationWitness& w);

/// |R(v)| / (||R|| max(1, max |v|)^deg R), the scale-free vanishing measure.
Real relative_value(const MultiPoly<Complex>& R, const Assignment& values, mpfr_prec_t bits);

/// Values X = Pi^-1 h of every coordinate in the instance.
Assignment instance_values(const RelationInstance& inst);

}  // namespace zp
