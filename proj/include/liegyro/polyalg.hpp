#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace liegyro {

using Rational = boost::multiprecision::cpp_rational;

struct Monomial {
    std::vector<unsigned> exponents;  // one entry per variable

    unsigned degree() const;
    bool operator==(const Monomial& other) const = default;
};

// Graded-lexicographic order, highest term first, so that map iteration is
// also the canonical display order.
struct GrlexDesc {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial over exact rationals. Zero coefficients are
// never stored; two polynomials are equal iff their term maps are equal.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexDesc>;

    explicit Polynomial(int varcount);

    static Polynomial zero(int varcount) { return Polynomial(varcount); }
    static Polynomial constant(int varcount, const Rational& c);
    static Polynomial variable(int varcount, int index);

    int varcount() const { return varcount_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rational& c);

    Polynomial operator-() const;
    Polynomial scaled(const Rational& s) const;
    Polynomial derivative(int var) const;

    template <class T>
    T evaluate(std::span<const T> point) const;

    // Deterministic rendering: grlex term order, explicit rational
    // coefficients, variables named from `names` (or x0, x1, ... if empty).
    std::string to_string(std::span<const std::string> names = {}) const;

    bool operator==(const Polynomial& other) const = default;

private:
    int varcount_;
    TermMap terms_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

// Polynomial vector field h; component i is dz_i/dt = h_i(z).
struct PolyVectorField {
    std::vector<Polynomial> components;

    int varcount() const { return components.empty() ? 0 : components.front().varcount(); }
};

// The derivation operator of the field: D(p) = sum_k h_k dp/dz_k.
Polynomial derivation_apply(const PolyVectorField& field, const Polynomial& p);

// n-fold iterate of derivation_apply (n = 0 is the identity). The order cap
// guards against term blow-up: symbolic powers are a verification tool, not
// the propagator.
inline constexpr int kDerivationOrderCap = 8;
Polynomial derivation_power(const PolyVectorField& field, const Polynomial& p, int n,
                            int order_cap = kDerivationOrderCap);

// True iff p is annihilated by the derivation, i.e. p is an integral of
// motion of the field.
bool kernel_check(const PolyVectorField& field, const Polynomial& p);

// --- Euler-Poisson field over the 12 variables ------------------------------
//
// Variable order: Omega1, Omega2, Omega3, R11, R12, R13, R21, R22, R23,
// R31, R32, R33. Inertia moments enter as fixed rational constants.

enum EpVar : int {
    kOmega1 = 0,
    kOmega2,
    kOmega3,
    kR11,
    kR12,
    kR13,
    kR21,
    kR22,
    kR23,
    kR31,
    kR32,
    kR33,
};

inline constexpr int kEpVarCount = 12;

std::span<const std::string> ep_variable_names();

// Symmetric body, inertia diag(i2, i2, i3).
PolyVectorField ep_field(const Rational& i2, const Rational& i3);
// General diagonal inertia diag(i1, i2, i3).
PolyVectorField ep_field_general(const Rational& i1, const Rational& i2, const Rational& i3);
// The pure angular-velocity field on (Omega1, Omega2, Omega3) alone; the
// R-derivative terms of the 12-variable operator drop when it acts on
// functions of Omega only, and this 3-variable form mirrors that usage.
PolyVectorField euler_field(const Rational& i2, const Rational& i3);

// Canonical integrals of motion as 12-variable polynomials.
Polynomial ep_energy(const Rational& i2, const Rational& i3);
Polynomial ep_momentum(const Rational& i2, const Rational& i3, int i);  // i in 0..2
Polynomial ep_transverse_norm2();  // Omega1^2 + Omega2^2

// Weighted momentum form (A Omega, G_i) for A = diag(a2, a2, a3); row i in 0..2.
Polynomial ep_momentum_form(const Rational& a2, const Rational& a3, int i);

// Recursion-free value of D^order (A Omega, G_i) as a polynomial, valid for
// any order >= 1. Built from the conserved quantities of the symmetric-body
// field; used as the exact oracle for repeated derivation.
Polynomial ep_momentum_form_derivative(const Rational& i2, const Rational& i3,
                                       const Rational& a2, const Rational& a3, int i, int order);

}  // namespace liegyro
