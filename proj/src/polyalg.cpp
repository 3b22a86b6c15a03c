#include "liegyro/polyalg.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace liegyro {

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (unsigned e : exponents) d += e;
    return d;
}

bool GrlexDesc::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exponents > b.exponents;
}

Polynomial::Polynomial(int varcount) : varcount_(varcount) {
    if (varcount < 0) throw std::invalid_argument("Polynomial: negative varcount");
}

Polynomial Polynomial::constant(int varcount, const Rational& c) {
    Polynomial p(varcount);
    p.add_term(Monomial{std::vector<unsigned>(varcount, 0)}, c);
    return p;
}

Polynomial Polynomial::variable(int varcount, int index) {
    if (index < 0 || index >= varcount) throw std::invalid_argument("Polynomial: variable index out of range");
    Monomial m{std::vector<unsigned>(varcount, 0)};
    m.exponents[index] = 1;
    Polynomial p(varcount);
    p.add_term(m, 1);
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    // grlex-descending order: the first term has the highest total degree
    return static_cast<int>(terms_.begin()->first.degree());
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (static_cast<int>(m.exponents.size()) != varcount_)
        throw std::invalid_argument("Polynomial: monomial varcount mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& s) const {
    Polynomial out(varcount_);
    if (s == 0) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= varcount_) throw std::invalid_argument("Polynomial: variable index out of range");
    Polynomial out(varcount_);
    for (const auto& [m, c] : terms_) {
        unsigned e = m.exponents[var];
        if (e == 0) continue;
        Monomial dm = m;
        dm.exponents[var] = e - 1;
        out.add_term(dm, c * e);
    }
    return out;
}

namespace {

void check_same_varcount(const Polynomial& a, const Polynomial& b) {
    if (a.varcount() != b.varcount())
        throw std::invalid_argument("Polynomial: varcount mismatch");
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same_varcount(a, b);
    Polynomial out = a;
    for (const auto& [m, c] : b.terms()) out.add_term(m, c);
    return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    check_same_varcount(a, b);
    Polynomial out = a;
    for (const auto& [m, c] : b.terms()) out.add_term(m, -c);
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same_varcount(a, b);
    Polynomial out(a.varcount());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            Monomial m = ma;
            for (size_t k = 0; k < m.exponents.size(); ++k) m.exponents[k] += mb.exponents[k];
            out.add_term(m, ca * cb);
        }
    return out;
}

template <class T>
T Polynomial::evaluate(std::span<const T> point) const {
    if (static_cast<int>(point.size()) != varcount_)
        throw std::invalid_argument("Polynomial: evaluation point size mismatch");
    T acc{0};
    for (const auto& [m, c] : terms_) {
        T term;
        if constexpr (std::is_same_v<T, double>)
            term = c.template convert_to<double>();
        else
            term = c;
        for (size_t k = 0; k < m.exponents.size(); ++k)
            for (unsigned e = 0; e < m.exponents[k]; ++e) term *= point[k];
        acc += term;
    }
    return acc;
}

template double Polynomial::evaluate<double>(std::span<const double>) const;
template Rational Polynomial::evaluate<Rational>(std::span<const Rational>) const;

std::string Polynomial::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        bool has_vars = m.degree() > 0;
        bool unit = mag == 1;
        if (!unit || !has_vars) out << mag;
        bool need_star = !unit && has_vars;
        for (size_t k = 0; k < m.exponents.size(); ++k) {
            unsigned e = m.exponents[k];
            if (e == 0) continue;
            if (need_star) out << "*";
            need_star = true;
            if (k < names.size())
                out << names[k];
            else
                out << "x" << k;
            if (e > 1) out << "^" << e;
        }
    }
    return out.str();
}

Polynomial derivation_apply(const PolyVectorField& field, const Polynomial& p) {
    if (field.varcount() != p.varcount())
        throw std::invalid_argument("derivation_apply: field/polynomial varcount mismatch");
    Polynomial out(p.varcount());
    for (int k = 0; k < p.varcount(); ++k) {
        Polynomial dk = p.derivative(k);
        if (dk.is_zero() || field.components[k].is_zero()) continue;
        out = out + field.components[k] * dk;
    }
    return out;
}

Polynomial derivation_power(const PolyVectorField& field, const Polynomial& p, int n, int order_cap) {
    if (n < 0) throw std::invalid_argument("derivation_power: negative order");
    if (n > order_cap)
        throw std::invalid_argument("derivation_power: order " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(order_cap));
    Polynomial out = p;
    for (int k = 0; k < n; ++k) out = derivation_apply(field, out);
    return out;
}

bool kernel_check(const PolyVectorField& field, const Polynomial& p) {
    return derivation_apply(field, p).is_zero();
}

// --- Euler-Poisson field -----------------------------------------------------

namespace {

const std::array<std::string, 12> kEpNames = {"O1", "O2", "O3", "R11", "R12", "R13",
                                              "R21", "R22", "R23", "R31", "R32", "R33"};

Polynomial ep_var(int index) { return Polynomial::variable(kEpVarCount, index); }

int r_index(int i, int j) { return kR11 + 3 * i + j; }

}  // namespace

std::span<const std::string> ep_variable_names() { return kEpNames; }

PolyVectorField ep_field_general(const Rational& i1, const Rational& i2, const Rational& i3) {
    if (i1 <= 0 || i2 <= 0 || i3 <= 0)
        throw std::invalid_argument("ep_field: inertia moments must be positive");
    PolyVectorField f;
    f.components.reserve(kEpVarCount);
    // dOmega/dt = I^-1 [I Omega, Omega]
    f.components.push_back((ep_var(kOmega2) * ep_var(kOmega3)).scaled((i2 - i3) / i1));
    f.components.push_back((ep_var(kOmega3) * ep_var(kOmega1)).scaled((i3 - i1) / i2));
    f.components.push_back((ep_var(kOmega1) * ep_var(kOmega2)).scaled((i1 - i2) / i3));
    // dG_i/dt = [G_i, Omega], rowwise
    for (int i = 0; i < 3; ++i) {
        f.components.push_back(ep_var(r_index(i, 1)) * ep_var(kOmega3) -
                               ep_var(r_index(i, 2)) * ep_var(kOmega2));
        f.components.push_back(ep_var(r_index(i, 2)) * ep_var(kOmega1) -
                               ep_var(r_index(i, 0)) * ep_var(kOmega3));
        f.components.push_back(ep_var(r_index(i, 0)) * ep_var(kOmega2) -
                               ep_var(r_index(i, 1)) * ep_var(kOmega1));
    }
    return f;
}

PolyVectorField ep_field(const Rational& i2, const Rational& i3) {
    return ep_field_general(i2, i2, i3);
}

PolyVectorField euler_field(const Rational& i2, const Rational& i3) {
    if (i2 <= 0 || i3 <= 0)
        throw std::invalid_argument("euler_field: inertia moments must be positive");
    auto v = [](int k) { return Polynomial::variable(3, k); };
    PolyVectorField f;
    f.components.push_back((v(1) * v(2)).scaled((i2 - i3) / i2));
    f.components.push_back((v(2) * v(0)).scaled((i3 - i2) / i2));
    f.components.push_back(Polynomial::zero(3));
    return f;
}

Polynomial ep_energy(const Rational& i2, const Rational& i3) {
    Polynomial e = (ep_var(kOmega1) * ep_var(kOmega1)).scaled(i2 / 2) +
                   (ep_var(kOmega2) * ep_var(kOmega2)).scaled(i2 / 2) +
                   (ep_var(kOmega3) * ep_var(kOmega3)).scaled(i3 / 2);
    return e;
}

Polynomial ep_momentum(const Rational& i2, const Rational& i3, int i) {
    if (i < 0 || i > 2) throw std::invalid_argument("ep_momentum: row index out of range");
    return (ep_var(r_index(i, 0)) * ep_var(kOmega1)).scaled(i2) +
           (ep_var(r_index(i, 1)) * ep_var(kOmega2)).scaled(i2) +
           (ep_var(r_index(i, 2)) * ep_var(kOmega3)).scaled(i3);
}

Polynomial ep_transverse_norm2() {
    return ep_var(kOmega1) * ep_var(kOmega1) + ep_var(kOmega2) * ep_var(kOmega2);
}

Polynomial ep_momentum_form(const Rational& a2, const Rational& a3, int i) {
    if (i < 0 || i > 2) throw std::invalid_argument("ep_momentum_form: row index out of range");
    return (ep_var(r_index(i, 0)) * ep_var(kOmega1)).scaled(a2) +
           (ep_var(r_index(i, 1)) * ep_var(kOmega2)).scaled(a2) +
           (ep_var(r_index(i, 2)) * ep_var(kOmega3)).scaled(a3);
}

Polynomial ep_momentum_form_derivative(const Rational& i2, const Rational& i3,
                                       const Rational& a2, const Rational& a3, int i, int order) {
    if (order < 1) throw std::invalid_argument("ep_momentum_form_derivative: order must be >= 1");
    if (i < 0 || i > 2) throw std::invalid_argument("ep_momentum_form_derivative: row index out of range");
    const Rational ratio = i3 / i2;
    const Rational prefactor = a3 - ratio * a2;

    // freq2 = Omega1^2 + Omega2^2 + (i3/i2)^2 Omega3^2, conserved by the field
    Polynomial freq2 = ep_transverse_norm2() +
                       (ep_var(kOmega3) * ep_var(kOmega3)).scaled(ratio * ratio);
    // (M Omega, G_i) with M = diag((i3/i2) O3^2, (i3/i2) O3^2, -(O1^2 + O2^2))
    Polynomial m_form =
        (ep_var(kOmega3) * ep_var(kOmega3) *
         (ep_var(r_index(i, 0)) * ep_var(kOmega1) + ep_var(r_index(i, 1)) * ep_var(kOmega2)))
            .scaled(ratio) -
        ep_transverse_norm2() * ep_var(kOmega3) * ep_var(r_index(i, 2));
    // [G_i, Omega]_3 = R_i1 Omega2 - R_i2 Omega1
    Polynomial g_cross3 =
        ep_var(r_index(i, 0)) * ep_var(kOmega2) - ep_var(r_index(i, 1)) * ep_var(kOmega1);

    Polynomial freq_pow = Polynomial::constant(kEpVarCount, 1);
    if (order % 2 == 0) {
        int n = order / 2;  // n >= 1
        for (int k = 0; k < n - 1; ++k) freq_pow = freq_pow * freq2;
        Rational sign = (n % 2 == 0) ? Rational(-1) : Rational(1);  // -(-1)^n
        return (freq_pow * m_form).scaled(prefactor * sign);
    }
    int n = (order - 1) / 2;  // n >= 0
    for (int k = 0; k < n; ++k) freq_pow = freq_pow * freq2;
    Rational sign = (n % 2 == 0) ? Rational(1) : Rational(-1);  // (-1)^n
    return (freq_pow * ep_var(kOmega3) * g_cross3).scaled(prefactor * sign);
}

}  // namespace liegyro
