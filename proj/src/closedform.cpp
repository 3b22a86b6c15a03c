#include "liegyro/closedform.hpp"

#include "liegyro/polyalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace liegyro {

namespace {

// 1 - cos(x) without the cancellation near x = 0
double one_minus_cos(double x) {
    double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

}  // namespace

RigidParams rigid_params(const DiagInertia& inertia, const Vec3& momentum) {
    RigidParams p;
    double mn = norm(momentum);
    p.phi = (inertia.i2 - inertia.i3) * momentum.z / (inertia.i2 * inertia.i3);
    p.k = mn / inertia.i2;
    p.mhat = mn > 0.0 ? (1.0 / mn) * momentum : Vec3{};
    return p;
}

SeriesConstants series_constants(const GeneralSolutionInput& inp) {
    const double i2 = inp.inertia.i2, i3 = inp.inertia.i3;
    const Vec3& w = inp.omega0;
    const double ratio = i3 / i2;
    SeriesConstants c;
    c.phiP = (i2 - i3) * w.z / i2;
    c.kP = std::sqrt(w.x * w.x + w.y * w.y + ratio * ratio * w.z * w.z);
    c.mMat = {ratio * w.z * w.z, ratio * w.z * w.z, -(w.x * w.x + w.y * w.y)};
    c.b2 = {1.0, 1.0, 2.0 - ratio};
    c.b3 = {ratio, ratio, 1.0};
    return c;
}

const Mat3& t3_spin_matrix() {
    static const Mat3 t3{{0, 1, 0, -1, 0, 0, 0, 0, 0}};
    return t3;
}

Vec3 omega_solution(const GeneralSolutionInput& inp, double t) {
    const Vec3& w = inp.omega0;
    double phiP = (inp.inertia.i2 - inp.inertia.i3) * w.z / inp.inertia.i2;
    double c = std::cos(phiP * t), s = std::sin(phiP * t);
    return {w.x * c + w.y * s, -w.x * s + w.y * c, w.z};
}

namespace {

// One row of the solution in the transverse (generic) branch. All divisions
// by Omega3' have been cancelled analytically, and the conserved combination
// s_i = O1' R_i1' + O2' R_i2' is kept as is so that nothing of order one is
// subtracted when the transverse velocity is small.
struct RowSolution {
    double r1, r2, r3;
};

RowSolution solve_row_transverse(const GeneralSolutionInput& inp, int i, double t, double w1t,
                                 double w2t) {
    const double i2 = inp.inertia.i2, i3 = inp.inertia.i3;
    const double ratio = i3 / i2;
    const Vec3& w = inp.omega0;
    const double transverse = w.x * w.x + w.y * w.y;
    const double kP2 = transverse + ratio * ratio * w.z * w.z;
    const double kP = std::sqrt(kP2);

    const double r1 = inp.r0(i, 0), r2 = inp.r0(i, 1), r3 = inp.r0(i, 2);
    const double s_i = w.x * r1 + w.y * r2;           // (1/i2) projection of m_i
    const double g3_i = r1 * w.y - r2 * w.x;          // [G_i', Omega']_3
    const double q_i = ratio * w.z * s_i - transverse * r3;  // (M Omega', G_i') / Omega3'

    const double ck = std::cos(kP * t), sk = std::sin(kP * t);
    const double c_i = one_minus_cos(kP * t) * q_i / kP2 + sk * g3_i / kP;  // R_i3(t) - R_i3'
    const double r3dot = sk * q_i / kP + ck * g3_i;
    const double coef = s_i - ratio * w.z * c_i;  // (m_i - i3 Omega3' R_i3(t)) / i2

    RowSolution out;
    out.r3 = r3 + c_i;
    out.r1 = (w2t * r3dot + coef * w1t) / transverse;
    out.r2 = (-w1t * r3dot + coef * w2t) / transverse;
    return out;
}

bool transverse_branch(const GeneralSolutionInput& inp) {
    const Vec3& w = inp.omega0;
    double transverse = w.x * w.x + w.y * w.y;
    double eps = 1e-13 * (dot(w, w) + std::numeric_limits<double>::min());
    return transverse > eps;
}

Mat3 r_spin_branch(const GeneralSolutionInput& inp, double t) {
    // Uniform precession of every row about the conserved third axis.
    double c = std::cos(inp.omega0.z * t), s = std::sin(inp.omega0.z * t);
    Mat3 out;
    for (int i = 0; i < 3; ++i) {
        double r1 = inp.r0(i, 0), r2 = inp.r0(i, 1);
        out(i, 0) = r1 * c + r2 * s;
        out(i, 1) = -r1 * s + r2 * c;
        out(i, 2) = inp.r0(i, 2);
    }
    return out;
}

}  // namespace

Mat3 r_general(const GeneralSolutionInput& inp, double t) {
    if (t == 0.0) return inp.r0;
    if (!transverse_branch(inp)) return r_spin_branch(inp, t);
    Vec3 wt = omega_solution(inp, t);
    Mat3 out;
    for (int i = 0; i < 3; ++i) {
        RowSolution row = solve_row_transverse(inp, i, t, wt.x, wt.y);
        out(i, 0) = row.r1;
        out(i, 1) = row.r2;
        out(i, 2) = row.r3;
    }
    return out;
}

Vec3 r3_solution(const GeneralSolutionInput& inp, double t) {
    if (inp.omega0.z == 0.0)
        throw std::domain_error(
            "r3_solution: Omega3' = 0; use r_general, whose regrouped form covers this case");
    Mat3 r = r_general(inp, t);
    return r.col(2);
}

Mat3 rigid_rotation(const DiagInertia& inertia, const Vec3& momentum, double t) {
    double mn = norm(momentum);
    if (mn == 0.0) return Mat3::identity();
    if (std::fabs(momentum.x) > 1e-12 * mn)
        throw std::invalid_argument(
            "rigid_rotation: momentum must have m1 = 0; rotate the lab frame with align_frame first");

    if (momentum.y == 0.0) {
        // spin about the third axis with angle (m3 / i3) t
        double a = momentum.z / inertia.i3 * t;
        double c = std::cos(a), s = std::sin(a);
        return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
    }

    RigidParams p = rigid_params(inertia, momentum);
    const double m2 = p.mhat.y, m3 = p.mhat.z;
    const double ck = std::cos(p.k * t), sk = std::sin(p.k * t);
    const double vk = one_minus_cos(p.k * t);
    const double cp = std::cos(p.phi * t), sp = std::sin(p.phi * t);
    // mhat2^2 + mhat3^2 ck regrouped as 1 - mhat3^2 (1 - ck), which is exact
    // at t = 0 (and likewise for the (3,3) entry)
    const double mid = 1.0 - m3 * m3 * vk;

    Mat3 r;
    r(0, 0) = ck * cp - m3 * sk * sp;
    r(0, 1) = -ck * sp - m3 * sk * cp;
    r(0, 2) = m2 * sk;
    r(1, 0) = m3 * sk * cp + mid * sp;
    r(1, 1) = -m3 * sk * sp + mid * cp;
    r(1, 2) = m2 * m3 * vk;
    r(2, 0) = -m2 * sk * cp + m2 * m3 * vk * sp;
    r(2, 1) = m2 * sk * sp + m2 * m3 * vk * cp;
    r(2, 2) = 1.0 - m2 * m2 * vk;
    return r;
}

FrameAlignment align_frame(const Vec3& momentum) {
    double rho = std::hypot(momentum.x, momentum.y);
    if (rho == 0.0) return {Mat3::identity(), momentum};
    double c = momentum.y / rho, s = momentum.x / rho;
    Mat3 q{{c, -s, 0, s, c, 0, 0, 0, 1}};
    return {q, Vec3{0.0, rho, momentum.z}};
}

PrecessionGeometry precession_geometry(const DiagInertia& inertia, const Vec3& momentum, double t) {
    double mn = norm(momentum);
    if (mn == 0.0) throw std::domain_error("precession_geometry: zero momentum");
    if (std::fabs(momentum.x) > 1e-12 * mn)
        throw std::invalid_argument("precession_geometry: momentum must have m1 = 0");

    RigidParams p = rigid_params(inertia, momentum);
    Mat3 r = rigid_rotation(inertia, momentum, t);
    PrecessionGeometry g;
    g.cos_theta = dot(p.mhat, r.col(2));
    // analytic derivative of the third column
    double ck = std::cos(p.k * t), sk = std::sin(p.k * t);
    Vec3 r3dot{p.k * p.mhat.y * ck, p.k * p.mhat.y * p.mhat.z * sk,
               -p.k * p.mhat.y * p.mhat.y * sk};
    g.r3_speed = norm(r3dot);
    return g;
}

double momentum_form_derivative(const DiagInertia& inertia, const Vec3& omega0, const Mat3& r0,
                                double a2, double a3, int i, int order) {
    if (order < 1) throw std::invalid_argument("momentum_form_derivative: order must be >= 1");
    if (i < 0 || i > 2) throw std::invalid_argument("momentum_form_derivative: row index out of range");
    const double ratio = inertia.i3 / inertia.i2;
    const double prefactor = a3 - ratio * a2;
    const Vec3& w = omega0;
    const double transverse = w.x * w.x + w.y * w.y;
    const double kP2 = transverse + ratio * ratio * w.z * w.z;
    const double s_i = w.x * r0(i, 0) + w.y * r0(i, 1);
    const double m_form = ratio * w.z * w.z * s_i - transverse * w.z * r0(i, 2);
    const double g_cross3 = r0(i, 0) * w.y - r0(i, 1) * w.x;

    if (order % 2 == 0) {
        int n = order / 2;
        double sign = (n % 2 == 0) ? -1.0 : 1.0;  // -(-1)^n
        return prefactor * sign * std::pow(kP2, n - 1) * m_form;
    }
    int n = (order - 1) / 2;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    return prefactor * sign * std::pow(kP2, n) * w.z * g_cross3;
}

template <class Scalar>
Scalar r11_even_coefficient(const Scalar& k, const Scalar& phi, const Scalar& mhat3, int n) {
    if (n < 0) throw std::invalid_argument("r11_even_coefficient: negative order");
    if (n == 0) return Scalar(1);
    // binomial row C(2n, j), j = 0..2n
    std::vector<Scalar> binom(2 * n + 1);
    binom[0] = Scalar(1);
    for (int j = 0; j < 2 * n; ++j) binom[j + 1] = binom[j] * Scalar(2 * n - j) / Scalar(j + 1);
    // power tables
    std::vector<Scalar> kp(2 * n + 1), pp(2 * n + 1);
    kp[0] = Scalar(1);
    pp[0] = Scalar(1);
    for (int j = 1; j <= 2 * n; ++j) {
        kp[j] = kp[j - 1] * k;
        pp[j] = pp[j - 1] * phi;
    }
    Scalar even_sum(0), odd_sum(0);
    for (int a = 0; a <= n; ++a) even_sum += binom[2 * a] * kp[2 * a] * pp[2 * n - 2 * a];
    for (int a = 0; a < n; ++a) odd_sum += binom[2 * a + 1] * kp[2 * a + 1] * pp[2 * n - 2 * a - 1];
    Scalar total = even_sum + mhat3 * odd_sum;
    return (n % 2 == 0) ? total : -total;
}

template double r11_even_coefficient<double>(const double&, const double&, const double&, int);
template Rational r11_even_coefficient<Rational>(const Rational&, const Rational&, const Rational&,
                                                 int);

double r11_coefficient(const DiagInertia& inertia, const Vec3& momentum, int n) {
    double mn = norm(momentum);
    if (mn == 0.0) throw std::domain_error("r11_coefficient: zero momentum");
    if (std::fabs(momentum.x) > 1e-12 * mn)
        throw std::invalid_argument("r11_coefficient: momentum must have m1 = 0");
    RigidParams p = rigid_params(inertia, momentum);
    return r11_even_coefficient<double>(p.k, p.phi, p.mhat.z, n);
}

double r11_partial_sum(const DiagInertia& inertia, const Vec3& momentum, double t, int n_max) {
    double mn = norm(momentum);
    if (mn == 0.0) throw std::domain_error("r11_partial_sum: zero momentum");
    if (std::fabs(momentum.x) > 1e-12 * mn)
        throw std::invalid_argument("r11_partial_sum: momentum must have m1 = 0");
    RigidParams p = rigid_params(inertia, momentum);
    double sum = 0.0;
    double factor = 1.0;  // t^{2n} / (2n)!
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) factor *= t * t / ((2.0 * n - 1.0) * (2.0 * n));
        sum += factor * r11_even_coefficient<double>(p.k, p.phi, p.mhat.z, n);
    }
    return sum;
}

}  // namespace liegyro
