#include "liegyro/rigidcore.hpp"

#include <cmath>
#include <stdexcept>

namespace liegyro {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

Vec3::Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    require_finite(x, "Vec3");
    require_finite(y, "Vec3");
    require_finite(z, "Vec3");
}

double Vec3::operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
double& Vec3::operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Mat3::Mat3(const std::array<double, 9>& entries) : a(entries) {
    for (double v : a) require_finite(v, "Mat3");
}

Vec3 Mat3::row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
Vec3 Mat3::col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }

Mat3 Mat3::transpose() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {dot(m.row(0), v), dot(m.row(1), v), dot(m.row(2), v)};
}

double orthogonality_error(const Mat3& m) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = dot(m.row(i), m.row(j)) - (i == j ? 1.0 : 0.0);
            worst = std::max(worst, std::fabs(s));
        }
    return worst;
}

double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

bool is_rotation(const Mat3& m, double tol) {
    return orthogonality_error(m) <= tol && std::fabs(det(m) - 1.0) <= tol;
}

DiagInertia::DiagInertia(double i2_, double i3_) : i2(i2_), i3(i3_) {
    require_finite(i2, "DiagInertia");
    require_finite(i3, "DiagInertia");
    if (i2 <= 0.0 || i3 <= 0.0) throw std::invalid_argument("DiagInertia: moments must be positive");
}

BodyState::BodyState(const Vec3& omega_, const Mat3& r_) : omega(omega_), r(r_) {
    if (!is_rotation(r)) throw std::invalid_argument("BodyState: r is not a rotation matrix");
}

MotionInvariants invariants_of(const std::array<double, 3>& moments, const Vec3& omega,
                               const Mat3& r) {
    MotionInvariants inv;
    inv.energy = 0.5 * (moments[0] * omega.x * omega.x + moments[1] * omega.y * omega.y +
                        moments[2] * omega.z * omega.z);
    Vec3 iw{moments[0] * omega.x, moments[1] * omega.y, moments[2] * omega.z};
    inv.momentum = r * iw;
    inv.omega3 = omega.z;
    return inv;
}

MotionInvariants invariants_of(const std::array<double, 3>& moments, const BodyState& state) {
    return invariants_of(moments, state.omega, state.r);
}

MotionInvariants invariants_of(const DiagInertia& inertia, const BodyState& state) {
    return invariants_of(inertia.moments(), state);
}

BodyState rigid_initial_state(const DiagInertia& inertia, const Vec3& momentum) {
    Vec3 omega{momentum.x / inertia.i2, momentum.y / inertia.i2, momentum.z / inertia.i3};
    return BodyState{omega, Mat3::identity()};
}

}  // namespace liegyro
