#pragma once

#include <array>
#include <vector>

namespace liegyro {

// Convention used across the whole library: the rotation matrix R maps
// body-frame coordinates to laboratory-frame coordinates, and the i-th ROW
// of R is the vector G_i = (R_i1, R_i2, R_i3) whose evolution is
// dG_i/dt = [G_i, Omega].

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x, double y, double z);  // throws std::invalid_argument on NaN/inf

    double operator[](int i) const;
    double& operator[](int i);
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

struct Mat3 {
    // Row-major entries; defaults to the identity.
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    Mat3() = default;
    explicit Mat3(const std::array<double, 9>& entries);  // finite check

    static Mat3 identity() { return Mat3{}; }

    double operator()(int i, int j) const { return a[3 * i + j]; }
    double& operator()(int i, int j) { return a[3 * i + j]; }

    Vec3 row(int i) const;
    Vec3 col(int j) const;
    Mat3 transpose() const;
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& m, const Vec3& v);

// max |M M^T - 1| over all entries
double orthogonality_error(const Mat3& m);
double det(const Mat3& m);
bool is_rotation(const Mat3& m, double tol = 1e-9);

// Inertia tensor of a symmetric body, diag(i2, i2, i3). The spherical case
// i2 == i3 is allowed (the precession frequency degenerates to zero);
// is_spherical() lets callers flag it.
struct DiagInertia {
    double i2;
    double i3;

    DiagInertia(double i2, double i3);  // both must be finite and > 0

    std::array<double, 3> moments() const { return {i2, i2, i3}; }
    bool is_spherical() const { return i2 == i3; }
};

// The 12 dynamical variables: body-frame angular velocity plus rotation.
struct BodyState {
    Vec3 omega;
    Mat3 r;

    BodyState(const Vec3& omega, const Mat3& r);  // r must pass is_rotation at 1e-9
};

struct MotionInvariants {
    double energy = 0.0;   // E = 1/2 sum_i I_i Omega_i^2
    Vec3 momentum;         // m_i = sum_j I_j R_ij Omega_j (lab frame)
    double omega3 = 0.0;   // conserved only for symmetric bodies
};

MotionInvariants invariants_of(const DiagInertia& inertia, const BodyState& state);
// General diagonal-inertia variant, used by the reference integrator.
MotionInvariants invariants_of(const std::array<double, 3>& moments, const BodyState& state);
// Raw-values variant: r need not pass the rotation check (diagnostics for
// degraded or non-rotation data).
MotionInvariants invariants_of(const std::array<double, 3>& moments, const Vec3& omega,
                               const Mat3& r);

// Rigid-body initial data: R(0) = identity, Omega_i(0) = m_i / I_i.
BodyState rigid_initial_state(const DiagInertia& inertia, const Vec3& momentum);

struct TrajectorySample {
    double t;
    BodyState state;
    MotionInvariants invariants;
};

using Trajectory = std::vector<TrajectorySample>;

}  // namespace liegyro
