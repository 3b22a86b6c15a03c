#pragma once

#include "liegyro/rigidcore.hpp"

namespace liegyro {

// Cauchy data for the general symmetric-body problem. r0 may be any finite
// matrix; it does not have to be a rotation (the solution formulas are linear
// in the initial rows and orthogonality, when present, is inherited).
struct GeneralSolutionInput {
    DiagInertia inertia;
    Vec3 omega0;
    Mat3 r0;
};

// Derived constants of the rigid-body solution (initial data R = identity,
// Omega = m / I, momentum given in the adapted lab frame with m1 = 0):
//   phi  - spin frequency about the symmetry axis, (i2 - i3) m3 / (i2 i3)
//   k    - precession frequency of the symmetry axis, |m| / i2
//   mhat - unit vector along the conserved angular momentum
struct RigidParams {
    double phi = 0.0;
    double k = 0.0;
    Vec3 mhat;
};

RigidParams rigid_params(const DiagInertia& inertia, const Vec3& momentum);

// Constants entering the series solution for arbitrary Cauchy data:
//   phiP  - angular-velocity rotation rate (i2 - i3) Omega3' / i2
//   kP    - sqrt(Omega1'^2 + Omega2'^2 + (i3/i2)^2 Omega3'^2)
//   mMat  - diagonal of M = diag((i3/i2) O3'^2, (i3/i2) O3'^2, -(O1'^2+O2'^2))
//   b2/b3 - diagonals of the two constant matrices of the second-derivative
//           identity D^2 R_ij = -|Omega'|^2 R_ij + (B_i)_j Omega_j'
struct SeriesConstants {
    double phiP = 0.0;
    double kP = 0.0;
    std::array<double, 3> mMat{};
    std::array<double, 3> b2{};
    std::array<double, 3> b3{};
};

SeriesConstants series_constants(const GeneralSolutionInput& inp);

// Generator of rotations about the third axis; D Omega = phiP * T3 * Omega.
const Mat3& t3_spin_matrix();

// Angular velocity at time t: the transverse part rotates clockwise with
// frequency phiP, the third component is conserved.
Vec3 omega_solution(const GeneralSolutionInput& inp, double t);

// Third column (R_13, R_23, R_33) of the general solution. Requires
// Omega3' != 0; for Omega3' = 0 use r_general, whose regrouped form of the
// same expression is total.
Vec3 r3_solution(const GeneralSolutionInput& inp, double t);

// Full rotation-matrix solution for arbitrary Cauchy data. Uses the
// conserved-quantity reconstruction of columns 1-2 when the transverse
// angular velocity is nonzero, and the uniform-precession form when it
// vanishes (threshold 1e-13 * |Omega'|^2).
Mat3 r_general(const GeneralSolutionInput& inp, double t);

// Rigid-body rotation matrix for momentum m given in the adapted lab frame
// (m1 = 0, validated at 1e-12 * |m|): R(0) = identity, Omega(0) = m / I.
// m = 0 returns the identity. For general m, align the frame first:
// with (Q, ma) = align_frame(m), R_m(t) = Q^T rigid_rotation(I, ma, t) Q.
Mat3 rigid_rotation(const DiagInertia& inertia, const Vec3& momentum, double t);

// Rotation about axis 3 taking m to (0, sqrt(m1^2 + m2^2), m3), plus the
// aligned momentum. Identity when m1 = m2 = 0.
struct FrameAlignment {
    Mat3 rotation;
    Vec3 aligned;
};
FrameAlignment align_frame(const Vec3& momentum);

// Geometry of the symmetry axis (third column of the rigid rotation):
//   cos_theta - cosine of the angle between the axis and the momentum
//               direction; constant in t and equal to mhat3
//   r3_speed  - magnitude of the axis tip velocity, computed from the
//               analytic derivative; constant and equal to k * |mhat2|
struct PrecessionGeometry {
    double cos_theta = 0.0;
    double r3_speed = 0.0;
};
PrecessionGeometry precession_geometry(const DiagInertia& inertia, const Vec3& momentum, double t);

// Numeric value of the order-fold derivation applied to the weighted
// momentum form (A Omega, G_i), A = diag(a2, a2, a3), evaluated at the given
// data; order >= 1. Mirrors polyalg::ep_momentum_form_derivative in doubles.
double momentum_form_derivative(const DiagInertia& inertia, const Vec3& omega0, const Mat3& r0,
                                double a2, double a3, int i, int order);

// 2n-th time derivative of the (1,1) rotation entry at t = 0 for rigid
// initial data (odd orders vanish identically). Templated on the scalar so
// tests can evaluate it in exact rational arithmetic.
template <class Scalar>
Scalar r11_even_coefficient(const Scalar& k, const Scalar& phi, const Scalar& mhat3, int n);

double r11_coefficient(const DiagInertia& inertia, const Vec3& momentum, int n);

// Partial sum sum_{n=0}^{n_max} t^{2n}/(2n)! * r11_coefficient(n); converges
// to the (1,1) entry of rigid_rotation.
double r11_partial_sum(const DiagInertia& inertia, const Vec3& momentum, double t, int n_max);

}  // namespace liegyro
