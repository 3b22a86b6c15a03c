#include <catch2/catch_amalgamated.hpp>

#include "liegyro/closedform.hpp"
#include "liegyro/lieflow.hpp"
#include "liegyro/polyalg.hpp"
#include "liegyro/refintegrator.hpp"

#include <cmath>
#include <random>

using namespace liegyro;
using Catch::Approx;

namespace {

const DiagInertia kDatumInertia{1.0, 2.0};
const Vec3 kDatumMomentum{0.0, 3.0, 4.0};

double max_entry_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (int k = 0; k < 9; ++k) m = std::max(m, std::fabs(a.a[k] - b.a[k]));
    return m;
}

Mat3 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec3 axis{u(rng), u(rng), u(rng)};
    double n = norm(axis);
    if (n < 1e-3) axis = Vec3{0, 0, 1}, n = 1.0;
    axis = (1.0 / n) * axis;
    double angle = 3.0 * u(rng);
    double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
    Mat3 r;
    r(0, 0) = c + axis.x * axis.x * v;
    r(0, 1) = axis.x * axis.y * v - axis.z * s;
    r(0, 2) = axis.x * axis.z * v + axis.y * s;
    r(1, 0) = axis.y * axis.x * v + axis.z * s;
    r(1, 1) = c + axis.y * axis.y * v;
    r(1, 2) = axis.y * axis.z * v - axis.x * s;
    r(2, 0) = axis.z * axis.x * v - axis.y * s;
    r(2, 1) = axis.z * axis.y * v + axis.x * s;
    r(2, 2) = c + axis.z * axis.z * v;
    return r;
}

Mat3 rk4_oracle(const GeneralSolutionInput& inp, double t, double dt = 1e-5) {
    EpState z0;
    z0[0] = inp.omega0.x;
    z0[1] = inp.omega0.y;
    z0[2] = inp.omega0.z;
    for (int k = 0; k < 9; ++k) z0[3 + k] = inp.r0.a[k];
    Rk4Cursor cur{z0};
    rk4_advance({inp.inertia.i2, inp.inertia.i2, inp.inertia.i3}, cur, t, IntegratorConfig{dt, false});
    std::array<double, 9> a;
    EpState z = cur.state();
    for (int k = 0; k < 9; ++k) a[k] = z[3 + k];
    return Mat3{a};
}

std::vector<double> pack12(const Vec3& w, const Mat3& r) {
    std::vector<double> z(12);
    z[0] = w.x;
    z[1] = w.y;
    z[2] = w.z;
    for (int k = 0; k < 9; ++k) z[3 + k] = r.a[k];
    return z;
}

}  // namespace

TEST_CASE("rigid_params on the canonical datum") {
    RigidParams p = rigid_params(kDatumInertia, kDatumMomentum);
    CHECK(p.k == 5.0);
    CHECK(p.phi == -2.0);
    CHECK(p.mhat.x == 0.0);
    CHECK(p.mhat.y == Approx(0.6));
    CHECK(p.mhat.z == Approx(0.8));
    // Omega3' = m3 / i3 = phi + mhat3 * k
    CHECK(p.phi + p.mhat.z * p.k == Approx(kDatumMomentum.z / kDatumInertia.i3));
}

TEST_CASE("series_constants") {
    SECTION("phiP example") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{1, 0, 3}, Mat3::identity()};
        CHECK(series_constants(inp).phiP == 1.5);
    }
    SECTION("kP example") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0, 1, 2}, Mat3::identity()};
        CHECK(series_constants(inp).kP == Approx(std::sqrt(2.0)));
    }
    SECTION("pure spin M matrix") {
        const double w = 3.0;
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0, 0, w}, Mat3::identity()};
        SeriesConstants c = series_constants(inp);
        CHECK(c.mMat[0] == Approx(0.5 * w * w));
        CHECK(c.mMat[1] == Approx(0.5 * w * w));
        CHECK(c.mMat[2] == 0.0);
    }
    SECTION("kP^2 recomputation and B diagonals") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.3, -0.7, 1.9}, Mat3::identity()};
        SeriesConstants c = series_constants(inp);
        const Vec3& w = inp.omega0;
        CHECK(c.kP * c.kP == Approx(w.x * w.x + w.y * w.y + 0.25 * w.z * w.z).epsilon(1e-15));
        CHECK(c.kP * c.kP == Approx(0.5 * c.mMat[1] - c.mMat[2]).epsilon(1e-15));
        CHECK(c.b2[2] == Approx(2.0 - 0.5));
        CHECK(c.b3[0] == Approx(0.5));
        CHECK(c.b3[2] == 1.0);
    }
    SECTION("spin generator matrix") {
        const Mat3& t3 = t3_spin_matrix();
        CHECK(t3(0, 1) == 1.0);
        CHECK(t3(1, 0) == -1.0);
        CHECK(t3(2, 2) == 0.0);
        // T3 Omega = (Omega2, -Omega1, 0)
        Vec3 v = t3 * Vec3{2, 5, 7};
        CHECK(v.x == 5.0);
        CHECK(v.y == -2.0);
        CHECK(v.z == 0.0);
    }
}

TEST_CASE("omega_solution") {
    SECTION("t = 0 returns the data exactly") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.3, -1.2, 0.9}, Mat3::identity()};
        Vec3 w = omega_solution(inp, 0.0);
        CHECK(w.x == 0.3);
        CHECK(w.y == -1.2);
        CHECK(w.z == 0.9);
    }
    SECTION("pure spin is constant") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0, 0, 2.5}, Mat3::identity()};
        Vec3 w = omega_solution(inp, 17.3);
        CHECK(w.x == 0.0);
        CHECK(w.y == 0.0);
        CHECK(w.z == 2.5);
    }
    SECTION("half period flips the transverse part") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{1, 0, 3}, Mat3::identity()};
        Vec3 w = omega_solution(inp, M_PI / 1.5);
        CHECK(w.x == Approx(-1.0).margin(1e-14));
        CHECK(w.y == Approx(0.0).margin(1e-14));
        CHECK(w.z == 3.0);
    }
    SECTION("matches the integrator on generic data") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.8, -0.4, 1.1}, Mat3::identity()};
        Rk4Cursor cur{pack_state(BodyState{inp.omega0, Mat3::identity()})};
        rk4_advance({2, 2, 1}, cur, 0.9, IntegratorConfig{1e-5, false});
        EpState z = cur.state();
        Vec3 w = omega_solution(inp, 0.9);
        CHECK(w.x == Approx(z[0]).margin(1e-9));
        CHECK(w.y == Approx(z[1]).margin(1e-9));
        CHECK(w.z == Approx(z[2]).margin(1e-12));
    }
}

TEST_CASE("r3_solution") {
    SECTION("t = 0 returns the initial third column exactly") {
        std::mt19937_64 rng(3);
        Mat3 r0 = random_rotation(rng);
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.4, 0.9, -1.3}, r0};
        Vec3 c = r3_solution(inp, 0.0);
        CHECK(c.x == r0(0, 2));
        CHECK(c.y == r0(1, 2));
        CHECK(c.z == r0(2, 2));
    }
    SECTION("rigid datum reproduces the third column of the rigid matrix") {
        GeneralSolutionInput inp{kDatumInertia, Vec3{0, 3, 2}, Mat3::identity()};
        const double k = 5.0, m2 = 0.6, m3 = 0.8;
        for (double t : {0.2, 0.7, 1.9}) {
            Vec3 c = r3_solution(inp, t);
            CHECK(c.x == Approx(m2 * std::sin(k * t)).margin(1e-13));
            CHECK(c.y == Approx(m2 * m3 * (1.0 - std::cos(k * t))).margin(1e-13));
            CHECK(c.z == Approx(m3 * m3 + m2 * m2 * std::cos(k * t)).margin(1e-13));
        }
    }
    SECTION("generic input matches the integrator") {
        std::mt19937_64 rng(5);
        Mat3 r0 = random_rotation(rng);
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{1.1, -0.6, 0.8}, r0};
        Mat3 ref = rk4_oracle(inp, 0.37);
        Vec3 c = r3_solution(inp, 0.37);
        CHECK(c.x == Approx(ref(0, 2)).margin(1e-9));
        CHECK(c.y == Approx(ref(1, 2)).margin(1e-9));
        CHECK(c.z == Approx(ref(2, 2)).margin(1e-9));
    }
    SECTION("Omega3' = 0 is rejected with a pointer to r_general") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{1, 1, 0}, Mat3::identity()};
        CHECK_THROWS_AS(r3_solution(inp, 0.5), std::domain_error);
        CHECK_NOTHROW(r_general(inp, 0.5));
    }
    SECTION("bit-identical to column 3 of r_general") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 10; ++trial) {
            GeneralSolutionInput inp{DiagInertia{2, 1},
                                     Vec3{0.1 * trial - 0.4, 0.3, 0.7 + 0.1 * trial},
                                     random_rotation(rng)};
            for (double t : {0.3, 1.7}) {
                Vec3 a = r3_solution(inp, t);
                Mat3 r = r_general(inp, t);
                CHECK(a.x == r(0, 2));
                CHECK(a.y == r(1, 2));
                CHECK(a.z == r(2, 2));
            }
        }
    }
}

TEST_CASE("r_general") {
    SECTION("t = 0 returns r0 exactly") {
        std::mt19937_64 rng(9);
        Mat3 r0 = random_rotation(rng);
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.5, 0.2, -0.9}, r0};
        CHECK(max_entry_diff(r_general(inp, 0.0), r0) == 0.0);
    }
    SECTION("pure spin reduces to the axis rotation") {
        const double w = 1.3;
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0, 0, w}, Mat3::identity()};
        for (double t : {0.4, 2.2}) {
            Mat3 r = r_general(inp, t);
            Mat3 expected = rigid_rotation(DiagInertia{2, 1}, Vec3{0, 0, w * 1.0}, t);
            CHECK(max_entry_diff(r, expected) < 1e-15);
        }
    }
    SECTION("three-way agreement on random rotations") {
        std::mt19937_64 rng(21);
        PolyVectorField field = ep_field(2, 1);
        for (int trial = 0; trial < 3; ++trial) {
            GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.9, -0.3, 1.2}, random_rotation(rng)};
            for (double t : {0.1, 1.0, 2.5}) {
                Mat3 closed = r_general(inp, t);
                CHECK(max_entry_diff(closed, rk4_oracle(inp, t)) < 1e-8);
                std::vector<double> z = lie_propagate(field, pack12(inp.omega0, inp.r0), t);
                std::array<double, 9> a;
                for (int k = 0; k < 9; ++k) a[k] = z[3 + k];
                CHECK(max_entry_diff(closed, Mat3{a}) < 1e-9);
            }
        }
    }
    SECTION("arbitrary non-rotation initial data satisfies the same flow") {
        // the solution formulas are linear in the initial rows
        Mat3 r0({0.5, -1.0, 2.0, 0.0, 3.0, 1.0, -2.0, 0.5, 0.25});
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.7, 0.4, -1.0}, r0};
        PolyVectorField field = ep_field(2, 1);
        for (double t : {0.5, 1.5}) {
            Mat3 closed = r_general(inp, t);
            std::vector<double> z = lie_propagate(field, pack12(inp.omega0, r0), t);
            std::array<double, 9> a;
            for (int k = 0; k < 9; ++k) a[k] = z[3 + k];
            CHECK(max_entry_diff(closed, Mat3{a}) < 1e-9);
        }
    }
    SECTION("Omega3' = 0 stays total") {
        GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.9, -0.5, 0.0}, Mat3::identity()};
        for (double t : {0.3, 1.1}) {
            Mat3 closed = r_general(inp, t);
            CHECK(max_entry_diff(closed, rk4_oracle(inp, t)) < 1e-8);
            CHECK(orthogonality_error(closed) < 1e-13);
        }
    }
}

TEST_CASE("spherical inertia degenerates the spin frequency but stays valid") {
    DiagInertia round{2.0, 2.0};
    REQUIRE(round.is_spherical());
    GeneralSolutionInput inp{round, Vec3{0.4, -0.7, 1.1}, Mat3::identity()};
    CHECK(series_constants(inp).phiP == 0.0);
    for (double t : {0.6, 1.9}) {
        Mat3 closed = r_general(inp, t);
        CHECK(max_entry_diff(closed, rk4_oracle(inp, t)) < 1e-8);
        CHECK(orthogonality_error(closed) < 1e-13);
        // spherical bodies keep the angular velocity fixed
        Vec3 w = omega_solution(inp, t);
        CHECK(w.x == inp.omega0.x);
        CHECK(w.y == inp.omega0.y);
    }
}

TEST_CASE("orthogonality and conservation along closed-form trajectories") {
    std::mt19937_64 rng(33);
    GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.8, -0.2, 1.4}, random_rotation(rng)};
    MotionInvariants ref =
        invariants_of(inp.inertia, BodyState{inp.omega0, inp.r0});
    for (double t = -20.0; t <= 20.0; t += 2.5) {
        Mat3 r = r_general(inp, t);
        CHECK(orthogonality_error(r) <= 1e-12);
        CHECK(std::fabs(det(r) - 1.0) <= 1e-12);
        MotionInvariants inv = invariants_of(inp.inertia, BodyState{omega_solution(inp, t), r});
        CHECK(std::fabs(inv.energy - ref.energy) <= 1e-11 * std::max(1.0, ref.energy));
        CHECK(norm(inv.momentum - ref.momentum) <= 1e-11 * std::max(1.0, norm(ref.momentum)));
        CHECK(inv.omega3 == ref.omega3);
    }
}

TEST_CASE("branch continuity as the transverse velocity shrinks") {
    GeneralSolutionInput spin{DiagInertia{2, 1}, Vec3{0, 0, 1.9}, Mat3::identity()};
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        GeneralSolutionInput tilted{DiagInertia{2, 1}, Vec3{eps, 0, 1.9}, Mat3::identity()};
        double gap = 0.0;
        for (double t : {0.5, 1.5, 3.0})
            gap = std::max(gap, max_entry_diff(r_general(tilted, t), r_general(spin, t)));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("rigid_rotation") {
    SECTION("t = 0 is the identity") {
        CHECK(max_entry_diff(rigid_rotation(kDatumInertia, kDatumMomentum, 0.0),
                             Mat3::identity()) == 0.0);
    }
    SECTION("pure spin rotates about axis 3 by (m3/I3) t") {
        DiagInertia inertia{1.0, 2.0};
        const double m3 = 5.0, t = 0.8;
        Mat3 r = rigid_rotation(inertia, Vec3{0, 0, m3}, t);
        double a = m3 / inertia.i3 * t;
        CHECK(r(0, 0) == Approx(std::cos(a)));
        CHECK(r(0, 1) == Approx(-std::sin(a)));
        CHECK(r(1, 0) == Approx(std::sin(a)));
        CHECK(r(2, 2) == 1.0);
    }
    SECTION("third column returns after one precession period") {
        const double period = 2.0 * M_PI / 5.0;
        Mat3 r = rigid_rotation(kDatumInertia, kDatumMomentum, period);
        CHECK(r(0, 2) == Approx(0.0).margin(1e-14));
        CHECK(r(1, 2) == Approx(0.0).margin(1e-14));
        CHECK(r(2, 2) == Approx(1.0).margin(1e-14));
    }
    SECTION("zero momentum means the body stays put") {
        CHECK(max_entry_diff(rigid_rotation(kDatumInertia, Vec3{0, 0, 0}, 3.7),
                             Mat3::identity()) == 0.0);
    }
    SECTION("m1 != 0 is rejected") {
        CHECK_THROWS_AS(rigid_rotation(kDatumInertia, Vec3{1, 3, 4}, 1.0), std::invalid_argument);
    }
    SECTION("orthogonality over a long window") {
        for (double t = -20.0; t <= 20.0; t += 1.7) {
            Mat3 r = rigid_rotation(kDatumInertia, kDatumMomentum, t);
            CHECK(orthogonality_error(r) <= 1e-12);
            CHECK(std::fabs(det(r) - 1.0) <= 1e-12);
        }
    }
    SECTION("rigid specialization of the general solution") {
        GeneralSolutionInput inp{kDatumInertia, Vec3{0, 3, 2}, Mat3::identity()};
        for (double t : {0.2, 0.9, 2.4}) {
            CHECK(max_entry_diff(r_general(inp, t),
                                 rigid_rotation(kDatumInertia, kDatumMomentum, t)) <= 1e-12);
        }
    }
}

TEST_CASE("Poisson residual of the closed form by central differences") {
    std::mt19937_64 rng(44);
    GeneralSolutionInput inp{DiagInertia{2, 1}, Vec3{0.6, -1.1, 0.7}, random_rotation(rng)};
    const double h = 1e-6;
    for (double t : {0.4, 1.8}) {
        Mat3 ahead = r_general(inp, t + h);
        Mat3 behind = r_general(inp, t - h);
        Mat3 now = r_general(inp, t);
        Vec3 w = omega_solution(inp, t);
        for (int i = 0; i < 3; ++i) {
            Vec3 lhs = (1.0 / (2.0 * h)) * (ahead.row(i) - behind.row(i));
            Vec3 rhs = cross(now.row(i), w);  // dG_i/dt = [G_i, Omega]
            CHECK(norm(lhs - rhs) < 1e-6);
        }
    }
}

TEST_CASE("align_frame") {
    SECTION("already aligned momentum is untouched") {
        FrameAlignment fa = align_frame(Vec3{0, 3, 4});
        CHECK(max_entry_diff(fa.rotation, Mat3::identity()) == 0.0);
        CHECK(fa.aligned.y == 3.0);
        CHECK(fa.aligned.z == 4.0);
    }
    SECTION("quarter turn for momentum along axis 1") {
        FrameAlignment fa = align_frame(Vec3{3, 0, 4});
        CHECK(fa.aligned.x == 0.0);
        CHECK(fa.aligned.y == 3.0);
        CHECK(fa.aligned.z == 4.0);
        Vec3 mapped = fa.rotation * Vec3{3, 0, 4};
        CHECK(mapped.x == Approx(0.0).margin(1e-15));
        CHECK(mapped.y == Approx(3.0));
    }
    SECTION("zero momentum gives the identity") {
        FrameAlignment fa = align_frame(Vec3{0, 0, 0});
        CHECK(max_entry_diff(fa.rotation, Mat3::identity()) == 0.0);
        CHECK(norm(fa.aligned) == 0.0);
    }
    SECTION("conjugation solves the problem for general momentum") {
        DiagInertia inertia{2.0, 1.0};
        Vec3 m{2.0, -1.0, 3.0};
        FrameAlignment fa = align_frame(m);
        Mat3 qt = fa.rotation.transpose();
        GeneralSolutionInput direct{inertia, Vec3{m.x / 2, m.y / 2, m.z / 1}, Mat3::identity()};
        for (double t : {0.5, 1.3}) {
            Mat3 conjugated = qt * rigid_rotation(inertia, fa.aligned, t) * fa.rotation;
            Mat3 ref = rk4_oracle(direct, t);
            CHECK(max_entry_diff(conjugated, ref) < 1e-8);
        }
    }
}

TEST_CASE("precession_geometry") {
    SECTION("canonical datum") {
        for (double t : {0.0, 0.7, 1.3}) {
            PrecessionGeometry g = precession_geometry(kDatumInertia, kDatumMomentum, t);
            CHECK(g.cos_theta == Approx(0.8).margin(1e-14));
            CHECK(g.r3_speed == Approx(3.0).margin(1e-13));
        }
    }
    SECTION("time independence") {
        PrecessionGeometry a = precession_geometry(kDatumInertia, kDatumMomentum, 0.0);
        PrecessionGeometry b = precession_geometry(kDatumInertia, kDatumMomentum, 1.3);
        CHECK(std::fabs(a.cos_theta - b.cos_theta) < 1e-13);
        CHECK(std::fabs(a.r3_speed - b.r3_speed) < 1e-13);
    }
    SECTION("pure spin has a fixed axis") {
        PrecessionGeometry g = precession_geometry(kDatumInertia, Vec3{0, 0, 5}, 2.2);
        CHECK(g.cos_theta == Approx(1.0));
        CHECK(g.r3_speed == 0.0);
    }
    SECTION("zero momentum is rejected") {
        CHECK_THROWS_AS(precession_geometry(kDatumInertia, Vec3{0, 0, 0}, 1.0), std::domain_error);
    }
}

TEST_CASE("momentum_form_derivative") {
    std::mt19937_64 rng(55);
    Mat3 r0 = random_rotation(rng);
    Vec3 w0{0.7, -0.9, 1.3};
    DiagInertia inertia{2.0, 1.0};

    SECTION("A = diag(I2, I2, I3) vanishes for every order") {
        for (int i = 0; i < 3; ++i)
            for (int order = 1; order <= 6; ++order)
                CHECK(momentum_form_derivative(inertia, w0, r0, 2.0, 1.0, i, order) == 0.0);
    }
    SECTION("order 1 with a2 = 0, a3 = 1/Omega3' reduces to [G_i, Omega]_3") {
        for (int i = 0; i < 3; ++i) {
            double expected = r0(i, 0) * w0.y - r0(i, 1) * w0.x;
            CHECK(momentum_form_derivative(inertia, w0, r0, 0.0, 1.0 / w0.z, i, 1) ==
                  Approx(expected).epsilon(1e-14));
        }
    }
    SECTION("generic A matches the symbolic oracle") {
        PolyVectorField field = ep_field(2, 1);
        const double a2 = 0.25, a3 = 1.5;
        std::vector<double> pt(kEpVarCount);
        pt[0] = w0.x;
        pt[1] = w0.y;
        pt[2] = w0.z;
        for (int k = 0; k < 9; ++k) pt[3 + k] = r0.a[k];
        for (int i = 0; i < 3; ++i) {
            Polynomial acc = ep_momentum_form(Rational(1, 4), Rational(3, 2), i);
            for (int order = 1; order <= 4; ++order) {
                acc = derivation_apply(field, acc);
                double sym = acc.evaluate<double>(pt);
                double closed = momentum_form_derivative(inertia, w0, r0, a2, a3, i, order);
                CHECK(closed == Approx(sym).epsilon(1e-12).margin(1e-13));
            }
        }
    }
    SECTION("order 0 is rejected") {
        CHECK_THROWS_AS(momentum_form_derivative(inertia, w0, r0, 1.0, 1.0, 0, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("r11 coefficients on the canonical datum") {
    CHECK(r11_coefficient(kDatumInertia, kDatumMomentum, 0) == 1.0);
    CHECK(r11_coefficient(kDatumInertia, kDatumMomentum, 1) == Approx(-13.0).epsilon(1e-14));
    CHECK(r11_coefficient(kDatumInertia, kDatumMomentum, 2) == Approx(313.0).epsilon(1e-14));

    SECTION("rational and double paths agree") {
        for (int n = 0; n <= 6; ++n) {
            Rational exact =
                r11_even_coefficient<Rational>(Rational(5), Rational(-2), Rational(4, 5), n);
            double d = r11_coefficient(kDatumInertia, kDatumMomentum, n);
            CHECK(d == Approx(exact.convert_to<double>()).epsilon(1e-13));
        }
    }
    SECTION("recursion view: second difference of the first coefficients") {
        // D^4 R11 = (k^2 + phi^2 + 2 mhat3 k phi)^2 + 4 mhat2^2 k^2 phi^2
        double base = 13.0;
        double extra = 4.0 * 0.36 * 25.0 * 4.0;
        CHECK(r11_coefficient(kDatumInertia, kDatumMomentum, 2) ==
              Approx(base * base + extra).epsilon(1e-14));
    }
}

TEST_CASE("Leibniz-expanded forcing term at the rigid datum") {
    // D^{2n} [(B2 Omega, G_1) Omega_1] evaluated on the rigid datum equals
    // -2 mhat2^2 (-1)^n sum_b C(2n, 2b+1) k^{2b+2} phi^{2n-2b}; odd orders
    // vanish.
    const Rational i2 = 1, i3 = 2;
    const Rational k = 5, phi = -2, mhat2(3, 5);
    PolyVectorField field = ep_field(i2, i3);
    std::vector<Rational> pt(kEpVarCount, Rational(0));
    pt[kOmega2] = 3;
    pt[kOmega3] = 2;
    pt[kR11] = pt[kR22] = pt[kR33] = 1;

    Rational ratio = i3 / i2;
    Polynomial forcing = ep_momentum_form(1, 2 - ratio, 0) * Polynomial::variable(kEpVarCount, 0);

    auto display = [&](int n) {
        Rational sum = 0;
        for (int b = 0; b <= n - 1; ++b) {
            Rational c = 1;
            for (int j = 0; j < 2 * b + 1; ++j) c = c * Rational(2 * n - j) / Rational(j + 1);
            Rational kpow = 1, ppow = 1;
            for (int j = 0; j < 2 * b + 2; ++j) kpow *= k;
            for (int j = 0; j < 2 * n - 2 * b; ++j) ppow *= phi;
            sum += c * kpow * ppow;
        }
        Rational lead = Rational(-2) * mhat2 * mhat2 * sum;
        return (n % 2 == 0) ? lead : -lead;
    };

    Polynomial acc = forcing;
    for (int order = 1; order <= 6; ++order) {
        acc = derivation_apply(field, acc);
        Rational value = acc.evaluate<Rational>(pt);
        if (order % 2 == 1) {
            CHECK(value == 0);
        } else {
            CHECK(value == display(order / 2));
        }
    }
    CHECK(forcing.evaluate<Rational>(pt) == 0);  // n = 0 case
}

TEST_CASE("r11 partial sums") {
    SECTION("n_max = 0 and t = 0") {
        CHECK(r11_partial_sum(kDatumInertia, kDatumMomentum, 0.7, 0) == 1.0);
        CHECK(r11_partial_sum(kDatumInertia, kDatumMomentum, 0.0, 12) == 1.0);
    }
    SECTION("25 terms reach the closed form at t = 0.3") {
        double closed = std::cos(1.5) * std::cos(-0.6) - 0.8 * std::sin(1.5) * std::sin(-0.6);
        CHECK(r11_partial_sum(kDatumInertia, kDatumMomentum, 0.3, 25) ==
              Approx(closed).margin(1e-12));
    }
    SECTION("error is non-increasing beyond the asymptotic regime") {
        const double t = 0.5;
        double closed = std::cos(5.0 * t) * std::cos(-2.0 * t) -
                        0.8 * std::sin(5.0 * t) * std::sin(-2.0 * t);
        double prev = std::numeric_limits<double>::infinity();
        for (int n_max : {10, 15, 20, 25, 30}) {
            double err =
                std::fabs(r11_partial_sum(kDatumInertia, kDatumMomentum, t, n_max) - closed);
            CHECK(err <= prev + 1e-14);
            prev = err;
        }
        CHECK(prev <= 1e-12);
    }
}
