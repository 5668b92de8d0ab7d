#include <cmath>

#include "doctest.h"
#include "routh/chart.hpp"
#include "routh/lagrangian.hpp"
#include "routh/numdiff.hpp"
#include "routh/ode.hpp"

using namespace routh;

TEST_CASE("fd_gradient on a square") {
    auto f = [](const Vec& p) { return p[0] * p[0]; };
    Vec p(1);
    p << 3.0;
    Vec g = fd_gradient(f, p, 1e-5);
    CHECK(std::abs(g[0] - 6.0) < 1e-8);
}

TEST_CASE("fd_gradient of a constant is zero") {
    auto f = [](const Vec&) { return 4.2; };
    Vec p(3);
    p << 1, -2, 0.5;
    Vec g = fd_gradient(f, p);
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fd_gradient is near-exact on quadratics") {
    // Roundoff-level error only: bound 10 * eps / h.
    Mat A(3, 3);
    A << 2, 1, 0, 1, 3, -1, 0, -1, 1;
    Vec b(3);
    b << 0.3, -0.7, 1.1;
    auto f = [&](const Vec& p) { return 0.5 * p.dot(A * p) + b.dot(p); };
    Vec p(3);
    p << 0.4, -0.2, 0.9;
    Vec g = fd_gradient(f, p);
    Vec exact = A * p + b;
    const double h = fd_step(1.0);
    CHECK((g - exact).cwiseAbs().maxCoeff() <
          10.0 * std::numeric_limits<double>::epsilon() / h);
}

TEST_CASE("fd_gradient raises on non-finite values") {
    auto f = [](const Vec& p) { return std::sqrt(p[0]); };
    Vec p(1);
    p << 0.0;  // f(p - h) = NaN
    CHECK_THROWS_AS(fd_gradient(f, p), NumericalDomainError);
}

namespace {
ChartPtr plane2() { return make_chart("plane2", {"q1", "q2"}); }
}  // namespace

TEST_CASE("velocity Hessian of the cyclic toy Lagrangian") {
    auto chart = plane2();
    auto L = [](const ChartState& s) {
        return s.v[0] * s.v[0] + s.v[0] * s.v[1] - 0.5 * s.q[0] * s.q[0];
    };
    ChartState s(chart, (Vec(2) << 0.3, -0.4).finished(), (Vec(2) << 0.9, 0.2).finished());
    Mat H = fd_hessian_vv(L, s);
    Mat expected(2, 2);
    expected << 2, 1, 1, 0;  // by hand from L = v1^2 + v1 v2 - V(q1)
    CHECK((H - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("velocity Hessian of a free particle is the identity") {
    auto chart = make_chart("r3", {"x", "y", "z"});
    auto L = [](const ChartState& s) { return 0.5 * s.v.squaredNorm(); };
    ChartState s(chart, Vec::Zero(3), (Vec(3) << 1, -2, 0.3).finished());
    Mat H = fd_hessian_vv(L, s);
    CHECK((H - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rk4 integrates exponential decay") {
    auto vf = [](double, const Vec& z) { return Vec(-z); };
    OdeSolution sol = rk4(vf, Vec::Ones(1), 0.0, 1.0, 1e-3);
    CHECK(sol.times.back() == 1.0);
    CHECK(std::abs(sol.points.back()[0] - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("rk4 keeps constants constant") {
    auto vf = [](double, const Vec& z) { return Vec(Vec::Zero(z.size())); };
    OdeSolution sol = rk4(vf, (Vec(2) << 3.0, -1.0).finished(), 0.0, 2.0, 0.1);
    CHECK((sol.points.back() - sol.points.front()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rk4 hits the final time exactly with a shortened step") {
    auto vf = [](double, const Vec& z) { return Vec(-z); };
    OdeSolution sol = rk4(vf, Vec::Ones(1), 0.0, 0.55, 0.1);
    CHECK(sol.times.back() == 0.55);
    CHECK(std::abs(sol.points.back()[0] - std::exp(-0.55)) < 1e-6);
}

namespace {
double oscillator_energy_drift(double dt) {
    auto vf = [](double, const Vec& z) {
        Vec d(2);
        d << z[1], -z[0];
        return d;
    };
    OdeSolution sol = rk4(vf, (Vec(2) << 1.0, 0.0).finished(), 0.0, 10.0, dt);
    double drift = 0.0;
    for (const auto& z : sol.points)
        drift = std::max(drift, std::abs(0.5 * z.squaredNorm() - 0.5));
    return drift;
}

double oscillator_error(double dt) {
    auto vf = [](double, const Vec& z) {
        Vec d(2);
        d << z[1], -z[0];
        return d;
    };
    OdeSolution sol = rk4(vf, (Vec(2) << 1.0, 0.0).finished(), 0.0, 10.0, dt);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        err = std::max(err, std::abs(sol.points[i][0] - std::cos(sol.times[i])));
    return err;
}
}  // namespace

TEST_CASE("rk4 oscillator energy drift stays tiny") {
    CHECK(oscillator_energy_drift(1e-3) <= 1e-8);
}

TEST_CASE("rk4 converges at fourth order") {
    const double e1 = oscillator_error(2e-3);
    const double e2 = oscillator_error(1e-3);
    CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("rk4 blowup reports the last good time") {
    auto vf = [](double, const Vec& z) { return Vec(z.array().square().matrix()); };
    try {
        rk4(vf, Vec::Ones(1), 0.0, 2.0, 1e-3);
        FAIL("expected IntegrationBlowupError");
    } catch (const IntegrationBlowupError& e) {
        CHECK(e.last_good_time > 0.9);
        CHECK(e.last_good_time < 1.1);
    }
}

TEST_CASE("trajectory invariants are enforced") {
    auto chart = plane2();
    Trajectory tr;
    tr.chart = chart;
    tr.times = {0.0, 0.1};
    tr.states.emplace_back(chart, Vec::Zero(2), Vec::Zero(2));
    CHECK_THROWS(tr.validate());  // length mismatch
    tr.states.emplace_back(chart, Vec::Zero(2), Vec::Zero(2));
    CHECK_NOTHROW(tr.validate());
    tr.times = {0.1, 0.1};
    CHECK_THROWS(tr.validate());  // not strictly increasing
}

TEST_CASE("chart singularity predicate guards states") {
    auto chart = make_chart("half", {"x"}, [](const Vec& q) { return q[0] < 0.0; });
    ChartState good(chart, Vec::Ones(1), Vec::Zero(1));
    CHECK_NOTHROW(good.require_nonsingular());
    ChartState bad(chart, -Vec::Ones(1), Vec::Zero(1));
    CHECK_THROWS_AS(bad.require_nonsingular(), ChartSingularityError);
}

TEST_CASE("missing diagnostics channel raises") {
    auto chart = plane2();
    Trajectory tr;
    tr.chart = chart;
    CHECK_THROWS_AS(tr.channel("J_L"), DiagnosticsMissingError);
}
