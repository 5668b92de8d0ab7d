#include "routh/systems.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_euler_pole(double theta) {
    const double r = theta / kPi;
    return std::abs(r - std::round(r)) * kPi < 1e-3;
}

ChartPtr euler_chart(const std::string& name) {
    return make_chart(name, {"phi", "theta", "psi"},
                      [](const Vec& q) { return near_euler_pole(q[1]); });
}

ChartPtr empty_chart(const std::string& name) { return make_chart(name, {}); }

std::function<bool(const Vec&)> pole_at(int idx) {
    return [idx](const Vec& q) { return near_euler_pole(q[idx]); };
}

double get(const std::map<std::string, double>& m, const std::string& k, double dflt) {
    auto it = m.find(k);
    return it == m.end() ? dflt : it->second;
}

}  // namespace

ReducedSystem SystemBundle::make_reduced(const Vec* mu_override) const {
    return make_reduced_with(default_connection, mu_override);
}

ReducedSystem SystemBundle::make_reduced_with(const PrincipalConnection& conn,
                                              const Vec* mu_override) const {
    ReduceOptions opts;
    opts.assume_mu_regular = assume_mu_regular;
    return reduce(sys, conn, qchart, mu_override ? *mu_override : default_mu, sample_state, opts);
}

namespace systems {

// ---------------------------------------------------------------------------
// Cyclic toy system

SystemBundle toy_cyclic(std::function<double(double)> V, std::function<double(double)> dV) {
    if (!V) {
        V = [](double q1) { return 0.5 * q1 * q1; };
        dV = [](double q1) { return q1; };
    }
    if (!dV) {
        auto Vc = V;
        dV = [Vc](double q1) {
            const double h = fd_step(q1);
            return (Vc(q1 + h) - Vc(q1 - h)) / (2.0 * h);
        };
    }

    SystemBundle b;
    b.name = "toy";
    auto chart = make_chart("toy", {"q1", "q2"});

    auto sys = std::make_shared<LagrangianSystem>();
    sys->chart = chart;
    sys->L = [V](const ChartState& s) {
        return s.v[0] * s.v[0] + s.v[0] * s.v[1] - V(s.q[0]);
    };
    sys->F = ForceTerm::zero();
    AnalyticPartials ap;
    ap.dLdq = [dV](const ChartState& s) {
        Vec g(2);
        g << -dV(s.q[0]), 0.0;
        return g;
    };
    ap.dLdv = [](const ChartState& s) {
        Vec g(2);
        g << 2.0 * s.v[0] + s.v[1], s.v[0];
        return g;
    };
    ap.d2Ldvdv = [](const ChartState&) {
        Mat H(2, 2);
        H << 2, 1, 1, 0;
        return H;
    };
    ap.d2Ldvdq = [](const ChartState&) { return Mat::Zero(2, 2); };
    sys->partials = ap;
    b.sys = sys;

    GroupAction act;
    act.group = LieGroup::abelian(1);
    act.side = GroupAction::Side::Left;
    act.act = [](const GroupElement& g, const Vec& q) {
        Vec out = q;
        out[1] += g.translation[0];
        return out;
    };
    act.generator = [](const Vec&, const Vec& xi) {
        Vec g(2);
        g << 0.0, xi[0];
        return g;
    };
    act.act_jacobian = [](const GroupElement&, const Vec&) { return Mat::Identity(2, 2); };
    b.action = act;

    Mat W(1, 2);
    W << 0, 1;
    b.default_connection = flat_connection(act, W);

    QuotientChart qc;
    qc.x_chart = make_chart("toy/base", {"q1"});
    qc.y_chart = make_chart("toy/fibre", {});
    qc.xi_dim = 1;
    qc.proj_x = [](const Vec& q) { return Vec(q.head(1)); };
    qc.proj_y = [](const Vec&) { return Vec(Vec::Zero(0)); };
    qc.section = [](const Vec& x, const Vec&) {
        Vec q(2);
        q << x[0], 0.0;
        return q;
    };
    qc.class_components = [](const Vec&, const Vec& xi) { return xi; };
    qc.class_representative = [](const Vec&, const Vec& c) { return c; };
    qc.dproj_x = [](const Vec&) {
        Mat J(1, 2);
        J << 1, 0;
        return J;
    };
    qc.dproj_y = [](const Vec&) { return Mat(Mat::Zero(0, 2)); };
    b.qchart = qc;

    b.sample_state = [chart](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec q(2), v(2);
        for (int i = 0; i < 2; ++i) { q[i] = u(rng); v[i] = u(rng); }
        return ChartState(chart, q, v);
    };
    b.default_initial = ChartState(chart, (Vec(2) << 0.2, 0.0).finished(),
                                   (Vec(2) << 0.7, 0.3).finished());
    b.default_mu = Vec::Constant(1, 0.7);
    b.expected_g_regular = false;
    b.assume_mu_regular = true;  // J_L = v1 is submersive even though the locked inertia is [0]
    b.reference_formulas["J_L"] = [](const ChartState& s) { return Vec(s.v.head(1)); };
    return b;
}

// ---------------------------------------------------------------------------
// Free rigid body

SystemBundle free_rigid_body(double I1, double I2, double I3, double mu3) {
    SystemBundle b;
    b.name = "rigid-body";
    b.params = {{"I1", I1}, {"I2", I2}, {"I3", I3}};
    auto chart = euler_chart("rigid-body");
    const Eigen::Vector3d I(I1, I2, I3);

    auto body_rates = [](const ChartState& s) {
        return Eigen::Vector3d(so3::euler_body_matrix(s.q[1], s.q[2]) * s.v);
    };

    auto sys = std::make_shared<LagrangianSystem>();
    sys->chart = chart;
    sys->L = [I, body_rates](const ChartState& s) {
        Eigen::Vector3d xi = body_rates(s);
        return 0.5 * xi.dot(I.asDiagonal() * xi);
    };
    sys->F = ForceTerm::zero();

    auto dKb = [](double theta, double psi, int which) {
        const double st = std::sin(theta), ct = std::cos(theta);
        const double sp = std::sin(psi), cp = std::cos(psi);
        Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
        if (which == 0) {  // d/dtheta
            D << ct * sp, 0, 0,
                 ct * cp, 0, 0,
                 -st, 0, 0;
        } else {  // d/dpsi
            D << st * cp, -sp, 0,
                 -st * sp, -cp, 0,
                 0, 0, 0;
        }
        return D;
    };

    AnalyticPartials ap;
    ap.dLdv = [I](const ChartState& s) {
        Eigen::Matrix3d Kb = so3::euler_body_matrix(s.q[1], s.q[2]);
        Eigen::Vector3d Pi = I.asDiagonal() * (Kb * s.v);
        return Vec(Kb.transpose() * Pi);
    };
    ap.dLdq = [I, dKb](const ChartState& s) {
        Eigen::Matrix3d Kb = so3::euler_body_matrix(s.q[1], s.q[2]);
        Eigen::Vector3d xi = Kb * s.v;
        Eigen::Vector3d Pi = I.asDiagonal() * xi;
        Vec g = Vec::Zero(3);
        g[1] = Pi.dot(dKb(s.q[1], s.q[2], 0) * s.v);
        g[2] = Pi.dot(dKb(s.q[1], s.q[2], 1) * s.v);
        return g;
    };
    ap.d2Ldvdv = [I](const ChartState& s) {
        Eigen::Matrix3d Kb = so3::euler_body_matrix(s.q[1], s.q[2]);
        return Mat(Kb.transpose() * I.asDiagonal() * Kb);
    };
    ap.d2Ldvdq = [I, dKb](const ChartState& s) {
        Eigen::Matrix3d Kb = so3::euler_body_matrix(s.q[1], s.q[2]);
        Mat H = Mat::Zero(3, 3);
        for (int j = 1; j < 3; ++j) {
            Eigen::Matrix3d D = dKb(s.q[1], s.q[2], j - 1);
            H.col(j) = Kb.transpose() * I.asDiagonal() * (D * s.v) +
                       D.transpose() * (I.asDiagonal() * (Kb * s.v));
        }
        return H;
    };
    sys->partials = ap;
    b.sys = sys;

    GroupAction act;
    act.group = LieGroup::so3();
    act.side = GroupAction::Side::Left;
    act.act = [](const GroupElement& g, const Vec& q) {
        return Vec(so3::to_euler(g.rot * so3::from_euler(q[0], q[1], q[2])));
    };
    act.generator = [](const Vec& q, const Vec& xi) {
        // Euler rates of the spatial angular velocity xi at q.
        Eigen::Matrix3d A = so3::from_euler(q[0], q[1], q[2]);
        return Vec(so3::euler_body_matrix_inv(q[1], q[2]) * (A.transpose() * Eigen::Vector3d(xi)));
    };
    b.action = act;

    // Standard connection: omega(A)(Adot) = Adot A^-1, the spatial angular
    // velocity.
    b.default_connection = connection_from_coefficients(act, [](const Vec& q) {
        Eigen::Matrix3d A = so3::from_euler(q[0], q[1], q[2]);
        return Mat(A * so3::euler_body_matrix(q[1], q[2]));
    });

    QuotientChart qc;
    qc.x_chart = empty_chart("rigid-body/base");
    qc.y_chart = make_chart("rigid-body/fibre", {"theta", "psi"}, pole_at(0));
    qc.xi_dim = 3;
    qc.proj_x = [](const Vec&) { return Vec(Vec::Zero(0)); };
    qc.proj_y = [](const Vec& q) { return Vec(q.tail(2)); };
    qc.section = [](const Vec&, const Vec& y) {
        Vec q(3);
        q << 0.0, y[0], y[1];
        return q;
    };
    qc.class_components = [](const Vec& q, const Vec& xi) {
        // Body-frame representative of [A, xi]_G.
        Eigen::Matrix3d A = so3::from_euler(q[0], q[1], q[2]);
        return Vec(A.transpose() * Eigen::Vector3d(xi));
    };
    qc.class_representative = [](const Vec& q, const Vec& c) {
        Eigen::Matrix3d A = so3::from_euler(q[0], q[1], q[2]);
        return Vec(A * Eigen::Vector3d(c));
    };
    qc.dproj_x = [](const Vec&) { return Mat(Mat::Zero(0, 3)); };
    qc.dproj_y = [](const Vec&) {
        Mat J(2, 3);
        J << 0, 1, 0, 0, 0, 1;
        return J;
    };
    b.qchart = qc;

    b.sample_state = [chart](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        std::uniform_real_distribution<double> th(0.4, kPi - 0.4);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec q(3), v(3);
        q << ang(rng), th(rng), ang(rng);
        for (int i = 0; i < 3; ++i) v[i] = u(rng);
        return ChartState(chart, q, v);
    };

    b.default_mu = (Vec(3) << 0.0, 0.0, mu3).finished();
    {
        // Momentum-mu initial state over (phi0, theta0, psi0): body velocity
        // from the inverted momentum relation xi_i = mu_i(y)/I_i.
        Vec q0(3);
        q0 << 0.3, 1.2, 1.1;
        const double st = std::sin(q0[1]), ct = std::cos(q0[1]);
        const double sp = std::sin(q0[2]), cp = std::cos(q0[2]);
        Eigen::Vector3d mt(mu3 * st * sp, mu3 * st * cp, mu3 * ct);
        Eigen::Vector3d xi = mt.cwiseQuotient(I);
        Vec v0 = so3::euler_body_matrix_inv(q0[1], q0[2]) * xi;
        b.default_initial = ChartState(chart, q0, v0);
    }
    b.expected_g_regular = true;
    b.full_metric.angular = {1, 0, 1};
    b.reduced_metric.angular = {0, 1};

    b.reference_formulas["mu_tilde"] = [mu3](const ChartState& s) {
        const double th = s.q[1], ps = s.q[2];
        return Vec((Vec(3) << mu3 * std::sin(th) * std::sin(ps),
                    mu3 * std::sin(th) * std::cos(ps), mu3 * std::cos(th))
                       .finished());
    };
    b.reference_formulas["J_L"] = [sys, act](const ChartState& s) {
        return momentum_map(*sys, act, s);
    };
    return b;
}

// ---------------------------------------------------------------------------
// Heavy top in a magnetic field

SystemBundle heavy_top_magnetic(double m, double g, double eps, double I1, double I3,
                                double OmegaB) {
    SystemBundle b;
    b.name = "heavy-top";
    b.params = {{"m", m}, {"g", g}, {"eps", eps}, {"I1", I1}, {"I3", I3}, {"OmegaB", OmegaB}};
    auto chart = euler_chart("heavy-top");

    auto rho_pp = [I1, I3](double th) {
        const double st = std::sin(th), ct = std::cos(th);
        return I1 * st * st + I3 * ct * ct;
    };
    auto drho_pp = [I1, I3](double th) { return 2.0 * (I1 - I3) * std::sin(th) * std::cos(th); };

    auto sys = std::make_shared<LagrangianSystem>();
    sys->chart = chart;
    sys->L = [=](const ChartState& s) {
        const double th = s.q[1];
        const double dphi = s.v[0], dth = s.v[1], dpsi = s.v[2];
        const double ct = std::cos(th);
        return 0.5 * I1 * dth * dth + 0.5 * I3 * dpsi * dpsi + I3 * ct * dphi * dpsi +
               0.5 * rho_pp(th) * dphi * dphi - m * g * eps * ct -
               OmegaB * (rho_pp(th) * dphi + I3 * ct * dpsi);
    };
    sys->F = ForceTerm::zero();

    AnalyticPartials ap;
    ap.dLdv = [=](const ChartState& s) {
        const double th = s.q[1];
        const double ct = std::cos(th);
        Vec p(3);
        p[0] = rho_pp(th) * s.v[0] + I3 * ct * s.v[2] - OmegaB * rho_pp(th);
        p[1] = I1 * s.v[1];
        p[2] = I3 * s.v[2] + I3 * ct * s.v[0] - OmegaB * I3 * ct;
        return p;
    };
    ap.dLdq = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th);
        Vec gq = Vec::Zero(3);
        gq[1] = 0.5 * drho_pp(th) * s.v[0] * s.v[0] - I3 * st * s.v[0] * s.v[2] +
                m * g * eps * st - OmegaB * (drho_pp(th) * s.v[0] - I3 * st * s.v[2]);
        return gq;
    };
    ap.d2Ldvdv = [=](const ChartState& s) {
        const double th = s.q[1];
        const double ct = std::cos(th);
        Mat H(3, 3);
        H << rho_pp(th), 0, I3 * ct,
             0, I1, 0,
             I3 * ct, 0, I3;
        return H;
    };
    ap.d2Ldvdq = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th);
        Mat H = Mat::Zero(3, 3);
        H(0, 1) = drho_pp(th) * s.v[0] - I3 * st * s.v[2] - OmegaB * drho_pp(th);
        H(1, 1) = 0.0;
        H(2, 1) = -I3 * st * s.v[0] + OmegaB * I3 * st;
        return H;
    };
    sys->partials = ap;
    b.sys = sys;

    GroupAction act;
    act.group = LieGroup::torus(1);
    act.side = GroupAction::Side::Left;
    act.act = [](const GroupElement& gel, const Vec& q) {
        Vec out = q;
        out[0] += gel.translation[0];
        return out;
    };
    act.generator = [](const Vec&, const Vec& xi) {
        Vec g3 = Vec::Zero(3);
        g3[0] = xi[0];
        return g3;
    };
    act.act_jacobian = [](const GroupElement&, const Vec&) { return Mat::Identity(3, 3); };
    b.action = act;

    b.default_connection = mechanical_connection(*sys, act);
    Mat Wflat(1, 3);
    Wflat << 1, 0, 0;
    b.alt_connections["flat"] = flat_connection(act, Wflat);

    QuotientChart qc;
    qc.x_chart = make_chart("heavy-top/base", {"theta", "psi"}, pole_at(0));
    qc.y_chart = make_chart("heavy-top/fibre", {});
    qc.xi_dim = 1;
    qc.proj_x = [](const Vec& q) { return Vec(q.tail(2)); };
    qc.proj_y = [](const Vec&) { return Vec(Vec::Zero(0)); };
    qc.section = [](const Vec& x, const Vec&) {
        Vec q(3);
        q << 0.0, x[0], x[1];
        return q;
    };
    qc.class_components = [](const Vec&, const Vec& xi) { return xi; };
    qc.class_representative = [](const Vec&, const Vec& c) { return c; };
    qc.dproj_x = [](const Vec&) {
        Mat J(2, 3);
        J << 0, 1, 0, 0, 0, 1;
        return J;
    };
    qc.dproj_y = [](const Vec&) { return Mat(Mat::Zero(0, 3)); };
    b.qchart = qc;

    b.sample_state = [chart](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        std::uniform_real_distribution<double> th(0.5, kPi - 0.5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec q(3), v(3);
        q << ang(rng), th(rng), ang(rng);
        for (int i = 0; i < 3; ++i) v[i] = u(rng);
        return ChartState(chart, q, v);
    };

    b.default_mu = Vec::Constant(1, 2.0);
    {
        Vec q0(3), v0(3);
        q0 << 0.0, 1.1, 0.4;
        const double th = q0[1];
        const double dth = 0.3, dpsi = 1.2;
        const double dphi = (b.default_mu[0] - I3 * std::cos(th) * dpsi) / rho_pp(th) + OmegaB;
        v0 << dphi, dth, dpsi;
        b.default_initial = ChartState(chart, q0, v0);
    }
    b.expected_g_regular = true;
    b.full_metric.angular = {1, 0, 1};
    b.reduced_metric.angular = {0, 1};

    b.reference_formulas["J_L"] = [=](const ChartState& s) {
        const double th = s.q[1];
        Vec j(1);
        j[0] = rho_pp(th) * s.v[0] + I3 * std::cos(th) * s.v[2] - OmegaB * rho_pp(th);
        return j;
    };
    b.reference_formulas["V_mu"] = [=, mu = b.default_mu[0]](const ChartState& s) {
        const double th = s.q[1];
        Vec v(1);
        const double a = mu + OmegaB * rho_pp(th);
        v[0] = m * g * eps * std::cos(th) + 0.5 * a * a / rho_pp(th);
        return v;
    };
    b.reference_formulas["omega_psi"] = [=](const ChartState& s) {
        Vec v(1);
        v[0] = I3 * std::cos(s.q[1]) / rho_pp(s.q[1]);
        return v;
    };
    b.reference_formulas["larmor_phidot"] = [=, mu = b.default_mu[0]](const ChartState& s) {
        Vec v(1);
        v[0] = (mu - I3 * std::cos(s.q[1]) * s.v[2]) / rho_pp(s.q[1]) + OmegaB;
        return v;
    };
    return b;
}

// ---------------------------------------------------------------------------
// Tippe top

SystemBundle tippe_top(double m, double g, double R, double eps, double A, double C,
                       double mu_f) {
    SystemBundle b;
    b.name = "tippe-top";
    b.params = {{"m", m}, {"g", g}, {"R", R}, {"eps", eps}, {"A", A}, {"C", C}, {"mu_f", mu_f}};
    auto chart = euler_chart("tippe-top");

    auto sys = std::make_shared<LagrangianSystem>();
    sys->chart = chart;
    sys->L = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        const double dphi = s.v[0], dth = s.v[1], dpsi = s.v[2];
        const double spin = dpsi + dphi * ct;
        return 0.5 * ((eps * eps * m * st * st + A) * dth * dth + A * st * st * dphi * dphi +
                      C * spin * spin) -
               m * g * (R - eps * ct);
    };
    sys->F = ForceTerm::general([=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th);
        const double slide = eps * s.v[0] + R * s.v[2];
        Vec F(3);
        F[0] = -mu_f * eps * st * st * slide;
        F[1] = -mu_f * std::pow(R - eps * std::cos(th), 2) * s.v[1];
        F[2] = -mu_f * R * st * st * slide;
        return F;
    });

    AnalyticPartials ap;
    ap.dLdv = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        const double spin = s.v[2] + s.v[0] * ct;
        Vec p(3);
        p[0] = A * st * st * s.v[0] + C * spin * ct;
        p[1] = (eps * eps * m * st * st + A) * s.v[1];
        p[2] = C * spin;
        return p;
    };
    ap.dLdq = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        const double spin = s.v[2] + s.v[0] * ct;
        Vec gq = Vec::Zero(3);
        gq[1] = eps * eps * m * st * ct * s.v[1] * s.v[1] + A * st * ct * s.v[0] * s.v[0] +
                C * spin * (-st * s.v[0]) - m * g * eps * st;
        return gq;
    };
    ap.d2Ldvdv = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        Mat H(3, 3);
        H << A * st * st + C * ct * ct, 0, C * ct,
             0, eps * eps * m * st * st + A, 0,
             C * ct, 0, C;
        return H;
    };
    ap.d2Ldvdq = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        const double spin = s.v[2] + s.v[0] * ct;
        Mat H = Mat::Zero(3, 3);
        H(0, 1) = 2.0 * A * st * ct * s.v[0] - C * st * s.v[0] * ct - C * spin * st;
        H(1, 1) = 2.0 * eps * eps * m * st * ct * s.v[1];
        H(2, 1) = -C * st * s.v[0];
        return H;
    };
    sys->partials = ap;
    b.sys = sys;

    GroupAction act;
    act.group = LieGroup::torus(1);
    act.side = GroupAction::Side::Left;
    act.act = [R, eps](const GroupElement& gel, const Vec& q) {
        Vec out = q;
        out[0] += R * gel.translation[0];
        out[2] -= eps * gel.translation[0];
        return out;
    };
    act.generator = [R, eps](const Vec&, const Vec& xi) {
        Vec g3(3);
        g3 << R * xi[0], 0.0, -eps * xi[0];
        return g3;
    };
    act.act_jacobian = [](const GroupElement&, const Vec&) { return Mat::Identity(3, 3); };
    b.action = act;

    Mat W(1, 3);
    W << R / (R * R + eps * eps), 0, -eps / (R * R + eps * eps);
    b.default_connection = flat_connection(act, W);

    QuotientChart qc;
    qc.x_chart = make_chart("tippe-top/base", {"theta", "u"}, pole_at(0));
    qc.y_chart = make_chart("tippe-top/fibre", {});
    qc.xi_dim = 1;
    qc.proj_x = [R, eps](const Vec& q) {
        Vec x(2);
        x << q[1], eps * q[0] + R * q[2];
        return x;
    };
    qc.proj_y = [](const Vec&) { return Vec(Vec::Zero(0)); };
    qc.section = [R, eps](const Vec& x, const Vec&) {
        const double denom = R * R + eps * eps;
        Vec q(3);
        q << eps * x[1] / denom, x[0], R * x[1] / denom;
        return q;
    };
    qc.class_components = [](const Vec&, const Vec& xi) { return xi; };
    qc.class_representative = [](const Vec&, const Vec& c) { return c; };
    qc.dproj_x = [R, eps](const Vec&) {
        Mat J(2, 3);
        J << 0, 1, 0, eps, 0, R;
        return J;
    };
    qc.dproj_y = [](const Vec&) { return Mat(Mat::Zero(0, 3)); };
    b.qchart = qc;

    b.sample_state = [chart](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        std::uniform_real_distribution<double> th(0.6, kPi - 0.6);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec q(3), v(3);
        q << ang(rng), th(rng), ang(rng);
        for (int i = 0; i < 3; ++i) v[i] = u(rng);
        return ChartState(chart, q, v);
    };

    {
        Vec q0(3), v0(3);
        q0 << 0.4, 1.0, 0.2;
        v0 << 0.5, 0.3, 2.0;
        b.default_initial = ChartState(chart, q0, v0);
        b.default_mu = momentum_map(*sys, act, b.default_initial);
    }
    b.expected_g_regular = true;
    b.full_metric.angular = {1, 0, 1};

    b.reference_formulas["J_L"] = [=](const ChartState& s) {
        const double th = s.q[1];
        const double st = std::sin(th), ct = std::cos(th);
        Vec j(1);
        j[0] = R * A * st * st * s.v[0] + C * (s.v[2] + ct * s.v[0]) * (R * ct - eps);
        return j;
    };
    return b;
}

// ---------------------------------------------------------------------------
// pp-wave geodesics

SystemBundle pp_wave(std::function<double(double, double, double)> H,
                     std::function<Eigen::Vector3d(double, double, double)> gradH) {
    if (!H) {
        H = [](double, double x, double y) { return x * x - y * y; };
        gradH = [](double, double x, double y) { return Eigen::Vector3d(0.0, 2.0 * x, -2.0 * y); };
    }
    if (!gradH) {
        auto Hc = H;
        gradH = [Hc](double u, double x, double y) {
            const double h = fd_step(1.0);
            return Eigen::Vector3d((Hc(u + h, x, y) - Hc(u - h, x, y)) / (2 * h),
                                   (Hc(u, x + h, y) - Hc(u, x - h, y)) / (2 * h),
                                   (Hc(u, x, y + h) - Hc(u, x, y - h)) / (2 * h));
        };
    }

    SystemBundle b;
    b.name = "pp-wave";
    auto chart = make_chart("pp-wave", {"u", "v", "x", "y"});

    auto sys = std::make_shared<LagrangianSystem>();
    sys->chart = chart;
    sys->L = [H](const ChartState& s) {
        const double h = H(s.q[0], s.q[2], s.q[3]);
        return 0.5 * (h * s.v[0] * s.v[0] + 2.0 * s.v[0] * s.v[1] + s.v[2] * s.v[2] +
                      s.v[3] * s.v[3]);
    };
    sys->F = ForceTerm::zero();

    AnalyticPartials ap;
    ap.dLdv = [H](const ChartState& s) {
        const double h = H(s.q[0], s.q[2], s.q[3]);
        Vec p(4);
        p << h * s.v[0] + s.v[1], s.v[0], s.v[2], s.v[3];
        return p;
    };
    ap.dLdq = [gradH](const ChartState& s) {
        Eigen::Vector3d gh = gradH(s.q[0], s.q[2], s.q[3]);
        const double u2 = 0.5 * s.v[0] * s.v[0];
        Vec g(4);
        g << u2 * gh[0], 0.0, u2 * gh[1], u2 * gh[2];
        return g;
    };
    ap.d2Ldvdv = [H](const ChartState& s) {
        Mat M(4, 4);
        M << H(s.q[0], s.q[2], s.q[3]), 1, 0, 0,
             1, 0, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1;
        return M;
    };
    ap.d2Ldvdq = [gradH](const ChartState& s) {
        Eigen::Vector3d gh = gradH(s.q[0], s.q[2], s.q[3]);
        Mat M = Mat::Zero(4, 4);
        M(0, 0) = s.v[0] * gh[0];
        M(0, 2) = s.v[0] * gh[1];
        M(0, 3) = s.v[0] * gh[2];
        return M;
    };
    sys->partials = ap;
    b.sys = sys;

    GroupAction act;
    act.group = LieGroup::abelian(1);
    act.side = GroupAction::Side::Left;
    act.act = [](const GroupElement& gel, const Vec& q) {
        Vec out = q;
        out[1] += gel.translation[0];
        return out;
    };
    act.generator = [](const Vec&, const Vec& xi) {
        Vec g4 = Vec::Zero(4);
        g4[1] = xi[0];
        return g4;
    };
    act.act_jacobian = [](const GroupElement&, const Vec&) { return Mat::Identity(4, 4); };
    b.action = act;

    Mat W(1, 4);
    W << 0, 1, 0, 0;
    b.default_connection = flat_connection(act, W);

    QuotientChart qc;
    qc.x_chart = make_chart("pp-wave/base", {"u", "x", "y"});
    qc.y_chart = make_chart("pp-wave/fibre", {});
    qc.xi_dim = 1;
    qc.proj_x = [](const Vec& q) {
        Vec x(3);
        x << q[0], q[2], q[3];
        return x;
    };
    qc.proj_y = [](const Vec&) { return Vec(Vec::Zero(0)); };
    qc.section = [](const Vec& x, const Vec&) {
        Vec q(4);
        q << x[0], 0.0, x[1], x[2];
        return q;
    };
    qc.class_components = [](const Vec&, const Vec& xi) { return xi; };
    qc.class_representative = [](const Vec&, const Vec& c) { return c; };
    qc.dproj_x = [](const Vec&) {
        Mat J(3, 4);
        J << 1, 0, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1;
        return J;
    };
    qc.dproj_y = [](const Vec&) { return Mat(Mat::Zero(0, 4)); };
    b.qchart = qc;

    b.sample_state = [chart](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec q(4), v(4);
        for (int i = 0; i < 4; ++i) { q[i] = u(rng); v[i] = u(rng); }
        return ChartState(chart, q, v);
    };

    {
        Vec q0(4), v0(4);
        q0 << 0.0, 0.0, 0.3, 0.4;
        v0 << 0.8, 0.25, 0.1, -0.2;
        b.default_initial = ChartState(chart, q0, v0);
        b.default_mu = Vec::Constant(1, 0.8);
    }
    b.expected_g_regular = false;
    b.assume_mu_regular = true;  // lightlike symmetry direction: locked inertia is [0]
    b.reference_formulas["J_L"] = [](const ChartState& s) { return Vec(s.v.head(1)); };
    return b;
}

std::vector<std::string> names() {
    return {"toy", "rigid-body", "heavy-top", "tippe-top", "pp-wave"};
}

SystemBundle make(const std::string& name, const std::map<std::string, double>& p) {
    if (name == "toy") return toy_cyclic();
    if (name == "rigid-body")
        return free_rigid_body(get(p, "I1", 1.0), get(p, "I2", 2.0), get(p, "I3", 3.0),
                               get(p, "mu3", 2.0));
    if (name == "heavy-top")
        return heavy_top_magnetic(get(p, "m", 1.0), get(p, "g", 9.81), get(p, "eps", 0.1),
                                  get(p, "I1", 1.0), get(p, "I3", 0.5), get(p, "OmegaB", 0.01));
    if (name == "tippe-top")
        return tippe_top(get(p, "m", 1.0), get(p, "g", 9.81), get(p, "R", 1.0),
                         get(p, "eps", 0.3), get(p, "A", 1.0), get(p, "C", 0.8),
                         get(p, "mu_f", 0.1));
    if (name == "pp-wave") return pp_wave();
    throw std::invalid_argument("unknown system '" + name + "'");
}

}  // namespace systems

}  // namespace routh
