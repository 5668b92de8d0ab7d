#pragma once

#include <map>
#include <string>

#include "routh/reconstruction.hpp"

namespace routh {

/// A packaged example system: the Lagrangian triple, its symmetry, a default
/// principal connection, the quotient trivialization, deterministic state
/// sampling, default run fixtures, and named closed-form reference quantities
/// used as test oracles.
struct SystemBundle {
    std::string name;
    SystemPtr sys;
    GroupAction action;
    PrincipalConnection default_connection;
    std::map<std::string, PrincipalConnection> alt_connections;
    QuotientChart qchart;
    std::map<std::string, double> params;
    StateSampler sample_state;
    ChartState default_initial;
    Vec default_mu;
    bool expected_g_regular = false;
    bool assume_mu_regular = false;  // locked inertia degenerate but mu still regular
    TrajectoryMetric full_metric;
    TrajectoryMetric reduced_metric;
    std::map<std::string, std::function<Vec(const ChartState&)>> reference_formulas;

    ReducedSystem make_reduced(const Vec* mu_override = nullptr) const;
    ReducedSystem make_reduced_with(const PrincipalConnection& conn,
                                    const Vec* mu_override = nullptr) const;
};

namespace systems {

/// The cyclic-coordinate example: L = v1^2 + v1 v2 - V(q1) on R^2 with
/// translations in q2. Hyperregular but not G-regular.
SystemBundle toy_cyclic(std::function<double(double)> V = nullptr,
                        std::function<double(double)> dV = nullptr);

/// Left-invariant free rigid body on SO(3) in z-x-z Euler angles, with the
/// standard connection.
SystemBundle free_rigid_body(double I1 = 1.0, double I2 = 2.0, double I3 = 3.0, double mu3 = 2.0);

/// Symmetric charged heavy top in a constant vertical magnetic field; S^1
/// symmetry in phi, mechanical connection. OmegaB = 0 is the classic top.
SystemBundle heavy_top_magnetic(double m = 1.0, double g = 9.81, double eps = 0.1,
                                double I1 = 1.0, double I3 = 0.5, double OmegaB = 0.01);

/// Tippe top with sliding friction; the skewed S^1 action whose momentum is
/// the Jellet integral.
SystemBundle tippe_top(double m = 1.0, double g = 9.81, double R = 1.0, double eps = 0.3,
                       double A = 1.0, double C = 0.8, double mu_f = 0.1);

/// Plane-fronted wave metric H du^2 + 2 du dv + dx^2 + dy^2 with the
/// lightlike translation symmetry in v. Defaults to H = x^2 - y^2.
SystemBundle pp_wave(std::function<double(double, double, double)> H = nullptr,
                     std::function<Eigen::Vector3d(double, double, double)> gradH = nullptr);

/// Registry addressable by the CLI names.
std::vector<std::string> names();
SystemBundle make(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace systems

}  // namespace routh
