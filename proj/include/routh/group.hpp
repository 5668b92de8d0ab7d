#pragma once

#include <functional>

#include "routh/chart.hpp"
#include "routh/types.hpp"

namespace routh {

namespace so3 {

/// hat: R^3 -> so(3), vee its inverse.
Eigen::Matrix3d hat(const Eigen::Vector3d& w);
Eigen::Vector3d vee(const Eigen::Matrix3d& W);

/// Rodrigues exponential.
Eigen::Matrix3d exp(const Eigen::Vector3d& w);

/// Nearest rotation (polar projection via SVD).
Eigen::Matrix3d project(const Eigen::Matrix3d& M);

// z-x-z Euler angles: A = Rz(phi) Rx(theta) Rz(psi).
Eigen::Matrix3d from_euler(double phi, double theta, double psi);
Eigen::Vector3d to_euler(const Eigen::Matrix3d& A);  // (phi, theta, psi)

/// Body rates matrix: body angular velocity = Kb(theta, psi) * (dphi, dtheta, dpsi).
Eigen::Matrix3d euler_body_matrix(double theta, double psi);
/// Its inverse; singular at the theta poles.
Eigen::Matrix3d euler_body_matrix_inv(double theta, double psi);

}  // namespace so3

/// Group element of one of the built-in kinds. Abelian kinds store a
/// translation vector, SO(3) stores the rotation matrix.
struct GroupElement {
    Vec translation;      // abelian / torus
    Eigen::Matrix3d rot;  // SO(3)
    bool is_matrix = false;

    static GroupElement from_vec(Vec t) {
        GroupElement g; g.translation = std::move(t); return g;
    }
    static GroupElement from_matrix(const Eigen::Matrix3d& R) {
        GroupElement g; g.rot = R; g.is_matrix = true; return g;
    }
};

/// The three built-in group kinds. Interfaces are basis-explicit: Lie algebra
/// elements and momenta are plain coordinate vectors in a fixed basis, so a
/// new group is data, not code.
struct LieGroup {
    enum class Kind { AbelianRk, Torus, SO3 };
    Kind kind = Kind::AbelianRk;
    int dim = 0;

    static LieGroup abelian(int k) { return {Kind::AbelianRk, k}; }
    static LieGroup torus(int k) { return {Kind::Torus, k}; }
    static LieGroup so3() { return {Kind::SO3, 3}; }

    bool is_abelian() const { return kind != Kind::SO3; }

    Vec bracket(const Vec& xi, const Vec& eta) const;
    /// ad*_xi mu, defined by <ad*_xi mu, eta> = <mu, [xi, eta]>. For SO(3)
    /// this is the cross product mu x xi.
    Vec coad_star(const Vec& xi, const Vec& mu) const;
    Vec Ad(const GroupElement& g, const Vec& xi) const;
    /// Coadjoint action: <coAd(g, mu), xi> = <mu, Ad(g, xi)>.
    Vec coAd(const GroupElement& g, const Vec& mu) const;

    GroupElement exp(const Vec& xi) const;
    GroupElement identity() const;
    GroupElement compose(const GroupElement& g, const GroupElement& h) const;
    GroupElement inverse(const GroupElement& g) const;
};

/// A group action on a chart: the chart realization of act, its tangent lift,
/// and the infinitesimal generator sigma_q(xi).
struct GroupAction {
    enum class Side { Left, Right };

    LieGroup group;
    Side side = Side::Left;
    std::function<Vec(const GroupElement&, const Vec&)> act;
    std::function<Vec(const Vec& q, const Vec& xi)> generator;
    /// Jacobian of q -> act(g, q); finite differences when not supplied.
    std::function<Mat(const GroupElement&, const Vec&)> act_jacobian;

    Mat act_jacobian_at(const GroupElement& g, const Vec& q) const;
    ChartState act_tangent(const GroupElement& g, const ChartState& s) const;
    /// Matrix of the generator at q: column i = generator(q, e_i).
    Mat generator_matrix(const Vec& q) const;

    int sign() const { return side == Side::Right ? +1 : -1; }
};

}  // namespace routh
