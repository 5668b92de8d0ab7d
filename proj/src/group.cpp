#include "routh/group.hpp"

#include <cmath>

#include "routh/numdiff.hpp"

namespace routh {

namespace so3 {

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
    Eigen::Matrix3d W;
    W << 0, -w.z(), w.y(),
         w.z(), 0, -w.x(),
        -w.y(), w.x(), 0;
    return W;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& W) {
    return {W(2, 1), W(0, 2), W(1, 0)};
}

Eigen::Matrix3d exp(const Eigen::Vector3d& w) {
    const double a = w.norm();
    Eigen::Matrix3d W = hat(w);
    if (a < 1e-12) return Eigen::Matrix3d::Identity() + W + 0.5 * W * W;
    return Eigen::Matrix3d::Identity() + std::sin(a) / a * W +
           (1.0 - std::cos(a)) / (a * a) * W * W;
}

Eigen::Matrix3d project(const Eigen::Matrix3d& M) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d R = svd.matrixU() * svd.matrixV().transpose();
    if (R.determinant() < 0) {
        Eigen::Matrix3d U = svd.matrixU();
        U.col(2) *= -1.0;
        R = U * svd.matrixV().transpose();
    }
    return R;
}

static Eigen::Matrix3d rot_z(double a) {
    Eigen::Matrix3d R;
    R << std::cos(a), -std::sin(a), 0,
         std::sin(a), std::cos(a), 0,
         0, 0, 1;
    return R;
}

static Eigen::Matrix3d rot_x(double a) {
    Eigen::Matrix3d R;
    R << 1, 0, 0,
         0, std::cos(a), -std::sin(a),
         0, std::sin(a), std::cos(a);
    return R;
}

Eigen::Matrix3d from_euler(double phi, double theta, double psi) {
    return rot_z(phi) * rot_x(theta) * rot_z(psi);
}

Eigen::Vector3d to_euler(const Eigen::Matrix3d& A) {
    const double c = std::clamp(A(2, 2), -1.0, 1.0);
    const double theta = std::acos(c);
    // At the poles phi and psi are not separately defined; callers guard via
    // the chart's singular region.
    const double phi = std::atan2(A(0, 2), -A(1, 2));
    const double psi = std::atan2(A(2, 0), A(2, 1));
    return {phi, theta, psi};
}

Eigen::Matrix3d euler_body_matrix(double theta, double psi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(psi), cp = std::cos(psi);
    Eigen::Matrix3d K;
    K << st * sp, cp, 0,
         st * cp, -sp, 0,
         ct, 0, 1;
    return K;
}

Eigen::Matrix3d euler_body_matrix_inv(double theta, double psi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(psi), cp = std::cos(psi);
    Eigen::Matrix3d K;
    K << sp / st, cp / st, 0,
         cp, -sp, 0,
         -sp * ct / st, -cp * ct / st, 1;
    return K;
}

}  // namespace so3

Vec LieGroup::bracket(const Vec& xi, const Vec& eta) const {
    if (kind == Kind::SO3) {
        Eigen::Vector3d a = xi, b = eta;
        return a.cross(b).eval();
    }
    return Vec::Zero(dim);
}

Vec LieGroup::coad_star(const Vec& xi, const Vec& mu) const {
    if (kind == Kind::SO3) {
        Eigen::Vector3d m = mu, x = xi;
        return m.cross(x).eval();
    }
    return Vec::Zero(dim);
}

Vec LieGroup::Ad(const GroupElement& g, const Vec& xi) const {
    if (kind == Kind::SO3) return (g.rot * Eigen::Vector3d(xi)).eval();
    return xi;
}

Vec LieGroup::coAd(const GroupElement& g, const Vec& mu) const {
    if (kind == Kind::SO3) return (g.rot.transpose() * Eigen::Vector3d(mu)).eval();
    return mu;
}

GroupElement LieGroup::exp(const Vec& xi) const {
    if (kind == Kind::SO3) return GroupElement::from_matrix(so3::exp(Eigen::Vector3d(xi)));
    return GroupElement::from_vec(xi);
}

GroupElement LieGroup::identity() const {
    if (kind == Kind::SO3) return GroupElement::from_matrix(Eigen::Matrix3d::Identity());
    return GroupElement::from_vec(Vec::Zero(dim));
}

GroupElement LieGroup::compose(const GroupElement& g, const GroupElement& h) const {
    if (kind == Kind::SO3) return GroupElement::from_matrix((g.rot * h.rot).eval());
    return GroupElement::from_vec(g.translation + h.translation);
}

GroupElement LieGroup::inverse(const GroupElement& g) const {
    if (kind == Kind::SO3) return GroupElement::from_matrix(g.rot.transpose().eval());
    return GroupElement::from_vec(-g.translation);
}

Mat GroupAction::act_jacobian_at(const GroupElement& g, const Vec& q) const {
    if (act_jacobian) return act_jacobian(g, q);
    return fd_jacobian([&](const Vec& p) { return act(g, p); }, q);
}

ChartState GroupAction::act_tangent(const GroupElement& g, const ChartState& s) const {
    Vec qg = act(g, s.q);
    Mat J = act_jacobian_at(g, s.q);
    return ChartState(s.chart, std::move(qg), J * s.v);
}

Mat GroupAction::generator_matrix(const Vec& q) const {
    Mat G(q.size(), group.dim);
    for (int i = 0; i < group.dim; ++i)
        G.col(i) = generator(q, Vec::Unit(group.dim, i));
    return G;
}

}  // namespace routh
