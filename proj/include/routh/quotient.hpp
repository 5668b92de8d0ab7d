#pragma once

#include "routh/connection.hpp"

namespace routh {

/// One local trivialization of the quotient stack of Q under G and G_mu. No
/// global quotient manifold is ever built: `proj_x` realizes Q -> Q/G,
/// `proj_y` the fibre part of Q -> Q/G_mu, `section` picks the gauge
/// representative over (x, y), and `class_components` trivializes the
/// adjoint bundle: components of [q, xi]_G in a fixed basis (invariant under
/// moving (q, xi) along the action, so they depend on the class alone).
struct QuotientChart {
    ChartPtr x_chart;  // Q/G coordinates (may be zero-dimensional)
    ChartPtr y_chart;  // fibre coordinates of Q/G_mu -> Q/G (may be zero-dimensional)
    int xi_dim = 0;    // = dim G

    std::function<Vec(const Vec& q)> proj_x;
    std::function<Vec(const Vec& q)> proj_y;
    std::function<Vec(const Vec& x, const Vec& y)> section;
    std::function<Vec(const Vec& q, const Vec& xi)> class_components;
    std::function<Vec(const Vec& q, const Vec& comps)> class_representative;

    // Analytic tangent maps; finite differences when unset.
    std::function<Mat(const Vec& q)> dproj_x;
    std::function<Mat(const Vec& q)> dproj_y;

    Mat proj_x_jacobian(const Vec& q) const;
    Mat proj_y_jacobian(const Vec& q) const;

    int n() const { return x_chart->dim; }
    int k() const { return y_chart->dim; }
};

/// Horizontal lift of v_x in T_x(Q/G) to q: the unique u with Tpi(u) = v_x
/// and omega(u) = 0.
Vec horizontal_lift(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& v_x,
                    const Vec& q);

/// A point of T(Q/G) x Q/G_mu x g-tilde in trivialized coordinates.
struct ReducedPoint {
    Vec x, vx, y, xi;
};

/// phi_omega: split a full tangent vector into (v_x, y, xi-components).
ReducedPoint quotient_coords(const PrincipalConnection& conn, const QuotientChart& qc,
                             const ChartState& s);

/// psi_omega: rebuild a full state from reduced coordinates; `gauge` moves the
/// section representative along G_mu. quotient_coords(assemble(r)) == r up to
/// numerics; the opposite round trip recovers the state modulo gauge.
ChartState assemble(const PrincipalConnection& conn, const QuotientChart& qc, ChartPtr full_chart,
                    const ReducedPoint& r, const GroupElement* gauge = nullptr);

/// mu-tilde at (x, y): components <mu, class_representative(q, e_a)> at the
/// section point.
Vec mu_tilde(const QuotientChart& qc, const Vec& mu, const Vec& x, const Vec& y);

/// Blocks of the two-form beta^mu (the projection of d omega^mu to Q/G_mu):
/// horizontal-horizontal on base coordinate lifts, vertical-vertical on
/// adjoint-class directions, plus the certified-zero mixed block. The full
/// coordinate matrix on (x, y) is what integrators consume.
struct BetaBlocks {
    Mat omega_mu;       // n x n, <mu-tilde, curvature> on base directions
    Mat ad_star_block;  // xi_dim x xi_dim on class components; kernel contains g_mu
    double max_hv = 0;  // worst mixed-block entry
};
BetaBlocks beta_mu_blocks(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& mu,
                          const Vec& x, const Vec& y);

/// beta^mu as an antisymmetric matrix on the (x, y) coordinates of Q/G_mu,
/// evaluated through arbitrary pi_mu-lifts (d omega^mu kills G_mu verticals,
/// so the lift choice is immaterial).
Mat beta_mu_matrix(const PrincipalConnection& conn, const QuotientChart& qc, const Vec& mu,
                   const Vec& x, const Vec& y);

/// Covariant derivative along a sampled curve in the adjoint bundle, in
/// representative-at-q(t) components: e-dot +/- [omega(q-dot), e] (sign by
/// action side). Grid derivatives are central differences.
std::vector<Vec> covariant_derivative(const PrincipalConnection& conn,
                                      const std::vector<double>& times,
                                      const std::vector<Vec>& q_curve,
                                      const std::vector<Vec>& e_curve);

}  // namespace routh
