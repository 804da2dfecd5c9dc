//! Exact integration of polynomials over triangles and edges, and the
//! closed-form reference-triangle integrals used as an independent oracle.
//!
//! Triangle integration pulls the integrand back to the reference triangle
//! `{t, s >= 0, t + s <= 1}` and uses the exact monomial moments
//! `int t^a s^b = a! b! / (a + b + 2)!`, so every polynomial up to the
//! [`crate::poly::MAX_DEGREE`] bound is integrated exactly (up to roundoff).
//! A collapsed Gauss rule of selectable exactness degree is provided as a
//! second, pointwise route for cross-checks.

use crate::error::{Error, Result};
use crate::geom::{signed_area_x2, Point};
use crate::poly::{Poly2, MAX_DEGREE};

/// Which member of a reference triangle pair `{Delta^+, Delta^-}`:
/// `Plus` opens upward (`0 <= s <= k`), `Minus` downward (`-k <= s <= 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `a! b! / (a + b + 2)!`, the moment of `t^a s^b` on the reference triangle.
fn reference_moment(a: usize, b: usize) -> f64 {
    factorial(a) * factorial(b) / factorial(a + b + 2)
}

/// Exact integral of `p` over the triangle with the given vertices.
/// Independent of vertex ordering.
pub fn integrate_triangle(p: &Poly2, v: &[Point; 3]) -> f64 {
    let jac = signed_area_x2(v[0], v[1], v[2]).abs();
    let q = p.compose_affine(
        [v[0].x, v[1].x - v[0].x, v[2].x - v[0].x],
        [v[0].y, v[1].y - v[0].y, v[2].y - v[0].y],
    );
    let mut acc = 0.0;
    for a in 0..=MAX_DEGREE {
        for b in 0..=MAX_DEGREE - a {
            let c = q.coeff(a, b);
            if c != 0.0 {
                acc += c * reference_moment(a, b);
            }
        }
    }
    jac * acc
}

// 4-point Gauss-Legendre rule on [0, 1]; exact for degree <= 7, which covers
// the restriction of any representable polynomial to a segment.
fn gauss4_01() -> [(f64, f64); 4] {
    let s65 = (6.0f64 / 5.0).sqrt();
    let inner = ((3.0 - 2.0 * s65) / 7.0).sqrt() / 2.0;
    let outer = ((3.0 + 2.0 * s65) / 7.0).sqrt() / 2.0;
    let s30 = 30.0f64.sqrt();
    let w_inner = (18.0 + s30) / 72.0;
    let w_outer = (18.0 - s30) / 72.0;
    [
        (0.5 - outer, w_outer),
        (0.5 - inner, w_inner),
        (0.5 + inner, w_inner),
        (0.5 + outer, w_outer),
    ]
}

/// Exact line integral of `p` along the segment from `a` to `b` with respect
/// to arclength.
pub fn integrate_edge(p: &Poly2, a: Point, b: Point) -> Result<f64> {
    let length = (b - a).norm();
    if length < f64::MIN_POSITIVE {
        return Err(Error::DegenerateEdge { length });
    }
    let coeffs = p.restrict_segment(a, b);
    let mut acc = 0.0;
    for (t, w) in gauss4_01() {
        let mut v = 0.0;
        for c in coeffs.iter().rev() {
            v = v * t + c;
        }
        acc += w * v;
    }
    Ok(length * acc)
}

/// Closed form for `int over Delta_0^{sign} of t^a s^b dt ds` where
/// `Delta_0^+` has vertices `(-h, 0), (h, 0), (0, k)` and `Delta_0^-` its
/// mirror image below the `t`-axis. Zero for odd `a`.
pub fn closed_form_interior(alpha: usize, beta: usize, sign: Sign, h: f64, k: f64) -> f64 {
    if alpha % 2 == 1 {
        return 0.0;
    }
    sign.factor().powi(beta as i32)
        * 2.0
        * factorial(alpha)
        * factorial(beta)
        / factorial(alpha + beta + 2)
        * h.powi(alpha as i32 + 1)
        * k.powi(beta as i32 + 1)
}

/// Closed form for the right boundary triangles `Delta_0^+` with vertices
/// `(0, 0), (h, 0), (0, k)` and the mirrored `Delta_0^-`.
pub fn closed_form_boundary(alpha: usize, beta: usize, sign: Sign, h: f64, k: f64) -> f64 {
    sign.factor().powi(beta as i32)
        * factorial(alpha)
        * factorial(beta)
        / factorial(alpha + beta + 2)
        * h.powi(alpha as i32 + 1)
        * k.powi(beta as i32 + 1)
}

/// Vertices of the concrete pair triangles used to cross-check the closed
/// forms against [`integrate_triangle`].
pub fn pair_triangle_interior(sign: Sign, h: f64, k: f64) -> [Point; 3] {
    [
        Point::new(-h, 0.0),
        Point::new(h, 0.0),
        Point::new(0.0, sign.factor() * k),
    ]
}

pub fn pair_triangle_boundary(sign: Sign, h: f64, k: f64) -> [Point; 3] {
    [
        Point::new(0.0, 0.0),
        Point::new(h, 0.0),
        Point::new(0.0, sign.factor() * k),
    ]
}

/// Quadrature rule on the reference triangle with a guaranteed polynomial
/// exactness degree, built by collapsing a tensor Gauss rule onto the
/// triangle. Weights sum to the reference area 1/2.
#[derive(Clone, Debug)]
pub struct QuadRule {
    /// Barycentric coordinates of the quadrature points.
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadRule {
    pub fn new(degree: usize) -> Self {
        // Collapse (xi, eta) in [0,1]^2 via t = xi, s = eta (1 - xi); the xi
        // integrand picks up one extra power from the Jacobian.
        let n_xi = (degree + 3) / 2; // 2n-1 >= degree+1
        let n_eta = (degree + 2) / 2; // 2n-1 >= degree
        let gx = gauss_legendre_01(n_xi);
        let ge = gauss_legendre_01(n_eta);
        let mut points = Vec::with_capacity(n_xi * n_eta);
        let mut weights = Vec::with_capacity(n_xi * n_eta);
        for &(xi, wx) in &gx {
            for &(eta, we) in &ge {
                let t = xi;
                let s = eta * (1.0 - xi);
                points.push([1.0 - t - s, t, s]);
                weights.push(wx * we * (1.0 - xi));
            }
        }
        QuadRule { points, weights, degree }
    }

    /// Integrate a pointwise function over the triangle `v`.
    pub fn integrate_fn<F: Fn(f64, f64) -> f64>(&self, f: F, v: &[Point; 3]) -> f64 {
        let jac = signed_area_x2(v[0], v[1], v[2]).abs();
        let mut acc = 0.0;
        for (bary, w) in self.points.iter().zip(&self.weights) {
            let x = bary[0] * v[0].x + bary[1] * v[1].x + bary[2] * v[2].x;
            let y = bary[0] * v[0].y + bary[1] * v[1].y + bary[2] * v[2].y;
            acc += w * f(x, y);
        }
        jac * acc
    }
}

/// Gauss-Legendre nodes and weights on [0, 1], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_triangle() -> [Point; 3] {
        [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]
    }

    #[test]
    fn constant_over_reference_triangle_is_area() {
        let one = Poly2::constant(1.0);
        assert_relative_eq!(integrate_triangle(&one, &unit_triangle()), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn first_moment_over_reference_triangle() {
        let x = Poly2::monomial(1, 0, 1.0).unwrap();
        assert_relative_eq!(integrate_triangle(&x, &unit_triangle()), 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn ux_squared_over_unit_square() {
        // Sum over the triangles of T_{2,2} equals the symbolic integral of
        // (1-2x)^2 y^2 (1-y)^2 over the square, 1/90.
        let tri = crate::mesh::Triangulation::build(2, 2).unwrap();
        let u = Poly2::from_terms(&[(1, 1, 1.0), (2, 1, -1.0), (1, 2, -1.0), (2, 2, 1.0)]).unwrap();
        let ux2 = u.dx().mul(&u.dx()).unwrap();
        let total: f64 = (0..tri.triangles.len())
            .map(|t| integrate_triangle(&ux2, &tri.triangle_vertices(t)))
            .sum();
        assert_relative_eq!(total, 1.0 / 90.0, epsilon = 1e-14);
    }

    #[test]
    fn edge_length_and_midpoint_symmetry() {
        let one = Poly2::constant(1.0);
        let x = Poly2::monomial(1, 0, 1.0).unwrap();
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_relative_eq!(integrate_edge(&one, a, b).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(integrate_edge(&x, a, b).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn edge_integral_matches_1d_parametrization() {
        // x^2 along (0,0)-(0.5,0.5): arclength integral of (t/2)^2 * sqrt(2)/2 dt... i.e.
        // L * int_0^1 (t/2)^2 dt with L = sqrt(2)/2, giving (sqrt(2)/2)/12.
        let x2 = Poly2::monomial(2, 0, 1.0).unwrap();
        let got = integrate_edge(&x2, Point::new(0.0, 0.0), Point::new(0.5, 0.5)).unwrap();
        let expect = (0.5f64 * 0.5 + 0.5 * 0.5).sqrt() * (1.0 / 12.0) * 0.25;
        assert_relative_eq!(got, expect, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_edge_rejected() {
        let one = Poly2::constant(1.0);
        let p = Point::new(0.3, 0.3);
        assert!(matches!(
            integrate_edge(&one, p, p),
            Err(crate::Error::DegenerateEdge { .. })
        ));
    }

    #[test]
    fn closed_form_interior_examples() {
        let (h, k) = (0.125, 0.03125);
        assert_relative_eq!(closed_form_interior(0, 0, Sign::Plus, h, k), h * k, epsilon = 1e-17);
        assert_eq!(closed_form_interior(1, 0, Sign::Plus, h, k), 0.0);
        assert_eq!(closed_form_interior(1, 0, Sign::Minus, h, k), 0.0);
        assert_relative_eq!(
            closed_form_interior(0, 1, Sign::Minus, h, k),
            -h * k * k / 3.0,
            epsilon = 1e-17
        );
    }

    #[test]
    fn closed_form_boundary_examples() {
        let (h, k) = (0.125, 0.03125);
        assert_relative_eq!(
            closed_form_boundary(0, 0, Sign::Plus, h, k),
            0.5 * h * k,
            epsilon = 1e-17
        );
        assert_relative_eq!(
            closed_form_boundary(0, 1, Sign::Minus, h, k),
            -h * k * k / 6.0,
            epsilon = 1e-17
        );
        assert_relative_eq!(
            closed_form_boundary(2, 1, Sign::Plus, h, k),
            h.powi(3) * k * k / 60.0,
            epsilon = 1e-17
        );
    }

    #[test]
    fn closed_forms_agree_with_triangle_integration() {
        for &(h, k) in &[(0.125, 0.03125), (0.0625, 1.0 / 512.0)] {
            for alpha in 0..=MAX_DEGREE {
                for beta in 0..=MAX_DEGREE - alpha {
                    let mono = Poly2::monomial(alpha, beta, 1.0).unwrap();
                    for sign in [Sign::Plus, Sign::Minus] {
                        let exact = closed_form_interior(alpha, beta, sign, h, k);
                        let quad =
                            integrate_triangle(&mono, &pair_triangle_interior(sign, h, k));
                        assert_relative_eq!(quad, exact, epsilon = 1e-20, max_relative = 1e-13);

                        let exact = closed_form_boundary(alpha, beta, sign, h, k);
                        let quad =
                            integrate_triangle(&mono, &pair_triangle_boundary(sign, h, k));
                        assert_relative_eq!(quad, exact, epsilon = 1e-20, max_relative = 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn quad_rule_exact_to_degree_six() {
        let rule = QuadRule::new(6);
        assert!((rule.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
        for a in 0..=6usize {
            for b in 0..=6 - a {
                let exact = reference_moment(a, b);
                let got = rule.integrate_fn(
                    |x, y| x.powi(a as i32) * y.powi(b as i32),
                    &unit_triangle(),
                );
                assert_relative_eq!(got, exact, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn gauss_nodes_integrate_high_degree() {
        // degree-10 rule used as the oversampled oracle elsewhere
        let rule = QuadRule::new(10);
        let got = rule.integrate_fn(|x, y| x.powi(7) * y.powi(3), &unit_triangle());
        assert_relative_eq!(got, reference_moment(7, 3), max_relative = 1e-13);
    }

    proptest! {
        #[test]
        fn linearity_and_affine_invariance(
            c1 in -3.0f64..3.0,
            c2 in -3.0f64..3.0,
            ax in -1.0f64..1.0, ay in -1.0f64..1.0,
            bx in 1.5f64..2.5, by in -0.5f64..0.5,
            cx in -0.5f64..0.5, cy in 1.5f64..2.5,
        ) {
            let p = Poly2::from_terms(&[(2, 1, c1), (0, 3, -1.0), (1, 0, 2.0)]).unwrap();
            let q = Poly2::from_terms(&[(3, 2, c2), (0, 0, 0.5)]).unwrap();
            let tri = [Point::new(ax, ay), Point::new(bx, by), Point::new(cx, cy)];
            let lin = integrate_triangle(&(&p.scale(c2) + &q), &tri);
            let parts = c2 * integrate_triangle(&p, &tri) + integrate_triangle(&q, &tri);
            prop_assert!((lin - parts).abs() <= 1e-13 * (1.0 + parts.abs()));

            // vertex order must not matter
            let perm = [tri[2], tri[0], tri[1]];
            let swapped = [tri[1], tri[0], tri[2]];
            let base = integrate_triangle(&p, &tri);
            prop_assert!((integrate_triangle(&p, &perm) - base).abs() <= 1e-13 * (1.0 + base.abs()));
            prop_assert!((integrate_triangle(&p, &swapped) - base).abs() <= 1e-13 * (1.0 + base.abs()));
        }
    }
}
