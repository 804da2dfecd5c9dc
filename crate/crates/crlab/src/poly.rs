//! Bivariate polynomials with dense coefficients up to total degree 6.
//!
//! Degree 6 is all the laboratory needs: the squared gradient error
//! `|grad(u - u_h)|^2` of the quartic model solution has degree 6, and every
//! other integrand is of lower degree. Constructors and products enforce the
//! bound so downstream exact integration stays exact.

use crate::error::{Error, Result};
use crate::geom::Point;

/// Maximum total degree representable by [`Poly2`].
pub const MAX_DEGREE: usize = 6;

const N: usize = MAX_DEGREE + 1;

/// Polynomial `sum c[i][j] x^i y^j` with `i + j <= 6`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    coeffs: [[f64; N]; N],
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { coeffs: [[0.0; N]; N] }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly2::zero();
        p.coeffs[0][0] = c;
        p
    }

    /// `c * x^i y^j`.
    pub fn monomial(i: usize, j: usize, c: f64) -> Result<Self> {
        if i + j > MAX_DEGREE {
            return Err(Error::DegreeOverflow { degree: i + j, max: MAX_DEGREE });
        }
        let mut p = Poly2::zero();
        p.coeffs[i][j] = c;
        Ok(p)
    }

    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut p = Poly2::zero();
        for &(i, j, c) in terms {
            if i + j > MAX_DEGREE {
                return Err(Error::DegreeOverflow { degree: i + j, max: MAX_DEGREE });
            }
            p.coeffs[i][j] += c;
        }
        Ok(p)
    }

    /// Affine polynomial `a + b x + c y`.
    pub fn affine(a: f64, b: f64, c: f64) -> Self {
        let mut p = Poly2::zero();
        p.coeffs[0][0] = a;
        p.coeffs[1][0] = b;
        p.coeffs[0][1] = c;
        p
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i][j]
    }

    /// Total degree of the highest nonzero term; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        let mut deg = 0;
        for i in 0..N {
            for j in 0..N - i {
                if self.coeffs[i][j] != 0.0 {
                    deg = deg.max(i + j);
                }
            }
        }
        deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|row| row.iter().all(|&c| c == 0.0))
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c *= s;
            }
        }
        out
    }

    pub fn add_constant(&self, c: f64) -> Poly2 {
        let mut out = self.clone();
        out.coeffs[0][0] += c;
        out
    }

    /// Product with degree check.
    pub fn mul(&self, other: &Poly2) -> Result<Poly2> {
        let deg = self.degree() + other.degree();
        if deg > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeOverflow { degree: deg, max: MAX_DEGREE });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for i in 0..N {
            for j in 0..N - i {
                let a = self.coeffs[i][j];
                if a == 0.0 {
                    continue;
                }
                for p in 0..N - i {
                    for q in 0..N - i - j - p {
                        let b = other.coeffs[p][q];
                        if b != 0.0 {
                            out.coeffs[i + p][j + q] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn dx(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for i in 1..N {
            for j in 0..N - i {
                out.coeffs[i - 1][j] = i as f64 * self.coeffs[i][j];
            }
        }
        out
    }

    pub fn dy(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for i in 0..N {
            for j in 1..N - i {
                out.coeffs[i][j - 1] = j as f64 * self.coeffs[i][j];
            }
        }
        out
    }

    pub fn laplacian(&self) -> Poly2 {
        &self.dx().dx() + &self.dy().dy()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in x of Horner-in-y row evaluations.
        let mut acc = 0.0;
        for i in (0..N).rev() {
            let mut row = 0.0;
            for j in (0..N - i).rev() {
                row = row * y + self.coeffs[i][j];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Substitute `x = xa[0] + xa[1] t + xa[2] s`, `y = ya[0] + ya[1] t + ya[2] s`
    /// and return the polynomial in `(t, s)`. Total degree is preserved.
    pub fn compose_affine(&self, xa: [f64; 3], ya: [f64; 3]) -> Poly2 {
        let xp = Poly2::affine(xa[0], xa[1], xa[2]);
        let yp = Poly2::affine(ya[0], ya[1], ya[2]);
        let mut xpow = [const { Poly2 { coeffs: [[0.0; N]; N] } }; N];
        let mut ypow = xpow.clone();
        xpow[0] = Poly2::constant(1.0);
        ypow[0] = Poly2::constant(1.0);
        for d in 1..N {
            xpow[d] = xpow[d - 1].mul_unchecked(&xp);
            ypow[d] = ypow[d - 1].mul_unchecked(&yp);
        }
        let mut out = Poly2::zero();
        for i in 0..N {
            for j in 0..N - i {
                let c = self.coeffs[i][j];
                if c != 0.0 {
                    let term = xpow[i].mul_unchecked(&ypow[j]);
                    for p in 0..N {
                        for q in 0..N - p {
                            out.coeffs[p][q] += c * term.coeffs[p][q];
                        }
                    }
                }
            }
        }
        out
    }

    /// Coefficients (in `t`) of the restriction to the segment
    /// `(x, y) = a + t (b - a)`, `t` in `[0, 1]`.
    pub fn restrict_segment(&self, a: Point, b: Point) -> [f64; N] {
        let q = self.compose_affine([a.x, b.x - a.x, 0.0], [a.y, b.y - a.y, 0.0]);
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = q.coeffs[i][0];
        }
        out
    }

    /// Coefficients (in `y`) of the restriction `x = c`.
    pub fn substitute_x(&self, c: f64) -> [f64; N] {
        let mut out = [0.0; N];
        for j in 0..N {
            let mut acc = 0.0;
            for i in (0..N - j).rev() {
                acc = acc * c + self.coeffs[i][j];
            }
            out[j] = acc;
        }
        out
    }

    /// Coefficients (in `x`) of the restriction `y = c`.
    pub fn substitute_y(&self, c: f64) -> [f64; N] {
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in (0..N - i).rev() {
                acc = acc * c + self.coeffs[i][j];
            }
            *o = acc;
        }
        out
    }
}

impl std::ops::Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for i in 0..N {
            for j in 0..N {
                out.coeffs[i][j] += rhs.coeffs[i][j];
            }
        }
        out
    }
}

impl std::ops::Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for i in 0..N {
            for j in 0..N {
                out.coeffs[i][j] -= rhs.coeffs[i][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bubble() -> Poly2 {
        // x(1-x)y(1-y)
        Poly2::from_terms(&[(1, 1, 1.0), (2, 1, -1.0), (1, 2, -1.0), (2, 2, 1.0)]).unwrap()
    }

    #[test]
    fn eval_matches_factored_form() {
        let u = bubble();
        for &(x, y) in &[(0.3, 0.7), (0.0, 0.5), (1.0, 0.2), (0.25, 0.25)] {
            assert_relative_eq!(u.eval(x, y), x * (1.0 - x) * y * (1.0 - y), epsilon = 1e-15);
        }
    }

    #[test]
    fn derivatives_and_laplacian() {
        let u = bubble();
        let ux = u.dx();
        let uy = u.dy();
        let (x, y) = (0.4, 0.8);
        assert_relative_eq!(ux.eval(x, y), (1.0 - 2.0 * x) * y * (1.0 - y), epsilon = 1e-15);
        assert_relative_eq!(uy.eval(x, y), x * (1.0 - x) * (1.0 - 2.0 * y), epsilon = 1e-15);
        let f = u.laplacian().scale(-1.0);
        assert_relative_eq!(
            f.eval(x, y),
            2.0 * (x * (1.0 - x) + y * (1.0 - y)),
            epsilon = 1e-15
        );
    }

    #[test]
    fn mul_checks_degree() {
        let cubic = Poly2::monomial(3, 0, 1.0).unwrap();
        assert!(cubic.mul(&cubic).is_ok());
        let quartic = Poly2::monomial(2, 2, 1.0).unwrap();
        assert!(matches!(
            quartic.mul(&cubic),
            Err(Error::DegreeOverflow { degree: 7, .. })
        ));
        assert!(Poly2::monomial(4, 3, 1.0).is_err());
    }

    #[test]
    fn compose_affine_preserves_values() {
        let u = bubble();
        let q = u.compose_affine([0.25, 0.5, 0.0], [0.125, 0.0, 0.25]);
        for &(t, s) in &[(0.0, 0.0), (1.0, 0.0), (0.3, 0.6), (0.5, 0.5)] {
            assert_relative_eq!(
                q.eval(t, s),
                u.eval(0.25 + 0.5 * t, 0.125 + 0.25 * s),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn boundary_traces_of_bubble_vanish() {
        let u = bubble();
        assert!(u.substitute_x(0.0).iter().all(|&c| c == 0.0));
        assert!(u.substitute_x(1.0).iter().all(|&c| c.abs() < 1e-15));
        assert!(u.substitute_y(0.0).iter().all(|&c| c == 0.0));
        assert!(u.substitute_y(1.0).iter().all(|&c| c.abs() < 1e-15));
    }

    #[test]
    fn restrict_segment_matches_eval() {
        let u = bubble();
        let a = Point::new(0.1, 0.9);
        let b = Point::new(0.7, 0.3);
        let coeffs = u.restrict_segment(a, b);
        for &t in &[0.0, 0.25, 0.5, 1.0] {
            let mut v = 0.0;
            for c in coeffs.iter().rev() {
                v = v * t + c;
            }
            let p = a + (b - a) * t;
            assert_relative_eq!(v, u.eval(p.x, p.y), epsilon = 1e-15);
        }
    }
}
