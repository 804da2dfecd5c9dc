//! SPD solves and the largest generalized eigenvalue of the mass-stiffness
//! pencil, which yields the discrete Friedrichs constant.

use crate::error::{Error, Result};
use crate::sparse::{pcg, BandedCholesky, SparseSym};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    ConjugateGradient,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Relative residual actually achieved.
    pub residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Relative residual target.
    pub tol: f64,
    /// Largest dof count handled by direct factorization.
    pub direct_limit: usize,
    /// Band storage budget in doubles for the direct path.
    pub band_storage_limit: usize,
    /// CG iteration cap; `None` means `50 sqrt(dofs)`.
    pub max_iter: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            direct_limit: 200_000,
            band_storage_limit: 400_000_000,
            max_iter: None,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions { tol, ..Default::default() }
    }
}

/// A factorized (or CG-backed) SPD operator, reusable across right-hand sides.
pub struct SpdSolver<'a> {
    a: &'a SparseSym,
    opts: SolverOptions,
    factor: Option<BandedCholesky>,
}

impl<'a> SpdSolver<'a> {
    pub fn new(a: &'a SparseSym, opts: SolverOptions) -> Result<Self> {
        let direct =
            a.n <= opts.direct_limit && BandedCholesky::storage_len(a) <= opts.band_storage_limit;
        let factor = if direct { Some(BandedCholesky::factor(a)?) } else { None };
        Ok(SpdSolver { a, opts, factor })
    }

    pub fn method(&self) -> SolveMethod {
        if self.factor.is_some() {
            SolveMethod::Direct
        } else {
            SolveMethod::ConjugateGradient
        }
    }

    fn rel_residual(&self, x: &[f64], rhs: &[f64]) -> f64 {
        let ax = self.a.apply(x);
        let num = ax
            .iter()
            .zip(rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den = rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<SolveReport> {
        let norm_b = rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        if norm_b == 0.0 {
            return Ok(SolveReport {
                solution: vec![0.0; self.a.n],
                residual: 0.0,
                iterations: 0,
                method: self.method(),
            });
        }
        match &self.factor {
            Some(chol) => {
                let mut x = chol.solve(rhs);
                let mut res = self.rel_residual(&x, rhs);
                let mut refinements = 0;
                // iterative refinement with the same factorization
                while res > self.opts.tol && refinements < 3 {
                    let ax = self.a.apply(&x);
                    let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
                    let dx = chol.solve(&r);
                    for (xi, di) in x.iter_mut().zip(&dx) {
                        *xi += di;
                    }
                    res = self.rel_residual(&x, rhs);
                    refinements += 1;
                }
                if res > self.opts.tol {
                    return Err(Error::SolveDidNotConverge {
                        residual: res,
                        iterations: refinements,
                    });
                }
                Ok(SolveReport {
                    solution: x,
                    residual: res,
                    iterations: refinements,
                    method: SolveMethod::Direct,
                })
            }
            None => {
                let max_iter = self
                    .opts
                    .max_iter
                    .unwrap_or_else(|| 50 * (self.a.n as f64).sqrt().ceil() as usize);
                let (x, rel, it) = pcg(self.a, rhs, self.opts.tol, max_iter);
                if rel > self.opts.tol {
                    return Err(Error::SolveDidNotConverge { residual: rel, iterations: it });
                }
                Ok(SolveReport {
                    solution: x,
                    residual: rel,
                    iterations: it,
                    method: SolveMethod::ConjugateGradient,
                })
            }
        }
    }
}

/// One-shot SPD solve.
pub fn solve_spd(a: &SparseSym, rhs: &[f64], opts: SolverOptions) -> Result<SolveReport> {
    SpdSolver::new(a, opts)?.solve(rhs)
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    /// Largest eigenvalue of `M x = lambda A x`.
    pub lambda_max: f64,
    /// `||M y - lambda A y|| / ||M y||` at the returned eigenvector.
    pub residual: f64,
    pub iterations: usize,
}

impl EigenReport {
    /// Optimal constant in `||w||_{L2} <= C |w|_{H1,T}`.
    pub fn constant(&self) -> f64 {
        self.lambda_max.sqrt()
    }
}

const STAGNATION_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 2000;

/// Largest generalized eigenvalue of `M x = lambda A x` by power iteration on
/// `y -> A^{-1} M y`; `mass` is the diagonal of `M`.
pub fn friedrichs_constant(a: &SparseSym, mass: &[f64], tol: f64) -> Result<EigenReport> {
    let solver = SpdSolver::new(a, SolverOptions::with_tol(tol / 10.0))?;
    let n = a.n;
    let mut y = vec![1.0; n];
    let mut rho_prev = 0.0f64;
    for sweep in 1..=MAX_SWEEPS {
        let my: Vec<f64> = y.iter().zip(mass).map(|(yi, mi)| yi * mi).collect();
        let num: f64 = y.iter().zip(&my).map(|(a, b)| a * b).sum();
        let den = a.quadratic_form(&y);
        let rho = num / den;
        let change = (rho - rho_prev).abs();
        if sweep > 1 && change <= STAGNATION_TOL * rho.max(1.0) {
            let ay = a.apply(&y);
            let res_num = my
                .iter()
                .zip(&ay)
                .map(|(m, a)| (m - rho * a) * (m - rho * a))
                .sum::<f64>()
                .sqrt();
            let res_den = my.iter().map(|m| m * m).sum::<f64>().sqrt();
            return Ok(EigenReport {
                lambda_max: rho,
                residual: res_num / res_den,
                iterations: sweep,
            });
        }
        rho_prev = rho;
        y = solver.solve(&my)?.solution;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
    }
    Err(Error::EigenStagnation { sweeps: MAX_SWEEPS, change: f64::NAN })
}

/// Rayleigh quotient history of the power iteration, for the monotonicity
/// property test.
pub fn rayleigh_history(
    a: &SparseSym,
    mass: &[f64],
    tol: f64,
    sweeps: usize,
) -> Result<Vec<f64>> {
    let solver = SpdSolver::new(a, SolverOptions::with_tol(tol / 10.0))?;
    let mut y = vec![1.0; a.n];
    let mut hist = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        let my: Vec<f64> = y.iter().zip(mass).map(|(yi, mi)| yi * mi).collect();
        let num: f64 = y.iter().zip(&my).map(|(a, b)| a * b).sum();
        hist.push(num / a.quadratic_form(&y));
        y = solver.solve(&my)?.solution;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
    }
    Ok(hist)
}
