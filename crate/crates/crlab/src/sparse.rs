//! Sparse symmetric matrices, banded Cholesky factorization, and
//! preconditioned conjugate gradients.

use std::io::Write;

use crate::error::{Error, Result};

/// Symmetric sparse matrix in CSR form; the full pattern is stored.
#[derive(Clone, Debug)]
pub struct SparseSym {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSym {
    /// Assemble from (row, col, value) triplets; duplicates are summed.
    /// Triplets must cover both symmetric halves.
    pub fn from_triplets(n: usize, triplets: &mut Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets.iter() {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|&(_, c, _)| c).collect();
        let values = merged.iter().map(|&(_, _, v)| v).collect();
        SparseSym { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[i] = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut row = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                row += v * x[c];
            }
            acc += x[i] * row;
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                if c == i {
                    d[i] = v;
                }
            }
        }
        d
    }

    /// Maximum `|i - j|` over stored entries.
    pub fn half_bandwidth(&self) -> usize {
        let mut b = 0usize;
        for i in 0..self.n {
            let (cols, _) = self.row(i);
            for &c in cols {
                b = b.max(i.abs_diff(c));
            }
        }
        b
    }

    /// Maximum absolute asymmetry `|a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let (jc, jv) = self.row(j);
                let back = jc
                    .iter()
                    .position(|&c| c == i)
                    .map(|p| jv[p])
                    .unwrap_or(0.0);
                worst = worst.max((v - back).abs());
            }
        }
        worst
    }

    /// Write in coordinate text format, one `row col value` line per stored
    /// entry (0-based indices).
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {}", i, c, v)?;
            }
        }
        Ok(())
    }
}

/// Cholesky factorization `A = L L^T` in banded storage.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    /// Row-major packed lower band: entry `(i, j)` with `i - bw <= j <= i`
    /// lives at `data[i * (bw + 1) + (j + bw - i)]`.
    data: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &SparseSym) -> Result<Self> {
        let n = a.n;
        let bw = a.half_bandwidth();
        let w = bw + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                if c <= i {
                    data[i * w + (c + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let start = lo.max(j.saturating_sub(bw));
                let mut sum = data[i * w + (j + bw - i)];
                for k in start..j {
                    sum -= data[i * w + (k + bw - i)] * data[j * w + (k + bw - j)];
                }
                if j < i {
                    data[i * w + (j + bw - i)] = sum / data[j * w + bw];
                } else {
                    if sum <= 0.0 {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: sum });
                    }
                    data[i * w + bw] = sum.sqrt();
                }
            }
        }
        Ok(BandedCholesky { n, bw, data })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut x = rhs.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut sum = x[i];
            for k in lo..i {
                sum -= self.data[i * w + (k + bw - i)] * x[k];
            }
            x[i] = sum / self.data[i * w + bw];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut sum = x[i];
            for k in i + 1..=hi {
                sum -= self.data[k * w + (i + bw - k)] * x[k];
            }
            x[i] = sum / self.data[i * w + bw];
        }
        x
    }

    /// Doubles of band storage this factorization needs.
    pub fn storage_len(a: &SparseSym) -> usize {
        a.n * (a.half_bandwidth() + 1)
    }
}

/// Jacobi-preconditioned conjugate gradients to a relative residual.
pub fn pcg(
    a: &SparseSym,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let n = a.n;
    let norm_b = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_b == 0.0 {
        return (vec![0.0; n], 0.0, 0);
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| 1.0 / d).collect();
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 1..=max_iter {
        a.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm_r <= tol * norm_b {
            return (x, norm_r / norm_b, it);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    (x, norm_r / norm_b, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn laplace_1d(n: usize) -> SparseSym {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseSym::from_triplets(n, &mut t)
    }

    #[test]
    fn triplets_merge_duplicates() {
        let mut t = vec![(0, 0, 1.0), (0, 0, 2.0), (1, 1, 1.0), (0, 1, 0.5), (1, 0, 0.5)];
        let a = SparseSym::from_triplets(2, &mut t);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.diagonal(), vec![3.0, 1.0]);
        assert_eq!(a.max_asymmetry(), 0.0);
    }

    #[test]
    fn banded_cholesky_solves() {
        let a = laplace_1d(50);
        assert_eq!(a.half_bandwidth(), 1);
        let chol = BandedCholesky::factor(&a).unwrap();
        let rhs: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = chol.solve(&rhs);
        let res = a.apply(&x);
        for (ri, bi) in res.iter().zip(&rhs) {
            assert_relative_eq!(ri, bi, epsilon = 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut t = vec![(0, 0, 1.0), (1, 1, -1.0)];
        let a = SparseSym::from_triplets(2, &mut t);
        assert!(matches!(
            BandedCholesky::factor(&a),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn pcg_reaches_tolerance() {
        let a = laplace_1d(200);
        let rhs: Vec<f64> = (0..200).map(|i| ((i * i) as f64).cos()).collect();
        let (x, rel, it) = pcg(&a, &rhs, 1e-12, 10_000);
        assert!(rel <= 1e-12, "rel={rel}");
        assert!(it < 10_000);
        let res = a.apply(&x);
        let num = res
            .iter()
            .zip(&rhs)
            .map(|(r, b)| (r - b) * (r - b))
            .sum::<f64>()
            .sqrt();
        let den = rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        assert!(num / den <= 1e-11);
    }

    #[test]
    fn coordinate_export_roundtrip() {
        let a = laplace_1d(3);
        let mut buf = Vec::new();
        a.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), a.nnz());
        assert_eq!(lines[0], "0 0 2");
    }
}
