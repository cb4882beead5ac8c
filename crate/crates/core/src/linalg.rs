//! Dense LU with partial pivoting on row-major square matrices.

use crate::error::{numeric, Result};

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub(crate) struct SquareMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[cfg(test)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Packed `PA = LU` factors.
#[derive(Debug, Clone)]
pub(crate) struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn factor(mut m: SquareMatrix) -> Result<Self> {
        let n = m.n;
        let a = &mut m.data;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[i * n + k].abs()))
                    .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if pmax == 0.0 || !pmax.is_finite() {
                return numeric(format!("LU breakdown at column {k} (pivot {pmax})"));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in (k + 1)..n {
                let l = a[i * n + k] / pivot;
                a[i * n + k] = l;
                if l != 0.0 {
                    for j in (k + 1)..n {
                        a[i * n + j] -= l * a[k * n + j];
                    }
                }
            }
        }
        Ok(Self {
            n,
            lu: m.data,
            perm,
            sign,
        })
    }

    /// `(sign, ln|det|)`.
    pub fn log_det(&self) -> (f64, f64) {
        let mut sign = self.sign;
        let mut log = 0.0;
        for k in 0..self.n {
            let u = self.lu[k * self.n + k];
            if u < 0.0 {
                sign = -sign;
            }
            log += u.abs().ln();
        }
        (sign, log)
    }

    pub fn det(&self) -> f64 {
        let (sign, log) = self.log_det();
        sign * log.exp()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            x[i] -= row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum::<f64>();
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let acc = x[i] - row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum::<f64>();
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}
