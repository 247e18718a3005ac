use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Nodal samples of `u(t, x)` on `[0, T] × [0, 1]`, stored `[it][ix]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub t_final: f64,
    pub nt: usize,
    pub nx: usize,
    pub values: Vec<f64>,
}

impl SpaceTimeGrid {
    pub fn new(t_final: f64, nt: usize, nx: usize, values: Vec<f64>) -> Result<Self> {
        if nt < 3 || nx < 3 || !(t_final > 0.0) {
            return Err(Error::invalid("space-time grid needs T > 0 and at least 3 cells per axis"));
        }
        if values.len() != (nt + 1) * (nx + 1) {
            return Err(Error::GridMismatch { expected: (nt + 1) * (nx + 1), actual: values.len() });
        }
        Ok(Self { t_final, nt, nx, values })
    }

    pub fn from_fn(t_final: f64, nt: usize, nx: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let dt = t_final / nt as f64;
        let dx = 1.0 / nx as f64;
        let values = (0..=nt)
            .flat_map(|i| (0..=nx).map(move |j| (i, j)))
            .map(|(i, j)| f(i as f64 * dt, j as f64 * dx))
            .collect();
        Self::new(t_final, nt, nx, values)
    }

    fn dt(&self) -> f64 {
        self.t_final / self.nt as f64
    }

    fn dx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.nx + 1) + j]
    }

    fn map_lines(&self, along_t: bool, op: impl Fn(&[f64], f64) -> Vec<f64>) -> Vec<f64> {
        let (nt, nx) = (self.nt, self.nx);
        let mut out = vec![0.0; self.values.len()];
        if along_t {
            for j in 0..=nx {
                let line: Vec<f64> = (0..=nt).map(|i| self.at(i, j)).collect();
                for (i, v) in op(&line, self.dt()).into_iter().enumerate() {
                    out[i * (nx + 1) + j] = v;
                }
            }
        } else {
            for i in 0..=nt {
                let row = &self.values[i * (nx + 1)..(i + 1) * (nx + 1)];
                out[i * (nx + 1)..(i + 1) * (nx + 1)].copy_from_slice(&op(row, self.dx()));
            }
        }
        out
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, ..self.clone() }
    }

    fn integral_sq(&self, v: &[f64]) -> f64 {
        let w = |i: usize, n: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..=self.nt {
            for j in 0..=self.nx {
                total += w(i, self.nt) * w(j, self.nx) * v[i * (self.nx + 1) + j].powi(2);
            }
        }
        total * self.dt() * self.dx()
    }
}

fn first_difference(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len() - 1;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    d[n] = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
    d
}

fn second_difference(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len() - 1;
    let h2 = h * h;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
    }
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    d[n] = (2.0 * u[n] - 5.0 * u[n - 1] + 4.0 * u[n - 2] - u[n - 3]) / h2;
    d
}

/// `(Σ_{|α| ≤ k} β^{2k - 2|α|} ‖∂^α u‖²)^{1/2}` over the cylinder, with
/// `α` ranging over multi-indices in `(t, x)`.
pub fn weighted_norm(u: &SpaceTimeGrid, k: u32, weight_beta: f64) -> Result<f64> {
    if k > 2 {
        return Err(Error::invalid(format!("weighted norm supports k <= 2, got {k}")));
    }
    if !(weight_beta > 0.0) {
        return Err(Error::invalid("weight β must be positive"));
    }
    let w = |order: u32| weight_beta.powi(2 * (k - order) as i32);
    let mut total = w(0) * u.integral_sq(&u.values);
    if k >= 1 {
        let ut = u.map_lines(true, first_difference);
        let ux = u.map_lines(false, first_difference);
        total += w(1) * (u.integral_sq(&ut) + u.integral_sq(&ux));
        if k >= 2 {
            let utt = u.map_lines(true, second_difference);
            let uxx = u.map_lines(false, second_difference);
            let utx = u.with_values(ut).map_lines(false, first_difference);
            total += u.integral_sq(&utt) + u.integral_sq(&uxx) + u.integral_sq(&utx);
        }
    }
    Ok(total.sqrt())
}
