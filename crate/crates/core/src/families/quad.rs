//! Product integration of `∫₀^{t_m} e^{ρ(t_m - s)} f(s) ds` for sampled `f`.
//!
//! `f` is interpolated linearly between grid nodes and integrated exactly
//! against the exponential, giving the recursion
//! `Q_{m+1} = e^{z} Q_m + h (a(z) f_m + b(z) f_{m+1})`, `z = ρh`, with
//! `a(z) = (e^z (z-1) + 1)/z²` and `b(z) = (e^z - 1 - z)/z²`. The rule is
//! second order in `h` uniformly in `ρ`, which matters for the highly
//! oscillatory high modes where a plain trapezoid would lose accuracy.

use num_complex::Complex64;

/// Below this `|z|` the weights are evaluated from their Taylor series.
const SERIES_CUTOFF: f64 = 0.5;

/// Returns `(e^z, a(z), b(z))`.
pub fn step_weights(z: Complex64) -> (Complex64, Complex64, Complex64) {
    let ez = z.exp();
    if z.norm() < SERIES_CUTOFF {
        // a = Σ zⁿ/(n!(n+2)), b = Σ zⁿ/(n!(n+1)(n+2))
        let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..24 {
            let nf = n as f64;
            a += term / (nf + 2.0);
            b += term / ((nf + 1.0) * (nf + 2.0));
            term *= z / (nf + 1.0);
        }
        (ez, a, b)
    } else {
        let z2 = z * z;
        (ez, (ez * (z - 1.0) + 1.0) / z2, (ez - 1.0 - z) / z2)
    }
}

fn real_weights(z: f64) -> (f64, f64, f64) {
    let (e, a, b) = step_weights(Complex64::new(z, 0.0));
    (e.re, a.re, b.re)
}

/// `Q_m = ∫₀^{t_m} e^{ρ(t_m - s)} f(s) ds` for real `ρ`.
pub fn exp_conv(rho: f64, f: &[f64], h: f64) -> Vec<f64> {
    let (e, a, b) = real_weights(rho * h);
    let mut out = Vec::with_capacity(f.len());
    let mut q = 0.0;
    out.push(q);
    for w in f.windows(2) {
        q = e * q + h * (a * w[0] + b * w[1]);
        out.push(q);
    }
    out.truncate(f.len());
    out
}

/// Complex-rate variant of [`exp_conv`].
pub fn exp_conv_complex(rho: Complex64, f: &[f64], h: f64) -> Vec<Complex64> {
    let (e, a, b) = step_weights(rho * h);
    let mut out = Vec::with_capacity(f.len());
    let mut q = Complex64::new(0.0, 0.0);
    out.push(q);
    for w in f.windows(2) {
        q = e * q + (a * w[0] + b * w[1]) * h;
        out.push(q);
    }
    out.truncate(f.len());
    out
}

/// `∫₀^{t_m} sin(ω(t_m - s)) f(s) ds`.
pub fn sin_conv(omega: f64, f: &[f64], h: f64) -> Vec<f64> {
    exp_conv_complex(Complex64::new(0.0, omega), f, h).iter().map(|q| q.im).collect()
}

/// `∫₀^{t_m} cos(ω(t_m - s)) f(s) ds`.
pub fn cos_conv(omega: f64, f: &[f64], h: f64) -> Vec<f64> {
    exp_conv_complex(Complex64::new(0.0, omega), f, h).iter().map(|q| q.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(m: usize, t: f64) -> (Vec<f64>, f64) {
        let h = t / m as f64;
        ((0..=m).map(|i| i as f64 * h).collect(), h)
    }

    #[test]
    fn weights_are_continuous_across_the_cutoff() {
        for r in [0.499_999_9, 0.500_000_1] {
            let z = Complex64::from_polar(r, 0.7);
            let (_, a, b) = step_weights(z);
            let z2 = z * z;
            let ez = z.exp();
            assert!((a - (ez * (z - 1.0) + 1.0) / z2).norm() < 1e-13);
            assert!((b - (ez - 1.0 - z) / z2).norm() < 1e-13);
        }
        let (_, a, b) = step_weights(Complex64::new(0.0, 0.0));
        assert_relative_eq!(a.re, 0.5);
        assert_relative_eq!(b.re, 0.5);
    }

    #[test]
    fn linear_data_is_integrated_exactly() {
        let (t, h) = grid(10, 1.0);
        let f: Vec<f64> = t.iter().map(|s| 1.0 + 2.0 * s).collect();
        let q = exp_conv(-2.0, &f, h);
        // ∫₀ᵗ e^{-2(t-s)}(1+2s) ds = t
        for (qi, ti) in q.iter().zip(&t) {
            assert_relative_eq!(*qi, *ti, epsilon = 1e-13);
        }
    }

    #[test]
    fn sine_convolution_of_constant() {
        let (t, h) = grid(50, 2.0);
        let w = 30.0;
        let q = sin_conv(w, &vec![1.0; t.len()], h);
        for (qi, ti) in q.iter().zip(&t) {
            assert_relative_eq!(*qi, (1.0 - (w * ti).cos()) / w, epsilon = 1e-13);
        }
    }

    #[test]
    fn second_order_for_curved_data() {
        let exact = |t: f64| {
            // ∫₀ᵗ cos(3(t-s)) sin(s) ds = (cos t - cos 3t)/8
            (t.cos() - (3.0 * t).cos()) / 8.0
        };
        let err = |m: usize| {
            let (t, h) = grid(m, 1.0);
            let f: Vec<f64> = t.iter().map(|s| s.sin()).collect();
            (cos_conv(3.0, &f, h)[m] - exact(1.0)).abs()
        };
        let order = (err(100) / err(200)).log2();
        assert!(order > 1.9, "observed order {order}");
    }
}
