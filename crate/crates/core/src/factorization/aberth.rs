//! Simultaneous root iteration (Aberth–Ehrlich) with Newton polish.

use num_complex::Complex64;

const MAX_ITER: usize = 1000;

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Upper bound on root moduli (Fujiwara).
fn root_radius(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let mut bound: f64 = 0.0;
    for (k, c) in coeffs.iter().enumerate().take(n) {
        let ratio = (c.abs() / lead).powf(1.0 / (n - k) as f64);
        let ratio = if k == 0 {
            ratio * 0.5f64.powf(1.0 / n as f64)
        } else {
            ratio
        };
        bound = bound.max(ratio);
    }
    2.0 * bound.max(f64::MIN_POSITIVE)
}

/// All complex roots of the polynomial with coefficients `coeffs`
/// (constant term first). Returns `None` if the iteration stalls.
pub fn roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len().checked_sub(1)?;
    if n == 0 || coeffs[n] == 0.0 {
        return Some(Vec::new());
    }
    if n == 1 {
        return Some(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]);
    }
    // Start from the Cauchy-type radius shrunk towards the geometric mean of
    // the roots, spread over a circle with an irrational angular offset.
    let radius = {
        let gm = (coeffs[0].abs() / coeffs[n].abs()).powf(1.0 / n as f64);
        if gm.is_finite() && gm > 0.0 {
            gm.min(root_radius(coeffs))
        } else {
            root_radius(coeffs)
        }
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|r| !r.is_finite()) {
        return None;
    }
    for r in z.iter_mut() {
        *r = polish(coeffs, *r);
    }
    Some(z)
}

/// A few Newton steps, keeping the best iterate.
pub fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = z;
    let mut best_val = eval_with_derivative(coeffs, z).0.norm();
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        z -= p / dp;
        let v = eval_with_derivative(coeffs, z).0.norm();
        if v < best_val {
            best = z;
            best_val = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x + 1)(x^2 - x + 1) = x^3 + 1
        let mut r = roots(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[2] - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn spread_roots() {
        let targets = [-0.001, -1.0, -30.0, -250.0];
        let mut coeffs = vec![1.0];
        for t in targets {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] += -t * c;
                next[k + 1] += c;
            }
            coeffs = next;
        }
        let r = roots(&coeffs).unwrap();
        for t in targets {
            assert!(r
                .iter()
                .any(|z| (z.re - t).abs() < 1e-9 * t.abs().max(1.0) && z.im.abs() < 1e-9));
        }
    }
}
