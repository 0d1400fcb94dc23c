//! Floating point Gauss-Hermite quadrature of Gaussian expectations, used
//! as an independent check on the exact moments.

use super::Metric;
use crate::scalar::to_f64;

/// Nodes and weights of the `n`-point rule for the standard normal
/// density; weights sum to 1.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on the orthonormal physicists' Hermite recurrence.
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    // physicists' weight e^{-x^2} -> standard normal
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let nodes = x.iter().map(|v| v * std::f64::consts::SQRT_2).collect();
    let weights = w.iter().map(|v| v / sqrt_pi).collect();
    (nodes, weights)
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// `∫ f(v) dμ(v)` for the Gaussian with covariance `g^ij`, by a tensor
/// product rule with `points` nodes per axis after whitening. `None` when
/// the metric is not positive definite.
pub fn gaussian_expectation(m: &Metric, points: usize, f: impl Fn(&[f64]) -> f64) -> Option<f64> {
    let n = m.dim();
    let cov: Vec<Vec<f64>> = m
        .inverse()
        .iter()
        .map(|r| r.iter().map(to_f64).collect())
        .collect();
    let l = cholesky(&cov)?;
    let (nodes, weights) = gauss_hermite(points);
    let mut z = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut counter = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for a in 0..n {
            z[a] = nodes[counter[a]];
            weight *= weights[counter[a]];
        }
        for i in 0..n {
            v[i] = (0..=i).map(|k| l[i][k] * z[k]).sum();
        }
        total += weight * f(&v);
        let mut a = 0;
        loop {
            if a == n {
                return Some(total);
            }
            counter[a] += 1;
            if counter[a] < points {
                break;
            }
            counter[a] = 0;
            a += 1;
        }
    }
}

/// Quadrature estimate of `<v^{i1} ... v^{im}>`.
pub fn quadrature_moment(indices: &[usize], m: &Metric) -> Option<f64> {
    let points = indices.len() / 2 + 2;
    gaussian_expectation(m, points, |v| indices.iter().map(|&i| v[i]).product())
}
