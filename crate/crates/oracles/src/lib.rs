//! Independent cross-check routines for the test suites.
//!
//! Nothing here touches the library under test: every oracle works from raw
//! matrices through its own algorithm, so agreement between an oracle and
//! the production path is evidence for both.

use nalgebra::DMatrix;

/// Steady-state covariance by time integration of
/// d sigma/dt = A sigma + sigma A^T + D from sigma(0) = 0.
///
/// Uses the exact discretization of the linear SDE over a base step h:
///   sigma(t + h) = Phi sigma(t) Phi^T + Q_h,
/// with Phi = exp(A h) and Q_h = int_0^h exp(A s) D exp(A^T s) ds obtained
/// from the block matrix exp([[-A, D], [0, A^T]] h) (Van Loan). The base
/// step is chosen so ||A|| h <= 1/2 and the pair (Phi, Q) is then doubled,
/// Phi <- Phi^2 and Q <- Phi Q Phi^T + Q, also exact, until the horizon is
/// covered. The only approximation is the finite horizon itself.
pub fn integrate_to_steady_state(a: &DMatrix<f64>, d: &DMatrix<f64>, horizon: f64) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(d.shape(), (n, n));
    let norm = a.norm();
    let doublings = (horizon * norm / 0.5).log2().ceil().max(0.0) as usize;
    let h = horizon / (1u64 << doublings.min(62)) as f64;

    let mut block = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            block[(i, j)] = -a[(i, j)] * h;
            block[(i, n + j)] = d[(i, j)] * h;
            block[(n + i, n + j)] = a[(j, i)] * h;
        }
    }
    let e = block.exp();
    let f22 = e.view((n, n), (n, n)).into_owned();
    let f12 = e.view((0, n), (n, n)).into_owned();
    let mut phi = f22.transpose();
    let mut q = &phi * f12;
    q = (&q + q.transpose()) * 0.5;

    for _ in 0..doublings {
        q = &phi * &q * phi.transpose() + &q;
        q = (&q + q.transpose()) * 0.5;
        phi = &phi * &phi;
    }
    // sigma(horizon) from sigma(0) = 0 is the accumulated Q
    q
}

/// Gaussian discord by direct minimization over single-mode Gaussian
/// measurements on the second mode.
///
/// `sigma` is a 4x4 two-mode covariance in vacuum-1/2 units, (x, p)
/// interleaved. The measurement is parametrized by a rotated squeezed seed
/// R(theta) diag(lambda, 1/lambda) R(theta)^T (finite lambda grid plus the
/// ideal-homodyne limit), refined by coordinate descent. Returns nats.
pub fn discord_by_measurement_search(sigma: &DMatrix<f64>) -> f64 {
    let s = sigma * 2.0; // vacuum-1 units
    let alpha = s.view((0, 0), (2, 2)).into_owned();
    let beta = s.view((2, 2), (2, 2)).into_owned();
    let gamma = s.view((0, 2), (2, 2)).into_owned();

    let det2 = |m: &DMatrix<f64>| m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let a = det2(&alpha);
    let b = det2(&beta);
    let c = det2(&gamma);
    let dd = s.determinant();

    if gamma.norm() == 0.0 {
        return 0.0;
    }

    let delta = a + b + 2.0 * c;
    let disc = (delta * delta - 4.0 * dd).max(0.0).sqrt();
    let nu_minus = ((delta - disc) / 2.0).max(0.0).sqrt();
    let nu_plus = ((delta + disc) / 2.0).sqrt();

    // conditional determinant for a finite squeezed seed
    let det_eps_finite = |u: f64, theta: f64| -> f64 {
        let lambda = u.exp();
        let (st, ct) = theta.sin_cos();
        let r = DMatrix::<f64>::from_row_slice(2, 2, &[ct, -st, st, ct]);
        let seed = &r
            * DMatrix::<f64>::from_diagonal(&nalgebra::dvector![lambda, 1.0 / lambda])
            * r.transpose();
        let m = &beta + seed;
        let det_m = det2(&m);
        let minv =
            DMatrix::<f64>::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]])
                / det_m;
        let eps = &alpha - &gamma * minv * gamma.transpose();
        det2(&eps)
    };
    // ideal homodyne of the quadrature at angle theta
    let det_eps_homodyne = |theta: f64| -> f64 {
        let p = nalgebra::dvector![theta.cos(), theta.sin()];
        let gp = &gamma * &p;
        let denom = (p.transpose() * &beta * &p)[(0, 0)];
        let eps = &alpha - &gp * gp.transpose() / denom;
        det2(&eps)
    };

    // coarse grids; |u| <= 12 keeps the 2x2 inverse well conditioned, the
    // homodyne branch covers the lambda -> infinity limit exactly
    let mut best = f64::INFINITY;
    let mut best_u = 0.0;
    let mut best_theta = 0.0;
    let mut homodyne = false;
    for iu in 0..=120 {
        let u = -12.0 + 0.2 * iu as f64;
        for it in 0..=90 {
            let theta = std::f64::consts::PI * it as f64 / 90.0;
            let v = det_eps_finite(u, theta);
            if v < best {
                best = v;
                best_u = u;
                best_theta = theta;
                homodyne = false;
            }
        }
    }
    for it in 0..=720 {
        let theta = std::f64::consts::PI * it as f64 / 720.0;
        let v = det_eps_homodyne(theta);
        if v < best {
            best = v;
            best_theta = theta;
            homodyne = true;
        }
    }
    // coordinate-descent refinement
    if homodyne {
        let mut dt = std::f64::consts::PI / 720.0;
        for _ in 0..80 {
            let mut improved = false;
            for t in [best_theta + dt, best_theta - dt] {
                let v = det_eps_homodyne(t);
                if v < best {
                    best = v;
                    best_theta = t;
                    improved = true;
                }
            }
            if !improved {
                dt *= 0.5;
                if dt < 1e-13 {
                    break;
                }
            }
        }
    } else {
        let mut du = 0.2;
        let mut dt = std::f64::consts::PI / 90.0;
        for _ in 0..200 {
            let mut improved = false;
            for (u, t) in [
                (best_u + du, best_theta),
                (best_u - du, best_theta),
                (best_u, best_theta + dt),
                (best_u, best_theta - dt),
            ] {
                let v = det_eps_finite(u, t);
                if v < best {
                    best = v;
                    best_u = u;
                    best_theta = t;
                    improved = true;
                }
            }
            if !improved {
                du *= 0.5;
                dt *= 0.5;
                if du < 1e-12 {
                    break;
                }
            }
        }
    }

    h_entropy(b.sqrt()) - h_entropy(nu_minus) - h_entropy(nu_plus) + h_entropy(best.max(0.0).sqrt())
}

fn h_entropy(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let a = (x + 1.0) / 2.0;
    let b = (x - 1.0) / 2.0;
    a * a.ln() - b * b.ln()
}

/// Random physical two-mode covariance (vacuum-1/2 units) from a seeded
/// xorshift generator: local rotations and squeezes around a two-mode
/// squeezer acting on a thermal diagonal.
pub fn random_two_mode_covariance(seed: u64) -> DMatrix<f64> {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).max(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let rot = |t: f64| {
        let (s, c) = t.sin_cos();
        DMatrix::<f64>::from_row_slice(2, 2, &[c, -s, s, c])
    };
    let sq = |r: f64| DMatrix::<f64>::from_diagonal(&nalgebra::dvector![(-r).exp(), r.exp()]);
    let direct = |m1: &DMatrix<f64>, m2: &DMatrix<f64>| {
        let mut z = DMatrix::<f64>::zeros(4, 4);
        z.view_mut((0, 0), (2, 2)).copy_from(m1);
        z.view_mut((2, 2), (2, 2)).copy_from(m2);
        z
    };
    let nu1 = 1.0 + 3.0 * next();
    let nu2 = 1.0 + 3.0 * next();
    let r = 1.2 * next();
    let tau = std::f64::consts::TAU;

    let local1 = direct(
        &(rot(tau * next()) * sq(1.2 * next() - 0.6)),
        &(rot(tau * next()) * sq(1.2 * next() - 0.6)),
    );
    let (ch, sh) = ((r).cosh(), (r).sinh());
    let mut s2 = DMatrix::<f64>::identity(4, 4) * ch;
    s2[(0, 2)] = sh;
    s2[(2, 0)] = sh;
    s2[(1, 3)] = -sh;
    s2[(3, 1)] = -sh;
    let local2 = direct(&rot(tau * next()), &rot(tau * next()));
    let sf = local2 * s2 * local1;
    let diag = DMatrix::<f64>::from_diagonal(&nalgebra::dvector![nu1, nu1, nu2, nu2]);
    (&sf * diag * sf.transpose()) * 0.5
}

/// Ordinary least squares y = a x + b; returns (a, b, r_squared).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| {
            let p = slope * u + intercept;
            (v - p) * (v - p)
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrator_solves_scalar_balance() {
        // A = -I/2, D = I: steady state is the identity
        let a = DMatrix::<f64>::identity(4, 4) * -0.5;
        let d = DMatrix::<f64>::identity(4, 4);
        let s = integrate_to_steady_state(&a, &d, 60.0);
        assert!((s - DMatrix::<f64>::identity(4, 4)).norm() < 1e-10);
    }

    #[test]
    fn discord_search_vanishes_on_product_state() {
        let s = DMatrix::<f64>::identity(4, 4) * 0.75;
        assert_eq!(discord_by_measurement_search(&s), 0.0);
    }

    #[test]
    fn random_covariances_are_physical() {
        for seed in 1..10u64 {
            let s = random_two_mode_covariance(seed) * 2.0;
            // nu_min >= 1 in doubled units
            let a = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
            let b = s[(2, 2)] * s[(3, 3)] - s[(2, 3)] * s[(3, 2)];
            let c = s[(0, 2)] * s[(1, 3)] - s[(0, 3)] * s[(1, 2)];
            let dd = s.determinant();
            let delta = a + b + 2.0 * c;
            let nu_min_sq = (delta - (delta * delta - 4.0 * dd).max(0.0).sqrt()) / 2.0;
            assert!(nu_min_sq >= 1.0 - 1e-9, "seed {seed}: {nu_min_sq}");
        }
    }

    #[test]
    fn fit_recovers_exact_line() {
        let x: Vec<f64> = (0..50).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert!((a - 3.0).abs() < 1e-12 && (b + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
