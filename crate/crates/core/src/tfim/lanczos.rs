use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TfimModel;
use crate::{Error, Result};

/// Restarted Lanczos with full reorthogonalization.
#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Budget of Hamiltonian applications across all restarts.
    pub max_iterations: usize,
    /// Krylov basis size before an explicit restart from the current Ritz
    /// vector. Bounds memory at `max_basis * 2^L` doubles.
    pub max_basis: usize,
    /// Target for `‖Hψ − θψ‖`.
    pub tolerance: f64,
    pub seed: u64,
    /// Smallest accepted gap between the two lowest Ritz values.
    pub gap_guard: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            max_basis: 48,
            tolerance: 1e-10,
            seed: 0x7f1d_5eed,
            gap_guard: 1e-10,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
}

/// Lowest eigenpair `(θ, v)` of the tridiagonal matrix with the given
/// diagonal / off-diagonal, plus the second Ritz value when it exists.
fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>, Option<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let low = order[0];
    let second = order.get(1).map(|&i| eig.eigenvalues[i]);
    (
        eig.eigenvalues[low],
        eig.eigenvectors.column(low).iter().copied().collect(),
        second,
    )
}

pub(super) fn lowest_eigenpair(model: &TfimModel, opts: &LanczosOptions) -> Result<(f64, Vec<f64>)> {
    let dim = model.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = dot(&start, &start).sqrt();
    scale(&mut start, 1.0 / n);

    let mut applications = 0usize;
    let mut gap: Option<f64> = None;

    loop {
        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();

        let (theta, y) = loop {
            let j = basis.len() - 1;
            let mut w = vec![0.0; dim];
            model.apply_real(&basis[j], &mut w);
            applications += 1;

            let a = dot(&basis[j], &w);
            alpha.push(a);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = dot(&w, &w).sqrt();

            let (theta, y, second) = tridiagonal_lowest(&alpha, &beta);
            if let Some(t1) = second {
                gap = Some(t1 - theta);
            }
            let estimate = b * y[j].abs();

            let invariant = b <= 1e-14 * a.abs().max(1.0);
            if estimate <= 0.1 * opts.tolerance
                || invariant
                || basis.len() >= opts.max_basis
                || applications >= opts.max_iterations
            {
                break (theta, y);
            }
            scale(&mut w, 1.0 / b);
            basis.push(w);
            beta.push(b);
        };

        let mut v = vec![0.0; dim];
        for (coef, q) in y.iter().zip(&basis) {
            axpy(*coef, q, &mut v);
        }
        let n = dot(&v, &v).sqrt();
        scale(&mut v, 1.0 / n);
        drop(basis);

        let mut hv = vec![0.0; dim];
        model.apply_real(&v, &mut hv);
        applications += 1;
        axpy(-theta, &v, &mut hv);
        let residual = dot(&hv, &hv).sqrt();

        if residual <= opts.tolerance {
            if let Some(g) = gap {
                if g < opts.gap_guard {
                    return Err(Error::DegenerateGroundState { gap: g });
                }
            }
            return Ok((theta, v));
        }
        if applications >= opts.max_iterations {
            return Err(Error::NotConverged {
                iterations: applications,
                residual,
            });
        }
        start = v;
    }
}
