//! Periodic critical transverse-field Ising chain,
//! `H = -Σ_j (Z_j Z_{j+1} + X_j)` with `Z_L ≡ Z_0`.
//!
//! The ground state is found either by Lanczos with full reorthogonalization
//! (up to [`MAX_LANCZOS_SITES`]) or by a dense symmetric eigensolve (up to
//! [`MAX_DENSE_SITES`], mainly as a cross-check). At `L = 2` the periodic sum
//! visits the single bond twice; only the dense solver accepts that size.

pub mod cache;
mod lanczos;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::spin::StateVector;
use crate::{Error, Result};

pub use lanczos::LanczosOptions;

pub const MAX_LANCZOS_SITES: usize = 24;
pub const MAX_DENSE_SITES: usize = 12;

/// Residual `‖Hψ − Eψ‖` every returned ground state satisfies.
pub const GROUND_STATE_RESIDUAL: f64 = 1e-8;

const BLOCK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TfimModel {
    len: usize,
}

impl TfimModel {
    pub fn new(len: usize) -> Result<Self> {
        if !(2..=MAX_LANCZOS_SITES).contains(&len) {
            return Err(Error::SizeOutOfRange {
                what: "TFIM chain",
                len,
                min: 2,
                max: MAX_LANCZOS_SITES,
            });
        }
        Ok(Self { len })
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        1 << self.len
    }

    /// Diagonal matrix element `-Σ_j z_j z_{j+1}` of configuration `label`.
    #[inline]
    pub fn diagonal(&self, label: usize) -> f64 {
        let l = self.len;
        let mask = (1usize << l) - 1;
        // Bit j of `next` is the spin at site j+1 (periodic).
        let next = ((label >> 1) | (label << (l - 1))) & mask;
        let walls = (label ^ next).count_ones() as i64;
        -((l as i64) - 2 * walls) as f64
    }

    /// Matrix-free `H|ψ>`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let src = state.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); src.len()];
        self.apply_into(src, &mut out);
        StateVector::new(self.len, out)
    }

    /// Each output entry is gathered independently, so the result does not
    /// depend on how blocks are scheduled.
    fn apply_into<T>(&self, src: &[T], dst: &mut [T])
    where
        T: Copy + Send + Sync + std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
    {
        dst.par_chunks_mut(BLOCK).enumerate().for_each(|(blk, chunk)| {
            let base = blk * BLOCK;
            for (off, slot) in chunk.iter_mut().enumerate() {
                let s = base + off;
                let mut acc = src[s] * self.diagonal(s);
                for j in 0..self.len {
                    acc = acc - src[s ^ (1 << j)];
                }
                *slot = acc;
            }
        });
    }

    pub(crate) fn apply_real(&self, src: &[f64], dst: &mut [f64]) {
        self.apply_into(src, dst);
    }

    /// Full real symmetric matrix; only sensible for small chains.
    pub fn dense_matrix(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut h = DMatrix::zeros(dim, dim);
        for s in 0..dim {
            h[(s, s)] = self.diagonal(s);
            for j in 0..self.len {
                h[(s ^ (1 << j), s)] -= 1.0;
            }
        }
        h
    }

    /// Block of `H` in the sector `∏_j X_j = sign`, over the basis
    /// `(|r> + sign·|r̄>)/√2` where `r` runs over labels with the top bit clear
    /// and `r̄` is `r` with every bit flipped.
    pub fn parity_block(&self, sign: f64) -> DMatrix<f64> {
        let half = self.dim() / 2;
        let mut h = DMatrix::zeros(half, half);
        for r in 0..half {
            h[(r, r)] += self.diagonal(r);
            for j in 0..self.len - 1 {
                h[(r ^ (1 << j), r)] -= 1.0;
            }
            // Flipping the top bit of r̄ lands on the representative r ^ (half - 1).
            h[(r ^ (half - 1), r)] -= sign;
        }
        h
    }

    /// `<ψ|H|ψ>` (real part).
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let h = self.apply(state)?;
        Ok(state.inner(&h)?.re)
    }

    /// `‖Hψ − Eψ‖`.
    pub fn residual(&self, state: &StateVector, energy: f64) -> Result<f64> {
        let h = self.apply(state)?;
        Ok(h.amplitudes()
            .iter()
            .zip(state.amplitudes())
            .map(|(hv, v)| (hv - v * energy).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.num_sites() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.dim(),
            });
        }
        Ok(())
    }
}

/// Free-function form of [`TfimModel::apply`].
pub fn apply_hamiltonian(model: &TfimModel, state: &StateVector) -> Result<StateVector> {
    model.apply(state)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverMethod {
    Lanczos,
    Dense,
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMethod::Lanczos => "lanczos",
            SolverMethod::Dense => "dense",
        })
    }
}

impl FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lanczos" => Ok(SolverMethod::Lanczos),
            "dense" => Ok(SolverMethod::Dense),
            other => Err(Error::InvalidArgument(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Normalized, with the largest-magnitude amplitude real and positive.
    pub state: StateVector,
    pub residual: f64,
}

pub fn ground_state(model: &TfimModel, method: SolverMethod) -> Result<GroundStateResult> {
    ground_state_with(model, method, &LanczosOptions::default())
}

pub fn ground_state_with(
    model: &TfimModel,
    method: SolverMethod,
    opts: &LanczosOptions,
) -> Result<GroundStateResult> {
    let (energy, vector) = match method {
        SolverMethod::Lanczos => {
            if model.len < 3 {
                return Err(Error::SizeOutOfRange {
                    what: "Lanczos ground state",
                    len: model.len,
                    min: 3,
                    max: MAX_LANCZOS_SITES,
                });
            }
            lanczos::lowest_eigenpair(model, opts)?
        }
        SolverMethod::Dense => dense_lowest(model)?,
    };
    let mut amps: Vec<C64> = vector.into_iter().map(|x| C64::new(x, 0.0)).collect();
    fix_phase(&mut amps);
    let state = StateVector::new(model.len, amps)?.normalized()?;
    let residual = model.residual(&state, energy)?;
    if residual > GROUND_STATE_RESIDUAL {
        return Err(Error::NotConverged {
            iterations: 0,
            residual,
        });
    }
    Ok(GroundStateResult {
        energy,
        state,
        residual,
    })
}

fn dense_lowest(model: &TfimModel) -> Result<(f64, Vec<f64>)> {
    if model.len > MAX_DENSE_SITES {
        return Err(Error::SizeOutOfRange {
            what: "dense ground state",
            len: model.len,
            min: 2,
            max: MAX_DENSE_SITES,
        });
    }
    // The global flip commutes with H, so the two parity blocks together hold
    // the whole spectrum at an eighth of the full eigensolve cost each.
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for sign in [1.0, -1.0] {
        let eig = SymmetricEigen::new(model.parity_block(sign));
        let (idx, &energy) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        if best.as_ref().map_or(true, |b| energy < b.0) {
            best = Some((energy, sign, eig.eigenvectors.column(idx).iter().copied().collect()));
        }
    }
    let (energy, sign, block) = best.expect("two sectors");
    let half = block.len();
    let mut vector = vec![0.0; 2 * half];
    for (r, &v) in block.iter().enumerate() {
        vector[r] = v * std::f64::consts::FRAC_1_SQRT_2;
        vector[(2 * half - 1) ^ r] = sign * v * std::f64::consts::FRAC_1_SQRT_2;
    }
    Ok((energy, vector))
}

/// Rotates the global phase so the largest-magnitude amplitude (first one on
/// ties) is real and positive.
pub(crate) fn fix_phase(amps: &mut [C64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, a) in amps.iter().enumerate() {
        let n = a.norm();
        if n > best_norm {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = amps[best].conj() / best_norm;
        amps.iter_mut().for_each(|a| *a *= phase);
    }
}
