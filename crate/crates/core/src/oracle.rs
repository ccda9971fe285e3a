//! Brute-force references built from explicit density matrices. Slow and
//! obviously correct; used to check every fast path.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::channels::{apply_channel_dense, ChannelSpec, DenseDensityMatrix};
use crate::spin::{Axis, Bipartition, Region};
use crate::{Error, Result};

/// Largest chain accepted by the oracles.
pub const MAX_ORACLE_SITES: usize = 8;

/// Subsystem kept by [`partial_trace_dense`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

fn check_oracle_sites(len: usize) -> Result<()> {
    if len > MAX_ORACLE_SITES {
        return Err(Error::SizeOutOfRange {
            what: "oracle",
            len,
            min: 0,
            max: MAX_ORACLE_SITES,
        });
    }
    Ok(())
}

/// Reduced density matrix of one side of `part`.
pub fn partial_trace_dense(rho: &DenseDensityMatrix, part: &Bipartition, keep: Keep) -> Result<DenseDensityMatrix> {
    check_oracle_sites(rho.num_sites())?;
    if rho.num_sites() != part.num_sites() {
        return Err(Error::DimensionMismatch {
            expected: 1 << part.num_sites(),
            actual: rho.dim(),
        });
    }
    let m = rho.matrix();
    let (len, out) = match keep {
        Keep::A => (
            part.len_a(),
            DMatrix::from_fn(part.dim_a(), part.dim_a(), |a, a2| {
                (0..part.dim_b())
                    .map(|b| m[(part.join(a, b), part.join(a2, b))])
                    .sum::<C64>()
            }),
        ),
        Keep::B => (
            part.len_b(),
            DMatrix::from_fn(part.dim_b(), part.dim_b(), |b, b2| {
                (0..part.dim_a())
                    .map(|a| m[(part.join(a, b), part.join(a, b2))])
                    .sum::<C64>()
            }),
        ),
    };
    DenseDensityMatrix::new(len, out)
}

/// Reduced density matrix on the sites of `region`.
pub fn reduce_to_region(rho: &DenseDensityMatrix, region: Region) -> Result<DenseDensityMatrix> {
    match region {
        Region::A(part) => partial_trace_dense(rho, &part, Keep::A),
        Region::B(part) => partial_trace_dense(rho, &part, Keep::B),
        Region::Whole(len) => {
            check_oracle_sites(rho.num_sites())?;
            if len != rho.num_sites() {
                return Err(Error::DimensionMismatch {
                    expected: 1 << len,
                    actual: rho.dim(),
                });
            }
            Ok(rho.clone())
        }
    }
}

/// Dephase `region`, trace out the rest, and return `−log Tr[ρ_R²]`.
pub fn r2gse_dense(rho: &DenseDensityMatrix, region: Region, axis: Axis, p_m: f64) -> Result<f64> {
    check_oracle_sites(rho.num_sites())?;
    let spec = ChannelSpec::new(axis, p_m, region.sites())?;
    let dephased = apply_channel_dense(rho, &spec)?;
    let reduced = reduce_to_region(&dephased, region)?;
    let purity = reduced.purity();
    if !purity.is_finite() || purity <= 0.0 {
        return Err(Error::NonPositivePurity(purity));
    }
    Ok(-purity.ln())
}

/// `(S_A, S_B, S_AB)` from [`r2gse_dense`].
pub fn r2gsmi_dense(rho: &DenseDensityMatrix, part: &Bipartition, axis: Axis, p_m: f64) -> Result<(f64, f64, f64)> {
    Ok((
        r2gse_dense(rho, Region::A(*part), axis, p_m)?,
        r2gse_dense(rho, Region::B(*part), axis, p_m)?,
        r2gse_dense(rho, Region::Whole(part.num_sites()), axis, p_m)?,
    ))
}

/// `Σ λ²` over the eigenvalues of `ρ`.
pub fn purity_from_eigenvalues(rho: &DenseDensityMatrix) -> f64 {
    rho.eigenvalues().iter().map(|x| x * x).sum()
}
