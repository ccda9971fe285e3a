//! Rényi-2 entropies: Shannon entropies of measurement marginals, the
//! generalized entropy of a weakly measured region, and the mutual
//! informations built from them.

mod purity;

pub use purity::{r2gse_pure, PurityAlgorithm, RegionPurity, MAX_GRAM_REGION};

use crate::doubled::{r2gse_supervector, SuperVector};
use crate::spin::{rotate_to_basis, schmidt, Axis, Bipartition, Region, StateVector};
use crate::{Error, Result};

/// `−log(purity)`, rejecting purities that are not strictly positive.
pub(crate) fn entropy_from_purity(purity: f64) -> Result<f64> {
    if !purity.is_finite() || purity <= 0.0 {
        return Err(Error::NonPositivePurity(purity));
    }
    Ok(-purity.ln())
}

/// Probabilities of projective outcomes on a region, indexed by the region
/// configuration (bit `j` is the `j`-th site of the region, 0 for the `+1`
/// eigenvalue).
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalDistribution {
    probs: Vec<f64>,
}

impl MarginalDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `Σ_a p_a²`.
    pub fn collision_probability(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    /// `−log Σ_a p_a²`.
    pub fn renyi2(&self) -> Result<f64> {
        entropy_from_purity(self.collision_probability())
    }
}

/// Outcome distribution of measuring every site of `region` along `axis`.
pub fn region_marginal(state: &StateVector, region: Region, axis: Axis) -> Result<MarginalDistribution> {
    if state.num_sites() != region.num_sites() {
        return Err(Error::DimensionMismatch {
            expected: 1 << region.num_sites(),
            actual: state.dim(),
        });
    }
    let rotated = rotate_to_basis(state, axis);
    let mut probs = vec![0.0; 1 << region.size()];
    let (shift, mask) = match region {
        Region::A(p) => (0, p.dim_a() - 1),
        Region::B(p) => (p.len_a(), p.dim_b() - 1),
        Region::Whole(_) => (0, usize::MAX),
    };
    for (label, amp) in rotated.amplitudes().iter().enumerate() {
        probs[(label >> shift) & mask] += amp.norm_sqr();
    }
    Ok(MarginalDistribution { probs })
}

/// Outcome distribution of subsystem `A` of `part`.
pub fn marginal_probabilities(state: &StateVector, part: &Bipartition, axis: Axis) -> Result<MarginalDistribution> {
    region_marginal(state, Region::A(*part), axis)
}

/// Rényi-2 Shannon entropy of the `A` marginal.
pub fn renyi2_shannon_entropy(state: &StateVector, part: &Bipartition, axis: Axis) -> Result<f64> {
    marginal_probabilities(state, part, axis)?.renyi2()
}

/// Rényi-2 Shannon entropy of an arbitrary region's marginal.
pub fn region_shannon_entropy(state: &StateVector, region: Region, axis: Axis) -> Result<f64> {
    region_marginal(state, region, axis)?.renyi2()
}

/// Rényi-2 entanglement entropy `−log Σ_k s_k⁴` of subsystem `A`.
pub fn renyi2_ee(state: &StateVector, part: &Bipartition) -> Result<f64> {
    let sd = schmidt(state, part)?;
    entropy_from_purity(sd.values.iter().map(|s| s.powi(4)).sum())
}

/// Rényi-2 Shannon mutual information `S(A) + S(B) − S(AB)` of measurement
/// outcomes along `axis`.
pub fn r2smi(state: &StateVector, part: &Bipartition, axis: Axis) -> Result<f64> {
    let s_a = region_shannon_entropy(state, Region::A(*part), axis)?;
    let s_b = region_shannon_entropy(state, Region::B(*part), axis)?;
    let s_ab = region_shannon_entropy(state, Region::Whole(part.num_sites()), axis)?;
    Ok(s_a + s_b - s_ab)
}

/// State entering a mutual-information evaluation.
#[derive(Clone, Copy, Debug)]
pub enum MiInput<'a> {
    Pure(&'a StateVector),
    /// Supervector of a state already decohered with strength `p_y`; the
    /// value is only recorded in the output.
    Decohered { sv: &'a SuperVector, p_y: f64 },
}

/// One evaluated mutual-information point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MiPoint {
    pub len: usize,
    pub len_a: usize,
    pub axis: Axis,
    pub p_m: f64,
    pub p_y: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub i2: f64,
}

impl MiPoint {
    pub fn new(part: Bipartition, axis: Axis, p_m: f64, p_y: f64, s_a: f64, s_b: f64, s_ab: f64) -> Self {
        Self {
            len: part.num_sites(),
            len_a: part.len_a(),
            axis,
            p_m,
            p_y,
            s_a,
            s_b,
            s_ab,
            i2: s_a + s_b - s_ab,
        }
    }
}

/// Rényi-2 generalized Shannon mutual information with automatic algorithm
/// choice.
pub fn r2gsmi(input: MiInput<'_>, part: &Bipartition, axis: Axis, p_m: f64) -> Result<MiPoint> {
    r2gsmi_with(input, part, axis, p_m, None)
}

/// As [`r2gsmi`]. For pure input, `algorithm` overrides the choice for the
/// two subsystem terms; the whole-chain term always uses `rank1_full`. It is
/// ignored for supervector input.
pub fn r2gsmi_with(
    input: MiInput<'_>,
    part: &Bipartition,
    axis: Axis,
    p_m: f64,
    algorithm: Option<PurityAlgorithm>,
) -> Result<MiPoint> {
    let regions = [Region::A(*part), Region::B(*part), Region::Whole(part.num_sites())];
    let (s, p_y) = match input {
        MiInput::Pure(state) => {
            let rotated = rotate_to_basis(state, axis);
            let mut s = [0.0; 3];
            for (slot, region) in s.iter_mut().zip(regions) {
                let algo = match region {
                    Region::Whole(_) => PurityAlgorithm::Rank1Full,
                    r => algorithm.unwrap_or_else(|| PurityAlgorithm::auto(&r)),
                };
                *slot = RegionPurity::prepare_rotated(&rotated, region, axis, algo)?.entropy(p_m)?;
            }
            (s, 0.0)
        }
        MiInput::Decohered { sv, p_y } => {
            let mut s = [0.0; 3];
            for (slot, region) in s.iter_mut().zip(regions) {
                *slot = r2gse_supervector(sv, region, axis, p_m)?;
            }
            (s, p_y)
        }
    };
    Ok(MiPoint::new(*part, axis, p_m, p_y, s[0], s[1], s[2]))
}

/// Conjectured Rényi-`n` central charge of an Ising-type critical chain:
/// `c` for `n = 1` and `c·n/(n − 1)` for `n > 1`.
pub fn conjectured_cn(n: u32, c: f64) -> Result<f64> {
    match n {
        0 => Err(Error::InvalidRenyiIndex(n)),
        1 => Ok(c),
        _ => Ok(c * n as f64 / (n as f64 - 1.0)),
    }
}
