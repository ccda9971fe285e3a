//! Grid evaluation of mutual information and per-series fits.
//!
//! Every point is an independent computation. Strength-independent work is
//! shared: pure-state sweeps prepare each region once for all `p_m`, and the
//! decohered sweep builds one supervector per `p_y`. Output order is fixed:
//! sorted by `(p_y, p_m, L_A)`.

use rayon::prelude::*;

use crate::channels::{check_strength, ChannelSpec};
use crate::doubled::{lift_channel, r2gse_supervector, SuperVector};
use crate::entropy::{MiPoint, PurityAlgorithm, RegionPurity};
use crate::scaling::{fit_cft, FitPoint, FitResult, FitWindow};
use crate::spin::{rotate_to_basis, Axis, Bipartition, Region, StateVector};
use crate::{Error, Result};

fn partitions(len: usize, sizes: &[usize]) -> Result<Vec<Bipartition>> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes.into_iter().map(|len_a| Bipartition::new(len, len_a)).collect()
}

fn check_grid(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empty strength grid".into()));
    }
    for &p in values {
        check_strength(p)?;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// Pure-state sweep over `p_m` and subsystem sizes. `algorithm` overrides the
/// automatic choice for the subsystem terms.
pub fn case1(
    state: &StateVector,
    axis: Axis,
    p_ms: &[f64],
    sizes: &[usize],
    algorithm: Option<PurityAlgorithm>,
) -> Result<Vec<MiPoint>> {
    let p_ms = check_grid(p_ms)?;
    let len = state.num_sites();
    let parts = partitions(len, sizes)?;
    let rotated = rotate_to_basis(state, axis);

    let mut regions: Vec<Region> = Vec::with_capacity(2 * parts.len() + 1);
    for part in &parts {
        regions.push(Region::A(*part));
        regions.push(Region::B(*part));
    }
    regions.push(Region::Whole(len));
    let prepared = regions
        .par_iter()
        .map(|&region| {
            let algo = match region {
                Region::Whole(_) => PurityAlgorithm::Rank1Full,
                r => algorithm.unwrap_or_else(|| PurityAlgorithm::auto(&r)),
            };
            RegionPurity::prepare_rotated(&rotated, region, axis, algo)
        })
        .collect::<Result<Vec<_>>>()?;
    drop(rotated);

    let whole = &prepared[prepared.len() - 1];
    let s_ab = p_ms.par_iter().map(|&p| whole.entropy(p)).collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(p_ms.len() * parts.len());
    for (&p_m, &s_ab) in p_ms.iter().zip(&s_ab) {
        for (k, part) in parts.iter().enumerate() {
            let s_a = prepared[2 * k].entropy(p_m)?;
            let s_b = prepared[2 * k + 1].entropy(p_m)?;
            points.push(MiPoint::new(*part, axis, p_m, 0.0, s_a, s_b, s_ab));
        }
    }
    Ok(points)
}

/// `state` with Y decoherence of strength `p_y` on every site, in doubled
/// space.
pub fn y_decohered_supervector(state: &StateVector, p_y: f64) -> Result<SuperVector> {
    let mut sv = SuperVector::from_pure(state)?;
    if p_y != 0.0 {
        lift_channel(&ChannelSpec::on_all(Axis::Y, p_y, state.num_sites())?).apply(&mut sv)?;
    }
    Ok(sv)
}

/// Decohered-state sweep over `(p_y, p_m)` and subsystem sizes, through the
/// supervector representation.
pub fn case2(state: &StateVector, axis: Axis, p_ms: &[f64], p_ys: &[f64], sizes: &[usize]) -> Result<Vec<MiPoint>> {
    let p_ms = check_grid(p_ms)?;
    let p_ys = check_grid(p_ys)?;
    let len = state.num_sites();
    let parts = partitions(len, sizes)?;

    let bases = p_ys
        .iter()
        .map(|&p_y| y_decohered_supervector(state, p_y))
        .collect::<Result<Vec<_>>>()?;

    // One task per (p_y, p_m, region); the whole chain is shared by all L_A.
    let mut tasks: Vec<(usize, f64, Region)> = Vec::new();
    for (y, _) in p_ys.iter().enumerate() {
        for &p_m in &p_ms {
            tasks.push((y, p_m, Region::Whole(len)));
            for part in &parts {
                tasks.push((y, p_m, Region::A(*part)));
                tasks.push((y, p_m, Region::B(*part)));
            }
        }
    }
    let entropies = tasks
        .par_iter()
        .map(|&(y, p_m, region)| r2gse_supervector(&bases[y], region, axis, p_m))
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(p_ys.len() * p_ms.len() * parts.len());
    let stride = 1 + 2 * parts.len();
    for (block, chunk) in entropies.chunks(stride).enumerate() {
        let p_y = p_ys[block / p_ms.len()];
        let p_m = p_ms[block % p_ms.len()];
        for (k, part) in parts.iter().enumerate() {
            points.push(MiPoint::new(*part, axis, p_m, p_y, chunk[1 + 2 * k], chunk[2 + 2 * k], chunk[0]));
        }
    }
    Ok(points)
}

/// Fit of one `(axis, p_m, p_y)` series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFit {
    pub axis: Axis,
    pub p_m: f64,
    pub p_y: f64,
    pub window: FitWindow,
    pub fit: FitResult,
}

/// Groups points by `(axis, p_m, p_y)` and fits the ones inside `window`.
/// Output is sorted by axis, then `p_y`, then `p_m`.
pub fn fit_series(points: &[MiPoint], window: FitWindow) -> Result<Vec<SeriesFit>> {
    let mut keys: Vec<(Axis, f64, f64)> = points.iter().map(|p| (p.axis, p.p_y, p.p_m)).collect();
    keys.sort_by(|a, b| {
        a.0.to_string()
            .cmp(&b.0.to_string())
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    keys.dedup_by(|a, b| a.0 == b.0 && a.1.to_bits() == b.1.to_bits() && a.2.to_bits() == b.2.to_bits());

    keys.into_iter()
        .map(|(axis, p_y, p_m)| {
            let series: Vec<FitPoint> = points
                .iter()
                .filter(|p| {
                    p.axis == axis
                        && p.p_y.to_bits() == p_y.to_bits()
                        && p.p_m.to_bits() == p_m.to_bits()
                        && window.contains(p.len_a)
                })
                .map(|p| FitPoint {
                    len: p.len,
                    len_a: p.len_a,
                    i2: p.i2,
                })
                .collect();
            Ok(SeriesFit {
                axis,
                p_m,
                p_y,
                window,
                fit: fit_cft(&series)?,
            })
        })
        .collect()
}
