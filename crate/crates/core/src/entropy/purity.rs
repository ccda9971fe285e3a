//! Purity of a dephased, reduced pure state without forming density matrices.
//!
//! After rotating to the eigenbasis of the dephasing axis, the channel of
//! strength `p` on a region multiplies `ρ_R[a][a']` by `λ^{ham(a, a')}` with
//! `λ = 1 − 2p`. The purity of the reduced state is therefore
//!
//! ```text
//! Σ_{a,a'} |G[a][a']|² μ^{ham(a,a')},   μ = λ²,   G = C C†
//! ```
//!
//! where `C` is the region × complement coefficient matrix. `μ^{ham}` is the
//! entry of the Kronecker power of the per-site kernel `[[1, μ], [μ, 1]]`.
//! Three evaluation routes are provided; each is prepared once per region and
//! then evaluated cheaply for any number of strengths.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::check_strength;
use crate::spin::{rotate_to_basis, schmidt, Axis, Region, StateVector};
use crate::{Error, Result};

/// Largest region handled by [`PurityAlgorithm::DenseGram`].
pub const MAX_GRAM_REGION: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PurityAlgorithm {
    /// Hamming-distance histogram of `|G|²` over all region pairs.
    /// Cost `O(4^n · 2^{L−n})` once per region, `O(n)` per strength.
    DenseGram,
    /// Schmidt-vector products `w = v_k ∘ conj(v_l)` evaluated against the
    /// kernel in the Walsh–Hadamard domain. Cost `O(χ² · n · 2^n)` once.
    LowRank,
    /// Whole chain: `qᵀ K q` with `q = |ψ|²`. Cost `O(L · 2^L)` per strength.
    Rank1Full,
}

impl PurityAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            PurityAlgorithm::DenseGram => "dense_gram",
            PurityAlgorithm::LowRank => "low_rank",
            PurityAlgorithm::Rank1Full => "rank1_full",
        }
    }

    /// Default choice for a region: `rank1_full` for the whole chain,
    /// `dense_gram` up to [`MAX_GRAM_REGION`] sites, `low_rank` beyond.
    pub fn auto(region: &Region) -> Self {
        match region {
            Region::Whole(_) => PurityAlgorithm::Rank1Full,
            r if r.size() <= MAX_GRAM_REGION => PurityAlgorithm::DenseGram,
            _ => PurityAlgorithm::LowRank,
        }
    }
}

impl fmt::Display for PurityAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PurityAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dense_gram" => Ok(PurityAlgorithm::DenseGram),
            "low_rank" => Ok(PurityAlgorithm::LowRank),
            "rank1_full" => Ok(PurityAlgorithm::Rank1Full),
            other => Err(Error::InvalidArgument(format!("unknown purity algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
enum Prepared {
    /// `hist[h] = Σ_{ham(a,a')=h} |G[a][a']|²`.
    Hamming(Vec<f64>),
    /// `hist[h] = 2^{-n} Σ_{k,l} s_k² s_l² Σ_{|t|=h} |ŵ_kl[t]|²` with `ŵ`
    /// the unnormalized Walsh–Hadamard transform.
    Walsh(Vec<f64>),
    /// Outcome probabilities of the whole chain in the rotated basis.
    Outcomes(Vec<f64>),
}

/// Strength-independent data for one (state, region, axis).
#[derive(Clone, Debug)]
pub struct RegionPurity {
    region: Region,
    axis: Axis,
    algorithm: PurityAlgorithm,
    prepared: Prepared,
}

/// `μ = (1 − 2p)²`, exactly zero at `p = 1/2`.
fn kernel_weight(p: f64) -> f64 {
    if p == 0.5 {
        0.0
    } else {
        let lambda = 1.0 - 2.0 * p;
        lambda * lambda
    }
}

impl RegionPurity {
    pub fn prepare(state: &StateVector, region: Region, axis: Axis, algorithm: PurityAlgorithm) -> Result<Self> {
        let rotated = rotate_to_basis(state, axis);
        Self::prepare_rotated(&rotated, region, axis, algorithm)
    }

    pub fn prepare_auto(state: &StateVector, region: Region, axis: Axis) -> Result<Self> {
        Self::prepare(state, region, axis, PurityAlgorithm::auto(&region))
    }

    /// `rotated` must already be expressed in the eigenbasis of `axis`.
    pub(crate) fn prepare_rotated(
        rotated: &StateVector,
        region: Region,
        axis: Axis,
        algorithm: PurityAlgorithm,
    ) -> Result<Self> {
        if rotated.num_sites() != region.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: 1 << region.num_sites(),
                actual: rotated.dim(),
            });
        }
        let prepared = match algorithm {
            PurityAlgorithm::DenseGram => {
                if region.size() > MAX_GRAM_REGION {
                    return Err(Error::AlgorithmMismatch {
                        algorithm: algorithm.name(),
                        reason: format!(
                            "region of {} sites exceeds the {MAX_GRAM_REGION}-site Gram limit",
                            region.size()
                        ),
                    });
                }
                Prepared::Hamming(hamming_histogram(rotated, &region)?)
            }
            PurityAlgorithm::LowRank => Prepared::Walsh(walsh_histogram(rotated, &region)?),
            PurityAlgorithm::Rank1Full => {
                if !matches!(region, Region::Whole(_)) {
                    return Err(Error::AlgorithmMismatch {
                        algorithm: algorithm.name(),
                        reason: "requires the dephased region to be the whole chain".into(),
                    });
                }
                Prepared::Outcomes(rotated.amplitudes().iter().map(|a| a.norm_sqr()).collect())
            }
        };
        Ok(Self {
            region,
            axis,
            algorithm,
            prepared,
        })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn algorithm(&self) -> PurityAlgorithm {
        self.algorithm
    }

    /// `Tr[(Tr_c E_R^{p}[ψψ†])²]`.
    pub fn purity(&self, p_m: f64) -> Result<f64> {
        check_strength(p_m)?;
        let mu = kernel_weight(p_m);
        Ok(match &self.prepared {
            Prepared::Hamming(hist) => {
                if mu == 0.0 {
                    hist[0]
                } else {
                    // Horner in μ.
                    hist.iter().rev().fold(0.0, |acc, &h| acc * mu + h)
                }
            }
            Prepared::Walsh(hist) => {
                let n = hist.len() - 1;
                let (plus, minus) = (1.0 + mu, 1.0 - mu);
                hist.iter()
                    .enumerate()
                    .map(|(h, &w)| {
                        if w == 0.0 {
                            0.0
                        } else {
                            w * plus.powi((n - h) as i32) * minus.powi(h as i32)
                        }
                    })
                    .sum()
            }
            Prepared::Outcomes(q) => {
                if mu == 0.0 {
                    ordered_sum(q.par_chunks(SUM_CHUNK).map(|c| c.iter().map(|x| x * x).sum()))
                } else {
                    let mut kq = q.clone();
                    let len = self.region.num_sites();
                    for site in 0..len {
                        kernel_butterfly(&mut kq, site, mu);
                    }
                    ordered_sum(
                        q.par_chunks(SUM_CHUNK)
                            .zip(kq.par_chunks(SUM_CHUNK))
                            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum()),
                    )
                }
            }
        })
    }

    /// `−log` of [`RegionPurity::purity`].
    pub fn entropy(&self, p_m: f64) -> Result<f64> {
        super::entropy_from_purity(self.purity(p_m)?)
    }
}

const SUM_CHUNK: usize = 1 << 14;

fn ordered_sum(parts: impl IndexedParallelIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = parts.collect();
    v.into_iter().sum()
}

/// In place `v ← (I + μX)_site v`.
fn kernel_butterfly(v: &mut [f64], site: usize, mu: f64) {
    let stride = 1usize << site;
    v.par_chunks_mut(2 * stride)
        .with_min_len((4096 / (2 * stride)).max(1))
        .for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + mu * y;
                *b = y + mu * x;
            }
        });
}

/// `|⟨row_a, row_b⟩|²` for the Gram matrix.
trait GramScalar: Copy + Send + Sync {
    fn gram_abs2(a: &[Self], b: &[Self]) -> f64;
}

impl GramScalar for f64 {
    #[inline]
    fn gram_abs2(a: &[f64], b: &[f64]) -> f64 {
        let mut acc = [0.0f64; 4];
        let mut ca = a.chunks_exact(4);
        let mut cb = b.chunks_exact(4);
        for (x, y) in (&mut ca).zip(&mut cb) {
            acc[0] += x[0] * y[0];
            acc[1] += x[1] * y[1];
            acc[2] += x[2] * y[2];
            acc[3] += x[3] * y[3];
        }
        let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
        let d = (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail;
        d * d
    }
}

impl GramScalar for C64 {
    #[inline]
    fn gram_abs2(a: &[C64], b: &[C64]) -> f64 {
        let (mut re0, mut re1, mut im0, mut im1) = (0.0, 0.0, 0.0, 0.0);
        let mut ca = a.chunks_exact(2);
        let mut cb = b.chunks_exact(2);
        for (x, y) in (&mut ca).zip(&mut cb) {
            re0 += x[0].re * y[0].re + x[0].im * y[0].im;
            im0 += x[0].im * y[0].re - x[0].re * y[0].im;
            re1 += x[1].re * y[1].re + x[1].im * y[1].im;
            im1 += x[1].im * y[1].re - x[1].re * y[1].im;
        }
        for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
            re0 += x.re * y.re + x.im * y.im;
            im0 += x.im * y.re - x.re * y.im;
        }
        let (re, im) = (re0 + re1, im0 + im1);
        re * re + im * im
    }
}

const GRAM_TILE: usize = 64;

/// Histogram over Hamming distance of `|G[a][a']|²`, visiting each unordered
/// row pair once. Tiles of rows are processed in parallel and their partial
/// histograms summed in tile order.
fn gram_histogram<T: GramScalar>(rows: &[T], n_rows: usize, n_cols: usize, bits: usize) -> Vec<f64> {
    let tiles = n_rows.div_ceil(GRAM_TILE);
    let partial: Vec<Vec<f64>> = (0..tiles)
        .into_par_iter()
        .map(|ti| {
            let mut hist = vec![0.0; bits + 1];
            let a_lo = ti * GRAM_TILE;
            let a_hi = (a_lo + GRAM_TILE).min(n_rows);
            for tj in 0..=ti {
                let b_lo = tj * GRAM_TILE;
                let b_hi = (b_lo + GRAM_TILE).min(n_rows);
                for a in a_lo..a_hi {
                    let ra = &rows[a * n_cols..(a + 1) * n_cols];
                    let b_end = if ti == tj { a + 1 } else { b_hi };
                    for b in b_lo..b_end {
                        let rb = &rows[b * n_cols..(b + 1) * n_cols];
                        let g2 = T::gram_abs2(ra, rb);
                        let weight = if a == b { 1.0 } else { 2.0 };
                        hist[(a ^ b).count_ones() as usize] += weight * g2;
                    }
                }
            }
            hist
        })
        .collect();
    let mut hist = vec![0.0; bits + 1];
    for p in partial {
        hist.iter_mut().zip(p).for_each(|(h, x)| *h += x);
    }
    hist
}

fn hamming_histogram(rotated: &StateVector, region: &Region) -> Result<Vec<f64>> {
    let matrix = region.coefficient_matrix(rotated)?;
    let (n_rows, n_cols) = (matrix.rows(), matrix.cols());
    let bits = region.size();
    Ok(if rotated.is_real() {
        let rows: Vec<f64> = matrix.data().iter().map(|c| c.re).collect();
        gram_histogram(&rows, n_rows, n_cols, bits)
    } else {
        gram_histogram(matrix.data(), n_rows, n_cols, bits)
    })
}

/// Unnormalized in-place Walsh–Hadamard transform.
fn walsh_hadamard(v: &mut [C64]) {
    let mut stride = 1;
    while stride < v.len() {
        for chunk in v.chunks_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        stride *= 2;
    }
}

/// Region-side Schmidt weights `s_k²` and vectors (columns over region
/// configurations).
fn region_schmidt(rotated: &StateVector, region: &Region) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    match region {
        Region::Whole(_) => Ok((vec![rotated.norm_sqr()], vec![rotated.amplitudes().to_vec()])),
        Region::A(part) | Region::B(part) => {
            let sd = schmidt(rotated, part)?;
            let vectors = if matches!(region, Region::A(_)) { &sd.left } else { &sd.right };
            let cols = (0..sd.rank())
                .map(|k| vectors.column(k).iter().copied().collect())
                .collect();
            Ok((sd.values.iter().map(|s| s * s).collect(), cols))
        }
    }
}

fn walsh_histogram(rotated: &StateVector, region: &Region) -> Result<Vec<f64>> {
    let (weights, vectors) = region_schmidt(rotated, region)?;
    let n = region.size();
    let dim = 1usize << n;
    let chi = weights.len();
    let scale = 1.0 / dim as f64;
    let partial: Vec<Vec<f64>> = (0..chi)
        .into_par_iter()
        .map(|k| {
            let mut hist = vec![0.0; n + 1];
            let mut w = vec![C64::new(0.0, 0.0); dim];
            for l in k..chi {
                for ((slot, a), b) in w.iter_mut().zip(&vectors[k]).zip(&vectors[l]) {
                    *slot = a * b.conj();
                }
                walsh_hadamard(&mut w);
                let pair = weights[k] * weights[l] * if k == l { 1.0 } else { 2.0 } * scale;
                for (t, x) in w.iter().enumerate() {
                    hist[t.count_ones() as usize] += pair * x.norm_sqr();
                }
            }
            hist
        })
        .collect();
    let mut hist = vec![0.0; n + 1];
    for p in partial {
        hist.iter_mut().zip(p).for_each(|(h, x)| *h += x);
    }
    Ok(hist)
}

/// Single-shot form of [`RegionPurity`].
pub fn r2gse_pure(
    state: &StateVector,
    region: Region,
    axis: Axis,
    p_m: f64,
    algorithm: PurityAlgorithm,
) -> Result<f64> {
    RegionPurity::prepare(state, region, axis, algorithm)?.entropy(p_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Bipartition;

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(2, &[h, 0.0, 0.0, h]).unwrap()
    }

    #[test]
    fn auto_selection() {
        let part = Bipartition::new(20, 13).unwrap();
        assert_eq!(PurityAlgorithm::auto(&Region::A(part)), PurityAlgorithm::DenseGram);
        assert_eq!(PurityAlgorithm::auto(&Region::B(part)), PurityAlgorithm::DenseGram);
        let part = Bipartition::new(20, 14).unwrap();
        assert_eq!(PurityAlgorithm::auto(&Region::A(part)), PurityAlgorithm::LowRank);
        assert_eq!(PurityAlgorithm::auto(&Region::Whole(20)), PurityAlgorithm::Rank1Full);
    }

    #[test]
    fn algorithm_size_mismatch_rejected() {
        let state = StateVector::ghz(4).unwrap();
        let part = Bipartition::new(4, 2).unwrap();
        assert!(matches!(
            r2gse_pure(&state, Region::A(part), Axis::Z, 0.1, PurityAlgorithm::Rank1Full),
            Err(Error::AlgorithmMismatch { .. })
        ));
        let big = StateVector::ghz(15).unwrap();
        let part = Bipartition::new(15, 14).unwrap();
        assert!(matches!(
            r2gse_pure(&big, Region::A(part), Axis::Z, 0.1, PurityAlgorithm::DenseGram),
            Err(Error::AlgorithmMismatch { .. })
        ));
    }

    #[test]
    fn bell_limits() {
        let part = Bipartition::new(2, 1).unwrap();
        for algo in [PurityAlgorithm::DenseGram, PurityAlgorithm::LowRank] {
            let s0 = r2gse_pure(&bell(), Region::A(part), Axis::Z, 0.0, algo).unwrap();
            assert!((s0 - 2f64.ln()).abs() < 1e-12);
            let s_half = r2gse_pure(&bell(), Region::A(part), Axis::Z, 0.5, algo).unwrap();
            assert!((s_half - 2f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_marginals_at_projective_limit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(1, &[h, h]).unwrap();
        let state = StateVector::product(6, [plus.amplitudes()[0], plus.amplitudes()[1]]).unwrap();
        let part = Bipartition::new(6, 4).unwrap();
        for algo in [PurityAlgorithm::DenseGram, PurityAlgorithm::LowRank] {
            let s = r2gse_pure(&state, Region::A(part), Axis::Z, 0.5, algo).unwrap();
            assert!((s - 4.0 * 2f64.ln()).abs() < 1e-12, "{algo}");
            // Product state: pure reduced state before dephasing.
            let s0 = r2gse_pure(&state, Region::A(part), Axis::Z, 0.0, algo).unwrap();
            assert!(s0.abs() < 1e-12);
        }
        let s = r2gse_pure(&state, Region::Whole(6), Axis::Z, 0.5, PurityAlgorithm::Rank1Full).unwrap();
        assert!((s - 6.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn walsh_transform_matches_definition() {
        let v: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect();
        let mut w = v.clone();
        walsh_hadamard(&mut w);
        for (t, wt) in w.iter().enumerate() {
            let direct: C64 = v
                .iter()
                .enumerate()
                .map(|(s, x)| if (s & t).count_ones() % 2 == 0 { *x } else { -*x })
                .sum();
            assert!((wt - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn strength_validated() {
        let part = Bipartition::new(2, 1).unwrap();
        let prep = RegionPurity::prepare_auto(&bell(), Region::A(part), Axis::Z).unwrap();
        assert!(matches!(prep.purity(0.7), Err(Error::InvalidStrength(_))));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in [PurityAlgorithm::DenseGram, PurityAlgorithm::LowRank, PurityAlgorithm::Rank1Full] {
            assert_eq!(algo.name().parse::<PurityAlgorithm>().unwrap(), algo);
        }
    }
}
