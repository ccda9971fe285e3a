//! Bit-encoded many-spin states.
//!
//! Site `j` of an `L`-site chain is bit `j` of a configuration label. Bit value
//! 0 is the `Z = +1` state, bit value 1 is `Z = -1`. Subsystem `A` of a
//! [`Bipartition`] is the low-bit window `[0, L_A)`, so splitting a label into
//! its `A` and `B` parts is a shift and a mask.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::{Error, Result};

/// Largest chain a [`StateVector`] may describe.
pub const MAX_SITES: usize = 28;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli axis used for operators, channels and measurement bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Row-major 2x2 Pauli matrix.
    pub fn pauli(self) -> [[C64; 2]; 2] {
        match self {
            Axis::X => [[ZERO, ONE], [ONE, ZERO]],
            Axis::Y => [[ZERO, -I], [I, ZERO]],
            Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// Action on a single-site basis state: `P|bit> = phase |out>`.
    #[inline]
    pub(crate) fn act(self, bit: usize) -> (usize, C64) {
        match (self, bit) {
            (Axis::X, b) => (b ^ 1, ONE),
            (Axis::Y, 0) => (1, I),
            (Axis::Y, _) => (0, -I),
            (Axis::Z, 0) => (0, ONE),
            (Axis::Z, _) => (1, -ONE),
        }
    }

    /// Columns are the normalized eigenvectors of the axis, `+1` first.
    ///
    /// For `Y` the columns are `(1, i)/√2` and `(1, -i)/√2`.
    pub fn eigenbasis(self) -> [[C64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = C64::new(h, 0.0);
        let ri = C64::new(0.0, h);
        match self {
            Axis::Z => [[ONE, ZERO], [ZERO, ONE]],
            Axis::X => [[r, r], [r, -r]],
            Axis::Y => [[r, r], [ri, -ri]],
        }
    }

    /// Conjugate transpose of [`Axis::eigenbasis`]: maps computational
    /// amplitudes to amplitudes over the axis eigenbasis.
    pub fn to_eigenbasis(self) -> [[C64; 2]; 2] {
        let u = self.eigenbasis();
        [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(Axis::X),
            "Y" | "y" => Ok(Axis::Y),
            "Z" | "z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis {other:?}"))),
        }
    }
}

/// A computational-basis configuration of `len` spins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    bits: u64,
    len: usize,
}

impl SpinConfig {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_SITES || bits >> len != 0 {
            return Err(Error::ConfigOutOfRange { bits, len });
        }
        Ok(Self { bits, len })
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn num_sites(self) -> usize {
        self.len
    }

    pub fn bit(self, site: usize) -> bool {
        (self.bits >> site) & 1 == 1
    }

    /// Z eigenvalue of `site`.
    pub fn spin(self, site: usize) -> i8 {
        if self.bit(site) {
            -1
        } else {
            1
        }
    }

    pub fn flip(self, site: usize) -> Self {
        Self {
            bits: self.bits ^ (1 << site),
            len: self.len,
        }
    }

    pub fn hamming(self, other: SpinConfig) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

/// Amplitudes over the `2^L` configurations of an `L`-site chain.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    len: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(len: usize, amps: Vec<C64>) -> Result<Self> {
        check_sites("state vector", len)?;
        if amps.len() != 1 << len {
            return Err(Error::DimensionMismatch {
                expected: 1 << len,
                actual: amps.len(),
            });
        }
        Ok(Self { len, amps })
    }

    pub fn from_real(len: usize, amps: &[f64]) -> Result<Self> {
        Self::new(len, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The basis state `|config>`.
    pub fn basis(config: SpinConfig) -> Self {
        let mut amps = vec![ZERO; 1 << config.len];
        amps[config.bits as usize] = ONE;
        Self {
            len: config.len,
            amps,
        }
    }

    /// `|site>^{⊗len}` for a single-site state `(a0, a1)`.
    pub fn product(len: usize, site: [C64; 2]) -> Result<Self> {
        check_sites("state vector", len)?;
        let amps = (0..1usize << len)
            .map(|s| {
                (0..len).fold(ONE, |acc, j| acc * site[(s >> j) & 1])
            })
            .collect();
        Ok(Self { len, amps })
    }

    /// `(|0…0> + |1…1>)/√2`.
    pub fn ghz(len: usize) -> Result<Self> {
        check_sites("state vector", len)?;
        if len == 0 {
            return Err(Error::SizeOutOfRange {
                what: "GHZ state",
                len,
                min: 1,
                max: MAX_SITES,
            });
        }
        let mut amps = vec![ZERO; 1 << len];
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = h;
        amps[(1 << len) - 1] = h;
        Ok(Self { len, amps })
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// True when every amplitude has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|a| a.im == 0.0)
    }
}

pub(crate) fn check_sites(what: &'static str, len: usize) -> Result<()> {
    if len > MAX_SITES {
        return Err(Error::SizeOutOfRange {
            what,
            len,
            min: 0,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// Applies the Pauli operator `axis` on `site`.
pub fn apply_pauli(state: &StateVector, axis: Axis, site: usize) -> Result<StateVector> {
    if site >= state.len {
        return Err(Error::SiteOutOfRange {
            site,
            len: state.len,
        });
    }
    let mask = 1usize << site;
    let mut out = vec![ZERO; state.dim()];
    for (s, &a) in state.amps.iter().enumerate() {
        let (bit, phase) = axis.act((s >> site) & 1);
        out[(s & !mask) | (bit << site)] = phase * a;
    }
    Ok(StateVector {
        len: state.len,
        amps: out,
    })
}

/// Applies the same 2x2 matrix `gate` on `site`.
pub(crate) fn apply_site_gate(amps: &mut [C64], site: usize, gate: &[[C64; 2]; 2]) {
    let stride = 1usize << site;
    let [[g00, g01], [g10, g11]] = *gate;
    amps.par_chunks_mut(2 * stride)
        .with_min_len((4096 / (2 * stride)).max(1))
        .for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = g00 * x + g01 * y;
                *b = g10 * x + g11 * y;
            }
        });
}

/// Re-expresses the amplitudes over the product eigenbasis of `axis`.
///
/// Label bit 0 on a site is the `+1` eigenvector of the axis Pauli.
pub fn rotate_to_basis(state: &StateVector, axis: Axis) -> StateVector {
    let mut out = state.clone();
    if axis != Axis::Z {
        let gate = axis.to_eigenbasis();
        for site in 0..state.len {
            apply_site_gate(&mut out.amps, site, &gate);
        }
    }
    out
}

/// Inverse of [`rotate_to_basis`].
pub fn rotate_from_basis(state: &StateVector, axis: Axis) -> StateVector {
    let mut out = state.clone();
    if axis != Axis::Z {
        let gate = axis.eigenbasis();
        for site in 0..state.len {
            apply_site_gate(&mut out.amps, site, &gate);
        }
    }
    out
}

/// Split of the chain into `A = [0, L_A)` and `B = [L_A, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    len: usize,
    len_a: usize,
}

impl Bipartition {
    pub fn new(len: usize, len_a: usize) -> Result<Self> {
        check_sites("bipartition", len)?;
        if len_a == 0 || len_a >= len {
            return Err(Error::DegenerateBipartition { len, len_a });
        }
        Ok(Self { len, len_a })
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn len_a(&self) -> usize {
        self.len_a
    }

    pub fn len_b(&self) -> usize {
        self.len - self.len_a
    }

    pub fn dim_a(&self) -> usize {
        1 << self.len_a
    }

    pub fn dim_b(&self) -> usize {
        1 << self.len_b()
    }

    pub fn sites_a(&self) -> Range<usize> {
        0..self.len_a
    }

    pub fn sites_b(&self) -> Range<usize> {
        self.len_a..self.len
    }

    /// `(a, b)` parts of a full configuration label.
    #[inline]
    pub fn split(&self, label: usize) -> (usize, usize) {
        (label & (self.dim_a() - 1), label >> self.len_a)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        a | (b << self.len_a)
    }

    /// Mirror partition with `L_A' = L - L_A`.
    pub fn mirrored(&self) -> Self {
        Self {
            len: self.len,
            len_a: self.len_b(),
        }
    }
}

/// A dephased region together with its complement: subsystem `A`,
/// subsystem `B`, or the whole chain (empty complement).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    A(Bipartition),
    B(Bipartition),
    Whole(usize),
}

impl Region {
    pub fn whole(len: usize) -> Result<Self> {
        check_sites("region", len)?;
        if len == 0 {
            return Err(Error::SizeOutOfRange {
                what: "region",
                len,
                min: 1,
                max: MAX_SITES,
            });
        }
        Ok(Region::Whole(len))
    }

    /// Chain length.
    pub fn num_sites(&self) -> usize {
        match self {
            Region::A(p) | Region::B(p) => p.num_sites(),
            Region::Whole(len) => *len,
        }
    }

    /// Sites inside the region.
    pub fn sites(&self) -> Range<usize> {
        match self {
            Region::A(p) => p.sites_a(),
            Region::B(p) => p.sites_b(),
            Region::Whole(len) => 0..*len,
        }
    }

    /// Sites outside the region.
    pub fn complement(&self) -> Range<usize> {
        match self {
            Region::A(p) => p.sites_b(),
            Region::B(p) => p.sites_a(),
            Region::Whole(len) => *len..*len,
        }
    }

    pub fn size(&self) -> usize {
        self.sites().len()
    }

    pub fn complement_size(&self) -> usize {
        self.complement().len()
    }

    /// Coefficient matrix with rows over region configurations and columns
    /// over complement configurations.
    pub fn coefficient_matrix(&self, state: &StateVector) -> Result<CoefficientMatrix> {
        if state.num_sites() != self.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_sites(),
                actual: state.dim(),
            });
        }
        match self {
            Region::A(p) => coefficient_matrix(state, p),
            // B is the high-bit block: the amplitude array is already
            // row-major with B rows.
            Region::B(p) => Ok(CoefficientMatrix::from_parts(
                p.dim_b(),
                p.dim_a(),
                state.amps.clone(),
            )),
            Region::Whole(_) => Ok(CoefficientMatrix::from_parts(state.dim(), 1, state.amps.clone())),
        }
    }
}

/// Row-major complex matrix `c[row][col]`; rows index one subsystem's
/// configurations, columns the other's.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CoefficientMatrix {
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[C64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// `c[a][b]`: amplitude of the configuration with `A`-bits `a` and `B`-bits `b`.
pub fn coefficient_matrix(state: &StateVector, part: &Bipartition) -> Result<CoefficientMatrix> {
    check_partition(state, part)?;
    let (da, db) = (part.dim_a(), part.dim_b());
    let mut data = vec![ZERO; da * db];
    // The state viewed as a (db x da) row-major matrix; transpose it.
    for (b, src) in state.amps.chunks_exact(da).enumerate() {
        for (a, &amp) in src.iter().enumerate() {
            data[a * db + b] = amp;
        }
    }
    Ok(CoefficientMatrix::from_parts(da, db, data))
}

pub(crate) fn check_partition(state: &StateVector, part: &Bipartition) -> Result<()> {
    if state.len != part.len {
        return Err(Error::DimensionMismatch {
            expected: part.len,
            actual: state.len,
        });
    }
    Ok(())
}

/// Schmidt decomposition `ψ = Σ_k s_k |left_k>_A |right_k>_B`.
#[derive(Clone, Debug)]
pub struct SchmidtData {
    /// Singular values, descending, truncated to the numerical rank.
    pub values: Vec<f64>,
    /// `dim_a x rank`; column `k` is the `A`-side Schmidt vector.
    pub left: DMatrix<C64>,
    /// `dim_b x rank`; column `k` is the `B`-side Schmidt vector.
    pub right: DMatrix<C64>,
}

/// Relative cut below which singular values are dropped from the rank.
pub const SCHMIDT_RANK_CUTOFF: f64 = 1e-12;

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `Σ_k s_k^2`.
    pub fn weight(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }

    /// Rebuilds the coefficient matrix from the truncated decomposition.
    pub fn reconstruct(&self) -> CoefficientMatrix {
        let (da, db) = (self.left.nrows(), self.right.nrows());
        let mut data = vec![ZERO; da * db];
        for (k, &s) in self.values.iter().enumerate() {
            for a in 0..da {
                let la = self.left[(a, k)] * s;
                let row = &mut data[a * db..(a + 1) * db];
                for (b, slot) in row.iter_mut().enumerate() {
                    *slot += la * self.right[(b, k)];
                }
            }
        }
        CoefficientMatrix::from_parts(da, db, data)
    }
}

/// Singular value decomposition of the coefficient matrix.
pub fn schmidt(state: &StateVector, part: &Bipartition) -> Result<SchmidtData> {
    let c = coefficient_matrix(state, part)?.to_dmatrix();
    let svd = c.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let top = order.first().map_or(0.0, |&i| sv[i]);
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| sv[i] > SCHMIDT_RANK_CUTOFF * top)
        .collect();

    let values = kept.iter().map(|&i| sv[i]).collect();
    let left = DMatrix::from_fn(u.nrows(), kept.len(), |a, k| u[(a, kept[k])]);
    // c = U Σ V†, so the B-side vector is row k of V†.
    let right = DMatrix::from_fn(v_t.ncols(), kept.len(), |b, k| v_t[(kept[k], b)]);
    Ok(SchmidtData {
        values,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(2, &[h, 0.0, 0.0, h]).unwrap()
    }

    #[test]
    fn pauli_on_single_site() {
        let zero = StateVector::basis(SpinConfig::new(0, 1).unwrap());
        let one = StateVector::basis(SpinConfig::new(1, 1).unwrap());

        let z0 = apply_pauli(&zero, Axis::Z, 0).unwrap();
        assert_eq!(z0, zero);
        let z1 = apply_pauli(&one, Axis::Z, 0).unwrap();
        assert_eq!(z1.amplitudes(), &[ZERO, -ONE]);

        let x0 = apply_pauli(&zero, Axis::X, 0).unwrap();
        assert_eq!(x0, one);

        let y0 = apply_pauli(&zero, Axis::Y, 0).unwrap();
        assert_eq!(y0.amplitudes(), &[ZERO, I]);
        let y1 = apply_pauli(&one, Axis::Y, 0).unwrap();
        assert_eq!(y1.amplitudes(), &[-I, ZERO]);
    }

    #[test]
    fn pauli_matrix_matches_action() {
        for axis in Axis::ALL {
            let m = axis.pauli();
            for bit in 0..2 {
                let (out, phase) = axis.act(bit);
                assert_eq!(m[out][bit], phase);
                assert_eq!(m[out ^ 1][bit], ZERO);
            }
        }
    }

    #[test]
    fn pauli_site_out_of_range() {
        let s = StateVector::ghz(3).unwrap();
        assert!(matches!(
            apply_pauli(&s, Axis::X, 3),
            Err(Error::SiteOutOfRange { site: 3, len: 3 })
        ));
    }

    #[test]
    fn eigenbasis_columns_are_eigenvectors() {
        for axis in Axis::ALL {
            let u = axis.eigenbasis();
            let p = axis.pauli();
            for (col, eig) in [(0, 1.0), (1, -1.0)] {
                for row in 0..2 {
                    let pv = p[row][0] * u[0][col] + p[row][1] * u[1][col];
                    assert_close(pv, u[row][col] * eig, 1e-15);
                }
            }
        }
    }

    #[test]
    fn rotate_z_is_identity() {
        let s = StateVector::ghz(4).unwrap();
        assert_eq!(rotate_to_basis(&s, Axis::Z), s);
    }

    #[test]
    fn plus_state_rotates_to_label_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::product(5, [c(h, 0.0), c(h, 0.0)]).unwrap();
        let r = rotate_to_basis(&plus, Axis::X);
        assert_close(r.amplitudes()[0], ONE, 1e-12);
        let rest: f64 = r.amplitudes()[1..].iter().map(|a| a.norm()).sum();
        assert!(rest < 1e-12);

        let plus_y = StateVector::product(3, [c(h, 0.0), c(0.0, h)]).unwrap();
        let r = rotate_to_basis(&plus_y, Axis::Y);
        assert_close(r.amplitudes()[0], ONE, 1e-12);
    }

    #[test]
    fn rotation_round_trip() {
        let amps: Vec<C64> = (0..16).map(|k| c((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let s = StateVector::new(4, amps).unwrap().normalized().unwrap();
        for axis in Axis::ALL {
            let back = rotate_from_basis(&rotate_to_basis(&s, axis), axis);
            for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                assert_close(*a, *b, 1e-14);
            }
        }
    }

    #[test]
    fn bell_coefficients_and_schmidt() {
        let part = Bipartition::new(2, 1).unwrap();
        let cm = coefficient_matrix(&bell(), &part).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(cm.get(0, 0), c(h, 0.0), 1e-15);
        assert_close(cm.get(1, 1), c(h, 0.0), 1e-15);
        assert_eq!(cm.get(0, 1), ZERO);
        assert_eq!(cm.get(1, 0), ZERO);

        let sd = schmidt(&bell(), &part).unwrap();
        assert_eq!(sd.rank(), 2);
        for s in &sd.values {
            assert!((s - h).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_is_rank_one() {
        let s = StateVector::basis(SpinConfig::new(0, 6).unwrap());
        let part = Bipartition::new(6, 2).unwrap();
        let cm = coefficient_matrix(&s, &part).unwrap();
        let nonzero = cm.data().iter().filter(|a| a.norm() > 0.0).count();
        assert_eq!(nonzero, 1);
        let sd = schmidt(&s, &part).unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coefficient_matrix_matches_split_join() {
        let amps: Vec<C64> = (0..64).map(|k| c(k as f64, -(k as f64))).collect();
        let s = StateVector::new(6, amps).unwrap();
        let part = Bipartition::new(6, 4).unwrap();
        let cm = coefficient_matrix(&s, &part).unwrap();
        for label in 0..64 {
            let (a, b) = part.split(label);
            assert_eq!(part.join(a, b), label);
            assert_eq!(cm.get(a, b), s.amplitudes()[label]);
        }
    }

    #[test]
    fn degenerate_bipartition_rejected() {
        assert!(Bipartition::new(4, 0).is_err());
        assert!(Bipartition::new(4, 4).is_err());
        assert!(Bipartition::new(4, 3).is_ok());
    }

    #[test]
    fn schmidt_reconstructs_complex_state() {
        let amps: Vec<C64> = (0..32)
            .map(|k| c((1.3 * k as f64).sin(), (0.4 * k as f64).cos()))
            .collect();
        let s = StateVector::new(5, amps).unwrap().normalized().unwrap();
        let part = Bipartition::new(5, 3).unwrap();
        let sd = schmidt(&s, &part).unwrap();
        assert!((sd.weight() - 1.0).abs() < 1e-12);
        let rec = sd.reconstruct();
        let cm = coefficient_matrix(&s, &part).unwrap();
        let err: f64 = rec
            .data()
            .iter()
            .zip(cm.data())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-12, "{err}");
        assert!(sd.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn spin_config_basics() {
        let cfg = SpinConfig::new(0b101, 3).unwrap();
        assert_eq!(cfg.spin(0), -1);
        assert_eq!(cfg.spin(1), 1);
        assert_eq!(cfg.flip(1).bits(), 0b111);
        assert_eq!(cfg.hamming(SpinConfig::new(0, 3).unwrap()), 2);
        assert!(SpinConfig::new(8, 3).is_err());
    }

    #[test]
    fn axis_parses() {
        assert_eq!("x".parse::<Axis>().unwrap(), Axis::X);
        assert_eq!(" Z".parse::<Axis>().unwrap(), Axis::Z);
        assert!("w".parse::<Axis>().is_err());
        assert_eq!(Axis::Y.to_string(), "Y");
    }
}
