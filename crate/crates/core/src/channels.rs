//! Products of single-site Pauli channels `ρ ↦ (1−p)ρ + p MρM` on dense
//! density matrices.
//!
//! Dense matrices are the reference representation; the fast paths live in
//! [`crate::entropy`] and [`crate::doubled`].

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::spin::{Axis, StateVector};
use crate::{Error, Result};

/// Largest chain held as an explicit density matrix.
pub const MAX_DENSE_SITES: usize = 12;

pub(crate) fn check_strength(p: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidStrength(p));
    }
    Ok(())
}

/// A product of identical single-site channels
/// `E_j[ρ] = (1−p) ρ + p M_j ρ M_j` over `sites`, with Kraus operators
/// `√(1−p)·I` and `√p·M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    axis: Axis,
    strength: f64,
    sites: Vec<usize>,
}

impl ChannelSpec {
    /// `sites` is treated as a set.
    pub fn new(axis: Axis, strength: f64, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_strength(strength)?;
        let mut sites: Vec<usize> = sites.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        Ok(Self {
            axis,
            strength,
            sites,
        })
    }

    /// The channel on every site of an `len`-site chain.
    pub fn on_all(axis: Axis, strength: f64, len: usize) -> Result<Self> {
        Self::new(axis, strength, 0..len)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub(crate) fn check_sites(&self, len: usize) -> Result<()> {
        match self.sites.last() {
            Some(&site) if site >= len => Err(Error::SiteOutOfRange { site, len }),
            _ => Ok(()),
        }
    }

    /// Single-site Kraus operators `[√(1−p)·I, √p·M]`.
    pub fn kraus(&self) -> [[[C64; 2]; 2]; 2] {
        let a = C64::new((1.0 - self.strength).sqrt(), 0.0);
        let b = self.strength.sqrt();
        let m = self.axis.pauli();
        let zero = C64::new(0.0, 0.0);
        [
            [[a, zero], [zero, a]],
            [[m[0][0] * b, m[0][1] * b], [m[1][0] * b, m[1][1] * b]],
        ]
    }
}

/// Multiplier `(1−2p)^n` picked up by a density-matrix element whose two
/// configurations (in the eigenbasis of the channel axis) differ on `n`
/// dephased sites.
pub fn dephasing_factor(p: f64, differing_sites: u32) -> f64 {
    debug_assert!((0.0..=0.5).contains(&p));
    if differing_sites == 0 {
        1.0
    } else if p == 0.5 {
        0.0
    } else {
        (1.0 - 2.0 * p).powi(differing_sites as i32)
    }
}

/// Explicit `2^L x 2^L` density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDensityMatrix {
    len: usize,
    matrix: DMatrix<C64>,
}

impl DenseDensityMatrix {
    pub fn new(len: usize, matrix: DMatrix<C64>) -> Result<Self> {
        check_dense_sites(len)?;
        let dim = 1usize << len;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { len, matrix })
    }

    /// `|ψ><ψ|`.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        check_dense_sites(state.num_sites())?;
        let a = state.amplitudes();
        let dim = a.len();
        let matrix = DMatrix::from_fn(dim, dim, |m, k| a[m] * a[k].conj());
        Ok(Self {
            len: state.num_sites(),
            matrix,
        })
    }

    pub fn maximally_mixed(len: usize) -> Result<Self> {
        check_dense_sites(len)?;
        let dim = 1usize << len;
        let matrix = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
        Ok(Self { len, matrix })
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr[ρ†ρ]`, equal to `Tr[ρ²]` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry of `|ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `G ρ G†` with `G` the product of the same 2x2 `gate` on every site.
    fn conjugate_by_product(&self, gate: &[[C64; 2]; 2]) -> Self {
        let g = DMatrix::from_fn(2, 2, |r, c| gate[r][c]);
        let mut full = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for _ in 0..self.len {
            // Higher sites sit on the left of the Kronecker product.
            full = g.kronecker(&full);
        }
        Self {
            len: self.len,
            matrix: &full * &self.matrix * full.adjoint(),
        }
    }

    /// Matrix elements over the product eigenbasis of `axis`.
    pub fn rotate_to_basis(&self, axis: Axis) -> Self {
        self.conjugate_by_product(&axis.to_eigenbasis())
    }

    pub fn rotate_from_basis(&self, axis: Axis) -> Self {
        self.conjugate_by_product(&axis.eigenbasis())
    }
}

fn check_dense_sites(len: usize) -> Result<()> {
    if len > MAX_DENSE_SITES {
        return Err(Error::SizeOutOfRange {
            what: "dense density matrix",
            len,
            min: 0,
            max: MAX_DENSE_SITES,
        });
    }
    Ok(())
}

/// `M_j ρ M_j†` for a single-site Pauli.
fn conjugate_pauli(matrix: &DMatrix<C64>, axis: Axis, site: usize) -> DMatrix<C64> {
    let dim = matrix.nrows();
    let mask = 1usize << site;
    let image = |s: usize| {
        let (bit, phase) = axis.act((s >> site) & 1);
        ((s & !mask) | (bit << site), phase)
    };
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let (k_out, k_phase) = image(k);
        for m in 0..dim {
            let (m_out, m_phase) = image(m);
            out[(m_out, k_out)] = m_phase * k_phase.conj() * matrix[(m, k)];
        }
    }
    out
}

/// Applies the site channels of `spec` one after another.
pub fn apply_channel_dense(rho: &DenseDensityMatrix, spec: &ChannelSpec) -> Result<DenseDensityMatrix> {
    spec.check_sites(rho.len)?;
    let p = spec.strength;
    let mut matrix = rho.matrix.clone();
    if p == 0.0 {
        return Ok(DenseDensityMatrix { len: rho.len, matrix });
    }
    for &site in &spec.sites {
        let flipped = conjugate_pauli(&matrix, spec.axis, site);
        matrix = matrix * C64::new(1.0 - p, 0.0) + flipped * C64::new(p, 0.0);
    }
    Ok(DenseDensityMatrix { len: rho.len, matrix })
}

/// Y decoherence of strength `p_y` on every site.
pub fn y_decohere_dense(rho: &DenseDensityMatrix, p_y: f64) -> Result<DenseDensityMatrix> {
    apply_channel_dense(rho, &ChannelSpec::on_all(Axis::Y, p_y, rho.len)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn plus_projector() -> DenseDensityMatrix {
        DenseDensityMatrix::new(1, DMatrix::from_element(2, 2, c(0.5))).unwrap()
    }

    #[test]
    fn zero_strength_is_identity() {
        let rho = plus_projector();
        for axis in Axis::ALL {
            let spec = ChannelSpec::new(axis, 0.0, [0]).unwrap();
            assert_eq!(apply_channel_dense(&rho, &spec).unwrap(), rho);
        }
    }

    #[test]
    fn full_z_dephasing_of_plus_state() {
        let spec = ChannelSpec::new(Axis::Z, 0.5, [0]).unwrap();
        let out = apply_channel_dense(&plus_projector(), &spec).unwrap();
        let half = DMatrix::from_diagonal_element(2, 2, c(0.5));
        assert!((out.matrix() - half).camax() < 1e-15);
    }

    #[test]
    fn partial_z_dephasing_scales_coherences() {
        let spec = ChannelSpec::new(Axis::Z, 0.3, [0]).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(0.7), C64::new(0.2, 0.1), C64::new(0.2, -0.1), c(0.3)]);
        let rho = DenseDensityMatrix::new(1, m.clone()).unwrap();
        let out = apply_channel_dense(&rho, &spec).unwrap();
        assert!((out.matrix()[(0, 0)] - m[(0, 0)]).norm() < 1e-15);
        assert!((out.matrix()[(1, 1)] - m[(1, 1)]).norm() < 1e-15);
        assert!((out.matrix()[(0, 1)] - m[(0, 1)] * 0.4).norm() < 1e-15);
        assert!((out.matrix()[(1, 0)] - m[(1, 0)] * 0.4).norm() < 1e-15);
    }

    #[test]
    fn y_decoherence_of_up_state() {
        let up = DenseDensityMatrix::new(1, DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])).unwrap();
        assert_eq!(y_decohere_dense(&up, 0.0).unwrap(), up);
        let out = y_decohere_dense(&up, 0.5).unwrap();
        let half = DMatrix::from_diagonal_element(2, 2, c(0.5));
        assert!((out.matrix() - half).camax() < 1e-15);
    }

    #[test]
    fn dephasing_factor_values() {
        assert_eq!(dephasing_factor(0.37, 0), 1.0);
        assert_eq!(dephasing_factor(0.5, 1), 0.0);
        assert_eq!(dephasing_factor(0.5, 4), 0.0);
        assert!((dephasing_factor(0.3, 2) - 0.16).abs() < 1e-15);
    }

    #[test]
    fn kraus_completeness() {
        for axis in Axis::ALL {
            let spec = ChannelSpec::new(axis, 0.27, [0]).unwrap();
            let k = spec.kraus();
            for r in 0..2 {
                for col in 0..2 {
                    let s: C64 = (0..2)
                        .map(|a| (0..2).map(|i| k[a][i][r].conj() * k[a][i][col]).sum::<C64>())
                        .sum();
                    let expect = if r == col { 1.0 } else { 0.0 };
                    assert!((s - c(expect)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(
            ChannelSpec::new(Axis::Z, 0.6, [0]),
            Err(Error::InvalidStrength(_))
        ));
        assert!(ChannelSpec::new(Axis::Z, -0.1, [0]).is_err());
        assert!(ChannelSpec::new(Axis::Z, f64::NAN, [0]).is_err());
        let spec = ChannelSpec::new(Axis::X, 0.1, [3]).unwrap();
        let rho = DenseDensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(
            apply_channel_dense(&rho, &spec),
            Err(Error::SiteOutOfRange { site: 3, len: 2 })
        ));
        assert!(DenseDensityMatrix::new(2, DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn sites_form_a_set() {
        let spec = ChannelSpec::new(Axis::X, 0.2, [2, 0, 2, 1]).unwrap();
        assert_eq!(spec.sites(), &[0, 1, 2]);
    }

    #[test]
    fn rotation_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::new(2, vec![c(0.5), C64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        let rho = DenseDensityMatrix::from_pure(&s).unwrap();
        for axis in Axis::ALL {
            let back = rho.rotate_to_basis(axis).rotate_from_basis(axis);
            assert!((back.matrix() - rho.matrix()).camax() < 1e-14);
        }
        let plus = StateVector::product(2, [c(h), c(h)]).unwrap();
        let r = DenseDensityMatrix::from_pure(&plus).unwrap().rotate_to_basis(Axis::X);
        assert!((r.matrix()[(0, 0)] - c(1.0)).norm() < 1e-14);
    }
}
