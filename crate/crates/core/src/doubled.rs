//! Choi supervectors in the doubled (`u ⊗ ℓ`) Hilbert space.
//!
//! Convention: the supervector of `ρ` has component
//! `|ρ⟩⟩[k + m·2^L] = ρ[m][k]`, unnormalized. The `u` (bra, column) bit of
//! site `j` is label bit `j`; the `ℓ` (ket, row) bit is label bit `L + j`.
//! With this layout the supervector is exactly the row-major storage of `ρ`,
//! and `|ψψ†⟩⟩ = conj(ψ) ⊗ ψ`. Inner products are
//! `⟨⟨σ|ρ⟩⟩ = Tr[σ†ρ]`, so `‖|ρ⟩⟩‖² = Tr[ρ²]`.
//!
//! A Kraus channel `Σ_α K_α ρ K_α†` lifts to `Σ_α K*_α,u ⊗ K_α,ℓ`. Each site
//! factor acts on the four components `q = u + 2ℓ` of a (u, ℓ) bit pair.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::{ChannelSpec, DenseDensityMatrix};
use crate::spin::{Axis, Region, StateVector};
use crate::{Error, Result};

/// Largest chain accepted by the supervector engine (`4^12` amplitudes).
pub const MAX_SUPERVECTOR_SITES: usize = 12;

const ZERO: C64 = C64::new(0.0, 0.0);

type Quad = [C64; 4];
/// Site factor on the quad `q = u + 2ℓ`, row-major.
pub type SiteFactor = [[C64; 4]; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct SuperVector {
    len: usize,
    data: Vec<C64>,
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_SUPERVECTOR_SITES {
        return Err(Error::SizeOutOfRange {
            what: "supervector (use the pure-state paths for longer chains)",
            len,
            min: 1,
            max: MAX_SUPERVECTOR_SITES,
        });
    }
    Ok(())
}

impl SuperVector {
    pub fn new(len: usize, data: Vec<C64>) -> Result<Self> {
        check_len(len)?;
        if data.len() != 1 << (2 * len) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (2 * len),
                actual: data.len(),
            });
        }
        Ok(Self { len, data })
    }

    /// `|ψψ†⟩⟩` without forming the density matrix.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let len = state.num_sites();
        check_len(len)?;
        let psi = state.amplitudes();
        let d = psi.len();
        let mut data = vec![ZERO; d * d];
        data.par_chunks_mut(d).zip(psi.par_iter()).for_each(|(row, &ket)| {
            for (slot, bra) in row.iter_mut().zip(psi) {
                *slot = bra.conj() * ket;
            }
        });
        Ok(Self { len, data })
    }

    pub fn num_sites(&self) -> usize {
        self.len
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// `⟨⟨self|other⟩⟩`.
    pub fn inner(&self, other: &SuperVector) -> Result<C64> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                actual: other.data.len(),
            });
        }
        Ok(chunked_sum(&self.data, &other.data, |a, b| a.conj() * b))
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked_sum(&self.data, &self.data, |a, _| C64::new(a.norm_sqr(), 0.0)).re
    }

    /// Trace of the de-vectorized matrix.
    pub fn trace(&self) -> C64 {
        let d = 1usize << self.len;
        (0..d).map(|k| self.data[k + k * d]).sum()
    }

    fn for_each_quad(&mut self, site: usize, f: impl Fn(&mut Quad) + Sync) {
        let len = self.len;
        let u_stride = 1usize << site;
        let l_stride = 1usize << (len + site);
        self.data.par_chunks_mut(2 * l_stride).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(l_stride);
            lo.par_chunks_mut(2 * u_stride)
                .zip(hi.par_chunks_mut(2 * u_stride))
                .with_min_len((2048 / u_stride).max(1))
                .for_each(|(a, b)| {
                    let (a0, a1) = a.split_at_mut(u_stride);
                    let (b0, b1) = b.split_at_mut(u_stride);
                    for i in 0..u_stride {
                        let mut q = [a0[i], a1[i], b0[i], b1[i]];
                        f(&mut q);
                        a0[i] = q[0];
                        a1[i] = q[1];
                        b0[i] = q[2];
                        b1[i] = q[3];
                    }
                });
        });
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.len {
            return Err(Error::SiteOutOfRange { site, len: self.len });
        }
        Ok(())
    }

    /// Applies an arbitrary site factor.
    pub fn apply_site_factor(&mut self, site: usize, factor: &SiteFactor) -> Result<()> {
        self.check_site(site)?;
        let f = *factor;
        self.for_each_quad(site, move |q| {
            let src = *q;
            for (r, row) in f.iter().enumerate() {
                q[r] = row.iter().zip(&src).map(|(m, x)| m * x).sum();
            }
        });
        Ok(())
    }
}

/// Fixed-size blocks summed in order, so the result does not depend on the
/// thread count.
fn chunked_sum(a: &[C64], b: &[C64], f: impl Fn(C64, C64) -> C64 + Sync) -> C64 {
    const CHUNK: usize = 1 << 14;
    let partial: Vec<C64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| f(p, q)).sum())
        .collect();
    partial.into_iter().sum()
}

/// `|ρ⟩⟩` for a dense density matrix.
pub fn vectorize(rho: &DenseDensityMatrix) -> Result<SuperVector> {
    let len = rho.num_sites();
    check_len(len)?;
    let m = rho.matrix();
    let d = m.nrows();
    let mut data = Vec::with_capacity(d * d);
    for row in 0..d {
        for col in 0..d {
            data.push(m[(row, col)]);
        }
    }
    Ok(SuperVector { len, data })
}

/// Exact inverse of [`vectorize`].
pub fn devectorize(sv: &SuperVector) -> Result<DenseDensityMatrix> {
    let d = 1usize << sv.len;
    DenseDensityMatrix::new(sv.len, DMatrix::from_row_slice(d, d, &sv.data))
}

/// Doubled-space form of a [`ChannelSpec`]: on each listed site the factor
/// `(1−p)·I⊗I + p·M*_u ⊗ M_ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedChannel {
    spec: ChannelSpec,
}

pub fn lift_channel(spec: &ChannelSpec) -> LiftedChannel {
    LiftedChannel { spec: spec.clone() }
}

/// `a_u ⊗ b_ℓ` as a quad factor.
fn doubled_product(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> SiteFactor {
    let mut out = [[ZERO; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = a[r & 1][c & 1] * b[r >> 1][c >> 1];
        }
    }
    out
}

fn conj2(m: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}

impl LiftedChannel {
    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    /// `Σ_α K*_α ⊗ K_α` for the single-site Kraus pair.
    pub fn site_factor(&self) -> SiteFactor {
        let mut out = [[ZERO; 4]; 4];
        for k in self.spec.kraus() {
            let term = doubled_product(&conj2(&k), &k);
            for r in 0..4 {
                for c in 0..4 {
                    out[r][c] += term[r][c];
                }
            }
        }
        out
    }

    pub fn apply(&self, sv: &mut SuperVector) -> Result<()> {
        self.spec.check_sites(sv.len)?;
        let p = self.spec.strength();
        if p == 0.0 {
            return Ok(());
        }
        match self.spec.axis() {
            Axis::Z => {
                // Diagonal: off-diagonal (u ≠ ℓ) components scale by 1−2p.
                let lambda = if p == 0.5 { 0.0 } else { 1.0 - 2.0 * p };
                for &site in self.spec.sites() {
                    sv.for_each_quad(site, |q| {
                        q[1] *= lambda;
                        q[2] *= lambda;
                    });
                }
            }
            _ => {
                let factor = self.site_factor();
                for &site in self.spec.sites() {
                    sv.apply_site_factor(site, &factor)?;
                }
            }
        }
        Ok(())
    }
}

/// Maximal depolarization factor
/// `(1/4)[I⊗I + X⊗X − Y⊗Y + Z⊗Z]` built from the Pauli matrices.
pub fn depolarizer_factor() -> SiteFactor {
    let id = [[C64::new(1.0, 0.0), ZERO], [ZERO, C64::new(1.0, 0.0)]];
    let terms = [
        (1.0, doubled_product(&id, &id)),
        (1.0, doubled_product(&Axis::X.pauli(), &Axis::X.pauli())),
        (-1.0, doubled_product(&Axis::Y.pauli(), &Axis::Y.pauli())),
        (1.0, doubled_product(&Axis::Z.pauli(), &Axis::Z.pauli())),
    ];
    let mut out = [[ZERO; 4]; 4];
    for (w, t) in terms {
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] += t[r][c] * (0.25 * w);
            }
        }
    }
    out
}

fn depolarize_in_place(sv: &mut SuperVector, sites: impl IntoIterator<Item = usize>) -> Result<()> {
    for site in sites {
        sv.check_site(site)?;
        // Closed form of `depolarizer_factor`: average the diagonal pair,
        // drop the coherences.
        sv.for_each_quad(site, |q| {
            let avg = (q[0] + q[3]) * 0.5;
            *q = [avg, ZERO, ZERO, avg];
        });
    }
    Ok(())
}

/// Sends `ρ` to `(I_S / d_S) ⊗ Tr_S[ρ]` for the site set `S`.
pub fn depolarize_subsystem(sv: &SuperVector, sites: &[usize]) -> Result<SuperVector> {
    let mut out = sv.clone();
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    depolarize_in_place(&mut out, sorted)?;
    Ok(out)
}

/// Rényi-2 generalized Shannon entropy of a (possibly mixed) state:
/// dephase `region` along `axis` with strength `p_m`, depolarize the
/// complement, and return `−log(d_c · ‖·‖²)` with `d_c = 2^{|complement|}`.
pub fn r2gse_supervector(sv: &SuperVector, region: Region, axis: Axis, p_m: f64) -> Result<f64> {
    if region.num_sites() != sv.len {
        return Err(Error::DimensionMismatch {
            expected: 1 << (2 * region.num_sites()),
            actual: sv.data.len(),
        });
    }
    let spec = ChannelSpec::new(axis, p_m, region.sites())?;
    let mut work = sv.clone();
    lift_channel(&spec).apply(&mut work)?;
    depolarize_in_place(&mut work, region.complement())?;
    let d_c = (1u64 << region.complement_size()) as f64;
    let purity = d_c * work.norm_sqr();
    if !purity.is_finite() || purity <= 0.0 {
        return Err(Error::NonPositivePurity(purity));
    }
    Ok(-purity.ln())
}
