//! Binary ground-state cache.
//!
//! Layout, all little-endian:
//!
//! | bytes      | content                                   |
//! |------------|-------------------------------------------|
//! | 4          | magic `TFGS`                              |
//! | 4          | format version, `u32`                     |
//! | 4          | chain length `L`, `u32`                   |
//! | 8          | ground energy, `f64`                      |
//! | 16 · 2^L   | amplitudes as `(re: f64, im: f64)` pairs  |

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use super::{ground_state, GroundStateResult, SolverMethod, TfimModel, GROUND_STATE_RESIDUAL};
use crate::spin::{StateVector, MAX_SITES};
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"TFGS";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_ground_state<W: Write>(mut w: W, energy: f64, state: &StateVector) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(state.num_sites() as u32).to_le_bytes())?;
    w.write_all(&energy.to_le_bytes())?;
    for a in state.amplitudes() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated file: {e}")))?;
    Ok(buf)
}

/// Returns `(energy, state)`.
pub fn read_ground_state<R: Read>(mut r: R) -> Result<(f64, StateVector)> {
    let magic: [u8; 4] = read_array(&mut r)?;
    if magic != MAGIC {
        return Err(Error::Cache(format!("bad magic {magic:?}")));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let len = u32::from_le_bytes(read_array(&mut r)?) as usize;
    if len > MAX_SITES {
        return Err(Error::Cache(format!("chain length {len} too large")));
    }
    let energy = f64::from_le_bytes(read_array(&mut r)?);
    let mut amps = Vec::with_capacity(1 << len);
    for _ in 0..1usize << len {
        let re = f64::from_le_bytes(read_array(&mut r)?);
        let im = f64::from_le_bytes(read_array(&mut r)?);
        amps.push(C64::new(re, im));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Cache("trailing bytes after amplitudes".into()));
    }
    Ok((energy, StateVector::new(len, amps)?))
}

pub fn cache_file_name(len: usize, method: SolverMethod) -> String {
    format!("tfim_L{len}_{method}.tfgs")
}

#[derive(Clone, Debug)]
pub struct CachedGroundState {
    pub result: GroundStateResult,
    pub path: PathBuf,
    /// Whether the file was reused rather than recomputed.
    pub hit: bool,
}

/// Loads the ground state for `(L, method)` from `dir`, recomputing and
/// rewriting it when the file is missing, unreadable, for a different chain,
/// or no longer an eigenvector to [`GROUND_STATE_RESIDUAL`].
pub fn load_or_compute(dir: &Path, model: &TfimModel, method: SolverMethod) -> Result<CachedGroundState> {
    let path = dir.join(cache_file_name(model.num_sites(), method));
    if let Some(result) = try_load(&path, model) {
        return Ok(CachedGroundState {
            result,
            path,
            hit: true,
        });
    }
    let result = ground_state(model, method)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tfgs.tmp");
    {
        let file = fs::File::create(&tmp)?;
        write_ground_state(BufWriter::new(file), result.energy, &result.state)?;
    }
    fs::rename(&tmp, &path)?;
    Ok(CachedGroundState {
        result,
        path,
        hit: false,
    })
}

fn try_load(path: &Path, model: &TfimModel) -> Option<GroundStateResult> {
    let file = fs::File::open(path).ok()?;
    let (energy, state) = read_ground_state(BufReader::new(file)).ok()?;
    if state.num_sites() != model.num_sites() || (state.norm_sqr() - 1.0).abs() > 1e-12 {
        return None;
    }
    let residual = model.residual(&state, energy).ok()?;
    (residual <= GROUND_STATE_RESIDUAL).then_some(GroundStateResult {
        energy,
        state,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_fixed() {
        let state = StateVector::from_real(1, &[0.6, 0.8]).unwrap();
        let mut buf = Vec::new();
        write_ground_state(&mut buf, -1.5, &state).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 4 + 8 + 2 * 16);
        assert_eq!(&buf[0..4], b"TFGS");
        assert_eq!(&buf[4..8], &[1, 0, 0, 0]);
        assert_eq!(&buf[8..12], &[1, 0, 0, 0]);
        assert_eq!(&buf[12..20], &(-1.5f64).to_le_bytes());
        assert_eq!(&buf[20..28], &0.6f64.to_le_bytes());
        assert_eq!(&buf[28..36], &0.0f64.to_le_bytes());
        let (e, back) = read_ground_state(buf.as_slice()).unwrap();
        assert_eq!(e, -1.5);
        assert_eq!(back, state);
    }

    #[test]
    fn corrupt_files_rejected() {
        let state = StateVector::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let mut buf = Vec::new();
        write_ground_state(&mut buf, 0.0, &state).unwrap();

        let mut bad_magic = buf.clone();
        bad_magic[0] = b'X';
        assert!(read_ground_state(bad_magic.as_slice()).is_err());

        let truncated = &buf[..buf.len() - 3];
        assert!(read_ground_state(truncated).is_err());

        let mut trailing = buf.clone();
        trailing.push(0);
        assert!(read_ground_state(trailing.as_slice()).is_err());

        let mut version = buf;
        version[4] = 9;
        assert!(read_ground_state(version.as_slice()).is_err());
    }

    #[test]
    fn second_call_hits_cache() {
        let dir = tempfile::tempdir().unwrap();
        let model = TfimModel::new(6).unwrap();
        let first = load_or_compute(dir.path(), &model, SolverMethod::Lanczos).unwrap();
        assert!(!first.hit);
        let second = load_or_compute(dir.path(), &model, SolverMethod::Lanczos).unwrap();
        assert!(second.hit);
        assert_eq!(first.result.energy.to_bits(), second.result.energy.to_bits());
        assert_eq!(first.result.state, second.result.state);
    }

    #[test]
    fn stale_cache_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let model = TfimModel::new(5).unwrap();
        let path = dir.path().join(cache_file_name(5, SolverMethod::Dense));
        let wrong = StateVector::from_real(5, &[1.0; 32]).unwrap().normalized().unwrap();
        write_ground_state(fs::File::create(&path).unwrap(), -3.0, &wrong).unwrap();
        let got = load_or_compute(dir.path(), &model, SolverMethod::Dense).unwrap();
        assert!(!got.hit);
        assert!(got.result.residual <= GROUND_STATE_RESIDUAL);
    }
}
