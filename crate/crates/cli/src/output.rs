//! CSV emission and parsing. Floats use Rust's shortest round-trip decimal
//! form, so identical inputs give byte-identical files.

use std::io::{self, BufRead, Write};

use gsmi_core::sweep::SeriesFit;
use gsmi_core::MiPoint;

use crate::config::ConfigError;

pub const POINTS_HEADER: &str = "L,L_A,axis,p_m,p_y,S_A,S_B,S_AB,I2";
pub const FITS_HEADER: &str = "axis,p_m,p_y,c2,b2,rms,window";

const PREAMBLE: &str = "# entropies in natural-log units; fits are ordinary least squares of I2 against ln((L/pi) sin(pi L_A/L))";

pub fn write_points<W: Write>(mut w: W, points: &[MiPoint]) -> io::Result<()> {
    writeln!(w, "{PREAMBLE}")?;
    writeln!(w, "{POINTS_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            p.len, p.len_a, p.axis, p.p_m, p.p_y, p.s_a, p.s_b, p.s_ab, p.i2
        )?;
    }
    w.flush()
}

pub fn write_fits<W: Write>(mut w: W, fits: &[SeriesFit]) -> io::Result<()> {
    writeln!(w, "{PREAMBLE}")?;
    writeln!(w, "{FITS_HEADER}")?;
    for f in fits {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            f.axis, f.p_m, f.p_y, f.fit.c2, f.fit.b2, f.fit.rms, f.window
        )?;
    }
    w.flush()
}

/// Reads a file written by [`write_points`]. Comment lines are skipped and
/// the header row must match exactly. `I2` is taken from the file.
pub fn read_points<R: BufRead>(r: R) -> Result<Vec<MiPoint>, ConfigError> {
    let bad = |n: usize, what: &str| ConfigError(format!("points file line {}: {what}", n + 1));
    let mut header_seen = false;
    let mut points = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| ConfigError(format!("reading points file: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != POINTS_HEADER {
                return Err(bad(n, &format!("expected header {POINTS_HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 9 {
            return Err(bad(n, "expected 9 columns"));
        }
        let num = |k: usize| fields[k].parse::<f64>().map_err(|_| bad(n, &format!("bad number {:?}", fields[k])));
        let int = |k: usize| fields[k].parse::<usize>().map_err(|_| bad(n, &format!("bad integer {:?}", fields[k])));
        points.push(MiPoint {
            len: int(0)?,
            len_a: int(1)?,
            axis: fields[2].parse().map_err(|_| bad(n, &format!("bad axis {:?}", fields[2])))?,
            p_m: num(3)?,
            p_y: num(4)?,
            s_a: num(5)?,
            s_b: num(6)?,
            s_ab: num(7)?,
            i2: num(8)?,
        });
    }
    if !header_seen {
        return Err(ConfigError("points file has no header row".into()));
    }
    Ok(points)
}
