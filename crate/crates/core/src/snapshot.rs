//! On-disk wavefunction snapshots.
//!
//! Format: one ASCII header line followed by row-major little-endian f64
//! pairs (re, im). Bit-exactness across platforms is not promised; compare
//! snapshots with [`max_amplitude_difference`].

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field1d, Field2d, FrameTag};
use crate::grid::{Grid1d, Grid2d};

fn frame_name(tag: FrameTag) -> &'static str {
    match tag {
        FrameTag::Lab => "lab",
        FrameTag::Falling => "falling",
    }
}

fn parse_frame(s: &str) -> Result<FrameTag> {
    match s {
        "lab" => Ok(FrameTag::Lab),
        "falling" => Ok(FrameTag::Falling),
        other => Err(Error::Snapshot(format!("unknown frame tag {other:?}"))),
    }
}

fn write_amps(w: &mut impl Write, amps: &[Complex64]) -> Result<()> {
    let mut buf = Vec::with_capacity(amps.len() * 16);
    for a in amps {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_amps(r: &mut impl Read, n: usize) -> Result<Vec<Complex64>> {
    let mut bytes = vec![0u8; n * 16];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

pub fn write_snapshot_1d(path: &Path, field: &Field1d, t: f64, frame: FrameTag) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "snapshot dim=1 n={} min={:.17e} max={:.17e} t={:.17e} frame={}",
        field.grid.n, field.grid.min, field.grid.max, t, frame_name(frame)
    )?;
    write_amps(&mut w, &field.amp)
}

pub fn write_snapshot_2d(path: &Path, field: &Field2d, t: f64) -> Result<()> {
    let g = &field.grid;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "snapshot dim=2 n1={} min1={:.17e} max1={:.17e} n2={} min2={:.17e} max2={:.17e} \
         origin=({:.17e},{:.17e}) e1=({:.17e},{:.17e}) e2=({:.17e},{:.17e}) t={:.17e} frame={}",
        g.axis1.n,
        g.axis1.min,
        g.axis1.max,
        g.axis2.n,
        g.axis2.min,
        g.axis2.max,
        g.frame.origin[0],
        g.frame.origin[1],
        g.frame.e1[0],
        g.frame.e1[1],
        g.frame.e2[0],
        g.frame.e2[1],
        t,
        frame_name(field.frame)
    )?;
    write_amps(&mut w, &field.amp)
}

fn header_fields(line: &str) -> Result<std::collections::HashMap<String, String>> {
    let mut map = std::collections::HashMap::new();
    for tok in line.split_whitespace().skip(1) {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Snapshot(format!("bad header token {tok:?}")))?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn field_f64(map: &std::collections::HashMap<String, String>, key: &str) -> Result<f64> {
    map.get(key)
        .ok_or_else(|| Error::Snapshot(format!("missing header field {key}")))?
        .parse()
        .map_err(|e| Error::Snapshot(format!("bad {key}: {e}")))
}

fn field_usize(map: &std::collections::HashMap<String, String>, key: &str) -> Result<usize> {
    map.get(key)
        .ok_or_else(|| Error::Snapshot(format!("missing header field {key}")))?
        .parse()
        .map_err(|e| Error::Snapshot(format!("bad {key}: {e}")))
}

fn parse_pair(s: &str) -> Result<[f64; 2]> {
    let inner = s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Snapshot(format!("bad pair {s:?}")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Snapshot(format!("bad pair {s:?}")))?;
    Ok([
        a.parse().map_err(|e| Error::Snapshot(format!("bad pair: {e}")))?,
        b.parse().map_err(|e| Error::Snapshot(format!("bad pair: {e}")))?,
    ])
}

fn read_header(r: &mut impl Read) -> Result<String> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > 4096 {
            return Err(Error::Snapshot("unterminated header".into()));
        }
    }
    String::from_utf8(line).map_err(|e| Error::Snapshot(e.to_string()))
}

pub fn read_snapshot_1d(path: &Path) -> Result<(Field1d, f64, FrameTag)> {
    let mut r = BufReader::new(File::open(path)?);
    let header = read_header(&mut r)?;
    let map = header_fields(&header)?;
    let n = field_usize(&map, "n")?;
    let grid = Grid1d::new(field_f64(&map, "min")?, field_f64(&map, "max")?, n)?;
    let t = field_f64(&map, "t")?;
    let frame = parse_frame(map.get("frame").map(String::as_str).unwrap_or(""))?;
    let amp = read_amps(&mut r, n)?;
    Ok((Field1d { grid, amp }, t, frame))
}

pub fn read_snapshot_2d(path: &Path) -> Result<(Field2d, f64)> {
    let mut r = BufReader::new(File::open(path)?);
    let header = read_header(&mut r)?;
    let map = header_fields(&header)?;
    let axis1 = Grid1d::new(
        field_f64(&map, "min1")?,
        field_f64(&map, "max1")?,
        field_usize(&map, "n1")?,
    )?;
    let axis2 = Grid1d::new(
        field_f64(&map, "min2")?,
        field_f64(&map, "max2")?,
        field_usize(&map, "n2")?,
    )?;
    let frame2d = crate::grid::Frame2d {
        origin: parse_pair(map.get("origin").ok_or_else(|| Error::Snapshot("missing origin".into()))?)?,
        e1: parse_pair(map.get("e1").ok_or_else(|| Error::Snapshot("missing e1".into()))?)?,
        e2: parse_pair(map.get("e2").ok_or_else(|| Error::Snapshot("missing e2".into()))?)?,
    };
    let grid = Grid2d::with_frame(axis1, axis2, frame2d);
    let t = field_f64(&map, "t")?;
    let frame = parse_frame(map.get("frame").map(String::as_str).unwrap_or(""))?;
    let amp = read_amps(&mut r, grid.len())?;
    Ok((
        Field2d { grid, amp, frame },
        t,
    ))
}

/// Largest pointwise amplitude difference between two snapshots of equal shape.
pub fn max_amplitude_difference(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_round_trip() {
        let g = Grid1d::new(-2.0, 3.0, 64).unwrap();
        let f = Field1d::gaussian(g, 0.5, 0.2, 3.0);
        let dir = std::env::temp_dir().join("deflector-snap-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s1.bin");
        write_snapshot_1d(&path, &f, 0.125, FrameTag::Lab).unwrap();
        let (back, t, frame) = read_snapshot_1d(&path).unwrap();
        assert_eq!(frame, FrameTag::Lab);
        assert_eq!(t, 0.125);
        assert_eq!(back.grid, g);
        assert_eq!(max_amplitude_difference(&back.amp, &f.amp), 0.0);
    }
}
