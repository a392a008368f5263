//! Grid field serialisation.
//!
//! Binary layout, all little-endian: magic `MPLB`, `u32` version, `u32` n,
//! `u32` m, `u32` N, `f64` L, then each component's samples in row-major
//! order as `(re, im)` pairs of `f64`.

use std::io::{Read, Write};

use super::grid::{GridField, GridSpec};
use crate::linalg::C64;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"MPLB";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_binary<W: Write>(f: &GridField, mut w: W) -> Result<()> {
    let spec = f.spec();
    w.write_all(MAGIC)?;
    for v in [FORMAT_VERSION, spec.dim() as u32, f.m() as u32, spec.samples() as u32] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&spec.length().to_le_bytes())?;
    for z in f.components().iter().flatten() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_binary<R: Read>(mut r: R) -> Result<GridField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::ConfigInvalid("not a grid field file".into()));
    }
    let version = read_u32(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(Error::ConfigInvalid(format!("unsupported grid field version {version}")));
    }
    let dim = read_u32(&mut r)? as usize;
    let m = read_u32(&mut r)? as usize;
    let samples = read_u32(&mut r)? as usize;
    let length = read_f64(&mut r)?;
    let spec = GridSpec::new(dim, samples, length)?;
    if m == 0 {
        return Err(Error::ConfigInvalid("grid field has no components".into()));
    }
    let mut components = Vec::with_capacity(m);
    for _ in 0..m {
        let mut c = Vec::with_capacity(spec.len());
        for _ in 0..spec.len() {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            c.push(C64::new(re, im));
        }
        components.push(c);
    }
    GridField::new(spec, components)
}

/// Writes the slice along axis 0 through the origin as CSV with columns
/// `x, re_0, im_0, re_1, im_1, …`.
pub fn write_csv_slice<W: Write>(f: &GridField, w: W) -> Result<()> {
    let spec = f.spec();
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["x".to_string()];
    for j in 0..f.m() {
        header.push(format!("re_{j}"));
        header.push(format!("im_{j}"));
    }
    out.write_record(&header).map_err(csv_err)?;
    let mut idx = vec![spec.samples() / 2; spec.dim()];
    for k in 0..spec.samples() {
        idx[0] = k;
        let i = spec.flat_index(&idx);
        let mut rec = vec![format!("{:e}", spec.point(i)[0])];
        for c in f.components() {
            rec.push(format!("{:e}", c[i].re));
            rec.push(format!("{:e}", c[i].im));
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_roundtrip() {
        let spec = GridSpec::new(2, 8, 3.5).unwrap();
        let f = GridField::from_fn(spec, 2, |x| vec![C64::new(x[0], x[1]), C64::new(-1.0, 0.25)]).unwrap();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"MPLB");
        assert_eq!(buf.len(), 4 + 16 + 8 + 2 * 64 * 16);
        assert_eq!(read_binary(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn bad_magic_is_rejected() {
        assert!(read_binary(&b"NOPE\x01\x00\x00\x00"[..]).is_err());
    }

    #[test]
    fn csv_slice_has_one_row_per_sample() {
        let spec = GridSpec::new(1, 8, 8.0).unwrap();
        let f = GridField::from_fn(spec, 1, |x| vec![C64::new(x[0], 0.0)]).unwrap();
        let mut buf = Vec::new();
        write_csv_slice(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "x,re_0,im_0");
        assert!(lines[1].starts_with("-4e0,-4e0,0e0"));
    }
}
