//! Binary snapshot files.
//!
//! Layout, all little-endian: magic `SMAPFLD1`, `u32` dimension, one `u32`
//! size per axis, `f64` period, `f64` time, `u8` kind (0 complex, 1 sphere),
//! then the physical samples row-major with the last axis fastest — complex
//! as `(re, im)`, sphere values as three components.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, SmapError};
use crate::geometry::SphereField;
use crate::grid::GridSpec;
use crate::spectral::{ComplexField, Representation};

pub const MAGIC: &[u8; 8] = b"SMAPFLD1";

#[derive(Debug, Clone)]
pub enum SnapshotData {
    Complex(ComplexField),
    Sphere(SphereField),
}

impl SnapshotData {
    pub fn grid(&self) -> &GridSpec {
        match self {
            SnapshotData::Complex(u) => u.grid(),
            SnapshotData::Sphere(s) => s.grid(),
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            SnapshotData::Complex(u) => u.time(),
            SnapshotData::Sphere(s) => s.time(),
        }
    }
}

pub fn encode(data: &SnapshotData) -> Vec<u8> {
    let grid = data.grid();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for _ in 0..grid.dim() {
        out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    }
    out.extend_from_slice(&grid.period().to_le_bytes());
    out.extend_from_slice(&data.time().to_le_bytes());
    match data {
        SnapshotData::Complex(u) => {
            out.push(0);
            for v in u.to_physical().values() {
                out.extend_from_slice(&v.re.to_le_bytes());
                out.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        SnapshotData::Sphere(s) => {
            out.push(1);
            for v in s.values() {
                for c in v {
                    out.extend_from_slice(&c.to_le_bytes());
                }
            }
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(SmapError::Snapshot(format!(
                "truncated: wanted {n} bytes at offset {}, file has {}",
                self.pos,
                self.bytes.len()
            )));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode(bytes: &[u8]) -> Result<SnapshotData> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(8)? != MAGIC {
        return Err(SmapError::Snapshot("bad magic".into()));
    }
    let dim = c.u32()? as usize;
    if dim == 0 || dim > 16 {
        return Err(SmapError::Snapshot(format!("implausible dimension {dim}")));
    }
    let sizes: Vec<usize> = (0..dim).map(|_| c.u32().map(|v| v as usize)).collect::<Result<_>>()?;
    if sizes.iter().any(|s| *s != sizes[0]) {
        return Err(SmapError::Snapshot(format!("non-cubic grid {sizes:?} is not supported")));
    }
    let period = c.f64()?;
    let time = c.f64()?;
    let kind = c.take(1)?[0];
    let grid = GridSpec::new(dim, sizes[0], period).map_err(|e| SmapError::Snapshot(e.to_string()))?;
    let per_point = match kind {
        0 => 16,
        1 => 24,
        k => return Err(SmapError::Snapshot(format!("unknown kind byte {k}"))),
    };
    let expect = c.pos + grid.len() * per_point;
    if bytes.len() != expect {
        return Err(SmapError::Snapshot(format!(
            "payload length mismatch: header implies {expect} bytes, file has {}",
            bytes.len()
        )));
    }
    if kind == 0 {
        let values = (0..grid.len())
            .map(|_| Ok(Complex64::new(c.f64()?, c.f64()?)))
            .collect::<Result<_>>()?;
        Ok(SnapshotData::Complex(ComplexField::from_values(grid, time, Representation::Physical, values)?))
    } else {
        let values = (0..grid.len())
            .map(|_| Ok([c.f64()?, c.f64()?, c.f64()?]))
            .collect::<Result<_>>()?;
        Ok(SnapshotData::Sphere(SphereField::from_raw(grid, time, values)?))
    }
}

pub fn write_snapshot(path: &Path, data: &SnapshotData) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&encode(data))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotData> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::stereo_lift;

    fn field() -> ComplexField {
        let g = GridSpec::new(2, 8, 1.5).unwrap();
        ComplexField::from_fn(g, 0.375, |x| Complex64::new(x[0].sin(), x[1] * 0.1))
    }

    #[test]
    fn header_layout() {
        let bytes = encode(&SnapshotData::Complex(field()));
        assert_eq!(&bytes[..8], b"SMAPFLD1");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[20..28].try_into().unwrap()), 1.5);
        assert_eq!(f64::from_le_bytes(bytes[28..36].try_into().unwrap()), 0.375);
        assert_eq!(bytes[36], 0);
        assert_eq!(bytes.len(), 37 + 64 * 16);
        // first sample is (re, im) of the point with all indices zero
        let u = field();
        assert_eq!(f64::from_le_bytes(bytes[37..45].try_into().unwrap()), u.values()[0].re);
    }

    #[test]
    fn roundtrip_is_bit_identical() {
        let u = field();
        match decode(&encode(&SnapshotData::Complex(u.clone()))).unwrap() {
            SnapshotData::Complex(v) => {
                assert_eq!(v.values(), u.values());
                assert_eq!(v.time().to_bits(), u.time().to_bits());
                assert_eq!(v.grid(), u.grid());
            }
            _ => panic!("wrong kind"),
        }
        let s = stereo_lift(&u);
        match decode(&encode(&SnapshotData::Sphere(s.clone()))).unwrap() {
            SnapshotData::Sphere(t) => assert_eq!(t.values(), s.values()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn length_and_magic_are_checked() {
        let mut bytes = encode(&SnapshotData::Complex(field()));
        bytes.push(0);
        assert!(matches!(decode(&bytes), Err(SmapError::Snapshot(_))));
        bytes.truncate(bytes.len() - 2);
        assert!(matches!(decode(&bytes), Err(SmapError::Snapshot(_))));
        let mut bad = encode(&SnapshotData::Complex(field()));
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
    }
}
