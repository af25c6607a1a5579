//! Binary snapshots of a final state.
//!
//! Layout, all little-endian: the 8-byte magic `ARTCSNP1`, `dim: u32`,
//! cells per axis `[u32; 3]`, `t: f64`, then the owned values of `u₁ … u_d`
//! and of `p` as `f64`, each in row-major order over `(x, y, z)` indices
//! with the last index fastest.

use super::HarnessError;
use crate::mac::{ScalarField, VelocityField};
use std::path::Path;

const MAGIC: &[u8; 8] = b"ARTCSNP1";

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub cells: [usize; 3],
    pub t: f64,
    /// Owned values of each velocity component.
    pub velocity: Vec<Vec<f64>>,
    /// Owned values of the pressure.
    pub pressure: Vec<f64>,
}

impl Snapshot {
    pub fn from_fields(u: &VelocityField, p: &ScalarField, t: f64) -> Self {
        let grid = u.grid();
        Self {
            dim: grid.dim(),
            cells: grid.cells(),
            t,
            velocity: u.comps().iter().map(|c| c.owned_values()).collect(),
            pressure: p.owned_values(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&(self.dim as u32).to_le_bytes());
        for c in self.cells {
            b.extend_from_slice(&(c as u32).to_le_bytes());
        }
        b.extend_from_slice(&self.t.to_le_bytes());
        for v in self.velocity.iter().chain(std::iter::once(&self.pressure)) {
            for x in v {
                b.extend_from_slice(&x.to_le_bytes());
            }
        }
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, String> {
        let mut pos = 0;
        let mut take = |n: usize| -> Result<&[u8], String> {
            let s = bytes.get(pos..pos + n).ok_or("truncated snapshot")?;
            pos += n;
            Ok(s)
        };
        if take(8)? != MAGIC {
            return Err("not a snapshot file".into());
        }
        let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().expect("4 bytes")) as usize;
        let dim = u32_at(take(4)?);
        if dim != 2 && dim != 3 {
            return Err(format!("bad dimension {dim}"));
        }
        let mut cells = [0; 3];
        for c in cells.iter_mut() {
            *c = u32_at(take(4)?);
        }
        let t = f64::from_le_bytes(take(8)?.try_into().expect("8 bytes"));
        let mut read = |count: usize| -> Result<Vec<f64>, String> {
            let s = take(8 * count)?;
            Ok(s.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
        };
        let mut velocity = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut d = cells;
            d[k] += 1;
            velocity.push(read(d.iter().product())?);
        }
        let pressure = read(cells.iter().product())?;
        if pos != bytes.len() {
            return Err("trailing bytes after snapshot".into());
        }
        Ok(Self { dim, cells, t, velocity, pressure })
    }
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<(), HarnessError> {
    std::fs::write(path, snap.to_bytes()).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, HarnessError> {
    let bytes = std::fs::read(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    Snapshot::from_bytes(&bytes).map_err(|m| {
        HarnessError::Io { path: path.to_path_buf(), source: std::io::Error::new(std::io::ErrorKind::InvalidData, m) }
    })
}
