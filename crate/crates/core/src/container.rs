//! Binary index file: magic, version, parameters, sections, checksum.
//!
//! ```text
//! "SKYC" | u32 version | u64 n | u64 delta | u64 fan | u64 memo | u64 flags
//!        | section points | section tree | section ball | u32 crc32
//! ```
//!
//! Integers are little-endian and sections are prefixed by their byte
//! length. The checksum covers every preceding byte.

use crate::index::SkylineIndex;
use crate::persist::{Persist, Reader, Writer};
use crate::point::PointSet;
use crate::report::BallInheritance;
use crate::tree::BaseTree;
use crate::{Error, Result};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"SKYC";
pub const FORMAT_VERSION: u32 = 1;

const FLAG_RAW_KEYS: u64 = 1;

impl Persist for PointSet {
    fn write(&self, w: &mut Writer) {
        let ys: Vec<u64> = self.y_of_x().iter().map(|&y| y as u64).collect();
        w.put_words(&ys);
        match self.raw_keys() {
            None => w.put_u8(0),
            Some((xk, yk)) => {
                w.put_u8(1);
                for keys in [xk, yk] {
                    for &(a, b) in keys {
                        w.put_i64(a);
                        w.put_i64(b);
                    }
                }
            }
        }
    }

    fn read(r: &mut Reader) -> Result<Self> {
        let ys: Vec<usize> = r.get_words()?.into_iter().map(|y| y as usize).collect();
        let n = ys.len();
        match r.get_u8()? {
            0 => PointSet::from_permutation(ys),
            1 => {
                if r.remaining() < n * 32 {
                    return Err(r.corrupt("coordinate keys"));
                }
                let keys = |r: &mut Reader| -> Result<Vec<(i64, i64)>> {
                    (0..n).map(|_| Ok((r.get_i64()?, r.get_i64()?))).collect()
                };
                let xk = keys(r)?;
                let yk = keys(r)?;
                PointSet::with_raw_keys(ys, xk, yk)
            }
            _ => Err(r.corrupt("point set tag")),
        }
    }
}

impl SkylineIndex {
    /// Serializes the index. Equal indexes give equal bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_bytes(MAGIC);
        w.put_u32(FORMAT_VERSION);
        w.put_u64(self.len() as u64);
        w.put_u64(self.tree.delta() as u64);
        w.put_u64(self.ball.fan() as u64);
        w.put_u64(self.tree.memo_capacity() as u64);
        w.put_u64(if self.points.has_raw() {
            FLAG_RAW_KEYS
        } else {
            0
        });
        w.put_section(&self.points);
        w.put_section(&self.tree);
        w.put_section(&self.ball);
        let crc = crc32fast::hash(w.as_bytes());
        let mut bytes = w.into_bytes();
        bytes.extend_from_slice(&crc.to_le_bytes());
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(Error::Format("not an index file (bad magic)".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let (body, tail) = bytes.split_at(bytes.len().saturating_sub(4).max(8));
        if tail.len() != 4 {
            return Err(Error::Format("truncated index file".into()));
        }
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        if crc32fast::hash(body) != stored {
            return Err(Error::Format("checksum mismatch".into()));
        }
        let mut r = Reader::new(&body[8..]);
        let n = r.get_u64()? as usize;
        let delta = r.get_u64()? as usize;
        let fan = r.get_u64()? as usize;
        let memo = r.get_u64()? as usize;
        let flags = r.get_u64()?;
        let points: PointSet = r.get_section()?;
        let mut tree: BaseTree = r.get_section()?;
        let ball: BallInheritance = r.get_section()?;
        if r.remaining() != 0 {
            return Err(r.corrupt("trailing bytes"));
        }
        if points.len() != n
            || tree.delta() != delta
            || ball.fan() != fan
            || points.has_raw() != (flags & FLAG_RAW_KEYS != 0)
        {
            return Err(Error::Format(
                "parameter block disagrees with sections".into(),
            ));
        }
        tree.set_memo_capacity(memo);
        SkylineIndex::from_parts(points, tree, ball)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}
