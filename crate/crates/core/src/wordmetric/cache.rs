//! Binary persistence of enumerated balls, keyed by a content hash.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use indexmap::IndexMap;
use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::ball::{BallRecord, Node};
use super::genset::GenSet;
use crate::error::{Error, Result};
use crate::group::GroupElement;

const MAGIC: &[u8; 8] = b"NRBALL1\n";
const NO_PARENT: u16 = u16::MAX;

/// Hash of (group, letter set, radius).
pub fn cache_key(group: &str, letters: &GenSet, radius: usize) -> String {
    let mut h = Sha256::new();
    h.update(group.as_bytes());
    h.update([0]);
    h.update(letters.fingerprint().as_bytes());
    h.update([0]);
    h.update((radius as u64).to_le_bytes());
    hex::encode(h.finalize())
}

fn corrupt(msg: &str) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, msg.to_string()))
}

pub fn save_ball(path: &Path, key: &str, ball: &BallRecord) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(key.len() as u32).to_le_bytes())?;
    w.write_all(key.as_bytes())?;
    w.write_all(&(ball.radius() as u32).to_le_bytes())?;
    w.write_all(&(ball.len() as u64).to_le_bytes())?;
    for c in ball.counts() {
        w.write_all(&(*c as u64).to_le_bytes())?;
    }
    for (g, node) in ball.iter() {
        for x in g.entries() {
            let bytes = x.to_signed_bytes_le();
            w.write_all(&[bytes.len() as u8])?;
            w.write_all(&bytes)?;
        }
        w.write_all(&node.dist.to_le_bytes())?;
        let (k, p) = node.parent.unwrap_or((NO_PARENT, 0));
        w.write_all(&k.to_le_bytes())?;
        w.write_all(&p.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

/// Load a ball saved under `key`; the letter set must be the one used to build it.
pub fn load_ball(path: &Path, key: &str, letters: &GenSet) -> Result<BallRecord> {
    let mut r = BufReader::new(File::open(path)?);
    if &read_array::<8>(&mut r)? != MAGIC {
        return Err(corrupt("not a ball cache file"));
    }
    let klen = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let mut kbuf = vec![0u8; klen];
    r.read_exact(&mut kbuf)?;
    if kbuf != key.as_bytes() {
        return Err(corrupt("cache key mismatch"));
    }
    let radius = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let len = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let mut counts = Vec::with_capacity(radius + 1);
    for _ in 0..=radius {
        counts.push(u64::from_le_bytes(read_array(&mut r)?) as usize);
    }
    let dims = letters.elem(0).dims();
    let n_entries: usize = dims.iter().map(|d| d * d.saturating_sub(1) / 2).sum();
    let mut store = IndexMap::with_capacity(len);
    for _ in 0..len {
        let mut entries = Vec::with_capacity(n_entries);
        for _ in 0..n_entries {
            let [l] = read_array::<1>(&mut r)?;
            let mut b = vec![0u8; l as usize];
            r.read_exact(&mut b)?;
            entries.push(BigInt::from_signed_bytes_le(&b));
        }
        let g = GroupElement::from_entries(&dims, entries)?;
        let dist = u32::from_le_bytes(read_array(&mut r)?);
        let k = u16::from_le_bytes(read_array(&mut r)?);
        let p = u32::from_le_bytes(read_array(&mut r)?);
        let parent = (k != NO_PARENT).then_some((k, p));
        store.insert(g, Node { dist, parent });
    }
    if counts.last() != Some(&store.len()) {
        return Err(corrupt("count table disagrees with store"));
    }
    Ok(BallRecord::from_parts(letters.clone(), radius, store, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wordmetric::ball;

    #[test]
    fn round_trip() {
        let g = catalog::builtin().group("N4").unwrap();
        let letters = GenSet::from_spec(g).unwrap();
        let b = ball(&letters, 4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.bin");
        let key = cache_key("N4", &letters, 4);
        save_ball(&path, &key, &b).unwrap();
        let back = load_ball(&path, &key, &letters).unwrap();
        assert_eq!(back.counts(), b.counts());
        assert!(back.iter().zip(b.iter()).all(|(x, y)| x == y));
        assert!(load_ball(&path, "other", &letters).is_err());
    }
}
