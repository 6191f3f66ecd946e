//! On-disk cache of `B` blocks, one canonical text file per degree.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::block::Shapovalov;
use super::tensor::BBlock;
use crate::arith::{fmt_q, ScalarQt};
use crate::enveloping::{LeviSplit, Monomial};
use crate::error::{Error, Result};
use crate::rootsys::DegreeVector;

const HEADER: &str = "orbitquant-block v1";

#[derive(Clone, Debug)]
pub struct BlockCache {
    dir: PathBuf,
}

/// Hash of the normalized structure constants and the PBW ordering.
pub fn normalization_fingerprint(split: &LeviSplit) -> String {
    let alg = split.algebra();
    let mut s = String::new();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            for (k, c) in alg.bracket(a, b) {
                write!(s, "{a},{b},{k},{};", fmt_q(c)).unwrap();
            }
        }
    }
    write!(s, "order={:?}", split.pbw_order()).unwrap();
    hex(&Sha256::digest(s.as_bytes()))[..16].to_string()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn key_line(split: &LeviSplit, mu: &DegreeVector) -> String {
    let lam: Vec<String> = split.lambda_values().iter().map(fmt_q).collect();
    format!(
        "key {} lambda={} degree={} fp={}",
        split.algebra().root_system().name(),
        lam.join(","),
        mu,
        normalization_fingerprint(split)
    )
}

fn letters(m: &[u8]) -> String {
    m.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical serialization of one block under its cache key.
pub fn serialize_block(split: &LeviSplit, blk: &BBlock) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "{}", key_line(split, &blk.degree)).unwrap();
    writeln!(s, "size {}", blk.rows.len()).unwrap();
    for x in &blk.rows {
        writeln!(s, "x {}", letters(x)).unwrap();
    }
    for y in &blk.cols {
        writeln!(s, "y {}", letters(y)).unwrap();
    }
    for (name, m) in [("p", &blk.pairing), ("c", &blk.coeffs)] {
        for (i, row) in m.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                writeln!(s, "{name} {i} {j} {}", e.to_list()).unwrap();
            }
        }
    }
    s
}

fn parse_block(text: &str, expect_key: &str, degree: &DegreeVector) -> Result<BBlock> {
    let bad = |why: &str| Error::Parse(format!("cache file: {why}"));
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(bad("missing header"));
    }
    if lines.next() != Some(expect_key) {
        return Err(bad("key mismatch"));
    }
    let n: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("size "))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad("missing size"))?;
    let mut mono = |tag: &str| -> Result<Monomial> {
        let l = lines.next().ok_or_else(|| bad("truncated"))?;
        let body = l.strip_prefix(tag).ok_or_else(|| bad("bad monomial line"))?.trim();
        if body.is_empty() {
            return Ok(Vec::new());
        }
        body.split(' ').map(|v| v.parse::<u8>().map_err(|_| bad("bad letter"))).collect()
    };
    let rows = (0..n).map(|_| mono("x")).collect::<Result<Vec<_>>>()?;
    let cols = (0..n).map(|_| mono("y")).collect::<Result<Vec<_>>>()?;
    let mut mats = [vec![vec![ScalarQt::zero(); n]; n], vec![vec![ScalarQt::zero(); n]; n]];
    for (idx, name) in ["p", "c"].iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let l = lines.next().ok_or_else(|| bad("truncated"))?;
                let prefix = format!("{name} {i} {j} ");
                let body = l.strip_prefix(&prefix).ok_or_else(|| bad("bad entry line"))?;
                mats[idx][i][j] = ScalarQt::parse_list(body)?;
            }
        }
    }
    let [pairing, coeffs] = mats;
    Ok(BBlock { degree: degree.clone(), rows, cols, pairing, coeffs })
}

impl BlockCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(BlockCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Content-addressed file name for a block.
    pub fn path_for(&self, split: &LeviSplit, mu: &DegreeVector) -> PathBuf {
        let name = hex(&Sha256::digest(key_line(split, mu).as_bytes()));
        self.dir.join(format!("{}.blk", &name[..32]))
    }

    pub fn load(&self, split: &LeviSplit, mu: &DegreeVector) -> Result<Option<BBlock>> {
        let path = self.path_for(split, mu);
        match fs::read_to_string(&path) {
            Ok(text) => parse_block(&text, &key_line(split, mu), mu).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file and a rename, so concurrent writers
    /// of the same (deterministic) content never expose a partial file.
    pub fn store(&self, split: &LeviSplit, blk: &BBlock) -> Result<()> {
        let path = self.path_for(split, &blk.degree);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serialize_block(split, blk))?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute(&self, shap: &Shapovalov, mu: &DegreeVector) -> Result<BBlock> {
        if let Some(hit) = self.load(shap.split(), mu)? {
            return Ok(hit);
        }
        let blk = shap.b_block(mu)?;
        self.store(shap.split(), &blk)?;
        Ok(blk)
    }
}
