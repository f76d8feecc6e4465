//! Row export (JSON and CSV) and the on-disk row cache.
//!
//! A cached row lives in `row_N{n}_{scaled|exact}.json` and is accompanied by
//! a `.sha256` file holding the hex digest of the JSON bytes. A row whose
//! digest does not match, or which fails to parse, is recomputed and
//! rewritten.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{flat_distribution, scaled_row, sumtroid_bound, ScaledRow, SumtroidDistribution};
use crate::error::{Error, Result};

pub const CACHE_DIR_ENV: &str = "DISPERSION_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowValue {
    pub k: i64,
    /// An integer, or a rational written `p/q`.
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowExport {
    pub n: u32,
    pub scaled: bool,
    pub values: Vec<RowValue>,
}

impl RowExport {
    pub fn from_scaled(row: &ScaledRow) -> Self {
        RowExport {
            n: row.n,
            scaled: true,
            values: row
                .values
                .iter()
                .map(|(&k, v)| RowValue {
                    k,
                    v: v.to_string(),
                })
                .collect(),
        }
    }

    /// Every sumtroid in `[-(n-1)(n-2)/2, (n-1)(n-2)/2]`, zeros included.
    pub fn from_distribution(d: &SumtroidDistribution) -> Self {
        let b = sumtroid_bound(d.n.max(2));
        let lo = d.mass.keys().next().map_or(-b, |&k| k.min(-b));
        let hi = d.mass.keys().next_back().map_or(b, |&k| k.max(b));
        RowExport {
            n: d.n,
            scaled: false,
            values: (lo..=hi)
                .map(|k| RowValue {
                    k,
                    v: d.get(k).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_scaled(&self) -> Result<ScaledRow> {
        if !self.scaled {
            return Err(Error::Domain(
                "row holds probabilities, not scaled values".into(),
            ));
        }
        let mut values = std::collections::BTreeMap::new();
        for rv in &self.values {
            let v =
                rv.v.parse::<u64>()
                    .map_err(|_| Error::MalformedState(format!("bad scaled value {:?}", rv.v)))?;
            values.insert(rv.k, v);
        }
        Ok(ScaledRow { n: self.n, values })
    }

    pub fn to_distribution(&self) -> Result<SumtroidDistribution> {
        if self.scaled {
            return Ok(self.to_scaled()?.to_distribution());
        }
        let mut mass = std::collections::BTreeMap::new();
        for rv in &self.values {
            let p: BigRational =
                rv.v.parse()
                    .map_err(|_| Error::MalformedState(format!("bad rational {:?}", rv.v)))?;
            if !p.is_zero() {
                mass.insert(rv.k, p);
            }
        }
        Ok(SumtroidDistribution { n: self.n, mass })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("row export is always serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("K,value\n");
        for rv in &self.values {
            let _ = writeln!(out, "{},{}", rv.k, rv.v);
        }
        out
    }

    pub fn from_csv(n: u32, scaled: bool, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("K,value") {
            return Err(Error::MalformedState("CSV header must be K,value".into()));
        }
        let mut values = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once(',')
                .ok_or_else(|| Error::MalformedState(format!("bad CSV line {line:?}")))?;
            let k = k
                .trim()
                .parse()
                .map_err(|_| Error::MalformedState(format!("bad K in {line:?}")))?;
            values.push(RowValue {
                k,
                v: v.trim().to_string(),
            });
        }
        Ok(RowExport { n, scaled, values })
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A file was present but damaged; the row was recomputed.
    Repaired,
}

#[derive(Clone, Debug)]
pub struct RowCache {
    dir: PathBuf,
}

impl RowCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RowCache { dir: dir.into() }
    }

    /// The cache named by `DISPERSION_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(RowCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: u32, scaled: bool) -> PathBuf {
        let kind = if scaled { "scaled" } else { "exact" };
        self.dir.join(format!("row_N{n}_{kind}.json"))
    }

    fn digest_path(path: &Path) -> PathBuf {
        let mut p = path.as_os_str().to_owned();
        p.push(".sha256");
        PathBuf::from(p)
    }

    /// `Ok(None)` when absent; `CacheCorrupt` when present but unusable.
    pub fn load(&self, n: u32, scaled: bool) -> Result<Option<RowExport>> {
        let path = self.path(n, scaled);
        if !path.exists() {
            return Ok(None);
        }
        let bytes = fs::read(&path)?;
        let want = fs::read_to_string(Self::digest_path(&path)).unwrap_or_default();
        if want.trim() != sha256_hex(&bytes) {
            return Err(Error::CacheCorrupt(format!(
                "{} fails its checksum",
                path.display()
            )));
        }
        let row = std::str::from_utf8(&bytes)
            .ok()
            .and_then(|t| RowExport::from_json(t).ok())
            .ok_or_else(|| Error::CacheCorrupt(format!("{} does not parse", path.display())))?;
        if row.n != n || row.scaled != scaled {
            return Err(Error::CacheCorrupt(format!(
                "{} holds the row for n={}, scaled={}",
                path.display(),
                row.n,
                row.scaled
            )));
        }
        Ok(Some(row))
    }

    pub fn store(&self, row: &RowExport) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(row.n, row.scaled);
        let json = row.to_json();
        fs::write(&path, &json)?;
        fs::write(Self::digest_path(&path), sha256_hex(json.as_bytes()) + "\n")?;
        Ok(())
    }

    fn fetch(
        &self,
        n: u32,
        scaled: bool,
        compute: impl FnOnce() -> Result<RowExport>,
    ) -> Result<(RowExport, CacheStatus)> {
        let status = match self.load(n, scaled) {
            Ok(Some(row)) => return Ok((row, CacheStatus::Hit)),
            Ok(None) => CacheStatus::Miss,
            Err(Error::CacheCorrupt(_)) => CacheStatus::Repaired,
            Err(e) => return Err(e),
        };
        let row = compute()?;
        self.store(&row)?;
        Ok((row, status))
    }

    pub fn scaled_row(&self, n: u32) -> Result<(ScaledRow, CacheStatus)> {
        let (row, status) = self.fetch(n, true, || Ok(RowExport::from_scaled(&scaled_row(n)?)))?;
        Ok((row.to_scaled()?, status))
    }

    pub fn exact_row(&self, n: u32) -> Result<(SumtroidDistribution, CacheStatus)> {
        let (row, status) = self.fetch(n, false, || {
            Ok(RowExport::from_distribution(&flat_distribution(n)?))
        })?;
        Ok((row.to_distribution()?, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let row = scaled_row(3).unwrap();
        let json = RowExport::from_scaled(&row).to_json();
        assert_eq!(
            json,
            r#"{"n":3,"scaled":true,"values":[{"k":-1,"v":"1"},{"k":0,"v":"0"},{"k":1,"v":"1"}]}"#
        );
        let d = flat_distribution(4).unwrap();
        let e = RowExport::from_distribution(&d);
        assert_eq!(
            e.values[0],
            RowValue {
                k: -3,
                v: "1/6".into()
            }
        );
        assert_eq!(
            e.values[3],
            RowValue {
                k: 0,
                v: "1/3".into()
            }
        );
        assert_eq!(
            RowExport::from_json(&e.to_json())
                .unwrap()
                .to_distribution()
                .unwrap(),
            d
        );
    }

    #[test]
    fn csv_round_trip() {
        let e = RowExport::from_scaled(&scaled_row(5).unwrap());
        let csv = e.to_csv();
        assert!(csv.starts_with("K,value\n-6,1\n-5,0\n"));
        assert_eq!(RowExport::from_csv(5, true, &csv).unwrap(), e);
        assert!(RowExport::from_csv(5, true, "k;v\n").is_err());
    }

    #[test]
    fn cache_detects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RowCache::new(dir.path());
        let (a, s) = cache.scaled_row(5).unwrap();
        assert_eq!(s, CacheStatus::Miss);
        let (b, s) = cache.scaled_row(5).unwrap();
        assert_eq!((s, &b), (CacheStatus::Hit, &a));

        let path = cache.path(5, true);
        let text = fs::read_to_string(&path).unwrap().replace("\"4\"", "\"5\"");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load(5, true), Err(Error::CacheCorrupt(_))));
        let (c, s) = cache.scaled_row(5).unwrap();
        assert_eq!((s, &c), (CacheStatus::Repaired, &a));
        assert_eq!(cache.scaled_row(5).unwrap().1, CacheStatus::Hit);

        let (d, s) = cache.exact_row(4).unwrap();
        assert_eq!((s, d), (CacheStatus::Miss, flat_distribution(4).unwrap()));
    }
}
