//! Series serialization: JSON, CSV coefficient tables and the on-disk binary cache.
//!
//! JSON: `{"grid": D, "truncation": "p/q", "terms": [["n", "a/b"], …]}` with `n`
//! the grid numerator (exponent `n/D`); exact series use `"truncation": "inf"`.
//!
//! Cache files: magic `QSC1`, little-endian `u16` version, `u32` payload length,
//! payload, then the SHA-256 digest of the payload.

use crate::arith::{parse_rational, rational_to_string};
use crate::error::{Error, Result};
use crate::series::QSeries;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub grid: u64,
    pub truncation: String,
    pub terms: Vec<(String, String)>,
}

pub fn to_json(s: &QSeries) -> SeriesJson {
    SeriesJson {
        grid: s.grid(),
        truncation: s.trunc().as_ref().map_or_else(|| "inf".to_string(), rational_to_string),
        terms: s.grid_terms().map(|(n, c)| (n.to_string(), rational_to_string(c))).collect(),
    }
}

pub fn from_json(j: &SeriesJson) -> Result<QSeries> {
    if j.grid == 0 {
        return Err(Error::Invalid("grid must be positive".into()));
    }
    let trunc = if j.truncation == "inf" { None } else { Some(parse_rational(&j.truncation).map_err(Error::Invalid)?) };
    let mut pairs = Vec::with_capacity(j.terms.len());
    for (n, c) in &j.terms {
        let n: i64 = n.parse().map_err(|_| Error::Invalid(format!("bad grid numerator {n:?}")))?;
        pairs.push((n, parse_rational(c).map_err(Error::Invalid)?));
    }
    Ok(QSeries::from_grid_terms(j.grid, pairs, trunc))
}

pub fn to_json_string(s: &QSeries) -> String {
    serde_json::to_string(&to_json(s)).expect("series json")
}

pub fn from_json_str(text: &str) -> Result<QSeries> {
    let j: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("json: {e}")))?;
    from_json(&j)
}

pub const CSV_HEADER: &str = "exponent_num,exponent_den,coeff_num,coeff_den";

/// One row per nonzero coefficient, exponents reduced.
pub fn to_csv(s: &QSeries) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (e, c) in s.terms() {
        out.push_str(&format!("{},{},{},{}\n", e.numer(), e.denom(), c.numer(), c.denom()));
    }
    out
}

/// Parses a CSV table back into an exact series.
pub fn from_csv(text: &str) -> Result<QSeries> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Invalid(format!("csv header must be {CSV_HEADER:?}")));
    }
    let mut pairs = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::Invalid(format!("csv row needs 4 fields: {line:?}")));
        }
        let int = |s: &str| s.parse::<Integer>().map_err(|_| Error::Invalid(format!("bad integer {s:?}")));
        let (en, ed, cn, cd) = (int(f[0])?, int(f[1])?, int(f[2])?, int(f[3])?);
        if ed == 0 || cd == 0 {
            return Err(Error::Invalid(format!("zero denominator in {line:?}")));
        }
        pairs.push((Rational::from((en, ed)), Rational::from((cn, cd))));
    }
    Ok(QSeries::from_terms(pairs, None))
}

pub const CACHE_MAGIC: &[u8; 4] = b"QSC1";
pub const CACHE_VERSION: u16 = 1;

fn put_bytes(out: &mut Vec<u8>, b: &[u8]) {
    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
    out.extend_from_slice(b);
}

fn payload(s: &QSeries) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&s.grid().to_le_bytes());
    match s.trunc() {
        None => out.push(0),
        Some(t) => {
            out.push(1);
            put_bytes(&mut out, rational_to_string(t).as_bytes());
        }
    }
    out.extend_from_slice(&(s.len() as u64).to_le_bytes());
    for (n, c) in s.grid_terms() {
        out.extend_from_slice(&n.to_le_bytes());
        put_bytes(&mut out, rational_to_string(c).as_bytes());
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Io("truncated cache payload".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize;
        let s = std::str::from_utf8(self.take(n)?).map_err(|_| Error::Io("bad utf-8 in cache".into()))?;
        parse_rational(s).map_err(Error::Io)
    }
}

fn parse_payload(buf: &[u8]) -> Result<QSeries> {
    let mut r = Reader { buf, pos: 0 };
    let grid = r.u64()?;
    if grid == 0 {
        return Err(Error::Io("zero grid in cache".into()));
    }
    let trunc = match r.take(1)?[0] {
        0 => None,
        1 => Some(r.rational()?),
        x => return Err(Error::Io(format!("bad truncation tag {x}"))),
    };
    let count = r.u64()?;
    let mut pairs = Vec::new();
    for _ in 0..count {
        let n = r.u64()? as i64;
        pairs.push((n, r.rational()?));
    }
    Ok(QSeries::from_grid_terms(grid, pairs, trunc))
}

/// Serialized cache record for a series.
pub fn encode(s: &QSeries) -> Vec<u8> {
    let body = payload(s);
    let mut out = Vec::with_capacity(body.len() + 42);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&(body.len() as u32).to_le_bytes());
    out.extend_from_slice(&body);
    out.extend_from_slice(&Sha256::digest(&body));
    out
}

pub fn decode(bytes: &[u8]) -> Result<QSeries> {
    if bytes.len() < 10 || &bytes[0..4] != CACHE_MAGIC {
        return Err(Error::Io("not a series cache file".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != CACHE_VERSION {
        return Err(Error::VersionMismatch { found: version, expected: CACHE_VERSION });
    }
    let len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    if bytes.len() != 10 + len + 32 {
        return Err(Error::Checksum);
    }
    let body = &bytes[10..10 + len];
    if Sha256::digest(body).as_slice() != &bytes[10 + len..] {
        return Err(Error::Checksum);
    }
    parse_payload(body)
}

/// Directory of cached series keyed by a descriptive name.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

pub const CACHE_ENV: &str = "QFORMS_CACHE";

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$QFORMS_CACHE` if set, else `fallback`.
    pub fn from_env(fallback: impl Into<PathBuf>) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::new(d),
            _ => Cache::new(fallback),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let name: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
        let tag = hex(&Sha256::digest(key.as_bytes())[..6]);
        self.dir.join(format!("{name}-{tag}.qsc"))
    }

    pub fn store(&self, key: &str, s: &QSeries) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::Io(e.to_string()))?;
        let path = self.path_for(key);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, encode(s)).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::Io(e.to_string()))
    }

    /// `Ok(None)` when absent; corrupted or foreign-version files are errors.
    pub fn load(&self, key: &str) -> Result<Option<QSeries>> {
        match std::fs::read(self.path_for(key)) {
            Ok(b) => decode(&b).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Io(e.to_string())),
        }
    }

    /// Cached value or a freshly computed and stored one; the flag reports a hit.
    pub fn get_or_compute<F>(&self, key: &str, f: F) -> Result<(QSeries, bool)>
    where
        F: FnOnce() -> Result<QSeries>,
    {
        if let Some(s) = self.load(key)? {
            return Ok((s, true));
        }
        let s = f()?;
        self.store(key, &s)?;
        Ok((s, false))
    }
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::eta;
    use crate::q;

    #[test]
    fn json_and_binary_round_trip() {
        let s = eta(&Rational::from(50));
        assert!(from_json_str(&to_json_string(&s)).unwrap().identical(&s));
        assert!(decode(&encode(&s)).unwrap().identical(&s));
        let exact = QSeries::from_terms(vec![(q(-1, 3), q(2, 7)), (q(5, 2), q(-1, 1))], None);
        let j = to_json(&exact);
        assert_eq!(j.truncation, "inf");
        assert!(from_json(&j).unwrap().identical(&exact));
        assert!(from_csv(&to_csv(&exact)).unwrap().identical(&exact));
    }

    #[test]
    fn corruption_and_version_are_detected() {
        let mut b = encode(&eta(&Rational::from(10)));
        let last = b.len() - 40;
        b[last] ^= 1;
        assert_eq!(decode(&b), Err(Error::Checksum));
        let mut b = encode(&eta(&Rational::from(10)));
        b[4] = 9;
        assert_eq!(decode(&b), Err(Error::VersionMismatch { found: 9, expected: CACHE_VERSION }));
    }

    #[test]
    fn cache_hits_after_store() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let (a, hit) = c.get_or_compute("eta 30", || Ok(eta(&Rational::from(30)))).unwrap();
        assert!(!hit);
        let (b, hit) = c.get_or_compute("eta 30", || panic!("should hit")).unwrap();
        assert!(hit);
        assert!(a.identical(&b));
    }
}
