//! Tables of zeta-zero ordinates.
//!
//! Text format: one decimal ordinate per line in ascending order. Lines starting
//! with `#` are comments; a comment of the form `# height_max = 75000` declares
//! the height up to which the table is complete. Without it, the last ordinate
//! is taken as the height.
//!
//! The binary cache stores the same data with a SHA-256 checksum so that large
//! tables reload without re-parsing.

use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gamma::rs_theta;

pub const ZEROS_PATH_VAR: &str = "ZETA_ZEROS_PATH";

const FIRST_ORDINATE: f64 = 14.134_725_141_734_693;
const FIRST_ORDINATE_TOLERANCE: f64 = 0.01;
const COUNT_TOLERANCE: f64 = 2.0;
/// Ordinates closer than this to `t` count as sitting at `t`.
pub const ORDINATE_EPS: f64 = 1e-9;

const CACHE_MAGIC: &[u8; 8] = b"AZZEROS\0";
const CACHE_VERSION: u32 = 1;

/// Smooth part of the zero-counting function, `theta(t)/pi + 1`.
pub fn smooth_count(t: f64) -> f64 {
    rs_theta(t) / std::f64::consts::PI + 1.0
}

#[derive(Clone, Debug)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    // prefix[k] = sum of the first k ordinates
    prefix: Vec<f64>,
    height_max: f64,
    source: String,
}

impl ZeroTable {
    /// Validates and wraps a list of ordinates.
    pub fn new(ordinates: Vec<f64>, height_max: Option<f64>, source: impl Into<String>) -> Result<Self> {
        let Some(&last) = ordinates.last() else {
            return Err(Error::EmptyTable);
        };
        for (i, pair) in ordinates.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(Error::Monotonicity {
                    line: i + 2,
                    previous: pair[0],
                    value: pair[1],
                });
            }
        }
        Self::validate(ordinates, height_max.unwrap_or(last), source.into())
    }

    fn validate(ordinates: Vec<f64>, height_max: f64, source: String) -> Result<Self> {
        let first = ordinates[0];
        if !first.is_finite() || (first - FIRST_ORDINATE).abs() > FIRST_ORDINATE_TOLERANCE {
            return Err(Error::Validation(format!(
                "first ordinate {first} is not the first zeta zero ({FIRST_ORDINATE:.4})"
            )));
        }
        let last = *ordinates.last().expect("non-empty");
        if !height_max.is_finite() || height_max < last {
            return Err(Error::Validation(format!(
                "declared height {height_max} is below the last ordinate {last}"
            )));
        }
        let expected = smooth_count(height_max);
        let count = ordinates.len() as f64;
        if (count - expected).abs() > COUNT_TOLERANCE + 0.5 {
            return Err(Error::Validation(format!(
                "{count} ordinates up to {height_max}, but about {expected:.1} zeros lie below that height"
            )));
        }
        let mut prefix = Vec::with_capacity(ordinates.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for &g in &ordinates {
            acc += g;
            prefix.push(acc);
        }
        Ok(ZeroTable {
            ordinates,
            prefix,
            height_max,
            source,
        })
    }

    /// Parses the text format.
    pub fn parse<R: BufRead>(reader: R, source: impl Into<String>) -> Result<Self> {
        let source = source.into();
        let mut ordinates = Vec::new();
        let mut height_max = None;
        let mut previous: Option<(usize, f64)> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::io(&source, e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    if key.trim() == "height_max" {
                        let h = value.trim().parse::<f64>().map_err(|e| Error::Parse {
                            line: lineno,
                            message: format!("bad height_max: {e}"),
                        })?;
                        height_max = Some(h);
                    }
                }
                continue;
            }
            let value = line.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("{line:?} is not a number: {e}"),
            })?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("ordinate {value} is not a positive number"),
                });
            }
            if let Some((_, prev)) = previous {
                if !(value > prev) {
                    return Err(Error::Monotonicity {
                        line: lineno,
                        previous: prev,
                        value,
                    });
                }
            }
            previous = Some((lineno, value));
            ordinates.push(value);
        }
        let Some(&last) = ordinates.last() else {
            return Err(Error::EmptyTable);
        };
        Self::validate(ordinates, height_max.unwrap_or(last), source)
    }

    pub fn parse_str(text: &str, source: impl Into<String>) -> Result<Self> {
        Self::parse(text.as_bytes(), source)
    }

    /// Loads a text table or a binary cache, recognised by its magic bytes.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut magic = [0u8; 8];
        let n = file.read(&mut magic).map_err(|e| Error::io(path, e))?;
        drop(file);
        if n == magic.len() && &magic == CACHE_MAGIC {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            return Self::from_cache_bytes(&bytes);
        }
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(BufReader::new(file), path.display().to_string())
    }

    /// Loads from `path`, falling back to `$ZETA_ZEROS_PATH`.
    pub fn load_default(path: Option<&Path>) -> Result<Self> {
        Self::load(resolve_path(path)?)
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn height_max(&self) -> f64 {
        self.height_max
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Sum of the first `k` ordinates.
    pub fn prefix_sum(&self, k: usize) -> f64 {
        self.prefix[k]
    }

    /// Number of ordinates strictly below `t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g < t)
    }

    pub fn check_height(&self, t: f64) -> Result<()> {
        if t > self.height_max {
            Err(Error::Coverage {
                requested: t,
                available: self.height_max,
            })
        } else {
            Ok(())
        }
    }

    /// Ordinates with `|gamma - center| <= radius`.
    pub fn window(&self, center: f64, radius: f64) -> Result<&[f64]> {
        if !(radius >= 0.0) {
            return Err(Error::Parameter(format!(
                "window radius must be non-negative, got {radius}"
            )));
        }
        self.check_height(center + radius)?;
        let lo = self.ordinates.partition_point(|&g| g < center - radius);
        let hi = self.ordinates.partition_point(|&g| g <= center + radius);
        Ok(&self.ordinates[lo..hi])
    }

    /// Index of an ordinate within [`ORDINATE_EPS`] of `t`, if any.
    pub fn ordinate_near(&self, t: f64) -> Option<usize> {
        let i = self.ordinates.partition_point(|&g| g < t - ORDINATE_EPS);
        (i < self.ordinates.len() && (self.ordinates[i] - t).abs() <= ORDINATE_EPS).then_some(i)
    }

    /// Serialises the table into the binary cache format.
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut payload = Vec::with_capacity(8 * self.ordinates.len());
        for g in &self.ordinates {
            payload.extend_from_slice(&g.to_le_bytes());
        }
        let digest = Sha256::digest(&payload);
        let source = self.source.as_bytes();
        let mut out = Vec::with_capacity(payload.len() + 64 + source.len());
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.ordinates.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.height_max.to_le_bytes());
        out.extend_from_slice(&(source.len() as u32).to_le_bytes());
        out.extend_from_slice(source);
        out.extend_from_slice(&digest);
        out.extend_from_slice(&payload);
        out
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(8)? != CACHE_MAGIC {
            return Err(Error::Cache("bad magic bytes".into()));
        }
        let version = u32::from_le_bytes(cur.take(4)?.try_into().expect("4 bytes"));
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let count = u64::from_le_bytes(cur.take(8)?.try_into().expect("8 bytes")) as usize;
        let height_max = f64::from_le_bytes(cur.take(8)?.try_into().expect("8 bytes"));
        let source_len = u32::from_le_bytes(cur.take(4)?.try_into().expect("4 bytes")) as usize;
        let source = String::from_utf8(cur.take(source_len)?.to_vec())
            .map_err(|_| Error::Cache("source label is not UTF-8".into()))?;
        let digest = cur.take(32)?.to_vec();
        let payload = cur.take(
            count
                .checked_mul(8)
                .ok_or_else(|| Error::Cache("count overflow".into()))?,
        )?;
        if cur.pos != bytes.len() {
            return Err(Error::Cache("trailing bytes after payload".into()));
        }
        if Sha256::digest(payload).as_slice() != digest.as_slice() {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let ordinates: Vec<f64> = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        if ordinates.is_empty() {
            return Err(Error::EmptyTable);
        }
        Self::new(ordinates, Some(height_max), source)
    }

    pub fn write_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_cache_bytes()).map_err(|e| Error::io(path, e))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(Error::Cache("file is truncated".into()));
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
}

/// An explicit path wins over `$ZETA_ZEROS_PATH`.
pub fn resolve_path(path: Option<&Path>) -> Result<PathBuf> {
    if let Some(p) = path {
        return Ok(p.to_path_buf());
    }
    match std::env::var_os(ZEROS_PATH_VAR) {
        Some(p) if !p.is_empty() => Ok(PathBuf::from(p)),
        _ => Err(Error::NoZeroTable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIRST_TEN: [f64; 10] = [
        14.134725141734693,
        21.022039638771555,
        25.010857580145688,
        30.424876125859513,
        32.935061587739189,
        37.586178158825671,
        40.918719012147495,
        43.327073280914999,
        48.005150881167159,
        49.773832477672302,
    ];

    fn text(lines: &[&str]) -> String {
        lines.join("\n")
    }

    #[test]
    fn parses_with_comments_and_height() {
        let mut src = vec!["# first zeros", "# height_max = 50"];
        let owned: Vec<String> = FIRST_TEN.iter().map(|g| format!("{g}")).collect();
        src.extend(owned.iter().map(String::as_str));
        src.push("");
        let t = ZeroTable::parse_str(&text(&src), "inline").unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t.height_max(), 50.0);
        assert!((t.ordinates()[0] - 14.1347).abs() < 1e-4);
        assert_eq!(t.source(), "inline");
        assert!((t.prefix_sum(2) - (FIRST_TEN[0] + FIRST_TEN[1])).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ZeroTable::parse_str("", "e"), Err(Error::EmptyTable)));
        assert!(matches!(
            ZeroTable::parse_str("# only comments\n", "e"),
            Err(Error::EmptyTable)
        ));
        match ZeroTable::parse_str("14.134725\n25.01\n21.02\n", "e") {
            Err(Error::Monotonicity { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match ZeroTable::parse_str("14.134725\n14.134725\n", "e") {
            Err(Error::Monotonicity { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match ZeroTable::parse_str("# c\n14.134725\nabc\n", "e") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(ZeroTable::parse_str("15.0\n", "e"), Err(Error::Validation(_))));
        // missing zeros show up in the count gate
        let sparse: Vec<String> = FIRST_TEN.iter().step_by(3).map(|g| g.to_string()).collect();
        let body = format!("# height_max = 50\n{}", sparse.join("\n"));
        assert!(matches!(ZeroTable::parse_str(&body, "e"), Err(Error::Validation(_))));
    }

    #[test]
    fn window_queries() {
        let t = ZeroTable::new(FIRST_TEN.to_vec(), Some(50.0), "t").unwrap();
        assert_eq!(t.window(14.13, 0.1).unwrap().len(), 1);
        assert!(t.window(16.0, 0.0).unwrap().is_empty());
        assert_eq!(t.window(30.0, 10.0).unwrap().len(), 5);
        assert!(matches!(t.window(45.0, 10.0), Err(Error::Coverage { .. })));
        assert_eq!(t.count_below(20.0), 1);
        assert_eq!(t.ordinate_near(FIRST_TEN[3] + 1e-10), Some(3));
        assert_eq!(t.ordinate_near(31.0), None);
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let t = ZeroTable::new(FIRST_TEN.to_vec(), Some(50.0), "ten").unwrap();
        let bytes = t.to_cache_bytes();
        let back = ZeroTable::from_cache_bytes(&bytes).unwrap();
        assert_eq!(back.ordinates(), t.ordinates());
        assert_eq!(back.height_max(), 50.0);
        assert_eq!(back.source(), "ten");

        let mut flipped = bytes.clone();
        let last = flipped.len() - 1;
        flipped[last] ^= 1;
        assert!(matches!(ZeroTable::from_cache_bytes(&flipped), Err(Error::Cache(_))));
        assert!(matches!(
            ZeroTable::from_cache_bytes(&bytes[..bytes.len() - 3]),
            Err(Error::Cache(_))
        ));
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert!(matches!(ZeroTable::from_cache_bytes(&magic), Err(Error::Cache(_))));
    }

    #[test]
    fn smooth_count_tracks_table() {
        assert!((smooth_count(50.0) - 10.0).abs() < 1.0);
        assert!((smooth_count(FIRST_TEN[0]) - 0.5).abs() < 0.2);
    }
}
