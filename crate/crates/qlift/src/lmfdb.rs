//! Offline-first access to newform q-expansion coefficients.
//!
//! Three labels ship as bundled fixtures so every comparison the test suite
//! makes runs without network access. Anything else can be fetched over HTTP
//! from the configured database host (opt-in), and every network result is
//! persisted to a local cache in the same textual format as the fixtures.
//!
//! Cache format, one file per label: a header line
//! `label weight level count`, then one coefficient per line, either a single
//! exact integer (rational entries are reduced `p/q`) or an `a b d` triple
//! meaning `a + b·√d`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use crate::qseries::{FieldElem, Rational, Series24};
use crate::verify::{CheckReport, CheckStatus};
use crate::{Error, Result};

/// Labels whose coefficient files are compiled into the binary.
pub const BUNDLED_LABELS: [&str; 3] = ["1.12.a.a", "6.12.a.a", "2.20.a.a"];

fn bundled(label: &str) -> Option<&'static str> {
    match label {
        "1.12.a.a" => Some(include_str!("../fixtures/lmfdb/1.12.a.a.txt")),
        "6.12.a.a" => Some(include_str!("../fixtures/lmfdb/6.12.a.a.txt")),
        "2.20.a.a" => Some(include_str!("../fixtures/lmfdb/2.20.a.a.txt")),
        _ => None,
    }
}

/// Where a record's data came from. Disk-cache hits count as `Fixture`: the
/// bytes were served locally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Fixture,
    Network,
}

/// Exact q-expansion prefix of a newform.
#[derive(Debug, Clone)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u64,
    /// `a(1), a(2), …` — exact; quadratic entries carry their discriminant.
    coeffs: Vec<FieldElem>,
    pub source: Source,
    /// Unix seconds at network fetch time; `None` for local data (the cache
    /// format deliberately does not persist timestamps, keeping files
    /// byte-stable).
    pub fetched_at: Option<u64>,
}

impl NewformRecord {
    pub fn count(&self) -> usize {
        self.coeffs.len()
    }

    /// 1-based coefficient access; reading past the recorded count is an
    /// error, never a silent zero.
    pub fn a(&self, n: usize) -> Result<&FieldElem> {
        if n == 0 || n > self.coeffs.len() {
            return Err(Error::CountExceedsAvailable {
                label: self.label.clone(),
                want: n,
                have: self.coeffs.len(),
            });
        }
        Ok(&self.coeffs[n - 1])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Data equality: label, weight, level, and coefficients (provenance and
    /// timestamps excluded — they are not part of the persisted format).
    pub fn same_data(&self, other: &NewformRecord) -> bool {
        self.label == other.label
            && self.level == other.level
            && self.weight == other.weight
            && self.coeffs == other.coeffs
    }

    fn validate(&self) -> Result<()> {
        match self.coeffs.first() {
            Some(a1) if *a1 == FieldElem::one() => Ok(()),
            Some(a1) => Err(Error::CacheParse {
                path: self.label.clone(),
                msg: format!("record is not normalized: a(1) = {a1}"),
            }),
            None => Err(Error::CacheParse {
                path: self.label.clone(),
                msg: "record has no coefficients".into(),
            }),
        }
    }

    fn truncated(mut self, count: usize) -> Self {
        self.coeffs.truncate(count);
        self
    }
}

/// Newform labels look like `level.weight.char.iso` (e.g. `6.12.a.a`). The
/// label doubles as a cache file name, so reject anything that is not the
/// plain four-part dotted form.
fn validate_label(label: &str) -> Result<()> {
    let parts: Vec<&str> = label.split('.').collect();
    let ok = parts.len() == 4
        && parts[0].parse::<u64>().is_ok()
        && parts[1].parse::<u64>().is_ok()
        && parts[2..]
            .iter()
            .all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()));
    if ok {
        Ok(())
    } else {
        Err(Error::UnknownLabel(format!(
            "{label} is not a well-formed newform label (level.weight.char.iso)"
        )))
    }
}

/// Render a record body in the cache format.
pub fn render_record(label: &str, weight: u64, level: u64, coeffs: &[FieldElem]) -> String {
    let mut out = format!("{label} {weight} {level} {}\n", coeffs.len());
    for c in coeffs {
        if c.is_rational() {
            let _ = writeln!(out, "{}", c.a());
        } else {
            let _ = writeln!(out, "{} {} {}", c.a(), c.b(), c.disc());
        }
    }
    out
}

fn parse_coeff_line(line: &str) -> Option<FieldElem> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        [a] => Some(FieldElem::from_rational(Rational::from_str(a).ok()?)),
        [a, b, d] => Some(FieldElem::new(
            Rational::from_str(a).ok()?,
            Rational::from_str(b).ok()?,
            d.parse::<i64>().ok()?,
        )),
        _ => None,
    }
}

/// Parse the cache/fixture text format. `origin` is used in error messages.
pub fn parse_record(text: &str, origin: &str, source: Source) -> Result<NewformRecord> {
    let err = |msg: String| Error::CacheParse {
        path: origin.to_string(),
        msg,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err("empty file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [label, weight, level, count] = toks.as_slice() else {
        return Err(err(format!(
            "header must be `label weight level count`, got {header:?}"
        )));
    };
    validate_label(label).map_err(|_| err(format!("bad label {label:?} in header")))?;
    let weight: u64 = weight
        .parse()
        .map_err(|_| err(format!("bad weight {weight:?}")))?;
    let level: u64 = level
        .parse()
        .map_err(|_| err(format!("bad level {level:?}")))?;
    let count: usize = count
        .parse()
        .map_err(|_| err(format!("bad count {count:?}")))?;
    let mut coeffs = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let c = parse_coeff_line(line)
            .ok_or_else(|| err(format!("bad coefficient on line {}: {line:?}", i + 2)))?;
        coeffs.push(c);
    }
    if coeffs.len() != count {
        return Err(err(format!(
            "header promises {count} coefficients, file holds {}",
            coeffs.len()
        )));
    }
    let record = NewformRecord {
        label: label.to_string(),
        level,
        weight,
        coeffs,
        source,
        fetched_at: None,
    };
    record.validate()?;
    Ok(record)
}

/// Fetch behavior knobs. Offline by default; the network is strictly opt-in.
#[derive(Debug, Clone, Default)]
pub struct FetchOptions {
    pub allow_network: bool,
    /// Overrides the `QLIFT_CACHE_DIR` environment variable when set.
    pub cache_dir: Option<PathBuf>,
}

impl FetchOptions {
    pub fn offline() -> Self {
        Self::default()
    }

    pub fn network() -> Self {
        FetchOptions {
            allow_network: true,
            cache_dir: None,
        }
    }
}

fn cache_dir(opts: &FetchOptions) -> PathBuf {
    if let Some(d) = &opts.cache_dir {
        return d.clone();
    }
    std::env::var_os("QLIFT_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qlift-lmfdb-cache"))
}

fn base_url() -> String {
    std::env::var("LMFDB_BASE_URL").unwrap_or_else(|_| "https://www.lmfdb.org".to_string())
}

/// Offline fetch: bundled fixtures, then the local cache. Never touches the
/// network; asking for more coefficients than are stored is an error.
pub fn fetch(label: &str, count: usize) -> Result<NewformRecord> {
    fetch_with(label, count, &FetchOptions::offline())
}

pub fn fetch_with(label: &str, count: usize, opts: &FetchOptions) -> Result<NewformRecord> {
    validate_label(label)?;
    let mut have: Option<usize> = None;
    if let Some(text) = bundled(label) {
        let record = parse_record(text, &format!("bundled fixture {label}"), Source::Fixture)?;
        if record.count() >= count {
            return Ok(record.truncated(count));
        }
        have = Some(record.count());
    }
    let path = cache_dir(opts).join(format!("{label}.txt"));
    if path.is_file() {
        let text = std::fs::read_to_string(&path)?;
        let record = parse_record(&text, &path.display().to_string(), Source::Fixture)?;
        if record.label != label {
            return Err(Error::CacheParse {
                path: path.display().to_string(),
                msg: format!("file is for label {}, expected {label}", record.label),
            });
        }
        if record.count() >= count {
            return Ok(record.truncated(count));
        }
        have = Some(have.unwrap_or(0).max(record.count()));
    }
    if !opts.allow_network {
        return match have {
            // Local data exists but is too short.
            Some(have) => Err(Error::CountExceedsAvailable {
                label: label.to_string(),
                want: count,
                have,
            }),
            None => Err(Error::NetworkDisabled),
        };
    }
    let record = fetch_network(label, count)?;
    persist(&record, &path)?;
    Ok(record)
}

/// Write a record to `path` in the cache format.
pub fn persist(record: &NewformRecord, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(
        path,
        render_record(&record.label, record.weight, record.level, record.coeffs()),
    )?;
    Ok(())
}

// Network fetches are serialized and politely spaced; cache reads above take
// no lock.
static LAST_NETWORK_CALL: Mutex<Option<Instant>> = Mutex::new(None);
const MIN_CALL_SPACING: Duration = Duration::from_millis(500);

fn fetch_network(label: &str, count: usize) -> Result<NewformRecord> {
    let mut last = LAST_NETWORK_CALL
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner());
    if let Some(t) = *last {
        let since = t.elapsed();
        if since < MIN_CALL_SPACING {
            std::thread::sleep(MIN_CALL_SPACING - since);
        }
    }
    let url = format!(
        "{}/api/mf_newforms/?label={label}&_format=json",
        base_url().trim_end_matches('/')
    );
    let net = |e: reqwest::Error| Error::Network(format!("{url}: {e}"));
    let body = reqwest::blocking::get(&url)
        .map_err(net)?
        .error_for_status()
        .map_err(net)?
        .text()
        .map_err(net)?;
    *last = Some(Instant::now());
    drop(last);
    parse_api_payload(label, &body, count)
}

/// Parse the JSON payload of the public newforms API. Only rational newforms
/// are supported over the network (their integer traces are the
/// coefficients); higher-dimensional forms must be provided as local cache
/// files in the `a b d` quadratic format.
fn parse_api_payload(label: &str, body: &str, count: usize) -> Result<NewformRecord> {
    let parse_err = |msg: String| Error::Parse { pos: 0, msg };
    let v: serde_json::Value =
        serde_json::from_str(body).map_err(|e| parse_err(format!("bad JSON for {label}: {e}")))?;
    let rows = v
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| parse_err(format!("payload for {label} has no data array")))?;
    let row = rows
        .first()
        .and_then(|r| r.as_object())
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let int_field = |name: &str| -> Result<u64> {
        row.get(name)
            .and_then(|x| x.as_u64())
            .ok_or_else(|| parse_err(format!("{label}: missing integer field {name:?}")))
    };
    let weight = int_field("weight")?;
    let level = int_field("level")?;
    if let Some(dim) = row.get("dim").and_then(|x| x.as_u64()) {
        if dim != 1 {
            return Err(Error::Uncovered(format!(
                "{label} has dimension {dim}; network fetch only covers rational newforms"
            )));
        }
    }
    let traces = row
        .get("traces")
        .and_then(|x| x.as_array())
        .ok_or_else(|| parse_err(format!("{label}: missing traces field")))?;
    if traces.len() < count {
        return Err(Error::CountExceedsAvailable {
            label: label.to_string(),
            want: count,
            have: traces.len(),
        });
    }
    let mut coeffs = Vec::with_capacity(count);
    for (i, t) in traces.iter().take(count).enumerate() {
        // With arbitrary-precision JSON the number keeps its exact digits.
        let text = match t {
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(parse_err(format!(
                    "{label}: trace {} is not a number: {other}",
                    i + 1
                )))
            }
        };
        let r = Rational::from_str(&text)
            .map_err(|e| parse_err(format!("{label}: trace {} = {text:?}: {e}", i + 1)))?;
        coeffs.push(FieldElem::from_rational(r));
    }
    let record = NewformRecord {
        label: label.to_string(),
        level,
        weight,
        coeffs,
        source: Source::Network,
        fetched_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs()),
    };
    record.validate().map_err(|e| match e {
        Error::CacheParse { msg, .. } => parse_err(format!("{label}: {msg}")),
        other => other,
    })?;
    Ok(record)
}

/// Compare a record's coefficients against an integer-grid series, exactly,
/// through `a(through)`. The caller states the weight it believes the series
/// has; a metadata mismatch is an error rather than a silent pass.
pub fn compare(
    record: &NewformRecord,
    f: &Series24,
    through: usize,
    expected_weight: u64,
) -> Result<CheckReport> {
    if record.weight != expected_weight {
        return Err(Error::Usage(format!(
            "weight mismatch: record {} has weight {}, comparison expects {}",
            record.label, record.weight, expected_weight
        )));
    }
    if through == 0 || through > record.count() {
        return Err(Error::CountExceedsAvailable {
            label: record.label.clone(),
            want: through,
            have: record.count(),
        });
    }
    let needed = 24 * (through as u64) + 1;
    if f.prec() < needed {
        return Err(Error::Usage(format!(
            "series precision {} cannot reach a({through}) (needs {needed})",
            f.prec()
        )));
    }
    let start = Instant::now();
    let mut status = CheckStatus::Pass;
    for n in 1..=through {
        let want = record.a(n)?;
        let got = f.coeff_int(n as u64);
        if got != *want {
            status = CheckStatus::Fail {
                first_mismatch: 24 * n as u64,
                lhs: got.to_string(),
                rhs: want.to_string(),
            };
            break;
        }
    }
    Ok(CheckReport {
        id: format!("lmfdb:{}", record.label),
        inputs: format!(
            "series vs {} through a({through}), weight {expected_weight}",
            record.label
        ),
        verified_through: 24 * through as u64,
        status,
        millis: start.elapsed().as_millis(),
    })
}
