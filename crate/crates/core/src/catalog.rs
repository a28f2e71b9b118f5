//! Half-life catalog ingestion: a canonical CSV and NUBASE-style
//! fixed-width tables whose column layout comes from a config file.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds in one year under the NUBASE convention.
pub const NUBASE_YEAR_SECONDS: f64 = 3.155_692_6e7;

pub const CANONICAL_HEADER: [&str; 5] =
    ["nuclide", "half_life_s", "uncertainty_s", "bound", "stable"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Exact,
    UpperLimit,
    LowerLimit,
}

impl Bound {
    pub fn token(self) -> &'static str {
        match self {
            Bound::Exact => "exact",
            Bound::UpperLimit => "upper_limit",
            Bound::LowerLimit => "lower_limit",
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Bound::Exact),
            "upper_limit" => Ok(Bound::UpperLimit),
            "lower_limit" => Ok(Bound::LowerLimit),
            other => Err(format!("unknown bound token `{other}`")),
        }
    }
}

/// One nuclide (or isomer). Stable nuclides have no half-life.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfLifeRecord {
    pub nuclide: String,
    pub half_life_s: Option<f64>,
    pub uncertainty_s: Option<f64>,
    pub bound: Bound,
    pub stable: bool,
}

/// Half-lives of the unstable records whose value is exact, in input order.
pub fn filter_measurable(records: &[HalfLifeRecord]) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.bound == Bound::Exact && !r.stable)
        .filter_map(|r| r.half_life_s)
        .filter(|v| v.is_finite() && *v > 0.0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum UnitScale {
    Seconds(f64),
    Years(f64),
}

/// Unit symbol → seconds per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitTable {
    year_seconds: f64,
    units: BTreeMap<String, UnitScale>,
}

impl Default for UnitTable {
    fn default() -> Self {
        Self::nubase()
    }
}

impl UnitTable {
    /// `ys…ms`, `s`, `m`, `h`, `d`, and `y…Yy` with the NUBASE year.
    pub fn nubase() -> Self {
        use UnitScale::{Seconds, Years};
        let entries = [
            ("ys", Seconds(1e-24)),
            ("zs", Seconds(1e-21)),
            ("as", Seconds(1e-18)),
            ("fs", Seconds(1e-15)),
            ("ps", Seconds(1e-12)),
            ("ns", Seconds(1e-9)),
            ("us", Seconds(1e-6)),
            ("μs", Seconds(1e-6)),
            ("ms", Seconds(1e-3)),
            ("s", Seconds(1.0)),
            ("m", Seconds(60.0)),
            ("h", Seconds(3600.0)),
            ("d", Seconds(86400.0)),
            ("y", Years(1.0)),
            ("ky", Years(1e3)),
            ("My", Years(1e6)),
            ("Gy", Years(1e9)),
            ("Ty", Years(1e12)),
            ("Py", Years(1e15)),
            ("Ey", Years(1e18)),
            ("Zy", Years(1e21)),
            ("Yy", Years(1e24)),
        ];
        UnitTable {
            year_seconds: NUBASE_YEAR_SECONDS,
            units: entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    /// Same table with a different length of year; only year-based
    /// units change.
    pub fn with_year(mut self, seconds: f64) -> Result<Self> {
        if !(seconds.is_finite() && seconds > 0.0) {
            return Err(Error::domain(format!(
                "year length must be > 0, got {seconds}"
            )));
        }
        self.year_seconds = seconds;
        Ok(self)
    }

    pub fn year_seconds(&self) -> f64 {
        self.year_seconds
    }

    pub fn insert(&mut self, symbol: &str, seconds: f64) -> Result<()> {
        if !(seconds.is_finite() && seconds > 0.0) {
            return Err(Error::domain(format!(
                "unit `{symbol}` must map to a positive number of seconds"
            )));
        }
        self.units
            .insert(symbol.to_string(), UnitScale::Seconds(seconds));
        Ok(())
    }

    pub fn seconds_per(&self, symbol: &str) -> Option<f64> {
        self.units.get(symbol).map(|s| match *s {
            UnitScale::Seconds(v) => v,
            UnitScale::Years(v) => v * self.year_seconds,
        })
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.units.keys().map(String::as_str)
    }

    /// Applies `symbol = seconds` overrides; the key `year` sets the year
    /// convention. Blank and `#` lines are ignored.
    pub fn apply_overrides(mut self, text: &str) -> Result<Self> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = split_assignment(line, i + 1)?;
            let seconds: f64 = value.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("`{value}` is not a number"),
            })?;
            if key == "year" {
                self = self.with_year(seconds)?;
            } else {
                self.insert(key, seconds).map_err(|e| Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            }
        }
        Ok(self)
    }
}

fn split_assignment(line: &str, lineno: usize) -> Result<(&str, &str)> {
    line.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected `key = value`, got `{line}`"),
        })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads the canonical CSV. `#` lines are comments; the first record must
/// be the header `nuclide,half_life_s,uncertainty_s,bound,stable`.
pub fn parse_canonical_csv<R: Read>(reader: R) -> Result<Vec<HalfLifeRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = Vec::new();
    let mut seen_header = false;
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if !seen_header {
            if row.iter().ne(CANONICAL_HEADER) {
                return Err(parse_error(
                    line,
                    format!("missing header `{}`", CANONICAL_HEADER.join(",")),
                ));
            }
            seen_header = true;
            continue;
        }
        if row.len() != CANONICAL_HEADER.len() {
            return Err(parse_error(
                line,
                format!("expected 5 fields, found {}", row.len()),
            ));
        }
        records.push(parse_row(&row, line)?);
    }
    if !seen_header {
        return Err(parse_error(
            1,
            format!("missing header `{}`", CANONICAL_HEADER.join(",")),
        ));
    }
    Ok(records)
}

fn parse_row(row: &csv::StringRecord, line: usize) -> Result<HalfLifeRecord> {
    let nuclide = row[0].to_string();
    if nuclide.is_empty() {
        return Err(parse_error(line, "empty nuclide label"));
    }
    let stable = match &row[4] {
        "true" => true,
        "false" => false,
        other => {
            return Err(parse_error(
                line,
                format!("stable must be true or false, got `{other}`"),
            ))
        }
    };
    let bound: Bound = row[3].parse().map_err(|m: String| parse_error(line, m))?;
    let half_life_s = match &row[1] {
        "" => None,
        text => {
            let v: f64 = text
                .parse()
                .map_err(|_| parse_error(line, format!("half-life `{text}` is not a number")))?;
            if stable && v.is_finite() {
                return Err(parse_error(
                    line,
                    "stable record carries a finite half-life",
                ));
            }
            if !stable && !(v.is_finite() && v > 0.0) {
                return Err(parse_error(
                    line,
                    format!("half-life must be positive, got {text}"),
                ));
            }
            (!stable).then_some(v)
        }
    };
    if !stable && half_life_s.is_none() {
        return Err(parse_error(line, "unstable record without a half-life"));
    }
    let uncertainty_s = match &row[2] {
        "" => None,
        text => {
            let v: f64 = text
                .parse()
                .map_err(|_| parse_error(line, format!("uncertainty `{text}` is not a number")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(parse_error(
                    line,
                    format!("uncertainty must be nonnegative, got {text}"),
                ));
            }
            Some(v)
        }
    };
    Ok(HalfLifeRecord {
        nuclide,
        half_life_s,
        uncertainty_s,
        bound,
        stable,
    })
}

/// Writes records as canonical CSV with round-trip precision.
pub fn write_canonical_csv<W: Write>(records: &[HalfLifeRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CANONICAL_HEADER).map_err(csv_err)?;
    for r in records {
        let half_life = r.half_life_s.map(|v| format!("{v:e}")).unwrap_or_default();
        let uncertainty = r
            .uncertainty_s
            .map(|v| format!("{v:e}"))
            .unwrap_or_default();
        w.write_record([
            r.nuclide.as_str(),
            &half_life,
            &uncertainty,
            r.bound.token(),
            if r.stable { "true" } else { "false" },
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_canonical_csv(records: &[HalfLifeRecord]) -> String {
    let mut buf = Vec::new();
    write_canonical_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

/// 1-based inclusive character range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnRange {
    pub start: usize,
    pub end: usize,
}

impl FromStr for ColumnRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected `start..end`, got `{s}`"))?;
        let start: usize = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start `{a}`"))?;
        let end: usize = b
            .trim()
            .parse()
            .map_err(|_| format!("bad range end `{b}`"))?;
        if start == 0 || end < start {
            return Err(format!(
                "range {start}..{end} must satisfy 1 <= start <= end"
            ));
        }
        Ok(ColumnRange { start, end })
    }
}

/// Column layout of a fixed-width catalog.
///
/// Keys: `nuclide`, `half_life`, `unit` (required) and `uncertainty`,
/// `flags` (optional) as `key = start..end`; `unit_table = <path>` for a
/// unit override file; `pad_short_lines = true` to read missing trailing
/// columns as blank; `ignore_values = tok1 tok2 …` for value-field tokens
/// that mean "no half-life" (the line is skipped).
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMap {
    pub nuclide: ColumnRange,
    pub half_life: ColumnRange,
    pub unit: ColumnRange,
    pub uncertainty: Option<ColumnRange>,
    pub flags: Option<ColumnRange>,
    pub unit_table: Option<PathBuf>,
    pub pad_short_lines: bool,
    pub ignore_values: Vec<String>,
}

impl ColumnMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges: BTreeMap<&str, ColumnRange> = BTreeMap::new();
        let mut unit_table = None;
        let mut pad_short_lines = false;
        let mut ignore_values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let (key, value) = split_assignment(line, lineno)?;
            match key {
                "nuclide" | "half_life" | "unit" | "uncertainty" | "flags" => {
                    let range = value.parse().map_err(|m: String| parse_error(lineno, m))?;
                    ranges.insert(key, range);
                }
                "unit_table" => unit_table = Some(PathBuf::from(value)),
                "pad_short_lines" => {
                    pad_short_lines = value
                        .parse()
                        .map_err(|_| parse_error(lineno, "pad_short_lines must be true or false"))?
                }
                "ignore_values" => {
                    ignore_values = value.split_whitespace().map(str::to_string).collect()
                }
                other => return Err(parse_error(lineno, format!("unknown key `{other}`"))),
            }
        }
        let required = |k: &str| {
            ranges
                .get(k)
                .copied()
                .ok_or_else(|| parse_error(0, format!("column map lacks `{k}`")))
        };
        Ok(ColumnMap {
            nuclide: required("nuclide")?,
            half_life: required("half_life")?,
            unit: required("unit")?,
            uncertainty: ranges.get("uncertainty").copied(),
            flags: ranges.get("flags").copied(),
            unit_table,
            pad_short_lines,
            ignore_values,
        })
    }

    /// Reads a config file; a relative `unit_table` path is resolved
    /// against the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut map = Self::parse(&std::fs::read_to_string(path)?)?;
        if let (Some(table), Some(dir)) = (&map.unit_table, path.parent()) {
            if table.is_relative() {
                map.unit_table = Some(dir.join(table));
            }
        }
        Ok(map)
    }

    /// The NUBASE unit table with this map's overrides applied.
    pub fn units(&self) -> Result<UnitTable> {
        match &self.unit_table {
            Some(path) => UnitTable::nubase().apply_overrides(&std::fs::read_to_string(path)?),
            None => Ok(UnitTable::nubase()),
        }
    }
}

fn field(chars: &[char], range: ColumnRange, name: &str, line: usize, pad: bool) -> Result<String> {
    if range.end > chars.len() && !pad {
        return Err(Error::ColumnRange {
            line,
            field: name.to_string(),
            start: range.start,
            end: range.end,
            len: chars.len(),
        });
    }
    let lo = (range.start - 1).min(chars.len());
    let hi = range.end.min(chars.len());
    Ok(chars[lo..hi].iter().collect::<String>().trim().to_string())
}

/// Parses a fixed-width catalog. Blank lines and lines starting with `#`
/// are skipped, as are lines with an empty half-life field.
///
/// The value field may read `stbl` (stable), carry a `<` / `>` qualifier
/// (upper / lower limit), a `~` (approximate, kept as exact) or a trailing
/// `#` (estimated, kept as exact). A flags column containing `<` or `>`
/// sets the bound the same way.
pub fn parse_fixed_width<R: BufRead>(
    reader: R,
    map: &ColumnMap,
    units: &UnitTable,
) -> Result<Vec<HalfLifeRecord>> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let pad = map.pad_short_lines;
        let nuclide = field(&chars, map.nuclide, "nuclide", lineno, pad)?;
        let value = field(&chars, map.half_life, "half_life", lineno, pad)?;
        let unit = field(&chars, map.unit, "unit", lineno, pad)?;
        let uncertainty = map
            .uncertainty
            .map(|r| field(&chars, r, "uncertainty", lineno, pad))
            .transpose()?;
        let flags = map
            .flags
            .map(|r| field(&chars, r, "flags", lineno, pad))
            .transpose()?
            .unwrap_or_default();

        if value.is_empty() || map.ignore_values.contains(&value) {
            continue;
        }
        if nuclide.is_empty() {
            return Err(parse_error(lineno, "empty nuclide label"));
        }
        if value.eq_ignore_ascii_case("stbl") || flags.eq_ignore_ascii_case("stbl") {
            records.push(HalfLifeRecord {
                nuclide,
                half_life_s: None,
                uncertainty_s: None,
                bound: Bound::Exact,
                stable: true,
            });
            continue;
        }

        let (mut bound, number) = split_qualifier(&value);
        if flags.contains('>') {
            bound = Bound::LowerLimit;
        } else if flags.contains('<') {
            bound = Bound::UpperLimit;
        }
        let magnitude: f64 = number
            .parse()
            .map_err(|_| parse_error(lineno, format!("half-life `{value}` is not a number")))?;
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(parse_error(
                lineno,
                format!("half-life must be positive, got `{value}`"),
            ));
        }
        if unit.is_empty() {
            return Err(parse_error(lineno, "missing half-life unit"));
        }
        let scale = units.seconds_per(&unit).ok_or_else(|| Error::UnknownUnit {
            line: lineno,
            symbol: unit.clone(),
        })?;
        let uncertainty_s = uncertainty
            .as_deref()
            .map(|u| u.trim_end_matches('#'))
            .and_then(|u| u.parse::<f64>().ok())
            .filter(|u| u.is_finite() && *u >= 0.0)
            .map(|u| u * scale);
        records.push(HalfLifeRecord {
            nuclide,
            half_life_s: Some(magnitude * scale),
            uncertainty_s,
            bound,
            stable: false,
        });
    }
    Ok(records)
}

fn split_qualifier(value: &str) -> (Bound, &str) {
    let v = value.trim_end_matches('#').trim();
    for (prefix, bound) in [
        (">=", Bound::LowerLimit),
        ("<=", Bound::UpperLimit),
        ("≥", Bound::LowerLimit),
        ("≤", Bound::UpperLimit),
        (">", Bound::LowerLimit),
        ("<", Bound::UpperLimit),
        ("~", Bound::Exact),
    ] {
        if let Some(rest) = v.strip_prefix(prefix) {
            return (bound, rest.trim());
        }
    }
    (Bound::Exact, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HEADER: &str = "nuclide,half_life_s,uncertainty_s,bound,stable\n";

    fn csv(body: &str) -> Result<Vec<HalfLifeRecord>> {
        parse_canonical_csv(format!("{HEADER}{body}").as_bytes())
    }

    #[test]
    fn canonical_examples() {
        let r = csv("26Al,2.262e13,,exact,false\n").unwrap();
        assert_eq!(r[0].half_life_s, Some(2.262e13));
        assert_eq!(r[0].nuclide, "26Al");
        assert!(csv("").unwrap().is_empty());
        match csv("26Al,2.262e13,,exact,false\nX,-1,,exact,false\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_errors() {
        assert!(parse_canonical_csv("26Al,1,,exact,false\n".as_bytes()).is_err());
        assert!(parse_canonical_csv("".as_bytes()).is_err());
        assert!(csv("A,abc,,exact,false\n").is_err());
        assert!(csv("A,1,,roughly,false\n").is_err());
        assert!(csv("A,1,,exact,maybe\n").is_err());
        assert!(csv("A,,,exact,false\n").is_err());
        assert!(csv("A,5,,exact,true\n").is_err());
        assert!(csv("A,5,-1,exact,false\n").is_err());
        assert!(csv("A,5,,exact\n").is_err());
    }

    #[test]
    fn canonical_comments_and_stable() {
        let r = csv("# comment\n1H,,,exact,true\n3H,3.888e8,2.2e6,exact,false\n").unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].stable && r[0].half_life_s.is_none());
        assert_eq!(r[1].uncertainty_s, Some(2.2e6));
        let r = parse_canonical_csv(format!("# lead comment\n{HEADER}").as_bytes()).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn filter_examples() {
        let rec = |v: Option<f64>, bound, stable| HalfLifeRecord {
            nuclide: "X".into(),
            half_life_s: v,
            uncertainty_s: None,
            bound,
            stable,
        };
        let records = vec![
            rec(Some(3.0), Bound::Exact, false),
            rec(Some(1.0), Bound::UpperLimit, false),
            rec(None, Bound::Exact, true),
            rec(Some(9.0), Bound::LowerLimit, false),
        ];
        assert_eq!(filter_measurable(&records), vec![3.0]);
        assert!(filter_measurable(&[]).is_empty());
    }

    #[test]
    fn unit_table_defaults() {
        let u = UnitTable::nubase();
        assert_eq!(u.seconds_per("s"), Some(1.0));
        assert_eq!(u.seconds_per("m"), Some(60.0));
        assert_eq!(u.seconds_per("y"), Some(NUBASE_YEAR_SECONDS));
        assert_eq!(u.seconds_per("My"), Some(1e6 * NUBASE_YEAR_SECONDS));
        assert_eq!(u.seconds_per("ys"), Some(1e-24));
        assert!(u.symbols().all(|s| u.seconds_per(s).unwrap() > 0.0));
        assert!(u.seconds_per("fortnight").is_none());
    }

    #[test]
    fn year_convention_only_touches_years() {
        let a = UnitTable::nubase();
        let b = UnitTable::nubase().with_year(3.15576e7).unwrap();
        let ratio = 3.15576e7 / NUBASE_YEAR_SECONDS;
        for s in a.symbols() {
            let (x, y) = (a.seconds_per(s).unwrap(), b.seconds_per(s).unwrap());
            if s.ends_with('y') {
                assert!((y / x - ratio).abs() < 1e-15, "{s}");
            } else {
                assert_eq!(x, y, "{s}");
            }
        }
    }

    #[test]
    fn unit_overrides() {
        let u = UnitTable::nubase()
            .apply_overrides("# custom\nyear = 3.15576e7\nmin = 60\n")
            .unwrap();
        assert_eq!(u.seconds_per("y"), Some(3.15576e7));
        assert_eq!(u.seconds_per("min"), Some(60.0));
        assert!(UnitTable::nubase().apply_overrides("z = -1").is_err());
        assert!(UnitTable::nubase().apply_overrides("z").is_err());
    }

    const MAP: &str = "\
# test layout
nuclide = 1..6
half_life = 8..15
unit = 17..18
uncertainty = 20..25
";

    fn fixed(text: &str) -> Result<Vec<HalfLifeRecord>> {
        let map = ColumnMap::parse(MAP).unwrap();
        parse_fixed_width(text.as_bytes(), &map, &UnitTable::nubase())
    }

    #[test]
    fn fixed_width_examples() {
        //         1234567890123456789012345
        let text = "\
26Al   7.17     ky 0.24  
14C    2.0      m  0.1   
X1     >5       s        
X2     <3.2#    ms       
1H     stbl              
X3     ~40      us       
";
        let r = fixed(text).unwrap();
        assert_eq!(r.len(), 6);
        assert!((r[0].half_life_s.unwrap() - 7.17e3 * NUBASE_YEAR_SECONDS).abs() < 1.0);
        assert_eq!(r[1].half_life_s, Some(120.0));
        assert_eq!(r[1].uncertainty_s, Some(6.0));
        assert_eq!(
            (r[2].bound, r[2].half_life_s),
            (Bound::LowerLimit, Some(5.0))
        );
        assert_eq!(r[3].bound, Bound::UpperLimit);
        assert!((r[3].half_life_s.unwrap() - 3.2e-3).abs() < 1e-18);
        assert!(r[4].stable);
        assert_eq!(r[5].bound, Bound::Exact);
        assert_eq!(filter_measurable(&r).len(), 3);
    }

    #[test]
    fn fixed_width_errors() {
        match fixed("26Al   7.17     qq 0.24  \n") {
            Err(Error::UnknownUnit { line, symbol }) => {
                assert_eq!((line, symbol.as_str()), (1, "qq"))
            }
            other => panic!("{other:?}"),
        }
        match fixed("26Al   7.17     s  \n") {
            Err(Error::ColumnRange { line, field, .. }) => {
                assert_eq!((line, field.as_str()), (1, "uncertainty"))
            }
            other => panic!("{other:?}"),
        }
        assert!(fixed("26Al   abc      s  0.24  \n").is_err());
        assert!(fixed("26Al   7.17        0.24  \n").is_err());
    }

    #[test]
    fn fixed_width_padding_and_ignores() {
        let map = ColumnMap::parse(&format!(
            "{MAP}pad_short_lines = true\nignore_values = p-unst\n"
        ))
        .unwrap();
        let text = "26Al   7.17     s\nX      p-unst\nY\n";
        let r = parse_fixed_width(text.as_bytes(), &map, &UnitTable::nubase()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].uncertainty_s, None);
    }

    #[test]
    fn column_map_errors() {
        assert!(ColumnMap::parse("nuclide = 1..5\n").is_err());
        assert!(ColumnMap::parse("nuclide = 0..5\nhalf_life=1..2\nunit=3..4\n").is_err());
        assert!(ColumnMap::parse("nuclide = 5..1\nhalf_life=1..2\nunit=3..4\n").is_err());
        assert!(ColumnMap::parse("colour = 1..2\n").is_err());
    }

    fn arb_record() -> impl Strategy<Value = HalfLifeRecord> {
        (
            "[A-Za-z0-9 ,\"m]{1,8}",
            prop::option::of(0.0f64..1e6),
            prop_oneof![
                Just(Bound::Exact),
                Just(Bound::UpperLimit),
                Just(Bound::LowerLimit)
            ],
            any::<bool>(),
            -300i32..300,
            1e-3f64..1e3,
        )
            .prop_map(|(name, unc, bound, stable, e, m)| HalfLifeRecord {
                nuclide: format!("n{}", name.trim()),
                half_life_s: (!stable).then(|| m * 10f64.powi(e)),
                uncertainty_s: unc,
                bound,
                stable,
            })
    }

    proptest! {
        #[test]
        fn canonical_round_trip(records in prop::collection::vec(arb_record(), 0..30)) {
            let text = to_canonical_csv(&records);
            prop_assert_eq!(parse_canonical_csv(text.as_bytes()).unwrap(), records);
        }

        #[test]
        fn filter_shrinks(records in prop::collection::vec(arb_record(), 0..30)) {
            let out = filter_measurable(&records);
            prop_assert!(out.len() <= records.len());
            prop_assert!(out.iter().all(|v| *v > 0.0));
        }
    }
}
