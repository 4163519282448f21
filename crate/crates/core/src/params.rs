//! Parameter rows: the reference tables, their recomputation, radius data
//! for plotting, and a grid search for short keys at a target workfactor.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scheme::Decoder;
use crate::security::{
    check_countermeasures, fs_workfactor, gain_centi, radii, ratio_deci, redundancy_keysize,
    workfactor_at_least, Variant,
};

const TABLE1: &str = include_str!("../fixtures/table1.csv");
const TABLE2: &str = include_str!("../fixtures/table2.csv");
const TABLE3: &str = include_str!("../fixtures/table3.csv");
const TABLE4: &str = include_str!("../fixtures/table4.csv");

/// Security levels of the reference tables, in bits.
pub const LEVELS: [u32; 5] = [80, 112, 128, 192, 256];

const WF_TOLERANCE: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
pub enum Method {
    #[serde(rename = "UD")]
    Ud,
    #[serde(rename = "LD")]
    Ld,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Ud => "UD",
            Method::Ld => "LD",
        }
    }

    pub fn decoder(&self) -> Decoder {
        match self {
            Method::Ud => Decoder::Ud,
            Method::Ld => Decoder::Ld,
        }
    }
}

/// One row of a key-size table.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ParamRow {
    pub method: Method,
    pub m: u32,
    pub n: u64,
    pub k: u64,
    pub r: u64,
    pub tau2: Option<u64>,
    pub wf: f64,
    pub keysize: u64,
    pub gain: Option<f64>,
}

pub const ROW_HEADER: [&str; 9] = ["method", "m", "n", "k", "r", "tau2", "wf", "keysize", "gain"];

impl ParamRow {
    /// Number of errors the row's method decrypts.
    pub fn weight(&self) -> Result<u64> {
        match self.method {
            Method::Ud => Ok(self.r),
            Method::Ld => Ok(radii(self.n, self.r)?.ld_errors),
        }
    }

    /// Fields in header order, with WF at 3 and gain at 2 decimals.
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.method.as_str().to_string(),
            self.m.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.r.to_string(),
            self.tau2.map(|t| t.to_string()).unwrap_or_default(),
            format!("{:.3}", self.wf),
            self.keysize.to_string(),
            self.gain.map(|g| format!("{g:.2}")).unwrap_or_default(),
        ]
    }
}

/// Parses rows from delimited text with a header line. Columns are matched
/// by name and extra columns are ignored.
pub fn load_rows(text: &str, delimiter: u8) -> Result<Vec<ParamRow>> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Format(e.to_string())))
        .collect()
}

/// The reference rows of table 1, 2 or 3 as printed.
pub fn reference_rows(table: u8) -> Result<Vec<ParamRow>> {
    let text = match table {
        1 => TABLE1,
        2 => TABLE2,
        3 => TABLE3,
        _ => return Err(Error::Parameter(format!("no parameter table {table}"))),
    };
    load_rows(text, b',')
}

pub fn table_variant(table: u8) -> Variant {
    if table == 1 {
        Variant::Generic
    } else {
        Variant::Dyadic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckedRow {
    pub row: ParamRow,
    pub reference: ParamRow,
    /// Mismatching columns as `name printed->recomputed`.
    pub mismatches: Vec<String>,
}

impl CheckedRow {
    pub fn is_match(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes every derived column of a reference table and compares.
///
/// Keysizes count the redundancy bits actually stored; gains compare each
/// LD row with the closest preceding UD row.
pub fn recompute_table(table: u8) -> Result<Vec<CheckedRow>> {
    let variant = table_variant(table);
    let mut last_ud: Option<u64> = None;
    let mut out = Vec::new();
    for reference in reference_rows(table)? {
        let mut row = reference.clone();
        let w = row.weight()?;
        row.tau2 = (row.method == Method::Ld).then_some(w);
        row.wf = fs_workfactor(row.n, row.k, w)?;
        row.keysize = redundancy_keysize(variant, row.n, row.k, row.r);
        row.gain = match row.method {
            Method::Ud => {
                last_ud = Some(row.keysize);
                None
            }
            Method::Ld => last_ud.map(|ud| gain_centi(ud, row.keysize) as f64 / 100.0),
        };
        let mut mismatches = Vec::new();
        if row.tau2 != reference.tau2 {
            mismatches.push(format!(
                "tau2 {}->{}",
                reference.tau2.map(|v| v.to_string()).unwrap_or_default(),
                row.tau2.map(|v| v.to_string()).unwrap_or_default()
            ));
        }
        if (row.wf - reference.wf).abs() > WF_TOLERANCE {
            mismatches.push(format!("wf {:.3}->{:.3}", reference.wf, row.wf));
        }
        if row.keysize != reference.keysize {
            mismatches.push(format!("keysize {}->{}", reference.keysize, row.keysize));
        }
        let centi = |g: Option<f64>| g.map(|g| (g * 100.0).round() as i64);
        if centi(row.gain) != centi(reference.gain) {
            mismatches.push(format!("gain {:?}->{:?}", reference.gain, row.gain));
        }
        out.push(CheckedRow {
            row,
            reference,
            mismatches,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct RatioRow {
    pub security: u32,
    pub dlp_keysize: u64,
    pub mceliece_keysize: u64,
    /// Printed as one decimal; stored in tenths.
    #[serde(deserialize_with = "tenths")]
    pub ratio: u64,
}

fn tenths<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
    let v = f64::deserialize(d)?;
    Ok((v * 10.0).round() as u64)
}

pub fn reference_ratios() -> Result<Vec<RatioRow>> {
    csv::Reader::from_reader(TABLE4.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Format(e.to_string())))
        .collect()
}

/// Security level of a printed workfactor: the largest level not above it.
pub fn level_of(wf: f64) -> Option<u32> {
    LEVELS.iter().rev().copied().find(|&l| wf >= l as f64)
}

/// Ratio rows recomputed from the smallest LD key of the dyadic table at
/// each level, paired with the printed rows.
pub fn recompute_ratios() -> Result<Vec<(RatioRow, RatioRow)>> {
    let dyadic = recompute_table(2)?;
    reference_ratios()?
        .into_iter()
        .map(|reference| {
            let best = dyadic
                .iter()
                .filter(|c| {
                    c.row.method == Method::Ld && level_of(c.reference.wf) == Some(reference.security)
                })
                .map(|c| c.row.keysize)
                .min()
                .ok_or_else(|| {
                    Error::Internal(format!("no LD row at level {}", reference.security))
                })?;
            let row = RatioRow {
                security: reference.security,
                dlp_keysize: reference.dlp_keysize,
                mceliece_keysize: best,
                ratio: ratio_deci(best, reference.dlp_keysize),
            };
            Ok((row, reference))
        })
        .collect()
}

/// One line of the radius comparison, all radii divided by `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsRow {
    pub t: u64,
    pub normalized_t: f64,
    pub unique: f64,
    pub generic: f64,
    pub bernstein: f64,
    pub tau2: f64,
}

pub const BOUNDS_HEADER: [&str; 6] = ["t", "t_over_n", "unique", "generic", "bernstein", "tau2"];

impl BoundsRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.t.to_string(),
            format!("{:.6}", self.normalized_t),
            format!("{:.6}", self.unique),
            format!("{:.6}", self.generic),
            format!("{:.6}", self.bernstein),
            format!("{:.6}", self.tau2),
        ]
    }
}

pub fn bounds(n: u64, tmax: u64) -> Result<Vec<BoundsRow>> {
    if n == 0 || 4 * tmax + 2 > n {
        return Err(Error::Domain { n, t: tmax });
    }
    let nf = n as f64;
    (1..=tmax)
        .map(|t| {
            let r = radii(n, t)?;
            Ok(BoundsRow {
                t,
                normalized_t: t as f64 / nf,
                unique: t as f64 / nf,
                generic: r.generic_johnson / nf,
                bernstein: r.bernstein / nf,
                tau2: r.tau2 / nf,
            })
        })
        .collect()
}

/// Joins fields with a delimiter, one record per line.
pub fn render(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>, delimiter: char) -> String {
    let mut out = String::new();
    let sep = delimiter.to_string();
    let _ = writeln!(out, "{}", header.join(&sep));
    for r in rows {
        let _ = writeln!(out, "{}", r.join(&sep));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Countermeasure {
    Cm1,
    Cm2,
    None,
}

impl std::str::FromStr for Countermeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cm1" => Ok(Countermeasure::Cm1),
            "cm2" => Ok(Countermeasure::Cm2),
            "none" => Ok(Countermeasure::None),
            _ => Err(Error::Parameter(format!("unknown countermeasure {s:?}"))),
        }
    }
}

impl Countermeasure {
    pub fn holds(&self, m: u64, n: u64, r: u64) -> bool {
        let cm = check_countermeasures(m, n, r);
        match self {
            Countermeasure::Cm1 => cm.cm1,
            Countermeasure::Cm2 => cm.cm2,
            Countermeasure::None => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchQuery {
    pub target_wf: f64,
    pub variant: Variant,
    pub decoder: Decoder,
    pub countermeasure: Countermeasure,
}

/// Extension degrees scanned by [`search`].
pub const SEARCH_M: std::ops::RangeInclusive<u32> = 10..=16;

/// Candidate `(keysize, n, m, r)`, ordered for the deterministic minimum.
type Key = (u64, u64, u32, u64);

fn weight(decoder: Decoder, n: u64, r: u64) -> Option<u64> {
    match decoder {
        Decoder::Ud => Some(r),
        Decoder::Ld => radii(n, r).ok().map(|x| x.ld_errors),
    }
}

fn feasible(q: &SearchQuery, m: u32, n: u64, r: u64) -> bool {
    let mr = m as u64 * r;
    if n <= mr || !q.countermeasure.holds(m as u64, n, r) {
        return false;
    }
    match weight(q.decoder, n, r) {
        Some(w) if w < mr => workfactor_at_least(n, n - mr, w, q.target_wf).unwrap_or(false),
        _ => false,
    }
}

/// Largest length allowed at `(m, r)`, or `None` if the countermeasure
/// excludes `m` outright.
fn max_length(q: &SearchQuery, m: u32, r: u64) -> Option<u64> {
    let mut cap = match q.variant {
        Variant::Generic => 1u64 << m,
        Variant::Dyadic => (1u64 << m) - r,
    };
    match q.countermeasure {
        Countermeasure::Cm1 => cap = cap.min(r * (r + 1) - 1),
        Countermeasure::Cm2 if m < 16 => return None,
        _ => {}
    }
    Some(cap)
}

fn keysize(variant: Variant, m: u32, n: u64, r: u64) -> u64 {
    redundancy_keysize(variant, n, n - m as u64 * r, r)
}

/// Smallest generic key for fixed `(m, r)`: bisection on `n` for the
/// first feasible length, then a short backwards scan since LD weights
/// shrink as `n` grows.
fn generic_candidate(q: &SearchQuery, m: u32, r: u64) -> Option<Key> {
    let (lo, hi) = (m as u64 * r + 1, max_length(q, m, r)?);
    if lo > hi || !feasible(q, m, hi, r) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if feasible(q, m, mid, r) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    let mut n = a;
    for cand in (lo.max(a.saturating_sub(64))..a).rev() {
        if feasible(q, m, cand, r) {
            n = cand;
        }
    }
    Some((keysize(Variant::Generic, m, n, r), n, m, r))
}

/// Smallest dyadic key for fixed `(m, r)`: lengths are scanned upwards in
/// steps of `r`, so the first feasible one is optimal.
fn dyadic_candidate(q: &SearchQuery, m: u32, r: u64) -> Option<Key> {
    let mr = m as u64 * r;
    let max_n = max_length(q, m, r)?;
    let mut n = (mr / r + 1) * r;
    while n <= max_n {
        if feasible(q, m, n, r) {
            return Some((keysize(Variant::Dyadic, m, n, r), n, m, r));
        }
        n += r;
    }
    None
}

/// Lower bound on the generic key size at `(m, r)` for any feasible `n`.
///
/// The workfactor never exceeds the information-set term
/// `log2(C(n,w)/C(n-k,w)) <= w log2((n-w+1)/(n-k-w+1))`, which forces
/// `k >= (mr-w+1)(2^(target/w)-1)`.
fn generic_lower_bound(q: &SearchQuery, m: u32, r: u64) -> u64 {
    let mr = m as u64 * r;
    let w_max = match q.decoder {
        Decoder::Ud => r,
        Decoder::Ld => match radii((4 * r + 2).max(mr + 1), r) {
            Ok(x) => x.ld_errors,
            Err(_) => return u64::MAX,
        },
    };
    if w_max >= mr {
        return 0;
    }
    let kmin = ((mr - w_max + 1) as f64 * ((q.target_wf / w_max as f64).exp2() - 1.0)).floor();
    (mr as f64 * kmin.max(1.0)).min(u64::MAX as f64) as u64
}

/// Searches the parameter grid for the smallest key meeting the query.
///
/// Ties are broken towards smaller `n`, then smaller `m`, then smaller `r`.
/// Returns `None` when nothing in the grid is feasible.
pub fn search(q: &SearchQuery) -> Result<Option<ParamRow>> {
    if !(60.0..=300.0).contains(&q.target_wf) {
        return Err(Error::Parameter(format!(
            "target workfactor {} outside [60, 300]",
            q.target_wf
        )));
    }
    let grid: Vec<(u32, u64)> = SEARCH_M
        .flat_map(|m| {
            let q_order = 1u64 << m;
            let rs: Vec<u64> = match q.variant {
                Variant::Generic => (1..q_order / m as u64).collect(),
                Variant::Dyadic => (0..m).map(|j| 1u64 << j).filter(|&r| 2 * r <= q_order).collect(),
            };
            rs.into_iter().map(move |r| (m, r))
        })
        .collect();
    let best = AtomicU64::new(u64::MAX);
    let found = grid
        .par_iter()
        .filter_map(|&(m, r)| {
            if q.variant == Variant::Generic
                && generic_lower_bound(q, m, r) > best.load(Ordering::Relaxed)
            {
                return None;
            }
            let cand = match q.variant {
                Variant::Generic => generic_candidate(q, m, r),
                Variant::Dyadic => dyadic_candidate(q, m, r),
            }?;
            best.fetch_min(cand.0, Ordering::Relaxed);
            Some(cand)
        })
        .min();
    let Some((keysize, n, m, r)) = found else {
        return Ok(None);
    };
    let k = n - m as u64 * r;
    let w = weight(q.decoder, n, r).expect("feasible rows have a weight");
    Ok(Some(ParamRow {
        method: match q.decoder {
            Decoder::Ud => Method::Ud,
            Decoder::Ld => Method::Ld,
        },
        m,
        n,
        k,
        r,
        tau2: (q.decoder == Decoder::Ld).then_some(w),
        wf: fs_workfactor(n, k, w)?,
        keysize,
        gain: None,
    }))
}
