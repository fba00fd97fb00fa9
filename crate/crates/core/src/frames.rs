//! Young frames, their representation dimensions, and the scalar entropy
//! helpers used throughout the crate.
//!
//! A [`Partition`] is a bare weakly decreasing list of positive parts. A
//! [`YoungFrame`] is a partition with a row budget `d`, stored zero-padded to
//! exactly `d` rows; it labels both an irreducible representation of `S_n`
//! (dimension [`dim_sym`]) and one of `U(d)` (dimension [`dim_unitary`]).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest row budget accepted for a [`YoungFrame`].
pub const MAX_ROWS: usize = 4;
/// Largest box count accepted for a [`YoungFrame`].
pub const MAX_BOXES: usize = 16;

/// Anything that can be read as weakly decreasing row lengths. Trailing
/// zero rows are allowed and ignored.
pub trait Shape {
    fn rows(&self) -> &[usize];

    fn size(&self) -> usize {
        self.rows().iter().sum()
    }

    /// Number of nonzero rows.
    fn length(&self) -> usize {
        self.rows().iter().take_while(|&&r| r > 0).count()
    }

    /// Row `i` (0-based), zero beyond the stored rows.
    fn row(&self, i: usize) -> usize {
        self.rows().get(i).copied().unwrap_or(0)
    }

    fn parts(&self) -> &[usize] {
        &self.rows()[..self.length()]
    }
}

/// An integer partition without a row budget: positive parts, weakly
/// decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Accepts trailing zeros; rejects increases.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        check_decreasing(&parts)?;
        let len = parts.iter().take_while(|&&p| p > 0).count();
        let mut parts = parts;
        parts.truncate(len);
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..first)
                .map(|c| self.0.iter().filter(|&&r| r > c).count())
                .collect(),
        )
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Partitions of `n` in decreasing lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        partitions_bounded(n, n, n, &mut Vec::new(), &mut out);
        out.into_iter().map(Partition).collect()
    }
}

impl Shape for Partition {
    fn rows(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.0)
    }
}

/// A partition with at most `d` nonzero rows, stored zero-padded to exactly
/// `d` rows. Equality compares the padded rows (and therefore `d`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungFrame {
    rows: Vec<usize>,
}

impl YoungFrame {
    pub fn new(rows: &[usize], d: usize) -> Result<Self> {
        if d == 0 || d > MAX_ROWS {
            return Err(Error::CapExceeded {
                what: "row budget d",
                value: d,
                cap: MAX_ROWS,
            });
        }
        check_decreasing(rows)?;
        let nonzero = rows.iter().take_while(|&&r| r > 0).count();
        if nonzero > d {
            return Err(Error::InvalidFrame(format!(
                "{} has {nonzero} nonzero rows but d = {d}",
                RowsDisplay(rows)
            )));
        }
        let n: usize = rows.iter().sum();
        if n > MAX_BOXES {
            return Err(Error::CapExceeded {
                what: "box count n",
                value: n,
                cap: MAX_BOXES,
            });
        }
        let mut padded = rows[..nonzero].to_vec();
        padded.resize(d, 0);
        Ok(YoungFrame { rows: padded })
    }

    pub fn from_partition(p: &Partition, d: usize) -> Result<Self> {
        YoungFrame::new(p.rows(), d)
    }

    /// The frame with no boxes.
    pub fn empty(d: usize) -> Result<Self> {
        YoungFrame::new(&[], d)
    }

    /// The single-row frame `(n, 0, …, 0)`.
    pub fn single_row(n: usize, d: usize) -> Result<Self> {
        YoungFrame::new(&[n], d)
    }

    /// Parses comma-separated row lengths such as `"4,2,1"`. An empty string
    /// is the empty frame. Error positions are byte offsets into `text`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let rows = parse_rows(text)?;
        YoungFrame::new(&rows, d)
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn partition(&self) -> Partition {
        Partition(self.parts().to_vec())
    }

    /// Same frame with a different row budget.
    pub fn with_d(&self, d: usize) -> Result<Self> {
        YoungFrame::new(&self.rows, d)
    }

    /// `true` when `self` fits inside `outer` row by row.
    pub fn fits_in(&self, outer: &impl Shape) -> bool {
        (0..self.length()).all(|i| self.row(i) <= outer.row(i))
    }
}

impl Shape for YoungFrame {
    fn rows(&self) -> &[usize] {
        &self.rows
    }
}

impl fmt::Display for YoungFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.rows)
    }
}

impl Serialize for YoungFrame {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct RowsDisplay<'a>(&'a [usize]);

impl fmt::Display for RowsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, self.0)
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, rows: &[usize]) -> fmt::Result {
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{r}")?;
    }
    Ok(())
}

fn check_decreasing(rows: &[usize]) -> Result<()> {
    for (i, w) in rows.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::InvalidFrame(format!(
                "{} is not weakly decreasing at row {}",
                RowsDisplay(rows),
                i + 2
            )));
        }
    }
    Ok(())
}

/// Parses `"a,b,c"` into row lengths, checking weak decrease. Whitespace
/// around entries is allowed.
pub fn parse_rows(text: &str) -> Result<Vec<usize>> {
    let mut rows = Vec::new();
    if text.trim().is_empty() {
        return Ok(rows);
    }
    let mut offset = 0;
    for field in text.split(',') {
        let trimmed = field.trim();
        let start = offset + field.find(|c: char| !c.is_whitespace()).unwrap_or(0);
        let value: usize = trimmed.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("expected a non-negative integer, found {trimmed:?}"),
        })?;
        if let Some(&prev) = rows.last() {
            if value > prev {
                return Err(Error::Parse {
                    position: start,
                    message: format!("row length {value} exceeds the previous row {prev}"),
                });
            }
        }
        rows.push(value);
        offset += field.len() + 1;
    }
    Ok(rows)
}

fn partitions_bounded(
    n: usize,
    max_part: usize,
    max_len: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    if max_len == 0 {
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        // The remaining rows can hold at most part * (max_len - 1) boxes.
        if part * max_len < n {
            break;
        }
        prefix.push(part);
        partitions_bounded(n - part, part, max_len - 1, prefix, out);
        prefix.pop();
    }
}

/// `YF_{d,n}` in decreasing lexicographic order, e.g. `(4,0), (3,1), (2,2)`
/// for `d = 2, n = 4`.
pub fn enumerate_frames(d: usize, n: usize) -> Result<Vec<YoungFrame>> {
    if d == 0 || d > MAX_ROWS {
        return Err(Error::CapExceeded {
            what: "row budget d",
            value: d,
            cap: MAX_ROWS,
        });
    }
    if n > MAX_BOXES {
        return Err(Error::CapExceeded {
            what: "box count n",
            value: n,
            cap: MAX_BOXES,
        });
    }
    let mut raw = Vec::new();
    partitions_bounded(n, n, d, &mut Vec::new(), &mut raw);
    Ok(raw
        .into_iter()
        .map(|mut rows| {
            rows.resize(d, 0);
            YoungFrame { rows }
        })
        .collect())
}

/// Same as [`enumerate_frames`] for `d, n` already known to be in range.
pub(crate) fn frames_of(d: usize, n: usize) -> Vec<YoungFrame> {
    enumerate_frames(d, n).expect("row budget and box count within caps")
}

fn hooks(shape: &impl Shape) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    let parts = shape.parts();
    let conj = Partition(parts.to_vec()).conjugate();
    let conj = conj.into_vec();
    parts.iter().enumerate().flat_map(move |(i, &row)| {
        let conj = conj.clone();
        (0..row).map(move |j| (i, j, (row - j - 1) + (conj[j] - i - 1) + 1))
    })
}

/// `dim F_λ`, the number of standard Young tableaux of shape `λ`, by the
/// hook-length formula.
pub fn dim_sym(shape: &impl Shape) -> u64 {
    let n = shape.size();
    let numer: u128 = (1..=n as u128).product();
    let denom: u128 = hooks(shape).map(|(_, _, h)| h as u128).product();
    (numer / denom) as u64
}

/// `dim U^d_λ`, the number of semistandard tableaux of shape `λ` with entries
/// in `1..=d`, by the hook-content formula. Zero when `λ` has more than `d`
/// nonzero rows.
pub fn dim_unitary(shape: &impl Shape, d: usize) -> u64 {
    if shape.length() > d {
        return 0;
    }
    let mut numer: u128 = 1;
    let mut denom: u128 = 1;
    for (i, j, h) in hooks(shape) {
        numer *= (d + j - i) as u128;
        denom *= h as u128;
    }
    (numer / denom) as u64
}

/// A probability distribution on `{0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityPair {
    p0: f64,
}

impl ProbabilityPair {
    pub fn new(p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::Domain {
                value: p0.to_string(),
                domain: "[0, 1]",
            });
        }
        Ok(ProbabilityPair { p0 })
    }

    /// The pair with `p(1) = p1`.
    pub fn with_p1(p1: f64) -> Result<Self> {
        ProbabilityPair::new(1.0 - p1).and_then(|p| {
            if (0.0..=1.0).contains(&p1) {
                Ok(p)
            } else {
                Err(Error::Domain {
                    value: p1.to_string(),
                    domain: "[0, 1]",
                })
            }
        })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }

    fn masses(&self) -> [f64; 2] {
        [self.p0(), self.p1()]
    }
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            value: t.to_string(),
            domain: "[0, 1]",
        });
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(t) + term(1.0 - t))
}

/// `D(r||s)` in bits; `+∞` unless `s` dominates `r`.
pub fn rel_entropy(r: &ProbabilityPair, s: &ProbabilityPair) -> f64 {
    let mut total = 0.0;
    for (rx, sx) in r.masses().into_iter().zip(s.masses()) {
        if rx == 0.0 {
            continue;
        }
        if sx == 0.0 {
            return f64::INFINITY;
        }
        total += rx * (rx / sx).log2();
    }
    total
}

/// `‖r − s‖₁`.
pub fn l1_distance(r: &ProbabilityPair, s: &ProbabilityPair) -> f64 {
    r.masses()
        .into_iter()
        .zip(s.masses())
        .map(|(a, b)| (a - b).abs())
        .sum()
}

/// Pinsker's lower bound on `D(r||s)` in bits: `‖r − s‖₁² / (2 ln 2)`.
pub fn pinsker_lower_bound(r: &ProbabilityPair, s: &ProbabilityPair) -> f64 {
    l1_distance(r, s).powi(2) / (2.0 * std::f64::consts::LN_2)
}

/// `2^{-a·D}` with the convention that it is zero when `D = ∞`.
pub fn exp2_neg(a: f64, divergence: f64) -> f64 {
    if divergence.is_infinite() {
        0.0
    } else {
        (-a * divergence).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(rows: &[usize], d: usize) -> YoungFrame {
        YoungFrame::new(rows, d).unwrap()
    }

    #[test]
    fn enumerates_two_row_frames_in_decreasing_lex_order() {
        let got = enumerate_frames(2, 4).unwrap();
        assert_eq!(
            got,
            vec![frame(&[4, 0], 2), frame(&[3, 1], 2), frame(&[2, 2], 2)]
        );
        assert_eq!(enumerate_frames(1, 7).unwrap(), vec![frame(&[7], 1)]);
        assert_eq!(enumerate_frames(3, 0).unwrap(), vec![frame(&[], 3)]);
    }

    #[test]
    fn frames_are_padded_and_compared_canonically() {
        let a = frame(&[2, 1], 3);
        assert_eq!(a.rows(), &[2, 1, 0]);
        assert_eq!(a, frame(&[2, 1, 0], 3));
        assert_eq!(a.to_string(), "2,1,0");
        assert_eq!(a.partition().rows(), &[2, 1]);
    }

    #[test]
    fn frame_validation() {
        assert!(YoungFrame::new(&[1, 2], 2).is_err());
        assert!(YoungFrame::new(&[2, 1, 1], 2).is_err());
        assert!(YoungFrame::new(&[1], 5).is_err());
        assert!(YoungFrame::new(&[17], 1).is_err());
        assert!(YoungFrame::new(&[1, 0, 1], 3).is_err());
    }

    #[test]
    fn parse_reports_position() {
        assert_eq!(YoungFrame::parse("4,2,1", 3).unwrap(), frame(&[4, 2, 1], 3));
        assert_eq!(YoungFrame::parse("", 2).unwrap(), frame(&[], 2));
        match YoungFrame::parse("2,3", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        match YoungFrame::parse("2, x", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            YoungFrame::parse("2,1,1", 2),
            Err(Error::InvalidFrame(_))
        ));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_sym(&frame(&[5, 0], 2)), 1);
        assert_eq!(dim_sym(&Partition::new(vec![1, 1, 1]).unwrap()), 1);
        assert_eq!(dim_sym(&frame(&[2, 1], 2)), 2);
        assert_eq!(dim_sym(&frame(&[], 2)), 1);
        for d in 1..=4 {
            assert_eq!(dim_unitary(&frame(&[1], d), d), d as u64);
        }
        for n in 0..=10 {
            assert_eq!(dim_unitary(&frame(&[n], 2), 2), n as u64 + 1);
        }
        assert_eq!(dim_unitary(&frame(&[2, 2], 2), 2), 1);
        assert_eq!(dim_unitary(&Partition::new(vec![1, 1, 1]).unwrap(), 2), 0);
    }

    #[test]
    fn conjugate_partition() {
        let p = Partition::new(vec![4, 2, 1]).unwrap();
        assert_eq!(p.conjugate().rows(), &[3, 2, 1, 1]);
        assert_eq!(Partition::all(4).len(), 5);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        // -(1/4)log2(1/4) - (3/4)log2(3/4) = 2 - (3/4)log2(3)
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((binary_entropy(0.25).unwrap() - expected).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let r = ProbabilityPair::new(0.3).unwrap();
        assert_eq!(rel_entropy(&r, &r), 0.0);
        let point0 = ProbabilityPair::new(1.0).unwrap();
        let point1 = ProbabilityPair::new(0.0).unwrap();
        assert!(rel_entropy(&point0, &point1).is_infinite());
        assert_eq!(exp2_neg(2.0, rel_entropy(&point0, &point1)), 0.0);
        let fair = ProbabilityPair::new(0.5).unwrap();
        assert!((rel_entropy(&point0, &fair) - 1.0).abs() < 1e-15);
        assert!(ProbabilityPair::new(1.2).is_err());
        assert!((ProbabilityPair::with_p1(0.25).unwrap().p0() - 0.75).abs() < 1e-15);
    }
}
