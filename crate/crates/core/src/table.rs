//! CSV and JSON forms of spectral tables. Rationals are always written as
//! exact `num/den` strings; the float column is for plotting only.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{to_exact_string, to_f64, ExactScalar};
use crate::spectral::SpectralTable;

pub const CSV_HEADER: [&str; 4] = [
    "frame",
    "weight_numerator",
    "weight_denominator",
    "weight_float",
];

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::SizeMismatch(format!("csv output: {e}"))
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

fn float_cell(value: &ExactScalar) -> String {
    to_f64(value).to_string()
}

/// One row per frame; frame cells such as `"4,0"` come out quoted.
pub fn to_csv(table: &SpectralTable, include_zeros: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for (frame, weight) in table.entries() {
        if !include_zeros && weight.is_zero() {
            continue;
        }
        w.write_record([
            frame.to_string(),
            weight.numer().to_string(),
            weight.denom().to_string(),
            float_cell(weight),
        ])
        .map_err(csv_error)?;
    }
    finish(w)
}

#[derive(Serialize)]
struct JsonRow {
    frame: String,
    weight: String,
    weight_float: f64,
}

#[derive(Serialize)]
struct JsonTable {
    d: usize,
    n: usize,
    total: String,
    rows: Vec<JsonRow>,
}

/// Mirror of [`to_csv`] with exact weights as `"num/den"` strings.
pub fn to_json(table: &SpectralTable, include_zeros: bool) -> Result<String> {
    let rows = table
        .entries()
        .iter()
        .filter(|(_, w)| include_zeros || !w.is_zero())
        .map(|(f, w)| JsonRow {
            frame: f.to_string(),
            weight: to_exact_string(w),
            weight_float: to_f64(w),
        })
        .collect();
    let doc = JsonTable {
        d: table.d(),
        n: table.n(),
        total: to_exact_string(&table.total()),
        rows,
    };
    serde_json::to_string_pretty(&doc).map_err(csv_error)
}

/// Aligned text for terminals.
pub fn to_text(table: &SpectralTable, include_zeros: bool) -> String {
    let rows: Vec<(String, String, String)> = table
        .entries()
        .iter()
        .filter(|(_, w)| include_zeros || !w.is_zero())
        .map(|(f, w)| {
            (
                f.to_string(),
                to_exact_string(w),
                format!("{:.12}", to_f64(w)),
            )
        })
        .collect();
    let fw = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
    let ww = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<fw$}  {:<ww$}  float\n", "frame", "weight");
    for (f, w, x) in rows {
        out.push_str(&format!("{f:<fw$}  {w:<ww$}  {x}\n"));
    }
    out
}

/// A `λ' × q` matrix of channel output probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub q_labels: Vec<String>,
    pub columns: Vec<SpectralTable>,
}

impl Sweep {
    /// Per column, the heaviest frame.
    pub fn modes(&self) -> Vec<Option<String>> {
        self.columns
            .iter()
            .map(|t| t.mode().map(|f| f.to_string()))
            .collect()
    }
}

/// Header `frame,q=<label>,...`; exact weights.
pub fn sweep_to_csv(sweep: &Sweep, exact: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["frame".to_string()];
    header.extend(sweep.q_labels.iter().map(|q| format!("q={q}")));
    w.write_record(&header).map_err(csv_error)?;
    let Some(first) = sweep.columns.first() else {
        return finish(w);
    };
    for (i, (frame, _)) in first.entries().iter().enumerate() {
        let mut record = vec![frame.to_string()];
        for col in &sweep.columns {
            let v = &col.entries()[i].1;
            record.push(if exact {
                to_exact_string(v)
            } else {
                float_cell(v)
            });
        }
        w.write_record(&record).map_err(csv_error)?;
    }
    finish(w)
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    q: &'a [String],
    rows: Vec<JsonSweepRow>,
}

#[derive(Serialize)]
struct JsonSweepRow {
    frame: String,
    weights: Vec<String>,
}

pub fn sweep_to_json(sweep: &Sweep) -> Result<String> {
    let rows = match sweep.columns.first() {
        None => Vec::new(),
        Some(first) => first
            .entries()
            .iter()
            .enumerate()
            .map(|(i, (frame, _))| JsonSweepRow {
                frame: frame.to_string(),
                weights: sweep
                    .columns
                    .iter()
                    .map(|c| to_exact_string(&c.entries()[i].1))
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&JsonSweep {
        q: &sweep.q_labels,
        rows,
    })
    .map_err(csv_error)
}

/// Reads back the exact weights written by [`to_csv`].
pub fn parse_csv_weights(text: &str) -> Result<Vec<(String, ExactScalar)>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(csv_error)?;
            let frame = rec.get(0).unwrap_or_default().to_string();
            let numer = crate::rational::parse_rational(rec.get(1).unwrap_or_default())?;
            let denom = crate::rational::parse_rational(rec.get(2).unwrap_or_default())?;
            Ok((frame, numer / denom))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::YoungFrame;
    use crate::rational::{int, parse_rational};
    use crate::spectral::{channel_output_spectrum, twirl_spectrum};

    fn lambda() -> YoungFrame {
        YoungFrame::new(&[4, 0], 2).unwrap()
    }

    #[test]
    fn csv_layout() {
        let t = twirl_spectrum(&lambda(), 1, 2, true).unwrap();
        let csv = to_csv(&t, false).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "frame,weight_numerator,weight_denominator,weight_float"
        );
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("\"4,0\","));
        assert!(lines[2].starts_with("\"3,1\","));
        let all = to_csv(&t, true).unwrap();
        assert_eq!(all.lines().count(), 4);
    }

    #[test]
    fn csv_and_json_carry_the_same_rationals() {
        let t = channel_output_spectrum(&lambda(), &crate::rational::ratio(1, 3), 2).unwrap();
        let from_csv = parse_csv_weights(&to_csv(&t, true).unwrap()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&to_json(&t, true).unwrap()).unwrap();
        let rows = json["rows"].as_array().unwrap();
        assert_eq!(rows.len(), from_csv.len());
        for ((frame, w), row) in from_csv.iter().zip(rows) {
            assert_eq!(row["frame"].as_str().unwrap(), frame);
            assert_eq!(&parse_rational(row["weight"].as_str().unwrap()).unwrap(), w);
        }
        assert_eq!(json["total"], "1/1");
        let sum: ExactScalar = from_csv.iter().map(|(_, w)| w).sum();
        assert_eq!(sum, int(1));
    }

    #[test]
    fn sweep_layout() {
        let tables: Vec<_> = [int(0), int(1)]
            .iter()
            .map(|q| channel_output_spectrum(&lambda(), q, 2).unwrap())
            .collect();
        let sweep = Sweep {
            q_labels: vec!["0".into(), "1".into()],
            columns: tables,
        };
        let csv = sweep_to_csv(&sweep, true).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "frame,q=0,q=1");
        assert_eq!(lines[1], "\"4,0\",1/1,5/16");
        assert_eq!(lines.len(), 4);
        assert_eq!(sweep.modes()[0].as_deref(), Some("4,0"));
        let json: serde_json::Value =
            serde_json::from_str(&sweep_to_json(&sweep).unwrap()).unwrap();
        assert_eq!(json["rows"][2]["weights"][1], "1/8");
        assert!(to_text(&sweep.columns[1], false).contains("3,1"));
    }
}
