//! CSV output: `system,strategy,section,log10_s,coord,value_lo,value_hi,ratio`.
//!
//! Per case there is one `t` row for the return time, rows `z1..zn` for the
//! map coordinates and rows `slide1..sliden` for `y + dy`; ratios are
//! `diam / s`. A failed case is a single row with coordinate `error:<kind>`
//! and `NaN` values.

use std::io::Write;

use poincare_core::interval::Interval;

use crate::error::{error_marker, Result};
use crate::runs::CaseResult;

pub const HEADER: [&str; 8] = ["system", "strategy", "section", "log10_s", "coord", "value_lo", "value_hi", "ratio"];

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub system: String,
    pub strategy: String,
    pub section: String,
    pub log10_s: f64,
    pub coord: String,
    pub lo: f64,
    pub hi: f64,
    pub ratio: f64,
}

impl Row {
    fn record(&self) -> [String; 8] {
        [
            self.system.clone(),
            self.strategy.clone(),
            self.section.clone(),
            num(self.log10_s),
            self.coord.clone(),
            num(self.lo),
            num(self.hi),
            num(self.ratio),
        ]
    }

    pub fn is_error(&self) -> bool {
        self.coord.starts_with("error")
    }
}

pub fn rows(results: &[CaseResult]) -> Vec<Row> {
    let mut out = Vec::new();
    for r in results {
        let c = &r.case;
        let row = |coord: String, v: Interval| Row {
            system: c.system.clone(),
            strategy: c.strategy.name().to_string(),
            section: c.section.name().to_string(),
            log10_s: c.s.log10(),
            coord,
            lo: v.lo(),
            hi: v.hi(),
            ratio: v.diam() / c.s,
        };
        match &r.outcome {
            Ok(o) => {
                out.push(row("t".into(), o.return_time));
                out.extend(o.z.iter().enumerate().map(|(i, v)| row(format!("z{}", i + 1), *v)));
                out.extend(o.sliding.iter().enumerate().map(|(i, v)| row(format!("slide{}", i + 1), *v)));
            }
            Err(e) => out.push(Row {
                coord: format!("error:{}", error_marker(e)),
                lo: f64::NAN,
                hi: f64::NAN,
                ratio: f64::NAN,
                ..row(String::new(), Interval::ZERO)
            }),
        }
    }
    out
}

pub fn write_rows<W: Write>(w: W, rows: &[Row]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(HEADER)?;
    for r in rows {
        wtr.write_record(r.record())?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn to_string(rows: &[Row]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

pub fn parse(text: &str) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| rec[i].parse::<f64>().unwrap_or(f64::NAN);
        out.push(Row {
            system: rec[0].to_string(),
            strategy: rec[1].to_string(),
            section: rec[2].to_string(),
            log10_s: f(3),
            coord: rec[4].to_string(),
            lo: f(5),
            hi: f(6),
            ratio: f(7),
        });
    }
    Ok(out)
}

pub fn write_angles<W: Write>(w: W, system: &str, scan: &[(f64, f64)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["system", "t", "cos_gamma"])?;
    for (t, c) in scan {
        wtr.write_record([system.to_string(), num(*t), num(*c)])?;
    }
    wtr.flush()?;
    Ok(())
}
