//! CSV and JSON writers for sampled solutions.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64`. Pole cells carry `pole_flag = 1` and empty
//! (CSV) or `null` (JSON) values.

use std::io::{self, Write};

use clap::ValueEnum;

use crate::solutions::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Rows of coordinates plus one sampled value each.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub coordinates: Vec<&'static str>,
    pub rows: Vec<(Vec<f64>, Sample)>,
}

pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Value columns of a cell; non-finite values are treated like poles.
fn cell(sample: &Sample) -> Option<(f64, f64)> {
    sample.value().filter(|v| v.re.is_finite() && v.im.is_finite()).map(|v| (v.re, v.im))
}

impl Table {
    pub fn new(coordinates: Vec<&'static str>) -> Self {
        Self { coordinates, rows: Vec::new() }
    }

    pub fn header(&self) -> String {
        let mut cols: Vec<&str> = self.coordinates.clone();
        cols.extend(["re_u", "im_u", "pole_flag"]);
        cols.join(",")
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "{}", self.header())?;
        for (coords, sample) in &self.rows {
            let mut fields: Vec<String> = coords.iter().map(|&c| number(c)).collect();
            match cell(sample) {
                Some((re, im)) => fields.extend([number(re), number(im), "0".into()]),
                None => fields.extend([String::new(), String::new(), "1".into()]),
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "[")?;
        for (i, (coords, sample)) in self.rows.iter().enumerate() {
            let mut fields: Vec<String> =
                self.coordinates.iter().zip(coords).map(|(k, &c)| format!("\"{k}\":{}", number(c))).collect();
            match cell(sample) {
                Some((re, im)) => {
                    fields.extend([format!("\"re_u\":{}", number(re)), format!("\"im_u\":{}", number(im))]);
                    fields.push("\"pole_flag\":0".into());
                }
                None => fields.extend(["\"re_u\":null".into(), "\"im_u\":null".into(), "\"pole_flag\":1".into()]),
            }
            let sep = if i + 1 == self.rows.len() { "" } else { "," };
            writeln!(w, "  {{{}}}{sep}", fields.join(","))?;
        }
        writeln!(w, "]")
    }
}
