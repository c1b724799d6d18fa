//! CSV form of sweep tables: one row per (sweep value, scheme), numbers
//! printed with 9 significant digits and `NA` for diagnostics a scheme
//! does not produce.

use std::io::{Read, Write};
use std::path::Path;

use crate::cli::sweep::Table;
use crate::error::{Error, Result};

pub const HEADER: [&str; 11] = [
    "sweep_var",
    "value",
    "scheme",
    "r_u",
    "r_d",
    "r_eq",
    "sigma_u_sq",
    "sigma_d_sq",
    "p_u_star",
    "p_d_star",
    "f_star",
];

pub const ORACLE_HEADER: [&str; 2] = ["oracle_r_u", "oracle_r_eq"];

/// One parsed CSV record. Numeric fields hold the 9-digit values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub sweep_var: String,
    pub scheme: String,
    pub values: Vec<Option<f64>>,
}

/// `%.9g`-style formatting.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_sig9)
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = HEADER.to_vec();
    if table.has_oracle {
        header.extend(ORACLE_HEADER);
    }
    w.write_record(&header)?;
    for row in &table.rows {
        let r = &row.result;
        let d = &r.diagnostics;
        let mut record = vec![
            table.sweep_var.name().to_string(),
            format_sig9(row.value),
            row.scheme.name().to_string(),
            format_sig9(r.r_u),
            format_sig9(r.r_d),
            format_sig9(r.r_eq),
            cell(d.sigma_u_sq),
            cell(d.sigma_d_sq),
            cell(d.p_u_star),
            cell(d.p_d_star),
            cell(d.f_star),
        ];
        if table.has_oracle {
            let o = row.oracle.unwrap_or_default();
            record.push(cell(o.r_u));
            record.push(cell(o.r_eq));
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(table, std::io::BufWriter::new(file))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    let expected =
        header.len() == HEADER.len() || header.len() == HEADER.len() + ORACLE_HEADER.len();
    if !expected || header.iter().zip(HEADER).any(|(a, b)| a != b) {
        return Err(Error::config(
            "csv header",
            format!("unexpected header {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut values = Vec::with_capacity(record.len() - 2);
        for (j, field) in record.iter().enumerate() {
            if j == 0 || j == 2 {
                continue;
            }
            values.push(match field {
                "NA" => None,
                s => Some(s.parse::<f64>().map_err(|e| {
                    Error::config(
                        format!("csv line {}, field {}", i + 2, &header[j]),
                        e.to_string(),
                    )
                })?),
            });
        }
        rows.push(CsvRow {
            sweep_var: record[0].to_string(),
            scheme: record[2].to_string(),
            values,
        });
    }
    Ok(rows)
}
