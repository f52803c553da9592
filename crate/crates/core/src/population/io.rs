//! CSV ingestion. Every format starts with one header row.
//!
//! - scores: one real per line
//! - exam: three comma-separated reals per line (one per subject)
//! - cdf: `score,cumulative_prob` per line

use std::io::Read;

use crate::error::{Error, Result};

fn rows<R: Read>(reader: R, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in csv.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(Error::Parse {
                line,
                reason: format!("expected {width} field(s), found {}", record.len()),
            });
        }
        let values = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    reason: format!("not a number: {field:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(values);
    }
    Ok(out)
}

pub fn read_scores<R: Read>(reader: R) -> Result<Vec<f64>> {
    Ok(rows(reader, 1)?.into_iter().map(|r| r[0]).collect())
}

pub fn read_exam<R: Read>(reader: R) -> Result<Vec<[f64; 3]>> {
    Ok(rows(reader, 3)?.into_iter().map(|r| [r[0], r[1], r[2]]).collect())
}

pub fn read_cdf_table<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    Ok(rows(reader, 2)?.into_iter().map(|r| (r[0], r[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_each_format() {
        assert_eq!(read_scores("score\n0.25\n 0.5 \n".as_bytes()).unwrap(), vec![0.25, 0.5]);
        assert_eq!(read_exam("a,b,c\n60,70,80\n".as_bytes()).unwrap(), vec![[60.0, 70.0, 80.0]]);
        assert_eq!(
            read_cdf_table("score,cumulative_prob\n0,0\n1,1\n".as_bytes()).unwrap(),
            vec![(0.0, 0.0), (1.0, 1.0)]
        );
    }

    #[test]
    fn reports_line_of_bad_row() {
        let err = read_cdf_table("score,cumulative_prob\n0,0\n0.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = read_scores("score\nabc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }
}
