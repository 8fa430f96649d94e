use std::io::{Read, Write};
use std::path::Path;

use super::grid::ExperimentRecord;
use crate::error::Result;

pub const CSV_HEADER: [&str; 11] = [
    "driver",
    "objective",
    "d",
    "beta",
    "T",
    "replication",
    "seed",
    "error",
    "queries",
    "wall_ms",
    "aborted",
];

/// 17 significant digits, enough to round-trip any `f64`.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a header and one row per record.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.driver.as_str().to_string(),
            r.objective.clone(),
            r.d.to_string(),
            real(r.beta),
            r.horizon.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            real(r.error),
            r.queries.to_string(),
            real(r.wall_ms),
            r.aborted.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn emit_csv(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_csv(records, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    read_csv(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::DriverKind;

    fn record(error: f64) -> ExperimentRecord {
        ExperimentRecord {
            driver: DriverKind::Pl,
            objective: "quad-sin2:s=1".into(),
            d: 2,
            beta: 2.5,
            horizon: 256,
            replication: 3,
            seed: u64::MAX - 7,
            error,
            queries: 512,
            wall_ms: 0.123456789,
            aborted: false,
        }
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(to_csv_string(&[]), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn one_record_two_lines() {
        let s = to_csv_string(&[record(0.1)]);
        assert_eq!(s.lines().count(), 2);
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let recs: Vec<_> = [0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.5e-17]
            .into_iter()
            .map(record)
            .collect();
        let back = read_csv(to_csv_string(&recs).as_bytes()).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.error.to_bits(), b.error.to_bits());
            assert_eq!(a.beta.to_bits(), b.beta.to_bits());
            assert_eq!(a.wall_ms.to_bits(), b.wall_ms.to_bits());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn nan_errors_survive() {
        let mut r = record(f64::NAN);
        r.aborted = true;
        let back = read_csv(to_csv_string(&[r]).as_bytes()).unwrap();
        assert!(back[0].error.is_nan() && back[0].aborted);
    }
}
