//! Plain-text table output shared by the exporters.

use std::io::Write;

use crate::error::Result;

/// Fixed 17-significant-digit form used in every CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header line and rows of floats.
pub fn write_csv<W: Write>(mut w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_digits() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e7, -2.5e-300] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_shape() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], vec![vec![1.0, 2.0]]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "a,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
