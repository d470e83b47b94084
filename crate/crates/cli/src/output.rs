//! Deterministic text output: C-style `%.10e` floats and CSV emission.

use std::fmt::Write as _;

/// Unit comment emitted at the top of every CSV file and report.
pub const UNIT_COMMENT: &str = "# lengths in (m w)^-1/2, densities in m*w, T in units of w";

/// Format a float exactly like C's `%.10e` (two-digit signed exponent).
pub fn fmt_e(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0" mantissas so reruns are byte-identical
        return "0.0000000000e+00".to_string();
    }
    let s = format!("{:.10e}", x);
    let (mant, exp) = s.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{}e{:+03}", mant, exp)
}

/// Render one CSV row of floats.
pub fn csv_row(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{}", fmt_e(*v));
    }
    line
}

/// Render a full CSV document: unit comment, header, rows.
pub fn csv_document(header: &str, rows: &[Vec<f64>]) -> String {
    let mut doc = String::new();
    doc.push_str(UNIT_COMMENT);
    doc.push('\n');
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(&csv_row(row));
        doc.push('\n');
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(fmt_e(1.0 / 3.0), "3.3333333333e-01");
        assert_eq!(fmt_e(-12345.678), "-1.2345678000e+04");
        assert_eq!(fmt_e(0.0), "0.0000000000e+00");
        assert_eq!(fmt_e(-0.0), "0.0000000000e+00");
        assert_eq!(fmt_e(2.5e-123), "2.5000000000e-123");
    }

    #[test]
    fn csv_layout() {
        let doc = csv_document("a,b", &[vec![1.0, 2.0]]);
        let lines: Vec<&str> = doc.lines().collect();
        assert_eq!(lines[0], UNIT_COMMENT);
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1.0000000000e+00,2.0000000000e+00");
    }
}
