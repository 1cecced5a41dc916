//! Deterministic CSV assembly: 12 significant digits, `.` decimal
//! separator, `\n` line endings, `# zeno-lab v1` header plus a config
//! echo on every file.

use crate::config::RunConfig;

/// Format with 12 significant digits in scientific notation. Negative
/// zero is normalized so byte-identical reruns do not depend on sign
/// tricks in intermediate arithmetic.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub struct Csv {
    body: String,
}

impl Csv {
    pub fn new(config: &RunConfig, columns: &[&str]) -> Self {
        let mut body = String::from("# zeno-lab v1\n");
        for line in config.echo_lines() {
            body.push_str(&line);
            body.push('\n');
        }
        body.push_str(&columns.join(","));
        body.push('\n');
        Csv { body }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.body.push_str(&fields.join(","));
        self.body.push('\n');
    }

    pub fn comment(&mut self, line: &str) {
        self.body.push_str(line);
        self.body.push('\n');
    }

    pub fn into_string(self) -> String {
        self.body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_twelve_significant_digits() {
        assert_eq!(fmt_g(0.002), "2.00000000000e-3");
        assert_eq!(fmt_g(0.04 / 13.0), "3.07692307692e-3");
        assert_eq!(fmt_g(0.0), "0.00000000000e0");
        assert_eq!(fmt_g(-0.0), "0.00000000000e0");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
        assert_eq!(fmt_g(1234.5), "1.23450000000e3");
    }
}
