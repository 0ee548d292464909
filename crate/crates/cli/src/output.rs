//! Shared output plumbing: format selection and float rendering.

use clap::ValueEnum;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Render with 17 significant digits so values round-trip through f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for &x in &[1.0, -0.5, std::f64::consts::PI, 1e-300, 6.02e23] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
