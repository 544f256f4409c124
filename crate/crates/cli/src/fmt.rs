//! Number formatting: round to a fixed count of significant digits, then print
//! the shortest decimal that reads back to the rounded value.

pub const REPORT_DIGITS: usize = 9;
pub const CSV_DIGITS: usize = 15;

pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.max(1) - 1, x)
        .parse()
        .expect("formatted float parses");
    let mag = rounded.abs();
    if rounded == 0.0 || (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn report(x: f64) -> String {
    sig(x, REPORT_DIGITS)
}

pub fn csv(x: f64) -> String {
    sig(x, CSV_DIGITS)
}
