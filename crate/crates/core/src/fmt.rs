//! Deterministic number formatting for CSV output.
//!
//! All floating-point values are rendered with exactly 12 significant digits,
//! '.' decimal separator and no locale dependence, so repeated runs produce
//! byte-identical files.

/// Formats `x` with exactly 12 significant digits.
///
/// Values with decimal exponent in [-4, 12) use fixed notation, everything
/// else scientific (`d.ddddddddddde±X`). The fixed rendering is derived from
/// the scientific digits, so no double rounding occurs.
pub fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        // CSV consumers get a parseable token; callers are expected to keep
        // non-finite values out of reports.
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.11e}", x); // d.ddddddddddde<exp>
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..12).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);
    let sign = if neg { "-" } else { "" };
    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), digits)
    } else if (point as usize) >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    format!("{sign}{body}")
}
