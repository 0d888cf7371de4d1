//! Number formatting for CSV output.

/// `x` with 9 significant digits, `.` as decimal separator. Magnitudes
/// outside `[1e-9, 1e9)` use scientific notation.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-9..9).contains(&exp) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
