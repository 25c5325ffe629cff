//! Plain-decimal rendering with a fixed number of significant digits.

/// Renders `x` rounded to `digits` significant digits as a plain decimal
/// (no exponent), trailing zeros trimmed. Parsing the output and rendering
/// it again gives the same string.
pub fn significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits_only: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let mut body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_only)
    } else if point as usize >= digits_only.len() {
        format!(
            "{}{}",
            digits_only,
            "0".repeat(point as usize - digits_only.len())
        )
    } else {
        let (int, frac) = digits_only.split_at(point as usize);
        format!("{int}.{frac}")
    };
    if body.contains('.') {
        while body.ends_with('0') {
            body.pop();
        }
        if body.ends_with('.') {
            body.pop();
        }
    }
    format!("{sign}{body}")
}
