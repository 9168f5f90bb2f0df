//! Number formatting for text output.

/// Formats `x` with six significant digits, dropping trailing zeros.
/// Magnitudes outside `[1e-5, 1e6)` use exponent notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

pub fn sig6_list(v: &[f64]) -> String {
    v.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(" ")
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Parses a decimal or a fraction `p/q`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("invalid numerator in {s:?}"))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| format!("invalid denominator in {s:?}"))?;
            p / q
        }
        None => s
            .trim()
            .parse()
            .map_err(|_| format!("invalid number {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s:?} is not a finite number"))
    }
}
