//! Number formatting for the command line: a fixed 12-significant-digit
//! layout so repeated runs print identical bytes.

use num_complex::Complex64;

const SIG: usize = 12;

/// Formats like C's `%.12g`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed.
pub fn fmt_g12(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIG - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= SIG as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `re+imi` / `re-imi`.
pub fn fmt_complex(z: Complex64) -> String {
    let im = fmt_g12(z.im.abs());
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{im}i", fmt_g12(z.re))
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` (also accepts `j`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().ok()?, parse_imag(&body[i..])?),
        None => (0.0, parse_imag(body)?),
    };
    Some(Complex64::new(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_layouts() {
        assert_eq!(fmt_g12(0.0432139182637723), "0.0432139182638");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(-24.0), "-24");
        assert_eq!(fmt_g12(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g12(0.0), "0");
    }

    #[test]
    fn complex_roundtrip() {
        for (text, z) in [
            ("1.5", Complex64::new(1.5, 0.0)),
            ("1+0.5i", Complex64::new(1.0, 0.5)),
            ("1-0.5i", Complex64::new(1.0, -0.5)),
            ("-2e-3+1e+2i", Complex64::new(-2e-3, 100.0)),
            ("0.25i", Complex64::new(0.0, 0.25)),
            ("-i", Complex64::new(0.0, -1.0)),
        ] {
            assert_eq!(parse_complex(text), Some(z), "{text}");
        }
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(fmt_complex(Complex64::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(fmt_complex(Complex64::new(1.0, 0.0)), "1+0i");
    }
}
