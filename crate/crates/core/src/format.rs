//! Canonical float formatting used by every file this crate writes.
//!
//! Values are rounded to 9 significant digits. Magnitudes in `[1e-5, 1e9)`
//! print in positional notation, everything else in scientific notation
//! (`1.5e-7`). Trailing zeros are trimmed, negative zero prints as `0`.

const SIG_DIGITS: usize = 9;

/// Formats `value` in the canonical 9-significant-digit form.
pub fn canonical(value: f64) -> String {
    if value.is_nan() {
        return "NaN".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }

    // `{:.8e}` rounds correctly to 9 significant digits; take the digits and
    // the post-rounding exponent from it.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::with_capacity(16);
    if negative {
        out.push('-');
    }
    if (-5..9).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(digits);
        } else {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(digits);
                for _ in digits.len()..int_len {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Rounds `value` to what [`canonical`] would print.
pub fn round_canonical(value: f64) -> f64 {
    canonical(value).parse().unwrap_or(value)
}
