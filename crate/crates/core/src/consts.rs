//! Named irrational constants, parsed once from 50-digit decimal expansions.
//!
//! `str::parse::<f64>` rounds correctly, so each constant is the nearest
//! double to the true value.

use crate::error::{invalid, Result};

pub const CBRT2_DIGITS: &str = "1.2599210498948731647672106072782283505702514647015";
pub const CBRT4_DIGITS: &str = "1.5874010519681994747517056392723082603914933278999";
pub const SQRT2_DIGITS: &str = "1.4142135623730950488016887242096980785696718753769";
pub const GOLDEN_DIGITS: &str = "1.6180339887498948482045868343656381177203091798058";

fn from_digits(s: &str) -> f64 {
    s.parse().expect("constant literal")
}

pub fn cbrt2() -> f64 {
    from_digits(CBRT2_DIGITS)
}

pub fn cbrt4() -> f64 {
    from_digits(CBRT4_DIGITS)
}

pub fn sqrt2() -> f64 {
    from_digits(SQRT2_DIGITS)
}

pub fn golden() -> f64 {
    from_digits(GOLDEN_DIGITS)
}

/// The shift (∛4, ∛2), a vector of Diophantine type 2.
pub fn cubic_shift() -> [f64; 2] {
    [cbrt4(), cbrt2()]
}

/// Parses a real: a decimal literal, `p/q`, one of the symbolic names
/// (`cbrt2`, `cbrt4`, `sqrt2`, `golden`, `pi`), optionally negated.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('-') {
        return parse_real(rest).map(|x| -x);
    }
    match s {
        "cbrt2" => return Ok(cbrt2()),
        "cbrt4" => return Ok(cbrt4()),
        "sqrt2" => return Ok(sqrt2()),
        "golden" => return Ok(golden()),
        "pi" => return Ok(std::f64::consts::PI),
        _ => {}
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| crate::Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| crate::Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        if q == 0.0 {
            return invalid(format!("zero denominator in {s:?}"));
        }
        return Ok(p / q);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => invalid(format!("not a real number: {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Double-double Newton iteration for x^3 = a, independent of the literals.
    fn cbrt_dd(a: f64) -> f64 {
        let mut hi = a.cbrt();
        let mut lo = 0.0f64;
        for _ in 0..3 {
            // residual r = a - (hi+lo)^3, evaluated with fused ops
            let x = hi + lo;
            let x2 = x * x;
            let e2 = x.mul_add(x, -x2);
            let x3 = x2 * x;
            let e3 = x2.mul_add(x, -x3) + e2 * x;
            let r = (a - x3) - e3;
            let corr = r / (3.0 * x2);
            let s = hi + (lo + corr);
            lo = (lo + corr) - (s - hi);
            hi = s;
        }
        hi
    }

    #[test]
    fn literals_are_correctly_rounded() {
        assert_eq!(cbrt2(), cbrt_dd(2.0));
        assert_eq!(cbrt4(), cbrt_dd(4.0));
        assert_eq!(sqrt2(), 2f64.sqrt());
        assert!((golden() - (1.0 + 5f64.sqrt()) / 2.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn parses_symbols_and_fractions() {
        assert_eq!(parse_real("cbrt4").unwrap(), cbrt4());
        assert_eq!(parse_real("-sqrt2").unwrap(), -sqrt2());
        assert_eq!(parse_real("1/2").unwrap(), 0.5);
        assert_eq!(parse_real(" 0.25 ").unwrap(), 0.25);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("inf").is_err());
    }
}
