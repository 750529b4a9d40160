//! Text grammar for polynomials and scalars.
//!
//! Polynomials are semicolon-separated `coeff,exponent` pairs, e.g.
//! `1,0;-3,37;1,100`. Coefficients are rationals (`-3/4`) or decimals
//! (`2.5`, `1e-9`); exponents are decimal non-negative integers.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::poly::SparsePoly;
use crate::scalar::Rational;
use crate::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidRequest(msg.into())
}

/// Parse a rational or decimal scalar: `-3`, `3/4`, `2.5`, `1e-9`, `-1.25e3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(bad("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad numerator '{n}'")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad denominator '{d}'")))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    // decimal with optional exponent
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let e: i64 = e.parse().map_err(|_| bad(format!("bad exponent '{e}'")))?;
            (m, e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let neg = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if !int_digits.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || (int_digits.is_empty() && frac_part.is_empty())
    {
        return Err(bad(format!("bad number '{s}'")));
    }
    let digits = format!("{int_digits}{frac_part}");
    let val: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad(format!("bad number '{s}'")))?
    };
    let val = if neg { -val } else { val };
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let r = if shift >= 0 {
        Rational::from_integer(val * Pow::pow(ten, shift as u64))
    } else {
        Rational::new(val, Pow::pow(ten, (-shift) as u64))
    };
    Ok(r)
}

/// Parse the polynomial grammar. Duplicate exponents are summed; zero
/// coefficients drop out. `0` denotes the zero polynomial.
pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    let s = text.trim();
    if s.is_empty() || s == "0" {
        return Ok(SparsePoly::zero());
    }
    let mut terms = Vec::new();
    for piece in s.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (c, e) = piece
            .split_once(',')
            .ok_or_else(|| bad(format!("term '{piece}' is not 'coeff,exponent'")))?;
        let coeff = parse_rational(c)?;
        let exp: u64 = e
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad exponent '{e}'")))?;
        terms.push((coeff, exp));
    }
    Ok(SparsePoly::from_terms(terms))
}

/// Render a polynomial back into the grammar (canonical ascending order).
pub fn poly_to_grammar(f: &SparsePoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.terms()
        .iter()
        .map(|(c, e)| format!("{c},{e}"))
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_i64, rat_ratio};

    #[test]
    fn scalars() {
        assert_eq!(parse_rational("-3").unwrap(), rat_i64(-3));
        assert_eq!(parse_rational("3/4").unwrap(), rat_ratio(3, 4));
        assert_eq!(parse_rational("2.5").unwrap(), rat_ratio(5, 2));
        assert_eq!(parse_rational("1e-9").unwrap(), rat_ratio(1, 1_000_000_000));
        assert_eq!(parse_rational("-1.25e2").unwrap(), rat_i64(-125));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn polys() {
        let f = parse_poly("1,0;-3,37;1,100").unwrap();
        assert_eq!(f, SparsePoly::from_int_terms(&[(1, 0), (-3, 37), (1, 100)]));
        assert_eq!(parse_poly("0").unwrap(), SparsePoly::zero());
        // merge + drop
        assert_eq!(
            parse_poly("1,5;-1,5;2,0").unwrap(),
            SparsePoly::from_int_terms(&[(2, 0)])
        );
        assert!(parse_poly("1;2").is_err());
        let round = poly_to_grammar(&f);
        assert_eq!(parse_poly(&round).unwrap(), f);
    }
}
