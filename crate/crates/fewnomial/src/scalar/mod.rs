//! Number backends.
//!
//! All polynomial coefficients and interval endpoints entering the engine are
//! exact rationals. Computation internally runs either on exact rationals or
//! on arbitrary-precision dyadic intervals (`Iv`) whose sign queries are
//! certified: an enclosure that does not straddle zero proves the sign, and a
//! straddling enclosure triggers precision escalation in [`Backend`].

mod backend;
mod dyadic;
mod interval;
mod num;

pub use backend::{Backend, Prec};
pub use dyadic::Dyadic;
pub use interval::Iv;
pub use num::{Num, NumCfg, NumErr};

use num_bigint::{BigInt, Sign as BSign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar; the engine's canonical coefficient type.
pub type Rational = num_rational::BigRational;

/// Sign of a real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_rational(r: &Rational) -> Sign {
        match r.numer().sign() {
            BSign::Minus => Sign::Neg,
            BSign::NoSign => Sign::Zero,
            BSign::Plus => Sign::Pos,
        }
    }

    pub fn of_bigint(n: &BigInt) -> Sign {
        match n.sign() {
            BSign::Minus => Sign::Neg,
            BSign::NoSign => Sign::Zero,
            BSign::Plus => Sign::Pos,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }
}

pub fn rat_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// x^e by binary powering, no instrumentation. Exact.
pub fn rat_pow(x: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// 2^e for signed e as an exact rational.
pub fn rat_pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as u64))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as u64))
    }
}

/// log2(|r|) to f64 accuracy, or None for r = 0.
pub fn rat_log2_abs(r: &Rational) -> Option<f64> {
    if r.is_zero() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // Top 64 bits of each, as f64 mantissas.
    let top = |x: &num_bigint::BigUint, bits: i64| -> f64 {
        let shift = (bits - 64).max(0) as u64;
        let t = (x >> shift).to_f64().unwrap_or(1.0);
        t.log2() + shift as f64
    };
    Some(top(n, nb) - top(d, db))
}

/// Rational with value 2^l (l an f64 log), accurate to ~1e-15 relatively.
pub fn rat_from_log2(l: f64) -> Rational {
    let e = l.floor();
    let frac = l - e;
    let mant = frac.exp2(); // in [1, 2)
    let mant_scaled = (mant * (1u64 << 53) as f64).round() as i64;
    let r = Rational::new(BigInt::from(mant_scaled), BigInt::one() << 53u64);
    r * rat_pow2(e as i64)
}

/// Nearest dyadic rational with a `bits`-bit mantissa. Exact rationals
/// smaller than that pass through unchanged.
pub fn round_to_bits(r: &Rational, bits: u32) -> Rational {
    if r.is_zero() {
        return Rational::zero();
    }
    let d = Dyadic::from_rational_nearest(r, bits);
    d.to_rational()
}

/// Decimal rendering with `digits` digits after the point, round-half-away.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = &a * Rational::from_integer(scale.clone());
    // round half away from zero
    let num = scaled.numer();
    let den = scaled.denom();
    let (q, rem) = num_integer::Integer::div_rem(num, den);
    let q = if &rem * 2 >= *den { q + 1 } else { q };
    let (int_part, frac_part) = num_integer::Integer::div_rem(&q, &scale);
    let mut s = String::new();
    if neg && !(q.is_zero()) {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        s.push('.');
        for _ in 0..(digits as usize - frac.len()) {
            s.push('0');
        }
        s.push_str(&frac);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_products() {
        assert_eq!(Sign::Neg.product(Sign::Neg), Sign::Pos);
        assert_eq!(Sign::Neg.product(Sign::Pos), Sign::Neg);
        assert_eq!(Sign::Zero.product(Sign::Pos), Sign::Zero);
    }

    #[test]
    fn pow_and_log2() {
        let x = rat_ratio(3, 2);
        assert_eq!(rat_pow(&x, 4), rat_ratio(81, 16));
        let l = rat_log2_abs(&rat_i64(1024)).unwrap();
        assert!((l - 10.0).abs() < 1e-12);
        let back = rat_from_log2(10.0);
        assert!((rat_log2_abs(&back).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat_ratio(1, 2), 3), "0.500");
        assert_eq!(decimal_string(&rat_ratio(-1, 3), 4), "-0.3333");
        assert_eq!(decimal_string(&rat_ratio(2, 3), 2), "0.67");
        assert_eq!(decimal_string(&rat_i64(5), 0), "5");
    }

    #[test]
    fn round_bits_error_small() {
        let r = rat_ratio(1_000_003, 999_983);
        let q = round_to_bits(&r, 40);
        let err = (&q - &r).abs();
        assert!(err < rat_pow2(-38) * r.abs());
    }
}
