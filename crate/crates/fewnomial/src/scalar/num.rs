//! A single abstraction over the two computation modes. Algorithms are
//! written once, generic over `Num`, and instantiated with exact rationals
//! or with certified dyadic intervals at a working precision.

use num_traits::Zero;

use super::dyadic::Dyadic;
use super::{Iv, Rational, Sign};

/// Failure of a numeric primitive inside one adaptive attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumErr {
    /// An enclosure straddles zero; retry at higher precision.
    Straddle,
    /// Exact division by zero (caller should have sign-checked).
    DivByZero,
}

/// Construction parameters for `Num` values.
#[derive(Debug, Clone, Copy)]
pub struct NumCfg {
    /// Working precision in bits; ignored by the exact backend.
    pub prec: u32,
}

impl NumCfg {
    pub fn bits(prec: u32) -> NumCfg {
        NumCfg { prec }
    }

    pub fn exact() -> NumCfg {
        NumCfg { prec: 0 }
    }
}

pub trait Num: Clone + std::fmt::Debug {
    const EXACT: bool;

    fn of_rat(cfg: &NumCfg, r: &Rational) -> Self;
    fn of_i64(cfg: &NumCfg, v: i64) -> Self;
    fn zero_val(cfg: &NumCfg) -> Self;
    fn one_val(cfg: &NumCfg) -> Self;
    fn nadd(&self, o: &Self) -> Self;
    fn nsub(&self, o: &Self) -> Self;
    fn nmul(&self, o: &Self) -> Self;
    fn nneg(&self) -> Self;
    fn ndiv(&self, o: &Self) -> Result<Self, NumErr>;
    fn nsign(&self) -> Result<Sign, NumErr>;
    /// Snap a point value to at most `bits` mantissa bits (identity when the
    /// value is already coarser). Keeps iterate bit-length bounded.
    fn round_bits(&self, bits: u32) -> Self;
    fn to_rational(&self) -> Rational;
    fn log2_abs_estimate(&self) -> Option<f64>;
}

impl Num for Rational {
    const EXACT: bool = true;

    fn of_rat(_cfg: &NumCfg, r: &Rational) -> Self {
        r.clone()
    }

    fn of_i64(_cfg: &NumCfg, v: i64) -> Self {
        super::rat_i64(v)
    }

    fn zero_val(_cfg: &NumCfg) -> Self {
        Rational::zero()
    }

    fn one_val(_cfg: &NumCfg) -> Self {
        num_traits::One::one()
    }

    fn nadd(&self, o: &Self) -> Self {
        self + o
    }

    fn nsub(&self, o: &Self) -> Self {
        self - o
    }

    fn nmul(&self, o: &Self) -> Self {
        self * o
    }

    fn nneg(&self) -> Self {
        -self
    }

    fn ndiv(&self, o: &Self) -> Result<Self, NumErr> {
        if o.is_zero() {
            return Err(NumErr::DivByZero);
        }
        Ok(self / o)
    }

    fn nsign(&self) -> Result<Sign, NumErr> {
        Ok(Sign::of_rational(self))
    }

    fn round_bits(&self, bits: u32) -> Self {
        super::round_to_bits(self, bits)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn log2_abs_estimate(&self) -> Option<f64> {
        super::rat_log2_abs(self)
    }
}

impl Num for Iv {
    const EXACT: bool = false;

    fn of_rat(cfg: &NumCfg, r: &Rational) -> Self {
        Iv::from_rational(r, cfg.prec)
    }

    fn of_i64(cfg: &NumCfg, v: i64) -> Self {
        Iv::point(Dyadic::from_i64(v), cfg.prec)
    }

    fn zero_val(cfg: &NumCfg) -> Self {
        Iv::zero(cfg.prec)
    }

    fn one_val(cfg: &NumCfg) -> Self {
        Iv::one(cfg.prec)
    }

    fn nadd(&self, o: &Self) -> Self {
        Iv::add(self, o)
    }

    fn nsub(&self, o: &Self) -> Self {
        Iv::sub(self, o)
    }

    fn nmul(&self, o: &Self) -> Self {
        Iv::mul(self, o)
    }

    fn nneg(&self) -> Self {
        Iv::neg(self)
    }

    fn ndiv(&self, o: &Self) -> Result<Self, NumErr> {
        Iv::div(self, o).ok_or(NumErr::Straddle)
    }

    fn nsign(&self) -> Result<Sign, NumErr> {
        Iv::sign(self).ok_or(NumErr::Straddle)
    }

    fn round_bits(&self, bits: u32) -> Self {
        Iv::point(self.midpoint().round_nearest(bits), self.prec)
    }

    fn to_rational(&self) -> Rational {
        Iv::to_rational(self)
    }

    fn log2_abs_estimate(&self) -> Option<f64> {
        Iv::log2_abs_estimate(self)
    }
}
