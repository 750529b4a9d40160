//! Arbitrary-precision dyadic floating point: `mant * 2^exp` with a `BigInt`
//! mantissa and an `i64` exponent. Directed rounding (toward -inf / +inf)
//! underpins the interval layer; every `Dyadic` is an exact rational.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Floor,
    Ceil,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// floor(x / 2^k), i.e. shift toward negative infinity.
fn shr_floor(x: &BigInt, k: u64) -> BigInt {
    if !x.is_negative() {
        x >> k
    } else {
        // floor for negatives: -((-x + 2^k - 1) >> k) == -(((-x - 1) >> k) + 1)
        -(((-x - BigInt::one()) >> k) + BigInt::one())
    }
}

fn shr_ceil(x: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-x, k)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            Dyadic {
                mant,
                exp: 0,
            }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn one() -> Dyadic {
        Dyadic::new(BigInt::one(), 0)
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic::new(v, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// Position of the leading bit: value magnitude is in [2^(h-1), 2^h).
    pub fn mag_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant_bits() as i64)
        }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << (self.exp as u64))
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    /// One unit in the last place at the current mantissa resolution.
    fn ulp(&self) -> Dyadic {
        Dyadic::new(BigInt::one(), self.exp)
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Dyadic {
        let b = self.mant_bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let k = b - prec as u64;
        let m = match dir {
            Dir::Floor => shr_floor(&self.mant, k),
            Dir::Ceil => shr_ceil(&self.mant, k),
        };
        Dyadic::new(m, self.exp + k as i64)
    }

    /// Round to nearest with at most `prec` mantissa bits.
    pub fn round_nearest(&self, prec: u32) -> Dyadic {
        let b = self.mant_bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let k = b - prec as u64;
        let half = BigInt::one() << (k - 1);
        let m = shr_floor(&(&self.mant + half), k);
        Dyadic::new(m, self.exp + k as i64)
    }

    pub fn from_rational(r: &Rational, prec: u32, dir: Dir) -> Dyadic {
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        num.div(&den, prec, dir)
    }

    pub fn from_rational_nearest(r: &Rational, prec: u32) -> Dyadic {
        let lo = Dyadic::from_rational(r, prec + 2, Dir::Floor);
        lo.round_nearest(prec)
    }

    /// Exact sum. Cost is proportional to the exponent gap; callers that care
    /// use `add_rounded`.
    pub fn add_exact(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &o.mant << ((o.exp - e) as u64);
        Dyadic::new(a + b, e)
    }

    /// Sum rounded to `prec` bits in direction `dir`. When the exponent
    /// ranges are too far apart to interact at this precision, the smaller
    /// operand only contributes a one-ulp nudge in the rounding direction.
    pub fn add_rounded(&self, o: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        if self.is_zero() {
            return o.round(prec, dir);
        }
        if o.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.mag_exp() >= o.mag_exp() {
            (self, o)
        } else {
            (o, self)
        };
        // small's magnitude tops below big's ulp window?
        let cutoff = big.mag_exp().unwrap() - prec as i64 - 4;
        if small.mag_exp().unwrap() < cutoff && big.exp > small.exp {
            let r = big.round(prec, dir);
            return match (dir, small.is_negative()) {
                (Dir::Floor, true) => r.add_exact(&r.ulp().neg()).round(prec, Dir::Floor),
                (Dir::Ceil, false) => r.add_exact(&r.ulp()).round(prec, Dir::Ceil),
                _ => r,
            };
        }
        big.add_exact(small).round(prec, dir)
    }

    pub fn mul_exact(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp.saturating_add(o.exp))
    }

    pub fn mul(&self, o: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        self.mul_exact(o).round(prec, dir)
    }

    /// Directed quotient with `prec`-bit result. `o` must be nonzero.
    pub fn div(&self, o: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let scale = (prec as i64 + 2 + o.mant_bits() as i64 - self.mant_bits() as i64).max(0) as u64;
        let num = &self.mant << scale;
        let (q, r) = num_integer::Integer::div_rem(&num, &o.mant);
        // div_rem truncates toward zero; fix up for direction.
        let exact = r.is_zero();
        let quotient_neg = self.is_negative() != o.is_negative();
        let q = match dir {
            Dir::Floor => {
                if !exact && quotient_neg {
                    q - BigInt::one()
                } else {
                    q
                }
            }
            Dir::Ceil => {
                if !exact && !quotient_neg {
                    q + BigInt::one()
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, self.exp - o.exp - scale as i64).round(prec, dir)
    }

    pub fn cmp(&self, o: &Dyadic) -> Ordering {
        let sa = self.mant.sign();
        let sb = o.mant.sign();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if self.mant.is_zero() {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitude windows first to avoid huge shifts.
        let ha = self.mag_exp().unwrap();
        let hb = o.mag_exp().unwrap();
        if ha != hb {
            let mag = ha.cmp(&hb);
            return if self.is_negative() { mag.reverse() } else { mag };
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &o.mant << ((o.exp - e) as u64);
        a.cmp(&b)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic::new(self.mant.abs(), self.exp)
    }

    /// log2(|x|) estimate via the top mantissa bits; None for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        if self.is_zero() {
            return None;
        }
        let bits = self.mant_bits();
        let shift = bits.saturating_sub(64);
        let top = (self.mant.magnitude() >> shift).to_f64().unwrap_or(1.0);
        Some(top.log2() + shift as f64 + self.exp as f64)
    }
}
