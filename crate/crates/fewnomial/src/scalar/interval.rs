//! Dyadic interval arithmetic with outward rounding. An `Iv` encloses the
//! exact real result of the expression that produced it; `sign()` certifies
//! a sign only when the enclosure does not straddle zero.

use super::dyadic::{Dir, Dyadic};
use super::{Rational, Sign};

#[derive(Debug, Clone)]
pub struct Iv {
    pub(crate) lo: Dyadic,
    pub(crate) hi: Dyadic,
    pub(crate) prec: u32,
}

impl Iv {
    pub fn point(d: Dyadic, prec: u32) -> Iv {
        Iv {
            lo: d.clone(),
            hi: d,
            prec,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Iv {
        if r.denom() == &num_bigint::BigInt::from(1) {
            // integers convert exactly (mantissa kept whole if small enough)
            let d = Dyadic::from_bigint(r.numer().clone());
            if d.mant_bits() <= prec as u64 {
                return Iv::point(d, prec);
            }
        }
        Iv {
            lo: Dyadic::from_rational(r, prec, Dir::Floor),
            hi: Dyadic::from_rational(r, prec, Dir::Ceil),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Iv {
        Iv::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Iv {
        Iv::point(Dyadic::one(), prec)
    }

    fn p(&self, o: &Iv) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn neg(&self) -> Iv {
        Iv {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Iv) -> Iv {
        let p = self.p(o);
        Iv {
            lo: self.lo.add_rounded(&o.lo, p, Dir::Floor),
            hi: self.hi.add_rounded(&o.hi, p, Dir::Ceil),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Iv) -> Iv {
        let p = self.p(o);
        // Min/max over the four corner products, each rounded both ways.
        let corners = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in corners {
            let exact = a.mul_exact(b);
            let l = exact.round(p, Dir::Floor);
            let h = exact.round(p, Dir::Ceil);
            lo = Some(match lo {
                None => l,
                Some(c) => {
                    if l.cmp(&c).is_lt() {
                        l
                    } else {
                        c
                    }
                }
            });
            hi = Some(match hi {
                None => h,
                Some(c) => {
                    if h.cmp(&c).is_gt() {
                        h
                    } else {
                        c
                    }
                }
            });
        }
        Iv {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: p,
        }
    }

    /// Division; the divisor enclosure must have a certified nonzero sign.
    pub fn div(&self, o: &Iv) -> Option<Iv> {
        let p = self.p(o);
        let osign = o.sign()?;
        if osign.is_zero() {
            return None;
        }
        let corners = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in corners {
            let l = a.div(b, p, Dir::Floor);
            let h = a.div(b, p, Dir::Ceil);
            lo = Some(match lo {
                None => l,
                Some(c) => {
                    if l.cmp(&c).is_lt() {
                        l
                    } else {
                        c
                    }
                }
            });
            hi = Some(match hi {
                None => h,
                Some(c) => {
                    if h.cmp(&c).is_gt() {
                        h
                    } else {
                        c
                    }
                }
            });
        }
        Some(Iv {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            prec: p,
        })
    }

    /// Certified sign, or None when the enclosure straddles zero.
    pub fn sign(&self) -> Option<Sign> {
        let ls = if self.lo.is_zero() {
            Sign::Zero
        } else if self.lo.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let hs = if self.hi.is_zero() {
            Sign::Zero
        } else if self.hi.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        };
        match (ls, hs) {
            (Sign::Pos, _) => Some(Sign::Pos),
            (_, Sign::Neg) => Some(Sign::Neg),
            (Sign::Zero, Sign::Zero) => Some(Sign::Zero),
            _ => None,
        }
    }

    /// Midpoint snapped to the working precision.
    pub fn midpoint(&self) -> Dyadic {
        self.lo
            .add_exact(&self.hi)
            .mul_exact(&Dyadic::new(num_bigint::BigInt::from(1), -1))
            .round_nearest(self.prec)
    }

    pub fn to_rational(&self) -> Rational {
        self.midpoint().to_rational()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        let v = *r >= self.lo.to_rational() && *r <= self.hi.to_rational();
        v
    }

    pub fn log2_abs_estimate(&self) -> Option<f64> {
        self.midpoint().log2_abs()
    }
}
