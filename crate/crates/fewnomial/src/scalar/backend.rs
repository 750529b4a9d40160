//! Precision-escalation driver.
//!
//! Sign-determining computations are expressed as attempts that either
//! succeed or report a straddling enclosure. The exact backend climbs an
//! interval precision ladder for speed, then lands on full rational
//! arithmetic, so its answers are always exact. The float backend caps the
//! ladder and reports `PrecisionExhausted` when the cap cannot certify.

use crate::ops::OpCounter;
use crate::Error;

use super::NumErr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prec {
    Bits(u32),
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Interval fast path with a guaranteed exact terminal step.
    Exact,
    /// Pure adaptive floats: doubling precision from `start_bits` up to
    /// `max_bits`, then `PrecisionExhausted`.
    Float { start_bits: u32, max_bits: u32 },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Exact
    }
}

impl Backend {
    pub fn float(bits: u32) -> Backend {
        let start = bits.max(16);
        Backend::Float {
            start_bits: start,
            max_bits: start.saturating_mul(256).min(1 << 21),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Backend::Exact)
    }

    /// Precision ladder for adaptive attempts. `hint_bits` lets callers that
    /// know their conditioning (e.g. HYBRID's grid resolution) start higher.
    pub fn ladder(&self, hint_bits: u32) -> Vec<Prec> {
        let mut steps = Vec::new();
        match *self {
            Backend::Exact => {
                let mut b = 192u32.max(hint_bits);
                for _ in 0..3 {
                    steps.push(Prec::Bits(b));
                    b = b.saturating_mul(4);
                }
                steps.push(Prec::Exact);
            }
            Backend::Float {
                start_bits,
                max_bits,
            } => {
                let mut b = start_bits.max(hint_bits.min(max_bits));
                loop {
                    steps.push(Prec::Bits(b));
                    if b >= max_bits {
                        break;
                    }
                    b = b.saturating_mul(2).min(max_bits);
                }
            }
        }
        steps
    }

    /// Run `attempt_iv` at escalating precision; fall back to `attempt_exact`
    /// on the exact backend. Field-op charges from failed attempts are
    /// discarded so the committed count reflects a single clean pass.
    pub fn run_adaptive<T>(
        &self,
        hint_bits: u32,
        ctr: &mut OpCounter,
        mut attempt_iv: impl FnMut(u32, &mut OpCounter) -> Result<T, NumErr>,
        mut attempt_exact: impl FnMut(&mut OpCounter) -> Result<T, NumErr>,
    ) -> Result<T, Error> {
        for prec in self.ladder(hint_bits) {
            let mut scratch = OpCounter::default();
            let out = match prec {
                Prec::Bits(b) => attempt_iv(b, &mut scratch),
                Prec::Exact => attempt_exact(&mut scratch),
            };
            match out {
                Ok(v) => {
                    ctr.absorb(&scratch);
                    return Ok(v);
                }
                Err(NumErr::Straddle) => continue,
                Err(NumErr::DivByZero) => {
                    return Err(Error::Internal(
                        "division by an exactly-zero quantity reached the numeric core"
                            .to_string(),
                    ))
                }
            }
        }
        Err(Error::PrecisionExhausted)
    }
}
