//! Sparse univariate polynomials: c_1 x^(a_1) + ... + c_m x^(a_m) with
//! nonzero rational coefficients and strictly increasing u64 exponents.
//! Evaluation uses recursive squaring so the cost is O(m log D), never O(D).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::ops::OpCounter;
use crate::scalar::{Num, NumCfg, NumErr, Rational, Sign};
use crate::{Error, Result};

/// Canonical sparse polynomial. Empty term list = zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    terms: Vec<(Rational, u64)>,
}

/// A sequence of signs, e.g. a Sturm chain evaluated at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSeq(pub Vec<Sign>);

impl SparsePoly {
    /// Build from arbitrary (coeff, exp) pairs: merges duplicate exponents,
    /// drops zero coefficients, sorts ascending.
    pub fn from_terms(terms: Vec<(Rational, u64)>) -> SparsePoly {
        let mut map: std::collections::BTreeMap<u64, Rational> = std::collections::BTreeMap::new();
        for (c, e) in terms {
            let entry = map.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        SparsePoly {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (c, e))
                .collect(),
        }
    }

    /// Test/readability helper: integer coefficients.
    pub fn from_int_terms(terms: &[(i64, u64)]) -> SparsePoly {
        SparsePoly::from_terms(
            terms
                .iter()
                .map(|&(c, e)| (Rational::from_integer(BigInt::from(c)), e))
                .collect(),
        )
    }

    pub fn zero() -> SparsePoly {
        SparsePoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Rational, u64)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.last().map(|t| t.1).unwrap_or(0)
    }

    /// Smallest exponent delta(f); 0 for the zero polynomial.
    pub fn min_exp(&self) -> u64 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn coeff_of(&self, exp: u64) -> Option<&Rational> {
        self.terms
            .binary_search_by_key(&exp, |t| t.1)
            .ok()
            .map(|i| &self.terms[i].0)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff_of(0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.0)
    }

    pub fn negate(&self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(c, e)| (-c, *e)).collect(),
        }
    }

    /// Multiply every coefficient by a nonzero rational.
    pub fn scale(&self, s: &Rational) -> SparsePoly {
        assert!(!s.is_zero());
        SparsePoly {
            terms: self.terms.iter().map(|(c, e)| (c * s, *e)).collect(),
        }
    }

    /// Substitute x -> -x: flips the sign of odd-exponent coefficients.
    pub fn reflect_negative(&self) -> SparsePoly {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(c, e)| (if e % 2 == 1 { -c } else { c.clone() }, *e))
                .collect(),
        }
    }

    /// Exact evaluation without instrumentation.
    pub fn eval_plain(&self, x: &Rational) -> Rational {
        let mut ctr = OpCounter::default();
        eval(self, x, &mut ctr)
    }

    /// Exact sign of f(x), no instrumentation.
    pub fn sign_at(&self, x: &Rational) -> Sign {
        Sign::of_rational(&self.eval_plain(x))
    }
}

impl std::fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "x^{e}")?;
            } else {
                write!(f, "{mag}*x^{e}")?;
            }
        }
        Ok(())
    }
}

/// Shared table of x^(2^i), charging one multiplication per fresh squaring.
pub(crate) struct PowTable<N: Num> {
    cfg: NumCfg,
    squares: Vec<N>,
}

impl<N: Num> PowTable<N> {
    pub fn new(cfg: NumCfg, x: N) -> PowTable<N> {
        PowTable {
            cfg,
            squares: vec![x],
        }
    }

    /// x^e by binary expansion; <= 2*ceil(log2(e+1)) multiplications charged.
    pub fn pow(&mut self, e: u64, ctr: &mut OpCounter) -> N {
        if e == 0 {
            return N::one_val(&self.cfg);
        }
        let top = 63 - e.leading_zeros() as usize;
        while self.squares.len() <= top {
            let last = self.squares.last().unwrap();
            let next = last.nmul(last);
            ctr.mul(1);
            self.squares.push(next);
        }
        let mut acc: Option<N> = None;
        for i in 0..=top {
            if (e >> i) & 1 == 1 {
                acc = Some(match acc {
                    None => self.squares[i].clone(),
                    Some(a) => {
                        ctr.mul(1);
                        a.nmul(&self.squares[i])
                    }
                });
            }
        }
        acc.unwrap()
    }
}

/// Generic term-list evaluation used by the engine internals.
pub(crate) fn eval_terms<N: Num>(
    terms: &[(N, u64)],
    pows: &mut PowTable<N>,
    ctr: &mut OpCounter,
) -> N {
    let mut acc: Option<N> = None;
    for (c, e) in terms {
        let t = if *e == 0 {
            c.clone()
        } else {
            let p = pows.pow(*e, ctr);
            ctr.mul(1);
            c.nmul(&p)
        };
        acc = Some(match acc {
            None => t,
            Some(a) => {
                ctr.add(1);
                a.nadd(&t)
            }
        });
    }
    acc.unwrap_or_else(|| N::zero_val(&pows.cfg))
}

pub(crate) fn convert_terms<N: Num>(f: &SparsePoly, cfg: &NumCfg) -> Vec<(N, u64)> {
    f.terms
        .iter()
        .map(|(c, e)| (N::of_rat(cfg, c), *e))
        .collect()
}

pub(crate) fn eval_n<N: Num>(f: &SparsePoly, x: &N, cfg: &NumCfg, ctr: &mut OpCounter) -> N {
    let terms = convert_terms::<N>(f, cfg);
    let mut pows = PowTable::new(*cfg, x.clone());
    eval_terms(&terms, &mut pows, ctr)
}

/// Certified sign of f(x) under the given backend.
pub(crate) fn sign_eval(
    f: &SparsePoly,
    x: &Rational,
    backend: crate::scalar::Backend,
    ctr: &mut OpCounter,
) -> Result<Sign> {
    backend.run_adaptive(
        0,
        ctr,
        |bits, c| {
            let cfg = NumCfg::bits(bits);
            let v = eval_n::<crate::scalar::Iv>(f, &crate::scalar::Iv::from_rational(x, bits), &cfg, c);
            c.cmp(1);
            v.nsign()
        },
        |c| {
            let cfg = NumCfg::exact();
            let v = eval_n::<Rational>(f, x, &cfg, c);
            c.cmp(1);
            v.nsign()
        },
    )
}

/// f(x) by recursive squaring; multiplication count charged to `ctr` is at
/// most m*(2*ceil(log2(D+1)) + 1) + m - 1.
pub fn eval(f: &SparsePoly, x: &Rational, ctr: &mut OpCounter) -> Rational {
    let before = ctr.muls;
    let cfg = NumCfg::exact();
    let v = eval_n::<Rational>(f, x, &cfg, ctr);
    let m = f.term_count() as u64;
    if m > 0 {
        let d = f.degree();
        let budget = m * (2 * ceil_log2(d + 1) + 1) + (m - 1);
        assert!(
            ctr.muls - before <= budget,
            "eval exceeded its multiplication budget: {} > {}",
            ctr.muls - before,
            budget
        );
    }
    v
}

/// ceil(log2(n)) for n >= 1.
pub fn ceil_log2(n: u64) -> u64 {
    assert!(n >= 1);
    64 - (n - 1).leading_zeros() as u64
}

/// Derivative: (c, a) -> (c*a, a-1), dropping constant terms.
pub fn derivative(f: &SparsePoly) -> SparsePoly {
    SparsePoly {
        terms: f
            .terms
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(c, e)| (c * Rational::from_integer(BigInt::from(*e)), e - 1))
            .collect(),
    }
}

/// S(f) = x^(-delta(f)) * f: divide out the minimal exponent.
pub fn op_s(f: &SparsePoly) -> Result<SparsePoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.min_exp();
    Ok(SparsePoly {
        terms: f.terms.iter().map(|(c, e)| (c.clone(), e - d)).collect(),
    })
}

/// L1(f) = (S(f))': at most m-1 terms, degree <= D-1.
pub fn op_l1(f: &SparsePoly) -> Result<SparsePoly> {
    Ok(derivative(&op_s(f)?))
}

/// L2(f) = (S(f))'': at most m-1 terms, degree <= D-2.
pub fn op_l2(f: &SparsePoly) -> Result<SparsePoly> {
    Ok(derivative(&derivative(&op_s(f)?)))
}

/// Number of sign alternations N_s: pairs (j, j') of opposite signs with
/// only zeros between them.
pub fn sign_alternations(s: &SignSeq) -> usize {
    let mut last = Sign::Zero;
    let mut n = 0;
    for &v in &s.0 {
        if v.is_zero() {
            continue;
        }
        if !last.is_zero() && v != last {
            n += 1;
        }
        last = v;
    }
    n
}

/// Descartes bound: alternations of the coefficient sign sequence, an upper
/// bound (<= m-1) on the number of positive roots.
pub fn descartes_bound(f: &SparsePoly) -> usize {
    let seq = SignSeq(f.terms.iter().map(|(c, _)| Sign::of_rational(c)).collect());
    sign_alternations(&seq)
}

/// x^D * f(1/x): reverses the exponent pattern. Requires a constant term so
/// the transform is degree-preserving.
pub fn reciprocal_transform(f: &SparsePoly) -> Result<SparsePoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.min_exp() != 0 {
        return Err(Error::NeedsSFirst);
    }
    let d = f.degree();
    Ok(SparsePoly::from_terms(
        f.terms.iter().map(|(c, e)| (c.clone(), d - e)).collect(),
    ))
}

/// Closed-form A-discriminant of a trinomial c1 + c2 x^(a2) + c3 x^(a3) with
/// coprime 0 < a2 < a3. Vanishes exactly when f and f' share a root off 0.
pub fn trinomial_discriminant(f: &SparsePoly) -> Result<Rational> {
    if f.term_count() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            got: f.term_count(),
        });
    }
    if f.min_exp() != 0 {
        return Err(Error::NeedsSFirst);
    }
    let c1 = &f.terms[0].0;
    let (c2, a2) = (&f.terms[1].0, f.terms[1].1);
    let (c3, a3) = (&f.terms[2].0, f.terms[2].1);
    if a2.gcd(&a3) != 1 {
        return Err(Error::NotPrimitive);
    }
    let big = |v: u64| BigInt::from(v);
    let ipow = |b: BigInt, e: u64| -> Rational { Rational::from_integer(Pow::pow(b, e)) };
    let rpow = crate::scalar::rat_pow;
    let first = ipow(big(a3), a3) * rpow(c3, a2) * rpow(c1, a3 - a2);
    let second = ipow(big(a2), a2) * ipow(big(a3 - a2), a3 - a2) * rpow(c2, a3);
    let sign = if (a3 - 1) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    Ok(first + sign * second)
}

/// Right-limit sign of f at x: sign of f(x + 0^+). Equals sign(f(x)) when
/// that is nonzero; at a root, the first nonvanishing derivative decides.
pub(crate) fn right_limit_sign_n<N: Num>(
    f_terms: &[(N, u64)],
    pows: &mut PowTable<N>,
    x_is_zero: bool,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<Sign, NumErr> {
    if x_is_zero {
        // Trailing term dominates just right of 0.
        let (c, _) = f_terms
            .iter()
            .min_by_key(|(_, e)| *e)
            .expect("nonzero polynomial");
        ctr.cmp(1);
        return c.nsign();
    }
    let mut cur: Vec<(N, u64)> = f_terms.to_vec();
    // A nonzero t-term polynomial has multiplicity <= t-1 at a point != 0,
    // so this loop runs at most t times.
    for _ in 0..=f_terms.len() {
        let v = eval_terms(&cur, pows, ctr);
        ctr.cmp(1);
        let s = v.nsign()?;
        if !s.is_zero() {
            return Ok(s);
        }
        cur = cur
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(c, e)| {
                ctr.mul(1);
                (c.nmul(&N::of_i64(cfg, *e as i64)), e - 1)
            })
            .collect();
        if cur.is_empty() {
            return Ok(Sign::Zero); // identically zero (cannot happen for nonzero input)
        }
    }
    Err(NumErr::Straddle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_i64, rat_ratio};

    fn p(terms: &[(i64, u64)]) -> SparsePoly {
        SparsePoly::from_int_terms(terms)
    }

    #[test]
    fn canonical_form_merges_and_drops() {
        let f = SparsePoly::from_terms(vec![
            (rat_i64(2), 3),
            (rat_i64(-2), 3),
            (rat_i64(1), 0),
            (rat_i64(4), 7),
        ]);
        assert_eq!(f.term_count(), 2);
        assert_eq!(f.degree(), 7);
        assert_eq!(f.min_exp(), 0);
    }

    #[test]
    fn eval_monomial_budget() {
        // x^363 at 2 -> 2^363 within 17 charged multiplications
        let f = p(&[(1, 363)]);
        let mut ctr = OpCounter::default();
        let v = eval(&f, &rat_i64(2), &mut ctr);
        assert_eq!(v, crate::scalar::rat_pow(&rat_i64(2), 363));
        assert!(ctr.muls <= 17, "charged {} muls", ctr.muls);
    }

    #[test]
    fn eval_zero_and_coeff_sum() {
        let mut ctr = OpCounter::default();
        assert_eq!(eval(&SparsePoly::zero(), &rat_i64(5), &mut ctr), rat_i64(0));
        let f = p(&[(1, 0), (-3, 37), (1, 100)]);
        assert_eq!(eval(&f, &rat_i64(1), &mut ctr), rat_i64(-1));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative(&p(&[(2, 0), (-3, 1), (1, 2)])), p(&[(-3, 0), (2, 1)]));
        assert_eq!(derivative(&p(&[(7, 0)])), SparsePoly::zero());
        // x^10 + x^6 + x^5 + 1 (the 2D/D+1/D family at D=5)
        let f = p(&[(1, 0), (1, 5), (1, 6), (1, 10)]);
        assert_eq!(derivative(&f), p(&[(5, 4), (6, 5), (10, 9)]));
    }

    #[test]
    fn s_l1_l2_examples() {
        let f = p(&[(1, 3), (1, 5)]);
        assert_eq!(op_s(&f).unwrap(), p(&[(1, 0), (1, 2)]));
        assert_eq!(op_l1(&f).unwrap(), p(&[(2, 1)]));
        assert_eq!(op_l2(&f).unwrap(), p(&[(2, 0)]));
        assert!(matches!(op_s(&SparsePoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn alternation_examples() {
        use Sign::*;
        assert_eq!(sign_alternations(&SignSeq(vec![Pos, Neg, Pos])), 2);
        assert_eq!(sign_alternations(&SignSeq(vec![Pos, Zero, Neg])), 1);
        assert_eq!(sign_alternations(&SignSeq(vec![Zero, Zero, Zero])), 0);
    }

    #[test]
    fn descartes_examples() {
        assert_eq!(descartes_bound(&p(&[(2, 0), (-3, 1), (1, 2)])), 2);
        assert_eq!(descartes_bound(&p(&[(1, 0), (1, 1), (1, 2)])), 0);
        assert_eq!(descartes_bound(&p(&[(1, 0), (-3, 37), (1, 100)])), 2);
    }

    #[test]
    fn reciprocal_examples() {
        // c1 + c2 x + c1 x^3 -> c1 + c2 x^2 + c1 x^3
        let f = SparsePoly::from_terms(vec![
            (rat_i64(5), 0),
            (rat_i64(7), 1),
            (rat_i64(5), 3),
        ]);
        let g = reciprocal_transform(&f).unwrap();
        assert_eq!(
            g,
            SparsePoly::from_terms(vec![(rat_i64(5), 0), (rat_i64(7), 2), (rat_i64(5), 3)])
        );
        // palindromic binomial
        assert_eq!(reciprocal_transform(&p(&[(1, 0), (1, 1)])).unwrap(), p(&[(1, 0), (1, 1)]));
        // 2 - x^5 -> -1 + 2x^5
        assert_eq!(reciprocal_transform(&p(&[(2, 0), (-1, 5)])).unwrap(), p(&[(-1, 0), (2, 5)]));
        assert!(matches!(
            reciprocal_transform(&p(&[(1, 2), (1, 3)])),
            Err(Error::NeedsSFirst)
        ));
    }

    #[test]
    fn discriminant_examples() {
        // (x-1)^2: double root -> 0
        assert_eq!(
            trinomial_discriminant(&p(&[(1, 0), (-2, 1), (1, 2)])).unwrap(),
            rat_i64(0)
        );
        // 1 + x + x^2 -> 4 - 1 = 3
        assert_eq!(
            trinomial_discriminant(&p(&[(1, 0), (1, 1), (1, 2)])).unwrap(),
            rat_i64(3)
        );
        assert!(matches!(
            trinomial_discriminant(&p(&[(1, 0), (1, 2), (1, 4)])),
            Err(Error::NotPrimitive)
        ));
    }

    #[test]
    fn eval_matches_horner_for_random_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let m = rng.gen_range(1..=5);
            let mut terms = Vec::new();
            for _ in 0..m {
                terms.push((rng.gen_range(-9i64..=9), rng.gen_range(0u64..=512)));
            }
            let f = SparsePoly::from_int_terms(&terms);
            let x = rat_ratio(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=20));
            // dense Horner
            let d = f.degree();
            let mut acc = Rational::zero();
            if !f.is_zero() {
                for e in (0..=d).rev() {
                    acc *= &x;
                    if let Some(c) = f.coeff_of(e) {
                        acc += c;
                    }
                }
            }
            assert_eq!(f.eval_plain(&x), acc);
        }
    }

    #[test]
    fn reciprocal_derivative_chain_rule() {
        // d/dx [x^D f(1/x)] = D x^(D-1) f(1/x) - x^(D-2) f'(1/x), checked
        // pointwise at random rationals.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = SparsePoly::from_int_terms(&[
                (rng.gen_range(1..=9), 0),
                (rng.gen_range(-9i64..=-1), rng.gen_range(1u64..=6)),
                (rng.gen_range(1..=9), rng.gen_range(7u64..=12)),
            ]);
            let d = f.degree();
            let g = reciprocal_transform(&f).unwrap();
            let x = rat_ratio(rng.gen_range(1i64..=30), rng.gen_range(1i64..=30));
            let inv = rat_i64(1) / &x;
            let lhs = derivative(&g).eval_plain(&x);
            let rhs = rat_i64(d as i64) * crate::scalar::rat_pow(&x, d - 1) * f.eval_plain(&inv)
                - crate::scalar::rat_pow(&x, d - 2) * derivative(&f).eval_plain(&inv);
            assert_eq!(lhs, rhs);
        }
    }
}
