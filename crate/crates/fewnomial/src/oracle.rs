//! Dense brute-force ground truth: classical Sturm sequences with full
//! polynomial division, bisection-based isolation and refinement, gcd and
//! resultant, and the tetranomial Sturm-blowup regression. Exact rationals
//! only; every property test in the workspace leans on this module.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::SparsePoly;
use crate::scalar::{rat_pow, Rational, Sign};
use crate::sturm::CountQuery;
use crate::{Error, Result};

pub const MAX_DENSE_DEGREE: u64 = 4096;

/// Dense polynomial: `coeffs[k]` is the coefficient of x^k. Leading zeros
/// trimmed; empty vector = zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    coeffs: Vec<Rational>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Rational>) -> DensePoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> DensePoly {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn from_int_coeffs(c: &[i64]) -> DensePoly {
        DensePoly::new(
            c.iter()
                .map(|&v| Rational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.coeffs.len().saturating_sub(1) as u64
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (c.clone(), e as u64))
                .collect(),
        )
    }

    pub fn derivative(&self) -> DensePoly {
        if self.coeffs.len() <= 1 {
            return DensePoly::zero();
        }
        DensePoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Evaluation that walks only nonzero coefficients (binary powering for
    /// the exponent jumps), so sparse chain elements stay cheap.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut cur_pow = Rational::one();
        let mut cur_exp = 0u64;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k as u64;
            if k != cur_exp {
                cur_pow = if cur_exp == 0 {
                    rat_pow(x, k)
                } else {
                    &cur_pow * rat_pow(x, k - cur_exp)
                };
                cur_exp = k;
            }
            acc += c * &cur_pow;
        }
        acc
    }

    /// Sign of the value just right of x.
    fn right_limit_sign(&self, x: &Rational) -> Sign {
        assert!(!self.is_zero());
        if x.is_zero() {
            let low = self.coeffs.iter().find(|c| !c.is_zero()).unwrap();
            return Sign::of_rational(low);
        }
        let mut cur = self.clone();
        loop {
            let v = cur.eval(x);
            let s = Sign::of_rational(&v);
            if !s.is_zero() {
                return s;
            }
            cur = cur.derivative();
            assert!(!cur.is_zero(), "nonzero polynomial with all derivatives zero");
        }
    }

    /// Remainder of self / other (classical long division).
    pub fn rem(&self, other: &DensePoly) -> DensePoly {
        assert!(!other.is_zero());
        let dd = other.degree() as usize;
        let lead = other.leading().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let factor = &r[k] / lead;
            if !factor.is_zero() {
                for (i, c) in other.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let idx = k - dd + i;
                        let v = &r[idx] - &factor * c;
                        r[idx] = v;
                    }
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        DensePoly { coeffs: r }
    }

    /// Exact quotient; panics if the division is inexact.
    pub fn div_exact(&self, other: &DensePoly) -> DensePoly {
        assert!(!other.is_zero());
        if self.is_zero() {
            return DensePoly::zero();
        }
        let dd = other.degree() as usize;
        let lead = other.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1;
            let factor = &r[k] / lead;
            q[k - dd] = factor.clone();
            if !factor.is_zero() {
                for (i, c) in other.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let v = &r[k - dd + i] - &factor * c;
                        r[k - dd + i] = v;
                    }
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        assert!(r.is_empty(), "div_exact with nonzero remainder");
        DensePoly::new(q)
    }

    /// Scale by a strictly positive rational so all coefficients become
    /// coprime integers. Signs are preserved.
    pub fn primitive(&self) -> DensePoly {
        if self.is_zero() {
            return DensePoly::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let scale = Rational::new(denom_lcm, numer_gcd); // positive
        DensePoly::new(self.coeffs.iter().map(|c| c * &scale).collect())
    }

    /// Cauchy-style bound: every real root has |x| <= 1 + max |c_i/c_lead|.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial");
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c / lead).abs();
            if r > m {
                m = r;
            }
        }
        m + Rational::one()
    }
}

/// Dense image of a sparse polynomial. Degree capped so the oracle stays at
/// desk scale.
pub fn expand(f: &SparsePoly) -> Result<DensePoly> {
    let d = f.degree();
    if d > MAX_DENSE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d,
            max: MAX_DENSE_DEGREE,
        });
    }
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    for (c, e) in f.terms() {
        coeffs[*e as usize] = c.clone();
    }
    Ok(DensePoly::new(coeffs))
}

/// Classical Sturm sequence p0 = f, p1 = f', p_{i+2} = -(p_i mod p_{i+1}),
/// each element scaled by a positive rational to primitive integer form.
pub fn dense_sturm_chain(p: &DensePoly) -> Vec<DensePoly> {
    assert!(!p.is_zero());
    let mut chain = vec![p.primitive()];
    let d1 = p.derivative();
    if d1.is_zero() {
        return chain;
    }
    chain.push(d1.primitive());
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        let neg = DensePoly::new(r.coeffs.iter().map(|c| -c).collect());
        chain.push(neg.primitive());
    }
    chain
}

fn right_limit_alternations(chain: &[DensePoly], x: &Rational) -> usize {
    let mut last = Sign::Zero;
    let mut n = 0;
    for p in chain {
        let s = p.right_limit_sign(x);
        debug_assert!(!s.is_zero());
        if !last.is_zero() && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Exact distinct-root count of p over the query interval via the classical
/// chain. Handles roots at the endpoints and any multiplicities.
pub fn dense_sturm_count(p: &DensePoly, q: &CountQuery) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() > MAX_DENSE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: p.degree(),
            max: MAX_DENSE_DEGREE,
        });
    }
    if q.a == q.b {
        if q.a_open || q.b_open {
            return Ok(0);
        }
        return Ok(usize::from(p.eval(&q.a).is_zero()));
    }
    let chain = dense_sturm_chain(p);
    let wa = right_limit_alternations(&chain, &q.a);
    let wb = right_limit_alternations(&chain, &q.b);
    assert!(wa >= wb);
    let mut count = (wa - wb) as i64; // roots in (a, b]
    if q.b_open && p.eval(&q.b).is_zero() {
        count -= 1;
    }
    if !q.a_open && p.eval(&q.a).is_zero() {
        count += 1;
    }
    assert!(count >= 0);
    Ok(count as usize)
}

/// Primitive gcd from the remainder sequence.
pub fn dense_gcd(p: &DensePoly, q: &DensePoly) -> DensePoly {
    if p.is_zero() {
        return q.primitive();
    }
    if q.is_zero() {
        return p.primitive();
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.rem(&b);
        if r.is_zero() {
            return b.primitive();
        }
        a = b;
        b = r.primitive();
    }
}

/// Resultant via the Euclidean remainder sequence.
pub fn resultant(p: &DensePoly, q: &DensePoly) -> Rational {
    fn go(a: &DensePoly, b: &DensePoly) -> Rational {
        if b.is_zero() {
            return Rational::zero();
        }
        if b.degree() == 0 {
            return rat_pow(b.leading().unwrap(), a.degree());
        }
        let r = a.rem(b);
        if r.is_zero() {
            return Rational::zero();
        }
        let sign = if (a.degree() * b.degree()) % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        sign * rat_pow(b.leading().unwrap(), a.degree() - r.degree()) * go(b, &r)
    }
    if p.is_zero() || q.is_zero() {
        return Rational::zero();
    }
    go(p, q)
}

/// Disjoint isolating intervals plus exactly-hit rational roots.
#[derive(Debug, Clone)]
pub struct IsolationResult {
    /// Open intervals (lo, hi), each containing exactly one distinct root,
    /// with hi - lo < eps/4.
    pub intervals: Vec<(Rational, Rational)>,
    /// Roots found exactly (rational).
    pub exact_roots: Vec<Rational>,
}

impl IsolationResult {
    pub fn count(&self) -> usize {
        self.intervals.len() + self.exact_roots.len()
    }

    /// One representative point per distinct root, ascending.
    pub fn points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .intervals
            .iter()
            .map(|(lo, hi)| (lo + hi) / Rational::from_integer(BigInt::from(2)))
            .chain(self.exact_roots.iter().cloned())
            .collect();
        pts.sort();
        pts
    }
}

struct Isolator {
    sf: DensePoly,
    chain: Vec<DensePoly>,
    w_cache: HashMap<Rational, usize>,
}

impl Isolator {
    fn w(&mut self, x: &Rational) -> usize {
        if let Some(v) = self.w_cache.get(x) {
            return *v;
        }
        let v = right_limit_alternations(&self.chain, x);
        self.w_cache.insert(x.clone(), v);
        v
    }

    /// Distinct roots in (lo, hi].
    fn count_half_open(&mut self, lo: &Rational, hi: &Rational) -> usize {
        let a = self.w(lo);
        let b = self.w(hi);
        assert!(a >= b);
        a - b
    }

    fn isolate(
        &mut self,
        lo: Rational,
        hi: Rational,
        count: usize,
        out: &mut IsolationResult,
        eps4: &Rational,
    ) {
        // invariant: `count` distinct roots in the open interval (lo, hi),
        // and sf(lo) != 0, sf(hi) != 0
        if count == 0 {
            return;
        }
        if count == 1 && &(&hi - &lo) < eps4 {
            out.intervals.push((lo, hi));
            return;
        }
        if count == 1 {
            let sl = Sign::of_rational(&self.sf.eval(&lo));
            let sh = Sign::of_rational(&self.sf.eval(&hi));
            if !sl.is_zero() && !sh.is_zero() && sl != sh {
                // single sign-change bracket: plain bisection is enough
                let (mut l, mut h) = (lo, hi);
                while &(&h - &l) >= eps4 {
                    let m = (&l + &h) / Rational::from_integer(BigInt::from(2));
                    let sm = Sign::of_rational(&self.sf.eval(&m));
                    if sm.is_zero() {
                        out.exact_roots.push(m);
                        return;
                    }
                    if sm == sl {
                        l = m;
                    } else {
                        h = m;
                    }
                }
                out.intervals.push((l, h));
                return;
            }
        }
        let m = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        if self.sf.eval(&m).is_zero() {
            out.exact_roots.push(m.clone());
            let left = self.count_half_open(&lo, &m) - 1; // roots in (lo, m)
            let right = count - left - 1; // roots in (m, hi)
            self.isolate(lo, m.clone(), left, out, eps4);
            self.isolate(m, hi, right, out, eps4);
        } else {
            let left = self.count_half_open(&lo, &m); // roots in (lo, m)
            let right = count - left;
            self.isolate(lo, m.clone(), left, out, eps4);
            self.isolate(m, hi, right, out, eps4);
        }
    }
}

/// Bracket every distinct real root of p inside the query range to width
/// < eps/4, with exact rational hits reported separately.
pub fn isolate_and_refine(p: &DensePoly, range: &CountQuery, eps: &Rational) -> Result<IsolationResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() > MAX_DENSE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: p.degree(),
            max: MAX_DENSE_DEGREE,
        });
    }
    if eps <= &Rational::zero() {
        return Err(Error::InvalidRequest("eps must be positive".to_string()));
    }
    let mut out = IsolationResult {
        intervals: Vec::new(),
        exact_roots: Vec::new(),
    };
    if p.degree() == 0 {
        return Ok(out);
    }
    let g = dense_gcd(p, &p.derivative());
    let sf = if g.degree() >= 1 { p.div_exact(&g).primitive() } else { p.primitive() };

    // Endpoint roots (exact decisions).
    if !range.a_open && sf.eval(&range.a).is_zero() {
        out.exact_roots.push(range.a.clone());
    }
    if !range.b_open && range.b != range.a && sf.eval(&range.b).is_zero() {
        out.exact_roots.push(range.b.clone());
    }
    if range.a == range.b {
        return Ok(out);
    }

    let chain = dense_sturm_chain(&sf);
    let mut iso = Isolator {
        sf,
        chain,
        w_cache: HashMap::new(),
    };
    // Interior roots live in the open interval; split at interior rational
    // roots of sf found along the way. If an endpoint is itself a root the
    // half-open W-count handles it: roots in (a, b) = W(a) - W(b) - [sf(b)=0].
    let mut interior = iso.count_half_open(&range.a, &range.b);
    if iso.sf.eval(&range.b).is_zero() {
        interior -= 1;
    }
    let eps4 = eps / Rational::from_integer(BigInt::from(4));
    iso.isolate(range.a.clone(), range.b.clone(), interior, &mut out, &eps4);
    out.exact_roots.sort();
    Ok(out)
}

/// Tetranomial blowup record for x^(2D) + x^(D+1) + x^D + 1.
#[derive(Debug, Clone)]
pub struct BlowupRow {
    pub d: u64,
    /// p2 equals -((D-1)/(2D)) x^(D+1) - (1/2) x^D - 1 exactly.
    pub p2_matches_closed_form: bool,
    pub p3_degree: u64,
    pub p3_term_count: usize,
    /// Full chain length K (primitive-normalized chain).
    pub chain_k: usize,
}

/// Build the dense Sturm data of the degree-2D tetranomial family and report
/// the shape of p2 and p3.
pub fn tetranomial_blowup(d: u64) -> BlowupRow {
    assert!(d >= 3);
    let n = (2 * d) as usize;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[0] = Rational::one();
    coeffs[d as usize] = Rational::one();
    coeffs[d as usize + 1] = Rational::one();
    coeffs[n] = Rational::one();
    let p0 = DensePoly::new(coeffs);
    let p1 = p0.derivative();
    // True (unscaled) Sturm elements for the closed-form comparison.
    let r0 = p0.rem(&p1);
    let p2 = DensePoly::new(r0.coeffs.iter().map(|c| -c).collect());
    let r1 = p1.rem(&p2);
    let p3 = DensePoly::new(r1.coeffs.iter().map(|c| -c).collect());

    let mut expect = vec![Rational::zero(); d as usize + 2];
    expect[0] = -Rational::one();
    expect[d as usize] = -Rational::new(BigInt::one(), BigInt::from(2));
    expect[d as usize + 1] = -Rational::new(BigInt::from(d - 1), BigInt::from(2 * d));
    let expect = DensePoly::new(expect);

    let chain = dense_sturm_chain(&p0);
    BlowupRow {
        d,
        p2_matches_closed_form: p2 == expect,
        p3_degree: p3.degree(),
        p3_term_count: p3.term_count(),
        chain_k: chain.len() - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_i64, rat_ratio};

    fn q_open(a: i64, b: i64) -> CountQuery {
        CountQuery::open(rat_i64(a), rat_i64(b)).unwrap()
    }

    #[test]
    fn expand_examples() {
        let f = SparsePoly::from_int_terms(&[(1, 0), (-3, 37), (1, 100)]);
        let d = expand(&f).unwrap();
        assert_eq!(d.term_count(), 3);
        assert_eq!(d.to_sparse(), f);
        assert!(expand(&SparsePoly::zero()).unwrap().is_zero());
        assert_eq!(
            expand(&SparsePoly::from_int_terms(&[(2, 0), (-3, 1), (1, 2)])).unwrap(),
            DensePoly::from_int_coeffs(&[2, -3, 1])
        );
        let too_big = SparsePoly::from_int_terms(&[(1, 0), (1, 5000)]);
        assert!(matches!(expand(&too_big), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn dense_count_examples() {
        let p = DensePoly::from_int_coeffs(&[2, -3, 1]);
        assert_eq!(dense_sturm_count(&p, &q_open(0, 3)).unwrap(), 2);
        // x^3: single distinct root 0
        let c = DensePoly::from_int_coeffs(&[0, 0, 0, 1]);
        assert_eq!(dense_sturm_count(&c, &q_open(-1, 1)).unwrap(), 1);
        // x^5 - x - 1 on (1, 2): exactly one root
        let f = DensePoly::from_int_coeffs(&[-1, -1, 0, 0, 0, 1]);
        assert_eq!(dense_sturm_count(&f, &q_open(1, 2)).unwrap(), 1);
    }

    #[test]
    fn dense_count_endpoint_roots() {
        // (x^2-1)^2: distinct roots -1, 1 (double)
        let p = DensePoly::from_int_coeffs(&[1, 0, -2, 0, 1]);
        assert_eq!(
            dense_sturm_count(&p, &CountQuery::new(rat_i64(-1), rat_i64(2), true, false).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            dense_sturm_count(&p, &CountQuery::closed(rat_i64(-1), rat_i64(2)).unwrap()).unwrap(),
            2
        );
        // (x-1)^2 (x-2)
        let p = DensePoly::from_int_coeffs(&[-2, 5, -4, 1]);
        assert_eq!(
            dense_sturm_count(&p, &CountQuery::new(rat_i64(1), rat_i64(3), true, true).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            dense_sturm_count(&p, &CountQuery::closed(rat_i64(1), rat_i64(3)).unwrap()).unwrap(),
            2
        );
    }

    #[test]
    fn isolation_examples() {
        // x^2 - 2 on (0, 2)
        let p = DensePoly::from_int_coeffs(&[-2, 0, 1]);
        let r = isolate_and_refine(&p, &q_open(0, 2), &rat_ratio(1, 1_000_000)).unwrap();
        assert_eq!(r.count(), 1);
        let pt = &r.points()[0];
        assert!((pt * pt - rat_i64(2)).abs() < rat_ratio(1, 100_000));
        // x^2 + 1: empty
        let p = DensePoly::from_int_coeffs(&[1, 0, 1]);
        assert_eq!(
            isolate_and_refine(&p, &q_open(-10, 10), &rat_ratio(1, 100)).unwrap().count(),
            0
        );
        // (x-1)(x-2)(x-3) on (0, 4): three roots, all exact rationals or tight brackets
        let p = DensePoly::from_int_coeffs(&[-6, 11, -6, 1]);
        let r = isolate_and_refine(&p, &q_open(0, 4), &rat_ratio(1, 1000)).unwrap();
        assert_eq!(r.count(), 3);
        let pts = r.points();
        for (i, want) in [1i64, 2, 3].iter().enumerate() {
            assert!((&pts[i] - rat_i64(*want)).abs() < rat_ratio(1, 1000));
        }
    }

    #[test]
    fn isolation_intervals_hold_one_root_each() {
        let p = DensePoly::from_int_coeffs(&[-2, 0, 1]); // x^2 - 2
        let r = isolate_and_refine(&p, &q_open(-2, 2), &rat_ratio(1, 1024)).unwrap();
        assert_eq!(r.count(), 2);
        for (lo, hi) in &r.intervals {
            let q = CountQuery::open(lo.clone(), hi.clone()).unwrap();
            assert_eq!(dense_sturm_count(&p, &q).unwrap(), 1);
        }
    }

    #[test]
    fn isolation_multiplicity_and_endpoints() {
        // (x-1)^2 (x+2): distinct roots -2, 1
        let p = DensePoly::from_int_coeffs(&[2, -3, 0, 1]);
        let r = isolate_and_refine(
            &p,
            &CountQuery::closed(rat_i64(-2), rat_i64(5)).unwrap(),
            &rat_ratio(1, 1000),
        )
        .unwrap();
        assert_eq!(r.count(), 2);
        assert!(r.exact_roots.contains(&rat_i64(-2)));
    }

    #[test]
    fn gcd_and_resultant() {
        // gcd((x-1)^2, 2(x-1)) ~ (x-1)
        let a = DensePoly::from_int_coeffs(&[1, -2, 1]);
        let b = DensePoly::from_int_coeffs(&[-2, 2]);
        let g = dense_gcd(&a, &b);
        assert_eq!(g.degree(), 1);
        // resultant(f, f') = 0 iff repeated root
        assert_eq!(resultant(&a, &a.derivative()), Rational::zero());
        let c = DensePoly::from_int_coeffs(&[1, 1, 1]);
        assert!(!resultant(&c, &c.derivative()).is_zero());
        // resultant(x^2-2, 2x) = 2^2 * (-2)... known: res = 4*(-2)+? just nonzero
        let f = DensePoly::from_int_coeffs(&[-2, 0, 1]);
        assert!(!resultant(&f, &f.derivative()).is_zero());
    }

    #[test]
    fn blowup_small_cases() {
        let r3 = tetranomial_blowup(3);
        assert!(r3.p2_matches_closed_form);
        assert_eq!(r3.p3_degree, 3);
        assert!(r3.p3_term_count >= 4);
        let r5 = tetranomial_blowup(5);
        assert!(r5.p2_matches_closed_form);
        assert_eq!(r5.p3_degree, 5);
        assert!(r5.p3_term_count >= 6);
    }
}
