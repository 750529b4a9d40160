//! Compressed Sturm sequences for sparse polynomials.
//!
//! For a trinomial (after dividing out the minimal exponent) every remainder
//! in the Sturm sequence is a binomial, monomial, or constant, and the chain
//! has K <= 3*ceil(log2 D) + 2 elements. Reduction never expands a quotient:
//! a term c*x^b with b >= deg p_i collapses in one shot via the substitution
//! x^(A1-A0) == u0/u1 applied j times, with the ratio power computed by
//! recursive squaring. Root counting over any interval (open, closed, or
//! mixed endpoints, roots allowed at the endpoints) follows from evaluating
//! right-limit sign alternations of the chain.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ops::OpCounter;
use crate::poly::{self, ceil_log2, SparsePoly};
use crate::scalar::{Backend, Iv, Num, NumCfg, NumErr, Rational, Sign};
use crate::{Error, Result};

/// Interval query with rational endpoints and per-endpoint openness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountQuery {
    pub a: Rational,
    pub b: Rational,
    pub a_open: bool,
    pub b_open: bool,
}

impl CountQuery {
    pub fn new(a: Rational, b: Rational, a_open: bool, b_open: bool) -> Result<CountQuery> {
        if a > b {
            return Err(Error::InvalidRequest(format!(
                "interval endpoints out of order: {a} > {b}"
            )));
        }
        Ok(CountQuery {
            a,
            b,
            a_open,
            b_open,
        })
    }

    pub fn open(a: Rational, b: Rational) -> Result<CountQuery> {
        CountQuery::new(a, b, true, true)
    }

    pub fn closed(a: Rational, b: Rational) -> Result<CountQuery> {
        CountQuery::new(a, b, false, false)
    }

    fn contains_zero(&self) -> bool {
        let a_ok = self.a < Rational::zero() || (self.a.is_zero() && !self.a_open);
        let b_ok = self.b > Rational::zero() || (self.b.is_zero() && !self.b_open);
        a_ok && b_ok
    }
}

/// Compressed Sturm chain with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct SturmChain {
    elems: Vec<SparsePoly>,
    gaps: Vec<u64>,
}

impl SturmChain {
    /// K: index of the last non-identically-zero element.
    pub fn k(&self) -> usize {
        self.elems.len() - 1
    }

    pub fn elements(&self) -> &[SparsePoly] {
        &self.elems
    }

    /// Exponent gap of element i (max exp - min exp; 0 for monomials and
    /// constants).
    pub fn gap(&self, i: usize) -> u64 {
        self.gaps.get(i).copied().unwrap_or(0)
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn degree(&self) -> u64 {
        self.elems[0].degree()
    }

    pub fn bound(&self) -> usize {
        k_bound(self.degree()) as usize
    }
}

pub(crate) fn k_bound(d: u64) -> u64 {
    3 * ceil_log2(d.max(1)) + 2
}

/// Chain over a generic numeric backend. Element terms are descending by
/// exponent and every coefficient has a certified nonzero sign.
pub(crate) struct ChainN<N: Num> {
    pub elems: Vec<Vec<(N, u64)>>,
    pub gaps: Vec<u64>,
}

fn spread<N: Num>(terms: &[(N, u64)]) -> u64 {
    if terms.len() < 2 {
        0
    } else {
        terms.iter().map(|t| t.1).max().unwrap() - terms.iter().map(|t| t.1).min().unwrap()
    }
}

/// Drop terms whose coefficient is certified zero; error on straddles.
fn certify_terms<N: Num>(
    terms: Vec<(N, u64)>,
    ctr: &mut OpCounter,
) -> std::result::Result<Vec<(N, u64)>, NumErr> {
    let mut out = Vec::with_capacity(terms.len());
    for (c, e) in terms {
        ctr.cmp(1);
        if !c.nsign()?.is_zero() {
            out.push((c, e));
        }
    }
    Ok(out)
}

/// Divide an element by the magnitude of its leading coefficient: a strictly
/// positive rescaling that keeps coefficient growth subresultant-sized.
fn normalize_element<N: Num>(
    mut terms: Vec<(N, u64)>,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<Vec<(N, u64)>, NumErr> {
    terms.sort_by(|x, y| y.1.cmp(&x.1));
    let lead_sign = terms[0].0.nsign()?;
    debug_assert!(!lead_sign.is_zero());
    let lead_abs = if lead_sign == Sign::Neg {
        terms[0].0.nneg()
    } else {
        terms[0].0.clone()
    };
    let mut out = Vec::with_capacity(terms.len());
    for (i, (c, e)) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push((
                if lead_sign == Sign::Neg {
                    N::of_i64(cfg, -1)
                } else {
                    N::of_i64(cfg, 1)
                },
                e,
            ));
        } else {
            ctr.div(1);
            out.push((c.ndiv(&lead_abs)?, e));
        }
    }
    Ok(out)
}

/// x^e by binary powering with op charges.
fn pow_charged<N: Num>(x: &N, e: u64, cfg: &NumCfg, ctr: &mut OpCounter) -> N {
    let mut acc = N::one_val(cfg);
    let mut base = x.clone();
    let mut e = e;
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            if first {
                acc = base.clone();
                first = false;
            } else {
                ctr.mul(1);
                acc = acc.nmul(&base);
            }
        }
        e >>= 1;
        if e > 0 {
            ctr.mul(1);
            base = base.nmul(&base);
        }
    }
    acc
}

/// Negated remainder of `prev` modulo binomial/monomial `cur`.
fn negated_remainder<N: Num>(
    prev: &[(N, u64)],
    cur: &[(N, u64)],
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<Vec<(N, u64)>, NumErr> {
    let mut merged: Vec<(N, u64)> = Vec::with_capacity(3);
    let mut push = |c: N, e: u64, ctr: &mut OpCounter| {
        if let Some(slot) = merged.iter_mut().find(|t| t.1 == e) {
            ctr.add(1);
            slot.0 = slot.0.nadd(&c);
        } else {
            merged.push((c, e));
        }
    };
    if cur.len() == 1 {
        // Monomial divisor u*x^A: terms with exponent >= A are divisible,
        // lower terms survive.
        let a = cur[0].1;
        debug_assert!(a >= 1);
        for (c, e) in prev {
            if *e < a {
                push(c.nneg(), *e, ctr);
            }
        }
    } else {
        debug_assert_eq!(cur.len(), 2);
        let (u1, a1) = (&cur[0].0, cur[0].1);
        let (u0neg, a0) = (&cur[1].0, cur[1].1);
        debug_assert!(a1 > a0);
        let g = a1 - a0;
        // cur = u1 x^a1 - u0 x^a0  =>  x^a1 == (u0/u1) x^a0 with u0 = -u0neg
        ctr.div(1);
        let ratio = u0neg.nneg().ndiv(u1)?;
        for (c, e) in prev {
            if *e < a1 {
                push(c.nneg(), *e, ctr);
            } else {
                let j = (*e - a1) / g + 1;
                let e_new = *e - j * g;
                let factor = pow_charged(&ratio, j, cfg, ctr);
                ctr.mul(1);
                push(c.nmul(&factor).nneg(), e_new, ctr);
            }
        }
    }
    certify_terms(merged, ctr)
}

/// Build the compressed chain for a stripped (min exponent 0) polynomial
/// with 2 or 3 terms. Asserts the Theorem-1.3 length bound.
pub(crate) fn build_chain_n<N: Num>(
    f: &SparsePoly,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<ChainN<N>, NumErr> {
    debug_assert!(f.min_exp() == 0);
    debug_assert!((2..=3).contains(&f.term_count()));
    debug_assert!(f.degree() >= 1);
    let d = f.degree();
    let bound = k_bound(d) as usize;

    // p0, descending exponents
    let mut p0: Vec<(N, u64)> = poly::convert_terms(f, cfg);
    p0.reverse();
    // p1 = f' (coefficient products charged)
    let p1: Vec<(N, u64)> = p0
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(c, e)| {
            ctr.mul(1);
            (c.nmul(&N::of_i64(cfg, *e as i64)), e - 1)
        })
        .collect();
    debug_assert!(!p1.is_empty());

    let mut elems = vec![p0, p1];
    loop {
        let n = elems.len();
        let cur = &elems[n - 1];
        // Constants end the chain (the next remainder is identically zero).
        if cur.len() == 1 && cur[0].1 == 0 {
            break;
        }
        let next = negated_remainder(&elems[n - 2], cur, cfg, ctr)?;
        if next.is_empty() {
            break;
        }
        let next = normalize_element(next, cfg, ctr)?;
        elems.push(next);
        assert!(
            elems.len() - 1 <= bound,
            "Sturm chain exceeded K <= 3*ceil(log2 D)+2: D={d}, K>{bound}"
        );
    }

    let gaps = elems.iter().map(|e| spread(e)).collect();
    let chain = ChainN { elems, gaps };
    assert!(
        chain.elems.len() - 1 <= bound,
        "Sturm chain bound violated: D={d}"
    );
    for e in &chain.elems[1..] {
        assert!(e.len() <= 2, "compressed chain element with >2 terms");
    }
    ctr.note_chain_k((chain.elems.len() - 1) as u64);
    Ok(chain)
}

/// Build the compressed Sturm chain of a trinomial with constant term
/// (apply `op_s` first) and degree >= 2. Exact coefficients.
pub fn build_trinomial_chain(f: &SparsePoly) -> Result<SturmChain> {
    if f.term_count() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            got: f.term_count(),
        });
    }
    if f.min_exp() != 0 {
        return Err(Error::NeedsSFirst);
    }
    if f.degree() < 2 {
        return Err(Error::InvalidRequest(
            "trinomial chain requires degree >= 2".to_string(),
        ));
    }
    build_chain_exact(f)
}

pub(crate) fn build_chain_exact(f: &SparsePoly) -> Result<SturmChain> {
    let mut ctr = OpCounter::default();
    let cfg = NumCfg::exact();
    let chain = build_chain_n::<Rational>(f, &cfg, &mut ctr)
        .map_err(|_| Error::Internal("exact chain build cannot straddle".to_string()))?;
    Ok(SturmChain {
        elems: chain
            .elems
            .into_iter()
            .map(|terms| SparsePoly::from_terms(terms.into_iter().map(|(c, e)| (c, e)).collect()))
            .collect(),
        gaps: chain.gaps,
    })
}

fn sign_seq_attempt<N: Num>(
    elems: &[Vec<(N, u64)>],
    x: &Rational,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<Vec<Sign>, NumErr> {
    let xn = N::of_rat(cfg, x);
    let mut pows = poly::PowTable::new(*cfg, xn);
    let mut out = Vec::with_capacity(elems.len());
    for terms in elems {
        let v = poly::eval_terms(terms, &mut pows, ctr);
        ctr.cmp(1);
        out.push(v.nsign()?);
    }
    Ok(out)
}

/// Signs of (p_0(x), ..., p_K(x)) via recursive squaring: O(log^2 D) charged
/// operations for trinomial chains.
pub fn chain_sign_sequence(
    ch: &SturmChain,
    x: &Rational,
    backend: Backend,
    ctr: &mut OpCounter,
) -> Result<poly::SignSeq> {
    let signs = backend.run_adaptive(
        0,
        ctr,
        |bits, c| {
            let cfg = NumCfg::bits(bits);
            let elems: Vec<Vec<(Iv, u64)>> = ch
                .elems
                .iter()
                .map(|p| p.terms().iter().map(|(r, e)| (Iv::from_rational(r, bits), *e)).collect())
                .collect();
            sign_seq_attempt(&elems, x, &cfg, c)
        },
        |c| {
            let cfg = NumCfg::exact();
            let elems: Vec<Vec<(Rational, u64)>> = ch
                .elems
                .iter()
                .map(|p| p.terms().to_vec())
                .collect();
            sign_seq_attempt(&elems, x, &cfg, c)
        },
    )?;
    Ok(poly::SignSeq(signs))
}

/// Right-limit alternation count W(x) = V(x+0). For any a <= b the number
/// of distinct roots in (a, b] is W(a) - W(b), including endpoints sitting
/// exactly on (possibly multiple) roots.
fn right_limit_alternations<N: Num>(
    elems: &[Vec<(N, u64)>],
    x: &Rational,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<usize, NumErr> {
    let xn = N::of_rat(cfg, x);
    let mut pows = poly::PowTable::new(*cfg, xn);
    let mut last = Sign::Zero;
    let mut n = 0usize;
    for terms in elems {
        let s = poly::right_limit_sign_n(terms, &mut pows, x.is_zero(), cfg, ctr)?;
        debug_assert!(!s.is_zero());
        if !last.is_zero() && s != last {
            n += 1;
        }
        last = s;
    }
    Ok(n)
}

fn count_attempt<N: Num>(
    g: &SparsePoly,
    q: &CountQuery,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<usize, NumErr> {
    let chain = build_chain_n::<N>(g, cfg, ctr)?;
    let wa = right_limit_alternations(&chain.elems, &q.a, cfg, ctr)?;
    let wb = right_limit_alternations(&chain.elems, &q.b, cfg, ctr)?;
    assert!(wa >= wb, "right-limit alternations must be non-increasing");
    let mut count = (wa - wb) as i64; // roots in (a, b]
    let zero_at = |p: &[(N, u64)], x: &Rational, ctr: &mut OpCounter| {
        let xn = N::of_rat(cfg, x);
        let mut pows = poly::PowTable::new(*cfg, xn);
        let v = poly::eval_terms(p, &mut pows, ctr);
        ctr.cmp(1);
        v.nsign().map(|s| s.is_zero())
    };
    if q.b_open && zero_at(&chain.elems[0], &q.b, ctr)? {
        count -= 1;
    }
    if !q.a_open && zero_at(&chain.elems[0], &q.a, ctr)? {
        count += 1;
    }
    assert!(count >= 0, "interval root count went negative");
    Ok(count as usize)
}

/// Exact number of distinct real roots of f in the queried interval.
///
/// After dividing out the minimal exponent the polynomial must have at most
/// 3 terms for the O(log^2 D) path; more terms dispatch to the dense oracle
/// (always exact, degree <= 4096).
pub fn count_roots(
    f: &SparsePoly,
    q: &CountQuery,
    backend: Backend,
    ctr: &mut OpCounter,
) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let delta = f.min_exp();
    let g = poly::op_s(f)?;
    ctr.cmp(2);
    let base = usize::from(delta > 0 && q.contains_zero());
    if g.term_count() == 1 {
        return Ok(base); // nonzero constant
    }
    if q.a == q.b {
        // Single point: only a closed-closed query can contain a root.
        if q.a_open || q.b_open {
            return Ok(base);
        }
        let s = poly::sign_eval(&g, &q.a, backend, ctr)?;
        return Ok(base + usize::from(s.is_zero()));
    }
    if g.term_count() <= 3 {
        let interior = backend.run_adaptive(
            0,
            ctr,
            |bits, c| count_attempt::<Iv>(&g, q, &NumCfg::bits(bits), c),
            |c| count_attempt::<Rational>(&g, q, &NumCfg::exact(), c),
        )?;
        Ok(base + interior)
    } else {
        let dense = crate::oracle::expand(&g)?;
        let interior = crate::oracle::dense_sturm_count(&dense, q)?;
        Ok(base + interior)
    }
}

/// Row of the chain-length experiment.
#[derive(Debug, Clone)]
pub struct ChainStatRow {
    pub d: u64,
    pub trial: u32,
    pub k: usize,
    pub bound: usize,
    pub ok_bound: bool,
    /// Gap sequence (ell_0 is the trinomial's full exponent spread).
    pub gaps: Vec<u64>,
    pub ok_halving: bool,
}

#[derive(Debug, Clone)]
pub struct ChainStats {
    pub rows: Vec<ChainStatRow>,
    pub bound_violations: usize,
    pub halving_violations: usize,
}

/// Indices i >= 1 violating min(l_{i+2}, l_{i+3}) <= l_i / 2 (gaps beyond
/// the chain end count as 0). Index 0 is excluded: the trinomial's spread
/// is not an element gap and the inequality is not claimed for it.
pub fn halving_violations(gaps: &[u64]) -> Vec<usize> {
    let g = |i: usize| gaps.get(i).copied().unwrap_or(0);
    let mut bad = Vec::new();
    for i in 1..gaps.len() {
        if g(i + 2).min(g(i + 3)) * 2 > g(i) {
            bad.push(i);
        }
    }
    bad
}

/// Random-trinomial chain statistics: builds `trials` chains per degree,
/// records K against the Theorem-1.3 bound and the gap-halving inequality.
pub fn chain_length_stats(d_list: &[u64], trials: u32, seed: u64) -> ChainStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut bound_violations = 0;
    let mut halving_violations_n = 0;
    for &d in d_list {
        assert!(d >= 2);
        for trial in 0..trials {
            let a2 = rng.gen_range(1..d);
            let coeff = |rng: &mut ChaCha8Rng| loop {
                let c = rng.gen_range(-10i64..=10);
                if c != 0 {
                    break c;
                }
            };
            let f = SparsePoly::from_int_terms(&[
                (coeff(&mut rng), 0),
                (coeff(&mut rng), a2),
                (coeff(&mut rng), d),
            ]);
            let chain = build_chain_exact(&f).expect("chain build");
            let k = chain.k();
            let bound = chain.bound();
            let ok_bound = k <= bound;
            let ok_halving = halving_violations(&chain.gaps).is_empty();
            if !ok_bound {
                bound_violations += 1;
            }
            if !ok_halving {
                halving_violations_n += 1;
            }
            rows.push(ChainStatRow {
                d,
                trial,
                k,
                bound,
                ok_bound,
                gaps: chain.gaps.clone(),
                ok_halving,
            });
        }
    }
    ChainStats {
        rows,
        bound_violations,
        halving_violations: halving_violations_n,
    }
}
