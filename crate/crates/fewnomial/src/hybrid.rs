//! Geometric-grid bisection followed by Newton iteration, with the
//! gamma(f, x) diagnostic and alpha-bound selection backing its grid ratio.
//!
//! The grid walks x = c0^j * eps for c0 = 1 +- 1/(8 alpha*), recovering the
//! binary expansion of the cell index j in O(log(alpha* log(R/eps))) sign
//! probes; the final cell is inside the Newton basin of the unique root, and
//! ceil(log2(3 + log2(R/eps))) + 1 Newton steps reach the eps target.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ops::OpCounter;
use crate::poly::{self, SparsePoly};
use crate::scalar::{
    rat_from_log2, rat_i64, rat_log2_abs, rat_ratio, Backend, Iv, Num, NumCfg, NumErr, Rational,
    Sign,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Argument transform applied before evaluating the underlying sparse
/// polynomial: the solver feeds HYBRID shifted and reflected windows without
/// ever expanding f(x + c) into a dense polynomial.
#[derive(Debug, Clone)]
pub(crate) enum PhiTransform {
    Identity,
    /// t -> c + t
    Shift(Rational),
    /// t -> c - t
    ReflectShift(Rational),
}

#[derive(Debug, Clone)]
pub(crate) struct PhiFn<'a> {
    pub poly: &'a SparsePoly,
    pub transform: PhiTransform,
    pub negate: bool,
}

impl<'a> PhiFn<'a> {
    pub fn plain(poly: &'a SparsePoly) -> PhiFn<'a> {
        PhiFn {
            poly,
            transform: PhiTransform::Identity,
            negate: false,
        }
    }

    fn arg<N: Num>(&self, t: &N, cfg: &NumCfg, ctr: &mut OpCounter) -> N {
        match &self.transform {
            PhiTransform::Identity => t.clone(),
            PhiTransform::Shift(c) => {
                ctr.add(1);
                N::of_rat(cfg, c).nadd(t)
            }
            PhiTransform::ReflectShift(c) => {
                ctr.add(1);
                N::of_rat(cfg, c).nsub(t)
            }
        }
    }

    pub fn eval<N: Num>(&self, t: &N, cfg: &NumCfg, ctr: &mut OpCounter) -> N {
        ctr.eval_phi(1);
        let x = self.arg(t, cfg, ctr);
        let v = poly::eval_n(self.poly, &x, cfg, ctr);
        if self.negate {
            v.nneg()
        } else {
            v
        }
    }

    /// phi'(t) by the chain rule (reflection flips the sign).
    pub fn eval_deriv<N: Num>(
        &self,
        t: &N,
        deriv: &SparsePoly,
        cfg: &NumCfg,
        ctr: &mut OpCounter,
    ) -> N {
        ctr.eval_phi_prime(1);
        let x = self.arg(t, cfg, ctr);
        let v = poly::eval_n(deriv, &x, cfg, ctr);
        let flip = self.negate ^ matches!(self.transform, PhiTransform::ReflectShift(_));
        if flip {
            v.nneg()
        } else {
            v
        }
    }
}

/// sup over 2 <= k <= min(k_max, D) of |f^(k)(x) / (k! f'(x))|^(1/(k-1)).
///
/// Derivatives are formed term-wise with falling factorials; the k-th root
/// is taken in log space, so the result is accurate to ~1e-13 relative (a
/// diagnostic, not a certified enclosure).
pub fn gamma(f: &SparsePoly, x: &Rational, k_max: u64) -> Result<Rational> {
    if k_max < 2 {
        return Err(Error::InvalidRequest("k_max must be >= 2".to_string()));
    }
    let d = f.degree();
    let fp = poly::derivative(f);
    let f1 = fp.eval_plain(x);
    if f1.is_zero() {
        return Err(Error::SingularPoint);
    }
    let log_f1 = rat_log2_abs(&f1).unwrap();
    let mut best: Option<f64> = None;
    let mut consider = |log_fk: f64, k: u64| {
        let l = (log_fk - log_f1) / (k - 1) as f64;
        best = Some(match best {
            None => l,
            Some(b) => b.max(l),
        });
    };
    if x.is_zero() {
        // f^(k)(0) = c_k * k!, so |f^(k)(0)/(k! f'(0))| = |c_k / f'(0)|
        for (c, e) in f.terms() {
            if *e < 2 || *e > k_max.min(d) {
                continue;
            }
            consider(rat_log2_abs(c).unwrap(), *e);
        }
    } else {
        // Incremental falling factorials and powers across k.
        let top = k_max.min(d);
        let mut ff: Vec<Rational> = Vec::new(); // (a)_k per term (at k = 1: a)
        let mut pw: Vec<Rational> = Vec::new(); // x^(a-k) per term (at k = 1)
        for (_, a) in f.terms() {
            ff.push(rat_i64(*a as i64));
            pw.push(if *a >= 1 {
                crate::scalar::rat_pow(x, a - 1)
            } else {
                Rational::zero()
            });
        }
        let mut kfact = BigInt::one();
        for k in 2..=top {
            kfact *= BigInt::from(k);
            let mut val = Rational::zero();
            for (i, (c, a)) in f.terms().iter().enumerate() {
                if *a >= k {
                    ff[i] *= rat_i64((*a - k + 1) as i64);
                    pw[i] /= x;
                    val += c * &ff[i] * &pw[i];
                } else {
                    ff[i] = Rational::zero();
                }
            }
            if !val.is_zero() {
                let log_kfact = rat_log2_abs(&Rational::from_integer(kfact.clone())).unwrap();
                consider(rat_log2_abs(&val).unwrap() - log_kfact, k);
            }
        }
    }
    Ok(match best {
        None => Rational::zero(),
        Some(l) => rat_from_log2(l),
    })
}

/// Verified upper bound on the alpha invariant for (D, m): (D-1)/2 for
/// binomials, (D-1)(D-2)/2 for trinomials (floored at (D-1)/2 so the bound
/// stays positive at D = 2). For m >= 4 no bound is proven; strict mode
/// demands an override, otherwise the trinomial formula is reused unverified.
pub fn alpha_bound(
    d: u64,
    m: u64,
    override_alpha: Option<Rational>,
    strict: bool,
) -> Result<Rational> {
    if d < 2 || m < 2 {
        return Err(Error::InvalidRequest(format!(
            "alpha_bound needs D >= 2 and m >= 2, got D={d}, m={m}"
        )));
    }
    if let Some(a) = override_alpha {
        if a <= Rational::zero() {
            return Err(Error::InvalidRequest(
                "alpha override must be positive".to_string(),
            ));
        }
        return Ok(a);
    }
    let half = |n: u64| Rational::new(BigInt::from(n), BigInt::from(2));
    let base = half(d - 1);
    match m {
        2 => Ok(base),
        3 => Ok(base.clone().max(half((d - 1) * (d - 2)))),
        _ if strict => Err(Error::AlphaUnknown),
        _ => Ok(base.clone().max(half((d - 1) * (d - 2)))),
    }
}

/// HYBRID's input: phi must be monotone on (0, R) with a single root there,
/// +-phi convex, and alpha_star >= z*gamma(phi, z) on the interval.
#[derive(Debug, Clone)]
pub struct HybridInput {
    pub eps: Rational,
    pub r: Rational,
    pub phi: SparsePoly,
    pub alpha_star: Rational,
    pub direction: Direction,
}

/// Diagnostics-rich result of one HYBRID run.
#[derive(Debug, Clone)]
pub struct HybridOutcome {
    pub root: Rational,
    /// Step-3 Newton starting point.
    pub newton_start: Rational,
    /// Grid cell bracketing the root on Step-3 entry.
    pub grid_lo: Rational,
    pub grid_hi: Rational,
    /// A sign test hit the root exactly.
    pub exact_hit: bool,
    pub newton_iters: u32,
    /// Newton steps replaced by bracket bisection.
    pub safeguard_steps: u32,
    /// The post-Newton eps-certificate failed and sign bisection finished
    /// the job.
    pub fallback_bisection: bool,
}

enum Probe {
    RootAbove,
    RootBelow,
    Hit,
}

struct GridParams<'p, 'a> {
    phi: &'p PhiFn<'a>,
    deriv: SparsePoly,
    eps: Rational,
    r: Rational,
    alpha: Rational,
    direction: Direction,
    round_bits: u32,
}

fn probe<N: Num>(
    p: &GridParams,
    t: &N,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<Probe, NumErr> {
    // The root lies strictly inside (0, R); phi's monotonicity contract says
    // nothing beyond the window, so out-of-window probes must not evaluate.
    ctr.cmp(1);
    if t.nsub(&N::of_rat(cfg, &p.r)).nsign()? != Sign::Neg {
        return Ok(Probe::RootBelow);
    }
    ctr.cmp(1);
    if t.nsign()? != Sign::Pos {
        return Ok(Probe::RootAbove);
    }
    let v = p.phi.eval(t, cfg, ctr);
    ctr.cmp(1);
    let s = v.nsign()?;
    Ok(match (p.direction, s) {
        (_, Sign::Zero) => Probe::Hit,
        (Direction::Decreasing, Sign::Pos) | (Direction::Increasing, Sign::Neg) => Probe::RootAbove,
        _ => Probe::RootBelow,
    })
}

struct AttemptOut<N: Num> {
    root: N,
    newton_start: N,
    grid_lo: N,
    grid_hi: N,
    exact_hit: bool,
    newton_iters: u32,
    safeguard_steps: u32,
    fallback_bisection: bool,
}

impl<N: Num> AttemptOut<N> {
    fn into_outcome(self) -> HybridOutcome {
        HybridOutcome {
            root: self.root.to_rational(),
            newton_start: self.newton_start.to_rational(),
            grid_lo: self.grid_lo.to_rational(),
            grid_hi: self.grid_hi.to_rational(),
            exact_hit: self.exact_hit,
            newton_iters: self.newton_iters,
            safeguard_steps: self.safeguard_steps,
            fallback_bisection: self.fallback_bisection,
        }
    }
}

fn hybrid_attempt<N: Num>(
    p: &GridParams,
    cfg: &NumCfg,
    ctr: &mut OpCounter,
) -> std::result::Result<AttemptOut<N>, NumErr> {
    let rb = p.round_bits;
    let one = N::one_val(cfg);
    let eight = N::of_i64(cfg, 8);
    let alpha = N::of_rat(cfg, &p.alpha);
    let half = N::of_rat(cfg, &rat_ratio(1, 2));
    // Step 0: grid ratio and the squared-ratio ladder c_i = c_{i-1}^2.
    ctr.mul(1);
    ctr.div(1);
    ctr.add(1);
    let c0 = match p.direction {
        Direction::Decreasing => one.nadd(&one.ndiv(&eight.nmul(&alpha))?),
        Direction::Increasing => one.ndiv(&one.nsub(&one.ndiv(&eight.nmul(&alpha))?))?,
    }
    .round_bits(rb);
    let eps = N::of_rat(cfg, &p.eps);
    let r = N::of_rat(cfg, &p.r);
    ctr.div(1);
    let target = r.ndiv(&eps)?;
    let mut ladder = vec![c0.clone()];
    loop {
        let last = ladder.last().unwrap();
        ctr.cmp(1);
        if ladder.len() > 1 && last.nsub(&target).nsign()? != Sign::Neg {
            break;
        }
        ctr.mul(1);
        let next = last.nmul(last).round_bits(rb);
        ladder.push(next);
        assert!(ladder.len() < 160, "grid ladder failed to reach R/eps");
    }
    let m_steps = ladder.len() - 1; // ladder[i] = c0^(2^i); c_M = ladder[m_steps]

    let trivial = |root: N, lo: N, hi: N, exact: bool| AttemptOut {
        newton_start: root.clone(),
        root,
        grid_lo: lo,
        grid_hi: hi,
        exact_hit: exact,
        newton_iters: 0,
        safeguard_steps: 0,
        fallback_bisection: false,
    };

    // If the root sits at or below eps, eps itself is an eps-approximation.
    let mut xhat = eps.clone();
    match probe(p, &xhat, cfg, ctr)? {
        Probe::Hit => return Ok(trivial(xhat.clone(), xhat.clone(), xhat, true)),
        Probe::RootBelow => {
            return Ok(trivial(xhat.clone(), N::zero_val(cfg), xhat, false));
        }
        Probe::RootAbove => {}
    }

    // Steps 1-2: descend the ladder, recovering the grid index bit by bit.
    let mut khat = m_steps;
    while khat > 0 {
        ctr.mul(1);
        let t = xhat.nmul(&ladder[khat - 1]).round_bits(rb);
        match probe(p, &t, cfg, ctr)? {
            Probe::Hit => return Ok(trivial(t.clone(), t.clone(), t, true)),
            Probe::RootAbove => xhat = t,
            Probe::RootBelow => {}
        }
        khat -= 1;
    }
    // Root in (xhat, min(c0*xhat, R)].
    ctr.mul(1);
    ctr.cmp(1);
    let hi0 = {
        let raw = xhat.nmul(&c0).round_bits(rb);
        if raw.nsub(&r).nsign()? == Sign::Pos {
            r.clone()
        } else {
            raw
        }
    };
    let (mut lo, mut hi) = (xhat.clone(), hi0.clone());
    let newton_start = match p.direction {
        Direction::Decreasing => xhat.clone(),
        Direction::Increasing => hi0.clone(),
    };

    // Step 3: Newton with a free bracket safeguard (each iterate's already
    // computed phi sign shrinks the bracket; out-of-bracket steps bisect).
    let iters = {
        let l = rat_log2_abs(&(&p.r / &p.eps)).unwrap_or(1.0).max(1.0);
        (3.0 + l).log2().ceil() as u32 + 1
    };
    let mut z = newton_start.clone();
    let mut safeguard = 0u32;
    let mut exact = false;
    for _ in 0..iters {
        let fv = p.phi.eval(&z, cfg, ctr);
        ctr.cmp(1);
        let fs = fv.nsign()?;
        if fs == Sign::Zero {
            exact = true;
            break;
        }
        let above = matches!(
            (p.direction, fs),
            (Direction::Decreasing, Sign::Pos) | (Direction::Increasing, Sign::Neg)
        );
        ctr.cmp(2);
        let in_bracket = z.nsub(&lo).nsign()? != Sign::Neg && hi.nsub(&z).nsign()? != Sign::Neg;
        if in_bracket {
            if above {
                lo = z.clone();
            } else {
                hi = z.clone();
            }
        }
        let dv = p.phi.eval_deriv(&z, &p.deriv, cfg, ctr);
        ctr.cmp(1);
        let step_ok = !dv.nsign()?.is_zero();
        let mut next = if step_ok {
            ctr.div(1);
            ctr.add(1);
            z.nsub(&fv.ndiv(&dv)?).round_bits(rb)
        } else {
            z.clone()
        };
        ctr.cmp(2);
        let inside =
            next.nsub(&lo).nsign()? == Sign::Pos && hi.nsub(&next).nsign()? == Sign::Pos;
        if !step_ok || !inside {
            safeguard += 1;
            ctr.add(1);
            ctr.mul(1);
            next = lo.nadd(&hi).nmul(&half).round_bits(rb);
        }
        z = next;
    }

    let mut fallback = false;
    if !exact {
        // eps-certificate: a sign change across (z - eps, z + eps), clipped
        // to the bracket, proves |z - zeta| < eps. On failure, finish with
        // certified sign bisection (off the theory's happy path only).
        ctr.add(2);
        let lo_probe = z.nsub(&eps);
        let hi_probe = z.nadd(&eps);
        ctr.cmp(1);
        let left_ok = if lo_probe.nsub(&lo).nsign()? != Sign::Pos {
            true // bracket already tighter than eps on this side
        } else {
            matches!(probe(p, &lo_probe, cfg, ctr)?, Probe::RootAbove | Probe::Hit)
        };
        ctr.cmp(1);
        let right_ok = if hi.nsub(&hi_probe).nsign()? != Sign::Pos {
            true
        } else {
            matches!(probe(p, &hi_probe, cfg, ctr)?, Probe::RootBelow | Probe::Hit)
        };
        if !(left_ok && right_ok) {
            fallback = true;
            let mut guard = 0u32;
            loop {
                ctr.cmp(1);
                if hi.nsub(&lo).nsub(&eps).nsign()? == Sign::Neg {
                    break;
                }
                ctr.add(1);
                ctr.mul(1);
                let mid = lo.nadd(&hi).nmul(&half).round_bits(rb + 8);
                match probe(p, &mid, cfg, ctr)? {
                    Probe::Hit => {
                        lo = mid.clone();
                        hi = mid;
                        break;
                    }
                    Probe::RootAbove => lo = mid,
                    Probe::RootBelow => hi = mid,
                }
                guard += 1;
                assert!(guard < 10_000, "bisection fallback failed to converge");
            }
            ctr.add(1);
            ctr.mul(1);
            z = lo.nadd(&hi).nmul(&half).round_bits(rb);
        }
    }

    Ok(AttemptOut {
        root: z,
        newton_start,
        grid_lo: lo,
        grid_hi: hi,
        exact_hit: exact,
        newton_iters: iters,
        safeguard_steps: safeguard,
        fallback_bisection: fallback,
    })
}

fn validate_hybrid(eps: &Rational, r: &Rational, alpha: &Rational) -> Result<()> {
    if !(eps > &Rational::zero() && eps < r) {
        return Err(Error::InvalidRequest("hybrid needs 0 < eps < R".to_string()));
    }
    if alpha <= &Rational::zero() {
        return Err(Error::InvalidRequest(
            "alpha_star must be positive".to_string(),
        ));
    }
    Ok(())
}

fn hint_bits(eps: &Rational, r: &Rational, alpha: &Rational) -> u32 {
    let l1 = rat_log2_abs(&(r / eps)).unwrap_or(1.0).max(1.0);
    let l2 = rat_log2_abs(alpha).unwrap_or(1.0).max(1.0);
    (l1 + l2) as u32 + 96
}

pub(crate) fn hybrid_transformed(
    phi: &PhiFn,
    eps: &Rational,
    r: &Rational,
    alpha: &Rational,
    direction: Direction,
    backend: Backend,
    ctr: &mut OpCounter,
) -> Result<HybridOutcome> {
    validate_hybrid(eps, r, alpha)?;
    let rb = hint_bits(eps, r, alpha);
    let params = GridParams {
        phi,
        deriv: poly::derivative(phi.poly),
        eps: eps.clone(),
        r: r.clone(),
        alpha: alpha.clone(),
        direction,
        round_bits: rb,
    };
    backend.run_adaptive(
        rb + 32,
        ctr,
        |bits, c| hybrid_attempt::<Iv>(&params, &NumCfg::bits(bits), c).map(AttemptOut::into_outcome),
        |c| hybrid_attempt::<Rational>(&params, &NumCfg::exact(), c).map(AttemptOut::into_outcome),
    )
}

/// Locate the unique root of phi in (0, R) to within eps; full diagnostics.
pub fn hybrid_solve_detailed(
    inp: &HybridInput,
    backend: Backend,
    ctr: &mut OpCounter,
) -> Result<HybridOutcome> {
    let phi = PhiFn::plain(&inp.phi);
    hybrid_transformed(
        &phi,
        &inp.eps,
        &inp.r,
        &inp.alpha_star,
        inp.direction,
        backend,
        ctr,
    )
}

/// z with |z - zeta| < eps for the unique root zeta of phi in (0, R).
pub fn hybrid_solve(inp: &HybridInput, backend: Backend, ctr: &mut OpCounter) -> Result<Rational> {
    Ok(hybrid_solve_detailed(inp, backend, ctr)?.root)
}

/// Check Smale's approximate-root contract: Newton from z0 must satisfy
/// |z_{i+1} - zeta| <= 8 (1/2)^(2^i) |z0 - zeta| for i < iters. Distances
/// are compared in log2 space (the bounds get astronomically small).
pub fn is_approximate_root(
    f: &SparsePoly,
    z0: &Rational,
    zeta_oracle: &Rational,
    iters: u32,
) -> Result<bool> {
    if iters > 12 {
        return Err(Error::InvalidRequest("iters capped at 12".to_string()));
    }
    let d0 = (z0 - zeta_oracle).abs();
    if d0.is_zero() {
        return Ok(true);
    }
    let log_d0 = rat_log2_abs(&d0).unwrap();
    let deriv = poly::derivative(f);
    let prec: u32 = 192 + (1u32 << (iters + 3)).min(1 << 15);
    let mut ctr = OpCounter::default();
    let backend = Backend::Float {
        start_bits: prec,
        max_bits: prec.saturating_mul(8),
    };
    let out = backend.run_adaptive(
        prec,
        &mut ctr,
        |bits, c| {
            let cfg = NumCfg::bits(bits);
            let mut z = Iv::from_rational(z0, bits);
            for i in 0..iters {
                let fv = poly::eval_n(f, &z, &cfg, c);
                let dv = poly::eval_n(&deriv, &z, &cfg, c);
                if dv.nsign()?.is_zero() {
                    return Err(NumErr::DivByZero);
                }
                z = z.nsub(&fv.ndiv(&dv)?).round_bits(bits);
                let dist = (z.to_rational() - zeta_oracle).abs();
                let ok = if dist.is_zero() {
                    true
                } else {
                    rat_log2_abs(&dist).unwrap() <= 3.0 - (1u64 << i) as f64 + log_d0
                };
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        |_| Err(NumErr::Straddle),
    );
    match out {
        Ok(v) => Ok(v),
        Err(Error::Internal(_)) => Err(Error::SingularPoint),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_i64, rat_ratio};

    fn p(terms: &[(i64, u64)]) -> SparsePoly {
        SparsePoly::from_int_terms(terms)
    }

    fn approx_eq(a: &Rational, b: &Rational, tol: &Rational) -> bool {
        (a - b).abs() < *tol
    }

    #[test]
    fn gamma_xd_minus_c() {
        // x*gamma(x^2 - 2, 3) = 1/2
        let f = p(&[(-2, 0), (1, 2)]);
        let g = gamma(&f, &rat_i64(3), 64).unwrap();
        let xg = g * rat_i64(3);
        assert!(approx_eq(&xg, &rat_ratio(1, 2), &rat_ratio(1, 1_000_000_000)));
        // x*gamma(x^10 - 7, x) = 9/2 for sampled x > 0
        let f = p(&[(-7, 0), (1, 10)]);
        for x in [rat_ratio(1, 3), rat_i64(2), rat_ratio(17, 5)] {
            let g = gamma(&f, &x, 64).unwrap();
            let xg = g * &x;
            assert!(
                approx_eq(&xg, &rat_ratio(9, 2), &rat_ratio(1, 1_000_000_000)),
                "x={x} got {xg}"
            );
        }
    }

    #[test]
    fn gamma_matches_direct_summation() {
        // independent brute force: repeated symbolic differentiation
        let f = p(&[(1, 0), (-3, 3), (1, 5)]);
        let x = rat_i64(2);
        let got = gamma(&f, &x, 64).unwrap();
        let mut best = f64::NEG_INFINITY;
        let f1 = poly::derivative(&f).eval_plain(&x);
        let mut dk = poly::derivative(&f);
        let mut kfact = rat_i64(1);
        for k in 2..=5u64 {
            dk = poly::derivative(&dk);
            kfact *= rat_i64(k as i64);
            let v = dk.eval_plain(&x);
            if v.is_zero() {
                continue;
            }
            let r = (v / (&kfact * &f1)).abs();
            best = best.max(rat_log2_abs(&r).unwrap() / (k - 1) as f64);
        }
        let want = rat_from_log2(best);
        let tol = (&want * rat_ratio(1, 1_000_000_000)).abs();
        assert!(approx_eq(&got, &want, &tol), "got {got} want {want}");
    }

    #[test]
    fn gamma_singular_point() {
        let f = p(&[(-2, 0), (1, 2)]); // f' = 2x vanishes at 0
        assert!(matches!(gamma(&f, &rat_i64(0), 8), Err(Error::SingularPoint)));
    }

    #[test]
    fn alpha_bound_examples() {
        assert_eq!(alpha_bound(100, 2, None, false).unwrap(), rat_ratio(99, 2));
        assert_eq!(alpha_bound(100, 3, None, false).unwrap(), rat_i64(4851));
        // degenerate D=2, m=3: floored at (D-1)/2
        assert_eq!(alpha_bound(2, 3, None, false).unwrap(), rat_ratio(1, 2));
        assert!(matches!(alpha_bound(100, 4, None, true), Err(Error::AlphaUnknown)));
        assert_eq!(alpha_bound(100, 4, Some(rat_i64(7)), true).unwrap(), rat_i64(7));
    }

    #[test]
    fn hybrid_sqrt2() {
        let inp = HybridInput {
            eps: rat_ratio(1, 1_000_000),
            r: rat_i64(2),
            phi: p(&[(-2, 0), (1, 2)]),
            alpha_star: rat_ratio(1, 2),
            direction: Direction::Increasing,
        };
        let mut ctr = OpCounter::default();
        let z = hybrid_solve(&inp, Backend::Exact, &mut ctr).unwrap();
        // |z - sqrt(2)| < 1e-6 checked via squares
        let lo = &z - &inp.eps;
        let hi = &z + &inp.eps;
        assert!(&lo * &lo < rat_i64(2) && rat_i64(2) < &hi * &hi);
    }

    #[test]
    fn hybrid_linear_near_exact() {
        let inp = HybridInput {
            eps: rat_ratio(1, 10),
            r: rat_i64(2),
            phi: p(&[(-1, 0), (1, 1)]),
            alpha_star: rat_ratio(1, 2),
            direction: Direction::Increasing,
        };
        let mut ctr = OpCounter::default();
        let z = hybrid_solve(&inp, Backend::Exact, &mut ctr).unwrap();
        assert!((z - rat_i64(1)).abs() < rat_ratio(1, 10));
    }

    #[test]
    fn hybrid_high_degree_float() {
        // x^1000 - 2 on (0, 2), eps = 1e-9: root 2^(1/1000)
        let inp = HybridInput {
            eps: rat_ratio(1, 1_000_000_000),
            r: rat_i64(2),
            phi: p(&[(-2, 0), (1, 1000)]),
            alpha_star: rat_ratio(999, 2),
            direction: Direction::Increasing,
        };
        let mut ctr = OpCounter::default();
        let out = hybrid_solve_detailed(&inp, Backend::float(160), &mut ctr).unwrap();
        // residual certificate: phi(z - eps) < 0 < phi(z + eps)
        let f = &inp.phi;
        let lo = &out.root - &inp.eps;
        let hi = &out.root + &inp.eps;
        assert_eq!(f.sign_at(&lo), Sign::Neg);
        assert_eq!(f.sign_at(&hi), Sign::Pos);
        assert!(!out.fallback_bisection, "Newton handoff should succeed");
        // eval budget sanity: well under 8 * log2(alpha* * log2(R/eps))
        let model = (499.5f64 * 31.0).log2();
        assert!((ctr.evals() as f64) <= 8.0 * model, "evals = {}", ctr.evals());
    }

    #[test]
    fn approximate_root_examples() {
        let f = p(&[(-2, 0), (1, 2)]);
        // high-precision sqrt(2) via Newton on rounded rationals
        let mut zeta = rat_ratio(3, 2);
        for _ in 0..8 {
            zeta = (&zeta / rat_i64(2)) + (rat_i64(1) / &zeta);
            zeta = crate::scalar::round_to_bits(&zeta, 400);
        }
        assert!(is_approximate_root(&f, &rat_ratio(3, 2), &zeta, 5).unwrap());
        assert!(!is_approximate_root(&f, &rat_i64(100), &zeta, 4).unwrap());
        let lin = p(&[(-1, 0), (1, 1)]);
        assert!(is_approximate_root(&lin, &rat_i64(50), &rat_i64(1), 5).unwrap());
    }
}
