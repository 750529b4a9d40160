//! The m-nomial solver: partitions [0, R] at eps-approximated roots of f'
//! and f'' into windows where +-f is convex and monotone, solves each clean
//! window with the grid/Newton hybrid, and certifies the bad eps-wide
//! neighborhoods with exact compressed-Sturm counts. The returned multiset
//! Z has exactly one entry per distinct root of f in [0, R], each within
//! eps of its root.

use num_traits::{One, Signed, Zero};

use crate::hybrid::{self, Direction, PhiFn, PhiTransform};
use crate::ops::OpCounter;
use crate::oracle;
use crate::poly::{self, sign_eval, SparsePoly};
use crate::scalar::{rat_i64, rat_ratio, Backend, Rational, Sign};
use crate::sturm::{self, CountQuery};
use crate::{Error, Result};

/// Which algorithm step produced a reported root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// f(R) = 0 detected by direct evaluation.
    Endpoint,
    /// Counted inside the eps-neighborhood of critical-point center i.
    CriticalNbhd(usize),
    /// Counted inside the eps-neighborhood of inflection center i.
    InflectionNbhd(usize),
    /// Unique sign-change root of monotone window i via HYBRID.
    HybridInterval(usize),
    /// A sign test evaluated to exactly zero.
    ExactHit,
    /// x = 0 after dividing out x^(a_1).
    ZeroRoot,
    /// Degree-2 closed form (completing the square).
    QuadraticFormula,
}

/// Multiset of eps-approximations, one entry per distinct root in [0, R].
#[derive(Debug, Clone, Default)]
pub struct RootReport {
    entries: Vec<(Rational, Provenance)>,
    /// Set when f is the zero polynomial (every real is a root).
    pub zero_function: bool,
}

impl RootReport {
    pub fn entries(&self) -> &[(Rational, Provenance)] {
        &self.entries
    }

    pub fn roots(&self) -> Vec<Rational> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn sort(&mut self) {
        self.entries.sort_by(|a, b| a.0.cmp(&b.0));
    }

    /// Residual check: |Z| equals the exact root count of f on [0, R], and
    /// every reported point has a root within eps of it (certified by a
    /// count query on its eps-ball).
    pub fn verify(
        &self,
        f: &SparsePoly,
        r: &Rational,
        eps: &Rational,
        backend: Backend,
        ctr: &mut OpCounter,
    ) -> Result<bool> {
        if self.zero_function {
            return Ok(f.is_zero());
        }
        let total = sturm::count_roots(
            f,
            &CountQuery::closed(Rational::zero(), r.clone())?,
            backend,
            ctr,
        )?;
        if total != self.entries.len() {
            return Ok(false);
        }
        for (v, _) in &self.entries {
            let lo = (v - eps).max(Rational::zero());
            let hi = (v + eps).min(r.clone());
            let n = sturm::count_roots(
                f,
                &CountQuery::closed(lo, hi)?,
                backend,
                ctr,
            )?;
            if n == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub f: SparsePoly,
    pub r: Rational,
    pub eps: Rational,
    /// Upper bound on the alpha invariant; None selects `alpha_bound(D, m)`.
    pub alpha_star: Option<Rational>,
}

impl SolveRequest {
    pub fn new(f: SparsePoly, r: Rational, eps: Rational) -> SolveRequest {
        SolveRequest {
            f,
            r,
            eps,
            alpha_star: None,
        }
    }
}

/// Dampened-ness verdict for one member of the S/L operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// m <= 4, dampened for any degree.
    DampenedByTheorem,
    /// Explicitly checked: at most one root of g'' strictly between any two
    /// consecutive critical points of g.
    DampenedVerified,
    NotDampened,
    /// Degree too large for the explicit check.
    Unknown,
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    /// The operator word (1 => L1, 2 => L2), innermost first.
    pub word: Vec<u8>,
    pub member: SparsePoly,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct DampenedCertificate {
    pub members: Vec<FamilyMember>,
}

impl DampenedCertificate {
    pub fn all_dampened_or_unknown(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.verdict != Verdict::NotDampened)
    }
}

/// Explicit dampened check via the dense oracle: isolate the roots of g'
/// and g'', shrink brackets until unambiguous, and verify at most one g''
/// root falls strictly between consecutive g' roots.
fn explicit_dampened(g: &SparsePoly) -> Result<Verdict> {
    let g1 = poly::derivative(g);
    let g2 = poly::derivative(&g1);
    if g1.is_zero() || g2.is_zero() {
        return Ok(Verdict::DampenedVerified);
    }
    let d1 = oracle::expand(&g1)?;
    let d2 = oracle::expand(&g2)?;
    let bound = oracle::expand(g)?.root_bound() + d1.root_bound() + d2.root_bound();
    // Remove roots shared with g' from g'' (they sit at interval endpoints,
    // not inside).
    let shared = oracle::dense_gcd(&d1, &d2);
    let d2_only = if shared.degree() >= 1 {
        d2.div_exact(&shared)
    } else {
        d2
    };
    let range = CountQuery::open(Rational::zero(), bound)?;
    let mut eps = rat_ratio(1, 1 << 20);
    'retry: for _ in 0..12 {
        let i1 = oracle::isolate_and_refine(&d1, &range, &eps)?;
        let i2 = oracle::isolate_and_refine(&d2_only, &range, &eps)?;
        // Flatten to (position, is_critical) with exact points as
        // zero-width brackets; demand pairwise disjoint brackets.
        let mut marks: Vec<(Rational, Rational, bool)> = Vec::new();
        for (lo, hi) in &i1.intervals {
            marks.push((lo.clone(), hi.clone(), true));
        }
        for x in &i1.exact_roots {
            marks.push((x.clone(), x.clone(), true));
        }
        for (lo, hi) in &i2.intervals {
            marks.push((lo.clone(), hi.clone(), false));
        }
        for x in &i2.exact_roots {
            marks.push((x.clone(), x.clone(), false));
        }
        marks.sort_by(|a, b| a.0.cmp(&b.0));
        for w in marks.windows(2) {
            if w[0].1 >= w[1].0 {
                eps /= rat_i64(16);
                continue 'retry;
            }
        }
        // Count inflections between consecutive criticals (and before the
        // first / after the last, bounded by 0 and the root bound).
        let mut run = 0usize;
        for (_, _, is_crit) in &marks {
            if *is_crit {
                run = 0;
            } else {
                run += 1;
                if run > 1 {
                    return Ok(Verdict::NotDampened);
                }
            }
        }
        return Ok(Verdict::DampenedVerified);
    }
    Ok(Verdict::Unknown)
}

/// Verdicts for the whole family {(S o L_{e1} o ... o L_{ek})(f)}.
pub fn check_dampened(f: &SparsePoly, max_d_explicit: u64) -> DampenedCertificate {
    let mut members = Vec::new();
    if f.is_zero() {
        return DampenedCertificate { members };
    }
    let m = f.term_count();
    let mut frontier: Vec<(Vec<u8>, SparsePoly)> = vec![(Vec::new(), f.clone())];
    for _k in 0..m {
        let mut next = Vec::new();
        for (word, g) in &frontier {
            if g.is_zero() {
                continue;
            }
            let s = poly::op_s(g).expect("nonzero");
            let verdict = if s.term_count() <= 4 {
                Verdict::DampenedByTheorem
            } else if s.degree() <= max_d_explicit {
                explicit_dampened(&s).unwrap_or(Verdict::Unknown)
            } else {
                Verdict::Unknown
            };
            members.push(FamilyMember {
                word: word.clone(),
                member: s.clone(),
                verdict,
            });
            for e in [1u8, 2u8] {
                let child = if e == 1 {
                    poly::op_l1(g)
                } else {
                    poly::op_l2(g)
                };
                if let Ok(c) = child {
                    if !c.is_zero() {
                        let mut w = vec![e];
                        w.extend_from_slice(word);
                        next.push((w, c));
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    // Dedup identical members (L1/L2 words can collide).
    members.dedup_by(|a, b| a.member == b.member && a.verdict == b.verdict);
    DampenedCertificate { members }
}

const MAX_RECURSION: usize = 16;

struct Ctx<'c> {
    backend: Backend,
    ctr: &'c mut OpCounter,
}

fn half(x: &Rational, y: &Rational) -> Rational {
    (x + y) / rat_i64(2)
}

/// Positive-root bound for a sparse polynomial (Cauchy-style, padded).
fn sparse_root_bound(f: &SparsePoly) -> Rational {
    let lead = f.leading_coeff().expect("nonzero");
    let mut m = Rational::zero();
    for (c, _) in &f.terms()[..f.term_count() - 1] {
        let r = (c / lead).abs();
        if r > m {
            m = r;
        }
    }
    m + rat_i64(2)
}

fn solve_inner(
    f: &SparsePoly,
    r: &Rational,
    eps: &Rational,
    alpha_override: Option<Rational>,
    ctx: &mut Ctx,
    depth: usize,
) -> Result<Vec<(Rational, Provenance)>> {
    if depth > MAX_RECURSION {
        return Err(Error::Internal("solver recursion too deep".to_string()));
    }
    let mut out: Vec<(Rational, Provenance)> = Vec::new();
    // Steps 1-3: constants and monomials.
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.term_count() == 1 {
        if f.min_exp() > 0 {
            out.push((Rational::zero(), Provenance::ZeroRoot));
        }
        return Ok(out);
    }
    // Step 4: divide out x^(a1), recording the root at 0.
    let f = if f.min_exp() > 0 {
        out.push((Rational::zero(), Provenance::ZeroRoot));
        poly::op_s(f)?
    } else {
        f.clone()
    };
    let d = f.degree();
    let m = f.term_count() as u64;
    // Step 5: linear.
    if d == 1 {
        let c1 = &f.terms()[0].0;
        let c2 = &f.terms()[1].0;
        let root = -(c1 / c2);
        if root > Rational::zero() && root <= *r {
            out.push((root, Provenance::ExactHit));
        }
        return Ok(out);
    }
    // Step 6: quadratic by completing the square.
    if d == 2 {
        quadratic_roots(&f, r, eps, ctx, &mut out)?;
        return Ok(out);
    }
    // Step 7: endpoint R.
    ctx.backend; // (endpoint evaluation must be certified)
    if sign_eval(&f, r, ctx.backend, ctx.ctr)?.is_zero() {
        out.push((r.clone(), Provenance::Endpoint));
    }
    let alpha = match alpha_override {
        Some(a) => a,
        None => hybrid::alpha_bound(d, m, None, false)?,
    };
    // Steps 8-9: binomial.
    if m == 2 {
        let s0 = Sign::of_rational(&f.constant_term());
        let sr = sign_eval(&f, r, ctx.backend, ctx.ctr)?;
        ctx.ctr.cmp(1);
        if s0.product(sr) == Sign::Neg {
            let negate = f.terms()[1].0.is_negative();
            let phi = PhiFn {
                poly: &f,
                transform: PhiTransform::Identity,
                negate,
            };
            let outc = hybrid::hybrid_transformed(
                &phi,
                eps,
                r,
                &alpha,
                Direction::Increasing,
                ctx.backend,
                ctx.ctr,
            )?;
            let prov = if outc.exact_hit {
                Provenance::ExactHit
            } else {
                Provenance::HybridInterval(0)
            };
            out.push((outc.root.min(r.clone()), prov));
        }
        return Ok(out);
    }
    // Step 11: a2 = 1 moves to the reciprocal side (unless the transform
    // would be 1-adjacent again, which only happens for m >= 4).
    let a2 = f.terms()[1].1;
    let second_highest = f.terms()[f.term_count() - 2].1;
    if a2 == 1 && d - second_highest > 1 {
        let mapped = reciprocal_route(&f, r, eps, ctx, depth)?;
        out.extend(mapped);
        return Ok(out);
    }

    // Step 10: u-sequence from a recursive solve of f'.
    let fp = poly::derivative(&f);
    let sub_u = solve_inner(&fp, r, eps, None, ctx, depth + 1)?;
    // Interior v-sequence from a recursive solve of f''.
    let fpp = poly::derivative(&fp);
    let sub_v = if fpp.is_zero() {
        Vec::new()
    } else {
        solve_inner(&fpp, r, eps, None, ctx, depth + 1)?
    };

    let interior = |vals: Vec<(Rational, Provenance)>| -> Vec<Rational> {
        let mut v: Vec<Rational> = vals
            .into_iter()
            .map(|(x, _)| x)
            .filter(|x| x > &Rational::zero() && x < r)
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let u_list = interior(sub_u);
    let mut v_list = interior(sub_v);

    // Steps 12-14: end-interval inflection roots located directly.
    let ends = {
        let mut e: Vec<(Rational, Rational)> = Vec::new();
        let first_hi = u_list.first().cloned().unwrap_or_else(|| r.clone());
        e.push((Rational::zero(), first_hi));
        if !u_list.is_empty() {
            e.push((u_list.last().cloned().unwrap(), r.clone()));
        }
        e
    };
    for (lo, hi) in ends {
        if let Some(v) = end_interval_inflection(&f, &fpp, &lo, &hi, eps, ctx)? {
            v_list.push(v);
        }
    }
    v_list.sort();
    v_list.dedup();

    // Steps 15-18: merged-neighborhood counting plus per-window hybrids.
    partition_and_collect(&f, &fpp, r, eps, &alpha, &u_list, &v_list, ctx, &mut out)?;
    Ok(out)
}

/// Steps 13-14: if f'' has a root inside [lo+eps, hi-eps], locate it with
/// HYBRID (window shifted so it starts at 0) and return it.
fn end_interval_inflection(
    _f: &SparsePoly,
    fpp: &SparsePoly,
    lo: &Rational,
    hi: &Rational,
    eps: &Rational,
    ctx: &mut Ctx,
) -> Result<Option<Rational>> {
    if fpp.is_zero() {
        return Ok(None);
    }
    let a = lo + eps;
    let b = hi - eps;
    if a >= b {
        return Ok(None);
    }
    let q = CountQuery::closed(a.clone(), b.clone())?;
    let n = sturm::count_roots(fpp, &q, ctx.backend, ctx.ctr)?;
    if n == 0 {
        return Ok(None);
    }
    if n > 1 {
        return Err(Error::NotDampened);
    }
    let sa = sign_eval(fpp, &a, ctx.backend, ctx.ctr)?;
    if sa.is_zero() {
        return Ok(Some(a));
    }
    let sb = sign_eval(fpp, &b, ctx.backend, ctx.ctr)?;
    if sb.is_zero() {
        return Ok(Some(b));
    }
    let len = &b - &a;
    if sa.product(sb) == Sign::Neg {
        // phi = +-f'' shifted to (0, len); orient so phi increases.
        let negate = sa == Sign::Pos;
        let phi = PhiFn {
            poly: fpp,
            transform: PhiTransform::Shift(a.clone()),
            negate,
        };
        let alpha = hybrid::alpha_bound(
            fpp.degree().max(2),
            (fpp.term_count() as u64).max(2),
            None,
            false,
        )?;
        let outc = hybrid::hybrid_transformed(
            &phi,
            eps,
            &len,
            &alpha,
            Direction::Increasing,
            ctx.backend,
            ctx.ctr,
        )?;
        return Ok(Some(&a + outc.root));
    }
    // One root, no sign change: even multiplicity. Bisect on counts.
    let (mut l, mut h) = (a, b);
    while &(&h - &l) >= eps {
        let mid = half(&l, &h);
        let nl = sturm::count_roots(
            fpp,
            &CountQuery::new(l.clone(), mid.clone(), true, false)?,
            ctx.backend,
            ctx.ctr,
        )?;
        if nl >= 1 {
            h = mid;
        } else {
            l = mid;
        }
    }
    Ok(Some(half(&l, &h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CenterKind {
    Critical(usize),
    Inflection(usize),
    OriginEnd,
    FarEnd,
}

/// Steps 15-18 with merged neighborhoods: cover (0, R) by open eps-balls
/// around every center (plus half-balls at 0 and R), count roots exactly in
/// each merged ball, and run HYBRID on each sign-changing gap between balls.
#[allow(clippy::too_many_arguments)]
fn partition_and_collect(
    f: &SparsePoly,
    fpp: &SparsePoly,
    r: &Rational,
    eps: &Rational,
    alpha: &Rational,
    u_list: &[Rational],
    v_list: &[Rational],
    ctx: &mut Ctx,
    out: &mut Vec<(Rational, Provenance)>,
) -> Result<()> {
    // Assemble centers with kinds (criticals take precedence on ties).
    let mut centers: Vec<(Rational, CenterKind)> = Vec::new();
    for (i, u) in u_list.iter().enumerate() {
        centers.push((u.clone(), CenterKind::Critical(i + 1)));
    }
    for (i, v) in v_list.iter().enumerate() {
        if !u_list.contains(v) {
            centers.push((v.clone(), CenterKind::Inflection(i)));
        }
    }
    centers.sort_by(|a, b| a.0.cmp(&b.0));

    // Neighborhoods: [max(0,c-eps), min(r,c+eps)] open intervals, plus the
    // half-balls (0, eps) and (r-eps, r).
    struct Ball {
        lo: Rational,
        hi: Rational,
        rep: Rational,
        kind: CenterKind,
    }
    let mut balls: Vec<Ball> = Vec::new();
    balls.push(Ball {
        lo: Rational::zero(),
        hi: eps.clone().min(r.clone()),
        rep: (eps / rat_i64(2)).min(r.clone()),
        kind: CenterKind::OriginEnd,
    });
    for (c, kind) in centers {
        balls.push(Ball {
            lo: (&c - eps).max(Rational::zero()),
            hi: (&c + eps).min(r.clone()),
            rep: c.clone(),
            kind,
        });
    }
    if r > eps {
        balls.push(Ball {
            lo: r - eps,
            hi: r.clone(),
            rep: r.clone(),
            kind: CenterKind::FarEnd,
        });
    }
    balls.sort_by(|a, b| a.lo.cmp(&b.lo));
    // Merge strictly overlapping balls; the representative of a merged run
    // is its first real center (or the run's first rep).
    let mut merged: Vec<Ball> = Vec::new();
    for b in balls {
        match merged.last_mut() {
            Some(last) if b.lo < last.hi => {
                if b.hi > last.hi {
                    last.hi = b.hi;
                }
                let b_is_center =
                    matches!(b.kind, CenterKind::Critical(_) | CenterKind::Inflection(_));
                let last_is_center =
                    matches!(last.kind, CenterKind::Critical(_) | CenterKind::Inflection(_));
                if b_is_center && !last_is_center {
                    last.rep = b.rep;
                    last.kind = b.kind;
                }
            }
            _ => merged.push(b),
        }
    }

    // Count roots in each merged ball.
    for ball in &merged {
        if ball.lo >= ball.hi {
            continue;
        }
        let q = CountQuery::open(ball.lo.clone(), ball.hi.clone())?;
        let n = sturm::count_roots(f, &q, ctx.backend, ctx.ctr)?;
        let prov = match ball.kind {
            CenterKind::Critical(i) => Provenance::CriticalNbhd(i),
            CenterKind::Inflection(i) => Provenance::InflectionNbhd(i),
            CenterKind::OriginEnd => Provenance::CriticalNbhd(0),
            CenterKind::FarEnd => Provenance::CriticalNbhd(u_list.len() + 1),
        };
        for _ in 0..n {
            out.push((ball.rep.clone(), prov));
        }
    }

    // Gaps between consecutive balls: check the boundary points exactly,
    // then hand sign-changing interiors to HYBRID.
    for (gi, w) in merged.windows(2).enumerate() {
        let a = w[0].hi.clone();
        let b = w[1].lo.clone();
        if a > b {
            continue; // swallowed by merging
        }
        let sa = sign_eval(f, &a, ctx.backend, ctx.ctr)?;
        if sa.is_zero() {
            out.push((a.clone(), Provenance::ExactHit));
        }
        if a == b {
            continue;
        }
        let sb = sign_eval(f, &b, ctx.backend, ctx.ctr)?;
        if sb.is_zero() {
            out.push((b.clone(), Provenance::ExactHit));
        }
        if sa.is_zero() || sb.is_zero() {
            continue; // monotone window: a boundary root forbids an interior one
        }
        ctx.ctr.cmp(1);
        if sa.product(sb) != Sign::Neg {
            continue;
        }
        let len = &b - &a;
        if len <= *eps {
            out.push((half(&a, &b), Provenance::HybridInterval(gi)));
            continue;
        }
        // Orientation: measure from the critical side (reflect when the
        // right flank is the critical one), sign chosen for convexity.
        let left_kind = w[0].kind;
        let right_kind = w[1].kind;
        let left_critical = matches!(
            left_kind,
            CenterKind::Critical(_) | CenterKind::OriginEnd
        );
        let right_critical = matches!(
            right_kind,
            CenterKind::Critical(_) | CenterKind::FarEnd
        );
        let reflect = right_critical && !left_critical;
        let negate = if fpp.is_zero() {
            false
        } else {
            let mut mid = half(&a, &b);
            let mut s = sign_eval(fpp, &mid, ctx.backend, ctx.ctr)?;
            if s.is_zero() {
                mid = half(&a, &mid);
                s = sign_eval(fpp, &mid, ctx.backend, ctx.ctr)?;
            }
            s == Sign::Neg
        };
        let (transform, domain_left_sign) = if reflect {
            (PhiTransform::ReflectShift(b.clone()), sb)
        } else {
            (PhiTransform::Shift(a.clone()), sa)
        };
        let phi_left = if negate {
            domain_left_sign.negate()
        } else {
            domain_left_sign
        };
        let direction = if phi_left == Sign::Neg {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        let phi = PhiFn {
            poly: f,
            transform,
            negate,
        };
        let outc =
            hybrid::hybrid_transformed(&phi, eps, &len, alpha, direction, ctx.backend, ctx.ctr)?;
        let x = if reflect { &b - &outc.root } else { &a + &outc.root };
        let prov = if outc.exact_hit {
            Provenance::ExactHit
        } else {
            Provenance::HybridInterval(gi)
        };
        out.push((x.clamp(Rational::zero(), r.clone()), prov));
    }
    Ok(())
}

/// Step 6: degree-2 closed form. Roots shift +- sqrt(disc)/(2 c3) around the
/// vertex; the square root comes from HYBRID on y^2 - s unless rational.
fn quadratic_roots(
    f: &SparsePoly,
    r: &Rational,
    eps: &Rational,
    ctx: &mut Ctx,
    out: &mut Vec<(Rational, Provenance)>,
) -> Result<()> {
    let c1 = f.constant_term();
    let c2 = f.coeff_of(1).cloned().unwrap_or_else(Rational::zero);
    let c3 = f
        .coeff_of(2)
        .cloned()
        .ok_or_else(|| Error::Internal("quadratic without x^2 term".to_string()))?;
    let disc = &c2 * &c2 - rat_i64(4) * &c1 * &c3;
    let vertex = -&c2 / (rat_i64(2) * &c3);
    match Sign::of_rational(&disc) {
        Sign::Neg => Ok(()),
        Sign::Zero => {
            if vertex >= Rational::zero() && vertex <= *r {
                out.push((vertex, Provenance::QuadraticFormula));
            }
            Ok(())
        }
        Sign::Pos => {
            let s = &disc / (rat_i64(4) * &c3 * &c3); // (sqrt s) = half root gap
            let y = match exact_sqrt(&s) {
                Some(y) => y,
                None => {
                    if s <= eps * eps {
                        eps / rat_i64(2)
                    } else {
                        let inp = hybrid::HybridInput {
                            eps: eps.clone(),
                            r: &s + rat_i64(1),
                            phi: SparsePoly::from_terms(vec![(-&s, 0), (Rational::one(), 2)]),
                            alpha_star: rat_ratio(1, 2),
                            direction: Direction::Increasing,
                        };
                        hybrid::hybrid_solve(&inp, ctx.backend, ctx.ctr)?
                    }
                }
            };
            // Exact membership: vertex +- sqrt(s) in [0, r] decided by
            // comparing s against the squared distances to the endpoints.
            let sqrt_cmp = |t: &Rational| -> std::cmp::Ordering {
                // compare sqrt(s) with t
                if t < &Rational::zero() {
                    std::cmp::Ordering::Greater
                } else {
                    s.cmp(&(t * t))
                }
            };
            let in_range = |plus: bool| -> bool {
                // root = vertex +- sqrt(s) in [0, r]?
                if plus {
                    sqrt_cmp(&-&vertex) != std::cmp::Ordering::Less
                        && sqrt_cmp(&(r - &vertex)) != std::cmp::Ordering::Greater
                } else {
                    sqrt_cmp(&vertex) != std::cmp::Ordering::Greater
                        && sqrt_cmp(&(&vertex - r)) != std::cmp::Ordering::Less
                }
            };
            if in_range(false) {
                let z = (&vertex - &y).clamp(Rational::zero(), r.clone());
                out.push((z, Provenance::QuadraticFormula));
            }
            if in_range(true) {
                let z = (&vertex + &y).clamp(Rational::zero(), r.clone());
                out.push((z, Provenance::QuadraticFormula));
            }
            Ok(())
        }
    }
}

fn exact_sqrt(s: &Rational) -> Option<Rational> {
    if s.is_negative() {
        return None;
    }
    let n = s.numer().sqrt();
    let d = s.denom().sqrt();
    if &(&n * &n) == s.numer() && &(&d * &d) == s.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Step 11: substitute x -> 1/x (exponent reversal), solve every positive
/// root of the transform at tightened precision, and map back the exact
/// count of roots below R.
fn reciprocal_route(
    f: &SparsePoly,
    r: &Rational,
    eps: &Rational,
    ctx: &mut Ctx,
    depth: usize,
) -> Result<Vec<(Rational, Provenance)>> {
    let ft = poly::reciprocal_transform(f)?;
    let eps_t = {
        let a = Rational::one();
        let b = eps * eps * eps / rat_i64(2);
        let c = Rational::one() / (rat_i64(2) * r * r);
        a.min(b).min(c)
    };
    let bound = sparse_root_bound(&ft);
    let sub = solve_inner(&ft, &bound, &eps_t, None, ctx, depth + 1)?;
    let mut mapped: Vec<(Rational, Provenance)> = sub
        .into_iter()
        .filter(|(z, _)| z > &Rational::zero())
        .map(|(z, p)| (Rational::one() / z, p))
        .collect();
    mapped.sort_by(|a, b| a.0.cmp(&b.0));
    // Exact number of roots of f in (0, R): keep that many smallest.
    let want = sturm::count_roots(
        f,
        &CountQuery::open(Rational::zero(), r.clone())?,
        ctx.backend,
        ctx.ctr,
    )?;
    if mapped.len() < want {
        return Err(Error::Internal(format!(
            "reciprocal route lost roots: have {}, need {want}",
            mapped.len()
        )));
    }
    mapped.truncate(want);
    Ok(mapped
        .into_iter()
        .map(|(z, p)| (z.clamp(Rational::zero(), r.clone()), p))
        .collect())
}

/// MNOMIALSOLVE: every root of f in [0, R] is eps-approximated by a unique
/// entry of the returned multiset, and the multiset size equals the number
/// of distinct roots in [0, R].
pub fn solve(req: &SolveRequest, backend: Backend, ctr: &mut OpCounter) -> Result<RootReport> {
    if req.f.is_zero() {
        return Ok(RootReport {
            entries: Vec::new(),
            zero_function: true,
        });
    }
    if !(req.eps > Rational::zero() && req.eps < req.r) {
        return Err(Error::InvalidRequest("need 0 < eps < R".to_string()));
    }
    let cert = check_dampened(&req.f, 512);
    if !cert.all_dampened_or_unknown() {
        return Err(Error::NotDampened);
    }
    let alpha = match &req.alpha_star {
        Some(a) => Some(a.clone()),
        None => {
            let g = poly::op_s(&req.f)?;
            if g.degree() >= 2 && g.term_count() >= 2 {
                Some(hybrid::alpha_bound(
                    g.degree(),
                    g.term_count() as u64,
                    None,
                    false,
                )?)
            } else {
                None
            }
        }
    };
    let mut ctx = Ctx { backend, ctr };
    let entries = solve_inner(&req.f, &req.r, &req.eps, alpha, &mut ctx, 0)?;
    let mut report = RootReport {
        entries,
        zero_function: false,
    };
    report.sort();
    Ok(report)
}

/// Exact root counting exposed at solver level, including intervals that
/// cross zero (handled by splitting at 0 and reflecting x -> -x).
pub fn solve_closed_count(
    f: &SparsePoly,
    q: &CountQuery,
    backend: Backend,
    ctr: &mut OpCounter,
) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.a >= Rational::zero() {
        return sturm::count_roots(f, q, backend, ctr);
    }
    let reflected = f.reflect_negative();
    if q.b <= Rational::zero() {
        let rq = CountQuery::new(-q.b.clone(), -q.a.clone(), q.b_open, q.a_open)?;
        return sturm::count_roots(&reflected, &rq, backend, ctr);
    }
    // a < 0 < b: negative side + zero + positive side
    let neg = sturm::count_roots(
        &reflected,
        &CountQuery::new(Rational::zero(), -q.a.clone(), true, q.a_open)?,
        backend,
        ctr,
    )?;
    let pos = sturm::count_roots(
        f,
        &CountQuery::new(Rational::zero(), q.b.clone(), true, q.b_open)?,
        backend,
        ctr,
    )?;
    let zero = usize::from(f.min_exp() > 0);
    Ok(neg + zero + pos)
}
