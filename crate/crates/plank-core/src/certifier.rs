//! Peeling certificates: per-step width tables, dilation witnesses, a
//! backwards chain bound, and an independent re-checker that recomputes
//! every quantity from the stored bodies.

use std::fmt;

use crate::coverage::{convex_residual, covers, Residual};
use crate::error::{CertifyError, GeometryError, SearchError};
use crate::geometry::{sample_directions, ConvexBody, Direction, HalfSpace, Vector};
use crate::num::{smin, Scalar};
use crate::planks::{bang_ratio, BangRatio, Plank};
use crate::Params;

/// Key of a width-table row: a scene plank direction or a sampled probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthKey {
    Plank(usize),
    Sample(usize),
}

impl fmt::Display for WidthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WidthKey::Plank(i) => write!(f, "plank {i}"),
            WidthKey::Sample(j) => write!(f, "sample {j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WidthEntry<S: Scalar> {
    pub key: WidthKey,
    pub direction: Direction<S>,
    pub width: S,
}

/// Case 2 evidence: dilating the body being peeled by `rho` about `p` lands
/// inside the residual. `h1` supports the body on the side away from the
/// plank, `h2` supports the residual with its boundary inside the plank, and
/// `p` is the lexicographically smallest point of the `h1` face.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationWitness<S: Scalar> {
    pub h1: HalfSpace<S>,
    pub h2: HalfSpace<S>,
    pub p: Vector<S>,
    pub rho: S,
    pub containment_margin: S,
}

#[derive(Clone, Debug)]
pub struct PeelStep<S: Scalar> {
    pub plank_index: usize,
    pub body_before: ConvexBody<S>,
    pub body_after: ConvexBody<S>,
    /// width(body_after, v) / width(body_before, v) along the plank normal;
    /// zero once the residual empties.
    pub rho: S,
    pub widths_before: Vec<WidthEntry<S>>,
    pub widths_after: Vec<WidthEntry<S>>,
    /// Present exactly when the peel strictly shrinks the width along the
    /// plank normal (rho < 1) while leaving a nonempty residual.
    pub dilation: Option<DilationWitness<S>>,
}

#[derive(Clone, Debug)]
pub struct Certificate<S: Scalar> {
    pub order: Vec<usize>,
    pub steps: Vec<PeelStep<S>>,
    pub bang_sum: BangRatio<S>,
    pub chain_bound: BangRatio<S>,
    pub verified: bool,
}

/// Outcome of re-checking a certificate against its scene.
#[derive(Clone, Debug)]
pub struct Verification {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Sum of plank width / body width over all planks, infinite as soon as one
/// direction is flat on the body.
pub fn bang_sum<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
) -> Result<BangRatio<S>, GeometryError> {
    let mut total = BangRatio::Finite(S::zero());
    for p in planks {
        total = total.add(&bang_ratio(p, body)?);
    }
    Ok(total)
}

/// Depth-first search for the lexicographically first valid peeling order.
/// Each convex_residual call costs one unit of `search_budget`.
pub fn find_peeling_order<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Result<Vec<usize>, SearchError> {
    if !covers(body, planks, params)? {
        return Err(SearchError::NotCovered);
    }
    let mut remaining: Vec<usize> = (0..planks.len()).collect();
    let mut prefix = Vec::with_capacity(planks.len());
    let mut spent = 0u64;
    if descend(body, planks, params, &mut remaining, &mut prefix, &mut spent)? {
        Ok(prefix)
    } else {
        Err(SearchError::NoOrder)
    }
}

fn descend<S: Scalar>(
    current: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
    remaining: &mut Vec<usize>,
    prefix: &mut Vec<usize>,
    spent: &mut u64,
) -> Result<bool, SearchError> {
    if remaining.is_empty() {
        return Ok(current.is_empty());
    }
    // `remaining` stays ascending, so branches are explored in lexicographic
    // order and the first full success is the lexicographically first order.
    for pos in 0..remaining.len() {
        let idx = remaining[pos];
        *spent += 1;
        if *spent > params.search_budget {
            return Err(SearchError::BudgetExceeded(params.search_budget));
        }
        match convex_residual(current, &planks[idx], params).map_err(SearchError::from)? {
            Residual::NotConvex => continue,
            Residual::Empty => {
                // Anything peels off an empty residual, so the ascending
                // completion is the lexicographically smallest one.
                prefix.push(idx);
                prefix.extend(remaining.iter().copied().filter(|&j| j != idx));
                return Ok(true);
            }
            Residual::Body(next) => {
                prefix.push(idx);
                remaining.remove(pos);
                if descend(&next, planks, params, remaining, prefix, spent)? {
                    return Ok(true);
                }
                remaining.insert(pos, idx);
                prefix.pop();
            }
        }
    }
    Ok(false)
}

/// Peels the planks in the given order and assembles the full certificate.
pub fn certify<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    order: &[usize],
    params: &Params<S>,
) -> Result<Certificate<S>, CertifyError> {
    if !is_permutation(order, planks.len()) {
        return Err(CertifyError::NotPermutation);
    }
    if !covers(body, planks, params)? {
        return Err(CertifyError::NotCovered);
    }
    let bang = bang_sum(body, planks)?;
    if bang.is_infinite() {
        // Some plank direction is flat on the body, so a single ratio is
        // already infinite and no peeling is needed.
        return Ok(Certificate {
            order: order.to_vec(),
            steps: Vec::new(),
            bang_sum: BangRatio::Infinite,
            chain_bound: BangRatio::Infinite,
            verified: true,
        });
    }
    let samples = sample_directions::<S>(body.dim(), params.sample_dirs, params.seed);
    let mut steps: Vec<PeelStep<S>> = Vec::new();
    let mut current = body.clone();
    for (pos, &idx) in order.iter().enumerate() {
        let plank = &planks[idx];
        let remaining = &order[pos..];
        let widths_before = width_table(&current, remaining, planks, &samples)?;
        let (body_after, rho, dilation) = match convex_residual(&current, plank, params)? {
            Residual::NotConvex => return Err(CertifyError::InvalidOrder { step: pos }),
            Residual::Empty => (ConvexBody::empty(body.dim()), S::zero(), None),
            Residual::Body(next) => {
                let wb = current.width(plank.direction())?;
                assert!(
                    wb > params.tol,
                    "nonempty residual with vanishing width in the peeled direction"
                );
                let wa = next.width(plank.direction())?;
                let rho = wa.clone() / wb.clone();
                let witness = if (wb - wa).abs() <= params.tol {
                    None // the plank only grazes the body: no shrinkage
                } else {
                    Some(dilation_witness(&current, &next, plank, params)?)
                };
                (next, rho, witness)
            }
        };
        let widths_after = width_table(&body_after, remaining, planks, &samples)?;
        let emptied = body_after.is_empty();
        steps.push(PeelStep {
            plank_index: idx,
            body_before: current.clone(),
            body_after: body_after.clone(),
            rho,
            widths_before,
            widths_after,
            dilation,
        });
        if emptied {
            break;
        }
        current = body_after;
    }
    let done = steps.last().map(|s| s.body_after.is_empty()).unwrap_or(false);
    if !done {
        return Err(CertifyError::IncompleteChain);
    }
    let chain = chain_from_steps(&steps, planks, &params.tol)
        .expect("freshly built steps carry complete width tables");
    let mut cert = Certificate {
        order: order.to_vec(),
        steps,
        bang_sum: bang,
        chain_bound: BangRatio::Finite(chain),
        verified: false,
    };
    cert.verified = stored_diagnostics(&cert, planks, params).is_empty();
    Ok(cert)
}

/// Builds the Case 2 witness for one peel: supporting halfspaces of the
/// residual along the plank normal, the dilation center `p`, and the
/// containment margin of the dilated body inside the residual.
pub fn dilation_witness<S: Scalar>(
    body_before: &ConvexBody<S>,
    body_after: &ConvexBody<S>,
    plank: &Plank<S>,
    params: &Params<S>,
) -> Result<DilationWitness<S>, CertifyError> {
    let v = plank.direction().unit();
    let hi_a = body_after.support(v)?;
    let lo_a = -body_after.support(&v.neg())?;
    let hi_b = body_before.support(v)?;
    let lo_b = -body_before.support(&v.neg())?;
    let wa = hi_a.clone() - lo_a.clone();
    let wb = hi_b.clone() - lo_b.clone();
    if wa <= params.tol || wb - wa.clone() <= params.tol {
        return Err(CertifyError::CaseMismatch);
    }
    let slack = loose(params);
    let inside = |value: &S| {
        *value >= plank.lo().clone() - slack.clone()
            && *value <= plank.hi().clone() + slack.clone()
    };
    let (h1, h2, face) = if inside(&lo_a) && !inside(&hi_a) {
        // Residual sits above the plank; its upper support is inherited from
        // the body being peeled.
        if (hi_a.clone() - hi_b).abs() > slack {
            return Err(CertifyError::CaseMismatch);
        }
        let eps = face_eps(&hi_a, params);
        (
            HalfSpace::new(v.clone(), hi_a.clone()),
            HalfSpace::new(v.neg(), -lo_a),
            HalfSpace::new(v.neg(), eps - hi_a),
        )
    } else if inside(&hi_a) && !inside(&lo_a) {
        if (lo_a.clone() - lo_b).abs() > slack {
            return Err(CertifyError::CaseMismatch);
        }
        let eps = face_eps(&lo_a, params);
        (
            HalfSpace::new(v.neg(), -lo_a.clone()),
            HalfSpace::new(v.clone(), hi_a),
            HalfSpace::new(v.clone(), lo_a + eps),
        )
    } else {
        return Err(CertifyError::CaseMismatch);
    };
    let p = lex_min_point(&body_before.intersect_halfspace(face), params)?;
    let rho = {
        let wa2 = body_after.width(plank.direction())?;
        let wb2 = body_before.width(plank.direction())?;
        wa2 / wb2
    };
    let dilated = body_before.dilate_about(&p, &rho);
    let margin = containment_margin(body_after, &dilated)?;
    if margin < -params.tol.clone() {
        return Err(CertifyError::WitnessFailure {
            margin: margin.to_f64(),
        });
    }
    Ok(DilationWitness {
        h1,
        h2,
        p,
        rho,
        containment_margin: margin,
    })
}

/// Re-derives every stored quantity from the certificate's bodies and the
/// scene; `ok` only when no diagnostic fires.
pub fn verify_certificate<S: Scalar>(
    cert: &Certificate<S>,
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Verification {
    let mut diagnostics = stored_diagnostics(cert, planks, params);
    diagnostics.extend(recompute_diagnostics(cert, body, planks, params));
    Verification {
        ok: diagnostics.is_empty(),
        diagnostics,
    }
}

/// Worst normalized slack of `inner`'s supports against `outer`'s
/// halfspaces; nonnegative exactly when inner fits inside outer.
pub fn containment_margin<S: Scalar>(
    outer: &ConvexBody<S>,
    inner: &ConvexBody<S>,
) -> Result<S, GeometryError> {
    let mut worst: Option<S> = None;
    for h in outer.halfspaces() {
        let sup = inner.support(&h.normal)?;
        let gap = (h.offset.clone() - sup) / h.normal.norm2().sqrt();
        worst = Some(match worst {
            None => gap,
            Some(w) => smin(w, gap),
        });
    }
    Ok(worst.expect("bodies always carry at least one halfspace"))
}

fn is_permutation(order: &[usize], k: usize) -> bool {
    if order.len() != k {
        return false;
    }
    let mut seen = vec![false; k];
    for &i in order {
        if i >= k || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn loose<S: Scalar>(params: &Params<S>) -> S {
    params.tol.clone() * S::from_int(10)
}

/// Tiny relaxation for pinning optimal faces; zero in exact arithmetic.
fn face_eps<S: Scalar>(scale: &S, params: &Params<S>) -> S {
    params.tol.clone() * S::from_ratio(1, 1000) * (S::one() + scale.abs())
}

/// Width of the body along each remaining plank normal and each sampled
/// direction. The empty body reports width zero.
fn width_table<S: Scalar>(
    body: &ConvexBody<S>,
    remaining: &[usize],
    planks: &[Plank<S>],
    samples: &[Direction<S>],
) -> Result<Vec<WidthEntry<S>>, GeometryError> {
    let empty = body.is_empty();
    let keyed = remaining
        .iter()
        .map(|&i| (WidthKey::Plank(i), planks[i].direction().clone()))
        .chain(
            samples
                .iter()
                .enumerate()
                .map(|(j, d)| (WidthKey::Sample(j), d.clone())),
        );
    let mut entries = Vec::with_capacity(remaining.len() + samples.len());
    for (key, direction) in keyed {
        let width = if empty {
            S::zero()
        } else {
            body.width(&direction)?
        };
        entries.push(WidthEntry {
            key,
            direction,
            width,
        });
    }
    Ok(entries)
}

fn table_width<'a, S: Scalar>(table: &'a [WidthEntry<S>], key: WidthKey) -> Option<&'a S> {
    table.iter().find(|e| e.key == key).map(|e| &e.width)
}

/// Folds the chain bound backwards: the emptying step contributes its plank
/// ratio alone (rho is zero there), every earlier step adds its ratio plus
/// rho times the bound already accumulated.
fn chain_from_steps<S: Scalar>(
    steps: &[PeelStep<S>],
    planks: &[Plank<S>],
    tol: &S,
) -> Option<S> {
    let mut bound = S::zero();
    for step in steps.iter().rev() {
        let wb = table_width(&step.widths_before, WidthKey::Plank(step.plank_index))?;
        if *wb <= *tol {
            return None;
        }
        bound = planks.get(step.plank_index)?.width() / wb.clone() + step.rho.clone() * bound;
    }
    Some(bound)
}

fn bodies_match<S: Scalar>(a: &ConvexBody<S>, b: &ConvexBody<S>, tol: &S) -> bool {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => true,
        (false, false) => {
            a.contains_body(b, tol).unwrap_or(false) && b.contains_body(a, tol).unwrap_or(false)
        }
        _ => false,
    }
}

/// Lexicographically smallest point: pin each coordinate at its minimum in
/// turn, then take the argmin of the last one.
fn lex_min_point<S: Scalar>(
    body: &ConvexBody<S>,
    params: &Params<S>,
) -> Result<Vector<S>, GeometryError> {
    let dim = body.dim();
    let mut cur = body.clone();
    for j in 0..dim - 1 {
        let axis = Vector::axis(dim, j);
        let m = -cur.support(&axis.neg())?;
        let eps = face_eps(&m, params);
        cur = cur.intersect_halfspace(HalfSpace::new(axis, m + eps));
    }
    cur.support_point(&Vector::axis(dim, dim - 1).neg())
}

/// Checks that need no fresh geometry: table alignment, the (*) pair, rho
/// bookkeeping, witness shape, and the chain arithmetic. `certify` uses the
/// same routine to decide `verified`.
fn stored_diagnostics<S: Scalar>(
    cert: &Certificate<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Vec<String> {
    let mut d = Vec::new();
    let k = planks.len();
    let tol = params.tol.clone();
    if !is_permutation(&cert.order, k) {
        d.push("order is not a permutation of the plank indices".to_string());
    }
    match (&cert.chain_bound, cert.steps.is_empty()) {
        (BangRatio::Infinite, true) => {
            if !cert.bang_sum.is_infinite() {
                d.push("chain bound is infinite but the stored bang sum is finite".to_string());
            }
            return d;
        }
        (BangRatio::Infinite, false) => {
            d.push("chain bound is infinite yet peel steps are present".to_string());
            return d;
        }
        (BangRatio::Finite(_), true) => {
            d.push("no peel steps despite a finite chain bound".to_string());
            return d;
        }
        (BangRatio::Finite(_), false) => {}
    }
    if cert.steps.len() > cert.order.len()
        || cert
            .steps
            .iter()
            .zip(&cert.order)
            .any(|(s, &i)| s.plank_index != i)
    {
        d.push("steps do not follow the stored order".to_string());
    }
    for (m, step) in cert.steps.iter().enumerate() {
        let idx = step.plank_index;
        let Some(plank) = planks.get(idx) else {
            d.push(format!("step {m}: plank index {idx} out of range"));
            continue;
        };
        if step.widths_before.len() != step.widths_after.len()
            || step
                .widths_before
                .iter()
                .zip(&step.widths_after)
                .any(|(b, a)| b.key != a.key || b.direction != a.direction)
        {
            d.push(format!("step {m}: width tables are misaligned"));
            continue;
        }
        for e in &step.widths_before {
            if let WidthKey::Plank(i) = e.key {
                if planks
                    .get(i)
                    .map(|p| p.direction() != &e.direction)
                    .unwrap_or(true)
                {
                    d.push(format!(
                        "step {m}: direction stored for plank {i} differs from the scene"
                    ));
                }
            }
        }
        let empty_after = step.body_after.is_empty();
        let last = m + 1 == cert.steps.len();
        if last && !empty_after {
            d.push("the final residual is not empty".to_string());
        }
        if !last && empty_after {
            d.push(format!("step {m}: residual empties before the final step"));
        }
        if step.rho < -tol.clone() || step.rho > S::one() + tol.clone() {
            d.push(format!("step {m}: rho {} outside [0, 1]", step.rho));
        }
        let (Some(wb_v), Some(wa_v)) = (
            table_width(&step.widths_before, WidthKey::Plank(idx)),
            table_width(&step.widths_after, WidthKey::Plank(idx)),
        ) else {
            d.push(format!("step {m}: missing width entry for the peeled plank"));
            continue;
        };
        if *wb_v <= tol {
            d.push(format!(
                "step {m}: vanishing body width in the peeled direction"
            ));
            continue;
        }
        let floor = S::one() - plank.width() / wb_v.clone() - tol.clone();
        if step.rho < floor {
            d.push(format!(
                "step {m}: (*) lower bound violated: rho {} < 1 - w/width",
                step.rho
            ));
        }
        if empty_after {
            if step.rho.abs() > tol {
                d.push(format!(
                    "step {m}: rho must be zero once the residual empties"
                ));
            }
        } else if (step.rho.clone() - wa_v.clone() / wb_v.clone()).abs() > tol {
            d.push(format!(
                "step {m}: rho disagrees with the stored width tables"
            ));
        }
        for (b, a) in step.widths_before.iter().zip(&step.widths_after) {
            if a.width < step.rho.clone() * b.width.clone() - tol.clone() {
                d.push(format!(
                    "step {m}: (*) width inequality violated at {}",
                    b.key
                ));
            }
        }
        let needs = !empty_after && wb_v.clone() - wa_v.clone() > tol;
        match (&step.dilation, needs) {
            (None, true) => d.push(format!("step {m}: missing dilation witness")),
            (Some(w), _) => {
                let u = plank.direction().unit();
                let parallel = (w.h1.normal == *u || w.h1.normal == u.neg())
                    && w.h2.normal == w.h1.normal.neg();
                if !parallel {
                    d.push(format!(
                        "step {m}: witness hyperplanes are not parallel to the plank"
                    ));
                }
                if (w.rho.clone() - step.rho.clone()).abs() > tol {
                    d.push(format!("step {m}: witness rho differs from the step rho"));
                }
                if w.containment_margin < -tol.clone() {
                    d.push(format!(
                        "step {m}: containment margin {} is negative",
                        w.containment_margin
                    ));
                }
            }
            (None, false) => {}
        }
    }
    match chain_from_steps(&cert.steps, planks, &tol) {
        None => d.push("chain bound could not be recomputed from the stored tables".to_string()),
        Some(chain) => {
            let stored = cert
                .chain_bound
                .finite()
                .expect("finite chain handled above");
            if (stored.clone() - chain.clone()).abs() > tol {
                d.push(format!(
                    "chain bound mismatch: stored {stored}, recomputed {chain}"
                ));
            }
            if *stored < S::one() - tol.clone() {
                d.push(format!("chain bound {stored} falls below one"));
            }
            if let BangRatio::Finite(b) = &cert.bang_sum {
                if *b < stored.clone() - tol.clone() {
                    d.push(format!(
                        "bang sum {b} falls below the chain bound {stored}"
                    ));
                }
            }
        }
    }
    d
}

/// LP-heavy checks: the body chain, residual recomputation, every width, and
/// the dilation witnesses, all re-derived from the stored bodies.
fn recompute_diagnostics<S: Scalar>(
    cert: &Certificate<S>,
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    params: &Params<S>,
) -> Vec<String> {
    let mut d = Vec::new();
    let tol = params.tol.clone();
    match bang_sum(body, planks) {
        Err(e) => d.push(format!("bang sum could not be recomputed: {e}")),
        Ok(fresh) => match (&fresh, &cert.bang_sum) {
            (BangRatio::Infinite, BangRatio::Infinite) => {}
            (BangRatio::Finite(f), BangRatio::Finite(s)) => {
                if (f.clone() - s.clone()).abs() > tol {
                    d.push(format!("bang sum mismatch: stored {s}, recomputed {f}"));
                }
            }
            _ => d.push("bang sum mismatch: stored and recomputed kinds differ".to_string()),
        },
    }
    if cert.steps.is_empty() {
        return d;
    }
    if let Some(first) = cert.steps.first() {
        if !bodies_match(&first.body_before, body, &tol) {
            d.push("step 0: body_before differs from the scene body".to_string());
        }
    }
    for m in 1..cert.steps.len() {
        if !bodies_match(
            &cert.steps[m].body_before,
            &cert.steps[m - 1].body_after,
            &tol,
        ) {
            d.push(format!(
                "step {m}: body_before does not continue the previous residual"
            ));
        }
    }
    for (m, step) in cert.steps.iter().enumerate() {
        let Some(plank) = planks.get(step.plank_index) else {
            continue; // flagged by the stored checks
        };
        match convex_residual(&step.body_before, plank, params) {
            Err(e) => d.push(format!("step {m}: residual recompute failed: {e}")),
            Ok(Residual::NotConvex) => d.push(format!(
                "step {m}: peeling here leaves a non-convex residual"
            )),
            Ok(Residual::Empty) => {
                if !step.body_after.is_empty() {
                    d.push(format!("step {m}: stored residual should be empty"));
                }
            }
            Ok(Residual::Body(x)) => {
                if step.body_after.is_empty() || !bodies_match(&x, &step.body_after, &tol) {
                    d.push(format!(
                        "step {m}: stored residual does not match the recomputed one"
                    ));
                }
            }
        }
        let tables = step
            .widths_before
            .iter()
            .map(|e| (e, "widths_before", &step.body_before))
            .chain(
                step.widths_after
                    .iter()
                    .map(|e| (e, "widths_after", &step.body_after)),
            );
        for (entry, table, target) in tables {
            let fresh = if target.is_empty() {
                S::zero()
            } else {
                match target.width(&entry.direction) {
                    Ok(w) => w,
                    Err(e) => {
                        d.push(format!("step {m}: width recompute failed: {e}"));
                        continue;
                    }
                }
            };
            if (fresh.clone() - entry.width.clone()).abs() > tol {
                d.push(format!(
                    "step {m}: {table}[{}] mismatch: stored {}, recomputed {}",
                    entry.key, entry.width, fresh
                ));
            }
        }
        if let Some(w) = &step.dilation {
            d.extend(witness_diagnostics(m, step, w, plank, params));
        }
    }
    d
}

fn witness_diagnostics<S: Scalar>(
    m: usize,
    step: &PeelStep<S>,
    w: &DilationWitness<S>,
    plank: &Plank<S>,
    params: &Params<S>,
) -> Vec<String> {
    let mut d = Vec::new();
    let tol = params.tol.clone();
    let slack = loose(params);
    if step.body_after.is_empty() {
        d.push(format!(
            "step {m}: dilation witness attached to an empty residual"
        ));
        return d;
    }
    let v = plank.direction().unit();
    let (hi_a, lo_a) = match (step.body_after.support(v), step.body_after.support(&v.neg())) {
        (Ok(hi), Ok(neg_lo)) => (hi, -neg_lo),
        _ => {
            d.push(format!("step {m}: residual supports could not be computed"));
            return d;
        }
    };
    // Orientation comes from h1; a non-parallel h1 was already flagged.
    let above = if w.h1.normal == *v {
        true
    } else if w.h1.normal == v.neg() {
        false
    } else {
        return d;
    };
    let (outer, inner) = if above {
        (hi_a.clone(), lo_a.clone())
    } else {
        (lo_a.clone(), hi_a.clone())
    };
    let h1_expect = if above { outer.clone() } else { -outer.clone() };
    let h2_expect = if above { -inner.clone() } else { inner.clone() };
    if (w.h1.offset.clone() - h1_expect).abs() > slack
        || (w.h2.offset.clone() - h2_expect).abs() > slack
    {
        d.push(format!(
            "step {m}: witness offsets do not support the residual"
        ));
    }
    if inner < plank.lo().clone() - slack.clone() || inner > plank.hi().clone() + slack.clone() {
        d.push(format!(
            "step {m}: inner supporting hyperplane is not inside the plank"
        ));
    }
    let clears = if above {
        outer >= plank.hi().clone() - slack.clone()
    } else {
        outer <= plank.lo().clone() + slack.clone()
    };
    if !clears {
        d.push(format!(
            "step {m}: outer supporting hyperplane does not clear the plank"
        ));
    }
    if (w.h1.normal.dot(&w.p) - w.h1.offset.clone()).abs()
        > slack.clone() * (S::one() + w.h1.offset.abs())
    {
        d.push(format!(
            "step {m}: witness point p is not on the outer hyperplane"
        ));
    }
    if !step.body_before.contains_point(&w.p, &slack) {
        d.push(format!(
            "step {m}: witness point p lies outside the body being peeled"
        ));
    }
    let dilated = step.body_before.dilate_about(&w.p, &w.rho);
    match containment_margin(&step.body_after, &dilated) {
        Err(e) => d.push(format!(
            "step {m}: containment margin recompute failed: {e}"
        )),
        Ok(fresh) => {
            if (fresh.clone() - w.containment_margin.clone()).abs()
                > slack.clone() * (S::one() + fresh.abs())
            {
                d.push(format!(
                    "step {m}: containment margin mismatch: stored {}, recomputed {fresh}",
                    w.containment_margin
                ));
            }
            if fresh < -tol.clone() {
                d.push(format!(
                    "step {m}: the dilated body escapes the residual by {fresh}"
                ));
            }
        }
    }
    for entry in &step.widths_before {
        let scaled = w.rho.clone() * entry.width.clone();
        match dilated.width(&entry.direction) {
            Err(e) => {
                d.push(format!(
                    "step {m}: width recompute on the dilated body failed: {e}"
                ));
                break;
            }
            Ok(dw) => {
                if (dw - scaled).abs() > tol {
                    d.push(format!(
                        "step {m}: dilation width scaling violated at {}",
                        entry.key
                    ));
                }
            }
        }
    }
    d
}
