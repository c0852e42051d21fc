//! Diagram-rewriting oracle: normalizes the product of two basis elements by
//! exhaustive rewriting on an explicit event-list/wire-tree representation.
//!
//! A diagram is a sequence of action and coaction events along the module
//! line plus a sign. Wires are expression trees: a coaction creates a fresh
//! wire, a Mu node merges two wires (a bracket), a Delta node splits one
//! (a cobracket; its two outputs appear as `DeltaUpper(x)` / `DeltaLower(x)`
//! over the same subtree `x`). Normalization proceeds in three phases:
//!
//! 1. move every action past every later coaction (three-way branching:
//!    plain swap, merge into a Mu, or split off a Delta with a sign flip);
//! 2. eliminate Mu nodes consumed by actions (two-way branching);
//! 3. eliminate Delta nodes fed directly by a coaction, innermost first
//!    (two-way branching: crossed assignment keeps the sign, direct flips it).
//!
//! A Mu output never feeds a Delta node for inputs built from basis
//! elements; that configuration would need the (unimplemented) cocycle
//! rewrite and raises an error if ever encountered.

use crate::mosaic::{Mosaic, MosaicTile};
use crate::perm::Perm;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised during normalization.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RewriteError {
    /// A Mu output fed a Delta node; normalizing would need the cocycle rule.
    #[error("cocycle rewrite required: a merge output feeds a split node")]
    CocycleRequired,
    /// The rewrite budget was exhausted.
    #[error("rewrite budget of {0} steps exhausted")]
    NonTermination(u64),
    /// The final diagram was not a permutation diagram.
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

/// A wire expression tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WireExpr {
    /// An external input strand (1-based index).
    ExtIn(usize),
    /// The wire created by the coaction event with the given tag.
    Fresh(u32),
    /// Merge of two wires; the first field is the first input.
    Mu(Box<WireExpr>, Box<WireExpr>),
    /// Upper output of the split of `x`.
    DeltaUpper(Box<WireExpr>),
    /// Lower output of the split of `x`.
    DeltaLower(Box<WireExpr>),
}

impl WireExpr {
    fn substitute(&mut self, tag: u32, replacement: &WireExpr) {
        match self {
            WireExpr::Fresh(t) if *t == tag => *self = replacement.clone(),
            WireExpr::Mu(a, b) => {
                a.substitute(tag, replacement);
                b.substitute(tag, replacement);
            }
            WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => x.substitute(tag, replacement),
            _ => {}
        }
    }

    /// Replaces every occurrence of the subexpression `from` with `to`.
    fn replace_subexpr(&mut self, from: &WireExpr, to: &WireExpr) {
        if self == from {
            *self = to.clone();
            return;
        }
        match self {
            WireExpr::Mu(a, b) => {
                a.replace_subexpr(from, to);
                b.replace_subexpr(from, to);
            }
            WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => x.replace_subexpr(from, to),
            _ => {}
        }
    }

    fn count_mu(&self) -> usize {
        match self {
            WireExpr::Mu(a, b) => 1 + a.count_mu() + b.count_mu(),
            WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => x.count_mu(),
            _ => 0,
        }
    }

    /// Finds some Delta node input, preferring any at all (used to detect
    /// remaining Delta nodes).
    fn find_delta_input(&self) -> Option<&WireExpr> {
        match self {
            WireExpr::Mu(a, b) => a.find_delta_input().or_else(|| b.find_delta_input()),
            WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => {
                // Prefer inner (deeper) split nodes.
                x.find_delta_input().or(Some(x))
            }
            _ => None,
        }
    }

    fn contains_mu(&self) -> bool {
        self.count_mu() > 0
    }
}

/// One event along the module line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    /// A coaction creating the wire with the given tag.
    Coact(u32),
    /// An action consuming the wire expression.
    Act(WireExpr),
}

/// A partially normalized signed diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleDiagram {
    pub events: Vec<Event>,
    /// Wires leaving the diagram (used by the first-phase expansion of the
    /// coaction/action interchange, where coaction wires are not yet consumed).
    pub external_out: Vec<WireExpr>,
    pub sign: i8,
}

impl MiddleDiagram {
    /// Number of Mu nodes in the whole diagram.
    pub fn mu_nodes(&self) -> usize {
        self.all_exprs().map(|e| e.count_mu()).sum()
    }

    /// Number of Delta nodes in the whole diagram (distinct split inputs,
    /// counted via upper outputs; every split's upper output occurs once).
    pub fn delta_nodes(&self) -> usize {
        fn uppers(e: &WireExpr) -> usize {
            match e {
                WireExpr::Mu(a, b) => uppers(a) + uppers(b),
                WireExpr::DeltaUpper(x) => 1 + uppers(x),
                WireExpr::DeltaLower(x) => uppers(x),
                _ => 0,
            }
        }
        self.all_exprs().map(uppers).sum()
    }

    fn all_exprs(&self) -> impl Iterator<Item = &WireExpr> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Act(x) => Some(x),
                Event::Coact(_) => None,
            })
            .chain(self.external_out.iter())
    }

    fn substitute(&mut self, tag: u32, replacement: &WireExpr) {
        for e in &mut self.events {
            if let Event::Act(x) = e {
                x.substitute(tag, replacement);
            }
        }
        for x in &mut self.external_out {
            x.substitute(tag, replacement);
        }
    }

    fn replace_subexpr(&mut self, from: &WireExpr, to: &WireExpr) {
        for e in &mut self.events {
            if let Event::Act(x) = e {
                x.replace_subexpr(from, to);
            }
        }
        for x in &mut self.external_out {
            x.replace_subexpr(from, to);
        }
    }

    /// Canonical form for isomorphism comparison: coaction tags are
    /// renumbered by event position.
    pub fn canonical(&self) -> (Vec<Event>, Vec<WireExpr>, i8) {
        let mut tag_map: BTreeMap<u32, u32> = BTreeMap::new();
        for e in &self.events {
            if let Event::Coact(t) = e {
                let next = tag_map.len() as u32;
                tag_map.insert(*t, next);
            }
        }
        fn remap(e: &WireExpr, m: &BTreeMap<u32, u32>) -> WireExpr {
            match e {
                WireExpr::ExtIn(i) => WireExpr::ExtIn(*i),
                WireExpr::Fresh(t) => WireExpr::Fresh(m[t]),
                WireExpr::Mu(a, b) => {
                    WireExpr::Mu(Box::new(remap(a, m)), Box::new(remap(b, m)))
                }
                WireExpr::DeltaUpper(x) => WireExpr::DeltaUpper(Box::new(remap(x, m))),
                WireExpr::DeltaLower(x) => WireExpr::DeltaLower(Box::new(remap(x, m))),
            }
        }
        let events = self
            .events
            .iter()
            .map(|e| match e {
                Event::Coact(t) => Event::Coact(tag_map[t]),
                Event::Act(x) => Event::Act(remap(x, &tag_map)),
            })
            .collect();
        let outs = self
            .external_out
            .iter()
            .map(|x| remap(x, &tag_map))
            .collect();
        (events, outs, self.sign)
    }
}

/// Shared mutable state of one normalization run.
struct Run {
    next_tag: u32,
    steps: u64,
    budget: u64,
}

impl Run {
    fn new(budget: u64) -> Self {
        Run {
            next_tag: 0,
            steps: 0,
            budget,
        }
    }

    fn fresh(&mut self) -> u32 {
        let t = self.next_tag;
        self.next_tag += 1;
        t
    }

    fn tick(&mut self) -> Result<(), RewriteError> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(RewriteError::NonTermination(self.budget))
        } else {
            Ok(())
        }
    }
}

/// Finds the leftmost adjacent (action, coaction) pair.
fn leftmost_inversion(events: &[Event]) -> Option<usize> {
    events.windows(2).position(|w| {
        matches!(w[0], Event::Act(_)) && matches!(w[1], Event::Coact(_))
    })
}

/// Phase 1: exhaustively interchange actions and coactions.
fn dy_phase(
    start: MiddleDiagram,
    run: &mut Run,
    out: &mut Vec<MiddleDiagram>,
) -> Result<(), RewriteError> {
    let mut stack = vec![start];
    while let Some(d) = stack.pop() {
        run.tick()?;
        let Some(p) = leftmost_inversion(&d.events) else {
            out.push(d);
            continue;
        };
        let (x, tag) = match (&d.events[p], &d.events[p + 1]) {
            (Event::Act(x), Event::Coact(t)) => (x.clone(), *t),
            _ => unreachable!(),
        };
        // Swap: the two events commute.
        {
            let mut s = d.clone();
            s.events.swap(p, p + 1);
            stack.push(s);
        }
        // Merge: both events become a single coaction whose wire is merged
        // with x before reaching the old consumer.
        {
            let mut s = d.clone();
            let t_new = run.fresh();
            s.events.splice(p..p + 2, [Event::Coact(t_new)]);
            s.substitute(
                tag,
                &WireExpr::Mu(Box::new(x.clone()), Box::new(WireExpr::Fresh(t_new))),
            );
            stack.push(s);
        }
        // Split: the coaction disappears; x is split, the action consumes
        // the lower output and the old consumer gets the upper. Sign flips.
        {
            let mut s = d.clone();
            s.events.remove(p + 1);
            s.events[p] = Event::Act(WireExpr::DeltaLower(Box::new(x.clone())));
            s.substitute(tag, &WireExpr::DeltaUpper(Box::new(x.clone())));
            s.sign = -s.sign;
            stack.push(s);
        }
    }
    Ok(())
}

/// Phase 2: eliminate Mu nodes at the top of action expressions.
fn mu_phase(
    start: MiddleDiagram,
    run: &mut Run,
    out: &mut Vec<MiddleDiagram>,
) -> Result<(), RewriteError> {
    let mut stack = vec![start];
    while let Some(d) = stack.pop() {
        run.tick()?;
        let pos = d.events.iter().position(
            |e| matches!(e, Event::Act(WireExpr::Mu(_, _))),
        );
        let Some(p) = pos else {
            // No action consumes a merge; any remaining Mu must sit under a
            // Delta, which the cocycle guard rejects in phase 3.
            out.push(d);
            continue;
        };
        let (a, b) = match &d.events[p] {
            Event::Act(WireExpr::Mu(a, b)) => ((**a).clone(), (**b).clone()),
            _ => unreachable!(),
        };
        // Acting with a merge = act with the second input, then the first
        // (kept sign), minus the other order.
        {
            let mut s = d.clone();
            s.events
                .splice(p..p + 1, [Event::Act(b.clone()), Event::Act(a.clone())]);
            stack.push(s);
        }
        {
            let mut s = d.clone();
            s.events
                .splice(p..p + 1, [Event::Act(a.clone()), Event::Act(b.clone())]);
            s.sign = -s.sign;
            stack.push(s);
        }
    }
    Ok(())
}

/// Phase 3: eliminate Delta nodes fed directly by a coaction, innermost first.
fn delta_phase(
    start: MiddleDiagram,
    run: &mut Run,
    out: &mut Vec<MiddleDiagram>,
) -> Result<(), RewriteError> {
    let mut stack = vec![start];
    while let Some(d) = stack.pop() {
        run.tick()?;
        // Deepest split input anywhere in the diagram.
        let input = d
            .all_exprs()
            .filter_map(|e| e.find_delta_input())
            .next()
            .cloned();
        let Some(input) = input else {
            out.push(d);
            continue;
        };
        if input.contains_mu() {
            return Err(RewriteError::CocycleRequired);
        }
        let WireExpr::Fresh(tag) = input else {
            return Err(RewriteError::Malformed(format!(
                "innermost split input is not a coaction wire: {input:?}"
            )));
        };
        let Some(pos) = d
            .events
            .iter()
            .position(|e| matches!(e, Event::Coact(t) if *t == tag))
        else {
            return Err(RewriteError::Malformed(format!(
                "no coaction event for tag {tag}"
            )));
        };
        let upper = WireExpr::DeltaUpper(Box::new(WireExpr::Fresh(tag)));
        let lower = WireExpr::DeltaLower(Box::new(WireExpr::Fresh(tag)));
        let t1 = run.fresh();
        let t2 = run.fresh();
        // Crossed assignment keeps the sign.
        {
            let mut s = d.clone();
            s.events
                .splice(pos..pos + 1, [Event::Coact(t1), Event::Coact(t2)]);
            s.replace_subexpr(&upper, &WireExpr::Fresh(t2));
            s.replace_subexpr(&lower, &WireExpr::Fresh(t1));
            stack.push(s);
        }
        // Direct assignment flips it.
        {
            let mut s = d.clone();
            s.events
                .splice(pos..pos + 1, [Event::Coact(t1), Event::Coact(t2)]);
            s.replace_subexpr(&upper, &WireExpr::Fresh(t1));
            s.replace_subexpr(&lower, &WireExpr::Fresh(t2));
            s.sign = -s.sign;
            stack.push(s);
        }
    }
    Ok(())
}

/// Reads off the permutation of a fully normalized diagram.
///
/// With N coactions, the basis diagram labeled π wires coaction i into
/// action N+1-π(i) (nested wiring for the identity); extraction inverts that.
fn extract(d: &MiddleDiagram) -> Result<Perm, RewriteError> {
    let n_coacts = d
        .events
        .iter()
        .filter(|e| matches!(e, Event::Coact(_)))
        .count();
    let mut act_of_tag: BTreeMap<u32, usize> = BTreeMap::new();
    let mut act_idx = 0usize;
    let mut coact_seen = 0usize;
    for e in &d.events {
        match e {
            Event::Coact(_) => {
                if act_idx > 0 {
                    return Err(RewriteError::Malformed(
                        "coaction after action in normal form".into(),
                    ));
                }
                coact_seen += 1;
            }
            Event::Act(x) => {
                act_idx += 1;
                match x {
                    WireExpr::Fresh(t) => {
                        act_of_tag.insert(*t, act_idx);
                    }
                    other => {
                        return Err(RewriteError::Malformed(format!(
                            "action consumes non-wire {other:?}"
                        )))
                    }
                }
            }
        }
    }
    if coact_seen != n_coacts || act_idx != n_coacts {
        return Err(RewriteError::Malformed(format!(
            "unbalanced normal form: {coact_seen} coactions, {act_idx} actions"
        )));
    }
    let mut images0 = vec![0usize; n_coacts];
    let mut i = 0usize;
    for e in &d.events {
        if let Event::Coact(t) = e {
            let w = *act_of_tag
                .get(t)
                .ok_or_else(|| RewriteError::Malformed(format!("wire {t} unconsumed")))?;
            images0[i] = n_coacts - w; // 0-based image of i
            i += 1;
        }
    }
    Perm::from_zero_based(images0)
        .map_err(|e| RewriteError::Malformed(format!("extracted map not bijective: {e}")))
}

/// Default rewrite budget (total processed stack items per run).
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Builds the composite diagram of the product of two basis labels.
fn composite(sigma: &Perm, tau: &Perm, run: &mut Run) -> MiddleDiagram {
    let n = sigma.degree();
    let m = tau.degree();
    let ctags: Vec<u32> = (0..n).map(|_| run.fresh()).collect();
    let dtags: Vec<u32> = (0..m).map(|_| run.fresh()).collect();
    let mut events = Vec::with_capacity(2 * (n + m));
    for &t in &ctags {
        events.push(Event::Coact(t));
    }
    let sigma_inv = sigma.inverse();
    for p in 1..=n {
        // Action p consumes the wire of coaction sigma^{-1}(n+1-p).
        let i = sigma_inv.image0(n - p); // 0-based
        events.push(Event::Act(WireExpr::Fresh(ctags[i])));
    }
    for &t in &dtags {
        events.push(Event::Coact(t));
    }
    let tau_inv = tau.inverse();
    for q in 1..=m {
        let j = tau_inv.image0(m - q);
        events.push(Event::Act(WireExpr::Fresh(dtags[j])));
    }
    MiddleDiagram {
        events,
        external_out: Vec::new(),
        sign: 1,
    }
}

/// Normalizes the product of two basis labels, returning the coefficient of
/// each degree-(n+m) basis permutation.
pub fn normalize_product(sigma: &Perm, tau: &Perm) -> Result<BTreeMap<Perm, BigInt>, RewriteError> {
    normalize_product_with_budget(sigma, tau, DEFAULT_BUDGET)
}

fn shift_tags_expr(e: &mut WireExpr, off: u32) {
    match e {
        WireExpr::Fresh(t) => *t += off,
        WireExpr::Mu(a, b) => {
            shift_tags_expr(a, off);
            shift_tags_expr(b, off);
        }
        WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => shift_tags_expr(x, off),
        WireExpr::ExtIn(_) => {}
    }
}

fn replace_extin(e: &mut WireExpr, map: &[WireExpr]) {
    match e {
        WireExpr::ExtIn(p) => *e = map[*p - 1].clone(),
        WireExpr::Mu(a, b) => {
            replace_extin(a, map);
            replace_extin(b, map);
        }
        WireExpr::DeltaUpper(x) | WireExpr::DeltaLower(x) => replace_extin(x, map),
        WireExpr::Fresh(_) => {}
    }
}

/// The contribution of a single mosaic to the product of two basis labels:
/// the mosaic's first-phase diagram is spliced into the full composite
/// (label coactions first, label actions last) and the remaining merge and
/// split nodes are eliminated.
pub fn normalize_mosaic_product(
    mosaic: &Mosaic,
    sigma: &Perm,
    tau: &Perm,
) -> Result<BTreeMap<Perm, BigInt>, RewriteError> {
    let (n, m) = (mosaic.n(), mosaic.m());
    assert_eq!(sigma.degree(), n);
    assert_eq!(tau.degree(), m);
    let mut mid = middle_from_mosaic(mosaic);
    // Reserve tags 0..n for the first label's coactions.
    for e in &mut mid.events {
        if let Event::Act(x) = e {
            shift_tags_expr(x, n as u32);
        }
    }
    let mut max_tag = n as u32;
    for e in &mid.events {
        if let Event::Coact(t) = e {
            let t2 = *t + n as u32;
            max_tag = max_tag.max(t2 + 1);
        }
    }
    for x in &mut mid.external_out {
        shift_tags_expr(x, n as u32);
    }
    // External strand p is the wire of the first label's coaction
    // sigma^{-1}(n+1-p), matching the composite's nested wiring.
    let sigma_inv = sigma.inverse();
    let extin_map: Vec<WireExpr> = (1..=n)
        .map(|p| WireExpr::Fresh(sigma_inv.image0(n - p) as u32))
        .collect();
    let mut events: Vec<Event> = (0..n).map(|i| Event::Coact(i as u32)).collect();
    for e in &mut mid.events {
        match e {
            Event::Coact(t) => {
                *t += n as u32;
                events.push(Event::Coact(*t));
            }
            Event::Act(x) => {
                replace_extin(x, &extin_map);
                events.push(Event::Act(x.clone()));
            }
        }
    }
    // The second label's actions consume the outgoing column wires with the
    // same nested wiring.
    let tau_inv = tau.inverse();
    for q in 1..=m {
        let j = tau_inv.image0(m - q);
        let mut x = mid.external_out[j].clone();
        replace_extin(&mut x, &extin_map);
        events.push(Event::Act(x));
    }
    let start = MiddleDiagram {
        events,
        external_out: Vec::new(),
        sign: mid.sign,
    };
    let mut run = Run::new(DEFAULT_BUDGET);
    run.next_tag = max_tag;
    let mut after_dy = Vec::new();
    dy_phase(start, &mut run, &mut after_dy)?;
    let mut after_mu = Vec::new();
    for d in after_dy {
        mu_phase(d, &mut run, &mut after_mu)?;
    }
    let mut normal = Vec::new();
    for d in after_mu {
        delta_phase(d, &mut run, &mut normal)?;
    }
    let mut out: BTreeMap<Perm, BigInt> = BTreeMap::new();
    for d in &normal {
        let pi = extract(d)?;
        *out.entry(pi).or_insert_with(BigInt::zero) += BigInt::from(d.sign);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// [`normalize_product`] with an explicit rewrite budget.
pub fn normalize_product_with_budget(
    sigma: &Perm,
    tau: &Perm,
    budget: u64,
) -> Result<BTreeMap<Perm, BigInt>, RewriteError> {
    let mut run = Run::new(budget);
    let start = composite(sigma, tau, &mut run);
    let mut after_dy = Vec::new();
    dy_phase(start, &mut run, &mut after_dy)?;
    let mut after_mu = Vec::new();
    for d in after_dy {
        mu_phase(d, &mut run, &mut after_mu)?;
    }
    let mut normal = Vec::new();
    for d in after_mu {
        delta_phase(d, &mut run, &mut normal)?;
    }
    let mut out: BTreeMap<Perm, BigInt> = BTreeMap::new();
    for d in &normal {
        let pi = extract(d)?;
        let entry = out.entry(pi).or_insert_with(BigInt::zero);
        *entry += BigInt::from(d.sign);
        if entry.is_zero() {
            let pi2 = extract(d)?;
            out.remove(&pi2);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// All monomials after the first phase only, starting from n actions on
/// external strands followed by m coactions whose wires leave the diagram.
pub fn step1_terms(n: usize, m: usize) -> Result<Vec<MiddleDiagram>, RewriteError> {
    let mut run = Run::new(DEFAULT_BUDGET);
    let dtags: Vec<u32> = (0..m).map(|_| run.fresh()).collect();
    let mut events = Vec::with_capacity(n + m);
    for i in 1..=n {
        events.push(Event::Act(WireExpr::ExtIn(i)));
    }
    for &t in &dtags {
        events.push(Event::Coact(t));
    }
    let start = MiddleDiagram {
        events,
        external_out: dtags.iter().map(|&t| WireExpr::Fresh(t)).collect(),
        sign: 1,
    };
    let mut out = Vec::new();
    dy_phase(start, &mut run, &mut out)?;
    Ok(out)
}

/// Builds the first-phase diagram of a mosaic directly.
///
/// Row i of the mosaic is the strand of the action numbered n+1-i among the
/// initial actions (the event list reads bottom row first); column j is the
/// j-th outgoing wire. A Bracket merges the row strand into the column wire
/// (lower rows merge closer to the base), a Cobracket splits the row strand
/// and makes the upper output the column's wire base, a Cross lets strand
/// and wire pass. The sign is (-1)^(number of Cobracket tiles).
pub fn middle_from_mosaic(mosaic: &Mosaic) -> MiddleDiagram {
    let (n, m) = (mosaic.n(), mosaic.m());
    let mut next_tag = 0u32;
    // Current strand expression of each row, top to bottom.
    let mut strand: Vec<WireExpr> = (0..n)
        .map(|i| WireExpr::ExtIn(n - i)) // row i+1 <-> external strand n-i
        .collect();
    let mut has_bracket = vec![false; n];
    // Per column: base wire and bracketed strands (in row order).
    let mut coact_tags: Vec<Option<u32>> = vec![None; m];
    let mut base: Vec<Option<WireExpr>> = vec![None; m];
    let mut bracket_strands: Vec<Vec<WireExpr>> = vec![Vec::new(); m];
    for j in 0..m {
        let col_has_cobracket = (0..n).any(|i| mosaic.tiles()[i * m + j] == MosaicTile::Cobracket);
        if !col_has_cobracket {
            let t = next_tag;
            next_tag += 1;
            coact_tags[j] = Some(t);
            base[j] = Some(WireExpr::Fresh(t));
        }
    }
    for i in 0..n {
        for j in 0..m {
            match mosaic.tiles()[i * m + j] {
                MosaicTile::Bracket => {
                    bracket_strands[j].push(strand[i].clone());
                    has_bracket[i] = true;
                }
                MosaicTile::Cobracket => {
                    let x = strand[i].clone();
                    base[j] = Some(WireExpr::DeltaUpper(Box::new(x.clone())));
                    strand[i] = WireExpr::DeltaLower(Box::new(x));
                }
                _ => {}
            }
        }
    }
    let external_out: Vec<WireExpr> = (0..m)
        .map(|j| {
            let mut w = base[j].clone().expect("every column has a wire base");
            for s in bracket_strands[j].iter().rev() {
                w = WireExpr::Mu(Box::new(s.clone()), Box::new(w));
            }
            w
        })
        .collect();
    let mut events = Vec::new();
    for (j, t) in coact_tags.iter().enumerate() {
        let _ = j;
        if let Some(t) = t {
            events.push(Event::Coact(*t));
        }
    }
    // Actions appear bottom row first.
    for i in (0..n).rev() {
        if !has_bracket[i] {
            events.push(Event::Act(strand[i].clone()));
        }
    }
    let sign = if mosaic.alpha() % 2 == 0 { 1 } else { -1 };
    MiddleDiagram {
        events,
        external_out,
        sign,
    }
}
