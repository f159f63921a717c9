//! Backtracking solver for lifting problems of simplicial maps, the shared
//! constrained map-search engine, fibration and quasi-category predicates,
//! and horn-pushout gluing with replayable certificates.

use std::collections::HashSet;

use thiserror::Error;

use crate::marked::MarkedMap;
use crate::sset::{
    boundary, horn, pushout, SimplicialMap, SsetError, TruncatedSimplicialSet,
};

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("search budget {0} exhausted")]
    Budget(u64),
    #[error("ill-posed problem: {0}")]
    BadProblem(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("internal verification failed: {0}")]
    Internal(String),
}

/// Three-valued verdict for budget-limited decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Yes,
        }
    }
}

/// A constrained search for a simplicial map `source -> target`.
///
/// `fixed` pins individual simplex values; `over` demands that the result
/// commute with a pair of maps to a common base (`p . f = q`); `edge_masks`
/// demands that masked source edges land on masked target edges.
pub struct SearchSpec<'a> {
    pub source: &'a TruncatedSimplicialSet,
    pub target: &'a TruncatedSimplicialSet,
    pub fixed: Vec<Vec<Option<usize>>>,
    pub over: Option<(&'a SimplicialMap, &'a SimplicialMap)>,
    pub edge_masks: Option<(&'a [bool], &'a [bool])>,
}

impl<'a> SearchSpec<'a> {
    pub fn unconstrained(
        source: &'a TruncatedSimplicialSet,
        target: &'a TruncatedSimplicialSet,
    ) -> Self {
        SearchSpec {
            source,
            target,
            fixed: source.counts().iter().map(|&c| vec![None; c]).collect(),
            over: None,
            edge_masks: None,
        }
    }
}

struct Engine<'a, 's> {
    spec: &'s SearchSpec<'a>,
    // degeneracy witnesses per (n, idx): all j with s_j(d_j x) = x
    witnesses: Vec<Vec<Vec<usize>>>,
    positions: Vec<(usize, usize)>,
    assign: Vec<Vec<usize>>,
    budget: u64,
    used: u64,
    budget_hit: bool,
    first_only: bool,
    solutions: Vec<Vec<Vec<usize>>>,
    // frontiers known to admit no completion
    dead: HashSet<Vec<usize>>,
}

impl<'a, 's> Engine<'a, 's> {
    fn new(spec: &'s SearchSpec<'a>, budget: u64, first_only: bool) -> Self {
        let src = spec.source;
        let dim = src.dim_bound();
        let mut witnesses: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim + 1);
        witnesses.push(vec![Vec::new(); src.count(0)]);
        for n in 1..=dim {
            let mut level = Vec::with_capacity(src.count(n));
            for idx in 0..src.count(n) {
                let ws: Vec<usize> = (0..n)
                    .filter(|&j| src.degen(n - 1, j, src.face(n, j, idx)) == idx)
                    .collect();
                level.push(ws);
            }
            witnesses.push(level);
        }
        let mut positions = Vec::new();
        for n in 0..=dim {
            for idx in 0..src.count(n) {
                positions.push((n, idx));
            }
        }
        Engine {
            spec,
            witnesses,
            positions,
            assign: src.counts().iter().map(|&c| vec![usize::MAX; c]).collect(),
            budget,
            used: 0,
            budget_hit: false,
            first_only,
            solutions: Vec::new(),
            dead: HashSet::new(),
        }
    }

    fn candidate_ok(&self, n: usize, idx: usize, val: usize) -> bool {
        if let Some(f) = self.spec.fixed[n][idx] {
            if f != val {
                return false;
            }
        }
        if let Some((q, p)) = self.spec.over {
            if p.levels[n][val] != q.levels[n][idx] {
                return false;
            }
        }
        if n == 1 {
            if let Some((sm, tm)) = self.spec.edge_masks {
                if sm[idx] && !tm[val] {
                    return false;
                }
            }
        }
        if n >= 1 {
            let src = self.spec.source;
            let tgt = self.spec.target;
            for i in 0..=n {
                if tgt.face(n, i, val) != self.assign[n - 1][src.face(n, i, idx)] {
                    return false;
                }
            }
            for &j in &self.witnesses[n][idx] {
                if tgt.degen(n - 1, j, self.assign[n - 1][src.face(n, j, idx)]) != val {
                    return false;
                }
            }
        }
        true
    }

    fn frontier_key(&self, n: usize, idx: usize) -> Vec<usize> {
        let mut key = vec![n, idx];
        if n >= 1 {
            key.extend_from_slice(&self.assign[n - 1]);
        }
        key.extend_from_slice(&self.assign[n][..idx]);
        key
    }

    fn run(&mut self, pos: usize) -> bool {
        if pos == self.positions.len() {
            self.solutions.push(self.assign.clone());
            return true;
        }
        let (n, idx) = self.positions[pos];
        if let Some(&j0) = self.witnesses[n][idx].first() {
            // degenerate simplex: value forced by its normalization
            let below = self.assign[n - 1][self.spec.source.face(n, j0, idx)];
            let val = self.spec.target.degen(n - 1, j0, below);
            self.used += 1;
            if self.used > self.budget {
                self.budget_hit = true;
                return false;
            }
            if !self.candidate_ok(n, idx, val) {
                return false;
            }
            self.assign[n][idx] = val;
            let found = self.run(pos + 1);
            self.assign[n][idx] = usize::MAX;
            return found;
        }
        let key = self.frontier_key(n, idx);
        if self.dead.contains(&key) {
            return false;
        }
        let mut any = false;
        for val in 0..self.spec.target.count(n) {
            self.used += 1;
            if self.used > self.budget {
                self.budget_hit = true;
                return any;
            }
            if !self.candidate_ok(n, idx, val) {
                continue;
            }
            self.assign[n][idx] = val;
            if self.run(pos + 1) {
                any = true;
                if self.first_only {
                    self.assign[n][idx] = usize::MAX;
                    return true;
                }
            }
            self.assign[n][idx] = usize::MAX;
            if self.budget_hit {
                return any;
            }
        }
        if !any && !self.budget_hit {
            self.dead.insert(key);
        }
        any
    }
}

/// Outcome of a single-map search.
pub enum SearchOutcome {
    Found(SimplicialMap),
    NotFound,
    Budget,
}

/// Finds one map satisfying the constraints, or reports exhaustion.
pub fn find_map(spec: &SearchSpec, budget: u64) -> Result<SearchOutcome, LiftError> {
    let mut eng = Engine::new(spec, budget, true);
    let found = eng.run(0);
    if found {
        let levels = eng.solutions.pop().expect("solution recorded");
        let map = SimplicialMap::new(spec.source.clone(), spec.target.clone(), levels)
            .map_err(|e| LiftError::Internal(format!("engine produced invalid map: {e}")))?;
        Ok(SearchOutcome::Found(map))
    } else if eng.budget_hit {
        Ok(SearchOutcome::Budget)
    } else {
        Ok(SearchOutcome::NotFound)
    }
}

/// Enumerates every map satisfying the constraints, in lexicographic order
/// of assignments; errs if the budget does not cover the whole search.
pub fn all_maps(spec: &SearchSpec, budget: u64) -> Result<Vec<SimplicialMap>, LiftError> {
    let mut eng = Engine::new(spec, budget, false);
    eng.run(0);
    if eng.budget_hit {
        return Err(LiftError::Budget(budget));
    }
    eng.solutions
        .into_iter()
        .map(|levels| {
            SimplicialMap::new(spec.source.clone(), spec.target.clone(), levels)
                .map_err(|e| LiftError::Internal(format!("engine produced invalid map: {e}")))
        })
        .collect()
}

/// A commuting square asking for a diagonal: `left: A -> B` monic,
/// `top: A -> X`, `right: X -> S`, `bottom: B -> S`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    pub left: SimplicialMap,
    pub right: SimplicialMap,
    pub top: SimplicialMap,
    pub bottom: SimplicialMap,
}

impl LiftingProblem {
    pub fn new(
        left: SimplicialMap,
        right: SimplicialMap,
        top: SimplicialMap,
        bottom: SimplicialMap,
    ) -> Result<Self, LiftError> {
        let p = LiftingProblem { left, right, top, bottom };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LiftError> {
        if self.left.source != self.top.source {
            return Err(LiftError::BadProblem("left and top must share a source".into()));
        }
        if self.left.target != self.bottom.source {
            return Err(LiftError::BadProblem("bottom must start at the left target".into()));
        }
        if self.top.target != self.right.source {
            return Err(LiftError::BadProblem("right must start at the top target".into()));
        }
        if self.right.target != self.bottom.target {
            return Err(LiftError::BadProblem("right and bottom must share a target".into()));
        }
        if !self.left.is_mono() {
            return Err(LiftError::BadProblem("left map must be a monomorphism".into()));
        }
        let lhs = SimplicialMap::compose(&self.right, &self.top)?;
        let rhs = SimplicialMap::compose(&self.bottom, &self.left)?;
        if lhs.levels != rhs.levels {
            return Err(LiftError::BadProblem("square does not commute".into()));
        }
        Ok(())
    }
}

/// Result of a lift search: a verified diagonal, a proof of absence by
/// exhaustion, or a budget stop.
#[derive(Debug, Clone)]
pub enum LiftOutcome {
    Lift(SimplicialMap),
    NoLift,
    Exhausted,
}

/// Searches for a diagonal filler. Every returned lift is re-verified
/// against both triangles before being handed back.
pub fn solve_lift(prob: &LiftingProblem, budget: u64) -> Result<LiftOutcome, LiftError> {
    prob.validate()?;
    let b = &prob.left.target;
    let x = &prob.top.target;
    let mut fixed: Vec<Vec<Option<usize>>> =
        b.counts().iter().map(|&c| vec![None; c]).collect();
    for n in 0..=b.dim_bound() {
        for a in 0..prob.left.source.count(n) {
            fixed[n][prob.left.levels[n][a]] = Some(prob.top.levels[n][a]);
        }
    }
    let spec = SearchSpec {
        source: b,
        target: x,
        fixed,
        over: Some((&prob.bottom, &prob.right)),
        edge_masks: None,
    };
    match find_map(&spec, budget)? {
        SearchOutcome::Found(h) => {
            let top = SimplicialMap::compose(&h, &prob.left)?;
            if top.levels != prob.top.levels {
                return Err(LiftError::Internal("lift fails the upper triangle".into()));
            }
            let bottom = SimplicialMap::compose(&prob.right, &h)?;
            if bottom.levels != prob.bottom.levels {
                return Err(LiftError::Internal("lift fails the lower triangle".into()));
            }
            Ok(LiftOutcome::Lift(h))
        }
        SearchOutcome::NotFound => Ok(LiftOutcome::NoLift),
        SearchOutcome::Budget => Ok(LiftOutcome::Exhausted),
    }
}

/// Right-lifting-property check of `p` against a single monomorphism
/// `incl: A -> B`, quantified over every attaching square.
pub fn has_rlp(
    p: &SimplicialMap,
    incl: &SimplicialMap,
    budget: u64,
) -> Result<Verdict, LiftError> {
    let a = &incl.source;
    let b = &incl.target;
    let x = &p.source;
    let s = &p.target;
    let tops = match all_maps(&SearchSpec::unconstrained(a, x), budget) {
        Ok(v) => v,
        Err(LiftError::Budget(_)) => return Ok(Verdict::Unknown),
        Err(e) => return Err(e),
    };
    let mut unknown_seen = false;
    for u in &tops {
        let pu = SimplicialMap::compose(p, u)?;
        let mut fixed: Vec<Vec<Option<usize>>> =
            b.counts().iter().map(|&c| vec![None; c]).collect();
        for n in 0..=b.dim_bound() {
            for ai in 0..a.count(n) {
                fixed[n][incl.levels[n][ai]] = Some(pu.levels[n][ai]);
            }
        }
        let bottoms = match all_maps(
            &SearchSpec { source: b, target: s, fixed, over: None, edge_masks: None },
            budget,
        ) {
            Ok(v) => v,
            Err(LiftError::Budget(_)) => {
                unknown_seen = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        for v in bottoms {
            let prob = LiftingProblem::new(incl.clone(), p.clone(), u.clone(), v)?;
            match solve_lift(&prob, budget)? {
                LiftOutcome::Lift(_) => {}
                LiftOutcome::NoLift => return Ok(Verdict::No),
                LiftOutcome::Exhausted => unknown_seen = true,
            }
        }
    }
    Ok(if unknown_seen { Verdict::Unknown } else { Verdict::Yes })
}

/// A lifting square of marked maps: the diagonal must also carry marked
/// edges to marked edges.
#[derive(Debug, Clone)]
pub struct MarkedLiftingProblem {
    pub left: MarkedMap,
    pub right: MarkedMap,
    pub top: MarkedMap,
    pub bottom: MarkedMap,
}

impl MarkedLiftingProblem {
    pub fn new(
        left: MarkedMap,
        right: MarkedMap,
        top: MarkedMap,
        bottom: MarkedMap,
    ) -> Result<Self, LiftError> {
        let p = MarkedLiftingProblem { left, right, top, bottom };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LiftError> {
        for (m, side) in [
            (&self.left, "left"),
            (&self.right, "right"),
            (&self.top, "top"),
            (&self.bottom, "bottom"),
        ] {
            m.validate()
                .map_err(|e| LiftError::BadProblem(format!("{side} map invalid: {e}")))?;
        }
        if self.left.source != self.top.source
            || self.left.target != self.bottom.source
            || self.top.target != self.right.source
            || self.right.target != self.bottom.target
        {
            return Err(LiftError::BadProblem("marked square endpoints mismatch".into()));
        }
        // the underlying square carries the commutation and mono checks
        LiftingProblem::new(
            self.left.map.clone(),
            self.right.map.clone(),
            self.top.map.clone(),
            self.bottom.map.clone(),
        )?;
        Ok(())
    }
}

/// Searches for a marked diagonal filler; marking preservation is enforced
/// during the search and re-verified on the result.
pub fn solve_lift_marked(
    prob: &MarkedLiftingProblem,
    budget: u64,
) -> Result<LiftOutcome, LiftError> {
    prob.validate()?;
    let b = &prob.left.target;
    let x = &prob.top.target;
    let mut fixed: Vec<Vec<Option<usize>>> =
        b.space.counts().iter().map(|&c| vec![None; c]).collect();
    for n in 0..=b.space.dim_bound() {
        for a in 0..prob.left.source.space.count(n) {
            fixed[n][prob.left.map.levels[n][a]] = Some(prob.top.map.levels[n][a]);
        }
    }
    let spec = SearchSpec {
        source: &b.space,
        target: &x.space,
        fixed,
        over: Some((&prob.bottom.map, &prob.right.map)),
        edge_masks: Some((&b.marked, &x.marked)),
    };
    match find_map(&spec, budget)? {
        SearchOutcome::Found(h) => {
            let top = SimplicialMap::compose(&h, &prob.left.map)?;
            if top.levels != prob.top.map.levels {
                return Err(LiftError::Internal("marked lift fails the upper triangle".into()));
            }
            let bottom = SimplicialMap::compose(&prob.right.map, &h)?;
            if bottom.levels != prob.bottom.map.levels {
                return Err(LiftError::Internal("marked lift fails the lower triangle".into()));
            }
            MarkedMap::new(b.clone(), x.clone(), h.clone())
                .map_err(|e| LiftError::Internal(format!("lift drops a marking: {e}")))?;
            Ok(LiftOutcome::Lift(h))
        }
        SearchOutcome::NotFound => Ok(LiftOutcome::NoLift),
        SearchOutcome::Budget => Ok(LiftOutcome::Exhausted),
    }
}

/// Right-lifting-property check of a marked map `p` against a marked
/// monomorphism `incl`, quantified over every marking-preserving square.
pub fn check_rlp_marked(
    p: &MarkedMap,
    incl: &MarkedMap,
    budget: u64,
) -> Result<Verdict, LiftError> {
    p.validate().map_err(|e| LiftError::BadProblem(format!("right map invalid: {e}")))?;
    incl.validate().map_err(|e| LiftError::BadProblem(format!("left map invalid: {e}")))?;
    if !incl.map.is_mono() {
        return Err(LiftError::BadProblem("left map must be a monomorphism".into()));
    }
    let a = &incl.source;
    let b = &incl.target;
    let x = &p.source;
    let s = &p.target;
    let tops = match all_maps(
        &SearchSpec {
            source: &a.space,
            target: &x.space,
            fixed: a.space.counts().iter().map(|&c| vec![None; c]).collect(),
            over: None,
            edge_masks: Some((&a.marked, &x.marked)),
        },
        budget,
    ) {
        Ok(v) => v,
        Err(LiftError::Budget(_)) => return Ok(Verdict::Unknown),
        Err(e) => return Err(e),
    };
    let mut unknown_seen = false;
    for u in tops {
        let pu = SimplicialMap::compose(&p.map, &u)?;
        let mut fixed: Vec<Vec<Option<usize>>> =
            b.space.counts().iter().map(|&c| vec![None; c]).collect();
        for n in 0..=b.space.dim_bound() {
            for ai in 0..a.space.count(n) {
                fixed[n][incl.map.levels[n][ai]] = Some(pu.levels[n][ai]);
            }
        }
        let bottoms = match all_maps(
            &SearchSpec {
                source: &b.space,
                target: &s.space,
                fixed,
                over: None,
                edge_masks: Some((&b.marked, &s.marked)),
            },
            budget,
        ) {
            Ok(v) => v,
            Err(LiftError::Budget(_)) => {
                unknown_seen = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let um = MarkedMap::new(a.clone(), x.clone(), u.clone())
            .map_err(|e| LiftError::Internal(format!("top map drops a marking: {e}")))?;
        for v in bottoms {
            let vm = MarkedMap::new(b.clone(), s.clone(), v)
                .map_err(|e| LiftError::Internal(format!("bottom map drops a marking: {e}")))?;
            let prob =
                MarkedLiftingProblem::new(incl.clone(), p.clone(), um.clone(), vm)?;
            match solve_lift_marked(&prob, budget)? {
                LiftOutcome::Lift(_) => {}
                LiftOutcome::NoLift => return Ok(Verdict::No),
                LiftOutcome::Exhausted => unknown_seen = true,
            }
        }
    }
    Ok(if unknown_seen { Verdict::Unknown } else { Verdict::Yes })
}

/// RLP against all inner-horn inclusions up to the truncation dimension.
pub fn is_inner_fibration(p: &SimplicialMap, budget: u64) -> Result<Verdict, LiftError> {
    let d = p.source.dim_bound();
    let mut verdict = Verdict::Yes;
    for n in 2..=d {
        for k in 1..n {
            let h = horn(n, k, d);
            verdict = verdict.and(has_rlp(p, &h.include, budget)?);
            if verdict == Verdict::No {
                return Ok(Verdict::No);
            }
        }
    }
    Ok(verdict)
}

/// RLP against all horn inclusions up to the truncation dimension.
pub fn is_kan_fibration(p: &SimplicialMap, budget: u64) -> Result<Verdict, LiftError> {
    let d = p.source.dim_bound();
    let mut verdict = Verdict::Yes;
    for n in 1..=d {
        for k in 0..=n {
            let h = horn(n, k, d);
            verdict = verdict.and(has_rlp(p, &h.include, budget)?);
            if verdict == Verdict::No {
                return Ok(Verdict::No);
            }
        }
    }
    Ok(verdict)
}

/// RLP against all boundary inclusions up to the truncation dimension.
pub fn is_trivial_fibration(p: &SimplicialMap, budget: u64) -> Result<Verdict, LiftError> {
    let d = p.source.dim_bound();
    let mut verdict = Verdict::Yes;
    for n in 0..=d {
        let b = boundary(n, d);
        verdict = verdict.and(has_rlp(p, &b.include, budget)?);
        if verdict == Verdict::No {
            return Ok(Verdict::No);
        }
    }
    Ok(verdict)
}

pub fn is_quasi_category(x: &TruncatedSimplicialSet, budget: u64) -> Result<Verdict, LiftError> {
    is_inner_fibration(&SimplicialMap::to_point(x), budget)
}

pub fn is_kan_complex(x: &TruncatedSimplicialSet, budget: u64) -> Result<Verdict, LiftError> {
    is_kan_fibration(&SimplicialMap::to_point(x), budget)
}

/// One horn-pushout gluing step: the chosen horn and the attaching map from
/// that horn into the complex the step was applied to.
#[derive(Debug, Clone)]
pub struct HornGlueStep {
    pub n: usize,
    pub k: usize,
    pub attach: SimplicialMap,
}

/// A composite of horn-pushout gluings with its total inclusion; serves as
/// a replayable certificate that the inclusion is anodyne.
#[derive(Debug, Clone)]
pub struct AnodyneChain {
    pub start: TruncatedSimplicialSet,
    pub end: TruncatedSimplicialSet,
    pub inclusion: SimplicialMap,
    pub steps: Vec<HornGlueStep>,
}

/// Incrementally builds an anodyne chain by gluing standard simplices along
/// horns.
pub struct AnodyneBuilder {
    start: TruncatedSimplicialSet,
    current: TruncatedSimplicialSet,
    inclusion: SimplicialMap,
    steps: Vec<HornGlueStep>,
}

impl AnodyneBuilder {
    pub fn new(start: TruncatedSimplicialSet) -> Self {
        let inclusion = SimplicialMap::identity(&start);
        AnodyneBuilder { current: start.clone(), start, inclusion, steps: Vec::new() }
    }

    pub fn current(&self) -> &TruncatedSimplicialSet {
        &self.current
    }

    /// Glues a standard `n`-simplex along `attach: horn(n, k) -> current`.
    pub fn glue(&mut self, n: usize, k: usize, attach: SimplicialMap) -> Result<(), LiftError> {
        let d = self.current.dim_bound();
        let h = horn(n, k, d);
        if attach.source != h.complex || attach.target != self.current {
            return Err(LiftError::BadProblem("attaching map endpoints are wrong".into()));
        }
        attach.validate()?;
        let po = pushout(&attach, &h.include)?;
        if !po.from_x.is_mono() {
            return Err(LiftError::Internal("horn gluing failed to be injective".into()));
        }
        self.inclusion = SimplicialMap::compose(&po.from_x, &self.inclusion)?;
        self.current = po.complex;
        self.steps.push(HornGlueStep { n, k, attach });
        Ok(())
    }

    pub fn finish(self) -> AnodyneChain {
        AnodyneChain {
            start: self.start,
            end: self.current,
            inclusion: self.inclusion,
            steps: self.steps,
        }
    }
}

/// Replays a chain's gluing steps and confirms it reconstructs the stored
/// end complex and inclusion.
pub fn verify_anodyne_chain(chain: &AnodyneChain) -> bool {
    let mut builder = AnodyneBuilder::new(chain.start.clone());
    for step in &chain.steps {
        if builder.glue(step.n, step.k, step.attach.clone()).is_err() {
            return false;
        }
    }
    let rebuilt = builder.finish();
    rebuilt.end == chain.end && rebuilt.inclusion.levels == chain.inclusion.levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FiniteCategory;
    use crate::delta::MonotoneMap;
    use crate::sset::{find_isomorphism, nerve, standard_simplex, SimplexRef};

    /// Brute-force lift enumeration: assigns values to nondegenerate
    /// simplices outright, extends by normalization, and filters by full
    /// validation. Independent of the engine's constraint propagation.
    fn oracle_lifts(prob: &LiftingProblem) -> Vec<Vec<Vec<usize>>> {
        let b = &prob.left.target;
        let x = &prob.top.target;
        let d = b.dim_bound();
        let nd: Vec<Vec<usize>> = (0..=d).map(|n| b.nondegenerate_indices(n)).collect();
        let slots: Vec<(usize, usize)> =
            nd.iter().enumerate().flat_map(|(n, v)| v.iter().map(move |&i| (n, i))).collect();
        let mut results = Vec::new();
        let mut choice = vec![0usize; slots.len()];
        'outer: loop {
            let mut levels: Vec<Vec<usize>> =
                (0..=d).map(|n| vec![usize::MAX; b.count(n)]).collect();
            for (s, &(n, i)) in slots.iter().enumerate() {
                levels[n][i] = choice[s];
            }
            // extend to degenerate simplices via normalization
            for n in 1..=d {
                for idx in 0..b.count(n) {
                    if levels[n][idx] != usize::MAX {
                        continue;
                    }
                    let (e, base) = b.ez_normalize(SimplexRef::new(n, idx));
                    let v = levels[base.dim][base.index];
                    levels[n][idx] = x.action(&e, SimplexRef::new(base.dim, v)).index;
                }
            }
            if let Ok(h) = SimplicialMap::new(b.clone(), x.clone(), levels) {
                let t1 = SimplicialMap::compose(&h, &prob.left).unwrap();
                let t2 = SimplicialMap::compose(&prob.right, &h).unwrap();
                if t1.levels == prob.top.levels && t2.levels == prob.bottom.levels {
                    results.push(h.levels);
                }
            }
            // odometer over candidate values
            for s in (0..slots.len()).rev() {
                let (n, _) = slots[s];
                choice[s] += 1;
                if choice[s] < x.count(n) {
                    continue 'outer;
                }
                choice[s] = 0;
            }
            break;
        }
        results
    }

    fn horn_into(target: &TruncatedSimplicialSet, levels0: Vec<usize>) -> LiftingProblem {
        // builds the Λ²₁ ↪ Δ² problem over the point with the horn mapped
        // by the given vertex images and the forced edges
        let d = target.dim_bound();
        let h = horn(2, 1, d);
        let spec = SearchSpec {
            source: &h.complex,
            target,
            fixed: {
                let mut f: Vec<Vec<Option<usize>>> =
                    h.complex.counts().iter().map(|&c| vec![None; c]).collect();
                for (i, &v) in levels0.iter().enumerate() {
                    f[0][i] = Some(v);
                }
                f
            },
            over: None,
            edge_masks: None,
        };
        let u = match find_map(&spec, 1_000_000).unwrap() {
            SearchOutcome::Found(u) => u,
            _ => panic!("horn map not found"),
        };
        LiftingProblem::new(
            h.include.clone(),
            SimplicialMap::to_point(target),
            u,
            SimplicialMap::to_point(&standard_simplex(2, d)),
        )
        .unwrap()
    }

    #[test]
    fn inner_horn_fills_uniquely_in_a_nerve() {
        let n2 = nerve(&FiniteCategory::chain(2), 2);
        let prob = horn_into(&n2.complex, vec![0, 1, 2]);
        match solve_lift(&prob, 1_000_000).unwrap() {
            LiftOutcome::Lift(h) => {
                // the lift is the 2-chain (0->1, 1->2)
                let top = SimplexRef::new(2, h.levels[2][crate::sset::standard_index(
                    2,
                    &MonotoneMap::identity(2),
                )]);
                assert!(!n2.complex.is_degenerate(top));
            }
            other => panic!("expected lift, got {other:?}"),
        }
        // oracle agreement: exactly one lift
        assert_eq!(oracle_lifts(&prob).len(), 1);
    }

    #[test]
    fn no_filler_in_a_boundary_target() {
        let b = boundary(2, 2);
        let prob = horn_into(&b.complex, vec![0, 1, 2]);
        match solve_lift(&prob, 1_000_000).unwrap() {
            LiftOutcome::NoLift => {}
            other => panic!("expected NoLift, got {other:?}"),
        }
        assert!(oracle_lifts(&prob).is_empty());
    }

    #[test]
    fn iso_left_leg_lifts_trivially() {
        let s = standard_simplex(1, 2);
        let id = SimplicialMap::identity(&s);
        let prob = LiftingProblem::new(
            id.clone(),
            SimplicialMap::to_point(&s),
            id.clone(),
            SimplicialMap::to_point(&s),
        )
        .unwrap();
        match solve_lift(&prob, 10_000).unwrap() {
            LiftOutcome::Lift(h) => assert_eq!(h.levels, id.levels),
            other => panic!("expected lift, got {other:?}"),
        }
    }

    #[test]
    fn engine_agrees_with_oracle_on_boundary_problems() {
        // boundary inclusion against the interval over the point, with the
        // top map picking both endpoints in order
        let d = 2;
        let i1 = standard_simplex(1, d);
        let b = boundary(1, d);
        let u = SimplicialMap::new(
            b.complex.clone(),
            i1.clone(),
            vec![vec![0, 1], vec![0, 2], vec![0, 3]],
        )
        .unwrap();
        let prob = LiftingProblem::new(
            b.include.clone(),
            SimplicialMap::to_point(&i1),
            u,
            SimplicialMap::to_point(&i1),
        )
        .unwrap();
        let oracle = oracle_lifts(&prob);
        assert_eq!(oracle.len(), 1, "the identity edge is the only filler");
        match solve_lift(&prob, 1_000_000).unwrap() {
            LiftOutcome::Lift(h) => assert!(oracle.contains(&h.levels)),
            other => panic!("expected lift, got {other:?}"),
        }
    }

    #[test]
    fn budget_stop_is_reported_as_exhausted() {
        let n2 = nerve(&FiniteCategory::chain(2), 2);
        let prob = horn_into(&n2.complex, vec![0, 1, 2]);
        match solve_lift(&prob, 1).unwrap() {
            LiftOutcome::Exhausted => {}
            other => panic!("expected Exhausted, got {other:?}"),
        }
    }

    #[test]
    fn fibration_predicates_on_nerves() {
        let qc = nerve(&FiniteCategory::chain(2), 3).complex;
        assert_eq!(is_quasi_category(&qc, 10_000_000).unwrap(), Verdict::Yes);
        let arrow = nerve(&FiniteCategory::chain(1), 2).complex;
        assert_eq!(is_kan_complex(&arrow, 10_000_000).unwrap(), Verdict::No);
        let grp = nerve(&FiniteCategory::walking_iso(), 2).complex;
        assert_eq!(is_kan_complex(&grp, 10_000_000).unwrap(), Verdict::Yes);
        let pt = standard_simplex(0, 2);
        assert_eq!(is_quasi_category(&pt, 10_000_000).unwrap(), Verdict::Yes);
    }

    #[test]
    fn trivial_fibration_examples() {
        let s = standard_simplex(2, 2);
        let id = SimplicialMap::identity(&s);
        assert_eq!(is_trivial_fibration(&id, 10_000_000).unwrap(), Verdict::Yes);
        // the interval over the point is not a trivial fibration: the
        // reversed boundary assignment has no connecting edge
        let i1 = standard_simplex(1, 2);
        let p = SimplicialMap::to_point(&i1);
        assert_eq!(is_trivial_fibration(&p, 10_000_000).unwrap(), Verdict::No);
    }

    #[test]
    fn horn_gluing_builds_the_standard_simplex() {
        let h = horn(2, 1, 2);
        let mut builder = AnodyneBuilder::new(h.complex.clone());
        builder.glue(2, 1, SimplicialMap::identity(&h.complex)).unwrap();
        let chain = builder.finish();
        assert!(verify_anodyne_chain(&chain));
        assert!(chain.inclusion.is_mono());
        let d2 = standard_simplex(2, 2);
        assert_eq!(chain.end.counts(), d2.counts());
        assert!(find_isomorphism(&chain.end, &d2, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn ill_posed_problems_are_rejected() {
        let s = standard_simplex(1, 2);
        let b = boundary(1, 2);
        // non-mono left leg
        let collapse = SimplicialMap::to_point(&s);
        let err = LiftingProblem::new(
            collapse.clone(),
            SimplicialMap::identity(&standard_simplex(0, 2)),
            SimplicialMap::to_point(&s),
            SimplicialMap::identity(&standard_simplex(0, 2)),
        );
        assert!(err.is_err());
        // non-commuting square: boundary into interval two ways
        let u = SimplicialMap::new(
            b.complex.clone(),
            s.clone(),
            vec![vec![1, 0], vec![2, 0], vec![3, 0]],
        )
        .unwrap();
        let bad = LiftingProblem::new(
            b.include.clone(),
            SimplicialMap::identity(&s),
            u,
            SimplicialMap::identity(&s),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn marking_constraints_can_forbid_an_existing_lift() {
        use crate::marked::{flat, natural, sharp, MarkedMap};
        let s = nerve(&FiniteCategory::chain(1), 2).complex;
        let sn = natural(&s, 1_000_000).unwrap();
        let interval = standard_simplex(1, 2);
        let ends = boundary(1, 2);
        let phi = find_isomorphism(&interval, &s, 1_000_000).unwrap().expect("iso");
        let top = MarkedMap::new(
            flat(&ends.complex),
            sn.clone(),
            SimplicialMap::compose(&phi, &ends.include).unwrap(),
        )
        .unwrap();
        let pt = flat(&standard_simplex(0, 2));
        let right = MarkedMap::new(sn.clone(), pt.clone(), SimplicialMap::to_point(&s)).unwrap();
        let bottom =
            MarkedMap::new(sharp(&interval), pt.clone(), SimplicialMap::to_point(&interval))
                .unwrap();
        // with the interval fully marked the diagonal would have to send a
        // nondegenerate edge to an equivalence, and the arrow nerve has none
        let left_sharp = MarkedMap::new(
            flat(&ends.complex),
            sharp(&interval),
            ends.include.clone(),
        )
        .unwrap();
        let prob = MarkedLiftingProblem::new(left_sharp, right.clone(), top.clone(), bottom)
            .unwrap();
        assert!(matches!(solve_lift_marked(&prob, 1_000_000).unwrap(), LiftOutcome::NoLift));
        // with the minimal marking the straight edge is a legal diagonal
        let left_flat = MarkedMap::new(
            flat(&ends.complex),
            flat(&interval),
            ends.include.clone(),
        )
        .unwrap();
        let bottom_flat =
            MarkedMap::new(flat(&interval), pt.clone(), SimplicialMap::to_point(&interval))
                .unwrap();
        let prob = MarkedLiftingProblem::new(left_flat, right, top, bottom_flat).unwrap();
        assert!(matches!(solve_lift_marked(&prob, 1_000_000).unwrap(), LiftOutcome::Lift(_)));
    }

    #[test]
    fn marked_rlp_against_generator_classes() {
        use crate::marked::{flat, marked_anodyne_generators, natural, MarkedMap};
        let gens = marked_anodyne_generators(2, 2, &[], 1_000_000).unwrap();
        // the equivalence-marked nerve of a chain lifts against every class
        let c = nerve(&FiniteCategory::chain(1), 2).complex;
        let cn = natural(&c, 1_000_000).unwrap();
        let pt = flat(&standard_simplex(0, 2));
        let p = MarkedMap::new(cn, pt.clone(), SimplicialMap::to_point(&c)).unwrap();
        for g in &gens {
            assert_eq!(check_rlp_marked(&p, g, 10_000_000).unwrap(), Verdict::Yes);
        }
        // a 2-sphere shell has no inner-horn filler, so class 1 fails on it
        let shell = boundary(2, 2);
        let q = MarkedMap::new(
            flat(&shell.complex),
            pt,
            SimplicialMap::to_point(&shell.complex),
        )
        .unwrap();
        let inner = &gens[0];
        assert_eq!(check_rlp_marked(&q, inner, 10_000_000).unwrap(), Verdict::No);
    }
}
