//! Diagrams of truncated simplicial sets indexed by the category of
//! simplices of a base complex.
//!
//! An object of the index category is a pair `(n, sigma)` with `sigma` an
//! `n`-simplex of the base (degenerate simplices included); a morphism
//! `(n, sigma) -> (m, sigma')` is a monotone map `p: [n] -> [m]` whose
//! pullback action carries `sigma'` to `sigma`. Diagrams are contravariant:
//! they assign a complex to each object and a map `F(m, sigma') -> F(n,
//! sigma)` to each morphism, stored on the face/degeneracy generators and
//! composed on demand.
//!
//! On top of the plain diagram machinery this module provides the mapping
//! diagram `(n, sigma) |-> Map^#((Delta^n)^b, C^nat)`, dimension-wise global
//! sections (a limit computed by enumerating compatible families), the
//! objectwise right cone with its inclusion, a lift of diagram maps along
//! that inclusion built by skeleton induction with one marked lifting
//! problem per object, and the extension of a partially defined map
//! `K' -> C` to all of `K` with a connecting edge path as witness.

use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use crate::cat::{self, FiniteCategory, Functor};
use crate::delta::MonotoneMap;
use crate::homotopy::{self, ContractibilityCertificate};
use crate::lifting::{self, AnodyneChain, SearchOutcome, SearchSpec};
use crate::marked::{self, HomComplex, MarkedMap, MarkedProduct, MarkedSimplicialSet};
use crate::sset::{
    standard_index, standard_simplex, standard_map, Nerve, SimplexRef, SimplicialMap,
    TruncatedSimplicialSet,
};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("dimension bound {d} exceeds the base truncation {bound}")]
    DimTooLarge { d: usize, bound: usize },
    #[error("no object ({dim}, {idx}) in the index category")]
    NoSuchObject { dim: usize, idx: usize },
    #[error("value truncations disagree: ({dim}, {idx}) has {got}, expected {want}")]
    ValueTruncation { dim: usize, idx: usize, got: usize, want: usize },
    #[error("{kind} action {op} at ({dim}, {idx}) has wrong endpoints")]
    ActionEndpoints { kind: &'static str, op: usize, dim: usize, idx: usize },
    #[error("functoriality failure: {0}")]
    Functoriality(String),
    #[error("naturality fails at ({dim}, {idx}) along {kind} {op}")]
    Naturality { dim: usize, idx: usize, kind: &'static str, op: usize },
    #[error("component at ({dim}, {idx}) has mismatched endpoints")]
    ComponentEndpoints { dim: usize, idx: usize },
    #[error("family is incompatible with the action into ({dim}, {idx})")]
    IncompatibleFamily { dim: usize, idx: usize },
    #[error("section disagrees with the prescribed map at base simplex ({dim}, {idx})")]
    SectionMismatch { dim: usize, idx: usize },
    #[error("value at ({dim}, {idx}) has no contractibility certificate: {why}")]
    NotContractible { dim: usize, idx: usize, why: String },
    #[error("anodyne evidence at ({dim}, {idx}) is missing or does not verify")]
    BadEvidence { dim: usize, idx: usize },
    #[error("lift search found no solution at ({dim}, {idx})")]
    Exhausted { dim: usize, idx: usize },
    #[error("prescribed values conflict at ({dim}, {idx}); inputs are not natural")]
    ForcedConflict { dim: usize, idx: usize },
    #[error("curried lift at ({dim}, {idx}) is not a simplex of the mapping value")]
    CurriedMissing { dim: usize, idx: usize },
    #[error("the extension and the prescribed map are not connected in the mapping complex")]
    Disconnected,
    #[error("strict limit comparison failed at ({dim}, {idx}): {why}")]
    LimitMismatch { dim: usize, idx: usize, why: String },
    #[error("malformed extension input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Sset(#[from] crate::sset::SsetError),
    #[error(transparent)]
    Delta(#[from] crate::delta::DeltaError),
    #[error(transparent)]
    Marked(#[from] crate::marked::MarkedError),
    #[error(transparent)]
    Lift(#[from] crate::lifting::LiftError),
    #[error(transparent)]
    Cat(#[from] crate::cat::CatError),
}

/// The category of simplices of `base`, truncated at dimension `dim`:
/// objects are pairs `(n, sigma)` with `sigma` in `base`'s level `n`,
/// morphisms `(n, sigma) -> (m, sigma')` are monotone `p: [n] -> [m]` with
/// `action(p)(sigma') = sigma`.
#[derive(Debug, Clone)]
pub struct SimplexCategory {
    pub base: TruncatedSimplicialSet,
    pub dim: usize,
}

impl SimplexCategory {
    pub fn object_count(&self, n: usize) -> usize {
        self.base.count(n)
    }

    /// All objects in (dimension, simplex index) order.
    pub fn objects(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for n in 0..=self.dim {
            for idx in 0..self.base.count(n) {
                out.push((n, idx));
            }
        }
        out
    }

    /// Monotone maps realizing morphisms `(n, sigma) -> (m, sigma')`.
    pub fn morphisms_between(
        &self,
        from: (usize, usize),
        to: (usize, usize),
    ) -> Vec<MonotoneMap> {
        let (n, sigma) = from;
        let (m, sigma_to) = to;
        MonotoneMap::enumerate(n, m)
            .into_iter()
            .filter(|p| {
                self.base.action(p, SimplexRef::new(m, sigma_to)) == SimplexRef::new(n, sigma)
            })
            .collect()
    }
}

pub fn build_simplex_category(
    base: &TruncatedSimplicialSet,
    dim: usize,
) -> Result<SimplexCategory, DiagramError> {
    if dim > base.dim_bound() {
        return Err(DiagramError::DimTooLarge { d: dim, bound: base.dim_bound() });
    }
    Ok(SimplexCategory { base: base.clone(), dim })
}

type ActionKey = (Vec<usize>, usize, usize);

/// A contravariant diagram of truncated simplicial sets over a simplex
/// category. Actions are stored for the generating morphisms only:
/// `face_actions[n][tau][i]` is the action `F(n+1, tau) -> F(n, d_i tau)`
/// and `degen_actions[n][tau][j]` the action `F(n, tau) -> F(n+1, s_j tau)`.
/// General actions are composed on demand and memoized.
#[derive(Debug)]
pub struct SSetDiagram {
    pub index: SimplexCategory,
    pub values: Vec<Vec<TruncatedSimplicialSet>>,
    pub face_actions: Vec<Vec<Vec<SimplicialMap>>>,
    pub degen_actions: Vec<Vec<Vec<SimplicialMap>>>,
    cache: RefCell<HashMap<ActionKey, SimplicialMap>>,
}

impl Clone for SSetDiagram {
    fn clone(&self) -> Self {
        SSetDiagram {
            index: self.index.clone(),
            values: self.values.clone(),
            face_actions: self.face_actions.clone(),
            degen_actions: self.degen_actions.clone(),
            cache: RefCell::new(HashMap::new()),
        }
    }
}

impl SSetDiagram {
    pub fn new(
        index: SimplexCategory,
        values: Vec<Vec<TruncatedSimplicialSet>>,
        face_actions: Vec<Vec<Vec<SimplicialMap>>>,
        degen_actions: Vec<Vec<Vec<SimplicialMap>>>,
    ) -> Result<Self, DiagramError> {
        let d = SSetDiagram {
            index,
            values,
            face_actions,
            degen_actions,
            cache: RefCell::new(HashMap::new()),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn value(&self, n: usize, idx: usize) -> &TruncatedSimplicialSet {
        &self.values[n][idx]
    }

    /// Common truncation of every value complex; over the empty base the
    /// limit is a point per dimension, so fall back to the index truncation.
    pub fn value_dim(&self) -> usize {
        self.values[0].first().map(|v| v.dim_bound()).unwrap_or(self.index.dim)
    }

    /// Action of the face generator `d_i: (n, d_i tau) -> (n+1, tau)`,
    /// a map `F(n+1, tau) -> F(n, d_i tau)`.
    pub fn act_face(&self, upper: usize, tau: usize, i: usize) -> &SimplicialMap {
        &self.face_actions[upper - 1][tau][i]
    }

    /// Action of the degeneracy generator `s_j: (n+1, s_j tau) -> (n, tau)`,
    /// a map `F(n, tau) -> F(n+1, s_j tau)`.
    pub fn act_degen(&self, lower: usize, tau: usize, j: usize) -> &SimplicialMap {
        &self.degen_actions[lower][tau][j]
    }

    /// Action of the morphism `(n, sigma) -> (m, sigma')` given by `p`,
    /// where `sigma` is determined as the pullback of `sigma'`. Returns the
    /// map `F(m, sigma') -> F(n, action(p)(sigma'))`.
    pub fn action_of(
        &self,
        p: &MonotoneMap,
        target: (usize, usize),
    ) -> Result<SimplicialMap, DiagramError> {
        let (m, sigma_to) = target;
        if p.cod() != m || m > self.index.dim || p.dom() > self.index.dim {
            return Err(DiagramError::Functoriality(format!(
                "map [{}]->[{}] does not target dimension {}",
                p.dom(),
                p.cod(),
                m
            )));
        }
        let key: ActionKey = (p.values().to_vec(), m, sigma_to);
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let result = self.action_uncached(p, m, sigma_to)?;
        self.cache.borrow_mut().insert(key, result.clone());
        Ok(result)
    }

    fn action_uncached(
        &self,
        p: &MonotoneMap,
        m: usize,
        sigma_to: usize,
    ) -> Result<SimplicialMap, DiagramError> {
        if p.is_identity() {
            return Ok(SimplicialMap::identity(&self.values[m][sigma_to]));
        }
        let skipped = p.skipped_values();
        if let Some(&i) = skipped.first() {
            // p = d_i . p' with p': [n] -> [m-1]
            let vals =
                p.values().iter().map(|&v| if v > i { v - 1 } else { v }).collect::<Vec<_>>();
            let p_rest = MonotoneMap::new(p.dom(), m - 1, vals)?;
            let lower =
                self.index.base.action(&MonotoneMap::face(m, i)?, SimplexRef::new(m, sigma_to));
            let first = self.act_face(m, sigma_to, i).clone();
            let rest = self.action_of(&p_rest, (m - 1, lower.index))?;
            return Ok(SimplicialMap::compose(&rest, &first)?);
        }
        // p is surjective and not the identity: split off the least collapse
        let j = p
            .values()
            .windows(2)
            .position(|w| w[0] == w[1])
            .expect("a non-identity epi repeats a value");
        let mut vals = p.values().to_vec();
        vals.remove(j + 1);
        let p_rest = MonotoneMap::new(p.dom() - 1, m, vals)?;
        let mid = self.index.base.action(&p_rest, SimplexRef::new(m, sigma_to));
        let rest = self.action_of(&p_rest, (m, sigma_to))?;
        let last = self.act_degen(p.dom() - 1, mid.index, j).clone();
        Ok(SimplicialMap::compose(&last, &rest)?)
    }

    /// Endpoint checks plus exhaustive functoriality over all composable
    /// pairs of index morphisms.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let d = self.index.dim;
        if self.values.len() != d + 1
            || self.face_actions.len() != d
            || self.degen_actions.len() != d
        {
            return Err(DiagramError::Functoriality("table lengths disagree with dim".into()));
        }
        let e = self.value_dim();
        for n in 0..=d {
            if self.values[n].len() != self.index.base.count(n) {
                return Err(DiagramError::Functoriality(format!(
                    "value count at dimension {n} disagrees with the base"
                )));
            }
            for (idx, v) in self.values[n].iter().enumerate() {
                if v.dim_bound() != e {
                    return Err(DiagramError::ValueTruncation {
                        dim: n,
                        idx,
                        got: v.dim_bound(),
                        want: e,
                    });
                }
            }
        }
        for n in 0..d {
            let upper = n + 1;
            if self.face_actions[n].len() != self.index.base.count(upper) {
                return Err(DiagramError::Functoriality(format!(
                    "face action count at dimension {upper} disagrees with the base"
                )));
            }
            for tau in 0..self.index.base.count(upper) {
                if self.face_actions[n][tau].len() != upper + 1 {
                    return Err(DiagramError::Functoriality(format!(
                        "face action arity at ({upper}, {tau}) is wrong"
                    )));
                }
                for i in 0..=upper {
                    let a = &self.face_actions[n][tau][i];
                    let lower = self
                        .index
                        .base
                        .action(&MonotoneMap::face(upper, i)?, SimplexRef::new(upper, tau));
                    if a.source != self.values[upper][tau] || a.target != self.values[n][lower.index]
                    {
                        return Err(DiagramError::ActionEndpoints {
                            kind: "face",
                            op: i,
                            dim: upper,
                            idx: tau,
                        });
                    }
                }
            }
            if self.degen_actions[n].len() != self.index.base.count(n) {
                return Err(DiagramError::Functoriality(format!(
                    "degeneracy action count at dimension {n} disagrees with the base"
                )));
            }
            for tau in 0..self.index.base.count(n) {
                if self.degen_actions[n][tau].len() != n + 1 {
                    return Err(DiagramError::Functoriality(format!(
                        "degeneracy action arity at ({n}, {tau}) is wrong"
                    )));
                }
                for j in 0..=n {
                    let a = &self.degen_actions[n][tau][j];
                    let upper_simplex = self
                        .index
                        .base
                        .action(&MonotoneMap::degeneracy(n, j)?, SimplexRef::new(n, tau));
                    if a.source != self.values[n][tau]
                        || a.target != self.values[n + 1][upper_simplex.index]
                    {
                        return Err(DiagramError::ActionEndpoints {
                            kind: "degeneracy",
                            op: j,
                            dim: n,
                            idx: tau,
                        });
                    }
                }
            }
        }
        // functoriality: F(q . p) = F(p) . F(q) over all composable pairs
        let objects = self.index.objects();
        for &(a_dim, a_idx) in &objects {
            for &(b_dim, b_idx) in &objects {
                for p in self.index.morphisms_between((a_dim, a_idx), (b_dim, b_idx)) {
                    let fp = self.action_of(&p, (b_dim, b_idx))?;
                    for &(c_dim, c_idx) in &objects {
                        for q in self.index.morphisms_between((b_dim, b_idx), (c_dim, c_idx)) {
                            let fq = self.action_of(&q, (c_dim, c_idx))?;
                            let qp = MonotoneMap::compose(&q, &p)?;
                            let fqp = self.action_of(&qp, (c_dim, c_idx))?;
                            let composite = SimplicialMap::compose(&fp, &fq)?;
                            if fqp.levels != composite.levels {
                                return Err(DiagramError::Functoriality(format!(
                                    "actions disagree on a composite into ({c_dim}, {c_idx})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A map of diagrams over the same index: one component per object,
/// natural with respect to every generating morphism.
#[derive(Debug, Clone)]
pub struct DiagramMap {
    pub components: Vec<Vec<SimplicialMap>>,
}

impl DiagramMap {
    pub fn identity(of: &SSetDiagram) -> DiagramMap {
        DiagramMap {
            components: of
                .values
                .iter()
                .map(|level| level.iter().map(SimplicialMap::identity).collect())
                .collect(),
        }
    }

    pub fn component(&self, n: usize, idx: usize) -> &SimplicialMap {
        &self.components[n][idx]
    }

    pub fn validate(&self, src: &SSetDiagram, tgt: &SSetDiagram) -> Result<(), DiagramError> {
        let d = src.index.dim;
        if self.components.len() != d + 1 {
            return Err(DiagramError::Functoriality("component table length is wrong".into()));
        }
        for n in 0..=d {
            if self.components[n].len() != src.index.base.count(n) {
                return Err(DiagramError::Functoriality(format!(
                    "component count at dimension {n} disagrees with the base"
                )));
            }
            for idx in 0..self.components[n].len() {
                let c = &self.components[n][idx];
                if c.source != src.values[n][idx] || c.target != tgt.values[n][idx] {
                    return Err(DiagramError::ComponentEndpoints { dim: n, idx });
                }
            }
        }
        for n in 0..d {
            let upper = n + 1;
            for tau in 0..src.index.base.count(upper) {
                for i in 0..=upper {
                    let lower = src
                        .index
                        .base
                        .action(&MonotoneMap::face(upper, i)?, SimplexRef::new(upper, tau));
                    let lhs = SimplicialMap::compose(
                        &self.components[n][lower.index],
                        src.act_face(upper, tau, i),
                    )?;
                    let rhs = SimplicialMap::compose(
                        tgt.act_face(upper, tau, i),
                        &self.components[upper][tau],
                    )?;
                    if lhs.levels != rhs.levels {
                        return Err(DiagramError::Naturality {
                            dim: upper,
                            idx: tau,
                            kind: "face",
                            op: i,
                        });
                    }
                }
            }
            for tau in 0..src.index.base.count(n) {
                for j in 0..=n {
                    let upper_simplex = src
                        .index
                        .base
                        .action(&MonotoneMap::degeneracy(n, j)?, SimplexRef::new(n, tau));
                    let lhs = SimplicialMap::compose(
                        &self.components[n + 1][upper_simplex.index],
                        src.act_degen(n, tau, j),
                    )?;
                    let rhs = SimplicialMap::compose(
                        tgt.act_degen(n, tau, j),
                        &self.components[n][tau],
                    )?;
                    if lhs.levels != rhs.levels {
                        return Err(DiagramError::Naturality {
                            dim: n,
                            idx: tau,
                            kind: "degeneracy",
                            op: j,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The diagram with a fixed value everywhere and identity actions.
pub fn constant_diagram(
    index: &SimplexCategory,
    value: &TruncatedSimplicialSet,
) -> SSetDiagram {
    let d = index.dim;
    let values: Vec<Vec<TruncatedSimplicialSet>> =
        (0..=d).map(|n| vec![value.clone(); index.base.count(n)]).collect();
    let face_actions: Vec<Vec<Vec<SimplicialMap>>> = (0..d)
        .map(|n| {
            (0..index.base.count(n + 1))
                .map(|_| vec![SimplicialMap::identity(value); n + 2])
                .collect()
        })
        .collect();
    let degen_actions: Vec<Vec<Vec<SimplicialMap>>> = (0..d)
        .map(|n| {
            (0..index.base.count(n))
                .map(|_| vec![SimplicialMap::identity(value); n + 1])
                .collect()
        })
        .collect();
    SSetDiagram {
        index: index.clone(),
        values,
        face_actions,
        degen_actions,
        cache: RefCell::new(HashMap::new()),
    }
}

/// The mapping diagram together with the hom-complex machinery (one hom
/// complex per dimension; the value at `(n, sigma)` depends only on `n`).
pub struct MappingDiagram {
    pub diagram: SSetDiagram,
    pub homs: Vec<HomComplex>,
    pub target: MarkedSimplicialSet,
}

/// Builds `(n, sigma) |-> Map^#((Delta^n)^b, C^nat)` over the simplices of
/// `k`, with actions given by precomposition. The value truncation must
/// equal the truncation of `c` so that mapping values can later be paired
/// with standard simplices in lifting problems; `d` is the index depth.
pub fn mapping_functor(
    k: &TruncatedSimplicialSet,
    c: &TruncatedSimplicialSet,
    d: usize,
    e: usize,
    budget: u64,
) -> Result<MappingDiagram, DiagramError> {
    if e != c.dim_bound() {
        return Err(DiagramError::ValueTruncation {
            dim: 0,
            idx: 0,
            got: e,
            want: c.dim_bound(),
        });
    }
    if d > e {
        return Err(DiagramError::DimTooLarge { d, bound: e });
    }
    let index = build_simplex_category(k, d)?;
    let natural = marked::natural(c, budget)?;
    let mut homs = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let base = marked::flat(&standard_simplex(n, e));
        homs.push(marked::hom_sharp(&base, &natural, e, budget)?);
    }
    let values: Vec<Vec<TruncatedSimplicialSet>> =
        (0..=d).map(|n| vec![homs[n].complex.clone(); k.count(n)]).collect();
    let mut face_actions: Vec<Vec<Vec<SimplicialMap>>> = Vec::with_capacity(d);
    let mut degen_actions: Vec<Vec<Vec<SimplicialMap>>> = Vec::with_capacity(d);
    for n in 0..d {
        let upper = n + 1;
        let mut per_i = Vec::with_capacity(upper + 1);
        for i in 0..=upper {
            let incl = standard_map(&MonotoneMap::face(upper, i)?, e);
            let a = MarkedMap::new(homs[n].base.clone(), homs[upper].base.clone(), incl)?;
            per_i.push(marked::hom_restriction(&homs[upper], &homs[n], &a)?);
        }
        face_actions.push(vec![per_i.clone(); k.count(upper)]);
        let mut per_j = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let surj = standard_map(&MonotoneMap::degeneracy(n, j)?, e);
            let a = MarkedMap::new(homs[upper].base.clone(), homs[n].base.clone(), surj)?;
            per_j.push(marked::hom_restriction(&homs[n], &homs[upper], &a)?);
        }
        degen_actions.push(vec![per_j.clone(); k.count(n)]);
    }
    let diagram = SSetDiagram {
        index,
        values,
        face_actions,
        degen_actions,
        cache: RefCell::new(HashMap::new()),
    };
    Ok(MappingDiagram { diagram, homs, target: natural })
}

/// Restriction of a diagram along a map of bases: `(i^*F)(n, sigma') =
/// F(n, i(sigma'))`, with the transported generator actions.
pub fn pullback_diagram(
    i: &SimplicialMap,
    f: &SSetDiagram,
) -> Result<SSetDiagram, DiagramError> {
    if i.target != f.index.base {
        return Err(DiagramError::Functoriality(
            "restriction map does not land in the diagram base".into(),
        ));
    }
    let index = build_simplex_category(&i.source, f.index.dim)?;
    let d = index.dim;
    let values: Vec<Vec<TruncatedSimplicialSet>> = (0..=d)
        .map(|n| {
            (0..i.source.count(n)).map(|s| f.values[n][i.levels[n][s]].clone()).collect()
        })
        .collect();
    let face_actions: Vec<Vec<Vec<SimplicialMap>>> = (0..d)
        .map(|n| {
            (0..i.source.count(n + 1))
                .map(|tau| f.face_actions[n][i.levels[n + 1][tau]].clone())
                .collect()
        })
        .collect();
    let degen_actions: Vec<Vec<Vec<SimplicialMap>>> = (0..d)
        .map(|n| {
            (0..i.source.count(n))
                .map(|tau| f.degen_actions[n][i.levels[n][tau]].clone())
                .collect()
        })
        .collect();
    Ok(SSetDiagram {
        index,
        values,
        face_actions,
        degen_actions,
        cache: RefCell::new(HashMap::new()),
    })
}

/// Restriction of a diagram map along a map of bases.
pub fn pullback_diagram_map(i: &SimplicialMap, psi: &DiagramMap) -> DiagramMap {
    DiagramMap {
        components: (0..i.levels.len())
            .map(|n| {
                (0..i.source.count(n))
                    .map(|s| psi.components[n][i.levels[n][s]].clone())
                    .collect()
            })
            .collect(),
    }
}

/// Dimension-wise limit of a diagram: an `m`-simplex is a choice of an
/// `m`-simplex in every value, compatible with every action; faces and
/// degeneracies act componentwise. Families are stored per level in the
/// order they were found, objects linearized by (dimension, index).
pub struct GlobalSections {
    pub complex: TruncatedSimplicialSet,
    pub families: Vec<Vec<Vec<usize>>>,
    pub index: Vec<HashMap<Vec<usize>, usize>>,
    pub offsets: Vec<usize>,
}

impl GlobalSections {
    /// Linear position of object `(n, idx)` inside a family vector.
    pub fn slot(&self, n: usize, idx: usize) -> usize {
        self.offsets[n] + idx
    }
}

/// Checks one family (linearized by `offsets`) at level `m` against every
/// generator action of the diagram.
fn family_compatible(
    f: &SSetDiagram,
    offsets: &[usize],
    family: &[usize],
    m: usize,
) -> Result<(), DiagramError> {
    let d = f.index.dim;
    for n in 0..d {
        let upper = n + 1;
        for tau in 0..f.index.base.count(upper) {
            for i in 0..=upper {
                let lower = f
                    .index
                    .base
                    .action(&MonotoneMap::face(upper, i)?, SimplexRef::new(upper, tau));
                let act = f.act_face(upper, tau, i);
                if act.levels[m][family[offsets[upper] + tau]]
                    != family[offsets[n] + lower.index]
                {
                    return Err(DiagramError::IncompatibleFamily { dim: n, idx: lower.index });
                }
            }
        }
        for tau in 0..f.index.base.count(n) {
            for j in 0..=n {
                let upper_simplex = f
                    .index
                    .base
                    .action(&MonotoneMap::degeneracy(n, j)?, SimplexRef::new(n, tau));
                let act = f.act_degen(n, tau, j);
                if act.levels[m][family[offsets[n] + tau]]
                    != family[offsets[upper] + upper_simplex.index]
                {
                    return Err(DiagramError::IncompatibleFamily {
                        dim: upper,
                        idx: upper_simplex.index,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn global_sections(f: &SSetDiagram) -> Result<GlobalSections, DiagramError> {
    let d = f.index.dim;
    let e = f.value_dim();
    let mut offsets = vec![0usize; d + 2];
    for n in 0..=d {
        offsets[n + 1] = offsets[n] + f.index.base.count(n);
    }
    let total = offsets[d + 1];

    // for each degenerate base simplex pick one way to force its entry
    // from the lower-dimensional witness; remaining constraints checked after
    let mut forced: Vec<Vec<Option<(usize, usize)>>> = (0..=d)
        .map(|n| vec![None; f.index.base.count(n)])
        .collect();
    for n in 0..d {
        for tau in 0..f.index.base.count(n) {
            for j in 0..=n {
                let up = f
                    .index
                    .base
                    .action(&MonotoneMap::degeneracy(n, j)?, SimplexRef::new(n, tau));
                if forced[n + 1][up.index].is_none() {
                    forced[n + 1][up.index] = Some((tau, j));
                }
            }
        }
    }

    let mut families: Vec<Vec<Vec<usize>>> = Vec::with_capacity(e + 1);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(e + 1);
    for m in 0..=e {
        let mut level: Vec<Vec<usize>> = Vec::new();
        let mut family = vec![usize::MAX; total];
        // DFS over objects in linear order
        fn rec(
            f: &SSetDiagram,
            offsets: &[usize],
            forced: &[Vec<Option<(usize, usize)>>],
            m: usize,
            pos: usize,
            total: usize,
            family: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<(), DiagramError> {
            if pos == total {
                out.push(family.clone());
                return Ok(());
            }
            let n = offsets.iter().take_while(|&&o| o <= pos).count() - 1;
            let idx = pos - offsets[n];
            let candidates: Vec<usize> = match forced[n][idx] {
                Some((tau, j)) => {
                    let act = f.act_degen(n - 1, tau, j);
                    vec![act.levels[m][family[offsets[n - 1] + tau]]]
                }
                None => (0..f.values[n][idx].count(m)).collect(),
            };
            'cand: for v in candidates {
                // check face constraints against already-assigned entries
                if n > 0 {
                    for i in 0..=n {
                        let lower = f
                            .index
                            .base
                            .action(&MonotoneMap::face(n, i)?, SimplexRef::new(n, idx));
                        let act = f.act_face(n, idx, i);
                        if act.levels[m][v] != family[offsets[n - 1] + lower.index] {
                            continue 'cand;
                        }
                    }
                    // degeneracy constraints from all witnesses, not just
                    // the chosen forcing
                    for tau in 0..f.index.base.count(n - 1) {
                        for j in 0..n {
                            let up = f.index.base.action(
                                &MonotoneMap::degeneracy(n - 1, j)?,
                                SimplexRef::new(n - 1, tau),
                            );
                            if up.index == idx {
                                let act = f.act_degen(n - 1, tau, j);
                                if act.levels[m][family[offsets[n - 1] + tau]] != v {
                                    continue 'cand;
                                }
                            }
                        }
                    }
                }
                family[pos] = v;
                rec(f, offsets, forced, m, pos + 1, total, family, out)?;
                family[pos] = usize::MAX;
            }
            Ok(())
        }
        rec(f, &offsets, &forced, m, 0, total, &mut family, &mut level)?;
        index.push(level.iter().enumerate().map(|(i, fam)| (fam.clone(), i)).collect());
        families.push(level);
    }

    // faces and degeneracies act componentwise; results are compatible
    // families, so lookups must succeed
    let counts: Vec<usize> = families.iter().map(|l| l.len()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    let mut degens: Vec<Vec<Vec<usize>>> = Vec::new();
    let objects = f.index.objects();
    for m in 1..=e {
        let mut per_i = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut row = Vec::with_capacity(families[m].len());
            for fam in &families[m] {
                let mapped: Vec<usize> = objects
                    .iter()
                    .enumerate()
                    .map(|(slot, &(n, idx))| f.values[n][idx].face(m, i, fam[slot]))
                    .collect();
                let hit = index[m - 1]
                    .get(&mapped)
                    .copied()
                    .ok_or(DiagramError::IncompatibleFamily { dim: m, idx: i })?;
                row.push(hit);
            }
            per_i.push(row);
        }
        faces.push(per_i);
    }
    for m in 0..e {
        let mut per_j = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut row = Vec::with_capacity(families[m].len());
            for fam in &families[m] {
                let mapped: Vec<usize> = objects
                    .iter()
                    .enumerate()
                    .map(|(slot, &(n, idx))| f.values[n][idx].degen(m, j, fam[slot]))
                    .collect();
                let hit = index[m + 1]
                    .get(&mapped)
                    .copied()
                    .ok_or(DiagramError::IncompatibleFamily { dim: m, idx: j })?;
                row.push(hit);
            }
            per_j.push(row);
        }
        degens.push(per_j);
    }
    degens.push(Vec::new());
    let complex = TruncatedSimplicialSet::new(e, counts, faces, degens)?;
    Ok(GlobalSections { complex, families, index, offsets })
}

/// The map on global sections induced by a diagram map: apply the
/// component at every object and look the image family up.
pub fn gamma_map(
    psi: &DiagramMap,
    src: &GlobalSections,
    tgt: &GlobalSections,
) -> Result<SimplicialMap, DiagramError> {
    let e = src.families.len() - 1;
    let mut levels = Vec::with_capacity(e + 1);
    for m in 0..=e {
        let mut row = Vec::with_capacity(src.families[m].len());
        for fam in &src.families[m] {
            let mut mapped = Vec::with_capacity(fam.len());
            for (n, comps) in psi.components.iter().enumerate() {
                for idx in 0..comps.len() {
                    mapped.push(comps[idx].levels[m][fam[src.offsets[n] + idx]]);
                }
            }
            let hit = tgt.index[m]
                .get(&mapped)
                .copied()
                .ok_or(DiagramError::IncompatibleFamily { dim: m, idx: row.len() })?;
            row.push(hit);
        }
        levels.push(row);
    }
    Ok(SimplicialMap::new(src.complex.clone(), tgt.complex.clone(), levels)?)
}

/// Restriction of global sections along a base map: forget the entries at
/// objects outside the image.
pub fn restrict_sections(
    i: &SimplicialMap,
    src: &GlobalSections,
    tgt: &GlobalSections,
) -> Result<SimplicialMap, DiagramError> {
    let e = src.families.len() - 1;
    let mut levels = Vec::with_capacity(e + 1);
    for m in 0..=e {
        let mut row = Vec::with_capacity(src.families[m].len());
        for fam in &src.families[m] {
            let mut mapped = Vec::new();
            for n in 0..tgt.offsets.len() - 1 {
                for s in 0..(tgt.offsets[n + 1] - tgt.offsets[n]) {
                    mapped.push(fam[src.offsets[n] + i.levels[n][s]]);
                }
            }
            let hit = tgt.index[m]
                .get(&mapped)
                .copied()
                .ok_or(DiagramError::IncompatibleFamily { dim: m, idx: row.len() })?;
            row.push(hit);
        }
        levels.push(row);
    }
    Ok(SimplicialMap::new(src.complex.clone(), tgt.complex.clone(), levels)?)
}

/// Index of the apex vertex of a cone complex (the last level-0 simplex).
pub fn cone_apex(x: &TruncatedSimplicialSet) -> usize {
    x.count(0)
}

fn cone_counts(x: &TruncatedSimplicialSet, m: usize) -> usize {
    // old simplices, one cone block per lower dimension, one apex simplex
    x.count(m) + (0..m).map(|k| x.count(k)).sum::<usize>() + 1
}

fn cone_offset(x: &TruncatedSimplicialSet, m: usize, k: usize) -> usize {
    x.count(m) + (0..k).map(|t| x.count(t)).sum::<usize>()
}

fn cone_apex_at(x: &TruncatedSimplicialSet, m: usize) -> usize {
    cone_counts(x, m) - 1
}

/// The right cone `X * point`, truncated at the bound of `X`.
///
/// Level `m` is laid out as: the `m`-simplices of `X` (the "old" block),
/// then for each `k < m` a block of joins of a `k`-simplex with the apex,
/// then the (degenerate) apex simplex.
pub fn cone_complex(x: &TruncatedSimplicialSet) -> TruncatedSimplicialSet {
    let d = x.dim_bound();
    let counts: Vec<usize> = (0..=d).map(|m| cone_counts(x, m)).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for m in 1..=d {
        let mut per_i = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let mut row = Vec::with_capacity(counts[m]);
            for z in 0..x.count(m) {
                row.push(x.face(m, i, z));
            }
            for k in 0..m {
                for z in 0..x.count(k) {
                    let img = if i <= k {
                        if k == 0 {
                            cone_apex_at(x, m - 1)
                        } else {
                            cone_offset(x, m - 1, k - 1) + x.face(k, i, z)
                        }
                    } else if k == m - 1 {
                        z
                    } else {
                        cone_offset(x, m - 1, k) + z
                    };
                    row.push(img);
                }
            }
            row.push(cone_apex_at(x, m - 1));
            per_i.push(row);
        }
        faces.push(per_i);
    }
    let mut degens: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..d {
        let mut per_j = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut row = Vec::with_capacity(counts[m]);
            for z in 0..x.count(m) {
                row.push(x.degen(m, j, z));
            }
            for k in 0..m {
                for z in 0..x.count(k) {
                    let img = if j <= k {
                        cone_offset(x, m + 1, k + 1) + x.degen(k, j, z)
                    } else {
                        cone_offset(x, m + 1, k) + z
                    };
                    row.push(img);
                }
            }
            row.push(cone_apex_at(x, m + 1));
            per_j.push(row);
        }
        degens.push(per_j);
    }
    degens.push(Vec::new());
    TruncatedSimplicialSet::new(d, counts, faces, degens)
        .expect("the join of a complex with a point satisfies the identities")
}

/// The inclusion of `X` into its cone as the old block.
pub fn cone_inclusion(x: &TruncatedSimplicialSet) -> SimplicialMap {
    let cone = cone_complex(x);
    let levels: Vec<Vec<usize>> = (0..=x.dim_bound()).map(|m| (0..x.count(m)).collect()).collect();
    SimplicialMap::new(x.clone(), cone, levels).expect("the old block is a subcomplex")
}

/// Functoriality of the cone: apply `f` blockwise, fixing the apex.
pub fn cone_map(f: &SimplicialMap) -> SimplicialMap {
    let src = cone_complex(&f.source);
    let tgt = cone_complex(&f.target);
    let d = f.source.dim_bound();
    let mut levels = Vec::with_capacity(d + 1);
    for m in 0..=d {
        let mut row = Vec::with_capacity(src.count(m));
        for z in 0..f.source.count(m) {
            row.push(f.levels[m][z]);
        }
        for k in 0..m {
            for z in 0..f.source.count(k) {
                row.push(cone_offset(&f.target, m, k) + f.levels[k][z]);
            }
        }
        row.push(cone_apex_at(&f.target, m));
        levels.push(row);
    }
    SimplicialMap::new(src, tgt, levels).expect("cones are functorial")
}

/// Objectwise right cone of a diagram together with the inclusion.
pub fn cone_diagram(n: &SSetDiagram) -> (SSetDiagram, DiagramMap) {
    let values: Vec<Vec<TruncatedSimplicialSet>> = n
        .values
        .iter()
        .map(|level| level.iter().map(cone_complex).collect())
        .collect();
    let face_actions: Vec<Vec<Vec<SimplicialMap>>> = n
        .face_actions
        .iter()
        .map(|level| {
            level.iter().map(|per_tau| per_tau.iter().map(cone_map).collect()).collect()
        })
        .collect();
    let degen_actions: Vec<Vec<Vec<SimplicialMap>>> = n
        .degen_actions
        .iter()
        .map(|level| {
            level.iter().map(|per_tau| per_tau.iter().map(cone_map).collect()).collect()
        })
        .collect();
    let cone = SSetDiagram {
        index: n.index.clone(),
        values,
        face_actions,
        degen_actions,
        cache: RefCell::new(HashMap::new()),
    };
    let eta = DiagramMap {
        components: n
            .values
            .iter()
            .map(|level| level.iter().map(cone_inclusion).collect())
            .collect(),
    };
    (cone, eta)
}

/// Why the inclusion at one object extends: either an explicit chain of
/// horn gluings, or the cone over a certified weakly contractible value.
pub enum AnodyneEvidence {
    Chain(AnodyneChain),
    ConePoint { certificate: ContractibilityCertificate },
}

/// Builds cone-point evidence for every object of a diagram, refusing on
/// the first value without a contractibility certificate.
pub fn cone_anodyne_evidence(
    n: &SSetDiagram,
    search_budget: u64,
    tietze_budget: u64,
) -> Result<Vec<Vec<AnodyneEvidence>>, DiagramError> {
    let mut out = Vec::with_capacity(n.values.len());
    for (dim, level) in n.values.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for (idx, v) in level.iter().enumerate() {
            let cert = homotopy::contractibility(v, search_budget, tietze_budget);
            if let ContractibilityCertificate::Unknown { obstruction } = &cert {
                return Err(DiagramError::NotContractible {
                    dim,
                    idx,
                    why: obstruction.clone(),
                });
            }
            row.push(AnodyneEvidence::ConePoint { certificate: cert });
        }
        out.push(row);
    }
    Ok(out)
}

/// The uncurried data kept per object while lifting: the solved map on the
/// product `M(n, sigma) x Delta^n` and the product bookkeeping.
struct SolvedObject {
    h: SimplicialMap,
    product: MarkedProduct,
}

fn prescribe(
    fixed: &mut [Vec<Option<usize>>],
    level: usize,
    idx: usize,
    value: usize,
    dim: usize,
    obj: usize,
) -> Result<(), DiagramError> {
    match fixed[level][idx] {
        Some(v) if v != value => Err(DiagramError::ForcedConflict { dim, idx: obj }),
        _ => {
            fixed[level][idx] = Some(value);
            Ok(())
        }
    }
}

/// Lifts `alpha: N -> Map[K, C]` along an objectwise-mono `eta: N -> M`
/// whose extension is justified by per-object anodyne evidence. Works by
/// induction on the index dimension: at each object the value of the lift
/// is prescribed on the image of `N`, on the degenerate part of `M` (forced
/// by naturality along degeneracy actions), and over the boundary of the
/// standard simplex (forced by naturality along face actions); a marked
/// search against `C^nat` fills in the rest. The result is re-validated in
/// full: naturality plus `beta . eta = alpha`.
pub fn injective_lift(
    alpha: &DiagramMap,
    n_diag: &SSetDiagram,
    m_diag: &SSetDiagram,
    eta: &DiagramMap,
    evidence: &[Vec<AnodyneEvidence>],
    mapping: &MappingDiagram,
    budget: u64,
) -> Result<DiagramMap, DiagramError> {
    alpha.validate(n_diag, &mapping.diagram)?;
    eta.validate(n_diag, m_diag)?;
    let d = n_diag.index.dim;
    let e = mapping.target.space.dim_bound();
    if m_diag.value_dim() != e || n_diag.value_dim() != e {
        return Err(DiagramError::ValueTruncation {
            dim: 0,
            idx: 0,
            got: n_diag.value_dim(),
            want: e,
        });
    }
    for n in 0..=d {
        for idx in 0..n_diag.index.base.count(n) {
            if !eta.components[n][idx].is_mono() {
                return Err(DiagramError::ComponentEndpoints { dim: n, idx });
            }
            match evidence
                .get(n)
                .and_then(|row| row.get(idx))
                .ok_or(DiagramError::BadEvidence { dim: n, idx })?
            {
                AnodyneEvidence::ConePoint { certificate } => {
                    if !certificate.is_certified() {
                        return Err(DiagramError::BadEvidence { dim: n, idx });
                    }
                }
                AnodyneEvidence::Chain(chain) => {
                    if !lifting::verify_anodyne_chain(chain)
                        || chain.start != eta.components[n][idx].source
                        || chain.end.counts() != m_diag.values[n][idx].counts()
                    {
                        return Err(DiagramError::BadEvidence { dim: n, idx });
                    }
                }
            }
        }
    }

    let mut solved: Vec<Vec<SolvedObject>> = Vec::with_capacity(d + 1);
    let mut components: Vec<Vec<SimplicialMap>> = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let simplex = standard_simplex(k, e);
        let mut solved_row = Vec::new();
        let mut comp_row = Vec::new();
        for sigma in 0..n_diag.index.base.count(k) {
            let m_value = &m_diag.values[k][sigma];
            let product =
                marked::marked_product(&marked::sharp(m_value), &marked::flat(&simplex));
            let mut fixed: Vec<Vec<Option<usize>>> =
                product.marked.space.counts().iter().map(|&c| vec![None; c]).collect();

            // the image of N carries the uncurried alpha
            let eta_c = &eta.components[k][sigma];
            let alpha_c = &alpha.components[k][sigma];
            for r in 0..=e {
                for y in 0..n_diag.values[k][sigma].count(r) {
                    let x = eta_c.levels[r][y];
                    let hom_simplex = mapping.homs[k].map_at(r, alpha_c.levels[r][y]);
                    let hom_pairing = &mapping.homs[k].product_at(r).pairing;
                    let iota = standard_index(r, &MonotoneMap::identity(r));
                    for (w, _) in MonotoneMap::enumerate(r, k).iter().enumerate() {
                        let value = hom_simplex.levels[r][hom_pairing.pair(r, iota, w)];
                        let slot = product.pairing.pair(r, x, w);
                        prescribe(&mut fixed, r, slot, value, k, sigma)?;
                    }
                }
            }

            // the degenerate part of M is forced by naturality along the
            // degeneracy actions out of this object
            if k > 0 {
                for tau in 0..n_diag.index.base.count(k - 1) {
                    for j in 0..k {
                        let up = n_diag.index.base.action(
                            &MonotoneMap::degeneracy(k - 1, j)?,
                            SimplexRef::new(k - 1, tau),
                        );
                        if up.index != sigma {
                            continue;
                        }
                        let act = m_diag.act_degen(k - 1, tau, j);
                        let prev: &SolvedObject = &solved[k - 1][tau];
                        let s_map = MonotoneMap::degeneracy(k - 1, j)?;
                        for r in 0..=e {
                            for y in 0..m_diag.values[k - 1][tau].count(r) {
                                let x = act.levels[r][y];
                                for (wi, w) in MonotoneMap::enumerate(r, k).iter().enumerate() {
                                    let w_low = MonotoneMap::compose(&s_map, w)?;
                                    let w_low_idx = standard_index(k - 1, &w_low);
                                    let value = prev.h.levels[r]
                                        [prev.product.pairing.pair(r, y, w_low_idx)];
                                    let slot = product.pairing.pair(r, x, wi);
                                    prescribe(&mut fixed, r, slot, value, k, sigma)?;
                                }
                            }
                        }
                    }
                }

                // over the boundary the lift is forced by naturality along
                // the face actions
                for i in 0..=k {
                    let low = n_diag
                        .index
                        .base
                        .action(&MonotoneMap::face(k, i)?, SimplexRef::new(k, sigma));
                    let act = m_diag.act_face(k, sigma, i);
                    let prev: &SolvedObject = &solved[k - 1][low.index];
                    for r in 0..=e {
                        for x in 0..m_value.count(r) {
                            let x_low = act.levels[r][x];
                            for (wi, w) in MonotoneMap::enumerate(r, k).iter().enumerate() {
                                let least_skip = match w.skipped_values().first() {
                                    Some(&s) => s,
                                    None => continue,
                                };
                                if least_skip != i {
                                    continue;
                                }
                                let vals: Vec<usize> = w
                                    .values()
                                    .iter()
                                    .map(|&v| if v > i { v - 1 } else { v })
                                    .collect();
                                let w_low = MonotoneMap::new(r, k - 1, vals)?;
                                let w_low_idx = standard_index(k - 1, &w_low);
                                let value = prev.h.levels[r]
                                    [prev.product.pairing.pair(r, x_low, w_low_idx)];
                                let slot = product.pairing.pair(r, x, wi);
                                prescribe(&mut fixed, r, slot, value, k, sigma)?;
                            }
                        }
                    }
                }
            }

            let spec = SearchSpec {
                source: &product.marked.space,
                target: &mapping.target.space,
                fixed,
                over: None,
                edge_masks: Some((&product.marked.marked, &mapping.target.marked)),
            };
            let h = match lifting::find_map(&spec, budget)? {
                SearchOutcome::Found(h) => h,
                SearchOutcome::NotFound => {
                    return Err(DiagramError::Exhausted { dim: k, idx: sigma })
                }
                SearchOutcome::Budget => {
                    return Err(DiagramError::Lift(lifting::LiftError::Budget(budget)))
                }
            };

            // curry back: each simplex of M names a simplex of the mapping
            // value, recovered through the hom index
            let mut levels: Vec<Vec<usize>> = Vec::with_capacity(e + 1);
            for r in 0..=e {
                let mut row = Vec::with_capacity(m_value.count(r));
                for x in 0..m_value.count(r) {
                    let mut tables: Vec<Vec<usize>> = Vec::with_capacity(e + 1);
                    for t in 0..=e {
                        let pairing = &mapping.homs[k].product_at(r).pairing;
                        let slots = mapping.homs[k].product_at(r).marked.space.count(t);
                        let mut table = vec![0usize; slots];
                        for (ui, u) in MonotoneMap::enumerate(t, r).iter().enumerate() {
                            let xu = m_value.action(u, SimplexRef::new(r, x)).index;
                            for vi in 0..MonotoneMap::enumerate(t, k).len() {
                                table[pairing.pair(t, ui, vi)] =
                                    h.levels[t][product.pairing.pair(t, xu, vi)];
                            }
                        }
                        tables.push(table);
                    }
                    let idx = mapping.homs[k]
                        .index_of_levels(r, &tables)
                        .ok_or(DiagramError::CurriedMissing { dim: k, idx: sigma })?;
                    row.push(idx);
                }
                levels.push(row);
            }
            let beta_c =
                SimplicialMap::new(m_value.clone(), mapping.homs[k].complex.clone(), levels)?;
            comp_row.push(beta_c);
            solved_row.push(SolvedObject { h, product });
        }
        solved.push(solved_row);
        components.push(comp_row);
    }

    let beta = DiagramMap { components };
    beta.validate(m_diag, &mapping.diagram)?;
    for n in 0..=d {
        for idx in 0..n_diag.index.base.count(n) {
            let via = SimplicialMap::compose(&beta.components[n][idx], &eta.components[n][idx])?;
            if via.levels != alpha.components[n][idx].levels {
                return Err(DiagramError::Naturality { dim: n, idx, kind: "section", op: 0 });
            }
        }
    }
    Ok(beta)
}

/// The map of underlying complexes classified by a vertex of a hom complex.
pub fn hom_vertex_map(hom: &HomComplex, v: usize) -> SimplicialMap {
    let base = &hom.base.space;
    let target = &hom.target.space;
    let g = hom.map_at(0, v);
    let pairing = &hom.product_at(0).pairing;
    let levels: Vec<Vec<usize>> = (0..=base.dim_bound())
        .map(|r| (0..base.count(r)).map(|x| g.levels[r][pairing.pair(r, 0, x)]).collect())
        .collect();
    SimplicialMap::new(base.clone(), target.clone(), levels)
        .expect("a hom vertex restricts to a map on the base")
}

fn section_offsets(index: &SimplexCategory) -> Vec<usize> {
    let mut offsets = vec![0usize; index.dim + 2];
    for n in 0..=index.dim {
        offsets[n + 1] = offsets[n] + index.base.count(n);
    }
    offsets
}

/// Canonical comparison from the global sections of a mapping diagram to
/// the mapping complex of the whole base: a compatible family of maps out
/// of the standard simplices assembles, by evaluation at the identity, to
/// a single marked map out of the base.
pub fn sections_of_mapping(
    mapping: &MappingDiagram,
    sections: &GlobalSections,
    hom_k: &HomComplex,
) -> Result<SimplicialMap, DiagramError> {
    let base = &mapping.diagram.index.base;
    let e = sections.complex.dim_bound();
    if hom_k.base.space.counts() != base.counts()
        || hom_k.out_dim != e
        || mapping.diagram.index.dim != base.dim_bound()
    {
        return Err(DiagramError::BadInput(
            "the mapping complex is not over the diagram base at the sections truncation".into(),
        ));
    }
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(e + 1);
    for l in 0..=e {
        let mut row = Vec::with_capacity(sections.complex.count(l));
        for t in 0..sections.complex.count(l) {
            let family = &sections.families[l][t];
            let mut tables: Vec<Vec<usize>> = Vec::with_capacity(e + 1);
            for r in 0..=e {
                let slots = hom_k.product_at(l).marked.space.count(r);
                let iota = standard_index(r, &MonotoneMap::identity(r));
                let mut table = vec![0usize; slots];
                for ui in 0..MonotoneMap::enumerate(r, l).len() {
                    for x in 0..base.count(r) {
                        let member = family[sections.offsets[r] + x];
                        let g = mapping.homs[r].map_at(l, member);
                        let gp = &mapping.homs[r].product_at(l).pairing;
                        table[hom_k.product_at(l).pairing.pair(r, ui, x)] =
                            g.levels[r][gp.pair(r, ui, iota)];
                    }
                }
                tables.push(table);
            }
            let idx = hom_k
                .index_of_levels(l, &tables)
                .ok_or(DiagramError::SectionMismatch { dim: l, idx: t })?;
            row.push(idx);
        }
        levels.push(row);
    }
    Ok(SimplicialMap::new(sections.complex.clone(), hom_k.complex.clone(), levels)?)
}

/// The functor out of a finite linear order classified by a nerve simplex.
fn functor_from_chain(
    cat: &FiniteCategory,
    nrv: &Nerve,
    x: SimplexRef,
) -> Result<Functor, DiagramError> {
    let n = x.dim;
    let shape = FiniteCategory::chain(n);
    let chain = nrv.chain(x);
    let obj_map: Vec<usize> = (0..=n).map(|v| nrv.vertex(x, v)).collect();
    let mut mor_map = vec![0usize; shape.morphisms()];
    for a in 0..=n {
        for b in a..=n {
            let mor = if a == b {
                cat.identity(obj_map[a])
            } else {
                let mut m = chain[a];
                for t in a + 1..b {
                    m = cat.compose(chain[t], m)?;
                }
                m
            };
            mor_map[shape.hom(a, b)[0]] = mor;
        }
    }
    Ok(Functor { obj_map, mor_map })
}

/// Cross-check of an extension against the strict limit formula available
/// when the target is the nerve of a category: at each base simplex the
/// weight's vertices pick out functors, its edges pick out natural
/// isomorphisms between them, and the extension must agree with the
/// terminal cone over that diagram up to natural isomorphism.
fn nerve_limit_check(
    n_diag: &SSetDiagram,
    alpha: &DiagramMap,
    mapping: &MappingDiagram,
    f: &SimplicialMap,
    cat: &FiniteCategory,
    nrv: &Nerve,
    budget: u64,
) -> Result<(), DiagramError> {
    let iota1 = standard_index(1, &MonotoneMap::identity(1));
    for n in 0..=n_diag.index.dim {
        let shape = FiniteCategory::chain(n);
        let iota_n = standard_index(n, &MonotoneMap::identity(n));
        let candidates = cat::all_functors(&shape, cat, budget)?;
        for sigma in 0..n_diag.index.base.count(n) {
            let value = &n_diag.values[n][sigma];
            let mut vertex_functors = Vec::with_capacity(value.count(0));
            for x in 0..value.count(0) {
                let v = alpha.components[n][sigma].levels[0][x];
                let e = hom_vertex_map(&mapping.homs[n], v);
                let simplex = e.levels[n][iota_n];
                vertex_functors.push(functor_from_chain(cat, nrv, SimplexRef::new(n, simplex))?);
            }
            let mut edges: Vec<(usize, usize, Vec<usize>)> = Vec::new();
            if value.dim_bound() >= 1 {
                for ed in 0..value.count(1) {
                    if value.is_degenerate(SimplexRef::new(1, ed)) {
                        continue;
                    }
                    let src = value.face(1, 1, ed);
                    let tgt = value.face(1, 0, ed);
                    let h = mapping.homs[n].map_at(1, alpha.components[n][sigma].levels[1][ed]);
                    let hp = &mapping.homs[n].product_at(1).pairing;
                    let mut comps = Vec::with_capacity(n + 1);
                    for vtx in 0..=n {
                        let cv = MonotoneMap::new(1, n, vec![vtx, vtx])?;
                        let edge_c = h.levels[1][hp.pair(1, iota1, standard_index(n, &cv))];
                        let mor = nrv.chain(SimplexRef::new(1, edge_c))[0];
                        if !cat.is_iso(mor) {
                            return Err(DiagramError::LimitMismatch {
                                dim: n,
                                idx: sigma,
                                why: "an edge component is not invertible".into(),
                            });
                        }
                        comps.push(mor);
                    }
                    for t in 0..n {
                        let gen = shape.hom(t, t + 1)[0];
                        let lhs = cat.compose(vertex_functors[tgt].mor_map[gen], comps[t])?;
                        let rhs = cat.compose(comps[t + 1], vertex_functors[src].mor_map[gen])?;
                        if lhs != rhs {
                            return Err(DiagramError::LimitMismatch {
                                dim: n,
                                idx: sigma,
                                why: "edge components are not natural".into(),
                            });
                        }
                    }
                    edges.push((src, tgt, comps));
                }
            }

            // enumerate every cone over the vertex-and-edge diagram
            let mut cones: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
            for (ai, apex) in candidates.iter().enumerate() {
                let legs: Vec<Vec<Vec<usize>>> = vertex_functors
                    .iter()
                    .map(|g| cat::natural_transformations(&shape, cat, apex, g))
                    .collect();
                if legs.iter().any(|l| l.is_empty()) {
                    continue;
                }
                let mut choice = vec![0usize; legs.len()];
                'odometer: loop {
                    let ok = edges.iter().all(|(s, t, comps)| {
                        (0..=n).all(|v| {
                            cat.compose(comps[v], legs[*s][choice[*s]][v])
                                .map(|m| m == legs[*t][choice[*t]][v])
                                .unwrap_or(false)
                        })
                    });
                    if ok {
                        let gammas: Vec<Vec<usize>> =
                            (0..legs.len()).map(|x| legs[x][choice[x]].clone()).collect();
                        cones.push((ai, gammas));
                    }
                    for pos in 0..legs.len() {
                        choice[pos] += 1;
                        if choice[pos] < legs[pos].len() {
                            continue 'odometer;
                        }
                        choice[pos] = 0;
                        if pos == legs.len() - 1 {
                            break 'odometer;
                        }
                    }
                    if legs.is_empty() {
                        break;
                    }
                }
            }

            // find a terminal cone: every cone factors through it uniquely
            let mut terminal: Option<&(usize, Vec<Vec<usize>>)> = None;
            'search: for t in &cones {
                for c in &cones {
                    let mut count = 0usize;
                    for u in
                        cat::natural_transformations(&shape, cat, &candidates[c.0], &candidates[t.0])
                    {
                        let factors = (0..vertex_functors.len()).all(|x| {
                            (0..=n).all(|v| {
                                cat.compose(t.1[x][v], u[v])
                                    .map(|m| m == c.1[x][v])
                                    .unwrap_or(false)
                            })
                        });
                        if factors {
                            count += 1;
                        }
                    }
                    if count != 1 {
                        continue 'search;
                    }
                }
                terminal = Some(t);
                break;
            }
            let Some(term) = terminal else {
                return Err(DiagramError::LimitMismatch {
                    dim: n,
                    idx: sigma,
                    why: "no terminal cone over the weight".into(),
                });
            };

            let f_functor = functor_from_chain(cat, nrv, SimplexRef::new(n, f.levels[n][sigma]))?;
            if cat::natural_isos(&shape, cat, &f_functor, &candidates[term.0]).is_empty() {
                return Err(DiagramError::LimitMismatch {
                    dim: n,
                    idx: sigma,
                    why: "the extension is not isomorphic to the strict limit".into(),
                });
            }
        }
    }
    Ok(())
}

/// The output of an extension: the extended map, the lifted diagram map it
/// was read off from, and an edge path in the restricted mapping complex
/// connecting the prescribed map with the restriction of the extension.
pub struct ExtensionResult {
    pub f: SimplicialMap,
    pub beta: DiagramMap,
    pub witness: Vec<(usize, bool)>,
}

/// Extends a map prescribed on a subcomplex along a weight diagram of
/// contractible values: lifts the classifying diagram map through the
/// objectwise cone, evaluates the lift at the cone points to obtain the
/// extension, verifies the prescription exactly on the subcomplex, and
/// produces a connectivity witness between the prescription and the
/// restricted extension. When the target is presented as the nerve of a
/// category, additionally cross-checks the extension against the strict
/// limit formula.
#[allow(clippy::too_many_arguments)]
pub fn extend_functor(
    i: &SimplicialMap,
    f_prime: &SimplicialMap,
    n_diag: &SSetDiagram,
    alpha: &DiagramMap,
    omega: &[usize],
    mapping: &MappingDiagram,
    nerve_target: Option<(&FiniteCategory, &Nerve)>,
    search_budget: u64,
    cert_budgets: (u64, u64),
) -> Result<ExtensionResult, DiagramError> {
    let base = &mapping.diagram.index.base;
    let c_space = &mapping.target.space;
    if n_diag.index.base.counts() != base.counts()
        || n_diag.index.dim != mapping.diagram.index.dim
    {
        return Err(DiagramError::BadInput(
            "the weight diagram is not over the mapping base".into(),
        ));
    }
    if n_diag.index.dim != base.dim_bound() {
        return Err(DiagramError::BadInput(
            "the index truncation must match the base bound for extension".into(),
        ));
    }
    if i.target.counts() != base.counts() {
        return Err(DiagramError::BadInput(
            "the inclusion does not land in the mapping base".into(),
        ));
    }
    if f_prime.source.counts() != i.source.counts()
        || f_prime.target.counts() != c_space.counts()
    {
        return Err(DiagramError::BadInput(
            "the prescribed map endpoints do not match".into(),
        ));
    }
    alpha.validate(n_diag, &mapping.diagram)?;

    // omega must be a vertex-level section of the restricted weight
    let pulled = pullback_diagram(i, n_diag)?;
    let offs = section_offsets(&pulled.index);
    if omega.len() != *offs.last().unwrap() {
        return Err(DiagramError::BadInput(format!(
            "expected one vertex per restricted object ({}), got {}",
            offs.last().unwrap(),
            omega.len()
        )));
    }
    for n in 0..=pulled.index.dim {
        for s in 0..pulled.index.base.count(n) {
            if omega[offs[n] + s] >= pulled.values[n][s].count(0) {
                return Err(DiagramError::BadInput(format!(
                    "section entry at ({n}, {s}) is out of range"
                )));
            }
        }
    }
    family_compatible(&pulled, &offs, omega, 0)?;

    // the section must restrict to the prescribed map, exactly
    for n in 0..=pulled.index.dim {
        for s in 0..pulled.index.base.count(n) {
            let v = alpha.components[n][i.levels[n][s]].levels[0][omega[offs[n] + s]];
            let e = hom_vertex_map(&mapping.homs[n], v);
            for r in 0..=c_space.dim_bound() {
                for (wi, w) in MonotoneMap::enumerate(r, n).iter().enumerate() {
                    let in_sub = i.source.action(w, SimplexRef::new(n, s)).index;
                    if e.levels[r][wi] != f_prime.levels[r][in_sub] {
                        return Err(DiagramError::SectionMismatch { dim: n, idx: s });
                    }
                }
            }
        }
    }

    // every weight value must carry a contractibility certificate
    let evidence = cone_anodyne_evidence(n_diag, cert_budgets.0, cert_budgets.1)?;
    let (m_diag, eta) = cone_diagram(n_diag);
    let beta = injective_lift(alpha, n_diag, &m_diag, &eta, &evidence, mapping, search_budget)?;

    // evaluate the lifted sections at the cone points
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(n_diag.index.dim + 1);
    for n in 0..=n_diag.index.dim {
        let iota = standard_index(n, &MonotoneMap::identity(n));
        let mut row = Vec::with_capacity(base.count(n));
        for sigma in 0..base.count(n) {
            let apex = cone_apex(&n_diag.values[n][sigma]);
            let v = beta.components[n][sigma].levels[0][apex];
            let e = hom_vertex_map(&mapping.homs[n], v);
            row.push(e.levels[n][iota]);
        }
        levels.push(row);
    }
    let f = SimplicialMap::new(base.clone(), c_space.clone(), levels)?;

    // connectivity witness in the restricted mapping complex
    let out_dim = 1.min(c_space.dim_bound());
    let hom_sub = marked::hom_sharp(&marked::flat(&i.source), &mapping.target, out_dim, search_budget)?;
    let fi = SimplicialMap::compose(&f, i)?;
    let mut t1: Vec<Vec<usize>> = Vec::new();
    let mut t2: Vec<Vec<usize>> = Vec::new();
    for r in 0..=c_space.dim_bound() {
        let slots = hom_sub.product_at(0).marked.space.count(r);
        let mut a = vec![0usize; slots];
        let mut b = vec![0usize; slots];
        for x in 0..i.source.count(r) {
            let p = hom_sub.product_at(0).pairing.pair(r, 0, x);
            a[p] = f_prime.levels[r][x];
            b[p] = fi.levels[r][x];
        }
        t1.push(a);
        t2.push(b);
    }
    let v1 = hom_sub
        .index_of_levels(0, &t1)
        .ok_or_else(|| DiagramError::BadInput("prescribed map is not a mapping vertex".into()))?;
    let v2 = hom_sub
        .index_of_levels(0, &t2)
        .ok_or_else(|| DiagramError::BadInput("restricted extension is not a mapping vertex".into()))?;
    let witness =
        homotopy::edge_path(&hom_sub.complex, v1, v2).ok_or(DiagramError::Disconnected)?;
    if !homotopy::pi0_connected(&hom_sub.complex, v1, v2) {
        return Err(DiagramError::Disconnected);
    }

    if let Some((cat_t, nrv)) = nerve_target {
        if nrv.complex.counts() != c_space.counts() {
            return Err(DiagramError::BadInput(
                "the nerve does not present the extension target".into(),
            ));
        }
        nerve_limit_check(n_diag, alpha, mapping, &f, cat_t, nrv, search_budget)?;
    }

    Ok(ExtensionResult { f, beta, witness })
}

/// The point-valued weight over the mapping base together with the diagram
/// map classifying a single map out of the base: at each object the point
/// is sent to the vertex of the mapping value given by restricting the map
/// along the simplex.
pub fn constant_weight_classifier(
    mapping: &MappingDiagram,
    g: &SimplicialMap,
) -> Result<(SSetDiagram, DiagramMap), DiagramError> {
    let base = &mapping.diagram.index.base;
    let e = mapping.target.space.dim_bound();
    if g.source.counts() != base.counts() || g.target.counts() != mapping.target.space.counts() {
        return Err(DiagramError::BadInput(
            "the classified map does not run from the base to the target".into(),
        ));
    }
    let point = standard_simplex(0, e);
    let n_diag = constant_diagram(&mapping.diagram.index, &point);
    let mut components = Vec::with_capacity(mapping.diagram.index.dim + 1);
    for n in 0..=mapping.diagram.index.dim {
        let mut row = Vec::with_capacity(base.count(n));
        for sigma in 0..base.count(n) {
            let mut tables: Vec<Vec<usize>> = Vec::with_capacity(e + 1);
            for r in 0..=e {
                let pairing = &mapping.homs[n].product_at(0).pairing;
                let mut table = vec![0usize; mapping.homs[n].product_at(0).marked.space.count(r)];
                for (wi, w) in MonotoneMap::enumerate(r, n).iter().enumerate() {
                    let in_base = base.action(w, SimplexRef::new(n, sigma)).index;
                    table[pairing.pair(r, 0, wi)] = g.levels[r][in_base];
                }
                tables.push(table);
            }
            let v = mapping.homs[n]
                .index_of_levels(0, &tables)
                .ok_or(DiagramError::SectionMismatch { dim: n, idx: sigma })?;
            let mut levels = Vec::with_capacity(e + 1);
            let mut tower = v;
            for m in 0..=e {
                levels.push(vec![tower]);
                if m < e {
                    tower = mapping.homs[n].complex.degen(m, 0, tower);
                }
            }
            row.push(SimplicialMap::new(
                point.clone(),
                mapping.homs[n].complex.clone(),
                levels,
            )?);
        }
        components.push(row);
    }
    let alpha = DiagramMap { components };
    alpha.validate(&n_diag, &mapping.diagram)?;
    Ok((n_diag, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::homology;
    use crate::sset::{boundary, find_isomorphism, nerve, pullback, Subcomplex};

    fn vertex_map(x: &TruncatedSimplicialSet, v: usize) -> SimplicialMap {
        let d = x.dim_bound();
        let pt = standard_simplex(0, d);
        let mut levels = Vec::with_capacity(d + 1);
        let mut cur = v;
        for m in 0..=d {
            levels.push(vec![cur]);
            if m < d {
                cur = x.degen(m, 0, cur);
            }
        }
        SimplicialMap::new(pt, x.clone(), levels).unwrap()
    }

    fn arrow_nerve() -> (FiniteCategory, Nerve) {
        let cat = FiniteCategory::chain(1);
        let nrv = nerve(&cat, 2);
        (cat, nrv)
    }

    /// The order-preserving identification of the standard edge with the
    /// nerve of the arrow category.
    fn edge_into_arrow(nrv: &Nerve) -> SimplicialMap {
        let cat = &nrv.cat;
        let k = standard_simplex(1, 2);
        let v = |o: usize| nrv.index_of(0, &[o]).unwrap().index;
        let e = |m: usize| nrv.index_of(1, &[m]).unwrap().index;
        let t = |a: usize, b: usize| nrv.index_of(2, &[a, b]).unwrap().index;
        let id0 = cat.identity(0);
        let id1 = cat.identity(1);
        let m01 = cat.hom(0, 1)[0];
        SimplicialMap::new(
            k,
            nrv.complex.clone(),
            vec![
                vec![v(0), v(1)],
                vec![e(id0), e(m01), e(id1)],
                vec![t(id0, id0), t(id0, m01), t(m01, id1), t(id1, id1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn simplex_category_counts_match_enumeration() {
        let point = build_simplex_category(&standard_simplex(0, 1), 1).unwrap();
        assert_eq!(point.objects().len(), 2);
        let mut morphisms = 0;
        for &(n, s) in point.objects().iter() {
            for &(m, t) in point.objects().iter() {
                morphisms += point.morphisms_between((n, s), (m, t)).len();
            }
        }
        assert_eq!(morphisms, 7);

        let edge = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        assert_eq!(edge.objects().len(), 5);
        for n in 0..=1 {
            assert_eq!(edge.object_count(n), edge.base.count(n));
        }
        let mut morphisms = 0;
        for &(n, s) in edge.objects().iter() {
            for &(m, t) in edge.objects().iter() {
                morphisms += edge.morphisms_between((n, s), (m, t)).len();
            }
        }
        assert_eq!(morphisms, 19);
    }

    #[test]
    fn diagram_functoriality_is_validated() {
        let (_, nrv) = arrow_nerve();
        let x = nerve(&FiniteCategory::chain(1), 1).complex;
        let index = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        let good = constant_diagram(&index, &x);
        assert!(good.validate().is_ok());

        // a composite around a degenerate edge detects a corrupted action
        let collapse = SimplicialMap::new(
            x.clone(),
            x.clone(),
            vec![vec![0; x.count(0)], vec![x.degen(0, 0, 0); x.count(1)]],
        )
        .unwrap();
        let mut faces = good.face_actions.clone();
        faces[0][0][0] = collapse;
        assert!(SSetDiagram::new(
            good.index.clone(),
            good.values.clone(),
            faces,
            good.degen_actions.clone(),
        )
        .is_err());

        // composite actions agree with the stored generators on identities
        let p = MonotoneMap::identity(1);
        let act = good.action_of(&p, (1, 1)).unwrap();
        assert!(act.is_iso());
        let _ = nrv;
    }

    #[test]
    fn mapping_values_are_function_complexes() {
        let budget = 10_000_000;
        let k_pt = standard_simplex(0, 2);

        let terminal = nerve(&FiniteCategory::chain(0), 2).complex;
        let m = mapping_functor(&k_pt, &terminal, 1, 2, budget).unwrap();
        for n in 0..=1 {
            for idx in 0..m.diagram.index.base.count(n) {
                assert_eq!(m.diagram.value(n, idx).counts(), &[1, 1, 1]);
            }
        }

        // for a poset target only identities are equivalences, so the
        // value at a vertex is the discrete set of objects
        let (_, nrv) = arrow_nerve();
        let m = mapping_functor(&k_pt, &nrv.complex, 1, 2, budget).unwrap();
        assert_eq!(m.diagram.value(0, 0).counts(), &[2, 2, 2]);
        // maps out of the edge correspond to order-preserving vertex pairs
        assert_eq!(m.diagram.value(1, 0).count(0), 3);
        assert!(m.diagram.act_degen(0, 0, 0).is_mono());

        // for a groupoid target the value at a vertex is the whole nerve
        let iso = nerve(&FiniteCategory::walking_iso(), 2).complex;
        let m = mapping_functor(&k_pt, &iso, 1, 2, budget).unwrap();
        assert_eq!(m.diagram.value(0, 0).counts(), &[2, 4, 8]);
        assert!(m.diagram.act_degen(0, 0, 0).is_mono());
    }

    #[test]
    fn sections_of_constant_diagram_recover_the_value() {
        let x = nerve(&FiniteCategory::chain(1), 1).complex;
        let index = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        let diagram = constant_diagram(&index, &x);
        let secs = global_sections(&diagram).unwrap();
        assert_eq!(secs.complex.counts(), x.counts());
        assert!(find_isomorphism(&secs.complex, &x, 1_000_000).unwrap().is_some());

        // over the empty base the limit is a point in every dimension
        let empty = TruncatedSimplicialSet::empty(1);
        let index = build_simplex_category(&empty, 1).unwrap();
        let secs = global_sections(&constant_diagram(&index, &x)).unwrap();
        assert_eq!(secs.complex.counts(), &[1, 1]);
    }

    #[test]
    fn sections_of_mapping_assemble_to_the_base_complex() {
        let budget = 10_000_000;
        let (_, nrv) = arrow_nerve();
        let k = standard_simplex(1, 2);
        let mapping = mapping_functor(&k, &nrv.complex, 2, 2, budget).unwrap();
        let secs = global_sections(&mapping.diagram).unwrap();
        let hom_k =
            marked::hom_sharp(&marked::flat(&k), &mapping.target, 2, budget).unwrap();
        let cmp = sections_of_mapping(&mapping, &secs, &hom_k).unwrap();
        assert!(cmp.is_iso());
        // a map out of the edge is an order-preserving pair of objects
        assert_eq!(secs.complex.count(0), 3);
    }

    #[test]
    fn cones_are_joins_with_a_point() {
        let pt = standard_simplex(0, 1);
        let cone_pt = cone_complex(&pt);
        assert_eq!(cone_pt.counts(), &[2, 3]);
        let interval = standard_simplex(1, 1);
        assert!(find_isomorphism(&cone_pt, &interval, 1_000_000).unwrap().is_some());

        let edge = standard_simplex(1, 2);
        let cone_edge = cone_complex(&edge);
        assert_eq!(cone_edge.counts(), &[3, 6, 10]);
        let triangle = standard_simplex(2, 2);
        assert!(find_isomorphism(&cone_edge, &triangle, 10_000_000).unwrap().is_some());

        let two_points = boundary(1, 1).complex;
        let cone_two = cone_complex(&two_points);
        assert_eq!(cone_two.counts(), &[3, 5]);
        assert_eq!(cone_two.nondegenerate_counts(), &[3, 2]);

        for x in [&pt, &edge, &two_points] {
            assert!(cone_inclusion(x).is_mono());
        }

        let index = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        let x = nerve(&FiniteCategory::chain(1), 2).complex;
        let (cone_diag, eta) = cone_diagram(&constant_diagram(&index, &x));
        assert!(cone_diag.validate().is_ok());
        assert!(eta
            .validate(&constant_diagram(&index, &x), &cone_diag)
            .is_ok());
    }

    #[test]
    fn lift_along_identity_returns_the_classifier() {
        let budget = 10_000_000;
        let (_, nrv) = arrow_nerve();
        let k_pt = standard_simplex(0, 2);
        let mapping = mapping_functor(&k_pt, &nrv.complex, 1, 2, budget).unwrap();
        let g = SimplicialMap::compose(
            &vertex_map(&nrv.complex, 0),
            &SimplicialMap::to_point(&k_pt),
        )
        .unwrap();
        let (n_diag, alpha) = constant_weight_classifier(&mapping, &g).unwrap();
        let eta = DiagramMap::identity(&n_diag);
        let evidence = cone_anodyne_evidence(&n_diag, 1_000_000, 1_000).unwrap();
        let beta =
            injective_lift(&alpha, &n_diag, &n_diag, &eta, &evidence, &mapping, budget).unwrap();
        for n in 0..=1 {
            assert_eq!(
                beta.components[n][0].levels,
                alpha.components[n][0].levels
            );
        }
    }

    #[test]
    fn lift_extends_through_the_cone_over_a_point() {
        let budget = 10_000_000;
        let iso = nerve(&FiniteCategory::walking_iso(), 2).complex;
        let k_pt = standard_simplex(0, 2);
        let mapping = mapping_functor(&k_pt, &iso, 1, 2, budget).unwrap();
        let g = SimplicialMap::compose(&vertex_map(&iso, 0), &SimplicialMap::to_point(&k_pt))
            .unwrap();
        let (n_diag, alpha) = constant_weight_classifier(&mapping, &g).unwrap();
        let (m_diag, eta) = cone_diagram(&n_diag);
        let evidence = cone_anodyne_evidence(&n_diag, 1_000_000, 1_000).unwrap();
        let beta =
            injective_lift(&alpha, &n_diag, &m_diag, &eta, &evidence, &mapping, budget).unwrap();
        assert!(beta.validate(&m_diag, &mapping.diagram).is_ok());
        // the lift restricts to the classifier along the cone inclusion
        for n in 0..=1 {
            let through =
                SimplicialMap::compose(&beta.components[n][0], &eta.components[n][0]).unwrap();
            assert_eq!(through.levels, alpha.components[n][0].levels);
        }
    }

    #[test]
    fn pullbacks_of_diagrams_restrict_objectwise() {
        let budget = 10_000_000;
        let (_, nrv) = arrow_nerve();
        let k_edge = standard_simplex(1, 2);
        let k_pt = standard_simplex(0, 2);
        let over_edge = mapping_functor(&k_edge, &nrv.complex, 2, 2, budget).unwrap();
        let over_pt = mapping_functor(&k_pt, &nrv.complex, 2, 2, budget).unwrap();

        // restricting along the identity changes nothing
        let id = standard_map(&MonotoneMap::identity(1), 2);
        let same = pullback_diagram(&id, &over_edge.diagram).unwrap();
        for n in 0..=2 {
            for idx in 0..k_edge.count(n) {
                assert_eq!(
                    same.value(n, idx).counts(),
                    over_edge.diagram.value(n, idx).counts()
                );
            }
        }

        // restricting the mapping diagram along a vertex gives the
        // mapping diagram of the vertex
        let at_zero = standard_map(&MonotoneMap::new(0, 1, vec![0]).unwrap(), 2);
        let pulled = pullback_diagram(&at_zero, &over_edge.diagram).unwrap();
        for n in 0..=2 {
            for idx in 0..k_pt.count(n) {
                assert_eq!(
                    pulled.value(n, idx).counts(),
                    over_pt.diagram.value(n, idx).counts()
                );
            }
        }
        assert_eq!(
            pulled.act_degen(0, 0, 0).levels,
            over_pt.diagram.act_degen(0, 0, 0).levels
        );

        // constants restrict to constants
        let index = build_simplex_category(&k_edge, 2).unwrap();
        let constant = constant_diagram(&index, &nrv.complex);
        let pulled = pullback_diagram(&at_zero, &constant).unwrap();
        for (n, level) in pulled.values.iter().enumerate() {
            for (idx, v) in level.iter().enumerate() {
                assert_eq!(v.counts(), constant.value(n, 0).counts(), "at ({n}, {idx})");
            }
        }
    }

    #[test]
    fn sections_commute_with_restriction() {
        let x = nerve(&FiniteCategory::chain(1), 1).complex;
        let index = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        let f = constant_diagram(&index, &x);
        let point = standard_simplex(0, 1);
        let g = constant_diagram(&index, &point);
        let psi = DiagramMap {
            components: f
                .values
                .iter()
                .map(|level| level.iter().map(SimplicialMap::to_point).collect())
                .collect(),
        };
        psi.validate(&f, &g).unwrap();

        let i = standard_map(&MonotoneMap::new(0, 1, vec![0]).unwrap(), 1);
        let fi = pullback_diagram(&i, &f).unwrap();
        let gi = pullback_diagram(&i, &g).unwrap();
        let psi_i = pullback_diagram_map(&i, &psi);

        let sf = global_sections(&f).unwrap();
        let sg = global_sections(&g).unwrap();
        let sfi = global_sections(&fi).unwrap();
        let sgi = global_sections(&gi).unwrap();

        let top = gamma_map(&psi, &sf, &sg).unwrap();
        let bottom = gamma_map(&psi_i, &sfi, &sgi).unwrap();
        let left = restrict_sections(&i, &sf, &sfi).unwrap();
        let right = restrict_sections(&i, &sg, &sgi).unwrap();

        let via_top = SimplicialMap::compose(&right, &top).unwrap();
        let via_bottom = SimplicialMap::compose(&bottom, &left).unwrap();
        assert_eq!(via_top.levels, via_bottom.levels);
    }

    #[test]
    fn extension_of_a_map_prescribed_everywhere() {
        let budget = 10_000_000;
        let (cat, nrv) = arrow_nerve();
        let k = standard_simplex(1, 2);
        let mapping = mapping_functor(&k, &nrv.complex, 2, 2, budget).unwrap();
        let g = edge_into_arrow(&nrv);
        let (n_diag, alpha) = constant_weight_classifier(&mapping, &g).unwrap();
        let i = standard_map(&MonotoneMap::identity(1), 2);
        let omega = vec![0usize; 9];
        let out = extend_functor(
            &i,
            &g,
            &n_diag,
            &alpha,
            &omega,
            &mapping,
            Some((&cat, &nrv)),
            budget,
            (1_000_000, 1_000),
        )
        .unwrap();
        assert_eq!(out.f.levels, g.levels);
        assert!(out.witness.is_empty());
    }

    #[test]
    fn extension_from_a_vertex_prescription() {
        let budget = 10_000_000;
        let (cat, nrv) = arrow_nerve();
        let k = standard_simplex(1, 2);
        let mapping = mapping_functor(&k, &nrv.complex, 2, 2, budget).unwrap();
        let g = edge_into_arrow(&nrv);
        let (n_diag, alpha) = constant_weight_classifier(&mapping, &g).unwrap();
        let i = standard_map(&MonotoneMap::new(0, 1, vec![0]).unwrap(), 2);
        let f_prime = SimplicialMap::compose(&g, &i).unwrap();
        let omega = vec![0usize; 3];
        let out = extend_functor(
            &i,
            &f_prime,
            &n_diag,
            &alpha,
            &omega,
            &mapping,
            Some((&cat, &nrv)),
            budget,
            (1_000_000, 1_000),
        )
        .unwrap();
        assert_eq!(out.f.levels, g.levels);
        assert!(out.witness.is_empty());
    }

    fn check_degeneracy_union(
        n_diag: &SSetDiagram,
        m_diag: &SSetDiagram,
        eta: &DiagramMap,
        k: usize,
        sigma: usize,
        picks: &[(usize, usize)],
    ) {
        let nv = &n_diag.values[k][sigma];
        let mv = &m_diag.values[k][sigma];
        let mut sub_n = Subcomplex::empty(nv);
        let mut sub_m = Subcomplex::empty(mv);
        for &(j, tau) in picks {
            let up = n_diag
                .index
                .base
                .action(&MonotoneMap::degeneracy(k - 1, j).unwrap(), SimplexRef::new(k - 1, tau));
            assert_eq!(up.index, sigma, "pick does not degenerate into the object");
            let act_n = n_diag.act_degen(k - 1, tau, j);
            let act_m = m_diag.act_degen(k - 1, tau, j);
            let mut seeds_n = Vec::new();
            let mut seeds_m = Vec::new();
            for m in 0..=nv.dim_bound() {
                for y in 0..n_diag.values[k - 1][tau].count(m) {
                    seeds_n.push(SimplexRef::new(m, act_n.levels[m][y]));
                }
                for y in 0..m_diag.values[k - 1][tau].count(m) {
                    seeds_m.push(SimplexRef::new(m, act_m.levels[m][y]));
                }
            }
            sub_n = sub_n.union(&Subcomplex::generated(nv, &seeds_n));
            sub_m = sub_m.union(&Subcomplex::generated(mv, &seeds_m));
        }
        let ex_n = sub_n.extract(nv).unwrap();
        let ex_m = sub_m.extract(mv).unwrap();
        let comp = &eta.components[k][sigma];
        let mut levels = Vec::new();
        for m in 0..=nv.dim_bound() {
            let mut row = Vec::new();
            for z in 0..ex_n.complex.count(m) {
                let ambient = ex_n.back[m][z];
                let image = comp.levels[m][ambient];
                row.push(ex_m.fwd[m][image].expect("the union embeds in the union"));
            }
            levels.push(row);
        }
        let induced =
            SimplicialMap::new(ex_n.complex.clone(), ex_m.complex.clone(), levels).unwrap();
        assert!(induced.is_mono());
        for deg in 0..ex_n.complex.dim_bound() {
            assert_eq!(
                homology(&ex_n.complex, deg).unwrap(),
                homology(&ex_m.complex, deg).unwrap(),
                "homology differs in degree {deg}"
            );
        }
    }

    #[test]
    fn degeneracy_images_embed_with_matching_homology() {
        // constant weight: every pair of degeneracies into a doubly
        // degenerate base simplex
        let x = nerve(&FiniteCategory::chain(1), 2).complex;
        let index = build_simplex_category(&standard_simplex(1, 2), 2).unwrap();
        let n_diag = constant_diagram(&index, &x);
        let (m_diag, eta) = cone_diagram(&n_diag);
        for (sigma, tau) in [(0usize, 0usize), (3, 2)] {
            check_degeneracy_union(&n_diag, &m_diag, &eta, 2, sigma, &[(0, tau)]);
            check_degeneracy_union(&n_diag, &m_diag, &eta, 2, sigma, &[(0, tau), (1, tau)]);
        }

        // a weight whose degeneracy action is a proper inclusion
        let pt = standard_simplex(0, 2);
        let edge = standard_simplex(1, 2);
        let index = build_simplex_category(&standard_simplex(1, 1), 1).unwrap();
        let values = vec![
            vec![pt.clone(), pt.clone()],
            vec![edge.clone(), pt.clone(), pt.clone()],
        ];
        let id_pt = SimplicialMap::identity(&pt);
        let face_actions = vec![vec![
            vec![SimplicialMap::to_point(&edge), SimplicialMap::to_point(&edge)],
            vec![id_pt.clone(), id_pt.clone()],
            vec![id_pt.clone(), id_pt.clone()],
        ]];
        let degen_actions =
            vec![vec![vec![vertex_map(&edge, 0)], vec![id_pt.clone()]]];
        let n_diag = SSetDiagram::new(index, values, face_actions, degen_actions).unwrap();
        let (m_diag, eta) = cone_diagram(&n_diag);
        check_degeneracy_union(&n_diag, &m_diag, &eta, 1, 0, &[(0, 0)]);
        check_degeneracy_union(&n_diag, &m_diag, &eta, 1, 2, &[(0, 1)]);
    }

    #[test]
    fn split_epi_actions_form_pullback_squares() {
        let budget = 10_000_000;
        let (_, nrv) = arrow_nerve();
        let k = standard_simplex(1, 2);
        let mapping = mapping_functor(&k, &nrv.complex, 2, 2, budget).unwrap();
        let f = &mapping.diagram;
        // triply degenerate base simplices receive two distinct
        // degeneracy morphisms whose square of actions must be a pullback
        for (vertex, sigma) in [(0usize, 0usize), (1, 3)] {
            let rho = f
                .index
                .base
                .action(&MonotoneMap::degeneracy(0, 0).unwrap(), SimplexRef::new(0, vertex))
                .index;
            let leg = f.act_degen(0, vertex, 0);
            let top = f.act_degen(1, rho, 0);
            let side = f.act_degen(1, rho, 1);
            assert_eq!(top.target.counts(), f.value(2, sigma).counts());
            let pb = pullback(top, side).unwrap();
            let mut levels = Vec::new();
            for m in 0..=2 {
                let mut row = Vec::new();
                for z in 0..f.value(0, vertex).count(m) {
                    let a = leg.levels[m][z];
                    let b = leg.levels[m][z];
                    let pos = pb.pairs[m]
                        .iter()
                        .position(|&p| p == (a, b))
                        .expect("the comparison lands in the pullback");
                    row.push(pos);
                }
                levels.push(row);
            }
            let u = SimplicialMap::new(
                f.value(0, vertex).clone(),
                pb.complex.clone(),
                levels,
            )
            .unwrap();
            assert!(u.is_iso());
        }
    }
}
