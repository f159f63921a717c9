//! Marked simplicial sets: complexes with a distinguished edge set
//! containing the degenerate edges, minimal/full/equivalence markings,
//! marked products and pushouts, mapping complexes computed by exhaustive
//! constrained enumeration, pushout-products, and the marked anodyne
//! generator classes.

use std::collections::HashMap;

use thiserror::Error;

use crate::delta::MonotoneMap;
use crate::homotopy::{self, HomotopyError};
use crate::lifting::{self, all_maps, LiftError, SearchSpec, Verdict};
use crate::sset::{
    horn, product, product_map, pushout, pushout_induced, standard_index, standard_map,
    standard_simplex, ProductComplex, SimplexRef, SimplicialMap, SsetError,
    TruncatedSimplicialSet,
};

#[derive(Debug, Error)]
pub enum MarkedError {
    #[error("marking mask has wrong length {got}, expected {want}")]
    MaskLength { got: usize, want: usize },
    #[error("degenerate edge {0} is unmarked")]
    DegenerateEdgeUnmarked(usize),
    #[error("edge {0} is marked but its image is not")]
    MarkingNotPreserved(usize),
    #[error("the complexes do not share a truncation dimension")]
    DimMismatch,
    #[error("output dimension {out} exceeds the inner truncation {inner}")]
    OutDimTooLarge { out: usize, inner: usize },
    #[error("not verified to be a quasi-category (verdict {0:?})")]
    NotQuasiCategory(Verdict),
    #[error("supplied complex failed the Kan check (verdict {0:?})")]
    NotKan(Verdict),
    #[error("a monomorphism is required")]
    NotMono,
    #[error("hom complexes are not comparable: {0}")]
    HomMismatch(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

/// A truncated simplicial set with a marked edge set that contains every
/// degenerate edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSimplicialSet {
    pub space: TruncatedSimplicialSet,
    pub marked: Vec<bool>,
}

impl MarkedSimplicialSet {
    pub fn new(space: TruncatedSimplicialSet, marked: Vec<bool>) -> Result<Self, MarkedError> {
        let m = MarkedSimplicialSet { space, marked };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), MarkedError> {
        let edges = if self.space.dim_bound() >= 1 { self.space.count(1) } else { 0 };
        if self.marked.len() != edges {
            return Err(MarkedError::MaskLength { got: self.marked.len(), want: edges });
        }
        for e in 0..edges {
            if self.space.is_degenerate(SimplexRef::new(1, e)) && !self.marked[e] {
                return Err(MarkedError::DegenerateEdgeUnmarked(e));
            }
        }
        Ok(())
    }

    pub fn nondegenerate_marked(&self) -> Vec<usize> {
        (0..self.marked.len())
            .filter(|&e| self.marked[e] && !self.space.is_degenerate(SimplexRef::new(1, e)))
            .collect()
    }
}

/// Minimal marking: degenerate edges only.
pub fn flat(space: &TruncatedSimplicialSet) -> MarkedSimplicialSet {
    let edges = if space.dim_bound() >= 1 { space.count(1) } else { 0 };
    let marked =
        (0..edges).map(|e| space.is_degenerate(SimplexRef::new(1, e))).collect();
    MarkedSimplicialSet { space: space.clone(), marked }
}

/// Full marking: every edge.
pub fn sharp(space: &TruncatedSimplicialSet) -> MarkedSimplicialSet {
    let edges = if space.dim_bound() >= 1 { space.count(1) } else { 0 };
    MarkedSimplicialSet { space: space.clone(), marked: vec![true; edges] }
}

/// Equivalence marking of a verified quasi-category: edges invertible in
/// the homotopy category.
pub fn natural(
    space: &TruncatedSimplicialSet,
    budget: u64,
) -> Result<MarkedSimplicialSet, MarkedError> {
    match lifting::is_quasi_category(space, budget)? {
        Verdict::Yes => {}
        v => return Err(MarkedError::NotQuasiCategory(v)),
    }
    let marked = homotopy::equivalence_edges(space, budget)?;
    Ok(MarkedSimplicialSet { space: space.clone(), marked })
}

/// A map of marked simplicial sets: marked edges land on marked edges.
#[derive(Debug, Clone)]
pub struct MarkedMap {
    pub source: MarkedSimplicialSet,
    pub target: MarkedSimplicialSet,
    pub map: SimplicialMap,
}

impl MarkedMap {
    pub fn new(
        source: MarkedSimplicialSet,
        target: MarkedSimplicialSet,
        map: SimplicialMap,
    ) -> Result<Self, MarkedError> {
        let m = MarkedMap { source, target, map };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), MarkedError> {
        self.source.validate()?;
        self.target.validate()?;
        if self.map.source != self.source.space || self.map.target != self.target.space {
            return Err(MarkedError::HomMismatch("map endpoints differ from the marked spaces".into()));
        }
        self.map.validate()?;
        for (e, &m) in self.source.marked.iter().enumerate() {
            if m && !self.target.marked[self.map.levels[1][e]] {
                return Err(MarkedError::MarkingNotPreserved(e));
            }
        }
        Ok(())
    }

    pub fn identity(x: &MarkedSimplicialSet) -> Self {
        MarkedMap {
            source: x.clone(),
            target: x.clone(),
            map: SimplicialMap::identity(&x.space),
        }
    }

    pub fn compose(g: &MarkedMap, f: &MarkedMap) -> Result<MarkedMap, MarkedError> {
        let map = SimplicialMap::compose(&g.map, &f.map)?;
        MarkedMap::new(f.source.clone(), g.target.clone(), map)
    }
}

/// Product of marked sets: an edge is marked when both coordinates are.
pub struct MarkedProduct {
    pub marked: MarkedSimplicialSet,
    pub pairing: ProductComplex,
}

pub fn marked_product(x: &MarkedSimplicialSet, y: &MarkedSimplicialSet) -> MarkedProduct {
    let pairing = product(&x.space, &y.space);
    let edges =
        if pairing.complex.dim_bound() >= 1 { pairing.complex.count(1) } else { 0 };
    let marked: Vec<bool> = (0..edges)
        .map(|idx| {
            let (a, b) = pairing.unpair(1, idx);
            x.marked[a] && y.marked[b]
        })
        .collect();
    MarkedProduct {
        marked: MarkedSimplicialSet { space: pairing.complex.clone(), marked },
        pairing,
    }
}

/// Product of marked maps.
pub fn marked_product_map(
    f: &MarkedMap,
    g: &MarkedMap,
    src: &MarkedProduct,
    tgt: &MarkedProduct,
) -> Result<MarkedMap, MarkedError> {
    let map = product_map(&f.map, &g.map, &src.pairing, &tgt.pairing);
    MarkedMap::new(src.marked.clone(), tgt.marked.clone(), map)
}

/// Pushout of marked maps: markings are the images of the leg markings.
pub struct MarkedPushout {
    pub marked: MarkedSimplicialSet,
    pub from_x: MarkedMap,
    pub from_y: MarkedMap,
}

pub fn marked_pushout(f: &MarkedMap, g: &MarkedMap) -> Result<MarkedPushout, MarkedError> {
    let po = pushout(&f.map, &g.map)?;
    let edges = if po.complex.dim_bound() >= 1 { po.complex.count(1) } else { 0 };
    let mut marked = vec![false; edges];
    for (e, &m) in f.target.marked.iter().enumerate() {
        if m {
            marked[po.from_x.levels[1][e]] = true;
        }
    }
    for (e, &m) in g.target.marked.iter().enumerate() {
        if m {
            marked[po.from_y.levels[1][e]] = true;
        }
    }
    // degenerate edges of the quotient are images of degenerate edges, so
    // the mask is already closed over them
    let quotient = MarkedSimplicialSet::new(po.complex.clone(), marked)?;
    let from_x = MarkedMap::new(f.target.clone(), quotient.clone(), po.from_x)?;
    let from_y = MarkedMap::new(g.target.clone(), quotient.clone(), po.from_y)?;
    Ok(MarkedPushout { marked: quotient, from_x, from_y })
}

/// A mapping complex: its `n`-simplices are the marked maps
/// `(standard n-simplex, flat or sharp) x base -> target`, enumerated
/// exhaustively; faces and degeneracies act by precomposition.
pub struct HomComplex {
    pub complex: TruncatedSimplicialSet,
    pub base: MarkedSimplicialSet,
    pub target: MarkedSimplicialSet,
    pub sharp: bool,
    pub out_dim: usize,
    maps: Vec<Vec<SimplicialMap>>,
    products: Vec<MarkedProduct>,
    index: Vec<HashMap<Vec<Vec<usize>>, usize>>,
}

impl HomComplex {
    pub fn map_at(&self, n: usize, idx: usize) -> &SimplicialMap {
        &self.maps[n][idx]
    }

    pub fn product_at(&self, n: usize) -> &MarkedProduct {
        &self.products[n]
    }

    pub fn index_of_levels(&self, n: usize, levels: &Vec<Vec<usize>>) -> Option<usize> {
        self.index[n].get(levels).copied()
    }
}

fn simplex_marking(dim_complex: &TruncatedSimplicialSet, use_sharp: bool) -> MarkedSimplicialSet {
    if use_sharp {
        sharp(dim_complex)
    } else {
        flat(dim_complex)
    }
}

/// Builds a mapping complex. `use_sharp` selects the marking on the
/// standard-simplex factor; `out_dim` must not exceed the truncation the
/// inputs live at.
pub fn hom_complex(
    base: &MarkedSimplicialSet,
    target: &MarkedSimplicialSet,
    use_sharp: bool,
    out_dim: usize,
    budget: u64,
) -> Result<HomComplex, MarkedError> {
    let inner = base.space.dim_bound();
    if target.space.dim_bound() != inner {
        return Err(MarkedError::DimMismatch);
    }
    if out_dim > inner {
        return Err(MarkedError::OutDimTooLarge { out: out_dim, inner });
    }
    let mut products = Vec::with_capacity(out_dim + 1);
    let mut maps: Vec<Vec<SimplicialMap>> = Vec::with_capacity(out_dim + 1);
    let mut index: Vec<HashMap<Vec<Vec<usize>>, usize>> = Vec::with_capacity(out_dim + 1);
    for n in 0..=out_dim {
        let simplex = standard_simplex(n, inner);
        let factor = simplex_marking(&simplex, use_sharp);
        let prod = marked_product(&factor, base);
        let spec = SearchSpec {
            source: &prod.marked.space,
            target: &target.space,
            fixed: prod.marked.space.counts().iter().map(|&c| vec![None; c]).collect(),
            over: None,
            edge_masks: Some((&prod.marked.marked, &target.marked)),
        };
        let found = all_maps(&spec, budget)?;
        index.push(found.iter().enumerate().map(|(i, m)| (m.levels.clone(), i)).collect());
        maps.push(found);
        products.push(prod);
    }
    let counts: Vec<usize> = maps.iter().map(|l| l.len()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); out_dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); out_dim + 1];
    for n in 1..=out_dim {
        faces[n] = (0..=n)
            .map(|i| {
                let d = MonotoneMap::face(n, i).expect("face generator");
                let incl = standard_map(&d, inner);
                let idx = product_map(
                    &incl,
                    &SimplicialMap::identity(&base.space),
                    &products[n - 1].pairing,
                    &products[n].pairing,
                );
                maps[n]
                    .iter()
                    .map(|m| {
                        let comp = SimplicialMap::compose(m, &idx).expect("composable");
                        index[n - 1][&comp.levels]
                    })
                    .collect()
            })
            .collect();
    }
    for n in 0..out_dim {
        degens[n] = (0..=n)
            .map(|j| {
                let s = MonotoneMap::degeneracy(n, j).expect("degeneracy generator");
                let surj = standard_map(&s, inner);
                let idx = product_map(
                    &surj,
                    &SimplicialMap::identity(&base.space),
                    &products[n + 1].pairing,
                    &products[n].pairing,
                );
                maps[n]
                    .iter()
                    .map(|m| {
                        let comp = SimplicialMap::compose(m, &idx).expect("composable");
                        index[n + 1][&comp.levels]
                    })
                    .collect()
            })
            .collect();
    }
    let complex = TruncatedSimplicialSet::new(out_dim, counts, faces, degens)?;
    Ok(HomComplex {
        complex,
        base: base.clone(),
        target: target.clone(),
        sharp: use_sharp,
        out_dim,
        maps,
        products,
        index,
    })
}

/// Mapping complex with the flat marking on the simplex factor.
pub fn hom_flat(
    base: &MarkedSimplicialSet,
    target: &MarkedSimplicialSet,
    out_dim: usize,
    budget: u64,
) -> Result<HomComplex, MarkedError> {
    hom_complex(base, target, false, out_dim, budget)
}

/// Mapping complex with the full marking on the simplex factor; a
/// subcomplex of the flat variant.
pub fn hom_sharp(
    base: &MarkedSimplicialSet,
    target: &MarkedSimplicialSet,
    out_dim: usize,
    budget: u64,
) -> Result<HomComplex, MarkedError> {
    hom_complex(base, target, true, out_dim, budget)
}

/// Restriction along a marked map of bases: precomposition
/// `hom(Y, C) -> hom(X, C)` induced by `a: X -> Y`.
pub fn hom_restriction(
    over_y: &HomComplex,
    over_x: &HomComplex,
    a: &MarkedMap,
) -> Result<SimplicialMap, MarkedError> {
    if over_y.sharp != over_x.sharp
        || over_y.out_dim != over_x.out_dim
        || over_y.target != over_x.target
    {
        return Err(MarkedError::HomMismatch("hom complexes built with different data".into()));
    }
    if a.source != over_x.base || a.target != over_y.base {
        return Err(MarkedError::HomMismatch("restriction map endpoints mismatch".into()));
    }
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(over_y.out_dim + 1);
    for n in 0..=over_y.out_dim {
        let inner = over_y.base.space.dim_bound();
        let simplex = standard_simplex(n, inner);
        let pre = product_map(
            &SimplicialMap::identity(&simplex),
            &a.map,
            &over_x.products[n].pairing,
            &over_y.products[n].pairing,
        );
        let mut lv = Vec::with_capacity(over_y.maps[n].len());
        for m in &over_y.maps[n] {
            let comp = SimplicialMap::compose(m, &pre)?;
            let idx = over_x.index[n].get(&comp.levels).ok_or_else(|| {
                MarkedError::HomMismatch("restricted simplex missing from the target hom".into())
            })?;
            lv.push(*idx);
        }
        levels.push(lv);
    }
    Ok(SimplicialMap::new(over_y.complex.clone(), over_x.complex.clone(), levels)?)
}

/// The pushout-product of two marked monomorphisms.
pub struct PushoutProduct {
    pub map: MarkedMap,
    pub source_pushout: MarkedPushout,
}

pub fn pushout_product(
    f: &MarkedMap,
    g: &MarkedMap,
) -> Result<PushoutProduct, MarkedError> {
    if !f.map.is_mono() || !g.map.is_mono() {
        return Err(MarkedError::NotMono);
    }
    let xy = marked_product(&f.source, &g.source);
    let xy2 = marked_product(&f.source, &g.target);
    let x2y = marked_product(&f.target, &g.source);
    let x2y2 = marked_product(&f.target, &g.target);
    let idg = marked_product_map(&MarkedMap::identity(&f.source), g, &xy, &xy2)?;
    let fid = marked_product_map(f, &MarkedMap::identity(&g.source), &xy, &x2y)?;
    let po = marked_pushout(&idg, &fid)?;
    let u = marked_product_map(f, &MarkedMap::identity(&g.target), &xy2, &x2y2)?;
    let v = marked_product_map(&MarkedMap::identity(&f.target), g, &x2y, &x2y2)?;
    let induced = pushout_induced(
        &crate::sset::PushoutResult {
            complex: po.marked.space.clone(),
            from_x: po.from_x.map.clone(),
            from_y: po.from_y.map.clone(),
        },
        &u.map,
        &v.map,
    )?;
    let map = MarkedMap::new(po.marked.clone(), x2y2.marked.clone(), induced)?;
    if !map.map.is_mono() {
        return Err(MarkedError::NotMono);
    }
    Ok(PushoutProduct { map, source_pushout: po })
}

/// The marked anodyne generator classes up to horn dimension `n_max`, at
/// truncation `dim`. Class-4 instances are emitted for the explicitly
/// supplied Kan fixtures only, each re-checked with the given budget.
pub fn marked_anodyne_generators(
    n_max: usize,
    dim: usize,
    kan_fixtures: &[TruncatedSimplicialSet],
    budget: u64,
) -> Result<Vec<MarkedMap>, MarkedError> {
    assert!(n_max <= dim, "horn dimension exceeds the truncation");
    let mut out = Vec::new();
    // class 1: flat inner horns
    for n in 2..=n_max {
        for i in 1..n {
            let h = horn(n, i, dim);
            out.push(MarkedMap::new(
                flat(&h.complex),
                flat(&standard_simplex(n, dim)),
                h.include.clone(),
            )?);
        }
    }
    // class 2: right horns with the final edge marked on both sides
    for n in 1..=n_max {
        let h = horn(n, n, dim);
        let simplex = standard_simplex(n, dim);
        let final_edge =
            standard_index(n, &MonotoneMap::new(1, n, vec![n - 1, n]).expect("monotone"));
        let mut tgt = flat(&simplex);
        tgt.marked[final_edge] = true;
        let mut src = flat(&h.complex);
        if let Some(inner_idx) =
            (0..h.complex.count(1)).find(|&e| h.include.levels[1][e] == final_edge)
        {
            src.marked[inner_idx] = true;
        }
        out.push(MarkedMap::new(src, tgt, h.include.clone())?);
    }
    // class 3: the square expressing that marked 2-of-3 data saturates:
    // sharp horn glued to the flat triangle, mapping to the sharp triangle
    if n_max >= 2 {
        let h = horn(2, 1, dim);
        let tri = standard_simplex(2, dim);
        let horn_flat_to_sharp = MarkedMap::new(
            flat(&h.complex),
            sharp(&h.complex),
            SimplicialMap::identity(&h.complex),
        )?;
        let horn_flat_include =
            MarkedMap::new(flat(&h.complex), flat(&tri), h.include.clone())?;
        let po = marked_pushout(&horn_flat_to_sharp, &horn_flat_include)?;
        let induced = pushout_induced(
            &crate::sset::PushoutResult {
                complex: po.marked.space.clone(),
                from_x: po.from_x.map.clone(),
                from_y: po.from_y.map.clone(),
            },
            &h.include,
            &SimplicialMap::identity(&tri),
        )?;
        out.push(MarkedMap::new(po.marked.clone(), sharp(&tri), induced)?);
    }
    // class 4: flat-to-sharp on supplied Kan fixtures
    for k in kan_fixtures {
        match lifting::is_kan_complex(k, budget)? {
            Verdict::Yes => {}
            v => return Err(MarkedError::NotKan(v)),
        }
        out.push(MarkedMap::new(flat(k), sharp(k), SimplicialMap::identity(k))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::FiniteCategory;
    use crate::sset::{boundary, find_isomorphism, nerve};

    #[test]
    fn flat_and_sharp_markings() {
        let i = standard_simplex(1, 2);
        assert_eq!(flat(&i).nondegenerate_marked().len(), 0);
        assert_eq!(sharp(&i).nondegenerate_marked().len(), 1);
        let pt = standard_simplex(0, 2);
        assert_eq!(flat(&pt).marked, sharp(&pt).marked);
        flat(&i).validate().unwrap();
        sharp(&i).validate().unwrap();
    }

    #[test]
    fn natural_markings_from_equivalences() {
        let arrow = nerve(&FiniteCategory::chain(1), 2).complex;
        let n = natural(&arrow, 10_000_000).unwrap();
        assert_eq!(n.nondegenerate_marked().len(), 0);
        let iso = nerve(&FiniteCategory::walking_iso(), 2).complex;
        let n = natural(&iso, 10_000_000).unwrap();
        assert!(n.marked.iter().all(|&b| b));
        // a non-quasi-category is refused
        let b = boundary(2, 2).complex;
        assert!(natural(&b, 10_000_000).is_err());
    }

    #[test]
    fn unmarked_degenerate_edge_is_rejected() {
        let i = standard_simplex(1, 2);
        let err = MarkedSimplicialSet::new(i, vec![false, true, false]);
        assert!(matches!(err, Err(MarkedError::DegenerateEdgeUnmarked(_))));
    }

    #[test]
    fn hom_from_a_point_recovers_the_target() {
        let c = nerve(&FiniteCategory::chain(1), 2).complex;
        let cn = natural(&c, 10_000_000).unwrap();
        let pt = flat(&standard_simplex(0, 2));
        let h = hom_flat(&pt, &cn, 2, 10_000_000).unwrap();
        assert_eq!(h.complex.counts(), c.counts());
        assert!(find_isomorphism(&h.complex, &c, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn hom_of_interval_into_arrow_nerve_frozen_counts() {
        let c = nerve(&FiniteCategory::chain(1), 2).complex;
        let cn = natural(&c, 10_000_000).unwrap();
        let base = flat(&standard_simplex(1, 2));
        let hf = hom_flat(&base, &cn, 1, 10_000_000).unwrap();
        assert_eq!(hf.complex.count(0), 3);
        assert_eq!(hf.complex.nondegenerate_indices(1).len(), 3);
        let hs = hom_sharp(&base, &cn, 1, 10_000_000).unwrap();
        assert_eq!(hs.complex.count(0), 3);
        assert_eq!(hs.complex.nondegenerate_indices(1).len(), 0);
    }

    #[test]
    fn sharp_hom_is_a_subcomplex_of_flat_hom() {
        let c = nerve(&FiniteCategory::walking_iso(), 2).complex;
        let cn = natural(&c, 10_000_000).unwrap();
        let base = flat(&standard_simplex(1, 2));
        let hf = hom_flat(&base, &cn, 1, 10_000_000).unwrap();
        let hs = hom_sharp(&base, &cn, 1, 10_000_000).unwrap();
        for n in 0..=1 {
            for idx in 0..hs.complex.count(n) {
                let m = hs.map_at(n, idx);
                assert!(
                    hf.index_of_levels(n, &m.levels).is_some(),
                    "sharp simplex missing from flat hom at dim {n}"
                );
            }
        }
        assert!(hs.complex.count(1) <= hf.complex.count(1));
    }

    #[test]
    fn pushout_product_frozen_square_boundary() {
        let d = 2;
        let b = boundary(1, d);
        let incl = MarkedMap::new(
            flat(&b.complex),
            flat(&standard_simplex(1, d)),
            b.include.clone(),
        )
        .unwrap();
        let pp = pushout_product(&incl, &incl).unwrap();
        // target is the square, source its boundary
        let sq = product(&standard_simplex(1, d), &standard_simplex(1, d));
        assert_eq!(pp.map.target.space.counts(), sq.complex.counts());
        assert_eq!(pp.map.source.space.nondegenerate_counts(), vec![4, 4, 0]);
        assert!(pp.map.map.is_mono());
    }

    #[test]
    fn pushout_product_with_point_inclusion_is_unital() {
        let d = 2;
        let empty = crate::sset::TruncatedSimplicialSet::empty(d);
        let pt = standard_simplex(0, d);
        let unit = MarkedMap::new(
            flat(&empty),
            flat(&pt),
            SimplicialMap::new(empty.clone(), pt.clone(), vec![vec![], vec![], vec![]]).unwrap(),
        )
        .unwrap();
        let i = standard_simplex(1, d);
        let b = boundary(1, d);
        let g = MarkedMap::new(flat(&b.complex), flat(&i), b.include.clone()).unwrap();
        let pp = pushout_product(&unit, &g).unwrap();
        // source ~ boundary of the interval, target ~ the interval
        assert_eq!(pp.map.source.space.nondegenerate_counts(), b.complex.nondegenerate_counts());
        assert_eq!(pp.map.target.space.nondegenerate_counts(), i.nondegenerate_counts());
        assert!(
            find_isomorphism(&pp.map.target.space, &i, 1_000_000).unwrap().is_some()
        );
    }

    #[test]
    fn generator_classes_have_expected_shapes() {
        let gens = marked_anodyne_generators(2, 2, &[standard_simplex(0, 2)], 1_000_000)
            .unwrap();
        // class 1: exactly one inner horn at n_max = 2
        let class1: Vec<_> = gens
            .iter()
            .filter(|g| {
                g.source.nondegenerate_marked().is_empty()
                    && g.target.nondegenerate_marked().is_empty()
                    && g.map.source != g.map.target
            })
            .collect();
        assert_eq!(class1.len(), 1);
        // class 2 at n = 1 marks the full edge of the interval
        let class2_n1 = gens
            .iter()
            .find(|g| g.map.target.count(0) == 2 && g.target.nondegenerate_marked().len() == 1)
            .expect("class-2 generator at n = 1");
        assert_eq!(class2_n1.map.source.count(0), 1);
        // class 3 target is the fully marked triangle
        let class3 = gens
            .iter()
            .find(|g| {
                g.map.target.count(0) == 3 && g.target.marked.iter().all(|&b| b)
            })
            .expect("class-3 generator");
        assert_eq!(class3.source.nondegenerate_marked().len(), 2);
        // class 4 on the point is an identity
        let class4 = gens.last().unwrap();
        assert_eq!(class4.map.source.counts(), standard_simplex(0, 2).counts());
        for (n, lv) in class4.map.levels.iter().enumerate() {
            for (i, &v) in lv.iter().enumerate() {
                assert_eq!(v, i, "identity at dim {n}");
            }
        }
    }

    #[test]
    fn hom_restriction_along_a_horn_inclusion() {
        let c = nerve(&FiniteCategory::chain(1), 2).complex;
        let cn = natural(&c, 10_000_000).unwrap();
        let h = horn(2, 1, 2);
        let a = MarkedMap::new(
            sharp(&h.complex),
            sharp(&standard_simplex(2, 2)),
            h.include.clone(),
        )
        .unwrap();
        let over_y = hom_flat(&a.target, &cn, 2, 10_000_000).unwrap();
        let over_x = hom_flat(&a.source, &cn, 2, 10_000_000).unwrap();
        let r = hom_restriction(&over_y, &over_x, &a).unwrap();
        r.validate().unwrap();
    }
}
