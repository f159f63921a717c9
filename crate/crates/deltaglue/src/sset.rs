//! Dimension-truncated simplicial sets with explicit face and degeneracy
//! tables, maps between them, the standard complexes, nerves of finite
//! categories, finite (co)limits, Eilenberg-Zilber normalization, and the
//! colimit of representables over the category of simplices.

use std::collections::HashMap;

use thiserror::Error;

use crate::cat::FiniteCategory;
use crate::delta::MonotoneMap;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SsetError {
    #[error("face table missing or malformed at (n={n}, i={i})")]
    BadFaceTable { n: usize, i: usize },
    #[error("degeneracy table missing or malformed at (n={n}, j={j})")]
    BadDegeneracyTable { n: usize, j: usize },
    #[error("table entry out of range at dim {n} index {idx}")]
    EntryOutOfRange { n: usize, idx: usize },
    #[error("simplicial identity {family} fails at dim {n}, indices ({i}, {j}), simplex {idx}")]
    Identity { family: &'static str, n: usize, i: usize, j: usize, idx: usize },
    #[error("degeneracy (n={n}, j={j}) is not injective")]
    DegeneracyNotInjective { n: usize, j: usize },
    #[error("simplex reference ({dim}, {idx}) out of range")]
    BadSimplex { dim: usize, idx: usize },
    #[error("map levels malformed at dim {0}")]
    BadMapLevel(usize),
    #[error("map does not commute with {kind} (n={n}, k={k}) at simplex {idx}")]
    NotSimplicial { kind: &'static str, n: usize, k: usize, idx: usize },
    #[error("source/target mismatch when composing maps")]
    ComposeMismatch,
    #[error("dimension bounds differ: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("maps do not share the required (co)domain")]
    LegMismatch,
    #[error("quotient face map is not constant on an identification class")]
    QuotientIllDefined,
    #[error("the canonical comparison with the base is not bijective at dim {0}")]
    ComparisonNotBijective(usize),
    #[error("subcomplex mask is not closed (dim {dim}, index {idx})")]
    MaskNotClosed { dim: usize, idx: usize },
    #[error("search budget {0} exhausted")]
    Budget(u64),
}

/// Reference to a simplex by dimension and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: usize,
    pub index: usize,
}

impl SimplexRef {
    pub fn new(dim: usize, index: usize) -> Self {
        SimplexRef { dim, index }
    }
}

/// A simplicial set truncated at a fixed dimension bound. All simplices,
/// degenerate ones included, are stored explicitly; the face tables cover
/// dimensions `1..=dim_bound` and the degeneracy tables `0..dim_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    dim: usize,
    counts: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    pub fn new(
        dim: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SsetError> {
        let s = TruncatedSimplicialSet { dim, counts, faces, degens };
        s.validate()?;
        Ok(s)
    }

    /// Checks table shapes, entry ranges, all five simplicial identity
    /// families at every level where both sides are defined, and
    /// injectivity of every degeneracy.
    pub fn validate(&self) -> Result<(), SsetError> {
        if self.counts.len() != self.dim + 1
            || self.faces.len() != self.dim + 1
            || self.degens.len() != self.dim + 1
        {
            return Err(SsetError::BadFaceTable { n: self.dim, i: 0 });
        }
        for n in 1..=self.dim {
            if self.faces[n].len() != n + 1 {
                return Err(SsetError::BadFaceTable { n, i: self.faces[n].len() });
            }
            for (i, tab) in self.faces[n].iter().enumerate() {
                if tab.len() != self.counts[n] {
                    return Err(SsetError::BadFaceTable { n, i });
                }
                for (idx, &v) in tab.iter().enumerate() {
                    if v >= self.counts[n - 1] {
                        let _ = idx;
                        return Err(SsetError::EntryOutOfRange { n, idx });
                    }
                }
            }
        }
        for n in 0..self.dim {
            if self.degens[n].len() != n + 1 {
                return Err(SsetError::BadDegeneracyTable { n, j: self.degens[n].len() });
            }
            for (j, tab) in self.degens[n].iter().enumerate() {
                if tab.len() != self.counts[n] {
                    return Err(SsetError::BadDegeneracyTable { n, j });
                }
                for &v in tab.iter() {
                    if v >= self.counts[n + 1] {
                        return Err(SsetError::EntryOutOfRange { n, idx: v });
                    }
                }
            }
        }
        if !self.degens[self.dim].is_empty() {
            return Err(SsetError::BadDegeneracyTable { n: self.dim, j: 0 });
        }
        if !self.faces[0].is_empty() {
            return Err(SsetError::BadFaceTable { n: 0, i: 0 });
        }
        // d_i d_j = d_{j-1} d_i  (i < j), operators on X_n, n >= 2
        for n in 2..=self.dim {
            for j in 1..=n {
                for i in 0..j {
                    for idx in 0..self.counts[n] {
                        let lhs = self.faces[n - 1][i][self.faces[n][j][idx]];
                        let rhs = self.faces[n - 1][j - 1][self.faces[n][i][idx]];
                        if lhs != rhs {
                            return Err(SsetError::Identity { family: "dd", n, i, j, idx });
                        }
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i  (i <= j), operators X_n -> X_{n+2}
        for n in 0..self.dim.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    for idx in 0..self.counts[n] {
                        let lhs = self.degens[n + 1][i][self.degens[n][j][idx]];
                        let rhs = self.degens[n + 1][j + 1][self.degens[n][i][idx]];
                        if lhs != rhs {
                            return Err(SsetError::Identity { family: "ss", n, i, j, idx });
                        }
                    }
                }
            }
        }
        // mixed identities, operators X_n -> X_n or X_n -> X_{n'} around s_j
        for n in 0..self.dim {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    for idx in 0..self.counts[n] {
                        let up = self.degens[n][j][idx];
                        let lhs = self.faces[n + 1][i][up];
                        let rhs = if i < j {
                            if n == 0 {
                                unreachable!("i < j <= n forces n >= 1")
                            } else {
                                self.degens[n - 1][j - 1][self.faces[n][i][idx]]
                            }
                        } else if i == j || i == j + 1 {
                            idx
                        } else {
                            self.degens[n - 1][j][self.faces[n][i - 1][idx]]
                        };
                        if lhs != rhs {
                            return Err(SsetError::Identity { family: "ds", n, i, j, idx });
                        }
                    }
                }
            }
        }
        for n in 0..self.dim {
            for j in 0..=n {
                let mut seen = vec![false; self.counts[n + 1]];
                for &v in &self.degens[n][j] {
                    if seen[v] {
                        return Err(SsetError::DegeneracyNotInjective { n, j });
                    }
                    seen[v] = true;
                }
            }
        }
        Ok(())
    }

    pub fn dim_bound(&self) -> usize {
        self.dim
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn face(&self, n: usize, i: usize, idx: usize) -> usize {
        self.faces[n][i][idx]
    }

    pub fn degen(&self, n: usize, j: usize, idx: usize) -> usize {
        self.degens[n][j][idx]
    }

    pub fn face_tables(&self) -> &Vec<Vec<Vec<usize>>> {
        &self.faces
    }

    pub fn degen_tables(&self) -> &Vec<Vec<Vec<usize>>> {
        &self.degens
    }

    pub fn empty(dim: usize) -> Self {
        TruncatedSimplicialSet {
            dim,
            counts: vec![0; dim + 1],
            faces: (0..=dim).map(|n| if n == 0 { vec![] } else { vec![vec![]; n + 1] }).collect(),
            degens: (0..=dim).map(|n| if n == dim { vec![] } else { vec![vec![]; n + 1] }).collect(),
        }
    }

    /// Contravariant action `X(p): X_b -> X_a` of a monotone `p: [a] -> [b]`
    /// on a simplex of dimension `b`, computed through the generator
    /// decomposition of `p`.
    pub fn action(&self, p: &MonotoneMap, x: SimplexRef) -> SimplexRef {
        assert_eq!(p.cod(), x.dim, "action dimension mismatch");
        let (epi, mono) = p.epi_mono_factorize();
        let mut cur = x;
        for &v in mono.skipped_values().iter().rev() {
            cur = SimplexRef::new(cur.dim - 1, self.faces[cur.dim][v][cur.index]);
        }
        for &pos in epi.repeated_positions().iter() {
            cur = SimplexRef::new(cur.dim + 1, self.degens[cur.dim][pos][cur.index]);
        }
        cur
    }

    pub fn is_degenerate(&self, x: SimplexRef) -> bool {
        if x.dim == 0 {
            return false;
        }
        (0..x.dim).any(|j| {
            self.degens[x.dim - 1][j][self.faces[x.dim][j][x.index]] == x.index
        })
    }

    pub fn nondegenerate_indices(&self, n: usize) -> Vec<usize> {
        (0..self.counts[n]).filter(|&i| !self.is_degenerate(SimplexRef::new(n, i))).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| self.nondegenerate_indices(n).len()).collect()
    }

    /// Eilenberg-Zilber normalization: the unique pair of an epi `e` and a
    /// nondegenerate simplex `nd` with `X(e)(nd) = x`.
    pub fn ez_normalize(&self, x: SimplexRef) -> (MonotoneMap, SimplexRef) {
        let mut epi = MonotoneMap::identity(x.dim);
        let mut cur = x;
        'outer: loop {
            if cur.dim == 0 {
                break;
            }
            for j in 0..cur.dim {
                let below = self.faces[cur.dim][j][cur.index];
                if self.degens[cur.dim - 1][j][below] == cur.index {
                    epi = MonotoneMap::compose(
                        &MonotoneMap::degeneracy(cur.dim - 1, j).expect("valid degeneracy"),
                        &epi,
                    )
                    .expect("composable");
                    cur = SimplexRef::new(cur.dim - 1, below);
                    continue 'outer;
                }
            }
            break;
        }
        (epi, cur)
    }
}

/// A map of truncated simplicial sets, stored levelwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: TruncatedSimplicialSet,
    pub target: TruncatedSimplicialSet,
    pub levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(
        source: TruncatedSimplicialSet,
        target: TruncatedSimplicialSet,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self, SsetError> {
        let m = SimplicialMap { source, target, levels };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), SsetError> {
        if self.source.dim != self.target.dim {
            return Err(SsetError::DimMismatch(self.source.dim, self.target.dim));
        }
        if self.levels.len() != self.source.dim + 1 {
            return Err(SsetError::BadMapLevel(self.levels.len()));
        }
        for n in 0..=self.source.dim {
            if self.levels[n].len() != self.source.counts[n] {
                return Err(SsetError::BadMapLevel(n));
            }
            for &v in &self.levels[n] {
                if v >= self.target.counts[n] {
                    return Err(SsetError::BadMapLevel(n));
                }
            }
        }
        for n in 1..=self.source.dim {
            for i in 0..=n {
                for idx in 0..self.source.counts[n] {
                    if self.target.faces[n][i][self.levels[n][idx]]
                        != self.levels[n - 1][self.source.faces[n][i][idx]]
                    {
                        return Err(SsetError::NotSimplicial { kind: "face", n, k: i, idx });
                    }
                }
            }
        }
        for n in 0..self.source.dim {
            for j in 0..=n {
                for idx in 0..self.source.counts[n] {
                    if self.target.degens[n][j][self.levels[n][idx]]
                        != self.levels[n + 1][self.source.degens[n][j][idx]]
                    {
                        return Err(SsetError::NotSimplicial { kind: "degeneracy", n, k: j, idx });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMap {
            source: x.clone(),
            target: x.clone(),
            levels: x.counts.iter().map(|&c| (0..c).collect()).collect(),
        }
    }

    pub fn apply(&self, x: SimplexRef) -> SimplexRef {
        SimplexRef::new(x.dim, self.levels[x.dim][x.index])
    }

    /// Composite `g . f` (apply `f` first); requires `f.target == g.source`.
    pub fn compose(g: &SimplicialMap, f: &SimplicialMap) -> Result<SimplicialMap, SsetError> {
        if f.target != g.source {
            return Err(SsetError::ComposeMismatch);
        }
        let levels = f
            .levels
            .iter()
            .enumerate()
            .map(|(n, lv)| lv.iter().map(|&v| g.levels[n][v]).collect())
            .collect();
        Ok(SimplicialMap { source: f.source.clone(), target: g.target.clone(), levels })
    }

    pub fn is_mono(&self) -> bool {
        self.levels.iter().enumerate().all(|(n, lv)| {
            let mut seen = vec![false; self.target.counts[n]];
            lv.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono()
            && self.levels.iter().enumerate().all(|(n, lv)| lv.len() == self.target.counts[n])
    }

    pub fn inverse(&self) -> Option<SimplicialMap> {
        if !self.is_iso() {
            return None;
        }
        let mut levels = vec![Vec::new(); self.levels.len()];
        for (n, lv) in self.levels.iter().enumerate() {
            let mut inv = vec![0usize; lv.len()];
            for (i, &v) in lv.iter().enumerate() {
                inv[v] = i;
            }
            levels[n] = inv;
        }
        Some(SimplicialMap { source: self.target.clone(), target: self.source.clone(), levels })
    }

    /// The unique map to the point (the standard 0-simplex at the same
    /// truncation).
    pub fn to_point(x: &TruncatedSimplicialSet) -> SimplicialMap {
        let pt = standard_simplex(0, x.dim);
        SimplicialMap {
            levels: x.counts.iter().map(|&c| vec![0; c]).collect(),
            source: x.clone(),
            target: pt,
        }
    }
}

/// Rank of a monotone map among all monotone `[k] -> [n]` in lexicographic
/// order of value tables.
pub fn standard_index(n: usize, m: &MonotoneMap) -> usize {
    debug_assert_eq!(m.cod(), n);
    let len = m.dom() + 1;
    let mut rank = 0usize;
    let mut lower = 0usize;
    for p in 0..len {
        for w in lower..m.values()[p] {
            // sequences with prefix values[..p], entry w, and free tail
            let tail = len - p - 1;
            rank += crate::delta::binomial(n - w + tail, tail);
        }
        lower = m.values()[p];
    }
    rank
}

/// The standard `n`-simplex truncated at `dim`: its `k`-simplices are the
/// monotone maps `[k] -> [n]` in lexicographic order.
pub fn standard_simplex(n: usize, dim: usize) -> TruncatedSimplicialSet {
    let per_dim: Vec<Vec<MonotoneMap>> = (0..=dim).map(|k| MonotoneMap::enumerate(k, n)).collect();
    let counts: Vec<usize> = per_dim.iter().map(|v| v.len()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for k in 1..=dim {
        faces[k] = (0..=k)
            .map(|i| {
                let d = MonotoneMap::face(k, i).expect("face generator");
                per_dim[k]
                    .iter()
                    .map(|t| standard_index(n, &MonotoneMap::compose(t, &d).expect("composable")))
                    .collect()
            })
            .collect();
    }
    for k in 0..dim {
        degens[k] = (0..=k)
            .map(|j| {
                let s = MonotoneMap::degeneracy(k, j).expect("degeneracy generator");
                per_dim[k]
                    .iter()
                    .map(|t| standard_index(n, &MonotoneMap::compose(t, &s).expect("composable")))
                    .collect()
            })
            .collect();
    }
    TruncatedSimplicialSet::new(dim, counts, faces, degens).expect("standard simplex is valid")
}

/// A subcomplex of an ambient complex, stored as an inclusion mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    pub mask: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn full(ambient: &TruncatedSimplicialSet) -> Self {
        Subcomplex { mask: ambient.counts.iter().map(|&c| vec![true; c]).collect() }
    }

    pub fn empty(ambient: &TruncatedSimplicialSet) -> Self {
        Subcomplex { mask: ambient.counts.iter().map(|&c| vec![false; c]).collect() }
    }

    /// Smallest subcomplex containing the seeds: closes under faces and
    /// degeneracies.
    pub fn generated(ambient: &TruncatedSimplicialSet, seeds: &[SimplexRef]) -> Self {
        let mut mask: Vec<Vec<bool>> = ambient.counts.iter().map(|&c| vec![false; c]).collect();
        let mut stack: Vec<SimplexRef> = seeds.to_vec();
        while let Some(x) = stack.pop() {
            if mask[x.dim][x.index] {
                continue;
            }
            mask[x.dim][x.index] = true;
            if x.dim >= 1 {
                for i in 0..=x.dim {
                    stack.push(SimplexRef::new(x.dim - 1, ambient.face(x.dim, i, x.index)));
                }
            }
            if x.dim < ambient.dim {
                for j in 0..=x.dim {
                    stack.push(SimplexRef::new(x.dim + 1, ambient.degen(x.dim, j, x.index)));
                }
            }
        }
        Subcomplex { mask }
    }

    pub fn contains(&self, x: SimplexRef) -> bool {
        self.mask[x.dim][x.index]
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x || y).collect())
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x && y).collect())
                .collect(),
        }
    }

    pub fn is_closed(&self, ambient: &TruncatedSimplicialSet) -> Result<(), SsetError> {
        for n in 0..=ambient.dim {
            for idx in 0..ambient.counts[n] {
                if !self.mask[n][idx] {
                    continue;
                }
                if n >= 1 {
                    for i in 0..=n {
                        if !self.mask[n - 1][ambient.face(n, i, idx)] {
                            return Err(SsetError::MaskNotClosed { dim: n, idx });
                        }
                    }
                }
                if n < ambient.dim {
                    for j in 0..=n {
                        if !self.mask[n + 1][ambient.degen(n, j, idx)] {
                            return Err(SsetError::MaskNotClosed { dim: n, idx });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Extracts the subcomplex as a standalone complex with its inclusion.
    pub fn extract(&self, ambient: &TruncatedSimplicialSet) -> Result<Extraction, SsetError> {
        self.is_closed(ambient)?;
        let dim = ambient.dim;
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
        let mut fwd: Vec<Vec<Option<usize>>> = Vec::with_capacity(dim + 1);
        for n in 0..=dim {
            let kept: Vec<usize> =
                (0..ambient.counts[n]).filter(|&i| self.mask[n][i]).collect();
            let mut f = vec![None; ambient.counts[n]];
            for (new, &old) in kept.iter().enumerate() {
                f[old] = Some(new);
            }
            back.push(kept);
            fwd.push(f);
        }
        let counts: Vec<usize> = back.iter().map(|v| v.len()).collect();
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        for n in 1..=dim {
            faces[n] = (0..=n)
                .map(|i| {
                    back[n]
                        .iter()
                        .map(|&old| fwd[n - 1][ambient.face(n, i, old)].expect("closed mask"))
                        .collect()
                })
                .collect();
        }
        for n in 0..dim {
            degens[n] = (0..=n)
                .map(|j| {
                    back[n]
                        .iter()
                        .map(|&old| fwd[n + 1][ambient.degen(n, j, old)].expect("closed mask"))
                        .collect()
                })
                .collect();
        }
        let complex = TruncatedSimplicialSet::new(dim, counts, faces, degens)?;
        let include = SimplicialMap::new(complex.clone(), ambient.clone(), back.clone())?;
        Ok(Extraction { complex, include, fwd, back })
    }
}

/// Result of extracting a subcomplex: the standalone complex, its inclusion
/// into the ambient complex, and the index translations in both directions.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub complex: TruncatedSimplicialSet,
    pub include: SimplicialMap,
    pub fwd: Vec<Vec<Option<usize>>>,
    pub back: Vec<Vec<usize>>,
}

/// The boundary of the standard `n`-simplex: the simplices whose image is a
/// proper subset of `[n]`. Returns the extraction from `standard_simplex`.
pub fn boundary(n: usize, dim: usize) -> Extraction {
    let ambient = standard_simplex(n, dim);
    let mask: Vec<Vec<bool>> = (0..=dim)
        .map(|k| MonotoneMap::enumerate(k, n).iter().map(|t| !t.is_epi()).collect())
        .collect();
    Subcomplex { mask }.extract(&ambient).expect("boundary is a subcomplex")
}

/// The horn missing the `k`-th face: simplices whose image together with
/// `{k}` still misses some vertex of `[n]`.
pub fn horn(n: usize, k: usize, dim: usize) -> Extraction {
    assert!(k <= n);
    let ambient = standard_simplex(n, dim);
    let mask: Vec<Vec<bool>> = (0..=dim)
        .map(|q| {
            MonotoneMap::enumerate(q, n)
                .iter()
                .map(|t| {
                    let mut hit = vec![false; n + 1];
                    for &v in t.values() {
                        hit[v] = true;
                    }
                    hit[k] = true;
                    hit.iter().any(|&b| !b)
                })
                .collect()
        })
        .collect();
    Subcomplex { mask }.extract(&ambient).expect("horn is a subcomplex")
}

/// The nerve of a finite category, truncated at `dim`: `k`-simplices are
/// composable chains of `k` morphisms, with inner faces composing and
/// degeneracies inserting identities.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub complex: TruncatedSimplicialSet,
    pub cat: FiniteCategory,
    chains: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    /// Chain representation: dimension 0 stores `[object]`, dimension `k`
    /// stores the `k` composable morphisms in diagram order.
    pub fn chain(&self, x: SimplexRef) -> &[usize] {
        &self.chains[x.dim][x.index]
    }

    pub fn index_of(&self, dim: usize, chain: &[usize]) -> Option<SimplexRef> {
        self.index[dim].get(chain).map(|&i| SimplexRef::new(dim, i))
    }

    /// The `v`-th vertex (as a category object) of a chain simplex.
    pub fn vertex(&self, x: SimplexRef, v: usize) -> usize {
        let chain = self.chain(x);
        if x.dim == 0 {
            chain[0]
        } else if v == 0 {
            self.cat.src(chain[0])
        } else {
            self.cat.tgt(chain[v - 1])
        }
    }
}

pub fn nerve(cat: &FiniteCategory, dim: usize) -> Nerve {
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim + 1);
    chains.push((0..cat.objects).map(|x| vec![x]).collect());
    for k in 1..=dim {
        let mut level = Vec::new();
        if k == 1 {
            for f in 0..cat.morphisms() {
                level.push(vec![f]);
            }
        } else {
            for prev in &chains[k - 1] {
                let last_tgt = cat.tgt(*prev.last().unwrap());
                for f in 0..cat.morphisms() {
                    if cat.src(f) == last_tgt {
                        let mut c = prev.clone();
                        c.push(f);
                        level.push(c);
                    }
                }
            }
        }
        chains.push(level);
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = chains
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let counts: Vec<usize> = chains.iter().map(|l| l.len()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for n in 1..=dim {
        faces[n] = (0..=n)
            .map(|i| {
                chains[n]
                    .iter()
                    .map(|c| {
                        let fc: Vec<usize> = if n == 1 {
                            let f = c[0];
                            if i == 0 {
                                vec![cat.tgt(f)]
                            } else {
                                vec![cat.src(f)]
                            }
                        } else if i == 0 {
                            c[1..].to_vec()
                        } else if i == n {
                            c[..n - 1].to_vec()
                        } else {
                            let mut out = c[..i - 1].to_vec();
                            out.push(cat.compose(c[i], c[i - 1]).expect("chain composable"));
                            out.extend_from_slice(&c[i + 1..]);
                            out
                        };
                        index[n - 1][&fc]
                    })
                    .collect()
            })
            .collect();
    }
    for n in 0..dim {
        degens[n] = (0..=n)
            .map(|j| {
                chains[n]
                    .iter()
                    .map(|c| {
                        let sc: Vec<usize> = if n == 0 {
                            vec![cat.identity(c[0])]
                        } else {
                            let vertex = if j == 0 { cat.src(c[0]) } else { cat.tgt(c[j - 1]) };
                            let mut out = c[..j].to_vec();
                            out.push(cat.identity(vertex));
                            out.extend_from_slice(&c[j..]);
                            out
                        };
                        index[n + 1][&sc]
                    })
                    .collect()
            })
            .collect();
    }
    let complex =
        TruncatedSimplicialSet::new(dim, counts, faces, degens).expect("nerve is valid");
    Nerve { complex, cat: cat.clone(), chains, index }
}

/// The levelwise product, with pair indexing `x * count_y + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductComplex {
    pub complex: TruncatedSimplicialSet,
    y_counts: Vec<usize>,
}

impl ProductComplex {
    pub fn pair(&self, n: usize, x: usize, y: usize) -> usize {
        x * self.y_counts[n] + y
    }

    pub fn unpair(&self, n: usize, idx: usize) -> (usize, usize) {
        (idx / self.y_counts[n], idx % self.y_counts[n])
    }
}

pub fn product(x: &TruncatedSimplicialSet, y: &TruncatedSimplicialSet) -> ProductComplex {
    assert_eq!(x.dim, y.dim, "product requires equal truncations");
    let dim = x.dim;
    let counts: Vec<usize> = (0..=dim).map(|n| x.counts[n] * y.counts[n]).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for n in 1..=dim {
        faces[n] = (0..=n)
            .map(|i| {
                (0..counts[n])
                    .map(|idx| {
                        let (a, b) = (idx / y.counts[n], idx % y.counts[n]);
                        x.faces[n][i][a] * y.counts[n - 1] + y.faces[n][i][b]
                    })
                    .collect()
            })
            .collect();
    }
    for n in 0..dim {
        degens[n] = (0..=n)
            .map(|j| {
                (0..counts[n])
                    .map(|idx| {
                        let (a, b) = (idx / y.counts[n], idx % y.counts[n]);
                        x.degens[n][j][a] * y.counts[n + 1] + y.degens[n][j][b]
                    })
                    .collect()
            })
            .collect();
    }
    let complex =
        TruncatedSimplicialSet::new(dim, counts, faces, degens).expect("product is valid");
    ProductComplex { complex, y_counts: y.counts.clone() }
}

/// Product of maps: `(f x g): A x B -> C x D`.
pub fn product_map(
    f: &SimplicialMap,
    g: &SimplicialMap,
    src: &ProductComplex,
    tgt: &ProductComplex,
) -> SimplicialMap {
    let dim = f.source.dim;
    let levels: Vec<Vec<usize>> = (0..=dim)
        .map(|n| {
            (0..src.complex.counts[n])
                .map(|idx| {
                    let (a, b) = src.unpair(n, idx);
                    tgt.pair(n, f.levels[n][a], g.levels[n][b])
                })
                .collect()
        })
        .collect();
    SimplicialMap { source: src.complex.clone(), target: tgt.complex.clone(), levels }
}

/// The two projections of a product.
pub fn product_projections(
    x: &TruncatedSimplicialSet,
    y: &TruncatedSimplicialSet,
    p: &ProductComplex,
) -> (SimplicialMap, SimplicialMap) {
    let dim = x.dim;
    let mut lx: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
    let mut ly: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let mut a = Vec::with_capacity(p.complex.counts[n]);
        let mut b = Vec::with_capacity(p.complex.counts[n]);
        for idx in 0..p.complex.counts[n] {
            let (xa, yb) = p.unpair(n, idx);
            a.push(xa);
            b.push(yb);
        }
        lx.push(a);
        ly.push(b);
    }
    (
        SimplicialMap { source: p.complex.clone(), target: x.clone(), levels: lx },
        SimplicialMap { source: p.complex.clone(), target: y.clone(), levels: ly },
    )
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
            r
        } else {
            x
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as representative
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Pushout of `x <-f- a -g-> y`: the levelwise quotient of the disjoint
/// union by `f(s) ~ g(s)`, with class indices ordered by their smallest
/// member (X-simplices first, then Y-simplices shifted).
pub struct PushoutResult {
    pub complex: TruncatedSimplicialSet,
    pub from_x: SimplicialMap,
    pub from_y: SimplicialMap,
}

pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<PushoutResult, SsetError> {
    if f.source != g.source {
        return Err(SsetError::LegMismatch);
    }
    let (x, y) = (&f.target, &g.target);
    let dim = x.dim;
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(dim + 1); // class index -> representative
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(dim + 1); // disjoint index -> class
    for n in 0..=dim {
        let total = x.counts[n] + y.counts[n];
        let mut uf = UnionFind::new(total);
        for s in 0..f.source.counts[n] {
            uf.union(f.levels[n][s], x.counts[n] + g.levels[n][s]);
        }
        let mut authority: Vec<usize> = (0..total).map(|i| uf.find(i)).collect();
        let mut rep_list: Vec<usize> = authority.clone();
        rep_list.sort_unstable();
        rep_list.dedup();
        let rep_rank: HashMap<usize, usize> =
            rep_list.iter().enumerate().map(|(r, &v)| (v, r)).collect();
        for a in authority.iter_mut() {
            *a = rep_rank[a];
        }
        reps.push(rep_list);
        class_of.push(authority);
    }
    let counts: Vec<usize> = reps.iter().map(|r| r.len()).collect();
    // face/degeneracy on a class: evaluate on every member and require
    // agreement, which certifies the quotient is well defined
    let eval = |n: usize,
                idx_disjoint: usize,
                table_x: &Vec<Vec<usize>>,
                table_y: &Vec<Vec<usize>>,
                k: usize,
                out_n: usize,
                class_of: &Vec<Vec<usize>>|
     -> usize {
        if idx_disjoint < x.counts[n] {
            class_of[out_n][table_x[k][idx_disjoint]]
        } else {
            class_of[out_n][x.counts[out_n] + table_y[k][idx_disjoint - x.counts[n]]]
        }
    };
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for n in 1..=dim {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut tab = vec![usize::MAX; counts[n]];
            for d in 0..(x.counts[n] + y.counts[n]) {
                let c = class_of[n][d];
                let v = eval(n, d, &x.faces[n], &y.faces[n], i, n - 1, &class_of);
                if tab[c] == usize::MAX {
                    tab[c] = v;
                } else if tab[c] != v {
                    return Err(SsetError::QuotientIllDefined);
                }
            }
            per_i.push(tab);
        }
        faces[n] = per_i;
    }
    for n in 0..dim {
        let mut per_j = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut tab = vec![usize::MAX; counts[n]];
            for d in 0..(x.counts[n] + y.counts[n]) {
                let c = class_of[n][d];
                let v = eval(n, d, &x.degens[n], &y.degens[n], j, n + 1, &class_of);
                if tab[c] == usize::MAX {
                    tab[c] = v;
                } else if tab[c] != v {
                    return Err(SsetError::QuotientIllDefined);
                }
            }
            per_j.push(tab);
        }
        degens[n] = per_j;
    }
    let complex = TruncatedSimplicialSet::new(dim, counts, faces, degens)?;
    let from_x = SimplicialMap::new(
        x.clone(),
        complex.clone(),
        (0..=dim).map(|n| (0..x.counts[n]).map(|i| class_of[n][i]).collect()).collect(),
    )?;
    let from_y = SimplicialMap::new(
        y.clone(),
        complex.clone(),
        (0..=dim)
            .map(|n| (0..y.counts[n]).map(|i| class_of[n][x.counts[n] + i]).collect())
            .collect(),
    )?;
    Ok(PushoutResult { complex, from_x, from_y })
}

/// Pullback of `x -f-> s <-g- y`: levelwise pairs with equal images, in
/// lexicographic order.
pub struct PullbackResult {
    pub complex: TruncatedSimplicialSet,
    pub to_x: SimplicialMap,
    pub to_y: SimplicialMap,
    pub pairs: Vec<Vec<(usize, usize)>>,
}

pub fn pullback(f: &SimplicialMap, g: &SimplicialMap) -> Result<PullbackResult, SsetError> {
    if f.target != g.target {
        return Err(SsetError::LegMismatch);
    }
    let (x, y) = (&f.source, &g.source);
    let dim = x.dim;
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(dim + 1);
    let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let mut level = Vec::new();
        for a in 0..x.counts[n] {
            for b in 0..y.counts[n] {
                if f.levels[n][a] == g.levels[n][b] {
                    level.push((a, b));
                }
            }
        }
        index.push(level.iter().enumerate().map(|(i, &p)| (p, i)).collect());
        pairs.push(level);
    }
    let counts: Vec<usize> = pairs.iter().map(|l| l.len()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for n in 1..=dim {
        faces[n] = (0..=n)
            .map(|i| {
                pairs[n]
                    .iter()
                    .map(|&(a, b)| index[n - 1][&(x.faces[n][i][a], y.faces[n][i][b])])
                    .collect()
            })
            .collect();
    }
    for n in 0..dim {
        degens[n] = (0..=n)
            .map(|j| {
                pairs[n]
                    .iter()
                    .map(|&(a, b)| index[n + 1][&(x.degens[n][j][a], y.degens[n][j][b])])
                    .collect()
            })
            .collect();
    }
    let complex = TruncatedSimplicialSet::new(dim, counts, faces, degens)?;
    let to_x = SimplicialMap::new(
        complex.clone(),
        x.clone(),
        pairs.iter().map(|l| l.iter().map(|&(a, _)| a).collect()).collect(),
    )?;
    let to_y = SimplicialMap::new(
        complex.clone(),
        y.clone(),
        pairs.iter().map(|l| l.iter().map(|&(_, b)| b).collect()).collect(),
    )?;
    Ok(PullbackResult { complex, to_x, to_y, pairs })
}

/// The map of standard simplices induced by a monotone map, by
/// postcomposition on representable simplices.
pub fn standard_map(p: &MonotoneMap, dim: usize) -> SimplicialMap {
    let src = standard_simplex(p.dom(), dim);
    let tgt = standard_simplex(p.cod(), dim);
    let levels: Vec<Vec<usize>> = (0..=dim)
        .map(|k| {
            MonotoneMap::enumerate(k, p.dom())
                .iter()
                .map(|t| standard_index(p.cod(), &MonotoneMap::compose(p, t).expect("composable")))
                .collect()
        })
        .collect();
    SimplicialMap { source: src, target: tgt, levels }
}

/// The map out of a pushout induced by a commuting pair of legs
/// `u: X -> Z`, `v: Y -> Z`; every member of each identification class must
/// agree on its image.
pub fn pushout_induced(
    po: &PushoutResult,
    u: &SimplicialMap,
    v: &SimplicialMap,
) -> Result<SimplicialMap, SsetError> {
    if u.source != po.from_x.source || v.source != po.from_y.source || u.target != v.target {
        return Err(SsetError::LegMismatch);
    }
    let dim = po.complex.dim_bound();
    let mut levels: Vec<Vec<usize>> = (0..=dim).map(|n| vec![usize::MAX; po.complex.count(n)]).collect();
    for n in 0..=dim {
        for (i, &c) in po.from_x.levels[n].iter().enumerate() {
            if levels[n][c] == usize::MAX {
                levels[n][c] = u.levels[n][i];
            } else if levels[n][c] != u.levels[n][i] {
                return Err(SsetError::QuotientIllDefined);
            }
        }
        for (i, &c) in po.from_y.levels[n].iter().enumerate() {
            if levels[n][c] == usize::MAX {
                levels[n][c] = v.levels[n][i];
            } else if levels[n][c] != v.levels[n][i] {
                return Err(SsetError::QuotientIllDefined);
            }
        }
    }
    SimplicialMap::new(po.complex.clone(), u.target.clone(), levels)
}

/// The image of a map as a subcomplex of its target.
pub fn image(f: &SimplicialMap) -> Subcomplex {
    let mut mask: Vec<Vec<bool>> = f.target.counts.iter().map(|&c| vec![false; c]).collect();
    for (n, lv) in f.levels.iter().enumerate() {
        for &v in lv {
            mask[n][v] = true;
        }
    }
    Subcomplex { mask }
}

/// Searches for an isomorphism by levelwise backtracking with incidence
/// invariants. Returns `Ok(None)` if the complexes are provably not
/// isomorphic, `Err(Budget)` if the search budget runs out.
pub fn find_isomorphism(
    x: &TruncatedSimplicialSet,
    y: &TruncatedSimplicialSet,
    budget: u64,
) -> Result<Option<SimplicialMap>, SsetError> {
    if x.dim != y.dim || x.counts != y.counts {
        return Ok(None);
    }
    let dim = x.dim;
    // invariant: for each simplex, the counts of cofaces per (i) plus a
    // degeneracy flag; isomorphisms must preserve it
    let signature = |s: &TruncatedSimplicialSet, n: usize, idx: usize| -> Vec<usize> {
        let mut sig = vec![usize::from(s.is_degenerate(SimplexRef::new(n, idx)))];
        if n < dim {
            for i in 0..=n + 1 {
                sig.push(s.faces[n + 1][i].iter().filter(|&&v| v == idx).count());
            }
        }
        sig
    };
    let mut assign: Vec<Vec<usize>> = x.counts.iter().map(|&c| vec![usize::MAX; c]).collect();
    let mut used: Vec<Vec<bool>> = x.counts.iter().map(|&c| vec![false; c]).collect();
    let mut visited: u64 = 0;

    fn rec(
        x: &TruncatedSimplicialSet,
        y: &TruncatedSimplicialSet,
        signature: &dyn Fn(&TruncatedSimplicialSet, usize, usize) -> Vec<usize>,
        n: usize,
        idx: usize,
        assign: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<bool, SsetError> {
        let dim = x.dim;
        if n > dim {
            return Ok(true);
        }
        if idx == x.counts[n] {
            return rec(x, y, signature, n + 1, 0, assign, used, visited, budget);
        }
        for cand in 0..y.counts[n] {
            if used[n][cand] {
                continue;
            }
            *visited += 1;
            if *visited > budget {
                return Err(SsetError::Budget(budget));
            }
            if signature(x, n, idx) != signature(y, n, cand) {
                continue;
            }
            if n >= 1 {
                let faces_ok =
                    (0..=n).all(|i| assign[n - 1][x.faces[n][i][idx]] == y.faces[n][i][cand]);
                if !faces_ok {
                    continue;
                }
            }
            // degeneracy consistency downward: if idx = s_j(w) then cand
            // must be s_j(assign(w))
            if n >= 1 {
                let mut ok = true;
                for j in 0..n {
                    let below = x.faces[n][j][idx];
                    if x.degens[n - 1][j][below] == idx
                        && y.degens[n - 1][j][assign[n - 1][below]] != cand
                    {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
            }
            assign[n][idx] = cand;
            used[n][cand] = true;
            if rec(x, y, signature, n, idx + 1, assign, used, visited, budget)? {
                return Ok(true);
            }
            assign[n][idx] = usize::MAX;
            used[n][cand] = false;
        }
        Ok(false)
    }

    let found = rec(x, y, &signature, 0, 0, &mut assign, &mut used, &mut visited, budget)?;
    if !found {
        return Ok(None);
    }
    let map = SimplicialMap::new(x.clone(), y.clone(), assign)?;
    debug_assert!(map.is_iso());
    Ok(Some(map))
}

/// The colimit over the category of simplices of `K` of the standard
/// simplices, together with the canonical comparison map to `K`. The
/// comparison is validated to be an isomorphism and returned.
pub struct ColimitOverSimplices {
    pub complex: TruncatedSimplicialSet,
    pub comparison: SimplicialMap,
}

pub fn colimit_over_simplices(
    k: &TruncatedSimplicialSet,
) -> Result<ColimitOverSimplices, SsetError> {
    let dim = k.dim;
    // objects (n, sigma) with their standard simplex copies
    let mut objects: Vec<(usize, usize)> = Vec::new();
    for n in 0..=dim {
        for s in 0..k.counts[n] {
            objects.push((n, s));
        }
    }
    let standards: Vec<TruncatedSimplicialSet> =
        (0..=dim).map(|n| standard_simplex(n, dim)).collect();
    // disjoint union offsets per dimension, per object
    let mut offsets: Vec<Vec<usize>> = vec![Vec::with_capacity(objects.len()); dim + 1];
    let mut totals = vec![0usize; dim + 1];
    for &(n, _) in &objects {
        for q in 0..=dim {
            offsets[q].push(totals[q]);
            totals[q] += standards[n].counts[q];
        }
    }
    let mut ufs: Vec<UnionFind> = totals.iter().map(|&t| UnionFind::new(t)).collect();
    // identify along every morphism p: (a, x) -> (b, y), i.e. K(p)(y) = x
    for (oi, &(a, x)) in objects.iter().enumerate() {
        for (oj, &(b, y)) in objects.iter().enumerate() {
            for p in MonotoneMap::enumerate(a, b) {
                if k.action(&p, SimplexRef::new(b, y)) != SimplexRef::new(a, x) {
                    continue;
                }
                for q in 0..=dim {
                    for (ti, t) in MonotoneMap::enumerate(q, a).iter().enumerate() {
                        let pt = MonotoneMap::compose(&p, t).expect("composable");
                        let tj = standard_index(b, &pt);
                        ufs[q].union(offsets[q][oi] + ti, offsets[q][oj] + tj);
                    }
                }
            }
        }
    }
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(dim + 1); // one member per class
    for q in 0..=dim {
        let mut roots: Vec<usize> = (0..totals[q]).map(|i| ufs[q].find(i)).collect();
        let mut rep_list = roots.clone();
        rep_list.sort_unstable();
        rep_list.dedup();
        let rank: HashMap<usize, usize> =
            rep_list.iter().enumerate().map(|(r, &v)| (v, r)).collect();
        for r in roots.iter_mut() {
            *r = rank[r];
        }
        class_of.push(roots);
        members.push(rep_list);
    }
    let counts: Vec<usize> = members.iter().map(|m| m.len()).collect();
    // locate the object copy containing a disjoint index
    let locate = |q: usize, d: usize| -> (usize, usize) {
        // binary search over offsets
        let offs = &offsets[q];
        let mut lo = 0usize;
        let mut hi = offs.len();
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if offs[mid] <= d {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, d - offs[lo])
    };
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    let mut degens: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for q in 1..=dim {
        let mut per_i = Vec::with_capacity(q + 1);
        for i in 0..=q {
            let mut tab = vec![usize::MAX; counts[q]];
            for d in 0..totals[q] {
                let c = class_of[q][d];
                let (oi, ti) = locate(q, d);
                let (n, _) = objects[oi];
                let v = class_of[q - 1][offsets[q - 1][oi] + standards[n].faces[q][i][ti]];
                if tab[c] == usize::MAX {
                    tab[c] = v;
                } else if tab[c] != v {
                    return Err(SsetError::QuotientIllDefined);
                }
            }
            per_i.push(tab);
        }
        faces[q] = per_i;
    }
    for q in 0..dim {
        let mut per_j = Vec::with_capacity(q + 1);
        for j in 0..=q {
            let mut tab = vec![usize::MAX; counts[q]];
            for d in 0..totals[q] {
                let c = class_of[q][d];
                let (oi, ti) = locate(q, d);
                let (n, _) = objects[oi];
                let v = class_of[q + 1][offsets[q + 1][oi] + standards[n].degens[q][j][ti]];
                if tab[c] == usize::MAX {
                    tab[c] = v;
                } else if tab[c] != v {
                    return Err(SsetError::QuotientIllDefined);
                }
            }
            per_j.push(tab);
        }
        degens[q] = per_j;
    }
    let complex = TruncatedSimplicialSet::new(dim, counts.clone(), faces, degens)?;
    // cocone comparison: the class of ((n, sigma), t) maps to K(t)(sigma)
    let mut levels: Vec<Vec<usize>> = (0..=dim).map(|q| vec![usize::MAX; counts[q]]).collect();
    for q in 0..=dim {
        for d in 0..totals[q] {
            let c = class_of[q][d];
            let (oi, ti) = locate(q, d);
            let (n, s) = objects[oi];
            let t = &MonotoneMap::enumerate(q, n)[ti];
            let v = k.action(t, SimplexRef::new(n, s)).index;
            if levels[q][c] == usize::MAX {
                levels[q][c] = v;
            } else if levels[q][c] != v {
                return Err(SsetError::QuotientIllDefined);
            }
        }
    }
    let comparison = SimplicialMap::new(complex.clone(), k.clone(), levels)?;
    if !comparison.is_iso() {
        let bad = (0..=dim)
            .find(|&q| {
                let mut seen = vec![false; k.counts[q]];
                !comparison.levels[q].iter().all(|&v| !std::mem::replace(&mut seen[v], true))
                    || counts[q] != k.counts[q]
            })
            .unwrap_or(0);
        return Err(SsetError::ComparisonNotBijective(bad));
    }
    Ok(ColimitOverSimplices { complex, comparison })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::binomial;

    #[test]
    fn standard_simplex_counts_match_binomials() {
        for n in 0..=3 {
            for d in 0..=3 {
                let s = standard_simplex(n, d);
                for k in 0..=d {
                    assert_eq!(s.count(k), binomial(n + k + 1, k + 1), "n={n} d={d} k={k}");
                }
                s.validate().unwrap();
            }
        }
        // frozen examples: point, interval, triangle at truncation 2
        assert_eq!(standard_simplex(0, 2).counts(), &[1, 1, 1]);
        assert_eq!(standard_simplex(1, 2).counts(), &[2, 3, 4]);
        assert_eq!(standard_simplex(2, 2).counts(), &[3, 6, 10]);
    }

    #[test]
    fn standard_index_is_lex_rank() {
        for n in 0..=3 {
            for k in 0..=3 {
                for (i, m) in MonotoneMap::enumerate(k, n).iter().enumerate() {
                    assert_eq!(standard_index(n, m), i);
                }
            }
        }
    }

    #[test]
    fn boundary_and_horn_counts() {
        let b = boundary(2, 2);
        // boundary of the triangle: no surjective [2] -> [2] or higher
        assert_eq!(b.complex.counts(), &[3, 6, 9]);
        assert_eq!(b.complex.nondegenerate_counts(), vec![3, 3, 0]);
        let h = horn(2, 1, 2);
        assert_eq!(h.complex.nondegenerate_counts(), vec![3, 2, 0]);
        let h0 = horn(1, 0, 2);
        // the vertex {0} of the interval... the horn misses vertex 1
        assert_eq!(h0.complex.nondegenerate_counts(), vec![1, 0, 0]);
        b.complex.validate().unwrap();
        h.complex.validate().unwrap();
    }

    #[test]
    fn action_factors_through_generators() {
        let s = standard_simplex(2, 3);
        // the action of any p on the top simplex of the standard complex is
        // composition with p
        for q in 0..=3 {
            for (pi, p) in MonotoneMap::enumerate(q, 2).iter().enumerate() {
                let top = SimplexRef::new(2, standard_index(2, &MonotoneMap::identity(2)));
                let got = s.action(p, top);
                assert_eq!(got, SimplexRef::new(q, pi), "p index {pi}");
            }
        }
    }

    #[test]
    fn ez_normalization_is_unique() {
        let s = standard_simplex(1, 3);
        for q in 0..=3 {
            for idx in 0..s.count(q) {
                let x = SimplexRef::new(q, idx);
                let (e, nd) = s.ez_normalize(x);
                assert!(e.is_epi());
                assert!(!s.is_degenerate(nd));
                assert_eq!(s.action(&e, nd), x);
                // brute force uniqueness
                let mut found = 0;
                for k in 0..=q {
                    for cand in MonotoneMap::enumerate(q, k) {
                        if !cand.is_epi() {
                            continue;
                        }
                        for nidx in 0..s.count(k) {
                            let nref = SimplexRef::new(k, nidx);
                            if !s.is_degenerate(nref) && s.action(&cand, nref) == x {
                                found += 1;
                                assert_eq!((cand.clone(), nref), (e.clone(), nd));
                            }
                        }
                    }
                }
                assert_eq!(found, 1);
            }
        }
    }

    #[test]
    fn nerve_counts_and_shapes() {
        let term = nerve(&FiniteCategory::chain(0), 2);
        assert_eq!(term.complex.counts(), &[1, 1, 1]);
        let arrow = nerve(&FiniteCategory::chain(1), 2);
        // nerve of the arrow is the standard interval
        assert_eq!(arrow.complex.counts(), standard_simplex(1, 2).counts());
        assert!(find_isomorphism(&arrow.complex, &standard_simplex(1, 2), 100_000)
            .unwrap()
            .is_some());
        let disc = nerve(&FiniteCategory::discrete(3), 2);
        assert_eq!(disc.complex.nondegenerate_counts(), vec![3, 0, 0]);
        let iso = nerve(&FiniteCategory::walking_iso(), 2);
        iso.complex.validate().unwrap();
        assert_eq!(iso.complex.count(0), 2);
        assert_eq!(iso.complex.count(1), 4);
    }

    #[test]
    fn product_of_intervals_has_square_cells() {
        let i = standard_simplex(1, 2);
        let p = product(&i, &i);
        p.complex.validate().unwrap();
        assert_eq!(p.complex.counts(), &[4, 9, 16]);
        // two triangles, five edges (four sides and the diagonal), four
        // vertices survive normalization
        assert_eq!(p.complex.nondegenerate_counts(), vec![4, 5, 2]);
        let (px, py) = product_projections(&i, &i, &p);
        px.validate().unwrap();
        py.validate().unwrap();
    }

    #[test]
    fn pushout_collapsing_interval_endpoints_gives_circle() {
        let b = boundary(1, 2);
        let pt = standard_simplex(0, 2);
        let to_pt = SimplicialMap::to_point(&b.complex);
        assert_eq!(to_pt.target, pt);
        let circle = pushout(&to_pt, &b.include).unwrap();
        circle.complex.validate().unwrap();
        assert_eq!(circle.complex.nondegenerate_counts(), vec![1, 1, 0]);
        circle.from_x.validate().unwrap();
        circle.from_y.validate().unwrap();
    }

    #[test]
    fn pushout_universal_property_on_small_instance() {
        // glue two intervals along a shared endpoint and check the legs
        // commute with the span
        let i = standard_simplex(1, 2);
        let pt = standard_simplex(0, 2);
        let v0 = SimplicialMap::new(
            pt.clone(),
            i.clone(),
            vec![vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let v1 = SimplicialMap::new(
            pt.clone(),
            i.clone(),
            vec![vec![1], vec![2], vec![3]],
        )
        .unwrap();
        let po = pushout(&v1, &v0).unwrap();
        assert_eq!(po.complex.nondegenerate_counts(), vec![3, 2, 0]);
        let lhs = SimplicialMap::compose(&po.from_x, &v1).unwrap();
        let rhs = SimplicialMap::compose(&po.from_y, &v0).unwrap();
        assert_eq!(lhs.levels, rhs.levels);
    }

    #[test]
    fn pullback_over_point_is_product() {
        let i = standard_simplex(1, 2);
        let f = SimplicialMap::to_point(&i);
        let pb = pullback(&f, &f).unwrap();
        let pr = product(&i, &i);
        assert_eq!(pb.complex.counts(), pr.complex.counts());
        assert!(find_isomorphism(&pb.complex, &pr.complex, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn image_union_intersection_are_subcomplexes() {
        let s = standard_simplex(2, 2);
        let b = boundary(2, 2);
        let img = image(&b.include);
        img.is_closed(&s).unwrap();
        let h = horn(2, 0, 2);
        let img2 = image(&h.include);
        let uni = img.union(&img2);
        let int = img.intersection(&img2);
        uni.is_closed(&s).unwrap();
        int.is_closed(&s).unwrap();
        assert_eq!(int.mask, img2.mask); // horn inside boundary
    }

    #[test]
    fn colimit_over_simplices_recovers_fixtures() {
        let fixtures: Vec<TruncatedSimplicialSet> = vec![
            standard_simplex(0, 2),
            standard_simplex(1, 2),
            boundary(1, 2).complex,
            standard_simplex(2, 2),
            horn(2, 1, 2).complex,
        ];
        for k in fixtures {
            let res = colimit_over_simplices(&k).unwrap();
            res.comparison.validate().unwrap();
            assert!(res.comparison.is_iso());
            assert_eq!(res.complex.counts(), k.counts());
        }
    }

    #[test]
    fn subcomplex_generated_closes_both_ways() {
        let s = standard_simplex(2, 2);
        let top = SimplexRef::new(2, standard_index(2, &MonotoneMap::identity(2)));
        let sub = Subcomplex::generated(&s, &[top]);
        sub.is_closed(&s).unwrap();
        // the top simplex generates everything
        assert_eq!(sub.mask, Subcomplex::full(&s).mask);
    }
}
