//! Homology of truncated simplicial sets via Smith normal form on the
//! normalized chain complex, the homotopy category of a quasi-category,
//! equivalence-edge detection, path components, and weak-contractibility
//! certificates with three search strategies.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cat::FiniteCategory;
use crate::delta::MonotoneMap;
use crate::lifting::{self, find_map, SearchOutcome, SearchSpec, Verdict};
use crate::sset::{
    nerve, product, standard_index, SimplexRef, SimplicialMap, TruncatedSimplicialSet,
};

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("homology at the truncation dimension {0} is unreliable; refuse k >= D")]
    TruncationTop(usize),
    #[error("not verified to be a quasi-category (verdict {0:?})")]
    NotQuasiCategory(Verdict),
    #[error("homotopy composition ill-defined: {0}")]
    CompositionIllDefined(String),
    #[error("truncation dimension {0} too small for a homotopy category")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Lift(#[from] lifting::LiftError),
}

pub type Matrix = Vec<Vec<i128>>;

pub fn mat_identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; cols]; rows];
    for i in 0..rows {
        for (k, bk) in b.iter().enumerate() {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * bk[j];
            }
        }
    }
    out
}

/// Integer determinant by cofactor expansion; intended for small matrices.
pub fn mat_det(m: &Matrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i128;
    for (j, &entry) in m[0].iter().enumerate() {
        if entry == 0 {
            continue;
        }
        let minor: Matrix = m[1..]
            .iter()
            .map(|row| {
                row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * entry * mat_det(&minor);
    }
    det
}

/// The normalized chain complex: ranks are counts of nondegenerate
/// simplices, and the boundary drops degenerate faces.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    /// `boundaries[k]` is the matrix of the boundary from degree `k` to
    /// degree `k - 1`, with `ranks[k - 1]` rows and `ranks[k]` columns.
    pub boundaries: Vec<Matrix>,
}

pub fn normalized_chain_complex(x: &TruncatedSimplicialSet) -> ChainComplex {
    let dim = x.dim_bound();
    let nd: Vec<Vec<usize>> = (0..=dim).map(|n| x.nondegenerate_indices(n)).collect();
    let pos: Vec<std::collections::HashMap<usize, usize>> = nd
        .iter()
        .map(|level| level.iter().enumerate().map(|(p, &i)| (i, p)).collect())
        .collect();
    let ranks: Vec<usize> = nd.iter().map(|l| l.len()).collect();
    let mut boundaries: Vec<Matrix> = vec![Vec::new()];
    for k in 1..=dim {
        let mut m = vec![vec![0i128; ranks[k]]; ranks[k - 1]];
        for (col, &idx) in nd[k].iter().enumerate() {
            for i in 0..=k {
                let f = x.face(k, i, idx);
                if let Some(&row) = pos[k - 1].get(&f) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m[row][col] += sign;
                }
            }
        }
        boundaries.push(m);
    }
    let c = ChainComplex { ranks, boundaries };
    debug_assert!(c.squares_to_zero());
    c
}

impl ChainComplex {
    pub fn squares_to_zero(&self) -> bool {
        for k in 2..self.boundaries.len() {
            let prod = mat_mul(&self.boundaries[k - 1], &self.boundaries[k]);
            if prod.iter().any(|row| row.iter().any(|&v| v != 0)) {
                return false;
            }
        }
        true
    }
}

/// Smith normal form `U . M . V = diag` with unimodular transforms and
/// their tracked inverses.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub diag: Vec<i128>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(m: &Matrix) -> SmithNormalForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut u = mat_identity(rows);
    let mut u_inv = mat_identity(rows);
    let mut v = mat_identity(cols);
    let mut v_inv = mat_identity(cols);

    // row ops mirror on u (left) and u_inv (right, inverse op); col ops on
    // v (right) and v_inv (left, inverse op)
    fn swap_rows(a: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, r1: usize, r2: usize) {
        a.swap(r1, r2);
        u.swap(r1, r2);
        for row in u_inv.iter_mut() {
            row.swap(r1, r2);
        }
    }
    fn swap_cols(a: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, c1: usize, c2: usize) {
        for row in a.iter_mut() {
            row.swap(c1, c2);
        }
        for row in v.iter_mut() {
            row.swap(c1, c2);
        }
        v_inv.swap(c1, c2);
    }
    fn add_row(a: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, dst: usize, src: usize, k: i128) {
        let n = a[0].len();
        for j in 0..n {
            let t = a[src][j];
            a[dst][j] += k * t;
        }
        let n = u[0].len();
        for j in 0..n {
            let t = u[src][j];
            u[dst][j] += k * t;
        }
        for row in u_inv.iter_mut() {
            let t = row[dst];
            row[src] -= k * t;
        }
    }
    fn add_col(a: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, dst: usize, src: usize, k: i128) {
        for row in a.iter_mut() {
            let t = row[src];
            row[dst] += k * t;
        }
        for row in v.iter_mut() {
            let t = row[src];
            row[dst] += k * t;
        }
        let n = v_inv[0].len();
        for j in 0..n {
            let t = v_inv[dst][j];
            v_inv[src][j] -= k * t;
        }
    }
    fn negate_row(a: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, r: usize) {
        for x in a[r].iter_mut() {
            *x = -*x;
        }
        for x in u[r].iter_mut() {
            *x = -*x;
        }
        for row in u_inv.iter_mut() {
            row[r] = -row[r];
        }
    }

    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // find a nonzero pivot with minimal absolute value in the
        // remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        if a[t][t] < 0 {
            negate_row(&mut a, &mut u, &mut u_inv, t);
        }
        // clear the row and column below/right of the pivot
        let mut dirty = false;
        for i in t + 1..rows {
            if a[i][t] != 0 {
                let q = a[i][t].div_euclid(a[t][t]);
                add_row(&mut a, &mut u, &mut u_inv, i, t, -q);
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
        }
        for j in t + 1..cols {
            if a[t][j] != 0 {
                let q = a[t][j].div_euclid(a[t][t]);
                add_col(&mut a, &mut v, &mut v_inv, j, t, -q);
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue; // remainders became new smaller pivot candidates
        }
        // divisibility: pivot must divide every remaining entry
        let mut fixed = false;
        'divcheck: for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % a[t][t] != 0 {
                    add_row(&mut a, &mut u, &mut u_inv, t, i, 1);
                    fixed = true;
                    break 'divcheck;
                }
            }
        }
        if fixed {
            continue;
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..steps).map(|i| a[i][i]).collect();
    SmithNormalForm { diag, u, u_inv, v, v_inv, rows, cols }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination;
/// independent of the Smith normal form code path.
pub fn rational_rank(m: &Matrix) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, pr);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    rank
}

/// Homology of the normalized chain complex in degree `k`; refuses the
/// truncation dimension itself, where boundaries from above are missing.
pub fn homology(
    x: &TruncatedSimplicialSet,
    k: usize,
) -> Result<(usize, Vec<u64>), HomotopyError> {
    let d = x.dim_bound();
    if k >= d {
        return Err(HomotopyError::TruncationTop(d));
    }
    let c = normalized_chain_complex(x);
    let rank_down = if k == 0 { 0 } else { smith_normal_form(&c.boundaries[k]).rank() };
    let snf_up = smith_normal_form(&c.boundaries[k + 1]);
    let betti = c.ranks[k] - rank_down - snf_up.rank();
    let torsion: Vec<u64> = snf_up
        .diag
        .iter()
        .filter(|&&v| v.abs() > 1)
        .map(|&v| v.unsigned_abs() as u64)
        .collect();
    Ok((betti, torsion))
}

/// Betti number in degree `k` computed purely by rational rank-nullity;
/// an independent oracle for the Smith-normal-form route.
pub fn betti_by_rational_rank(
    x: &TruncatedSimplicialSet,
    k: usize,
) -> Result<usize, HomotopyError> {
    let d = x.dim_bound();
    if k >= d {
        return Err(HomotopyError::TruncationTop(d));
    }
    let c = normalized_chain_complex(x);
    let rank_down = if k == 0 { 0 } else { rational_rank(&c.boundaries[k]) };
    let rank_up = rational_rank(&c.boundaries[k + 1]);
    Ok(c.ranks[k] - rank_down - rank_up)
}

/// Relative homology of a monomorphism `incl: A -> B` in degree `k`,
/// computed from the quotient of normalized chains.
pub fn relative_homology(
    incl: &SimplicialMap,
    k: usize,
) -> Result<(usize, Vec<u64>), HomotopyError> {
    let b = &incl.target;
    let d = b.dim_bound();
    if k >= d {
        return Err(HomotopyError::TruncationTop(d));
    }
    // basis: nondegenerate simplices of B not in the image of A
    let dim = d;
    let mut in_image: Vec<Vec<bool>> = b.counts().iter().map(|&c| vec![false; c]).collect();
    for (n, lv) in incl.levels.iter().enumerate() {
        for &v in lv {
            in_image[n][v] = true;
        }
    }
    let nd: Vec<Vec<usize>> = (0..=dim)
        .map(|n| {
            b.nondegenerate_indices(n).into_iter().filter(|&i| !in_image[n][i]).collect()
        })
        .collect();
    let pos: Vec<std::collections::HashMap<usize, usize>> = nd
        .iter()
        .map(|level| level.iter().enumerate().map(|(p, &i)| (i, p)).collect())
        .collect();
    let ranks: Vec<usize> = nd.iter().map(|l| l.len()).collect();
    let mut boundaries: Vec<Matrix> = vec![Vec::new()];
    for q in 1..=dim {
        let mut m = vec![vec![0i128; ranks[q]]; ranks[q - 1]];
        for (col, &idx) in nd[q].iter().enumerate() {
            for i in 0..=q {
                let f = b.face(q, i, idx);
                if let Some(&row) = pos[q - 1].get(&f) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m[row][col] += sign;
                }
            }
        }
        boundaries.push(m);
    }
    let rank_down = if k == 0 { 0 } else { smith_normal_form(&boundaries[k]).rank() };
    let snf_up = smith_normal_form(&boundaries[k + 1]);
    let betti = ranks[k] - rank_down - snf_up.rank();
    let torsion: Vec<u64> = snf_up
        .diag
        .iter()
        .filter(|&&v| v.abs() > 1)
        .map(|&v| v.unsigned_abs() as u64)
        .collect();
    Ok((betti, torsion))
}

/// Path-component class of every vertex, via undirected edge reachability.
pub fn pi0_classes(x: &TruncatedSimplicialSet) -> Vec<usize> {
    let n0 = x.count(0);
    let mut parent: Vec<usize> = (0..n0).collect();
    fn find(parent: &mut Vec<usize>, a: usize) -> usize {
        if parent[a] != a {
            let r = find(parent, parent[a]);
            parent[a] = r;
            r
        } else {
            a
        }
    }
    if x.dim_bound() >= 1 {
        for e in 0..x.count(1) {
            let a = find(&mut parent, x.face(1, 1, e));
            let b = find(&mut parent, x.face(1, 0, e));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    (0..n0).map(|v| find(&mut parent, v)).collect()
}

pub fn pi0_connected(x: &TruncatedSimplicialSet, a: usize, b: usize) -> bool {
    let classes = pi0_classes(x);
    classes[a] == classes[b]
}

/// A zig-zag of edges from `a` to `b`: each entry is a 1-simplex index and
/// whether it is traversed forward (source to target).
pub fn edge_path(
    x: &TruncatedSimplicialSet,
    a: usize,
    b: usize,
) -> Option<Vec<(usize, bool)>> {
    if a == b {
        return Some(Vec::new());
    }
    if x.dim_bound() < 1 {
        return None;
    }
    let n0 = x.count(0);
    let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; n0];
    let mut seen = vec![false; n0];
    let mut queue = VecDeque::new();
    seen[a] = true;
    queue.push_back(a);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = Vec::new();
            let mut cur = b;
            while cur != a {
                let (from, e, fwd) = prev[cur].expect("reached vertex has a predecessor");
                path.push((e, fwd));
                cur = from;
            }
            path.reverse();
            return Some(path);
        }
        for e in 0..x.count(1) {
            let src = x.face(1, 1, e);
            let tgt = x.face(1, 0, e);
            if src == v && !seen[tgt] {
                seen[tgt] = true;
                prev[tgt] = Some((v, e, true));
                queue.push_back(tgt);
            }
            if tgt == v && !seen[src] {
                seen[src] = true;
                prev[src] = Some((v, e, false));
                queue.push_back(src);
            }
        }
    }
    None
}

/// The homotopy category of a quasi-category: vertices as objects, edge
/// homotopy classes as morphisms, composition by 2-simplex fillers with an
/// exhaustive well-definedness check.
pub struct HomotopyCategory {
    pub cat: FiniteCategory,
    /// morphism index of each edge's homotopy class
    pub edge_class: Vec<usize>,
}

pub fn homotopy_category(
    c: &TruncatedSimplicialSet,
    budget: u64,
) -> Result<HomotopyCategory, HomotopyError> {
    let d = c.dim_bound();
    if d < 2 {
        return Err(HomotopyError::DimensionTooSmall(d));
    }
    match lifting::is_quasi_category(c, budget)? {
        Verdict::Yes => {}
        v => return Err(HomotopyError::NotQuasiCategory(v)),
    }
    let n1 = c.count(1);
    let mut parent: Vec<usize> = (0..n1).collect();
    fn find(parent: &mut Vec<usize>, a: usize) -> usize {
        if parent[a] != a {
            let r = find(parent, parent[a]);
            parent[a] = r;
            r
        } else {
            a
        }
    }
    let join = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    };
    for s in 0..c.count(2) {
        let e01 = c.face(2, 2, s);
        let e12 = c.face(2, 0, s);
        let e02 = c.face(2, 1, s);
        if c.is_degenerate(SimplexRef::new(1, e12)) {
            join(&mut parent, e01, e02);
        }
        if c.is_degenerate(SimplexRef::new(1, e01)) {
            join(&mut parent, e12, e02);
        }
    }
    let roots: Vec<usize> = (0..n1).map(|e| find(&mut parent, e)).collect();
    let mut reps: Vec<usize> = roots.clone();
    reps.sort_unstable();
    reps.dedup();
    let class_index: std::collections::HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let edge_class: Vec<usize> = roots.iter().map(|r| class_index[r]).collect();
    let m = reps.len();
    // endpoints must be constant on classes
    let mut endpoints: Vec<Option<(usize, usize)>> = vec![None; m];
    for e in 0..n1 {
        let pair = (c.face(1, 1, e), c.face(1, 0, e));
        let cls = edge_class[e];
        match endpoints[cls] {
            None => endpoints[cls] = Some(pair),
            Some(p) if p == pair => {}
            Some(_) => {
                return Err(HomotopyError::CompositionIllDefined(
                    "homotopy class with inconsistent endpoints".into(),
                ))
            }
        }
    }
    let endpoints: Vec<(usize, usize)> = endpoints.into_iter().map(|p| p.unwrap()).collect();
    let ids: Vec<usize> =
        (0..c.count(0)).map(|v| edge_class[c.degen(0, 0, v)]).collect();
    // composition: every 2-simplex witnesses [d1] = [d0] . [d2]; collect and
    // demand consistency, then demand totality on composable classes
    let mut comp: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    for s in 0..c.count(2) {
        let f = edge_class[c.face(2, 2, s)];
        let g = edge_class[c.face(2, 0, s)];
        let h = edge_class[c.face(2, 1, s)];
        match comp[g][f] {
            None => comp[g][f] = Some(h),
            Some(prev) if prev == h => {}
            Some(prev) => {
                return Err(HomotopyError::CompositionIllDefined(format!(
                    "classes {f} then {g} compose to both {prev} and {h}"
                )))
            }
        }
    }
    for f in 0..m {
        for g in 0..m {
            let composable = endpoints[f].1 == endpoints[g].0;
            if composable && comp[g][f].is_none() {
                return Err(HomotopyError::CompositionIllDefined(format!(
                    "no 2-simplex composes classes {f} then {g}"
                )));
            }
            if !composable && comp[g][f].is_some() {
                return Err(HomotopyError::CompositionIllDefined(format!(
                    "spurious composite of non-composable classes {f}, {g}"
                )));
            }
        }
    }
    let cat = FiniteCategory::new(c.count(0), endpoints, ids, comp)
        .map_err(|e| HomotopyError::CompositionIllDefined(e.to_string()))?;
    Ok(HomotopyCategory { cat, edge_class })
}

/// Mask of edges whose homotopy class is invertible.
pub fn equivalence_edges(
    c: &TruncatedSimplicialSet,
    budget: u64,
) -> Result<Vec<bool>, HomotopyError> {
    let h = homotopy_category(c, budget)?;
    Ok((0..c.count(1)).map(|e| h.cat.is_iso(h.edge_class[e])).collect())
}

/// A certificate of weak contractibility, or the reason none was found.
#[derive(Debug, Clone)]
pub enum ContractibilityCertificate {
    /// The complex is isomorphic to the nerve of a category with a
    /// terminal (or initial) object.
    TerminalObjectNerve {
        cat: FiniteCategory,
        comparison: SimplicialMap,
        object: usize,
        terminal: bool,
    },
    /// A simplicial contraction `X x interval -> X` from the identity to a
    /// constant vertex.
    ExtraDegeneracy { vertex: usize, homotopy: SimplicialMap },
    /// Reduced homology vanishes below the truncation and the edge-path
    /// group trivializes under bounded simplification.
    HomologyPlusPi1 { moves_used: u64 },
    Unknown { obstruction: String },
}

impl ContractibilityCertificate {
    pub fn is_certified(&self) -> bool {
        !matches!(self, ContractibilityCertificate::Unknown { .. })
    }
}

/// Tries to present the complex as the nerve of a category whose
/// composition is read off 2-simplices; the spine comparison must be an
/// isomorphism.
fn recognize_nerve(x: &TruncatedSimplicialSet) -> Option<(FiniteCategory, SimplicialMap)> {
    let d = x.dim_bound();
    if d < 2 || x.count(0) == 0 {
        return None;
    }
    let n1 = x.count(1);
    let endpoints: Vec<(usize, usize)> =
        (0..n1).map(|e| (x.face(1, 1, e), x.face(1, 0, e))).collect();
    let ids: Vec<usize> = (0..x.count(0)).map(|v| x.degen(0, 0, v)).collect();
    let mut comp: Vec<Vec<Option<usize>>> = vec![vec![None; n1]; n1];
    for s in 0..x.count(2) {
        let f = x.face(2, 2, s);
        let g = x.face(2, 0, s);
        let h = x.face(2, 1, s);
        match comp[g][f] {
            None => comp[g][f] = Some(h),
            Some(prev) if prev == h => {}
            Some(_) => return None,
        }
    }
    for f in 0..n1 {
        for g in 0..n1 {
            let composable = endpoints[f].1 == endpoints[g].0;
            if composable == comp[g][f].is_none() {
                return None;
            }
        }
    }
    let cat = FiniteCategory::new(x.count(0), endpoints, ids, comp).ok()?;
    let nv = nerve(&cat, d);
    // spine comparison: a k-simplex maps to the chain of its spine edges
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(d + 1);
    levels.push((0..x.count(0)).collect());
    for k in 1..=d {
        let mut lv = Vec::with_capacity(x.count(k));
        for idx in 0..x.count(k) {
            let chain: Vec<usize> = (0..k)
                .map(|i| {
                    let seg = MonotoneMap::new(1, k, vec![i, i + 1]).expect("monotone segment");
                    x.action(&seg, SimplexRef::new(k, idx)).index
                })
                .collect();
            lv.push(nv.index_of(k, &chain)?.index);
        }
        levels.push(lv);
    }
    let cmp = SimplicialMap::new(x.clone(), nv.complex.clone(), levels).ok()?;
    if !cmp.is_iso() {
        return None;
    }
    Some((cat, cmp))
}

/// Searches for a one-step simplicial contraction onto some vertex.
fn find_contraction(x: &TruncatedSimplicialSet, budget: u64) -> Option<(usize, SimplicialMap)> {
    let d = x.dim_bound();
    if d < 1 || x.count(0) == 0 {
        return None;
    }
    let interval = crate::sset::standard_simplex(1, d);
    let prod = product(x, &interval);
    for v in 0..x.count(0) {
        let mut fixed: Vec<Vec<Option<usize>>> =
            prod.complex.counts().iter().map(|&c| vec![None; c]).collect();
        for n in 0..=d {
            // the constant-0 and constant-1 n-simplices of the interval
            let c0 = standard_index(1, &MonotoneMap::new(n, 1, vec![0; n + 1]).unwrap());
            let c1 = standard_index(1, &MonotoneMap::new(n, 1, vec![1; n + 1]).unwrap());
            let collapse = MonotoneMap::new(n, 0, vec![0; n + 1]).unwrap();
            let cv = x.action(&collapse, SimplexRef::new(0, v)).index;
            for a in 0..x.count(n) {
                fixed[n][prod.pair(n, a, c0)] = Some(a);
                fixed[n][prod.pair(n, a, c1)] = Some(cv);
            }
        }
        let spec = SearchSpec {
            source: &prod.complex,
            target: x,
            fixed,
            over: None,
            edge_masks: None,
        };
        if let Ok(SearchOutcome::Found(h)) = find_map(&spec, budget) {
            return Some((v, h));
        }
    }
    None
}

/// Edge-path group presentation trivialization by bounded elimination
/// moves. Returns the number of moves used, or None if the budget ran out
/// or the presentation would not reduce.
fn trivialize_edge_path_group(x: &TruncatedSimplicialSet, budget: u64) -> Option<u64> {
    let d = x.dim_bound();
    if x.count(0) == 0 {
        return None;
    }
    let nd_edges = if d >= 1 { x.nondegenerate_indices(1) } else { Vec::new() };
    let gen_of: std::collections::HashMap<usize, usize> =
        nd_edges.iter().enumerate().map(|(g, &e)| (e, g)).collect();
    let n_gens = nd_edges.len();
    // spanning tree over nondegenerate edges, rooted anywhere
    let n0 = x.count(0);
    let mut tree_edge: Vec<bool> = vec![false; n_gens];
    let mut seen = vec![false; n0];
    for root in 0..n0 {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (g, &e) in nd_edges.iter().enumerate() {
                let s = x.face(1, 1, e);
                let t = x.face(1, 0, e);
                let next = if s == v && !seen[t] {
                    Some(t)
                } else if t == v && !seen[s] {
                    Some(s)
                } else {
                    None
                };
                if let Some(w) = next {
                    seen[w] = true;
                    tree_edge[g] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    // relators: tree edges die; each nondegenerate 2-simplex gives
    // e01 * e12 * e02^-1 with degenerate edges dropped
    let mut relators: Vec<Vec<i64>> = Vec::new();
    for (g, &is_tree) in tree_edge.iter().enumerate() {
        if is_tree {
            relators.push(vec![g as i64 + 1]);
        }
    }
    if d >= 2 {
        for s in x.nondegenerate_indices(2) {
            let mut word: Vec<i64> = Vec::new();
            let e01 = x.face(2, 2, s);
            let e12 = x.face(2, 0, s);
            let e02 = x.face(2, 1, s);
            if let Some(&g) = gen_of.get(&e01) {
                word.push(g as i64 + 1);
            }
            if let Some(&g) = gen_of.get(&e12) {
                word.push(g as i64 + 1);
            }
            if let Some(&g) = gen_of.get(&e02) {
                word.push(-(g as i64 + 1));
            }
            relators.push(word);
        }
    }
    let mut alive: Vec<bool> = vec![true; n_gens];
    let mut moves: u64 = 0;
    loop {
        // free reduction
        for r in relators.iter_mut() {
            let mut out: Vec<i64> = Vec::with_capacity(r.len());
            for &c in r.iter() {
                if out.last() == Some(&-c) {
                    out.pop();
                } else {
                    out.push(c);
                }
            }
            *r = out;
        }
        relators.retain(|r| !r.is_empty());
        // find a relator where some generator appears exactly once
        let mut target: Option<(usize, usize)> = None; // (relator, position)
        'scan: for (ri, r) in relators.iter().enumerate() {
            for (pos, &c) in r.iter().enumerate() {
                let g = c.unsigned_abs() as usize - 1;
                let occurrences =
                    r.iter().filter(|&&d2| d2.unsigned_abs() as usize - 1 == g).count();
                if occurrences == 1 {
                    target = Some((ri, pos));
                    break 'scan;
                }
            }
        }
        let Some((ri, pos)) = target else {
            break;
        };
        let relator = relators.remove(ri);
        let c = relator[pos];
        let g = c.unsigned_abs() as usize - 1;
        // g = inverse of the rest of the (cyclically rotated) relator
        let mut rest: Vec<i64> = Vec::new();
        for off in 1..relator.len() {
            rest.push(relator[(pos + off) % relator.len()]);
        }
        // relator = c * rest (up to cyclic rotation), so sign(c) * g = rest^-1
        let repl: Vec<i64> = if c > 0 {
            rest.iter().rev().map(|&v| -v).collect()
        } else {
            rest
        };
        for r in relators.iter_mut() {
            let mut out: Vec<i64> = Vec::new();
            for &entry in r.iter() {
                if entry.unsigned_abs() as usize - 1 == g {
                    if entry > 0 {
                        out.extend_from_slice(&repl);
                    } else {
                        out.extend(repl.iter().rev().map(|&v| -v));
                    }
                } else {
                    out.push(entry);
                }
                moves += 1;
                if moves > budget {
                    return None;
                }
            }
            *r = out;
        }
        alive[g] = false;
        moves += 1;
        if moves > budget {
            return None;
        }
    }
    if alive.iter().all(|&a| !a) {
        Some(moves)
    } else {
        None
    }
}

/// Tries each certificate strategy in order; `Unknown` carries the most
/// informative obstruction encountered.
pub fn contractibility(
    x: &TruncatedSimplicialSet,
    search_budget: u64,
    tietze_budget: u64,
) -> ContractibilityCertificate {
    if x.count(0) == 0 {
        return ContractibilityCertificate::Unknown {
            obstruction: "the complex is empty".into(),
        };
    }
    if let Some((cat, comparison)) = recognize_nerve(x) {
        if let Some(&object) = cat.terminal_objects().first() {
            return ContractibilityCertificate::TerminalObjectNerve {
                cat,
                comparison,
                object,
                terminal: true,
            };
        }
        if let Some(&object) = cat.initial_objects().first() {
            return ContractibilityCertificate::TerminalObjectNerve {
                cat,
                comparison,
                object,
                terminal: false,
            };
        }
    }
    if let Some((vertex, homotopy)) = find_contraction(x, search_budget) {
        return ContractibilityCertificate::ExtraDegeneracy { vertex, homotopy };
    }
    let classes = pi0_classes(x);
    let components: std::collections::HashSet<usize> = classes.iter().copied().collect();
    if components.len() != 1 {
        return ContractibilityCertificate::Unknown {
            obstruction: format!("{} path components", components.len()),
        };
    }
    let d = x.dim_bound();
    for k in 0..d {
        match homology(x, k) {
            Ok((betti, torsion)) => {
                let reduced = if k == 0 { betti.saturating_sub(1) } else { betti };
                if reduced != 0 || !torsion.is_empty() {
                    return ContractibilityCertificate::Unknown {
                        obstruction: format!(
                            "homology in degree {k} is (betti {reduced}, torsion {torsion:?})"
                        ),
                    };
                }
            }
            Err(e) => {
                return ContractibilityCertificate::Unknown { obstruction: e.to_string() }
            }
        }
    }
    match trivialize_edge_path_group(x, tietze_budget) {
        Some(moves_used) => ContractibilityCertificate::HomologyPlusPi1 { moves_used },
        None => ContractibilityCertificate::Unknown {
            obstruction: "edge-path group not trivialized within budget".into(),
        },
    }
}

/// Re-validates a certificate against the complex it claims to certify.
pub fn verify_certificate(
    x: &TruncatedSimplicialSet,
    cert: &ContractibilityCertificate,
) -> bool {
    match cert {
        ContractibilityCertificate::TerminalObjectNerve { cat, comparison, object, terminal } => {
            if cat.validate().is_err() {
                return false;
            }
            let nv = nerve(cat, x.dim_bound());
            if comparison.source != *x || comparison.target != nv.complex {
                return false;
            }
            if comparison.validate().is_err() || !comparison.is_iso() {
                return false;
            }
            if *terminal {
                cat.terminal_objects().contains(object)
            } else {
                cat.initial_objects().contains(object)
            }
        }
        ContractibilityCertificate::ExtraDegeneracy { vertex, homotopy } => {
            let d = x.dim_bound();
            if d < 1 || *vertex >= x.count(0) {
                return false;
            }
            let interval = crate::sset::standard_simplex(1, d);
            let prod = product(x, &interval);
            if homotopy.source != prod.complex || homotopy.target != *x {
                return false;
            }
            if homotopy.validate().is_err() {
                return false;
            }
            for n in 0..=d {
                let c0 = standard_index(1, &MonotoneMap::new(n, 1, vec![0; n + 1]).unwrap());
                let c1 = standard_index(1, &MonotoneMap::new(n, 1, vec![1; n + 1]).unwrap());
                let collapse = MonotoneMap::new(n, 0, vec![0; n + 1]).unwrap();
                let cv = x.action(&collapse, SimplexRef::new(0, *vertex)).index;
                for a in 0..x.count(n) {
                    if homotopy.levels[n][prod.pair(n, a, c0)] != a {
                        return false;
                    }
                    if homotopy.levels[n][prod.pair(n, a, c1)] != cv {
                        return false;
                    }
                }
            }
            true
        }
        ContractibilityCertificate::HomologyPlusPi1 { moves_used } => {
            let classes = pi0_classes(x);
            let comps: std::collections::HashSet<usize> = classes.iter().copied().collect();
            if comps.len() != 1 {
                return false;
            }
            for k in 0..x.dim_bound() {
                match homology(x, k) {
                    Ok((betti, torsion)) => {
                        let reduced = if k == 0 { betti.saturating_sub(1) } else { betti };
                        if reduced != 0 || !torsion.is_empty() {
                            return false;
                        }
                    }
                    Err(_) => return false,
                }
            }
            trivialize_edge_path_group(x, (*moves_used).max(10_000)).is_some()
        }
        ContractibilityCertificate::Unknown { .. } => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{boundary, horn, pushout, standard_simplex};

    fn circle() -> TruncatedSimplicialSet {
        let b = boundary(1, 2);
        let to_pt = SimplicialMap::to_point(&b.complex);
        pushout(&to_pt, &b.include).unwrap().complex
    }

    #[test]
    fn snf_frozen_examples() {
        let zero: Matrix = vec![vec![0, 0], vec![0, 0]];
        let s = smith_normal_form(&zero);
        assert_eq!(s.diag, vec![0, 0]);
        let m: Matrix = vec![vec![2, 0], vec![0, 3]];
        let s = smith_normal_form(&m);
        assert_eq!(s.diag, vec![1, 6]);
        // boundary of the triangle boundary in dim 1: rank 2, no torsion
        let c = normalized_chain_complex(&boundary(2, 2).complex);
        let s = smith_normal_form(&c.boundaries[1]);
        assert_eq!(s.rank(), 2);
        assert!(s.diag.iter().all(|&d| d.abs() <= 1));
    }

    #[test]
    fn snf_transforms_are_exact_and_unimodular() {
        let cases: Vec<Matrix> = vec![
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            vec![vec![1, 2], vec![3, 4], vec![5, 6]],
            vec![vec![0, 0, 0]],
            vec![vec![6, 10], vec![15, 4]],
        ];
        for m in cases {
            let s = smith_normal_form(&m);
            let umv = mat_mul(&mat_mul(&s.u, &m), &s.v);
            for (i, row) in umv.iter().enumerate() {
                for (j, &val) in row.iter().enumerate() {
                    let expect = if i == j && i < s.diag.len() { s.diag[i] } else { 0 };
                    assert_eq!(val, expect, "at ({i},{j})");
                }
            }
            // divisibility chain
            for w in s.diag.windows(2) {
                if w[0] != 0 {
                    assert_eq!(w[1] % w[0], 0);
                } else {
                    assert_eq!(w[1], 0);
                }
            }
            assert_eq!(mat_det(&s.u).abs(), 1);
            assert_eq!(mat_det(&s.v).abs(), 1);
            let uui = mat_mul(&s.u, &s.u_inv);
            assert_eq!(uui, mat_identity(s.rows));
            let vvi = mat_mul(&s.v, &s.v_inv);
            assert_eq!(vvi, mat_identity(s.cols));
        }
    }

    #[test]
    fn homology_frozen_values() {
        for n in 0..=2 {
            let s = standard_simplex(n, 3);
            assert_eq!(homology(&s, 0).unwrap(), (1, vec![]));
            for k in 1..3 {
                assert_eq!(homology(&s, k).unwrap(), (0, vec![]), "n={n} k={k}");
            }
        }
        let b = boundary(2, 2);
        assert_eq!(homology(&b.complex, 1).unwrap(), (1, vec![]));
        assert!(matches!(homology(&b.complex, 2), Err(HomotopyError::TruncationTop(2))));
        assert_eq!(homology(&circle(), 1).unwrap(), (1, vec![]));
    }

    #[test]
    fn betti_matches_rational_oracle_on_fixtures() {
        let fixtures = vec![
            standard_simplex(2, 2),
            boundary(2, 2).complex,
            horn(2, 1, 2).complex,
            circle(),
            crate::sset::nerve(&FiniteCategory::walking_iso(), 2).complex,
        ];
        for x in fixtures {
            for k in 0..x.dim_bound() {
                assert_eq!(
                    homology(&x, k).unwrap().0,
                    betti_by_rational_rank(&x, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn pi0_and_edge_paths() {
        let b = boundary(1, 2); // two isolated points
        assert!(!pi0_connected(&b.complex, 0, 1));
        assert!(pi0_connected(&b.complex, 0, 0));
        let i = standard_simplex(1, 2);
        assert!(pi0_connected(&i, 0, 1));
        let path = edge_path(&i, 1, 0).unwrap();
        assert_eq!(path.len(), 1);
        assert!(!path[0].1, "traversed backward");
        assert!(edge_path(&b.complex, 0, 1).is_none());
    }

    #[test]
    fn homotopy_category_of_nerves_recovers_the_category() {
        let c = FiniteCategory::chain(2);
        let n = nerve(&c, 2);
        let h = homotopy_category(&n.complex, 10_000_000).unwrap();
        assert_eq!(h.cat.objects, 3);
        assert_eq!(h.cat.morphisms(), 6);
        // terminal category
        let pt = standard_simplex(0, 2);
        let h = homotopy_category(&pt, 10_000_000).unwrap();
        assert_eq!(h.cat.objects, 1);
        assert_eq!(h.cat.morphisms(), 1);
    }

    #[test]
    fn equivalence_edges_on_fixture_nerves() {
        let arrow = nerve(&FiniteCategory::chain(1), 2).complex;
        let eq = equivalence_edges(&arrow, 10_000_000).unwrap();
        // only the two degenerate edges are equivalences
        let nd = arrow.nondegenerate_indices(1);
        for e in 0..arrow.count(1) {
            assert_eq!(eq[e], !nd.contains(&e));
        }
        let iso = nerve(&FiniteCategory::walking_iso(), 2).complex;
        let eq = equivalence_edges(&iso, 10_000_000).unwrap();
        assert!(eq.iter().all(|&b| b));
    }

    #[test]
    fn contractibility_strategies() {
        // strategy (a): standard simplices are nerves with a terminal object
        let s = standard_simplex(2, 2);
        let cert = contractibility(&s, 100_000, 10_000);
        assert!(matches!(cert, ContractibilityCertificate::TerminalObjectNerve { .. }));
        assert!(verify_certificate(&s, &cert));
        // obstruction: the boundary has a 1-cycle
        let b = boundary(2, 2).complex;
        let cert = contractibility(&b, 100_000, 10_000);
        assert!(!cert.is_certified());
        if let ContractibilityCertificate::Unknown { obstruction } = &cert {
            assert!(obstruction.contains("degree 1"), "got: {obstruction}");
        }
        // the horn contracts but is not a nerve: strategies (b) or (c)
        let h = horn(2, 1, 2).complex;
        let cert = contractibility(&h, 1_000_000, 10_000);
        assert!(cert.is_certified(), "horn should be certified, got {cert:?}");
        assert!(verify_certificate(&h, &cert));
        // disconnected complexes are rejected with a component count
        let two = boundary(1, 2).complex;
        let cert = contractibility(&two, 100_000, 10_000);
        assert!(!cert.is_certified());
    }

    #[test]
    fn extra_degeneracy_certificate_verifies() {
        let i = standard_simplex(1, 2);
        if let Some((v, h)) = find_contraction(&i, 1_000_000) {
            let cert = ContractibilityCertificate::ExtraDegeneracy { vertex: v, homotopy: h };
            assert!(verify_certificate(&i, &cert));
        } else {
            panic!("interval should contract");
        }
    }
}
