//! Arithmetic in the simplex category: weakly monotone maps between the
//! finite ordinals `[n] = {0, ..., n}`, their composition, the face and
//! degeneracy generators, and the unique epi-mono factorization.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeltaError {
    #[error("value table has length {got}, expected dom + 1 = {want}")]
    BadLength { got: usize, want: usize },
    #[error("values must be weakly increasing: v[{at}] = {v} > v[{at1}] = {w}")]
    NotMonotone { at: usize, v: usize, at1: usize, w: usize },
    #[error("value {v} at position {at} exceeds codomain bound {cod}")]
    OutOfRange { at: usize, v: usize, cod: usize },
    #[error("face index {i} out of range for d^{n}_i (need n >= 1 and i <= n)")]
    BadFace { n: usize, i: usize },
    #[error("degeneracy index {j} out of range for s^{n}_j (need j <= n)")]
    BadDegeneracy { n: usize, j: usize },
    #[error("cannot compose: inner codomain [{inner}] != outer domain [{outer}]")]
    NotComposable { inner: usize, outer: usize },
    #[error("canonical section requires a surjective map")]
    NotSurjective,
}

/// A weakly increasing map `[dom] -> [cod]`, stored by its full value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    /// Builds a map after checking monotonicity and the codomain bound.
    pub fn new(dom: usize, cod: usize, values: Vec<usize>) -> Result<Self, DeltaError> {
        if values.len() != dom + 1 {
            return Err(DeltaError::BadLength { got: values.len(), want: dom + 1 });
        }
        for (k, &v) in values.iter().enumerate() {
            if v > cod {
                return Err(DeltaError::OutOfRange { at: k, v, cod });
            }
            if k + 1 <= dom && values[k + 1] < v {
                return Err(DeltaError::NotMonotone { at: k, v, at1: k + 1, w: values[k + 1] });
            }
        }
        Ok(MonotoneMap { dom, cod, values })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { dom: n, cod: n, values: (0..=n).collect() }
    }

    /// The face `d^n_i : [n-1] -> [n]` omitting `i`.
    pub fn face(n: usize, i: usize) -> Result<Self, DeltaError> {
        if n == 0 || i > n {
            return Err(DeltaError::BadFace { n, i });
        }
        let values = (0..=n).filter(|&v| v != i).collect();
        Ok(MonotoneMap { dom: n - 1, cod: n, values })
    }

    /// The degeneracy `s^n_j : [n+1] -> [n]` repeating `j`.
    pub fn degeneracy(n: usize, j: usize) -> Result<Self, DeltaError> {
        if j > n {
            return Err(DeltaError::BadDegeneracy { n, j });
        }
        let values = (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect();
        Ok(MonotoneMap { dom: n + 1, cod: n, values })
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, k: usize) -> usize {
        self.values[k]
    }

    /// Composite `g . f` (apply `f` first). Fails unless `f.cod == g.dom`.
    pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap, DeltaError> {
        if f.cod != g.dom {
            return Err(DeltaError::NotComposable { inner: f.cod, outer: g.dom });
        }
        let values = f.values.iter().map(|&v| g.values[v]).collect();
        Ok(MonotoneMap { dom: f.dom, cod: g.cod, values })
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.values.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn is_mono(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_epi(&self) -> bool {
        let mut hit = vec![false; self.cod + 1];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.iter().all(|&b| b)
    }

    /// Unique factorization `self = mono . epi` through the image ordinal.
    pub fn epi_mono_factorize(&self) -> (MonotoneMap, MonotoneMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let rank = image.len() - 1;
        let epi_values = self
            .values
            .iter()
            .map(|v| image.binary_search(v).expect("value lies in image"))
            .collect();
        let epi = MonotoneMap { dom: self.dom, cod: rank, values: epi_values };
        let mono = MonotoneMap { dom: rank, cod: self.cod, values: image };
        (epi, mono)
    }

    /// All weakly increasing maps `[n] -> [m]` in lexicographic order of
    /// their value tables. There are `C(n + m + 1, n + 1)` of them.
    pub fn enumerate(n: usize, m: usize) -> Vec<MonotoneMap> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; n + 1];
        loop {
            out.push(MonotoneMap { dom: n, cod: m, values: cur.clone() });
            // advance to the next weakly increasing table
            let mut k = n + 1;
            while k > 0 && cur[k - 1] == m {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            cur[k - 1] += 1;
            let v = cur[k - 1];
            for entry in cur.iter_mut().skip(k) {
                *entry = v;
            }
        }
        out
    }

    /// For a surjective map, the section picking the minimal preimage of
    /// each point of the codomain. Satisfies `self . section = id`.
    pub fn canonical_section(&self) -> Result<MonotoneMap, DeltaError> {
        if !self.is_epi() {
            return Err(DeltaError::NotSurjective);
        }
        let mut section = vec![usize::MAX; self.cod + 1];
        for (k, &v) in self.values.iter().enumerate().rev() {
            section[v] = k;
        }
        Ok(MonotoneMap { dom: self.cod, cod: self.dom, values: section })
    }

    /// Values of `[cod]` missed by the map, ascending. Empty exactly when
    /// the map is surjective.
    pub fn skipped_values(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod + 1];
        for &v in &self.values {
            hit[v] = true;
        }
        (0..=self.cod).filter(|&v| !hit[v]).collect()
    }

    /// Positions `p` with `e(p) = e(p+1)` for an epi, ascending. The epi is
    /// the composite of the degeneracies `s_p` over these positions.
    pub fn repeated_positions(&self) -> Vec<usize> {
        debug_assert!(self.is_epi());
        (0..self.dom).filter(|&p| self.values[p] == self.values[p + 1]).collect()
    }
}

impl std::fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]->[{}](", self.dom, self.cod)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(dom: usize, cod: usize, values: &[usize]) -> MonotoneMap {
        MonotoneMap::new(dom, cod, values.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(MonotoneMap::new(1, 1, vec![1, 0]).is_err());
        assert!(MonotoneMap::new(1, 1, vec![0, 2]).is_err());
        assert!(MonotoneMap::new(1, 1, vec![0]).is_err());
    }

    #[test]
    fn composition_is_pointwise() {
        let f = mm(2, 2, &[0, 1, 2]);
        let g = mm(2, 2, &[0, 0, 1]);
        assert_eq!(MonotoneMap::compose(&g, &f).unwrap(), mm(2, 2, &[0, 0, 1]));
        let h = mm(1, 1, &[0, 0]);
        let k = mm(1, 1, &[0, 1]);
        assert_eq!(MonotoneMap::compose(&k, &h).unwrap(), mm(1, 1, &[0, 0]));
        assert!(MonotoneMap::compose(&mm(1, 1, &[0, 1]), &mm(1, 2, &[0, 1])).is_err());
    }

    #[test]
    fn face_and_degeneracy_tables() {
        assert_eq!(MonotoneMap::face(2, 1).unwrap(), mm(1, 2, &[0, 2]));
        assert_eq!(MonotoneMap::face(1, 0).unwrap(), mm(0, 1, &[1]));
        assert_eq!(MonotoneMap::degeneracy(1, 0).unwrap(), mm(2, 1, &[0, 0, 1]));
        assert_eq!(MonotoneMap::degeneracy(2, 2).unwrap(), mm(3, 2, &[0, 1, 2, 2]));
        assert!(MonotoneMap::face(0, 0).is_err());
        assert!(MonotoneMap::degeneracy(1, 2).is_err());
    }

    /// All five simplicial identity families, checked exhaustively for
    /// every level at which both sides are defined with n <= 6.
    #[test]
    fn simplicial_identities_exhaustive() {
        let n_max = 6usize;
        // d^{n+1}_j . d^n_i = d^{n+1}_i . d^n_{j-1} for i < j
        for n in 1..n_max {
            for j in 1..=n + 1 {
                for i in 0..j {
                    let lhs = MonotoneMap::compose(
                        &MonotoneMap::face(n + 1, j).unwrap(),
                        &MonotoneMap::face(n, i).unwrap(),
                    )
                    .unwrap();
                    let rhs = MonotoneMap::compose(
                        &MonotoneMap::face(n + 1, i).unwrap(),
                        &MonotoneMap::face(n, j - 1).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "faces n={n} i={i} j={j}");
                }
            }
        }
        // s^n_j . s^{n+1}_i = s^n_i . s^{n+1}_{j+1} for i <= j
        for n in 0..=n_max {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = MonotoneMap::compose(
                        &MonotoneMap::degeneracy(n, j).unwrap(),
                        &MonotoneMap::degeneracy(n + 1, i).unwrap(),
                    )
                    .unwrap();
                    let rhs = MonotoneMap::compose(
                        &MonotoneMap::degeneracy(n, i).unwrap(),
                        &MonotoneMap::degeneracy(n + 1, j + 1).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "degeneracies n={n} i={i} j={j}");
                }
            }
        }
        // mixed identities, including s^{n-1}_i . d^n_i = id and
        // s^{n-1}_i . d^n_{i+1} = id
        for n in 1..=n_max {
            for j in 0..n {
                for i in 0..=n {
                    let lhs = MonotoneMap::compose(
                        &MonotoneMap::degeneracy(n - 1, j).unwrap(),
                        &MonotoneMap::face(n, i).unwrap(),
                    )
                    .unwrap();
                    let rhs = if i < j {
                        MonotoneMap::compose(
                            &MonotoneMap::face(n - 1, i).unwrap(),
                            &MonotoneMap::degeneracy(n - 2, j - 1).unwrap(),
                        )
                        .unwrap()
                    } else if i == j || i == j + 1 {
                        MonotoneMap::identity(n - 1)
                    } else {
                        MonotoneMap::compose(
                            &MonotoneMap::face(n - 1, i - 1).unwrap(),
                            &MonotoneMap::degeneracy(n - 2, j).unwrap(),
                        )
                        .unwrap()
                    };
                    assert_eq!(lhs, rhs, "mixed n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn enumeration_count_matches_binomial() {
        for n in 0..=4 {
            for m in 0..=4 {
                let all = MonotoneMap::enumerate(n, m);
                assert_eq!(all.len(), binomial(n + m + 1, n + 1), "n={n} m={m}");
                // lexicographic and duplicate-free
                for w in all.windows(2) {
                    assert!(w[0].values() < w[1].values());
                }
            }
        }
    }

    /// Brute-force oracle: the epi-mono factorization is the unique pair
    /// (epi, mono) composing to the map.
    #[test]
    fn epi_mono_factorization_unique() {
        for n in 0..=4 {
            for m in 0..=4 {
                for f in MonotoneMap::enumerate(n, m) {
                    let (epi, mono) = f.epi_mono_factorize();
                    assert!(epi.is_epi());
                    assert!(mono.is_mono());
                    assert_eq!(MonotoneMap::compose(&mono, &epi).unwrap(), f);
                    let mut found = 0usize;
                    for k in 0..=n.min(m) {
                        for e in MonotoneMap::enumerate(n, k) {
                            if !e.is_epi() {
                                continue;
                            }
                            for mo in MonotoneMap::enumerate(k, m) {
                                if mo.is_mono()
                                    && MonotoneMap::compose(&mo, &e).unwrap() == f
                                {
                                    found += 1;
                                    assert_eq!(e, epi);
                                    assert_eq!(mo, mono);
                                }
                            }
                        }
                    }
                    assert_eq!(found, 1, "factorization of {f} not unique");
                }
            }
        }
    }

    #[test]
    fn canonical_section_picks_minimal_preimages() {
        let s = mm(2, 1, &[0, 0, 1]);
        assert_eq!(s.canonical_section().unwrap(), mm(1, 2, &[0, 2]));
        let t = mm(3, 1, &[0, 1, 1, 1]);
        assert_eq!(t.canonical_section().unwrap(), mm(1, 3, &[0, 1]));
        assert!(mm(0, 1, &[0]).canonical_section().is_err());
        for n in 0..=4 {
            for m in 0..=n {
                for e in MonotoneMap::enumerate(n, m) {
                    if e.is_epi() {
                        let sec = e.canonical_section().unwrap();
                        assert!(MonotoneMap::compose(&e, &sec).unwrap().is_identity());
                    }
                }
            }
        }
    }

    /// The generator decompositions reconstruct the map: monos are composites
    /// of faces over skipped values (largest outermost), epis composites of
    /// degeneracies over repeated positions (smallest outermost).
    #[test]
    fn generator_decomposition_reconstructs() {
        for n in 0..=4 {
            for m in 0..=4 {
                for f in MonotoneMap::enumerate(n, m) {
                    let (epi, mono) = f.epi_mono_factorize();
                    let mut acc = MonotoneMap::identity(epi.cod());
                    for (step, &p) in epi.repeated_positions().iter().enumerate() {
                        let level = epi.cod() + step;
                        acc = MonotoneMap::compose(
                            &acc,
                            &MonotoneMap::degeneracy(level, p).unwrap(),
                        )
                        .unwrap();
                    }
                    assert_eq!(acc, epi, "epi rebuild of {f}");
                    let mut acc = MonotoneMap::identity(mono.dom());
                    for (step, &v) in mono.skipped_values().iter().enumerate() {
                        let level = mono.dom() + step + 1;
                        acc = MonotoneMap::compose(
                            &MonotoneMap::face(level, v).unwrap(),
                            &acc,
                        )
                        .unwrap();
                    }
                    assert_eq!(acc, mono, "mono rebuild of {f}");
                }
            }
        }
    }
}
