//! A shared zoo of test fixtures: named small complexes, nerve and
//! quasi-category families, seeded random classical complexes, the toy
//! open/proper geometry with its value assignments, and prepackaged
//! extension problems. Integration and acceptance suites draw from here so
//! that every criterion runs against the same bit-exact inputs.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat::FiniteCategory;
use crate::cat::Functor;
use crate::delta::MonotoneMap;
use crate::diagrams::{
    constant_weight_classifier, mapping_functor, DiagramError, DiagramMap, MappingDiagram,
    SSetDiagram,
};
use crate::gluing::{
    evaluation_map, factorization_weight, shadow_category, vertex_prescription,
    CompositionLaw, GeoCategory, GluingError, SupportDatum, ValueAssignment,
};
use crate::homotopy::pi0_classes;
use crate::sset::{
    boundary, horn, nerve, product, pushout, standard_map, standard_simplex, Nerve,
    SimplexRef, SimplicialMap, TruncatedSimplicialSet,
};

/// The map classified by a simplex: the standard simplex of its dimension
/// mapping onto it, with every face and degeneracy determined by the
/// simplicial action.
pub fn classifying_map(
    x: &TruncatedSimplicialSet,
    s: SimplexRef,
    dim: usize,
) -> SimplicialMap {
    let src = standard_simplex(s.dim, dim);
    let mut levels = Vec::with_capacity(dim + 1);
    for r in 0..=dim {
        let row = MonotoneMap::enumerate(r, s.dim)
            .iter()
            .map(|w| x.action(w, s).index)
            .collect();
        levels.push(row);
    }
    SimplicialMap::new(src, x.clone(), levels)
        .expect("the action tables of a valid complex classify a simplicial map")
}

/// A circle: the interval with both endpoints glued to one vertex.
pub fn circle(dim: usize) -> TruncatedSimplicialSet {
    let b = boundary(1, dim);
    let to_point = SimplicialMap::to_point(&b.complex);
    pushout(&b.include, &to_point)
        .expect("gluing the interval endpoints is a pushout of valid maps")
        .complex
}

/// The cospan category `0 -> 1 <- 2`.
pub fn cospan_category() -> FiniteCategory {
    FiniteCategory::from_table(
        3,
        vec![(0, 0), (1, 1), (2, 2), (0, 1), (2, 1)],
        vec![0, 1, 2],
        &[],
    )
    .expect("the cospan shape is a category")
}

/// Named complexes at assorted truncations. The homology, normalization,
/// and section suites all iterate over this list.
pub fn complex_zoo() -> Vec<(&'static str, TruncatedSimplicialSet)> {
    vec![
        ("point", standard_simplex(0, 2)),
        ("interval", standard_simplex(1, 2)),
        ("two-points", boundary(1, 2).complex),
        ("triangle", standard_simplex(2, 2)),
        ("triangle-boundary", boundary(2, 2).complex),
        ("inner-horn", horn(2, 1, 2).complex),
        ("circle", circle(2)),
        ("cospan-nerve", nerve(&cospan_category(), 2).complex),
        ("iso-nerve", nerve(&FiniteCategory::walking_iso(), 2).complex),
        ("square", product(&standard_simplex(1, 2), &standard_simplex(1, 2)).complex),
        ("solid-tetrahedron", standard_simplex(3, 3)),
        ("tetrahedron-boundary", boundary(3, 3).complex),
    ]
}

/// The connected members of the zoo, for section lemmas that require a
/// connected base.
pub fn connected_zoo() -> Vec<(&'static str, TruncatedSimplicialSet)> {
    complex_zoo()
        .into_iter()
        .filter(|(_, x)| {
            let classes = pi0_classes(x);
            !classes.is_empty() && classes.iter().all(|&c| c == classes[0])
        })
        .collect()
}

/// Categories whose nerves serve as quasi-category fixtures.
pub fn nerve_zoo() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("arrow", FiniteCategory::chain(1)),
        ("composable-pair", FiniteCategory::chain(2)),
        ("iso-pair", FiniteCategory::walking_iso()),
        ("cospan", cospan_category()),
    ]
}

/// Quasi-category fixtures: nerves of the category zoo at a truncation.
pub fn quasi_category_zoo(dim: usize) -> Vec<(&'static str, TruncatedSimplicialSet)> {
    nerve_zoo().into_iter().map(|(name, cat)| (name, nerve(&cat, dim).complex)).collect()
}

/// Kan-complex fixtures: nerves of groupoids.
pub fn kan_zoo(dim: usize) -> Vec<(&'static str, TruncatedSimplicialSet)> {
    vec![
        ("point", standard_simplex(0, dim)),
        ("iso-pair-nerve", nerve(&FiniteCategory::walking_iso(), dim).complex),
        ("two-points", nerve(&FiniteCategory::discrete(2), dim).complex),
    ]
}

/// The simplicial set of a classical simplicial complex: `n`-simplices are
/// the weakly increasing vertex sequences whose support is a face. The
/// face list is closed downward automatically; vertices are always faces.
pub fn classical_complex(
    vertices: usize,
    faces: &[Vec<usize>],
    dim: usize,
) -> TruncatedSimplicialSet {
    let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in 0..vertices {
        closed.insert(vec![v]);
    }
    let mut stack: Vec<Vec<usize>> = faces.to_vec();
    while let Some(mut face) = stack.pop() {
        face.sort_unstable();
        face.dedup();
        assert!(face.iter().all(|&v| v < vertices), "face vertex out of range");
        if face.is_empty() || !closed.insert(face.clone()) {
            continue;
        }
        if face.len() > 1 {
            for skip in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(skip);
                stack.push(sub);
            }
        }
    }

    // enumerate weakly increasing sequences with supported image, dimension
    // by dimension, and index them for the face and degeneracy tables
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim + 1);
    let mut index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let mut level: Vec<Vec<usize>> = Vec::new();
        if n == 0 {
            level.extend((0..vertices).map(|v| vec![v]));
        } else {
            for prev in &simplices[n - 1] {
                for v in *prev.last().unwrap()..vertices {
                    let mut seq = prev.clone();
                    seq.push(v);
                    let mut support = seq.clone();
                    support.dedup();
                    if closed.contains(&support) {
                        level.push(seq);
                    }
                }
            }
        }
        let map = level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        simplices.push(level);
        index.push(map);
    }
    let counts: Vec<usize> = simplices.iter().map(|l| l.len()).collect();
    let mut face_tables: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=dim {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let row = simplices[n]
                .iter()
                .map(|seq| {
                    let mut sub = seq.clone();
                    sub.remove(i);
                    index[n - 1][&sub]
                })
                .collect();
            per_i.push(row);
        }
        face_tables.push(per_i);
    }
    let mut degen_tables: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim + 1);
    for n in 0..dim {
        let mut per_j = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let row = simplices[n]
                .iter()
                .map(|seq| {
                    let mut up = seq.clone();
                    up.insert(j, seq[j]);
                    index[n + 1][&up]
                })
                .collect();
            per_j.push(row);
        }
        degen_tables.push(per_j);
    }
    degen_tables.push(Vec::new());
    TruncatedSimplicialSet::new(dim, counts, face_tables, degen_tables)
        .expect("a classical complex satisfies the simplicial identities")
}

/// A seeded random classical complex with at most 20 nondegenerate
/// simplices, truncated at dimension 3. The same seed always produces the
/// same complex.
pub fn random_complex(seed: u64) -> TruncatedSimplicialSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = rng.gen_range(3..=5usize);
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut total = vertices;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            if total < 20 && rng.gen_bool(0.55) {
                edges.insert((a, b));
                faces.push(vec![a, b]);
                total += 1;
            }
        }
    }
    let mut triangles: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                let closed = edges.contains(&(a, b))
                    && edges.contains(&(b, c))
                    && edges.contains(&(a, c));
                if closed && total < 20 && rng.gen_bool(0.4) {
                    triangles.insert((a, b, c));
                    faces.push(vec![a, b, c]);
                    total += 1;
                }
            }
        }
    }
    for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                for d in c + 1..vertices {
                    let closed = triangles.contains(&(a, b, c))
                        && triangles.contains(&(a, b, d))
                        && triangles.contains(&(a, c, d))
                        && triangles.contains(&(b, c, d));
                    if closed && total < 20 && rng.gen_bool(0.3) {
                        faces.push(vec![a, b, c, d]);
                        total += 1;
                    }
                }
            }
        }
    }
    classical_complex(vertices, &faces, 3)
}

/// Chain geometry `X <= W <= Y`: open maps out of `X`, proper maps into
/// `Y`, and the single two-step factorization of the long morphism.
pub fn chain_geo() -> GeoCategory {
    let t = true;
    let f = false;
    let leq = vec![vec![t, t, t], vec![f, t, t], vec![f, f, t]];
    let base = FiniteCategory::from_poset(3, &leq).expect("chain order is a poset");
    let rel = |a: usize, b: usize| base.hom(a, b)[0];
    let m = base.morphisms();
    let mut open = vec![false; m];
    let mut proper = vec![false; m];
    for x in 0..3 {
        open[base.identity(x)] = true;
        proper[base.identity(x)] = true;
    }
    open[rel(0, 1)] = true;
    proper[rel(1, 2)] = true;
    let mut facs = vec![Vec::new(); m];
    for x in 0..3 {
        let id = base.identity(x);
        facs[id].push((id, id));
    }
    facs[rel(0, 1)].push((rel(0, 1), base.identity(1)));
    facs[rel(1, 2)].push((base.identity(1), rel(1, 2)));
    facs[rel(0, 2)].push((rel(0, 1), rel(1, 2)));
    GeoCategory::new(base, open, proper, facs).expect("chain geometry is valid")
}

/// The toy geometry: a five-object poset whose long morphism has two
/// incomparable factorizations plus a common refinement, so one
/// factorization category is a genuine cospan with a terminal object.
/// Objects: 0 = source, 1 = refinement, 2 and 3 = intermediates,
/// 4 = target.
pub fn toy_geo() -> GeoCategory {
    let t = true;
    let f = false;
    let leq = vec![
        vec![t, t, t, t, t],
        vec![f, t, t, t, t],
        vec![f, f, t, f, t],
        vec![f, f, f, t, t],
        vec![f, f, f, f, t],
    ];
    let base = FiniteCategory::from_poset(5, &leq).expect("toy order is a poset");
    let rel = |a: usize, b: usize| base.hom(a, b)[0];
    let m = base.morphisms();
    let mut open = vec![false; m];
    let mut proper = vec![false; m];
    for x in 0..5 {
        open[base.identity(x)] = true;
        proper[base.identity(x)] = true;
    }
    for v in [1, 2, 3] {
        open[rel(0, v)] = true;
        proper[rel(v, 4)] = true;
    }
    proper[rel(1, 2)] = true;
    proper[rel(1, 3)] = true;
    let mut facs = vec![Vec::new(); m];
    for x in 0..5 {
        let id = base.identity(x);
        facs[id].push((id, id));
    }
    for v in [1, 2, 3] {
        facs[rel(0, v)].push((rel(0, v), base.identity(v)));
        facs[rel(v, 4)].push((base.identity(v), rel(v, 4)));
    }
    facs[rel(1, 2)].push((base.identity(1), rel(1, 2)));
    facs[rel(1, 3)].push((base.identity(1), rel(1, 3)));
    facs[rel(0, 4)].push((rel(0, 2), rel(2, 4)));
    GeoCategory::new(base, open, proper, facs).expect("toy geometry is valid")
}

/// Identity values: every object carries the two-object chain and every
/// class morphism acts as the identity. No support data are needed because
/// all composites agree on the nose.
pub fn identity_values(geo: &GeoCategory) -> ValueAssignment {
    let value = FiniteCategory::chain(1);
    let m = geo.base.morphisms();
    let mut open_images = vec![None; m];
    let mut proper_images = vec![None; m];
    for f in 0..m {
        if geo.open_class[f] {
            open_images[f] = Some(Functor::identity(&value));
        }
        if geo.proper_class[f] {
            proper_images[f] = Some(Functor::identity(&value));
        }
    }
    ValueAssignment {
        values: vec![value; geo.base.objects],
        open_images,
        proper_images,
        support: Vec::new(),
    }
}

/// The automorphism of the walking isomorphism that exchanges the two
/// objects.
pub fn walking_iso_swap() -> Functor {
    let w = FiniteCategory::walking_iso();
    let obj_map = vec![1, 0];
    let mor_map = (0..w.morphisms())
        .map(|m| w.hom(obj_map[w.src(m)], obj_map[w.tgt(m)])[0])
        .collect();
    Functor { obj_map, mor_map }
}

/// Values for the toy geometry with a genuinely nonidentity support
/// isomorphism: every object carries the walking isomorphism, two proper
/// maps act by the swap, and the composites of the two plain
/// factorizations of the long morphism differ from the refinement's by the
/// swap, witnessed by the supplied support data.
pub fn toy_values(geo: &GeoCategory) -> ValueAssignment {
    let w = FiniteCategory::walking_iso();
    let swap = walking_iso_swap();
    let ident = Functor::identity(&w);
    let base = &geo.base;
    let rel = |a: usize, b: usize| base.hom(a, b)[0];
    let m = base.morphisms();
    let mut open_images = vec![None; m];
    let mut proper_images = vec![None; m];
    for f in 0..m {
        if geo.open_class[f] {
            open_images[f] = Some(ident.clone());
        }
        if geo.proper_class[f] {
            proper_images[f] = Some(ident.clone());
        }
    }
    open_images[rel(0, 3)] = Some(swap.clone());
    proper_images[rel(1, 2)] = Some(swap.clone());
    proper_images[rel(2, 4)] = Some(swap.clone());
    // forced on the nose: (2 -> 4) . (1 -> 2) = 1 -> 4 gives swap . swap
    proper_images[rel(1, 4)] = Some(Functor::compose(&swap, &swap));
    let u = w.hom(0, 1)[0];
    let v = w.hom(1, 0)[0];
    let refinement = (rel(0, 1), rel(1, 4));
    let support = vec![
        SupportDatum {
            source: (rel(0, 2), rel(2, 4)),
            target: refinement,
            mediator: rel(1, 2),
            components: vec![v, u],
        },
        SupportDatum {
            source: (rel(0, 3), rel(3, 4)),
            target: refinement,
            mediator: rel(1, 3),
            components: vec![v, u],
        },
        SupportDatum {
            source: refinement,
            target: refinement,
            mediator: base.identity(1),
            components: vec![w.identity(0), w.identity(1)],
        },
    ];
    ValueAssignment {
        values: vec![w; base.objects],
        open_images,
        proper_images,
        support,
    }
}

/// A prepackaged extension problem: everything `extend_functor` takes,
/// plus the expected answer when the target is thin enough to force one.
pub struct ExtensionFixture {
    pub name: &'static str,
    pub i: SimplicialMap,
    pub f_prime: SimplicialMap,
    pub n_diag: SSetDiagram,
    pub alpha: DiagramMap,
    pub omega: Vec<usize>,
    pub mapping: MappingDiagram,
    pub nerve_target: Option<(FiniteCategory, Nerve)>,
    pub expected: Option<SimplicialMap>,
}

fn constant_extension_fixture(
    name: &'static str,
    cat: FiniteCategory,
    edge: usize,
    i: SimplicialMap,
    budget: u64,
) -> Result<ExtensionFixture, DiagramError> {
    let nrv = nerve(&cat, 2);
    let k = standard_simplex(1, 2);
    let mapping = mapping_functor(&k, &nrv.complex, 2, 2, budget)?;
    let edge_ref = nrv.index_of(1, &[edge]).expect("morphism edge is in the nerve");
    let g = classifying_map(&nrv.complex, edge_ref, 2);
    let (n_diag, alpha) = constant_weight_classifier(&mapping, &g)?;
    let f_prime = SimplicialMap::compose(&g, &i)?;
    let slots: usize = (0..=2).map(|n| i.source.count(n)).sum();
    Ok(ExtensionFixture {
        name,
        i,
        f_prime,
        n_diag,
        alpha,
        omega: vec![0; slots],
        mapping,
        nerve_target: Some((cat, nrv)),
        expected: Some(g),
    })
}

/// The toy geometry routed through the bridge machinery, as a single
/// extension problem over the factorization weight. The weight is not
/// constant: the long morphism's edge carries the nerve of a three-object
/// factorization category.
pub fn toy_bridge_fixture(budget: u64) -> Result<ExtensionFixture, GluingError> {
    let geo = toy_geo();
    let values = toy_values(&geo);
    values.validate(&geo)?;
    let law = CompositionLaw::canonical(&geo)?;
    let k_nerve = nerve(&geo.base, 2);
    let shadow = shadow_category(&geo, &values, 64)?;
    let shadow_nerve = nerve(&shadow.category, 2);
    let weight = factorization_weight(&geo, &law, &k_nerve)?;
    let mapping = mapping_functor(&k_nerve.complex, &shadow_nerve.complex, 2, 2, budget)?;
    let alpha =
        evaluation_map(&geo, &values, &weight, &shadow, &shadow_nerve, &mapping, &k_nerve)?;
    let (i, f_prime, omega) = vertex_prescription(&k_nerve, &shadow_nerve, &weight, &geo)?;
    Ok(ExtensionFixture {
        name: "factorization-weight",
        i,
        f_prime,
        n_diag: weight.diagram,
        alpha,
        omega,
        mapping,
        nerve_target: Some((shadow.category, shadow_nerve)),
        expected: None,
    })
}

/// The extension problem family: constant-weight instances over thin
/// nerves with identity, vertex, and boundary prescriptions, plus the
/// non-constant factorization weight of the toy geometry.
pub fn extension_zoo(budget: u64) -> Vec<ExtensionFixture> {
    let arrow = FiniteCategory::chain(1);
    let iso = FiniteCategory::walking_iso();
    let arrow_edge = arrow.hom(0, 1)[0];
    let iso_edge = iso.hom(0, 1)[0];
    let whole = standard_map(&MonotoneMap::identity(1), 2);
    let vertex = standard_map(&MonotoneMap::new(0, 1, vec![0]).unwrap(), 2);
    let ends = boundary(1, 2).include;
    let mut zoo = vec![
        constant_extension_fixture("identity-prescription", arrow.clone(), arrow_edge, whole, budget)
            .expect("identity prescription fixture builds"),
        constant_extension_fixture("vertex-into-interval", arrow.clone(), arrow_edge, vertex, budget)
            .expect("vertex prescription fixture builds"),
        constant_extension_fixture("boundary-into-arrow", arrow, arrow_edge, ends.clone(), budget)
            .expect("boundary prescription fixture builds"),
        constant_extension_fixture("boundary-into-iso", iso, iso_edge, ends, budget)
            .expect("iso-target fixture builds"),
    ];
    zoo.push(toy_bridge_fixture(budget).expect("toy bridge fixture builds"));
    zoo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{betti_by_rational_rank, homology};

    #[test]
    fn zoo_counts_are_frozen() {
        let by_name: BTreeMap<&str, TruncatedSimplicialSet> =
            complex_zoo().into_iter().collect();
        let nondeg = |name: &str| by_name[name].nondegenerate_counts();
        assert_eq!(nondeg("point"), vec![1, 0, 0]);
        assert_eq!(nondeg("interval"), vec![2, 1, 0]);
        assert_eq!(nondeg("circle"), vec![1, 1, 0]);
        assert_eq!(nondeg("triangle"), vec![3, 3, 1]);
        assert_eq!(nondeg("triangle-boundary"), vec![3, 3, 0]);
        assert_eq!(nondeg("inner-horn"), vec![3, 2, 0]);
        assert_eq!(nondeg("cospan-nerve"), vec![3, 2, 0]);
        assert_eq!(nondeg("square"), vec![4, 5, 2]);
        assert_eq!(nondeg("tetrahedron-boundary"), vec![4, 6, 4, 0]);
        // ten connected fixtures are available for the section suite
        assert!(connected_zoo().len() >= 10);
    }

    #[test]
    fn classical_complexes_close_downward() {
        // a hollow triangle given only by its long edges
        let hollow = classical_complex(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], 2);
        assert_eq!(hollow.nondegenerate_counts(), vec![3, 3, 0]);
        let (h0, _) = homology(&hollow, 0).unwrap();
        let (h1, t1) = homology(&hollow, 1).unwrap();
        assert_eq!((h0, h1), (1, 1));
        assert!(t1.is_empty());
        // a solid triangle given only by its top face
        let solid = classical_complex(3, &[vec![0, 1, 2]], 2);
        assert_eq!(solid.nondegenerate_counts(), vec![3, 3, 1]);
    }

    #[test]
    fn random_complexes_are_reproducible_and_small() {
        for seed in 0..50 {
            let a = random_complex(seed);
            let b = random_complex(seed);
            assert_eq!(a.counts(), b.counts());
            let total: usize = a.nondegenerate_counts().iter().sum();
            assert!(total <= 20, "seed {seed} has {total} nondegenerate simplices");
            // the two homology routes agree on every random complex
            for k in 0..a.dim_bound() {
                let (rank, _) = homology(&a, k).unwrap();
                assert_eq!(rank, betti_by_rational_rank(&a, k).unwrap());
            }
        }
        let distinct: BTreeSet<Vec<usize>> =
            (0..10).map(|s| random_complex(s).counts().to_vec()).collect();
        assert!(distinct.len() > 3, "seeds produce too few distinct shapes");
    }

    #[test]
    fn toy_values_validate_with_a_nonidentity_support_iso() {
        let geo = toy_geo();
        let values = toy_values(&geo);
        values.validate(&geo).unwrap();
        let w = &values.values[0];
        let nonidentity = values
            .support
            .iter()
            .any(|d| d.components.iter().any(|&c| !w.is_identity(c)));
        assert!(nonidentity, "support data are all identities");
    }

    #[test]
    fn extension_fixture_family_is_well_formed() {
        let zoo = extension_zoo(2_000_000_000);
        assert!(zoo.len() >= 5);
        let nonconstant = zoo.iter().any(|fix| {
            let values = &fix.n_diag.values;
            let first = &values[0][0];
            values
                .iter()
                .flatten()
                .any(|v| v.counts() != first.counts())
        });
        assert!(nonconstant, "no fixture carries a non-constant weight");
        for fix in &zoo {
            fix.alpha.validate(&fix.n_diag, &fix.mapping.diagram).unwrap();
            let slots: usize = (0..=2).map(|n| fix.i.source.count(n)).sum();
            assert_eq!(fix.omega.len(), slots, "{}: omega slot count", fix.name);
            if let Some(expected) = &fix.expected {
                let restricted = SimplicialMap::compose(expected, &fix.i).unwrap();
                assert_eq!(restricted.levels, fix.f_prime.levels, "{}", fix.name);
            }
        }
    }
}
