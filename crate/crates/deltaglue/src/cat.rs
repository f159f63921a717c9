//! Finite categories presented by explicit composition tables, functors and
//! natural transformations between them, limit-square checkers, and a
//! bounded enumerator of small categories used as a brute-force oracle for
//! absolute (co)limit claims.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("morphism {0} out of range")]
    BadMorphism(usize),
    #[error("object {0} out of range")]
    BadObject(usize),
    #[error("identity of object {obj} has endpoints ({src}, {tgt})")]
    BadIdentity { obj: usize, src: usize, tgt: usize },
    #[error("composite {g} . {f} missing from the table")]
    MissingComposite { g: usize, f: usize },
    #[error("composite {g} . {f} defined but endpoints do not match")]
    SpuriousComposite { g: usize, f: usize },
    #[error("composite {g} . {f} = {gf} has wrong endpoints")]
    IllTypedComposite { g: usize, f: usize, gf: usize },
    #[error("unit law fails at morphism {0}")]
    UnitLaw(usize),
    #[error("associativity fails on ({h}, {g}, {f})")]
    Associativity { h: usize, g: usize, f: usize },
    #[error("morphisms {f} and {g} are not composable")]
    NotComposable { g: usize, f: usize },
    #[error("enumeration budget {0} exhausted")]
    Budget(u64),
    #[error("relation is not a partial order")]
    NotPoset,
    #[error("retraction grid equations fail")]
    GridEquations,
    #[error("middle vertical of the grid does not split on the required side")]
    NotSplit,
    #[error("functor image square fails universality in an oracle target")]
    OracleFailure,
}

/// A finite category: morphisms are indices into a single table, with a
/// dense partial composition table `comp[g][f] = g . f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: usize,
    srcs: Vec<usize>,
    tgts: Vec<usize>,
    ids: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    pub fn new(
        objects: usize,
        endpoints: Vec<(usize, usize)>,
        ids: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, CatError> {
        let cat = FiniteCategory {
            objects,
            srcs: endpoints.iter().map(|e| e.0).collect(),
            tgts: endpoints.iter().map(|e| e.1).collect(),
            ids,
            comp,
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<(), CatError> {
        let m = self.srcs.len();
        if self.ids.len() != self.objects || self.comp.len() != m {
            return Err(CatError::BadObject(self.objects));
        }
        for (x, &i) in self.ids.iter().enumerate() {
            if i >= m {
                return Err(CatError::BadMorphism(i));
            }
            if self.srcs[i] != x || self.tgts[i] != x {
                return Err(CatError::BadIdentity { obj: x, src: self.srcs[i], tgt: self.tgts[i] });
            }
        }
        for f in 0..m {
            if self.srcs[f] >= self.objects || self.tgts[f] >= self.objects {
                return Err(CatError::BadMorphism(f));
            }
            if self.comp[f].len() != m {
                return Err(CatError::MissingComposite { g: f, f: 0 });
            }
        }
        for g in 0..m {
            for f in 0..m {
                match self.comp[g][f] {
                    Some(gf) => {
                        if self.tgts[f] != self.srcs[g] {
                            return Err(CatError::SpuriousComposite { g, f });
                        }
                        if gf >= m || self.srcs[gf] != self.srcs[f] || self.tgts[gf] != self.tgts[g]
                        {
                            return Err(CatError::IllTypedComposite { g, f, gf });
                        }
                    }
                    None => {
                        if self.tgts[f] == self.srcs[g] {
                            return Err(CatError::MissingComposite { g, f });
                        }
                    }
                }
            }
        }
        for f in 0..m {
            if self.comp[self.ids[self.tgts[f]]][f] != Some(f)
                || self.comp[f][self.ids[self.srcs[f]]] != Some(f)
            {
                return Err(CatError::UnitLaw(f));
            }
        }
        for h in 0..m {
            for g in 0..m {
                if let Some(hg) = self.comp[h][g] {
                    for f in 0..m {
                        if let Some(gf) = self.comp[g][f] {
                            if self.comp[h][gf] != self.comp[hg][f] {
                                return Err(CatError::Associativity { h, g, f });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn morphisms(&self) -> usize {
        self.srcs.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.srcs[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgts[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.ids[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.ids[self.srcs[f]] == f
    }

    pub fn compose(&self, g: usize, f: usize) -> Result<usize, CatError> {
        self.comp[g][f].ok_or(CatError::NotComposable { g, f })
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms()).filter(|&f| self.srcs[f] == x && self.tgts[f] == y).collect()
    }

    /// Two-sided inverse, if one exists.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (x, y) = (self.srcs[f], self.tgts[f]);
        self.hom(y, x).into_iter().find(|&g| {
            self.comp[g][f] == Some(self.ids[x]) && self.comp[f][g] == Some(self.ids[y])
        })
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn terminal_objects(&self) -> Vec<usize> {
        (0..self.objects)
            .filter(|&t| (0..self.objects).all(|a| self.hom(a, t).len() == 1))
            .collect()
    }

    pub fn initial_objects(&self) -> Vec<usize> {
        (0..self.objects)
            .filter(|&s| (0..self.objects).all(|a| self.hom(s, a).len() == 1))
            .collect()
    }

    /// Builds a category from composable generator data by taking all the
    /// listed morphisms as the full morphism set; the caller supplies the
    /// complete composition relation as triples `(g, f, gf)`.
    pub fn from_table(
        objects: usize,
        endpoints: Vec<(usize, usize)>,
        ids: Vec<usize>,
        triples: &[(usize, usize, usize)],
    ) -> Result<Self, CatError> {
        let m = endpoints.len();
        let mut comp = vec![vec![None; m]; m];
        for &(g, f, gf) in triples {
            if g >= m || f >= m || gf >= m {
                return Err(CatError::BadMorphism(g.max(f).max(gf)));
            }
            comp[g][f] = Some(gf);
        }
        // unit composites may be omitted by the caller; fill them in
        for f in 0..m {
            let (s, t) = endpoints[f];
            if s < objects && t < objects && ids.len() == objects {
                comp[ids[t]][f] = Some(f);
                comp[f][ids[s]] = Some(f);
            }
        }
        Self::new(objects, endpoints, ids, comp)
    }

    pub fn discrete(n: usize) -> Self {
        let endpoints = (0..n).map(|x| (x, x)).collect();
        let ids = (0..n).collect();
        Self::from_table(n, endpoints, ids, &[]).expect("discrete category is valid")
    }

    /// The poset category of a reflexive-transitive-antisymmetric relation.
    pub fn from_poset(n: usize, leq: &[Vec<bool>]) -> Result<Self, CatError> {
        for a in 0..n {
            if !leq[a][a] {
                return Err(CatError::NotPoset);
            }
            for b in 0..n {
                if leq[a][b] && leq[b][a] && a != b {
                    return Err(CatError::NotPoset);
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(CatError::NotPoset);
                    }
                }
            }
        }
        let mut endpoints = Vec::new();
        let mut index = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] {
                    index[a][b] = Some(endpoints.len());
                    endpoints.push((a, b));
                }
            }
        }
        let ids = (0..n).map(|a| index[a][a].unwrap()).collect();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if leq[a][b] && leq[b][c] {
                        triples.push((index[b][c].unwrap(), index[a][b].unwrap(), index[a][c].unwrap()));
                    }
                }
            }
        }
        Self::from_table(n, endpoints, ids, &triples)
    }

    /// The linear order `0 -> 1 -> ... -> n` as a category.
    pub fn chain(n: usize) -> Self {
        let leq: Vec<Vec<bool>> = (0..=n).map(|a| (0..=n).map(|b| a <= b).collect()).collect();
        Self::from_poset(n + 1, &leq).expect("chain is a poset")
    }

    /// Two objects and a single isomorphism between them.
    pub fn walking_iso() -> Self {
        // morphisms: 0 = id_0, 1 = id_1, 2 = u: 0 -> 1, 3 = v: 1 -> 0
        Self::from_table(
            2,
            vec![(0, 0), (1, 1), (0, 1), (1, 0)],
            vec![0, 1],
            &[(3, 2, 0), (2, 3, 1)],
        )
        .expect("walking isomorphism is valid")
    }

    /// Full subcategory on the given objects (with duplicates removed);
    /// returns the subcategory, the object embedding, and the morphism
    /// embedding into `self`.
    pub fn full_subcategory(&self, objs: &[usize]) -> (FiniteCategory, Vec<usize>, Vec<usize>) {
        let mut kept_objs: Vec<usize> = objs.to_vec();
        kept_objs.sort_unstable();
        kept_objs.dedup();
        let obj_back: Vec<Option<usize>> = {
            let mut v = vec![None; self.objects];
            for (new, &old) in kept_objs.iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let kept_mors: Vec<usize> = (0..self.morphisms())
            .filter(|&f| obj_back[self.srcs[f]].is_some() && obj_back[self.tgts[f]].is_some())
            .collect();
        let mor_back: Vec<Option<usize>> = {
            let mut v = vec![None; self.morphisms()];
            for (new, &old) in kept_mors.iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let endpoints = kept_mors
            .iter()
            .map(|&f| (obj_back[self.srcs[f]].unwrap(), obj_back[self.tgts[f]].unwrap()))
            .collect();
        let ids = kept_objs.iter().map(|&x| mor_back[self.ids[x]].unwrap()).collect();
        let mut comp = vec![vec![None; kept_mors.len()]; kept_mors.len()];
        for (gi, &g) in kept_mors.iter().enumerate() {
            for (fi, &f) in kept_mors.iter().enumerate() {
                if let Some(gf) = self.comp[g][f] {
                    comp[gi][fi] = Some(mor_back[gf].expect("composite stays in subcategory"));
                }
            }
        }
        let sub = FiniteCategory::new(kept_objs.len(), endpoints, ids, comp)
            .expect("full subcategory is valid");
        (sub, kept_objs, kept_mors)
    }
}

/// A functor between finite categories, stored by its object and morphism
/// value tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl Functor {
    pub fn identity(a: &FiniteCategory) -> Self {
        Functor { obj_map: (0..a.objects).collect(), mor_map: (0..a.morphisms()).collect() }
    }

    pub fn validate(&self, a: &FiniteCategory, b: &FiniteCategory) -> Result<(), CatError> {
        if self.obj_map.len() != a.objects || self.mor_map.len() != a.morphisms() {
            return Err(CatError::BadObject(self.obj_map.len()));
        }
        for f in 0..a.morphisms() {
            let ff = self.mor_map[f];
            if ff >= b.morphisms() {
                return Err(CatError::BadMorphism(ff));
            }
            if b.src(ff) != self.obj_map[a.src(f)] || b.tgt(ff) != self.obj_map[a.tgt(f)] {
                return Err(CatError::IllTypedComposite { g: f, f, gf: ff });
            }
        }
        for x in 0..a.objects {
            if self.mor_map[a.identity(x)] != b.identity(self.obj_map[x]) {
                return Err(CatError::UnitLaw(x));
            }
        }
        for g in 0..a.morphisms() {
            for f in 0..a.morphisms() {
                if let Ok(gf) = a.compose(g, f) {
                    let want = b.compose(self.mor_map[g], self.mor_map[f])?;
                    if self.mor_map[gf] != want {
                        return Err(CatError::Associativity { h: g, g: f, f: gf });
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite functor `g . f` where `f: A -> B`, `g: B -> C`.
    pub fn compose(g: &Functor, f: &Functor) -> Functor {
        Functor {
            obj_map: f.obj_map.iter().map(|&x| g.obj_map[x]).collect(),
            mor_map: f.mor_map.iter().map(|&m| g.mor_map[m]).collect(),
        }
    }
}

/// All functors `a -> b`, by backtracking over object images and then
/// non-identity morphism images along a precomputed assignment order in
/// which most images are forced as composites of earlier ones.
pub fn all_functors(
    a: &FiniteCategory,
    b: &FiniteCategory,
    budget: u64,
) -> Result<Vec<Functor>, CatError> {
    let m = a.morphisms();

    // decompositions f = g . h with both factors non-identity
    let mut decomps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for g in 0..m {
        if a.is_identity(g) {
            continue;
        }
        for h in 0..m {
            if a.is_identity(h) {
                continue;
            }
            if let Ok(c) = a.compose(g, h) {
                decomps[c].push((g, h));
            }
        }
    }

    // assignment plan: each non-identity morphism is either free or forced
    // via a decomposition whose factors appear earlier in the plan; the plan
    // depends only on `a`, so the search loop below does no scanning
    enum Step {
        Free(usize),
        Forced(usize, usize, usize),
    }
    let mut planned: Vec<bool> = (0..m).map(|f| a.is_identity(f)).collect();
    let mut pos_of = vec![usize::MAX; m];
    let mut plan: Vec<Step> = Vec::new();
    loop {
        let forced = (0..m).filter(|&f| !planned[f]).find_map(|f| {
            decomps[f]
                .iter()
                .find(|&&(g, h)| planned[g] && planned[h])
                .map(|&(g, h)| (f, g, h))
        });
        if let Some((f, g, h)) = forced {
            pos_of[f] = plan.len();
            plan.push(Step::Forced(f, g, h));
            planned[f] = true;
        } else if let Some(f) = (0..m).find(|&f| !planned[f]) {
            pos_of[f] = plan.len();
            plan.push(Step::Free(f));
            planned[f] = true;
        } else {
            break;
        }
    }

    // composition equations among non-identities, each checked at the first
    // plan position where all participating images exist
    let mut eq_sched: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); plan.len()];
    for g in 0..m {
        if a.is_identity(g) {
            continue;
        }
        for h in 0..m {
            if a.is_identity(h) {
                continue;
            }
            if let Ok(c) = a.compose(g, h) {
                let pc = if a.is_identity(c) { 0 } else { pos_of[c] };
                let p = pos_of[g].max(pos_of[h]).max(pc);
                eq_sched[p].push((g, h, c));
            }
        }
    }

    // candidate images per object pair of the target, computed once
    let homs: Vec<Vec<Vec<usize>>> =
        (0..b.objects).map(|x| (0..b.objects).map(|y| b.hom(x, y)).collect()).collect();

    struct Ctx<'c> {
        a: &'c FiniteCategory,
        b: &'c FiniteCategory,
        plan: &'c [Step],
        eq_sched: &'c [Vec<(usize, usize, usize)>],
        homs: &'c [Vec<Vec<usize>>],
        out: Vec<Functor>,
        visited: u64,
        budget: u64,
    }

    fn eqs_hold(ctx: &Ctx, mor_map: &[usize], p: usize) -> Result<bool, CatError> {
        for &(g, h, c) in &ctx.eq_sched[p] {
            if ctx.b.compose(mor_map[g], mor_map[h])? != mor_map[c] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn walk_plan(
        ctx: &mut Ctx,
        p: usize,
        obj_map: &[usize],
        mor_map: &mut Vec<usize>,
    ) -> Result<(), CatError> {
        if p == ctx.plan.len() {
            ctx.out.push(Functor { obj_map: obj_map.to_vec(), mor_map: mor_map.clone() });
            return Ok(());
        }
        match ctx.plan[p] {
            Step::Forced(f, g, h) => {
                ctx.visited += 1;
                if ctx.visited > ctx.budget {
                    return Err(CatError::Budget(ctx.budget));
                }
                mor_map[f] = ctx.b.compose(mor_map[g], mor_map[h])?;
                if eqs_hold(ctx, mor_map, p)? {
                    walk_plan(ctx, p + 1, obj_map, mor_map)?;
                }
                mor_map[f] = usize::MAX;
            }
            Step::Free(f) => {
                let (x, y) = (obj_map[ctx.a.src(f)], obj_map[ctx.a.tgt(f)]);
                for i in 0..ctx.homs[x][y].len() {
                    ctx.visited += 1;
                    if ctx.visited > ctx.budget {
                        return Err(CatError::Budget(ctx.budget));
                    }
                    mor_map[f] = ctx.homs[x][y][i];
                    if eqs_hold(ctx, mor_map, p)? {
                        walk_plan(ctx, p + 1, obj_map, mor_map)?;
                    }
                }
                mor_map[f] = usize::MAX;
            }
        }
        Ok(())
    }

    fn assign_objs(
        ctx: &mut Ctx,
        x: usize,
        obj_map: &mut Vec<usize>,
        mor_map: &mut Vec<usize>,
    ) -> Result<(), CatError> {
        if x == ctx.a.objects {
            for y in 0..ctx.a.objects {
                mor_map[ctx.a.identity(y)] = ctx.b.identity(obj_map[y]);
            }
            // composites of identities are identities; nothing to check yet
            return walk_plan(ctx, 0, obj_map, mor_map);
        }
        for cand in 0..ctx.b.objects {
            ctx.visited += 1;
            if ctx.visited > ctx.budget {
                return Err(CatError::Budget(ctx.budget));
            }
            obj_map[x] = cand;
            assign_objs(ctx, x + 1, obj_map, mor_map)?;
        }
        Ok(())
    }

    let mut obj_map = vec![0usize; a.objects];
    let mut mor_map = vec![usize::MAX; m];
    let mut ctx = Ctx {
        a,
        b,
        plan: &plan,
        eq_sched: &eq_sched,
        homs: &homs,
        out: Vec::new(),
        visited: 0,
        budget,
    };
    assign_objs(&mut ctx, 0, &mut obj_map, &mut mor_map)?;
    Ok(ctx.out)
}

/// All natural transformations `F => G` for functors `a -> b`, as component
/// tables indexed by objects of `a`.
pub fn natural_transformations(
    a: &FiniteCategory,
    b: &FiniteCategory,
    f: &Functor,
    g: &Functor,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut comps = vec![usize::MAX; a.objects];
    fn rec(
        a: &FiniteCategory,
        b: &FiniteCategory,
        f: &Functor,
        g: &Functor,
        x: usize,
        comps: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == a.objects {
            out.push(comps.clone());
            return;
        }
        for cand in b.hom(f.obj_map[x], g.obj_map[x]) {
            comps[x] = cand;
            let ok = (0..a.morphisms()).all(|m| {
                let (s, t) = (a.src(m), a.tgt(m));
                if comps.get(s).copied().unwrap_or(usize::MAX) == usize::MAX
                    || comps.get(t).copied().unwrap_or(usize::MAX) == usize::MAX
                    || (s != x && t != x)
                {
                    return true;
                }
                let lhs = b.compose(g.mor_map[m], comps[s]).expect("typed");
                let rhs = b.compose(comps[t], f.mor_map[m]).expect("typed");
                lhs == rhs
            });
            if ok {
                rec(a, b, f, g, x + 1, comps, out);
            }
            comps[x] = usize::MAX;
        }
    }
    rec(a, b, f, g, 0, &mut comps, &mut out);
    out
}

/// Natural isomorphisms `F => G`: natural transformations whose components
/// are all invertible.
pub fn natural_isos(
    a: &FiniteCategory,
    b: &FiniteCategory,
    f: &Functor,
    g: &Functor,
) -> Vec<Vec<usize>> {
    natural_transformations(a, b, f, g)
        .into_iter()
        .filter(|comps| comps.iter().all(|&c| b.is_iso(c)))
        .collect()
}

/// A commuting square `x --top--> y, x --left--> z, y --right--> w,
/// z --bottom--> w` given by morphism indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Square {
    pub top: usize,
    pub left: usize,
    pub right: usize,
    pub bottom: usize,
}

impl Square {
    pub fn commutes(&self, c: &FiniteCategory) -> bool {
        c.tgt(self.top) == c.src(self.right)
            && c.tgt(self.left) == c.src(self.bottom)
            && c.src(self.top) == c.src(self.left)
            && c.tgt(self.right) == c.tgt(self.bottom)
            && c.compose(self.right, self.top).ok() == c.compose(self.bottom, self.left).ok()
    }
}

/// Universality check: the square's initial corner is a pullback of the
/// cospan formed by `right` and `bottom`.
pub fn is_pullback_square(c: &FiniteCategory, sq: &Square) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let apex = c.src(sq.top);
    for x in 0..c.objects {
        for u in c.hom(x, c.tgt(sq.top)) {
            for v in c.hom(x, c.tgt(sq.left)) {
                if c.compose(sq.right, u).ok() != c.compose(sq.bottom, v).ok() {
                    continue;
                }
                let mediators: Vec<usize> = c
                    .hom(x, apex)
                    .into_iter()
                    .filter(|&w| {
                        c.compose(sq.top, w).ok() == Some(u)
                            && c.compose(sq.left, w).ok() == Some(v)
                    })
                    .collect();
                if mediators.len() != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Universality check: the square's final corner is a pushout of the span
/// formed by `top` and `left`.
pub fn is_pushout_square(c: &FiniteCategory, sq: &Square) -> bool {
    if !sq.commutes(c) {
        return false;
    }
    let nadir = c.tgt(sq.right);
    for x in 0..c.objects {
        for u in c.hom(c.tgt(sq.top), x) {
            for v in c.hom(c.tgt(sq.left), x) {
                if c.compose(u, sq.top).ok() != c.compose(v, sq.left).ok() {
                    continue;
                }
                let mediators: Vec<usize> = c
                    .hom(nadir, x)
                    .into_iter()
                    .filter(|&w| {
                        c.compose(w, sq.right).ok() == Some(u)
                            && c.compose(w, sq.bottom).ok() == Some(v)
                    })
                    .collect();
                if mediators.len() != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// The two-row retraction diagram
///
/// ```text
///   A --d--> B --s--> A        s . d = id_A
///   |i       |j       |i
///   A'--d'-> B'--s'-> A'       s' . d' = id_A'
/// ```
///
/// When the middle vertical splits, one of the outer squares is an
/// absolute (co)limit: a split mono `j` certifies the left square as an
/// absolute pullback, a split epi `j` the right square as an absolute
/// pushout.
#[derive(Debug, Clone, Copy)]
pub struct RetractGrid {
    pub d: usize,
    pub s: usize,
    pub d2: usize,
    pub s2: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareSide {
    Pullback,
    Pushout,
}

/// Certificate produced by [`check_absolute_square`]: the verified
/// retraction equations plus the splitting witness for the middle vertical.
#[derive(Debug, Clone)]
pub struct AbsoluteSquareCertificate {
    pub side: SquareSide,
    pub square: Square,
    /// retraction (pullback case) or section (pushout case) of `j`
    pub split_witness: usize,
}

/// Verifies the retraction equations of the grid and the splitting of the
/// middle vertical, and returns the certified square. The certificate is
/// purely equational, so the certified square is preserved by every functor;
/// `absolute_square_oracle` confirms this by brute force.
pub fn check_absolute_square(
    c: &FiniteCategory,
    grid: &RetractGrid,
    side: SquareSide,
) -> Result<AbsoluteSquareCertificate, CatError> {
    let RetractGrid { d, s, d2, s2, i, j } = *grid;
    let a = c.src(d);
    let a2 = c.src(d2);
    let retract_ok = c.compose(s, d)? == c.identity(a) && c.compose(s2, d2)? == c.identity(a2);
    let left = Square { top: d, left: i, right: j, bottom: d2 };
    let right = Square { top: s, left: j, right: i, bottom: s2 };
    if !retract_ok || !left.commutes(c) || !right.commutes(c) {
        return Err(CatError::GridEquations);
    }
    let witness = match side {
        SquareSide::Pullback => c
            .hom(c.tgt(j), c.src(j))
            .into_iter()
            .find(|&r| c.compose(r, j).ok() == Some(c.identity(c.src(j)))),
        SquareSide::Pushout => c
            .hom(c.tgt(j), c.src(j))
            .into_iter()
            .find(|&r| c.compose(j, r).ok() == Some(c.identity(c.tgt(j)))),
    }
    .ok_or(CatError::NotSplit)?;
    let square = match side {
        SquareSide::Pullback => left,
        SquareSide::Pushout => right,
    };
    Ok(AbsoluteSquareCertificate { side, square, split_witness: witness })
}

/// Streams every category with at most `max_obj` objects and `max_mor`
/// morphisms (identities included) to the visitor. Morphism layout: the
/// first `objects` morphisms are the identities, in object order.
pub fn for_each_small_category(
    max_obj: usize,
    max_mor: usize,
    mut visit: impl FnMut(&FiniteCategory),
) {
    for objects in 1..=max_obj {
        if objects > max_mor {
            continue;
        }
        for extra in 0..=(max_mor - objects) {
            let mut endpoints: Vec<(usize, usize)> = (0..objects).map(|x| (x, x)).collect();
            endpoints.resize(objects + extra, (0, 0));
            enumerate_profiles(objects, extra, &mut endpoints, 0, &mut visit);
        }
    }
}

fn enumerate_profiles(
    objects: usize,
    extra: usize,
    endpoints: &mut Vec<(usize, usize)>,
    pos: usize,
    visit: &mut impl FnMut(&FiniteCategory),
) {
    if pos == extra {
        fill_tables(objects, endpoints, visit);
        return;
    }
    for s in 0..objects {
        for t in 0..objects {
            // profiles are generated in nondecreasing lexicographic order of
            // (src, tgt) so relabeled copies of the same multiset appear once
            if pos > 0 && endpoints[objects + pos - 1] > (s, t) {
                continue;
            }
            endpoints[objects + pos] = (s, t);
            enumerate_profiles(objects, extra, endpoints, pos + 1, visit);
        }
    }
}

fn fill_tables(
    objects: usize,
    endpoints: &[(usize, usize)],
    visit: &mut impl FnMut(&FiniteCategory),
) {
    let m = endpoints.len();
    let mut comp: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    // unit laws are forced
    for f in 0..m {
        let (s, t) = endpoints[f];
        comp[t][f] = Some(f); // identity of tgt is morphism index t
        comp[f][s] = Some(f);
    }
    // entries still to choose: composable pairs of non-identity morphisms
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for g in objects..m {
        for f in objects..m {
            if endpoints[f].1 == endpoints[g].0 {
                slots.push((g, f));
            }
        }
    }
    // incremental associativity: after assigning comp[g][f], only triples
    // that read the new cell can newly fail
    fn triple_ok(
        comp: &[Vec<Option<usize>>],
        h: usize,
        g: usize,
        f: usize,
    ) -> bool {
        let (Some(hg), Some(gf)) = (comp[h][g], comp[g][f]) else { return true };
        match (comp[h][gf], comp[hg][f]) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
    fn new_cell_ok(
        comp: &[Vec<Option<usize>>],
        endpoints: &[(usize, usize)],
        m: usize,
        g: usize,
        f: usize,
    ) -> bool {
        for h in 0..m {
            if endpoints[g].1 == endpoints[h].0 && !triple_ok(comp, h, g, f) {
                return false;
            }
            if endpoints[h].1 == endpoints[f].0 && !triple_ok(comp, g, f, h) {
                return false;
            }
        }
        // the new cell can also complete a triple as one of its outer
        // composites: comp[h][g2 f2] with h = g, or comp[h2 g2][f2] with
        // f2 = f, where the inner composite equals the relevant index
        for a in 0..m {
            for b in 0..m {
                if endpoints[b].1 != endpoints[a].0 {
                    continue;
                }
                match comp[a][b] {
                    Some(c) if c == f => {
                        if !triple_ok(comp, g, a, b) {
                            return false;
                        }
                    }
                    _ => {}
                }
                match comp[a][b] {
                    Some(c) if c == g => {
                        if !triple_ok(comp, a, b, f) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
    fn rec(
        objects: usize,
        endpoints: &[(usize, usize)],
        comp: &mut Vec<Vec<Option<usize>>>,
        slots: &[(usize, usize)],
        pos: usize,
        visit: &mut impl FnMut(&FiniteCategory),
    ) {
        let m = endpoints.len();
        if pos == slots.len() {
            let cat = FiniteCategory {
                objects,
                srcs: endpoints.iter().map(|e| e.0).collect(),
                tgts: endpoints.iter().map(|e| e.1).collect(),
                ids: (0..objects).collect(),
                comp: comp.clone(),
            };
            debug_assert!(cat.validate().is_ok());
            visit(&cat);
            return;
        }
        let (g, f) = slots[pos];
        let (fs, _ft) = endpoints[f];
        let gt = endpoints[g].1;
        for cand in 0..m {
            if endpoints[cand] != (fs, gt) {
                continue;
            }
            comp[g][f] = Some(cand);
            if new_cell_ok(comp, endpoints, m, g, f) {
                rec(objects, endpoints, comp, slots, pos + 1, visit);
            }
            comp[g][f] = None;
        }
    }
    rec(objects, endpoints, &mut comp, &slots, 0, visit);
}

/// Brute-force confirmation that a certified square is preserved by every
/// functor into every category with at most `max_obj` objects and `max_mor`
/// morphisms. Returns (targets checked, functors checked).
pub fn absolute_square_oracle(
    c: &FiniteCategory,
    cert: &AbsoluteSquareCertificate,
    max_obj: usize,
    max_mor: usize,
    budget_per_target: u64,
) -> Result<(u64, u64), CatError> {
    let mut targets: u64 = 0;
    let mut functors: u64 = 0;
    let mut failure: Option<CatError> = None;
    for_each_small_category(max_obj, max_mor, |t| {
        if failure.is_some() {
            return;
        }
        targets += 1;
        let fs = match all_functors(c, t, budget_per_target) {
            Ok(fs) => fs,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        // distinct functors often share an image square; check each image once
        let mut seen: std::collections::HashSet<(usize, usize, usize, usize)> =
            std::collections::HashSet::new();
        for f in fs {
            functors += 1;
            let image = Square {
                top: f.mor_map[cert.square.top],
                left: f.mor_map[cert.square.left],
                right: f.mor_map[cert.square.right],
                bottom: f.mor_map[cert.square.bottom],
            };
            if !seen.insert((image.top, image.left, image.right, image.bottom)) {
                continue;
            }
            let ok = match cert.side {
                SquareSide::Pullback => is_pullback_square(t, &image),
                SquareSide::Pushout => is_pushout_square(t, &image),
            };
            if !ok {
                failure = Some(CatError::Associativity {
                    h: cert.square.top,
                    g: cert.square.left,
                    f: cert.square.right,
                });
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok((targets, functors)),
    }
}

/// Full subcategory of the simplex category on the listed dimensions,
/// together with the dictionary between morphism indices and monotone maps.
pub struct DeltaSubcategory {
    pub cat: FiniteCategory,
    pub dims: Vec<usize>,
    pub maps: Vec<crate::delta::MonotoneMap>,
}

impl DeltaSubcategory {
    pub fn new(dims: &[usize]) -> Self {
        use crate::delta::MonotoneMap;
        assert!(!dims.is_empty(), "at least one dimension");
        assert!(dims.windows(2).all(|w| w[0] < w[1]), "dimensions strictly ascending");
        let mut maps: Vec<MonotoneMap> = Vec::new();
        let mut endpoints: Vec<(usize, usize)> = Vec::new();
        for (x, &dx) in dims.iter().enumerate() {
            for (y, &dy) in dims.iter().enumerate() {
                for m in MonotoneMap::enumerate(dx, dy) {
                    maps.push(m);
                    endpoints.push((x, y));
                }
            }
        }
        let ids: Vec<usize> = dims
            .iter()
            .map(|&dx| {
                maps.iter()
                    .position(|m| m.dom() == dx && m.cod() == dx && m.is_identity())
                    .expect("identity enumerated")
            })
            .collect();
        let find = |m: &MonotoneMap| maps.iter().position(|x| x == m).expect("closed");
        let comp: Vec<Vec<Option<usize>>> = maps
            .iter()
            .map(|g| {
                maps.iter()
                    .map(|f| {
                        if f.cod() == g.dom() {
                            Some(find(&MonotoneMap::compose(g, f).expect("composable")))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let cat = FiniteCategory::new(dims.len(), endpoints, ids, comp)
            .expect("simplex subcategory is a category");
        DeltaSubcategory { cat, dims: dims.to_vec(), maps }
    }

    pub fn morphism_of(&self, m: &crate::delta::MonotoneMap) -> Option<usize> {
        self.maps.iter().position(|x| x == m)
    }
}

/// The split-degeneracy grid witnessing that distinct degeneracies push out
/// absolutely: rows `d_i`-section / `s_i`-retraction at consecutive levels,
/// verticals built from `s_j`. Requires `i < j <= n-1`, `n >= 2`. The
/// certified square is the right-hand (pushout) one.
pub fn absolute_pushout_in_delta(
    n: usize,
    i: usize,
    j: usize,
) -> Result<(DeltaSubcategory, AbsoluteSquareCertificate), CatError> {
    use crate::delta::MonotoneMap;
    assert!(n >= 2 && i < j && j <= n - 1, "need i < j <= n-1 and n >= 2");
    let delta = DeltaSubcategory::new(&[n - 2, n - 1, n]);
    let of = |m: MonotoneMap| delta.morphism_of(&m).expect("in subcategory");
    let grid = RetractGrid {
        d: of(MonotoneMap::face(n, i).expect("face")),
        s: of(MonotoneMap::degeneracy(n - 1, i).expect("degeneracy")),
        d2: of(MonotoneMap::face(n - 1, i).expect("face")),
        s2: of(MonotoneMap::degeneracy(n - 2, i).expect("degeneracy")),
        i: of(MonotoneMap::degeneracy(n - 2, j - 1).expect("degeneracy")),
        j: of(MonotoneMap::degeneracy(n - 1, j).expect("degeneracy")),
    };
    let cert = check_absolute_square(&delta.cat, &grid, SquareSide::Pushout)?;
    Ok((delta, cert))
}

/// The split-face grid witnessing that `d_i` pulls back absolutely along
/// the top face inclusions: verticals `d_n`, `d_{n+1}`. Requires
/// `i < n`. The certified square is the left-hand (pullback) one.
pub fn absolute_pullback_in_delta(
    n: usize,
    i: usize,
) -> Result<(DeltaSubcategory, AbsoluteSquareCertificate), CatError> {
    use crate::delta::MonotoneMap;
    assert!(n >= 1 && i < n, "need i < n");
    let delta = DeltaSubcategory::new(&[n - 1, n, n + 1]);
    let of = |m: MonotoneMap| delta.morphism_of(&m).expect("in subcategory");
    let grid = RetractGrid {
        d: of(MonotoneMap::face(n, i).expect("face")),
        s: of(MonotoneMap::degeneracy(n - 1, i).expect("degeneracy")),
        d2: of(MonotoneMap::face(n + 1, i).expect("face")),
        s2: of(MonotoneMap::degeneracy(n, i).expect("degeneracy")),
        i: of(MonotoneMap::face(n, n).expect("face")),
        j: of(MonotoneMap::face(n + 1, n + 1).expect("face")),
    };
    let cert = check_absolute_square(&delta.cat, &grid, SquareSide::Pullback)?;
    Ok((delta, cert))
}
