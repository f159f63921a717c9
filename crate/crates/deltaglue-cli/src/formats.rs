//! Parsers and serializers for the six text formats: SSET v1, CAT v1,
//! MAP v1, DIAGRAM v1, GEO v1, and EXTEND v1. Every format is
//! line-oriented with explicit counts and a closing `end`; blank lines and
//! `#` comments are skipped anywhere. Parsing always ends in the library
//! validator for the object, so a file that parses but violates a
//! structural identity is rejected with the validator's message.

use deltaglue::cat::{CatError, FiniteCategory, Functor};
use deltaglue::diagrams::{DiagramError, SSetDiagram, SimplexCategory};
use deltaglue::gluing::{GeoCategory, GluingError, SupportDatum, ValueAssignment};
use deltaglue::marked::{flat, MarkedError, MarkedSimplicialSet};
use deltaglue::sset::{SimplicialMap, SsetError, TruncatedSimplicialSet};

use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Marked(#[from] MarkedError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

#[derive(Debug, Clone)]
struct Tok {
    col: usize,
    text: String,
}

#[derive(Debug, Clone)]
struct Line {
    number: usize,
    toks: Vec<Tok>,
}

impl Line {
    fn keyword(&self) -> &str {
        &self.toks[0].text
    }

    fn syntax(&self, col: usize, msg: impl Into<String>) -> FormatError {
        FormatError::Syntax { line: self.number, col, msg: msg.into() }
    }

    fn end_col(&self) -> usize {
        let last = self.toks.last().expect("token lines are nonempty");
        last.col + last.text.len()
    }

    /// The token at position `k` parsed as an index.
    fn int(&self, k: usize) -> Result<usize, FormatError> {
        let tok = self
            .toks
            .get(k)
            .ok_or_else(|| self.syntax(self.end_col(), format!("expected a value at position {k}")))?;
        tok.text
            .parse::<usize>()
            .map_err(|_| self.syntax(tok.col, format!("expected a nonnegative integer, found `{}`", tok.text)))
    }

    /// Exactly `n` tokens on the line, keyword included.
    fn arity(&self, n: usize) -> Result<(), FormatError> {
        if self.toks.len() < n {
            return Err(self.syntax(
                self.end_col(),
                format!("expected {n} token(s) on this line, found {}", self.toks.len()),
            ));
        }
        if self.toks.len() > n {
            let extra = &self.toks[n];
            return Err(self.syntax(extra.col, format!("unexpected trailing token `{}`", extra.text)));
        }
        Ok(())
    }

    /// All tokens from position `k` to the end, parsed as indices.
    fn ints_from(&self, k: usize) -> Result<Vec<usize>, FormatError> {
        (k..self.toks.len()).map(|p| self.int(p)).collect()
    }

    /// Requires the token at `k` to equal the expected index (catches rows
    /// emitted out of canonical order).
    fn fixed(&self, k: usize, want: usize, what: &str) -> Result<(), FormatError> {
        let got = self.int(k)?;
        if got != want {
            return Err(self.syntax(self.toks[k].col, format!("expected {what} {want}, found {got}")));
        }
        Ok(())
    }
}

struct Cursor {
    lines: Vec<Line>,
    pos: usize,
    eof_line: usize,
}

impl Cursor {
    fn new(text: &str) -> Cursor {
        let mut lines = Vec::new();
        let mut eof_line = 1;
        for (i, raw) in text.lines().enumerate() {
            eof_line = i + 2;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let mut toks = Vec::new();
            let mut start: Option<usize> = None;
            for (pos, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        toks.push(Tok { col: s + 1, text: raw[s..pos].to_string() });
                    }
                } else if start.is_none() {
                    start = Some(pos);
                }
            }
            lines.push(Line { number: i + 1, toks });
        }
        Cursor { lines, pos: 0, eof_line }
    }

    fn eof_error(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Syntax { line: self.eof_line, col: 1, msg: msg.into() }
    }

    fn peek_keyword(&self) -> Option<&str> {
        self.lines.get(self.pos).map(|l| l.keyword())
    }

    fn next(&mut self) -> Result<Line, FormatError> {
        let line = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof_error("unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    fn expect(&mut self, keyword: &str) -> Result<Line, FormatError> {
        let line = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof_error(format!("unexpected end of file, expected `{keyword}`")))?;
        if line.keyword() != keyword {
            return Err(line.syntax(
                line.toks[0].col,
                format!("expected `{keyword}`, found `{}`", line.keyword()),
            ));
        }
        self.pos += 1;
        Ok(line)
    }

    /// A `<FORMAT> v1` header line.
    fn header(&mut self, format: &str) -> Result<(), FormatError> {
        let line = self.expect(format)?;
        line.arity(2)?;
        if line.toks[1].text != "v1" {
            return Err(line.syntax(line.toks[1].col, format!("unsupported {format} version `{}`", line.toks[1].text)));
        }
        Ok(())
    }

    fn expect_eof(&self) -> Result<(), FormatError> {
        if let Some(line) = self.lines.get(self.pos) {
            return Err(line.syntax(line.toks[0].col, "trailing content after the closing `end`"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------
// SSET v1

fn parse_sset_block(cur: &mut Cursor) -> Result<(TruncatedSimplicialSet, Vec<bool>), FormatError> {
    cur.header("SSET")?;
    let line = cur.expect("dim_bound")?;
    line.arity(2)?;
    let dim = line.int(1)?;
    let line = cur.expect("counts")?;
    line.arity(2 + dim)?;
    let counts = line.ints_from(1)?;

    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=dim {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let line = cur.expect("face")?;
            line.arity(3 + counts[n])?;
            line.fixed(1, n, "dimension")?;
            line.fixed(2, i, "face index")?;
            per_i.push(line.ints_from(3)?);
        }
        faces.push(per_i);
    }
    let mut degens: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dim + 1);
    for n in 0..dim {
        let mut per_j = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let line = cur.expect("degen")?;
            line.arity(3 + counts[n])?;
            line.fixed(1, n, "dimension")?;
            line.fixed(2, j, "degeneracy index")?;
            per_j.push(line.ints_from(3)?);
        }
        degens.push(per_j);
    }
    degens.push(Vec::new());

    let mut marked_list = Vec::new();
    if cur.peek_keyword() == Some("marked") {
        let line = cur.next()?;
        let k = line.int(1)?;
        line.arity(2 + k)?;
        for p in 0..k {
            let e = line.int(2 + p)?;
            let edges = if dim >= 1 { counts[1] } else { 0 };
            if e >= edges {
                return Err(line.syntax(line.toks[2 + p].col, format!("marked edge {e} out of range (< {edges})")));
            }
            marked_list.push(e);
        }
    }
    cur.expect("end")?.arity(1)?;

    let complex = TruncatedSimplicialSet::new(dim, counts, faces, degens)?;
    let mut mask = flat(&complex).marked;
    for e in marked_list {
        mask[e] = true;
    }
    Ok((complex, mask))
}

pub fn parse_sset(text: &str) -> Result<TruncatedSimplicialSet, FormatError> {
    let mut cur = Cursor::new(text);
    let (complex, _) = parse_sset_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(complex)
}

pub fn parse_marked(text: &str) -> Result<MarkedSimplicialSet, FormatError> {
    let mut cur = Cursor::new(text);
    let (complex, mask) = parse_sset_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(MarkedSimplicialSet::new(complex, mask)?)
}

fn push_row(out: &mut String, keyword: &str, a: usize, b: usize, row: &[usize]) {
    write!(out, "{keyword} {a} {b}").unwrap();
    for v in row {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
}

fn serialize_sset_block(x: &TruncatedSimplicialSet, marked: Option<&[bool]>, out: &mut String) {
    let dim = x.dim_bound();
    out.push_str("SSET v1\n");
    writeln!(out, "dim_bound {dim}").unwrap();
    out.push_str("counts");
    for n in 0..=dim {
        write!(out, " {}", x.count(n)).unwrap();
    }
    out.push('\n');
    for n in 1..=dim {
        for i in 0..=n {
            let row: Vec<usize> = (0..x.count(n)).map(|idx| x.face(n, i, idx)).collect();
            push_row(out, "face", n, i, &row);
        }
    }
    for n in 0..dim {
        for j in 0..=n {
            let row: Vec<usize> = (0..x.count(n)).map(|idx| x.degen(n, j, idx)).collect();
            push_row(out, "degen", n, j, &row);
        }
    }
    if let Some(mask) = marked {
        let m = MarkedSimplicialSet { space: x.clone(), marked: mask.to_vec() };
        let listed = m.nondegenerate_marked();
        if !listed.is_empty() {
            write!(out, "marked {}", listed.len()).unwrap();
            for e in listed {
                write!(out, " {e}").unwrap();
            }
            out.push('\n');
        }
    }
    out.push_str("end\n");
}

pub fn serialize_sset(x: &TruncatedSimplicialSet) -> String {
    let mut out = String::new();
    serialize_sset_block(x, None, &mut out);
    out
}

pub fn serialize_marked(x: &MarkedSimplicialSet) -> String {
    let mut out = String::new();
    serialize_sset_block(&x.space, Some(&x.marked), &mut out);
    out
}

// ---------------------------------------------------------------------
// CAT v1

fn parse_cat_block(cur: &mut Cursor) -> Result<FiniteCategory, FormatError> {
    cur.header("CAT")?;
    let line = cur.expect("objects")?;
    line.arity(2)?;
    let objects = line.int(1)?;
    let line = cur.expect("morphisms")?;
    line.arity(2)?;
    let morphisms = line.int(1)?;
    let mut endpoints = Vec::with_capacity(morphisms);
    for f in 0..morphisms {
        let line = cur.expect("arrow")?;
        line.arity(4)?;
        line.fixed(1, f, "morphism")?;
        endpoints.push((line.int(2)?, line.int(3)?));
    }
    let mut ids = Vec::with_capacity(objects);
    for x in 0..objects {
        let line = cur.expect("identity")?;
        line.arity(3)?;
        line.fixed(1, x, "object")?;
        ids.push(line.int(2)?);
    }
    let line = cur.expect("compose")?;
    line.arity(2)?;
    let k = line.int(1)?;
    let mut triples = Vec::with_capacity(k);
    for _ in 0..k {
        let line = cur.expect("triple")?;
        line.arity(4)?;
        triples.push((line.int(1)?, line.int(2)?, line.int(3)?));
    }
    cur.expect("end")?.arity(1)?;
    Ok(FiniteCategory::from_table(objects, endpoints, ids, &triples)?)
}

pub fn parse_cat(text: &str) -> Result<FiniteCategory, FormatError> {
    let mut cur = Cursor::new(text);
    let cat = parse_cat_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(cat)
}

fn serialize_cat_block(c: &FiniteCategory, out: &mut String) {
    out.push_str("CAT v1\n");
    writeln!(out, "objects {}", c.objects).unwrap();
    writeln!(out, "morphisms {}", c.morphisms()).unwrap();
    for f in 0..c.morphisms() {
        writeln!(out, "arrow {f} {} {}", c.src(f), c.tgt(f)).unwrap();
    }
    for x in 0..c.objects {
        writeln!(out, "identity {x} {}", c.identity(x)).unwrap();
    }
    // unit composites are implied; list the rest
    let mut triples = Vec::new();
    for g in 0..c.morphisms() {
        for f in 0..c.morphisms() {
            if c.tgt(f) == c.src(g) && !c.is_identity(f) && !c.is_identity(g) {
                let gf = c.compose(g, f).expect("composable pair has a composite");
                triples.push((g, f, gf));
            }
        }
    }
    writeln!(out, "compose {}", triples.len()).unwrap();
    for (g, f, gf) in triples {
        writeln!(out, "triple {g} {f} {gf}").unwrap();
    }
    out.push_str("end\n");
}

pub fn serialize_cat(c: &FiniteCategory) -> String {
    let mut out = String::new();
    serialize_cat_block(c, &mut out);
    out
}

// ---------------------------------------------------------------------
// MAP v1

fn parse_map_block(cur: &mut Cursor) -> Result<SimplicialMap, FormatError> {
    cur.header("MAP")?;
    cur.expect("source")?.arity(1)?;
    let (source, _) = parse_sset_block(cur)?;
    cur.expect("target")?.arity(1)?;
    let (target, _) = parse_sset_block(cur)?;
    let mut levels = Vec::with_capacity(source.dim_bound() + 1);
    for n in 0..=source.dim_bound() {
        let line = cur.expect("level")?;
        line.arity(2 + source.count(n))?;
        line.fixed(1, n, "dimension")?;
        levels.push(line.ints_from(2)?);
    }
    cur.expect("end")?.arity(1)?;
    Ok(SimplicialMap::new(source, target, levels)?)
}

pub fn parse_map(text: &str) -> Result<SimplicialMap, FormatError> {
    let mut cur = Cursor::new(text);
    let map = parse_map_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(map)
}

fn serialize_map_block(m: &SimplicialMap, out: &mut String) {
    out.push_str("MAP v1\n");
    out.push_str("source\n");
    serialize_sset_block(&m.source, None, out);
    out.push_str("target\n");
    serialize_sset_block(&m.target, None, out);
    for (n, row) in m.levels.iter().enumerate() {
        write!(out, "level {n}").unwrap();
        for v in row {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
}

pub fn serialize_map(m: &SimplicialMap) -> String {
    let mut out = String::new();
    serialize_map_block(m, &mut out);
    out
}

// ---------------------------------------------------------------------
// DIAGRAM v1

fn parse_levels_until(
    cur: &mut Cursor,
    terminator: &str,
    value_dim: usize,
) -> Result<Vec<Vec<usize>>, FormatError> {
    let mut levels = Vec::with_capacity(value_dim + 1);
    for r in 0..=value_dim {
        let line = cur.expect("level")?;
        line.fixed(1, r, "dimension")?;
        levels.push(line.ints_from(2)?);
    }
    cur.expect(terminator)?.arity(1)?;
    Ok(levels)
}

fn parse_diagram_block(cur: &mut Cursor) -> Result<SSetDiagram, FormatError> {
    cur.header("DIAGRAM")?;
    cur.expect("index")?.arity(1)?;
    let (index, _) = parse_sset_block(cur)?;
    let dim = index.dim_bound();
    let mut values: Vec<Vec<TruncatedSimplicialSet>> = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let mut level = Vec::with_capacity(index.count(n));
        for idx in 0..index.count(n) {
            let line = cur.expect("value")?;
            line.arity(3)?;
            line.fixed(1, n, "dimension")?;
            line.fixed(2, idx, "simplex")?;
            let (v, _) = parse_sset_block(cur)?;
            level.push(v);
        }
        values.push(level);
    }
    let value_dim = values.iter().flatten().next().map(|v| v.dim_bound()).unwrap_or(0);
    let mut face_actions: Vec<Vec<Vec<SimplicialMap>>> = Vec::with_capacity(dim);
    for n in 1..=dim {
        let mut per_tau = Vec::with_capacity(index.count(n));
        for tau in 0..index.count(n) {
            let mut per_i = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let line = cur.expect("faceact")?;
                line.arity(4)?;
                line.fixed(1, n, "dimension")?;
                line.fixed(2, i, "face index")?;
                line.fixed(3, tau, "simplex")?;
                let levels = parse_levels_until(cur, "endact", value_dim)?;
                let src = values[n][tau].clone();
                let tgt = values[n - 1][index.face(n, i, tau)].clone();
                per_i.push(SimplicialMap::new(src, tgt, levels)?);
            }
            per_tau.push(per_i);
        }
        face_actions.push(per_tau);
    }
    let mut degen_actions: Vec<Vec<Vec<SimplicialMap>>> = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut per_tau = Vec::with_capacity(index.count(n));
        for tau in 0..index.count(n) {
            let mut per_j = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let line = cur.expect("degenact")?;
                line.arity(4)?;
                line.fixed(1, n, "dimension")?;
                line.fixed(2, j, "degeneracy index")?;
                line.fixed(3, tau, "simplex")?;
                let levels = parse_levels_until(cur, "endact", value_dim)?;
                let src = values[n][tau].clone();
                let tgt = values[n + 1][index.degen(n, j, tau)].clone();
                per_j.push(SimplicialMap::new(src, tgt, levels)?);
            }
            per_tau.push(per_j);
        }
        degen_actions.push(per_tau);
    }
    cur.expect("end")?.arity(1)?;
    let base = SimplexCategory { base: index, dim };
    Ok(SSetDiagram::new(base, values, face_actions, degen_actions)?)
}

pub fn parse_diagram(text: &str) -> Result<SSetDiagram, FormatError> {
    let mut cur = Cursor::new(text);
    let d = parse_diagram_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(d)
}

fn push_levels(levels: &[Vec<usize>], terminator: &str, out: &mut String) {
    for (r, row) in levels.iter().enumerate() {
        write!(out, "level {r}").unwrap();
        for v in row {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "{terminator}").unwrap();
}

pub fn serialize_diagram(d: &SSetDiagram) -> String {
    let mut out = String::new();
    let dim = d.index.dim;
    out.push_str("DIAGRAM v1\n");
    out.push_str("index\n");
    serialize_sset_block(&d.index.base, None, &mut out);
    for n in 0..=dim {
        for idx in 0..d.index.base.count(n) {
            writeln!(out, "value {n} {idx}").unwrap();
            serialize_sset_block(&d.values[n][idx], None, &mut out);
        }
    }
    for n in 1..=dim {
        for tau in 0..d.index.base.count(n) {
            for i in 0..=n {
                writeln!(out, "faceact {n} {i} {tau}").unwrap();
                push_levels(&d.face_actions[n - 1][tau][i].levels, "endact", &mut out);
            }
        }
    }
    for n in 0..dim {
        for tau in 0..d.index.base.count(n) {
            for j in 0..=n {
                writeln!(out, "degenact {n} {j} {tau}").unwrap();
                push_levels(&d.degen_actions[n][tau][j].levels, "endact", &mut out);
            }
        }
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------------
// GEO v1

fn parse_functor_block(cur: &mut Cursor) -> Result<Functor, FormatError> {
    let line = cur.expect("objmap")?;
    let obj_map = line.ints_from(1)?;
    let line = cur.expect("mormap")?;
    let mor_map = line.ints_from(1)?;
    cur.expect("endfun")?.arity(1)?;
    Ok(Functor { obj_map, mor_map })
}

fn push_functor(f: &Functor, out: &mut String) {
    out.push_str("objmap");
    for o in &f.obj_map {
        write!(out, " {o}").unwrap();
    }
    out.push('\n');
    out.push_str("mormap");
    for m in &f.mor_map {
        write!(out, " {m}").unwrap();
    }
    out.push('\n');
    out.push_str("endfun\n");
}

fn parse_geo_block(cur: &mut Cursor) -> Result<(GeoCategory, ValueAssignment), FormatError> {
    cur.header("GEO")?;
    cur.expect("base")?.arity(1)?;
    let base = parse_cat_block(cur)?;
    let m = base.morphisms();
    let objects = base.objects;

    let class_line = |cur: &mut Cursor, keyword: &str| -> Result<Vec<bool>, FormatError> {
        let line = cur.expect(keyword)?;
        let k = line.int(1)?;
        line.arity(2 + k)?;
        let mut mask = vec![false; m];
        for p in 0..k {
            let f = line.int(2 + p)?;
            if f >= m {
                return Err(line.syntax(line.toks[2 + p].col, format!("morphism {f} out of range (< {m})")));
            }
            mask[f] = true;
        }
        Ok(mask)
    };
    let open = class_line(cur, "open")?;
    let proper = class_line(cur, "proper")?;

    let mut factorizations = Vec::with_capacity(m);
    for f in 0..m {
        let line = cur.expect("fac")?;
        line.fixed(1, f, "morphism")?;
        let k = line.int(2)?;
        line.arity(3 + 2 * k)?;
        let mut facs = Vec::with_capacity(k);
        for p in 0..k {
            facs.push((line.int(3 + 2 * p)?, line.int(4 + 2 * p)?));
        }
        factorizations.push(facs);
    }

    let mut values = Vec::with_capacity(objects);
    for x in 0..objects {
        let line = cur.expect("value")?;
        line.arity(2)?;
        line.fixed(1, x, "object")?;
        values.push(parse_cat_block(cur)?);
    }

    let mut open_images = vec![None; m];
    for f in 0..m {
        if open[f] {
            let line = cur.expect("openimage")?;
            line.arity(2)?;
            line.fixed(1, f, "morphism")?;
            open_images[f] = Some(parse_functor_block(cur)?);
        }
    }
    let mut proper_images = vec![None; m];
    for f in 0..m {
        if proper[f] {
            let line = cur.expect("properimage")?;
            line.arity(2)?;
            line.fixed(1, f, "morphism")?;
            proper_images[f] = Some(parse_functor_block(cur)?);
        }
    }

    let line = cur.expect("support")?;
    line.arity(2)?;
    let k = line.int(1)?;
    let mut support = Vec::with_capacity(k);
    for _ in 0..k {
        let line = cur.expect("datum")?;
        let source = (line.int(1)?, line.int(2)?);
        let target = (line.int(3)?, line.int(4)?);
        let mediator = line.int(5)?;
        let components = line.ints_from(6)?;
        support.push(SupportDatum { source, target, mediator, components });
    }
    cur.expect("end")?.arity(1)?;

    let geo = GeoCategory::new(base, open, proper, factorizations)?;
    let assignment = ValueAssignment { values, open_images, proper_images, support };
    assignment.validate(&geo)?;
    Ok((geo, assignment))
}

pub fn parse_geo(text: &str) -> Result<(GeoCategory, ValueAssignment), FormatError> {
    let mut cur = Cursor::new(text);
    let pair = parse_geo_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(pair)
}

pub fn serialize_geo(geo: &GeoCategory, values: &ValueAssignment) -> String {
    let mut out = String::new();
    out.push_str("GEO v1\n");
    out.push_str("base\n");
    serialize_cat_block(&geo.base, &mut out);
    let class_line = |mask: &[bool], keyword: &str, out: &mut String| {
        let listed: Vec<usize> = (0..mask.len()).filter(|&f| mask[f]).collect();
        write!(out, "{keyword} {}", listed.len()).unwrap();
        for f in listed {
            write!(out, " {f}").unwrap();
        }
        out.push('\n');
    };
    class_line(&geo.open_class, "open", &mut out);
    class_line(&geo.proper_class, "proper", &mut out);
    for (f, facs) in geo.factorizations.iter().enumerate() {
        write!(out, "fac {f} {}", facs.len()).unwrap();
        for (j, p) in facs {
            write!(out, " {j} {p}").unwrap();
        }
        out.push('\n');
    }
    for (x, value) in values.values.iter().enumerate() {
        writeln!(out, "value {x}").unwrap();
        serialize_cat_block(value, &mut out);
    }
    for (f, image) in values.open_images.iter().enumerate() {
        if let Some(functor) = image {
            writeln!(out, "openimage {f}").unwrap();
            push_functor(functor, &mut out);
        }
    }
    for (f, image) in values.proper_images.iter().enumerate() {
        if let Some(functor) = image {
            writeln!(out, "properimage {f}").unwrap();
            push_functor(functor, &mut out);
        }
    }
    writeln!(out, "support {}", values.support.len()).unwrap();
    for d in &values.support {
        write!(
            out,
            "datum {} {} {} {} {}",
            d.source.0, d.source.1, d.target.0, d.target.1, d.mediator
        )
        .unwrap();
        for c in &d.components {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------------
// EXTEND v1

/// A constant-weight extension problem: a prescription `f' = g . i` on a
/// subcomplex is to be extended over the whole base, with the target
/// presented as the nerve of `cat` and `g` recording the classifier of the
/// constant weight.
#[derive(Debug, Clone)]
pub struct ExtendInstance {
    pub cat: FiniteCategory,
    pub g: SimplicialMap,
    pub i: SimplicialMap,
    pub omega: Vec<usize>,
}

fn parse_extend_block(cur: &mut Cursor) -> Result<ExtendInstance, FormatError> {
    cur.header("EXTEND")?;
    cur.expect("cat")?.arity(1)?;
    let cat = parse_cat_block(cur)?;
    cur.expect("g")?.arity(1)?;
    let g = parse_map_block(cur)?;
    cur.expect("i")?.arity(1)?;
    let i = parse_map_block(cur)?;
    let line = cur.expect("omega")?;
    let k = line.int(1)?;
    line.arity(2 + k)?;
    let omega = line.ints_from(2)?;
    cur.expect("end")?.arity(1)?;
    Ok(ExtendInstance { cat, g, i, omega })
}

pub fn parse_extend(text: &str) -> Result<ExtendInstance, FormatError> {
    let mut cur = Cursor::new(text);
    let e = parse_extend_block(&mut cur)?;
    cur.expect_eof()?;
    Ok(e)
}

pub fn serialize_extend(e: &ExtendInstance) -> String {
    let mut out = String::new();
    out.push_str("EXTEND v1\n");
    out.push_str("cat\n");
    serialize_cat_block(&e.cat, &mut out);
    out.push_str("g\n");
    serialize_map_block(&e.g, &mut out);
    out.push_str("i\n");
    serialize_map_block(&e.i, &mut out);
    write!(out, "omega {}", e.omega.len()).unwrap();
    for v in &e.omega {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    out.push_str("end\n");
    out
}
