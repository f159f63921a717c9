//! Command-line surface: loads text-format files into a workspace,
//! dispatches to the library, and reports verdicts through exit codes.
//!
//! Exit codes: 0 = success or property holds; 1 = property is false;
//! 2 = undecided within budget; 3 = input error (I/O, syntax, validation).
//! Codes are a function of the verdict alone, never of timing.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use deltaglue::diagrams::{
    constant_weight_classifier, extend_functor, global_sections, mapping_functor, DiagramError,
};
use deltaglue::gluing::{
    comp_category, composable_pairs, glue, is_filtered, verify_functoriality, FilterObstruction,
    FilteredVerdict, GeoCategory, GluingError,
};
use deltaglue::homotopy::{
    contractibility, homology, pi0_classes, verify_certificate, ContractibilityCertificate,
    HomotopyError,
};
use deltaglue::lifting::{
    is_inner_fibration, is_kan_complex, is_kan_fibration, is_quasi_category,
    is_trivial_fibration, solve_lift, LiftError, LiftOutcome, LiftingProblem, Verdict,
};
use deltaglue::marked::{hom_flat, hom_sharp, MarkedError};
use deltaglue::sset::{
    colimit_over_simplices, nerve, product, pullback, pushout, SimplexRef, SimplicialMap,
    SsetError,
};

use deltaglue_cli::formats::{serialize_map, serialize_sset, FormatError};
use deltaglue_cli::workspace::{Workspace, WorkspaceError};

#[derive(Parser)]
#[command(
    name = "deltaglue",
    version,
    about = "Truncated simplicial sets: normalization, (co)limits, mapping complexes, \
             lifting, homology, diagrams over simplices, and open/proper gluing",
    after_help = "Exit codes: 0 success / property holds, 1 property false, \
                  2 undecided within budget, 3 input error."
)]
struct Cli {
    /// Backtracking budget for horn-filling and lifting searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_lift: u64,
    /// Enumeration budget for mapping-complex construction.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_hom: u64,
    /// Move budget for presentation simplification in contractibility certificates.
    #[arg(long, global = true, default_value_t = 1_000)]
    budget_tietze: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the nondegenerate skeleton and every simplex's normal form.
    Normalize { file: PathBuf },
    /// Product of two simplicial sets; emits SSET v1.
    Product { a: PathBuf, b: PathBuf },
    /// Pushout of two maps sharing a source; emits SSET v1.
    Pushout { f: PathBuf, g: PathBuf },
    /// Pullback of two maps sharing a target; emits SSET v1.
    Pullback { f: PathBuf, g: PathBuf },
    /// Mapping complex of marked simplicial sets; emits SSET v1.
    Hom {
        mode: HomMode,
        base: PathBuf,
        target: PathBuf,
        /// Truncation of the mapping complex (default: target truncation).
        #[arg(long)]
        out_dim: Option<usize>,
    },
    /// Decide a property of a complex, a map, or a gluing instance.
    Check { property: Property, file: PathBuf },
    /// Betti numbers and torsion in every reliable degree.
    Homology {
        file: PathBuf,
        /// Single degree to report (default: all below the truncation).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Search for a diagonal filler of a lifting square.
    Lift {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        top: PathBuf,
        #[arg(long)]
        bottom: PathBuf,
    },
    /// Colimit of the simplex-category diagram of a complex; emits SSET v1.
    ColimSimplices { file: PathBuf },
    /// Global sections of a diagram over the simplices of its index; emits SSET v1.
    Gamma { file: PathBuf },
    /// Extend a prescription along a constant weight into a nerve; emits MAP v1.
    Extend { file: PathBuf },
    /// Glue class functors over a geometry and verify functoriality.
    Glue {
        file: PathBuf,
        /// Emit the base category as DOT (open edges blue, proper red) and stop.
        #[arg(long)]
        emit_dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HomMode {
    Flat,
    Sharp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Quasicat,
    Kan,
    InnerFib,
    KanFib,
    TrivialFib,
    Contractible,
    Filtered,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Marked(#[from] MarkedError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error("{0}")]
    Input(String),
}

fn budget_in_sset(e: &SsetError) -> bool {
    matches!(e, SsetError::Budget(_))
}

fn budget_in_lift(e: &LiftError) -> bool {
    match e {
        LiftError::Budget(_) => true,
        LiftError::Sset(s) => budget_in_sset(s),
        _ => false,
    }
}

fn budget_in_homotopy(e: &HomotopyError) -> bool {
    match e {
        HomotopyError::Lift(l) => budget_in_lift(l),
        HomotopyError::NotQuasiCategory(Verdict::Unknown) => true,
        _ => false,
    }
}

fn budget_in_marked(e: &MarkedError) -> bool {
    match e {
        MarkedError::Sset(s) => budget_in_sset(s),
        MarkedError::Lift(l) => budget_in_lift(l),
        MarkedError::Homotopy(h) => budget_in_homotopy(h),
        MarkedError::NotQuasiCategory(Verdict::Unknown) | MarkedError::NotKan(Verdict::Unknown) => {
            true
        }
        _ => false,
    }
}

fn budget_in_diagram(e: &DiagramError) -> bool {
    match e {
        DiagramError::Sset(s) => budget_in_sset(s),
        DiagramError::Marked(m) => budget_in_marked(m),
        DiagramError::Lift(l) => budget_in_lift(l),
        // a lift search that ran out during extension is a budget verdict
        DiagramError::Exhausted { .. } => true,
        _ => false,
    }
}

fn budget_in_gluing(e: &GluingError) -> bool {
    match e {
        GluingError::Budget => true,
        GluingError::Sset(s) => budget_in_sset(s),
        GluingError::Diagram(d) => budget_in_diagram(d),
        _ => false,
    }
}

/// 2 when the failure is a budget exhaustion anywhere in the chain, else 3.
fn exit_for(e: &CliError) -> u8 {
    let budget = match e {
        CliError::Sset(s) => budget_in_sset(s),
        CliError::Lift(l) => budget_in_lift(l),
        CliError::Homotopy(h) => budget_in_homotopy(h),
        CliError::Marked(m) => budget_in_marked(m),
        CliError::Diagram(d) => budget_in_diagram(d),
        CliError::Gluing(g) => budget_in_gluing(g),
        CliError::Workspace(_) | CliError::Format(_) | CliError::Input(_) => false,
    };
    if budget {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Normalize { file } => cmd_normalize(file),
        Cmd::Product { a, b } => cmd_product(a, b),
        Cmd::Pushout { f, g } => cmd_pushout(f, g),
        Cmd::Pullback { f, g } => cmd_pullback(f, g),
        Cmd::Hom { mode, base, target, out_dim } => {
            cmd_hom(cli, *mode, base, target, *out_dim)
        }
        Cmd::Check { property, file } => cmd_check(cli, *property, file),
        Cmd::Homology { file, degree } => cmd_homology(file, *degree),
        Cmd::Lift { left, right, top, bottom } => cmd_lift(cli, left, right, top, bottom),
        Cmd::ColimSimplices { file } => cmd_colim(file),
        Cmd::Gamma { file } => cmd_gamma(file),
        Cmd::Extend { file } => cmd_extend(cli, file),
        Cmd::Glue { file, emit_dot } => cmd_glue(cli, file, *emit_dot),
    }
}

fn cmd_normalize(file: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let x = &ws.complex(&name)?.space;
    print!("nondegenerate");
    for c in x.nondegenerate_counts() {
        print!(" {c}");
    }
    println!();
    for n in 0..=x.dim_bound() {
        for idx in 0..x.count(n) {
            let (p, base) = x.ez_normalize(SimplexRef::new(n, idx));
            print!("ez {n} {idx} base {} {} map", base.dim, base.index);
            for v in p.values() {
                print!(" {v}");
            }
            println!();
        }
    }
    Ok(0)
}

fn cmd_product(a: &Path, b: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let a = ws.load(a)?;
    let b = ws.load(b)?;
    let prod = product(&ws.complex(&a)?.space, &ws.complex(&b)?.space);
    print!("{}", serialize_sset(&prod.complex));
    Ok(0)
}

fn cmd_pushout(f: &Path, g: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let f = ws.load(f)?;
    let g = ws.load(g)?;
    let out = pushout(ws.map(&f)?, ws.map(&g)?)?;
    print!("{}", serialize_sset(&out.complex));
    Ok(0)
}

fn cmd_pullback(f: &Path, g: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let f = ws.load(f)?;
    let g = ws.load(g)?;
    let out = pullback(ws.map(&f)?, ws.map(&g)?)?;
    print!("{}", serialize_sset(&out.complex));
    Ok(0)
}

fn cmd_hom(
    cli: &Cli,
    mode: HomMode,
    base: &Path,
    target: &Path,
    out_dim: Option<usize>,
) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let base = ws.load(base)?;
    let target = ws.load(target)?;
    let base = ws.complex(&base)?;
    let target = ws.complex(&target)?;
    let out_dim = out_dim.unwrap_or_else(|| target.space.dim_bound());
    let hom = match mode {
        HomMode::Flat => hom_flat(base, target, out_dim, cli.budget_hom)?,
        HomMode::Sharp => hom_sharp(base, target, out_dim, cli.budget_hom)?,
    };
    print!("{}", serialize_sset(&hom.complex));
    Ok(0)
}

fn verdict_code(what: &str, v: Verdict) -> u8 {
    match v {
        Verdict::Yes => {
            println!("{what}: yes");
            0
        }
        Verdict::No => {
            println!("{what}: no");
            1
        }
        Verdict::Unknown => {
            println!("{what}: unknown within budget");
            2
        }
    }
}

fn cmd_check(cli: &Cli, property: Property, file: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    match property {
        Property::Quasicat => {
            let x = &ws.complex(&name)?.space;
            Ok(verdict_code("quasi-category", is_quasi_category(x, cli.budget_lift)?))
        }
        Property::Kan => {
            let x = &ws.complex(&name)?.space;
            Ok(verdict_code("kan complex", is_kan_complex(x, cli.budget_lift)?))
        }
        Property::InnerFib => {
            let p = ws.map(&name)?;
            Ok(verdict_code("inner fibration", is_inner_fibration(p, cli.budget_lift)?))
        }
        Property::KanFib => {
            let p = ws.map(&name)?;
            Ok(verdict_code("kan fibration", is_kan_fibration(p, cli.budget_lift)?))
        }
        Property::TrivialFib => {
            let p = ws.map(&name)?;
            Ok(verdict_code("trivial fibration", is_trivial_fibration(p, cli.budget_lift)?))
        }
        Property::Contractible => {
            let x = ws.complex(&name)?.space.clone();
            cmd_check_contractible(cli, &x)
        }
        Property::Filtered => {
            let (geo, _) = ws.instance(&name)?;
            cmd_check_filtered(cli, geo)
        }
    }
}

fn cmd_check_contractible(
    cli: &Cli,
    x: &deltaglue::sset::TruncatedSimplicialSet,
) -> Result<u8, CliError> {
    if x.count(0) == 0 {
        println!("contractible: no (empty complex)");
        return Ok(1);
    }
    let classes = pi0_classes(x);
    let base = classes[0];
    if classes.iter().any(|&c| c != base) {
        println!("contractible: no (more than one path component)");
        return Ok(1);
    }
    for k in 1..x.dim_bound() {
        let (betti, torsion) = homology(x, k)?;
        if betti != 0 || !torsion.is_empty() {
            println!("contractible: no (homology in degree {k})");
            return Ok(1);
        }
    }
    let cert = contractibility(x, cli.budget_lift, cli.budget_tietze);
    let kind = match &cert {
        ContractibilityCertificate::TerminalObjectNerve { .. } => "terminal-object nerve",
        ContractibilityCertificate::ExtraDegeneracy { .. } => "extra degeneracy",
        ContractibilityCertificate::HomologyPlusPi1 { .. } => "homology and pi1",
        ContractibilityCertificate::Unknown { obstruction } => {
            println!("contractible: unknown ({obstruction})");
            return Ok(2);
        }
    };
    if verify_certificate(x, &cert) {
        println!("contractible: yes ({kind})");
        Ok(0)
    } else {
        println!("contractible: unknown (certificate failed verification)");
        Ok(2)
    }
}

fn cmd_check_filtered(cli: &Cli, geo: &GeoCategory) -> Result<u8, CliError> {
    for f in 0..geo.base.morphisms() {
        let comp = comp_category(geo, f)?;
        match is_filtered(&comp.category, cli.budget_lift) {
            FilteredVerdict::Filtered => {}
            FilteredVerdict::NotFiltered(obstruction) => {
                let why = match obstruction {
                    FilterObstruction::Empty => "it is empty".to_string(),
                    FilterObstruction::NoCocone { a, b } => {
                        format!("objects {a} and {b} have no cocone")
                    }
                    FilterObstruction::NoCoequalizer { u, v } => {
                        format!("parallel pair ({u}, {v}) has no coequalizing morphism")
                    }
                };
                println!("filtered: no (factorizations of morphism {f}: {why})");
                return Ok(1);
            }
            FilteredVerdict::BudgetExceeded => {
                println!("filtered: unknown within budget (morphism {f})");
                return Ok(2);
            }
        }
    }
    println!("filtered: yes ({} factorization categories)", geo.base.morphisms());
    Ok(0)
}

fn cmd_homology(file: &Path, degree: Option<usize>) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let x = &ws.complex(&name)?.space;
    let dim = x.dim_bound();
    let degrees: Vec<usize> = match degree {
        Some(k) if k >= dim => {
            return Err(CliError::Input(format!(
                "degree {k} is not reliable at truncation {dim}; use a complex truncated higher"
            )));
        }
        Some(k) => vec![k],
        None => (0..dim).collect(),
    };
    for k in degrees {
        let (betti, torsion) = homology(x, k)?;
        print!("H{k} betti {betti} torsion");
        if torsion.is_empty() {
            print!(" -");
        }
        for t in &torsion {
            print!(" {t}");
        }
        println!();
    }
    Ok(0)
}

fn cmd_lift(
    cli: &Cli,
    left: &Path,
    right: &Path,
    top: &Path,
    bottom: &Path,
) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let left = ws.load(left)?;
    let right = ws.load(right)?;
    let top = ws.load(top)?;
    let bottom = ws.load(bottom)?;
    let problem = LiftingProblem::new(
        ws.map(&left)?.clone(),
        ws.map(&right)?.clone(),
        ws.map(&top)?.clone(),
        ws.map(&bottom)?.clone(),
    )?;
    match solve_lift(&problem, cli.budget_lift)? {
        LiftOutcome::Lift(h) => {
            println!("# lift found");
            print!("{}", serialize_map(&h));
            Ok(0)
        }
        LiftOutcome::NoLift => {
            println!("no lift exists");
            Ok(1)
        }
        LiftOutcome::Exhausted => {
            println!("search budget exhausted");
            Ok(2)
        }
    }
}

fn cmd_colim(file: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let x = &ws.complex(&name)?.space;
    let out = colimit_over_simplices(x)?;
    let iso = out.comparison.is_iso();
    print!("{}", serialize_sset(&out.complex));
    println!("# comparison-iso {iso}");
    Ok(if iso { 0 } else { 1 })
}

fn cmd_gamma(file: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let sections = global_sections(ws.diagram(&name)?)?;
    print!("{}", serialize_sset(&sections.complex));
    Ok(0)
}

fn cmd_extend(cli: &Cli, file: &Path) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let ext = ws.extension(&name)?;
    let k = &ext.g.source;
    let e = k.dim_bound();
    let nrv = nerve(&ext.cat, e);
    if ext.g.target != nrv.complex {
        return Err(CliError::Input(format!(
            "g must land in the nerve of the category at truncation {e}"
        )));
    }
    if ext.i.target != *k {
        return Err(CliError::Input("i must map into the source of g".into()));
    }
    let slots: usize = (0..=ext.i.source.dim_bound()).map(|n| ext.i.source.count(n)).sum();
    if ext.omega.len() != slots {
        return Err(CliError::Input(format!(
            "omega must list one slot per simplex of the source of i ({slots} expected, {} given)",
            ext.omega.len()
        )));
    }
    let mapping = mapping_functor(k, &nrv.complex, e, e, cli.budget_hom)?;
    let (n_diag, alpha) = constant_weight_classifier(&mapping, &ext.g)?;
    let f_prime = SimplicialMap::compose(&ext.g, &ext.i)?;
    let out = extend_functor(
        &ext.i,
        &f_prime,
        &n_diag,
        &alpha,
        &ext.omega,
        &mapping,
        Some((&ext.cat, &nrv)),
        cli.budget_lift,
        (cli.budget_lift, cli.budget_tietze),
    )?;
    println!("# witness {}", out.witness.len());
    print!("{}", serialize_map(&out.f));
    Ok(0)
}

fn dot_of(geo: &GeoCategory) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("digraph geometry {\n  rankdir=LR;\n  node [shape=circle];\n");
    for x in 0..geo.base.objects {
        writeln!(out, "  {x};").unwrap();
    }
    for f in 0..geo.base.morphisms() {
        if geo.base.is_identity(f) {
            continue;
        }
        let color = match (geo.open_class[f], geo.proper_class[f]) {
            (true, true) => "purple",
            (true, false) => "blue",
            (false, true) => "red",
            (false, false) => "black",
        };
        writeln!(
            out,
            "  {} -> {} [label=\"{f}\", color={color}];",
            geo.base.src(f),
            geo.base.tgt(f)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn cmd_glue(cli: &Cli, file: &Path, emit_dot: bool) -> Result<u8, CliError> {
    let mut ws = Workspace::new();
    let name = ws.load(file)?;
    let (geo, values) = ws.instance(&name)?;
    if emit_dot {
        print!("{}", dot_of(geo));
        return Ok(0);
    }
    let glued = match glue(geo, values, cli.budget_lift) {
        Ok(glued) => glued,
        // hypothesis failures of the instance are property verdicts
        Err(
            e @ (GluingError::NotFiltered { .. }
            | GluingError::NoWeaklyTerminal { .. }
            | GluingError::SupportSearchFailed { .. }
            | GluingError::SupportObstruction { .. }),
        ) => {
            println!("gluing failed: {e}");
            return Ok(1);
        }
        Err(other) => return Err(other.into()),
    };
    for (f, m) in glued.morphisms.iter().enumerate() {
        println!("morphism {f} chosen {} {}", m.chosen.0, m.chosen.1);
        print!("functor {f} objmap");
        for o in &m.functor.obj_map {
            print!(" {o}");
        }
        print!(" mormap");
        for v in &m.functor.mor_map {
            print!(" {v}");
        }
        println!();
        for ((j, p), components) in &m.identifications {
            print!("identify {f} {j} {p} components");
            for c in components {
                print!(" {c}");
            }
            println!();
        }
    }
    let pairs = composable_pairs(&geo.base);
    let report = verify_functoriality(geo, values, &glued, &pairs)?;
    let mut all = true;
    for entry in &report {
        let ok = entry.iso.is_some();
        all &= ok;
        println!(
            "pair {} {} iso {}",
            entry.first,
            entry.second,
            if ok { "yes" } else { "no" }
        );
    }
    println!("functorial {}", if all { "yes" } else { "no" });
    Ok(if all { 0 } else { 1 })
}
