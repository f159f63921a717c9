//! End-to-end tests of the `deltaglue` binary: files in, reports and exit
//! codes out. Inputs are generated through the serializers so they stay
//! bit-exact with the library fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use deltaglue::cat::FiniteCategory;
use deltaglue::delta::MonotoneMap;
use deltaglue::fixtures::{chain_geo, classifying_map, identity_values, toy_geo, toy_values};
use deltaglue::sset::{
    boundary, horn, nerve, product, standard_map, standard_simplex, SimplicialMap,
};
use deltaglue_cli::formats::{
    parse_map, parse_sset, serialize_extend, serialize_geo, serialize_map, serialize_sset,
    ExtendInstance,
};

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltaglue"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_quasicat_accepts_a_nerve_and_rejects_a_horn() {
    let dir = tempfile::tempdir().unwrap();
    let nrv = nerve(&FiniteCategory::chain(2), 2).complex;
    let yes = write(dir.path(), "nerve.sset", &serialize_sset(&nrv));
    let out = run(&["check", "quasicat", yes.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let no = write(dir.path(), "horn.sset", &serialize_sset(&horn(2, 1, 2).complex));
    let out = run(&["check", "quasicat", no.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
}

#[test]
fn homology_of_the_triangle_boundary_is_a_circle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "circle.sset", &serialize_sset(&boundary(2, 2).complex));
    let out = run(&["homology", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("H0 betti 1 torsion -"), "{text}");
    assert!(text.contains("H1 betti 1 torsion -"), "{text}");
}

#[test]
fn product_output_reparses_to_the_library_product() {
    let dir = tempfile::tempdir().unwrap();
    let interval = serialize_sset(&standard_simplex(1, 2));
    let a = write(dir.path(), "a.sset", &interval);
    let b = write(dir.path(), "b.sset", &interval);
    let out = run(&["product", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let parsed = parse_sset(&stdout(&out)).unwrap();
    let expected = product(&standard_simplex(1, 2), &standard_simplex(1, 2)).complex;
    assert_eq!(parsed, expected);
}

#[test]
fn lift_fills_an_inner_horn_and_refuses_a_disconnected_square() {
    let dir = tempfile::tempdir().unwrap();
    // a horn in the nerve of a composable pair lifts against the point
    let nrv = nerve(&FiniteCategory::chain(2), 2);
    let top_cell = nrv.index_of(2, &[nrv.cat.hom(0, 1)[0], nrv.cat.hom(1, 2)[0]]).unwrap();
    let g2 = classifying_map(&nrv.complex, top_cell, 2);
    let h = horn(2, 1, 2);
    let left = write(dir.path(), "left.map", &serialize_map(&h.include));
    let top_map = SimplicialMap::compose(&g2, &h.include).unwrap();
    let top = write(dir.path(), "top.map", &serialize_map(&top_map));
    let point = standard_simplex(0, 2);
    let right = write(
        dir.path(),
        "right.map",
        &serialize_map(&SimplicialMap::to_point(&nrv.complex)),
    );
    let bottom = write(
        dir.path(),
        "bottom.map",
        &serialize_map(&SimplicialMap::to_point(&standard_simplex(2, 2))),
    );
    let out = run(&[
        "lift",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--top",
        top.to_str().unwrap(),
        "--bottom",
        bottom.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let lifted = parse_map(&stdout(&out).lines().skip(1).collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(SimplicialMap::compose(&lifted, &h.include).unwrap().levels, top_map.levels);

    // the interval cannot lift over its own boundary into two bare points
    let ends = boundary(1, 2);
    let two = ends.complex.clone();
    let left = write(dir.path(), "l2.map", &serialize_map(&ends.include));
    let top = write(dir.path(), "t2.map", &serialize_map(&SimplicialMap::identity(&two)));
    let right = write(dir.path(), "r2.map", &serialize_map(&SimplicialMap::to_point(&two)));
    let bottom = write(
        dir.path(),
        "b2.map",
        &serialize_map(&SimplicialMap::to_point(&standard_simplex(1, 2))),
    );
    let out = run(&[
        "lift",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--top",
        top.to_str().unwrap(),
        "--bottom",
        bottom.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    let _ = point;
}

#[test]
fn syntax_errors_carry_line_and_column_and_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.sset", "SSET v1\ndim_bound x\n");
    let out = run(&["homology", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column 11"), "{err}");
}

#[test]
fn glue_reports_functoriality_on_the_chain_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let geo = chain_geo();
    let values = identity_values(&geo);
    let path = write(dir.path(), "chain.geo", &serialize_geo(&geo, &values));
    let out = run(&["glue", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("morphism 0 chosen"), "{text}");
    assert!(text.trim_end().ends_with("functorial yes"), "{text}");
}

#[test]
fn glue_emits_dot_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let geo = toy_geo();
    let values = toy_values(&geo);
    let path = write(dir.path(), "toy.geo", &serialize_geo(&geo, &values));
    let out = run(&["glue", "--emit-dot", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph"), "{text}");
    assert!(text.contains("color=blue"), "{text}");
    assert!(text.contains("color=red"), "{text}");
}

#[test]
fn check_filtered_accepts_the_toy_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let geo = toy_geo();
    let values = toy_values(&geo);
    let path = write(dir.path(), "toy.geo", &serialize_geo(&geo, &values));
    let out = run(&["check", "filtered", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn extend_on_the_trivial_instance_reports_an_empty_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cat = FiniteCategory::chain(1);
    let nrv = nerve(&cat, 2);
    let edge = nrv.index_of(1, &[cat.hom(0, 1)[0]]).unwrap();
    let g = classifying_map(&nrv.complex, edge, 2);
    let instance = ExtendInstance {
        g: g.clone(),
        i: standard_map(&MonotoneMap::identity(1), 2),
        omega: vec![0; 9],
        cat,
    };
    let path = write(dir.path(), "trivial.extend", &serialize_extend(&instance));
    let out = run(&["extend", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# witness 0"), "{text}");
    let f = parse_map(&lines.collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(f.levels, g.levels);
}

#[test]
fn check_contractible_separates_the_triangle_from_its_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write(dir.path(), "tri.sset", &serialize_sset(&standard_simplex(2, 2)));
    let out = run(&["check", "contractible", yes.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let no = write(dir.path(), "circ.sset", &serialize_sset(&boundary(2, 2).complex));
    let out = run(&["check", "contractible", no.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
}

#[test]
fn colim_simplices_reassembles_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let square = product(&standard_simplex(1, 2), &standard_simplex(1, 2)).complex;
    let path = write(dir.path(), "square.sset", &serialize_sset(&square));
    let out = run(&["colim-simplices", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("# comparison-iso true"));
}

#[test]
fn normalize_reports_the_nondegenerate_skeleton() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "interval.sset", &serialize_sset(&standard_simplex(1, 2)));
    let out = run(&["normalize", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("nondegenerate 2 1 0"), "{text}");
    assert!(text.contains("ez 0 0 base 0 0 map 0"), "{text}");
}

#[test]
fn hom_flat_of_point_into_interval_is_the_interval() {
    let dir = tempfile::tempdir().unwrap();
    let point = write(dir.path(), "pt.sset", &serialize_sset(&standard_simplex(0, 2)));
    let interval = write(dir.path(), "iv.sset", &serialize_sset(&standard_simplex(1, 2)));
    let out = run(&["hom", "flat", point.to_str().unwrap(), interval.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let parsed = parse_sset(&stdout(&out)).unwrap();
    assert_eq!(parsed.counts(), standard_simplex(1, 2).counts());
}

#[test]
fn pushout_collapses_the_interval_boundary_to_a_circle() {
    let dir = tempfile::tempdir().unwrap();
    let ends = boundary(1, 2);
    let f = write(dir.path(), "include.map", &serialize_map(&ends.include));
    let g = write(
        dir.path(),
        "collapse.map",
        &serialize_map(&SimplicialMap::to_point(&ends.complex)),
    );
    let out = run(&["pushout", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let parsed = parse_sset(&stdout(&out)).unwrap();
    assert_eq!(parsed.nondegenerate_counts(), vec![1, 1, 0]);
}
