use std::path::PathBuf;
use std::process::Command;

use fibkit::corpus;
use fibkit::fibration::yoneda;
use fibkit::{FibredCat, Obj};
use fibkit_cli::document::{Document, Kind};
use fibkit_cli::syntax::DiagnosticKind;
use fibkit_cli::{main_with_args, Outcome};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["fibkit".to_string()];
    for a in args {
        argv.push(if a.contains('.') && !a.starts_with('-') { fixture(a) } else { a.to_string() });
    }
    main_with_args(argv)
}

fn parse_fixture(name: &str) -> Result<Document, fibkit_cli::syntax::Diagnostic> {
    Document::parse(&std::fs::read_to_string(fixture(name)).unwrap())
}

#[test]
fn two_parses() {
    let doc = parse_fixture("two.cat").unwrap();
    assert_eq!(doc.items.len(), 1);
    assert_eq!(doc.items[0].kind(), Kind::Category);
    let c = doc.select(Kind::Category, Some("two")).unwrap();
    assert_eq!(c.name, "two");
}

#[test]
fn missing_composite_names_the_pair() {
    let d = parse_fixture("broken.cat").unwrap_err();
    assert_eq!(d.kind, DiagnosticKind::Validation);
    assert_eq!((d.span.line, d.span.col), (2, 1));
    assert!(d.message.contains("(h, f)"), "{}", d.message);
}

#[test]
fn duplicate_arrow_has_a_span() {
    let d = parse_fixture("duplicate.cat").unwrap_err();
    assert_eq!(d.kind, DiagnosticKind::Syntax);
    assert_eq!((d.span.line, d.span.col), (3, 22));
    assert!(d.message.contains("duplicate arrow `u`"));
}

#[test]
fn syntax_errors_are_positioned() {
    let d = parse_fixture("bad_syntax.cat").unwrap_err();
    assert_eq!((d.span.line, d.span.col), (2, 14));
    for (src, line, col) in [
        ("category c { objects: a; arrows: f: a - a; }", 1, 39),
        ("category c { objects: a;", 1, 25),
        ("category c { objects: a; colours: red; }", 1, 26),
        ("functor F: c -> d { objects: a -> b; }", 1, 12),
        ("category c { objects: \"a; }", 1, 23),
    ] {
        let d = Document::parse(src).unwrap_err();
        assert_eq!((d.span.line, d.span.col), (line, col), "{src}: {d}");
    }
}

#[test]
fn not_a_fibration_is_a_validation_error() {
    let d = parse_fixture("not_fibration.fib").unwrap_err();
    assert_eq!(d.kind, DiagnosticKind::Validation);
    assert!(d.message.contains("cartesian lift of u"));
}

#[test]
fn fixtures_round_trip() {
    for name in ["point.cat", "two.cat", "square.cat", "par.cat", "bang.fib", "yoneda_b.fib", "id_two.fib", "chain.fib", "presheaf.psh", "displayed.disp"] {
        let doc = parse_fixture(name).unwrap();
        let printed = doc.print();
        let again = Document::parse(&printed).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(again.print(), printed, "{name}");
    }
}

#[test]
fn comments_and_whitespace_are_ignored() {
    let a = Document::parse("category two { objects: a, b; arrows: u: a -> b; }").unwrap();
    let b = Document::parse("# c\ncategory   two{objects:a,b;# x\n arrows:\n\tu:a->b}\n").unwrap();
    assert_eq!(a, b);
}

#[test]
fn partial_cleavings_are_completed() {
    let src = std::fs::read_to_string(fixture("yoneda_b.fib")).unwrap().replace("cleaving: lift(u, b_1) = v;", "");
    let doc = Document::parse(&src).unwrap();
    let full = parse_fixture("yoneda_b.fib").unwrap();
    assert_eq!(doc, full);
}

#[test]
fn generated_documents_round_trip() {
    let mut doc = Document::default();
    for c in corpus::small_categories() {
        doc.add_category(&c);
    }
    for (i, e) in corpus::fibrations_over_two().iter().enumerate() {
        doc.add_fibration(&format!("e{i}"), e);
    }
    for (i, p) in corpus::presheaves_on_two(2).iter().enumerate() {
        doc.add_presheaf(&format!("x{i}"), p);
    }
    let printed = doc.print();
    let again = Document::parse(&printed).unwrap();
    assert_eq!(doc, again);
    assert_eq!(again.print(), printed);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printing_is_canonical(picks in proptest::collection::vec(0usize..64, 1..5)) {
        let cats = corpus::small_categories();
        let fibs = corpus::fibrations_over_two();
        let mut doc = Document::default();
        for (i, k) in picks.iter().enumerate() {
            if k % 2 == 0 {
                doc.add_category(&cats[k / 2 % cats.len()]);
            } else {
                doc.add_fibration(&format!("f{i}"), &fibs[k / 2 % fibs.len()]);
            }
        }
        let printed = doc.print();
        let again = Document::parse(&printed).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.print(), printed);
    }

    #[test]
    fn spacing_does_not_matter(pad in "[ \t\n]{0,3}", items in proptest::collection::vec("[a-z][a-z0-9_']{0,4}", 1..6)) {
        let mut objects = items.clone();
        objects.sort();
        objects.dedup();
        let tight = format!("category c{{objects:{};}}", objects.join(","));
        let glue = format!("{pad},{pad}");
        let loose = format!("{pad}category{pad} c {pad}{{{pad}objects{pad}:{pad}{}{pad};{pad}}}{pad}", objects.join(&glue));
        prop_assert_eq!(Document::parse(&tight).unwrap(), Document::parse(&loose).unwrap());
    }
}

#[test]
fn sieves_on_b() {
    let out = run(&["sieves", "two.cat", "b"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("count: 3"));
    assert_eq!(out.stdout, golden("sieves_two_b.txt"));
}

#[test]
fn universe_sizes() {
    let out = run(&["hs-universe", "two.cat", "--k", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("universe: a:2, b:3"));
    assert_eq!(out.stdout, golden("hs_universe_two.txt"));
    assert_eq!(run(&["--json", "hs-universe", "square.cat"]).stdout, golden("hs_universe_square.json"));
}

#[test]
fn reports_match_goldens() {
    assert_eq!(run(&["oplax-base-change", "bang.fib", "two.cat"]).stdout, golden("oplax_bang_two.txt"));
    assert_eq!(run(&["check-adjunction", "bang.fib", "id_two.fib", "point.cat"]).stdout, golden("adjunction_bang.txt"));
}

#[test]
fn dot_goldens() {
    let point = run(&["dot", "point.cat"]).stdout;
    assert_eq!(point, golden("point.dot"));
    assert_eq!(point.matches(';').count(), 1);
    assert!(!point.contains("->"));
    let two = run(&["dot", "two.cat"]).stdout;
    assert_eq!(two, golden("two.dot"));
    assert_eq!(two.matches("->").count(), 1);
    let y = run(&["dot", "yoneda_b.fib"]).stdout;
    assert_eq!(y, golden("yoneda_b.dot"));
    assert_eq!(y.matches("subgraph").count(), 2);
    assert!(y.contains("style=bold"));
}

#[test]
fn dot_of_the_library_yoneda_fibration() {
    let two = corpus::walking_arrow();
    let mut doc = Document::default();
    doc.add_fibration("y", &yoneda(&two, Obj(1)));
    let text = fibkit_cli::dot::export_dot(doc.get("y").unwrap()).unwrap();
    assert_eq!(text.matches("subgraph").count(), 2);
    assert_eq!(text.matches("style=bold").count(), 1);
}

#[test]
fn output_documents_reparse() {
    for args in [
        &["oplax-base-change", "bang.fib", "two.cat"][..],
        &["hs-lift", "yoneda_b.fib", "yoneda_b.fib"][..],
        &["iterate", "chain.fib", "two.cat"][..],
    ] {
        let out = run(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let doc = Document::parse(&out.stdout).unwrap();
        let e = doc.select(Kind::Fibration, Some("result")).unwrap();
        assert_eq!(e.kind(), Kind::Fibration);
    }
}

#[test]
fn runs_are_deterministic() {
    for args in [
        &["validate", "bang.fib", "chain.fib"][..],
        &["nerve", "two.cat", "two.cat", "--presheaf", "presheaf.psh"][..],
        &["hs-generic-family", "square.cat"][..],
        &["hs-lift", "bang.fib", "two.cat"][..],
        &["bifib", "verify", "local", "id_two.fib", "yoneda_b.fib"][..],
        &["bifib", "verify", "horizontal", "yoneda_b.fib"][..],
        &["bifib", "verify", "opcartesian", "yoneda_b.fib", "bang.fib", "id_two.fib"][..],
        &["saturation", "compare", "yoneda_b.fib", "displayed.disp"][..],
        &["--json", "dot", "presheaf.psh"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn verifiers_pass_on_fixtures() {
    assert_eq!(run(&["check-adjunction", "bang.fib", "id_two.fib", "point.cat"]).code, 0);
    assert!(run(&["hs-generic-family", "two.cat"]).stdout.contains("natural: yes"));
    assert!(run(&["saturation", "compare", "two.cat", "square.cat"]).stdout.contains("agrees_over_point: yes"));
}

#[test]
fn exit_codes() {
    let e = run(&["validate", "broken.cat"]);
    assert_eq!(e.code, 1);
    assert!(e.stderr.contains("(h, f)"));
    assert_eq!(run(&["validate", "duplicate.cat"]).code, 1);
    assert_eq!(run(&["validate", "missing.cat"]).code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["sieves", "two.cat", "z"]).code, 1);
    assert_eq!(run(&["dot", "chain.fib:pq"]).code, 1);
    assert_eq!(run(&["oplax-base-change", "yoneda_b.fib", "bang.fib"]).code, 1);
    assert_eq!(run(&["--max-search", "3", "nerve", "square.cat", "square.cat"]).code, 1);
    let fail = run(&["hs-universe", "two.cat", "--k", "2", "--against-sieves"]);
    assert_eq!(fail.code, 2);
    assert!(fail.stdout.contains("bijective: no"));
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn block_selection() {
    let out = run(&["dot", "bang.fib:two"]);
    assert_eq!(out.stdout, golden("two.dot"));
    assert_eq!(run(&["dot", "bang.fib:nothing"]).code, 1);
}

#[test]
fn binary_honours_the_contract() {
    let bin = env!("CARGO_BIN_EXE_fibkit");
    let ok = Command::new(bin).args(["sieves", &fixture("two.cat"), "b"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), golden("sieves_two_b.txt"));
    let broken = Command::new(bin).args(["validate", &fixture("broken.cat")]).output().unwrap();
    assert_eq!(broken.status.code(), Some(1));
    let fail = Command::new(bin).args(["hs-universe", &fixture("two.cat"), "--k", "2", "--against-sieves"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(2));
    let guarded = Command::new(bin)
        .env("FIBKIT_MAX_SEARCH", "3")
        .args(["nerve", &fixture("square.cat"), &fixture("square.cat")])
        .output()
        .unwrap();
    assert_eq!(guarded.status.code(), Some(1));
    assert!(String::from_utf8(guarded.stderr).unwrap().contains("search limit"));
}

#[test]
fn categories_wrap_over_named_points() {
    let doc = parse_fixture("bang.fib").unwrap();
    let e = doc.select(Kind::Fibration, None).unwrap();
    let fibkit_cli::document::Payload::Fibration { fibred, .. } = &e.payload else { panic!() };
    let over = fibkit::hslift::over_point(fibred.total(), fibred.base()).unwrap();
    assert_eq!(over.base().object_name(Obj(0)), "x");
    let _: &FibredCat = fibred;
}
