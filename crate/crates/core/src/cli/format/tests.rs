use super::*;
use crate::instances;
use rand::SeedableRng;

fn classes(text: &str) -> Vec<&'static str> {
    match parse(text) {
        Ok(_) => vec![],
        Err(ParseErrors(es)) => es.iter().map(FormatError::class).collect(),
    }
}

fn idempotent_text() -> String {
    emit(&fixture_document(&instances::idempotent().unwrap()))
}

#[test]
fn fixtures_round_trip_bit_exactly() {
    for fx in instances::all().unwrap() {
        let doc = fixture_document(&fx);
        let text = emit(&doc);
        let model = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        assert_eq!(model.document, doc, "{}", fx.name);
        assert_eq!(emit(&model.document), text, "{}", fx.name);
    }
}

#[test]
fn parsed_fixture_carries_the_same_maps() {
    let fx = instances::burnside(&instances::cyclic2().0, &instances::cyclic2().1).unwrap();
    let model = parse(&emit(&fixture_document(&fx))).unwrap();
    let t = &model.tasks[0];
    assert_eq!(t.colimit.as_ref().unwrap().a.components(), fx.expected_a.components());
    assert_eq!(t.limit.as_ref().unwrap().b.components(), fx.expected_b.components());
    assert_eq!(t.adjunction.as_ref().unwrap().eps.components(), fx.adj.eps.components());
    assert!(t.squares().is_some());
}

#[test]
fn random_cocones_round_trip() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for i in 0..10 {
        let d = instances::random_finset_instance(&mut rng).unwrap();
        let text = emit(&colimit_document(&format!("r{i}"), &d));
        let model = parse(&text).unwrap();
        assert_eq!(emit(&model.document), text);
        assert_eq!(model.tasks[0].colimit.as_ref().unwrap().a.components(), d.a.components());
    }
}

#[test]
fn bare_document_is_valid() {
    let m = parse(r#"{"format_version": "1", "base": "suplat"}"#).unwrap();
    assert!(m.tasks.is_empty());
    assert_eq!(emit(&m.document), "{\"format_version\":\"1\",\"base\":\"suplat\"}\n");
}

#[test]
fn wrong_version_is_rejected() {
    assert_eq!(classes(r#"{"format_version": "2", "base": "finset"}"#), vec!["value"]);
}

#[test]
fn syntax_errors_are_located() {
    let text = idempotent_text();
    let cut = &text[..text.len() / 2];
    match parse(cut) {
        Err(ParseErrors(es)) => assert!(matches!(es[0], FormatError::Syntax { line, .. } if line > 1)),
        Ok(_) => panic!("truncated text parsed"),
    }
    assert_eq!(classes(r#"{"format_version": "1", "base": "finset", "extra": 1}"#), vec!["syntax"]);
}

#[test]
fn non_reduced_rationals_are_rejected() {
    let fx = instances::biproduct(&[1, 1]).unwrap();
    let text = emit(&fixture_document(&fx));
    assert!(text.contains("\"1\""));
    let bad = text.replacen("\"1\"", "\"2/2\"", 1);
    assert_eq!(classes(&bad), vec!["value"]);
    let bad = text.replacen("\"0\"", "\"-0\"", 1);
    assert_eq!(classes(&bad), vec!["value"]);
}

#[test]
fn dangling_references_are_named() {
    let text = idempotent_text().replace("\"cone\":\"b\"", "\"cone\":\"missing\"");
    match parse(&text) {
        Err(ParseErrors(es)) => {
            assert_eq!(es.len(), 1);
            assert_eq!(es[0], FormatError::Reference { path: "tasks[0].cone".into(), name: "missing".into() });
        }
        Ok(_) => panic!("dangling reference accepted"),
    }
}

#[test]
fn axiom_failures_are_distinct() {
    let mut doc = fixture_document(&instances::idempotent().unwrap());
    // make e after e = 1 instead of e
    let comp = &mut doc.categories[0].compositions[0].morphism;
    if let MorphismSpec::Table(t) = comp {
        t[5] = 0;
    }
    let es = match validate(doc) {
        Err(ParseErrors(es)) => es,
        Ok(_) => panic!("broken category accepted"),
    };
    assert_eq!(es.len(), 1, "{es:?}");
    assert_eq!(es[0].class(), "axiom");
}

#[test]
fn shape_errors_are_reported_per_declaration() {
    let mut doc = fixture_document(&instances::idempotent().unwrap());
    doc.maps[0].components.clear();
    doc.maps[1].components[0].morphism = MorphismSpec::Table(vec![9]);
    let es = validate(doc).unwrap_err().0;
    // the task depends on both broken maps and is not reported again
    assert_eq!(es.len(), 2, "{es:?}");
    assert!(es.iter().all(|e| e.class() == "shape"));
    assert!(es[0].to_string().contains("missing entry"));
}

#[test]
fn duplicate_names_are_rejected() {
    let mut doc = fixture_document(&instances::idempotent().unwrap());
    doc.maps[1].name = doc.maps[0].name.clone();
    let es = validate(doc).unwrap_err().0;
    assert!(es[0].to_string().contains("declared twice"), "{es:?}");
}

#[test]
fn matrices_keep_their_shape() {
    let mut doc = fixture_document(&instances::biproduct(&[1, 1]).unwrap());
    doc.maps[0].components[0].morphism = MorphismSpec::Matrix(vec![vec!["1".into(), "0".into()]]);
    assert_eq!(validate(doc).unwrap_err().0[0].class(), "shape");
}
