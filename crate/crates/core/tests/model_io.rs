//! Problem files, the diet loader and the transportation builder.

mod common;

use rand::Rng;
use robust_ilp::interval::{Interval, IntervalMatrix, IntervalVector};
use robust_ilp::model::{
    build_transportation, load_diet, load_problem, parse_problem, save_problem, CandidatePoint, DietOptions, ModelError,
};

use common::{data_path, random_equality, random_general, rng};

#[test]
fn save_then_load_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(11);
    for t in 0..50 {
        let (mut p, pt) = if t % 2 == 0 {
            random_equality(&mut r, 4, 2, 6)
        } else {
            random_general(&mut r, (3, 2), (2, 2), 6)
        };
        // awkward binary fractions survive the text format
        let third = Interval::new(0.1 + 0.2, 1.0 / 3.0 + r.random_range(0.0..1e-3)).unwrap();
        p = p.with_eq_x_entry(0, 0, third);
        let path = dir.path().join(format!("p{t}.json"));
        save_problem(&path, &p, Some(&pt)).unwrap();
        let (q, cand) = load_problem(&path).unwrap();
        assert_eq!(p, q);
        assert_eq!(cand.unwrap(), pt);
    }
}

#[test]
fn shipped_files_load() {
    let (p, cand) = load_problem(data_path("disconnected.json")).unwrap();
    assert_eq!((p.m(), p.n()), (2, 3));
    assert_eq!(cand.unwrap().x(), &[1.0, 0.0, 0.0]);
    let (p, cand) = load_problem(data_path("transportation.json")).unwrap();
    assert_eq!((p.m(), p.n()), (6, 9));
    assert_eq!(cand.unwrap().x().iter().sum::<f64>(), 468.0);
    assert_eq!(p.cost_x()[2].mid(), 10.0);
}

#[test]
fn diet_file_has_expected_shape() {
    let p = load_diet(data_path("diet.json"), &DietOptions::default()).unwrap();
    assert_eq!((p.m(), p.n()), (9, 20));
    assert!(p.cost_x().iter().all(|c| c.is_point() && c.lo() == 1.0));
    let entry = p.eq_x().entries().iter().find(|e| e.mid() != 0.0).unwrap();
    assert!((entry.rad() / entry.mid().abs() - 0.05).abs() < 1e-12);
    let exact = load_diet(data_path("diet.json"), &DietOptions { matrix_rel: 0.0, rhs_rel: 0.0, cost_rel: 0.0 }).unwrap();
    assert!(exact.eq_x().is_point());
}

#[test]
fn inverted_bounds_are_rejected_with_location() {
    let text = r#"{"m": 1, "n": 2, "A_lo": [[1, 2]], "A_hi": [[1, 1]],
        "b_lo": [1], "b_hi": [1], "c_lo": [0, 0], "c_hi": [0, 0]}"#;
    match parse_problem(text) {
        Err(ModelError::Field { field, msg }) => {
            assert!(field.starts_with('A'), "{field}");
            assert!(msg.contains("[0][1]"), "{msg}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_line_numbers() {
    match parse_problem("{\n  \"m\": 1,\n  \"n\": oops\n}") {
        Err(ModelError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn flat_and_nested_matrices_agree() {
    let nested = r#"{"m": 2, "n": 2, "A_lo": [[1, 0], [0, 1]], "A_hi": [[1, 0], [0, 2]],
        "b_lo": [1, 1], "b_hi": [1, 2], "c_lo": [1, 1], "c_hi": [1, 1]}"#;
    let flat = r#"{"m": 2, "n": 2, "A_lo": [1, 0, 0, 1], "A_hi": [1, 0, 0, 2],
        "b_lo": [1, 1], "b_hi": [1, 2], "c_lo": [1, 1], "c_hi": [1, 1]}"#;
    assert_eq!(parse_problem(nested).unwrap().0, parse_problem(flat).unwrap().0);
}

#[test]
fn dimension_and_candidate_errors() {
    let short = r#"{"m": 2, "n": 2, "A_lo": [1, 0, 0], "A_hi": [1, 0, 0, 2],
        "b_lo": [1, 1], "b_hi": [1, 2], "c_lo": [1, 1], "c_hi": [1, 1]}"#;
    match parse_problem(short) {
        Err(ModelError::Field { field, msg }) => assert!(field == "A_lo" && msg.contains("found 3"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
    let negative = r#"{"m": 1, "n": 2, "A_lo": [[1, 1]], "A_hi": [[1, 1]],
        "b_lo": [1], "b_hi": [1], "c_lo": [1, 1], "c_hi": [1, 1], "candidate_x": [2, -1]}"#;
    match parse_problem(negative) {
        Err(ModelError::Field { field, msg }) => assert!(field == "candidate_x" && msg.contains("negative"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse_problem(r#"{"m": 0, "n": 0, "bogus": 1}"#), Err(ModelError::Parse { .. })));
    assert!(matches!(load_problem("/nonexistent/problem.json"), Err(ModelError::Io { .. })));
    assert!(CandidatePoint::equality(vec![f64::NAN]).is_err());
}

#[test]
fn transportation_columns_have_two_entries() {
    let mut r = rng(12);
    for _ in 0..20 {
        let (m, n) = (r.random_range(1..=5), r.random_range(1..=5));
        let costs = IntervalMatrix::from_fn(m, n, |_, _| Interval::point(r.random_range(1.0..9.0)));
        let edges: Vec<(usize, usize)> = (0..r.random_range(0..=2)).map(|_| (r.random_range(0..m), r.random_range(0..n))).collect();
        let p = build_transportation(&costs, &IntervalVector::points(&vec![1.0; m]), &IntervalVector::points(&vec![1.0; n]), &edges)
            .unwrap();
        let a = p.eq_x();
        for j in 0..m * n {
            let nonzero = (0..m + n).filter(|&i| a.row(i)[j] != Interval::point(0.0)).count();
            assert_eq!(nonzero, 2);
        }
        if edges.is_empty() {
            let mid = a.mid();
            for i in 0..m {
                assert_eq!(mid.row(i).sum(), n as f64);
            }
            for j in 0..n {
                assert_eq!(mid.row(m + j).sum(), m as f64);
            }
        }
    }
    let costs = IntervalMatrix::zeros(2, 2);
    let one = IntervalVector::points(&[1.0, 1.0]);
    assert!(matches!(build_transportation(&costs, &one, &one, &[(2, 0)]), Err(ModelError::EdgeOutOfRange(2, 0))));
}
