use super::*;
use crate::label::RouteLabel::{self, *};
use proptest::prelude::*;

fn pair(i: u64, reference: Label, predicted: Label) -> LabeledPair {
    LabeledPair {
        id: RouteId::new(1, i, 7),
        predicted,
        reference,
    }
}

fn pairs(spec: &[(Label, Label, usize)]) -> Vec<LabeledPair> {
    let mut out = Vec::new();
    for &(r, p, n) in spec {
        for _ in 0..n {
            out.push(pair(out.len() as u64, r, p));
        }
    }
    out
}

fn r(l: RouteLabel) -> Label {
    Label::Route(l)
}

// counts straight off the pair list
fn oracle(pairs: &[LabeledPair], label: Label) -> (u64, u64, u64) {
    let mut c = (0, 0, 0);
    for p in pairs {
        if p.predicted == label && p.reference == label {
            c.0 += 1;
        } else if p.predicted == label {
            c.1 += 1;
        } else if p.reference == label {
            c.2 += 1;
        }
    }
    c
}

#[test]
fn empty_is_an_error() {
    assert!(matches!(score(&[]), Err(EvalError::Empty)));
}

#[test]
fn all_correct() {
    let ps = pairs(&[(r(Out), r(Out), 3), (r(Post), r(Post), 2), (Label::BlockingBubble, Label::BlockingBubble, 4)]);
    let rep = score(&ps).unwrap();
    assert_eq!(rep.accuracy, 1.0);
    for st in rep.per_label.values() {
        assert_eq!((st.precision, st.recall), (1.0, 1.0));
    }
    assert!(!rep.per_label.contains_key(&Label::BlockingBubble));
    assert_eq!(rep.total, 9);
    assert_eq!(rep.table_count(), 5);
}

#[test]
fn half_right() {
    let ps = pairs(&[(r(Out), r(Out), 1), (r(Out), r(Dig), 1), (r(Dig), r(Out), 1)]);
    let rep = score(&ps).unwrap();
    let out = rep.per_label[&r(Out)];
    assert_eq!((out.precision, out.recall), (0.5, 0.5));
}

#[test]
fn table_shaped_out_row() {
    let ps = pairs(&[
        (r(Out), r(Out), 16),
        (r(Dig), r(Out), 1),
        (r(Out), r(Corner), 12),
        (r(Out), r(Comeback), 8),
        (r(Dig), r(Dig), 9),
        (r(Corner), r(Corner), 5),
        (Label::BlockingBubble, r(Out), 0),
    ]);
    assert_eq!(oracle(&ps, r(Out)), (16, 1, 20));
    let rep = score(&ps).unwrap();
    let out = rep.per_label[&r(Out)];
    assert_eq!(out.precision, 16.0 / 17.0);
    assert_eq!(out.recall, 16.0 / 36.0);
    assert_eq!(out.count, 36);
    // comeback predicted but never in the reference
    let cb = rep.per_label[&r(Comeback)];
    assert!(cb.recall_undefined && !cb.precision_undefined);
    assert_eq!(cb.precision, 0.0);
}

#[test]
fn blocking_counts_toward_accuracy_only() {
    let ps = pairs(&[
        (r(Out), r(Out), 3),
        (Label::BlockingBubble, Label::BlockingBubble, 1),
        (Label::BlockingBubble, r(Flat), 1),
    ]);
    let rep = score(&ps).unwrap();
    assert_eq!(rep.accuracy, 4.0 / 5.0);
    assert_eq!(rep.overall_recall, 1.0);
    assert_eq!(rep.overall_precision, 3.0 / 4.0);
    assert_eq!(rep.per_label[&r(Flat)].count, 0);
}

#[test]
fn confusion_examples() {
    let ps = pairs(&[(r(Out), r(Out), 2), (r(Post), r(Post), 1)]);
    let c = confusion(&ps);
    assert_eq!(c.normalized, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let ps = pairs(&[(r(Slant), r(Post), 3), (r(Post), r(Post), 1)]);
    let c = confusion(&ps);
    assert_eq!(c.labels, vec![r(Post), r(Slant)]);
    assert_eq!(c.normalized[1], vec![1.0, 0.0]);
    assert_eq!(c.trace(), 1);
}

#[test]
fn json_round_trip() {
    let ps = pairs(&[(r(Out), r(Out), 16), (r(Dig), r(Out), 1), (r(Out), r(Corner), 20), (Label::BlockingBubble, r(Wheel), 2)]);
    let rep = score(&ps).unwrap();
    let bytes = render_report(&rep, ReportFormat::Json);
    let back: EvalReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn text_has_table_columns() {
    let ps = pairs(&[(r(Out), r(Out), 16), (r(Dig), r(Out), 1), (r(Out), r(Corner), 20)]);
    let rep = score(&ps).unwrap();
    let text = String::from_utf8(render_report(&rep, ReportFormat::Text)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    assert_eq!(header, ["Route", "Precision", "Recall", "Count"]);
    assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["corner", "0.00", "-", "0"]);
    assert_eq!(lines[3].split_whitespace().collect::<Vec<_>>(), ["out", "0.94", "0.44", "36"]);
    assert!(lines[4].starts_with("Overall"));
}

#[test]
fn svg_is_well_formed() {
    let ps = pairs(&[(r(Out), r(Out), 2), (r(Out), r(Dig), 1), (Label::BlockingBubble, r(Flat), 1)]);
    let rep = score(&ps).unwrap();
    let svg = String::from_utf8(render_report(&rep, ReportFormat::Svg)).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let cells = doc.descendants().filter(|n| n.has_tag_name("rect")).count();
    assert_eq!(cells, 1 + 4 * 4);
}

#[test]
fn format_names() {
    assert_eq!("SVG".parse::<ReportFormat>().unwrap(), ReportFormat::Svg);
    assert!(matches!("pdf".parse::<ReportFormat>(), Err(EvalError::UnknownFormat(_))));
}

#[test]
fn join_reports_unmatched() {
    use crate::classify::MatchResult;
    let pred = |p: u64, l: Label| MatchResult {
        id: RouteId::new(1, p, 1),
        label: l,
        best_distance: None,
        best_template: None,
        best_shift: None,
        d_game: None,
        d_scaled: None,
        per_template: Default::default(),
    };
    let refs = vec![
        ReferenceLabel { id: RouteId::new(1, 2, 1), label: r(Out) },
        ReferenceLabel { id: RouteId::new(1, 3, 1), label: r(Dig) },
    ];
    let j = join(&[pred(1, r(Out)), pred(2, r(Post))], &refs).unwrap();
    assert_eq!(j.pairs, vec![pair_id(2, r(Out), r(Post))]);
    assert_eq!(j.unmatched_predictions, vec![RouteId::new(1, 1, 1)]);
    assert_eq!(j.unmatched_references, vec![RouteId::new(1, 3, 1)]);
    assert!(!j.is_complete());
    assert!(matches!(
        join(&[pred(1, r(Out)), pred(1, r(Out))], &refs),
        Err(EvalError::Duplicate { .. })
    ));

    fn pair_id(p: u64, reference: Label, predicted: Label) -> LabeledPair {
        LabeledPair { id: RouteId::new(1, p, 1), predicted, reference }
    }
}

#[test]
fn reference_line_format() {
    let line = r#"{"game_id":2017091004,"play_id":75,"player_id":2543498,"label":"blocking/bubble"}"#;
    let refs = read_references(line.as_bytes()).unwrap();
    assert_eq!(refs[0].label, Label::BlockingBubble);
    let mut out = Vec::new();
    write_references(&mut out, &refs).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().trim(), line);
}

fn any_label(with_blocking: bool) -> impl Strategy<Value = Label> {
    let n: usize = if with_blocking { 12 } else { 11 };
    (0..n).prop_map(|i| if i == 11 { Label::BlockingBubble } else { Label::Route(RouteLabel::ALL[i]) })
}

fn pair_list(with_blocking: bool) -> impl Strategy<Value = Vec<LabeledPair>> {
    prop::collection::vec((any_label(with_blocking), any_label(with_blocking)), 1..120).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b))| pair(i as u64, a, b))
            .collect()
    })
}

proptest! {
    #[test]
    fn rows_sum_to_one(ps in pair_list(true)) {
        let c = confusion(&ps);
        for (i, row) in c.normalized.iter().enumerate() {
            if c.row_total(i) > 0 {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            }
        }
        prop_assert_eq!(c.total(), ps.len() as u64);
    }

    #[test]
    fn matches_counting_oracle(ps in pair_list(true)) {
        let rep = score(&ps).unwrap();
        for (label, st) in &rep.per_label {
            let (tp, fp, fn_) = oracle(&ps, *label);
            prop_assert_eq!((st.true_positives, st.false_positives, st.false_negatives), (tp, fp, fn_));
            if tp + fp > 0 {
                prop_assert!((st.precision - tp as f64 / (tp + fp) as f64).abs() <= 1e-12);
            }
        }
        let correct = ps.iter().filter(|p| p.predicted == p.reference).count();
        prop_assert_eq!(rep.accuracy, correct as f64 / ps.len() as f64);
    }

    #[test]
    fn micro_average_equals_accuracy_in_a_single_label_space(ps in pair_list(false)) {
        let rep = score(&ps).unwrap();
        prop_assert!((rep.overall_precision - rep.accuracy).abs() <= 1e-12);
        prop_assert!((rep.overall_recall - rep.accuracy).abs() <= 1e-12);
    }

    #[test]
    fn permutation_invariant(ps in pair_list(true), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = ps.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(score(&ps).unwrap(), score(&shuffled).unwrap());
    }

    #[test]
    fn correct_pair_never_lowers_accuracy(ps in pair_list(true), l in any_label(true)) {
        let before = score(&ps).unwrap().accuracy;
        let mut more = ps.clone();
        more.push(pair(10_000, l, l));
        prop_assert!(score(&more).unwrap().accuracy >= before);
    }
}
