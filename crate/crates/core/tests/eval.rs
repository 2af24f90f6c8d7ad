use proptest::prelude::*;

use tweet_emotion::eval::{score, EvalReport};
use tweet_emotion::rng::SplitMix64;
use tweet_emotion::EmotionLabel;

fn label() -> impl Strategy<Value = EmotionLabel> {
    (0usize..5).prop_map(|i| EmotionLabel::ALL[i])
}

#[test]
fn micro_f1_equals_accuracy_on_random_prediction_sets() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..1000 {
        let n = 1 + rng.below(60) as usize;
        let skew = rng.next_f64();
        let pairs: Vec<_> = (0..n)
            .map(|_| {
                let gold = EmotionLabel::ALL[rng.below(5) as usize];
                let pred = if rng.next_f64() < skew { gold } else { EmotionLabel::ALL[rng.below(5) as usize] };
                (gold, pred)
            })
            .collect();
        let r = score(&pairs, &EmotionLabel::ALL).unwrap();
        assert!((r.micro_f1() - r.accuracy).abs() <= 1e-12);
    }
}

#[test]
fn hand_counted_four_records() {
    use EmotionLabel::{Anger, Fear};
    let r = score(&[(Anger, Anger), (Anger, Fear), (Fear, Fear), (Fear, Fear)], &[Anger, Fear]).unwrap();
    assert_eq!(r.accuracy, 0.75);
    assert_eq!((r.per_class[0].precision, r.per_class[0].recall), (1.0, 0.5));
    assert_eq!(r.per_class[0].f1, 2.0 * 0.5 / 1.5);
    assert_eq!((r.per_class[1].precision, r.per_class[1].recall), (2.0 / 3.0, 1.0));
    assert!((r.per_class[1].f1 - 0.8).abs() < 1e-15);
}

proptest! {
    #[test]
    fn report_invariants(pairs in prop::collection::vec((label(), label()), 1..80), seed in any::<u64>()) {
        let r = score(&pairs, &EmotionLabel::ALL).unwrap();
        let total: u64 = r.confusion.iter().flatten().sum();
        prop_assert_eq!(total as usize, pairs.len());
        let trace: u64 = (0..5).map(|i| r.confusion[i][i]).sum();
        prop_assert_eq!(r.accuracy, trace as f64 / total as f64);
        for (row, m) in r.confusion.iter().zip(&r.per_class) {
            prop_assert_eq!(row.iter().sum::<u64>(), m.support);
            for v in [m.precision, m.recall, m.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        let mut shuffled = pairs.clone();
        SplitMix64::new(seed).shuffle(&mut shuffled);
        prop_assert_eq!(score(&shuffled, &EmotionLabel::ALL).unwrap(), r.clone());

        let diagonal: Vec<_> = pairs.iter().map(|&(g, _)| (g, g)).collect();
        let d = score(&diagonal, &EmotionLabel::ALL).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                prop_assert!(i == j || d.confusion[i][j] == 0);
            }
        }

        prop_assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r.clone());
        prop_assert_eq!(EvalReport::from_csv(&r.to_csv()).unwrap(), r.clone());
        prop_assert_eq!(EvalReport::from_text(&r.to_text()).unwrap(), r);
    }
}
