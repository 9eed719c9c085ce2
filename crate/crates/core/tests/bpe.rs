mod common;

use std::collections::{BTreeMap, BTreeSet};

use morphotok::eval::{evaluate, BpeAdapter, CorpusCounts, EvalOptions};
use morphotok::{train_bpe, BpeModel, Error};
use proptest::prelude::*;
use unicode_segmentation::UnicodeSegmentation;

/// Reference trainer: recounts every pair from scratch at each step.
fn naive_train(counts: &[(&str, u64)], vocab_size: usize) -> Vec<(String, String)> {
    let mut words: Vec<(Vec<String>, u64)> = counts
        .iter()
        .map(|(w, n)| (w.graphemes(true).map(String::from).collect(), *n))
        .collect();
    let alphabet: BTreeSet<String> = words.iter().flat_map(|(s, _)| s.clone()).collect();
    let mut merges = Vec::new();
    while alphabet.len() + merges.len() < vocab_size {
        let mut pairs: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (syms, n) in &words {
            for w in syms.windows(2) {
                *pairs.entry((w[0].clone(), w[1].clone())).or_default() += n;
            }
        }
        let Some(best) = pairs.values().copied().max() else {
            break;
        };
        let (a, b) = pairs.into_iter().find(|(_, n)| *n == best).unwrap().0;
        for (syms, _) in &mut words {
            let mut out = Vec::new();
            let mut i = 0;
            while i < syms.len() {
                if i + 1 < syms.len() && syms[i] == a && syms[i + 1] == b {
                    out.push(format!("{a}{b}"));
                    i += 2;
                } else {
                    out.push(syms[i].clone());
                    i += 1;
                }
            }
            *syms = out;
        }
        merges.push((a, b));
    }
    merges
}

fn pairs(merges: &[(&str, &str)]) -> Vec<(String, String)> {
    merges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn hand_derived_merge_sequence() {
    let corpus = [("low", 5), ("lower", 2), ("newest", 6), ("widest", 3)];
    let counts = CorpusCounts::from_pairs(corpus);
    let model = train_bpe(&counts, 17).unwrap();
    assert_eq!(model.alphabet().len(), 10);
    let want = pairs(&[
        ("e", "s"),
        ("es", "t"),
        ("l", "o"),
        ("lo", "w"),
        ("e", "w"),
        ("ew", "est"),
        ("n", "ewest"),
    ]);
    assert_eq!(model.merges(), want.as_slice());
    assert_eq!(naive_train(&corpus, 17), want);
    assert_eq!(model.tokenize("newest"), ["newest"]);
    assert_eq!(model.tokenize("lowest"), ["low", "est"]);
    assert_eq!(model.tokenize("widest"), ["w", "i", "d", "est"]);
}

#[test]
fn second_hand_fixture() {
    let corpus = [("aaab", 4), ("ab", 3), ("b", 9)];
    let counts = CorpusCounts::from_pairs(corpus);
    let model = train_bpe(&counts, 5).unwrap();
    assert_eq!(model.merges(), pairs(&[("a", "a"), ("a", "b"), ("aa", "ab")]).as_slice());
    assert_eq!(model.tokenize("aaab"), ["aaab"]);
    assert_eq!(model.tokenize("aaa"), ["aa", "a"]);
}

#[test]
fn vocab_size_bounds() {
    let counts = CorpusCounts::from_pairs([("abc", 1u64)]);
    assert!(matches!(train_bpe(&counts, 2), Err(Error::VocabSizeTooSmall { alphabet: 3 })));
    assert!(train_bpe(&counts, 3).unwrap().merges().is_empty());
    assert_eq!(train_bpe(&counts, 100).unwrap().vocab_size(), 5);
}

#[test]
fn matches_naive_trainer_on_fixture_corpus() {
    let counts = common::corpus_counts("fi");
    let ranked = counts.ranked();
    let model = train_bpe(&counts, 400).unwrap();
    assert_eq!(model.merges(), naive_train(&ranked, 400).as_slice());
}

#[test]
fn grapheme_symbols_for_tamil() {
    let counts = common::corpus_counts("ta");
    let model = train_bpe(&counts, 300).unwrap();
    assert!(model.alphabet().iter().any(|s| s == "கொ"));
    let text = model.to_file_string();
    assert_eq!(BpeModel::parse(&text).unwrap(), model);
}

#[test]
fn fertility_is_monotone_in_vocab_size() {
    let synth = common::synthetic(220, 45, 50_000);
    let alphabet = train_bpe(&synth.train, 1).err().map(|e| match e {
        Error::VocabSizeTooSmall { alphabet } => alphabet,
        other => panic!("{other}"),
    });
    let alphabet = alphabet.unwrap();
    let words: Vec<&str> = synth.heldout.ranked().into_iter().map(|(w, _)| w).collect();
    let mut last = f64::INFINITY;
    let mut prev: Option<BpeModel> = None;
    for extra in [50, 200, 500, 1000, 2000, 4000] {
        let model = train_bpe(&synth.train, alphabet + extra).unwrap();
        if let Some(p) = &prev {
            assert_eq!(&model.merges()[..p.merges().len()], p.merges());
        }
        let report = evaluate(&BpeAdapter::new(&model), &words, &EvalOptions::default()).unwrap();
        assert!(report.fertility <= last, "{} > {last} at +{extra}", report.fertility);
        last = report.fertility;
        prev = Some(model);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn trainer_matches_reference(
        words in prop::collection::btree_map("[abcd]{1,8}", 1u64..20, 1..25),
        extra in 0usize..30,
    ) {
        let list: Vec<(&str, u64)> = words.iter().map(|(w, n)| (w.as_str(), *n)).collect();
        let counts = CorpusCounts::from_pairs(list.iter().copied());
        let alphabet: BTreeSet<&str> = words.keys().flat_map(|w| w.graphemes(true)).collect();
        let size = alphabet.len() + extra;
        let model = train_bpe(&counts, size).unwrap();
        let want = naive_train(&list, size);
        prop_assert_eq!(model.merges(), want.as_slice());
        for w in words.keys() {
            let toks = model.tokenize(w);
            prop_assert_eq!(toks.concat(), w.clone());
        }
    }

    #[test]
    fn tokenize_is_lossless(word in "\\PC{0,20}") {
        let counts = CorpusCounts::from_pairs([("abcabc", 3u64), ("cab", 2)]);
        let model = train_bpe(&counts, 8).unwrap();
        prop_assert_eq!(model.tokenize(&word).concat(), word);
    }
}
