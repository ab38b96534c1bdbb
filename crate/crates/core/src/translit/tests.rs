use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::scripts::{self, CharClass};

fn deva() -> SchemeTable<f64> {
    SchemeTable::builtin("deva").unwrap()
}

fn natural() -> SchemeTable<f64> {
    SchemeTable::builtin("deva-natural-demo").unwrap()
}

#[test]
fn builtin_tables_load() {
    for name in SchemeTable::<f64>::builtin_names() {
        SchemeTable::<f64>::builtin(name).unwrap();
    }
}

#[test]
fn romanize_single_consonant() {
    assert_eq!(deva().romanize("\u{0915}"), "ka");
    assert_eq!(deva().romanize("\u{0915}\u{094D}"), "k");
}

#[test]
fn romanize_word() {
    // BHA + AA-sign + RA + TA
    assert_eq!(deva().romanize("भारत"), "bhArata");
}

#[test]
fn deromanize_inverse_examples() {
    assert_eq!(deva().deromanize_deterministic("ka").unwrap(), "क");
    assert_eq!(deva().deromanize_deterministic("").unwrap(), "");
    assert_eq!(deva().deromanize_deterministic("bhArata").unwrap(), "भारत");
}

#[test]
fn deromanize_consumes_separator() {
    assert_eq!(deva().deromanize_deterministic("a_i").unwrap(), "अइ");
    // without a separator, longest match reads the diphthong
    assert_eq!(deva().deromanize_deterministic("ai").unwrap(), "ऐ");
}

#[test]
fn romanize_inserts_separator_where_needed() {
    // independent A + independent I would re-parse as AI
    let roman = deva().romanize("अइ");
    assert_eq!(roman, "a_i");
    // dead consonant before an independent vowel
    let roman = deva().romanize("क्आ");
    assert_eq!(deva().deromanize_deterministic(&roman).unwrap(), "क्आ");
}

#[test]
fn romanize_maps_digits_and_passthrough() {
    assert_eq!(deva().romanize("१२३ abc"), "123 abc");
    assert_eq!(deva().romanize("क।"), "ka।");
}

#[test]
fn deterministic_rejects_wrong_kind_ops() {
    assert!(matches!(
        deva().natural_candidates("ka", 4),
        Err(TranslitError::KindMismatch { .. })
    ));
    assert!(matches!(
        natural().deromanize_deterministic("ka"),
        Err(TranslitError::KindMismatch { .. })
    ));
}

#[test]
fn parse_rejects_gappy_table() {
    let text = "#script deva\n#kind deterministic\ngrapheme_kind\tnative\troman\tweight\nconsonant\tक\tk\t1\n";
    match SchemeTable::<f64>::parse(text) {
        Err(TranslitError::CoverageGaps(gaps)) => assert!(gaps.contains("U+0916")),
        other => panic!("expected coverage gaps, got {other:?}"),
    }
}

#[test]
fn parse_rejects_irreversible_table() {
    // two consonants sharing one roman cannot round-trip
    let mut text = String::from("#kind deterministic\ngrapheme_kind\tnative\troman\tweight\n");
    let full = deva();
    for kind in [
        GraphemeKind::Consonant,
        GraphemeKind::IndependentVowel,
        GraphemeKind::VowelSign,
        GraphemeKind::InherentVowel,
        GraphemeKind::Modifier,
        GraphemeKind::Digit,
    ] {
        for native in full.natives(kind) {
            let roman = match (kind, native) {
                (GraphemeKind::Consonant, "ख") => "k".to_string(),
                _ => full.romans(kind, native).unwrap()[0].roman.clone(),
            };
            let kind_name = match kind {
                GraphemeKind::Consonant => "consonant",
                GraphemeKind::IndependentVowel => "independent_vowel",
                GraphemeKind::VowelSign => "vowel_sign",
                GraphemeKind::InherentVowel => "inherent_vowel",
                GraphemeKind::Modifier => "modifier",
                GraphemeKind::Digit => "digit",
            };
            text.push_str(&format!("{kind_name}\t{native}\t{roman}\t1\n"));
        }
    }
    let script = scripts::builtin("deva").unwrap().clone();
    match SchemeTable::<f64>::parse_rows(&text, script, SchemeKind::Deterministic, false) {
        Err(TranslitError::RoundTrip { .. }) => {}
        other => panic!("expected round-trip failure, got {other:?}"),
    }
}

#[test]
fn natural_candidate_cardinality() {
    let table = natural();
    // single unambiguous segmentation, one alternative per grapheme
    let one = table.natural_candidates("ge", 100).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].native, "गे");

    // two graphemes with 2 and 3 alternatives → 6 candidates before capping
    let script = scripts::builtin("deva").unwrap().clone();
    let text = "#kind natural\ngrapheme_kind\tnative\troman\tweight\n\
consonant\tक\tQ\t0.6\nconsonant\tख\tQ\t0.4\n\
vowel_sign\tा\tY\t0.5\nvowel_sign\tी\tY\t0.3\nvowel_sign\tू\tY\t0.2\n";
    let text = complete_table(text, &script);
    let table = SchemeTable::<f64>::parse_rows(&text, script, SchemeKind::Natural, false).unwrap();
    let cands = table.natural_candidates("QY", 100).unwrap();
    assert_eq!(cands.len(), 6);
    // top-2 by weight: क(0.6)·ा(0.5)=0.30 then ख(0.4)·ा(0.5)=0.20
    let top = table.natural_candidates("QY", 2).unwrap();
    assert_eq!(top[0].native, "का");
    assert!((top[0].weight - 0.30).abs() < 1e-12);
    assert_eq!(top[1].native, "खा");
    assert!((top[1].weight - 0.20).abs() < 1e-12);
}

/// Fill out a partial table with deterministic rows so coverage passes.
fn complete_table(prefix: &str, script: &crate::scripts::Script) -> String {
    let full = deva();
    let mut text = String::from(prefix);
    let _ = script;
    for kind in [
        GraphemeKind::Consonant,
        GraphemeKind::IndependentVowel,
        GraphemeKind::VowelSign,
        GraphemeKind::InherentVowel,
        GraphemeKind::Modifier,
        GraphemeKind::Digit,
    ] {
        let kind_name = match kind {
            GraphemeKind::Consonant => "consonant",
            GraphemeKind::IndependentVowel => "independent_vowel",
            GraphemeKind::VowelSign => "vowel_sign",
            GraphemeKind::InherentVowel => "inherent_vowel",
            GraphemeKind::Modifier => "modifier",
            GraphemeKind::Digit => "digit",
        };
        for native in full.natives(kind) {
            let roman = &full.romans(kind, native).unwrap()[0].roman;
            text.push_str(&format!("{kind_name}\t{native}\t{roman}\t1\n"));
        }
    }
    text
}

#[test]
fn natural_schwa_variants() {
    let table = natural();
    let cands = table.natural_candidates("ghar", 100).unwrap();
    let natives: Vec<&str> = cands.iter().map(|c| c.native.as_str()).collect();
    // restored schwa and as-is dead consonant both present
    assert!(natives.contains(&"घर"), "{natives:?}");
    assert!(natives.contains(&"घर्"), "{natives:?}");
}

#[test]
fn natural_unparseable() {
    assert!(matches!(
        natural().natural_candidates("q#x", 8),
        Err(TranslitError::Unparseable { .. })
    ));
}

#[test]
fn lm_rescoring_prefers_frequent_candidate() {
    let lm = UnigramLm::from_counts(
        BTreeMap::from([("घर".to_string(), 50), ("घार".to_string(), 3)]),
        1.0,
    )
    .unwrap();
    let out =
        deromanize_with_lm(&natural(), &lm, None, "ghar", RescoreConfig::default()).unwrap();
    assert_eq!(out, "घर");
}

#[test]
fn lm_tie_breaks_lexicographically() {
    // no counts at all: every candidate is OOV with an equal smoothed score
    let lm = UnigramLm::from_counts(BTreeMap::from([("x".to_string(), 1)]), 1.0).unwrap();
    let cands = natural().natural_candidates("ghar", 10000).unwrap();
    let smallest = cands.iter().map(|c| c.native.clone()).min().unwrap();
    let out =
        deromanize_with_lm(&natural(), &lm, None, "ghar", RescoreConfig::default()).unwrap();
    assert_eq!(out, smallest);
}

#[test]
fn lm_fallback_and_preservation() {
    let lm = UnigramLm::from_counts(BTreeMap::from([("घर".to_string(), 2)]), 1.0).unwrap();
    let det = deva();
    // "#!" words pass through; parseable cores convert; punctuation affixes stay
    let out = deromanize_with_lm(
        &natural(),
        &lm,
        Some(&det),
        "ghar, \"ghar\"  #!",
        RescoreConfig::default(),
    )
    .unwrap();
    assert_eq!(out, "घर, \"घर\"  #!");
}

#[test]
fn train_unigram_counts_and_scores() {
    let lm: UnigramLm<f64> = UnigramLm::train(["a a b"], 1.0).unwrap();
    assert_eq!(lm.count("a"), 2);
    assert_eq!(lm.count("b"), 1);
    assert_eq!(lm.total(), 3);
    // alpha=1, V=2: score(a)=ln(3/6), score(b)=ln(2/6), OOV=ln(1/6)
    assert!((lm.score("a") - (0.5f64).ln()).abs() < 1e-12);
    assert!((lm.score("b") - (2.0f64 / 6.0).ln()).abs() < 1e-12);
    assert!((lm.score("zzz") - (1.0f64 / 6.0).ln()).abs() < 1e-12);
}

#[test]
fn train_unigram_empty_corpus() {
    assert!(matches!(
        UnigramLm::<f64>::train(["   ", ""], 1.0),
        Err(TranslitError::EmptyCorpus)
    ));
}

#[test]
fn lm_tsv_round_trip() {
    let lm: UnigramLm<f64> = UnigramLm::train(["घर घर सड़क"], 0.5).unwrap();
    let tsv = lm.to_tsv();
    let back = UnigramLm::<f64>::parse(&tsv).unwrap();
    assert_eq!(back.alpha(), 0.5);
    assert_eq!(back.count("घर"), 2);
    assert_eq!(back.total(), 3);
}

#[test]
fn lm_probabilities_sum_to_one() {
    let lm: UnigramLm<f64> =
        UnigramLm::train(["एक दो दो तीन तीन तीन"], 1.0).unwrap();
    let known: f64 = lm.words().map(|(w, _)| lm.score(w).exp()).sum();
    let total = known + lm.oov_score().exp();
    assert!((total - 1.0).abs() < 1e-9, "sum {total}");
}

/// Independent brute-force enumeration of candidate parses, used as the
/// oracle for `natural_candidates` and `deromanize_with_lm`. Mirrors the
/// documented scoring rules but shares no code with the implementation.
pub(crate) fn brute_force_parses(
    table: &SchemeTable<f64>,
    word: &str,
) -> BTreeMap<String, f64> {
    #[derive(Clone)]
    struct State {
        pos: usize,
        pending: Option<String>,
        native: String,
        weight: f64,
    }
    let virama = table.script().virama();
    let mut done: BTreeMap<String, f64> = BTreeMap::new();
    let mut queue = vec![State { pos: 0, pending: None, native: String::new(), weight: 1.0 }];
    while let Some(state) = queue.pop() {
        if state.pos == word.len() {
            let mut outs = Vec::new();
            match &state.pending {
                Some(c) => {
                    if table.schwa_deletion() {
                        outs.push(format!("{}{}", state.native, c));
                    }
                    outs.push(format!("{}{}{}", state.native, c, virama));
                }
                None => outs.push(state.native.clone()),
            }
            for native in outs {
                let entry = done.entry(native).or_insert(f64::NEG_INFINITY);
                if state.weight > *entry {
                    *entry = state.weight;
                }
            }
            continue;
        }
        let rest = &word[state.pos..];
        if rest.starts_with(SEPARATOR) {
            let mut native = state.native.clone();
            if let Some(c) = &state.pending {
                native.push_str(c);
                native.push(virama);
            }
            queue.push(State {
                pos: state.pos + SEPARATOR.len_utf8(),
                pending: None,
                native,
                weight: state.weight,
            });
            continue;
        }
        for len in 1..=rest.len() {
            if !rest.is_char_boundary(len) {
                continue;
            }
            let roman = &rest[..len];
            for kind in [
                GraphemeKind::Consonant,
                GraphemeKind::IndependentVowel,
                GraphemeKind::VowelSign,
                GraphemeKind::InherentVowel,
                GraphemeKind::Modifier,
                GraphemeKind::Digit,
            ] {
                for native_key in table.natives(kind) {
                    for alt in table.romans(kind, native_key).unwrap() {
                        if alt.roman != roman {
                            continue;
                        }
                        let weight = state.weight * alt.weight;
                        let pos = state.pos + len;
                        match (kind, &state.pending) {
                            (GraphemeKind::InherentVowel, Some(c)) => queue.push(State {
                                pos,
                                pending: None,
                                native: format!("{}{}", state.native, c),
                                weight,
                            }),
                            (
                                GraphemeKind::InherentVowel | GraphemeKind::VowelSign,
                                None,
                            )
                            | (GraphemeKind::IndependentVowel, Some(_)) => {}
                            (GraphemeKind::VowelSign, Some(c)) => queue.push(State {
                                pos,
                                pending: None,
                                native: format!("{}{}{}", state.native, c, native_key),
                                weight,
                            }),
                            (GraphemeKind::Consonant, pending) => {
                                let mut native = state.native.clone();
                                if let Some(c) = pending {
                                    native.push_str(c);
                                    native.push(virama);
                                }
                                queue.push(State {
                                    pos,
                                    pending: Some(native_key.to_string()),
                                    native,
                                    weight,
                                });
                            }
                            (_, pending) => {
                                let mut native = state.native.clone();
                                if let Some(c) = pending {
                                    native.push_str(c);
                                    native.push(virama);
                                }
                                native.push_str(native_key);
                                queue.push(State { pos, pending: None, native, weight });
                            }
                        }
                    }
                }
            }
        }
    }
    done
}

#[test]
fn candidates_match_brute_force() {
    let table = natural();
    for word in ["ghar", "kya", "bhaarat", "shaam", "kii", "sun"] {
        let oracle = brute_force_parses(&table, word);
        let got = table.natural_candidates(word, usize::MAX).unwrap();
        assert_eq!(got.len(), oracle.len(), "{word}");
        for c in &got {
            let w = oracle.get(&c.native).copied().unwrap_or(f64::NEG_INFINITY);
            assert!((c.weight - w).abs() < 1e-12, "{word}: {:?} {} vs {}", c.native, c.weight, w);
        }
    }
}

fn cluster_strategy(name: &'static str) -> impl Strategy<Value = String> {
    let table = SchemeTable::<f64>::builtin(name).unwrap();
    let consonants: Vec<String> =
        table.natives(GraphemeKind::Consonant).iter().map(|s| s.to_string()).collect();
    let signs: Vec<String> =
        table.natives(GraphemeKind::VowelSign).iter().map(|s| s.to_string()).collect();
    let independents: Vec<String> =
        table.natives(GraphemeKind::IndependentVowel).iter().map(|s| s.to_string()).collect();
    let modifiers: Vec<String> =
        table.natives(GraphemeKind::Modifier).iter().map(|s| s.to_string()).collect();
    let digits: Vec<String> =
        table.natives(GraphemeKind::Digit).iter().map(|s| s.to_string()).collect();
    let virama = table.script().virama();

    let consonant_cluster = (
        proptest::collection::vec(proptest::sample::select(consonants), 1..3),
        prop_oneof![
            Just(None),                                         // dead (virama)
            Just(Some(String::new())),                          // inherent
            proptest::sample::select(signs).prop_map(Some),     // vowel sign
        ],
        proptest::collection::vec(proptest::sample::select(modifiers.clone()), 0..2),
    )
        .prop_map(move |(cons, vowel, mods)| {
            let mut s = cons.join(&virama.to_string());
            match vowel {
                None => s.push(virama),
                Some(v) => s.push_str(&v),
            }
            s.extend(mods.iter().flat_map(|m| m.chars()));
            s
        });
    let independent_cluster = (
        proptest::sample::select(independents),
        proptest::collection::vec(proptest::sample::select(modifiers), 0..2),
    )
        .prop_map(|(v, mods)| {
            let mut s = v;
            s.extend(mods.iter().flat_map(|m| m.chars()));
            s
        });
    prop_oneof![
        4 => consonant_cluster,
        2 => independent_cluster,
        1 => proptest::sample::select(digits),
        1 => Just(" ".to_string()),
    ]
}

pub(crate) fn native_text_strategy(name: &'static str) -> impl Strategy<Value = String> {
    proptest::collection::vec(cluster_strategy(name), 0..12).prop_map(|parts| parts.concat())
}

proptest! {
    #[test]
    fn deterministic_round_trip_deva(s in native_text_strategy("deva")) {
        let table = deva();
        let roman = table.romanize(&s);
        prop_assert_eq!(table.deromanize_deterministic(&roman).unwrap(), s);
    }

    #[test]
    fn canonical_image_round_trip(s in native_text_strategy("deva")) {
        let table = deva();
        let roman = table.romanize(&s);
        let back = table.deromanize_deterministic(&roman).unwrap();
        prop_assert_eq!(table.romanize(&back), roman);
    }

    #[test]
    fn score_monotone_in_count(c1 in 1u64..10_000, c2 in 1u64..10_000) {
        prop_assume!(c1 > c2);
        let lm = UnigramLm::from_counts(
            BTreeMap::from([("w1".to_string(), c1), ("w2".to_string(), c2)]),
            1.0,
        ).unwrap();
        prop_assert!(lm.score("w1") > lm.score("w2"));
    }

    #[test]
    fn natural_top_k_monotone(word in "[kgbs][ha]{1,4}", k in 1usize..6) {
        let table = natural();
        if let Ok(smaller) = table.natural_candidates(&word, k) {
            let larger = table.natural_candidates(&word, k + 1).unwrap();
            for c in &smaller {
                prop_assert!(larger.iter().any(|d| d.native == c.native));
            }
        }
    }
}

#[test]
fn segmentation_classification_totality() {
    // classify never fails, even for unassigned planes
    let script = scripts::builtin("deva").unwrap();
    for c in ['\u{0}', 'x', '\u{10FFFF}', '\u{0915}'] {
        let _ = script.classify(c);
    }
    assert_eq!(script.classify('\u{0915}'), CharClass::Consonant);
}
