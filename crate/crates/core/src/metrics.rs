//! Translation and summarization metrics (chrF, Rouge-L) and the cosine
//! analysis of exported sentence embeddings.

use std::collections::HashMap;

use thiserror::Error;

use crate::num::Real;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("embedding sets are misaligned: {0}")]
    Misaligned(String),
    #[error("embedding file line {line}: {msg}")]
    EmbeddingParse { line: usize, msg: String },
    #[error("batch input line {line}: {msg}")]
    BatchParse { line: usize, msg: String },
}

/// chrF configuration. Defaults mirror the common evaluation setting:
/// character order 6, no word n-grams, beta 2, effective-order averaging,
/// whitespace stripped, case kept as-is.
#[derive(Debug, Clone, PartialEq)]
pub struct ChrfParams<S: Real = f64> {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: S,
    pub effective_order: bool,
    pub remove_whitespace: bool,
    pub case_sensitive: bool,
}

impl<S: Real> Default for ChrfParams<S> {
    fn default() -> Self {
        Self {
            char_order: 6,
            word_order: 0,
            beta: S::from_f64(2.0).unwrap(),
            effective_order: true,
            remove_whitespace: true,
            case_sensitive: true,
        }
    }
}

impl<S: Real> ChrfParams<S> {
    fn validate(&self) {
        assert!(self.char_order >= 1, "char_order must be at least 1");
        assert!(self.beta > S::zero(), "beta must be positive");
    }
}

/// Match statistics for one n-gram order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct OrderStats {
    hyp: u64,
    refr: u64,
    matched: u64,
}

fn count_char_ngrams(s: &[char], n: usize) -> HashMap<&[char], u64> {
    let mut m: HashMap<&[char], u64> = HashMap::new();
    if s.len() >= n {
        for w in s.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

fn char_ngram_stats(hyp: &[char], refr: &[char], n: usize) -> OrderStats {
    let h = count_char_ngrams(hyp, n);
    let r = count_char_ngrams(refr, n);
    let matched = h
        .iter()
        .map(|(g, c)| (*c).min(r.get(g).copied().unwrap_or(0)))
        .sum();
    OrderStats { hyp: h.values().sum(), refr: r.values().sum(), matched }
}

fn count_word_ngrams<'a>(s: &'a [&'a str], n: usize) -> HashMap<Vec<&'a str>, u64> {
    let mut m = HashMap::new();
    if s.len() >= n {
        for w in s.windows(n) {
            *m.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    m
}

fn word_ngram_stats<'a>(hyp: &'a [&'a str], refr: &'a [&'a str], n: usize) -> OrderStats {
    let h = count_word_ngrams(hyp, n);
    let r = count_word_ngrams(refr, n);
    let matched = h
        .iter()
        .map(|(g, c)| (*c).min(r.get(g).copied().unwrap_or(0)))
        .sum();
    OrderStats { hyp: h.values().sum(), refr: r.values().sum(), matched }
}

fn pair_stats<S: Real>(hyp: &str, refr: &str, params: &ChrfParams<S>) -> Vec<OrderStats> {
    let prep = |s: &str| -> String {
        let s = if params.case_sensitive { s.to_string() } else { s.to_lowercase() };
        if params.remove_whitespace {
            s.chars().filter(|c| !c.is_whitespace()).collect()
        } else {
            s
        }
    };
    let h: Vec<char> = prep(hyp).chars().collect();
    let r: Vec<char> = prep(refr).chars().collect();
    let mut stats = Vec::with_capacity(params.char_order + params.word_order);
    for n in 1..=params.char_order {
        stats.push(char_ngram_stats(&h, &r, n));
    }
    if params.word_order > 0 {
        let hw: Vec<&str> = hyp.split_whitespace().collect();
        let rw: Vec<&str> = refr.split_whitespace().collect();
        for n in 1..=params.word_order {
            stats.push(word_ngram_stats(&hw, &rw, n));
        }
    }
    stats
}

fn f_score_from_stats<S: Real>(stats: &[OrderStats], params: &ChrfParams<S>) -> S {
    let factor = params.beta * params.beta;
    let mut score = S::zero();
    let mut effective = 0usize;
    for s in stats {
        if s.hyp > 0 && s.refr > 0 {
            effective += 1;
            if s.matched > 0 {
                let prec = S::from_u64(s.matched).unwrap() / S::from_u64(s.hyp).unwrap();
                let rec = S::from_u64(s.matched).unwrap() / S::from_u64(s.refr).unwrap();
                let denom = factor * prec + rec;
                score = score + (S::one() + factor) * prec * rec / denom;
            }
        }
    }
    let divisor = if params.effective_order { effective } else { stats.len() };
    if divisor == 0 {
        return S::zero();
    }
    S::from_f64(100.0).unwrap() * score / S::from_usize(divisor).unwrap()
}

/// Sentence-level chrF in [0, 100]: per-order F_beta over character n-grams,
/// averaged over non-degenerate orders (when `effective_order` is set).
/// Both sides empty scores 100 by convention; one side empty scores 0.
pub fn chrf<S: Real>(hypothesis: &str, reference: &str, params: &ChrfParams<S>) -> S {
    params.validate();
    if hypothesis.is_empty() && reference.is_empty() {
        return S::from_f64(100.0).unwrap();
    }
    if hypothesis.is_empty() || reference.is_empty() {
        return S::zero();
    }
    f_score_from_stats(&pair_stats(hypothesis, reference, params), params)
}

/// Corpus-level chrF: n-gram statistics accumulated over all pairs, then one
/// F computation (not a mean of sentence scores).
pub fn chrf_corpus<S: Real>(
    pairs: &[(impl AsRef<str>, impl AsRef<str>)],
    params: &ChrfParams<S>,
) -> S {
    params.validate();
    let mut totals = vec![OrderStats::default(); params.char_order + params.word_order];
    for (h, r) in pairs {
        for (t, s) in totals.iter_mut().zip(pair_stats(h.as_ref(), r.as_ref(), params)) {
            t.hyp += s.hyp;
            t.refr += s.refr;
            t.matched += s.matched;
        }
    }
    f_score_from_stats(&totals, params)
}

/// Rouge-L precision/recall/F1 over a token pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScores<S: Real = f64> {
    pub precision: S,
    pub recall: S,
    pub f1: S,
}

/// Longest common subsequence length over arbitrary comparable tokens.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(curr[j]) };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Rouge-L: `P = LCS/|hyp|`, `R = LCS/|ref|`, `F1 = 2PR/(P+R)` (0 when the
/// denominator is 0).
pub fn rouge_l<S: Real, T: PartialEq>(hypothesis: &[T], reference: &[T]) -> RougeScores<S> {
    let lcs = S::from_usize(lcs_len(hypothesis, reference)).unwrap();
    let precision = if hypothesis.is_empty() {
        S::zero()
    } else {
        lcs / S::from_usize(hypothesis.len()).unwrap()
    };
    let recall = if reference.is_empty() {
        S::zero()
    } else {
        lcs / S::from_usize(reference.len()).unwrap()
    };
    let two = S::from_f64(2.0).unwrap();
    let f1 = if precision + recall > S::zero() {
        two * precision * recall / (precision + recall)
    } else {
        S::zero()
    };
    RougeScores { precision, recall, f1 }
}

/// Rouge-L over whitespace word tokens.
pub fn rouge_l_text<S: Real>(hypothesis: &str, reference: &str) -> RougeScores<S> {
    let h: Vec<&str> = hypothesis.split_whitespace().collect();
    let r: Vec<&str> = reference.split_whitespace().collect();
    rouge_l(&h, &r)
}

/// Cosine similarity `dot(u,v) / (‖u‖·‖v‖)` in [-1, 1].
pub fn cosine<S: Real>(u: &[S], v: &[S]) -> Result<S, MetricsError> {
    if u.len() != v.len() {
        return Err(MetricsError::DimensionMismatch(u.len(), v.len()));
    }
    let mut dot = S::zero();
    let mut nu = S::zero();
    let mut nv = S::zero();
    for (&a, &b) in u.iter().zip(v) {
        dot = dot + a * b;
        nu = nu + a * a;
        nv = nv + b * b;
    }
    if nu == S::zero() || nv == S::zero() {
        return Err(MetricsError::ZeroVector);
    }
    Ok(dot / (nu.sqrt() * nv.sqrt()))
}

/// Labelled sentence embeddings: N rows of dimension D.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet<S: Real = f64> {
    labels: Vec<String>,
    vectors: Vec<Vec<S>>,
}

impl<S: Real> EmbeddingSet<S> {
    pub fn new(labels: Vec<String>, vectors: Vec<Vec<S>>) -> Result<Self, MetricsError> {
        if labels.len() != vectors.len() {
            return Err(MetricsError::Misaligned(format!(
                "{} labels vs {} vectors",
                labels.len(),
                vectors.len()
            )));
        }
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(MetricsError::DimensionMismatch(dim, v.len()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(MetricsError::EmbeddingParse {
                    line: i + 2,
                    msg: "non-finite entry".into(),
                });
            }
        }
        Ok(Self { labels, vectors })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map(Vec::len).unwrap_or(0)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vector(&self, i: usize) -> &[S] {
        &self.vectors[i]
    }

    /// Parse the embedding file format: a `dim=<D> count=<N>` header, then
    /// one `label<TAB>v1 v2 ... vD` line per sentence.
    pub fn parse(text: &str) -> Result<Self, MetricsError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(MetricsError::EmbeddingParse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut dim = None;
        let mut count = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("dim=") {
                dim = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("count=") {
                count = v.parse::<usize>().ok();
            }
        }
        let (dim, count) = match (dim, count) {
            (Some(d), Some(c)) => (d, c),
            _ => {
                return Err(MetricsError::EmbeddingParse {
                    line: 1,
                    msg: format!("bad header `{header}`: expected `dim=<D> count=<N>`"),
                })
            }
        };
        let mut labels = Vec::with_capacity(count);
        let mut vectors = Vec::with_capacity(count);
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (label, rest) = raw.split_once('\t').ok_or(MetricsError::EmbeddingParse {
                line,
                msg: "expected `label<TAB>values`".into(),
            })?;
            let vector: Vec<S> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .ok()
                        .and_then(S::from_f64)
                        .ok_or(MetricsError::EmbeddingParse {
                            line,
                            msg: format!("bad float `{t}`"),
                        })
                })
                .collect::<Result<_, _>>()?;
            if vector.len() != dim {
                return Err(MetricsError::EmbeddingParse {
                    line,
                    msg: format!("expected {dim} values, got {}", vector.len()),
                });
            }
            labels.push(label.to_string());
            vectors.push(vector);
        }
        if labels.len() != count {
            return Err(MetricsError::EmbeddingParse {
                line: 1,
                msg: format!("header says count={count} but file has {} rows", labels.len()),
            });
        }
        Self::new(labels, vectors)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dim={} count={}\n", self.dim(), self.len());
        for (label, vector) in self.labels.iter().zip(&self.vectors) {
            out.push_str(label);
            out.push('\t');
            let vals: Vec<String> =
                vector.iter().map(|v| format!("{:?}", v.to_f64().unwrap())).collect();
            out.push_str(&vals.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Per-pair cosines between two aligned embedding sets, plus their mean.
pub fn embedding_similarity<S: Real>(
    a: &EmbeddingSet<S>,
    b: &EmbeddingSet<S>,
) -> Result<(Vec<(String, S)>, S), MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::Misaligned(format!("{} rows vs {}", a.len(), b.len())));
    }
    if a.labels != b.labels {
        let offending = a
            .labels
            .iter()
            .zip(&b.labels)
            .find(|(x, y)| x != y)
            .map(|(x, y)| format!("`{x}` vs `{y}`"))
            .unwrap_or_default();
        return Err(MetricsError::Misaligned(format!("labels differ: {offending}")));
    }
    let mut pairs = Vec::with_capacity(a.len());
    let mut sum = S::zero();
    for i in 0..a.len() {
        let c = cosine(a.vector(i), b.vector(i))?;
        sum = sum + c;
        pairs.push((a.labels[i].clone(), c));
    }
    let mean = if pairs.is_empty() {
        S::zero()
    } else {
        sum / S::from_usize(pairs.len()).unwrap()
    };
    Ok((pairs, mean))
}

/// Parse metric batch input: TSV `id<TAB>hypothesis<TAB>reference`.
pub fn parse_batch(text: &str) -> Result<Vec<(String, String, String)>, MetricsError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut cols = raw.splitn(3, '\t');
        match (cols.next(), cols.next(), cols.next()) {
            (Some(id), Some(hyp), Some(refr)) => {
                rows.push((id.to_string(), hyp.to_string(), refr.to_string()))
            }
            _ => {
                return Err(MetricsError::BatchParse {
                    line,
                    msg: "expected `id<TAB>hypothesis<TAB>reference`".into(),
                })
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn params() -> ChrfParams<f64> {
        ChrfParams::default()
    }

    /// Frozen from an independent implementation of the published chrF
    /// algorithm under `nc:6 nw:0 beta:2 eff:yes space:no case:mixed`.
    /// Three anchors are verified by hand arithmetic:
    ///   abcd/abce: per-order F = 3/4, 2/3, 1/2, 0 → 100·(23/12)/4 = 47.9167
    ///   ab/abc:    F1 = 5·(2/3)/(4+2/3) = 5/7, F2 = 5·(1/2)/(4.5) = 5/9
    ///              → 100·(5/7+5/9)/2 = 63.4921
    ///   abc/ab:    F1 = 10/11, F2 = 5/6 → 100·(10/11+5/6)/2 = 87.1212
    const CHRF_ORACLE: &[(f64, &str, &str)] = &[
        (100.0, "The quick brown fox jumps over the lazy dog.", "The quick brown fox jumps over the lazy dog."),
        (0.0, "", "non-empty reference"),
        (0.0, "non-empty hypothesis", ""),
        (47.91666667, "abcd", "abce"),
        (63.49206349, "ab", "abc"),
        (87.12121212, "abc", "ab"),
        (100.0, "a", "a"),
        (0.0, "a", "b"),
        (17.77777778, "The Cat", "the cat"),
        (100.0, "thecatsat", "the cat sat"),
        (37.22131104, "the cat sat on the mat", "a cat was sitting on the mat"),
        (49.61435397, "i think that is a very good idea", "I think this is a really good idea."),
        (45.47628779, "he did not attend the meeting yesterday", "He didn't come to yesterday's meeting."),
        (45.48853259, "भारत एक विशाल देश है", "भारत एक बड़ा देश है"),
        (59.16870810, "मुझे किताबें पढ़ना पसंद है", "मुझे किताबें पढ़ना अच्छा लगता है"),
        (65.16221508, "bhArata eka vishAla desha hai", "bhArata eka baDA desha hai"),
        (58.56326053, "mujhe kitAbeM paDhanA pasaMda hai", "mujhe kitAbeM paDhanA achChA lagatA hai"),
        (71.58527690, "இது ஒரு சோதனை வாக்கியம்", "இது ஒரு எளிய சோதனை வாக்கியம்"),
        (69.29291499, "ഇത് ഒരു പരീക്ഷണ വാക്യമാണ്", "ഇത് ലളിതമായ ഒരു പരീക്ഷണ വാക്യമാണ്"),
        (58.88081525, "Yes, indeed!", "Yes indeed"),
    ];

    #[test]
    fn chrf_matches_frozen_oracle() {
        for (expected, hyp, refr) in CHRF_ORACLE {
            let got = chrf::<f64>(hyp, refr, &params());
            assert!(
                (got - expected).abs() < 1e-4,
                "chrf({hyp:?}, {refr:?}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn chrf_both_empty_is_identity() {
        assert_eq!(chrf::<f64>("", "", &params()), 100.0);
    }

    #[test]
    fn chrf_corpus_aggregates_statistics() {
        let pairs = [("abcd", "abce"), ("ab", "abc")];
        let got = chrf_corpus::<f64>(&pairs, &params());
        // corpus aggregation pools statistics before the F computation, so
        // it differs from the mean of the two sentence scores
        let mean = (47.91666667 + 63.49206349) / 2.0;
        assert!((got - mean).abs() > 0.5);
        assert!(got > 0.0 && got < 100.0);
    }

    #[test]
    fn rouge_identity_and_disjoint() {
        let id: RougeScores = rouge_l_text("a b c", "a b c");
        assert_eq!((id.precision, id.recall, id.f1), (1.0, 1.0, 1.0));
        let dis: RougeScores = rouge_l_text("a b", "x y");
        assert_eq!((dis.precision, dis.recall, dis.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rouge_hand_computed_lcs() {
        // LCS(a c d, a b c d) = 3 → P = 1, R = 0.75, F1 = 6/7 ≈ 0.8571
        let s: RougeScores = rouge_l_text("a c d", "a b c d");
        assert_abs_diff_eq!(s.precision, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.recall, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.f1, 0.857142857142857, epsilon = 1e-9);
    }

    #[test]
    fn cosine_known_values() {
        assert_abs_diff_eq!(cosine(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            cosine(&[1.0, 0.0], &[1.0, 1.0]).unwrap(),
            0.70710678,
            epsilon = 1e-8
        );
        assert!(matches!(cosine(&[0.0, 0.0], &[1.0, 1.0]), Err(MetricsError::ZeroVector)));
        assert!(matches!(cosine(&[1.0], &[1.0, 2.0]), Err(MetricsError::DimensionMismatch(..))));
    }

    #[test]
    fn embedding_similarity_synthetic_angles() {
        let a = EmbeddingSet::new(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let deg60 = 60f64.to_radians();
        let b = EmbeddingSet::new(
            vec!["s1".into(), "s2".into(), "s3".into()],
            vec![vec![1.0, 0.0], vec![deg60.cos(), deg60.sin()], vec![0.0, 1.0]],
        )
        .unwrap();
        let (pairs, mean) = embedding_similarity(&a, &b).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_abs_diff_eq!(mean, 0.5, epsilon = 1e-9);
        let by_hand: f64 = pairs.iter().map(|(_, c)| c).sum::<f64>() / 3.0;
        assert_abs_diff_eq!(mean, by_hand, epsilon = 1e-12);
    }

    #[test]
    fn embedding_misaligned_labels() {
        let a = EmbeddingSet::new(vec!["x".into()], vec![vec![1.0]]).unwrap();
        let b = EmbeddingSet::new(vec!["y".into()], vec![vec![1.0]]).unwrap();
        assert!(matches!(embedding_similarity(&a, &b), Err(MetricsError::Misaligned(_))));
    }

    #[test]
    fn embedding_file_round_trip() {
        let text = "dim=3 count=2\ns1\t0.5 -1.25 3.0\ns2\t1 2 3\n";
        let set = EmbeddingSet::<f64>::parse(text).unwrap();
        assert_eq!(set.dim(), 3);
        assert_eq!(set.len(), 2);
        let back = EmbeddingSet::<f64>::parse(&set.to_text()).unwrap();
        assert_eq!(set, back);
    }

    #[test]
    fn embedding_rejects_nan_and_bad_counts() {
        assert!(EmbeddingSet::<f64>::parse("dim=1 count=1\ns\tNaN\n").is_err());
        assert!(EmbeddingSet::<f64>::parse("dim=1 count=2\ns\t1.0\n").is_err());
    }

    proptest! {
        #[test]
        fn chrf_identity_and_bounds(s in "[a-zA-Z काह意 ]{1,40}") {
            let p = params();
            let score = chrf::<f64>(&s, &s, &p);
            if !s.chars().all(char::is_whitespace) {
                prop_assert!((score - 100.0).abs() < 1e-9);
            }
            let other = "completely different text";
            let cross = chrf::<f64>(&s, other, &p);
            prop_assert!((0.0..=100.0 + 1e-9).contains(&cross));
        }

        #[test]
        fn chrf_whitespace_invariance(words in proptest::collection::vec("[a-z]{1,6}", 1..6)) {
            let p = params();
            let spaced = words.join(" ");
            let crammed = words.concat();
            let wide = words.join("   ");
            let reference = "the reference text";
            let a = chrf::<f64>(&spaced, reference, &p);
            let b = chrf::<f64>(&crammed, reference, &p);
            let c = chrf::<f64>(&wide, reference, &p);
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((a - c).abs() < 1e-12);
        }

        #[test]
        fn lcs_symmetry_and_f1_swap(
            a in proptest::collection::vec("[a-e]", 0..12),
            b in proptest::collection::vec("[a-e]", 0..12),
        ) {
            prop_assert_eq!(lcs_len(&a, &b), lcs_len(&b, &a));
            let ab: RougeScores = rouge_l(&a, &b);
            let ba: RougeScores = rouge_l(&b, &a);
            prop_assert!((ab.precision - ba.recall).abs() < 1e-12);
            prop_assert!((ab.recall - ba.precision).abs() < 1e-12);
            prop_assert!((ab.f1 - ba.f1).abs() < 1e-12);
        }

        #[test]
        fn cosine_scale_invariant(
            u in proptest::collection::vec(-100.0f64..100.0, 2..6),
            alpha in 0.01f64..50.0,
            beta in 0.01f64..50.0,
        ) {
            prop_assume!(u.iter().any(|&x| x.abs() > 1e-6));
            let v: Vec<f64> = u.iter().map(|&x| x * 0.5 + 1.0).collect();
            prop_assume!(v.iter().any(|&x| x.abs() > 1e-6));
            let su: Vec<f64> = u.iter().map(|&x| x * alpha).collect();
            let sv: Vec<f64> = v.iter().map(|&x| x * beta).collect();
            let base = cosine(&u, &v).unwrap();
            let scaled = cosine(&su, &sv).unwrap();
            prop_assert!((base - scaled).abs() < 1e-9);
        }
    }
}
