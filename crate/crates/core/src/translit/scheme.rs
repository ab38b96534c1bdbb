//! Scheme tables: grapheme-level romanization mappings, forward and inverse.

use std::collections::HashMap;

use unicode_normalization::UnicodeNormalization;

use super::TranslitError;
use crate::num::Real;
use crate::scripts::{self, CharClass, Script, Segment, Vowel};

/// Whether a table is reversible by construction or a weighted lossy mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Deterministic,
    Natural,
}

/// Kind of native grapheme a table entry maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphemeKind {
    Consonant,
    IndependentVowel,
    VowelSign,
    InherentVowel,
    Modifier,
    Digit,
}

impl std::str::FromStr for GraphemeKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "consonant" => Self::Consonant,
            "independent_vowel" => Self::IndependentVowel,
            "vowel_sign" => Self::VowelSign,
            "inherent_vowel" => Self::InherentVowel,
            "modifier" => Self::Modifier,
            "digit" => Self::Digit,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alternative<S> {
    pub roman: String,
    pub weight: S,
}

#[derive(Debug, Clone)]
struct InverseEntry<S> {
    kind: GraphemeKind,
    native: String,
    weight: S,
}

/// One inverse-transliteration candidate for a roman word.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<S> {
    pub native: String,
    pub weight: S,
}

/// Grapheme-group separator accepted (and consumed) in roman text. It ends
/// the pending grapheme group; a dangling consonant before it keeps its
/// explicit virama.
pub const SEPARATOR: char = '_';

/// A bidirectional grapheme-to-roman mapping for one script.
///
/// Deterministic tables romanize reversibly (validated at load); natural
/// tables carry weighted alternatives and an optional word-final
/// schwa-deletion rule.
#[derive(Debug, Clone)]
pub struct SchemeTable<S: Real = f64> {
    script: Script,
    kind: SchemeKind,
    schwa_deletion: bool,
    entries: HashMap<(GraphemeKind, String), Vec<Alternative<S>>>,
    inverse: HashMap<String, Vec<InverseEntry<S>>>,
    max_roman_len: usize,
}

impl<S: Real> SchemeTable<S> {
    /// Parse a scheme table from its TSV form.
    ///
    /// Metadata directives may precede the header row as `#script <name>`,
    /// `#kind <deterministic|natural>`, `#schwa_deletion <bool>` comments;
    /// the script must name a built-in. Other `#` lines are comments.
    pub fn parse(text: &str) -> Result<Self, TranslitError> {
        let mut script_name = None;
        let mut kind = None;
        let mut schwa = false;
        for line in text.lines() {
            let Some(directive) = line.strip_prefix('#') else { continue };
            let mut parts = directive.split_whitespace();
            match parts.next() {
                Some("script") => script_name = parts.next().map(str::to_string),
                Some("kind") => {
                    kind = Some(match parts.next() {
                        Some("deterministic") => SchemeKind::Deterministic,
                        Some("natural") => SchemeKind::Natural,
                        other => {
                            return Err(TranslitError::SchemeParse {
                                line: 0,
                                msg: format!("bad #kind {other:?}"),
                            })
                        }
                    })
                }
                Some("schwa_deletion") => schwa = parts.next() == Some("true"),
                _ => {}
            }
        }
        let name = script_name.ok_or(TranslitError::SchemeParse {
            line: 0,
            msg: "missing #script directive".into(),
        })?;
        let script = scripts::builtin(&name)?.clone();
        let kind = kind.ok_or(TranslitError::SchemeParse {
            line: 0,
            msg: "missing #kind directive".into(),
        })?;
        Self::parse_rows(text, script, kind, schwa)
    }

    /// Parse the TSV rows against an explicitly supplied script and kind.
    pub fn parse_rows(
        text: &str,
        script: Script,
        kind: SchemeKind,
        schwa_deletion: bool,
    ) -> Result<Self, TranslitError> {
        let mut entries: HashMap<(GraphemeKind, String), Vec<Alternative<S>>> = HashMap::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.starts_with('#') || raw.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if !saw_header {
                if cols.first() != Some(&"grapheme_kind") {
                    return Err(TranslitError::SchemeParse {
                        line,
                        msg: "missing header row `grapheme_kind\\tnative\\troman\\tweight`".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            if cols.len() < 3 {
                return Err(TranslitError::SchemeParse {
                    line,
                    msg: format!("expected at least 3 columns, got {}", cols.len()),
                });
            }
            let gk: GraphemeKind = cols[0].parse().map_err(|()| TranslitError::SchemeParse {
                line,
                msg: format!("unknown grapheme_kind `{}`", cols[0]),
            })?;
            let native = cols[1].to_string();
            if native.nfc().collect::<String>() != native {
                return Err(TranslitError::SchemeParse {
                    line,
                    msg: format!("native `{native}` is not NFC-normalized"),
                });
            }
            if (gk == GraphemeKind::InherentVowel) != native.is_empty() {
                return Err(TranslitError::SchemeParse {
                    line,
                    msg: "empty native column is for inherent_vowel rows only".into(),
                });
            }
            let roman = cols[2].to_string();
            if roman.is_empty() || roman.contains(SEPARATOR) || roman.contains(char::is_whitespace)
            {
                return Err(TranslitError::SchemeParse {
                    line,
                    msg: format!("bad roman `{roman}`"),
                });
            }
            let weight = match cols.get(3).copied().filter(|w| !w.is_empty()) {
                Some(w) => {
                    let w: f64 = w.parse().map_err(|e| TranslitError::SchemeParse {
                        line,
                        msg: format!("bad weight: {e}"),
                    })?;
                    if w < 0.0 || !w.is_finite() {
                        return Err(TranslitError::SchemeParse {
                            line,
                            msg: format!("bad weight {w}"),
                        });
                    }
                    S::from_f64(w).expect("weight fits scalar")
                }
                None => S::one(),
            };
            entries.entry((gk, native)).or_default().push(Alternative { roman, weight });
        }
        if !saw_header {
            return Err(TranslitError::SchemeParse { line: 0, msg: "empty table".into() });
        }

        let mut inverse: HashMap<String, Vec<InverseEntry<S>>> = HashMap::new();
        for ((gk, native), alts) in &mut entries {
            match kind {
                SchemeKind::Deterministic if alts.len() != 1 => {
                    return Err(TranslitError::SchemeParse {
                        line: 0,
                        msg: format!(
                            "deterministic table has {} alternatives for {gk:?} `{native}`",
                            alts.len()
                        ),
                    });
                }
                SchemeKind::Natural => {
                    let sum = alts.iter().fold(S::zero(), |acc, a| acc + a.weight);
                    if !(sum > S::zero()) {
                        return Err(TranslitError::SchemeParse {
                            line: 0,
                            msg: format!("weights for {gk:?} `{native}` do not sum positive"),
                        });
                    }
                    alts.sort_by(|a, b| {
                        b.weight
                            .partial_cmp(&a.weight)
                            .unwrap()
                            .then_with(|| a.roman.cmp(&b.roman))
                    });
                }
                _ => {}
            }
            for alt in alts.iter() {
                inverse.entry(alt.roman.clone()).or_default().push(InverseEntry {
                    kind: *gk,
                    native: native.clone(),
                    weight: alt.weight,
                });
            }
        }
        let max_roman_len = inverse.keys().map(|r| r.len()).max().unwrap_or(0);

        let table = Self { script, kind, schwa_deletion, entries, inverse, max_roman_len };
        table.check_coverage()?;
        if kind == SchemeKind::Deterministic {
            table.check_reversible()?;
        }
        Ok(table)
    }

    /// Load a built-in table: `deva`, `gujr`, `taml`, `mlym` (deterministic)
    /// or `deva-natural-demo`.
    pub fn builtin(name: &str) -> Result<Self, TranslitError> {
        let text = match name {
            "deva" => include_str!("../../data/deva_itrans.tsv"),
            "gujr" => include_str!("../../data/gujr_itrans.tsv"),
            "taml" => include_str!("../../data/taml_itrans.tsv"),
            "mlym" => include_str!("../../data/mlym_itrans.tsv"),
            "deva-natural-demo" => include_str!("../../data/deva_natural_demo.tsv"),
            _ => return Err(TranslitError::UnknownBuiltin(name.to_string())),
        };
        Self::parse(text)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["deva", "gujr", "taml", "mlym", "deva-natural-demo"]
    }

    pub fn script(&self) -> &Script {
        &self.script
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn schwa_deletion(&self) -> bool {
        self.schwa_deletion
    }

    fn alternatives(&self, kind: GraphemeKind, native: &str) -> Option<&[Alternative<S>]> {
        self.entries.get(&(kind, native.to_string())).map(|v| v.as_slice())
    }

    /// Native grapheme keys of one kind, in lexicographic order.
    pub fn natives(&self, kind: GraphemeKind) -> Vec<&str> {
        let mut keys: Vec<&str> = self
            .entries
            .keys()
            .filter(|(gk, _)| *gk == kind)
            .map(|(_, native)| native.as_str())
            .collect();
        keys.sort_unstable();
        keys
    }

    /// Roman alternatives for a grapheme, highest weight first.
    pub fn romans(&self, kind: GraphemeKind, native: &str) -> Option<&[Alternative<S>]> {
        self.alternatives(kind, native)
    }

    /// Highest-weight roman for a grapheme (alternatives are pre-sorted).
    fn best_roman(&self, kind: GraphemeKind, native: &str) -> Option<&str> {
        self.alternatives(kind, native).map(|alts| alts[0].roman.as_str())
    }

    /// Every grapheme the script classifies for transduction must have an
    /// entry; load fails listing the gaps. Codepoints that are not NFC-stable
    /// can never occur in normalized input and are skipped.
    fn check_coverage(&self) -> Result<(), TranslitError> {
        let mut gaps = Vec::new();
        let checks = [
            (CharClass::Consonant, GraphemeKind::Consonant),
            (CharClass::IndependentVowel, GraphemeKind::IndependentVowel),
            (CharClass::VowelSign, GraphemeKind::VowelSign),
            (CharClass::Modifier, GraphemeKind::Modifier),
            (CharClass::Digit, GraphemeKind::Digit),
        ];
        for (class, gk) in checks {
            for cp in self.script.codepoints_with_class(class) {
                if cp.nfc().collect::<String>() != cp.to_string() {
                    continue;
                }
                if self.alternatives(gk, &cp.to_string()).is_none() {
                    gaps.push(format!("U+{:04X} {class} ({cp})", cp as u32));
                }
            }
        }
        if self.alternatives(GraphemeKind::InherentVowel, "").is_none() {
            gaps.push("inherent vowel".to_string());
        }
        if gaps.is_empty() {
            Ok(())
        } else {
            Err(TranslitError::CoverageGaps(gaps.join(", ")))
        }
    }

    /// Per-key round-trip check: each grapheme, synthesized in a minimal
    /// native context, must survive romanize ∘ deromanize unchanged. This is
    /// what enforces injectivity under longest-match parsing.
    fn check_reversible(&self) -> Result<(), TranslitError> {
        let carrier = self
            .script
            .codepoints_with_class(CharClass::Consonant)
            .into_iter()
            .find(|c| self.alternatives(GraphemeKind::Consonant, &c.to_string()).is_some());
        let mut tests: Vec<String> = Vec::new();
        for (gk, native) in self.entries.keys() {
            match gk {
                GraphemeKind::Consonant => {
                    tests.push(native.clone());
                    tests.push(format!("{native}{}", self.script.virama()));
                }
                GraphemeKind::IndependentVowel | GraphemeKind::Digit => {
                    tests.push(native.clone())
                }
                GraphemeKind::VowelSign | GraphemeKind::Modifier => {
                    if let Some(c) = carrier {
                        tests.push(format!("{c}{native}"));
                    }
                }
                GraphemeKind::InherentVowel => {
                    if let Some(c) = carrier {
                        tests.push(c.to_string());
                    }
                }
            }
        }
        for native in tests {
            let roman = self.romanize(&native);
            let back = self.deromanize_deterministic(&roman)?;
            if back != native {
                return Err(TranslitError::RoundTrip { native, roman, back });
            }
        }
        Ok(())
    }

    fn longest_match_len(&self, s: &str) -> usize {
        let upper = self.max_roman_len.min(s.len());
        for len in (1..=upper).rev() {
            if s.is_char_boundary(len) && self.inverse.contains_key(&s[..len]) {
                return len;
            }
        }
        0
    }

    /// The grapheme kind a parser in the given state assigns to this roman.
    /// Context priority: after a pending consonant, vowel readings win;
    /// otherwise independent readings win.
    fn interpret(&self, roman: &str, pending: bool) -> Option<GraphemeKind> {
        let entries = self.inverse.get(roman)?;
        let priority: &[GraphemeKind] = if pending {
            &[
                GraphemeKind::InherentVowel,
                GraphemeKind::VowelSign,
                GraphemeKind::Consonant,
                GraphemeKind::Modifier,
                GraphemeKind::Digit,
                GraphemeKind::IndependentVowel,
            ]
        } else {
            &[
                GraphemeKind::IndependentVowel,
                GraphemeKind::Consonant,
                GraphemeKind::Modifier,
                GraphemeKind::Digit,
                GraphemeKind::VowelSign,
                GraphemeKind::InherentVowel,
            ]
        };
        priority.iter().copied().find(|k| entries.iter().any(|e| e.kind == *k))
    }

    fn native_for(&self, roman: &str, kind: GraphemeKind) -> Option<&str> {
        self.inverse.get(roman)?.iter().find(|e| e.kind == kind).map(|e| e.native.as_str())
    }

    /// Forward transliteration. Expects NFC input; unmapped in-script
    /// graphemes cannot occur (enforced at load) and foreign codepoints pass
    /// through verbatim. Deterministic tables insert [`SEPARATOR`] wherever
    /// the inverse parser would otherwise regroup the roman stream.
    pub fn romanize(&self, text: &str) -> String {
        let emits = self.plan_emits(text);
        match self.kind {
            SchemeKind::Natural => emits.iter().map(Emit::text).collect(),
            SchemeKind::Deterministic => self.join_reversible(&emits),
        }
    }

    /// First pass: map segments to roman pieces (and raw passthrough chars).
    fn plan_emits(&self, text: &str) -> Vec<Emit> {
        let segments = scripts::segment_aksharas(&self.script, text);
        let mut emits = Vec::new();
        for (idx, segment) in segments.iter().enumerate() {
            match segment {
                Segment::Akshara(a) => {
                    for (c, nukta) in &a.consonants {
                        let mut key = c.to_string();
                        if let Some(n) = nukta {
                            key.push(*n);
                        }
                        match self.best_roman(GraphemeKind::Consonant, &key) {
                            Some(r) => emits
                                .push(Emit::Piece(r.to_string(), GraphemeKind::Consonant)),
                            None => {
                                // no composed entry: base consonant, nukta raw
                                let r = self
                                    .best_roman(GraphemeKind::Consonant, &c.to_string())
                                    .expect("coverage checked at load");
                                emits.push(Emit::Piece(
                                    r.to_string(),
                                    GraphemeKind::Consonant,
                                ));
                                if let Some(n) = nukta {
                                    emits.push(Emit::RawNukta(*n));
                                }
                            }
                        }
                    }
                    match a.vowel {
                        Some(Vowel::Inherent) => {
                            let word_final =
                                !matches!(segments.get(idx + 1), Some(Segment::Akshara(_)));
                            let drop = self.kind == SchemeKind::Natural
                                && self.schwa_deletion
                                && a.modifiers.is_empty()
                                && word_final;
                            if !drop {
                                let r = self
                                    .best_roman(GraphemeKind::InherentVowel, "")
                                    .expect("coverage checked at load");
                                emits.push(Emit::Piece(
                                    r.to_string(),
                                    GraphemeKind::InherentVowel,
                                ));
                            }
                        }
                        Some(Vowel::Sign(v)) => {
                            let r = self
                                .best_roman(GraphemeKind::VowelSign, &v.to_string())
                                .expect("coverage checked at load");
                            emits.push(Emit::Piece(r.to_string(), GraphemeKind::VowelSign));
                        }
                        Some(Vowel::Independent(v)) => {
                            let r = self
                                .best_roman(GraphemeKind::IndependentVowel, &v.to_string())
                                .expect("coverage checked at load");
                            emits
                                .push(Emit::Piece(r.to_string(), GraphemeKind::IndependentVowel));
                        }
                        // dead consonant: the pending state carries the virama
                        None => {}
                    }
                    for m in &a.modifiers {
                        let r = self
                            .best_roman(GraphemeKind::Modifier, &m.to_string())
                            .expect("coverage checked at load");
                        emits.push(Emit::Piece(r.to_string(), GraphemeKind::Modifier));
                    }
                }
                Segment::PassThrough(c) => {
                    let as_digit = (self.script.classify(*c) == CharClass::Digit)
                        .then(|| self.best_roman(GraphemeKind::Digit, &c.to_string()))
                        .flatten();
                    match as_digit {
                        Some(r) => emits.push(Emit::Piece(r.to_string(), GraphemeKind::Digit)),
                        None => emits.push(Emit::Raw(*c)),
                    }
                }
            }
        }
        emits
    }

    /// Second pass (deterministic): join pieces, inserting [`SEPARATOR`]
    /// whenever re-parsing would either regroup the stream (checked with
    /// enough lookahead to cover the longest roman key) or read a piece in
    /// the wrong grapheme role for the parser state.
    fn join_reversible(&self, emits: &[Emit]) -> String {
        let mut out = String::new();
        let mut prev_piece: Option<&str> = None;
        let mut sim_pending = false;
        for (idx, emit) in emits.iter().enumerate() {
            match emit {
                Emit::Piece(piece, kind) => {
                    let mut need_sep = false;
                    if let Some(q) = prev_piece {
                        let mut probe = format!("{q}{piece}");
                        for later in &emits[idx + 1..] {
                            if probe.len() >= q.len() + self.max_roman_len {
                                break;
                            }
                            match later {
                                Emit::Piece(p, _) => probe.push_str(p),
                                _ => break,
                            }
                        }
                        if self.longest_match_len(&probe) > q.len() {
                            need_sep = true;
                        }
                    }
                    if !need_sep && self.interpret(piece, sim_pending) != Some(*kind) {
                        need_sep = true;
                    }
                    if need_sep {
                        out.push(SEPARATOR);
                    }
                    out.push_str(piece);
                    prev_piece = Some(piece);
                    sim_pending = *kind == GraphemeKind::Consonant;
                }
                Emit::RawNukta(n) => {
                    // re-parse attaches it to the pending consonant
                    out.push(*n);
                    prev_piece = None;
                }
                Emit::Raw(c) => {
                    out.push(*c);
                    prev_piece = None;
                    sim_pending = false;
                }
            }
        }
        out
    }

    /// Inverse of a deterministic table: longest-match parse of the roman
    /// stream, re-synthesizing aksharas. Characters matching no roman pass
    /// through verbatim.
    pub fn deromanize_deterministic(&self, text: &str) -> Result<String, TranslitError> {
        if self.kind != SchemeKind::Deterministic {
            return Err(TranslitError::KindMismatch { expected: "deterministic" });
        }
        let mut out = String::new();
        let mut pending: Option<String> = None;
        let mut rest = text;

        while !rest.is_empty() {
            let first = rest.chars().next().unwrap();
            if first == SEPARATOR {
                self.flush(&mut out, &mut pending);
                rest = &rest[first.len_utf8()..];
                continue;
            }
            let len = self.longest_match_len(rest);
            if len == 0 {
                if pending.is_some() && self.script.classify(first) == CharClass::Nukta {
                    pending.as_mut().unwrap().push(first);
                } else {
                    self.flush(&mut out, &mut pending);
                    out.push(first);
                }
                rest = &rest[first.len_utf8()..];
                continue;
            }
            let roman = &rest[..len];
            let kind = self
                .interpret(roman, pending.is_some())
                .ok_or_else(|| TranslitError::AmbiguousParse { roman: roman.to_string() })?;
            let native = self.native_for(roman, kind).map(str::to_string);
            match kind {
                GraphemeKind::InherentVowel => {
                    if let Some(c) = pending.take() {
                        out.push_str(&c);
                    }
                }
                GraphemeKind::VowelSign => {
                    if let Some(c) = pending.take() {
                        out.push_str(&c);
                    }
                    out.push_str(&native.unwrap());
                }
                GraphemeKind::Consonant => {
                    if let Some(c) = pending.take() {
                        out.push_str(&c);
                        out.push(self.script.virama());
                    }
                    pending = native;
                }
                GraphemeKind::Modifier | GraphemeKind::Digit | GraphemeKind::IndependentVowel => {
                    self.flush(&mut out, &mut pending);
                    out.push_str(&native.unwrap());
                }
            }
            rest = &rest[len..];
        }
        self.flush(&mut out, &mut pending);
        Ok(out)
    }

    /// A dangling consonant with no vowel keeps its explicit virama.
    fn flush(&self, out: &mut String, pending: &mut Option<String>) {
        if let Some(c) = pending.take() {
            out.push_str(&c);
            out.push(self.script.virama());
        }
    }

    /// All parses of one roman word against the inverse index, as weighted
    /// native candidates: weight is the product of entry weights,
    /// deduplicated by native string (keeping the max weight), top-`k` by
    /// weight with a lexicographic tie-break. With schwa deletion, word-final
    /// pending consonants yield both a restored-schwa and an as-is variant.
    pub fn natural_candidates(
        &self,
        word: &str,
        k: usize,
    ) -> Result<Vec<Candidate<S>>, TranslitError> {
        if self.kind != SchemeKind::Natural {
            return Err(TranslitError::KindMismatch { expected: "natural" });
        }
        let mut found: HashMap<String, S> = HashMap::new();
        let mut stack: Vec<(usize, Option<String>, String, S)> =
            vec![(0, None, String::new(), S::one())];
        while let Some((pos, pending, acc, weight)) = stack.pop() {
            if pos == word.len() {
                match pending {
                    Some(c) => {
                        if self.schwa_deletion {
                            // restored-schwa variant: bare consonant
                            record(&mut found, format!("{acc}{c}"), weight);
                        }
                        // as-is variant: dead consonant
                        record(&mut found, format!("{acc}{c}{}", self.script.virama()), weight);
                    }
                    None => record(&mut found, acc, weight),
                }
                continue;
            }
            let rest = &word[pos..];
            let first = rest.chars().next().unwrap();
            if first == SEPARATOR {
                let mut acc = acc;
                if let Some(c) = pending {
                    acc.push_str(&c);
                    acc.push(self.script.virama());
                }
                stack.push((pos + first.len_utf8(), None, acc, weight));
                continue;
            }
            let upper = self.max_roman_len.min(rest.len());
            for len in 1..=upper {
                if !rest.is_char_boundary(len) {
                    continue;
                }
                let Some(entries) = self.inverse.get(&rest[..len]) else { continue };
                for entry in entries {
                    let w = weight * entry.weight;
                    let next = pos + len;
                    match (entry.kind, &pending) {
                        (GraphemeKind::InherentVowel, Some(c)) => {
                            stack.push((next, None, format!("{acc}{c}"), w));
                        }
                        // inherent or dependent vowels need a consonant, and
                        // independent vowels can only start a grapheme group
                        (GraphemeKind::InherentVowel | GraphemeKind::VowelSign, None)
                        | (GraphemeKind::IndependentVowel, Some(_)) => {}
                        (GraphemeKind::VowelSign, Some(c)) => {
                            stack.push((next, None, format!("{acc}{c}{}", entry.native), w));
                        }
                        (GraphemeKind::Consonant, Some(c)) => {
                            stack.push((
                                next,
                                Some(entry.native.clone()),
                                format!("{acc}{c}{}", self.script.virama()),
                                w,
                            ));
                        }
                        (GraphemeKind::Consonant, None) => {
                            stack.push((next, Some(entry.native.clone()), acc.clone(), w));
                        }
                        (_, pending) => {
                            let mut acc = acc.clone();
                            if let Some(c) = pending {
                                acc.push_str(c);
                                acc.push(self.script.virama());
                            }
                            acc.push_str(&entry.native);
                            stack.push((next, None, acc, w));
                        }
                    }
                }
            }
        }
        if found.is_empty() {
            return Err(TranslitError::Unparseable { word: word.to_string() });
        }
        let mut candidates: Vec<Candidate<S>> =
            found.into_iter().map(|(native, weight)| Candidate { native, weight }).collect();
        candidates.sort_by(|a, b| {
            b.weight.partial_cmp(&a.weight).unwrap().then_with(|| a.native.cmp(&b.native))
        });
        candidates.truncate(k);
        Ok(candidates)
    }
}

fn record<S: Real>(found: &mut HashMap<String, S>, native: String, weight: S) {
    let slot = found.entry(native).or_insert(weight);
    if weight > *slot {
        *slot = weight;
    }
}

enum Emit {
    Piece(String, GraphemeKind),
    Raw(char),
    RawNukta(char),
}

impl Emit {
    fn text(&self) -> String {
        match self {
            Emit::Piece(p, _) => p.clone(),
            Emit::Raw(c) | Emit::RawNukta(c) => c.to_string(),
        }
    }
}
