//! Script inventories and akshara segmentation for the four supported
//! abugida scripts (Devanagari, Gujarati, Tamil, Malayalam).
//!
//! A [`Script`] maps codepoints to character classes; [`segment_aksharas`]
//! groups NFC text into orthographic syllable clusters that the
//! transliteration engine consumes. Script data is loaded from line-oriented
//! definition files (see `data/*.scr`).

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Classification of a single codepoint within a script.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Consonant,
    IndependentVowel,
    VowelSign,
    Virama,
    Nukta,
    Modifier,
    Digit,
    Symbol,
    Other,
}

impl std::str::FromStr for CharClass {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "Consonant" => Self::Consonant,
            "IndependentVowel" => Self::IndependentVowel,
            "VowelSign" => Self::VowelSign,
            "Virama" => Self::Virama,
            "Nukta" => Self::Nukta,
            "Modifier" => Self::Modifier,
            "Digit" => Self::Digit,
            "Symbol" => Self::Symbol,
            "Other" => Self::Other,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate class directive for U+{0:04X}")]
    DuplicateClass(u32),
    #[error("class directive for U+{0:04X} lies outside every declared range")]
    ClassOutsideRange(u32),
    #[error("script must declare exactly one Virama codepoint, found {0}")]
    ViramaCount(usize),
    #[error("script declares no ranges")]
    NoRanges,
    #[error("missing name directive")]
    MissingName,
    #[error("unknown built-in script `{0}`")]
    UnknownBuiltin(String),
}

/// Immutable codepoint inventory for one writing system.
#[derive(Debug, Clone)]
pub struct Script {
    name: String,
    ranges: Vec<(u32, u32)>,
    classes: HashMap<u32, CharClass>,
    virama: char,
    nukta: Option<char>,
}

impl Script {
    /// Parse a script definition from its line-oriented text form.
    ///
    /// Directives: `name <id>`, `range <hex-start> <hex-end>`,
    /// `class <hex-codepoint> <ClassName>`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut name = None;
        let mut ranges = Vec::new();
        let mut classes = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let directive = parts.next().unwrap();
            let err = |msg: String| ScriptError::Parse { line, msg };
            match directive {
                "name" => {
                    name = Some(
                        parts
                            .next()
                            .ok_or_else(|| err("name requires an identifier".into()))?
                            .to_string(),
                    );
                }
                "range" => {
                    let lo = parse_hex(parts.next(), line)?;
                    let hi = parse_hex(parts.next(), line)?;
                    if lo > hi {
                        return Err(err(format!("empty range {lo:04X}..{hi:04X}")));
                    }
                    ranges.push((lo, hi));
                }
                "class" => {
                    let cp = parse_hex(parts.next(), line)?;
                    let class: CharClass = parts
                        .next()
                        .ok_or_else(|| err("class requires a class name".into()))?
                        .parse()
                        .map_err(|()| err("unknown class name".into()))?;
                    if classes.insert(cp, class).is_some() {
                        return Err(ScriptError::DuplicateClass(cp));
                    }
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let name = name.ok_or(ScriptError::MissingName)?;
        if ranges.is_empty() {
            return Err(ScriptError::NoRanges);
        }
        for &cp in classes.keys() {
            if !ranges.iter().any(|&(lo, hi)| (lo..=hi).contains(&cp)) {
                return Err(ScriptError::ClassOutsideRange(cp));
            }
        }
        let viramas: Vec<u32> = classes
            .iter()
            .filter(|&(_, c)| *c == CharClass::Virama)
            .map(|(&cp, _)| cp)
            .collect();
        if viramas.len() != 1 {
            return Err(ScriptError::ViramaCount(viramas.len()));
        }
        let virama = char::from_u32(viramas[0]).expect("virama codepoint");
        let nukta = classes
            .iter()
            .find(|&(_, c)| *c == CharClass::Nukta)
            .and_then(|(&cp, _)| char::from_u32(cp));
        Ok(Self { name, ranges, classes, virama, nukta })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn virama(&self) -> char {
        self.virama
    }

    pub fn nukta(&self) -> Option<char> {
        self.nukta
    }

    pub fn contains(&self, c: char) -> bool {
        let cp = c as u32;
        self.ranges.iter().any(|&(lo, hi)| (lo..=hi).contains(&cp))
    }

    /// Class of a codepoint; `Other` for anything outside the script's ranges
    /// or without an explicit class. Total: never fails.
    pub fn classify(&self, c: char) -> CharClass {
        if !self.contains(c) {
            return CharClass::Other;
        }
        self.classes.get(&(c as u32)).copied().unwrap_or(CharClass::Other)
    }

    /// Codepoints of the script carrying a given class, ascending.
    pub fn codepoints_with_class(&self, class: CharClass) -> Vec<char> {
        let mut cps: Vec<char> = self
            .classes
            .iter()
            .filter(|&(_, c)| *c == class)
            .filter_map(|(&cp, _)| char::from_u32(cp))
            .collect();
        cps.sort_unstable();
        cps
    }
}

fn parse_hex(tok: Option<&str>, line: usize) -> Result<u32, ScriptError> {
    let tok = tok.ok_or(ScriptError::Parse { line, msg: "missing hex codepoint".into() })?;
    u32::from_str_radix(tok, 16).map_err(|e| ScriptError::Parse {
        line,
        msg: format!("bad hex `{tok}`: {e}"),
    })
}

/// Vowel of an akshara. A consonant-final cluster (trailing virama) carries
/// no vowel at all, which is represented as `None` on [`Akshara::vowel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vowel {
    /// The implicit vowel of a bare consonant.
    Inherent,
    /// A dependent vowel sign codepoint.
    Sign(char),
    /// An independent vowel letter (cluster has no consonants).
    Independent(char),
}

/// One orthographic syllable cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Akshara {
    /// Consonants joined by virama, each with an optional nukta.
    pub consonants: Vec<(char, Option<char>)>,
    /// `None` means the cluster ends in an explicit virama (dead consonant).
    pub vowel: Option<Vowel>,
    /// Trailing modifier signs (anusvara, visarga, chillu, ...).
    pub modifiers: Vec<char>,
}

impl Akshara {
    /// Reassemble the exact codepoint sequence this cluster was parsed from.
    pub fn to_text(&self, script: &Script) -> String {
        let mut out = String::new();
        for (i, &(c, nukta)) in self.consonants.iter().enumerate() {
            if i > 0 {
                out.push(script.virama());
            }
            out.push(c);
            if let Some(n) = nukta {
                out.push(n);
            }
        }
        match self.vowel {
            Some(Vowel::Inherent) => {}
            Some(Vowel::Sign(v)) | Some(Vowel::Independent(v)) => out.push(v),
            None if !self.consonants.is_empty() => out.push(script.virama()),
            None => {}
        }
        out.extend(self.modifiers.iter());
        out
    }
}

/// Segmentation output: a cluster, or a codepoint the grammar does not cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Akshara(Akshara),
    PassThrough(char),
}

impl Segment {
    pub fn to_text(&self, script: &Script) -> String {
        match self {
            Segment::Akshara(a) => a.to_text(script),
            Segment::PassThrough(c) => c.to_string(),
        }
    }
}

/// Split NFC text into akshara clusters, left to right and greedy:
/// `(Consonant Nukta? (Virama Consonant Nukta?)* (VowelSign | inherent))? Modifier*`.
/// Independent vowels start their own cluster; anything else passes through.
pub fn segment_aksharas(script: &Script, text: &str) -> Vec<Segment> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match script.classify(c) {
            CharClass::Consonant => {
                let mut consonants = Vec::new();
                loop {
                    let cons = chars[i];
                    i += 1;
                    let nukta = match chars.get(i) {
                        Some(&n) if script.classify(n) == CharClass::Nukta => {
                            i += 1;
                            Some(n)
                        }
                        _ => None,
                    };
                    consonants.push((cons, nukta));
                    // continue only through virama + consonant
                    if chars.get(i).map(|&v| script.classify(v)) == Some(CharClass::Virama)
                        && chars.get(i + 1).map(|&n| script.classify(n))
                            == Some(CharClass::Consonant)
                    {
                        i += 2;
                        // step back one: loop re-reads the consonant
                        i -= 1;
                        continue;
                    }
                    break;
                }
                let vowel = match chars.get(i).map(|&v| (v, script.classify(v))) {
                    Some((_, CharClass::Virama)) => {
                        i += 1;
                        None
                    }
                    Some((v, CharClass::VowelSign)) => {
                        i += 1;
                        Some(Vowel::Sign(v))
                    }
                    _ => Some(Vowel::Inherent),
                };
                let modifiers = take_modifiers(script, &chars, &mut i);
                out.push(Segment::Akshara(Akshara { consonants, vowel, modifiers }));
            }
            CharClass::IndependentVowel => {
                i += 1;
                let modifiers = take_modifiers(script, &chars, &mut i);
                out.push(Segment::Akshara(Akshara {
                    consonants: Vec::new(),
                    vowel: Some(Vowel::Independent(c)),
                    modifiers,
                }));
            }
            CharClass::Modifier => {
                let modifiers = take_modifiers(script, &chars, &mut i);
                out.push(Segment::Akshara(Akshara {
                    consonants: Vec::new(),
                    vowel: None,
                    modifiers,
                }));
            }
            _ => {
                i += 1;
                out.push(Segment::PassThrough(c));
            }
        }
    }
    out
}

fn take_modifiers(script: &Script, chars: &[char], i: &mut usize) -> Vec<char> {
    let mut mods = Vec::new();
    while let Some(&m) = chars.get(*i) {
        if script.classify(m) != CharClass::Modifier {
            break;
        }
        mods.push(m);
        *i += 1;
    }
    mods
}

/// Identify the registered script owning the plurality of in-range
/// codepoints; ties go to registry order. `None` when nothing matches.
pub fn detect_script(text: &str) -> Option<&'static Script> {
    let mut counts = vec![0usize; registry().len()];
    for c in text.chars() {
        for (i, script) in registry().iter().enumerate() {
            if script.contains(c) {
                counts[i] += 1;
            }
        }
    }
    let (best, &n) = counts.iter().enumerate().max_by_key(|&(i, &n)| (n, usize::MAX - i))?;
    if n == 0 {
        None
    } else {
        Some(&registry()[best])
    }
}

static REGISTRY: OnceLock<Vec<Script>> = OnceLock::new();

/// The built-in scripts, in registry order: deva, gujr, taml, mlym.
pub fn registry() -> &'static [Script] {
    REGISTRY.get_or_init(|| {
        let sources = [
            include_str!("../data/deva.scr"),
            include_str!("../data/gujr.scr"),
            include_str!("../data/taml.scr"),
            include_str!("../data/mlym.scr"),
        ];
        let scripts: Vec<Script> = sources
            .iter()
            .map(|s| Script::parse(s).expect("built-in script data"))
            .collect();
        // registry invariant: ranges of distinct scripts are disjoint
        for (i, a) in scripts.iter().enumerate() {
            for b in &scripts[i + 1..] {
                for &(alo, ahi) in &a.ranges {
                    for &(blo, bhi) in &b.ranges {
                        assert!(ahi < blo || bhi < alo, "overlapping script ranges");
                    }
                }
            }
        }
        scripts
    })
}

/// Look up a built-in script by name.
pub fn builtin(name: &str) -> Result<&'static Script, ScriptError> {
    registry()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ScriptError::UnknownBuiltin(name.to_string()))
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deva() -> &'static Script {
        builtin("deva").unwrap()
    }

    #[test]
    fn classify_chart_points() {
        assert_eq!(deva().classify('\u{0915}'), CharClass::Consonant);
        assert_eq!(deva().classify('\u{094D}'), CharClass::Virama);
        assert_eq!(deva().classify('A'), CharClass::Other);
        assert_eq!(deva().classify('\u{200D}'), CharClass::Other);
    }

    #[test]
    fn segment_consonant_with_sign() {
        // KA + VOWEL SIGN I
        let segs = segment_aksharas(deva(), "\u{0915}\u{093F}");
        assert_eq!(segs.len(), 1);
        match &segs[0] {
            Segment::Akshara(a) => {
                assert_eq!(a.consonants, vec![('\u{0915}', None)]);
                assert_eq!(a.vowel, Some(Vowel::Sign('\u{093F}')));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn segment_dead_consonant() {
        // KA + VIRAMA
        let segs = segment_aksharas(deva(), "\u{0915}\u{094D}");
        assert_eq!(segs.len(), 1);
        match &segs[0] {
            Segment::Akshara(a) => {
                assert_eq!(a.consonants, vec![('\u{0915}', None)]);
                assert_eq!(a.vowel, None);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn segment_mixed_passthrough() {
        let segs = segment_aksharas(deva(), "\u{0915} a");
        assert_eq!(segs.len(), 3);
        assert!(matches!(&segs[0], Segment::Akshara(a) if a.vowel == Some(Vowel::Inherent)));
        assert_eq!(segs[1], Segment::PassThrough(' '));
        assert_eq!(segs[2], Segment::PassThrough('a'));
    }

    #[test]
    fn detect_by_plurality() {
        assert!(detect_script("").is_none());
        assert_eq!(detect_script("\u{0B95}\u{0BBE}").unwrap().name(), "taml");
        // 3 Devanagari vs 1 Gujarati codepoints
        assert_eq!(
            detect_script("\u{0915}\u{0916}\u{0917}\u{0A95}").unwrap().name(),
            "deva"
        );
    }

    #[test]
    fn segmentation_round_trip_samples() {
        let samples = ["\u{0915}\u{094D}\u{0937}\u{093F}", "भारत गणराज्य", "क़िला", "hello क"];
        for s in samples {
            let joined: String =
                segment_aksharas(deva(), s).iter().map(|seg| seg.to_text(deva())).collect();
            assert_eq!(joined, s);
        }
    }
}
