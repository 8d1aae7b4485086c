//! Finite words over small integer alphabets.
//!
//! Symbols are stored as `0..size`; whether a report prints them as
//! `0..N-1` or `1..N` is decided only at rendering time.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Exact fraction used for distances and frequencies.
pub type Frac = Ratio<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet(u32);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::OutOfRange("alphabet size must be at least 1".into()));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> u32 {
        self.0
    }

    fn check(self, other: Alphabet) -> Result<()> {
        if self != other {
            return Err(Error::MixedAlphabets {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(symbols: Vec<Symbol>, alphabet: Alphabet) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::InvalidSymbol {
                symbol: s,
                size: alphabet.size(),
            });
        }
        Ok(Word { symbols, alphabet })
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<Symbol>, alphabet: Alphabet) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < alphabet.size()));
        Word { symbols, alphabet }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            symbols: Vec::new(),
            alphabet,
        }
    }

    /// Parses the zero-based rendering produced by [`Word::render`].
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let symbols = if alphabet.size() <= 36 {
            text.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else if text.is_empty() {
            Vec::new()
        } else {
            text.split('.')
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad symbol {t:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(symbols, alphabet)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word {
            symbols: self.symbols.repeat(times),
            alphabet: self.alphabet,
        }
    }

    /// Contiguous window `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word {
            symbols: self.symbols[start..start + len].to_vec(),
            alphabet: self.alphabet,
        }
    }

    /// Number of occurrences of each symbol.
    pub fn letter_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.alphabet.size() as usize];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }

    pub fn contains(&self, needle: &Word) -> bool {
        find(&self.symbols, &needle.symbols).is_some()
    }

    /// Zero-based rendering: digits and lowercase letters for alphabets of at
    /// most 36 symbols, dot-separated integers otherwise.
    pub fn render(&self) -> String {
        self.render_with_offset(0)
    }

    /// Rendering with every symbol shifted by `offset` (use 1 for `{1..N}`).
    pub fn render_with_offset(&self, offset: u32) -> String {
        let top = self.alphabet.size() - 1 + offset;
        if top < 36 {
            self.symbols
                .iter()
                .map(|&s| char::from_digit(s + offset, 36).expect("digit"))
                .collect()
        } else {
            self.symbols
                .iter()
                .map(|&s| (s + offset).to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.render())
    }
}

/// Concatenates `parts` in order. Every part must use `alphabet`.
pub fn concat<'a, I>(alphabet: Alphabet, parts: I) -> Result<Word>
where
    I: IntoIterator<Item = &'a Word>,
{
    let mut symbols = Vec::new();
    for part in parts {
        alphabet.check(part.alphabet)?;
        symbols.extend_from_slice(&part.symbols);
    }
    Ok(Word { symbols, alphabet })
}

fn same_shape(u: &Word, v: &Word) -> Result<()> {
    u.alphabet.check(v.alphabet)?;
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.is_empty() {
        return Err(Error::OutOfRange("words must be nonempty".into()));
    }
    Ok(())
}

/// Number of positions where `u` and `v` differ.
pub fn mismatches(u: &Word, v: &Word) -> Result<usize> {
    same_shape(u, v)?;
    Ok(u.symbols
        .iter()
        .zip(&v.symbols)
        .filter(|(a, b)| a != b)
        .count())
}

/// Normalized Hamming distance as an exact fraction.
pub fn hamming(u: &Word, v: &Word) -> Result<Frac> {
    let d = mismatches(u, v)?;
    Ok(Frac::new(d as u64, u.len() as u64))
}

/// Distinct length-`n` windows of `w`.
pub fn subwords(w: &Word, n: usize) -> Result<BTreeSet<Word>> {
    if n == 0 || n > w.len() {
        return Err(Error::OutOfRange(format!(
            "window length {n} outside 1..={}",
            w.len()
        )));
    }
    let distinct: FxHashSet<&[Symbol]> = w.symbols.windows(n).collect();
    Ok(distinct
        .into_iter()
        .map(|s| Word::from_vec_unchecked(s.to_vec(), w.alphabet))
        .collect())
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation(s: &[Symbol]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut failure = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let c = at(j);
        let mut i = failure[j - k - 1];
        while i != usize::MAX && c != at(k + i + 1) {
            if c < at(k + i + 1) {
                k = j - i - 1;
            }
            i = failure[i];
        }
        if i == usize::MAX && c != at(k) {
            if c < at(k) {
                k = j;
            }
            failure[j - k] = usize::MAX;
        } else {
            failure[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k
}

/// The least cyclic rotation of `w`.
pub fn canonical_rotation(w: &Word) -> Word {
    let k = least_rotation(&w.symbols);
    let mut symbols = Vec::with_capacity(w.len());
    symbols.extend_from_slice(&w.symbols[k..]);
    symbols.extend_from_slice(&w.symbols[..k]);
    Word::from_vec_unchecked(symbols, w.alphabet)
}

/// True iff no length-`|u|` word occurs in both `uu` and `vv`, i.e. `u` and
/// `v` are not cyclic rotations of each other.
pub fn rotation_distinct(u: &Word, v: &Word) -> Result<bool> {
    same_shape(u, v)?;
    Ok(canonical_rotation(u) != canonical_rotation(v))
}

/// Doubled-word scan: does some length-`|u|` window of `uu` also occur in
/// `vv`? Implemented as a substring search of `v` in `uu`, independent of
/// the canonical-rotation route.
pub fn shares_doubled_window(u: &Word, v: &Word) -> Result<bool> {
    same_shape(u, v)?;
    let mut doubled = Vec::with_capacity(2 * u.len() - 1);
    doubled.extend_from_slice(&u.symbols);
    doubled.extend_from_slice(&u.symbols[..u.len() - 1]);
    Ok(find(&doubled, &v.symbols).is_some())
}

/// First occurrence of `needle` in `hay` (Knuth–Morris–Pratt).
pub fn find(hay: &[Symbol], needle: &[Symbol]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    if needle.len() > hay.len() {
        return None;
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    k = 0;
    for (i, &c) in hay.iter().enumerate() {
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == needle.len() {
            return Some(i + 1 - k);
        }
    }
    None
}

/// Fraction of window start positions of `w` whose length-`n` window lies in
/// `patterns`. All patterns must share the length `n`.
pub fn occurrence_frequency<'a, I>(patterns: I, w: &Word) -> Result<Frac>
where
    I: IntoIterator<Item = &'a Word>,
{
    let mut set: FxHashSet<&[Symbol]> = FxHashSet::default();
    let mut n = None;
    for p in patterns {
        match n {
            None => n = Some(p.len()),
            Some(len) if len != p.len() => {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: p.len(),
                })
            }
            _ => {}
        }
        set.insert(p.symbols());
    }
    let Some(n) = n else {
        return Ok(Frac::from_integer(0));
    };
    if n == 0 || n > w.len() {
        return Err(Error::OutOfRange(format!(
            "pattern length {n} outside 1..={}",
            w.len()
        )));
    }
    let hits = w.symbols.windows(n).filter(|win| set.contains(win)).count();
    Ok(Frac::new(hits as u64, (w.len() - n + 1) as u64))
}

/// Parses `p/q`, a decimal such as `0.25`, or an integer into an exact
/// fraction.
pub fn parse_frac(text: &str) -> Result<Frac> {
    let bad = || Error::Parse(format!("not a nonnegative rational: {text:?}"));
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Frac::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        return Ok(Frac::new(num, scale));
    }
    Ok(Frac::from_integer(t.parse().map_err(|_| bad())?))
}

/// Serializes a [`Frac`] as `"p/q"`; also accepts plain numbers and
/// decimals on input.
pub mod frac_text {
    use super::{parse_frac, Frac};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Frac, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(u64),
        Float(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Frac, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_frac(&t).map_err(D::Error::custom),
            Raw::Int(i) => Ok(Frac::from_integer(i)),
            Raw::Float(f) => parse_frac(&f.to_string()).map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bin(s: &str) -> Word {
        Word::parse(s, Alphabet::BINARY).unwrap()
    }

    #[test]
    fn concat_cases() {
        let empty: Vec<Word> = Vec::new();
        assert!(concat(Alphabet::BINARY, &empty).unwrap().is_empty());
        assert_eq!(
            concat(Alphabet::BINARY, [&bin("01"), &bin("10")]).unwrap(),
            bin("0110")
        );
        let w = bin("011");
        let copies = vec![w.clone(); 5];
        assert_eq!(concat(Alphabet::BINARY, &copies).unwrap().len(), 15);
        let ternary = Word::parse("2", Alphabet::new(3).unwrap()).unwrap();
        assert!(matches!(
            concat(Alphabet::BINARY, [&bin("0"), &ternary]),
            Err(Error::MixedAlphabets { .. })
        ));
    }

    #[test]
    fn hamming_cases() {
        let w = bin("0110");
        assert_eq!(hamming(&w, &w).unwrap(), Frac::from_integer(0));
        assert_eq!(
            hamming(&bin("00"), &bin("11")).unwrap(),
            Frac::from_integer(1)
        );
        assert_eq!(hamming(&bin("011"), &bin("010")).unwrap(), Frac::new(1, 3));
        assert!(matches!(
            hamming(&bin("0"), &bin("01")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn subword_cases() {
        let one: Vec<_> = subwords(&bin("0110"), 4).unwrap().into_iter().collect();
        assert_eq!(one, vec![bin("0110")]);
        let two: Vec<_> = subwords(&bin("0101"), 2).unwrap().into_iter().collect();
        assert_eq!(two, vec![bin("01"), bin("10")]);
        assert!(subwords(&bin("01"), 3).is_err());
        assert!(subwords(&bin("01"), 0).is_err());
    }

    #[test]
    fn rotation_cases() {
        let w = bin("0010");
        assert!(!rotation_distinct(&w, &w).unwrap());
        assert!(!rotation_distinct(&bin("01"), &bin("10")).unwrap());
        assert!(rotation_distinct(&bin("0011"), &bin("0101")).unwrap());
        // 0011 has rotations 0011, 0110, 1100, 1001; 0101 is not among them.
        let rotations: Vec<Word> = (0..4)
            .map(|k| {
                let mut s = bin("0011").into_symbols();
                s.rotate_left(k);
                Word::new(s, Alphabet::BINARY).unwrap()
            })
            .collect();
        assert!(!rotations.contains(&bin("0101")));
    }

    #[test]
    fn frequency_cases() {
        let w = bin("0001");
        assert_eq!(
            occurrence_frequency(&subwords(&w, 2).unwrap(), &w).unwrap(),
            Frac::from_integer(1)
        );
        assert_eq!(
            occurrence_frequency([&bin("11")], &w).unwrap(),
            Frac::from_integer(0)
        );
        assert_eq!(
            occurrence_frequency([&bin("00")], &w).unwrap(),
            Frac::new(2, 3)
        );
        let none: Vec<Word> = Vec::new();
        assert_eq!(
            occurrence_frequency(&none, &w).unwrap(),
            Frac::from_integer(0)
        );
        assert!(occurrence_frequency([&bin("0"), &bin("00")], &w).is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_frac("1/4").unwrap(), Frac::new(1, 4));
        assert_eq!(parse_frac("0.3").unwrap(), Frac::new(3, 10));
        assert_eq!(parse_frac(".5").unwrap(), Frac::new(1, 2));
        assert_eq!(parse_frac("2").unwrap(), Frac::from_integer(2));
        assert!(parse_frac("1/0").is_err());
        assert!(parse_frac("-1").is_err());
    }

    #[test]
    fn render_and_parse() {
        let a = Alphabet::new(3).unwrap();
        let w = Word::parse("0212", a).unwrap();
        assert_eq!(w.render_with_offset(1), "1323");
        let big = Alphabet::new(100).unwrap();
        let w = Word::new(vec![99, 0, 42], big).unwrap();
        assert_eq!(w.render(), "99.0.42");
        assert_eq!(Word::parse(&w.render(), big).unwrap(), w);
        assert!(Word::parse("2", Alphabet::BINARY).is_err());
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u32..3, 1..=max_len)
            .prop_map(|s| Word::new(s, Alphabet::new(3).unwrap()).unwrap())
    }

    fn equal_pair(max_len: usize) -> impl Strategy<Value = (Word, Word, Word)> {
        (1..=max_len).prop_flat_map(|n| {
            let w = || {
                proptest::collection::vec(0u32..2, n)
                    .prop_map(|s| Word::new(s, Alphabet::BINARY).unwrap())
            };
            (w(), w(), w())
        })
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((u, v, w) in equal_pair(16)) {
            let duv = hamming(&u, &v).unwrap();
            prop_assert_eq!(duv, hamming(&v, &u).unwrap());
            prop_assert_eq!(duv == Frac::from_integer(0), u == v);
            prop_assert!(hamming(&u, &w).unwrap() <= duv + hamming(&v, &w).unwrap());
        }

        #[test]
        fn rotation_routes_agree((u, v, _w) in equal_pair(12)) {
            let fast = rotation_distinct(&u, &v).unwrap();
            prop_assert_eq!(fast, rotation_distinct(&v, &u).unwrap());
            prop_assert_eq!(fast, !shares_doubled_window(&u, &v).unwrap());
            // naive route: intersect the window sets of uu and vv
            let n = u.len();
            let uu = u.repeat(2);
            let vv = v.repeat(2);
            let a = subwords(&uu, n).unwrap();
            let b = subwords(&vv, n).unwrap();
            prop_assert_eq!(fast, a.is_disjoint(&b));
        }

        #[test]
        fn least_rotation_is_minimal(w in word_strategy(20)) {
            let c = canonical_rotation(&w);
            for k in 0..w.len() {
                let mut s = w.symbols().to_vec();
                s.rotate_left(k);
                prop_assert!(c.symbols() <= s.as_slice());
            }
        }

        #[test]
        fn frequency_invariant_under_relabeling(
            w in word_strategy(30),
            n in 1usize..4,
            perm in Just([2u32, 0, 1]),
        ) {
            prop_assume!(n <= w.len());
            let pats: Vec<Word> = subwords(&w, n).unwrap().into_iter().step_by(2).collect();
            let relabel = |x: &Word| Word::new(
                x.symbols().iter().map(|&s| perm[s as usize]).collect(),
                x.alphabet(),
            ).unwrap();
            let before = occurrence_frequency(&pats, &w).unwrap();
            let pats2: Vec<Word> = pats.iter().map(relabel).collect();
            let after = occurrence_frequency(&pats2, &relabel(&w)).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn subword_count_bounded(w in word_strategy(25), n in 1usize..6) {
            prop_assume!(n <= w.len());
            prop_assert!(subwords(&w, n).unwrap().len() <= w.len() - n + 1);
        }
    }
}
