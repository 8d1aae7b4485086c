//! Languages and block complexity of subshifts presented by equal-length
//! generator words.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sam::SuffixAutomaton;
use crate::words::{find, Alphabet, Symbol, Word};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Upper limit on enumerated windows (`k^t · L`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

/// All bi-infinite concatenations of a fixed set of equal-length words.
#[derive(Clone, Debug)]
pub struct ConcatSubshift {
    generators: Vec<Word>,
    alphabet: Alphabet,
    label: Option<String>,
}

impl ConcatSubshift {
    pub fn new(generators: Vec<Word>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Precondition("no generators".into()))?;
        let (alphabet, len) = (first.alphabet(), first.len());
        if len == 0 {
            return Err(Error::Precondition("generators must be nonempty".into()));
        }
        for g in &generators {
            if g.alphabet() != alphabet {
                return Err(Error::MixedAlphabets {
                    left: alphabet.size(),
                    right: g.alphabet().size(),
                });
            }
            if g.len() != len {
                return Err(Error::LengthMismatch {
                    left: len,
                    right: g.len(),
                });
            }
        }
        let distinct: HashSet<&Word> = generators.iter().collect();
        if distinct.len() != generators.len() {
            return Err(Error::Precondition(
                "generators are not pairwise distinct".into(),
            ));
        }
        Ok(ConcatSubshift {
            generators,
            alphabet,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Common generator length `L`.
    pub fn block_len(&self) -> usize {
        self.generators[0].len()
    }

    /// Blocks needed so that every length-`n` window lies in one tuple.
    pub fn blocks_for(&self, n: usize) -> usize {
        n.div_ceil(self.block_len()) + 1
    }

    /// `k^t · L`, the number of windows a `t`-tuple enumeration visits.
    pub fn enumeration_cost(&self, t: usize) -> Option<u64> {
        let k = self.generators.len() as u64;
        let mut cost = self.block_len() as u64;
        for _ in 0..t {
            cost = cost.checked_mul(k)?;
        }
        Some(cost)
    }

    fn check_budget(&self, n: usize, t: usize, budget: Budget) -> Result<()> {
        if n == 0 {
            return Err(Error::OutOfRange("window length must be at least 1".into()));
        }
        match self.enumeration_cost(t) {
            Some(c) if c <= budget.0 => Ok(()),
            Some(c) => Err(Error::budget(
                format!("language enumeration at n={n}"),
                c,
                budget.0,
            )),
            None => Err(Error::budget(
                format!("language enumeration at n={n}"),
                format!("{}^{}*{}", self.generators.len(), t, self.block_len()),
                budget.0,
            )),
        }
    }
}

/// Walks every `t`-tuple of generators, truncated to `L + n - 1` symbols.
fn tuple_strings(
    x: &ConcatSubshift,
    first: usize,
    n: usize,
    t: usize,
    mut visit: impl FnMut(&[Symbol]),
) {
    let total = x.block_len() + n - 1;
    let k = x.generators.len();
    let mut buf: Vec<Symbol> = Vec::with_capacity(t * x.block_len());
    let mut idx = vec![0usize; t];
    idx[0] = first;
    loop {
        buf.clear();
        for &i in &idx {
            buf.extend_from_slice(x.generators[i].symbols());
        }
        visit(&buf[..total]);
        // odometer over positions 1..t
        let mut pos = t;
        loop {
            if pos == 1 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `L_n(X)` using tuples of `t` generators; `t` must be at least
/// [`ConcatSubshift::blocks_for`].
pub fn language_with_blocks(
    x: &ConcatSubshift,
    n: usize,
    t: usize,
    budget: Budget,
) -> Result<BTreeSet<Word>> {
    x.check_budget(n, t, budget)?;
    if t < x.blocks_for(n) {
        return Err(Error::Precondition(format!(
            "{t} blocks cannot hold every window of length {n}"
        )));
    }
    let l = x.block_len();
    let sets: Vec<HashSet<Vec<Symbol>>> = (0..x.generators.len())
        .into_par_iter()
        .map(|first| {
            let mut set = HashSet::new();
            tuple_strings(x, first, n, t, |s| {
                for start in 0..l {
                    set.insert(s[start..start + n].to_vec());
                }
            });
            set
        })
        .collect();
    let alphabet = x.alphabet;
    Ok(sets
        .into_iter()
        .flatten()
        .map(|s| Word::new(s, alphabet).expect("generator symbols"))
        .collect())
}

/// `L_n(X)`: all distinct length-`n` words occurring in some point of `X`.
pub fn language(x: &ConcatSubshift, n: usize, budget: Budget) -> Result<BTreeSet<Word>> {
    language_with_blocks(x, n, x.blocks_for(n), budget)
}

/// `p_X(n) = |L_n(X)|`, counted exactly with a generalized suffix automaton
/// built over the trie of generator tuples.
pub fn complexity(x: &ConcatSubshift, n: usize, budget: Budget) -> Result<u64> {
    let t = x.blocks_for(n);
    x.check_budget(n, t, budget)?;
    let l = x.block_len();
    let total = l + n - 1;
    let mut sam = SuffixAutomaton::new(x.alphabet.size() as usize);
    // depth-first over tuple prefixes; `stack` holds (depth, state) frontiers
    let mut stack: Vec<(usize, u32)> = vec![(0, SuffixAutomaton::ROOT)];
    while let Some((depth, state)) = stack.pop() {
        let consumed = depth * l;
        if consumed >= total {
            continue;
        }
        let take = l.min(total - consumed);
        for g in x.generators.iter().rev() {
            let end = sam.extend_all(state, &g.symbols()[..take]);
            stack.push((depth + 1, end));
        }
    }
    Ok(sam.count_of_length(n))
}

/// `(n, p_X(n))` rows for every `n` in `range`.
pub fn complexity_table(
    x: &ConcatSubshift,
    range: impl IntoIterator<Item = usize>,
    budget: Budget,
) -> Result<Vec<(usize, u64)>> {
    range
        .into_iter()
        .map(|n| complexity(x, n, budget).map(|p| (n, p)))
        .collect()
}

pub fn write_complexity_csv<W: Write>(out: W, rows: &[(usize, u64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "complexity"])?;
    for (n, p) in rows {
        w.write_record([n.to_string(), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Newline-delimited dump of a language.
pub fn write_language<W: Write>(mut out: W, words: &BTreeSet<Word>) -> Result<()> {
    for w in words {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "gap")]
pub enum Syndetic {
    /// `u` recurs with gaps at most this bound in every point.
    Gap(usize),
    NotAtThisLevel,
}

/// If `u` occurs in every generator it recurs within every window of
/// length `2L` of every point.
pub fn syndetic_gap(x: &ConcatSubshift, u: &Word) -> Result<Syndetic> {
    if u.len() > x.block_len() {
        return Err(Error::OutOfRange(format!(
            "word of length {} exceeds block length {}",
            u.len(),
            x.block_len()
        )));
    }
    let everywhere = x
        .generators
        .par_iter()
        .all(|g| find(g.symbols(), u.symbols()).is_some());
    Ok(if everywhere {
        Syndetic::Gap(2 * x.block_len())
    } else {
        Syndetic::NotAtThisLevel
    })
}
