//! Generalized suffix automaton over a dense small alphabet.
//!
//! Strings are inserted through [`SuffixAutomaton::extend`] starting from any
//! state previously returned for a prefix, so a trie of strings can be
//! inserted depth-first without re-walking shared prefixes.

use crate::words::Symbol;

const NONE: u32 = u32::MAX;

pub struct SuffixAutomaton {
    sigma: usize,
    next: Vec<u32>,
    link: Vec<u32>,
    len: Vec<u32>,
}

impl SuffixAutomaton {
    pub const ROOT: u32 = 0;

    pub fn new(sigma: usize) -> Self {
        Self::with_capacity(sigma, 1)
    }

    pub fn with_capacity(sigma: usize, states: usize) -> Self {
        let mut sam = SuffixAutomaton {
            sigma,
            next: Vec::with_capacity(states * sigma),
            link: Vec::with_capacity(states),
            len: Vec::with_capacity(states),
        };
        sam.push_state(0, NONE);
        sam
    }

    pub fn states(&self) -> usize {
        self.len.len()
    }

    fn push_state(&mut self, len: u32, link: u32) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        self.next.extend(std::iter::repeat_n(NONE, self.sigma));
        id
    }

    #[inline]
    fn go(&self, state: u32, c: usize) -> u32 {
        self.next[state as usize * self.sigma + c]
    }

    #[inline]
    fn set(&mut self, state: u32, c: usize, to: u32) {
        self.next[state as usize * self.sigma + c] = to;
    }

    fn clone_state(&mut self, q: u32, len: u32) -> u32 {
        let id = self.push_state(len, self.link[q as usize]);
        let (src, dst) = (q as usize * self.sigma, id as usize * self.sigma);
        self.next.copy_within(src..src + self.sigma, dst);
        id
    }

    /// Appends `c` to the string ending in state `last`; returns the new last.
    pub fn extend(&mut self, last: u32, c: Symbol) -> u32 {
        let c = c as usize;
        let existing = self.go(last, c);
        if existing != NONE {
            if self.len[last as usize] + 1 == self.len[existing as usize] {
                return existing;
            }
            let clone = self.clone_state(existing, self.len[last as usize] + 1);
            self.link[existing as usize] = clone;
            let mut p = last;
            while p != NONE && self.go(p, c) == existing {
                self.set(p, c, clone);
                p = self.link[p as usize];
            }
            return clone;
        }
        let cur = self.push_state(self.len[last as usize] + 1, NONE);
        let mut p = last;
        while p != NONE && self.go(p, c) == NONE {
            self.set(p, c, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = Self::ROOT;
            return cur;
        }
        let q = self.go(p, c);
        if self.len[p as usize] + 1 == self.len[q as usize] {
            self.link[cur as usize] = q;
            return cur;
        }
        let clone = self.clone_state(q, self.len[p as usize] + 1);
        while p != NONE && self.go(p, c) == q {
            self.set(p, c, clone);
            p = self.link[p as usize];
        }
        self.link[q as usize] = clone;
        self.link[cur as usize] = clone;
        cur
    }

    pub fn extend_all(&mut self, mut last: u32, symbols: &[Symbol]) -> u32 {
        for &c in symbols {
            last = self.extend(last, c);
        }
        last
    }

    /// Number of distinct substrings of length exactly `n`.
    pub fn count_of_length(&self, n: usize) -> u64 {
        let n = n as u64;
        (1..self.states())
            .filter(|&v| {
                let hi = self.len[v] as u64;
                let lo = self.len[self.link[v] as usize] as u64;
                lo < n && n <= hi
            })
            .count() as u64
    }

    /// Number of distinct nonempty substrings.
    pub fn count_all(&self) -> u64 {
        (1..self.states())
            .map(|v| (self.len[v] - self.len[self.link[v] as usize]) as u64)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn naive(strings: &[Vec<Symbol>], n: usize) -> usize {
        let mut set = HashSet::new();
        for s in strings {
            if s.len() >= n {
                for w in s.windows(n) {
                    set.insert(w.to_vec());
                }
            }
        }
        set.len()
    }

    #[test]
    fn single_string() {
        let mut sam = SuffixAutomaton::new(2);
        sam.extend_all(SuffixAutomaton::ROOT, &[0, 1, 1, 0]);
        assert_eq!(sam.count_of_length(1), 2);
        assert_eq!(sam.count_of_length(2), 3);
        assert_eq!(sam.count_of_length(4), 1);
        assert_eq!(sam.count_of_length(5), 0);
        // 0,1,01,11,10,011,110,0110
        assert_eq!(sam.count_all(), 8);
    }

    proptest! {
        #[test]
        fn generalized_matches_naive(
            strings in proptest::collection::vec(proptest::collection::vec(0u32..3, 0..14), 1..6),
            n in 1usize..8,
        ) {
            let mut sam = SuffixAutomaton::new(3);
            for s in &strings {
                sam.extend_all(SuffixAutomaton::ROOT, s);
            }
            prop_assert_eq!(sam.count_of_length(n) as usize, naive(&strings, n));
        }

        #[test]
        fn trie_insertion_matches_naive(
            heads in proptest::collection::vec(proptest::collection::vec(0u32..2, 1..6), 1..4),
            tails in proptest::collection::vec(proptest::collection::vec(0u32..2, 1..6), 1..4),
            n in 1usize..8,
        ) {
            let mut sam = SuffixAutomaton::new(2);
            let mut all = Vec::new();
            for h in &heads {
                let mid = sam.extend_all(SuffixAutomaton::ROOT, h);
                for t in &tails {
                    sam.extend_all(mid, t);
                    all.push([h.clone(), t.clone()].concat());
                }
            }
            prop_assert_eq!(sam.count_of_length(n) as usize, naive(&all, n));
        }
    }
}
