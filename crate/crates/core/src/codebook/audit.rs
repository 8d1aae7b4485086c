//! Re-verification of codebook constraints from raw symbols.
//!
//! Deliberately written against plain slices with its own arithmetic; it
//! calls nothing from the builder or from the word utilities.

use serde::Serialize;

use super::CodebookSpec;
use crate::words::Word;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub words: usize,
    pub pairs: usize,
    /// Indices of words with an out-of-range letter count.
    pub unbalanced: Vec<usize>,
    /// Pairs `(i, j)` with `d_H <= alpha`.
    pub too_close: Vec<(usize, usize)>,
    /// Pairs `(i, j)` whose doubled words share a length-`n` window.
    pub shared_window: Vec<(usize, usize)>,
    pub wrong_length: Vec<usize>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.unbalanced.is_empty()
            && self.too_close.is_empty()
            && self.shared_window.is_empty()
            && self.wrong_length.is_empty()
    }
}

fn counts_ok(w: &[u32], spec: &CodebookSpec) -> bool {
    let n = w.len() as u128;
    let big_n = spec.symbols as u128;
    let (p, q) = (*spec.eps.numer() as u128, *spec.eps.denom() as u128);
    (0..spec.symbols).all(|a| {
        let c = w.iter().filter(|&&s| s == a).count() as u128;
        // (1-eps) n / N < c < (1+eps) n / N, cleared of denominators
        (q - p) * n < c * big_n * q && c * big_n * q < (q + p) * n
    })
}

fn strictly_far(u: &[u32], v: &[u32], spec: &CodebookSpec) -> bool {
    let d = u.iter().zip(v).filter(|(a, b)| a != b).count() as u128;
    // d / n > p / q
    d * (*spec.alpha.denom() as u128) > (*spec.alpha.numer() as u128) * u.len() as u128
}

/// Lexicographically least rotation, by direct comparison of all rotations.
/// Length-`n` windows of `uu` are exactly the rotations of `u`, so two doubled
/// words share such a window iff their least rotations agree.
fn least_rotation(u: &[u32]) -> Vec<u32> {
    let n = u.len();
    let uu: Vec<u32> = u.iter().chain(u).copied().collect();
    let best = (0..n).min_by(|&i, &j| uu[i..i + n].cmp(&uu[j..j + n])).unwrap_or(0);
    uu[best..best + n].to_vec()
}

pub fn verify(words: &[Word], spec: &CodebookSpec) -> AuditReport {
    let raw: Vec<&[u32]> = words.iter().map(|w| w.symbols()).collect();
    let mut report = AuditReport {
        words: raw.len(),
        ..AuditReport::default()
    };
    for (i, w) in raw.iter().enumerate() {
        if w.len() != spec.n {
            report.wrong_length.push(i);
        } else if !counts_ok(w, spec) {
            report.unbalanced.push(i);
        }
    }
    let rotations: Vec<Vec<u32>> = raw.iter().map(|w| least_rotation(w)).collect();
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            report.pairs += 1;
            if raw[i].len() != raw[j].len() {
                continue;
            }
            if !strictly_far(raw[i], raw[j], spec) {
                report.too_close.push((i, j));
            }
            if rotations[i] == rotations[j] {
                report.shared_window.push((i, j));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Frac};

    #[test]
    fn detects_each_violation() {
        let spec = CodebookSpec::new(2, 4, Frac::new(1, 4), Frac::new(1, 2)).unwrap();
        let w = |s: &str| Word::parse(s, Alphabet::BINARY).unwrap();
        let r = verify(&[w("0011"), w("1001")], &spec);
        assert_eq!(r.shared_window, vec![(0, 1)]);
        let r = verify(&[w("0011"), w("0001")], &spec);
        assert_eq!(r.unbalanced, vec![1]);
        assert_eq!(r.too_close, vec![(0, 1)]);
        let r = verify(&[w("0011"), w("0101")], &spec);
        assert!(r.ok());
    }

    proptest::proptest! {
        #[test]
        fn rotation_test_matches_window_scan(
            u in proptest::collection::vec(0u32..2, 1..9),
            shift in 0usize..9,
            flip in proptest::bool::ANY,
        ) {
            let n = u.len();
            let mut v: Vec<u32> = (0..n).map(|i| u[(i + shift) % n]).collect();
            if flip {
                v[0] ^= 1;
            }
            let uu: Vec<u32> = u.iter().chain(&u).copied().collect();
            let vv: Vec<u32> = v.iter().chain(&v).copied().collect();
            let naive = (0..n).any(|i| (0..n).any(|j| uu[i..i + n] == vv[j..j + n]));
            proptest::prop_assert_eq!(least_rotation(&u) == least_rotation(&v), naive);
        }
    }
}
