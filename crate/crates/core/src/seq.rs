//! Liouville and Möbius sequences and the block complexity of the
//! subshifts they generate.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sam::SuffixAutomaton;
use crate::words::{Alphabet, Symbol, Word};

/// Largest sieve accepted by default (about 5 bytes per entry).
pub const DEFAULT_SIEVE_BUDGET: u64 = 200_000_000;

const MAGIC: &[u8; 4] = b"SSEQ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqKind {
    Liouville,
    Mobius,
    Custom,
}

impl SeqKind {
    fn tag(self) -> u8 {
        match self {
            SeqKind::Liouville => 0,
            SeqKind::Mobius => 1,
            SeqKind::Custom => 2,
        }
    }

    fn from_tag(t: u8) -> Result<Self> {
        Ok(match t {
            0 => SeqKind::Liouville,
            1 => SeqKind::Mobius,
            2 => SeqKind::Custom,
            _ => return Err(Error::Parse(format!("unknown sequence kind {t}"))),
        })
    }
}

/// Values in `{-1, 0, 1}` for `n = 1..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticSequence {
    pub kind: SeqKind,
    pub values: Vec<i8>,
}

/// Smallest prime factor of every `n <= n_max` (linear sieve).
fn spf_sieve(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let j = i * p as usize;
            if p > si || j > n_max {
                break;
            }
            spf[j] = p;
        }
    }
    spf
}

fn check_budget(n_max: u64, budget: u64) -> Result<usize> {
    if n_max == 0 {
        return Err(Error::OutOfRange("n_max must be at least 1".into()));
    }
    if n_max > budget {
        return Err(Error::budget("sieve entries", n_max, budget));
    }
    usize::try_from(n_max).map_err(|_| Error::budget("sieve entries", n_max, budget))
}

/// `lambda(n) = (-1)^Omega(n)`.
pub fn liouville(n_max: u64, budget: u64) -> Result<ArithmeticSequence> {
    let n = check_budget(n_max, budget)?;
    let spf = spf_sieve(n);
    let mut lam = vec![1i8; n + 1];
    for i in 2..=n {
        lam[i] = -lam[i / spf[i] as usize];
    }
    lam.remove(0);
    Ok(ArithmeticSequence {
        kind: SeqKind::Liouville,
        values: lam,
    })
}

pub fn mobius(n_max: u64, budget: u64) -> Result<ArithmeticSequence> {
    let n = check_budget(n_max, budget)?;
    let spf = spf_sieve(n);
    let mut mu = vec![1i8; n + 1];
    for i in 2..=n {
        let p = spf[i] as usize;
        let rest = i / p;
        mu[i] = if rest.is_multiple_of(p) { 0 } else { -mu[rest] };
    }
    mu.remove(0);
    Ok(ArithmeticSequence {
        kind: SeqKind::Mobius,
        values: mu,
    })
}

impl ArithmeticSequence {
    pub fn custom(values: Vec<i8>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::OutOfRange(format!("value {v} outside {{-1, 0, 1}}")));
        }
        Ok(ArithmeticSequence {
            kind: SeqKind::Custom,
            values,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// `lambda` lands on `{0, 1}` (`-1 -> 0`); the others on `{0, 1, 2}`
    /// (`v -> v + 1`).
    pub fn alphabet(&self) -> Alphabet {
        match self.kind {
            SeqKind::Liouville => Alphabet::BINARY,
            _ => Alphabet::new(3).expect("ternary"),
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        match self.kind {
            SeqKind::Liouville => self.values.iter().map(|&v| (v > 0) as Symbol).collect(),
            _ => self.values.iter().map(|&v| (v + 1) as Symbol).collect(),
        }
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.symbols(), self.alphabet()).expect("symbols in range")
    }

    /// Header `SSEQ`, kind byte, `n_max` as little-endian `u64`, then one
    /// byte per value.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&[self.kind.tag()])?;
        out.write_all(&self.n_max().to_le_bytes())?;
        let bytes: Vec<u8> = self.values.iter().map(|&v| v as u8).collect();
        out.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut input: R) -> Result<Self> {
        let mut head = [0u8; 13];
        input.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(Error::Parse("not a sequence cache".into()));
        }
        let kind = SeqKind::from_tag(head[4])?;
        let n = u64::from_le_bytes(head[5..13].try_into().expect("8 bytes"));
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() as u64 != n {
            return Err(Error::Parse(format!("cache holds {} values, header says {n}", bytes.len())));
        }
        let values: Vec<i8> = bytes.into_iter().map(|b| b as i8).collect();
        let mut s = ArithmeticSequence::custom(values)?;
        s.kind = kind;
        Ok(s)
    }
}

/// Number of distinct length-`n` windows of `symbols` over `sigma` letters.
pub fn window_count(symbols: &[Symbol], sigma: u32, n: usize) -> Result<u64> {
    if n == 0 || n > symbols.len() {
        return Err(Error::OutOfRange(format!("window length {n} outside 1..={}", symbols.len())));
    }
    let sigma64 = sigma as u64;
    let Some(space) = sigma64.checked_pow(n as u32) else {
        let mut sam = SuffixAutomaton::with_capacity(sigma as usize, 2 * symbols.len());
        sam.extend_all(SuffixAutomaton::ROOT, symbols);
        return Ok(sam.count_of_length(n));
    };
    let top = space / sigma64;
    let mut code = 0u64;
    let codes = symbols.iter().enumerate().filter_map(move |(i, &s)| {
        code = (code % top) * sigma64 + s as u64;
        (i + 1 >= n).then_some(code)
    });
    if space <= 1 << 28 {
        let mut seen = vec![0u64; (space as usize).div_ceil(64)];
        let mut distinct = 0;
        for c in codes {
            let (w, b) = ((c / 64) as usize, c % 64);
            if seen[w] >> b & 1 == 0 {
                seen[w] |= 1 << b;
                distinct += 1;
            }
        }
        Ok(distinct)
    } else {
        let mut all: Vec<u64> = codes.collect();
        all.par_sort_unstable();
        all.dedup();
        Ok(all.len() as u64)
    }
}

pub fn seq_complexity(s: &ArithmeticSequence, n: usize) -> Result<u64> {
    window_count(&s.symbols(), s.alphabet().size(), n)
}

/// Quadratic oracle for window counts.
pub fn naive_window_count(symbols: &[Symbol], n: usize) -> u64 {
    let set: std::collections::BTreeSet<&[Symbol]> = symbols.windows(n).collect();
    set.len() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub count: u64,
    pub per_n: f64,
    pub per_n2: f64,
}

pub fn growth_report(s: &ArithmeticSequence, ns: &[usize]) -> Result<Vec<GrowthRow>> {
    let symbols = s.symbols();
    let sigma = s.alphabet().size();
    ns.par_iter()
        .map(|&n| {
            let count = window_count(&symbols, sigma, n)?;
            Ok(GrowthRow {
                n,
                count,
                per_n: count as f64 / n as f64,
                per_n2: count as f64 / (n * n) as f64,
            })
        })
        .collect()
}

pub fn write_growth_csv<W: Write>(out: W, rows: &[GrowthRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "count", "count_over_n", "count_over_n2"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.count.to_string(),
            format!("{:.6}", r.per_n),
            format!("{:.6}", r.per_n2),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_omega(mut n: u64) -> u32 {
        let mut k = 0;
        let mut p = 2;
        while p * p <= n {
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            p += 1;
        }
        k + u32::from(n > 1)
    }

    #[test]
    fn small_values() {
        let l = liouville(100, DEFAULT_SIEVE_BUDGET).unwrap();
        assert_eq!((l.values[0], l.values[1], l.values[11]), (1, -1, -1));
        let m = mobius(100, DEFAULT_SIEVE_BUDGET).unwrap();
        assert_eq!((m.values[0], m.values[3], m.values[5]), (1, 0, 1));
        for n in 1..=100u64 {
            let want = if trial_omega(n).is_multiple_of(2) { 1 } else { -1 };
            assert_eq!(l.values[n as usize - 1], want, "n = {n}");
            let sq = m.values[n as usize - 1];
            if sq != 0 {
                assert_eq!(sq, want);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(liouville(1000, 999), Err(Error::Budget { .. })));
        assert!(liouville(0, 10).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let m = mobius(5000, DEFAULT_SIEVE_BUDGET).unwrap();
        let mut buf = Vec::new();
        m.write_cache(&mut buf).unwrap();
        assert_eq!(buf.len(), 13 + 5000);
        assert_eq!(ArithmeticSequence::read_cache(&buf[..]).unwrap(), m);
    }

    #[test]
    fn constant_sequence() {
        let s = ArithmeticSequence::custom(vec![1; 50]).unwrap();
        for n in 1..=50 {
            assert_eq!(seq_complexity(&s, n).unwrap(), 1);
        }
    }

    #[test]
    fn report_columns() {
        let l = liouville(10_000, DEFAULT_SIEVE_BUDGET).unwrap();
        let rows = growth_report(&l, &[1, 2, 3, 4, 5]).unwrap();
        assert!(rows.windows(2).all(|r| r[0].count <= r[1].count));
        for r in &rows {
            assert_eq!(r.per_n, r.count as f64 / r.n as f64);
        }
        assert!(growth_report(&l, &[]).unwrap().is_empty());
    }

    #[test]
    fn wide_windows_use_the_automaton() {
        let l = liouville(3000, DEFAULT_SIEVE_BUDGET).unwrap();
        let sym = l.symbols();
        for n in [60, 64, 65, 70] {
            assert_eq!(window_count(&sym, 2, n).unwrap(), naive_window_count(&sym, n));
        }
    }

    proptest! {
        #[test]
        fn completely_multiplicative(a in 1u64..3000, b in 1u64..3000) {
            static SIEVE: std::sync::OnceLock<ArithmeticSequence> = std::sync::OnceLock::new();
            let l = SIEVE.get_or_init(|| liouville(9_000_000, DEFAULT_SIEVE_BUDGET).unwrap());
            let v = |n: u64| l.values[n as usize - 1];
            prop_assert_eq!(v(a) * v(b), v(a * b));
        }

        #[test]
        fn counts_match_oracle(vals in prop::collection::vec(-1i8..=1, 1..300), n in 1usize..40) {
            let s = ArithmeticSequence::custom(vals).unwrap();
            let sym = s.symbols();
            prop_assume!(n <= sym.len());
            let c = seq_complexity(&s, n).unwrap();
            prop_assert_eq!(c, naive_window_count(&sym, n));
            prop_assert!(c <= (sym.len() - n + 1) as u64);
        }
    }
}
