//! Balanced, Hamming-separated, rotation-distinct codebooks and the counting
//! quantities that size them.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{canonical_rotation, Alphabet, Frac, Symbol, Word};

pub mod audit;

/// Safety margin applied whenever a float inequality feeds a certificate.
pub const GUARD: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodebookSpec {
    /// Alphabet size `N`.
    pub symbols: u32,
    /// Word length `n`.
    pub n: usize,
    #[serde(with = "crate::words::frac_text")]
    pub alpha: Frac,
    #[serde(with = "crate::words::frac_text")]
    pub eps: Frac,
}

impl CodebookSpec {
    pub fn new(symbols: u32, n: usize, alpha: Frac, eps: Frac) -> Result<Self> {
        let spec = CodebookSpec {
            symbols,
            n,
            alpha,
            eps,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n_sym = self.symbols as u64;
        if n_sym < 2 {
            return Err(Error::Precondition(
                "alphabet needs at least 2 symbols".into(),
            ));
        }
        if self.n == 0 {
            return Err(Error::Precondition("word length must be at least 1".into()));
        }
        if self.alpha.is_zero() || self.alpha >= Frac::new(n_sym - 1, n_sym) {
            return Err(Error::Precondition(format!(
                "alpha = {} must lie in (0, {}/{})",
                self.alpha,
                n_sym - 1,
                n_sym
            )));
        }
        if self.eps.is_zero() || self.eps >= Frac::one() {
            return Err(Error::Precondition(format!(
                "eps = {} must lie in (0, 1)",
                self.eps
            )));
        }
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.symbols).expect("validated")
    }

    /// Least mismatch count with `d_H > alpha`, i.e. `floor(alpha n) + 1`.
    pub fn min_separation(&self) -> usize {
        separation_mismatches(self.n, self.alpha)
    }

    /// Largest mismatch count inside the open ball `d_H < alpha`,
    /// i.e. `ceil(alpha n) - 1`.
    pub fn ball_radius(&self) -> usize {
        ball_radius(self.n, self.alpha)
    }

    /// Strict bounds `(1-eps) n/N < c < (1+eps) n/N` on every letter count.
    pub fn letter_count_ok(&self, c: usize) -> bool {
        balanced_letter(c, self.n, self.symbols as u64, self.eps)
    }
}

pub fn separation_mismatches(n: usize, alpha: Frac) -> usize {
    let (p, q) = (*alpha.numer() as u128, *alpha.denom() as u128);
    ((p * n as u128) / q) as usize + 1
}

pub fn ball_radius(n: usize, alpha: Frac) -> usize {
    let (p, q) = (*alpha.numer() as u128, *alpha.denom() as u128);
    let ceil = (p * n as u128).div_ceil(q) as usize;
    ceil.saturating_sub(1)
}

fn balanced_letter(c: usize, n: usize, symbols: u64, eps: Frac) -> bool {
    // c N q > (q - p) n  and  c N q < (q + p) n
    let (p, q) = (*eps.numer() as u128, *eps.denom() as u128);
    let lhs = c as u128 * symbols as u128 * q;
    lhs > (q - p.min(q)) * n as u128 && lhs < (q + p) * n as u128
}

/// `sum_{j <= t} C(n, j) (N-1)^j`: words within `t` mismatches of a fixed word.
pub fn ball_volume(n: usize, t: usize, symbols: u64) -> BigUint {
    let t = t.min(n);
    let base = BigUint::from(symbols - 1);
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for j in 1..=t {
        term = term * (n - j + 1) * &base / j;
        total += &term;
    }
    total
}

/// `f(x) = x log(N-1) - x log x - (1-x) log(1-x)` in bits, with `f(0) = 0`.
pub fn rate_function(x: f64, symbols: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange(format!(
            "rate function argument {x} outside (0, 1)"
        )));
    }
    Ok(x * (symbols - 1.0).log2() - x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Rate quantities that need no threshold search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub f_alpha: f64,
    pub delta: f64,
    pub g: f64,
    pub lambda: f64,
}

/// `delta` is the largest `2^-j` with `(1+delta) f(alpha) < log2 N` by at
/// least [`GUARD`]; `g = log2 N - (1+delta) f(alpha)` and `lambda = 2^(g/2)`.
pub fn rates(symbols: f64, alpha: f64) -> Result<Rates> {
    let f_alpha = rate_function(alpha, symbols)?;
    let cap = symbols.log2();
    if f_alpha + GUARD >= cap {
        return Err(Error::Precondition(format!(
            "f(alpha) = {f_alpha} is not below log2 N = {cap}"
        )));
    }
    let mut delta = 1.0f64;
    while (1.0 + delta) * f_alpha + GUARD >= cap {
        delta /= 2.0;
    }
    let g = cap - (1.0 + delta) * f_alpha;
    Ok(Rates {
        f_alpha,
        delta,
        g,
        lambda: (g / 2.0).exp2(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub f_alpha: f64,
    pub delta: f64,
    pub g: f64,
    pub lambda: f64,
    /// Least `n` from which both threshold conditions hold up to `horizon`.
    #[serde(rename = "M")]
    pub m: usize,
    pub horizon: usize,
}

pub const DEFAULT_RATE_HORIZON: usize = 2048;

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").log2() + shift as f64
}

/// Rates plus the threshold `M`: least `m` such that for every `n` in
/// `[m, horizon]` the open-ball volume is below `2^(n(1+delta)f)` and
/// `k(n) = floor((1-eps) N^n / 2^(n(1+delta)f)) / n >= lambda^n`.
pub fn growth_params(spec: &CodebookSpec, horizon: usize) -> Result<RateReport> {
    spec.validate()?;
    let alpha = spec.alpha.to_f64().expect("finite");
    let eps = spec.eps.to_f64().expect("finite");
    let symbols = spec.symbols as f64;
    let r = rates(symbols, alpha)?;
    let expo = (1.0 + r.delta) * r.f_alpha;
    let holds = |n: usize| {
        let volume = ball_volume(n, ball_radius(n, spec.alpha), spec.symbols as u64);
        let a = log2_big(&volume) + GUARD < n as f64 * expo;
        let y = (1.0 - eps).log2() + n as f64 * (symbols.log2() - expo);
        let floor_log = if y < 52.0 { y.exp2().floor().log2() } else { y };
        let b = floor_log - (n as f64).log2() >= n as f64 * r.g / 2.0 + GUARD;
        a && b
    };
    let last_failure = (1..=horizon).into_par_iter().filter(|&n| !holds(n)).max();
    let m = match last_failure {
        None => 1,
        Some(n) if n == horizon => {
            return Err(Error::Horizon(format!(
                "codebook growth conditions fail at the horizon {horizon}"
            )))
        }
        Some(n) => n + 1,
    };
    Ok(RateReport {
        f_alpha: r.f_alpha,
        delta: r.delta,
        g: r.g,
        lambda: r.lambda,
        m,
        horizon,
    })
}

/// Words in `{0..N-1}^n` whose letter counts all lie strictly inside
/// `((1-eps) n/N, (1+eps) n/N)`, summed exactly over count compositions.
pub fn balanced_count(n: usize, symbols: u32, eps: Frac) -> BigUint {
    let allowed: Vec<usize> = (0..=n)
        .filter(|&c| balanced_letter(c, n, symbols as u64, eps))
        .collect();
    // dp over letters: ways[r] = sum of multinomial prefixes using r letters
    let mut ways: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    let fact = factorials(n);
    let binom = |m: usize, c: usize| &fact[m] / (&fact[c] * &fact[m - c]);
    for _ in 0..symbols {
        let mut next = vec![BigUint::zero(); n + 1];
        for (used, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &c in &allowed {
                if used + c > n {
                    break;
                }
                next[used + c] += w * binom(used + c, c);
            }
        }
        ways = next;
    }
    ways.swap_remove(n)
}

/// `balanced_count(n, N, eps) > (1-eps) N^n`, compared exactly.
pub fn balanced_exceeds(n: usize, symbols: u32, eps: Frac) -> bool {
    let (p, q) = (*eps.numer(), *eps.denom());
    balanced_count(n, symbols, eps) * q > BigUint::from(symbols).pow(n as u32) * (q - p)
}

/// Least `m` such that the balanced-count bound holds for every `n` in
/// `[m, horizon]`; `None` when it fails at the horizon itself.
pub fn balanced_threshold(symbols: u32, eps: Frac, horizon: usize) -> Option<usize> {
    match (1..=horizon)
        .rev()
        .find(|&n| !balanced_exceeds(n, symbols, eps))
    {
        None => Some(1),
        Some(n) if n == horizon => None,
        Some(n) => Some(n + 1),
    }
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for i in 1..=n {
        let next = &out[i - 1] * i;
        out.push(next);
    }
    out
}

/// `floor(balanced / volume) / n`, the lower bound a greedy codebook meets.
pub fn greedy_floor(spec: &CodebookSpec) -> Frac {
    let w = balanced_count(spec.n, spec.symbols, spec.eps);
    let v = ball_volume(spec.n, spec.ball_radius(), spec.symbols as u64);
    let q = (w / v).to_u64().unwrap_or(u64::MAX);
    Frac::new(q, spec.n as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Exhaustive mode is used when `N^n` does not exceed this.
    pub enumeration_budget: u64,
    /// Candidates drawn before sampling mode gives up.
    pub sample_budget: u64,
    /// Stop once this many words are accepted.
    pub max_words: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            enumeration_budget: 1 << 24,
            sample_budget: 1_000_000,
            max_words: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub spec: CodebookSpec,
    pub mode: Mode,
    pub seed: u64,
    /// False when sampling stopped on its budget before reaching `max_words`.
    pub complete: bool,
    pub candidates: u64,
    #[serde(skip)]
    pub words: Vec<Word>,
}

struct Greedy<'a> {
    spec: &'a CodebookSpec,
    sep: usize,
    accepted: Vec<Vec<Symbol>>,
    rotations: HashSet<Vec<Symbol>>,
}

impl Greedy<'_> {
    fn balanced(&self, w: &[Symbol]) -> bool {
        let mut counts = vec![0usize; self.spec.symbols as usize];
        for &s in w {
            counts[s as usize] += 1;
        }
        counts.into_iter().all(|c| self.spec.letter_count_ok(c))
    }

    fn far_from(&self, w: &[Symbol], others: &[Vec<Symbol>]) -> bool {
        others.iter().all(|u| {
            let mut d = 0;
            for (a, b) in u.iter().zip(w) {
                d += (a != b) as usize;
                if d >= self.sep {
                    return true;
                }
            }
            false
        })
    }

    /// Checks against the accepted prefix; safe to run in parallel.
    fn passes_prefix(&self, w: &[Symbol], alphabet: Alphabet) -> Option<Vec<Symbol>> {
        if !self.balanced(w) || !self.far_from(w, &self.accepted) {
            return None;
        }
        let rot =
            canonical_rotation(&Word::from_vec_unchecked(w.to_vec(), alphabet)).into_symbols();
        (!self.rotations.contains(&rot)).then_some(rot)
    }

    /// Sequential acceptance of a batch already filtered against the prefix.
    fn absorb(&mut self, batch: Vec<(Vec<Symbol>, Vec<Symbol>)>, limit: usize) {
        let start = self.accepted.len();
        for (w, rot) in batch {
            if self.accepted.len() >= limit {
                return;
            }
            if self.rotations.contains(&rot) || !self.far_from(&w, &self.accepted[start..]) {
                continue;
            }
            self.rotations.insert(rot);
            self.accepted.push(w);
        }
    }
}

const BATCH: usize = 4096;

/// Greedy selection: lexicographic over all of `{0..N-1}^n` when that fits
/// the enumeration budget, seeded uniform sampling otherwise.
pub fn build_codebook(spec: &CodebookSpec, seed: u64, opts: &BuildOptions) -> Result<Codebook> {
    spec.validate()?;
    let alphabet = spec.alphabet();
    let space = (spec.symbols as f64).powi(spec.n as i32);
    let mode = if space <= opts.enumeration_budget as f64 {
        Mode::Exhaustive
    } else {
        Mode::Sampling
    };
    let limit = opts.max_words.unwrap_or(usize::MAX);
    let mut greedy = Greedy {
        spec,
        sep: spec.min_separation(),
        accepted: Vec::new(),
        rotations: HashSet::new(),
    };
    let mut candidates = 0u64;
    let mut complete = true;
    let base = spec.symbols;
    match mode {
        Mode::Exhaustive => {
            let total = space as u64;
            let mut next = 0u64;
            while next < total && greedy.accepted.len() < limit {
                let end = (next + BATCH as u64).min(total);
                let batch: Vec<Vec<Symbol>> =
                    (next..end).map(|i| digits(i, base, spec.n)).collect();
                candidates += end - next;
                next = end;
                let survivors = filter_batch(&greedy, batch, alphabet);
                greedy.absorb(survivors, limit);
            }
        }
        Mode::Sampling => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while greedy.accepted.len() < limit {
                if candidates >= opts.sample_budget {
                    complete = opts.max_words.is_none();
                    break;
                }
                let take = (BATCH as u64).min(opts.sample_budget - candidates);
                let batch: Vec<Vec<Symbol>> = (0..take)
                    .map(|_| (0..spec.n).map(|_| rng.gen_range(0..base)).collect())
                    .collect();
                candidates += take;
                let survivors = filter_batch(&greedy, batch, alphabet);
                greedy.absorb(survivors, limit);
            }
        }
    }
    Ok(Codebook {
        spec: *spec,
        mode,
        seed,
        complete,
        candidates,
        words: greedy
            .accepted
            .into_iter()
            .map(|s| Word::from_vec_unchecked(s, alphabet))
            .collect(),
    })
}

fn filter_batch(
    greedy: &Greedy<'_>,
    batch: Vec<Vec<Symbol>>,
    alphabet: Alphabet,
) -> Vec<(Vec<Symbol>, Vec<Symbol>)> {
    batch
        .into_par_iter()
        .filter_map(|w| greedy.passes_prefix(&w, alphabet).map(|rot| (w, rot)))
        .collect()
}

/// Base-`N` digits of `i`, most significant first.
fn digits(mut i: u64, base: u32, n: usize) -> Vec<Symbol> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        let (q, r) = i.div_rem(&(base as u64));
        *slot = r as Symbol;
        i = q;
    }
    out
}

impl Codebook {
    /// Header lines (`# ` + JSON) followed by one word per line.
    pub fn write<W: Write>(&self, mut out: W, report: Option<&RateReport>) -> Result<()> {
        writeln!(out, "# {}", serde_json::to_string(self)?)?;
        if let Some(r) = report {
            writeln!(out, "# {}", serde_json::to_string(r)?)?;
        }
        for w in &self.words {
            writeln!(out, "{w}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Codebook> {
        let mut header: Option<Codebook> = None;
        let mut words = Vec::new();
        for line in input.lines() {
            let line = line?;
            if let Some(json) = line.strip_prefix("# ") {
                if header.is_none() {
                    header = Some(serde_json::from_str(json)?);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let book = header
                .as_ref()
                .ok_or_else(|| Error::Parse("codebook header missing".into()))?;
            words.push(Word::parse(&line, book.spec.alphabet())?);
        }
        let mut book = header.ok_or_else(|| Error::Parse("codebook header missing".into()))?;
        book.words = words;
        Ok(book)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exhaustive_ball(n: usize, t: usize, symbols: u32) -> u64 {
        // count words of {0..N-1}^n within t mismatches of 0^n
        (0..(symbols as u64).pow(n as u32))
            .filter(|&i| digits(i, symbols, n).iter().filter(|&&s| s != 0).count() <= t)
            .count() as u64
    }

    #[test]
    fn ball_volume_cases() {
        assert_eq!(ball_volume(7, 0, 3), BigUint::one());
        assert_eq!(ball_volume(9, 9, 2), BigUint::one() << 9);
        assert_eq!(
            ball_volume(4, 1, 2),
            BigUint::from(exhaustive_ball(4, 1, 2))
        );
        assert_eq!(ball_volume(4, 1, 2), BigUint::from(5u32));
        for (n, t, s) in [(5, 2, 3), (6, 3, 2), (4, 4, 4)] {
            assert_eq!(
                ball_volume(n, t, s as u64),
                BigUint::from(exhaustive_ball(n, t, s))
            );
        }
        assert_eq!(ball_volume(16, 3, 2), BigUint::from(697u32));
    }

    #[test]
    fn ball_volume_increases() {
        for n in 1..30 {
            for t in 0..n {
                assert!(ball_volume(n, t, 3) < ball_volume(n, t + 1, 3));
            }
        }
    }

    #[test]
    fn rate_function_cases() {
        assert_eq!(rate_function(0.0, 2.0).unwrap(), 0.0);
        assert!(rate_function(1e-12, 2.0).unwrap() < 1e-9);
        assert!((rate_function(0.5, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(rate_function(1.0, 2.0).is_err());
        assert!(rate_function(-0.1, 2.0).is_err());
        for symbols in [2.0f64, 3.0, 5.0, 1024.0] {
            let top = (symbols - 1.0) / symbols;
            let mut prev = 0.0;
            for i in 1..1000 {
                let x = top * i as f64 / 1000.0;
                let f = rate_function(x, symbols).unwrap();
                assert!(f < symbols.log2());
                assert!(f > prev);
                prev = f;
            }
        }
    }

    #[test]
    fn rates_for_binary_quarter() {
        let r = rates(2.0, 0.25).unwrap();
        // f(1/4) = 2 - (3/4) log2 3
        let f = 2.0 - 0.75 * 3f64.log2();
        assert!((r.f_alpha - f).abs() < 1e-12);
        assert_eq!(r.delta, 0.125);
        assert!((1.0 + r.delta) * r.f_alpha + GUARD < 1.0);
        assert!((r.lambda - (r.g / 2.0).exp2()).abs() < 1e-15);
        assert!(r.lambda > 1.0 && r.lambda < 2f64.sqrt());
        for alpha in [1e-9, 1e-6, 1e-3] {
            let r = rates(2.0, alpha).unwrap();
            assert!(r.lambda < 2f64.sqrt());
        }
    }

    #[test]
    fn growth_report_threshold() {
        let spec = CodebookSpec::new(2, 16, Frac::new(1, 4), Frac::new(1, 2)).unwrap();
        let r = growth_params(&spec, 1200).unwrap();
        assert!(r.lambda > 1.0);
        assert!(r.m > 1 && r.m < 1200);
        // independent recheck at M and M+1 with exact volumes
        for n in [r.m, r.m + 1, r.m + 50] {
            let v = ball_volume(n, ball_radius(n, spec.alpha), 2);
            let cap = n as f64 * (1.0 + r.delta) * r.f_alpha;
            assert!((v.bits() as f64 - 1.0) < cap);
        }
    }

    #[test]
    fn separation_thresholds() {
        // alpha n integral: d_H > 1/4 at n = 16 needs 5 mismatches; the open
        // ball d_H < 1/4 holds at most 3
        assert_eq!(separation_mismatches(16, Frac::new(1, 4)), 5);
        assert_eq!(ball_radius(16, Frac::new(1, 4)), 3);
        assert_eq!(separation_mismatches(10, Frac::new(1, 3)), 4);
        assert_eq!(ball_radius(10, Frac::new(1, 3)), 3);
    }

    #[test]
    fn balanced_count_cases() {
        assert_eq!(balanced_count(4, 2, Frac::new(3, 5)), BigUint::from(14u32));
        for n in 1..10 {
            for eps in [Frac::new(1, 10), Frac::new(9, 10)] {
                assert_eq!(balanced_count(n, 1, eps), BigUint::one());
            }
        }
        // exhaustive oracle for N = 3
        for n in 1..8 {
            let eps = Frac::new(1, 2);
            let brute = (0..3u64.pow(n as u32))
                .filter(|&i| {
                    let w = digits(i, 3, n);
                    (0..3).all(|a| {
                        let c = w.iter().filter(|&&s| s == a).count() as f64;
                        c > 0.5 * n as f64 / 3.0 && c < 1.5 * n as f64 / 3.0
                    })
                })
                .count();
            assert_eq!(balanced_count(n, 3, eps), BigUint::from(brute));
        }
    }

    #[test]
    fn balanced_count_eventually_large() {
        let eps = Frac::new(1, 2);
        for n in 13..40 {
            let lhs = balanced_count(n, 3, eps) * 2u32;
            assert!(lhs > BigUint::from(3u32).pow(n as u32), "n = {n}");
        }
    }

    #[test]
    fn balanced_thresholds() {
        // the bound is not monotone in n: binary eps = 3/10 fails at 15
        assert!(!balanced_exceeds(15, 2, Frac::new(3, 10)));
        assert!(balanced_exceeds(14, 2, Frac::new(3, 10)));
        assert_eq!(balanced_threshold(2, Frac::new(3, 10), 24), Some(16));
        assert_eq!(balanced_threshold(2, Frac::new(1, 2), 24), Some(5));
    }

    #[test]
    fn spec_validation() {
        assert!(CodebookSpec::new(2, 8, Frac::new(1, 2), Frac::new(1, 2)).is_err());
        assert!(CodebookSpec::new(3, 8, Frac::new(2, 3), Frac::new(1, 2)).is_err());
        assert!(CodebookSpec::new(2, 8, Frac::new(1, 4), Frac::new(1, 1)).is_err());
        assert!(CodebookSpec::new(2, 0, Frac::new(1, 4), Frac::new(1, 2)).is_err());
        assert!(CodebookSpec::new(2, 8, Frac::new(1, 4), Frac::new(1, 2)).is_ok());
    }

    #[test]
    fn exhaustive_small_codebook() {
        let spec = CodebookSpec::new(2, 10, Frac::new(1, 5), Frac::new(1, 2)).unwrap();
        let book = build_codebook(&spec, 0, &BuildOptions::default()).unwrap();
        assert_eq!(book.mode, Mode::Exhaustive);
        assert!(audit::verify(&book.words, &spec).ok());
        assert!(Frac::from_integer(book.words.len() as u64) >= greedy_floor(&spec));
        // lexicographic greedy starts with the least balanced word
        // counts must lie in (2.5, 7.5), so at least three 1s
        assert_eq!(book.words[0].render(), "0000000111");
    }

    #[test]
    fn sampling_is_seeded() {
        let spec = CodebookSpec::new(2, 64, Frac::new(1, 4), Frac::new(1, 2)).unwrap();
        let opts = BuildOptions {
            max_words: Some(10),
            ..BuildOptions::default()
        };
        let a = build_codebook(&spec, 7, &opts).unwrap();
        let b = build_codebook(&spec, 7, &opts).unwrap();
        let c = build_codebook(&spec, 8, &opts).unwrap();
        assert_eq!(a.mode, Mode::Sampling);
        assert_eq!(a.words, b.words);
        assert_ne!(a.words, c.words);
        assert_eq!(a.words.len(), 10);
        assert!(audit::verify(&a.words, &spec).ok());
    }

    #[test]
    fn sampling_budget_is_flagged() {
        let spec = CodebookSpec::new(2, 40, Frac::new(1, 4), Frac::new(1, 2)).unwrap();
        let opts = BuildOptions {
            sample_budget: 100,
            max_words: Some(1000),
            ..BuildOptions::default()
        };
        let book = build_codebook(&spec, 1, &opts).unwrap();
        assert!(!book.complete);
        assert_eq!(book.candidates, 100);
    }

    #[test]
    fn text_round_trip() {
        let spec = CodebookSpec::new(3, 6, Frac::new(1, 3), Frac::new(1, 2)).unwrap();
        let book = build_codebook(&spec, 3, &BuildOptions::default()).unwrap();
        let mut buf = Vec::new();
        book.write(&mut buf, None).unwrap();
        let back = Codebook::read(buf.as_slice()).unwrap();
        assert_eq!(back, book);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn greedy_meets_floor(
            n in 4usize..13,
            alpha_num in 1u64..5,
            eps_num in 1u64..9,
        ) {
            let alpha = Frac::new(alpha_num, 10);
            let eps = Frac::new(eps_num, 10);
            let spec = CodebookSpec::new(2, n, alpha, eps).unwrap();
            let book = build_codebook(&spec, 0, &BuildOptions::default()).unwrap();
            prop_assert!(audit::verify(&book.words, &spec).ok());
            prop_assert!(Frac::from_integer(book.words.len() as u64) >= greedy_floor(&spec));
        }
    }
}
