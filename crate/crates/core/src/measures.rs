//! Empirical measures of sampled points, quiet-phase mass bounds, covering
//! numbers `K(n, eps)` by Hamming balls, and the common-point lemma.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lang::ConcatSubshift;
use crate::sequences::Sequence;
use crate::words::{frac_text, mismatches, Frac, Symbol, Word};

/// Seeded concatenation of generators drawn with `weights`, truncated to
/// `length`. The sample starts at a generator boundary.
pub fn sample_point(x: &ConcatSubshift, length: usize, seed: u64, weights: &[f64]) -> Result<Word> {
    let gens = x.generators();
    if weights.len() != gens.len() {
        return Err(Error::Precondition(format!(
            "{} weights for {} generators",
            weights.len(),
            gens.len()
        )));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 || weights.iter().any(|w| *w < 0.0) {
        return Err(Error::Precondition(format!("weights sum to {total}, not 1")));
    }
    let dist = WeightedIndex::new(weights).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Symbol> = Vec::with_capacity(length + x.block_len());
    while out.len() < length {
        out.extend_from_slice(gens[dist.sample(&mut rng)].symbols());
    }
    out.truncate(length);
    Word::new(out, x.alphabet())
}

/// Uniform weights over `k` generators.
pub fn uniform_weights(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sample_len: usize,
    pub seed: Option<u64>,
    pub source: Option<String>,
}

/// Window frequencies `count / total` of one finite sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalMeasure {
    pub n: usize,
    #[serde(serialize_with = "rendered_keys")]
    pub counts: BTreeMap<Word, u64>,
    pub total: u64,
    pub provenance: Provenance,
}

fn rendered_keys<S: Serializer>(m: &BTreeMap<Word, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(w, c)| (w.render(), c)))
}

fn rendered<S: Serializer>(ws: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(Word::render))
}

pub fn empirical_measure(x: &Word, n: usize) -> Result<EmpiricalMeasure> {
    if n == 0 || n > x.len() {
        return Err(Error::OutOfRange(format!("window length {n} outside 1..={}", x.len())));
    }
    let mut raw: FxHashMap<&[Symbol], u64> = FxHashMap::default();
    for w in x.symbols().windows(n) {
        *raw.entry(w).or_insert(0) += 1;
    }
    let mut counts = BTreeMap::new();
    for (w, c) in raw {
        counts.insert(Word::new(w.to_vec(), x.alphabet())?, c);
    }
    Ok(EmpiricalMeasure {
        n,
        counts,
        total: (x.len() - n + 1) as u64,
        provenance: Provenance {
            sample_len: x.len(),
            ..Provenance::default()
        },
    })
}

impl EmpiricalMeasure {
    pub fn with_provenance(mut self, seed: Option<u64>, source: Option<String>) -> Self {
        self.provenance.seed = seed;
        self.provenance.source = source;
        self
    }

    pub fn freq(&self, w: &Word) -> Frac {
        Frac::new(self.counts.get(w).copied().unwrap_or(0), self.total)
    }

    /// Mass of a pattern set, exact.
    pub fn mass<'a, I: IntoIterator<Item = &'a Word>>(&self, patterns: I) -> Frac {
        let set: FxHashSet<&Word> = patterns.into_iter().collect();
        let hits: u64 = set.iter().filter_map(|w| self.counts.get(*w)).sum();
        Frac::new(hits, self.total)
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.counts.keys()
    }

    /// CSV rows `word,numerator,denominator` with reduced fractions.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["word", "numerator", "denominator"])?;
        for (word, &c) in &self.counts {
            let f = Frac::new(c, self.total);
            w.write_record([word.render(), f.numer().to_string(), f.denom().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuietCertificate {
    pub p: usize,
    pub n: usize,
    pub m: usize,
    pub patterns: usize,
    #[serde(with = "frac_text")]
    pub mass: Frac,
    /// `(P - 1) / (N M)`.
    #[serde(with = "frac_text")]
    pub defect: Frac,
    /// Boundary term `(P-1)(P-2) / (N M (L - P + 1))` of an aligned sample.
    #[serde(with = "frac_text")]
    pub slack: Frac,
    pub holds: bool,
}

impl QuietCertificate {
    /// `mass >= 1 - defect - tolerance`.
    pub fn holds_within(&self, tolerance: Frac) -> bool {
        self.mass + self.defect + tolerance >= Frac::from_integer(1)
    }
}

/// Checks `m(W_P) >= 1 - (P-1)/(NM) - slack` where `W_P` collects the
/// length-`P` subwords of the generators `v_i` (each of length `N M`).
pub fn quiet_bound_check(
    m: &EmpiricalMeasure,
    generators: &[Word],
    p: usize,
    n: usize,
    reps: usize,
) -> Result<QuietCertificate> {
    let nm = n
        .checked_mul(reps)
        .ok_or_else(|| Error::OutOfRange("N M overflows".into()))?;
    if p == 0 || p >= nm {
        return Err(Error::Precondition(format!("P = {p} outside [1, NM) with NM = {nm}")));
    }
    if m.n != p {
        return Err(Error::LengthMismatch { left: m.n, right: p });
    }
    if let Some(g) = generators.iter().find(|g| g.len() != nm) {
        return Err(Error::LengthMismatch { left: nm, right: g.len() });
    }
    let mut pats: FxHashSet<&[Symbol]> = FxHashSet::default();
    for g in generators {
        pats.extend(g.symbols().windows(p));
    }
    let hits: u64 = m
        .counts
        .iter()
        .filter(|(w, _)| pats.contains(w.symbols()))
        .map(|(_, c)| c)
        .sum();
    let mass = Frac::new(hits, m.total);
    let defect = Frac::new((p - 1) as u64, nm as u64);
    let windows = m.total;
    let slack = Frac::new(((p - 1) * p.saturating_sub(2)) as u64, nm as u64 * windows);
    Ok(QuietCertificate {
        p,
        n,
        m: reps,
        patterns: pats.len(),
        mass,
        defect,
        slack,
        holds: mass + defect + slack >= Frac::from_integer(1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMethod {
    Exact,
    Greedy,
}

/// Universe size above which exact covering is refused.
pub const EXACT_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    #[serde(serialize_with = "rendered")]
    pub centers: Vec<Word>,
    #[serde(with = "frac_text")]
    pub covered_mass: Frac,
    #[serde(with = "frac_text")]
    pub epsilon: Frac,
    pub method: CoverMethod,
    pub universe: usize,
}

impl CoverResult {
    pub fn k(&self) -> usize {
        self.centers.len()
    }
}

struct Balls {
    /// Support atoms covered by each candidate center, as atom indices.
    cover: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

fn balls(m: &EmpiricalMeasure, eps: Frac, universe: &[Word]) -> Result<Balls> {
    let atoms: Vec<(&Word, u64)> = m.counts.iter().map(|(w, &c)| (w, c)).collect();
    let uni: FxHashSet<&Word> = universe.iter().collect();
    if let Some((w, _)) = atoms.iter().find(|(w, _)| !uni.contains(*w)) {
        return Err(Error::Precondition(format!(
            "universe misses support word {}",
            w.render()
        )));
    }
    let (p, q) = (*eps.numer() as u128, *eps.denom() as u128);
    let cover = universe
        .par_iter()
        .map(|u| {
            let mut hit = Vec::new();
            for (i, (v, _)) in atoms.iter().enumerate() {
                // d_H < eps  <=>  d q < p n
                let d = mismatches(u, v)? as u128;
                if d * q < p * u.len() as u128 {
                    hit.push(i);
                }
            }
            Ok(hit)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Balls {
        cover,
        weights: atoms.iter().map(|(_, c)| *c).collect(),
    })
}

/// `covered / total > 1 - eps`.
fn enough(covered: u64, total: u64, eps: Frac) -> bool {
    let (p, q) = (*eps.numer() as u128, *eps.denom() as u128);
    covered as u128 * q > total as u128 * (q - p)
}

/// Least number of strict `eps`-balls centered in `universe` whose union
/// carries more than `1 - eps` of the mass.
pub fn covering_number(
    m: &EmpiricalMeasure,
    eps: Frac,
    universe: &[Word],
    method: CoverMethod,
) -> Result<CoverResult> {
    if eps <= Frac::from_integer(0) || eps >= Frac::from_integer(1) {
        return Err(Error::OutOfRange(format!("eps = {eps} outside (0, 1)")));
    }
    let mut universe: Vec<Word> = universe.to_vec();
    universe.sort();
    universe.dedup();
    if let Some(w) = universe.iter().find(|w| w.len() != m.n) {
        return Err(Error::LengthMismatch { left: m.n, right: w.len() });
    }
    if method == CoverMethod::Exact && universe.len() > EXACT_LIMIT {
        return Err(Error::budget(
            format!("exact covering over {} words; use greedy", universe.len()),
            universe.len(),
            EXACT_LIMIT as u64,
        ));
    }
    let b = balls(m, eps, &universe)?;
    let chosen = match method {
        CoverMethod::Greedy => greedy(&b, m.total, eps),
        CoverMethod::Exact => exact(&b, m.total, eps),
    };
    let mut covered = vec![false; b.weights.len()];
    for &c in &chosen {
        for &i in &b.cover[c] {
            covered[i] = true;
        }
    }
    let mass: u64 = covered
        .iter()
        .zip(&b.weights)
        .filter(|(c, _)| **c)
        .map(|(_, w)| w)
        .sum();
    Ok(CoverResult {
        centers: chosen.iter().map(|&i| universe[i].clone()).collect(),
        covered_mass: Frac::new(mass, m.total),
        epsilon: eps,
        method,
        universe: universe.len(),
    })
}

fn greedy(b: &Balls, total: u64, eps: Frac) -> Vec<usize> {
    let mut covered = vec![false; b.weights.len()];
    let mut mass = 0u64;
    let mut chosen = Vec::new();
    while !enough(mass, total, eps) {
        let gain = |c: usize| -> u64 {
            b.cover[c]
                .iter()
                .filter(|&&i| !covered[i])
                .map(|&i| b.weights[i])
                .sum()
        };
        // universe is sorted, so the first maximum is the least center
        let (best, g) = (0..b.cover.len())
            .map(|c| (c, gain(c)))
            .fold((usize::MAX, 0), |acc, (c, g)| if g > acc.1 { (c, g) } else { acc });
        if g == 0 {
            break;
        }
        for &i in &b.cover[best] {
            covered[i] = true;
        }
        mass += g;
        chosen.push(best);
    }
    chosen
}

fn exact(b: &Balls, total: u64, eps: Frac) -> Vec<usize> {
    let masses: Vec<u64> = b
        .cover
        .iter()
        .map(|c| c.iter().map(|&i| b.weights[i]).sum())
        .collect();
    for k in 1..=b.cover.len() {
        let mut picked = Vec::with_capacity(k);
        let mut covered = vec![0u32; b.weights.len()];
        if search(b, &masses, total, eps, k, 0, 0, &mut picked, &mut covered) {
            return picked;
        }
    }
    Vec::new()
}

#[allow(clippy::too_many_arguments)]
fn search(
    b: &Balls,
    masses: &[u64],
    total: u64,
    eps: Frac,
    k: usize,
    from: usize,
    mass: u64,
    picked: &mut Vec<usize>,
    covered: &mut [u32],
) -> bool {
    if enough(mass, total, eps) {
        return true;
    }
    let left = k - picked.len();
    if left == 0 {
        return false;
    }
    let mut rest: Vec<u64> = masses[from..].to_vec();
    rest.sort_unstable_by(|a, b| b.cmp(a));
    let optimistic: u64 = rest.iter().take(left).sum();
    if !enough(mass + optimistic, total, eps) {
        return false;
    }
    for c in from..b.cover.len() {
        let mut gain = 0;
        for &i in &b.cover[c] {
            if covered[i] == 0 {
                gain += b.weights[i];
            }
            covered[i] += 1;
        }
        picked.push(c);
        if gain > 0 && search(b, masses, total, eps, k, c + 1, mass + gain, picked, covered) {
            return true;
        }
        picked.pop();
        for &i in &b.cover[c] {
            covered[i] -= 1;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonPoint {
    /// 1-based indices of `k` sets containing `s`.
    pub indices: Vec<usize>,
    pub s: usize,
    pub multiplicity: usize,
}

/// Given `2k - 1` subsets of `{1..n}` of size at least `n/2`, finds a point
/// lying in `k` of them.
pub fn find_common_point(sets: &[Vec<usize>], n: usize) -> Result<CommonPoint> {
    if sets.len().is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "expected 2k - 1 sets, got {}",
            sets.len()
        )));
    }
    let k = sets.len().div_ceil(2);
    let mut mult = vec![0usize; n + 1];
    let mut total = 0usize;
    for (i, a) in sets.iter().enumerate() {
        let mut a = a.clone();
        a.sort_unstable();
        a.dedup();
        if let Some(&x) = a.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::OutOfRange(format!("set {} contains {x} outside 1..={n}", i + 1)));
        }
        if 2 * a.len() < n {
            return Err(Error::Precondition(format!(
                "lemma hypothesis |A_i| >= n/2 fails at i = {}",
                i + 1
            )));
        }
        total += a.len();
        for x in a {
            mult[x] += 1;
        }
    }
    let (s, best) = (1..=n).fold((0, 0), |acc, s| if mult[s] > acc.1 { (s, mult[s]) } else { acc });
    if best < k {
        // the lemma's count: max multiplicity < k forces sum |A_i| <= n (k - 1)
        let contradiction = total > n * (k - 1);
        return Err(Error::Precondition(format!(
            "no point of multiplicity {k}; counting identity {}",
            if contradiction { "violated" } else { "consistent" }
        )));
    }
    let indices = sets
        .iter()
        .enumerate()
        .filter(|(_, a)| a.contains(&s))
        .map(|(i, _)| i + 1)
        .take(k)
        .collect();
    Ok(CommonPoint {
        indices,
        s,
        multiplicity: best,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub n: u64,
    #[serde(with = "frac_text")]
    pub eps: Frac,
    pub k: u64,
    pub a_n: String,
    pub b_n: String,
    pub k_over_a: String,
    pub k_over_b: String,
    pub k_over_a_approx: f64,
    pub k_over_b_approx: f64,
}

fn ratio(k: u64, d: &BigUint) -> (String, f64) {
    if d == &BigUint::from(0u8) {
        return ("inf".into(), f64::INFINITY);
    }
    let r = BigRational::new(BigUint::from(k).into(), d.clone().into());
    let approx = r.to_f64().unwrap_or(f64::NAN);
    (r.to_string(), approx)
}

/// Tabulates `K / a_n` and `K / b_n` at each checkpoint.
pub fn slow_entropy_report(ks: &[(u64, Frac, u64)], a: &Sequence, b: &Sequence) -> Result<Vec<EntropyRow>> {
    ks.iter()
        .map(|&(n, eps, k)| {
            let (an, bn) = (a.eval(n)?, b.eval(n)?);
            let (ra, fa) = ratio(k, &an);
            let (rb, fb) = ratio(k, &bn);
            Ok(EntropyRow {
                n,
                eps,
                k,
                a_n: an.to_string(),
                b_n: bn.to_string(),
                k_over_a: ra,
                k_over_b: rb,
                k_over_a_approx: fa,
                k_over_b_approx: fb,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{occurrence_frequency, Alphabet};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s, Alphabet::BINARY).unwrap()
    }

    #[test]
    fn single_generator_is_periodic() {
        let x = ConcatSubshift::new(vec![w("011")]).unwrap();
        let p = sample_point(&x, 10, 5, &[1.0]).unwrap();
        assert_eq!(p, w("0110110110"));
    }

    #[test]
    fn sampling_is_deterministic() {
        let x = ConcatSubshift::new(vec![w("01"), w("10")]).unwrap();
        let u = uniform_weights(2);
        assert_eq!(sample_point(&x, 500, 9, &u).unwrap(), sample_point(&x, 500, 9, &u).unwrap());
        assert_ne!(sample_point(&x, 500, 9, &u).unwrap(), sample_point(&x, 500, 10, &u).unwrap());
        assert!(sample_point(&x, 5, 1, &[0.5, 0.6]).is_err());
    }

    #[test]
    fn letter_frequencies_balance() {
        let x = ConcatSubshift::new(vec![w("01"), w("10")]).unwrap();
        let p = sample_point(&x, 1_000_000, 3, &uniform_weights(2)).unwrap();
        let m = empirical_measure(&p, 1).unwrap();
        let f = m.freq(&w("0")).to_f64().unwrap();
        assert!((f - 0.5).abs() < 1e-2);
    }

    #[test]
    fn measure_basics() {
        let m = empirical_measure(&w("0000000"), 3).unwrap();
        assert_eq!(m.counts.len(), 1);
        assert_eq!(m.freq(&w("000")), Frac::from_integer(1));
        let x = w("0110100110010110");
        let m = empirical_measure(&x, 3).unwrap();
        assert_eq!(m.counts.values().sum::<u64>(), m.total);
        let pats = [w("011"), w("101")];
        assert_eq!(m.mass(&pats), occurrence_frequency(&pats, &x).unwrap());
    }

    #[test]
    fn quiet_formula() {
        let g = ConcatSubshift::new(vec![w("01101"), w("11000")]).unwrap();
        let gens: Vec<Word> = g.generators().iter().map(|u| u.repeat(10)).collect();
        let x = ConcatSubshift::new(gens.clone()).unwrap();
        let p = sample_point(&x, 5000, 1, &uniform_weights(2)).unwrap();
        let cert = quiet_bound_check(&empirical_measure(&p, 6).unwrap(), &gens, 6, 5, 10).unwrap();
        assert_eq!(Frac::from_integer(1) - cert.defect, Frac::new(9, 10));
        assert!(cert.holds);
        let one = quiet_bound_check(&empirical_measure(&p, 1).unwrap(), &gens, 1, 5, 10).unwrap();
        assert_eq!(one.mass, Frac::from_integer(1));
        assert!(quiet_bound_check(&empirical_measure(&p, 50).unwrap(), &gens, 50, 5, 10).is_err());
    }

    #[test]
    fn quiet_slack_shrinks() {
        let gens = vec![w("0110").repeat(8), w("1100").repeat(8)];
        let x = ConcatSubshift::new(gens.clone()).unwrap();
        let slacks: Vec<Frac> = [1_000, 10_000, 100_000]
            .iter()
            .map(|&len| {
                let p = sample_point(&x, len, 2, &uniform_weights(2)).unwrap();
                quiet_bound_check(&empirical_measure(&p, 9).unwrap(), &gens, 9, 4, 8)
                    .unwrap()
                    .slack
            })
            .collect();
        assert!(slacks.windows(2).all(|s| s[0] > s[1]));
    }

    #[test]
    fn two_atoms_need_two_balls() {
        let m = empirical_measure(&w("000111"), 3).unwrap();
        // windows 000, 001, 011, 111
        let uni: Vec<Word> = m.support().cloned().collect();
        let r = covering_number(&m, Frac::new(1, 4), &uni, CoverMethod::Exact).unwrap();
        assert_eq!(r.k(), 4); // radius 0 at n = 3, all four atoms needed
        let mut uniform = m.clone();
        uniform.counts = [(w("000"), 1), (w("111"), 1)].into_iter().collect();
        uniform.total = 2;
        let uni = vec![w("000"), w("111")];
        let r = covering_number(&uniform, Frac::new(3, 10), &uni, CoverMethod::Exact).unwrap();
        assert_eq!(r.k(), 2);
        let single = empirical_measure(&w("00000"), 5).unwrap();
        for eps in [Frac::new(1, 100), Frac::new(99, 100)] {
            let r = covering_number(&single, eps, &[w("00000")], CoverMethod::Greedy).unwrap();
            assert_eq!(r.k(), 1);
        }
    }

    #[test]
    fn exact_refuses_large_universe() {
        let m = empirical_measure(&w("00000"), 5).unwrap();
        let uni: Vec<Word> = (0..32u32)
            .map(|i| Word::new((0..5).map(|b| (i >> b) & 1).collect(), Alphabet::BINARY).unwrap())
            .collect();
        assert!(matches!(
            covering_number(&m, Frac::new(1, 2), &uni, CoverMethod::Exact),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn common_point_examples() {
        let r = find_common_point(&[vec![1], vec![1], vec![2]], 2).unwrap();
        assert_eq!((r.indices, r.s), (vec![1, 2], 1));
        let all: Vec<usize> = (1..=6).collect();
        let r = find_common_point(&vec![all; 5], 6).unwrap();
        assert_eq!(r.multiplicity, 5);
        let err = find_common_point(&[vec![1, 2], vec![3], vec![1, 2, 3]], 4).unwrap_err();
        assert!(err.to_string().contains("fails at i = 2"), "{err}");
    }

    #[test]
    fn entropy_report() {
        let a = Sequence::log(Frac::from_integer(1), 1);
        let b = Sequence::polynomial(Frac::from_integer(1), 2);
        assert!(slow_entropy_report(&[], &a, &b).unwrap().is_empty());
        let rows = slow_entropy_report(&[(4, Frac::new(1, 8), 6)], &a, &b).unwrap();
        assert_eq!((rows[0].a_n.as_str(), rows[0].b_n.as_str()), ("3", "16"));
        assert_eq!((rows[0].k_over_a.as_str(), rows[0].k_over_b.as_str()), ("2", "3/8"));
    }

    fn measure_strategy() -> impl Strategy<Value = (EmpiricalMeasure, Vec<Word>)> {
        (3usize..=4, prop::collection::vec(0u32..16, 2..12), prop::collection::vec(1u64..5, 12))
            .prop_map(|(n, codes, weights)| {
                let mut uni: Vec<Word> = codes
                    .iter()
                    .map(|c| Word::new((0..n).map(|b| (c >> b) & 1).collect(), Alphabet::BINARY).unwrap())
                    .collect();
                uni.sort();
                uni.dedup();
                let counts: BTreeMap<Word, u64> =
                    uni.iter().cloned().zip(weights.iter().copied()).collect();
                let total = counts.values().sum();
                let m = EmpiricalMeasure {
                    n,
                    counts,
                    total,
                    provenance: Provenance::default(),
                };
                (m, uni)
            })
    }

    proptest! {
        #[test]
        fn greedy_dominates_exact((m, uni) in measure_strategy()) {
            for eps in [Frac::new(1, 10), Frac::new(1, 5), Frac::new(3, 10)] {
                let e = covering_number(&m, eps, &uni, CoverMethod::Exact).unwrap();
                let g = covering_number(&m, eps, &uni, CoverMethod::Greedy).unwrap();
                prop_assert!(e.k() <= g.k());
                prop_assert!(enough(*e.covered_mass.numer() * (m.total / e.covered_mass.denom()), m.total, eps));
            }
        }

        #[test]
        fn exact_is_monotone_in_eps((m, uni) in measure_strategy()) {
            let ks: Vec<usize> = [Frac::new(1, 10), Frac::new(1, 5), Frac::new(3, 10)]
                .iter()
                .map(|&e| covering_number(&m, e, &uni, CoverMethod::Exact).unwrap().k())
                .collect();
            prop_assert!(ks[0] >= ks[1] && ks[1] >= ks[2]);
        }

        #[test]
        fn common_point_exists(n in 1usize..=64, k in 1usize..=8, seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let universe: Vec<usize> = (1..=n).collect();
            let sets: Vec<Vec<usize>> = (0..2 * k - 1)
                .map(|_| {
                    let size = n.div_ceil(2) + (seed as usize % (n / 2 + 1));
                    universe.choose_multiple(&mut rng, size.min(n)).copied().collect()
                })
                .collect();
            let r = find_common_point(&sets, n).unwrap();
            prop_assert_eq!(r.indices.len(), k);
            for i in &r.indices {
                prop_assert!(sets[i - 1].contains(&r.s));
            }
        }
    }
}
