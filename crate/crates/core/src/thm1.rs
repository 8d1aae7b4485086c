//! Inductive construction of a minimal subshift with many ergodic measures
//! and complexity below a prescribed superlinear sequence.
//!
//! Level 1 has two words `0^N 1` and `0 1^N`. Level `k+1` has `2m` words
//! (`m = 2^k`) built from the level-`k` words `w_1..w_m`:
//!
//! ```text
//! w'_{2j-1} = w_1..w_{j-1} (w_j^S w_{j+1})^N w_{j+1}..w_m
//! w'_{2j}   = w_1..w_{j-1} (w_j^S w_j)^N     w_{j+1}..w_m
//! ```
//!
//! with `w_{m+1} = w_1`. Both shapes have length `(m - 1 + N(S+1)) L`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{complexity, syndetic_gap, Budget, ConcatSubshift, Syndetic};
use crate::schedule::{ProductCertificate, Schedule};
use crate::sequences::Sequence;
use crate::words::{concat, occurrence_frequency, shares_doubled_window, Alphabet, Frac, Word};

pub const BALANCED_ZERO: [u32; 8] = [0, 1, 1, 0, 0, 1, 1, 0];
pub const BALANCED_ONE: [u32; 8] = [1, 1, 1, 0, 0, 1, 0, 0];
pub const DEFAULT_HORIZON: u64 = 100_000;
/// Families are materialized while their total symbol count stays below this.
pub const DEFAULT_SYMBOL_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFamily {
    pub level: usize,
    /// `N` used to build this level.
    pub n_param: u64,
    /// `S` used to build this level from the previous one (absent at level 1).
    pub s_param: Option<u64>,
    pub word_len: usize,
    /// `n_k = floor(|w^k| / 2)`, or `floor(N_1 / 2)` for the plain base level.
    pub n_k: usize,
    pub balanced: bool,
    /// Symbols added to reconcile unequal shapes; always zero for these formulas.
    pub padding: usize,
    #[serde(skip)]
    pub words: Vec<Word>,
}

impl LevelFamily {
    pub fn subshift(&self) -> Result<ConcatSubshift> {
        Ok(ConcatSubshift::new(self.words.clone())?.with_label(format!("X_{}", self.level)))
    }

    /// `w_i` with 1-based `i`, wrapping modulo the family size.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[(i - 1) % self.words.len()]
    }
}

fn substitute(word: &[u32]) -> Vec<u32> {
    word.iter()
        .flat_map(|&s| if s == 0 { BALANCED_ZERO } else { BALANCED_ONE })
        .collect()
}

pub fn base_level(n1: u64, balanced: bool) -> Result<LevelFamily> {
    if n1 < 2 {
        return Err(Error::Precondition(format!("N_1 = {n1} must be at least 2")));
    }
    let n = n1 as usize;
    let mut a = vec![0; n];
    a.push(1);
    let mut b = vec![1; n];
    b.insert(0, 0);
    if balanced {
        a = substitute(&a);
        b = substitute(&b);
    }
    let len = a.len();
    Ok(LevelFamily {
        level: 1,
        n_param: n1,
        s_param: None,
        word_len: len,
        n_k: if balanced { len / 2 } else { n / 2 },
        balanced,
        padding: 0,
        words: vec![
            Word::new(a, Alphabet::BINARY)?,
            Word::new(b, Alphabet::BINARY)?,
        ],
    })
}

pub fn next_level(family: &LevelFamily, n: u64, s: u64) -> Result<LevelFamily> {
    let m = family.words.len();
    let l = family.word_len;
    if (n as u128) <= (l as u128) * (m as u128) {
        return Err(Error::Precondition(format!(
            "N = {n} must exceed |w^{}| * 2^{} = {}",
            family.level,
            family.level,
            l * m
        )));
    }
    if s == 0 {
        return Err(Error::Precondition("S must be positive".into()));
    }
    let len = (m - 1 + n as usize * (s as usize + 1))
        .checked_mul(l)
        .ok_or_else(|| Error::OutOfRange("level length overflows".into()))?;
    let mut words = Vec::with_capacity(2 * m);
    for j in 1..=m {
        for tail in [family.word(j + 1), family.word(j)] {
            let mut block: Vec<&Word> = vec![family.word(j); s as usize];
            block.push(tail);
            let periodic = concat(Alphabet::BINARY, block)?.repeat(n as usize);
            let mut parts: Vec<&Word> = (1..j).map(|t| family.word(t)).collect();
            parts.push(&periodic);
            parts.extend((j + 1..=m).map(|t| family.word(t)));
            words.push(concat(Alphabet::BINARY, parts)?);
        }
    }
    if let Some(w) = words.iter().find(|w| w.len() != len) {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: len,
        });
    }
    Ok(LevelFamily {
        level: family.level + 1,
        n_param: n,
        s_param: Some(s),
        word_len: len,
        n_k: len / 2,
        balanced: family.balanced,
        padding: 0,
        words,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairScan {
    pub j: usize,
    pub i: usize,
    pub shared_window: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctCertificate {
    pub level: usize,
    pub pairs: Vec<PairScan>,
    pub holds: bool,
}

/// For every `j < i`: no length-`|w|` window shared by `w_j w_j` and `w_i w_i`.
pub fn verify_distinct_subwords(family: &LevelFamily) -> DistinctCertificate {
    let k = family.words.len();
    let index: Vec<(usize, usize)> = (0..k)
        .flat_map(|j| (j + 1..k).map(move |i| (j, i)))
        .collect();
    let pairs: Vec<PairScan> = index
        .par_iter()
        .map(|&(j, i)| PairScan {
            j: j + 1,
            i: i + 1,
            shared_window: shares_doubled_window(&family.words[j], &family.words[i])
                .unwrap_or(true),
        })
        .collect();
    DistinctCertificate {
        level: family.level,
        holds: pairs.iter().all(|p| !p.shared_window),
        pairs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentCertificate {
    pub level: usize,
    /// `(i, j)`: level-`k-1` word `j` missing from level-`k` word `i`.
    pub missing: Vec<(usize, usize)>,
    /// Gap bound for every previous-level word in `X_k`.
    pub syndetic: Vec<Syndetic>,
    pub holds: bool,
}

pub fn verify_containment(prev: &LevelFamily, family: &LevelFamily) -> Result<ContainmentCertificate> {
    let missing: Vec<(usize, usize)> = family
        .words
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, w)| {
            prev.words
                .iter()
                .enumerate()
                .filter(|(_, u)| !w.contains(u))
                .map(move |(j, _)| (i + 1, j + 1))
                .collect::<Vec<_>>()
        })
        .collect();
    let x = family.subshift()?;
    let syndetic = prev
        .words
        .iter()
        .map(|u| syndetic_gap(&x, u))
        .collect::<Result<Vec<_>>>()?;
    let bound = 2 * family.word_len;
    let holds = missing.is_empty()
        && syndetic
            .iter()
            .all(|s| matches!(s, Syndetic::Gap(g) if *g <= bound));
    Ok(ContainmentCertificate {
        level: family.level,
        missing,
        syndetic,
        holds,
    })
}

fn binom2(m: u128) -> u128 {
    m * (m - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityCertificate {
    pub level: usize,
    pub n_k: usize,
    /// Exact `p(n_k)`; absent when enumeration exceeded the budget.
    pub exact: Option<u64>,
    pub status: String,
    /// `4 n_1 - 2` at the plain base level.
    pub base_formula: Option<u64>,
    pub base_formula_holds: Option<bool>,
    /// `2^k (S+1) |w^{k-1}| + 2^k |w^{k-1}| + C(2^k, 2) n_k`.
    pub structural_bound: Option<u128>,
    pub structural_holds: Option<bool>,
    /// `(C(2^k, 2) + 1) n_k`.
    pub headline_bound: u128,
    pub headline_holds: Option<bool>,
}

pub fn complexity_certificate(
    family: &LevelFamily,
    prev: Option<&LevelFamily>,
    budget: Budget,
) -> Result<ComplexityCertificate> {
    let x = family.subshift()?;
    let (exact, status) = match complexity(&x, family.n_k, budget) {
        Ok(p) => (Some(p), "exact".to_string()),
        Err(Error::Budget { .. }) => (None, "structural bound only".to_string()),
        Err(e) => return Err(e),
    };
    let size = family.words.len() as u128;
    let n = family.n_k as u128;
    let base_formula = (family.level == 1 && !family.balanced).then(|| 4 * family.n_k as u64 - 2);
    let structural_bound = match (prev, family.s_param) {
        (Some(p), Some(s)) => {
            let l = p.word_len as u128;
            Some(size * (s as u128 + 1) * l + size * l + binom2(size) * n)
        }
        _ => None,
    };
    let headline_bound = (binom2(size) + 1) * n;
    Ok(ComplexityCertificate {
        level: family.level,
        n_k: family.n_k,
        exact,
        status,
        base_formula,
        base_formula_holds: exact.zip(base_formula).map(|(p, f)| p == f),
        structural_bound,
        structural_holds: exact
            .zip(structural_bound)
            .map(|(p, b)| p as u128 <= b),
        headline_bound,
        headline_holds: exact.map(|p| p as u128 <= headline_bound),
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    pub level: usize,
    pub n_param: u64,
    pub s_param: Option<u64>,
    pub word_len: u128,
    pub n_k: u128,
    /// Least index from which `p_n > k (C(2^k, 2) + 1) n` on the horizon.
    pub m_k: u64,
    /// `delta_{k-1}` constraining the frequency of the periodic region.
    #[serde(with = "opt_frac", default)]
    pub delta: Option<Frac>,
}

mod opt_frac {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::words::{parse_frac, Frac};

    pub fn serialize<S: Serializer>(v: &Option<Frac>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|f| format!("{}/{}", f.numer(), f.denom())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Frac>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_frac(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Params {
    pub balanced: bool,
    pub horizon: u64,
    pub schedule: Schedule,
    pub levels: Vec<LevelParams>,
    pub delta_product: ProductCertificate,
}

fn growth_factor(k: usize) -> u128 {
    k as u128 * (binom2(1u128 << k) + 1)
}

/// Least `M` with `p_n > c n` for every `n` in `[M, horizon]`, where
/// `c = k (C(2^k, 2) + 1)`. Fails if the last violation lies in the upper
/// half of the horizon.
pub fn threshold(p: &Sequence, k: usize, horizon: u64) -> Result<u64> {
    let c = BigUint::from(growth_factor(k));
    let mut last_fail = 0;
    for n in 1..=horizon {
        if p.eval(n)? <= &c * n {
            last_fail = n;
        }
    }
    if last_fail > horizon / 2 {
        return Err(Error::Horizon(format!(
            "target sequence not verifiably superlinear by horizon {horizon} \
             (p_n <= {c} n at n = {last_fail})"
        )));
    }
    Ok(last_fail + 1)
}

/// Least `S >= 1` with `b N ((S-1) L + 1) > a (m - 1 + N (S+1)) L` for
/// `delta = a/b`: the windows of `w_j w_j` fill more than a `delta` share
/// of every next-level word built around `w_j`.
pub fn min_s(n: u64, l: u128, m: u128, delta: Frac) -> u64 {
    let (a, b) = (*delta.numer() as u128, *delta.denom() as u128);
    let n = n as u128;
    let rhs = a * l * (m - 1) + a * l * n + b * n * l - b * n;
    let den = n * l * (b - a);
    (rhs / den + 1).max(1) as u64
}

pub fn frequency_holds(n: u64, s: u64, l: u128, word_len: u128, delta: Frac) -> bool {
    let (a, b) = (*delta.numer() as u128, *delta.denom() as u128);
    b * n as u128 * ((s as u128 - 1) * l + 1) > a * word_len
}

/// Smallest admissible parameters level by level.
pub fn auto_params(
    p: &Sequence,
    k_max: usize,
    schedule: Schedule,
    balanced: bool,
    horizon: u64,
) -> Result<Thm1Params> {
    if !(1..=8).contains(&k_max) {
        return Err(Error::OutOfRange(format!("k_max = {k_max} outside 1..=8")));
    }
    let mut levels = Vec::with_capacity(k_max);
    let m1 = threshold(p, 1, horizon)?;
    let unit: u128 = if balanced { 8 } else { 1 };
    let n_of = |n1: u64| {
        if balanced {
            unit * (n1 as u128 + 1) / 2
        } else {
            n1 as u128 / 2
        }
    };
    let mut n1 = 2u64;
    while n_of(n1) <= m1 as u128 {
        n1 += 1;
    }
    levels.push(LevelParams {
        level: 1,
        n_param: n1,
        s_param: None,
        word_len: unit * (n1 as u128 + 1),
        n_k: n_of(n1),
        m_k: m1,
        delta: None,
    });
    for k in 2..=k_max {
        let prev = levels.last().expect("level 1 present");
        let m = 1u128 << (k - 1);
        let l = prev.word_len;
        let mk = threshold(p, k, horizon)?;
        let delta = schedule.term(k as u32 - 1);
        let lo = (l * m + 1).max(2 * prev.n_param as u128 + 1);
        let mut n = u64::try_from(lo).map_err(|_| Error::OutOfRange("N overflows".into()))?;
        let (s, len) = loop {
            let s = min_s(n, l, m, delta);
            let len = (m - 1 + n as u128 * (s as u128 + 1))
                .checked_mul(l)
                .ok_or_else(|| Error::OutOfRange("level length overflows".into()))?;
            if len / 2 > mk as u128 {
                break (s, len);
            }
            n += 1;
        };
        levels.push(LevelParams {
            level: k,
            n_param: n,
            s_param: Some(s),
            word_len: len,
            n_k: len / 2,
            m_k: mk,
            delta: Some(delta),
        });
    }
    Ok(Thm1Params {
        balanced,
        horizon,
        schedule,
        levels,
        delta_product: schedule.certify(8, Frac::new(9, 10)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub level: usize,
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl Inequality {
    fn new(level: usize, name: &str, lhs: impl ToString, rhs: impl ToString, holds: bool) -> Self {
        Inequality {
            level,
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
        }
    }
}

/// Re-checks every recorded inequality with exact arithmetic.
pub fn verify_params(params: &Thm1Params, p: &Sequence) -> Result<Vec<Inequality>> {
    let mut out = Vec::new();
    out.push(Inequality::new(
        0,
        "prod delta > 9/10",
        &params.delta_product.lower_bound,
        &params.delta_product.target,
        params.delta_product.holds,
    ));
    for (idx, lv) in params.levels.iter().enumerate() {
        let k = lv.level;
        let c = growth_factor(k);
        out.push(Inequality::new(k, "n_k > M_k", lv.n_k, lv.m_k, lv.n_k > lv.m_k as u128));
        let at_m = p.eval(lv.m_k)?;
        out.push(Inequality::new(
            k,
            "p_{M_k} > k (C(2^k,2)+1) M_k",
            &at_m,
            c * lv.m_k as u128,
            at_m > BigUint::from(c * lv.m_k as u128),
        ));
        if lv.m_k > 1 {
            let below = p.eval(lv.m_k - 1)?;
            out.push(Inequality::new(
                k,
                "M_k minimal: p_{M_k - 1} <= k (C(2^k,2)+1) (M_k - 1)",
                &below,
                c * (lv.m_k as u128 - 1),
                below <= BigUint::from(c * (lv.m_k as u128 - 1)),
            ));
        }
        if let Ok(nk) = u64::try_from(lv.n_k) {
            let at_n = p.eval(nk)?;
            let bound = BigUint::from((binom2(1u128 << k) + 1) * lv.n_k) * k as u64;
            out.push(Inequality::new(
                k,
                "k (C(2^k,2)+1) n_k < p_{n_k}",
                &bound,
                &at_n,
                bound < at_n,
            ));
        }
        if idx == 0 {
            continue;
        }
        let prev = &params.levels[idx - 1];
        let m = 1u128 << (k - 1);
        let s = lv.s_param.unwrap_or(0);
        let n = lv.n_param as u128;
        out.push(Inequality::new(
            k,
            "N_k > |w^{k-1}| 2^{k-1}",
            n,
            prev.word_len * m,
            n > prev.word_len * m,
        ));
        out.push(Inequality::new(
            k,
            "N_k > 2 N_{k-1}",
            n,
            2 * prev.n_param as u128,
            n > 2 * prev.n_param as u128,
        ));
        let expected_len = (m - 1 + n * (s as u128 + 1)) * prev.word_len;
        out.push(Inequality::new(
            k,
            "|w^k| = (2^{k-1} - 1 + N (S+1)) |w^{k-1}|",
            lv.word_len,
            expected_len,
            lv.word_len == expected_len,
        ));
        if let Some(delta) = lv.delta {
            let share = BigUint::from(n) * ((s as u128).saturating_sub(1) * prev.word_len + 1);
            out.push(Inequality::new(
                k,
                "N ((S-1) |w^{k-1}| + 1) / |w^k| > delta_{k-1}",
                format!("{share}/{}", lv.word_len),
                format!("{}/{}", delta.numer(), delta.denom()),
                s >= 1 && frequency_holds(lv.n_param, s, prev.word_len, lv.word_len, delta),
            ));
        }
    }
    Ok(out)
}

/// Materializes levels while the running symbol total fits in `budget`.
pub fn build_families(params: &Thm1Params, budget: u128) -> Result<Vec<LevelFamily>> {
    let first = params
        .levels
        .first()
        .ok_or_else(|| Error::Precondition("no levels".into()))?;
    let mut families = vec![base_level(first.n_param, params.balanced)?];
    for lv in &params.levels[1..] {
        let size = lv.word_len * (1u128 << lv.level);
        if size > budget {
            break;
        }
        let prev = families.last().expect("nonempty");
        families.push(next_level(prev, lv.n_param, lv.s_param.unwrap_or(1))?);
    }
    Ok(families)
}

/// Active word index after following `bits`, starting from `w_1^1`.
pub fn branch_index(bits: &[u8]) -> usize {
    bits.iter()
        .fold(1usize, |i, &a| 2 * i - usize::from(a & 1))
}

/// First `length` symbols of `(w_{i}^{T+1})^∞` after `T = bits.len()` branch
/// choices; type 0 periodizes `w_i`, type 1 periodizes `w_i^S w_{i+1}`.
pub fn branch_point(families: &[LevelFamily], bits: &[u8], length: usize) -> Result<Word> {
    let depth = bits.len() + 1;
    if depth > families.len() {
        return Err(Error::OutOfRange(format!(
            "{} branch choices need level {depth}, only {} materialized",
            bits.len(),
            families.len()
        )));
    }
    let w = families[depth - 1].word(branch_index(bits));
    let reps = length.div_ceil(w.len());
    Ok(w.repeat(reps).slice(0, length))
}

/// Rotations of `unit`: the length-`|unit|` windows of `unit unit`.
fn rotations(unit: &Word) -> Vec<Word> {
    let doubled = unit.repeat(2);
    let mut out: Vec<Word> = (0..unit.len()).map(|r| doubled.slice(r, unit.len())).collect();
    out.sort_by(|a, b| a.symbols().cmp(b.symbols()));
    out.dedup();
    out
}

/// Windows marking a type at stage `t` for active word `w_i^t`: rotations
/// of `w_i^{S+1}` (type 0) or of `w_i^S w_{i+1}` (type 1).
pub fn type_patterns(families: &[LevelFamily], t: usize, i: usize, kind: u8) -> Result<Vec<Word>> {
    let next = families
        .get(t)
        .ok_or_else(|| Error::OutOfRange(format!("level {} not materialized", t + 1)))?;
    let fam = &families[t - 1];
    let s = next.s_param.unwrap_or(1) as usize;
    let mut parts = vec![fam.word(i); s];
    parts.push(if kind == 0 { fam.word(i) } else { fam.word(i + 1) });
    Ok(rotations(&concat(Alphabet::BINARY, parts)?))
}

/// Rotations of `w_i^t`: the length-`|w^t|` windows of `w_i w_i`.
pub fn own_patterns(family: &LevelFamily, i: usize) -> Vec<Word> {
    rotations(family.word(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCertificate {
    pub length: usize,
    /// Frequency of the stage-1 type-0 windows along branches `a_1 = 0, 1`.
    #[serde(with = "crate::words::frac_text")]
    pub type0_on_0: Frac,
    #[serde(with = "crate::words::frac_text")]
    pub type0_on_1: Frac,
    /// Frequency of rotations of `w_1^1` along each branch.
    #[serde(with = "crate::words::frac_text")]
    pub own_on_0: Frac,
    #[serde(with = "crate::words::frac_text")]
    pub own_on_1: Frac,
    #[serde(with = "crate::words::frac_text")]
    pub own_threshold: Frac,
    pub separated: bool,
    pub own_holds: bool,
}

/// Compares the two branches that differ only in `a_1`.
pub fn branch_separation(families: &[LevelFamily], length: usize) -> Result<BranchCertificate> {
    if families.len() < 2 {
        return Err(Error::OutOfRange("branch separation needs two levels".into()));
    }
    let x0 = branch_point(families, &[0], length)?;
    let x1 = branch_point(families, &[1], length)?;
    let marks = type_patterns(families, 1, 1, 0)?;
    let own = own_patterns(&families[0], 1);
    let type0_on_0 = occurrence_frequency(&marks, &x0)?;
    let type0_on_1 = occurrence_frequency(&marks, &x1)?;
    let own_on_0 = occurrence_frequency(&own, &x0)?;
    let own_on_1 = occurrence_frequency(&own, &x1)?;
    let delta = match families[1].s_param {
        Some(_) => crate::schedule::DELTA.term(1),
        None => Frac::from_integer(0),
    };
    let slack = Frac::new(families[0].word_len as u64, length as u64);
    let own_threshold = if delta > slack { delta - slack } else { Frac::from_integer(0) };
    let gap = if type0_on_0 > type0_on_1 {
        type0_on_0 - type0_on_1
    } else {
        type0_on_1 - type0_on_0
    };
    Ok(BranchCertificate {
        length,
        type0_on_0,
        type0_on_1,
        own_on_0,
        own_on_1,
        own_threshold,
        separated: gap > Frac::new(1, 2),
        own_holds: own_on_0 >= own_threshold && own_on_1 >= own_threshold,
    })
}
