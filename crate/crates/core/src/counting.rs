//! Exact enumeration of gauge-respecting words, the recurrence lower bound
//! on their count, the sufficiency condition for positive growth, and
//! backtracking construction of witnesses.
//!
//! A word is *good* for a gauge `phi` when no window of length `l + 1`
//! recurs at a shift `s <= phi(l)`. Goodness is prefix-closed: extending a
//! word can only add constraints, each of which involves the last symbol.
//! Both the counter and the constructor exploit this by checking, at length
//! `n`, exactly the pairs `(i, s)` with `i + s + ell(s) = n`.

use num::bigint::BigInt;
use num::{BigUint, One, Signed, Zero};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::profile::{EllScan, Profile};
use crate::word::{Alphabet, FiniteWord};
use crate::{Natural, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountingError {
    #[error("growth constant c = {c} must satisfy 1 < c < {k}")]
    COutOfRange { c: Rational, k: u32 },
    #[error("node budget of {budget} exhausted after visiting {visited} nodes")]
    BudgetExceeded { visited: u64, budget: u64 },
    #[error("backtracking exhausted the search space at depth {reached}")]
    Exhausted { reached: usize },
    #[error("growth certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("no threshold up to {cap} makes the condition hold")]
    ThresholdNotFound { cap: u64 },
}

// ---------------------------------------------------------------------------
// The sufficiency condition:
//   k - floor(phi(0)) - sum_{l >= 1} (floor(phi(l)) - floor(phi(l-1))) / c^l >= c
// ---------------------------------------------------------------------------

/// How the infinite sum in the condition was handled.
#[derive(Debug, Clone, PartialEq)]
pub enum TailTreatment {
    /// The tail past the truncation point was summed in closed form.
    ClosedForm,
    /// The sum was truncated after `terms` terms with a certified upper
    /// bound on the remainder.
    Truncated { terms: u64, tail_upper: Rational },
    /// The increments grow at least like `c^l`; the sum is `+infinity`.
    Divergent,
}

/// The condition margin (left-hand side minus `c`).
#[derive(Debug, Clone, PartialEq)]
pub enum Margin {
    Exact(Rational),
    /// The margin lies in `[lo, hi]`; the gap is the unresolved tail.
    Bracket { lo: Rational, hi: Rational },
    /// Divergent sum: the margin is `-infinity`.
    MinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Satisfied,
    Unsatisfied,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub k: u32,
    pub profile: Profile,
    pub c: Rational,
    pub margin: Margin,
    pub tail: TailTreatment,
    pub outcome: Feasibility,
}

impl ConditionReport {
    pub fn is_satisfied(&self) -> bool {
        self.outcome == Feasibility::Satisfied
    }
}

enum Tail {
    Exact(Rational),
    Upper(Rational),
    Divergent,
}

fn big_rat(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

fn nat_to_int(n: &Natural) -> BigInt {
    BigInt::from(n.clone())
}

/// `true` iff `base^{p/q} >= c`, decided exactly (`base^p * v^q >= u^q` for
/// `c = u/v`).
pub(crate) fn root_ge(base: u32, p: u64, q: u64, c: &Rational) -> bool {
    let u = c.numer().magnitude().clone();
    let v = c.denom().magnitude().clone();
    let lhs = num::traits::Pow::pow(BigUint::from(base), p)
        * num::traits::Pow::pow(v, q);
    let rhs = num::traits::Pow::pow(u, q);
    lhs >= rhs
}

/// A rational at most `base^{p/q}` (floor of the scaled integer root).
pub(crate) fn root_lower_bound(base: u32, p: u64, q: u64, bits: u64) -> Rational {
    let scaled = num::traits::Pow::pow(BigUint::from(base), p)
        << (bits * q).try_into().unwrap_or(usize::MAX);
    let root = scaled.nth_root(q.try_into().expect("exponent denominator too large"));
    big_rat(
        nat_to_int(&root),
        BigInt::from(1u8) << bits.try_into().unwrap_or(usize::MAX),
    )
}

/// A rational `a >= base^{p/q}`, tightened until `a < limit` (caller must
/// ensure `base^{p/q} < limit`).
pub(crate) fn root_upper_bound_below(base: u32, p: u64, q: u64, limit: &Rational) -> Rational {
    let mut bits = 16u64;
    loop {
        let scaled = num::traits::Pow::pow(BigUint::from(base), p)
            << (bits * q).try_into().unwrap_or(usize::MAX);
        let root = scaled.nth_root(q.try_into().expect("exponent denominator too large"));
        let a = big_rat(
            nat_to_int(&(root + BigUint::one())),
            BigInt::from(1u8) << bits.try_into().unwrap_or(usize::MAX),
        );
        if &a < limit {
            return a;
        }
        bits *= 2;
        assert!(bits <= 4096, "upper bound for the root did not converge");
    }
}

/// Upper bound (or exact value) for the sum of `(f(l) - f(l-1)) / c^l` over
/// `l > truncated_at`, where `f = floor(phi)`. Requires `truncated_at` to be
/// past any table / threshold irregularities of the profile.
fn tail_bound(profile: &Profile, c: &Rational, truncated_at: u64) -> Tail {
    let l = truncated_at;
    let c_pow_l = num::traits::Pow::pow(c.clone(), l.try_into().unwrap_or(u32::MAX as usize));
    match profile {
        // Increments are exactly 1 from the start: sum_{j>L} c^{-j} =
        // 1 / (c^L (c - 1)).
        Profile::Linear => Tail::Exact(
            (c_pow_l * (c.clone() - Rational::one())).recip(),
        ),
        // Increments 2^{j-1}: sum_{j>L} 2^{j-1}/c^j = 2^L / (c^L (c - 2)),
        // finite only for c > 2.
        Profile::PowerOfTwo => {
            let two = Rational::from_integer(2.into());
            if c <= &two {
                return Tail::Divergent;
            }
            let two_pow_l =
                big_rat(BigInt::from(1u8) << l.try_into().unwrap_or(usize::MAX), 1.into());
            Tail::Exact(two_pow_l / (c_pow_l * (c.clone() - two)))
        }
        Profile::Table { values, extension } => {
            debug_assert!(l + 1 >= values.len() as u64);
            match extension {
                crate::profile::TableExtension::FinalValue => Tail::Exact(Rational::zero()),
                crate::profile::TableExtension::UnitSlope => Tail::Exact(
                    (c_pow_l * (c.clone() - Rational::one())).recip(),
                ),
            }
        }
        Profile::ExponentialBase { base, delta } => {
            let (p, q) = crate::profile::delta_parts(delta);
            if root_ge(*base, p, q, c) {
                return Tail::Divergent;
            }
            // Each increment is at most f(j) <= a^j for a rational
            // a in [base^{p/q}, c), so the tail is below
            // sum_{j>L} (a/c)^j = (a/c)^{L+1} / (1 - a/c).
            let a = root_upper_bound_below(*base, p, q, c);
            let ratio = a / c.clone();
            let ratio_pow = num::traits::Pow::pow(
                ratio.clone(),
                (l + 1).try_into().unwrap_or(u32::MAX as usize),
            );
            Tail::Upper(ratio_pow / (Rational::one() - ratio))
        }
        Profile::Thresholded { inner, l0 } => {
            debug_assert!(l >= l0 + 1);
            // Past the threshold the increments coincide with the inner
            // gauge's, and the exponential envelope holds regardless.
            tail_bound(inner, c, truncated_at)
        }
    }
}

/// Truncation point past which `tail_bound` applies.
fn tail_start(profile: &Profile) -> u64 {
    match profile {
        Profile::Table { values, .. } => values.len() as u64,
        Profile::Thresholded { inner, l0 } => (l0 + 1).max(tail_start(inner)),
        _ => 0,
    }
}

/// Evaluates the sufficiency condition for growth constant `c`: the margin
/// of `k - floor(phi(0)) - sum_{l>=1} (floor(phi(l)) - floor(phi(l-1)))/c^l`
/// over `c`. Exact for gauges whose increment series has a closed form;
/// otherwise a certified truncation with an adaptive number of terms.
pub fn condition_3_2(
    k: u32,
    profile: &Profile,
    c: &Rational,
) -> Result<ConditionReport, CountingError> {
    let k_rat = Rational::from_integer(BigInt::from(k));
    if c <= &Rational::one() || c >= &k_rat {
        return Err(CountingError::COutOfRange { c: c.clone(), k });
    }
    let base_terms = tail_start(profile).max(32);
    let mut terms = base_terms;
    let report = loop {
        let mut partial = Rational::zero();
        let mut prev = profile.floor_eval(0);
        let f0 = prev.clone();
        let mut c_pow = Rational::one();
        for l in 1..=terms {
            let cur = profile.floor_eval(l);
            c_pow *= c.clone();
            if cur != prev {
                let inc = nat_to_int(&cur) - nat_to_int(&prev);
                partial += big_rat(inc, 1.into()) / c_pow.clone();
            }
            prev = cur;
        }
        let head = k_rat.clone() - big_rat(nat_to_int(&f0), 1.into()) - partial;
        match tail_bound(profile, c, terms) {
            Tail::Divergent => {
                break ConditionReport {
                    k,
                    profile: profile.clone(),
                    c: c.clone(),
                    margin: Margin::MinusInfinity,
                    tail: TailTreatment::Divergent,
                    outcome: Feasibility::Unsatisfied,
                };
            }
            Tail::Exact(t) => {
                let margin = head - t - c.clone();
                let outcome = if margin >= Rational::zero() {
                    Feasibility::Satisfied
                } else {
                    Feasibility::Unsatisfied
                };
                break ConditionReport {
                    k,
                    profile: profile.clone(),
                    c: c.clone(),
                    margin: Margin::Exact(margin),
                    tail: TailTreatment::ClosedForm,
                    outcome,
                };
            }
            Tail::Upper(t) => {
                let hi = head.clone() - c.clone();
                let lo = hi.clone() - t.clone();
                let outcome = if lo >= Rational::zero() {
                    Feasibility::Satisfied
                } else if hi < Rational::zero() {
                    Feasibility::Unsatisfied
                } else if terms < base_terms.max(32) * 16 {
                    terms *= 4;
                    continue;
                } else {
                    Feasibility::Unknown
                };
                break ConditionReport {
                    k,
                    profile: profile.clone(),
                    c: c.clone(),
                    margin: Margin::Bracket { lo, hi },
                    tail: TailTreatment::Truncated {
                        terms,
                        tail_upper: t,
                    },
                    outcome,
                };
            }
        }
    };
    Ok(report)
}

/// The minimal threshold `l0` such that zeroing the exponential gauge
/// `k^{delta l}` out to `l0` satisfies the condition for this `c`. Requires
/// `k^delta < c < k`, which guarantees a finite answer.
pub fn exists_threshold_for_exponential(
    k: u32,
    delta: &Rational,
    c: &Rational,
) -> Result<u64, CountingError> {
    let (p, q) = crate::profile::delta_parts(delta);
    if root_ge(k, p, q, c) {
        return Err(CountingError::COutOfRange { c: c.clone(), k });
    }
    let inner = Profile::exponential(k, delta.clone())
        .map_err(|e| CountingError::CertificateInvalid(e.to_string()))?;
    let cap = 10_000u64;
    for l0 in 0..=cap {
        let candidate = Profile::thresholded(inner.clone(), l0);
        if condition_3_2(k, &candidate, c)?.is_satisfied() {
            return Ok(l0);
        }
    }
    Err(CountingError::ThresholdNotFound { cap })
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Hard cap on visited search nodes.
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 100_000_000,
        }
    }
}

/// First length at which any constraint exists: `2 + ell(1)`, or `None` for
/// gauges that stay below 1 (no constraints at all).
pub fn first_constrained_length(profile: &Profile) -> Option<u64> {
    profile.right_inverse(1).ok().map(|l| 2 + l)
}

/// For each length `n <= m_max`, the constraints `(i, s, l)` that become
/// checkable exactly at `n`: `l = ell(s)`, `i = n - s - l >= 1`. A prefix of
/// length `n` is good iff it is an extension of a good prefix and the
/// windows `[i .. i+l]` and `[i+s .. i+s+l]` differ for each listed triple.
struct Schedule {
    per_len: Vec<Vec<(usize, usize, usize)>>,
}

impl Schedule {
    fn build(profile: &Profile, m_max: usize) -> Schedule {
        let mut per_len = vec![Vec::new(); m_max + 1];
        let mut scan = EllScan::new(profile);
        for s in 1..=m_max {
            let l = match scan.ell(s as u64) {
                Some(l) => l as usize,
                None => break,
            };
            if s + l + 1 > m_max {
                break;
            }
            for n in (s + l + 1)..=m_max {
                per_len[n].push((n - s - l, s, l));
            }
        }
        Schedule { per_len }
    }

    /// Does the 0-based buffer of length `n` satisfy every constraint newly
    /// checkable at `n`?
    fn admits(&self, buf: &[u8], n: usize) -> bool {
        for &(i, s, l) in &self.per_len[n] {
            if buf[i - 1..i + l] == buf[i + s - 1..i + s + l] {
                return false;
            }
        }
        true
    }
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn spend(&mut self, amount: u64) -> Result<(), CountingError> {
        self.used += amount;
        if self.used > self.cap {
            return Err(CountingError::BudgetExceeded {
                visited: self.used,
                budget: self.cap,
            });
        }
        Ok(())
    }
}

fn dfs_count(
    buf: &mut Vec<u8>,
    k: u32,
    schedule: &Schedule,
    m_max: usize,
    counts: &mut [u64],
    budget: &mut Budget,
) -> Result<(), CountingError> {
    let n = buf.len();
    counts[n] += 1;
    if n == m_max {
        return Ok(());
    }
    budget.spend(k as u64)?;
    for sym in 0..k as u8 {
        buf.push(sym);
        if schedule.admits(buf, n + 1) {
            dfs_count(buf, k, schedule, m_max, counts, budget)?;
        }
        buf.pop();
    }
    Ok(())
}

/// Exact number of good words of every length `0 ..= m_max`, by DFS over
/// good prefixes only. Single-threaded.
pub fn count_good_words_sequential(
    k: u32,
    profile: &Profile,
    m_max: usize,
    opts: &SearchOptions,
) -> Result<Vec<Natural>, CountingError> {
    let schedule = Schedule::build(profile, m_max);
    let mut counts = vec![0u64; m_max + 1];
    let mut budget = Budget {
        used: 0,
        cap: opts.node_budget,
    };
    dfs_count(&mut Vec::new(), k, &schedule, m_max, &mut counts, &mut budget)?;
    Ok(counts.into_iter().map(Natural::from).collect())
}

/// Exact number of good words of every length `0 ..= m_max`. With the
/// `parallel` feature the DFS forest below a shallow frontier is explored by
/// rayon; counts are identical to the sequential version.
pub fn count_good_words(
    k: u32,
    profile: &Profile,
    m_max: usize,
    opts: &SearchOptions,
) -> Result<Vec<Natural>, CountingError> {
    #[cfg(feature = "parallel")]
    {
        count_good_words_parallel(k, profile, m_max, opts)
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_good_words_sequential(k, profile, m_max, opts)
    }
}

#[cfg(feature = "parallel")]
fn count_good_words_parallel(
    k: u32,
    profile: &Profile,
    m_max: usize,
    opts: &SearchOptions,
) -> Result<Vec<Natural>, CountingError> {
    use rayon::prelude::*;
    use std::sync::atomic::AtomicU64;

    // Frontier depth: enough tasks to spread, nothing if the problem is tiny.
    let mut depth = 0usize;
    let mut width = 1u64;
    while depth < m_max && width < 512 {
        depth += 1;
        width = width.saturating_mul(k as u64);
    }
    if depth == 0 || depth >= m_max {
        return count_good_words_sequential(k, profile, m_max, opts);
    }

    let schedule = Schedule::build(profile, m_max);
    let mut head_budget = Budget {
        used: 0,
        cap: opts.node_budget,
    };
    let mut head_counts = vec![0u64; depth + 1];
    let mut frontier: Vec<Vec<u8>> = Vec::new();
    collect_frontier(
        &mut Vec::new(),
        k,
        &schedule,
        depth,
        &mut head_counts,
        &mut frontier,
        &mut head_budget,
    )?;

    let shared = AtomicU64::new(head_budget.used);
    let cap = opts.node_budget;
    let tails: Result<Vec<Vec<u64>>, CountingError> = frontier
        .par_iter()
        .map(|prefix| {
            let mut buf = prefix.clone();
            let mut counts = vec![0u64; m_max + 1];
            // Local budget slices keep the shared counter cheap; the cap is
            // enforced within one slice of slack per task.
            let mut budget = Budget { used: 0, cap: u64::MAX };
            let mut charged = 0u64;
            dfs_count_chunked(
                &mut buf,
                k,
                &schedule,
                m_max,
                &mut counts,
                &mut budget,
                &mut charged,
                &shared,
                cap,
            )?;
            // Flush the uncharged remainder so the cap is checked exactly
            // over the whole forest, not just per 2^16-node slice.
            let delta = budget.used - charged;
            if delta > 0 {
                use std::sync::atomic::Ordering;
                let seen = shared.fetch_add(delta, Ordering::Relaxed) + delta;
                if seen > cap {
                    return Err(CountingError::BudgetExceeded {
                        visited: seen,
                        budget: cap,
                    });
                }
            }
            counts[depth] = 0; // frontier nodes were counted in the head pass
            Ok(counts)
        })
        .collect();
    let tails = tails?;

    let mut totals = vec![0u64; m_max + 1];
    totals[..=depth].copy_from_slice(&head_counts);
    for t in &tails {
        for (n, v) in t.iter().enumerate() {
            totals[n] += v;
        }
    }
    Ok(totals.into_iter().map(Natural::from).collect())
}

#[cfg(feature = "parallel")]
#[allow(clippy::too_many_arguments)]
fn dfs_count_chunked(
    buf: &mut Vec<u8>,
    k: u32,
    schedule: &Schedule,
    m_max: usize,
    counts: &mut [u64],
    budget: &mut Budget,
    charged: &mut u64,
    shared: &std::sync::atomic::AtomicU64,
    cap: u64,
) -> Result<(), CountingError> {
    use std::sync::atomic::Ordering;
    let n = buf.len();
    counts[n] += 1;
    if n == m_max {
        return Ok(());
    }
    budget.spend(k as u64)?;
    if budget.used - *charged >= 1 << 16 {
        let delta = budget.used - *charged;
        *charged = budget.used;
        let seen = shared.fetch_add(delta, Ordering::Relaxed) + delta;
        if seen > cap {
            return Err(CountingError::BudgetExceeded {
                visited: seen,
                budget: cap,
            });
        }
    }
    for sym in 0..k as u8 {
        buf.push(sym);
        if schedule.admits(buf, n + 1) {
            dfs_count_chunked(buf, k, schedule, m_max, counts, budget, charged, shared, cap)?;
        }
        buf.pop();
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn collect_frontier(
    buf: &mut Vec<u8>,
    k: u32,
    schedule: &Schedule,
    depth: usize,
    counts: &mut [u64],
    frontier: &mut Vec<Vec<u8>>,
    budget: &mut Budget,
) -> Result<(), CountingError> {
    let n = buf.len();
    counts[n] += 1;
    if n == depth {
        frontier.push(buf.clone());
        return Ok(());
    }
    budget.spend(k as u64)?;
    for sym in 0..k as u8 {
        buf.push(sym);
        if schedule.admits(buf, n + 1) {
            collect_frontier(buf, k, schedule, depth, counts, frontier, budget)?;
        }
        buf.pop();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Recurrence lower bound
// ---------------------------------------------------------------------------

/// The sequence `B(m)` defined by `B(m) = k^m` below the first constrained
/// length and thereafter by
/// `B(m+1) = (k - f(0)) B(m) - sum_{j=1}^{m} (f(j) - f(j-1)) B(m-j)`
/// with `f = floor(phi)`, clamped below at 0.
///
/// This mirrors the inductive count bound; it is a valid lower bound on the
/// number of good words only while the growth side-condition
/// `B(m) >= c B(m-1)` keeps holding, which [`growth_flags`] records rather
/// than assumes.
pub fn lower_bound_sequence(k: u32, profile: &Profile, m_max: usize) -> Vec<Natural> {
    let m0 = first_constrained_length(profile).unwrap_or(u64::MAX);
    let k_int = BigInt::from(k);
    let mut floors: Vec<BigInt> = (0..=m_max as u64)
        .map(|l| nat_to_int(&profile.floor_eval(l)))
        .collect();
    if floors.is_empty() {
        floors.push(BigInt::zero());
    }
    let mut b: Vec<BigInt> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if (m as u64) < m0 {
            b.push(num::traits::Pow::pow(k_int.clone(), m));
            continue;
        }
        let prev = m - 1;
        let mut next = (k_int.clone() - &floors[0]) * &b[prev];
        for j in 1..=prev {
            let inc = &floors[j] - &floors[j - 1];
            if !inc.is_zero() {
                next -= inc * &b[prev - j];
            }
        }
        if next.is_negative() {
            next = BigInt::zero();
        }
        b.push(next);
    }
    b.into_iter()
        .map(|v| v.to_biguint().expect("clamped at zero"))
        .collect()
}

/// `flag[m] = (B(m) >= c * B(m-1))`; index 0 is trivially `true`. While all
/// flags up to `m` hold, `B(m)` is a valid lower bound on the good-word
/// count and `B(m) >= c^m`.
pub fn growth_flags(bounds: &[Natural], c: &Rational) -> Vec<bool> {
    let mut flags = Vec::with_capacity(bounds.len());
    for m in 0..bounds.len() {
        if m == 0 {
            flags.push(true);
            continue;
        }
        // B(m) >= c B(m-1)  <=>  B(m) * denom >= numer * B(m-1)
        let lhs = nat_to_int(&bounds[m]) * c.denom();
        let rhs = nat_to_int(&bounds[m - 1]) * c.numer();
        flags.push(lhs >= rhs);
    }
    flags
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolOrder {
    Lexicographic,
    /// Shuffle candidate symbols at every node with a seeded generator;
    /// deterministic for a fixed seed.
    Seeded(u64),
}

/// Depth-first backtracking search for a good word of the target length.
/// Extensions violating a newly checkable constraint are pruned, which by
/// prefix-closure never discards a viable branch.
pub fn construct_word(
    k: u32,
    profile: &Profile,
    target_len: usize,
    order: SymbolOrder,
    opts: &SearchOptions,
) -> Result<FiniteWord, CountingError> {
    let alphabet = Alphabet::new(k).expect("alphabet size in range");
    let schedule = Schedule::build(profile, target_len);
    let mut rng = match order {
        SymbolOrder::Lexicographic => None,
        SymbolOrder::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let candidates = |rng: &mut Option<ChaCha8Rng>| -> Vec<u8> {
        // Candidates are popped from the back.
        let mut v: Vec<u8> = (0..k as u8).rev().collect();
        if let Some(rng) = rng {
            v.shuffle(rng);
        }
        v
    };
    let mut buf: Vec<u8> = Vec::with_capacity(target_len);
    let mut stack: Vec<Vec<u8>> = vec![candidates(&mut rng)];
    let mut deepest = 0usize;
    let mut budget = Budget {
        used: 0,
        cap: opts.node_budget,
    };
    while buf.len() < target_len {
        budget.spend(1)?;
        match stack.last_mut().and_then(|c| c.pop()) {
            Some(sym) => {
                buf.push(sym);
                if schedule.admits(&buf, buf.len()) {
                    deepest = deepest.max(buf.len());
                    stack.push(candidates(&mut rng));
                } else {
                    buf.pop();
                }
            }
            None => {
                stack.pop();
                if buf.pop().is_none() {
                    return Err(CountingError::Exhausted { reached: deepest });
                }
            }
        }
    }
    Ok(FiniteWord::new(alphabet, buf).expect("symbols in range"))
}

// ---------------------------------------------------------------------------
// Parameter derivation for the exponential-gauge existence theorem
// ---------------------------------------------------------------------------

/// Caller-supplied growth certificate: `phi(l) <= k^{delta_tilde * l}` for
/// all `l >= l1`, with `delta < delta_tilde < 1`. The derivation
/// machine-checks it for the closed-form gauge kinds.
#[derive(Debug, Clone)]
pub struct GrowthCertificate {
    pub l1: u64,
    pub delta_tilde: Rational,
}

#[derive(Debug, Clone)]
pub struct Theorem11Derivation {
    /// The growth constant, a rational strictly between `k^{delta_tilde}`
    /// and `k`.
    pub c: Rational,
    /// The surrogate thresholded exponential gauge used in place of `phi`.
    pub surrogate: Profile,
    pub l0: u64,
    pub l2: u64,
    pub condition: ConditionReport,
}

/// Checks `phi(l) <= k^{dt * l}` for all `l >= l1`, exactly, using the
/// structure of the gauge.
fn check_dominated(
    phi: &Profile,
    k: u32,
    dt: &Rational,
    l1: u64,
) -> Result<(), CountingError> {
    let (p, q) = crate::profile::delta_parts(dt);
    let bad = |l: u64| {
        CountingError::CertificateInvalid(format!(
            "gauge exceeds k^(delta_tilde*l) at l = {}",
            l
        ))
    };
    // Exact test phi(l) <= k^{(p/q) l}  <=>  phi(l)^q <= k^{l p} for the
    // rational-valued kinds below.
    let holds_at = |value: &Rational, l: u64| -> bool {
        if value.is_negative() || value.is_zero() {
            return true;
        }
        let vq = num::traits::Pow::pow(value.clone(), q.try_into().unwrap_or(u32::MAX as usize));
        let kp = num::traits::Pow::pow(BigUint::from(k), l * p);
        vq <= big_rat(nat_to_int(&kp), 1.into())
    };
    match phi {
        Profile::ExponentialBase { base, delta } => {
            // k^{delta l} <= k^{dt l} for the same base iff delta <= dt;
            // for another base iff base^delta <= k^{dt}.
            if *base == k {
                if delta <= dt {
                    return Ok(());
                }
                return Err(bad(l1.max(1)));
            }
            let (bp, bq) = crate::profile::delta_parts(delta);
            // base^{bp/bq} <= k^{p/q}  <=>  base^{bp q} <= k^{p bq}
            let lhs = num::traits::Pow::pow(BigUint::from(*base), bp * q);
            let rhs = num::traits::Pow::pow(BigUint::from(k), p * bq);
            if lhs <= rhs {
                Ok(())
            } else {
                Err(bad(l1.max(1)))
            }
        }
        Profile::PowerOfTwo => {
            // 2^l <= k^{dt l} for all l >= 1 iff 2 <= k^{dt}; l = 0 trivial.
            let lhs = num::traits::Pow::pow(BigUint::from(2u32), q);
            let rhs = num::traits::Pow::pow(BigUint::from(k), p);
            if lhs <= rhs {
                Ok(())
            } else {
                Err(bad(l1.max(1)))
            }
        }
        Profile::Linear => {
            // l <= k^{dt l}: check exactly up to the point where the ratio
            // (l+1)/l falls below k^{dt} (i.e. l^q k^p >= (l+1)^q), after
            // which the exponential outpaces the line for good.
            let mut l = l1.max(1);
            loop {
                if !holds_at(&Rational::from_integer(BigInt::from(l)), l) {
                    return Err(bad(l));
                }
                let lq = num::traits::Pow::pow(
                    BigUint::from(l),
                    q.try_into().unwrap_or(u32::MAX as usize),
                );
                let l1q = num::traits::Pow::pow(
                    BigUint::from(l + 1),
                    q.try_into().unwrap_or(u32::MAX as usize),
                );
                if lq * num::traits::Pow::pow(BigUint::from(k), p) >= l1q {
                    return Ok(());
                }
                l += 1;
                if l > 1 << 24 {
                    return Err(CountingError::CertificateInvalid(
                        "ratio certification for the linear gauge did not close".into(),
                    ));
                }
            }
        }
        Profile::Table { values, extension } => match extension {
            crate::profile::TableExtension::FinalValue => {
                for (idx, v) in values.iter().enumerate().skip(l1 as usize) {
                    if !holds_at(v, idx as u64) {
                        return Err(bad(idx as u64));
                    }
                }
                // Beyond the table: the constant last value against a
                // strictly growing exponential; the last in-table check at
                // index len-1 only improves with l.
                Ok(())
            }
            crate::profile::TableExtension::UnitSlope => Err(CountingError::CertificateInvalid(
                "unit-slope table gauges need an explicit exponential envelope".into(),
            )),
        },
        Profile::Thresholded { inner, .. } => check_dominated(inner, k, dt, l1),
    }
}

/// Derives the constants of the existence theorem for exponential gauges:
/// a growth constant `c` with `k^{delta_tilde} < c < k`, the surrogate
/// thresholded gauge, and the threshold `l0 = max(l1, l2) + 1`.
///
/// The textbook choice `c = (k - k^{delta_tilde}) / 2` is only usable when
/// it exceeds `k^{delta_tilde}` (otherwise the condition's sum diverges);
/// when it does not, the midpoint `(k + k^{delta_tilde}) / 2` of the valid
/// interval is used instead.
pub fn derive_theorem_1_1(
    k: u32,
    delta: &Rational,
    phi: &Profile,
    cert: &GrowthCertificate,
) -> Result<Theorem11Derivation, CountingError> {
    let dt = &cert.delta_tilde;
    if dt >= &Rational::one() || dt <= &Rational::zero() {
        return Err(CountingError::CertificateInvalid(format!(
            "delta_tilde = {} must lie in (0, 1)",
            dt
        )));
    }
    if dt < delta {
        return Err(CountingError::CertificateInvalid(format!(
            "delta_tilde = {} must be at least delta = {}",
            dt, delta
        )));
    }
    check_dominated(phi, k, dt, cert.l1)?;

    let (p, q) = crate::profile::delta_parts(dt);
    let k_rat = Rational::from_integer(BigInt::from(k));
    // u is a rational upper bound on k^{delta_tilde}, strictly below k.
    let u = root_upper_bound_below(k, p, q, &k_rat);
    let half = Rational::new(1.into(), 2.into());
    let c_primary = (k_rat.clone() - u.clone()) * half.clone();
    let c = if c_primary > u {
        c_primary
    } else {
        (k_rat + u) * half
    };

    let l2 = exists_threshold_for_exponential(k, dt, &c)?;
    let l0 = cert.l1.max(l2) + 1;
    // The surrogate is zeroed up to and including max(l1, l2), so it
    // agrees with the exponential gauge from l0 on; the recurrence claim
    // then covers every l >= l0.
    let surrogate = Profile::thresholded(
        Profile::exponential(k, dt.clone())
            .map_err(|e| CountingError::CertificateInvalid(e.to_string()))?,
        cert.l1.max(l2),
    );
    let condition = condition_3_2(k, &surrogate, &c)?;
    Ok(Theorem11Derivation {
        c,
        surrogate,
        l0,
        l2,
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn linear_condition_margins() {
        let r = condition_3_2(4, &Profile::Linear, &rat(2, 1)).unwrap();
        assert_eq!(r.margin, Margin::Exact(rat(1, 1)));
        assert!(r.is_satisfied());

        let r = condition_3_2(5, &Profile::PowerOfTwo, &rat(3, 1)).unwrap();
        assert_eq!(r.margin, Margin::Exact(rat(0, 1)));
        assert!(r.is_satisfied());
    }

    #[test]
    fn pow2_divergent_below_two() {
        let r = condition_3_2(5, &Profile::PowerOfTwo, &rat(3, 2)).unwrap();
        assert_eq!(r.outcome, Feasibility::Unsatisfied);
        assert_eq!(r.tail, TailTreatment::Divergent);
    }

    #[test]
    fn binary_linear_never_satisfied() {
        for c in [rat(11, 10), rat(3, 2), rat(19, 10)] {
            let r = condition_3_2(2, &Profile::Linear, &c).unwrap();
            assert_eq!(r.outcome, Feasibility::Unsatisfied);
        }
    }

    #[test]
    fn c_range_is_enforced() {
        assert!(matches!(
            condition_3_2(4, &Profile::Linear, &rat(1, 1)),
            Err(CountingError::COutOfRange { .. })
        ));
        assert!(matches!(
            condition_3_2(4, &Profile::Linear, &rat(4, 1)),
            Err(CountingError::COutOfRange { .. })
        ));
    }

    #[test]
    fn binary_linear_count_small() {
        let counts =
            count_good_words_sequential(2, &Profile::Linear, 3, &SearchOptions::default())
                .unwrap();
        assert_eq!(
            counts,
            vec![
                Natural::from(1u32),
                Natural::from(2u32),
                Natural::from(4u32),
                Natural::from(6u32)
            ]
        );
    }

    #[test]
    fn parallel_and_sequential_counts_agree() {
        let opts = SearchOptions::default();
        for profile in [Profile::Linear, Profile::PowerOfTwo] {
            let a = count_good_words(3, &profile, 10, &opts).unwrap();
            let b = count_good_words_sequential(3, &profile, 10, &opts).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = SearchOptions { node_budget: 100 };
        assert!(matches!(
            count_good_words_sequential(4, &Profile::Linear, 12, &opts),
            Err(CountingError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn lower_bound_matches_free_range_and_growth() {
        // k = 4 linear: free up to length 2, then the recurrence; growth by
        // factor 2 persists.
        let b = lower_bound_sequence(4, &Profile::Linear, 12);
        assert_eq!(b[0], Natural::from(1u32));
        assert_eq!(b[1], Natural::from(4u32));
        assert_eq!(b[2], Natural::from(16u32));
        assert_eq!(b[3], Natural::from(59u32)); // 4*16 - (4 + 1)
        let flags = growth_flags(&b, &rat(2, 1));
        assert!(flags.iter().all(|&f| f));
    }

    #[test]
    fn binary_linear_growth_eventually_fails() {
        let b = lower_bound_sequence(2, &Profile::Linear, 40);
        let flags = growth_flags(&b, &rat(101, 100));
        assert!(flags.iter().any(|f| !f));
    }

    #[test]
    fn constructed_words_verify() {
        let w = construct_word(
            4,
            &Profile::Linear,
            64,
            SymbolOrder::Lexicographic,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(w.len(), 64);
        assert!(crate::verify::verify_phi_aperiodic(&w, &Profile::Linear).is_ok());
        let w = construct_word(
            4,
            &Profile::Linear,
            64,
            SymbolOrder::Seeded(7),
            &SearchOptions::default(),
        )
        .unwrap();
        assert!(crate::verify::verify_phi_aperiodic(&w, &Profile::Linear).is_ok());
    }

    #[test]
    fn threshold_search_terminates() {
        let l0 = exists_threshold_for_exponential(4, &rat(1, 2), &rat(3, 1)).unwrap();
        // Minimality: the next smaller threshold must fail.
        if l0 > 0 {
            let p = Profile::thresholded(Profile::exponential(4, rat(1, 2)).unwrap(), l0 - 1);
            assert!(!condition_3_2(4, &p, &rat(3, 1)).unwrap().is_satisfied());
        }
    }

    #[test]
    fn derivation_produces_valid_constants() {
        let phi = Profile::exponential(4, rat(3, 10)).unwrap();
        let cert = GrowthCertificate {
            l1: 0,
            delta_tilde: rat(31, 100),
        };
        let d = derive_theorem_1_1(4, &rat(3, 10), &phi, &cert).unwrap();
        assert!(d.condition.is_satisfied());
        assert!(d.c > Rational::one());
        assert!(d.l0 >= 1);
    }

    #[test]
    fn derivation_rejects_bad_delta_tilde() {
        let phi = Profile::exponential(4, rat(3, 10)).unwrap();
        let cert = GrowthCertificate {
            l1: 0,
            delta_tilde: rat(3, 2),
        };
        assert!(matches!(
            derive_theorem_1_1(4, &rat(3, 10), &phi, &cert),
            Err(CountingError::CertificateInvalid(_))
        ));
    }
}
