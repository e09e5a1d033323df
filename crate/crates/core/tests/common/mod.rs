//! Naive reference implementations used as independent oracles. These
//! deliberately share no machinery with the library: the verifier is a
//! direct triple loop over the definition, the counter filters every word,
//! and the sequence oracle sums binary digits one by one.

#![allow(dead_code)]

use aperiodic_core::Profile;
use num::ToPrimitive;

/// `floor(phi(l))` for `l = 0 ..= l_max`, saturated to `u64::MAX`.
pub fn floor_table(profile: &Profile, l_max: usize) -> Vec<u64> {
    (0..=l_max as u64)
        .map(|l| profile.floor_eval(l).to_u64().unwrap_or(u64::MAX))
        .collect()
}

/// Definition-chasing check: no window `[i .. i+l]` may coincide with its
/// `s`-shift when `s <= floor(phi(l))`. 0-based symbols.
pub fn naive_is_good(sym: &[u8], floors: &[u64]) -> bool {
    let m = sym.len();
    for i in 0..m {
        for s in 1..m {
            for l in 0..m {
                if i + s + l >= m {
                    break;
                }
                if (s as u64) <= floors[l] && sym[i..=i + l] == sym[i + s..=i + s + l] {
                    return false;
                }
            }
        }
    }
    true
}

/// Number of good words of length exactly `m`, filtering all `k^m` words.
pub fn naive_count(k: u32, floors: &[u64], m: usize) -> u64 {
    let mut word = vec![0u8; m];
    let mut count = 0u64;
    loop {
        if naive_is_good(&word, floors) {
            count += 1;
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return count;
            }
            pos -= 1;
            word[pos] += 1;
            if (word[pos] as u32) < k {
                break;
            }
            word[pos] = 0;
        }
    }
}

/// Parity of the binary digit sum, computed digit by digit.
pub fn digit_sum_parity(mut i: u64) -> u8 {
    let mut sum = 0u64;
    while i > 0 {
        sum += i % 2;
        i /= 2;
    }
    (sum % 2) as u8
}

/// Does the word contain an overlap, i.e. a factor `xWxWx` (equivalently a
/// window of length `p + 1` recurring at shift `p`)?
pub fn has_overlap(sym: &[u8]) -> bool {
    let m = sym.len();
    for p in 1..m {
        for i in 0..m {
            if i + 2 * p >= m {
                break;
            }
            if sym[i..=i + p] == sym[i + p..=i + 2 * p] {
                return true;
            }
        }
    }
    false
}

/// All coincidences `(i, s, l)` (1-based `i`) of windows of length `l + 1`
/// at shift `s` with `l <= l_cap`, by per-shift run scanning.
pub fn all_coincidences(sym: &[u8], l_cap: usize) -> Vec<(usize, usize, usize)> {
    let m = sym.len();
    let mut out = Vec::new();
    for s in 1..m {
        let mut run = 0usize;
        for i in 0..m - s {
            if sym[i] == sym[i + s] {
                run += 1;
            } else {
                run = 0;
            }
            // A run of length r ending at i covers windows of length
            // 1 ..= r ending here; emit each l <= l_cap once per position.
            for l in 0..run.min(l_cap + 1) {
                out.push((i + 1 - l, s, l));
            }
        }
    }
    out
}
