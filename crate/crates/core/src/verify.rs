//! Gauge verification: does every recurring window of a word respect the
//! shift lower bound `s > phi(l)`?

use crate::profile::{EllScan, Profile};
use crate::word::FiniteWord;

/// Outcome of [`verify_phi_aperiodic`]. A violation names the smallest
/// offending triple `(i, s, l)`: the windows `[w(i) .. w(i+l)]` and
/// `[w(i+s) .. w(i+s+l)]` coincide although `s <= phi(l)`. Tie-breaking is
/// smallest `i + s + l`, then smallest `i`, then smallest `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation { i: usize, s: usize, l: usize },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Checks that `w` respects the gauge: every pair of coinciding windows of
/// length `l + 1` at shift `s` has `s > phi(l)`.
///
/// Since `s` is an integer, a violation at shift `s` means some window of
/// length `ell(s) + 1` recurs at shift `s`, where `ell` is the gauge's
/// right-inverse (longer matches contain this one as a prefix). So one pass
/// per shift suffices: find the first agreement run between `w` and its
/// `s`-shift covering `ell(s) + 1` symbols. Shifts past the gauge's
/// supremum impose no constraint, which also covers bounded gauges.
pub fn verify_phi_aperiodic(w: &FiniteWord, profile: &Profile) -> Verdict {
    let m = w.len();
    let sym = w.symbols();
    let mut scan = EllScan::new(profile);
    let mut best: Option<(usize, usize, usize)> = None; // (i, s, l)
    for s in 1..m {
        let l = match scan.ell(s as u64) {
            Some(l) => l as usize,
            // Bounded gauge already below this shift: done.
            None => break,
        };
        // Need i >= 1 with i + s + l <= m; s + ell(s) is non-decreasing.
        if s + l + 1 > m {
            break;
        }
        if let Some((bi, bs, bl)) = best {
            // Any new witness has cost >= 1 + s + ell(s), non-decreasing in s.
            if 1 + s + l > bi + bs + bl {
                break;
            }
        }
        // First position whose run of agreement with the s-shift spans l + 1
        // symbols: w(i + j) = w(i + s + j) for j = 0..=l.
        let mut run = 0usize;
        for i in 1..=m - s {
            if sym[i - 1] == sym[i + s - 1] {
                run += 1;
                if run >= l + 1 {
                    let cand = (i - l, s, l);
                    let better = match best {
                        None => true,
                        Some((bi, bs, bl)) => {
                            let (c, b) = (cand.0 + cand.1 + cand.2, bi + bs + bl);
                            c < b || (c == b && (cand.0, cand.1) < (bi, bs))
                        }
                    };
                    if better {
                        best = Some(cand);
                    }
                    break;
                }
            } else {
                run = 0;
            }
        }
    }
    match best {
        None => Verdict::Ok,
        Some((i, s, l)) => Verdict::Violation { i, s, l },
    }
}
