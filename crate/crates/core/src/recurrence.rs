//! Recurrence times of finite words: per-position times `R_w^i(l)`, the
//! word-wide minimum `R_w(l)`, and the overlap variant that additionally
//! requires the shift to exceed the window length.

use crate::word::{FiniteWord, WordError};

/// A recurrence time, or the marker that no recurrence happens inside the
/// finite word (callers must treat this as "no constraint").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    Attained(u64),
    NotAttained,
}

impl Recurrence {
    pub fn attained(&self) -> Option<u64> {
        match self {
            Recurrence::Attained(s) => Some(*s),
            Recurrence::NotAttained => None,
        }
    }
}

/// `R_w^i(l)`: the least `s >= 1` with `[w(i+s) ... w(i+s+l)] = [w(i) ... w(i+l)]`,
/// both windows inside `w`.
pub fn recurrence_time_at(w: &FiniteWord, i: usize, l: usize) -> Result<Recurrence, WordError> {
    let base = w.window(i, l)?;
    let m = w.len();
    for s in 1.. {
        if i + s + l > m {
            return Ok(Recurrence::NotAttained);
        }
        if w.window(i + s, l)? == base {
            return Ok(Recurrence::Attained(s as u64));
        }
    }
    unreachable!()
}

/// `R̃_w(l)`: like the recurrence time at the first position, but requiring
/// the shift to exceed `l` (the window must recur past itself, not merely
/// overlap).
pub fn overlap_recurrence(w: &FiniteWord, l: usize) -> Result<Recurrence, WordError> {
    let base = w.window(1, l)?;
    let m = w.len();
    for s in (l + 1).. {
        if 1 + s + l > m {
            return Ok(Recurrence::NotAttained);
        }
        if w.window(1 + s, l)? == base {
            return Ok(Recurrence::Attained(s as u64));
        }
    }
    unreachable!()
}

/// `R_w(l) = min_i R_w^i(l)` for `l = 0, ..., l_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceTable {
    values: Vec<Recurrence>,
}

impl RecurrenceTable {
    /// `R_w(l)`; panics if `l` was not requested.
    pub fn at(&self, l: usize) -> Recurrence {
        self.values[l]
    }

    pub fn l_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Recurrence)> + '_ {
        self.values.iter().copied().enumerate()
    }
}

/// Computes `R_w(l)` for all `l <= l_max` in one `O(m^2)` pass: for each
/// shift `s` it finds the longest run of positions where `w` agrees with its
/// own `s`-shift; `R_w(l)` is then the least `s` whose run covers `l + 1`
/// symbols.
pub fn min_recurrence_time(w: &FiniteWord, l_max: usize) -> Result<RecurrenceTable, WordError> {
    let m = w.len();
    if l_max >= m {
        return Err(WordError::OutOfBounds {
            i: 1,
            hi: l_max as i64 + 1,
            len: m,
        });
    }
    let sym = w.symbols();
    let mut values = vec![Recurrence::NotAttained; l_max + 1];
    let mut unresolved = l_max + 1;
    for s in 1..m {
        let mut run = 0usize;
        let mut best = 0usize;
        for j in 0..m - s {
            if sym[j] == sym[j + s] {
                run += 1;
                if run > best {
                    best = run;
                }
            } else {
                run = 0;
            }
        }
        // This shift realizes every window length l + 1 <= best.
        for l in 0..best.min(l_max + 1) {
            if values[l] == Recurrence::NotAttained {
                values[l] = Recurrence::Attained(s as u64);
                unresolved -= 1;
            }
        }
        if unresolved == 0 {
            break;
        }
    }
    Ok(RecurrenceTable { values })
}
