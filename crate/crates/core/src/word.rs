//! Alphabets, finite words (1-indexed), centered two-sided windows, and the
//! `2^{-a}` word metric on windows.

use std::fmt;

use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet size must be between 2 and 36, got {0}")]
    BadAlphabetSize(u32),
    #[error("symbol {symbol} out of range for alphabet of size {k}")]
    SymbolOutOfRange { symbol: u32, k: u32 },
    #[error("character {0:?} is not a valid symbol (expected 0-9a-z)")]
    BadCharacter(char),
    #[error("window [{i}, {hi}] does not fit inside a word of length {len}")]
    OutOfBounds { i: i64, hi: i64, len: usize },
    #[error("centered windows have different radii ({0} vs {1})")]
    UnequalRadii(usize, usize),
}

/// A finite alphabet of `k >= 2` symbols, rendered as `0-9a-z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    k: u32,
}

impl Alphabet {
    pub fn new(k: u32) -> Result<Self, WordError> {
        if !(2..=36).contains(&k) {
            return Err(WordError::BadAlphabetSize(k));
        }
        Ok(Alphabet { k })
    }

    pub fn size(&self) -> u32 {
        self.k
    }

    pub fn symbol_char(&self, symbol: u8) -> char {
        char::from_digit(symbol as u32, 36).expect("symbol below 36")
    }

    pub fn parse_char(&self, c: char) -> Result<u8, WordError> {
        let v = c
            .to_digit(36)
            .ok_or(WordError::BadCharacter(c))?;
        if v >= self.k {
            return Err(WordError::SymbolOutOfRange { symbol: v, k: self.k });
        }
        Ok(v as u8)
    }
}

/// A finite word `w : {1, ..., m} -> A`. Indexing is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteWord {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self, WordError> {
        for &s in &symbols {
            if (s as u32) >= alphabet.size() {
                return Err(WordError::SymbolOutOfRange {
                    symbol: s as u32,
                    k: alphabet.size(),
                });
            }
        }
        Ok(FiniteWord { alphabet, symbols })
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self, WordError> {
        let symbols = text
            .trim()
            .chars()
            .map(|c| alphabet.parse_char(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteWord { alphabet, symbols })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `w(i)` for `1 <= i <= m`.
    pub fn symbol(&self, i: usize) -> u8 {
        self.symbols[i - 1]
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// The subword `[w(i) ... w(i+l)]` (length `l + 1` symbols).
    pub fn window(&self, i: usize, l: usize) -> Result<&[u8], WordError> {
        let hi = i + l;
        if i == 0 || hi > self.symbols.len() {
            return Err(WordError::OutOfBounds {
                i: i as i64,
                hi: hi as i64,
                len: self.symbols.len(),
            });
        }
        Ok(&self.symbols[i - 1..hi])
    }

    /// A two-sided view centered at position `center` (1-based) with the
    /// given radius; requires `[center - radius, center + radius]` in range.
    pub fn centered_window(
        &self,
        center: usize,
        radius: usize,
    ) -> Result<CenteredWindow, WordError> {
        let lo = center as i64 - radius as i64;
        let hi = center as i64 + radius as i64;
        if lo < 1 || hi > self.symbols.len() as i64 {
            return Err(WordError::OutOfBounds {
                i: lo,
                hi,
                len: self.symbols.len(),
            });
        }
        Ok(CenteredWindow {
            alphabet: self.alphabet,
            radius,
            symbols: self.symbols[(lo - 1) as usize..hi as usize].to_vec(),
        })
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", self.alphabet.symbol_char(s))?;
        }
        Ok(())
    }
}

/// A window `w(-radius), ..., w(0), ..., w(radius)` used by the word metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenteredWindow {
    alphabet: Alphabet,
    radius: usize,
    symbols: Vec<u8>,
}

impl CenteredWindow {
    pub fn new(alphabet: Alphabet, radius: usize, symbols: Vec<u8>) -> Result<Self, WordError> {
        assert_eq!(symbols.len(), 2 * radius + 1, "window must span [-r, r]");
        for &s in &symbols {
            if (s as u32) >= alphabet.size() {
                return Err(WordError::SymbolOutOfRange {
                    symbol: s as u32,
                    k: alphabet.size(),
                });
            }
        }
        Ok(CenteredWindow {
            alphabet,
            radius,
            symbols,
        })
    }

    /// Fill the window from a rule `j -> symbol` over `j in [-r, r]`.
    pub fn from_rule(
        alphabet: Alphabet,
        radius: usize,
        mut rule: impl FnMut(i64) -> u8,
    ) -> Result<Self, WordError> {
        let symbols = (-(radius as i64)..=radius as i64).map(&mut rule).collect();
        CenteredWindow::new(alphabet, radius, symbols)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `w(j)` for `|j| <= radius`.
    pub fn at(&self, j: i64) -> u8 {
        self.symbols[(j + self.radius as i64) as usize]
    }
}

/// The distance `d(w, v) = 2^{-a}` where `a` is the largest `i` with
/// agreement on `|j| <= i`; windows identical over their full span have a
/// distance below the window's resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordDistance {
    /// Identical over `|j| <= radius`: the true distance is at most
    /// `2^{-radius}` but not determined by the data.
    BelowResolution { radius: usize },
    /// `agreement = max { i >= 0 : u(j) = v(j) for |j| <= i }`; the distance
    /// is `2^{-agreement}`. A mismatch at the center has no such `i`; by
    /// convention that also reports `agreement = 0`, i.e. distance `1`.
    Exact { agreement: usize },
}

impl WordDistance {
    /// The distance as a rational; for [`WordDistance::BelowResolution`] this
    /// is the resolution bound `2^{-radius}`, an upper bound on the true value.
    pub fn upper_bound(&self) -> Rational {
        let e = match self {
            WordDistance::BelowResolution { radius } => *radius,
            WordDistance::Exact { agreement } => *agreement,
        };
        Rational::new(1.into(), num::BigInt::from(2u32).pow(e as u32))
    }

    /// Exact comparison against `2^{-threshold_exponent/2}`, i.e. whether
    /// `d > 2^{-t/2}` where `t = threshold_exponent`. Decidable from the
    /// agreement length alone: `2^{-a} > 2^{-t/2}` iff `2a < t`.
    pub fn exceeds_half_exponent(&self, threshold_exponent: u64) -> Option<bool> {
        match self {
            WordDistance::Exact { agreement } => Some((2 * *agreement as u64) < threshold_exponent),
            // d <= 2^{-radius}; conclusive only when even the bound is small.
            WordDistance::BelowResolution { radius } => {
                if 2 * *radius as u64 >= threshold_exponent {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// `d(u, v)` for two windows of equal radius.
pub fn word_metric(u: &CenteredWindow, v: &CenteredWindow) -> Result<WordDistance, WordError> {
    if u.radius != v.radius {
        return Err(WordError::UnequalRadii(u.radius, v.radius));
    }
    for f in 0..=u.radius as i64 {
        for j in [-f, f] {
            if u.at(j) != v.at(j) {
                // First mismatch at |j| = f: agreement holds for |j| <= f - 1.
                return Ok(WordDistance::Exact {
                    agreement: (f - 1).max(0) as usize,
                });
            }
        }
    }
    Ok(WordDistance::BelowResolution { radius: u.radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let a = Alphabet::new(12).unwrap();
        let w = FiniteWord::parse(a, "0ab319").unwrap();
        assert_eq!(w.to_string(), "0ab319");
        assert_eq!(w.symbol(2), 10);
        assert!(FiniteWord::parse(a, "0c0").is_err());
    }

    #[test]
    fn windows_are_one_indexed_and_inclusive() {
        let w = FiniteWord::parse(bin(), "01101").unwrap();
        assert_eq!(w.window(2, 2).unwrap(), &[1, 1, 0]);
        assert!(w.window(4, 2).is_err());
        assert!(w.window(0, 0).is_err());
    }

    #[test]
    fn metric_identical_and_center_mismatch() {
        let u = CenteredWindow::from_rule(bin(), 5, |_| 0).unwrap();
        assert_eq!(
            word_metric(&u, &u).unwrap(),
            WordDistance::BelowResolution { radius: 5 }
        );
        let v = CenteredWindow::from_rule(bin(), 5, |j| (j == 0) as u8).unwrap();
        assert_eq!(word_metric(&u, &v).unwrap(), WordDistance::Exact { agreement: 0 });
        assert_eq!(
            word_metric(&u, &v).unwrap().upper_bound(),
            Rational::from_integer(1.into())
        );
    }

    #[test]
    fn metric_partial_agreement() {
        let u = CenteredWindow::from_rule(bin(), 5, |_| 0).unwrap();
        let v = CenteredWindow::from_rule(bin(), 5, |j| (j == 3) as u8).unwrap();
        // agree for |j| <= 2, differ at 3 -> distance 1/4
        assert_eq!(word_metric(&u, &v).unwrap(), WordDistance::Exact { agreement: 2 });
        assert_eq!(
            word_metric(&u, &v).unwrap().upper_bound(),
            Rational::new(1.into(), 4.into())
        );
    }
}
