use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Generator names, in alphabet order. At most eight generators are supported.
pub const GENERATOR_NAMES: [char; 8] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'];

/// A generator or its inverse. `+k` is generator `k-1`, `-k` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    pub fn generator(index: usize) -> Letter {
        assert!(index < GENERATOR_NAMES.len(), "generator index out of range");
        Letter(index as i8 + 1)
    }

    pub fn inverse_of(index: usize) -> Letter {
        Letter::generator(index).inverse()
    }

    pub fn new(index: usize, inverted: bool) -> Letter {
        if inverted {
            Letter::inverse_of(index)
        } else {
            Letter::generator(index)
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the ShortLex alphabet `a < A < b < B < ...`.
    #[inline]
    pub fn rank(self) -> usize {
        2 * self.index() + self.is_inverse() as usize
    }

    pub fn from_rank(rank: usize) -> Letter {
        Letter::new(rank / 2, rank % 2 == 1)
    }

    pub fn to_char(self) -> char {
        let c = GENERATOR_NAMES[self.index()];
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A word over the symmetric generating set. Ordered by ShortLex.
///
/// Inverses print as upper case letters, so `aB` is `a b⁻¹`; the empty word
/// prints as `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Formal inverse (reverse and invert every letter); no reduction.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Formal concatenation; no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.index()).max()
    }
}

/// Free reduction with a stack.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_letters(&s, GENERATOR_NAMES.len()).map_err(serde::de::Error::custom)
    }
}

/// Parses letter syntax: `a`, `A` (inverse), `a^-1`, `a⁻¹`, `a^3`, separated
/// optionally by whitespace, `*`, `.` or `·`. `1`, `ε` and the empty
/// string denote the identity. Generators are checked against `ngens`.
/// The result is not reduced.
pub fn parse_letters(input: &str, ngens: usize) -> Result<Word, String> {
    let trimmed = input.trim();
    if trimmed.is_empty() || trimmed == "1" || trimmed == "ε" {
        return Ok(Word::identity());
    }
    let chars: Vec<char> = trimmed.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' || c == '·' {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(format!("unexpected character `{c}`"));
        }
        let lower = c.to_ascii_lowercase();
        let index = GENERATOR_NAMES
            .iter()
            .position(|&g| g == lower)
            .filter(|&p| p < ngens)
            .ok_or_else(|| format!("unknown generator `{c}`"))?;
        let base = Letter::new(index, c.is_ascii_uppercase());
        i += 1;
        // exponent
        let mut exp: i64 = 1;
        if i < chars.len() && chars[i] == '⁻' {
            if chars.get(i + 1) == Some(&'¹') {
                exp = -1;
                i += 2;
            } else {
                return Err("expected `¹` after `⁻`".into());
            }
        } else if i < chars.len() && chars[i] == '^' {
            i += 1;
            let paren = chars.get(i) == Some(&'(');
            if paren {
                i += 1;
            }
            let start = i;
            if matches!(chars.get(i), Some('-') | Some('+')) {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            exp = digits.parse().map_err(|_| format!("bad exponent `{digits}`"))?;
            if paren {
                if chars.get(i) != Some(&')') {
                    return Err("missing `)` in exponent".into());
                }
                i += 1;
            }
        }
        if exp.unsigned_abs() > 10_000 {
            return Err(format!("exponent {exp} too large"));
        }
        let l = if exp < 0 { base.inverse() } else { base };
        for _ in 0..exp.unsigned_abs() {
            out.push(l);
        }
    }
    Ok(Word(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_letters(s, 8).unwrap()
    }

    #[test]
    fn parse_variants() {
        assert_eq!(w("a b b⁻¹ a").to_string(), "abBa");
        assert_eq!(w("a^-1 b^2").to_string(), "Abb");
        assert_eq!(w("a^(-2)*B").to_string(), "AAB");
        assert_eq!(w("1"), Word::identity());
        assert!(parse_letters("z", 2).is_err());
        assert!(parse_letters("c", 2).is_err());
    }

    #[test]
    fn shortlex_order() {
        assert!(w("a") < w("A"));
        assert!(w("A") < w("b"));
        assert!(w("B") < w("aa"));
        assert!(w("aB") < w("AA"));
    }

    #[test]
    fn free_reduce_cancels() {
        assert_eq!(free_reduce(w("abBA").into_letters()), vec![]);
        assert_eq!(Word(free_reduce(w("aAb").into_letters())), w("b"));
    }
}
