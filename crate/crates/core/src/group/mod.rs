//! Finitely generated groups with solvable word problem: free groups, free
//! abelian groups and closed surface groups, with ShortLex normal forms and
//! Cayley-ball enumeration.

mod ball;
mod surface;
mod word;

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use surface::SurfaceEngine;

pub(crate) use ball::BallCore;
pub use ball::{CayleyBall, MAX_BALL_VERTICES, MAX_SURFACE_BALL_VERTICES};
pub use word::{free_reduce, parse_letters, Letter, Word, GENERATOR_NAMES};

/// A group from one of the supported families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GroupSpec {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Surface { genus: usize },
}

impl GroupSpec {
    pub fn free(rank: usize) -> Result<GroupSpec> {
        if !(1..=8).contains(&rank) {
            return Err(Error::Precondition(format!(
                "free group rank must be in 1..=8, got {rank}"
            )));
        }
        Ok(GroupSpec::Free { rank })
    }

    pub fn free_abelian(rank: usize) -> Result<GroupSpec> {
        if !(1..=8).contains(&rank) {
            return Err(Error::Precondition(format!(
                "free abelian rank must be in 1..=8, got {rank}"
            )));
        }
        Ok(GroupSpec::FreeAbelian { rank })
    }

    pub fn surface(genus: usize) -> Result<GroupSpec> {
        if !(2..=4).contains(&genus) {
            return Err(Error::Precondition(format!(
                "surface genus must be in 2..=4, got {genus}"
            )));
        }
        Ok(GroupSpec::Surface { genus })
    }

    pub fn num_generators(&self) -> usize {
        match *self {
            GroupSpec::Free { rank } | GroupSpec::FreeAbelian { rank } => rank,
            GroupSpec::Surface { genus } => 2 * genus,
        }
    }

    /// The symmetric generating set in ShortLex order `a, A, b, B, ...`.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..2 * self.num_generators()).map(Letter::from_rank).collect()
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GroupSpec::Free { .. } => "free",
            GroupSpec::FreeAbelian { .. } => "free-abelian",
            GroupSpec::Surface { .. } => "surface",
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, GroupSpec::Free { .. })
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupSpec::FreeAbelian { .. })
    }

    /// Largest ball radius accepted by [`Group::ball`].
    pub fn radius_limit(&self) -> usize {
        match *self {
            GroupSpec::Free { rank: 1 } => 1000,
            GroupSpec::Free { .. } => 12,
            GroupSpec::FreeAbelian { .. } => 20,
            GroupSpec::Surface { .. } => 8,
        }
    }

    /// Exact vertex count of the ball of radius `r`, where a closed form exists.
    pub fn ball_size(&self, r: usize) -> Option<u128> {
        match *self {
            GroupSpec::Free { rank } => {
                if rank == 1 {
                    return Some(2 * r as u128 + 1);
                }
                let k = 2 * rank as u128;
                let mut total = 1u128;
                let mut sphere = k;
                for _ in 0..r {
                    total = total.saturating_add(sphere);
                    sphere = sphere.saturating_mul(k - 1);
                }
                Some(total)
            }
            GroupSpec::FreeAbelian { rank } => {
                // sum_k 2^k C(n,k) C(r,k)
                let n = rank as u128;
                let r = r as u128;
                let mut total = 0u128;
                for k in 0..=n.min(r) {
                    total += (1u128 << k) * binom(n, k) * binom(r, k);
                }
                Some(total)
            }
            GroupSpec::Surface { .. } => None,
        }
    }
}

fn binom(n: u128, k: u128) -> u128 {
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free { rank } => write!(f, "F{rank}"),
            GroupSpec::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupSpec::Surface { genus } => write!(f, "S{genus}"),
        }
    }
}

/// Number of ends of a finitely generated group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ends {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "infinite")]
    Infinite,
}

impl fmt::Display for Ends {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ends::Zero => "0",
            Ends::One => "1",
            Ends::Two => "2",
            Ends::Infinite => "infinite",
        })
    }
}

/// Ends of a free group of the given rank (rank 0 is the trivial group).
pub fn ends_of_free(rank: usize) -> Ends {
    match rank {
        0 => Ends::Zero,
        1 => Ends::Two,
        _ => Ends::Infinite,
    }
}

/// Ends of a free abelian group of the given rank.
pub fn ends_of_free_abelian(rank: usize) -> Ends {
    match rank {
        0 => Ends::Zero,
        1 => Ends::Two,
        _ => Ends::One,
    }
}

struct Inner {
    spec: GroupSpec,
    surface: Option<SurfaceEngine>,
    /// Canonical-form table for surface groups, grown on demand.
    canon: Mutex<Option<Arc<BallCore>>>,
}

/// A group together with its word-problem machinery. Cheap to clone.
#[derive(Clone)]
pub struct Group {
    inner: Arc<Inner>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.inner.spec)
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Group {
        let surface = match spec {
            GroupSpec::Surface { genus } => Some(SurfaceEngine::new(genus)),
            _ => None,
        };
        Group {
            inner: Arc::new(Inner {
                spec,
                surface,
                canon: Mutex::new(None),
            }),
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.inner.spec
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        self.inner.spec.alphabet()
    }

    pub(crate) fn surface(&self) -> Option<&SurfaceEngine> {
        self.inner.surface.as_ref()
    }

    fn alphabet_string(&self) -> String {
        GENERATOR_NAMES[..self.spec().num_generators()]
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a word; free abelian groups also accept tuples like `(1,-2)`.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let t = s.trim();
        if t.starts_with('(') {
            let GroupSpec::FreeAbelian { rank } = self.spec() else {
                return Err(Error::parse(s, "tuple syntax is only valid in free abelian groups"));
            };
            let body = t
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| Error::parse(s, "unbalanced parentheses"))?;
            let coords: Vec<i64> = body
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(s, e.to_string()))?;
            if coords.len() != rank {
                return Err(Error::parse(
                    s,
                    format!("expected {rank} coordinates, got {}", coords.len()),
                ));
            }
            return Ok(self.from_exponents(&coords));
        }
        let ngens = self.spec().num_generators();
        parse_letters(s, ngens).map_err(|reason| {
            if reason.starts_with("unknown generator") {
                Error::UnknownLetter {
                    letter: reason
                        .trim_start_matches("unknown generator ")
                        .trim_matches('`')
                        .to_string(),
                    alphabet: self.alphabet_string(),
                }
            } else {
                Error::parse(s, reason)
            }
        })
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.spec().num_generators() => Err(Error::UnknownLetter {
                letter: GENERATOR_NAMES[g].to_string(),
                alphabet: self.alphabet_string(),
            }),
            _ => Ok(()),
        }
    }

    /// Abelianization: exponent sum per generator.
    pub fn exponent_vector(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.spec().num_generators()];
        for l in w.letters() {
            v[l.index()] += if l.is_inverse() { -1 } else { 1 };
        }
        v
    }

    /// The sorted word `a^v0 b^v1 ...`.
    pub fn from_exponents(&self, v: &[i64]) -> Word {
        let mut letters = Vec::new();
        for (i, &e) in v.iter().enumerate() {
            let l = Letter::new(i, e < 0);
            for _ in 0..e.unsigned_abs() {
                letters.push(l);
            }
        }
        Word::from_letters(letters)
    }

    /// Canonical representative: free reduction, sorted exponent word, or the
    /// ShortLex-least geodesic for surface groups.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        match self.spec() {
            GroupSpec::Free { .. } | GroupSpec::FreeAbelian { .. } => Ok(self.nf_fast(w.letters())),
            GroupSpec::Surface { .. } => self.surface_normal_form(w.letters()),
        }
    }

    /// Normal form for free and free abelian groups; letters must be valid.
    pub(crate) fn nf_fast(&self, letters: &[Letter]) -> Word {
        match self.spec() {
            GroupSpec::Free { .. } => Word::from_letters(free_reduce(letters.iter().copied())),
            GroupSpec::FreeAbelian { .. } => {
                let mut v = vec![0i64; self.spec().num_generators()];
                for l in letters {
                    v[l.index()] += if l.is_inverse() { -1 } else { 1 };
                }
                self.from_exponents(&v)
            }
            GroupSpec::Surface { .. } => self
                .surface_normal_form(letters)
                .expect("surface normal form within canonical table"),
        }
    }

    fn surface_normal_form(&self, letters: &[Letter]) -> Result<Word> {
        let engine = self.surface().expect("surface engine");
        let reduced = engine.dehn_reduce(letters);
        if reduced.is_empty() {
            return Ok(Word::identity());
        }
        let core = self.canonical_table(reduced.len())?;
        let w = Word::from_letters(reduced);
        let idx = core
            .locate_surface(engine, &w)
            .expect("an element of length at most r lies in the ball of radius r");
        Ok(core.words[idx].clone())
    }

    fn canonical_table(&self, radius: usize) -> Result<Arc<BallCore>> {
        let mut guard = self.inner.canon.lock().expect("canonical table lock");
        if let Some(core) = guard.as_ref() {
            if core.radius >= radius {
                return Ok(core.clone());
            }
        }
        let have = guard.as_ref().map(|c| c.radius).unwrap_or(0);
        let target = radius.max(have + 1);
        let core = Arc::new(BallCore::enumerate(self, target, MAX_SURFACE_BALL_VERTICES)?);
        *guard = Some(core.clone());
        Ok(core)
    }

    /// Word problem: is `w` trivial in the group?
    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        Ok(match self.surface() {
            Some(engine) => engine.is_identity(w.letters()),
            None => self.nf_fast(w.letters()).is_empty(),
        })
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_identity(&u.concat(&v.inverse()))
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.normal_form(&u.concat(v))
    }

    pub fn inverse(&self, u: &Word) -> Result<Word> {
        self.normal_form(&u.inverse())
    }

    /// `g h g⁻¹`, in normal form.
    pub fn conjugate(&self, g: &Word, h: &Word) -> Result<Word> {
        self.normal_form(&g.concat(h).concat(&g.inverse()))
    }

    /// Geodesic word length (length of the normal form).
    pub fn length(&self, w: &Word) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    /// Prints abelian elements as exponent tuples and others as words.
    pub fn format_element(&self, w: &Word) -> String {
        if self.spec().is_abelian() {
            let v = self.exponent_vector(w);
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        } else {
            w.to_string()
        }
    }

    pub fn ends(&self) -> Ends {
        match self.spec() {
            GroupSpec::Free { rank } => ends_of_free(rank),
            GroupSpec::FreeAbelian { rank } => ends_of_free_abelian(rank),
            GroupSpec::Surface { .. } => Ends::One,
        }
    }

    /// The ball of radius `r` in the Cayley graph, with an edge from `g` to `gs` for each generator `s`.
    pub fn ball(&self, radius: usize) -> Result<CayleyBall> {
        CayleyBall::build(self, radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(spec: GroupSpec) -> Group {
        Group::new(spec)
    }

    #[test]
    fn normal_form_examples() {
        let f2 = group(GroupSpec::free(2).unwrap());
        let w = f2.parse_word("a b b⁻¹ a").unwrap();
        assert_eq!(f2.normal_form(&w).unwrap().to_string(), "aa");

        let z2 = group(GroupSpec::free_abelian(2).unwrap());
        let w = z2.parse_word("a b a⁻¹").unwrap();
        assert_eq!(z2.normal_form(&w).unwrap().to_string(), "b");

        let s2 = group(GroupSpec::surface(2).unwrap());
        let w = s2.parse_word("abABcdCD").unwrap();
        assert!(s2.normal_form(&w).unwrap().is_empty());
    }

    #[test]
    fn group_op_examples() {
        let f2 = group(GroupSpec::free(2).unwrap());
        let a = f2.parse_word("a").unwrap();
        let ai = f2.parse_word("A").unwrap();
        assert!(f2.multiply(&a, &ai).unwrap().is_empty());

        let z2 = group(GroupSpec::free_abelian(2).unwrap());
        let x = z2.parse_word("a").unwrap();
        let y = z2.parse_word("b").unwrap();
        assert_eq!(z2.multiply(&x, &y).unwrap(), z2.multiply(&y, &x).unwrap());

        let s2 = group(GroupSpec::surface(2).unwrap());
        let p = s2.parse_word("abAB").unwrap();
        let q = s2.parse_word("cdCD").unwrap();
        assert!(s2.multiply(&p, &q).unwrap().is_empty());
    }

    #[test]
    fn unknown_letter_is_an_input_error() {
        let f2 = group(GroupSpec::free(2).unwrap());
        assert!(matches!(f2.parse_word("a c"), Err(Error::UnknownLetter { .. })));
        let w = parse_letters("c", 8).unwrap();
        assert!(matches!(f2.normal_form(&w), Err(Error::UnknownLetter { .. })));
    }

    #[test]
    fn ends_per_family() {
        assert_eq!(group(GroupSpec::free_abelian(2).unwrap()).ends(), Ends::One);
        assert_eq!(group(GroupSpec::free(2).unwrap()).ends(), Ends::Infinite);
        assert_eq!(group(GroupSpec::free(1).unwrap()).ends(), Ends::Two);
        assert_eq!(group(GroupSpec::free_abelian(1).unwrap()).ends(), Ends::Two);
        assert_eq!(group(GroupSpec::surface(3).unwrap()).ends(), Ends::One);
    }

    #[test]
    fn tuple_syntax() {
        let z2 = group(GroupSpec::free_abelian(2).unwrap());
        let w = z2.parse_word("(1,-2)").unwrap();
        assert_eq!(w.to_string(), "aBB");
        assert_eq!(z2.format_element(&w), "(1,-2)");
        assert!(z2.parse_word("(1,2,3)").is_err());
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(GroupSpec::free(9).is_err());
        assert!(GroupSpec::surface(1).is_err());
        assert!(GroupSpec::surface(5).is_err());
    }

    #[test]
    fn surface_normal_form_is_shortlex_geodesic() {
        let s2 = group(GroupSpec::surface(2).unwrap());
        // abABc = dcD; the canonical form is the ShortLex-least geodesic.
        let w = s2.parse_word("abABc").unwrap();
        let nf = s2.normal_form(&w).unwrap();
        assert_eq!(nf.len(), 3);
        assert!(s2.equal(&nf, &w).unwrap());
        assert_eq!(s2.normal_form(&nf).unwrap(), nf);
    }
}
