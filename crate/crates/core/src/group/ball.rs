use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;

use super::surface::{SurfaceEngine, SurfaceKey};
use super::{free_reduce, Group, GroupSpec, Letter, Word};
use crate::error::{Error, Result};

/// Hard cap on the number of vertices of an enumerated ball.
pub const MAX_BALL_VERTICES: usize = 1_100_000;
/// Cap for surface groups, where every lookup runs Dehn's algorithm.
pub const MAX_SURFACE_BALL_VERTICES: usize = 400_000;

const NO_VERTEX: u32 = u32::MAX;

enum Lookup {
    Exact(HashMap<Word, u32>),
    Surface(HashMap<SurfaceKey, Vec<u32>>),
}

/// The vertex set of a ball: canonical words in ShortLex order, grouped by sphere.
pub(crate) struct BallCore {
    pub(crate) radius: usize,
    pub(crate) words: Vec<Word>,
    pub(crate) sphere_starts: Vec<usize>,
    lookup: Lookup,
}

impl BallCore {
    /// Breadth-first enumeration, one sphere at a time. Within a sphere,
    /// candidates `u·s` are produced in ShortLex order, so the first word seen
    /// for an element is its ShortLex-least geodesic.
    pub(crate) fn enumerate(group: &Group, radius: usize, cap: usize) -> Result<BallCore> {
        let spec = group.spec();
        let alphabet = spec.alphabet();
        let mut words = vec![Word::identity()];
        let mut sphere_starts = vec![0usize, 1];
        let mut lookup = match spec {
            GroupSpec::Surface { .. } => {
                let engine = group.surface().expect("surface engine");
                let mut m = HashMap::new();
                m.insert(engine.key(&[]), vec![0u32]);
                Lookup::Surface(m)
            }
            _ => {
                let mut m = HashMap::new();
                m.insert(Word::identity(), 0u32);
                Lookup::Exact(m)
            }
        };
        for r in 1..=radius {
            let prev = sphere_starts[r - 1]..sphere_starts[r];
            for i in prev {
                let u = words[i].clone();
                for &s in &alphabet {
                    if u.last() == Some(s.inverse()) {
                        continue;
                    }
                    let mut cand = u.clone();
                    cand.push(s);
                    let fresh = match (&mut lookup, spec) {
                        (Lookup::Exact(m), GroupSpec::Free { .. }) => {
                            m.insert(cand.clone(), words.len() as u32);
                            true
                        }
                        (Lookup::Exact(m), _) => {
                            let nf = group.nf_fast(cand.letters());
                            if nf.len() != r || m.contains_key(&nf) {
                                false
                            } else {
                                debug_assert_eq!(nf, cand);
                                m.insert(nf, words.len() as u32);
                                true
                            }
                        }
                        (Lookup::Surface(m), _) => {
                            let engine = group.surface().expect("surface engine");
                            let key = engine.key(cand.letters());
                            let bucket = m.entry(key).or_default();
                            let seen = bucket
                                .iter()
                                .any(|&j| engine.equal(words[j as usize].letters(), cand.letters()));
                            if !seen {
                                bucket.push(words.len() as u32);
                            }
                            !seen
                        }
                    };
                    if fresh {
                        words.push(cand);
                        if words.len() > cap {
                            return Err(Error::size(format!("ball of radius {radius} in {spec}"), cap));
                        }
                    }
                }
            }
            sphere_starts.push(words.len());
        }
        Ok(BallCore {
            radius,
            words,
            sphere_starts,
            lookup,
        })
    }

    pub(crate) fn locate_surface(&self, engine: &SurfaceEngine, w: &Word) -> Option<usize> {
        let Lookup::Surface(m) = &self.lookup else {
            return None;
        };
        m.get(&engine.key(w.letters()))?
            .iter()
            .find(|&&j| engine.equal(self.words[j as usize].letters(), w.letters()))
            .map(|&j| j as usize)
    }

    fn locate(&self, group: &Group, letters: &[Letter]) -> Option<usize> {
        match &self.lookup {
            Lookup::Exact(m) => {
                let nf = match group.spec() {
                    GroupSpec::Free { .. } => Word::from_letters(free_reduce(letters.iter().copied())),
                    _ => group.nf_fast(letters),
                };
                if nf.len() > self.radius {
                    return None;
                }
                m.get(&nf).map(|&j| j as usize)
            }
            Lookup::Surface(_) => {
                let engine = group.surface().expect("surface engine");
                self.locate_surface(engine, &Word::from_letters(letters.to_vec()))
            }
        }
    }
}

/// A ball in the Cayley graph. Vertices are indexed in ShortLex order of their
/// canonical words; edges join `g` and `g·s`.
pub struct CayleyBall {
    group: Group,
    core: Arc<BallCore>,
    alphabet: Vec<Letter>,
    nbrs: Vec<u32>,
}

impl std::fmt::Debug for CayleyBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CayleyBall({}, radius {}, {} vertices)",
            self.group.spec(),
            self.radius(),
            self.len()
        )
    }
}

impl CayleyBall {
    pub(crate) fn build(group: &Group, radius: usize) -> Result<CayleyBall> {
        let spec = group.spec();
        if radius > spec.radius_limit() {
            return Err(Error::size(format!("radius {radius} for {spec}"), spec.radius_limit()));
        }
        if let Some(n) = spec.ball_size(radius) {
            if n > MAX_BALL_VERTICES as u128 {
                return Err(Error::size(
                    format!("ball of radius {radius} in {spec} ({n} vertices)"),
                    MAX_BALL_VERTICES,
                ));
            }
        }
        let cap = match spec {
            GroupSpec::Surface { .. } => MAX_SURFACE_BALL_VERTICES,
            _ => MAX_BALL_VERTICES,
        };
        let core = Arc::new(BallCore::enumerate(group, radius, cap)?);
        let alphabet = spec.alphabet();
        let k = alphabet.len();
        let nbrs: Vec<u32> = (0..core.words.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let core = &core;
                let alphabet = &alphabet;
                (0..k).map(move |j| {
                    let mut letters = core.words[i].letters().to_vec();
                    letters.push(alphabet[j]);
                    core.locate(group, &letters).map(|v| v as u32).unwrap_or(NO_VERTEX)
                })
            })
            .collect();
        Ok(CayleyBall {
            group: group.clone(),
            core,
            alphabet,
            nbrs,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.core.radius
    }

    pub fn len(&self) -> usize {
        self.core.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.core.words[i]
    }

    pub fn words(&self) -> &[Word] {
        &self.core.words
    }

    /// Word length of vertex `i`.
    pub fn dist(&self, i: usize) -> usize {
        self.core.words[i].len()
    }

    pub fn sphere(&self, r: usize) -> Range<usize> {
        self.core.sphere_starts[r]..self.core.sphere_starts[r + 1]
    }

    /// Vertices of the sub-ball of radius `r`, which form a prefix of the index range.
    pub fn within(&self, r: usize) -> Range<usize> {
        0..self.core.sphere_starts[r.min(self.radius()) + 1]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.core.sphere_starts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    /// The vertex `word(i)·alphabet[j]`, if it lies in the ball.
    pub fn neighbor(&self, i: usize, j: usize) -> Option<usize> {
        let v = self.nbrs[i * self.alphabet.len() + j];
        (v != NO_VERTEX).then_some(v as usize)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        (0..self.alphabet.len()).filter_map(move |j| self.neighbor(i, j).map(|v| (self.alphabet[j], v)))
    }

    /// Undirected edges `(g, g·s)` with `s` a positive generator, both ends in the ball.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Letter)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (0..self.alphabet.len())
                .filter(|j| j % 2 == 0)
                .filter_map(move |j| self.neighbor(i, j).map(|v| (i, v, self.alphabet[j])))
        })
    }

    /// Index of the element represented by `w`, if it lies in the ball.
    pub fn locate(&self, w: &Word) -> Option<usize> {
        if self.group.check_word(w).is_err() {
            return None;
        }
        self.core.locate(&self.group, w.letters())
    }

    /// Index of `g·word(i)`, if it lies in the ball.
    pub fn translate(&self, g: &Word, i: usize) -> Option<usize> {
        self.locate(&g.concat(self.word(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_abelian_counts_match_closed_forms() {
        let f2 = Group::new(GroupSpec::free(2).unwrap());
        let b = f2.ball(3).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 4, 12, 36]);
        let z2 = Group::new(GroupSpec::free_abelian(2).unwrap());
        for r in 0..6 {
            let b = z2.ball(r).unwrap();
            assert_eq!(b.len(), 2 * r * r + 2 * r + 1);
            assert_eq!(b.len() as u128, z2.spec().ball_size(r).unwrap());
        }
    }

    #[test]
    fn words_are_in_shortlex_order_and_normal() {
        for spec in [
            GroupSpec::free(2).unwrap(),
            GroupSpec::free_abelian(3).unwrap(),
            GroupSpec::surface(2).unwrap(),
        ] {
            let g = Group::new(spec);
            let b = g.ball(3).unwrap();
            assert!(b.words().windows(2).all(|w| w[0] < w[1]), "{spec}");
            for (i, w) in b.words().iter().enumerate() {
                assert_eq!(&g.normal_form(w).unwrap(), w);
                assert_eq!(b.locate(w), Some(i));
            }
        }
    }

    #[test]
    fn edges_are_symmetric() {
        let g = Group::new(GroupSpec::surface(2).unwrap());
        let b = g.ball(3).unwrap();
        for i in 0..b.len() {
            for (j, &s) in b.alphabet().iter().enumerate() {
                if let Some(v) = b.neighbor(i, j) {
                    let back = b.alphabet().iter().position(|&t| t == s.inverse()).unwrap();
                    assert_eq!(b.neighbor(v, back), Some(i));
                    assert_eq!(b.dist(v).abs_diff(b.dist(i)), 1, "surface balls are bipartite");
                }
            }
        }
    }

    #[test]
    fn guardrails() {
        let f3 = Group::new(GroupSpec::free(3).unwrap());
        assert!(matches!(f3.ball(13), Err(Error::SizeBound { .. })));
        let f8 = Group::new(GroupSpec::free(8).unwrap());
        assert!(matches!(f8.ball(8), Err(Error::SizeBound { .. })));
    }
}
