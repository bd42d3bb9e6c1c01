//! Word problem for closed orientable surface groups of genus ≥ 2 with the
//! standard one-relator presentation `[a,b][c,d]...`.
//!
//! The relator satisfies C'(1/7) (pieces are single letters, relator length
//! 4g ≥ 8), so Dehn's algorithm decides the word problem. Canonical forms are
//! ShortLex-least geodesics, read off an enumerated ball; see
//! [`crate::group::Group::normal_form`].

use std::collections::HashMap;

use super::word::{free_reduce, Letter};

/// Homomorphic image of a word used to bucket elements before the exact Dehn
/// equality test: abelianization plus images in two finite permutation groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SurfaceKey {
    exponents: Vec<i16>,
    perms: Vec<u8>,
}

const PERM_DEGREE: usize = 7;

#[derive(Debug)]
pub(crate) struct SurfaceEngine {
    genus: usize,
    /// Cyclic permutations of the relator and its inverse, indexed by their
    /// first two letters (pieces have length one, so the pair is unique).
    cyclic: Vec<Vec<Letter>>,
    by_prefix: HashMap<(Letter, Letter), usize>,
    /// `reps[k][gen]` is the permutation assigned to generator `gen`.
    reps: Vec<Vec<[u8; PERM_DEGREE]>>,
}

fn perm_from_cycles(cycles: &[&[u8]]) -> [u8; PERM_DEGREE] {
    let mut p = [0u8; PERM_DEGREE];
    for (i, x) in p.iter_mut().enumerate() {
        *x = i as u8;
    }
    for cyc in cycles {
        for k in 0..cyc.len() {
            p[cyc[k] as usize] = cyc[(k + 1) % cyc.len()];
        }
    }
    p
}

fn perm_inverse(p: &[u8; PERM_DEGREE]) -> [u8; PERM_DEGREE] {
    let mut q = [0u8; PERM_DEGREE];
    for (i, &x) in p.iter().enumerate() {
        q[x as usize] = i as u8;
    }
    q
}

fn perm_compose(p: &[u8; PERM_DEGREE], q: &[u8; PERM_DEGREE]) -> [u8; PERM_DEGREE] {
    // apply p then q
    let mut r = [0u8; PERM_DEGREE];
    for i in 0..PERM_DEGREE {
        r[i] = q[p[i] as usize];
    }
    r
}

/// Assigns permutations to the 2g generators so that the surface relator maps
/// to the identity: handle pairs are (x,y),(y,x),(z,w),(w,z), and for odd
/// genus the last handle is (z, z²), which commutes.
fn handle_assignment(genus: usize, x: [u8; 7], y: [u8; 7], z: [u8; 7], w: [u8; 7]) -> Vec<[u8; 7]> {
    let z2 = perm_compose(&z, &z);
    let mut out = Vec::with_capacity(2 * genus);
    for h in 0..genus {
        let pair = match (h, genus) {
            (0, _) => (x, y),
            (1, _) => (y, x),
            (2, 3) => (z, z2),
            (2, _) => (z, w),
            (3, _) => (w, z),
            _ => unreachable!("genus bounded by 4"),
        };
        out.push(pair.0);
        out.push(pair.1);
    }
    out
}

impl SurfaceEngine {
    pub(crate) fn new(genus: usize) -> SurfaceEngine {
        let mut relator = Vec::with_capacity(4 * genus);
        for h in 0..genus {
            let a = Letter::generator(2 * h);
            let b = Letter::generator(2 * h + 1);
            relator.extend([a, b, a.inverse(), b.inverse()]);
        }
        let inverse: Vec<Letter> = relator.iter().rev().map(|l| l.inverse()).collect();
        let mut cyclic = Vec::with_capacity(8 * genus);
        for r in [&relator, &inverse] {
            for s in 0..r.len() {
                let mut c = r[s..].to_vec();
                c.extend_from_slice(&r[..s]);
                cyclic.push(c);
            }
        }
        let mut by_prefix = HashMap::new();
        for (i, c) in cyclic.iter().enumerate() {
            let prev = by_prefix.insert((c[0], c[1]), i);
            debug_assert!(prev.is_none(), "pieces of the surface relator have length one");
        }

        let rep1 = handle_assignment(
            genus,
            perm_from_cycles(&[&[0, 1, 2, 3, 4, 5, 6]]),
            perm_from_cycles(&[&[0, 1], &[2, 4]]),
            perm_from_cycles(&[&[0, 3, 5], &[1, 6]]),
            perm_from_cycles(&[&[2, 5, 6, 4]]),
        );
        let rep2 = handle_assignment(
            genus,
            perm_from_cycles(&[&[0, 2, 5], &[1, 3], &[4, 6]]),
            perm_from_cycles(&[&[0, 1, 2, 3, 4]]),
            perm_from_cycles(&[&[1, 2, 3, 4, 5, 6]]),
            perm_from_cycles(&[&[0, 6], &[1, 5]]),
        );
        SurfaceEngine {
            genus,
            cyclic,
            by_prefix,
            reps: vec![rep1, rep2],
        }
    }

    /// Dehn's algorithm: repeatedly replace a subword that is more than half
    /// of a cyclic relator by the inverse of the complementary part.
    pub(crate) fn dehn_reduce(&self, letters: &[Letter]) -> Vec<Letter> {
        let half = 2 * self.genus;
        let rel_len = 4 * self.genus;
        let mut w = free_reduce(letters.iter().copied());
        'outer: loop {
            if w.len() <= half {
                return w;
            }
            for i in 0..w.len() - 1 {
                let Some(&ci) = self.by_prefix.get(&(w[i], w[i + 1])) else {
                    continue;
                };
                let rel = &self.cyclic[ci];
                let mut m = 2;
                while m < rel_len && i + m < w.len() && w[i + m] == rel[m] {
                    m += 1;
                }
                if m > half {
                    let replacement = rel[m..].iter().rev().map(|l| l.inverse());
                    let mut next = Vec::with_capacity(w.len());
                    next.extend_from_slice(&w[..i]);
                    next.extend(replacement);
                    next.extend_from_slice(&w[i + m..]);
                    w = free_reduce(next);
                    continue 'outer;
                }
            }
            return w;
        }
    }

    pub(crate) fn is_identity(&self, letters: &[Letter]) -> bool {
        self.dehn_reduce(letters).is_empty()
    }

    pub(crate) fn equal(&self, u: &[Letter], v: &[Letter]) -> bool {
        let mut w = u.to_vec();
        w.extend(v.iter().rev().map(|l| l.inverse()));
        self.is_identity(&w)
    }

    pub(crate) fn key(&self, letters: &[Letter]) -> SurfaceKey {
        let mut exponents = vec![0i16; 2 * self.genus];
        let mut perms = Vec::with_capacity(self.reps.len() * PERM_DEGREE);
        for l in letters {
            exponents[l.index()] += if l.is_inverse() { -1 } else { 1 };
        }
        for rep in &self.reps {
            let mut acc: [u8; PERM_DEGREE] = std::array::from_fn(|i| i as u8);
            for l in letters {
                let p = rep[l.index()];
                let p = if l.is_inverse() { perm_inverse(&p) } else { p };
                acc = perm_compose(&acc, &p);
            }
            perms.extend_from_slice(&acc);
        }
        SurfaceKey { exponents, perms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::word::parse_letters;

    fn letters(s: &str) -> Vec<Letter> {
        parse_letters(s, 8).unwrap().into_letters()
    }

    #[test]
    fn relator_is_trivial_in_every_image() {
        for genus in 2..=4 {
            let e = SurfaceEngine::new(genus);
            let rel = e.cyclic[0].clone();
            assert_eq!(e.key(&rel), e.key(&[]), "genus {genus}");
            assert!(e.is_identity(&rel));
        }
    }

    #[test]
    fn dehn_examples() {
        let e = SurfaceEngine::new(2);
        assert!(e.is_identity(&letters("abABcdCD")));
        // conjugated relator
        assert!(e.is_identity(&letters("c abABcdCD C")));
        // five letters of the relator shorten to three
        assert_eq!(e.dehn_reduce(&letters("abABc")), letters("dcD"));
        assert!(!e.is_identity(&letters("ab")));
        assert!(!e.is_identity(&letters("abAB")));
    }

    #[test]
    fn key_is_a_class_function_on_equal_words() {
        let e = SurfaceEngine::new(2);
        let u = letters("abABc");
        let v = e.dehn_reduce(&u);
        assert_eq!(e.key(&u), e.key(&v));
        assert!(e.equal(&u, &v));
    }
}
