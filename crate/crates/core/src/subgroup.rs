//! Finitely generated subgroups with a membership oracle for each family:
//! Stallings graphs (free), integer lattices in Hermite normal form (free
//! abelian), and a bounded closure inside a Cayley ball (surface).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{ends_of_free, ends_of_free_abelian, CayleyBall, Ends, Group, GroupSpec, Word};
use crate::stallings::SubgroupGraph;
use crate::unionfind::UnionFind;
use crate::verdict::Tri;

/// A sublattice of ℤⁿ, stored as a row basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Lattice {
        let mut rows: Vec<Vec<i64>> = generators
            .iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        let mut pivots = Vec::new();
        let mut cur = 0;
        for col in 0..dim {
            loop {
                // Smallest nonzero |entry| in this column moves to `cur`.
                let best = (cur..rows.len())
                    .filter(|&r| rows[r][col] != 0)
                    .min_by_key(|&r| rows[r][col].abs());
                let Some(b) = best else { break };
                rows.swap(cur, b);
                if rows[cur][col] < 0 {
                    for x in rows[cur].iter_mut() {
                        *x = -*x;
                    }
                }
                let mut done = true;
                for r in cur + 1..rows.len() {
                    let q = rows[r][col].div_euclid(rows[cur][col]);
                    if q != 0 {
                        let pivot_row = rows[cur].clone();
                        for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                            *x -= q * p;
                        }
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if cur < rows.len() && rows[cur][col] != 0 {
                pivots.push(col);
                cur += 1;
            }
        }
        rows.truncate(cur);
        // Reduce entries above pivots.
        for i in 0..rows.len() {
            let col = pivots[i];
            for r in 0..i {
                let q = rows[r][col].div_euclid(rows[i][col]);
                if q != 0 {
                    let pivot_row = rows[i].clone();
                    for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= q * p;
                    }
                }
            }
        }
        Lattice { dim, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let q = v[col].div_euclid(row[col]);
            if q != 0 {
                for (x, p) in v.iter_mut().zip(row) {
                    *x -= q * p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Index in ℤⁿ, if finite.
    pub fn index(&self) -> Option<u128> {
        (self.rank() == self.dim).then(|| self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c] as u128).product())
    }
}

#[derive(Clone, Debug)]
enum Oracle {
    Free(SubgroupGraph),
    Abelian(Lattice),
    Surface,
}

/// Dense ids of the cosets met by the vertices of a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetIds {
    pub ids: Vec<u32>,
    pub count: usize,
    /// False when cosets were merged only along paths inside the ball, so two
    /// vertices of one coset may carry different ids.
    pub exact: bool,
}

/// A finitely generated subgroup together with its membership oracle.
#[derive(Clone)]
pub struct Subgroup {
    group: Group,
    generators: Vec<Word>,
    oracle: Oracle,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({}, {})", self.group.spec(), self.describe())
    }
}

/// Longest generator word tried when searching surface subgroups.
const SURFACE_SEARCH_LENGTH: usize = 4;

impl Subgroup {
    pub fn new(group: &Group, generators: &[Word]) -> Result<Subgroup> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            gens.push(group.normal_form(g)?);
        }
        let oracle = match group.spec() {
            GroupSpec::Free { rank } => Oracle::Free(SubgroupGraph::fold(rank, &gens)?),
            GroupSpec::FreeAbelian { rank } => Oracle::Abelian(Lattice::new(
                rank,
                &gens.iter().map(|g| group.exponent_vector(g)).collect::<Vec<_>>(),
            )),
            GroupSpec::Surface { .. } => Oracle::Surface,
        };
        gens.retain(|g| !g.is_empty());
        Ok(Subgroup {
            group: group.clone(),
            generators: gens,
            oracle,
        })
    }

    pub fn whole(group: &Group) -> Subgroup {
        let gens: Vec<Word> = (0..group.spec().num_generators())
            .map(|i| Word::letter(crate::group::Letter::generator(i)))
            .collect();
        Subgroup::new(group, &gens).expect("generators are valid")
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// Whether membership is decided exactly (free and free abelian families).
    pub fn is_exact(&self) -> bool {
        !matches!(self.oracle, Oracle::Surface)
    }

    pub fn stallings(&self) -> Option<&SubgroupGraph> {
        match &self.oracle {
            Oracle::Free(g) => Some(g),
            _ => None,
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match &self.oracle {
            Oracle::Abelian(l) => Some(l),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.group.format_element(g)).collect();
        format!("⟨{}⟩", gens.join(", "))
    }

    pub fn is_trivial(&self) -> bool {
        match &self.oracle {
            Oracle::Free(g) => g.is_trivial(),
            Oracle::Abelian(l) => l.rank() == 0,
            Oracle::Surface => self.generators.is_empty(),
        }
    }

    /// Membership. Exact except for surface groups, where a failed bounded
    /// search answers `Inconclusive`.
    pub fn contains(&self, w: &Word) -> Result<Tri> {
        self.group.check_word(w)?;
        Ok(match &self.oracle {
            Oracle::Free(g) => Tri::from_bool(g.accepts(w)),
            Oracle::Abelian(l) => Tri::from_bool(l.contains(&self.group.exponent_vector(w))),
            Oracle::Surface => {
                if self.group.is_identity(w)? {
                    Tri::Yes
                } else if self.surface_search(w)? {
                    Tri::Yes
                } else {
                    Tri::Inconclusive
                }
            }
        })
    }

    /// Searches products of at most `SURFACE_SEARCH_LENGTH` generators.
    fn surface_search(&self, w: &Word) -> Result<bool> {
        let mut letters: Vec<Word> = Vec::new();
        for g in &self.generators {
            letters.push(g.clone());
            letters.push(g.inverse());
        }
        let mut frontier = vec![Word::identity()];
        for _ in 0..SURFACE_SEARCH_LENGTH {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &letters {
                    let y = x.concat(s);
                    if self.group.equal(&y, w)? {
                        return Ok(true);
                    }
                    next.push(y);
                }
            }
            if next.len() > 200_000 {
                break;
            }
            frontier = next;
        }
        Ok(false)
    }

    /// `gHg⁻¹`.
    pub fn conjugate(&self, g: &Word) -> Result<Subgroup> {
        let g = self.group.normal_form(g)?;
        match &self.oracle {
            Oracle::Abelian(_) => Ok(self.clone()),
            Oracle::Free(graph) => {
                let conj = graph.conjugate(&g);
                let gens = conj.basis();
                Ok(Subgroup {
                    group: self.group.clone(),
                    generators: gens,
                    oracle: Oracle::Free(conj),
                })
            }
            Oracle::Surface => {
                let gens = self
                    .generators
                    .iter()
                    .map(|h| self.group.conjugate(&g, h))
                    .collect::<Result<Vec<_>>>()?;
                Subgroup::new(&self.group, &gens)
            }
        }
    }

    /// Ids of the right cosets `Hx` of the ball vertices.
    pub fn right_coset_ids(&self, ball: &CayleyBall) -> CosetIds {
        match &self.oracle {
            Oracle::Free(g) => dense(ball.words().iter().map(|w| g.right_coset_key(w))),
            Oracle::Abelian(l) => dense(ball.words().iter().map(|w| l.reduce(&self.group.exponent_vector(w)))),
            Oracle::Surface => self.ball_classes(ball, true),
        }
    }

    /// Ids of the left cosets `xH` of the ball vertices.
    pub fn left_coset_ids(&self, ball: &CayleyBall) -> CosetIds {
        match &self.oracle {
            Oracle::Free(g) => dense(ball.words().iter().map(|w| g.left_coset_key(w))),
            Oracle::Abelian(_) => self.right_coset_ids(ball),
            Oracle::Surface => self.ball_classes(ball, false),
        }
    }

    /// Coset classes generated inside the ball by multiplying with generators
    /// on the left (`right == true`, cosets `Hx`) or on the right.
    fn ball_classes(&self, ball: &CayleyBall, right: bool) -> CosetIds {
        let mut uf = UnionFind::new(ball.len());
        for i in 0..ball.len() {
            for h in &self.generators {
                let y = if right {
                    ball.locate(&h.concat(ball.word(i)))
                } else {
                    ball.locate(&ball.word(i).concat(h))
                };
                if let Some(j) = y {
                    uf.union(i, j);
                }
            }
        }
        let (labels, count) = uf.labels();
        CosetIds {
            ids: labels.into_iter().map(|l| l as u32).collect(),
            count,
            exact: self.generators.is_empty(),
        }
    }

    /// Finite index in the ambient group, where decidable.
    pub fn has_finite_index(&self) -> Option<bool> {
        match &self.oracle {
            Oracle::Free(g) => Some(g.index().is_some()),
            Oracle::Abelian(l) => Some(l.index().is_some()),
            Oracle::Surface => self.generators.is_empty().then_some(false),
        }
    }

    /// Number of ends of `H` itself, where known.
    pub fn ends(&self) -> Option<Ends> {
        match &self.oracle {
            Oracle::Free(g) => Some(ends_of_free(g.subgroup_rank())),
            Oracle::Abelian(l) => Some(ends_of_free_abelian(l.rank())),
            Oracle::Surface => match self.generators.len() {
                0 => Some(Ends::Zero),
                1 => Some(Ends::Two),
                _ => None,
            },
        }
    }
}

fn dense<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> CosetIds {
    let mut map: HashMap<K, u32> = HashMap::new();
    let mut ids = Vec::new();
    for k in keys {
        let next = map.len() as u32;
        ids.push(*map.entry(k).or_insert(next));
    }
    CosetIds {
        count: map.len(),
        ids,
        exact: true,
    }
}

/// Exact `gHg⁻¹ ∩ kHk⁻¹ ≠ 1` for free groups, with a basis of the intersection.
pub fn free_conjugate_intersection(h: &Subgroup, g: &Word, k: &Word) -> Result<Option<Vec<Word>>> {
    let graph = h
        .stallings()
        .ok_or_else(|| Error::unsupported("exact intersection", h.group.spec().family_name()))?;
    Ok(crate::stallings::conjugates_intersect(graph, g, k)?.map(|i| i.basis()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_reduction_is_canonical() {
        let l = Lattice::new(2, &[vec![2, 4], vec![0, 6], vec![4, 2]]);
        assert_eq!(l.rank(), 2);
        assert_eq!(l.index(), Some(12));
        for v in [[1i64, 1], [3, -2], [-5, 7]] {
            let shifted = [v[0] + 2 * 3 - 4, v[1] + 4 * 3 - 2 + 6];
            assert_eq!(l.reduce(&v), l.reduce(&shifted));
        }
        assert!(l.contains(&[2, -2]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn axis_lattice() {
        let l = Lattice::new(2, &[vec![1, 0]]);
        assert_eq!(l.reduce(&[5, -3]), vec![0, -3]);
        assert_eq!(l.index(), None);
    }

    #[test]
    fn coset_ids_per_family() {
        let z2 = Group::new(GroupSpec::free_abelian(2).unwrap());
        let h = Subgroup::new(&z2, &[z2.parse_word("(1,0)").unwrap()]).unwrap();
        let b = z2.ball(2).unwrap();
        assert_eq!(h.left_coset_ids(&b).count, 5);

        let f2 = Group::new(GroupSpec::free(2).unwrap());
        let h = Subgroup::new(&f2, &[f2.parse_word("a").unwrap()]).unwrap();
        let b = f2.ball(1).unwrap();
        // H, bH, BH
        assert_eq!(h.left_coset_ids(&b).count, 3);

        let s2 = Group::new(GroupSpec::surface(2).unwrap());
        let h = Subgroup::new(&s2, &[s2.parse_word("a").unwrap()]).unwrap();
        let b = s2.ball(2).unwrap();
        let ids = h.right_coset_ids(&b);
        assert!(!ids.exact);
        let a = b.locate(&s2.parse_word("a").unwrap()).unwrap();
        assert_eq!(ids.ids[0], ids.ids[a]);
    }

    #[test]
    fn surface_membership_is_semi_decided() {
        let s2 = Group::new(GroupSpec::surface(2).unwrap());
        let h = Subgroup::new(&s2, &[s2.parse_word("a").unwrap(), s2.parse_word("b").unwrap()]).unwrap();
        assert_eq!(h.contains(&s2.parse_word("abAB").unwrap()).unwrap(), Tri::Yes);
        assert_eq!(h.contains(&s2.parse_word("c").unwrap()).unwrap(), Tri::Inconclusive);
    }
}
