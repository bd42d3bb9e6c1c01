//! Truncated C-complexes: cosets `gH` joined when their conjugates have
//! infinite intersection.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CayleyBall, Group, Word};
use crate::stallings::{fiber_product, SubgroupGraph};
use crate::subgroup::Subgroup;
use crate::unionfind::UnionFind;
use crate::verdict::Tri;

/// Largest supported cell dimension.
pub const MAX_DIM_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Fiber products of Stallings graphs; free groups only.
    Exact,
    /// Search of a Cayley ball for a common nontrivial element.
    Witness,
}

impl OracleMode {
    pub fn default_for(group: &Group) -> OracleMode {
        if group.spec().is_free() {
            OracleMode::Exact
        } else {
            OracleMode::Witness
        }
    }
}

impl std::str::FromStr for OracleMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(OracleMode::Exact),
            "witness" | "witness-bounded" => Ok(OracleMode::Witness),
            other => Err(format!("unknown mode `{other}` (expected exact or witness)")),
        }
    }
}

impl std::fmt::Display for OracleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleMode::Exact => "exact",
            OracleMode::Witness => "witness",
        })
    }
}

/// Verdict on whether `∩ g_iHg_i⁻¹` is infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IntersectionVerdict {
    /// A free basis of the intersection, from an exact fiber product.
    InfiniteWithCertificate {
        basis: Vec<Word>,
    },
    /// A nontrivial common element; in a torsion-free group this proves the
    /// intersection infinite.
    InfiniteWithWitness {
        witness: Word,
    },
    /// No nontrivial common element in the ball of this radius.
    NoWitnessUpTo {
        radius: usize,
    },
    TrivialExact,
}

impl IntersectionVerdict {
    pub fn is_infinite(&self) -> Tri {
        match self {
            IntersectionVerdict::InfiniteWithCertificate { .. } | IntersectionVerdict::InfiniteWithWitness { .. } => {
                Tri::Yes
            }
            IntersectionVerdict::TrivialExact => Tri::No,
            IntersectionVerdict::NoWitnessUpTo { .. } => Tri::Inconclusive,
        }
    }
}

/// Decides whether `gHg⁻¹ ∩ kHk⁻¹` is infinite.
pub fn infinite_intersection(
    h: &Subgroup,
    g: &Word,
    k: &Word,
    mode: OracleMode,
    witness_ball: Option<&CayleyBall>,
) -> Result<IntersectionVerdict> {
    let group = h.group();
    let quotient = group.multiply(&group.inverse(g)?, k)?;
    if h.contains(&quotient)? == Tri::Yes {
        return Err(Error::Precondition(format!(
            "cosets {}H and {}H coincide; the pair is not essentially distinct",
            group.format_element(g),
            group.format_element(k)
        )));
    }
    match mode {
        OracleMode::Exact => {
            let graph = exact_graph(h)?;
            let a = graph.conjugate(g);
            let b = graph.conjugate(k);
            let report = fiber_product(&a, &b)?;
            Ok(if report.intersection.is_trivial() {
                IntersectionVerdict::TrivialExact
            } else {
                IntersectionVerdict::InfiniteWithCertificate {
                    basis: report.intersection_basis,
                }
            })
        }
        OracleMode::Witness => {
            let ball = witness_ball.ok_or_else(|| Error::Precondition("witness mode needs a search ball".into()))?;
            let a = conjugate_members(h, g, ball)?;
            let b = conjugate_members(h, k, ball)?;
            let mut both = a;
            both.intersect_with(&b);
            Ok(first_nontrivial(&both)
                .map(|i| IntersectionVerdict::InfiniteWithWitness {
                    witness: ball.word(i).clone(),
                })
                .unwrap_or(IntersectionVerdict::NoWitnessUpTo { radius: ball.radius() }))
        }
    }
}

fn exact_graph(h: &Subgroup) -> Result<&SubgroupGraph> {
    h.stallings()
        .ok_or_else(|| Error::unsupported("exact intersection oracle", h.group().spec().family_name()))
}

/// Ball elements `w` with `g⁻¹wg ∈ H`, i.e. the part of `gHg⁻¹` in the ball.
fn conjugate_members(h: &Subgroup, g: &Word, ball: &CayleyBall) -> Result<FixedBitSet> {
    let gi = g.inverse();
    let mut set = FixedBitSet::with_capacity(ball.len());
    for (i, w) in ball.words().iter().enumerate() {
        let c = gi.concat(w).concat(g);
        if h.contains(&c)? == Tri::Yes {
            set.insert(i);
        }
    }
    Ok(set)
}

fn first_nontrivial(set: &FixedBitSet) -> Option<usize> {
    set.ones().find(|&i| i != 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CEdge {
    pub a: usize,
    pub b: usize,
    pub evidence: IntersectionVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub evidence: IntersectionVerdict,
}

/// The C-complex restricted to cosets with a representative in `Ball(R)`.
#[derive(Clone, Debug, Serialize)]
pub struct CComplex {
    pub radius: usize,
    pub mode: OracleMode,
    pub dim_cap: usize,
    /// ShortLex-least coset representatives, in ShortLex order.
    pub vertices: Vec<Word>,
    /// Whether distinct vertices are certainly distinct cosets.
    pub cosets_exact: bool,
    pub edges: Vec<CEdge>,
    /// Pairs with no edge whose verdict is `NoWitnessUpTo`.
    pub undecided_pairs: usize,
    /// `cells[d]` holds the `d`-cells for `2 ≤ d ≤ dim_cap`; `cells[0]` and
    /// `cells[1]` are left empty (they are the vertices and edges).
    pub cells: Vec<Vec<Cell>>,
}

/// Distinct left cosets `gH` meeting `Ball(R)`, with ShortLex-least representatives.
pub fn enumerate_cosets(h: &Subgroup, ball: &CayleyBall) -> (Vec<Word>, bool) {
    let ids = h.left_coset_ids(ball);
    let mut seen = vec![false; ids.count];
    let mut reps = Vec::new();
    for (i, &c) in ids.ids.iter().enumerate() {
        if !seen[c as usize] {
            seen[c as usize] = true;
            reps.push(ball.word(i).clone());
        }
    }
    (reps, ids.exact)
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub radius: usize,
    pub mode: OracleMode,
    pub dim_cap: usize,
    /// Radius of the witness search ball; defaults to `radius`.
    pub witness_radius: Option<usize>,
}

impl CComplex {
    pub fn build(h: &Subgroup, opts: &BuildOptions) -> Result<CComplex> {
        if opts.dim_cap > MAX_DIM_CAP {
            return Err(Error::size("dim_cap", MAX_DIM_CAP));
        }
        let group = h.group();
        if opts.mode == OracleMode::Exact {
            exact_graph(h)?;
        }
        let ball = group.ball(opts.radius)?;
        let (vertices, cosets_exact) = enumerate_cosets(h, &ball);
        let n = vertices.len();

        enum Data {
            Exact(Vec<SubgroupGraph>),
            Witness(Vec<FixedBitSet>),
        }
        let witness_words: Option<CayleyBall> = match opts.mode {
            OracleMode::Witness => {
                let wr = opts.witness_radius.unwrap_or(opts.radius);
                Some(if wr == opts.radius { ball } else { group.ball(wr)? })
            }
            OracleMode::Exact => None,
        };
        let data = match &witness_words {
            None => {
                let graph = exact_graph(h)?;
                Data::Exact(vertices.par_iter().map(|g| graph.conjugate(g)).collect())
            }
            Some(wball) => Data::Witness(
                vertices
                    .par_iter()
                    .map(|g| conjugate_members(h, g, wball))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };

        // A cell is carried as (vertex tuple, intersection data).
        enum Carrier {
            Graph(SubgroupGraph),
            Set(FixedBitSet),
        }
        let verdict_of = |c: &Carrier| -> IntersectionVerdict {
            match c {
                Carrier::Graph(g) => {
                    if g.is_trivial() {
                        IntersectionVerdict::TrivialExact
                    } else {
                        IntersectionVerdict::InfiniteWithCertificate { basis: g.basis() }
                    }
                }
                Carrier::Set(s) => match first_nontrivial(s) {
                    Some(i) => IntersectionVerdict::InfiniteWithWitness {
                        witness: witness_words.as_ref().expect("witness ball").word(i).clone(),
                    },
                    None => IntersectionVerdict::NoWitnessUpTo {
                        radius: witness_words.as_ref().expect("witness ball").radius(),
                    },
                },
            }
        };
        let extend = |c: &Carrier, v: usize| -> Result<Carrier> {
            Ok(match (c, &data) {
                (Carrier::Graph(g), Data::Exact(gs)) => Carrier::Graph(fiber_product(g, &gs[v])?.intersection),
                (Carrier::Set(s), Data::Witness(sets)) => {
                    let mut s = s.clone();
                    s.intersect_with(&sets[v]);
                    Carrier::Set(s)
                }
                _ => unreachable!("carrier matches oracle mode"),
            })
        };
        let seed = |v: usize| -> Carrier {
            match &data {
                Data::Exact(gs) => Carrier::Graph(gs[v].clone()),
                Data::Witness(sets) => Carrier::Set(sets[v].clone()),
            }
        };
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let pair_results: Vec<(usize, usize, Carrier, IntersectionVerdict)> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let c = extend(&seed(a), b)?;
                let v = verdict_of(&c);
                Ok((a, b, c, v))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut adjacent = vec![FixedBitSet::with_capacity(n); n];
        let mut edges = Vec::new();
        let mut undecided_pairs = 0;
        let mut frontier: Vec<(Vec<usize>, Carrier)> = Vec::new();
        for (a, b, c, v) in pair_results {
            match v.is_infinite() {
                Tri::Yes => {
                    adjacent[a].insert(b);
                    adjacent[b].insert(a);
                    edges.push(CEdge { a, b, evidence: v });
                    frontier.push((vec![a, b], c));
                }
                Tri::Inconclusive => undecided_pairs += 1,
                Tri::No => {}
            }
        }

        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(), Vec::new()];
        for _dim in 2..=opts.dim_cap {
            let candidates: Vec<(usize, usize)> = frontier
                .iter()
                .enumerate()
                .flat_map(|(fi, (tuple, _))| {
                    let last = *tuple.last().expect("nonempty");
                    let adjacent = &adjacent;
                    (last + 1..n)
                        .filter(move |&v| tuple.iter().all(|&u| adjacent[u].contains(v)))
                        .map(move |v| (fi, v))
                })
                .collect();
            let extended: Vec<(Vec<usize>, Carrier, IntersectionVerdict)> = candidates
                .par_iter()
                .map(|&(fi, v)| {
                    let (tuple, c) = &frontier[fi];
                    let c2 = extend(c, v)?;
                    let verdict = verdict_of(&c2);
                    let mut t = tuple.clone();
                    t.push(v);
                    Ok((t, c2, verdict))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut next = Vec::new();
            let mut level = Vec::new();
            for (t, c, v) in extended {
                if v.is_infinite() == Tri::Yes {
                    level.push(Cell {
                        vertices: t.clone(),
                        evidence: v,
                    });
                    next.push((t, c));
                }
            }
            cells.push(level);
            frontier = next;
        }

        Ok(CComplex {
            radius: opts.radius,
            mode: opts.mode,
            dim_cap: opts.dim_cap,
            vertices,
            cosets_exact,
            edges,
            undecided_pairs,
            cells,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn components(&self) -> Components {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        let components = uf.classes();
        let qualifier = match (self.mode, self.cosets_exact) {
            (OracleMode::Exact, true) => Qualifier::ExactOnVertices,
            _ => Qualifier::AtTruncation { radius: self.radius },
        };
        Components {
            is_connected: components.len() <= 1,
            is_totally_disconnected: self.edges.is_empty(),
            components,
            qualifier,
        }
    }

    /// Index of the vertex for coset `gH`, if its representative lies in the complex.
    pub fn vertex_of(&self, h: &Subgroup, g: &Word) -> Result<Option<usize>> {
        let group = h.group();
        for (i, v) in self.vertices.iter().enumerate() {
            let q = group.multiply(&group.inverse(v)?, g)?;
            if h.contains(&q)? == Tri::Yes {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Qualifier {
    /// Edges among the listed vertices are decided exactly.
    ExactOnVertices,
    /// Absent edges mean no witness was found at this radius.
    AtTruncation { radius: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Components {
    pub components: Vec<Vec<usize>>,
    pub is_connected: bool,
    pub is_totally_disconnected: bool,
    pub qualifier: Qualifier,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn setup(spec: GroupSpec, gens: &[&str]) -> (Group, Subgroup) {
        let g = Group::new(spec);
        let ws: Vec<Word> = gens.iter().map(|s| g.parse_word(s).unwrap()).collect();
        let h = Subgroup::new(&g, &ws).unwrap();
        (g, h)
    }

    #[test]
    fn coset_enumeration_examples() {
        let (g, h) = setup(GroupSpec::free_abelian(2).unwrap(), &["(1,0)"]);
        let (reps, _) = enumerate_cosets(&h, &g.ball(2).unwrap());
        let shown: Vec<String> = reps.iter().map(|r| g.format_element(r)).collect();
        assert_eq!(shown, ["(0,0)", "(0,1)", "(0,-1)", "(0,2)", "(0,-2)"]);

        let (g, h) = setup(GroupSpec::free(2).unwrap(), &["a"]);
        let (reps, _) = enumerate_cosets(&h, &g.ball(1).unwrap());
        let shown: Vec<String> = reps.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["1", "b", "B"]);

        let (g, h) = setup(GroupSpec::free(2).unwrap(), &["a", "b"]);
        assert_eq!(enumerate_cosets(&h, &g.ball(3).unwrap()).0.len(), 1);
    }

    #[test]
    fn intersection_examples() {
        let (g, h) = setup(GroupSpec::free(2).unwrap(), &["a"]);
        let v = infinite_intersection(
            &h,
            &Word::identity(),
            &g.parse_word("b").unwrap(),
            OracleMode::Exact,
            None,
        )
        .unwrap();
        assert_eq!(v, IntersectionVerdict::TrivialExact);

        let (g, h) = setup(GroupSpec::free(2).unwrap(), &["aa"]);
        let v = infinite_intersection(
            &h,
            &Word::identity(),
            &g.parse_word("a").unwrap(),
            OracleMode::Exact,
            None,
        )
        .unwrap();
        assert_eq!(
            v,
            IntersectionVerdict::InfiniteWithCertificate {
                basis: vec![g.parse_word("aa").unwrap()]
            }
        );

        let (g, h) = setup(GroupSpec::free_abelian(2).unwrap(), &["(1,0)"]);
        let ball = g.ball(2).unwrap();
        let v = infinite_intersection(
            &h,
            &g.parse_word("(0,1)").unwrap(),
            &g.parse_word("(3,-2)").unwrap(),
            OracleMode::Witness,
            Some(&ball),
        )
        .unwrap();
        assert_eq!(
            v,
            IntersectionVerdict::InfiniteWithWitness {
                witness: g.parse_word("(1,0)").unwrap()
            }
        );

        let err = infinite_intersection(
            &h,
            &Word::identity(),
            &g.parse_word("a").unwrap(),
            OracleMode::Witness,
            Some(&ball),
        );
        assert!(err.is_err());
    }

    #[test]
    fn build_examples() {
        let (_, h) = setup(GroupSpec::free_abelian(2).unwrap(), &["(1,0)"]);
        let c = CComplex::build(
            &h,
            &BuildOptions {
                radius: 2,
                mode: OracleMode::Witness,
                dim_cap: 2,
                witness_radius: None,
            },
        )
        .unwrap();
        assert_eq!(c.num_vertices(), 5);
        assert_eq!(c.edges.len(), 10);
        assert_eq!(c.cells[2].len(), 10);
        assert!(c.components().is_connected);

        let (_, h) = setup(GroupSpec::free(2).unwrap(), &["a"]);
        let c = CComplex::build(
            &h,
            &BuildOptions {
                radius: 2,
                mode: OracleMode::Exact,
                dim_cap: 2,
                witness_radius: None,
            },
        )
        .unwrap();
        assert!(c.edges.is_empty());
        assert!(c.components().is_totally_disconnected);

        let (g, h) = setup(GroupSpec::free(2).unwrap(), &["aa"]);
        let c = CComplex::build(
            &h,
            &BuildOptions {
                radius: 1,
                mode: OracleMode::Exact,
                dim_cap: 1,
                witness_radius: None,
            },
        )
        .unwrap();
        let one = c.vertex_of(&h, &Word::identity()).unwrap().unwrap();
        let a = c.vertex_of(&h, &g.parse_word("a").unwrap()).unwrap().unwrap();
        let b = c.vertex_of(&h, &g.parse_word("b").unwrap()).unwrap().unwrap();
        let has = |x: usize, y: usize| c.edges.iter().any(|e| (e.a, e.b) == (x.min(y), x.max(y)));
        assert!(has(one, a));
        assert!(!has(one, b));
        let comps = c.components();
        assert!(comps.components.iter().any(|cl| cl.contains(&one) && cl.contains(&a)));
    }
}
