//! Stallings graphs of finitely generated subgroups of free groups: folding,
//! membership, fiber products, conjugates, commensurability, malnormality
//! and height.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{free_reduce, Letter, Word};
use crate::unionfind::UnionFind;

const NONE: u32 = u32::MAX;

/// Folded, basepointed, labelled core graph. Vertex 0 is the basepoint and
/// vertices are numbered by breadth-first search in letter order, so two
/// graphs of the same subgroup compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    rank: usize,
    /// `trans[v * 2 * rank + letter.rank()]`
    trans: Vec<u32>,
}

impl SubgroupGraph {
    /// The Stallings graph of the subgroup generated by `generators` in the
    /// free group of the given rank.
    pub fn fold(rank: usize, generators: &[Word]) -> Result<SubgroupGraph> {
        let mut n = 1usize;
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        for g in generators {
            if let Some(m) = g.max_generator() {
                if m >= rank {
                    return Err(Error::UnknownLetter {
                        letter: g.to_string(),
                        alphabet: format!("free group of rank {rank}"),
                    });
                }
            }
            let w = free_reduce(g.letters().iter().copied());
            if w.is_empty() {
                continue;
            }
            let mut cur = 0usize;
            for (i, &l) in w.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((cur, l, next));
                cur = next;
            }
        }
        Ok(Self::fold_edges(rank, n, &edges, 0))
    }

    /// Folds an arbitrary labelled graph, prunes it to its core (keeping the
    /// basepoint) and renumbers canonically.
    fn fold_edges(rank: usize, n: usize, edges: &[(usize, Letter, usize)], base: usize) -> SubgroupGraph {
        let mut uf = UnionFind::new(n);
        loop {
            let mut changed = false;
            let mut out: HashMap<(usize, usize), usize> = HashMap::new();
            for &(u, l, v) in edges {
                for (src, lr, dst) in [(u, l.rank(), v), (v, l.inverse().rank(), u)] {
                    let (src, dst) = (uf.find(src), uf.find(dst));
                    match out.get(&(src, lr)) {
                        Some(&t) => {
                            if uf.union(t, dst) {
                                changed = true;
                            }
                        }
                        None => {
                            out.insert((src, lr), dst);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut folded: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for &(u, l, v) in edges {
            let (u, v) = (uf.find(u), uf.find(v));
            if l.is_inverse() {
                folded.insert((v, l.inverse().rank(), u));
            } else {
                folded.insert((u, l.rank(), v));
            }
        }
        let base = uf.find(base);
        Self::core_and_canonicalize(rank, n, folded.into_iter().collect(), base)
    }

    /// `edges` are `(u, positive letter rank, v)` in a folded graph.
    fn core_and_canonicalize(
        rank: usize,
        n: usize,
        mut edges: Vec<(usize, usize, usize)>,
        base: usize,
    ) -> SubgroupGraph {
        loop {
            let mut degree = vec![0usize; n];
            for &(u, _, v) in &edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let before = edges.len();
            edges.retain(|&(u, _, v)| {
                let leaf = |x: usize| x != base && degree[x] <= 1;
                !(leaf(u) || leaf(v))
            });
            if edges.len() == before {
                break;
            }
        }
        let k = 2 * rank;
        let mut adj: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, lr, v) in &edges {
            adj.insert((u, lr), v);
            adj.insert((v, lr + 1), u);
        }
        let mut number = HashMap::new();
        number.insert(base, 0u32);
        let mut order = vec![base];
        let mut queue = VecDeque::from([base]);
        while let Some(x) = queue.pop_front() {
            for lr in 0..k {
                if let Some(&y) = adj.get(&(x, lr)) {
                    if let std::collections::hash_map::Entry::Vacant(e) = number.entry(y) {
                        e.insert(order.len() as u32);
                        order.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut trans = vec![NONE; order.len() * k];
        for (i, &x) in order.iter().enumerate() {
            for lr in 0..k {
                if let Some(y) = adj.get(&(x, lr)) {
                    trans[i * k + lr] = number[y];
                }
            }
        }
        SubgroupGraph { rank, trans }
    }

    /// The subgroup graph of the trivial subgroup.
    pub fn trivial(rank: usize) -> SubgroupGraph {
        SubgroupGraph {
            rank,
            trans: vec![NONE; 2 * rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.trans.len() / (2 * self.rank)
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// Target of the `l`-edge leaving `v`, if any.
    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.trans[v * 2 * self.rank + l.rank()];
        (t != NONE).then_some(t as usize)
    }

    /// Edges `(u, a, v)` with `a` a positive generator.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for u in 0..self.num_vertices() {
            for i in 0..self.rank {
                let l = Letter::generator(i);
                if let Some(v) = self.target(u, l) {
                    out.push((u, l, v));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.trans.iter().step_by(2).filter(|&&t| t != NONE).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_edges() == 0
    }

    /// In a torsion-free group a subgroup is infinite iff it is nontrivial;
    /// a core graph with an edge always carries a cycle.
    pub fn is_infinite(&self) -> bool {
        !self.is_trivial()
    }

    /// Rank of the subgroup as a free group.
    pub fn subgroup_rank(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// Reads `w` from the basepoint as far as possible. Returns the vertex
    /// reached and the number of letters of the reduced word consumed.
    pub fn read_prefix(&self, w: &[Letter]) -> (usize, usize) {
        let mut v = 0;
        for (i, &l) in w.iter().enumerate() {
            match self.target(v, l) {
                Some(t) => v = t,
                None => return (v, i),
            }
        }
        (v, w.len())
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let r = free_reduce(w.letters().iter().copied());
        if r.iter().any(|l| l.index() >= self.rank) {
            return false;
        }
        self.read_prefix(&r) == (0, r.len())
    }

    /// Key of the right coset `Hg`: the vertex reached by reading `g` and the
    /// unread suffix. Equal keys ⟺ equal cosets.
    pub fn right_coset_key(&self, g: &Word) -> (usize, Word) {
        let r = free_reduce(g.letters().iter().copied());
        let (v, k) = self.read_prefix(&r);
        (v, Word::from_letters(r[k..].to_vec()))
    }

    /// Key of the left coset `gH`, via `gH = kH ⟺ Hg⁻¹ = Hk⁻¹`.
    pub fn left_coset_key(&self, g: &Word) -> (usize, Word) {
        self.right_coset_key(&g.inverse())
    }

    /// ShortLex-least words reading from the basepoint to each vertex.
    pub fn spanning_paths(&self) -> Vec<Word> {
        let n = self.num_vertices();
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for lr in 0..2 * self.rank {
                let l = Letter::from_rank(lr);
                if let Some(y) = self.target(x, l) {
                    if path[y].is_none() {
                        let mut w = path[x].clone().expect("visited");
                        w.push(l);
                        path[y] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        path.into_iter().map(|p| p.expect("core graph is connected")).collect()
    }

    /// A free basis read off the spanning tree of ShortLex paths.
    pub fn basis(&self) -> Vec<Word> {
        let paths = self.spanning_paths();
        let mut tree: HashSet<(usize, usize)> = HashSet::new();
        for (v, p) in paths.iter().enumerate().skip(1) {
            let l = p.last().expect("nonempty path");
            let u = self.target(v, l.inverse()).expect("inverse edge");
            tree.insert((u, l.rank()));
            tree.insert((v, l.inverse().rank()));
        }
        let mut out = Vec::new();
        for (u, l, v) in self.edges() {
            if tree.contains(&(u, l.rank())) {
                continue;
            }
            let w = paths[u].concat(&Word::letter(l)).concat(&paths[v].inverse());
            out.push(Word::from_letters(free_reduce(w.into_letters())));
        }
        out.sort();
        out
    }

    /// Index in the ambient free group, if finite (the graph is a covering).
    pub fn index(&self) -> Option<usize> {
        self.trans.iter().all(|&t| t != NONE).then(|| self.num_vertices())
    }

    /// The Stallings graph of `gHg⁻¹`.
    pub fn conjugate(&self, g: &Word) -> SubgroupGraph {
        let g = free_reduce(g.letters().iter().copied());
        let n0 = self.num_vertices();
        let mut edges: Vec<(usize, Letter, usize)> = self.edges();
        let new_base = n0;
        let mut n = n0 + 1;
        let mut cur = new_base;
        for (i, &l) in g.iter().enumerate() {
            let next = if i + 1 == g.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            edges.push((cur, l, next));
            cur = next;
        }
        let base = if g.is_empty() { 0 } else { new_base };
        Self::fold_edges(self.rank, n, &edges, base)
    }

    /// Whether `H ∩ K` has finite index in both.
    pub fn commensurable(&self, other: &SubgroupGraph) -> Result<bool> {
        let p = ProductGraph::new(&[self, other])?;
        let comp = p.component_of(&p.basepoint());
        let core = p.core_of(&comp, p.basepoint_id());
        for &x in &core.vertices {
            for (factor, g) in [self, other].iter().enumerate() {
                let coord = p.tuple(x)[factor] as usize;
                for lr in 0..2 * self.rank {
                    let l = Letter::from_rank(lr);
                    let has_here = core.has_edge(&p, x, l);
                    let has_there = g.target(coord, l).is_some();
                    if has_here != has_there {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Malnormality: every non-basepoint component of `Γ×Γ` is a tree. On
    /// failure returns `g ∉ H` with `H^g ∩ H` infinite.
    pub fn malnormality(&self) -> Result<Malnormality> {
        if self.is_trivial() {
            return Err(Error::Precondition(
                "malnormality is tested for infinite subgroups; this one is trivial".into(),
            ));
        }
        let report = fiber_product(self, self)?;
        let witness = report
            .components
            .iter()
            .filter(|c| !c.contains_basepoint && c.infinite)
            .filter_map(|c| c.representative.clone())
            .min();
        Ok(match witness {
            None => Malnormality::Malnormal,
            Some(g) => Malnormality::NotMalnormal { witness: g },
        })
    }

    pub fn is_almost_malnormal(&self) -> Result<bool> {
        Ok(matches!(self.malnormality()?, Malnormality::Malnormal))
    }

    /// Largest `n ≤ max_n` such that `n` conjugates `g_iHg_i⁻¹` by distinct
    /// cosets `g_iH` have infinite intersection, or `ExceededBound` if
    /// `max_n + 1` such conjugates exist.
    pub fn height(&self, max_n: usize) -> Result<Height> {
        if self.is_trivial() {
            return Err(Error::Precondition(
                "height is defined here for infinite subgroups".into(),
            ));
        }
        if max_n == 0 {
            return Err(Error::Precondition("max_n must be at least 1".into()));
        }
        let n = self.num_vertices();
        // Level 1: the whole graph, which has a cycle.
        let mut level: Vec<Vec<Vec<u32>>> = vec![(0..n as u32).map(|v| vec![v]).collect()];
        let mut h = 1;
        let mut budget: usize = 2_000_000;
        while h <= max_n {
            let mut next: Vec<Vec<Vec<u32>>> = Vec::new();
            let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
            for comp in &level {
                for c in self.extend_component(comp, &mut budget)? {
                    if seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
            if next.is_empty() {
                return Ok(Height::Exact(h));
            }
            if h == max_n {
                return Ok(Height::ExceededBound(max_n));
            }
            level = next;
            h += 1;
        }
        unreachable!("loop returns once h reaches max_n")
    }

    /// Components of `C × Γ` whose new coordinate differs from all others and
    /// which contain a cycle. Components are returned as sorted tuple lists.
    fn extend_component(&self, comp: &[Vec<u32>], budget: &mut usize) -> Result<Vec<Vec<Vec<u32>>>> {
        let n = self.num_vertices();
        let index: HashMap<&[u32], usize> = comp.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let total = comp.len() * n;
        *budget = budget
            .checked_sub(total)
            .ok_or_else(|| Error::size("height search", 2_000_000))?;
        let mut uf = UnionFind::new(total);
        let mut edge_count = vec![0usize; total];
        let step = |t: &[u32], l: Letter| -> Option<Vec<u32>> {
            t.iter()
                .map(|&x| self.target(x as usize, l).map(|y| y as u32))
                .collect()
        };
        for (i, t) in comp.iter().enumerate() {
            for x in 0..n {
                for g in 0..self.rank {
                    let l = Letter::generator(g);
                    let (Some(t2), Some(y)) = (step(t, l), self.target(x, l)) else {
                        continue;
                    };
                    let j = index[t2.as_slice()];
                    uf.union(i * n + x, j * n + y);
                    edge_count[i * n + x] += 1;
                }
            }
        }
        let mut out = Vec::new();
        for class in uf.classes() {
            let (i0, x0) = (class[0] / n, class[0] % n);
            if comp[i0].contains(&(x0 as u32)) {
                continue;
            }
            let edges: usize = class.iter().map(|&v| edge_count[v]).sum();
            if edges < class.len() {
                continue;
            }
            let mut tuples: Vec<Vec<u32>> = class
                .iter()
                .map(|&v| {
                    let mut t = comp[v / n].clone();
                    t.push((v % n) as u32);
                    t
                })
                .collect();
            tuples.sort();
            out.push(tuples);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Malnormality {
    Malnormal,
    NotMalnormal { witness: Word },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Height {
    Exact(usize),
    ExceededBound(usize),
}

/// A product of Stallings graphs over all vertex tuples.
struct ProductGraph<'a> {
    factors: Vec<&'a SubgroupGraph>,
    rank: usize,
    dims: Vec<usize>,
}

struct Component {
    vertices: Vec<usize>,
    member: HashSet<usize>,
}

impl Component {
    fn has_edge(&self, p: &ProductGraph<'_>, x: usize, l: Letter) -> bool {
        p.step(x, l).is_some_and(|y| self.member.contains(&y))
    }
}

impl<'a> ProductGraph<'a> {
    fn new(factors: &[&'a SubgroupGraph]) -> Result<ProductGraph<'a>> {
        let rank = factors[0].rank;
        if factors.iter().any(|f| f.rank != rank) {
            return Err(Error::Precondition(
                "subgroup graphs live in free groups of different ranks".into(),
            ));
        }
        Ok(ProductGraph {
            factors: factors.to_vec(),
            rank,
            dims: factors.iter().map(|f| f.num_vertices()).collect(),
        })
    }

    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn tuple(&self, mut x: usize) -> Vec<u32> {
        let mut t = vec![0u32; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            t[i] = (x % self.dims[i]) as u32;
            x /= self.dims[i];
        }
        t
    }

    fn id(&self, t: &[u32]) -> usize {
        t.iter().zip(&self.dims).fold(0, |acc, (&c, &d)| acc * d + c as usize)
    }

    fn basepoint(&self) -> Vec<u32> {
        vec![0; self.dims.len()]
    }

    fn basepoint_id(&self) -> usize {
        0
    }

    fn step(&self, x: usize, l: Letter) -> Option<usize> {
        let t = self.tuple(x);
        let mut out = Vec::with_capacity(t.len());
        for (f, &c) in self.factors.iter().zip(&t) {
            out.push(f.target(c as usize, l)? as u32);
        }
        Some(self.id(&out))
    }

    fn component_of(&self, t: &[u32]) -> Component {
        let start = self.id(t);
        let mut member = HashSet::from([start]);
        let mut vertices = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for lr in 0..2 * self.rank {
                if let Some(y) = self.step(x, Letter::from_rank(lr)) {
                    if member.insert(y) {
                        vertices.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        vertices.sort_unstable();
        Component { vertices, member }
    }

    /// Prunes hanging trees of a component, keeping `keep`.
    fn core_of(&self, comp: &Component, keep: usize) -> Component {
        let mut member = comp.member.clone();
        loop {
            let leaves: Vec<usize> = member
                .iter()
                .copied()
                .filter(|&x| x != keep)
                .filter(|&x| {
                    let mut deg = 0;
                    for lr in 0..2 * self.rank {
                        if let Some(y) = self.step(x, Letter::from_rank(lr)) {
                            if member.contains(&y) {
                                deg += if y == x { 2 } else { 1 };
                            }
                        }
                    }
                    deg <= 1
                })
                .collect();
            if leaves.is_empty() {
                break;
            }
            for x in leaves {
                member.remove(&x);
            }
        }
        let mut vertices: Vec<usize> = member.iter().copied().collect();
        vertices.sort_unstable();
        Component { vertices, member }
    }

    fn edge_count(&self, comp: &Component) -> usize {
        comp.vertices
            .iter()
            .map(|&x| {
                (0..self.rank)
                    .filter(|&g| comp.has_edge(self, x, Letter::generator(g)))
                    .count()
            })
            .sum()
    }
}

/// One connected component of a fiber product `Γ_A × Γ_B`.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionComponent {
    /// Vertex pairs `(u, v)`, sorted.
    pub vertices: Vec<(usize, usize)>,
    pub contains_basepoint: bool,
    /// Whether the component carries a cycle; equivalently, the conjugate
    /// intersection it represents is infinite.
    pub infinite: bool,
    /// ShortLex-least `g` in the double coset attached to the component, with
    /// `A^g ∩ B` the represented intersection up to conjugacy in `B`. `None`
    /// for the basepoint component.
    pub representative: Option<Word>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    #[serde(skip)]
    pub intersection: SubgroupGraph,
    pub intersection_basis: Vec<Word>,
    pub components: Vec<IntersectionComponent>,
}

/// Fiber product of two Stallings graphs. The basepoint component is the
/// Stallings graph of `A ∩ B`.
pub fn fiber_product(a: &SubgroupGraph, b: &SubgroupGraph) -> Result<IntersectionReport> {
    let p = ProductGraph::new(&[a, b])?;
    let pa = a.spanning_paths();
    let pb = b.spanning_paths();
    let mut seen = vec![false; p.len()];
    let mut components = Vec::new();
    let mut intersection = SubgroupGraph::trivial(a.rank);
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let comp = p.component_of(&p.tuple(start));
        for &x in &comp.vertices {
            seen[x] = true;
        }
        let contains_basepoint = start == 0;
        let infinite = p.edge_count(&comp) >= comp.vertices.len();
        let pairs: Vec<(usize, usize)> = comp
            .vertices
            .iter()
            .map(|&x| {
                let t = p.tuple(x);
                (t[0] as usize, t[1] as usize)
            })
            .collect();
        let representative = if contains_basepoint {
            let core = p.core_of(&comp, 0);
            let mut index: HashMap<usize, usize> = HashMap::new();
            for &x in &core.vertices {
                let k = index.len();
                index.insert(x, k);
            }
            let mut edges = Vec::new();
            for &x in &core.vertices {
                for g in 0..a.rank {
                    let l = Letter::generator(g);
                    if core.has_edge(&p, x, l) {
                        let y = p.step(x, l).expect("edge");
                        edges.push((index[&x], l, index[&y]));
                    }
                }
            }
            intersection = SubgroupGraph::fold_edges(a.rank, index.len(), &edges, index[&0]);
            None
        } else {
            pairs
                .iter()
                .map(|&(u, v)| {
                    let w = pb[v].concat(&pa[u].inverse());
                    Word::from_letters(free_reduce(w.into_letters()))
                })
                .min()
        };
        components.push(IntersectionComponent {
            vertices: pairs,
            contains_basepoint,
            infinite,
            representative,
        });
    }
    Ok(IntersectionReport {
        intersection_basis: intersection.basis(),
        intersection,
        components,
    })
}

/// Whether `gHg⁻¹ ∩ kHk⁻¹` is nontrivial, decided exactly.
pub fn conjugates_intersect(h: &SubgroupGraph, g: &Word, k: &Word) -> Result<Option<SubgroupGraph>> {
    let a = h.conjugate(g);
    let b = h.conjugate(k);
    let report = fiber_product(&a, &b)?;
    Ok((!report.intersection.is_trivial()).then_some(report.intersection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_letters;

    fn w(s: &str) -> Word {
        parse_letters(s, 2).unwrap()
    }

    fn sg(gens: &[&str]) -> SubgroupGraph {
        SubgroupGraph::fold(2, &gens.iter().map(|s| w(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cyclic_subgroup_is_a_loop() {
        let h = sg(&["a"]);
        assert_eq!(h.num_vertices(), 1);
        assert_eq!(h.edges(), vec![(0, Letter::generator(0), 0)]);
    }

    #[test]
    fn membership_examples() {
        let h = sg(&["aa", "b"]);
        assert!(!h.accepts(&w("a")));
        assert!(h.accepts(&w("aa")));
        assert!(h.accepts(&w("b")));
        let k = sg(&["abA"]);
        assert!(k.accepts(&w("abA")));
        assert!(!k.accepts(&w("b")));
    }

    #[test]
    fn folding_is_order_independent() {
        assert_eq!(sg(&["ab", "aab", "b"]), sg(&["b", "aab", "ab"]));
        assert_eq!(sg(&["ab", "b"]), sg(&["a", "b"]));
        assert_eq!(sg(&["ab", "b"]).index(), Some(1));
    }

    #[test]
    fn fiber_product_examples() {
        let r = fiber_product(&sg(&["a"]), &sg(&["aa"])).unwrap();
        assert_eq!(r.intersection, sg(&["aa"]));
        let r = fiber_product(&sg(&["a"]), &sg(&["b"])).unwrap();
        assert!(r.intersection.is_trivial());
        let r = fiber_product(&sg(&["aa", "b"]), &sg(&["aaa", "b"])).unwrap();
        assert!(r.intersection.accepts(&w("aaaaaa")));
        assert!(r.intersection.accepts(&w("b")));
        assert!(!r.intersection.accepts(&w("aa")));
    }

    #[test]
    fn conjugate_examples() {
        let h = sg(&["a"]);
        assert_eq!(h.conjugate(&w("b")), sg(&["baB"]));
        assert_eq!(h.conjugate(&w("a")), h);
        assert!(sg(&["aa", "b"]).conjugate(&w("a")).accepts(&w("abA")));
    }

    #[test]
    fn commensurability_examples() {
        assert!(sg(&["a"]).commensurable(&sg(&["aa"])).unwrap());
        assert!(!sg(&["a"]).commensurable(&sg(&["b"])).unwrap());
        assert!(!sg(&["aa", "b"]).commensurable(&sg(&["a"])).unwrap());
        assert!(sg(&["a", "b"]).commensurable(&sg(&["aa", "bb", "ab"])).unwrap());
    }

    #[test]
    fn malnormality_examples() {
        assert_eq!(sg(&["a"]).malnormality().unwrap(), Malnormality::Malnormal);
        assert_eq!(sg(&["ab"]).malnormality().unwrap(), Malnormality::Malnormal);
        assert_eq!(
            sg(&["aa"]).malnormality().unwrap(),
            Malnormality::NotMalnormal { witness: w("a") }
        );
        assert!(SubgroupGraph::trivial(2).malnormality().is_err());
    }

    #[test]
    fn height_examples() {
        assert_eq!(sg(&["a"]).height(4).unwrap(), Height::Exact(1));
        // ⟨a²⟩ has two conjugating cosets H, aH inside its commensurator ⟨a⟩.
        assert_eq!(sg(&["aa"]).height(4).unwrap(), Height::Exact(2));
        assert_eq!(sg(&["aa", "bb", "ab"]).height(3).unwrap(), Height::Exact(2));
        assert_eq!(sg(&["aaa"]).height(2).unwrap(), Height::ExceededBound(2));
    }

    #[test]
    fn coset_keys() {
        let h = sg(&["a"]);
        assert_eq!(h.right_coset_key(&w("ab")), h.right_coset_key(&w("b")));
        assert_ne!(h.right_coset_key(&w("ba")), h.right_coset_key(&w("b")));
        assert_eq!(h.left_coset_key(&w("ba")), h.left_coset_key(&w("b")));
    }

    #[test]
    fn basis_generates_the_subgroup() {
        let h = sg(&["aa", "bab"]);
        let again = SubgroupGraph::fold(2, &h.basis()).unwrap();
        assert_eq!(again, h);
        assert_eq!(h.subgroup_rank(), 2);
    }
}
