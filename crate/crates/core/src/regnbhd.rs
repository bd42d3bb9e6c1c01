//! Translate families of almost invariant sets, their cross-connected
//! components, the pretree and bipartite tree they determine, and the tree
//! produced by Dunwoody's criterion together with its quotient.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::aisets::{coset_counts, is_nontrivial, AISet, FinitenessProfile, Workspace};
use crate::ccomplex::{infinite_intersection, BuildOptions, CComplex, OracleMode};
use crate::error::{Error, Result};
use crate::group::{CayleyBall, Ends, Group, Word};
use crate::stallings::SubgroupGraph;
use crate::subgroup::{CosetIds, Lattice, Subgroup};
use crate::unionfind::UnionFind;
use crate::verdict::Tri;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyOptions {
    /// Translates `gX` are taken for `|g| ≤ translate_radius`.
    pub translate_radius: usize,
    /// Radius of the ball on which sets are compared.
    pub radius: usize,
    pub window: usize,
}

/// One element `gX̄` of `Ē`, stored with the orientation `gX`.
#[derive(Clone, Debug)]
pub struct Member {
    pub base: usize,
    pub aiset: AISet,
    pub set: FixedBitSet,
    ids: CosetIds,
}

/// Per-pair corner data, for `x = set[i]`, `y = set[j]` with `i < j`.
/// Corner `c = xbit + 2·ybit`, a set bit meaning the complement.
#[derive(Clone, Debug)]
struct PairData {
    empty: [bool; 4],
    small: [Tri; 4],
}

impl PairData {
    fn crosses(&self) -> Tri {
        Tri::all(self.small.iter().map(|s| s.not()))
    }

    fn condition_star(&self) -> Tri {
        let mut v = Tri::Yes;
        for a in 0..4 {
            for b in a + 1..4 {
                if !self.empty[a] && !self.empty[b] {
                    v = v.and(self.small[a].and(self.small[b]).not());
                }
            }
        }
        v
    }

    /// Whether corner `c` is empty or the only small corner.
    fn leq_via(&self, c: usize) -> Tri {
        if self.empty[c] {
            return Tri::Yes;
        }
        let mut v = self.small[c];
        for i in 0..4 {
            if i != c {
                v = v.and(self.small[i].not());
            }
        }
        v
    }
}

/// A finite piece of `E = {gX_i, gX_i*}`: translates by a ball of group
/// elements, deduplicated by equality as ball sets.
pub struct TranslateFamily {
    pub ws: Workspace,
    pub bases: Vec<AISet>,
    pub members: Vec<Member>,
    pub options: FamilyOptions,
    lookup: HashMap<FixedBitSet, (usize, bool)>,
    pairs: Vec<PairData>,
    leq: Vec<Tri>,
}

/// Oriented element of `E`: `2·member + flipped`.
pub type Oriented = usize;

pub fn star(e: Oriented) -> Oriented {
    e ^ 1
}

fn normalized(set: &FixedBitSet) -> (FixedBitSet, bool) {
    if set.contains(0) {
        let mut c = set.clone();
        c.toggle_range(..);
        (c, true)
    } else {
        (set.clone(), false)
    }
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl TranslateFamily {
    pub fn build(bases: &[AISet], options: FamilyOptions) -> Result<TranslateFamily> {
        let group = bases
            .first()
            .ok_or_else(|| Error::Precondition("a family needs at least one base set".into()))?
            .group()
            .clone();
        if options.translate_radius > options.radius {
            return Err(Error::Precondition(format!(
                "translate radius {} exceeds the ball radius {}",
                options.translate_radius, options.radius
            )));
        }
        let ws = Workspace::new(&group, options.radius, options.window)?;
        let translates = group.ball(options.translate_radius)?;
        let mut lookup = HashMap::new();
        let mut members = Vec::new();
        for (b, base) in bases.iter().enumerate() {
            for g in translates.words() {
                let x = base.translated(g)?;
                let set = x.evaluate(&ws.ball);
                let (key, flipped) = normalized(&set);
                if lookup.contains_key(&key) {
                    continue;
                }
                lookup.insert(key, (members.len(), flipped));
                let ids = x.stabilizer_subgroup()?.right_coset_ids(&ws.ball);
                members.push(Member {
                    base: b,
                    aiset: x,
                    set,
                    ids,
                });
            }
        }
        let n = members.len();
        let index: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let ball = &ws.ball;
        let window = options.window;
        let pairs: Vec<PairData> = index
            .par_iter()
            .map(|&(i, j)| pair_data(&members[i], &members[j], ball, window))
            .collect::<Result<Vec<_>>>()?;
        let mut fam = TranslateFamily {
            ws,
            bases: bases.to_vec(),
            members,
            options,
            lookup,
            pairs,
            leq: Vec::new(),
        };
        fam.leq = fam.compute_leq();
        Ok(fam)
    }

    pub fn group(&self) -> &Group {
        self.bases[0].group()
    }

    /// Number of elements of `Ē`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of oriented elements of `E`.
    pub fn oriented_len(&self) -> usize {
        2 * self.members.len()
    }

    pub fn label(&self, e: Oriented) -> String {
        let x = &self.members[e / 2].aiset;
        if e % 2 == 1 {
            x.complement().label()
        } else {
            x.label()
        }
    }

    pub fn member_label(&self, i: usize) -> String {
        self.members[i].aiset.label()
    }

    fn pair(&self, i: usize, j: usize) -> &PairData {
        &self.pairs[tri_index(self.members.len(), i, j)]
    }

    /// Corner data for members `i`, `j` with the given complement bits.
    fn corner(&self, i: usize, xbit: usize, j: usize, ybit: usize) -> (&PairData, usize) {
        if i < j {
            (self.pair(i, j), xbit + 2 * ybit)
        } else {
            (self.pair(j, i), ybit + 2 * xbit)
        }
    }

    fn compute_leq(&self) -> Vec<Tri> {
        let m = self.oriented_len();
        let mut out = vec![Tri::No; m * m];
        for e in 0..m {
            for f in 0..m {
                let (i, j) = (e / 2, f / 2);
                out[e * m + f] = if i == j {
                    Tri::from_bool(e == f)
                } else {
                    // e ∩ f*: e's complement bit, and f* complemented iff f is not.
                    let (p, c) = self.corner(i, e % 2, j, 1 - f % 2);
                    p.leq_via(c)
                };
            }
        }
        out
    }

    pub fn leq(&self, e: Oriented, f: Oriented) -> Tri {
        self.leq[e * self.oriented_len() + f]
    }

    pub fn crosses(&self, i: usize, j: usize) -> Tri {
        if i == j {
            return Tri::No;
        }
        self.pair(i.min(j), i.max(j)).crosses()
    }

    /// Pairs of `Ē` failing Condition (*), or undecided.
    pub fn condition_star_violations(&self) -> Vec<(usize, usize, Tri)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.pair(i, j).condition_star();
                if v != Tri::Yes {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn crossing_graph(&self) -> CrossingGraph {
        let n = self.len();
        let mut edges = Vec::new();
        let mut inconclusive = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match self.pair(i, j).crosses() {
                    Tri::Yes => edges.push((i, j)),
                    Tri::Inconclusive => inconclusive.push((i, j)),
                    Tri::No => {}
                }
            }
        }
        CrossingGraph {
            nodes: n,
            edges,
            inconclusive,
        }
    }

    /// Cross-connected components, each a sorted list of members.
    pub fn cccs(&self) -> Result<Vec<Vec<usize>>> {
        self.crossing_graph().components()
    }

    /// Reflexivity, antisymmetry and transitivity of `≤` on the oriented family.
    pub fn order_laws(&self) -> OrderLaws {
        let m = self.oriented_len();
        let mut r = OrderLaws {
            reflexive_failures: Vec::new(),
            antisymmetry_failures: Vec::new(),
            transitivity_failures: Vec::new(),
            transitivity_failure_count: 0,
            undecided: 0,
            holds: Tri::Inconclusive,
        };
        for e in 0..m {
            if self.leq(e, e) != Tri::Yes {
                r.reflexive_failures.push(e);
            }
        }
        let mut upper: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(m); m];
        for e in 0..m {
            for f in 0..m {
                match self.leq(e, f) {
                    Tri::Yes => upper[e].insert(f),
                    Tri::Inconclusive => r.undecided += 1,
                    Tri::No => {}
                }
            }
        }
        for e in 0..m {
            for f in upper[e].ones() {
                if f != e && upper[f].contains(e) {
                    r.antisymmetry_failures.push((e, f));
                }
                let mut missing = upper[f].clone();
                missing.difference_with(&upper[e]);
                if let Some(g) = missing.ones().next() {
                    if r.transitivity_failures.len() < 16 {
                        r.transitivity_failures.push((e, f, g));
                    }
                    r.transitivity_failure_count += 1;
                }
            }
        }
        r.holds = Tri::from_bool(
            r.reflexive_failures.is_empty() && r.antisymmetry_failures.is_empty() && r.transitivity_failure_count == 0,
        );
        if r.holds == Tri::Yes && r.undecided > 0 {
            r.holds = Tri::Inconclusive;
        }
        r
    }

    /// The member equal to `g·(member i)` as a ball set, with the
    /// orientation flip, if it is in the family.
    pub fn act(&self, g: &Word, i: usize) -> Result<Option<(usize, bool)>> {
        let x = self.members[i].aiset.translated(g)?;
        let set = x.evaluate(&self.ws.ball);
        let (key, flipped) = normalized(&set);
        Ok(self.lookup.get(&key).map(|&(j, f)| (j, f != flipped)))
    }

    /// Finds the member with the same set as `x`, if any.
    pub fn find(&self, x: &AISet) -> Option<(usize, bool)> {
        let (key, flipped) = normalized(&x.evaluate(&self.ws.ball));
        self.lookup.get(&key).map(|&(j, f)| (j, f != flipped))
    }
}

fn pair_data(a: &Member, b: &Member, ball: &CayleyBall, window: usize) -> Result<PairData> {
    let mut ac = a.set.clone();
    ac.toggle_range(..);
    let mut bc = b.set.clone();
    bc.toggle_range(..);
    let sides = [[&a.set, &b.set], [&ac, &b.set], [&a.set, &bc], [&ac, &bc]];
    let mut empty = [false; 4];
    let mut small = [Tri::Yes; 4];
    for (c, [x, y]) in sides.iter().enumerate() {
        let mut s = (*x).clone();
        s.intersect_with(y);
        if s.is_clear() {
            empty[c] = true;
            continue;
        }
        let pa = FinitenessProfile::classify(coset_counts(&s, &a.ids, ball, ball.radius()), window)?;
        let pb = FinitenessProfile::classify(coset_counts(&s, &b.ids, ball, ball.radius()), window)?;
        small[c] = pa.is_finite().or(pb.is_finite());
    }
    Ok(PairData { empty, small })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderLaws {
    pub reflexive_failures: Vec<Oriented>,
    pub antisymmetry_failures: Vec<(Oriented, Oriented)>,
    pub transitivity_failures: Vec<(Oriented, Oriented, Oriented)>,
    pub transitivity_failure_count: usize,
    pub undecided: usize,
    pub holds: Tri,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Pairs whose crossing verdict is undecided at this truncation.
    pub inconclusive: Vec<(usize, usize)>,
}

impl CrossingGraph {
    pub fn components(&self) -> Result<Vec<Vec<usize>>> {
        if !self.inconclusive.is_empty() {
            let shown: Vec<String> = self
                .inconclusive
                .iter()
                .take(8)
                .map(|(a, b)| format!("({a},{b})"))
                .collect();
            return Err(Error::Inconclusive(format!(
                "{} pair(s) have undecided crossing verdicts: {}",
                self.inconclusive.len(),
                shown.join(" ")
            )));
        }
        let mut uf = UnionFind::new(self.nodes);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        Ok(uf.classes())
    }
}

/// A finite ternary relation `between(x, y, z)`: `y` lies between `x` and `z`.
#[derive(Clone, Debug)]
pub struct Pretree {
    n: usize,
    rel: FixedBitSet,
}

impl Pretree {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> bool) -> Pretree {
        let mut rel = FixedBitSet::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if f(x, y, z) {
                        rel.insert((x * n + y) * n + z);
                    }
                }
            }
        }
        Pretree { n, rel }
    }

    /// Betweenness of cross-connected components: `B` lies between `A` and
    /// `C` if `U ≤ V ≤ W` for some `U ∈ A`, `V ∈ B`, `W ∈ C`.
    pub fn from_family(fam: &TranslateFamily, cccs: &[Vec<usize>]) -> Result<Pretree> {
        let violations = fam.condition_star_violations();
        if let Some(&(i, j, v)) = violations.first() {
            return Err(Error::Precondition(format!(
                "family is not in good position: Condition (*) is {v} for {} and {} ({} violating pair(s))",
                fam.member_label(i),
                fam.member_label(j),
                violations.len()
            )));
        }
        let n = cccs.len();
        let mut ccc_of = vec![0usize; fam.len()];
        for (c, members) in cccs.iter().enumerate() {
            for &m in members {
                ccc_of[m] = c;
            }
        }
        let m = fam.oriented_len();
        let mut lo = vec![FixedBitSet::with_capacity(n); m];
        let mut hi = vec![FixedBitSet::with_capacity(n); m];
        for u in 0..m {
            for v in 0..m {
                match fam.leq(u, v) {
                    Tri::Yes => {
                        lo[v].insert(ccc_of[u / 2]);
                        hi[u].insert(ccc_of[v / 2]);
                    }
                    Tri::Inconclusive => {
                        return Err(Error::Inconclusive(format!(
                            "order between {} and {} is undecided",
                            fam.label(u),
                            fam.label(v)
                        )))
                    }
                    Tri::No => {}
                }
            }
        }
        let mut rel = FixedBitSet::with_capacity(n * n * n);
        for v in 0..m {
            let y = ccc_of[v / 2];
            for x in lo[v].ones() {
                if x == y {
                    continue;
                }
                for z in hi[v].ones() {
                    if z != y && z != x {
                        rel.insert((x * n + y) * n + z);
                    }
                }
            }
        }
        Ok(Pretree { n, rel })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn between(&self, x: usize, y: usize, z: usize) -> bool {
        self.rel.contains((x * self.n + y) * self.n + z)
    }

    /// Checks T0–T3 on all triples (and quadruples for T3) and discreteness.
    pub fn verify(&self) -> PretreeReport {
        let n = self.n;
        let mut r = PretreeReport {
            points: n,
            ..PretreeReport::default()
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !self.between(x, y, z) {
                        continue;
                    }
                    if r.t0.is_none() && x == z {
                        r.t0 = Some(vec![x, y, z]);
                    }
                    if r.t1.is_none() && !self.between(z, y, x) {
                        r.t1 = Some(vec![x, y, z]);
                    }
                    if r.t2.is_none() && self.between(x, z, y) {
                        r.t2 = Some(vec![x, y, z]);
                    }
                    if r.t3.is_none() {
                        for w in 0..n {
                            if w != y && !self.between(x, y, w) && !self.between(w, y, z) {
                                r.t3 = Some(vec![x, y, z, w]);
                                break;
                            }
                        }
                    }
                }
            }
        }
        r.max_interval = (0..n)
            .flat_map(|x| (0..n).map(move |z| (x, z)))
            .map(|(x, z)| (0..n).filter(|&y| self.between(x, y, z)).count())
            .max()
            .unwrap_or(0);
        r.discrete = true;
        r.ok = r.t0.is_none() && r.t1.is_none() && r.t2.is_none() && r.t3.is_none() && r.discrete;
        r
    }

    /// `x`, `y` adjacent: distinct with nothing between them.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        x != y && (0..self.n).all(|z| !self.between(x, z, y))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PretreeReport {
    pub points: usize,
    pub t0: Option<Vec<usize>>,
    pub t1: Option<Vec<usize>>,
    pub t2: Option<Vec<usize>>,
    pub t3: Option<Vec<usize>>,
    /// Largest interval `{y : xyz}`; finite by construction at truncation.
    pub max_interval: usize,
    pub discrete: bool,
    pub ok: bool,
}

/// The tree with `V₀` the pretree points and `V₁` its stars.
#[derive(Clone, Debug, Serialize)]
pub struct BipartiteTree {
    pub v0: usize,
    pub stars: Vec<Vec<usize>>,
    /// `(point, star)` incidences.
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
    pub acyclic: bool,
    pub is_point: bool,
}

impl BipartiteTree {
    pub fn build(p: &Pretree) -> Result<BipartiteTree> {
        let report = p.verify();
        if !report.ok {
            return Err(Error::Precondition(format!("pretree axioms fail: {report:?}")));
        }
        let n = p.len();
        let adj: Vec<FixedBitSet> = (0..n)
            .map(|x| {
                let mut s = FixedBitSet::with_capacity(n);
                for y in 0..n {
                    if p.adjacent(x, y) {
                        s.insert(y);
                    }
                }
                s
            })
            .collect();
        let mut stars = Vec::new();
        let mut r = FixedBitSet::with_capacity(n);
        let mut cand = FixedBitSet::with_capacity(n);
        cand.insert_range(..);
        let excl = FixedBitSet::with_capacity(n);
        bron_kerbosch(&adj, &mut r, cand, excl, &mut stars);
        stars.retain(|s| s.len() >= 2);
        stars.sort();
        let mut edges = Vec::new();
        for (s, members) in stars.iter().enumerate() {
            for &x in members {
                edges.push((x, s));
            }
        }
        let total = n + stars.len();
        let mut uf = UnionFind::new(total);
        let mut acyclic = true;
        for &(x, s) in &edges {
            if !uf.union(x, n + s) {
                acyclic = false;
            }
        }
        let connected = total == 0 || uf.classes().len() == 1;
        Ok(BipartiteTree {
            v0: n,
            is_point: n == 1 && stars.is_empty(),
            stars,
            edges,
            connected,
            acyclic,
        })
    }

    pub fn is_tree(&self) -> bool {
        self.connected && self.acyclic
    }
}

/// How elements of a ball act on the pretree points and the bipartite tree.
#[derive(Clone, Debug, Serialize)]
pub struct TreeAction {
    pub elements: usize,
    /// Point images that left the family.
    pub escaped: usize,
    /// Triples `xyz` with all images defined whose image is not between.
    pub betweenness_violations: usize,
    /// Generators found for each `V₀` vertex, then each `V₁` vertex.
    pub vertex_stabilizers: Vec<Vec<String>>,
}

pub fn tree_action(
    fam: &TranslateFamily,
    cccs: &[Vec<usize>],
    pretree: &Pretree,
    tree: &BipartiteTree,
    radius: usize,
) -> Result<TreeAction> {
    let group = fam.group().clone();
    let mut ccc_of = vec![0usize; fam.len()];
    for (c, members) in cccs.iter().enumerate() {
        for &m in members {
            ccc_of[m] = c;
        }
    }
    let ball = group.ball(radius)?;
    let n = pretree.len();
    let mut escaped = 0;
    let mut violations = 0;
    let mut found: Vec<Vec<Word>> = vec![Vec::new(); n + tree.stars.len()];
    for g in ball.words().iter().skip(1) {
        let mut image: Vec<Option<usize>> = vec![None; n];
        for (c, members) in cccs.iter().enumerate() {
            let mut target = None;
            let mut whole = true;
            for &m in members {
                match fam.act(g, m)? {
                    Some((j, _)) if target.is_none() || target == Some(ccc_of[j]) => target = Some(ccc_of[j]),
                    _ => whole = false,
                }
            }
            if whole {
                image[c] = target;
            } else {
                escaped += 1;
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !pretree.between(x, y, z) {
                        continue;
                    }
                    if let (Some(a), Some(b), Some(c)) = (image[x], image[y], image[z]) {
                        if !pretree.between(a, b, c) {
                            violations += 1;
                        }
                    }
                }
            }
        }
        for p in 0..n {
            if image[p] == Some(p) {
                found[p].push(g.clone());
            }
        }
        for (s, star) in tree.stars.iter().enumerate() {
            let mut moved: Vec<Option<usize>> = star.iter().map(|&p| image[p]).collect();
            moved.sort();
            if moved.iter().all(|x| x.is_some()) && moved.iter().flatten().copied().eq(star.iter().copied()) {
                found[n + s].push(g.clone());
            }
        }
    }
    let vertex_stabilizers = found
        .iter()
        .map(|f| extract_generators(&group, f).map(|ws| ws.iter().map(|w| group.format_element(w)).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeAction {
        elements: ball.len() - 1,
        escaped,
        betweenness_violations: violations,
        vertex_stabilizers,
    })
}

fn bron_kerbosch(adj: &[FixedBitSet], r: &mut FixedBitSet, p: FixedBitSet, x: FixedBitSet, out: &mut Vec<Vec<usize>>) {
    if p.is_clear() && x.is_clear() {
        out.push(r.ones().collect());
        return;
    }
    let pivot = p.ones().chain(x.ones()).max_by_key(|&u| {
        let mut s = p.clone();
        s.intersect_with(&adj[u]);
        s.count_ones(..)
    });
    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = match pivot {
        Some(u) => {
            let mut s = p.clone();
            s.difference_with(&adj[u]);
            s.ones().collect()
        }
        None => p.ones().collect(),
    };
    for v in candidates {
        r.insert(v);
        let mut np = p.clone();
        np.intersect_with(&adj[v]);
        let mut nx = x.clone();
        nx.intersect_with(&adj[v]);
        bron_kerbosch(adj, r, np, nx, out);
        r.set(v, false);
        p.set(v, false);
        x.insert(v);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DunwoodyReport {
    pub elements: usize,
    pub d1_failures: Vec<(Oriented, Oriented)>,
    /// Largest interval `{g : e ≤ g ≤ f}`.
    pub d2_max_interval: usize,
    /// Whether interval sizes agree with the enlarged family.
    pub d2_stable: Tri,
    pub d2_unmatched: usize,
    /// Distinct double cosets `HgH` among the family's translates of each base.
    pub double_coset_census: Vec<usize>,
    pub d3_failures: Vec<(Oriented, Oriented)>,
    pub d4_failures: Vec<(Oriented, Oriented)>,
    pub undecided: usize,
    pub passes: Tri,
}

fn interval_sizes(fam: &TranslateFamily) -> Vec<usize> {
    let m = fam.oriented_len();
    let mut up: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(m); m];
    let mut down: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(m); m];
    for e in 0..m {
        for f in 0..m {
            if fam.leq(e, f) == Tri::Yes {
                up[e].insert(f);
                down[f].insert(e);
            }
        }
    }
    let mut out = vec![0usize; m * m];
    for e in 0..m {
        for f in up[e].ones() {
            let mut s = up[e].clone();
            s.intersect_with(&down[f]);
            out[e * m + f] = s.count_ones(..);
        }
    }
    out
}

/// Checks D1–D4. D2 compares interval sizes with `larger`, the family
/// built with translate and ball radii one step larger.
pub fn verify_dunwoody(fam: &TranslateFamily, larger: Option<&TranslateFamily>) -> Result<DunwoodyReport> {
    let m = fam.oriented_len();
    let mut d1 = Vec::new();
    let mut d3 = Vec::new();
    let mut d4 = Vec::new();
    let mut undecided = 0;
    for e in 0..m {
        for f in 0..m {
            let l = fam.leq(e, f);
            if l == Tri::Inconclusive {
                undecided += 1;
                continue;
            }
            if l == Tri::Yes && fam.leq(star(f), star(e)) == Tri::No {
                d1.push((e, f));
            }
            if e / 2 != f / 2 && e < f {
                let any = Tri::any([
                    fam.leq(e, f),
                    fam.leq(e, star(f)),
                    fam.leq(star(e), f),
                    fam.leq(star(e), star(f)),
                ]);
                if any == Tri::No {
                    d3.push((e, f));
                }
            }
            if l == Tri::Yes && fam.leq(e, star(f)) == Tri::Yes {
                d4.push((e, f));
            }
        }
    }
    let sizes = interval_sizes(fam);
    let d2_max_interval = sizes.iter().copied().max().unwrap_or(0);
    let (d2_stable, d2_unmatched) = match larger {
        None => (Tri::Inconclusive, 0),
        Some(big) => {
            let mut map = vec![None; m];
            let mut unmatched = 0;
            for e in 0..m {
                match big.find(&fam.members[e / 2].aiset) {
                    Some((j, flipped)) => map[e] = Some(2 * j + ((e % 2 == 1) != flipped) as usize),
                    None => unmatched += 1,
                }
            }
            let big_sizes = interval_sizes(big);
            let bm = big.oriented_len();
            let mut stable = true;
            for e in 0..m {
                for f in 0..m {
                    if fam.leq(e, f) != Tri::Yes {
                        continue;
                    }
                    if let (Some(a), Some(b)) = (map[e], map[f]) {
                        if big_sizes[a * bm + b] != sizes[e * m + f] {
                            stable = false;
                        }
                    }
                }
            }
            (Tri::from_bool(stable && unmatched == 0), unmatched)
        }
    };
    let double_coset_census = double_coset_census(fam)?;
    let passes = Tri::from_bool(d1.is_empty() && d3.is_empty() && d4.is_empty())
        .and(if undecided > 0 { Tri::Inconclusive } else { Tri::Yes })
        .and(match d2_stable {
            Tri::No => Tri::No,
            other => other.or(Tri::from_bool(larger.is_none())),
        });
    Ok(DunwoodyReport {
        elements: m,
        d1_failures: d1,
        d2_max_interval,
        d2_stable,
        d2_unmatched,
        double_coset_census,
        d3_failures: d3,
        d4_failures: d4,
        undecided,
        passes,
    })
}

/// Members of each base merged under left multiplication by the base
/// subgroup's generators: `hgX` and `gX` share the double coset `HgH`.
fn double_coset_census(fam: &TranslateFamily) -> Result<Vec<usize>> {
    let mut uf = UnionFind::new(fam.len());
    for (i, m) in fam.members.iter().enumerate() {
        for h in fam.bases[m.base].base_subgroup().generators() {
            for g in [h.clone(), h.inverse()] {
                if let Some((j, _)) = fam.act(&g, i)? {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut per_base = vec![0usize; fam.bases.len()];
    for class in uf.classes() {
        per_base[fam.members[class[0]].base] += 1;
    }
    Ok(per_base)
}

/// The tree with edge set `E`: edge `e` runs from `o(e)` to `t(e) = o(e*)`,
/// and `t(e) = o(f)` whenever `f` covers `e`.
#[derive(Clone, Debug, Serialize)]
pub struct DunwoodyTree {
    pub vertices: usize,
    /// `(o(e), t(e))` for each member `e` of `Ē` in its stored orientation.
    pub edges: Vec<(usize, usize)>,
    pub is_tree: bool,
    pub is_line: bool,
    /// Comparable pairs whose oriented-path test disagrees with `≤`.
    pub path_mismatches: Vec<(Oriented, Oriented)>,
    pub pairs_checked: usize,
}

impl DunwoodyTree {
    pub fn build(fam: &TranslateFamily) -> Result<DunwoodyTree> {
        let m = fam.oriented_len();
        for e in 0..m {
            for f in 0..m {
                if fam.leq(e, f) == Tri::Inconclusive {
                    return Err(Error::Inconclusive(format!(
                        "order between {} and {} is undecided",
                        fam.label(e),
                        fam.label(f)
                    )));
                }
            }
        }
        let lt = |e: usize, f: usize| e != f && fam.leq(e, f) == Tri::Yes;
        let mut uf = UnionFind::new(m);
        for e in 0..m {
            for f in 0..m {
                if f == star(e) || !lt(e, f) {
                    continue;
                }
                let immediate = (0..m).all(|g| g == e || g == f || !(lt(e, g) && lt(g, f)));
                if immediate {
                    // t(e) = o(e*) coincides with o(f).
                    uf.union(star(e), f);
                }
            }
        }
        let (labels, count) = uf.labels();
        let edges: Vec<(usize, usize)> = (0..fam.len()).map(|i| (labels[2 * i], labels[2 * i + 1])).collect();
        let mut tuf = UnionFind::new(count);
        let mut acyclic = true;
        for &(a, b) in &edges {
            if !tuf.union(a, b) {
                acyclic = false;
            }
        }
        let connected = count <= 1 || tuf.classes().len() == 1;
        let mut degree = vec![0usize; count];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let is_tree = acyclic && connected;
        let is_line = is_tree && degree.iter().all(|&d| d <= 2);

        let mut path_mismatches = Vec::new();
        let mut pairs_checked = 0;
        if is_tree {
            let dist = all_distances(count, &edges);
            let o = |e: usize| labels[e];
            let t = |e: usize| labels[star(e)];
            for e in 0..m {
                for f in 0..m {
                    pairs_checked += 1;
                    let path = e == f || dist[o(e)][t(f)] == dist[t(e)][o(f)] + 2;
                    if path != (fam.leq(e, f) == Tri::Yes) {
                        path_mismatches.push((e, f));
                    }
                }
            }
        }
        Ok(DunwoodyTree {
            vertices: count,
            edges,
            is_tree,
            is_line,
            path_mismatches,
            pairs_checked,
        })
    }

    pub fn vertex_of_origin(&self, e: Oriented) -> usize {
        let (o, t) = self.edges[e / 2];
        if e % 2 == 0 {
            o
        } else {
            t
        }
    }
}

fn all_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if d[y] == usize::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeStabilizer {
    pub edge_orbit: usize,
    pub representative: String,
    pub elements_found: usize,
    /// Generators of the subgroup generated by the elements found; not a
    /// claim about the full stabilizer.
    pub generators: Vec<String>,
}

/// The quotient of the tree by the generators of the group, restricted to
/// the truncation.
#[derive(Clone, Debug, Serialize)]
pub struct Quotient {
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    /// Endpoints of each edge orbit, as vertex orbits.
    pub edges: Vec<(usize, usize)>,
    /// Generator moves that left the family.
    pub escaped: usize,
    /// Generator moves that reversed an edge's orientation.
    pub inversions: usize,
    pub stabilizers: Vec<EdgeStabilizer>,
    /// For every edge orbit, the subtree spanned by its edges is the whole tree.
    pub minimal: Tri,
}

pub fn quotient(fam: &TranslateFamily, tree: &DunwoodyTree, stabilizer_radius: usize) -> Result<Quotient> {
    let group = fam.group().clone();
    let gens: Vec<Word> = group.alphabet().into_iter().map(Word::letter).collect();
    let mut edge_uf = UnionFind::new(fam.len());
    let mut vertex_uf = UnionFind::new(tree.vertices);
    let mut escaped = 0;
    let mut inversions = 0;
    for i in 0..fam.len() {
        for g in &gens {
            match fam.act(g, i)? {
                Some((j, flipped)) => {
                    edge_uf.union(i, j);
                    if flipped {
                        inversions += 1;
                    }
                    let (o, t) = tree.edges[i];
                    let (oj, tj) = tree.edges[j];
                    let (o2, t2) = if flipped { (tj, oj) } else { (oj, tj) };
                    vertex_uf.union(o, o2);
                    vertex_uf.union(t, t2);
                }
                None => escaped += 1,
            }
        }
    }
    let (vlabels, vertex_orbits) = vertex_uf.labels();
    let edge_classes = edge_uf.classes();
    let edges: Vec<(usize, usize)> = edge_classes
        .iter()
        .map(|c| {
            let (o, t) = tree.edges[c[0]];
            (vlabels[o], vlabels[t])
        })
        .collect();

    let minimal = if tree.is_tree {
        Tri::from_bool(edge_classes.iter().all(|c| hull_is_everything(tree, c)))
    } else {
        Tri::Inconclusive
    };

    let stab_ball = group.ball(stabilizer_radius)?;
    let mut stabilizers = Vec::new();
    for (orbit, class) in edge_classes.iter().enumerate() {
        let rep = *class
            .iter()
            .min_by_key(|&&i| (fam.members[i].aiset.translate.clone(), i))
            .expect("nonempty class");
        let mut found = Vec::new();
        for g in stab_ball.words().iter().skip(1) {
            if let Some((j, flipped)) = fam.act(g, rep)? {
                if j == rep && !flipped {
                    found.push(g.clone());
                }
            }
        }
        let generators = extract_generators(&group, &found)?;
        stabilizers.push(EdgeStabilizer {
            edge_orbit: orbit,
            representative: fam.member_label(rep),
            elements_found: found.len(),
            generators: generators.iter().map(|w| group.format_element(w)).collect(),
        });
    }
    Ok(Quotient {
        vertex_orbits,
        edge_orbits: edge_classes.len(),
        edges,
        escaped,
        inversions,
        stabilizers,
        minimal,
    })
}

/// Repeatedly prunes leaf edges outside `orbit`; minimal if nothing is pruned.
fn hull_is_everything(tree: &DunwoodyTree, orbit: &[usize]) -> bool {
    let mut alive: Vec<bool> = vec![true; tree.edges.len()];
    let in_orbit: HashSet<usize> = orbit.iter().copied().collect();
    loop {
        let mut degree = vec![0usize; tree.vertices];
        for (i, &(a, b)) in tree.edges.iter().enumerate() {
            if alive[i] {
                degree[a] += 1;
                degree[b] += 1;
            }
        }
        let mut changed = false;
        for (i, &(a, b)) in tree.edges.iter().enumerate() {
            if alive[i] && !in_orbit.contains(&i) && (degree[a] == 1 || degree[b] == 1) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    alive.iter().all(|&a| a)
}

/// Generators of the subgroup generated by `elements`: a Stallings basis,
/// an HNF basis, or a greedy selection.
pub fn extract_generators(group: &Group, elements: &[Word]) -> Result<Vec<Word>> {
    let spec = group.spec();
    if elements.is_empty() {
        return Ok(Vec::new());
    }
    if spec.is_free() {
        let g = SubgroupGraph::fold(spec.num_generators(), elements)?;
        return Ok(g.basis());
    }
    if spec.is_abelian() {
        let vs: Vec<Vec<i64>> = elements.iter().map(|w| group.exponent_vector(w)).collect();
        let l = Lattice::new(spec.num_generators(), &vs);
        return Ok(l.basis().iter().map(|v| group.from_exponents(v)).collect());
    }
    let mut chosen: Vec<Word> = Vec::new();
    for w in elements {
        let h = Subgroup::new(group, &chosen)?;
        if h.contains(w)? != Tri::Yes {
            chosen.push(w.clone());
        }
    }
    Ok(chosen)
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOptions {
    pub family: FamilyOptions,
    pub ccomplex_radius: usize,
    pub mode: OracleMode,
    pub stabilizer_radius: usize,
    /// Proceed although `e(G) ≠ 1`.
    pub override_hypotheses: bool,
    /// Rerun at `(T+1, R+1)` and require the same verdict.
    pub frontier_check: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisAudit {
    pub ends_g: Ends,
    pub one_ended: bool,
    pub overridden: bool,
    pub nontrivial: Vec<(String, Tri)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    /// Crossing pairs with a common base subgroup checked against the
    /// intersection oracle.
    pub pairs_checked: usize,
    pub infinite_confirmed: usize,
    pub violations: Vec<(String, String)>,
    pub undecided: usize,
    /// Crossing pairs whose cosets are both vertices of the C-complex.
    pub same_component: usize,
    pub different_component: usize,
    pub outside_complex: usize,
    /// Crossing pairs from different base subgroups (not covered by the check).
    pub mixed_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SplitVerdict {
    SplittingExhibited { edge_stabilizers: Vec<Vec<String>> },
    PointTree,
    InconclusiveAtTruncation { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySummary {
    pub translate_radius: usize,
    pub radius: usize,
    pub members: Vec<String>,
    pub crossing_edges: Vec<(usize, usize)>,
    pub cccs: Vec<Vec<usize>>,
    pub condition_star_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineRecord {
    pub audit: HypothesisAudit,
    pub ccomplex_vertices: usize,
    pub ccomplex_edges: usize,
    pub ccomplex_components: usize,
    pub ccomplex_totally_disconnected: bool,
    pub family: FamilySummary,
    pub pretree: Option<PretreeReport>,
    pub bipartite_tree: Option<BipartiteTree>,
    pub tree_action: Option<TreeAction>,
    pub dunwoody: Option<DunwoodyReport>,
    pub dunwoody_tree: Option<DunwoodyTree>,
    pub quotient: Option<Quotient>,
    pub cross_check: CrossCheck,
    pub frontier_stable: Tri,
    pub verdict: SplitVerdict,
}

struct Analysis {
    family: FamilySummary,
    pretree: Option<PretreeReport>,
    bipartite_tree: Option<BipartiteTree>,
    tree_action: Option<TreeAction>,
    dunwoody: Option<DunwoodyReport>,
    dunwoody_tree: Option<DunwoodyTree>,
    quotient: Option<Quotient>,
    verdict: SplitVerdict,
    crossing_pairs: Vec<(usize, usize)>,
    fam: TranslateFamily,
}

fn analyze(bases: &[AISet], opts: &PipelineOptions, family: FamilyOptions) -> Result<Analysis> {
    let fam = TranslateFamily::build(bases, family)?;
    let graph = fam.crossing_graph();
    let mut out = Analysis {
        family: FamilySummary {
            translate_radius: family.translate_radius,
            radius: family.radius,
            members: (0..fam.len()).map(|i| fam.member_label(i)).collect(),
            crossing_edges: graph.edges.clone(),
            cccs: Vec::new(),
            condition_star_violations: fam.condition_star_violations().len(),
        },
        pretree: None,
        bipartite_tree: None,
        tree_action: None,
        dunwoody: None,
        dunwoody_tree: None,
        quotient: None,
        verdict: SplitVerdict::PointTree,
        crossing_pairs: graph.edges.clone(),
        fam,
    };
    if let Err(reason) = analyze_steps(&mut out, &graph, bases, opts, family)? {
        out.verdict = SplitVerdict::InconclusiveAtTruncation { reason };
    }
    Ok(out)
}

/// Fills in `out` step by step; `Ok(Err(reason))` stops at truncation.
fn analyze_steps(
    out: &mut Analysis,
    graph: &CrossingGraph,
    bases: &[AISet],
    opts: &PipelineOptions,
    family: FamilyOptions,
) -> Result<std::result::Result<(), String>> {
    let fam = &out.fam;
    let cccs = match graph.components() {
        Ok(c) => c,
        Err(e) => return Ok(Err(e.to_string())),
    };
    out.family.cccs = cccs.clone();
    let pretree = match Pretree::from_family(fam, &cccs) {
        Ok(p) => p,
        Err(e @ (Error::Precondition(_) | Error::Inconclusive(_))) => return Ok(Err(e.to_string())),
        Err(e) => return Err(e),
    };
    let report = pretree.verify();
    let ok = report.ok;
    out.pretree = Some(report);
    if !ok {
        return Ok(Err("pretree axioms fail".into()));
    }
    let bt = BipartiteTree::build(&pretree)?;
    let point = bt.is_point;
    out.tree_action = Some(tree_action(fam, &cccs, &pretree, &bt, opts.stabilizer_radius)?);
    out.bipartite_tree = Some(bt);
    if point {
        out.verdict = SplitVerdict::PointTree;
        return Ok(Ok(()));
    }
    let larger = if opts.frontier_check {
        Some(TranslateFamily::build(
            bases,
            FamilyOptions {
                translate_radius: family.translate_radius + 1,
                radius: family.radius + 1,
                window: family.window,
            },
        )?)
    } else {
        None
    };
    let dw = verify_dunwoody(fam, larger.as_ref())?;
    let passes = dw.passes;
    out.dunwoody = Some(dw);
    if passes != Tri::Yes {
        return Ok(Err(format!("Dunwoody's conditions: {passes}")));
    }
    let tree = DunwoodyTree::build(fam)?;
    let tree_ok = tree.is_tree && tree.path_mismatches.is_empty();
    if !tree_ok {
        out.dunwoody_tree = Some(tree);
        return Ok(Err("edge tree fails the oriented-path characterization".into()));
    }
    let q = quotient(fam, &tree, opts.stabilizer_radius)?;
    out.verdict = SplitVerdict::SplittingExhibited {
        edge_stabilizers: q.stabilizers.iter().map(|s| s.generators.clone()).collect(),
    };
    out.dunwoody_tree = Some(tree);
    out.quotient = Some(q);
    Ok(Ok(()))
}

/// End-to-end: C-complex, translate family, crossings, pretree, tree,
/// Dunwoody's criterion and the quotient, with a frontier-stability rerun.
pub fn split_pipeline(bases: &[AISet], opts: &PipelineOptions) -> Result<PipelineRecord> {
    let group = bases
        .first()
        .ok_or_else(|| Error::Precondition("the pipeline needs a base set".into()))?
        .group()
        .clone();
    let ends_g = group.ends();
    let one_ended = ends_g == Ends::One;
    let mut notes = Vec::new();
    if !one_ended {
        if !opts.override_hypotheses {
            return Err(Error::Precondition(format!(
                "e(G) = {ends_g}, not 1; pass the override flag to run anyway"
            )));
        }
        notes.push(format!("e(G) = {ends_g}: hypothesis overridden"));
    }
    let ws = Workspace::new(&group, opts.family.radius, opts.family.window)?;
    let mut nontrivial = Vec::new();
    for b in bases {
        let r = is_nontrivial(b, &ws)?;
        nontrivial.push((b.label(), r.nontrivial));
    }
    if nontrivial.iter().any(|(_, t)| *t == Tri::No) {
        return Err(Error::Precondition(format!(
            "base sets must be nontrivial almost invariant sets: {nontrivial:?}"
        )));
    }
    let h0 = bases[0].base_subgroup();
    if bases.len() > 1 {
        notes.push(format!("{} base sets: two-subgroup mode", bases.len()));
        for b in &bases[1..] {
            if let Some(e) = b.base_subgroup().ends() {
                if e != Ends::One {
                    notes.push(format!(
                        "{} has {e} end(s), so the crossing lemma's hypotheses fail for mixed pairs",
                        b.base_subgroup().describe()
                    ));
                }
            }
        }
    }

    let cc = CComplex::build(
        h0,
        &BuildOptions {
            radius: opts.ccomplex_radius,
            mode: opts.mode,
            dim_cap: 1,
            witness_radius: None,
        },
    )?;
    let comps = cc.components();
    let mut component_of = vec![0usize; cc.num_vertices()];
    for (c, members) in comps.components.iter().enumerate() {
        for &v in members {
            component_of[v] = c;
        }
    }

    let a = analyze(bases, opts, opts.family)?;

    let witness_ball = match opts.mode {
        OracleMode::Witness => Some(group.ball(opts.ccomplex_radius.max(opts.family.translate_radius))?),
        OracleMode::Exact => None,
    };
    let mut cross = CrossCheck {
        pairs_checked: 0,
        infinite_confirmed: 0,
        violations: Vec::new(),
        undecided: 0,
        same_component: 0,
        different_component: 0,
        outside_complex: 0,
        mixed_pairs: 0,
    };
    for &(i, j) in &a.crossing_pairs {
        let (mi, mj) = (&a.fam.members[i], &a.fam.members[j]);
        if mi.base != mj.base || bases[mi.base].base_subgroup().generators() != h0.generators() {
            cross.mixed_pairs += 1;
            continue;
        }
        cross.pairs_checked += 1;
        match infinite_intersection(
            h0,
            &mi.aiset.translate,
            &mj.aiset.translate,
            opts.mode,
            witness_ball.as_ref(),
        ) {
            Ok(v) => match v.is_infinite() {
                Tri::Yes => cross.infinite_confirmed += 1,
                Tri::No => cross.violations.push((a.fam.member_label(i), a.fam.member_label(j))),
                Tri::Inconclusive => cross.undecided += 1,
            },
            Err(Error::Precondition(_)) => cross.infinite_confirmed += 1,
            Err(e) => return Err(e),
        }
        match (
            cc.vertex_of(h0, &mi.aiset.translate)?,
            cc.vertex_of(h0, &mj.aiset.translate)?,
        ) {
            (Some(u), Some(v)) => {
                if component_of[u] == component_of[v] {
                    cross.same_component += 1;
                } else {
                    cross.different_component += 1;
                }
            }
            _ => cross.outside_complex += 1,
        }
    }

    let mut frontier_stable = Tri::Inconclusive;
    let mut verdict = a.verdict.clone();
    if opts.frontier_check && !matches!(verdict, SplitVerdict::InconclusiveAtTruncation { .. }) {
        let bigger = FamilyOptions {
            translate_radius: opts.family.translate_radius + 1,
            radius: opts.family.radius + 1,
            window: opts.family.window,
        };
        let b = analyze(
            bases,
            &PipelineOptions {
                frontier_check: false,
                ..opts.clone()
            },
            bigger,
        )?;
        let shape = |x: &Analysis| x.quotient.as_ref().map(|q| (q.vertex_orbits, q.edge_orbits));
        let same = b.verdict == a.verdict && shape(&b) == shape(&a);
        frontier_stable = Tri::from_bool(same);
        if !same {
            verdict = SplitVerdict::InconclusiveAtTruncation {
                reason: format!(
                    "verdict changes when the translate and ball radii grow by one ({:?})",
                    b.verdict
                ),
            };
        }
    }
    if !cross.violations.is_empty() {
        notes.push(format!(
            "{} crossing pair(s) with trivial conjugate intersection",
            cross.violations.len()
        ));
    }

    Ok(PipelineRecord {
        audit: HypothesisAudit {
            ends_g,
            one_ended,
            overridden: !one_ended && opts.override_hypotheses,
            nontrivial,
            notes,
        },
        ccomplex_vertices: cc.num_vertices(),
        ccomplex_edges: cc.edges.len(),
        ccomplex_components: comps.components.len(),
        ccomplex_totally_disconnected: comps.is_totally_disconnected,
        family: a.family,
        pretree: a.pretree,
        bipartite_tree: a.bipartite_tree,
        tree_action: a.tree_action,
        dunwoody: a.dunwoody,
        dunwoody_tree: a.dunwoody_tree,
        quotient: a.quotient,
        cross_check: cross,
        frontier_stable,
        verdict,
    })
}

/// Betweenness of three distinct CCCs.
pub fn betweenness(p: &Pretree, a: usize, b: usize, c: usize) -> Result<bool> {
    if a == c || a == b || b == c {
        return Err(Error::Precondition("betweenness needs three distinct points".into()));
    }
    Ok(p.between(a, b, c))
}
