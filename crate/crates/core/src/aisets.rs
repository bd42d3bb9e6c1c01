//! Almost invariant sets on truncated Cayley graphs: boundaries,
//! H-finiteness profiles, corners, crossing, equivalence, the partial order
//! and coend witnesses.

use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{free_reduce, CayleyBall, Ends, Group, GroupSpec, Letter, Word};
use crate::subgroup::{CosetIds, Lattice, Subgroup};
use crate::unionfind::UnionFind;
use crate::verdict::Tri;

/// Default number of trailing radii inspected by the finiteness classifier.
pub const DEFAULT_WINDOW: usize = 3;

/// The untranslated shape of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleBase {
    /// `{v ∈ ℤⁿ : normal · v ≥ threshold}`.
    HalfSpace { normal: Vec<i64>, threshold: i64 },
    /// Reduced words `s^k · head · w` with `k ∈ ℤ`; without `strip`, words
    /// starting with `head`.
    Head { strip: Option<Letter>, head: Letter },
    /// An explicit finite set of elements, in normal form.
    Extensional { words: Vec<Word> },
}

impl RuleBase {
    pub fn kind(&self) -> &'static str {
        match self {
            RuleBase::HalfSpace { .. } => "halfspace",
            RuleBase::Head { .. } => "head",
            RuleBase::Extensional { .. } => "extensional",
        }
    }
}

impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleBase::HalfSpace { normal, threshold } => {
                let n: Vec<String> = normal.iter().map(|x| x.to_string()).collect();
                write!(f, "halfspace ({})·v >= {threshold}", n.join(","))
            }
            RuleBase::Head { strip, head } => match strip {
                Some(s) => write!(f, "head {}^k {} w", s.to_char(), head.to_char()),
                None => write!(f, "head {} w", head.to_char()),
            },
            RuleBase::Extensional { words } => {
                let w: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                write!(f, "extensional {{{}}}", w.join(", "))
            }
        }
    }
}

/// A rule-defined subset `gX` or `gX*` of the group, attached to the subgroup
/// `H` that stabilizes the base `X`. The translate is stabilized by `gHg⁻¹`.
#[derive(Clone, Debug)]
pub struct AISet {
    pub name: String,
    pub base: RuleBase,
    pub translate: Word,
    pub complemented: bool,
    subgroup: Subgroup,
}

impl AISet {
    pub fn new(name: impl Into<String>, base: RuleBase, subgroup: Subgroup) -> Result<AISet> {
        let group = subgroup.group().clone();
        let base = match base {
            RuleBase::HalfSpace { normal, threshold } => {
                let GroupSpec::FreeAbelian { rank } = group.spec() else {
                    return Err(Error::unsupported("half-space rules", group.spec().family_name()));
                };
                if normal.len() != rank {
                    return Err(Error::Precondition(format!(
                        "half-space normal has {} coordinates, group rank is {rank}",
                        normal.len()
                    )));
                }
                if normal.iter().all(|&x| x == 0) {
                    return Err(Error::Precondition("half-space normal is zero".into()));
                }
                RuleBase::HalfSpace { normal, threshold }
            }
            RuleBase::Head { strip, head } => {
                if !group.spec().is_free() {
                    return Err(Error::unsupported("head rules", group.spec().family_name()));
                }
                let n = group.spec().num_generators();
                let strip = strip.map(|s| Letter::generator(s.index()));
                if head.index() >= n || strip.is_some_and(|s| s.index() >= n) {
                    return Err(Error::UnknownLetter {
                        letter: head.to_char().to_string(),
                        alphabet: format!("{} generators", n),
                    });
                }
                if strip.is_some_and(|s| s.index() == head.index()) {
                    return Err(Error::Precondition(
                        "head letter must differ from the stripped generator".into(),
                    ));
                }
                RuleBase::Head { strip, head }
            }
            RuleBase::Extensional { words } => {
                let mut nf = words.iter().map(|w| group.normal_form(w)).collect::<Result<Vec<_>>>()?;
                nf.sort();
                nf.dedup();
                RuleBase::Extensional { words: nf }
            }
        };
        Ok(AISet {
            name: name.into(),
            base,
            translate: Word::identity(),
            complemented: false,
            subgroup,
        })
    }

    pub fn group(&self) -> &Group {
        self.subgroup.group()
    }

    /// The subgroup attached to the base set.
    pub fn base_subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// `gHg⁻¹`, which stabilizes this translate.
    pub fn stabilizer_subgroup(&self) -> Result<Subgroup> {
        self.subgroup.conjugate(&self.translate)
    }

    /// `g·self`.
    pub fn translated(&self, g: &Word) -> Result<AISet> {
        let mut out = self.clone();
        out.translate = self.group().multiply(g, &self.translate)?;
        Ok(out)
    }

    pub fn complement(&self) -> AISet {
        let mut out = self.clone();
        out.complemented = !out.complemented;
        out
    }

    pub fn label(&self) -> String {
        let star = if self.complemented { "*" } else { "" };
        if self.translate.is_empty() {
            format!("{}{star}", self.name)
        } else {
            format!("{}·{}{star}", self.group().format_element(&self.translate), self.name)
        }
    }

    fn base_contains_letters(&self, x: &[Letter]) -> bool {
        match &self.base {
            RuleBase::HalfSpace { normal, threshold } => {
                let mut dot = 0i64;
                for l in x {
                    let s = if l.is_inverse() { -1 } else { 1 };
                    dot += s * normal[l.index()];
                }
                dot >= *threshold
            }
            RuleBase::Head { strip, head } => {
                let r = free_reduce(x.iter().copied());
                let skip = match strip {
                    Some(s) => r.iter().take_while(|l| l.index() == s.index()).count(),
                    None => 0,
                };
                r.get(skip) == Some(head)
            }
            RuleBase::Extensional { words } => {
                let g = self.group();
                let w = Word::from_letters(x.to_vec());
                match g.normal_form(&w) {
                    Ok(nf) => words.binary_search(&nf).is_ok(),
                    Err(_) => false,
                }
            }
        }
    }

    /// Exact membership of an arbitrary element.
    pub fn contains(&self, v: &Word) -> Result<bool> {
        self.group().check_word(v)?;
        let x = self.translate.inverse().concat(v);
        Ok(self.base_contains_letters(x.letters()) != self.complemented)
    }

    /// Membership of every ball vertex.
    pub fn evaluate(&self, ball: &CayleyBall) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(ball.len());
        let gi = self.translate.inverse();
        let gi = gi.letters();
        match &self.base {
            RuleBase::Extensional { words } => {
                for w in words {
                    if let Some(i) = ball.locate(&self.translate.concat(w)) {
                        set.insert(i);
                    }
                }
            }
            RuleBase::HalfSpace { normal, threshold } => {
                let dot = |x: &[Letter]| -> i64 {
                    x.iter()
                        .map(|l| {
                            if l.is_inverse() {
                                -normal[l.index()]
                            } else {
                                normal[l.index()]
                            }
                        })
                        .sum()
                };
                let shift = dot(gi);
                let members: Vec<bool> = ball
                    .words()
                    .par_iter()
                    .map(|v| shift + dot(v.letters()) >= *threshold)
                    .collect();
                for (i, m) in members.into_iter().enumerate() {
                    set.set(i, m);
                }
            }
            RuleBase::Head { strip, head } => {
                // Ball words are freely reduced; only the junction of gi·v cancels.
                let members: Vec<bool> = ball
                    .words()
                    .par_iter()
                    .map(|v| {
                        let v = v.letters();
                        let mut k = 0;
                        while k < gi.len() && k < v.len() && gi[gi.len() - 1 - k] == v[k].inverse() {
                            k += 1;
                        }
                        let mut r = gi[..gi.len() - k].iter().chain(&v[k..]);
                        match strip {
                            Some(s) => r.find(|l| l.index() != s.index()) == Some(head),
                            None => r.next() == Some(head),
                        }
                    })
                    .collect();
                for (i, m) in members.into_iter().enumerate() {
                    set.set(i, m);
                }
            }
        }
        if self.complemented {
            set.toggle_range(..);
        }
        set
    }

    /// Whether `HX = X` holds exactly, decided from the rule. `None` when the
    /// rule gives no exact answer.
    pub fn exact_invariance(&self) -> Option<bool> {
        let g = self.group();
        let gens = self.subgroup.generators();
        match &self.base {
            RuleBase::HalfSpace { normal, .. } => Some(gens.iter().all(|h| {
                let v = g.exponent_vector(h);
                v.iter().zip(normal).map(|(a, b)| a * b).sum::<i64>() == 0
            })),
            RuleBase::Head { strip, .. } => Some(gens.iter().all(|h| {
                h.letters()
                    .iter()
                    .all(|l| strip.is_some_and(|s| s.index() == l.index()))
            })),
            RuleBase::Extensional { words } => {
                if words.is_empty() || self.subgroup.is_trivial() {
                    Some(true)
                } else if self.subgroup.is_exact() {
                    // A nonempty finite set is never invariant under an infinite subgroup.
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Exact boundary of the rule set inside the ball: rule membership is
    /// evaluated beyond the rim, so no vertex is left undecided.
    pub fn boundary(&self, ball: &CayleyBall) -> Result<Boundary> {
        let inside = self.evaluate(ball);
        let mut set = FixedBitSet::with_capacity(ball.len());
        for i in inside.ones() {
            for (j, &s) in ball.alphabet().iter().enumerate() {
                let out = match ball.neighbor(i, j) {
                    Some(v) => !inside.contains(v),
                    None => {
                        let mut w = ball.word(i).clone();
                        w.push(s);
                        !self.contains(&w)?
                    }
                };
                if out {
                    set.insert(i);
                    break;
                }
            }
        }
        Ok(Boundary {
            set,
            rim_unknown: FixedBitSet::with_capacity(ball.len()),
        })
    }
}

impl fmt::Display for AISet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.label())?;
        if !self.translate.is_empty() {
            write!(f, "{}·", self.group().format_element(&self.translate))?;
        }
        write!(f, "[{}]", self.base)?;
        if self.complemented {
            f.write_str("*")?;
        }
        Ok(())
    }
}

/// Vertices of `A` with a neighbour in the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub set: FixedBitSet,
    /// Rim vertices of `A` with all ball-neighbours in `A`; their status
    /// depends on vertices outside the ball.
    pub rim_unknown: FixedBitSet,
}

/// Boundary of an explicit vertex set, flagging undecidable rim vertices.
pub fn boundary_of_set(a: &FixedBitSet, ball: &CayleyBall) -> Boundary {
    let mut set = FixedBitSet::with_capacity(ball.len());
    let mut rim_unknown = FixedBitSet::with_capacity(ball.len());
    let k = ball.alphabet().len();
    for i in a.ones() {
        let mut complete = true;
        let mut hit = false;
        for j in 0..k {
            match ball.neighbor(i, j) {
                Some(v) if !a.contains(v) => {
                    hit = true;
                    break;
                }
                Some(_) => {}
                None => complete = false,
            }
        }
        if hit {
            set.insert(i);
        } else if !complete {
            rim_unknown.insert(i);
        }
    }
    Boundary { set, rim_unknown }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Finiteness {
    /// Count constant over the final window.
    HFinite {
        count: usize,
    },
    /// Count strictly increasing over the final window.
    HInfiniteAtTruncation,
    Inconclusive,
}

/// `counts[r-1]` = number of right cosets `Hg` meeting `A ∩ Ball(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessProfile {
    pub counts: Vec<usize>,
    pub window: usize,
    pub class: Finiteness,
}

impl FinitenessProfile {
    pub fn classify(counts: Vec<usize>, window: usize) -> Result<FinitenessProfile> {
        if window < 2 {
            return Err(Error::Precondition(format!("window must be at least 2, got {window}")));
        }
        if window > counts.len() {
            return Err(Error::Precondition(format!(
                "window {window} is larger than the profile radius {}",
                counts.len()
            )));
        }
        let tail = &counts[counts.len() - window..];
        let class = if tail.windows(2).all(|w| w[0] == w[1]) {
            Finiteness::HFinite { count: tail[0] }
        } else if tail.windows(2).all(|w| w[0] < w[1]) {
            Finiteness::HInfiniteAtTruncation
        } else {
            Finiteness::Inconclusive
        };
        Ok(FinitenessProfile { counts, window, class })
    }

    /// `Yes` if H-finite, `No` if H-infinite at truncation.
    pub fn is_finite(&self) -> Tri {
        match self.class {
            Finiteness::HFinite { .. } => Tri::Yes,
            Finiteness::HInfiniteAtTruncation => Tri::No,
            Finiteness::Inconclusive => Tri::Inconclusive,
        }
    }
}

/// Raw coset counts of `A ∩ Ball(r)` for `r = 1..=max_r`.
pub fn coset_counts(a: &FixedBitSet, ids: &CosetIds, ball: &CayleyBall, max_r: usize) -> Vec<usize> {
    let max_r = max_r.min(ball.radius());
    let mut stamp = vec![false; ids.count];
    let mut counts = Vec::with_capacity(max_r);
    let mut distinct = 0;
    let mut r = 0;
    let mut end = ball.within(0).end;
    for i in a.ones() {
        while i >= end {
            if r >= 1 {
                counts.push(distinct);
            }
            r += 1;
            if r > max_r {
                break;
            }
            end = ball.within(r).end;
        }
        if r > max_r {
            break;
        }
        let c = ids.ids[i] as usize;
        if !stamp[c] {
            stamp[c] = true;
            distinct += 1;
        }
    }
    while counts.len() < max_r {
        if r >= 1 {
            counts.push(distinct);
        }
        r += 1;
    }
    counts.truncate(max_r);
    counts
}

pub fn h_finiteness(a: &FixedBitSet, ids: &CosetIds, ball: &CayleyBall, window: usize) -> Result<FinitenessProfile> {
    h_finiteness_up_to(a, ids, ball, ball.radius(), window)
}

pub fn h_finiteness_up_to(
    a: &FixedBitSet,
    ids: &CosetIds,
    ball: &CayleyBall,
    max_r: usize,
    window: usize,
) -> Result<FinitenessProfile> {
    FinitenessProfile::classify(coset_counts(a, ids, ball, max_r), window)
}

/// Ball context shared by the set-level operations: the ball, the window,
/// and right-coset ids of each subgroup in play.
pub struct Workspace {
    pub ball: CayleyBall,
    pub window: usize,
}

impl Workspace {
    pub fn new(group: &Group, radius: usize, window: usize) -> Result<Workspace> {
        if window > radius {
            return Err(Error::Precondition(format!(
                "window {window} is larger than the radius {radius}"
            )));
        }
        Ok(Workspace {
            ball: group.ball(radius)?,
            window,
        })
    }

    pub fn profile(&self, a: &FixedBitSet, h: &Subgroup) -> Result<FinitenessProfile> {
        h_finiteness(a, &h.right_coset_ids(&self.ball), &self.ball, self.window)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NontrivialityReport {
    /// `HX = X`: exact from the rule where possible, otherwise checked on the ball.
    pub invariant: Tri,
    pub invariance_exact: bool,
    pub boundary_profile: FinitenessProfile,
    pub set_profile: FinitenessProfile,
    pub complement_profile: FinitenessProfile,
    pub nontrivial: Tri,
}

/// Checks `HX = X` on the ball with the generators of `H`.
pub fn invariance_on_ball(x: &FixedBitSet, h: &Subgroup, ball: &CayleyBall) -> Tri {
    for gen in h.generators() {
        for g in [gen.clone(), gen.inverse()] {
            for i in 0..ball.len() {
                if let Some(j) = ball.locate(&g.concat(ball.word(i))) {
                    if x.contains(i) != x.contains(j) {
                        return Tri::No;
                    }
                }
            }
        }
    }
    Tri::Yes
}

pub fn is_nontrivial(x: &AISet, ws: &Workspace) -> Result<NontrivialityReport> {
    let h = x.stabilizer_subgroup()?;
    let set = x.evaluate(&ws.ball);
    let (invariant, invariance_exact) = match x.exact_invariance() {
        Some(b) => (Tri::from_bool(b), true),
        None => (invariance_on_ball(&set, &h, &ws.ball), false),
    };
    let ids = h.right_coset_ids(&ws.ball);
    let boundary = x.boundary(&ws.ball)?;
    let boundary_profile = h_finiteness(&boundary.set, &ids, &ws.ball, ws.window)?;
    let set_profile = h_finiteness(&set, &ids, &ws.ball, ws.window)?;
    let mut comp = set.clone();
    comp.toggle_range(..);
    let complement_profile = h_finiteness(&comp, &ids, &ws.ball, ws.window)?;
    let nontrivial = Tri::all([
        invariant,
        boundary_profile.is_finite(),
        set_profile.is_finite().not(),
        complement_profile.is_finite().not(),
    ]);
    Ok(NontrivialityReport {
        invariant,
        invariance_exact,
        boundary_profile,
        set_profile,
        complement_profile,
        nontrivial,
    })
}

/// Corner names in the fixed order used throughout.
pub const CORNER_NAMES: [&str; 4] = ["X∩Y", "X*∩Y", "X∩Y*", "X*∩Y*"];

/// The four corners of a pair with profiles over both stabilizers.
#[derive(Clone, Debug, Serialize)]
pub struct CornerQuad {
    #[serde(skip)]
    pub sets: [FixedBitSet; 4],
    pub sizes: [usize; 4],
    pub empty: [bool; 4],
    pub profiles_x: [FinitenessProfile; 4],
    pub profiles_y: [FinitenessProfile; 4],
}

/// `[X∩Y, X*∩Y, X∩Y*, X*∩Y*]` for membership sets `x`, `y`.
pub fn corner_sets(x: &FixedBitSet, y: &FixedBitSet) -> [FixedBitSet; 4] {
    let mut xc = x.clone();
    xc.toggle_range(..);
    let mut yc = y.clone();
    yc.toggle_range(..);
    let meet = |a: &FixedBitSet, b: &FixedBitSet| {
        let mut s = a.clone();
        s.intersect_with(b);
        s
    };
    [meet(x, y), meet(&xc, y), meet(x, &yc), meet(&xc, &yc)]
}

pub fn corners_from_sets(
    x: &FixedBitSet,
    y: &FixedBitSet,
    ids_x: &CosetIds,
    ids_y: &CosetIds,
    ball: &CayleyBall,
    window: usize,
) -> Result<CornerQuad> {
    let sets = corner_sets(x, y);
    let profile = |s: &FixedBitSet, ids: &CosetIds| h_finiteness(s, ids, ball, window);
    let profiles_x = [
        profile(&sets[0], ids_x)?,
        profile(&sets[1], ids_x)?,
        profile(&sets[2], ids_x)?,
        profile(&sets[3], ids_x)?,
    ];
    let profiles_y = [
        profile(&sets[0], ids_y)?,
        profile(&sets[1], ids_y)?,
        profile(&sets[2], ids_y)?,
        profile(&sets[3], ids_y)?,
    ];
    let sizes = [0, 1, 2, 3].map(|i| sets[i].count_ones(..));
    Ok(CornerQuad {
        empty: sizes.map(|s| s == 0),
        sizes,
        sets,
        profiles_x,
        profiles_y,
    })
}

pub fn corners(x: &AISet, y: &AISet, ws: &Workspace) -> Result<CornerQuad> {
    let hx = x.stabilizer_subgroup()?;
    let hy = y.stabilizer_subgroup()?;
    corners_from_sets(
        &x.evaluate(&ws.ball),
        &y.evaluate(&ws.ball),
        &hx.right_coset_ids(&ws.ball),
        &hy.right_coset_ids(&ws.ball),
        &ws.ball,
        ws.window,
    )
}

impl CornerQuad {
    /// Crossing judged with the profiles over `X`'s subgroup: every corner
    /// H-infinite.
    pub fn crosses_x(&self) -> Tri {
        Tri::all(self.profiles_x.iter().map(|p| p.is_finite().not()))
    }

    /// The same judgement with the profiles over `Y`'s subgroup.
    pub fn crosses_y(&self) -> Tri {
        Tri::all(self.profiles_y.iter().map(|p| p.is_finite().not()))
    }

    /// Corner smallness over the given side's subgroup.
    fn small(&self, i: usize, over_x: bool) -> Tri {
        if self.empty[i] {
            return Tri::Yes;
        }
        let p = if over_x {
            &self.profiles_x[i]
        } else {
            &self.profiles_y[i]
        };
        p.is_finite()
    }

    /// Small over either subgroup, as in Condition (*).
    fn small_either(&self, i: usize) -> Tri {
        self.small(i, true).or(self.small(i, false))
    }

    /// `X ≤ Y`: `X∩Y*` is empty, or it is the only small corner.
    pub fn x_leq_y(&self) -> Tri {
        leq_from(self, 2)
    }

    /// `Y ≤ X`: `X*∩Y` is empty, or it is the only small corner.
    pub fn y_leq_x(&self) -> Tri {
        leq_from(self, 1)
    }

    /// Condition (*): if two corners are small, one of them is empty.
    /// Smallness is judged over both subgroups; a corner is small if it is
    /// small over either.
    pub fn condition_star(&self) -> Tri {
        let small: Vec<Tri> = (0..4).map(|i| self.small_either(i)).collect();
        let mut verdict = Tri::Yes;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.empty[i] || self.empty[j] {
                    continue;
                }
                // Both nonempty: a violation if both are small.
                let both = small[i].and(small[j]);
                verdict = verdict.and(both.not());
            }
        }
        verdict
    }
}

fn leq_from(q: &CornerQuad, corner: usize) -> Tri {
    if q.empty[corner] {
        return Tri::Yes;
    }
    let mut v = q.small_either(corner);
    for i in 0..4 {
        if i != corner {
            v = v.and(q.small_either(i).not());
        }
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossVerdict {
    /// All four corners infinite over `X`'s subgroup.
    pub crosses: Tri,
    /// All four corners infinite over `Y`'s subgroup.
    pub crosses_reversed: Tri,
    /// Whether the two judgements agree when both are definite.
    pub symmetric: Tri,
}

pub fn crosses(x: &AISet, y: &AISet, ws: &Workspace) -> Result<CrossVerdict> {
    let q = corners(x, y, ws)?;
    Ok(cross_verdict(&q))
}

pub fn cross_verdict(q: &CornerQuad) -> CrossVerdict {
    let a = q.crosses_x();
    let b = q.crosses_y();
    let symmetric = match (a.as_bool(), b.as_bool()) {
        (Some(p), Some(r)) => Tri::from_bool(p == r),
        _ => Tri::Inconclusive,
    };
    CrossVerdict {
        crosses: a,
        crosses_reversed: b,
        symmetric,
    }
}

/// Both off-diagonal corners `X∩Y*`, `X*∩Y` H-finite over `X`'s subgroup.
pub fn equivalent(x: &AISet, y: &AISet, ws: &Workspace) -> Result<Tri> {
    let q = corners(x, y, ws)?;
    Ok(q.small(1, true).and(q.small(2, true)))
}

pub fn leq(u: &AISet, v: &AISet, ws: &Workspace) -> Result<Tri> {
    Ok(corners(u, v, ws)?.x_leq_y())
}

#[derive(Clone, Debug, Serialize)]
pub struct StarViolation {
    pub a: usize,
    pub b: usize,
    pub verdict: Tri,
}

/// Scans every pair of the family for Condition (*).
pub fn check_condition_star(family: &[AISet], ws: &Workspace) -> Result<Vec<StarViolation>> {
    let mut out = Vec::new();
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            let v = corners(&family[a], &family[b], ws)?.condition_star();
            if v != Tri::Yes {
                out.push(StarViolation { a, b, verdict: v });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoendComponent {
    pub size: usize,
    pub profile: FinitenessProfile,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoendReport {
    pub a_profile: FinitenessProfile,
    pub components: Vec<CoendComponent>,
    pub h_infinite_components: usize,
    /// At least two H-infinite components: a witness at truncation for
    /// more than one coend.
    pub witness: bool,
}

/// Components of `Ball(R) − A` with their H-finiteness profiles.
pub fn coend_witness(a: &FixedBitSet, h: &Subgroup, ws: &Workspace) -> Result<CoendReport> {
    let ball = &ws.ball;
    if a.count_ones(..) == 0 {
        return Err(Error::Precondition("A is empty".into()));
    }
    let mut uf = UnionFind::new(ball.len());
    for (u, v, _) in ball.edges() {
        if a.contains(u) == a.contains(v) {
            uf.union(u, v);
        }
    }
    let first = a.ones().next().expect("nonempty");
    if a.ones().any(|i| !uf.same(i, first)) {
        return Err(Error::Precondition("A is not connected in the ball".into()));
    }
    if invariance_on_ball(a, h, ball) != Tri::Yes {
        return Err(Error::Precondition("A is not H-invariant on the ball".into()));
    }
    let ids = h.right_coset_ids(ball);
    let a_profile = h_finiteness(a, &ids, ball, ws.window)?;
    if a_profile.is_finite() != Tri::Yes {
        return Err(Error::Precondition(format!(
            "A is not H-finite at truncation (counts {:?})",
            a_profile.counts
        )));
    }
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; ball.len()];
    for i in 0..ball.len() {
        if a.contains(i) {
            continue;
        }
        let r = uf.find(i);
        if slot[r] == usize::MAX {
            slot[r] = members.len();
            members.push(Vec::new());
        }
        members[slot[r]].push(i);
    }
    let mut components = Vec::new();
    for m in members {
        let mut s = FixedBitSet::with_capacity(ball.len());
        for &i in &m {
            s.insert(i);
        }
        components.push(CoendComponent {
            size: m.len(),
            profile: h_finiteness(&s, &ids, ball, ws.window)?,
        });
    }
    let h_infinite_components = components.iter().filter(|c| c.profile.is_finite() == Tri::No).count();
    Ok(CoendReport {
        a_profile,
        components,
        h_infinite_components,
        witness: h_infinite_components >= 2,
    })
}

/// `R`-neighbourhood of a vertex set inside the ball.
pub fn thicken(a: &FixedBitSet, ball: &CayleyBall, r: usize) -> FixedBitSet {
    let mut cur = a.clone();
    for _ in 0..r {
        let mut next = cur.clone();
        for i in cur.ones() {
            for (_, v) in ball.neighbors(i) {
                next.insert(v);
            }
        }
        cur = next;
    }
    cur
}

#[derive(Clone, Debug, Serialize)]
pub struct NocrossHypotheses {
    pub ends_g: Ends,
    pub ends_h: Option<Ends>,
    pub ends_k: Option<Ends>,
    /// `H ∩ K` finite (trivial, the groups being torsion-free).
    pub intersection_finite: Tri,
    pub all_hold: Tri,
}

#[derive(Clone, Debug, Serialize)]
pub struct NocrossReport {
    pub hypotheses: NocrossHypotheses,
    pub thickening: usize,
    /// `|N(∂X) ∩ N(∂Y)|` inside the ball.
    pub boundary_neighbourhood_meet: usize,
    pub boundary_neighbourhood_profile: FinitenessProfile,
    /// Per corner: `∂C ⊆ (∂X^± ∩ Y^±) ∪ (X^± ∩ ∂Y^±)` on interior vertices.
    pub corner_boundary_rule: [bool; 4],
    pub corners: CornerQuad,
    pub crossing: CrossVerdict,
    /// The lemma's conclusion holds, or its hypotheses fail.
    pub consistent: Tri,
    /// `Y = X` or `Y = X*` as ball sets.
    pub degenerate: bool,
    /// Corners H-finite but K-infinite at truncation, or vice versa.
    pub finiteness_mismatches: Vec<usize>,
}

pub fn nocross_report(x: &AISet, y: &AISet, ws: &Workspace, thickening: usize) -> Result<NocrossReport> {
    let ball = &ws.ball;
    let group = x.group();
    let hx = x.stabilizer_subgroup()?;
    let hy = y.stabilizer_subgroup()?;
    let intersection_finite = intersection_is_trivial(&hx, &hy)?;
    let ends_g = group.ends();
    let ends_h = hx.ends();
    let ends_k = hy.ends();
    let one = |e: Option<Ends>| match e {
        Some(Ends::One) => Tri::Yes,
        Some(_) => Tri::No,
        None => Tri::Inconclusive,
    };
    let all_hold = Tri::all([
        Tri::from_bool(ends_g == Ends::One),
        one(ends_h),
        one(ends_k),
        intersection_finite,
    ]);
    let hypotheses = NocrossHypotheses {
        ends_g,
        ends_h,
        ends_k,
        intersection_finite,
        all_hold,
    };

    let xs = x.evaluate(ball);
    let ys = y.evaluate(ball);
    let bx = x.boundary(ball)?.set;
    let by = y.boundary(ball)?.set;
    let mut meet = thicken(&bx, ball, thickening);
    meet.intersect_with(&thicken(&by, ball, thickening));
    let ids_x = hx.right_coset_ids(ball);
    let ids_y = hy.right_coset_ids(ball);
    let boundary_neighbourhood_profile = h_finiteness(&meet, &ids_x, ball, ws.window)?;

    let q = corners_from_sets(&xs, &ys, &ids_x, &ids_y, ball, ws.window)?;
    let interior = ball.within(ball.radius().saturating_sub(1));
    let x_sides = [xs.clone(), complement(&xs)];
    let y_sides = [ys.clone(), complement(&ys)];
    let bx_sides = [bx.clone(), x.complement().boundary(ball)?.set];
    let by_sides = [by.clone(), y.complement().boundary(ball)?.set];
    let mut corner_boundary_rule = [true; 4];
    for (c, (xi, yi)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        let cb = boundary_of_set(&q.sets[c], ball).set;
        let mut rhs = bx_sides[xi].clone();
        rhs.intersect_with(&y_sides[yi]);
        let mut other = x_sides[xi].clone();
        other.intersect_with(&by_sides[yi]);
        rhs.union_with(&other);
        corner_boundary_rule[c] = cb.ones().filter(|&i| i < interior.end).all(|i| rhs.contains(i));
    }
    let crossing = cross_verdict(&q);
    let consistent = all_hold.not().or(crossing.crosses.not());
    let degenerate = xs == ys || xs == complement(&ys);
    let finiteness_mismatches = (0..4)
        .filter(|&i| {
            let a = q.profiles_x[i].is_finite();
            let b = q.profiles_y[i].is_finite();
            a.is_definite() && b.is_definite() && a != b
        })
        .collect();
    Ok(NocrossReport {
        hypotheses,
        thickening,
        boundary_neighbourhood_meet: meet.count_ones(..),
        boundary_neighbourhood_profile,
        corner_boundary_rule,
        corners: q,
        crossing,
        consistent,
        degenerate,
        finiteness_mismatches,
    })
}

fn complement(s: &FixedBitSet) -> FixedBitSet {
    let mut c = s.clone();
    c.toggle_range(..);
    c
}

/// `H ∩ K = 1`, exact for free and free abelian groups.
pub fn intersection_is_trivial(h: &Subgroup, k: &Subgroup) -> Result<Tri> {
    if let (Some(a), Some(b)) = (h.stallings(), k.stallings()) {
        return Ok(Tri::from_bool(
            crate::stallings::fiber_product(a, b)?.intersection.is_trivial(),
        ));
    }
    if let (Some(a), Some(b)) = (h.lattice(), k.lattice()) {
        return Ok(Tri::from_bool(lattice_intersection_rank(a, b) == 0));
    }
    Ok(if h.is_trivial() || k.is_trivial() {
        Tri::Yes
    } else {
        Tri::Inconclusive
    })
}

/// `rank(L ∩ M) = rank L + rank M − rank(L + M)`.
pub fn lattice_intersection_rank(a: &Lattice, b: &Lattice) -> usize {
    let mut all: Vec<Vec<i64>> = a.basis().to_vec();
    all.extend(b.basis().iter().cloned());
    let sum = Lattice::new(a.dim(), &all);
    a.rank() + b.rank() - sum.rank()
}

/// Profiles of `X Δ Xg` for sample elements `g`; by Cohen's criterion these
/// are H-finite exactly when `∂X` is.
pub fn almost_invariance_sample(x: &AISet, samples: &[Word], ws: &Workspace) -> Result<Vec<FinitenessProfile>> {
    let ball = &ws.ball;
    let h = x.stabilizer_subgroup()?;
    let ids = h.right_coset_ids(ball);
    let xs = x.evaluate(ball);
    let mut out = Vec::new();
    for g in samples {
        let gi = g.inverse();
        let mut sym = FixedBitSet::with_capacity(ball.len());
        for (i, v) in ball.words().iter().enumerate() {
            let in_xg = x.contains(&v.concat(&gi))?;
            if in_xg != xs.contains(i) {
                sym.insert(i);
            }
        }
        out.push(h_finiteness(&sym, &ids, ball, ws.window)?);
    }
    Ok(out)
}
