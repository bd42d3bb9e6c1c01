//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails or exceeds its time budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gsplit::aisets::{coend_witness, crosses, is_nontrivial, AISet, RuleBase, Workspace};
use gsplit::ccomplex::{BuildOptions, CComplex, OracleMode};
use gsplit::group::{Group, Letter, Word};
use gsplit::instance::InstanceSpec;
use gsplit::regnbhd::{
    split_pipeline, verify_dunwoody, DunwoodyTree, FamilyOptions, PipelineOptions, Pretree, SplitVerdict,
    TranslateFamily,
};
use gsplit::stallings::{Height, Malnormality, SubgroupGraph};
use gsplit::subgroup::Subgroup;
use gsplit::Tri;

use common::*;

const TIME_LIMIT: Duration = Duration::from_secs(60);
const MEMBERSHIP_WORD_LEN: usize = 6;
const MEMBERSHIP_FACTORS: usize = 8;
const CONJUGATOR_RADIUS: usize = 3;
const COMMON_ELEMENT_LEN: usize = 8;
const MIN_SYMMETRY_PAIRS: usize = 50;
/// Half-planes of slope 2 meet the axis half-planes in corners whose coset
/// counts rise by one every third radius; a window of 3 would read the flat
/// steps as H-finite.
const Z2_SLANTED_WINDOW: usize = 4;
const MAX_TREE_EDGES: usize = 200;
const SEED: u64 = 0x5eed;

type Outcome = Result<(String, Value), String>;

fn word(g: &Group, s: &str) -> Word {
    if s.is_empty() {
        Word::identity()
    } else {
        g.parse_word(s).unwrap()
    }
}

fn subgroup(g: &Group, gens: &[&str]) -> Subgroup {
    let ws: Vec<Word> = gens.iter().map(|s| word(g, s)).collect();
    Subgroup::new(g, &ws).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z2_row(threshold: i64) -> AISet {
    let g = z2();
    AISet::new(
        "X",
        RuleBase::HalfSpace {
            normal: vec![0, 1],
            threshold,
        },
        subgroup(&g, &["a"]),
    )
    .unwrap()
}

fn z2_column() -> AISet {
    let g = z2();
    AISet::new(
        "Y",
        RuleBase::HalfSpace {
            normal: vec![1, 0],
            threshold: 0,
        },
        subgroup(&g, &["b"]),
    )
    .unwrap()
}

fn f2_prefix() -> AISet {
    let g = f2();
    let base = RuleBase::Head {
        strip: Some(Letter::generator(0)),
        head: Letter::generator(1),
    };
    AISet::new("X", base, subgroup(&g, &["a"])).unwrap()
}

fn fam_opts(t: usize, r: usize) -> FamilyOptions {
    FamilyOptions {
        translate_radius: t,
        radius: r,
        window: 3,
    }
}

const MEMBERSHIP_CORPUS: [&[&str]; 12] = [
    &["a"],
    &["aa"],
    &["b"],
    &["ab"],
    &["a", "b"],
    &["aa", "b"],
    &["a", "baB"],
    &["ab", "ba"],
    &["aaa", "bab"],
    &["abAB"],
    &["aa", "ab", "bA"],
    &["aba", "bAb"],
];

fn criterion_1() -> Outcome {
    let g = f2();
    let words = reduced_words(2, MEMBERSHIP_WORD_LEN);
    let mut per_subgroup = Vec::new();
    let mut mismatches = Vec::new();
    for gens in MEMBERSHIP_CORPUS {
        let graph = SubgroupGraph::fold(2, &gens.iter().map(|s| word(&g, s)).collect::<Vec<_>>()).unwrap();
        let brute = subgroup_products(gens, MEMBERSHIP_FACTORS);
        let mut members = 0;
        for w in &words {
            let fast = graph.accepts(&word(&g, w));
            let slow = brute.contains(w);
            members += usize::from(slow);
            if fast != slow {
                mismatches.push(format!("<{}> {w}: fold {fast}, brute {slow}", gens.join(",")));
            }
        }
        per_subgroup.push(json!({ "generators": gens, "members": members }));
    }
    check(mismatches.is_empty(), || {
        format!("mismatches: {}", mismatches.join("; "))
    })?;
    Ok((
        format!(
            "{} subgroups x {} words, 0 mismatches",
            MEMBERSHIP_CORPUS.len(),
            words.len()
        ),
        json!({ "words": words.len(), "subgroups": per_subgroup }),
    ))
}

/// Conjugators of length ≤ 3 outside `H` whose conjugate meets `H`.
fn brute_malnormal_witnesses(gens: &[&str]) -> Vec<(String, String)> {
    let h = subgroup_products(gens, COMMON_ELEMENT_LEN);
    reduced_words(2, CONJUGATOR_RADIUS)
        .into_iter()
        .filter(|g| !h.contains(g))
        .filter_map(|g| common_conjugate_element(gens, &g, COMMON_ELEMENT_LEN, COMMON_ELEMENT_LEN).map(|c| (g, c)))
        .collect()
}

fn criterion_2() -> Outcome {
    let g = f2();
    let a = SubgroupGraph::fold(2, &[word(&g, "a")]).unwrap();
    let a2 = SubgroupGraph::fold(2, &[word(&g, "aa")]).unwrap();

    check(a.is_almost_malnormal().unwrap(), || "<a> reported not malnormal".into())?;
    let height = a.height(4).unwrap();
    check(height == Height::Exact(1), || format!("height of <a> is {height:?}"))?;
    let outside = reduced_words(2, CONJUGATOR_RADIUS)
        .into_iter()
        .filter(|w| !w.chars().all(|c| c == 'a') && !w.chars().all(|c| c == 'A'))
        .count();
    let brute_a = brute_malnormal_witnesses(&["a"]);
    check(brute_a.is_empty(), || {
        format!("brute force found {:?} for <a>", brute_a[0])
    })?;

    check(!a2.is_almost_malnormal().unwrap(), || "<a^2> reported malnormal".into())?;
    let Malnormality::NotMalnormal { witness } = a2.malnormality().unwrap() else {
        return Err("<a^2> has no witness".into());
    };
    check(witness.to_string() == "a", || format!("witness for <a^2> is {witness}"))?;
    let brute_a2 = brute_malnormal_witnesses(&["aa"]);
    check(brute_a2.iter().any(|(c, _)| c == "a"), || {
        "brute force did not confirm the conjugator a".into()
    })?;
    Ok((
        format!(
            "<a> malnormal height 1 (brute: 0 of {} conjugators); <a^2> witness a",
            outside
        ),
        json!({
            "a": { "malnormal": true, "height": 1 },
            "a2": { "witness": witness.to_string(), "brute_conjugators": brute_a2.len() },
        }),
    ))
}

fn criterion_3() -> Outcome {
    let g = f2();
    let c = CComplex::build(
        &subgroup(&g, &["a"]),
        &BuildOptions {
            radius: 2,
            mode: OracleMode::Exact,
            dim_cap: 2,
            witness_radius: None,
        },
    )
    .unwrap();
    check(c.edges.is_empty(), || format!("C(F2,<a>) has {} edges", c.edges.len()))?;
    check(c.components().is_totally_disconnected, || {
        "C(F2,<a>) not totally disconnected".into()
    })?;

    let z = z2();
    let cz = CComplex::build(
        &subgroup(&z, &["a"]),
        &BuildOptions {
            radius: 2,
            mode: OracleMode::Witness,
            dim_cap: 2,
            witness_radius: None,
        },
    )
    .unwrap();
    let n = cz.num_vertices();
    check(n == 5, || format!("C(Z2,<e1>) has {n} vertices"))?;
    let mut pairs: Vec<(usize, usize)> = cz.edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
    pairs.sort();
    pairs.dedup();
    check(
        pairs.len() == n * (n - 1) / 2 && pairs.iter().all(|&(a, b)| a != b),
        || format!("C(Z2,<e1>) has {} distinct edges, K5 needs 10", pairs.len()),
    )?;
    Ok((
        format!("C(F2,<a>): {} vertices, 0 edges; C(Z2,<e1>): K5", c.num_vertices()),
        json!({ "f2_vertices": c.num_vertices(), "f2_edges": 0, "z2_vertices": n, "z2_edges": pairs.len() }),
    ))
}

fn symmetry_pool(g: &Group, bases: &[AISet], rng: &mut ChaCha8Rng, per_base: usize) -> Vec<AISet> {
    let ball = g.ball(2).unwrap();
    let mut out = Vec::new();
    for b in bases {
        out.push(b.clone());
        for _ in 0..per_base {
            let t = ball.words().choose(rng).unwrap();
            let x = b.translated(t).unwrap();
            out.push(if rng.gen_bool(0.5) { x.complement() } else { x });
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let z = z2();
    let mut z_bases = Vec::new();
    for (n, t) in [([0, 1], 0), ([1, 0], 1), ([1, 1], 0), ([1, -1], 0), ([2, 1], -1)] {
        let h = Subgroup::new(&z, &[z.from_exponents(&[-n[1], n[0]])]).unwrap();
        let base = RuleBase::HalfSpace {
            normal: n.to_vec(),
            threshold: t,
        };
        z_bases.push(AISet::new(format!("Z{n:?}"), base, h).unwrap());
    }
    let f = f2();
    let head = |strip: Option<usize>, h: Letter| RuleBase::Head {
        strip: strip.map(Letter::generator),
        head: h,
    };
    let f_bases = vec![
        AISet::new("Fa", head(Some(0), Letter::generator(1)), subgroup(&f, &["a"])).unwrap(),
        AISet::new("Fb", head(Some(1), Letter::generator(0)), subgroup(&f, &["b"])).unwrap(),
        AISet::new("Fe", head(None, Letter::generator(0)), subgroup(&f, &[])).unwrap(),
        AISet::new("FB", head(None, Letter::inverse_of(1)), subgroup(&f, &[])).unwrap(),
    ];

    let mut results = Vec::new();
    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    let mut disagreements = Vec::new();
    for (g, bases, radius, window) in [(&z, &z_bases, 10, Z2_SLANTED_WINDOW), (&f, &f_bases, 7, 3)] {
        let ws = Workspace::new(g, radius, window).unwrap();
        let pool: Vec<AISet> = symmetry_pool(g, bases, &mut rng, 3)
            .into_iter()
            .filter(|x| is_nontrivial(x, &ws).unwrap().nontrivial == Tri::Yes)
            .collect();
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                let xy = crosses(&pool[i], &pool[j], &ws).unwrap().crosses;
                let yx = crosses(&pool[j], &pool[i], &ws).unwrap().crosses;
                let (Some(p), Some(q)) = (xy.as_bool(), yx.as_bool()) else {
                    skipped += 1;
                    continue;
                };
                evaluated += 1;
                if p != q {
                    disagreements.push(format!("{} / {}", pool[i].label(), pool[j].label()));
                }
                results.push(json!([pool[i].label(), pool[j].label(), p]));
            }
        }
    }
    check(evaluated >= MIN_SYMMETRY_PAIRS, || {
        format!("only {evaluated} pairs with boolean verdicts")
    })?;
    check(disagreements.is_empty(), || {
        format!("asymmetric: {}", disagreements.join("; "))
    })?;
    let crossing = results.iter().filter(|r| r[2] == true).count();
    Ok((
        format!("{evaluated} pairs symmetric ({crossing} crossing, {skipped} undecided skipped)"),
        json!({ "pairs": results, "skipped": skipped }),
    ))
}

fn order_checks(name: &str, fam: &TranslateFamily) -> Result<Value, String> {
    let star = fam.condition_star_violations();
    check(star.is_empty(), || {
        format!("{name}: {} Condition (*) violations", star.len())
    })?;
    let laws = fam.order_laws();
    check(laws.holds == Tri::Yes, || {
        format!(
            "{name}: reflexive {} antisymmetric {} transitive {} undecided {}",
            laws.reflexive_failures.len(),
            laws.antisymmetry_failures.len(),
            laws.transitivity_failure_count,
            laws.undecided
        )
    })?;
    Ok(json!({ "family": name, "members": fam.len() }))
}

fn criterion_5() -> Outcome {
    let z = TranslateFamily::build(&[z2_row(0)], fam_opts(4, 8)).unwrap();
    let f = TranslateFamily::build(&[f2_prefix()], fam_opts(4, 8)).unwrap();
    let a = order_checks("z2 half-plane", &z)?;
    let b = order_checks("f2 prefix", &f)?;
    Ok((
        format!("(*) and order laws hold on {} + {} members (T=4)", z.len(), f.len()),
        json!([a, b]),
    ))
}

fn pretree_case(name: &str, bases: &[AISet], t: usize, r: usize) -> Result<Value, String> {
    let fam = TranslateFamily::build(bases, fam_opts(t, r)).map_err(|e| format!("{name}: {e}"))?;
    let cccs = fam.cccs().map_err(|e| format!("{name}: {e}"))?;
    let p = Pretree::from_family(&fam, &cccs).map_err(|e| format!("{name}: {e}"))?;
    let rep = p.verify();
    check(rep.ok && rep.discrete, || format!("{name}: {rep:?}"))?;
    Ok(json!({ "case": name, "points": rep.points, "max_interval": rep.max_interval }))
}

fn demo_aiset(file: &str, set: &str) -> AISet {
    let text = std::fs::read_to_string(format!("{}/../../demos/{file}", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let inst = InstanceSpec::parse(&text).unwrap();
    inst.aiset(&inst.group(), set).unwrap()
}

fn criterion_6() -> Outcome {
    let cases = vec![
        pretree_case("z2 half-plane", &[z2_row(0)], 3, 8)?,
        pretree_case("z2 nested pair", &[z2_row(0), z2_row(1)], 2, 8)?,
        pretree_case("z2 crossing pair", &[z2_row(0), z2_column()], 2, 8)?,
        pretree_case("f2 prefix", &[f2_prefix()], 3, 7)?,
        pretree_case("demo z2_halfplane X", &[demo_aiset("z2_halfplane.gsplit", "X")], 4, 8)?,
        pretree_case("demo f2_cyclic X", &[demo_aiset("f2_cyclic.gsplit", "X")], 3, 7)?,
    ];
    let corrupted = Pretree::from_fn(4, |x, y, z| {
        (x < y && y < z) || (z < y && y < x) || (x, y, z) == (0, 2, 1)
    });
    let rep = corrupted.verify();
    let Some(t2) = rep.t2.clone() else {
        return Err(format!("corrupted relation passed T2: {rep:?}"));
    };
    check(!rep.ok, || "corrupted relation reported ok".into())?;
    Ok((
        format!(
            "{} pretrees pass T0-T3 and discreteness; corrupted fails T2 at {t2:?}",
            cases.len()
        ),
        json!({ "cases": cases, "corrupted_t2": t2 }),
    ))
}

fn dunwoody_case(name: &str, base: AISet, t: usize, r: usize) -> Result<Value, String> {
    let fam = TranslateFamily::build(&[base.clone()], fam_opts(t, r)).unwrap();
    let big = TranslateFamily::build(&[base], fam_opts(t + 1, r + 1)).unwrap();
    let dw = verify_dunwoody(&fam, Some(&big)).unwrap();
    check(dw.passes == Tri::Yes, || {
        format!(
            "{name}: D1 {} D2 stable {:?} D3 {} D4 {} undecided {}",
            dw.d1_failures.len(),
            dw.d2_stable,
            dw.d3_failures.len(),
            dw.d4_failures.len(),
            dw.undecided
        )
    })?;
    let tree = DunwoodyTree::build(&fam).unwrap();
    check(tree.edges.len() <= MAX_TREE_EDGES, || {
        format!("{name}: {} edges", tree.edges.len())
    })?;
    check(tree.is_tree, || format!("{name}: not a tree"))?;
    check(tree.path_mismatches.is_empty(), || {
        format!("{name}: oriented-path mismatches {:?}", tree.path_mismatches)
    })?;
    Ok(json!({
        "family": name,
        "edges": tree.edges.len(),
        "pairs_checked": tree.pairs_checked,
        "d2_max_interval": dw.d2_max_interval,
    }))
}

fn criterion_7() -> Outcome {
    let a = dunwoody_case("z2 half-plane", z2_row(0), 4, 8)?;
    let b = dunwoody_case("f2 prefix", f2_prefix(), 3, 7)?;
    Ok((
        format!(
            "D1-D4 pass; oriented paths agree on {} + {} pairs",
            a["pairs_checked"], b["pairs_checked"]
        ),
        json!([a, b]),
    ))
}

fn criterion_8() -> Outcome {
    let rec = split_pipeline(
        &[z2_row(0)],
        &PipelineOptions {
            family: fam_opts(4, 8),
            ccomplex_radius: 2,
            mode: OracleMode::Witness,
            stabilizer_radius: 3,
            override_hypotheses: false,
            frontier_check: true,
        },
    )
    .map_err(|e| e.to_string())?;
    let expected = SplitVerdict::SplittingExhibited {
        edge_stabilizers: vec![vec!["(1,0)".into()]],
    };
    check(rec.verdict == expected, || format!("verdict {:?}", rec.verdict))?;
    let tree = rec.dunwoody_tree.as_ref().ok_or("no tree")?;
    check(tree.is_line, || "tree is not a line".into())?;
    let q = rec.quotient.as_ref().ok_or("no quotient")?;
    check(q.edge_orbits == 1, || format!("quotient has {} edges", q.edge_orbits))?;
    let cc = &rec.cross_check;
    check(cc.violations.is_empty(), || {
        format!("cross-check violations {:?}", cc.violations)
    })?;
    Ok((
        format!(
            "line tree, 1 quotient edge, stabilizer <(1,0)>; cross-check {} pair(s) evaluated, 0 violations",
            cc.pairs_checked
        ),
        serde_json::to_value(&rec).unwrap(),
    ))
}

fn criterion_9() -> Outcome {
    let g = z2();
    let h = subgroup(&g, &["a"]);
    let ws = Workspace::new(&g, 8, 3).unwrap();
    let mut row = fixedbitset::FixedBitSet::with_capacity(ws.ball.len());
    for i in 0..ws.ball.len() {
        if g.exponent_vector(ws.ball.word(i))[1] == 0 {
            row.insert(i);
        }
    }
    let rep = coend_witness(&row, &h, &ws).map_err(|e| e.to_string())?;
    check(rep.h_infinite_components == 2, || {
        format!("{} H-infinite components", rep.h_infinite_components)
    })?;
    let brute_above = abelian_ball_count(2, 8) - row.count_ones(..);
    check(
        rep.components.iter().map(|c| c.size).sum::<usize>() == brute_above,
        || "components do not cover Ball(8) - A".into(),
    )?;
    Ok((
        format!("{} components, 2 H-infinite", rep.components.len()),
        serde_json::to_value(&rep).unwrap(),
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = false;
    let mut records = Vec::new();
    for (n, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        match outcome {
            Ok((summary, record)) if took < TIME_LIMIT => {
                println!("criterion {n}: PASS ({:.2}s) {summary}", took.as_secs_f64());
                records.push(serde_json::to_vec(&record).unwrap());
            }
            Ok(_) => {
                println!(
                    "criterion {n}: FAIL took {:.1}s, limit {}s",
                    took.as_secs_f64(),
                    TIME_LIMIT.as_secs()
                );
                failed = true;
                records.push(Vec::new());
            }
            Err(msg) => {
                println!("criterion {n}: FAIL ({:.2}s) {msg}", took.as_secs_f64());
                failed = true;
                records.push(Vec::new());
            }
        }
    }

    let start = Instant::now();
    let mut differing = Vec::new();
    for ((n, f), first) in criteria.iter().zip(&records) {
        let again = f().map(|(_, r)| serde_json::to_vec(&r).unwrap()).unwrap_or_default();
        if &again != first {
            differing.push(n.to_string());
        }
    }
    let took = start.elapsed();
    if differing.is_empty() && took < TIME_LIMIT {
        println!(
            "criterion 10: PASS ({:.2}s) records of criteria 1-9 byte-identical on rerun",
            took.as_secs_f64()
        );
    } else {
        println!(
            "criterion 10: FAIL ({:.2}s) differing records: [{}]",
            took.as_secs_f64(),
            differing.join(", ")
        );
        failed = true;
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
