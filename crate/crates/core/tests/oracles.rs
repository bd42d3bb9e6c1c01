mod common;

use std::collections::VecDeque;

use proptest::prelude::*;

use gsplit::aisets::{crosses, AISet, RuleBase, Workspace};
use gsplit::group::{Group, GroupSpec, Word};
use gsplit::regnbhd::Pretree;
use gsplit::stallings::SubgroupGraph;
use gsplit::subgroup::Lattice;
use gsplit::unionfind::UnionFind;
use gsplit::Tri;

use common::*;

fn word(g: &Group, s: &str) -> Word {
    if s.is_empty() {
        Word::identity()
    } else {
        g.parse_word(s).unwrap()
    }
}

fn letter_string(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(alphabet.chars().collect::<Vec<_>>()), 0..=max)
        .prop_map(|v| v.into_iter().collect())
}

#[test]
fn free_ball_sizes_match_enumeration() {
    for rank in 1..=3 {
        let g = Group::new(GroupSpec::free(rank).unwrap());
        for r in 0..=4 {
            assert_eq!(g.ball(r).unwrap().len(), free_ball_count(rank, r), "F{rank} r={r}");
            assert_eq!(g.spec().ball_size(r), Some(free_ball_count(rank, r) as u128));
        }
    }
}

#[test]
fn abelian_ball_sizes_match_lattice_count() {
    for rank in 1..=3 {
        let g = Group::new(GroupSpec::free_abelian(rank).unwrap());
        for r in 0..=5 {
            assert_eq!(
                g.ball(r).unwrap().len(),
                abelian_ball_count(rank, r as i64),
                "Z{rank} r={r}"
            );
        }
    }
}

#[test]
fn surface_ball_words_are_pairwise_distinct_geodesics() {
    let g = Group::new(GroupSpec::surface(2).unwrap());
    let ball = g.ball(3).unwrap();
    for i in 0..ball.len() {
        let w = ball.word(i);
        assert_eq!(g.length(w).unwrap(), ball.dist(i));
        assert_eq!(&g.normal_form(w).unwrap(), w);
    }
    // spheres of the genus-2 surface group: 1, 8, 56, 392
    assert_eq!(ball.sphere_sizes(), vec![1, 8, 56, 392]);
}

fn z2_half_plane(normal: [i64; 2], along: &str, at: (i64, i64), complement: bool) -> AISet {
    let g = z2();
    let h = gsplit::subgroup::Subgroup::new(&g, &[word(&g, along)]).unwrap();
    let x = AISet::new(
        "X",
        RuleBase::HalfSpace {
            normal: normal.to_vec(),
            threshold: 0,
        },
        h,
    )
    .unwrap()
    .translated(&g.from_exponents(&[at.0, at.1]))
    .unwrap();
    if complement {
        x.complement()
    } else {
        x
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn axis_half_planes_cross_exactly_when_perpendicular(
        p in (-2i64..=2, -2i64..=2, any::<bool>()),
        q in (-2i64..=2, -2i64..=2, any::<bool>()),
        perpendicular in any::<bool>(),
    ) {
        let ws = Workspace::new(&z2(), 8, 3).unwrap();
        let x = z2_half_plane([0, 1], "a", (p.0, p.1), p.2);
        let y = if perpendicular {
            z2_half_plane([1, 0], "b", (q.0, q.1), q.2)
        } else {
            z2_half_plane([0, 1], "a", (q.0, q.1), q.2)
        };
        let expected = Tri::from_bool(perpendicular);
        prop_assert_eq!(crosses(&x, &y, &ws).unwrap().crosses, expected);
        prop_assert_eq!(crosses(&y, &x, &ws).unwrap().crosses, expected);
    }
}

proptest! {
    #[test]
    fn free_normal_form_is_free_reduction(s in letter_string("aAbB", 14)) {
        let g = f2();
        let nf = g.normal_form(&word(&g, &s)).unwrap();
        let expected = reduce(&s);
        prop_assert_eq!(nf.to_string(), if expected.is_empty() { "1".to_string() } else { expected });
    }

    #[test]
    fn free_group_axioms(u in letter_string("aAbB", 8), v in letter_string("aAbB", 8), w in letter_string("aAbB", 8)) {
        let g = f2();
        let (u, v, w) = (word(&g, &u), word(&g, &v), word(&g, &w));
        let left = g.multiply(&g.multiply(&u, &v).unwrap(), &w).unwrap();
        let right = g.multiply(&u, &g.multiply(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(g.is_identity(&g.multiply(&u, &g.inverse(&u).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn abelian_normal_form_is_exponent_sum(s in letter_string("aAbBcC", 14)) {
        let g = Group::new(GroupSpec::free_abelian(3).unwrap());
        let nf = g.normal_form(&word(&g, &s)).unwrap();
        let mut sums = [0i64; 3];
        for c in s.chars() {
            let i = (c.to_ascii_lowercase() as u8 - b'a') as usize;
            sums[i] += if c.is_ascii_lowercase() { 1 } else { -1 };
        }
        prop_assert_eq!(g.exponent_vector(&nf), sums.to_vec());
        prop_assert_eq!(g.length(&nf).unwrap() as i64, sums.iter().map(|x| x.abs()).sum::<i64>());
    }

    #[test]
    fn surface_group_axioms(u in letter_string("aAbBcCdD", 4), v in letter_string("aAbBcCdD", 4)) {
        let g = Group::new(GroupSpec::surface(2).unwrap());
        let (u, v) = (word(&g, &u), word(&g, &v));
        let back = u.concat(&v).concat(&v.inverse());
        prop_assert!(g.equal(&back, &u).unwrap());
        let rel = word(&g, "abABcdCD");
        prop_assert!(g.is_identity(&u.concat(&rel).concat(&u.inverse())).unwrap());
    }

    #[test]
    fn union_find_matches_bfs(n in 1usize..30, edges in prop::collection::vec((0usize..30, 0usize..30), 0..40)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let mut uf = UnionFind::new(n);
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            uf.union(a, b);
            adj[a].push(b);
            adj[b].push(a);
        }
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            for t in 0..n {
                prop_assert_eq!(uf.same(s, t), seen[t]);
            }
        }
    }

    #[test]
    fn stallings_accepts_every_product(
        gens in prop::collection::vec(letter_string("aAbB", 3).prop_filter("nonempty", |s| !reduce(s).is_empty()), 1..=3),
        picks in prop::collection::vec((0usize..3, any::<bool>()), 0..6),
    ) {
        let g = f2();
        let gen_words: Vec<Word> = gens.iter().map(|s| word(&g, s)).collect();
        let graph = SubgroupGraph::fold(2, &gen_words).unwrap();
        let mut product = String::new();
        for (i, inv) in picks {
            let s = &gens[i % gens.len()];
            product.push_str(&if inv { invert(s) } else { s.clone() });
        }
        prop_assert!(graph.accepts(&word(&g, &product)));
    }

    #[test]
    fn stallings_membership_matches_brute_force_on_short_words(
        gens in prop::collection::vec(letter_string("aAbB", 2).prop_filter("nonempty", |s| !reduce(s).is_empty()), 1..=2),
    ) {
        // Generators of length ≤ 2 reach every member of length ≤ 4 within 8 factors.
        let g = f2();
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let graph = SubgroupGraph::fold(2, &gens.iter().map(|s| word(&g, s)).collect::<Vec<_>>()).unwrap();
        let brute = subgroup_products(&refs, 8);
        for w in reduced_words(2, 4) {
            if brute.contains(&w) {
                prop_assert!(graph.accepts(&word(&g, &w)), "{} should be in <{}>", w, gens.join(","));
            }
        }
    }

    #[test]
    fn lattice_contains_small_combinations(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=2),
        coeffs in prop::collection::vec(-4i64..=4, 2),
        off in prop::collection::vec(-6i64..=6, 2),
    ) {
        let lat = Lattice::new(2, &gens);
        let mut v = vec![0i64; 2];
        for (g, c) in gens.iter().zip(&coeffs) {
            v[0] += c * g[0];
            v[1] += c * g[1];
        }
        prop_assert!(lat.contains(&v));
        // brute force: is `off` an integer combination with small coefficients?
        let reachable = (-12i64..=12).any(|x| (-12i64..=12).any(|y| {
            let c = [x, y];
            (0..2).all(|k| gens.iter().zip(&c).map(|(g, c)| c * g[k]).sum::<i64>() == off[k])
        }));
        if reachable {
            prop_assert!(lat.contains(&off));
        }
        if lat.contains(&off) && gens.len() == 1 {
            prop_assert!(reachable || gens[0].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn linear_orders_are_discrete_pretrees(perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
        let pos: Vec<usize> = {
            let mut p = vec![0; perm.len()];
            for (i, &x) in perm.iter().enumerate() {
                p[x] = i;
            }
            p
        };
        let p = Pretree::from_fn(perm.len(), |x, y, z| {
            (pos[x] < pos[y] && pos[y] < pos[z]) || (pos[z] < pos[y] && pos[y] < pos[x])
        });
        let rep = p.verify();
        prop_assert!(rep.ok && rep.discrete);
    }
}
