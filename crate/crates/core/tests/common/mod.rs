#![allow(dead_code)]

//! Brute-force oracles over plain strings, independent of the library's
//! word machinery. Letters are `a b c ...`, inverses uppercase.

use std::collections::{BTreeSet, HashSet};

use gsplit::group::{Group, GroupSpec};

pub fn inverse_char(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        if out.last() == Some(&inverse_char(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn invert(s: &str) -> String {
    s.chars().rev().map(inverse_char).collect()
}

pub fn letters(rank: usize) -> Vec<char> {
    (0..rank)
        .flat_map(|i| {
            let c = (b'a' + i as u8) as char;
            [c, c.to_ascii_uppercase()]
        })
        .collect()
}

/// Every freely reduced word of length at most `n`.
pub fn reduced_words(rank: usize, n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for c in letters(rank) {
                if w.chars().last() != Some(inverse_char(c)) {
                    next.push(format!("{w}{c}"));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Reduced forms of all products of at most `factors` generators or their
/// inverses.
pub fn subgroup_products(gens: &[&str], factors: usize) -> HashSet<String> {
    let mut pool: Vec<String> = Vec::new();
    for g in gens {
        pool.push(reduce(g));
        pool.push(invert(&reduce(g)));
    }
    let mut seen: HashSet<String> = HashSet::from([String::new()]);
    let mut layer = vec![String::new()];
    for _ in 0..factors {
        let mut next = Vec::new();
        for w in &layer {
            for p in &pool {
                let r = reduce(&format!("{w}{p}"));
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        layer = next;
    }
    seen
}

/// A nontrivial element common to `H` and `gHg⁻¹` among products of
/// `factors` generators whose reduced length is at most `max_len`.
pub fn common_conjugate_element(gens: &[&str], g: &str, factors: usize, max_len: usize) -> Option<String> {
    let h = subgroup_products(gens, factors);
    let short: BTreeSet<&String> = h.iter().filter(|w| !w.is_empty() && w.len() <= max_len).collect();
    let gi = invert(g);
    h.iter()
        .filter(|w| !w.is_empty())
        .map(|w| reduce(&format!("{g}{w}{gi}")))
        .filter(|c| short.contains(c))
        .min_by(|a, b| (a.len(), a.as_str()).cmp(&(b.len(), b.as_str())))
}

pub fn f2() -> Group {
    Group::new(GroupSpec::free(2).unwrap())
}

pub fn z2() -> Group {
    Group::new(GroupSpec::free_abelian(2).unwrap())
}

/// Number of reduced words of length at most `r` in a free group.
pub fn free_ball_count(rank: usize, r: usize) -> usize {
    reduced_words(rank, r).len()
}

/// Lattice points with `|x₁| + … + |x_n| ≤ r`.
pub fn abelian_ball_count(rank: usize, r: i64) -> usize {
    fn go(rank: usize, r: i64) -> usize {
        if rank == 0 {
            return 1;
        }
        (-r..=r).map(|x| go(rank - 1, r - x.abs())).sum()
    }
    go(rank, r)
}

/// Tiny DOT grammar check: a `graph`/`digraph` header, quoted or bare IDs,
/// node statements with attribute lists, and edges with the matching
/// operator.
pub fn check_dot(text: &str) -> Result<(), String> {
    let mut p = DotParser {
        s: text.as_bytes(),
        i: 0,
        arrow: "",
    };
    p.graph()
}

struct DotParser<'a> {
    s: &'a [u8],
    i: usize,
    arrow: &'static str,
}

impl DotParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(t.as_bytes()) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<(), String> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(format!("expected `{t}` at byte {}", self.i))
        }
    }

    fn id(&mut self) -> Result<(), String> {
        self.ws();
        match self.s.get(self.i) {
            Some(b'"') => {
                self.i += 1;
                loop {
                    match self.s.get(self.i) {
                        None => return Err("unterminated string".into()),
                        Some(b'\\') => self.i += 2,
                        Some(b'"') => {
                            self.i += 1;
                            return Ok(());
                        }
                        Some(_) => self.i += 1,
                    }
                }
            }
            Some(c) if c.is_ascii_alphanumeric() || *c == b'_' => {
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                Ok(())
            }
            _ => Err(format!("expected an ID at byte {}", self.i)),
        }
    }

    fn attrs(&mut self) -> Result<(), String> {
        if !self.eat("[") {
            return Ok(());
        }
        loop {
            if self.eat("]") {
                return Ok(());
            }
            self.id()?;
            self.expect("=")?;
            self.id()?;
            self.eat(",");
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.eat("digraph") {
            self.arrow = "->";
        } else if self.eat("graph") {
            self.arrow = "--";
        } else {
            return Err("missing graph keyword".into());
        }
        self.ws();
        if self.s.get(self.i) != Some(&b'{') {
            self.id()?;
        }
        self.expect("{")?;
        loop {
            if self.eat("}") {
                break;
            }
            self.id()?;
            let wrong = if self.arrow == "->" { "--" } else { "->" };
            if self.eat(wrong) {
                return Err(format!("edge operator `{wrong}` in the wrong graph kind"));
            }
            while self.eat(self.arrow) {
                self.id()?;
            }
            self.attrs()?;
            self.expect(";")?;
        }
        self.ws();
        if self.i != self.s.len() {
            return Err("trailing text after the graph".into());
        }
        Ok(())
    }
}
