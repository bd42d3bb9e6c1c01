//! Line-oriented instance files: `[group]`, `[subgroup NAME]`,
//! `[aiset NAME]` and `[run]` blocks of `key = value` lines.
//!
//! ```text
//! [group]
//! family = free-abelian
//! rank = 2
//!
//! [subgroup H]
//! generators = a
//!
//! [aiset X]
//! subgroup = H
//! kind = halfspace
//! normal = 0, 1
//! threshold = 0
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::aisets::{AISet, RuleBase};
use crate::ccomplex::OracleMode;
use crate::error::{Error, LocatedError, Result};
use crate::group::{parse_letters, Group, GroupSpec, Letter, Word};
use crate::subgroup::Subgroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupDecl {
    pub name: String,
    pub generators: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AisetDecl {
    pub name: String,
    pub subgroup: String,
    #[serde(serialize_with = "display")]
    pub base: RuleBase,
    pub translate: Word,
    pub complement: bool,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Settings from the `[run]` block; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub radius: Option<usize>,
    pub translate_radius: Option<usize>,
    pub window: Option<usize>,
    pub dim_cap: Option<usize>,
    pub mode: Option<OracleMode>,
    pub seed: Option<u64>,
    pub stabilizer_radius: Option<usize>,
    pub ccomplex_radius: Option<usize>,
    pub override_hypotheses: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub group: GroupSpec,
    pub subgroups: Vec<SubgroupDecl>,
    pub aisets: Vec<AisetDecl>,
    pub run: RunConfig,
}

enum Block {
    None,
    Group,
    Subgroup(String),
    Aiset(String),
    Run,
}

struct Section {
    kind: Block,
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, v)| (*l, v.as_str()))
    }
}

struct Errors(Vec<LocatedError>);

impl Errors {
    fn push(&mut self, line: usize, message: impl Into<String>) {
        self.0.push(LocatedError {
            line,
            message: message.into(),
        });
    }
}

fn split_list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_usize(errs: &mut Errors, line: usize, key: &str, v: &str) -> Option<usize> {
    v.parse()
        .map_err(|_| errs.push(line, format!("`{key}` expects a non-negative integer, got `{v}`")))
        .ok()
}

fn parse_bool(errs: &mut Errors, line: usize, key: &str, v: &str) -> Option<bool> {
    match v {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => {
            errs.push(line, format!("`{key}` expects true or false, got `{v}`"));
            None
        }
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn lex(text: &str, errs: &mut Errors) -> Vec<Section> {
    let mut sections = vec![Section {
        kind: Block::None,
        line: 0,
        entries: Vec::new(),
    }];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let Some(header) = header.strip_suffix(']') else {
                errs.push(line, "unterminated block header");
                continue;
            };
            let mut parts = header.split_whitespace();
            let kind = match (parts.next(), parts.next(), parts.next()) {
                (Some("group"), None, _) => Block::Group,
                (Some("run"), None, _) => Block::Run,
                (Some("subgroup"), Some(n), None) if is_name(n) => Block::Subgroup(n.to_string()),
                (Some("aiset"), Some(n), None) if is_name(n) => Block::Aiset(n.to_string()),
                (Some("subgroup" | "aiset"), _, _) => {
                    errs.push(line, format!("block `[{header}]` needs exactly one name"));
                    Block::None
                }
                _ => {
                    errs.push(line, format!("unknown block `[{header}]`"));
                    Block::None
                }
            };
            sections.push(Section {
                kind,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            errs.push(line, format!("expected `key = value`, got `{content}`"));
            continue;
        };
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        let sec = sections.last_mut().expect("nonempty");
        if matches!(sec.kind, Block::None) {
            if sec.line == 0 {
                errs.push(line, "key outside of any block");
            }
            continue;
        }
        if sec.entries.iter().any(|(_, key, _)| *key == k) {
            errs.push(line, format!("duplicate key `{k}`"));
            continue;
        }
        sec.entries.push((line, k, v));
    }
    sections
}

fn check_keys(sec: &Section, allowed: &[&str], errs: &mut Errors) {
    for (line, k, _) in &sec.entries {
        if !allowed.contains(&k.as_str()) {
            errs.push(
                *line,
                format!("unknown key `{k}` (expected one of: {})", allowed.join(", ")),
            );
        }
    }
}

fn parse_group(sec: &Section, errs: &mut Errors) -> Option<GroupSpec> {
    check_keys(sec, &["family", "rank", "genus"], errs);
    let Some((fl, family)) = sec.get("family") else {
        errs.push(sec.line, "[group] needs `family`");
        return None;
    };
    let number = |key: &str, errs: &mut Errors| -> Option<usize> {
        match sec.get(key) {
            Some((l, v)) => parse_usize(errs, l, key, v),
            None => {
                errs.push(sec.line, format!("family `{family}` needs `{key}`"));
                None
            }
        }
    };
    let built = match family {
        "free" => GroupSpec::free(number("rank", errs)?),
        "free-abelian" => GroupSpec::free_abelian(number("rank", errs)?),
        "surface" => GroupSpec::surface(number("genus", errs)?),
        other => {
            errs.push(
                fl,
                format!("unknown family `{other}` (expected free, free-abelian or surface)"),
            );
            return None;
        }
    };
    built.map_err(|e| errs.push(fl, e.to_string())).ok()
}

fn parse_word(group: &Group, errs: &mut Errors, line: usize, s: &str) -> Option<Word> {
    group.parse_word(s).map_err(|e| errs.push(line, e.to_string())).ok()
}

fn parse_letter(ngens: usize, errs: &mut Errors, line: usize, key: &str, s: &str) -> Option<Letter> {
    match parse_letters(s, ngens) {
        Ok(w) if w.len() == 1 => Some(w.letters()[0]),
        Ok(_) => {
            errs.push(line, format!("`{key}` expects a single letter, got `{s}`"));
            None
        }
        Err(e) => {
            errs.push(line, e);
            None
        }
    }
}

/// Splits a list of tuples or words, keeping commas inside parentheses.
fn split_elements(v: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in v.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_aiset(
    name: &str,
    sec: &Section,
    group: &Group,
    subgroups: &[SubgroupDecl],
    errs: &mut Errors,
) -> Option<AisetDecl> {
    check_keys(
        sec,
        &[
            "subgroup",
            "kind",
            "normal",
            "threshold",
            "strip",
            "head",
            "elements",
            "translate",
            "complement",
        ],
        errs,
    );
    let ngens = group.spec().num_generators();
    let subgroup = match sec.get("subgroup") {
        Some((l, s)) => {
            if !subgroups.iter().any(|d| d.name == s) {
                errs.push(l, format!("aiset `{name}` references undeclared subgroup `{s}`"));
                return None;
            }
            s.to_string()
        }
        None => {
            errs.push(sec.line, format!("aiset `{name}` needs `subgroup`"));
            return None;
        }
    };
    let Some((kl, kind)) = sec.get("kind") else {
        errs.push(sec.line, format!("aiset `{name}` needs `kind`"));
        return None;
    };
    let required = |key: &str, errs: &mut Errors| -> Option<(usize, &str)> {
        let v = sec.get(key);
        if v.is_none() {
            errs.push(sec.line, format!("kind `{kind}` needs `{key}`"));
        }
        v
    };
    let base = match kind {
        "halfspace" => {
            let (nl, nv) = required("normal", errs)?;
            let (tl, tv) = required("threshold", errs)?;
            let normal: std::result::Result<Vec<i64>, _> = split_list(nv).iter().map(|x| x.parse()).collect();
            let Ok(normal) = normal else {
                errs.push(nl, format!("`normal` expects integers, got `{nv}`"));
                return None;
            };
            let Ok(threshold) = tv.parse() else {
                errs.push(tl, format!("`threshold` expects an integer, got `{tv}`"));
                return None;
            };
            RuleBase::HalfSpace { normal, threshold }
        }
        "head" => {
            let (hl, hv) = required("head", errs)?;
            let head = parse_letter(ngens, errs, hl, "head", hv)?;
            let strip = match sec.get("strip") {
                Some((sl, sv)) => Some(parse_letter(ngens, errs, sl, "strip", sv)?),
                None => None,
            };
            RuleBase::Head { strip, head }
        }
        "extensional" => {
            let (el, ev) = required("elements", errs)?;
            let mut words = Vec::new();
            for s in split_elements(ev) {
                words.push(parse_word(group, errs, el, &s)?);
            }
            RuleBase::Extensional { words }
        }
        other => {
            errs.push(
                kl,
                format!("unknown kind `{other}` (expected halfspace, head or extensional)"),
            );
            return None;
        }
    };
    let translate = match sec.get("translate") {
        Some((l, v)) => parse_word(group, errs, l, v)?,
        None => Word::identity(),
    };
    let complement = match sec.get("complement") {
        Some((l, v)) => parse_bool(errs, l, "complement", v)?,
        None => false,
    };
    let decl = AisetDecl {
        name: name.to_string(),
        subgroup,
        base,
        translate,
        complement,
    };
    if let Err(e) = decl.build(group, subgroups) {
        errs.push(sec.line, e.to_string());
        return None;
    }
    Some(decl)
}

fn parse_run(sec: &Section, group: &GroupSpec, errs: &mut Errors) -> RunConfig {
    check_keys(
        sec,
        &[
            "radius",
            "translate_radius",
            "window",
            "dim_cap",
            "mode",
            "seed",
            "stabilizer_radius",
            "ccomplex_radius",
            "override",
        ],
        errs,
    );
    let mut run = RunConfig::default();
    let limit = group.radius_limit();
    for (line, k, v) in &sec.entries {
        let (line, k, v) = (*line, k.as_str(), v.as_str());
        match k {
            "radius" | "translate_radius" | "stabilizer_radius" | "ccomplex_radius" => {
                if let Some(n) = parse_usize(errs, line, k, v) {
                    if n > limit {
                        errs.push(line, format!("`{k}` = {n} exceeds the limit {limit} for {group}"));
                    }
                    let slot = match k {
                        "radius" => &mut run.radius,
                        "translate_radius" => &mut run.translate_radius,
                        "stabilizer_radius" => &mut run.stabilizer_radius,
                        _ => &mut run.ccomplex_radius,
                    };
                    *slot = Some(n);
                }
            }
            "window" => run.window = parse_usize(errs, line, k, v),
            "dim_cap" => run.dim_cap = parse_usize(errs, line, k, v),
            "seed" => {
                run.seed = v
                    .parse()
                    .map_err(|_| errs.push(line, format!("`seed` expects an unsigned integer, got `{v}`")))
                    .ok()
            }
            "mode" => run.mode = v.parse().map_err(|e: String| errs.push(line, e)).ok(),
            "override" => run.override_hypotheses = parse_bool(errs, line, k, v),
            _ => {}
        }
    }
    run
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<InstanceSpec> {
        let mut errs = Errors(Vec::new());
        let sections = lex(text, &mut errs);
        let groups: Vec<&Section> = sections.iter().filter(|s| matches!(s.kind, Block::Group)).collect();
        let spec = match groups.as_slice() {
            [] => {
                errs.push(1, "missing [group] block");
                None
            }
            [g, rest @ ..] => {
                for r in rest {
                    errs.push(r.line, "duplicate [group] block");
                }
                parse_group(g, &mut errs)
            }
        };
        let Some(spec) = spec else {
            return Err(Error::Spec(errs.0));
        };
        let group = Group::new(spec);
        let mut names = BTreeSet::new();
        let mut subgroups = Vec::new();
        for sec in &sections {
            if let Block::Subgroup(name) = &sec.kind {
                if !names.insert(name.clone()) {
                    errs.push(sec.line, format!("duplicate name `{name}`"));
                    continue;
                }
                check_keys(sec, &["generators"], &mut errs);
                let mut generators = Vec::new();
                if let Some((l, v)) = sec.get("generators") {
                    for s in split_elements(v) {
                        if let Some(w) = parse_word(&group, &mut errs, l, &s) {
                            generators.push(w);
                        }
                    }
                }
                subgroups.push(SubgroupDecl {
                    name: name.clone(),
                    generators,
                });
            }
        }
        let mut aisets = Vec::new();
        let mut run = RunConfig::default();
        let mut seen_run = false;
        for sec in &sections {
            match &sec.kind {
                Block::Aiset(name) => {
                    if !names.insert(name.clone()) {
                        errs.push(sec.line, format!("duplicate name `{name}`"));
                        continue;
                    }
                    if let Some(a) = parse_aiset(name, sec, &group, &subgroups, &mut errs) {
                        aisets.push(a);
                    }
                }
                Block::Run => {
                    if seen_run {
                        errs.push(sec.line, "duplicate [run] block");
                    }
                    seen_run = true;
                    run = parse_run(sec, &spec, &mut errs);
                }
                _ => {}
            }
        }
        if !errs.0.is_empty() {
            errs.0.sort_by_key(|e| e.line);
            return Err(Error::Spec(errs.0));
        }
        Ok(InstanceSpec {
            group: spec,
            subgroups,
            aisets,
            run,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[group]");
        match self.group {
            GroupSpec::Free { rank } => {
                let _ = writeln!(out, "family = free\nrank = {rank}");
            }
            GroupSpec::FreeAbelian { rank } => {
                let _ = writeln!(out, "family = free-abelian\nrank = {rank}");
            }
            GroupSpec::Surface { genus } => {
                let _ = writeln!(out, "family = surface\ngenus = {genus}");
            }
        }
        for s in &self.subgroups {
            let gens: Vec<String> = s.generators.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "\n[subgroup {}]\ngenerators = {}", s.name, gens.join(", "));
        }
        for a in &self.aisets {
            let _ = writeln!(
                out,
                "\n[aiset {}]\nsubgroup = {}\nkind = {}",
                a.name,
                a.subgroup,
                a.base.kind()
            );
            match &a.base {
                RuleBase::HalfSpace { normal, threshold } => {
                    let n: Vec<String> = normal.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(out, "normal = {}\nthreshold = {threshold}", n.join(", "));
                }
                RuleBase::Head { strip, head } => {
                    if let Some(s) = strip {
                        let _ = writeln!(out, "strip = {}", s.to_char());
                    }
                    let _ = writeln!(out, "head = {}", head.to_char());
                }
                RuleBase::Extensional { words } => {
                    let w: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(out, "elements = {}", w.join(", "));
                }
            }
            if !a.translate.is_empty() {
                let _ = writeln!(out, "translate = {}", a.translate);
            }
            if a.complement {
                let _ = writeln!(out, "complement = true");
            }
        }
        let r = &self.run;
        let mut run = String::new();
        let fields: [(&str, Option<String>); 9] = [
            ("radius", r.radius.map(|v| v.to_string())),
            ("translate_radius", r.translate_radius.map(|v| v.to_string())),
            ("window", r.window.map(|v| v.to_string())),
            ("dim_cap", r.dim_cap.map(|v| v.to_string())),
            ("mode", r.mode.map(|v| v.to_string())),
            ("seed", r.seed.map(|v| v.to_string())),
            ("stabilizer_radius", r.stabilizer_radius.map(|v| v.to_string())),
            ("ccomplex_radius", r.ccomplex_radius.map(|v| v.to_string())),
            ("override", r.override_hypotheses.map(|v| v.to_string())),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                let _ = writeln!(run, "{k} = {v}");
            }
        }
        if !run.is_empty() {
            let _ = write!(out, "\n[run]\n{run}");
        }
        out
    }

    pub fn group(&self) -> Group {
        Group::new(self.group)
    }

    pub fn subgroup_decl(&self, name: &str) -> Result<&SubgroupDecl> {
        self.subgroups
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Precondition(format!("no subgroup named `{name}`")))
    }

    pub fn subgroup(&self, group: &Group, name: &str) -> Result<Subgroup> {
        Subgroup::new(group, &self.subgroup_decl(name)?.generators)
    }

    pub fn aiset(&self, group: &Group, name: &str) -> Result<AISet> {
        self.aisets
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::Precondition(format!("no aiset named `{name}`")))?
            .build(group, &self.subgroups)
    }
}

impl AisetDecl {
    pub fn build(&self, group: &Group, subgroups: &[SubgroupDecl]) -> Result<AISet> {
        let decl = subgroups
            .iter()
            .find(|s| s.name == self.subgroup)
            .ok_or_else(|| Error::Precondition(format!("no subgroup named `{}`", self.subgroup)))?;
        let h = Subgroup::new(group, &decl.generators)?;
        let mut x = AISet::new(self.name.clone(), self.base.clone(), h)?.translated(&self.translate)?;
        if self.complement {
            x = x.complement();
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2_DEMO: &str = include_str!("../../../demos/z2_halfplane.gsplit");

    #[test]
    fn minimal_free_spec() {
        let s = InstanceSpec::parse("[group]\nfamily = free\nrank = 2\n\n[subgroup H]\ngenerators = a\n").unwrap();
        assert_eq!(s.subgroups.len(), 1);
        assert_eq!(s.subgroups[0].generators[0].to_string(), "a");
    }

    #[test]
    fn undeclared_subgroup_is_located() {
        let text = "[group]\nfamily = free\nrank = 2\n[aiset X]\nsubgroup = K\nkind = head\nhead = b\n";
        match InstanceSpec::parse(text) {
            Err(Error::Spec(errs)) => {
                assert_eq!(errs.len(), 1);
                assert_eq!(errs[0].line, 5);
                assert!(errs[0].message.contains("undeclared subgroup `K`"));
            }
            other => panic!("expected a located error, got {other:?}"),
        }
    }

    #[test]
    fn several_errors_are_collected() {
        let text = "[group]\nfamily = free\nrank = 2\nsize = 3\n[subgroup H]\ngenerators = c\n[run]\nradius = 40\n";
        let Err(Error::Spec(errs)) = InstanceSpec::parse(text) else {
            panic!("expected errors");
        };
        let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![4, 6, 8]);
    }

    #[test]
    fn demo_round_trips() {
        let s = InstanceSpec::parse(Z2_DEMO).unwrap();
        let again = InstanceSpec::parse(&s.to_text()).unwrap();
        assert_eq!(s, again);
        assert_eq!(s.to_text(), again.to_text());
        let g = s.group();
        let x = s.aiset(&g, "X").unwrap();
        assert!(x.contains(&g.parse_word("b").unwrap()).unwrap());
    }

    #[test]
    fn tuples_in_lists() {
        let text = "[group]\nfamily = free-abelian\nrank = 2\n[subgroup H]\ngenerators = (1,0), (0,2)\n";
        let s = InstanceSpec::parse(text).unwrap();
        assert_eq!(s.subgroups[0].generators.len(), 2);
    }
}
