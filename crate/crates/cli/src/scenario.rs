//! Line-oriented scenario files: `section key=value ...`, one section per
//! line, sections in any order, `#` starts a comment.

use std::collections::BTreeMap;

use relstab_core::linalg::PrimeField;
use relstab_core::{Error, Result};
use serde::Serialize;

pub const MAX_CAP: usize = 16;
pub const MAX_WINDOW: usize = 4;
pub const MAX_DEPTH: usize = 3;
pub const MAX_BUDGET: usize = 1 << 24;
pub const MAX_GROUP_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextKind {
    Module,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    KleinFour,
    Permutations { gens: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    SubgroupInduced,
    AddList { gens: Vec<String>, prune: bool },
    Truncation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectSpec {
    /// A direct sum of named pieces, e.g. `[J2, regular]` or `[S0, S-1]`.
    Sum { parts: Vec<String> },
    /// Explicit complex: dimensions per degree and the differentials leaving
    /// each degree above the lowest.
    Complex { degrees: Vec<i32>, dims: Vec<usize>, diffs: BTreeMap<i32, Vec<Vec<i64>>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    StableHom,
    Resolve,
    Localize,
    Verify,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub cap: usize,
    pub window: usize,
    pub seed: u64,
    pub depth: usize,
    pub budget: usize,
    /// source piece for `stable_hom`
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub p: u32,
    pub context: ContextKind,
    pub group: Option<GroupSpec>,
    pub subgroup: Option<Vec<usize>>,
    pub system: SystemSpec,
    pub object: ObjectSpec,
    pub task: TaskSpec,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("field", &["p"]),
    ("context", &["kind"]),
    ("group", &["kind", "n", "gens"]),
    ("subgroup", &["elems"]),
    ("system", &["kind", "gens", "prune"]),
    ("object", &["kind", "size", "parts", "i", "degrees", "dims"]),
    ("task", &["kind", "cap", "window", "seed", "depth", "budget", "source"]),
];

/// A parsed value with the position it came from.
#[derive(Clone, Debug)]
struct Field {
    value: Value,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Atom(String),
    List(Vec<Value>),
}

type Section = BTreeMap<String, Field>;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Validation { key: key.to_string(), message: message.into() }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let sections = parse_sections(text)?;
    build(&sections)
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut pos = skip_ws(&chars, 0);
        if pos == chars.len() {
            continue;
        }
        let start = pos;
        while pos < chars.len() && !chars[pos].is_whitespace() {
            pos += 1;
        }
        let name: String = chars[start..pos].iter().collect();
        let Some(&(_, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
            return Err(parse_err(line_no, start + 1, format!("unknown section `{name}`")));
        };
        if out.contains_key(&name) {
            return Err(parse_err(line_no, start + 1, format!("section `{name}` given twice")));
        }
        let mut section = Section::new();
        loop {
            pos = skip_ws(&chars, pos);
            if pos == chars.len() {
                break;
            }
            let kstart = pos;
            while pos < chars.len() && chars[pos] != '=' && !chars[pos].is_whitespace() {
                pos += 1;
            }
            let key: String = chars[kstart..pos].iter().collect();
            if pos == chars.len() || chars[pos] != '=' {
                return Err(parse_err(line_no, kstart + 1, format!("expected `=` after `{key}`")));
            }
            let known = keys.contains(&key.as_str()) || (name == "object" && diff_degree(&key).is_some());
            if !known {
                return Err(parse_err(line_no, kstart + 1, format!("unknown key `{key}` in section `{name}`")));
            }
            if section.contains_key(&key) {
                return Err(parse_err(line_no, kstart + 1, format!("key `{key}` given twice")));
            }
            pos += 1;
            let vstart = pos;
            let (value, next) = parse_value(&chars, pos, line_no)?;
            if next < chars.len() && !chars[next].is_whitespace() {
                return Err(parse_err(line_no, next + 1, "unexpected character after value"));
            }
            pos = next;
            section.insert(key, Field { value, line: line_no, column: vstart + 1 });
        }
        out.insert(name, section);
    }
    Ok(out)
}

fn skip_ws(chars: &[char], mut pos: usize) -> usize {
    while pos < chars.len() && chars[pos].is_whitespace() {
        pos += 1;
    }
    pos
}

/// `d<k>` keys carry the differential leaving degree `k`.
fn diff_degree(key: &str) -> Option<i32> {
    key.strip_prefix('d')?.parse().ok()
}

fn parse_value(chars: &[char], pos: usize, line: usize) -> Result<(Value, usize)> {
    if pos >= chars.len() {
        return Err(parse_err(line, pos + 1, "missing value"));
    }
    if chars[pos] != '[' {
        let mut end = pos;
        while end < chars.len() && !chars[end].is_whitespace() && chars[end] != ',' && chars[end] != ']' {
            end += 1;
        }
        if end == pos {
            return Err(parse_err(line, pos + 1, "missing value"));
        }
        return Ok((Value::Atom(chars[pos..end].iter().collect()), end));
    }
    let mut items = Vec::new();
    let mut p = skip_ws(chars, pos + 1);
    if p < chars.len() && chars[p] == ']' {
        return Ok((Value::List(items), p + 1));
    }
    loop {
        let (v, next) = parse_value(chars, p, line)?;
        items.push(v);
        p = skip_ws(chars, next);
        match chars.get(p) {
            Some(',') => p = skip_ws(chars, p + 1),
            Some(']') => return Ok((Value::List(items), p + 1)),
            Some(_) => return Err(parse_err(line, p + 1, "expected `,` or `]`")),
            None => return Err(parse_err(line, p + 1, "unclosed `[`")),
        }
    }
}

fn get<'a>(sections: &'a BTreeMap<String, Section>, section: &str, key: &str) -> Option<&'a Field> {
    sections.get(section).and_then(|s| s.get(key))
}

fn atom<'a>(f: &'a Field, key: &str) -> Result<&'a str> {
    match &f.value {
        Value::Atom(a) => Ok(a),
        Value::List(_) => Err(parse_err(f.line, f.column, format!("`{key}` takes a single value, not a list"))),
    }
}

fn number<T: std::str::FromStr>(f: &Field, key: &str) -> Result<T> {
    let a = atom(f, key)?;
    a.parse().map_err(|_| parse_err(f.line, f.column, format!("`{key}`: `{a}` is not a valid number")))
}

fn list<'a>(f: &'a Field, key: &str) -> Result<&'a [Value]> {
    match &f.value {
        Value::List(v) => Ok(v),
        Value::Atom(_) => Err(parse_err(f.line, f.column, format!("`{key}` takes a list `[...]`"))),
    }
}

fn atoms(f: &Field, key: &str) -> Result<Vec<String>> {
    list(f, key)?
        .iter()
        .map(|v| match v {
            Value::Atom(a) => Ok(a.clone()),
            Value::List(_) => Err(parse_err(f.line, f.column, format!("`{key}` takes a flat list"))),
        })
        .collect()
}

fn numbers<T: std::str::FromStr>(f: &Field, key: &str) -> Result<Vec<T>> {
    atoms(f, key)?
        .into_iter()
        .map(|a| a.parse().map_err(|_| parse_err(f.line, f.column, format!("`{key}`: `{a}` is not a valid number"))))
        .collect()
}

fn matrix(f: &Field, key: &str) -> Result<Vec<Vec<i64>>> {
    list(f, key)?
        .iter()
        .map(|row| match row {
            Value::List(items) => items
                .iter()
                .map(|v| match v {
                    Value::Atom(a) => a
                        .parse()
                        .map_err(|_| parse_err(f.line, f.column, format!("`{key}`: `{a}` is not an integer"))),
                    Value::List(_) => Err(parse_err(f.line, f.column, format!("`{key}` nests too deeply"))),
                })
                .collect(),
            Value::Atom(_) => Err(parse_err(f.line, f.column, format!("`{key}` takes a list of rows"))),
        })
        .collect()
}

fn require<'a>(sections: &'a BTreeMap<String, Section>, section: &str, key: &str) -> Result<&'a Field> {
    get(sections, section, key).ok_or_else(|| invalid(&format!("{section}.{key}"), "required"))
}

fn build(s: &BTreeMap<String, Section>) -> Result<Scenario> {
    let p: u32 = number(require(s, "field", "p")?, "p")?;
    if PrimeField::new(p).is_err() {
        return Err(invalid("field.p", format!("{p} is not a prime in 2..=97")));
    }

    let context = match atom(require(s, "context", "kind")?, "kind")? {
        "module" => ContextKind::Module,
        "complex" => ContextKind::Complex,
        other => return Err(invalid("context.kind", format!("`{other}` is not `module` or `complex`"))),
    };

    let group = match (context, s.get("group")) {
        (ContextKind::Module, None) => return Err(invalid("group", "required in the module context")),
        (ContextKind::Complex, Some(_)) => return Err(invalid("group", "only meaningful in the module context")),
        (ContextKind::Complex, None) => None,
        (ContextKind::Module, Some(_)) => Some(group_spec(s)?),
    };

    let subgroup = match get(s, "subgroup", "elems") {
        Some(f) => Some(numbers::<usize>(f, "elems")?),
        None => None,
    };
    if let (Some(elems), Some(g)) = (&subgroup, &group) {
        let order = group_order_bound(g);
        if let Some(bad) = elems.iter().find(|&&e| e >= order) {
            return Err(invalid("subgroup.elems", format!("element {bad} outside a group of order {order}")));
        }
    }

    let system = match atom(require(s, "system", "kind")?, "kind")? {
        "subgroup_induced" => {
            if context != ContextKind::Module {
                return Err(invalid("system.kind", "subgroup_induced needs the module context"));
            }
            if subgroup.is_none() {
                return Err(invalid("subgroup.elems", "required by subgroup_induced"));
            }
            SystemSpec::SubgroupInduced
        }
        "add_list" => {
            let gens = atoms(require(s, "system", "gens")?, "gens")?;
            let prune = match get(s, "system", "prune") {
                Some(f) => match atom(f, "prune")? {
                    "true" => true,
                    "false" => false,
                    other => return Err(invalid("system.prune", format!("`{other}` is not true/false"))),
                },
                None => false,
            };
            for g in &gens {
                check_piece(context, g, "system.gens")?;
            }
            SystemSpec::AddList { gens, prune }
        }
        "truncation" => {
            if context != ContextKind::Complex {
                return Err(invalid("system.kind", "truncation needs the complex context"));
            }
            SystemSpec::Truncation
        }
        other => return Err(invalid("system.kind", format!("unknown system `{other}`"))),
    };

    let object = object_spec(s, context)?;
    let task = task_spec(s, context)?;
    Ok(Scenario { p, context, group, subgroup, system, object, task })
}

fn group_order_bound(g: &GroupSpec) -> usize {
    match g {
        GroupSpec::Cyclic { n } => *n,
        GroupSpec::Dihedral { n } => 2 * n,
        GroupSpec::KleinFour => 4,
        GroupSpec::Permutations { .. } => MAX_GROUP_ORDER,
    }
}

fn group_spec(s: &BTreeMap<String, Section>) -> Result<GroupSpec> {
    let sized = |twice: bool| -> Result<usize> {
        let n: usize = number(require(s, "group", "n")?, "n")?;
        let order = if twice { 2 * n } else { n };
        if n == 0 || order > MAX_GROUP_ORDER {
            return Err(invalid("group.n", format!("group order must be in 1..={MAX_GROUP_ORDER}")));
        }
        Ok(n)
    };
    Ok(match atom(require(s, "group", "kind")?, "kind")? {
        "cyclic" => GroupSpec::Cyclic { n: sized(false)? },
        "dihedral" => GroupSpec::Dihedral { n: sized(true)? },
        "klein_four" => GroupSpec::KleinFour,
        "permutations" => {
            let f = require(s, "group", "gens")?;
            let gens = list(f, "gens")?
                .iter()
                .map(|v| match v {
                    Value::List(items) => items
                        .iter()
                        .map(|i| match i {
                            Value::Atom(a) => a.parse::<usize>().map_err(|_| {
                                parse_err(f.line, f.column, format!("`gens`: `{a}` is not a point index"))
                            }),
                            Value::List(_) => Err(parse_err(f.line, f.column, "`gens` nests too deeply")),
                        })
                        .collect::<Result<Vec<usize>>>(),
                    Value::Atom(_) => Err(parse_err(f.line, f.column, "`gens` takes a list of permutations")),
                })
                .collect::<Result<Vec<_>>>()?;
            if gens.is_empty() {
                return Err(invalid("group.gens", "at least one permutation"));
            }
            GroupSpec::Permutations { gens }
        }
        other => return Err(invalid("group.kind", format!("unknown group `{other}`"))),
    })
}

/// Named pieces: `trivial`, `regular`, `J<s>`, `Ind`, `Ind(J<s>)` for
/// modules; `S<i>`, `D<i>` for complexes.
fn check_piece(context: ContextKind, piece: &str, key: &str) -> Result<()> {
    let ok = match context {
        ContextKind::Module => {
            matches!(piece, "trivial" | "regular" | "Ind")
                || jordan_size(piece).is_some()
                || piece.strip_prefix("Ind(").and_then(|r| r.strip_suffix(')')).and_then(jordan_size).is_some()
        }
        ContextKind::Complex => sphere_or_disk(piece).is_some(),
    };
    if ok {
        Ok(())
    } else {
        Err(invalid(key, format!("`{piece}` does not name an object of this context")))
    }
}

pub fn jordan_size(piece: &str) -> Option<usize> {
    piece.strip_prefix('J')?.parse().ok().filter(|&s| s > 0)
}

/// `('S', i)` or `('D', i)`.
pub fn sphere_or_disk(piece: &str) -> Option<(char, i32)> {
    let kind = piece.chars().next().filter(|c| *c == 'S' || *c == 'D')?;
    let i: i32 = piece[1..].parse().ok()?;
    Some((kind, i))
}

fn object_spec(s: &BTreeMap<String, Section>, context: ContextKind) -> Result<ObjectSpec> {
    let kind = atom(require(s, "object", "kind")?, "kind")?;
    let parts = match (context, kind) {
        (ContextKind::Module, "trivial") => vec!["trivial".to_string()],
        (ContextKind::Module, "regular") => vec!["regular".to_string()],
        (ContextKind::Module, "induced") => vec!["Ind".to_string()],
        (ContextKind::Module, "jordan") => {
            let size: usize = number(require(s, "object", "size")?, "size")?;
            if size == 0 {
                return Err(invalid("object.size", "must be positive"));
            }
            vec![format!("J{size}")]
        }
        (ContextKind::Complex, "sphere") | (ContextKind::Complex, "disk") => {
            let i: i32 = number(require(s, "object", "i")?, "i")?;
            vec![format!("{}{i}", if kind == "sphere" { 'S' } else { 'D' })]
        }
        (_, "sum") => atoms(require(s, "object", "parts")?, "parts")?,
        (ContextKind::Complex, "complex") => return explicit_complex(s),
        (_, other) => return Err(invalid("object.kind", format!("`{other}` is not an object kind of this context"))),
    };
    for piece in &parts {
        check_piece(context, piece, "object.parts")?;
    }
    Ok(ObjectSpec::Sum { parts })
}

fn explicit_complex(s: &BTreeMap<String, Section>) -> Result<ObjectSpec> {
    let degrees: Vec<i32> = numbers(require(s, "object", "degrees")?, "degrees")?;
    let dims: Vec<usize> = numbers(require(s, "object", "dims")?, "dims")?;
    if degrees.len() != dims.len() {
        return Err(invalid("object.dims", "one dimension per degree"));
    }
    if degrees.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(invalid("object.degrees", "degrees must be consecutive and increasing"));
    }
    let mut diffs = BTreeMap::new();
    if let Some(section) = s.get("object") {
        for (key, f) in section {
            if let Some(k) = diff_degree(key) {
                if !degrees.contains(&k) || Some(&k) == degrees.first() {
                    return Err(invalid(&format!("object.{key}"), "differential must leave a listed degree above the lowest"));
                }
                diffs.insert(k, matrix(f, key)?);
            }
        }
    }
    Ok(ObjectSpec::Complex { degrees, dims, diffs })
}

fn task_spec(s: &BTreeMap<String, Section>, context: ContextKind) -> Result<TaskSpec> {
    let kind = match atom(require(s, "task", "kind")?, "kind")? {
        "stable_hom" => TaskKind::StableHom,
        "resolve" => TaskKind::Resolve,
        "localize" => TaskKind::Localize,
        "verify" => TaskKind::Verify,
        "oracle" => TaskKind::Oracle,
        other => return Err(invalid("task.kind", format!("unknown task `{other}`"))),
    };
    let bounded = |key: &str, default: usize, lo: usize, hi: usize| -> Result<usize> {
        match get(s, "task", key) {
            None => Ok(default),
            Some(f) => {
                let v: usize = number(f, key)?;
                if v < lo || v > hi {
                    Err(invalid(&format!("task.{key}"), format!("{v} outside {lo}..={hi}")))
                } else {
                    Ok(v)
                }
            }
        }
    };
    let cap = bounded("cap", relstab_core::precover::DEFAULT_CAP, 0, MAX_CAP)?;
    let window = bounded("window", 2, 0, MAX_WINDOW)?;
    let depth = bounded("depth", 1, 0, MAX_DEPTH)?;
    let budget = bounded("budget", relstab_core::precover::DEFAULT_BUDGET, 1, MAX_BUDGET)?;
    let seed = match get(s, "task", "seed") {
        Some(f) => number(f, "seed")?,
        None => 1,
    };
    let source = match get(s, "task", "source") {
        Some(f) => {
            let piece = atom(f, "source")?.to_string();
            check_piece(context, &piece, "task.source")?;
            Some(piece)
        }
        None => None,
    };
    if kind == TaskKind::StableHom && source.is_none() {
        return Err(invalid("task.source", "required by stable_hom"));
    }
    Ok(TaskSpec { kind, cap, window, seed, depth, budget, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODULE: &str = "field p=2\ncontext kind=module\ngroup kind=cyclic n=4\nsubgroup elems=[2]\n\
                          system kind=subgroup_induced\nobject kind=jordan size=3\n\
                          task kind=localize cap=4 window=2 seed=7\n";

    const COMPLEX: &str = "field p=2\ncontext kind=complex\nsystem kind=truncation\n\
                           object kind=complex degrees=[-1,0] dims=[1,1] d0=[[0]]\n\
                           task kind=verify window=2 seed=7\n";

    #[test]
    fn module_scenario_with_defaults() {
        let s = parse_scenario(MODULE).unwrap();
        assert_eq!(s.p, 2);
        assert_eq!(s.group, Some(GroupSpec::Cyclic { n: 4 }));
        assert_eq!(s.subgroup, Some(vec![2]));
        assert_eq!(s.object, ObjectSpec::Sum { parts: vec!["J3".into()] });
        assert_eq!((s.task.cap, s.task.window, s.task.seed, s.task.depth, s.task.budget), (4, 2, 7, 1, 4096));
    }

    #[test]
    fn complex_scenario() {
        let s = parse_scenario(COMPLEX).unwrap();
        let ObjectSpec::Complex { degrees, dims, diffs } = s.object else { panic!("explicit complex") };
        assert_eq!(degrees, vec![-1, 0]);
        assert_eq!(dims, vec![1, 1]);
        assert_eq!(diffs[&0], vec![vec![0]]);
    }

    #[test]
    fn unknown_section_and_key() {
        let text = MODULE.replace("group kind", "grup kind");
        match parse_scenario(&text).unwrap_err() {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (3, 1));
                assert!(message.contains("grup"));
            }
            e => panic!("unexpected {e:?}"),
        }
        let text = MODULE.replace("cap=4", "cpa=4");
        match parse_scenario(&text).unwrap_err() {
            Error::Parse { line, column, message } => {
                assert_eq!((line, column), (7, 20));
                assert!(message.contains("cpa"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn composite_modulus_rejected() {
        let text = MODULE.replace("p=2", "p=6");
        match parse_scenario(&text).unwrap_err() {
            Error::Validation { key, .. } => assert_eq!(key, "field.p"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn malformed_values() {
        let text = MODULE.replace("elems=[2]", "elems=[2");
        assert!(matches!(parse_scenario(&text), Err(Error::Parse { line: 4, .. })));
        let text = MODULE.replace("cap=4", "cap=99");
        assert!(matches!(parse_scenario(&text), Err(Error::Validation { key, .. }) if key == "task.cap"));
        let text = MODULE.replace("system kind=subgroup_induced", "system kind=truncation");
        assert!(matches!(parse_scenario(&text), Err(Error::Validation { key, .. }) if key == "system.kind"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{MODULE}");
        assert!(parse_scenario(&text).is_ok());
    }
}
