//! Plain-text instance formats.
//!
//! * graphs: `p edge <n> <m>` (undirected, `e u v` lines) or `p arc <n> <m>`
//!   (directed, `a u v` lines);
//! * CNF: DIMACS `p cnf <n> <m>` with 0-terminated signed literals;
//! * general CSP: `p csp <n> <m> <k>` then `<arity> <v1> .. <va> <table-hex>`
//!   per clause, the table packed into whole hex digits, most significant first;
//! * subset-sum: `p ss <n>`, `t <target>`, then `i <item>` lines.
//!
//! Lines starting with `c ` are comments and blank lines are ignored.
//! Serialisation is canonical: sorted edges, clauses in stored order.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use super::{Clause, CspInstance, Graph, SubsetSumInstance};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Graph,
    Cnf,
    Csp,
    Ss,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(Format::Graph),
            "cnf" => Ok(Format::Cnf),
            "csp" => Ok(Format::Csp),
            "ss" => Ok(Format::Ss),
            other => Err(Error::param(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    /// Guesses the format from a file extension, then from the problem line.
    pub fn infer(path: &std::path::Path, text: &str) -> Option<Format> {
        let by_ext = match path.extension().and_then(|e| e.to_str()) {
            Some("edge" | "arc" | "col") => Some(Format::Graph),
            Some(e) => e.parse().ok(),
            None => None,
        };
        by_ext.or_else(|| {
            let header = text.lines().map(str::trim).find(|l| l.starts_with("p "))?;
            match header.split_whitespace().nth(1)? {
                "edge" | "arc" => Some(Format::Graph),
                other => other.parse().ok(),
            }
        })
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Graph => "graph",
            Format::Cnf => "cnf",
            Format::Csp => "csp",
            Format::Ss => "ss",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Csp(CspInstance),
    SubsetSum(SubsetSumInstance),
}

impl Instance {
    /// The format `serialize_instance` should use by default: CNF when every
    /// clause is a plain disjunction.
    pub fn natural_format(&self) -> Format {
        match self {
            Instance::Graph(_) => Format::Graph,
            Instance::Csp(f) => {
                if f.clauses().iter().all(|c| c.as_disjunction().is_some()) {
                    Format::Cnf
                } else {
                    Format::Csp
                }
            }
            Instance::SubsetSum(_) => Format::Ss,
        }
    }

    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Instance::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_csp(&self) -> Option<&CspInstance> {
        match self {
            Instance::Csp(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_subset_sum(&self) -> Option<&SubsetSumInstance> {
        match self {
            Instance::SubsetSum(s) => Some(s),
            _ => None,
        }
    }
}

impl From<Graph> for Instance {
    fn from(g: Graph) -> Self {
        Instance::Graph(g)
    }
}

impl From<CspInstance> for Instance {
    fn from(f: CspInstance) -> Self {
        Instance::Csp(f)
    }
}

impl From<SubsetSumInstance> for Instance {
    fn from(s: SubsetSumInstance) -> Self {
        Instance::SubsetSum(s)
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        if t.is_empty() || t == "c" || t.starts_with("c ") || t.starts_with("c\t") {
            None
        } else {
            Some((i + 1, t))
        }
    })
}

fn num<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {tok:?}")))
}

fn expect_end<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::parse(line, format!("unexpected trailing token {t:?}"))),
    }
}

fn with_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidInstance(m) => Error::parse(line, m),
        other => other,
    })
}

pub fn parse_instance(text: &str, format: Format) -> Result<Instance> {
    match format {
        Format::Graph => parse_graph(text).map(Instance::Graph),
        Format::Cnf => parse_cnf(text).map(Instance::Csp),
        Format::Csp => parse_csp(text).map(Instance::Csp),
        Format::Ss => parse_subset_sum(text).map(Instance::SubsetSum),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") {
        return Err(Error::parse(hl, "expected header `p edge <n> <m>` or `p arc <n> <m>`"));
    }
    let (directed, tag) = match toks.next() {
        Some("edge") => (false, "e"),
        Some("arc") => (true, "a"),
        other => return Err(Error::parse(hl, format!("unknown graph kind {other:?}"))),
    };
    let n: usize = num(toks.next(), hl, "vertex count")?;
    let m: usize = num(toks.next(), hl, "edge count")?;
    expect_end(toks, hl)?;

    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        let mut toks = line.split_whitespace();
        if toks.next() != Some(tag) {
            return Err(Error::parse(ln, format!("expected an `{tag} <u> <v>` line")));
        }
        let u: usize = num(toks.next(), ln, "endpoint")?;
        let v: usize = num(toks.next(), ln, "endpoint")?;
        expect_end(toks, ln)?;
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::parse(ln, format!("endpoint outside 1..={n}")));
        }
        if u == v {
            return Err(Error::parse(ln, format!("self-loop at vertex {u}")));
        }
        let key = if directed || u < v { (u, v) } else { (v, u) };
        if !seen.insert(key) {
            return Err(Error::parse(ln, format!("duplicate edge {} {}", key.0, key.1)));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    with_line(hl, Graph::new(n, directed, edges))
}

pub fn parse_cnf(text: &str) -> Result<CspInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("cnf") {
        return Err(Error::parse(hl, "expected header `p cnf <n> <m>`"));
    }
    let n: usize = num(toks.next(), hl, "variable count")?;
    let m: usize = num(toks.next(), hl, "clause count")?;
    expect_end(toks, hl)?;

    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut clauses = Vec::with_capacity(m);
    let mut current: Vec<i64> = Vec::new();
    let mut start = 0;
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        for tok in line.split_whitespace() {
            let lit: i64 = num(Some(tok), ln, "literal")?;
            if current.is_empty() {
                start = ln;
            }
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::parse(ln, "empty clause"));
                }
                if let Some(&l) = current.iter().find(|l| l.unsigned_abs() as usize > n) {
                    return Err(Error::parse(start, format!("literal {l} outside 1..={n}")));
                }
                let clause = with_line(start, Clause::disjunction(&current))?;
                if !seen.insert(clause.clone()) {
                    return Err(Error::parse(start, "duplicate clause"));
                }
                clauses.push(clause);
                current.clear();
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(start, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    with_line(hl, CspInstance::from_clauses(n, clauses))
}

fn parse_table(hex: &str, arity: usize, line: usize) -> Result<Vec<bool>> {
    let bits = 1usize << arity;
    let digits = bits.div_ceil(4);
    if hex.len() != digits {
        return Err(Error::parse(
            line,
            format!("truth table needs {digits} hex digits, got {}", hex.len()),
        ));
    }
    let mut table = vec![false; bits];
    for (pos, ch) in hex.chars().rev().enumerate() {
        let d = ch
            .to_digit(16)
            .ok_or_else(|| Error::parse(line, format!("invalid hex digit {ch:?}")))?;
        for b in 0..4 {
            if (d >> b) & 1 == 1 {
                let j = pos * 4 + b;
                if j >= bits {
                    return Err(Error::parse(line, "truth table sets bits beyond 2^arity"));
                }
                table[j] = true;
            }
        }
    }
    Ok(table)
}

fn format_table(table: &[bool]) -> String {
    let digits = table.len().div_ceil(4);
    (0..digits)
        .rev()
        .map(|pos| {
            let d = (0..4)
                .filter(|b| table.get(pos * 4 + b).copied().unwrap_or(false))
                .fold(0u32, |acc, b| acc | (1 << b));
            char::from_digit(d, 16).unwrap()
        })
        .collect()
}

pub fn parse_csp(text: &str) -> Result<CspInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("csp") {
        return Err(Error::parse(hl, "expected header `p csp <n> <m> <k>`"));
    }
    let n: usize = num(toks.next(), hl, "variable count")?;
    let m: usize = num(toks.next(), hl, "clause count")?;
    let k: usize = num(toks.next(), hl, "arity bound")?;
    expect_end(toks, hl)?;

    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut clauses = Vec::with_capacity(m);
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let arity: usize = num(toks.first().copied(), ln, "arity")?;
        if arity == 0 || arity > k {
            return Err(Error::parse(ln, format!("arity {arity} outside 1..={k}")));
        }
        if toks.len() != arity + 2 {
            return Err(Error::parse(ln, format!("expected {arity} variables and a table")));
        }
        let vars = toks[1..=arity]
            .iter()
            .map(|t| num::<usize>(Some(t), ln, "variable"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&v) = vars.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::parse(ln, format!("variable {v} outside 1..={n}")));
        }
        let table = parse_table(toks[arity + 1], arity, ln)?;
        let clause = with_line(ln, Clause::new(vars, table))?;
        if !seen.insert(clause.clone()) {
            return Err(Error::parse(ln, "duplicate clause"));
        }
        clauses.push(clause);
    }
    if clauses.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    with_line(hl, CspInstance::new(n, k, clauses))
}

pub fn parse_subset_sum(text: &str) -> Result<SubsetSumInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("ss") {
        return Err(Error::parse(hl, "expected header `p ss <n>`"));
    }
    let n: usize = num(toks.next(), hl, "item count")?;
    expect_end(toks, hl)?;

    let mut target: Option<BigUint> = None;
    let mut items = Vec::with_capacity(n);
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("t") => {
                if target.is_some() {
                    return Err(Error::parse(ln, "target given twice"));
                }
                target = Some(num(toks.next(), ln, "target")?);
            }
            Some("i") => items.push(num(toks.next(), ln, "item")?),
            _ => return Err(Error::parse(ln, "expected a `t <S>` or `i <a>` line")),
        }
        expect_end(toks, ln)?;
    }
    if items.len() != n {
        return Err(Error::parse(
            last_line,
            format!("header declares {n} items, found {}", items.len()),
        ));
    }
    let target = target.ok_or_else(|| Error::parse(last_line, "missing `t <S>` line"))?;
    Ok(SubsetSumInstance::new(items, target))
}

/// Canonical text for `inst` in `format`. Fails only when asked to write a
/// non-disjunctive clause as CNF, or when the format does not fit the
/// instance kind.
pub fn serialize_instance(inst: &Instance, format: Format) -> Result<String> {
    match (inst, format) {
        (Instance::Graph(g), Format::Graph) => Ok(serialize_graph(g)),
        (Instance::Csp(f), Format::Cnf) => serialize_cnf(f),
        (Instance::Csp(f), Format::Csp) => Ok(serialize_csp(f)),
        (Instance::SubsetSum(s), Format::Ss) => Ok(serialize_subset_sum(s)),
        (_, f) => Err(Error::param(format!("instance kind does not match format {f}"))),
    }
}

pub fn serialize_graph(g: &Graph) -> String {
    let (kind, tag) = if g.is_directed() { ("arc", 'a') } else { ("edge", 'e') };
    let mut out = format!("p {kind} {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{tag} {u} {v}");
    }
    out
}

pub fn serialize_cnf(f: &CspInstance) -> Result<String> {
    let mut out = format!("p cnf {} {}\n", f.n_vars(), f.clause_count());
    for (i, c) in f.clauses().iter().enumerate() {
        let lits = c
            .as_disjunction()
            .ok_or_else(|| Error::param(format!("clause {} is not a disjunction of literals", i + 1)))?;
        for l in lits {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    Ok(out)
}

pub fn serialize_csp(f: &CspInstance) -> String {
    let mut out = format!("p csp {} {} {}\n", f.n_vars(), f.clause_count(), f.k_max());
    for c in f.clauses() {
        let _ = write!(out, "{}", c.arity());
        for v in c.vars() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " {}", format_table(c.table()));
    }
    out
}

pub fn serialize_subset_sum(s: &SubsetSumInstance) -> String {
    let mut out = format!("p ss {}\nt {}\n", s.len(), s.target());
    for a in s.items() {
        let _ = writeln!(out, "i {a}");
    }
    out
}
