//! Session files: declarations followed by commands, one statement per `;`.
//!
//! ```text
//! ring A = ZZ[X,Y] / (Y^2 - 4*X) order grevlex domain;
//! map f : A -> S { X -> T^2, Y -> 2*T };
//! ideal I in A = (2, Y);
//! primespot P in A = (2, Y) sat (X + 1) regular;
//! pullback Q { ring = R; ideal = (2); b = [T^2]; p = 2; e = 2; extra = [2*T]; probe = 3; names = [X, Y]; }
//! scan B in R { xs = [2, x]; q = 2; wn = [P]; bad = []; }
//! yanagihara(A, 2, X, Y, 2, Y) expect YanagiharaViolation;
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Polynomials are
//! kept as text here and parsed against their ring when the session runs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ring { name: String, base: String, relations: Vec<String>, order: Option<String>, domain: bool },
    Map { name: String, source: String, target: String, images: Vec<(String, String)> },
    Ideal { name: String, ring: String, gens: Vec<String> },
    PrimeSpot { name: String, ring: String, gens: Vec<String>, sat: Option<String>, regular: bool },
    Pullback { name: String, fields: Vec<(String, String)> },
    Scan { name: String, ring: String, fields: Vec<(String, String)> },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Ring { name, .. }
            | Decl::Map { name, .. }
            | Decl::Ideal { name, .. }
            | Decl::PrimeSpot { name, .. }
            | Decl::Pullback { name, .. }
            | Decl::Scan { name, .. } => name,
        }
    }

    /// Names this declaration refers to.
    fn references(&self) -> Vec<&str> {
        match self {
            Decl::Ring { .. } => vec![],
            Decl::Map { source, target, .. } => vec![source, target],
            Decl::Ideal { ring, .. } | Decl::PrimeSpot { ring, .. } => vec![ring],
            Decl::Pullback { fields, .. } => field(fields, "ring").into_iter().collect(),
            Decl::Scan { ring, fields, .. } => {
                let mut out = vec![ring.as_str()];
                for key in ["wn", "bad"] {
                    if let Some(list) = field(fields, key) {
                        out.extend(split_list(list).into_iter().filter(|s| !s.is_empty()));
                    }
                }
                out
            }
        }
    }
}

pub fn field<'a>(fields: &'a [(String, String)], key: &str) -> Option<&'a str> {
    fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub op: String,
    pub args: Vec<String>,
    pub expect: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Decl(Decl),
    Command(Command),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Session {
    pub statements: Vec<Statement>,
}

impl Session {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Decl(d) => Some(d),
            _ => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Command(c) => Some(c),
            _ => None,
        })
    }
}

pub const COMMANDS: &[&str] = &[
    "gb",
    "member",
    "radmember",
    "satpow",
    "swan",
    "yanagihara",
    "manaresi",
    "equalizer",
    "search",
    "subring",
    "kernel",
    "pullback",
    "certify",
    "conductor",
    "unramified",
    "scan",
    "dims",
];

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

/// Splits at `sep` outside of any bracket pair.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut in_str = false;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '(' | '[' | '{' if !in_str => depth += 1,
            ')' | ']' | '}' if !in_str => depth -= 1,
            c if c == sep && depth == 0 && !in_str => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Items of a comma-separated list; empty input gives an empty list.
pub fn split_list(text: &str) -> Vec<&str> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .or_else(|| text.strip_prefix('(').and_then(|t| t.strip_suffix(')')))
        .unwrap_or(text);
    if inner.trim().is_empty() {
        return Vec::new();
    }
    split_top(inner, ',').into_iter().map(str::trim).collect()
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn ident(line: usize, s: &str) -> Result<String, ParseError> {
    let s = s.trim();
    if is_ident(s) {
        Ok(s.to_string())
    } else {
        err(line, format!("expected a name, found `{s}`"))
    }
}

/// `(a, b, c)` with balanced outer parentheses, as trimmed items.
fn paren_list(line: usize, s: &str) -> Result<Vec<String>, ParseError> {
    let s = s.trim();
    if !(s.starts_with('(') && s.ends_with(')')) {
        return err(line, format!("expected a parenthesized list, found `{s}`"));
    }
    Ok(split_list(s).into_iter().map(String::from).collect())
}

/// Index of the `)` matching the `(` at `open`.
fn matching(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s[open..].char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_ring(line: usize, rest: &str) -> Result<Decl, ParseError> {
    let (name, body) = rest.split_once('=').ok_or(ParseError { line, msg: "expected `=`".into() })?;
    let name = ident(line, name)?;
    let body = body.trim();
    let close = body.find(']').ok_or(ParseError { line, msg: "expected `[vars]`".into() })?;
    let base = body[..=close].split_whitespace().collect::<String>();
    let mut tail = body[close + 1..].trim();
    let mut relations = Vec::new();
    if let Some(t) = tail.strip_prefix('/') {
        let t = t.trim_start();
        let end = t.starts_with('(').then(|| matching(t, 0)).flatten();
        let Some(end) = end else { return err(line, "expected `(relations)` after `/`") };
        relations = paren_list(line, &t[..=end])?;
        tail = t[end + 1..].trim();
    }
    let mut domain = false;
    if let Some(t) = tail.strip_suffix("domain") {
        domain = true;
        tail = t.trim();
    }
    let order = match tail.strip_prefix("order") {
        Some(o) if !o.trim().is_empty() => Some(o.split_whitespace().collect::<Vec<_>>().join(" ")),
        Some(_) => return err(line, "missing order after `order`"),
        None if tail.is_empty() => None,
        None => return err(line, format!("unexpected `{tail}` in ring declaration")),
    };
    Ok(Decl::Ring { name, base, relations, order, domain })
}

fn parse_map(line: usize, rest: &str) -> Result<Decl, ParseError> {
    let (name, body) = rest.split_once(':').ok_or(ParseError { line, msg: "expected `:`".into() })?;
    let name = ident(line, name)?;
    let open = body.find('{').ok_or(ParseError { line, msg: "expected `{`".into() })?;
    let (src, tgt) = body[..open].split_once("->").ok_or(ParseError { line, msg: "expected `A -> B`".into() })?;
    let block = body[open..].trim();
    let Some(inner) = block.strip_prefix('{').and_then(|b| b.strip_suffix('}')) else {
        return err(line, "unterminated `{`");
    };
    let mut images = Vec::new();
    for item in split_top(inner, ',').into_iter().map(str::trim).filter(|s| !s.is_empty()) {
        let (v, img) = item.split_once("->").ok_or(ParseError { line, msg: format!("expected `var -> image`, found `{item}`") })?;
        images.push((ident(line, v)?, img.trim().to_string()));
    }
    Ok(Decl::Map { name, source: ident(line, src)?, target: ident(line, tgt)?, images })
}

/// `NAME in RING = rest`.
fn named_in(line: usize, rest: &str) -> Result<(String, String, String), ParseError> {
    let (head, body) = rest.split_once('=').ok_or(ParseError { line, msg: "expected `=`".into() })?;
    let words: Vec<&str> = head.split_whitespace().collect();
    let [name, "in", ring] = words[..] else { return err(line, "expected `NAME in RING =`") };
    Ok((ident(line, name)?, ident(line, ring)?, body.trim().to_string()))
}

fn parse_spot(line: usize, rest: &str) -> Result<Decl, ParseError> {
    let (name, ring, body) = named_in(line, rest)?;
    let end = body.starts_with('(').then(|| matching(&body, 0)).flatten();
    let Some(end) = end else { return err(line, "expected `(generators)`") };
    let gens = paren_list(line, &body[..=end])?;
    let mut tail = body[end + 1..].trim();
    let mut regular = false;
    if let Some(t) = tail.strip_suffix("regular") {
        regular = true;
        tail = t.trim();
    }
    let sat = match tail.strip_prefix("sat") {
        Some(t) => {
            let t = t.trim();
            let items = paren_list(line, t)?;
            let [s] = &items[..] else { return err(line, "`sat` takes one element") };
            Some(s.clone())
        }
        None if tail.is_empty() => None,
        None => return err(line, format!("unexpected `{tail}` in primespot declaration")),
    };
    Ok(Decl::PrimeSpot { name, ring, gens, sat, regular })
}

fn parse_fields(line: usize, block: &str, allowed: &[&str]) -> Result<Vec<(String, String)>, ParseError> {
    let block = block.trim();
    let Some(inner) = block.strip_prefix('{').and_then(|b| b.strip_suffix('}')) else {
        return err(line, "expected `{ key = value; ... }`");
    };
    let mut fields: Vec<(String, String)> = Vec::new();
    for item in split_top(inner, ';').into_iter().map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or(ParseError { line, msg: format!("expected `key = value`, found `{item}`") })?;
        let k = ident(line, k)?;
        if !allowed.contains(&k.as_str()) {
            return err(line, format!("unknown field `{k}`"));
        }
        if fields.iter().any(|(f, _)| *f == k) {
            return err(line, format!("duplicate field `{k}`"));
        }
        fields.push((k, v.split_whitespace().collect::<Vec<_>>().join(" ")));
    }
    Ok(fields)
}

const PULLBACK_FIELDS: &[&str] = &["ring", "ideal", "b", "p", "e", "extra", "probe", "names"];
const SCAN_FIELDS: &[&str] = &["xs", "q", "wn", "bad"];

fn parse_command(line: usize, text: &str) -> Result<Command, ParseError> {
    let open = text.find('(').ok_or(ParseError { line, msg: format!("unknown statement `{text}`") })?;
    let op = ident(line, &text[..open])?;
    if !COMMANDS.contains(&op.as_str()) {
        return err(line, format!("unknown command `{op}`"));
    }
    let close = matching(text, open).ok_or(ParseError { line, msg: "unbalanced parentheses".into() })?;
    let args = split_list(&text[open..=close]).into_iter().map(String::from).collect();
    let tail = text[close + 1..].trim();
    let expect = match tail.strip_prefix("expect") {
        Some(v) => {
            let v = v.trim();
            let v = match v.strip_prefix('"') {
                Some(q) => q.strip_suffix('"').ok_or(ParseError { line, msg: "unterminated string".into() })?,
                None if !v.is_empty() && !v.contains(char::is_whitespace) => v,
                None => return err(line, "expected a word or a quoted string after `expect`"),
            };
            Some(v.to_string())
        }
        None if tail.is_empty() => None,
        None => return err(line, format!("unexpected `{tail}` after command")),
    };
    Ok(Command { op, args, expect })
}

fn parse_statement(line: usize, text: &str) -> Result<Statement, ParseError> {
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let decl = match head {
        "ring" => parse_ring(line, rest)?,
        "map" => parse_map(line, rest)?,
        "ideal" => {
            let (name, ring, body) = named_in(line, rest)?;
            Decl::Ideal { name, ring, gens: paren_list(line, &body)? }
        }
        "primespot" => parse_spot(line, rest)?,
        "pullback" if !rest.trim_start().starts_with('(') => {
            let open = rest.find('{').ok_or(ParseError { line, msg: "expected `{`".into() })?;
            Decl::Pullback { name: ident(line, &rest[..open])?, fields: parse_fields(line, &rest[open..], PULLBACK_FIELDS)? }
        }
        "scan" if !rest.trim_start().starts_with('(') => {
            let open = rest.find('{').ok_or(ParseError { line, msg: "expected `{`".into() })?;
            let words: Vec<&str> = rest[..open].split_whitespace().collect();
            let [name, "in", ring] = words[..] else { return err(line, "expected `scan NAME in RING {`") };
            Decl::Scan {
                name: ident(line, name)?,
                ring: ident(line, ring)?,
                fields: parse_fields(line, &rest[open..], SCAN_FIELDS)?,
            }
        }
        _ => return Ok(Statement::Command(parse_command(line, text)?)),
    };
    Ok(Statement::Decl(decl))
}

/// Statement texts with their byte offsets. A statement ends at a top-level
/// `;` or at a `}` that closes a block.
fn statements(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut in_str = false;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_str = !in_str,
            _ if in_str => {}
            '(' | '[' | '{' => depth += 1,
            ')' | ']' => depth -= 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    out.push((start, &text[start..=i]));
                    start = i + 1;
                }
            }
            ';' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Parses a session and checks that names are unique and resolve to
/// earlier declarations.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let clean = strip_comments(text);
    let pieces = statements(&clean);
    let last = pieces.len() - 1;
    let mut statements = Vec::new();
    for (k, (offset, piece)) in pieces.into_iter().enumerate() {
        let lead = piece.len() - piece.trim_start().len();
        let line = 1 + clean[..offset + lead].matches('\n').count();
        let stmt = piece.trim();
        if stmt.is_empty() {
            continue;
        }
        if k == last {
            return err(line, "missing `;`");
        }
        statements.push((line, parse_statement(line, stmt)?));
    }
    let mut seen = BTreeSet::new();
    for (line, s) in &statements {
        if let Statement::Decl(d) = s {
            for r in d.references() {
                if !seen.contains(r) {
                    return err(*line, format!("`{r}` is not declared"));
                }
            }
            if !seen.insert(d.name().to_string()) {
                return err(*line, format!("`{}` is declared twice", d.name()));
            }
        }
    }
    Ok(Session { statements: statements.into_iter().map(|(_, s)| s).collect() })
}

fn list(items: &[String], open: &str, close: &str) -> String {
    format!("{open}{}{close}", items.join(", "))
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring { name, base, relations, order, domain } => {
                write!(f, "ring {name} = {base}")?;
                if !relations.is_empty() {
                    write!(f, " / {}", list(relations, "(", ")"))?;
                }
                if let Some(o) = order {
                    write!(f, " order {o}")?;
                }
                if *domain {
                    write!(f, " domain")?;
                }
                write!(f, ";")
            }
            Decl::Map { name, source, target, images } => {
                let parts: Vec<String> = images.iter().map(|(v, i)| format!("{v} -> {i}")).collect();
                write!(f, "map {name} : {source} -> {target} {{ {} }};", parts.join(", "))
            }
            Decl::Ideal { name, ring, gens } => write!(f, "ideal {name} in {ring} = {};", list(gens, "(", ")")),
            Decl::PrimeSpot { name, ring, gens, sat, regular } => {
                write!(f, "primespot {name} in {ring} = {}", list(gens, "(", ")"))?;
                if let Some(s) = sat {
                    write!(f, " sat ({s})")?;
                }
                if *regular {
                    write!(f, " regular")?;
                }
                write!(f, ";")
            }
            Decl::Pullback { name, fields } => {
                write!(f, "pullback {name} {{")?;
                for (k, v) in fields {
                    write!(f, " {k} = {v};")?;
                }
                write!(f, " }}")
            }
            Decl::Scan { name, ring, fields } => {
                write!(f, "scan {name} in {ring} {{")?;
                for (k, v) in fields {
                    write!(f, " {k} = {v};")?;
                }
                write!(f, " }}")
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.op, self.args.join(", "))?;
        match &self.expect {
            Some(e) if is_ident(e) || e.chars().all(|c| c.is_ascii_alphanumeric() || c == '/') => write!(f, " expect {e}")?,
            Some(e) => write!(f, " expect \"{e}\"")?,
            None => {}
        }
        Ok(())
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            match s {
                Statement::Decl(d) => writeln!(f, "{d}")?,
                Statement::Command(c) => writeln!(f, "{c};")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "
        # the surrogate ring
        ring A = ZZ[X,Y] / (Y^2 - 4*X) order grevlex domain;
        ring S = ZZ[T];
        map f : A -> S { X -> T^2, Y -> 2*T };
        ideal I in A = (2, Y);
        primespot P in A = (2, Y) sat (X + 1) regular;
        pullback Q { ring = S; ideal = (2); b = [T^2]; p = 2; e = 2; }
        scan B in A { xs = [2, X, Y]; q = 3; wn = [P]; bad = []; }
        yanagihara(A, 2, X, Y, 2, Y) expect YanagiharaViolation;
        conductor(f, [1, T]) expect \"(2, Y)\";
    ";

    #[test]
    fn parses_every_statement_kind() {
        let s = parse_session(EXAMPLE).unwrap();
        assert_eq!(s.decls().count(), 7);
        assert_eq!(s.commands().count(), 2);
        let Some(Decl::Ring { relations, order, domain, .. }) = s.decls().next() else { panic!() };
        assert_eq!(relations, &["Y^2 - 4*X"]);
        assert_eq!(order.as_deref(), Some("grevlex"));
        assert!(domain);
        let c = s.commands().nth(1).unwrap();
        assert_eq!(c.args, ["f", "[1, T]"]);
        assert_eq!(c.expect.as_deref(), Some("(2, Y)"));
    }

    #[test]
    fn display_round_trips() {
        let s = parse_session(EXAMPLE).unwrap();
        let again = parse_session(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn empty_session() {
        assert_eq!(parse_session("  # nothing\n").unwrap(), Session::default());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_session("ring A = ZZ[X];\nmap f : A -> B { X -> X };").unwrap_err().line == 2);
        assert!(parse_session("ring A = ZZ[X]; ring A = QQ[X];").is_err());
        assert!(parse_session("frobnicate(A);").is_err());
        assert!(parse_session("ring A = ZZ[X]").is_err());
        assert!(parse_session("ring A = ZZ[X] / Y;").is_err());
    }
}
