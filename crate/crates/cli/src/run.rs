//! Elaborates a parsed session and runs its commands in order.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use wn_core::bertini::{bertini_scan, ordinary_power, symbolic_power, SectionContext};
use wn_core::fpring::{conductor, kernel_of_map, unramified_at, SubringOracle};
use wn_core::groebner::ops;
use wn_core::pullback::{certify_not_wn, fiber_product, gpi_check, NotWeaklyNormal, Pullback, PullbackSpec};
use wn_core::wnlab::{
    bounded_violation_search, equalizer_probe, manaresi_witness, probe_monomials, swan_check, yanagihara_check,
    Certificate, CertificateRecord, ManaresiOutcome, SearchBounds, SearchKind,
};
use wn_core::{CoeffRing, FPRing, MonomialOrder, Poly, PolyRing, PrimeSpot, RingMap};

use crate::session::{field, parse_session, split_list, Command, Decl, ParseError, Session};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Violations of a search that are embedded (and re-verified) in a report.
pub const CERTIFICATE_CAP: usize = 8;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid declaration `{name}`: {msg}")]
    Invalid { name: String, msg: String },
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Record wall-clock time per command.
    pub timing: bool,
    /// Run only the commands with this name.
    pub only: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// The verdict differs from the expectation.
    Failed,
    /// The command raised an error.
    Error,
    /// An emitted certificate or check did not re-verify.
    Breach,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    #[serde(flatten)]
    pub record: CertificateRecord,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub details: Value,
    pub certificates: Vec<CertificateEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub input_sha256: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.status == Status::Breach) {
            3
        } else if self.entries.iter().any(|e| e.status != Status::Ok) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable transcript.
    pub fn transcript(&self, verbose: bool) -> String {
        let mut out = format!("wn {} sha256:{}\n", self.version, self.input_sha256);
        for e in &self.entries {
            let status = match e.status {
                Status::Ok => "ok",
                Status::Failed => "FAILED",
                Status::Error => "ERROR",
                Status::Breach => "BREACH",
            };
            out += &format!("[{status}] {}", e.command);
            if let Some(v) = &e.verdict {
                out += &format!(" => {v}");
            }
            if let (Status::Failed, Some(x)) = (e.status, &e.expected) {
                out += &format!(" (expected {x})");
            }
            if let Some(msg) = &e.error {
                out += &format!(": {msg}");
            }
            out += "\n";
            if let Value::Object(map) = &e.details {
                for (k, v) in map {
                    match v {
                        Value::String(s) => out += &format!("    {k}: {s}\n"),
                        Value::Array(rows) if k == "table" => {
                            for row in rows {
                                out += &format!("      {}\n", row.as_str().unwrap_or_default());
                            }
                        }
                        other => out += &format!("    {k}: {other}\n"),
                    }
                }
            }
            for c in &e.certificates {
                out += &format!("    certificate {} verified: {}\n", c.record.kind, c.verified);
                if verbose {
                    for (k, v) in &c.record.fields {
                        out += &format!("      {k} = {v}\n");
                    }
                }
            }
            if let (true, Some(ms)) = (verbose, e.timing_ms) {
                out += &format!("    time: {ms} ms\n");
            }
        }
        out
    }
}

/// Parses and runs a session given as text.
pub fn run_source(text: &str, opts: &RunOptions) -> Result<Report, SessionError> {
    let session = parse_session(text)?;
    let digest = format!("{:x}", Sha256::digest(text.as_bytes()));
    run_session(&session, digest, opts)
}

pub fn run_session(session: &Session, input_sha256: String, opts: &RunOptions) -> Result<Report, SessionError> {
    let env = Env::elaborate(session)?;
    let mut entries = Vec::new();
    for cmd in session.commands() {
        if opts.only.as_ref().is_some_and(|o| *o != cmd.op) {
            continue;
        }
        let start = Instant::now();
        let mut entry = env.execute(cmd);
        if opts.timing {
            entry.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        entries.push(entry);
    }
    Ok(Report { schema: SCHEMA, tool: "wn", version: VERSION, input_sha256, entries })
}

#[derive(Clone, Debug)]
struct PullbackDecl {
    spec: PullbackSpec,
    extra: Vec<Poly>,
    probe: u32,
    names: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
enum Obj {
    Ring(Arc<FPRing>),
    Map(RingMap),
    Ideal(Arc<FPRing>, Vec<Poly>),
    Spot(PrimeSpot),
    Pullback(Box<PullbackDecl>),
    Scan(Box<SectionContext>, u64),
}

type CmdResult<T> = std::result::Result<T, String>;

fn core<T>(r: wn_core::Result<T>) -> CmdResult<T> {
    r.map_err(|e| e.to_string())
}

pub fn parse_coeffs(text: &str) -> CmdResult<CoeffRing> {
    let t = text.trim();
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad number `{s}`"));
    if t == "ZZ" {
        return Ok(CoeffRing::integers());
    }
    if t == "QQ" {
        return Ok(CoeffRing::rationals());
    }
    if let Some(p) = t.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
        return core(CoeffRing::prime_field(num(p)?));
    }
    if let Some(pk) = t.strip_prefix("ZZ/") {
        let (p, k) = pk.split_once('^').unwrap_or((pk, "1"));
        let k = u32::try_from(num(k)?).map_err(|_| "exponent too large".to_string())?;
        return core(CoeffRing::mod_prime_power(num(p)?, k));
    }
    Err(format!("unknown coefficient ring `{t}`"))
}

pub fn parse_order(text: &str) -> CmdResult<MonomialOrder> {
    let t = text.trim();
    match t {
        "lex" => return Ok(MonomialOrder::Lex),
        "grevlex" => return Ok(MonomialOrder::GrevLex),
        _ => {}
    }
    let inner = t.strip_prefix("block").map(str::trim).and_then(|s| s.strip_prefix('(')).and_then(|s| s.strip_suffix(')'));
    let Some((k, rest)) = inner.and_then(|s| s.split_once(',')) else { return Err(format!("unknown order `{t}`")) };
    let k = k.trim().parse().map_err(|_| format!("bad block size `{k}`"))?;
    Ok(MonomialOrder::block(k, parse_order(rest)?))
}

/// `ZZ[X,Y]` into a polynomial ring.
pub fn parse_base(text: &str) -> CmdResult<Arc<PolyRing>> {
    let open = text.find('[').ok_or_else(|| format!("expected `[` in `{text}`"))?;
    let vars = text[open..].strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or("expected `]`")?;
    let names: Vec<String> = split_list(vars).into_iter().map(String::from).collect();
    core(PolyRing::new(parse_coeffs(&text[..open])?, names))
}

fn elems(ring: &FPRing, items: &[impl AsRef<str>]) -> CmdResult<Vec<Poly>> {
    items.iter().map(|s| core(ring.elem(s.as_ref()))).collect()
}

fn number<T: std::str::FromStr>(s: &str) -> CmdResult<T> {
    s.trim().parse().map_err(|_| format!("expected a number, found `{s}`"))
}

struct Outcome {
    verdict: String,
    details: Map<String, Value>,
    certificates: Vec<Certificate>,
    /// Internal consistency checks that must hold.
    checks: Vec<(&'static str, bool)>,
}

impl Outcome {
    fn new(verdict: impl ToString) -> Self {
        Outcome { verdict: verdict.to_string(), details: Map::new(), certificates: Vec::new(), checks: Vec::new() }
    }

    fn detail(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), v.into());
        self
    }
}

fn gb_string(basis: &[Poly]) -> String {
    let parts: Vec<String> = basis.iter().map(|g| g.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

struct Env {
    objects: BTreeMap<String, Obj>,
}

impl Env {
    fn elaborate(session: &Session) -> Result<Env, SessionError> {
        let mut env = Env { objects: BTreeMap::new() };
        for d in session.decls() {
            let obj = env.declare(d).map_err(|msg| SessionError::Invalid { name: d.name().to_string(), msg })?;
            env.objects.insert(d.name().to_string(), obj);
        }
        Ok(env)
    }

    fn get(&self, name: &str) -> CmdResult<&Obj> {
        self.objects.get(name.trim()).ok_or_else(|| format!("`{name}` is not declared"))
    }

    fn ring(&self, name: &str) -> CmdResult<Arc<FPRing>> {
        match self.get(name)? {
            Obj::Ring(r) => Ok(r.clone()),
            _ => Err(format!("`{name}` is not a ring")),
        }
    }

    fn map(&self, name: &str) -> CmdResult<&RingMap> {
        match self.get(name)? {
            Obj::Map(m) => Ok(m),
            _ => Err(format!("`{name}` is not a map")),
        }
    }

    fn spot(&self, name: &str) -> CmdResult<&PrimeSpot> {
        match self.get(name)? {
            Obj::Spot(s) => Ok(s),
            _ => Err(format!("`{name}` is not a primespot")),
        }
    }

    /// An ideal, a primespot or a ring (standing for its zero ideal).
    fn ideal(&self, name: &str) -> CmdResult<(Arc<FPRing>, Vec<Poly>)> {
        match self.get(name)? {
            Obj::Ideal(r, g) => Ok((r.clone(), g.clone())),
            Obj::Spot(s) => Ok((s.ring().clone(), s.gens().to_vec())),
            Obj::Ring(r) => Ok((r.clone(), Vec::new())),
            _ => Err(format!("`{name}` is not an ideal")),
        }
    }

    fn pullback(&self, name: &str) -> CmdResult<&PullbackDecl> {
        match self.get(name)? {
            Obj::Pullback(p) => Ok(p),
            _ => Err(format!("`{name}` is not a pullback")),
        }
    }

    fn declare(&self, d: &Decl) -> CmdResult<Obj> {
        Ok(match d {
            Decl::Ring { base, relations, order, domain, .. } => {
                let poly = parse_base(base)?;
                let rels = relations.iter().map(|r| core(wn_core::parse_poly(r, &poly))).collect::<CmdResult<Vec<_>>>()?;
                let order = order.as_deref().map(parse_order).transpose()?.unwrap_or(MonomialOrder::GrevLex);
                Obj::Ring(core(FPRing::new(&poly, rels, order))?.assert_domain(*domain).shared())
            }
            Decl::Map { source, target, images, .. } => {
                let (s, t) = (self.ring(source)?, self.ring(target)?);
                let mut ordered = Vec::new();
                for v in s.vars() {
                    let hits: Vec<&String> = images.iter().filter(|(n, _)| n == v).map(|(_, i)| i).collect();
                    let [img] = hits[..] else { return Err(format!("`{v}` needs exactly one image")) };
                    ordered.push(img.as_str());
                }
                if images.len() != s.nvars() {
                    return Err("images name variables outside the source".into());
                }
                Obj::Map(core(RingMap::parse(&s, &t, &ordered))?)
            }
            Decl::Ideal { ring, gens, .. } => {
                let r = self.ring(ring)?;
                let g = elems(&r, gens)?;
                Obj::Ideal(r, g)
            }
            Decl::PrimeSpot { name, ring, gens, sat, regular } => {
                let r = self.ring(ring)?;
                let mut spot = core(PrimeSpot::new(name, &r, elems(&r, gens)?))?.with_regular(*regular);
                if let Some(s) = sat {
                    spot = core(spot.with_saturation(core(r.elem(s))?))?;
                }
                Obj::Spot(spot)
            }
            Decl::Pullback { fields, .. } => {
                let get = |k: &str| field(fields, k).ok_or_else(|| format!("missing field `{k}`"));
                let r = self.ring(get("ring")?)?;
                let ideal = elems(&r, &split_list(get("ideal")?))?;
                let b = elems(&r, &split_list(get("b")?))?;
                let extra = elems(&r, &split_list(field(fields, "extra").unwrap_or("[]")))?;
                let p = number(get("p")?)?;
                let e = number(field(fields, "e").unwrap_or("2"))?;
                let probe = number(field(fields, "probe").unwrap_or("3"))?;
                let names = field(fields, "names").map(|n| split_list(n).into_iter().map(String::from).collect());
                let spec = core(PullbackSpec::new(&r, ideal, b, p, e))?;
                Obj::Pullback(Box::new(PullbackDecl { spec, extra, probe, names }))
            }
            Decl::Scan { ring, fields, .. } => {
                let get = |k: &str| field(fields, k).ok_or_else(|| format!("missing field `{k}`"));
                let r = self.ring(ring)?;
                let xs = elems(&r, &split_list(get("xs")?))?;
                let spots = |k: &str| -> CmdResult<Vec<PrimeSpot>> {
                    split_list(field(fields, k).unwrap_or("[]")).into_iter().map(|n| self.spot(n).cloned()).collect()
                };
                let ctx = core(SectionContext::new(&r, xs, spots("bad")?, spots("wn")?))?;
                Obj::Scan(Box::new(ctx), number(get("q")?)?)
            }
        })
    }

    fn execute(&self, cmd: &Command) -> Entry {
        let mut entry = Entry {
            command: cmd.to_string(),
            status: Status::Ok,
            verdict: None,
            expected: cmd.expect.clone(),
            error: None,
            details: Value::Object(Map::new()),
            certificates: Vec::new(),
            timing_ms: None,
        };
        let out = match self.dispatch(cmd) {
            Ok(o) => o,
            Err(msg) => {
                entry.status = Status::Error;
                entry.error = Some(msg);
                return entry;
            }
        };
        let mut breach = out.checks.iter().any(|(_, ok)| !ok);
        let mut details = out.details;
        let failed: Vec<&str> = out.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        if !failed.is_empty() {
            details.insert("failed_checks".into(), json!(failed));
        }
        for c in &out.certificates {
            let verified = c.verify().unwrap_or(false);
            breach |= !verified;
            entry.certificates.push(CertificateEntry { record: c.to_record(), verified });
        }
        if breach {
            entry.status = Status::Breach;
        } else if cmd.expect.as_ref().is_some_and(|x| *x != out.verdict) {
            entry.status = Status::Failed;
        }
        entry.verdict = Some(out.verdict);
        entry.details = Value::Object(details);
        entry
    }

    fn args<'a, const N: usize>(&self, cmd: &'a Command, optional: usize) -> CmdResult<[Option<&'a str>; N]> {
        let n = cmd.args.len();
        if n > N || n + optional < N {
            return Err(format!("`{}` takes {} to {N} arguments, got {n}", cmd.op, N - optional));
        }
        let mut out = [None; N];
        for (slot, a) in out.iter_mut().zip(&cmd.args) {
            *slot = Some(a.as_str());
        }
        Ok(out)
    }

    fn dispatch(&self, cmd: &Command) -> CmdResult<Outcome> {
        match cmd.op.as_str() {
            "gb" => {
                let [i] = self.args::<1>(cmd, 0)?.map(Option::unwrap);
                let (r, gens) = self.ideal(i)?;
                let gb = core(r.ideal_gb(&gens))?;
                let mut o = Outcome::new(gb_string(gb.basis())).detail("unit", gb.is_unit()).detail("order", r.order().to_string());
                o.checks.push(("s/g-polynomials reduce to zero", gb.verify_certificate()));
                Ok(o)
            }
            "member" | "radmember" => {
                let [i, f] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let (r, gens) = self.ideal(i)?;
                let f = core(r.elem(f))?;
                if cmd.op == "member" {
                    let gb = core(r.ideal_gb(&gens))?;
                    let nf = core(gb.normal_form(&f))?;
                    Ok(Outcome::new(nf.is_zero()).detail("normal_form", nf.to_string()))
                } else {
                    Ok(Outcome::new(core(r.radical_member(&f, &gens))?))
                }
            }
            "satpow" => {
                let [p, n, f] = self.args::<3>(cmd, 0)?.map(Option::unwrap);
                let spot = self.spot(p)?;
                let n: u32 = number(n)?;
                let f = core(spot.ring().elem(f))?;
                let sym = core(symbolic_power(spot, n))?;
                let ord = core(ordinary_power(spot, n))?;
                let member = core(sym.gb.contains(&f))?;
                Ok(Outcome::new(member)
                    .detail("member", member)
                    .detail("ordinary_member", core(ord.contains(&f))?)
                    .detail("symbolic", gb_string(sym.gb.basis()))
                    .detail("ordinary", gb_string(ord.basis()))
                    .detail("equals_ordinary", sym.gb.basis() == ord.basis())
                    .detail("saturation_steps", sym.steps))
            }
            "swan" => {
                let [a, b, c] = self.args::<3>(cmd, 0)?.map(Option::unwrap);
                let r = self.ring(a)?;
                let cert = core(swan_check(&r, &core(r.elem(b))?, &core(r.elem(c))?))?;
                let mut o = Outcome::new(cert.kind());
                o.certificates.push(cert);
                Ok(o)
            }
            "yanagihara" => {
                let [a, p, b, c, d, e] = self.args::<6>(cmd, 0)?.map(Option::unwrap);
                let r = self.ring(a)?;
                let [b, c, d, e] = [b, c, d, e].map(|x| core(r.elem(x)));
                let cert = core(yanagihara_check(&r, number(p)?, &b?, &c?, &d?, &e?))?;
                let mut o = Outcome::new(cert.kind());
                o.certificates.push(cert);
                Ok(o)
            }
            "manaresi" => {
                let [m, s] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let map = self.map(m)?;
                match core(manaresi_witness(map, &core(map.target().elem(s))?))? {
                    ManaresiOutcome::Witness(w) => {
                        let mut o = Outcome::new(w.kind());
                        o.certificates.push(w);
                        Ok(o)
                    }
                    ManaresiOutcome::NotAWitness { in_subring, nilpotent } => Ok(Outcome::new("NotAWitness")
                        .detail("in_subring", in_subring)
                        .detail("nilpotent", json!(nilpotent))),
                }
            }
            "equalizer" => {
                let [m, probes] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let map = self.map(m)?;
                let probes = if probes.trim_start().starts_with('[') {
                    elems(map.target(), &split_list(probes))?
                } else {
                    core(probe_monomials(map.target(), number(probes)?))?
                };
                let cert = core(equalizer_probe(map, &probes))?;
                let mut o = Outcome::new(cert.kind()).detail("probes", probes.len());
                o.certificates.push(cert);
                Ok(o)
            }
            "search" => {
                let [m, kind, degree, height, primes] = self.args::<5>(cmd, 1)?;
                let map = self.map(m.unwrap())?;
                let kind = match kind.unwrap().trim() {
                    "swan" => SearchKind::Swan,
                    "yanagihara" => SearchKind::Yanagihara,
                    k => return Err(format!("unknown search kind `{k}`")),
                };
                let primes = match primes {
                    Some(list) => split_list(list).into_iter().map(number).collect::<CmdResult<Vec<u64>>>()?,
                    None => vec![2],
                };
                let bounds = SearchBounds { degree: number(degree.unwrap())?, height: number(height.unwrap())?, primes };
                let report = core(bounded_violation_search(map, kind, &bounds))?;
                let verdict = if report.violations.is_empty() { "empty" } else { "nonempty" };
                let mut o = Outcome::new(verdict)
                    .detail("examined", report.examined)
                    .detail("violations", report.violations.len());
                o.certificates = report.violations.into_iter().take(CERTIFICATE_CAP).collect();
                Ok(o)
            }
            "subring" => {
                let [m, s] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let map = self.map(m)?;
                let s = core(map.target().elem(s))?;
                let pre = core(SubringOracle::new(map).and_then(|o| o.preimage(&s)))?;
                let mut o = Outcome::new(pre.is_some());
                if let Some(p) = pre {
                    o.checks.push(("preimage maps back", core(map.apply(&p).and_then(|x| map.target().equal(&x, &s)))?));
                    o = o.detail("preimage", p.to_string());
                }
                Ok(o)
            }
            "kernel" => {
                let [m] = self.args::<1>(cmd, 0)?.map(Option::unwrap);
                let map = self.map(m)?;
                let k = core(kernel_of_map(map))?;
                let mut o = Outcome::new(k.to_string());
                let zero = k.gens().iter().map(|g| map.apply(g).and_then(|x| map.target().is_zero(&x))).collect::<wn_core::Result<Vec<_>>>();
                o.checks.push(("generators map to zero", core(zero)?.into_iter().all(|z| z)));
                Ok(o)
            }
            "pullback" => {
                let [name] = self.args::<1>(cmd, 0)?.map(Option::unwrap);
                let pb = self.build_pullback(name)?;
                let decl = self.pullback(name)?;
                let gpi = core(gpi_check(&decl.spec))?;
                let exps: Vec<String> =
                    gpi.exponents.iter().map(|(v, e)| format!("{v}: {}", e.map_or("none".into(), |e| e.to_string()))).collect();
                Ok(Outcome::new(pb.ring.to_string())
                    .detail("generators", strings(&pb.generators).join(", "))
                    .detail("inclusion", pb.inclusion.to_string())
                    .detail("gpi", format!("{:?}", gpi.verdict))
                    .detail("gpi_exponents", exps.join(", ")))
            }
            "certify" => {
                let [name, degree] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let decl = self.pullback(name)?;
                let pb = self.build_pullback(name)?;
                match core(certify_not_wn(&pb.inclusion, decl.spec.p(), number(degree)?, decl.spec.e_bound()))? {
                    NotWeaklyNormal::Certified { s, e, certificate } => {
                        let mut o = Outcome::new("Certified").detail("s", s.to_string()).detail("e", e);
                        o.certificates.push(certificate);
                        Ok(o)
                    }
                    NotWeaklyNormal::Indeterminate => Ok(Outcome::new("Indeterminate")),
                }
            }
            "conductor" => {
                let [m, module] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let map = self.map(m)?;
                let module = elems(map.target(), &split_list(module))?;
                let c = core(conductor(map, &module))?;
                let gb = core(map.source().ideal_gb(c.ideal.gens()))?;
                let tr = c
                    .transporters
                    .iter()
                    .map(|t| core(map.source().ideal_gb(t.gens())).map(|g| gb_string(g.basis())))
                    .collect::<CmdResult<Vec<_>>>()?;
                Ok(Outcome::new(gb_string(gb.basis())).detail("exact", c.exact).detail("transporters", json!(tr)))
            }
            "unramified" => {
                let [m, p] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let u = core(unramified_at(self.map(m)?, self.spot(p)?))?;
                Ok(Outcome::new(u.verdict)
                    .detail("fitting", u.fitting.to_string())
                    .detail("contraction", u.contraction.to_string()))
            }
            "scan" => {
                let [name] = self.args::<1>(cmd, 0)?.map(Option::unwrap);
                let Obj::Scan(ctx, q) = self.get(name)? else { return Err(format!("`{name}` is not a scan")) };
                let report = core(bertini_scan(ctx, *q))?;
                let table: Vec<String> = report
                    .verdicts
                    .iter()
                    .map(|v| {
                        let state = if v.good { "good".to_string() } else { v.failures.join("; ") };
                        format!("{} x = {} : {state}", v.point, v.section)
                    })
                    .collect();
                let mut o = Outcome::new(format!("{}/{}", report.good, report.total))
                    .detail("q", report.q)
                    .detail("dimension", report.dimension)
                    .detail("table", json!(table));
                o.checks.push(("counts add up", report.good <= report.total));
                Ok(o)
            }
            "dims" => {
                let [i, primes] = self.args::<2>(cmd, 0)?.map(Option::unwrap);
                let (r, gens) = self.ideal(i)?;
                let primes = split_list(primes).into_iter().map(number).collect::<CmdResult<Vec<u64>>>()?;
                let whole = core(ops::dim_fiberwise(r.defining(), &primes))?;
                let part = core(ops::dim_fiberwise(&core(r.lift_ideal(&gens))?, &primes))?;
                let codim = |a: Option<usize>, b: Option<usize>| match (a, b) {
                    (Some(a), Some(b)) => (a - b).to_string(),
                    (Some(_), None) => "empty".into(),
                    _ => "none".into(),
                };
                let mut parts = vec![format!("generic {}", codim(whole.generic, part.generic))];
                for p in &primes {
                    parts.push(format!("{p}: {}", codim(whole.special[p], part.special[p])));
                }
                Ok(Outcome::new(format!("codim {}", parts.join(", ")))
                    .detail("ring", json!(whole))
                    .detail("quotient", json!(part)))
            }
            op => Err(format!("unknown command `{op}`")),
        }
    }

    fn build_pullback(&self, name: &str) -> CmdResult<Pullback> {
        let decl = self.pullback(name)?;
        let pb = core(fiber_product(&decl.spec, &decl.extra, decl.probe))?;
        match &decl.names {
            Some(n) => core(pb.renamed(&n.iter().map(String::as_str).collect::<Vec<_>>())),
            None => Ok(pb),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Report {
        run_source(text, &RunOptions::default()).unwrap()
    }

    #[test]
    fn empty_session_is_ok() {
        let r = run("");
        assert!(r.entries.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn membership_and_expectations() {
        let r = run("ring R = ZZ[X,Y]; ideal I in R = (2, Y^2 - 4*X); member(I, Y) expect false; member(I, Y^2) expect false;");
        assert_eq!(r.entries[0].verdict.as_deref(), Some("false"));
        assert_eq!(r.entries[0].status, Status::Ok);
        assert_eq!(r.entries[1].status, Status::Failed);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn errors_and_bad_declarations() {
        let r = run("ring R = ZZ[X]; member(R, Z);");
        assert_eq!(r.entries[0].status, Status::Error);
        assert!(matches!(run_source("ring R = ZZ[X]; ring S = QQ[T]; map f : R -> S { X -> T };", &RunOptions::default()), Err(SessionError::Invalid { .. })));
        assert!(matches!(run_source("ring R = ZZ[X]", &RunOptions::default()), Err(SessionError::Parse(_))));
    }

    #[test]
    fn orders_and_bases() {
        assert_eq!(parse_order("block(2, lex)").unwrap(), MonomialOrder::block(2, MonomialOrder::Lex));
        assert!(parse_order("deglex").is_err());
        assert_eq!(parse_coeffs("ZZ/2^3").unwrap().to_string(), "ZZ/2^3");
        assert_eq!(parse_coeffs("GF(5)").unwrap().to_string(), "GF(5)");
        assert!(parse_coeffs("GF(4)").is_err());
        assert_eq!(parse_base("QQ[x,y]").unwrap().to_string(), "QQ[x,y]");
    }

    #[test]
    fn declared_rings_round_trip_through_display() {
        let r = run("ring A = ZZ[X,Y] / (Y^2 - 4*X); gb(A);");
        let Obj::Ring(a) = Env::elaborate(&parse_session("ring A = ZZ[X,Y] / (Y^2 - 4*X);").unwrap()).unwrap().objects["A"].clone()
        else {
            panic!()
        };
        let again = Env::elaborate(&parse_session(&format!("ring B = {a};")).unwrap()).unwrap();
        let Obj::Ring(b) = &again.objects["B"] else { panic!() };
        assert_eq!(a.as_ref(), b.as_ref());
        assert_eq!(r.entries[0].verdict.as_deref(), Some("(Y^2 - 4*X)"));
    }
}
