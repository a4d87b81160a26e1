use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wn_cli::{run_source, threads_from_env, with_threads, Report, RunOptions, SessionError};

#[derive(Parser)]
#[command(name = "wn", version, about = "Seminormality and weak normality checks over finitely presented rings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Default)]
struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print details and certificate fields.
    #[arg(long)]
    verbose: bool,
    /// Leave the timing fields out of the JSON report.
    #[arg(long)]
    no_timing: bool,
}

/// Either a session file, or the direct flags of the subcommand.
#[derive(Args, Clone)]
struct SessionArg {
    /// Run the commands of this kind from a session file.
    #[arg(long)]
    session: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command of a session file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Gröbner basis of an ideal (plus the defining relations).
    Gb {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, default_value = "")]
        ideal: String,
        #[command(flatten)]
        out: Output,
    },
    /// Ideal membership.
    Member {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, default_value = "")]
        ideal: String,
        #[arg(long)]
        elem: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Radical membership.
    Radmember {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, default_value = "")]
        ideal: String,
        #[arg(long)]
        elem: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Membership in a symbolic power of a prime.
    Satpow {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        prime: Option<String>,
        #[arg(long)]
        sat: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        elem: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Swan's condition for a pair with b^3 = c^2.
    Swan {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Yanagihara's condition for (p, b, c, d, e).
    Yanagihara {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        e: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Equalizer witness for an element of the target.
    Manaresi {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        elem: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Presents a pullback and reports the generator-level inseparability check.
    Pullback {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, default_value = "")]
        ideal: String,
        /// Generators of the subring of the quotient.
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 2)]
        e: u32,
        #[arg(long, default_value = "")]
        extra: String,
        #[arg(long, default_value_t = 3)]
        probe: u32,
        #[arg(long)]
        names: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Conductor of a ring map for given module generators.
    Conductor {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        module: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Whether relative differentials vanish at a prime of the source.
    Unramified {
        #[command(flatten)]
        s: SessionArg,
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        prime: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive section scan over a projective space.
    Scan {
        #[command(flatten)]
        s: SessionArg,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        xs: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        /// Bad prime generators; repeat for several.
        #[arg(long)]
        bad: Vec<String>,
        /// Spot as `generators | saturation element`; repeat for several.
        #[arg(long)]
        wn: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Clone)]
struct MapArgs {
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Images of the source variables, comma separated, in order.
    #[arg(long)]
    images: Option<String>,
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, String> {
    v.clone().ok_or_else(|| format!("--{flag} is required without --session"))
}

fn ring_decl(name: &str, text: &str) -> String {
    format!("ring {name} = {text};\n")
}

fn map_decls(m: &MapArgs) -> Result<String, String> {
    let src = need(&m.source, "source")?;
    let tgt = need(&m.target, "target")?;
    let images = need(&m.images, "images")?;
    let vars = src.split('[').nth(1).and_then(|v| v.split(']').next()).ok_or("--source needs `[vars]`")?;
    let images: Vec<&str> = images.split(',').map(str::trim).collect();
    let vars: Vec<&str> = vars.split(',').map(str::trim).collect();
    if vars.len() != images.len() {
        return Err(format!("{} images for {} variables", images.len(), vars.len()));
    }
    let pairs: Vec<String> = vars.iter().zip(&images).map(|(v, i)| format!("{v} -> {i}")).collect();
    Ok(ring_decl("R", &src) + &ring_decl("S", &tgt) + &format!("map f : R -> S {{ {} }};\n", pairs.join(", ")))
}

/// Session text for the direct flags of a subcommand, or the session file
/// with a filter on the command kind.
fn plan(cmd: &Cmd) -> Result<(String, Option<&'static str>, Output), String> {
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    let session = |s: &SessionArg, op: &'static str, out: &Output, direct: &dyn Fn() -> Result<String, String>| {
        match &s.session {
            Some(p) => Ok((read(p)?, Some(op), out.clone())),
            None => Ok((direct()?, None, out.clone())),
        }
    };
    match cmd {
        Cmd::Run { file, out } => Ok((read(file)?, None, out.clone())),
        Cmd::Gb { s, ring, ideal, out } => session(s, "gb", out, &|| {
            Ok(ring_decl("R", &need(ring, "ring")?) + &format!("ideal I in R = ({ideal});\ngb(I);\n"))
        }),
        Cmd::Member { s, ring, ideal, elem, out } | Cmd::Radmember { s, ring, ideal, elem, out } => {
            let op = if matches!(cmd, Cmd::Member { .. }) { "member" } else { "radmember" };
            session(s, op, out, &|| {
                Ok(ring_decl("R", &need(ring, "ring")?)
                    + &format!("ideal I in R = ({ideal});\n{op}(I, {});\n", need(elem, "elem")?))
            })
        }
        Cmd::Satpow { s, ring, prime, sat, n, elem, out } => session(s, "satpow", out, &|| {
            Ok(ring_decl("R", &need(ring, "ring")?)
                + &format!(
                    "primespot P in R = ({}) sat ({});\nsatpow(P, {n}, {});\n",
                    need(prime, "prime")?,
                    need(sat, "sat")?,
                    need(elem, "elem")?
                ))
        }),
        Cmd::Swan { s, ring, b, c, out } => session(s, "swan", out, &|| {
            Ok(ring_decl("R", &need(ring, "ring")?) + &format!("swan(R, {}, {});\n", need(b, "b")?, need(c, "c")?))
        }),
        Cmd::Yanagihara { s, ring, p, b, c, d, e, out } => session(s, "yanagihara", out, &|| {
            Ok(ring_decl("R", &need(ring, "ring")?)
                + &format!(
                    "yanagihara(R, {}, {}, {}, {}, {});\n",
                    need(p, "p")?,
                    need(b, "b")?,
                    need(c, "c")?,
                    need(d, "d")?,
                    need(e, "e")?
                ))
        }),
        Cmd::Manaresi { s, m, elem, out } => {
            session(s, "manaresi", out, &|| Ok(map_decls(m)? + &format!("manaresi(f, {});\n", need(elem, "elem")?)))
        }
        Cmd::Pullback { s, ring, ideal, b, p, e, extra, probe, names, out } => session(s, "pullback", out, &|| {
            let names = names.as_ref().map(|n| format!(" names = [{n}];")).unwrap_or_default();
            Ok(ring_decl("R", &need(ring, "ring")?)
                + &format!(
                    "pullback Q {{ ring = R; ideal = ({ideal}); b = [{}]; p = {}; e = {e}; extra = [{extra}]; probe = {probe};{names} }}\npullback(Q);\n",
                    need(b, "b")?,
                    need(p, "p")?
                ))
        }),
        Cmd::Conductor { s, m, module, out } => session(s, "conductor", out, &|| {
            Ok(map_decls(m)? + &format!("conductor(f, [{}]);\n", need(module, "module")?))
        }),
        Cmd::Unramified { s, m, prime, out } => session(s, "unramified", out, &|| {
            Ok(map_decls(m)? + &format!("primespot P in R = ({});\nunramified(f, P);\n", need(prime, "prime")?))
        }),
        Cmd::Scan { s, ring, xs, q, bad, wn, out } => session(s, "scan", out, &|| {
            let mut text = ring_decl("R", &need(ring, "ring")?);
            let mut bads = Vec::new();
            for (i, g) in bad.iter().enumerate() {
                text += &format!("primespot B{i} in R = ({g});\n");
                bads.push(format!("B{i}"));
            }
            let mut wns = Vec::new();
            for (i, spec) in wn.iter().enumerate() {
                let (g, sat) = spec.split_once('|').ok_or("--wn expects `generators | saturation`")?;
                text += &format!("primespot W{i} in R = ({}) sat ({});\n", g.trim(), sat.trim());
                wns.push(format!("W{i}"));
            }
            text += &format!(
                "scan C in R {{ xs = [{}]; q = {}; wn = [{}]; bad = [{}]; }}\nscan(C);\n",
                need(xs, "xs")?,
                need(q, "q")?,
                wns.join(", "),
                bads.join(", ")
            );
            Ok(text)
        }),
    }
}

fn emit(report: &Report, out: &Output) -> Result<(), String> {
    print!("{}", report.transcript(out.verbose));
    if let Some(path) = &out.json {
        std::fs::write(path, report.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, only, out) = match plan(&cli.command) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("wn: {msg}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { timing: !out.no_timing, only: only.map(String::from) };
    let result = with_threads(threads_from_env(), || run_source(&text, &opts));
    match result {
        Ok(report) => {
            if let Err(msg) = emit(&report, &out) {
                eprintln!("wn: {msg}");
                return ExitCode::from(1);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e @ (SessionError::Parse(_) | SessionError::Invalid { .. })) => {
            eprintln!("wn: {e}");
            ExitCode::from(2)
        }
    }
}
