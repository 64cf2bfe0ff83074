use std::fmt;
use std::io::{self, Read, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use zsys_core::analysis::{
    lemma_checks, lower_cutoff_example, lower_cutoff_window, nilpotency_class, normal_form_lemmas,
    oracle_equivalence, search_tables_each, shift_invariant_closure, SearchConfig,
};
use zsys_core::{
    derive_window, group_commutator, render_roots, rgd_check, verify_zs_axioms, Error, ExampleKind,
    GroupElement, LaurentMatrix, NfStats, PrimeField, Report, WindowGroup,
};

use crate::args::{Command, Opts, Output};

/// Why a run stopped before producing a result.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Table(String),
    Core(Error),
    Io(io::Error),
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage error",
            Failure::Table(_) => "malformed table",
            Failure::Core(Error::CapExceeded { .. }) => "resource cap exceeded",
            Failure::Core(Error::Unsupported(_)) => "unsupported parameters",
            Failure::Core(_) => "error",
            Failure::Io(_) => "i/o error",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Table(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Res<T> = Result<T, Failure>;

/// Result of a subcommand: the payload, whether every check passed, and
/// timings that stay outside the payload.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
    pub timings: Option<Value>,
    pub banner: Option<String>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self {
            value,
            ok: true,
            timings: None,
            banner: None,
        }
    }

    fn report(r: &Report) -> Self {
        Self {
            value: r.payload(),
            ok: r.all_pass(),
            timings: Some(r.timings()),
            banner: None,
        }
    }
}

fn kind(o: &Opts) -> Res<ExampleKind> {
    let family = o
        .example
        .ok_or_else(|| Failure::Usage("--example is required".into()))?;
    let p =
        o.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
    Ok(ExampleKind::new(family.into(), p)?)
}

fn window_bounds(o: &Opts) -> Res<(i64, i64)> {
    match o.window.as_deref() {
        Some(&[lo, hi]) => Ok((lo, hi)),
        _ => Err(Failure::Usage("--window LO HI is required".into())),
    }
}

fn read_table(o: &Opts) -> Res<Option<WindowGroup>> {
    let Some(path) = &o.table else {
        return Ok(None);
    };
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    let w = WindowGroup::from_json_str(&text).map_err(|e| Failure::Table(e.to_string()))?;
    if let Some(p) = o.p {
        if p != w.p() as u64 {
            return Err(Failure::Usage(format!(
                "--p {p} disagrees with the table's p = {}",
                w.p()
            )));
        }
    }
    match o.window.as_deref() {
        Some(&[lo, hi]) => Ok(Some(w.restrict(lo, hi)?)),
        _ => Ok(Some(w)),
    }
}

/// The window named by `--table`, or derived from `--example --p --window`.
fn window(o: &Opts) -> Res<(WindowGroup, Option<ExampleKind>)> {
    if let Some(w) = read_table(o)? {
        return Ok((w, None));
    }
    let k = kind(o)?;
    let (lo, hi) = window_bounds(o)?;
    Ok((derive_window(&k, lo, hi)?, Some(k)))
}

pub fn parse_word(s: &str) -> Res<Vec<(i64, i64)>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (i, e) = t.split_once(':').unwrap_or((t, "1"));
            match (i.trim().parse(), e.trim().parse()) {
                (Ok(i), Ok(e)) => Ok((i, e)),
                _ => Err(Failure::Usage(format!(
                    "bad word letter {t:?}, expected index:exponent"
                ))),
            }
        })
        .collect()
}

fn element(w: &WindowGroup, s: Option<&str>, flag: &str, required: bool) -> Res<GroupElement> {
    match s {
        Some(s) => Ok(w.word(&parse_word(s)?)?),
        None if required => Err(Failure::Usage(format!("{flag} is required"))),
        None => Ok(w.identity()),
    }
}

#[derive(Serialize)]
struct ElementJson<'a> {
    e: &'a [u8],
    #[serde(flatten)]
    stats: NfStats,
}

fn element_json(g: &GroupElement) -> Value {
    json!(ElementJson {
        e: g.exponents(),
        stats: g.stats(),
    })
}

fn matrix_arg(field: PrimeField, s: &str) -> Res<LaurentMatrix> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad matrix JSON: {e}")))?;
    Ok(LaurentMatrix::from_json(field, &v)?)
}

fn derive(o: &Opts, matrices: bool) -> Res<Outcome> {
    let k = kind(o)?;
    let (lo, hi) = window_bounds(o)?;
    let w = derive_window(&k, lo, hi)?;
    if !matrices {
        return Ok(Outcome::ok(w.to_json()));
    }
    let gens: Vec<Value> = (lo..=hi)
        .map(|n| json!({ "n": n, "matrix": k.u(n) }))
        .collect();
    Ok(Outcome::ok(
        json!({ "table": w.to_json(), "generators": gens }),
    ))
}

fn comm(o: &Opts, matrix_a: Option<&str>, matrix_b: Option<&str>) -> Res<Outcome> {
    if let (Some(a), Some(b)) = (matrix_a, matrix_b) {
        let p = match (o.p, o.example) {
            (Some(p), _) => p,
            _ => return Err(Failure::Usage("--p is required with matrices".into())),
        };
        let f = PrimeField::new(p)?;
        let c = group_commutator(&matrix_arg(f, a)?, &matrix_arg(f, b)?)?;
        return Ok(Outcome::ok(json!({ "matrix": c })));
    }
    let (w, k) = window(o)?;
    let a = element(&w, o.word.as_deref(), "--word", true)?;
    let b = element(&w, o.word2.as_deref(), "--word2", true)?;
    let c = w.commutator(&a, &b)?;
    let mut v = element_json(&c);
    if let Some(k) = k {
        let m = |g: &GroupElement| -> Res<LaurentMatrix> {
            let e: Vec<u32> = g.exponents().iter().map(|&x| x as u32).collect();
            Ok(k.word_matrix(w.lo(), &e)?)
        };
        let mc = group_commutator(&m(&a)?, &m(&b)?)?;
        let agrees = mc == m(&c)?;
        v["matrix"] = json!(mc);
        v["oracle_agrees"] = json!(agrees);
        return Ok(Outcome {
            ok: agrees,
            ..Outcome::ok(v)
        });
    }
    Ok(Outcome::ok(v))
}

fn cutoff(o: &Opts) -> Res<Outcome> {
    let r = if o.table.is_some() {
        let (w, _) = window(o)?;
        lower_cutoff_window(&w, o.bound)
    } else {
        lower_cutoff_example(&kind(o)?, o.bound)?
    };
    Ok(Outcome::ok(json!(r)))
}

fn class(o: &Opts) -> Res<Outcome> {
    let (w, _) = window(o)?;
    match nilpotency_class(&w, o.cap) {
        Ok(c) => Ok(Outcome::ok(json!({ "class": c }))),
        Err(Error::NotNilpotent(terms)) => Ok(Outcome {
            ok: false,
            ..Outcome::ok(json!({ "class": null, "stalled_after": terms }))
        }),
        Err(e) => Err(e.into()),
    }
}

fn lemmas(o: &Opts) -> Res<Outcome> {
    let (w, k) = window(o)?;
    let mut r = lemma_checks(&w, o.cap, o.samples, o.seed)?;
    let nf = normal_form_lemmas(&w, o.cap)?;
    r.checks.extend(nf.checks);
    r.timings_ms.extend(nf.timings_ms);
    if let Some(k) = k {
        let start = Instant::now();
        let oracle = oracle_equivalence(&k, w.lo(), w.hi(), o.samples, o.seed)?;
        r.checks.extend(oracle.checks);
        r.timings_ms
            .push(("oracle".into(), start.elapsed().as_secs_f64() * 1e3));
    }
    Ok(Outcome::report(&r))
}

fn rgd(o: &Opts) -> Res<Outcome> {
    let r = rgd_check(&kind(o)?, o.k)?;
    Ok(Outcome {
        banner: Some(render_roots(o.k)),
        ..Outcome::report(&r)
    })
}

fn shiftinv(o: &Opts) -> Res<Outcome> {
    let (w, _) = window(o)?;
    let a = element(&w, o.a.as_deref(), "--a", false)?;
    let b = element(&w, o.b.as_deref(), "--b", false)?;
    Ok(Outcome::ok(
        shift_invariant_closure(&w, &a, &b, o.cap)?.to_json(&w),
    ))
}

fn print_value(out: &mut impl Write, v: &Value, mode: Output) -> io::Result<()> {
    match mode {
        Output::Json => writeln!(out, "{v}"),
        Output::Pretty => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(v).expect("values serialize")
        ),
    }
}

/// Streams one line per table; statistics go to stderr.
fn search(o: &Opts) -> Res<bool> {
    let p =
        o.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
    let (lo, hi) = window_bounds(o)?;
    let cfg = SearchConfig {
        depth: o.depth,
        cap: o.cap,
        ..SearchConfig::new(p, lo, hi, o.support_bound)
    };
    let start = Instant::now();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut io_err = None;
    let stats = search_tables_each(&cfg, |hit| {
        if io_err.is_none() {
            let v = json!(hit);
            if let Err(e) = print_value(&mut out, &v, o.output).and_then(|_| out.flush()) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    let mut summary = json!({ "stats": stats });
    if o.timings {
        summary["timings_ms"] = json!({ "search": start.elapsed().as_secs_f64() * 1e3 });
    }
    eprintln!("{summary}");
    Ok(true)
}

/// Runs a subcommand, printing its result. Returns whether all checks passed.
pub fn run(cmd: &Command, o: &Opts) -> Res<bool> {
    let outcome = match cmd {
        Command::Derive { matrices } => derive(o, *matrices)?,
        Command::Nf => {
            let (w, _) = window(o)?;
            Outcome::ok(element_json(&element(
                &w,
                o.word.as_deref(),
                "--word",
                true,
            )?))
        }
        Command::Comm { matrix_a, matrix_b } => comm(o, matrix_a.as_deref(), matrix_b.as_deref())?,
        Command::Cutoff => cutoff(o)?,
        Command::Class => class(o)?,
        Command::Axioms => {
            let (w, _) = window(o)?;
            Outcome::report(&verify_zs_axioms(&w, o.cap))
        }
        Command::Lemmas => lemmas(o)?,
        Command::Rgd => rgd(o)?,
        Command::Search => return search(o),
        Command::Shiftinv => shiftinv(o)?,
    };
    let mut value = outcome.value;
    if o.timings {
        if let (Value::Object(m), Some(t)) = (&mut value, outcome.timings) {
            m.insert("timings_ms".into(), t);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if o.output == Output::Pretty {
        if let Some(b) = &outcome.banner {
            write!(out, "{b}")?;
        }
    }
    print_value(&mut out, &value, o.output)?;
    Ok(outcome.ok)
}
