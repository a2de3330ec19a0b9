//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    char_sum, char_sum_multiplicativity, char_sum_with, kernel_check, semiclassical_traces, trace_table, Engine, Method,
    Monomial, SemiclassicalReport,
};
use crate::cyclo::CycloJson;
use crate::decompose::{
    commutant_dimension, crt_check, decomposition_tree, expected_factor_count, omega_projector, tower_check,
    DecompositionTree, OmegaReport, COMMUTANT_BOUND,
};
use crate::error::{Error, Result};
use crate::modgroup::{
    census, class_representatives, class_size_bruteforce, count_quadratic_solutions, hensel_lift_count, orbit_census,
    sl2_enumerate, sl2_order, CensusRow,
};
use crate::rational::fmt_rational;
use crate::weilrep::{egorov_map, gauss_sum, WeilRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Census,
    Charsum,
    Crt,
    Tower,
    Egorov,
    Semiclassical,
    Faithful,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Full,
    Census,
    Classes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exact,
    Modular,
}

#[derive(Debug, Parser)]
#[command(name = "weil", version, about = "Weil representations at finite level: construction, decomposition and checks")]
pub struct Cli {
    /// Level p.
    #[arg(long, global = true)]
    pub level: Option<u64>,
    /// Genus g.
    #[arg(long, global = true)]
    pub genus: Option<usize>,
    /// Exponent n of the modulus 2^n (census).
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Divisor δ of the level (Ω projector in `decompose`).
    #[arg(long, global = true)]
    pub delta: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest level touched by `verify` and `semiclassical` sweeps.
    #[arg(long, global = true, default_value_t = 9)]
    pub max_level: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// G(a, b, p) = Σ_k A^{ak² + bk}.
    Gauss {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
        p: u64,
    },
    /// Generator matrices.
    Rep {
        #[command(subcommand)]
        action: RepAction,
    },
    /// Irreducible factors, cross-checked against the commutant dimension.
    Decompose,
    /// Averaged |Tr|² over SL₂.
    Charsum {
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        /// Also check multiplicativity against this coprime level.
        #[arg(long)]
        with: Option<u64>,
    },
    /// Conjugacy census of SL₂(Z/2ⁿZ).
    Census {
        /// Emit the trace table at level 2^{n−1} instead.
        #[arg(long)]
        traces: bool,
    },
    /// Symplectic orbits on (Z/NZ)^{2g}, N = --level.
    Orbits,
    /// Normalized traces of Schrödinger monomials.
    Semiclassical {
        /// Monomials such as "x1^2*y1"; default: all of degree ≤ --max-degree.
        #[arg(long = "monomial")]
        monomials: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Run check suites.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepAction {
    Show {
        /// Only this generator, e.g. X1, Y2, Z12.
        #[arg(long)]
        generator: Option<String>,
    },
}

/// Rendered output plus the mathematical verdict.
struct Output {
    body: String,
    ok: bool,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Defect(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Defect(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Defect(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Defect(e.to_string()))
}

fn no_csv(cmd: &str) -> Error {
    Error::Argument(format!("csv output is not available for `{}`", cmd))
}

fn need_level(cli: &Cli) -> Result<u64> {
    cli.level.ok_or_else(|| Error::Argument("--level is required".into()))
}

fn genus(cli: &Cli) -> Result<usize> {
    match cli.genus.unwrap_or(1) {
        0 => Err(Error::Argument("--genus must be at least 1".into())),
        g => Ok(g),
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn opt_q(v: Option<u64>) -> String {
    v.map_or(String::new(), |x| format!("{}/1", x))
}

// gauss

#[derive(Serialize)]
struct GaussOut {
    a: i64,
    b: i64,
    p: u64,
    value: CycloJson,
    #[serde(serialize_with = "crate::rational::serialize")]
    norm_sq: num_rational::BigRational,
}

fn cmd_gauss(cli: &Cli, a: i64, b: i64, p: u64) -> Result<Output> {
    if p == 0 {
        return Err(Error::Argument("p must be positive".into()));
    }
    let v = gauss_sum(a, b, p);
    let norm = v.norm_sq().to_rational().ok_or_else(|| Error::Defect("norm is not rational".into()))?;
    let out = GaussOut { a, b, p, value: v.to_json(), norm_sq: norm };
    let body = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => return Err(no_csv("gauss")),
        Format::Text => format!(
            "G({}, {}, {}) in Q(zeta_{}): [{}]\nnorm^2 = {}\n",
            a,
            b,
            p,
            out.value.order,
            out.value.coeffs.join(", "),
            fmt_rational(&out.norm_sq)
        ),
    };
    Ok(Output { body, ok: true })
}

// rep show

#[derive(Serialize)]
struct GeneratorOut {
    name: String,
    scalar: CycloJson,
    /// Entry (i, j) is k for A^k, or null for 0.
    body: Vec<Vec<Option<u32>>>,
}

#[derive(Serialize)]
struct RepOut {
    level: u64,
    genus: usize,
    dim: usize,
    field_order: u32,
    a_order: u32,
    generators: Vec<GeneratorOut>,
}

fn cmd_rep_show(cli: &Cli, which: Option<&str>) -> Result<Output> {
    let rep = WeilRep::new(need_level(cli)?, genus(cli)?)?;
    let mut gens = Vec::new();
    for (tag, op) in rep.generators() {
        let name = tag.to_string();
        if which.is_some_and(|w| !w.eq_ignore_ascii_case(&name)) {
            continue;
        }
        let body = (0..op.body.rows()).map(|i| (0..op.body.cols()).map(|j| op.body.get(i, j)).collect()).collect();
        gens.push(GeneratorOut { name, scalar: op.scalar.to_json(), body });
    }
    if let Some(w) = which.filter(|_| gens.is_empty()) {
        return Err(Error::Argument(format!("no generator named {}", w)));
    }
    let out = RepOut {
        level: rep.p,
        genus: rep.g,
        dim: rep.dim,
        field_order: rep.field().order(),
        a_order: rep.a_order(),
        generators: gens,
    };
    let body = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => return Err(no_csv("rep show")),
        Format::Text => {
            let mut s = format!("level {} genus {} dim {} (A of order {})\n", out.level, out.genus, out.dim, out.a_order);
            for g in &out.generators {
                s += &format!("{} = [{}] *\n", g.name, g.scalar.coeffs.join(", "));
                for row in &g.body {
                    let cells: Vec<String> =
                        row.iter().map(|c| c.map_or("0".to_string(), |k| format!("A^{}", k))).collect();
                    s += &format!("  {}\n", cells.join(" "));
                }
            }
            s
        }
    };
    Ok(Output { body, ok: true })
}

// decompose

#[derive(Serialize)]
struct DecomposeOut {
    tree: DecompositionTree,
    expected_factor_count: u64,
    /// Null when p^{2g} exceeds the solver bound.
    commutant_dimension: Option<usize>,
    total_dim: u64,
    omega: Option<OmegaReport>,
    consistent: bool,
}

fn cmd_decompose(cli: &Cli) -> Result<Output> {
    let (p, g) = (need_level(cli)?, genus(cli)?);
    let tree = decomposition_tree(p, g)?;
    let fits = p.checked_pow(2 * g as u32).is_some_and(|v| v <= COMMUTANT_BOUND);
    let comm = if fits { Some(commutant_dimension(p, g)?) } else { None };
    let omega = match cli.delta {
        Some(d) => Some(omega_projector(d, p, g)?.1),
        None => None,
    };
    let expected = expected_factor_count(p);
    let dim_ok = p.checked_pow(g as u32) == Some(tree.total_dim());
    let consistent = tree.factor_count as u64 == expected
        && comm.map_or(true, |c| c as u64 == expected)
        && dim_ok
        && omega.as_ref().map_or(true, |o| o.commutes && o.nonzero);
    let total_dim = tree.total_dim();
    let out = DecomposeOut { tree, expected_factor_count: expected, commutant_dimension: comm, total_dim, omega, consistent };
    let body = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(
            &["index", "factor", "dim"],
            out.tree.factors.iter().enumerate().map(|(i, f)| vec![i.to_string(), f.to_string(), f.dim().to_string()]).collect(),
        )?,
        Format::Text => {
            let mut s = format!("U_{}^(x{}): {} factors (expected {})\n", p, g, out.tree.factor_count, expected);
            for f in &out.tree.factors {
                s += &format!("  {}  dim {}\n", f, f.dim());
            }
            if let Some(c) = comm {
                s += &format!("commutant dimension {}\n", c);
            }
            if let Some(o) = &out.omega {
                s += &format!("omega delta={} orbit {} commutes {}\n", o.delta, o.orbit_size, o.commutes);
            }
            s
        }
    };
    Ok(Output { body, ok: consistent })
}

// charsum

#[derive(Serialize)]
struct CharsumOut {
    #[serde(flatten)]
    report: crate::analysis::CharSumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicativity: Option<crate::analysis::Multiplicativity>,
}

fn cmd_charsum(cli: &Cli, method: Option<MethodArg>, engine: Option<EngineArg>, with: Option<u64>) -> Result<Output> {
    let p = need_level(cli)?;
    let report = match (method, engine) {
        (None, None) => char_sum(p)?,
        _ => {
            let d = char_sum(p);
            let m = match method {
                Some(MethodArg::Full) => Method::FullEnumeration,
                Some(MethodArg::Census) => Method::CensusRepresentatives,
                Some(MethodArg::Classes) => Method::ClassOrbits,
                None => d.as_ref().map(|r| r.method).unwrap_or(Method::ClassOrbits),
            };
            let e = match engine {
                Some(EngineArg::Exact) => Engine::Exact,
                Some(EngineArg::Modular) => Engine::Modular,
                None => d.as_ref().map(|r| r.engine).unwrap_or(Engine::Modular),
            };
            char_sum_with(p, m, e)?
        }
    };
    let multiplicativity = match with {
        Some(b) => Some(char_sum_multiplicativity(p, b)?),
        None => None,
    };
    let ok = report.passes() && multiplicativity.as_ref().map_or(true, |m| m.holds);
    let out = CharsumOut { report, multiplicativity };
    let r = &out.report;
    let body = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(
            &["level", "modulus", "value", "expected", "method", "engine", "class_count"],
            vec![vec![
                r.level.to_string(),
                r.modulus.to_string(),
                fmt_rational(&r.value),
                format!("{}/1", r.expected),
                serde_json::to_value(r.method).map_err(|e| Error::Defect(e.to_string()))?.as_str().unwrap_or("").into(),
                serde_json::to_value(r.engine).map_err(|e| Error::Defect(e.to_string()))?.as_str().unwrap_or("").into(),
                r.class_count.to_string(),
            ]],
        )?,
        Format::Text => {
            let mut s = format!(
                "S_{} = {} (expected {}), modulus {}, {} classes\n",
                r.level,
                fmt_rational(&r.value),
                format!("{}/1", r.expected),
                r.modulus,
                r.class_count
            );
            if let Some(m) = &out.multiplicativity {
                s += &format!(
                    "S_{} = {} vs S_{} * S_{} = {} * {}: {}\n",
                    m.a * m.b,
                    fmt_rational(&m.s_ab),
                    m.a,
                    m.b,
                    fmt_rational(&m.s_a),
                    fmt_rational(&m.s_b),
                    if m.holds { "holds" } else { "FAILS" }
                );
            }
            s
        }
    };
    Ok(Output { body, ok })
}

// census

#[derive(Serialize)]
struct CensusOut {
    n: u32,
    group_order: u64,
    rows: Vec<CensusRow>,
}

fn census_n(cli: &Cli) -> u32 {
    cli.n.unwrap_or(3)
}

fn cmd_census(cli: &Cli, traces: bool) -> Result<Output> {
    let n = census_n(cli);
    if traces {
        let t = trace_table(n)?;
        let ok = t.passes();
        let body = match cli.format {
            Format::Json => json(&t)?,
            Format::Csv => csv_rows(
                &["n", "l", "x_class", "s", "measured", "expected", "match"],
                t.rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.l.to_string(),
                            r.x_class.label().into(),
                            r.s.to_string(),
                            fmt_rational(&r.measured),
                            opt_q(r.expected),
                            r.matches.to_string(),
                        ]
                    })
                    .collect(),
            )?,
            Format::Text => {
                let mut s = format!("|Tr|^2 at level {} on SL2(Z/{}Z) representatives\n", t.level, 1u64 << n);
                for r in &t.rows {
                    s += &format!(
                        "  l={} x={} s={}: {} expected {} {}\n",
                        r.l,
                        r.x,
                        r.s,
                        fmt_rational(&r.measured),
                        opt_q(r.expected),
                        if r.matches { "ok" } else if r.flagged { "flagged" } else { "MISMATCH" }
                    );
                }
                s
            }
        };
        return Ok(Output { body, ok });
    }
    let rows = census(n, 3)?;
    let ok = rows.iter().all(|r| r.matches());
    let out = CensusOut { n, group_order: sl2_order(1 << n), rows };
    let body = match cli.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(
            &["n", "l", "x_class", "s", "count", "expected", "match"],
            out.rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.l.to_string(),
                        r.x_class.label().into(),
                        r.s.map_or(String::new(), |s| s.to_string()),
                        r.count.to_string(),
                        opt(r.expected),
                        r.matches().to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Text => {
            let mut s = format!("SL2(Z/{}Z): {} elements\n", 1u64 << n, out.group_order);
            for r in &out.rows {
                s += &format!(
                    "  l={} x={} s={}: {} expected {} {}\n",
                    r.l,
                    r.x_class.label(),
                    r.s.map_or("*".to_string(), |s| s.to_string()),
                    r.count,
                    opt(r.expected),
                    if r.matches() { "ok" } else { "MISMATCH" }
                );
            }
            s
        }
    };
    Ok(Output { body, ok })
}

// orbits

fn cmd_orbits(cli: &Cli) -> Result<Output> {
    let c = orbit_census(need_level(cli)?, genus(cli)?)?;
    let ok = c.passes();
    let body = match cli.format {
        Format::Json => json(&c)?,
        Format::Csv => csv_rows(
            &["modulus", "genus", "delta", "size"],
            c.orbits
                .iter()
                .map(|o| vec![c.modulus.to_string(), c.genus.to_string(), o.delta.to_string(), o.size.to_string()])
                .collect(),
        )?,
        Format::Text => {
            let mut s = format!("(Z/{}Z)^{}: {} orbits (expected {})\n", c.modulus, 2 * c.genus, c.count, c.expected);
            for o in &c.orbits {
                s += &format!("  delta={} size {}\n", o.delta, o.size);
            }
            s
        }
    };
    Ok(Output { body, ok })
}

// semiclassical

fn cmd_semiclassical(cli: &Cli, monomials: &[String], max_degree: u32) -> Result<Output> {
    let g = genus(cli)?;
    let monos: Vec<Monomial> = if monomials.is_empty() {
        Monomial::all_up_to(g, max_degree)
    } else {
        monomials
            .iter()
            .map(|s| {
                let m: Monomial = s.parse()?;
                if m.genus() > g {
                    return Err(Error::Argument(format!("{} needs genus {}", s, m.genus())));
                }
                let mut v = m.0;
                v.resize(2 * g, 0);
                Ok(Monomial(v))
            })
            .collect::<Result<_>>()?
    };
    let levels: Vec<u64> = match cli.level {
        Some(p) => vec![p],
        None => (3..=cli.max_level).collect(),
    };
    let mut reports: Vec<SemiclassicalReport> = Vec::new();
    for p in levels {
        reports.extend(semiclassical_traces(p, g, &monos)?);
    }
    let ok = reports.iter().all(|r| r.passes());
    let body = match cli.format {
        Format::Json => json(&reports)?,
        Format::Csv => csv_rows(
            &["level", "genus", "monomial", "value", "target", "gap", "beyond_degree"],
            reports
                .iter()
                .map(|r| {
                    vec![
                        r.level.to_string(),
                        r.genus.to_string(),
                        r.monomial.clone(),
                        fmt_rational(&r.value),
                        fmt_rational(&r.target),
                        fmt_rational(&r.gap),
                        r.beyond_degree.to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Text => reports
            .iter()
            .map(|r| format!("p={} {}: {} (target {}, gap {})\n", r.level, r.monomial, fmt_rational(&r.value), fmt_rational(&r.target), fmt_rational(&r.gap)))
            .collect(),
    };
    Ok(Output { body, ok })
}

// verify

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub max_level: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

struct Checks<'a> {
    suite: &'static str,
    out: &'a mut Vec<Check>,
}

impl Checks<'_> {
    fn push(&mut self, name: String, pass: bool, detail: String) {
        self.out.push(Check { suite: self.suite, name, pass, detail });
    }
}

fn suite_census(c: &mut Checks, n_max: u32) -> Result<()> {
    for n in 1..=n_max.min(5) {
        let big = 1u64 << n;
        let count = sl2_enumerate(big, 32)?.count() as u64;
        let want = 3 * (1u64 << (3 * n - 2));
        c.push(format!("order n={}", n), count == want, format!("{} vs {}", count, want));
    }
    for n in 1..=n_max.min(3) {
        let big = 1u64 << n;
        let mut ok = true;
        for m in sl2_enumerate(big, 32)? {
            ok &= hensel_lift_count(&m, 16)? == 8;
        }
        c.push(format!("hensel n={}", n), ok, "8 lifts each".into());
    }
    for n in 2..=n_max.min(5) {
        let rows = census(n, 3)?;
        let bad = rows.iter().filter(|r| !r.matches()).count();
        c.push(format!("census n={}", n), bad == 0, format!("{} rows, {} mismatched", rows.len(), bad));
    }
    for n in 2..=n_max.min(3) {
        let reps = class_representatives(n)?;
        let mut bad = 0;
        for r in &reps {
            if class_size_bruteforce(&r.matrix, 8)? != r.m {
                bad += 1;
            }
        }
        c.push(format!("class sizes n={}", n), bad == 0, format!("{} classes, {} mismatched", reps.len(), bad));
    }
    let mut bad = 0;
    let mut total = 0;
    for n in 1..=n_max.min(6) {
        for a in [1i64, 3, 5, 7] {
            for cc in 0..=7 {
                for d in [1i64, 3, 5, 7] {
                    let r = count_quadratic_solutions(a, 1, cc, d, n, false)?;
                    total += 1;
                    bad += usize::from(!r.matches());
                    for b in 0..=7 {
                        let r = count_quadratic_solutions(a, b, cc, d, n, true)?;
                        total += 1;
                        bad += usize::from(!r.matches());
                    }
                }
            }
        }
    }
    c.push("quadratic counts".into(), bad == 0, format!("{} cases, {} mismatched", total, bad));
    for n in 2..=n_max.min(4) {
        let t = trace_table(n)?;
        let bad = t.rows.iter().filter(|r| !r.matches && !r.flagged).count();
        c.push(format!("trace table n={}", n), t.passes(), format!("{} rows, {} mismatched", t.rows.len(), bad));
    }
    Ok(())
}

fn suite_charsum(c: &mut Checks, max_level: u64) -> Result<()> {
    for p in 2..=max_level.min(16) {
        let r = char_sum(p)?;
        c.push(format!("S_{}", p), r.passes(), format!("{} vs {}/1", fmt_rational(&r.value), r.expected));
    }
    for p in [2u64, 3, 4] {
        let a = char_sum_with(p, Method::FullEnumeration, Engine::Exact)?;
        let b = char_sum_with(p, Method::ClassOrbits, Engine::Modular)?;
        c.push(format!("S_{} cross-check", p), a.value == b.value, "full/exact vs classes/modular".into());
    }
    let top = max_level.min(9);
    for a in 2..=top {
        for b in 3..=top {
            if b % 2 == 0 || num_integer::gcd(a, b) != 1 || (a % 2 == 1 && a >= b) {
                continue;
            }
            let m = char_sum_multiplicativity(a, b)?;
            c.push(
                format!("S_{}{} = S_{} S_{}", if a % 2 == 0 { "2*" } else { "" }, a * b, a, b),
                m.holds,
                format!("{} vs {} * {}", fmt_rational(&m.s_ab), fmt_rational(&m.s_a), fmt_rational(&m.s_b)),
            );
        }
    }
    Ok(())
}

fn suite_crt(c: &mut Checks, max_level: u64) -> Result<()> {
    for (a, b, g) in [(3u64, 5u64, 1usize), (2, 3, 1), (4, 3, 1), (8, 3, 1), (2, 3, 2)] {
        if a.max(b) > max_level {
            continue;
        }
        let r = crt_check(a, b, g)?;
        c.push(format!("crt ({},{}) g={}", a, b, g), r.passes(), format!("u={} v={}", r.u, r.v));
    }
    Ok(())
}

fn suite_tower(c: &mut Checks, max_level: u64) -> Result<()> {
    for (r, n, g) in [(2u64, 1u32, 1usize), (2, 2, 1), (3, 0, 1), (3, 1, 1), (2, 1, 2)] {
        if r.pow(n + 2) > max_level * max_level {
            continue;
        }
        let t = tower_check(r, n, g)?;
        c.push(format!("tower r={} n={} g={}", r, n, g), t.passes(), format!("level {}, dim W {}", t.level, t.w_dim));
    }
    Ok(())
}

fn suite_egorov(c: &mut Checks, max_level: u64) -> Result<()> {
    for g in 1..=2usize {
        for p in 2..=max_level.min(7) {
            if g == 2 && p > 5 {
                continue;
            }
            let rep = WeilRep::new(p, g)?;
            let mut ok = true;
            let mut unitary = true;
            for (_, op) in rep.generators() {
                ok &= egorov_map(&rep, op)?.passes();
                unitary &= rep.is_unitary(op)?;
            }
            c.push(format!("egorov p={} g={}", p, g), ok, "lattice maps preserve the form".into());
            c.push(format!("unitary p={} g={}", p, g), unitary, String::new());
        }
    }
    Ok(())
}

fn suite_semiclassical(c: &mut Checks, max_level: u64) -> Result<()> {
    let monos = Monomial::all_up_to(1, 4);
    for p in 3..=max_level.max(3) {
        let rs = semiclassical_traces(p, 1, &monos)?;
        let bad = rs.iter().filter(|r| !r.passes()).count();
        c.push(format!("traces p={}", p), bad == 0, format!("{} monomials, {} nonvanishing", rs.len(), bad));
    }
    Ok(())
}

fn suite_faithful(c: &mut Checks, max_level: u64) -> Result<()> {
    for p in [3u64, 5, 7] {
        if p > max_level {
            continue;
        }
        let r = kernel_check(p)?;
        c.push(format!("faithful p={}", p), r.injective, format!("{} classes of {}", r.distinct, r.group_order));
    }
    Ok(())
}

pub fn run_verify(suite: Suite, max_level: u64, n: u32) -> Result<VerifyReport> {
    if max_level < 2 {
        return Err(Error::Argument("--max-level must be at least 2".into()));
    }
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    type SuiteFn = fn(&mut Checks, u64) -> Result<()>;
    let table: [(Suite, &'static str, SuiteFn); 6] = [
        (Suite::Charsum, "charsum", suite_charsum),
        (Suite::Crt, "crt", suite_crt),
        (Suite::Tower, "tower", suite_tower),
        (Suite::Egorov, "egorov", suite_egorov),
        (Suite::Semiclassical, "semiclassical", suite_semiclassical),
        (Suite::Faithful, "faithful", suite_faithful),
    ];
    if all || suite == Suite::Census {
        suite_census(&mut Checks { suite: "census", out: &mut checks }, n)?;
    }
    for (s, name, f) in table {
        if all || suite == s {
            f(&mut Checks { suite: name, out: &mut checks }, max_level)?;
        }
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let suite = format!("{:?}", suite).to_lowercase();
    Ok(VerifyReport { suite, max_level, passed, failed: checks.len() - passed, checks })
}

fn cmd_verify(cli: &Cli, suite: Suite) -> Result<Output> {
    let r = run_verify(suite, cli.max_level, cli.n.unwrap_or(4))?;
    let ok = r.failed == 0;
    let body = match cli.format {
        Format::Json => json(&r)?,
        Format::Csv => csv_rows(
            &["suite", "check", "pass", "detail"],
            r.checks.iter().map(|c| vec![c.suite.into(), c.name.clone(), c.pass.to_string(), c.detail.clone()]).collect(),
        )?,
        Format::Text => {
            let mut s: String = r
                .checks
                .iter()
                .map(|c| format!("{} [{}] {} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail))
                .collect();
            s += &format!("{} passed, {} failed\n", r.passed, r.failed);
            s
        }
    };
    Ok(Output { body, ok })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Gauss { a, b, p } => cmd_gauss(cli, *a, *b, *p),
        Command::Rep { action: RepAction::Show { generator } } => cmd_rep_show(cli, generator.as_deref()),
        Command::Decompose => cmd_decompose(cli),
        Command::Charsum { method, engine, with } => cmd_charsum(cli, *method, *engine, *with),
        Command::Census { traces } => cmd_census(cli, *traces),
        Command::Orbits => cmd_orbits(cli),
        Command::Semiclassical { monomials, max_degree } => cmd_semiclassical(cli, monomials, *max_degree),
        Command::Verify { suite } => cmd_verify(cli, *suite),
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return 2;
        }
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e);
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, out.body.as_bytes()),
        None => std::io::stdout().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {}", e);
        return 2;
    }
    if out.ok {
        0
    } else {
        1
    }
}
