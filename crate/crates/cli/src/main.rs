use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilpoisson::algebra::{check_identity, IdentityKind, PoissonPair};
use nilpoisson::classify::{canonicalize, iso_test, verify_transform_formula, CanonicalForm, IsoDecision};
use nilpoisson::exactnum::{registry, MPoly, Rat, Scalar};
use nilpoisson::families::{
    canonical_catalog, family_for, family_pair, quadratic_rational_roots, special_deltas, symbolic_family,
    CatalogEntry, Delta, FamilySpec, FamilyTag, Slot,
};
use nilpoisson::solver::{match_family, solve, MatchReport, SolutionSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

const DEFAULT_MAX_N: usize = 10;

#[derive(Parser)]
#[command(
    name = "nilpoisson",
    version,
    about = "Transposed δ-Poisson structures on μ₀ⁿ, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for every bracket satisfying an identity on μ₀ⁿ.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[arg(long, default_value = "transposed")]
        identity: IdentityKind,
        #[command(flatten)]
        out: Output,
    },
    /// Check an identity on a family, or its transformation law with `--identity transform`.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "transposed")]
        identity: String,
        #[command(flatten)]
        out: Output,
    },
    /// Canonical form of a family member, or of a seeded random batch.
    Canon {
        #[command(flatten)]
        family: FamilyArgs,
        /// Canonicalize this many random parameter vectors instead of --alphas.
        #[arg(long)]
        batch: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether two members of one family are isomorphic.
    Iso {
        #[command(flatten)]
        family: FamilyArgs,
        /// Parameters of the second member.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        other: Vec<Rat>,
        #[command(flatten)]
        out: Output,
    },
    /// Canonical representatives for (n, δ).
    Catalog {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: Delta,
        #[command(flatten)]
        out: Output,
    },
    /// The cubic δ(δ-1)(δ-2) and, given n, the special values of δ.
    Discriminant {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: FamilyTag,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    delta: Delta,
    /// Comma separated rationals; omit for symbolic parameters where allowed.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alphas: Vec<Rat>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

/// Failure with the exit status it maps to.
struct Fail(u8, String);

impl From<nilpoisson::Error> for Fail {
    fn from(e: nilpoisson::Error) -> Fail {
        Fail(1, e.to_string())
    }
}

type Out = Result<(String, u8), Fail>;

fn max_n() -> Result<usize, Fail> {
    match std::env::var("NILPOISSON_MAX_N") {
        Ok(v) => v
            .parse()
            .map_err(|_| Fail(1, format!("NILPOISSON_MAX_N is not a dimension: {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_n(n: usize) -> Result<(), Fail> {
    let cap = max_n()?;
    if n == 0 {
        return Err(Fail(1, "n must be at least 1".into()));
    }
    if n > cap {
        return Err(Fail(1, format!("n = {n} exceeds NILPOISSON_MAX_N = {cap}")));
    }
    Ok(())
}

fn rational_delta(d: &Delta, what: &str) -> Result<Rat, Fail> {
    match d {
        Delta::Value(v) => Ok(v.clone()),
        Delta::Symbolic => Err(Fail(1, format!("{what} needs a rational delta"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Solve {
            n,
            delta,
            identity,
            out,
        } => cmd_solve(n, &delta, identity, out.format),
        Command::Verify { family, identity, out } => cmd_verify(&family, &identity, out.format),
        Command::Canon {
            family,
            batch,
            seed,
            out,
        } => match batch {
            Some(count) => cmd_canon_batch(&family, count, seed, out.format),
            None => cmd_canon(&family, out.format),
        },
        Command::Iso { family, other, out } => cmd_iso(&family, other, out.format),
        Command::Catalog { n, delta, out } => cmd_catalog(n, &delta, out.format),
        Command::Discriminant { n, out } => cmd_discriminant(n, out.format),
    }
}

fn cmd_solve(n: usize, delta: &Delta, kind: IdentityKind, format: Format) -> Out {
    check_n(n)?;
    let Delta::Value(d) = delta else {
        return Err(Fail(
            1,
            "unsupported mode: solve needs a rational delta; use verify for symbolic delta".into(),
        ));
    };
    let space = solve(n, d, kind)?;
    let (family, report) = match kind {
        IdentityKind::Transposed if n >= 2 => {
            let tag = family_for(n, d);
            (Some(tag), Some(match_family(&space, tag, n)?))
        }
        IdentityKind::DeltaPoisson => (Some(FamilyTag::TrivialDeltaPoisson), None),
        _ => (None, None),
    };
    let text = match format {
        Format::Json => to_json(&json!({
            "space": space,
            "free_parameters": space.dimension(),
            "family": family,
            "match": report,
            "zero_bracket_only": space.is_zero_space(),
        })),
        Format::Human => solve_human(&space, family, report.as_ref())?,
    };
    Ok((text, 0))
}

fn solve_human(space: &SolutionSpace, family: Option<FamilyTag>, report: Option<&MatchReport>) -> Result<String, Fail> {
    let mut lines = vec![
        format!("{} on μ₀^{} with δ = {}", space.kind, space.n, space.delta),
        format!("free parameters: {}", space.dimension()),
    ];
    if !space.free.is_empty() {
        lines.push(format!("  {}", space.free.join(", ")));
    }
    for f in &space.forced {
        lines.push(format!("forced by Jacobi: {f}"));
    }
    for c in &space.residual_conditions {
        lines.push(format!("unresolved condition: {c}"));
    }
    lines.push(space.parametrized_pair()?.table_string());
    match (family, report) {
        (Some(tag), Some(MatchReport::Match { substitution })) => {
            lines.push(format!("matches {tag}"));
            for (p, form) in substitution {
                lines.push(format!("  {p} = {form}"));
            }
        }
        (Some(tag), Some(other)) => lines.push(format!("does not match {tag}: {other:?}")),
        (Some(_), None) if space.is_zero_space() => lines.push("trivial: zero bracket only".into()),
        _ => {}
    }
    Ok(lines.join("\n"))
}

fn spec_of(f: &FamilyArgs) -> Result<FamilySpec, Fail> {
    check_n(f.n)?;
    Ok(FamilySpec::new(f.family, f.n, f.delta.clone(), f.alphas.clone())?)
}

fn cmd_verify(f: &FamilyArgs, identity: &str, format: Format) -> Out {
    check_n(f.n)?;
    if identity == "transform" {
        let rep = verify_transform_formula(f.family, f.n, &f.delta)?;
        let text = match format {
            Format::Json => to_json(&rep),
            Format::Human => report_human(&format!("{} transformation law, n = {}", f.family, f.n), &rep),
        };
        return Ok((text, 0));
    }
    let kind: IdentityKind = identity.parse()?;
    // no parameters given: check with symbolic α's (and δ when symbolic)
    if f.alphas.is_empty() && !f.family.alpha_indices(f.n)?.is_empty() || f.delta == Delta::Symbolic {
        let pair = if f.alphas.is_empty() {
            symbolic_family(f.family, f.n, &f.delta)?.1
        } else {
            let reg = registry(&["delta"]);
            let d = MPoly::var(&reg, 0);
            let al: Vec<MPoly> = f.alphas.iter().cloned().map(MPoly::constant).collect();
            family_pair(f.family, f.n, &d, &al)?
        };
        let rep = check_identity(&pair, kind);
        let text = match format {
            Format::Json => to_json(&rep),
            Format::Human => report_human(&format!("{kind} on {}", f.family), &rep),
        };
        return Ok((text, 0));
    }
    let spec = spec_of(f)?;
    let pair = spec.instantiate()?;
    let rep = check_identity(&pair, kind);
    let text = match format {
        Format::Json => to_json(&rep),
        Format::Human => format!(
            "{}\n{}",
            pair.table_string(),
            report_human(&format!("{kind} on {}", spec.label()), &rep)
        ),
    };
    Ok((text, 0))
}

fn report_human<S: Scalar>(title: &str, rep: &nilpoisson::algebra::ResidualReport<S>) -> String {
    let mut lines = vec![format!(
        "{title}: {}",
        if rep.all_zero {
            "holds".to_string()
        } else {
            format!("{} nonzero residuals", rep.residuals.len())
        }
    )];
    for r in &rep.residuals {
        let part = r.part.as_deref().map(|p| format!(" [{p}]")).unwrap_or_default();
        lines.push(format!("  {:?} coord {}: {}{part}", r.indices, r.coord, r.value));
    }
    lines.join("\n")
}

fn canon_human(c: &CanonicalForm) -> String {
    let mut lines = vec![format!("canonical form: {}", c.label())];
    let a: Vec<String> = c.witness.total.params().iter().map(|x| x.to_string()).collect();
    lines.push(format!("witness A = ({})", a.join(", ")));
    if let Some((m, q)) = c.radical() {
        lines.push(format!("radical: x^{m} = {q}"));
    }
    for note in &c.notes {
        lines.push(format!("note: {note}"));
    }
    lines.join("\n")
}

fn cmd_canon(f: &FamilyArgs, format: Format) -> Out {
    let spec = spec_of(f)?;
    let c = canonicalize(&spec)?;
    let text = match format {
        Format::Json => to_json(&c),
        Format::Human => canon_human(&c),
    };
    Ok((text, 0))
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    if rng.gen_bool(0.4) {
        return Rat::zero();
    }
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=5);
    Rat::new(p, q).expect("nonzero denominator")
}

fn cmd_canon_batch(f: &FamilyArgs, count: usize, seed: u64, format: Format) -> Out {
    check_n(f.n)?;
    let k = f.family.alpha_indices(f.n)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    let mut human = Vec::new();
    for _ in 0..count {
        let alphas: Vec<Rat> = (0..k).map(|_| random_rat(&mut rng)).collect();
        let spec = FamilySpec::new(f.family, f.n, f.delta.clone(), alphas)?;
        match canonicalize(&spec) {
            Ok(c) => {
                human.push(format!("{} -> {}", spec.label(), c.label()));
                rows.push(json!({"input": spec, "canonical": c}));
            }
            Err(e) => {
                human.push(format!("{} -> error: {e}", spec.label()));
                rows.push(json!({"input": spec, "error": e.to_string()}));
            }
        }
    }
    let text = match format {
        Format::Json => to_json(&json!({"seed": seed, "results": rows})),
        Format::Human => human.join("\n"),
    };
    Ok((text, 0))
}

fn cmd_iso(f: &FamilyArgs, other: Vec<Rat>, format: Format) -> Out {
    let a = spec_of(f)?;
    let b = FamilySpec::new(f.family, f.n, f.delta.clone(), other)?;
    let d = iso_test(&a, &b)?;
    let code = if matches!(d, IsoDecision::Inconclusive(_)) {
        2
    } else {
        0
    };
    let text = match format {
        Format::Json => to_json(&d),
        Format::Human => match &d {
            IsoDecision::Isomorphic(w) => {
                let mut s = format!("{} ≅ {}", a.label(), b.label());
                if let Some(w) = w {
                    let p: Vec<String> = w.total.params().iter().map(|x| x.to_string()).collect();
                    s.push_str(&format!("\nwitness A = ({})", p.join(", ")));
                }
                s
            }
            IsoDecision::NotIsomorphic(r) => format!("not isomorphic: {r}"),
            IsoDecision::Inconclusive(r) => format!("inconclusive: {r}"),
        },
    };
    Ok((text, code))
}

/// Bracket of a catalog entry with its modulus left as the symbol α.
fn entry_pair(e: &CatalogEntry) -> Result<PoissonPair<MPoly>, Fail> {
    let reg = registry(&["α"]);
    let alpha = MPoly::var(&reg, 0);
    let al: Vec<MPoly> = e
        .slots
        .iter()
        .map(|s| match s {
            Slot::Fixed(v) => MPoly::constant(v.clone()),
            Slot::Modulus => alpha.clone(),
        })
        .collect();
    Ok(family_pair(e.tag, e.n, &MPoly::constant(e.delta.clone()), &al)?)
}

fn cmd_catalog(n: usize, delta: &Delta, format: Format) -> Out {
    check_n(n)?;
    let d = rational_delta(delta, "catalog")?;
    let entries = canonical_catalog(n, &d)?;
    let text = match format {
        Format::Json => {
            let rows: Vec<_> = entries
                .iter()
                .map(|e| json!({"label": e.label(), "entry": e}))
                .collect();
            to_json(&json!({"n": n, "delta": d, "family": family_for(n, &d), "entries": rows}))
        }
        Format::Human => {
            let mut blocks = Vec::new();
            for e in &entries {
                blocks.push(format!("{}\n{}", e.label(), entry_pair(e)?.table_string()));
            }
            blocks.join("\n\n")
        }
    };
    Ok((text, 0))
}

fn cmd_discriminant(n: Option<usize>, format: Format) -> Out {
    let roots = ["0", "1", "2"];
    let mut value = json!({
        "polynomial": "delta^3 - 3*delta^2 + 2*delta",
        "factored": "delta*(delta - 1)*(delta - 2)",
        "roots": roots,
    });
    let mut human = vec![
        "δ³ - 3δ² + 2δ = δ(δ - 1)(δ - 2)".to_string(),
        format!("roots: {}", roots.join(", ")),
    ];
    if let Some(n) = n {
        check_n(n)?;
        let c = 2 * n as i64 - 4;
        let quad = format!("delta^2 + 3*delta - {c}");
        let rational = quadratic_rational_roots(n);
        // one row per value, reasons in order of appearance
        let mut grouped: Vec<(Rat, Vec<&str>)> = Vec::new();
        for (d, why) in special_deltas(n) {
            match grouped.iter_mut().find(|(x, _)| *x == d) {
                Some((_, reasons)) => reasons.push(why),
                None => grouped.push((d, vec![why])),
            }
        }
        let special: Vec<_> = grouped
            .iter()
            .map(|(d, why)| json!({"delta": d, "reasons": why}))
            .collect();
        human.push(format!("special δ for n = {n}:"));
        for (d, why) in &grouped {
            human.push(format!("  {d}: {}", why.join("; ")));
        }
        if rational.is_empty() {
            human.push(format!(
                "  δ² + 3δ - {c} = 0 has no rational root; irrational roots are outside the catalog"
            ));
        }
        value["n"] = json!(n);
        value["special"] = json!(special);
        value["quadratic"] = json!({
            "polynomial": quad,
            "rational_roots": rational,
            "irrational": rational.is_empty(),
        });
    }
    let text = match format {
        Format::Json => to_json(&value),
        Format::Human => human.join("\n"),
    };
    Ok((text, 0))
}
