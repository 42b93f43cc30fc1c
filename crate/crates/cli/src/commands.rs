use std::fmt::Write as _;

use anyhow::{bail, Result};
use serde::Serialize;

use cayley_spectra::characters::{character_table, lambda2_exact, normal_spectrum};
use cayley_spectra::graph::{build_graph, dense_spectrum, lanczos_lambda2, MAX_DENSE_VERTICES};
use cayley_spectra::perm::factorial;
use cayley_spectra::quotient::lambda2_counting;
use cayley_spectra::sets::{build_connection_set, derive_tk, filtered_class};
use cayley_spectra::verify::{
    all_outcomes, fj_inequalities, run_family_sweep, transposition_edges, transposition_set,
    verify_aldous_oracle, verify_corollaries, verify_example24, verify_fj,
    verify_recursion_identities, Outcome, SweepOptions, TranspositionGraphKind,
    REPORT_SCHEMA_VERSION,
};
use cayley_spectra::{ClassId, FamilyIndex, LanczosConfig, StabilizerScope};

use crate::output::{csv_string, emit, Rendered};
use crate::{Cli, Command, Method, TreeKind};

pub fn run(cli: &Cli) -> Result<u8> {
    let mut lanczos = LanczosConfig::with_seed(cli.global.seed);
    if let Some(tol) = cli.global.tol {
        if !(tol > 0.0) {
            bail!("--tol must be positive");
        }
        lanczos.residual_tol = tol;
    }
    let (rendered, outcome) = match &cli.command {
        Command::Classes { n, k, class } => (classes(*n, *k, *class)?, None),
        Command::Lambda2 {
            n,
            family,
            k,
            method,
        } => (lambda2(*n, *family, *k, *method, &lanczos)?, None),
        Command::Spectrum { n, family } => (spectrum(*n, *family)?, None),
        Command::Characters { n } => (characters(*n)?, None),
        Command::Sweep {
            n,
            family,
            verdicts,
        } => {
            let (r, o) = sweep(*n, family, *verdicts, &lanczos)?;
            (r, Some(o))
        }
        Command::Fj { n, max_n } => {
            let (r, o) = fj(*n, *max_n, &lanczos)?;
            (r, Some(o))
        }
        Command::Aldous { n, tree, count } => {
            let (r, o) = aldous(*n, *tree, *count, cli.global.seed, &lanczos)?;
            (r, Some(o))
        }
        Command::Corollaries { n } => {
            let (r, o) = corollaries(n, &lanczos)?;
            (r, Some(o))
        }
        Command::Examples { max_dim, max_cycle } => {
            let (r, o) = examples(*max_dim, *max_cycle)?;
            (r, Some(o))
        }
        Command::Recursion { n, family } => {
            let (r, o) = recursion(*n, family)?;
            (r, Some(o))
        }
    };
    emit(&cli.global, rendered)?;
    Ok(outcome.map_or(0, |o| o.exit_code() as u8))
}

#[derive(Serialize)]
struct ClassRow {
    class: u8,
    cycle_lengths: Vec<usize>,
    k: usize,
    size: usize,
}

fn classes(n: usize, k: Option<usize>, class: Option<u8>) -> Result<Rendered> {
    if let Some(tag) = class {
        let id = ClassId::new(tag)?;
        let k = k.unwrap_or(0);
        let set = filtered_class(n, id, k)?;
        let elements = set.cycle_strings();
        #[derive(Serialize)]
        struct Listing<'a> {
            n: usize,
            class: u8,
            k: usize,
            size: usize,
            elements: &'a [String],
        }
        let mut text = format!(
            "class {tag} on [{n}], k = {k}: {} elements\n",
            elements.len()
        );
        for e in &elements {
            writeln!(text, "{e}")?;
        }
        let csv = csv_string(&["element"], elements.iter().map(|e| [e.clone()]))?;
        let listing = Listing {
            n,
            class: tag,
            k,
            size: elements.len(),
            elements: &elements,
        };
        return Ok(Rendered::new(text, &listing)?.with_csv(csv));
    }
    let ids: Vec<ClassId> = ClassId::ALL
        .into_iter()
        .filter(|c| c.support_size() <= n)
        .collect();
    if ids.is_empty() {
        bail!("no class fits in degree {n}; every class needs n >= 2");
    }
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=5.min(n)).collect(),
    };
    let mut rows = Vec::new();
    for &id in &ids {
        for &k in &ks {
            rows.push(ClassRow {
                class: id.tag(),
                cycle_lengths: id.cycle_lengths().to_vec(),
                k,
                size: filtered_class(n, id, k)?.len(),
            });
        }
    }
    let mut text = format!("{:<6} {:<10}", "class", "cycles");
    for k in &ks {
        write!(text, " {:>7}", format!("k={k}"))?;
    }
    text.push('\n');
    for chunk in rows.chunks(ks.len()) {
        let lengths: Vec<String> = chunk[0]
            .cycle_lengths
            .iter()
            .map(usize::to_string)
            .collect();
        write!(text, "{:<6} {:<10}", chunk[0].class, lengths.join("+"))?;
        for r in chunk {
            write!(text, " {:>7}", r.size)?;
        }
        text.push('\n');
    }
    let csv = csv_string(
        &["class", "cycle_lengths", "k", "size"],
        rows.iter().map(|r| {
            let lengths: Vec<String> = r.cycle_lengths.iter().map(usize::to_string).collect();
            [
                r.class.to_string(),
                lengths.join("+"),
                r.k.to_string(),
                r.size.to_string(),
            ]
        }),
    )?;
    Ok(Rendered::new(text, &rows)?.with_csv(csv))
}

#[derive(Serialize)]
struct Lambda2Output {
    n: usize,
    family: FamilyIndex,
    k: usize,
    valency: usize,
    method: &'static str,
    lambda2: f64,
    residual: Option<f64>,
    counting_value: Option<i64>,
    /// λ₂ equals λ₁, so the graph is disconnected.
    top_repeated: bool,
}

fn lambda2(
    n: usize,
    family: FamilyIndex,
    k: usize,
    method: Method,
    config: &LanczosConfig,
) -> Result<Rendered> {
    let t = build_connection_set(n, family)?;
    let tk = derive_tk(&t, k);
    if tk.is_empty() {
        bail!("T_{k} is empty for family {family} at n = {n}");
    }
    let counting_value = lambda2_counting(&tk, k).ok();
    let method = match method {
        Method::Auto if k == 0 && n <= cayley_spectra::characters::MAX_TABLE_DEGREE => {
            Method::Character
        }
        Method::Auto if factorial(n) as usize <= MAX_DENSE_VERTICES => Method::Dense,
        Method::Auto => Method::Lanczos,
        m => m,
    };
    let valency = tk.len();
    let (name, value, residual, top_repeated) = match method {
        Method::Character => {
            if k != 0 {
                bail!(
                    "--method character needs k = 0; T_k is not closed under conjugation for k > 0"
                );
            }
            let l = lambda2_exact(&normal_spectrum(n, family)?)?;
            ("character", l.value as f64, None, l.top_repeated)
        }
        Method::Dense => {
            let g = build_graph(&StabilizerScope::full(n), &tk)?;
            let spec = dense_spectrum(&g)?;
            let top_repeated = (spec[1] - spec[0]).abs() < 1e-9;
            ("dense", spec[1], None, top_repeated)
        }
        Method::Lanczos | Method::Auto => {
            let g = build_graph(&StabilizerScope::full(n), &tk)?;
            let r = lanczos_lambda2(&g, config)?;
            ("lanczos", r.value, Some(r.residual), !g.is_connected())
        }
    };
    let out = Lambda2Output {
        n,
        family,
        k,
        valency,
        method: name,
        lambda2: value,
        residual,
        counting_value,
        top_repeated,
    };
    let shown = if name == "character" {
        format!("{value}")
    } else {
        format!("{value:.9}")
    };
    let mut text =
        format!("n = {n}, family {family}, k = {k}\n|T_k| = {valency}\nλ₂ = {shown} ({name}");
    if let Some(r) = residual {
        write!(text, ", residual {r:.2e}")?;
    }
    text.push_str(")\n");
    if let Some(c) = counting_value {
        writeln!(text, "counting value = {c}")?;
    }
    if top_repeated {
        text.push_str("λ₂ = λ₁: the graph is disconnected\n");
    }
    let csv = csv_string(
        &[
            "n",
            "family",
            "k",
            "valency",
            "method",
            "lambda2",
            "residual",
            "counting_value",
        ],
        [[
            n.to_string(),
            family.to_string(),
            k.to_string(),
            valency.to_string(),
            name.to_string(),
            value.to_string(),
            residual.map_or_else(String::new, |r| r.to_string()),
            counting_value.map_or_else(String::new, |c| c.to_string()),
        ]],
    )?;
    Ok(Rendered::new(text, &out)?.with_csv(csv))
}

fn spectrum(n: usize, family: FamilyIndex) -> Result<Rendered> {
    let spec = normal_spectrum(n, family)?;
    let l2 = lambda2_exact(&spec)?;
    let mut text = format!("Cay(S_{n}, {family}): eigenvalue multiplicity\n");
    for &(v, m) in spec.pairs() {
        writeln!(text, "{v:>10} {m:>10}")?;
    }
    writeln!(
        text,
        "λ₂ = {}{}",
        l2.value,
        if l2.top_repeated {
            " (disconnected)"
        } else {
            ""
        }
    )?;
    let csv = csv_string(
        &["eigenvalue", "multiplicity"],
        spec.pairs()
            .iter()
            .map(|(v, m)| [v.to_string(), m.to_string()]),
    )?;
    Ok(Rendered {
        text,
        json: spec.to_json()?,
        csv: Some(csv),
    })
}

fn characters(n: usize) -> Result<Rendered> {
    let table = character_table(n)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    let csv = String::from_utf8(buf)?;
    #[derive(Serialize)]
    struct Table {
        partitions: Vec<String>,
        class_sizes: Vec<u64>,
        rows: Vec<Vec<i64>>,
    }
    let parts: Vec<String> = table.partitions().iter().map(|p| p.to_string()).collect();
    let rows: Vec<Vec<i64>> = (0..parts.len()).map(|i| table.row(i).to_vec()).collect();
    let width = parts.iter().map(String::len).max().unwrap_or(1).max(6);
    let mut text = format!("{:<width$}", "");
    for p in &parts {
        write!(text, " {p:>width$}")?;
    }
    text.push('\n');
    for (p, row) in parts.iter().zip(&rows) {
        write!(text, "{p:<width$}")?;
        for v in row {
            write!(text, " {v:>width$}")?;
        }
        text.push('\n');
    }
    let value = Table {
        partitions: parts,
        class_sizes: table.class_sizes().to_vec(),
        rows,
    };
    Ok(Rendered::new(text, &value)?.with_csv(csv))
}

fn sweep(
    n: usize,
    family: &[FamilyIndex],
    verdicts: bool,
    config: &LanczosConfig,
) -> Result<(Rendered, Outcome)> {
    if !(7..=8).contains(&n) {
        bail!("the sweep runs at n = 7 (or 8 for an endurance run), got {n}");
    }
    let opts = SweepOptions {
        n,
        lanczos: *config,
        families: (!family.is_empty()).then(|| family.to_vec()),
    };
    let report = run_family_sweep(&opts)?;
    let mut buf = Vec::new();
    if verdicts {
        report.write_verdicts_csv(&mut buf)?;
    } else {
        report.write_table_csv(&mut buf)?;
    }
    let r = Rendered::new(report.to_text(), &report)?.with_csv(String::from_utf8(buf)?);
    Ok((r, report.outcome))
}

fn fj(n: Option<usize>, max_n: usize, config: &LanczosConfig) -> Result<(Rendered, Outcome)> {
    let ns: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (4..=7).collect(),
    };
    let reports = ns
        .iter()
        .map(|&n| verify_fj(n, config))
        .collect::<Result<Vec<_>, _>>()?;
    let inequalities = fj_inequalities(max_n)?;
    let outcome = all_outcomes(reports.iter().map(|r| r.outcome));
    let mut text = String::new();
    let mut csv_rows = Vec::new();
    for r in &reports {
        writeln!(text, "n = {}", r.n)?;
        for c in [&r.permutahedron, &r.fj2, &r.fj1] {
            writeln!(
                text,
                "  {:<9} valency {:>4}  quotient matches: {:<5}  λ₂(quotient) = {:.9}  λ₂(graph) = {}  {}",
                c.name,
                c.valency,
                c.quotient_matches,
                c.quotient_lambda2,
                c.graph_lambda2.map_or_else(|| "-".into(), |v| format!("{v:.9}")),
                c.outcome
            )?;
            csv_rows.push([
                r.n.to_string(),
                c.name.clone(),
                c.valency.to_string(),
                c.quotient_matches.to_string(),
                c.quotient_lambda2.to_string(),
                c.graph_lambda2.map_or_else(String::new, |v| v.to_string()),
                c.outcome.to_string(),
            ]);
        }
        writeln!(
            text,
            "  FJ2(n,2): perfect matching {}, {} components, λ₂ = {}",
            r.matching_is_perfect,
            r.matching_components,
            r.matching_lambda2
                .map_or_else(|| "-".into(), |v| format!("{v:.9}"))
        )?;
    }
    writeln!(text, "quotient inequalities (reported, not asserted):")?;
    writeln!(text, "{:>4} {:>12} {:>12}", "n", "margin B", "margin B(1)")?;
    for row in &inequalities {
        writeln!(
            text,
            "{:>4} {:>12.6} {:>12.6}",
            row.n, row.margin_b, row.margin_b1
        )?;
    }
    writeln!(text, "outcome: {outcome}")?;
    #[derive(Serialize)]
    struct FjOutput<'a> {
        schema_version: u32,
        reports: &'a [cayley_spectra::verify::FjReport],
        inequalities: &'a [cayley_spectra::verify::FjInequalityRow],
        outcome: Outcome,
    }
    let value = FjOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        reports: &reports,
        inequalities: &inequalities,
        outcome,
    };
    let csv = csv_string(
        &[
            "n",
            "graph",
            "valency",
            "quotient_matches",
            "quotient_lambda2",
            "graph_lambda2",
            "outcome",
        ],
        csv_rows,
    )?;
    Ok((Rendered::new(text, &value)?.with_csv(csv), outcome))
}

fn aldous(
    n: usize,
    tree: TreeKind,
    count: usize,
    seed: u64,
    config: &LanczosConfig,
) -> Result<(Rendered, Outcome)> {
    if !(2..=6).contains(&n) {
        bail!("the interchange oracle uses a full eigensolve; need 2 <= n <= 6, got {n}");
    }
    let (kind, runs) = match tree {
        TreeKind::Path => (TranspositionGraphKind::Path, 1),
        TreeKind::Star => (TranspositionGraphKind::Star, 1),
        TreeKind::Complete => (TranspositionGraphKind::Complete, 1),
        TreeKind::Random => (TranspositionGraphKind::RandomTree, count),
        TreeKind::RandomGraph => (TranspositionGraphKind::RandomGraph, count),
    };
    let mut checks = Vec::with_capacity(runs);
    for i in 0..runs as u64 {
        let t = transposition_set(n, &transposition_edges(kind, n, seed.wrapping_add(i)))?;
        checks.push(verify_aldous_oracle(&t, config)?);
    }
    let outcome = all_outcomes(checks.iter().map(|c| Outcome::from_bool(c.holds)));
    let mut text = String::new();
    for c in &checks {
        let edges: Vec<String> = c.edges.iter().map(|(p, q)| format!("{p}-{q}")).collect();
        writeln!(
            text,
            "gap {:.12}  connectivity {:.12}  {}  [{}]",
            c.spectral_gap,
            c.algebraic_connectivity,
            if c.holds { "pass" } else { "fail" },
            edges.join(" ")
        )?;
    }
    writeln!(text, "outcome: {outcome}")?;
    let csv = csv_string(
        &[
            "n",
            "edges",
            "spectral_gap",
            "algebraic_connectivity",
            "holds",
        ],
        checks.iter().map(|c| {
            let edges: Vec<String> = c.edges.iter().map(|(p, q)| format!("{p}-{q}")).collect();
            [
                c.n.to_string(),
                edges.join(" "),
                c.spectral_gap.to_string(),
                c.algebraic_connectivity.to_string(),
                c.holds.to_string(),
            ]
        }),
    )?;
    Ok((Rendered::new(text, &checks)?.with_csv(csv), outcome))
}

fn corollaries(ns: &[usize], config: &LanczosConfig) -> Result<(Rendered, Outcome)> {
    let report = verify_corollaries(ns, config)?;
    let mut text = format!(
        "{:>3} {:>16} {:>16} {:>16} {:>16}\n",
        "n", "λ₂ all", "gap all", "λ₂ star", "gap star"
    );
    for r in &report.rows {
        writeln!(
            text,
            "{:>3} {:>16.9} {:>16.9} {:>16.9} {:>16.9}  {}",
            r.n, r.complete_lambda2, r.complete_gap, r.star_lambda2, r.star_gap, r.outcome
        )?;
    }
    writeln!(text, "outcome: {}", report.outcome)?;
    let csv = csv_string(
        &[
            "n",
            "complete_lambda2",
            "complete_gap",
            "star_lambda2",
            "star_gap",
            "outcome",
        ],
        report.rows.iter().map(|r| {
            [
                r.n.to_string(),
                r.complete_lambda2.to_string(),
                r.complete_gap.to_string(),
                r.star_lambda2.to_string(),
                r.star_gap.to_string(),
                r.outcome.to_string(),
            ]
        }),
    )?;
    Ok((Rendered::new(text, &report)?.with_csv(csv), report.outcome))
}

fn examples(max_dim: usize, max_cycle: usize) -> Result<(Rendered, Outcome)> {
    let report = verify_example24(1..=max_dim, 4..=max_cycle)?;
    let mut text = String::from("hypercube pairs (λ₂ should be d − 1):\n");
    for r in &report.hypercubes {
        writeln!(
            text,
            "  d = {}  matching {:<9} λ₂ = {:.12}  {}",
            r.d,
            r.matching_seed
                .map_or_else(|| "identity".into(), |s| format!("seed {s}")),
            r.lambda2,
            if r.holds { "pass" } else { "fail" }
        )?;
    }
    let failing: Vec<&cayley_spectra::verify::PrismRow> =
        report.prisms.iter().filter(|r| !r.holds).collect();
    let worst = report
        .prisms
        .iter()
        .map(|r| (r.lambda2 - r.expected).abs())
        .fold(0.0f64, f64::max);
    writeln!(
        text,
        "prisms C_n x K2, n = 4..={max_cycle}: {} checked, {} off, largest deviation {worst:.2e}",
        report.prisms.len(),
        failing.len()
    )?;
    for r in failing {
        writeln!(
            text,
            "  n = {}: λ₂ = {} expected {}",
            r.n, r.lambda2, r.expected
        )?;
    }
    writeln!(text, "outcome: {}", report.outcome)?;
    let csv = csv_string(
        &[
            "graph",
            "parameter",
            "matching_seed",
            "lambda2",
            "expected",
            "holds",
        ],
        report
            .hypercubes
            .iter()
            .map(|r| {
                [
                    "hypercube_pair".to_string(),
                    r.d.to_string(),
                    r.matching_seed.map_or_else(String::new, |s| s.to_string()),
                    r.lambda2.to_string(),
                    r.expected.to_string(),
                    r.holds.to_string(),
                ]
            })
            .chain(report.prisms.iter().map(|r| {
                [
                    "prism".to_string(),
                    r.n.to_string(),
                    String::new(),
                    r.lambda2.to_string(),
                    r.expected.to_string(),
                    r.holds.to_string(),
                ]
            })),
    )?;
    Ok((Rendered::new(text, &report)?.with_csv(csv), report.outcome))
}

fn recursion(n: usize, family: &[FamilyIndex]) -> Result<(Rendered, Outcome)> {
    let families = if family.is_empty() {
        FamilyIndex::connected()
    } else {
        family.to_vec()
    };
    let reports = families
        .iter()
        .map(|&f| verify_recursion_identities(n, f))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome = all_outcomes(reports.iter().map(|r| Outcome::from_bool(r.holds)));
    let mut text = format!(
        "{:<16} {:>2} {:>2} {:>12} {:>14}  {}\n",
        "family", "m", "a", "differences", "isomorphisms", "holds"
    );
    for r in &reports {
        writeln!(
            text,
            "{:<16} {:>2} {:>2} {:>12} {:>14}  {}",
            r.family.to_string(),
            r.m,
            r.a,
            r.differences.len(),
            r.isomorphisms.len(),
            r.holds
        )?;
    }
    writeln!(text, "outcome: {outcome}")?;
    let csv = csv_string(
        &["family", "k", "i", "difference", "expected", "holds"],
        reports.iter().flat_map(|r| {
            r.differences.iter().map(move |d| {
                [
                    r.family.to_string(),
                    d.k.to_string(),
                    d.i.to_string(),
                    d.difference.to_string(),
                    d.expected.to_string(),
                    d.holds.to_string(),
                ]
            })
        }),
    )?;
    Ok((Rendered::new(text, &reports)?.with_csv(csv), outcome))
}
