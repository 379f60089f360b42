use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use diffavoid::bounds::{paley_reference, ratio, within, PALEY_REFERENCE_NOTE};
use diffavoid::{
    max_avoiding_set, paley_clique_number, power_residues, thm2_bound, verify_certificate,
    BoundReport, BoxSpec, CayleyGraph, Certificate, ForbiddenBox, FpVector, Prime, ReportOptions,
    SearchLimits, SearchStatus, Verdict, WitnessFile,
};
use serde::Serialize;
use thiserror::Error;

use crate::args::{BoundArgs, BoxArgs, Format, LimitArgs, SearchArgs, VerifyArgs};

pub const EXIT_VIOLATION: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] diffavoid::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Input(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn no_csv(format: Format) -> Result<()> {
    if format == Format::Csv {
        return Err(CliError::Input(
            "csv output is only available for bound tables".into(),
        ));
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output types serialize")
    );
}

fn threads_from_env() -> Result<usize> {
    match std::env::var("DIFFAVOID_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("DIFFAVOID_THREADS: not a count: '{s}'"))),
        Err(_) => Ok(1),
    }
}

fn limits(args: &LimitArgs) -> Result<SearchLimits> {
    if !args.time_limit.is_finite() || args.time_limit < 0.0 {
        return Err(CliError::Input(format!(
            "--time-limit must be a non-negative number of seconds, got {}",
            args.time_limit
        )));
    }
    Ok(SearchLimits {
        time: (args.time_limit > 0.0).then(|| Duration::from_secs_f64(args.time_limit)),
        node_budget: args.node_budget,
        threads: threads_from_env()?,
        seed: args.seed,
        ..SearchLimits::default()
    })
}

fn forbidden_box(p: Prime, args: &BoxArgs) -> Result<Option<ForbiddenBox>> {
    Ok(match (args.k, &args.k_list) {
        (Some(k), _) => Some(power_residues(p, k)?),
        (None, Some(list)) => Some(ForbiddenBox::new(p, list.iter().copied())?),
        (None, None) => None,
    })
}

fn write_dimacs(g: &CayleyGraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    g.write_dimacs(&mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn joined(items: &[u32]) -> String {
    items
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn point(v: &FpVector) -> String {
    if v.dim() == 1 {
        v.coords()[0].to_string()
    } else {
        format!("({})", joined(v.coords()))
    }
}

#[derive(Serialize)]
struct ResiduesOutput {
    p: u32,
    k: u64,
    d: u64,
    #[serde(rename = "K")]
    members: Vec<u32>,
    t: usize,
    formula: u64,
}

pub fn residues(p: u64, k: u64, format: Format) -> Result<u8> {
    no_csv(format)?;
    let p = Prime::new(p)?;
    let kbox = power_residues(p, k)?;
    let d = diffavoid::zp::gcd(k, p.get() as u64 - 1);
    let out = ResiduesOutput {
        p: p.get(),
        k,
        d,
        members: kbox.members().to_vec(),
        t: kbox.t(),
        formula: diffavoid::zp::residue_count_formula(p, k),
    };
    match format {
        Format::Json => print_json(&out),
        _ => {
            println!("K = {{{}}}", joined(&out.members));
            println!("t = {}", out.t);
            println!("d = gcd({k}, {}) = {d}", p.get() - 1);
            println!("formula (p-1)/d + 1 = {}", out.formula);
        }
    }
    Ok(0)
}

pub fn bound(args: &BoundArgs) -> Result<u8> {
    let opts = ReportOptions {
        green: args.green.then_some(args.log_base),
        paley: args.paley_ref,
    };
    let specs: Vec<BoxSpec> = if args.k.is_empty() {
        args.t.iter().map(|&t| BoxSpec::Size(t)).collect()
    } else {
        args.k.iter().map(|&k| BoxSpec::Exponent(k)).collect()
    };
    let mut rows = Vec::new();
    for &p in &args.p {
        let p = Prime::new(p)?;
        for &spec in &specs {
            for &n in &args.n {
                rows.push(BoundReport::compute(p, n, spec, opts)?);
            }
        }
    }
    match args.format {
        Format::Json if rows.len() == 1 => print_json(&rows[0]),
        Format::Json => print_json(&rows),
        Format::Csv => print_csv(&rows),
        Format::Plain => {
            for r in &rows {
                print!("p={} n={}", r.p, r.n);
                if let Some(k) = r.k {
                    print!(" k={k}");
                }
                print!(" t={} thm2={}", r.t, r.thm2);
                if let Some(c) = &r.cor3 {
                    print!(" cor3={c}");
                }
                if let Some(g) = &r.green_threshold {
                    print!(" green_threshold={} (log {})", g.threshold, g.log_base);
                }
                if let Some(pr) = &r.paley_reference {
                    print!(" paley_reference={} ({})", pr.value, pr.note);
                }
                println!();
            }
        }
    }
    Ok(0)
}

fn print_csv(rows: &[BoundReport]) {
    println!("p,n,k,t,d,thm2,cor3,green_log_base,green_c,green_threshold,paley_reference");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        let g = r.green_threshold.as_ref();
        println!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.p,
            r.n,
            opt(r.k.map(|k| k.to_string())),
            r.t,
            opt(r.d.map(|d| d.to_string())),
            r.thm2,
            opt(r.cor3.as_ref().map(|c| c.to_string())),
            opt(g.map(|g| g.log_base.to_string())),
            opt(g.map(|g| g.c.to_string())),
            opt(g.map(|g| g.threshold.to_string())),
            opt(r.paley_reference.as_ref().map(|x| x.value.to_string())),
        );
    }
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    p: u32,
    n: usize,
    #[serde(rename = "K")]
    members: &'a [u32],
    #[serde(rename = "A")]
    witness: Vec<&'a [u32]>,
    max_size: usize,
    status: SearchStatus,
    nodes: u64,
    elapsed_ms: f64,
    bound: String,
    ratio: f64,
    certificate: &'a Certificate,
}

pub fn search(args: &SearchArgs) -> Result<u8> {
    no_csv(args.format)?;
    let p = Prime::new(args.p)?;
    let kbox = forbidden_box(p, &args.forbidden)?
        .ok_or_else(|| CliError::Input("one of --k or --K is required".into()))?;
    let limits = limits(&args.limits)?;
    let g = CayleyGraph::new(p, args.n, &kbox, args.vertex_cap)?;
    if let Some(path) = &args.dimacs {
        write_dimacs(&g, path)?;
    }
    let r = max_avoiding_set(&g, &limits);
    let bound = thm2_bound(p, kbox.t() as u64, args.n as u32)?;
    assert!(
        within(r.max_size as u64, &bound),
        "search found {} points, above the bound {bound}",
        r.max_size
    );
    let cert = verify_certificate(&r.witness, p, args.n, &kbox)?;
    assert!(cert.is_valid(), "search witness failed verification");

    if let Some(path) = &args.witness_out {
        let file = WitnessFile::new(&kbox, args.n, &r.witness);
        let text = serde_json::to_string_pretty(&file).expect("witness serializes");
        std::fs::write(path, text + "\n").map_err(io_err(path))?;
    }

    let out = SearchOutput {
        p: p.get(),
        n: args.n,
        members: kbox.members(),
        witness: r.witness.iter().map(FpVector::coords).collect(),
        max_size: r.max_size,
        status: r.status,
        nodes: r.nodes_explored,
        elapsed_ms: millis(r.elapsed),
        bound: bound.to_string(),
        ratio: ratio(r.max_size as u64, &bound),
        certificate: &cert,
    };
    match args.format {
        Format::Json => print_json(&out),
        _ => {
            let status = match r.status {
                SearchStatus::Exact => "exact",
                SearchStatus::LowerBoundOnly => "lower bound only",
            };
            println!("K = {{{}}}", joined(kbox.members()));
            println!("max = {} ({status})", r.max_size);
            println!("bound = {bound}");
            println!("ratio = {:.6}", out.ratio);
            let pts: Vec<String> = r.witness.iter().map(point).collect();
            println!("witness = {{{}}}", pts.join(", "));
            println!(
                "certificate = valid, rank {}",
                cert.rank.map_or("-".into(), |x| x.to_string())
            );
            println!("nodes = {}, elapsed = {:.3?}", r.nodes_explored, r.elapsed);
        }
    }
    Ok(0)
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    no_csv(args.format)?;
    let path = args.file.as_path();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let file: WitnessFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })?;

    let p = args
        .p
        .or(file.p)
        .ok_or_else(|| CliError::Input("p is missing (file or --p)".into()))?;
    let p = Prime::new(p)?;
    let n = args
        .n
        .or(file.dim())
        .ok_or_else(|| CliError::Input("n is missing (file or --n)".into()))?;
    let kbox = match forbidden_box(p, &args.forbidden)? {
        Some(k) => k,
        None => {
            let list = file
                .k
                .as_ref()
                .ok_or_else(|| CliError::Input("K is missing (file, --k or --K)".into()))?;
            ForbiddenBox::new(p, list.iter().copied())?
        }
    };
    let set = file.vectors(p, n)?;
    let cert = verify_certificate(&set, p, n, &kbox)?;

    match args.format {
        Format::Json => print_json(&cert),
        _ => match &cert.verdict {
            Verdict::Valid => println!(
                "valid: |A| = {}, rank {}, bound {}, diagonal value {}",
                cert.set.len(),
                cert.rank.map_or("-".into(), |r| r.to_string()),
                cert.bound,
                cert.diagonal_value
            ),
            Verdict::Violation(a, b) => {
                println!("violation: {} - {} lies in K^{n}", point(a), point(b))
            }
        },
    }
    Ok(if cert.is_valid() { 0 } else { EXIT_VIOLATION })
}

#[derive(Serialize)]
struct PaleyOutput {
    p: u32,
    omega: usize,
    status: SearchStatus,
    clique: Vec<u32>,
    reference: f64,
    reference_note: &'static str,
    exceeds_reference: bool,
    nodes: u64,
    elapsed_ms: f64,
}

pub fn paley(p: u64, limit_args: &LimitArgs, dimacs: Option<&Path>, format: Format) -> Result<u8> {
    no_csv(format)?;
    let p = Prime::new(p)?;
    let reference = paley_reference(p)?;
    let limits = limits(limit_args)?;
    if let Some(path) = dimacs {
        let g = diffavoid::build_graph(p, 1, &power_residues(p, 2)?)?;
        write_dimacs(&g, path)?;
    }
    let r = paley_clique_number(p, &limits)?;
    // The solver returns a set with no residue differences; scaling by a
    // non-residue turns it into a clique of the Paley graph itself.
    let qr = power_residues(p, 2)?;
    let nu = (2..p.get())
        .find(|&x| !qr.contains(x))
        .expect("p > 2 has a non-residue");
    let mut clique: Vec<u32> = r
        .witness_ranks
        .iter()
        .map(|&x| p.mul(x as u32, nu))
        .collect();
    clique.sort_unstable();
    let out = PaleyOutput {
        p: p.get(),
        omega: r.max_size,
        status: r.status,
        clique,
        reference,
        reference_note: PALEY_REFERENCE_NOTE,
        exceeds_reference: r.max_size as f64 > reference,
        nodes: r.nodes_explored,
        elapsed_ms: millis(r.elapsed),
    };
    match format {
        Format::Json => print_json(&out),
        _ => {
            let qualifier = if r.is_exact() { "" } else { " (lower bound)" };
            println!("omega({}) = {}{qualifier}", p.get(), r.max_size);
            println!("clique = {{{}}}", joined(&out.clique));
            println!("reference sqrt(p)-1 = {reference:.6} ({PALEY_REFERENCE_NOTE})");
        }
    }
    Ok(0)
}
