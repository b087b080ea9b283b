//! Command-line surface: posets, oracle verification, cohomology reports,
//! E2 cells, stability scans, character tables, and Smith normal forms.
//! Every output is exact and byte-reproducible; JSON payloads carry a schema
//! version and the resolved case.

use arrstab::characters::char_table;
use arrstab::linalg::{snf, IMat};
use arrstab::oracle::verify_layer_model;
use arrstab::poset::LayerPoset;
use arrstab::spectral::{
    acting_group, betti, e2_cell, elliptic_h1, h1_discrepancy_note, printed_h1_dimension,
    stability_scan, type_a_elliptic_injectivity,
};
use arrstab::{Error, GroundSpace, RootFamily, SpaceKind};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "arrstab",
    version,
    about = "Exact layers, characters, and stability scans for root-system arrangements"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the ranked poset of layers
    Poset {
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the combinatorial poset against the integer-lattice oracle
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology of the complement: dimension, character, decomposition
    H {
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One bidegree of the second Leray page with its induced pieces
    E2 {
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representation-stability scan over a window of sizes
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        i: usize,
        /// Window `a..b` (inclusive) or a single size
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact character table of S_n (family A) or W_n (families B, C, D)
    CharTable {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smith normal form with unimodular certificates; matrix JSON on stdin
    Snf {
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn envelope(
    family: RootFamily,
    space: Option<SpaceKind>,
    config: serde_json::Value,
    body: serde_json::Value,
) -> String {
    let case = match space {
        Some(s) => serde_json::json!({"family": family.name(), "space": s.name()}),
        None => serde_json::json!({"family": family.name()}),
    };
    serde_json::json!({
        "schema_version": 1,
        "paper_case": case,
        "config": config,
        "result": body,
    })
    .to_string()
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Invalid(format!("cannot write output: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn require_positive(n: usize) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::Range("n must be at least 1".into()));
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<(usize, usize), Error> {
    if let Some((a, b)) = s.split_once("..") {
        let start = a.trim().parse().map_err(|_| Error::Invalid(format!("bad range `{s}`")))?;
        let end = b.trim().parse().map_err(|_| Error::Invalid(format!("bad range `{s}`")))?;
        Ok((start, end))
    } else {
        let n = s.trim().parse().map_err(|_| Error::Invalid(format!("bad size `{s}`")))?;
        Ok((n, n))
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Poset { family, space, n, max_rank, format, out } => {
            require_positive(n)?;
            let family = RootFamily::parse(&family)?;
            let space = GroundSpace::new(SpaceKind::parse(&space)?);
            let poset = LayerPoset::build(family, &space, n, max_rank);
            let config = serde_json::json!({
                "family": family.name(), "space": space.kind.name(), "n": n,
                "max_rank": max_rank, "format": format,
            });
            let text = match format.as_str() {
                "json" => envelope(family, Some(space.kind), config, poset.to_json()),
                "dot" => poset.export_dot(),
                "table" => {
                    let mut lines = Vec::new();
                    for (i, p) in poset.elements.iter().enumerate() {
                        lines.push(format!("rank {}  {}", poset.rank_of[i], p));
                    }
                    lines.join("\n")
                }
                _ => return Err(Error::Invalid(format!("unknown format `{format}`"))),
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { family, space, n, max_rank, format, out } => {
            require_positive(n)?;
            let family = RootFamily::parse(&family)?;
            let space = GroundSpace::new(SpaceKind::parse(&space)?);
            let bound = if space.kind == SpaceKind::Linear { 4 } else { 6 };
            if n > bound {
                return Err(Error::Range(format!(
                    "oracle verification is desk-scale; n ≤ {bound} for this space"
                )));
            }
            if n > 4 && max_rank.is_none_or(|r| r > 2) {
                return Err(Error::Range(
                    "full posets are verified for n ≤ 4; pass --max-rank ≤ 2 beyond".into(),
                ));
            }
            let report = verify_layer_model(family, &space, n, max_rank)?;
            let config = serde_json::json!({
                "family": family.name(), "space": space.kind.name(), "n": n,
                "max_rank": max_rank, "format": format,
            });
            let text = match format.as_str() {
                "json" => envelope(family, Some(space.kind), config, report.to_json()),
                _ => format!(
                    "{}: {} ({} elements)",
                    if report.pass { "pass" } else { "FAIL" },
                    report.detail,
                    report.combinatorial_size
                ),
            };
            emit(&out, text)?;
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::H { family, space, i, n, format, out } => {
            require_positive(n)?;
            let family = RootFamily::parse(&family)?;
            let space = GroundSpace::new(SpaceKind::parse(&space)?);
            let (dim, ch) = match space.kind {
                SpaceKind::Elliptic if i >= 2 => {
                    return Err(Error::Unsupported("elliptic degree ≥ 2".into()));
                }
                SpaceKind::Elliptic if i == 1 => elliptic_h1(n, family)?,
                SpaceKind::Elliptic => {
                    // degree 0 is one trivial representation for any space
                    let ch = arrstab::characters::ClassFunction::trivial(acting_group(family, n));
                    (1, ch)
                }
                _ => betti(i, n, family, &space)?,
            };
            let decomposition: Vec<(String, usize)> =
                ch.decompose()?.into_iter().map(|(irr, m)| (irr.to_string(), m)).collect();
            let note = if i == 1 { h1_discrepancy_note(family, space.kind, n) } else { None };
            let printed = if i == 1 {
                serde_json::json!(printed_h1_dimension(family, space.kind, n))
            } else {
                serde_json::Value::Null
            };
            let body = serde_json::json!({
                "i": i,
                "n": n,
                "dim": dim,
                "character": ch.to_json(),
                "decomposition": decomposition
                    .iter()
                    .map(|(name, m)| serde_json::json!({"irr": name, "mult": m}))
                    .collect::<Vec<_>>(),
                "printed_table_dim": printed,
                "discrepancy": note,
            });
            let config = serde_json::json!({
                "family": family.name(), "space": space.kind.name(), "i": i, "n": n,
                "format": format,
            });
            let text = match format.as_str() {
                "json" => envelope(family, Some(space.kind), config, body),
                _ => {
                    let mut lines = vec![format!("dim H^{i} = {dim}")];
                    for (name, m) in &decomposition {
                        lines.push(format!("  {name} × {m}"));
                    }
                    if let Some(d) = note {
                        lines.push(format!("note: {d}"));
                    }
                    lines.join("\n")
                }
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::E2 { family, space, p, q, n, format, out } => {
            require_positive(n)?;
            let family = RootFamily::parse(&family)?;
            let space = GroundSpace::new(SpaceKind::parse(&space)?);
            let cell = e2_cell(p, q, n, family, &space)?;
            let config = serde_json::json!({
                "family": family.name(), "space": space.kind.name(), "p": p, "q": q,
                "n": n, "format": format,
            });
            let text = match format.as_str() {
                "json" => envelope(family, Some(space.kind), config, cell.to_json()),
                _ => {
                    let mut lines = vec![format!("dim E2^{{{p},{q}}}({n}) = {}", cell.dim)];
                    for piece in &cell.pieces {
                        lines.push(format!(
                            "  λ = {}, r = {}, α = {:?}, k = {}, induced dim {}",
                            piece.lambda,
                            piece.r,
                            piece.alpha,
                            piece.k,
                            piece.induced_dim(n)
                        ));
                    }
                    lines.join("\n")
                }
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Scan { family, space, i, n, format, out } => {
            let family = RootFamily::parse(&family)?;
            let space = GroundSpace::new(SpaceKind::parse(&space)?);
            let (start, end) = parse_range(&n)?;
            require_positive(start)?;
            if end < i + 1 {
                return Err(Error::Range(format!(
                    "scan window must reach past i; need end ≥ {}",
                    i + 1
                )));
            }
            let report = stability_scan(i, family, &space, start, end)?;
            // the improved type A elliptic range rests on the injectivity
            // certificate; surface it alongside the scan
            let injectivity = if family == RootFamily::A && space.kind == SpaceKind::Elliptic {
                Some(type_a_elliptic_injectivity(end.clamp(2, 6), 1)?.injective)
            } else {
                None
            };
            let config = serde_json::json!({
                "family": family.name(), "space": space.kind.name(), "i": i,
                "n_range": [start, end], "format": format,
            });
            let text = match format.as_str() {
                "json" => {
                    let mut body = report.to_json();
                    if let Some(inj) = injectivity {
                        body["type_a_elliptic_injective"] = serde_json::json!(inj);
                    }
                    envelope(family, Some(space.kind), config, body)
                }
                _ => {
                    let mut lines = vec![format!(
                        "H^{i} for {}/{} over n = {}..{}",
                        family.name(),
                        space.kind.name(),
                        start,
                        end
                    )];
                    lines.push(format!("dims: {:?}", report.dims));
                    for (name, seq) in &report.multiplicities {
                        lines.push(format!("  {name}: {seq:?}"));
                    }
                    lines.push(format!(
                        "onset {} (bound {}); {}",
                        report.onset, report.predicted_bound, report.note
                    ));
                    lines.push(format!(
                        "dim polynomial degree {} (bound 2i = {})",
                        report.dim_poly_degree,
                        2 * i
                    ));
                    lines.join("\n")
                }
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CharTable { family, n, format, out } => {
            let family = RootFamily::parse(&family)?;
            let group = acting_group(family, n);
            let table = char_table(group);
            let text = match format.as_str() {
                "json" => {
                    let body = serde_json::json!({
                        "group": group.name(),
                        "n": n,
                        "classes": table.classes.iter().map(|c| c.key()).collect::<Vec<_>>(),
                        "class_sizes": table
                            .class_sizes
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>(),
                        "irreducibles": table
                            .irreducibles
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>(),
                        "values": table
                            .values
                            .iter()
                            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    });
                    let config = serde_json::json!({
                        "family": family.name(), "n": n, "format": format,
                    });
                    envelope(family, None, config, body)
                }
                _ => {
                    let mut lines = Vec::new();
                    let header =
                        table.classes.iter().map(|c| c.key()).collect::<Vec<_>>().join("\t");
                    lines.push(format!("irr\\class\t{header}"));
                    for (idx, irr) in table.irreducibles.iter().enumerate() {
                        let row = table.values[idx]
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join("\t");
                        lines.push(format!("{irr}\t{row}"));
                    }
                    lines.join("\n")
                }
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Snf { format, out } => {
            let mut input = String::new();
            std::io::stdin()
                .read_to_string(&mut input)
                .map_err(|e| Error::Invalid(format!("cannot read stdin: {e}")))?;
            let value: serde_json::Value = serde_json::from_str(&input)
                .map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
            let rows = value
                .as_array()
                .ok_or_else(|| Error::Invalid("matrix JSON must be an array of arrays".into()))?;
            let mut parsed: Vec<Vec<BigInt>> = Vec::new();
            let mut width = None;
            for row in rows {
                let entries = row
                    .as_array()
                    .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?;
                let mut out_row = Vec::new();
                for e in entries {
                    let v = if let Some(x) = e.as_i64() {
                        BigInt::from(x)
                    } else if let Some(s) = e.as_str() {
                        s.parse::<BigInt>()
                            .map_err(|_| Error::Invalid("bad integer entry".into()))?
                    } else {
                        return Err(Error::Invalid("entries must be integers".into()));
                    };
                    out_row.push(v);
                }
                if *width.get_or_insert(out_row.len()) != out_row.len() {
                    return Err(Error::Invalid("ragged matrix".into()));
                }
                parsed.push(out_row);
            }
            if parsed.is_empty() {
                return Err(Error::Invalid("empty matrix".into()));
            }
            let m = IMat::from_rows(parsed);
            let s = snf(&m);
            let body = serde_json::json!({
                "u": s.u.to_json(),
                "d": s.d.to_json(),
                "v": s.v.to_json(),
                "invariant_factors": s
                    .invariant_factors()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>(),
                "certified": "U·M·V = D with |det U| = |det V| = 1",
            });
            let text = match format.as_str() {
                "json" => serde_json::json!({"schema_version": 1, "result": body}).to_string(),
                _ => format!(
                    "invariant factors: {:?}",
                    s.invariant_factors().iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ),
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
