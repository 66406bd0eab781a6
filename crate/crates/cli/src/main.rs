//! `semmap`: validate, classify, cover and compare polyhedral maps from the
//! command line. Text reports by default, `--json` for a stable document.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use semmap_core::arith::{enumerate_types, EnumerationParams, TypeCensusEntry};
use semmap_core::catalog::{self, Provenance};
use semmap_core::classify::{
    anchor_size, anchored_normal_form, block_certificate, blocks, classify_type, ClassifyOptions,
    Strategy, DEFAULT_BUDGET,
};
use semmap_core::codec::{parse_map, serialize_map, MapDocument};
use semmap_core::covering::{admissible_cycles, build_cover, side_swap_symmetry, CycleSpec};
use semmap_core::symmetry::{
    are_isomorphic, automorphism_group, canonical_certificate, canonical_form, identify_group,
    vertex_orbits,
};
use semmap_core::{Exec, PolyhedralMap, VertexType};

#[derive(Parser)]
#[command(
    name = "semmap",
    version,
    about = "Polyhedral semi-equivelar maps on closed surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a JSON document instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    /// Omit the timestamp header from text reports.
    #[arg(long, global = true)]
    no_banner: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a map file describes a polyhedral map.
    Validate { map: String },
    /// Vertex type, Euler characteristic and orientability.
    Type { map: String },
    /// Automorphism group.
    Aut { map: String },
    /// Decide whether two maps are isomorphic (exit 1 if not).
    Iso { a: String, b: String },
    /// Vertex orbits under the automorphism group.
    Orbits { map: String },
    /// Census of candidate (n, type) pairs for a negative Euler characteristic.
    Enumerate(EnumerateArgs),
    /// Short cycles along which the map can be cut open.
    Cycles {
        map: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// m-fold cyclic cover along a cycle.
    Cover(CoverArgs),
    /// All maps of a type on a surface, up to isomorphism.
    Classify(ClassifyArgs),
    /// Blocks and the block-cycle certificate with respect to g-gons.
    Blocks {
        map: String,
        #[arg(long, default_value_t = 10)]
        g: usize,
    },
    /// List the bundled reference maps, or print one.
    Catalog {
        name: Option<String>,
        /// Write the entry's map file here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    /// Keep the statically excluded types.
    #[arg(long, alias = "no-paper-exclusions")]
    no_exclusions: bool,
    /// Also apply the (3,q,3,q) patch bound.
    #[arg(long)]
    patch_bound: bool,
    #[arg(long, default_value_t = 12)]
    min_vertices: u64,
    #[arg(long, default_value_t = 3)]
    min_face_count: u64,
    /// Also list rejected types with the filter that removed them.
    #[arg(long)]
    rejected: bool,
}

#[derive(Args)]
struct CoverArgs {
    map: String,
    /// Comma-separated vertex labels, e.g. 0,6,10.
    #[arg(long)]
    cycle: CycleSpec,
    #[arg(long)]
    m: usize,
    /// Compute the automorphism group of the cover by brute force.
    #[arg(long)]
    aut: bool,
    /// Write the cover as a map file.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long = "type")]
    vertex_type: VertexType,
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    #[arg(long, conflicts_with = "generic")]
    anchored: bool,
    #[arg(long)]
    generic: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write each representative as a map file into this directory.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
}

/// A finished command: its report, and whether the answer was negative.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            ok: true,
        }
    }
}

/// A domain error: bad input file, failed search, unknown name.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("json")
                );
            } else {
                if !cli.no_banner {
                    let t = SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map_or(0, |d| d.as_secs());
                    println!("# semmap {} at {t}", env!("CARGO_PKG_VERSION"));
                }
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "error": msg })).expect("json")
                );
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { map } => validate(map),
        Command::Type { map } => type_report(&load(map)?),
        Command::Aut { map } => aut(&load(map)?),
        Command::Iso { a, b } => iso(&load(a)?, &load(b)?),
        Command::Orbits { map } => orbits(&load(map)?),
        Command::Enumerate(args) => enumerate(args),
        Command::Cycles { map, max_len } => cycles(&load(map)?, *max_len),
        Command::Cover(args) => cover(args),
        Command::Classify(args) => classify(args),
        Command::Blocks { map, g } => block_report(&load(map)?, *g),
        Command::Catalog { name, out } => catalog_report(name.as_deref(), out.as_ref()),
    }
}

/// A map file path, or `catalog:NAME` for a bundled map.
fn load(spec: &str) -> Result<PolyhedralMap, Failure> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return Ok(catalog::get(name)?.map);
    }
    let text = fs::read_to_string(spec).map_err(|e| Failure(format!("{spec}: {e}")))?;
    let (_, map) = parse_map(&text).map_err(|e| Failure(format!("{spec}: {e}")))?;
    Ok(map)
}

fn type_string(map: &PolyhedralMap) -> Option<String> {
    map.semi_equivelar_type().map(|t| t.to_string())
}

fn face_vector_string(map: &PolyhedralMap) -> String {
    let parts: Vec<String> = map
        .face_vector()
        .iter()
        .map(|(s, c)| format!("{s}-gons: {c}"))
        .collect();
    parts.join(", ")
}

fn validate(spec: &str) -> Result<Report, Failure> {
    let map = if spec.starts_with("catalog:") {
        load(spec)
    } else {
        let text = fs::read_to_string(spec).map_err(|e| Failure(format!("{spec}: {e}")))?;
        parse_map(&text)
            .map(|(_, m)| m)
            .map_err(|e| Failure(e.to_string()))
    };
    Ok(match map {
        Ok(m) => Report::ok(
            format!(
                "valid polyhedral map: {} vertices, {} edges, {} faces, χ={}\n",
                m.num_vertices(),
                m.num_edges(),
                m.num_faces(),
                m.euler_characteristic()
            ),
            json!({
                "valid": true,
                "vertices": m.num_vertices(),
                "edges": m.num_edges(),
                "faces": m.num_faces(),
                "chi": m.euler_characteristic(),
            }),
        ),
        Err(Failure(msg)) => Report {
            text: format!("invalid: {msg}\n"),
            json: json!({ "valid": false, "error": msg }),
            ok: false,
        },
    })
}

fn type_report(map: &PolyhedralMap) -> Result<Report, Failure> {
    let t = type_string(map);
    let orientable = map.is_orientable();
    let text = format!(
        "{} χ={} n={} {}\nf-vector ({}, {}, {}); {}\n",
        t.as_deref().unwrap_or("not semi-equivelar"),
        map.euler_characteristic(),
        map.num_vertices(),
        if orientable {
            "orientable"
        } else {
            "non-orientable"
        },
        map.num_vertices(),
        map.num_edges(),
        map.num_faces(),
        face_vector_string(map),
    );
    Ok(Report::ok(
        text,
        json!({
            "type": t,
            "chi": map.euler_characteristic(),
            "vertices": map.num_vertices(),
            "edges": map.num_edges(),
            "faces": map.num_faces(),
            "orientable": orientable,
            "face_vector": map.face_vector(),
        }),
    ))
}

fn aut(map: &PolyhedralMap) -> Result<Report, Failure> {
    let group = automorphism_group(map, Exec::default());
    let id = identify_group(&group);
    let gens: Vec<String> = group
        .generators()
        .iter()
        .map(|g| g.to_cycle_string(map.labels()))
        .collect();
    let transitive = vertex_orbits(map.num_vertices(), &group).len() == 1;
    let mut text = format!("|Aut|={} {id}\n", group.order());
    for g in &gens {
        let _ = writeln!(text, "generator {g}");
    }
    let _ = writeln!(
        text,
        "vertex-transitive: {}",
        if transitive { "yes" } else { "no" }
    );
    Ok(Report::ok(
        text,
        json!({
            "order": group.order(),
            "group": id.to_string(),
            "generators": gens,
            "vertex_transitive": transitive,
        }),
    ))
}

fn iso(a: &PolyhedralMap, b: &PolyhedralMap) -> Result<Report, Failure> {
    let (ca, cb) = (canonical_certificate(a), canonical_certificate(b));
    match are_isomorphic(a, b) {
        Some(pairs) => {
            let body: Vec<String> = pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
            Ok(Report::ok(
                format!(
                    "isomorphic\ncertificate {}\nmap {}\n",
                    ca.fingerprint(),
                    body.join(" ")
                ),
                json!({ "isomorphic": true, "certificates": [ca.fingerprint(), cb.fingerprint()], "mapping": pairs }),
            ))
        }
        None => Ok(Report {
            text: format!(
                "not isomorphic\ncertificates {} {}\n",
                ca.fingerprint(),
                cb.fingerprint()
            ),
            json: json!({ "isomorphic": false, "certificates": [ca.fingerprint(), cb.fingerprint()], "mapping": null }),
            ok: false,
        }),
    }
}

fn orbits(map: &PolyhedralMap) -> Result<Report, Failure> {
    let group = automorphism_group(map, Exec::default());
    let orbits: Vec<Vec<u32>> = vertex_orbits(map.num_vertices(), &group)
        .into_iter()
        .map(|o| o.into_iter().map(|v| map.label(v)).collect())
        .collect();
    let mut text = format!("{} orbit(s) under |Aut|={}\n", orbits.len(), group.order());
    for o in &orbits {
        let body: Vec<String> = o.iter().map(u32::to_string).collect();
        let _ = writeln!(text, "{{{}}}", body.join(","));
    }
    Ok(Report::ok(text, json!({ "orbits": orbits })))
}

fn census_row(e: &TypeCensusEntry) -> String {
    let fv: Vec<String> = e
        .face_vector
        .iter()
        .map(|(s, c)| format!("{s}:{c}"))
        .collect();
    format!(
        "{:>4}  {:<24} {}",
        e.n,
        e.vertex_type.to_string(),
        fv.join(" ")
    )
}

fn enumerate(args: &EnumerateArgs) -> Result<Report, Failure> {
    if args.chi >= 0 {
        return Err(Failure(format!(
            "the census needs a negative Euler characteristic, got {}",
            args.chi
        )));
    }
    let params = EnumerationParams {
        chi: args.chi,
        min_vertices: args.min_vertices,
        min_face_count: args.min_face_count,
        apply_exclusions: !args.no_exclusions,
        apply_patch_bound: args.patch_bound,
    };
    let census = enumerate_types(&params, Exec::default());
    let mut text = format!("{:>4}  {:<24} face vector\n", "n", "type");
    for e in &census.accepted {
        let _ = writeln!(text, "{}", census_row(e));
    }
    let _ = writeln!(text, "{} type(s) for χ={}", census.accepted.len(), args.chi);
    if args.rejected {
        let _ = writeln!(text, "rejected:");
        for e in &census.rejected {
            let reason = e
                .rejection
                .as_ref()
                .map(|r| r.to_string())
                .unwrap_or_default();
            let _ = writeln!(text, "{}  {reason}", census_row(e));
        }
    }
    let mut doc = json!({ "chi": args.chi, "params": params, "accepted": census.accepted });
    if args.rejected {
        doc["rejected"] = json!(census.rejected);
    }
    Ok(Report::ok(text, doc))
}

fn cycles(map: &PolyhedralMap, max_len: usize) -> Result<Report, Failure> {
    let found = admissible_cycles(map, max_len, Exec::default());
    let mut text = format!(
        "{} admissible cycle(s) of length ≤ {max_len}\n",
        found.len()
    );
    let mut rows = Vec::new();
    for c in &found {
        let swap = side_swap_symmetry(map, c)?.is_some();
        let _ = writeln!(text, "{c}{}", if swap { "  side swap" } else { "" });
        rows.push(json!({ "cycle": c, "side_swap": swap }));
    }
    Ok(Report::ok(
        text,
        json!({ "max_len": max_len, "cycles": rows }),
    ))
}

fn cover(args: &CoverArgs) -> Result<Report, Failure> {
    let base = load(&args.map)?;
    let mut report = build_cover(&base, &args.cycle, args.m)?;
    let group = args.aut.then(|| report.verify(Exec::default()));
    let c = &report.cover;
    let t = type_string(c);
    let orientable = c.is_orientable();
    let mut text =
        format!(
        "{}-fold cover along {}\nn={} χ={} {} {}\ndeck rotation of order {}\npredicted group {}\n",
        args.m,
        args.cycle,
        c.num_vertices(),
        c.euler_characteristic(),
        t.as_deref().unwrap_or("not semi-equivelar"),
        if orientable { "orientable" } else { "non-orientable" },
        report.deck_rotation.order(),
        report.predicted_group,
    );
    let mut doc = json!({
        "m": args.m,
        "cycle": args.cycle,
        "vertices": c.num_vertices(),
        "chi": c.euler_characteristic(),
        "type": t,
        "orientable": orientable,
        "deck_rotation_order": report.deck_rotation.order(),
        "predicted_group": report.predicted_group.to_string(),
        "map": MapDocument::from_map(c, None),
    });
    let mut ok = true;
    if let (Some(group), Some(id)) = (&group, report.verified_group) {
        let transitive = vertex_orbits(c.num_vertices(), group).len() == 1;
        let _ = writeln!(
            text,
            "|Aut|={} {id}\nvertex-transitive: {}",
            group.order(),
            if transitive { "yes" } else { "no" }
        );
        if id != report.predicted_group {
            ok = false;
            let _ = writeln!(text, "computed group differs from the prediction");
        }
        doc["aut"] = json!({ "order": group.order(), "group": id.to_string(), "vertex_transitive": transitive });
    }
    if let Some(path) = &args.emit {
        fs::write(path, serialize_map(c, None))
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(Report {
        text,
        json: doc,
        ok,
    })
}

/// `[3^4,10]` -> `3-4_10`, the suffix used in representative names.
fn type_slug(t: &VertexType) -> String {
    let parts: Vec<String> = t
        .runs()
        .iter()
        .map(|&(s, c)| {
            if c > 1 {
                format!("{s}-{c}")
            } else {
                s.to_string()
            }
        })
        .collect();
    parts.join("_")
}

fn classify(args: &ClassifyArgs) -> Result<Report, Failure> {
    let strategy = match (args.anchored, args.generic) {
        (true, _) => Strategy::Anchored,
        (_, true) => Strategy::Generic,
        _ => Strategy::Auto,
    };
    let opts = ClassifyOptions {
        strategy,
        budget: args.budget,
        exec: Exec::default(),
    };
    let t = &args.vertex_type;
    let result = classify_type(t, args.chi, &opts)?;
    let anchor = anchor_size(t).map(|p| p as usize);
    let slug = type_slug(t);
    let mut text = format!(
        "{t} on χ={}: {} map(s), {:?} search, {} nodes\n",
        args.chi,
        result.maps.len(),
        result.strategy,
        result.nodes
    );
    let mut rows = Vec::new();
    for (i, (map, cert)) in result.maps.iter().zip(&result.certificates).enumerate() {
        let name = format!("K{}_{slug}", i + 1);
        let normal = anchor
            .and_then(|p| anchored_normal_form(map, p))
            .unwrap_or_else(|| canonical_form(map));
        let orientable = normal.is_orientable();
        let bc = anchor
            .filter(|p| p % 2 == 0)
            .map(|p| block_certificate(&normal, p).to_string());
        let _ = writeln!(
            text,
            "{name}  {}  {}{}",
            cert.fingerprint(),
            if orientable {
                "orientable"
            } else {
                "non-orientable"
            },
            bc.as_ref()
                .map(|b| format!("  blocks {b}"))
                .unwrap_or_default()
        );
        if let Some(dir) = &args.emit_dir {
            fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{}.json", name.to_lowercase()));
            fs::write(&path, serialize_map(&normal, Some(&name)))
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        }
        rows.push(json!({
            "name": name,
            "certificate": cert.fingerprint(),
            "orientable": orientable,
            "block_certificate": bc,
            "map": MapDocument::from_map(&normal, Some(&name)),
        }));
    }
    Ok(Report::ok(
        text,
        json!({
            "type": t.to_string(),
            "chi": args.chi,
            "count": result.maps.len(),
            "strategy": format!("{:?}", result.strategy).to_lowercase(),
            "nodes": result.nodes,
            "maps": rows,
        }),
    ))
}

fn block_report(map: &PolyhedralMap, g: usize) -> Result<Report, Failure> {
    let found = blocks(map, g);
    let cert = block_certificate(map, g);
    let mut text = format!("{} block(s) on {g}-gons\n", found.len());
    for b in &found {
        let _ = writeln!(text, "{b}");
    }
    let _ = writeln!(text, "certificate {cert}");
    let names: Vec<String> = found.iter().map(|b| b.to_string()).collect();
    Ok(Report::ok(
        text,
        json!({ "g": g, "blocks": names, "certificate": cert.0 }),
    ))
}

fn catalog_report(name: Option<&str>, out: Option<&PathBuf>) -> Result<Report, Failure> {
    let Some(name) = name else {
        let mut text = String::new();
        let mut rows = Vec::new();
        for e in catalog::manifest() {
            let origin = match &e.provenance {
                Provenance::Transcribed { source } => source.clone(),
                Provenance::Derived { command, .. } => command.clone(),
            };
            let _ = writeln!(text, "{:<18} {:<12} {origin}", e.name, e.provenance.tag());
            rows.push(
                json!({ "name": e.name, "provenance": e.provenance, "expected": e.expected }),
            );
        }
        return Ok(Report::ok(text, json!({ "entries": rows })));
    };
    let entry = catalog::get(name)?;
    if let Some(path) = out {
        fs::write(path, entry.source).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let text = if out.is_some() {
        String::new()
    } else {
        entry.source.to_string()
    };
    Ok(Report::ok(
        text,
        json!({
            "name": entry.name,
            "provenance": entry.provenance,
            "expected": entry.expected,
            "map": MapDocument::from_map(&entry.map, Some(&entry.name)),
        }),
    ))
}
