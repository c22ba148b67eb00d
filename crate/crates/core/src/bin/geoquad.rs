//! Command-line interface: exact series, coefficient tables, asymptotic
//! laws, scaling curves, sampling experiments and the self-verification
//! suite.

use clap::{Parser, Subcommand, ValueEnum};
use geoquad_core::asym;
use geoquad_core::bijection::{spine_tree_to_boundary, tree_to_quad};
use geoquad_core::continuum;
use geoquad_core::geodesic;
use geoquad_core::map::{bfs_labels, MapJson, Quadrangulation};
use geoquad_core::oracle;
use geoquad_core::sampler::{self, ExperimentConfig, Observable};
use geoquad_core::series::{rat_to_f64, Rat, SeriesEngine, TupleMode};
use geoquad_core::tree;
use std::fmt::Write as _;

#[derive(Parser)]
#[command(name = "geoquad", version, about = "Geodesic statistics in random planar quadrangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact series coefficients for one family
    Series {
        /// family tag
        #[arg(long, value_enum)]
        family: Family,
        /// distance index i
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// tuple order k (Uk families)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// truncation order N
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Exact coefficient tables of the large-n expansions
    Coeffs {
        #[arg(long, value_enum)]
        table: Table,
        #[arg(long, default_value_t = 10)]
        i_max: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Asymptotic laws: finite-i exact values beside closed-form limits
    Asym {
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
        /// also report the saddle-point ratio of [g^n] Z_i at this order
        #[arg(long)]
        n: Option<usize>,
    },
    /// Numerically evaluated continuum scaling curves
    Scaling {
        #[arg(long, value_enum)]
        curve: Curve,
        #[arg(long, default_value_t = 0.1)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Monte Carlo (or exhaustive) ensemble experiments
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// comma-separated observables, e.g. "g:2,g:3,v:4"
        /// (g = geodesics of length i, v = vertices at distance i)
        #[arg(long, default_value = "g:2")]
        observables: String,
        /// enumerate the family exactly instead of sampling
        #[arg(long, default_value_t = false)]
        exhaustive: bool,
        /// worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Cross-module oracle suite; exits nonzero on any failure
    Verify {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        i_max: usize,
    },
    /// Exhaustive enumeration (families) or single-map inspection
    Enumerate {
        /// family size (edges / faces)
        #[arg(long)]
        n: Option<usize>,
        /// what to emit
        #[arg(long, default_value = "trees")]
        emit: String,
        /// geodesic length for boundary families
        #[arg(long, default_value_t = 2)]
        i: usize,
        /// inspect a JSON map instead of enumerating
        #[arg(long)]
        map_file: Option<std::path::PathBuf>,
        /// origin vertex (map inspection)
        #[arg(long)]
        origin: Option<usize>,
        /// target vertex (map inspection)
        #[arg(long)]
        target: Option<usize>,
        /// tuple order for tuple emission
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    R,
    Z,
    U,
    Uk,
    UkStrong,
    Zpp,
    Zzpp,
    U2pp,
    TwoPoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Acd,
    Agd,
    K,
    Tilde,
    W2pp,
    Contact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Weak,
    Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum Curve {
    Phi,
    Rho,
    Sigma,
    Lambda,
    Ratio,
    Theta,
}

/// Rows of (column names, stringified cells).
struct TableOut {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TableOut {
    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                let _ = writeln!(out, "{}", self.columns.join(","));
                for r in &self.rows {
                    let _ = writeln!(out, "{}", r.join(","));
                }
            }
            Format::Json => {
                let recs: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.clone(), serde_json::Value::String(v.clone())))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                out = serde_json::to_string_pretty(&recs).unwrap();
                out.push('\n');
            }
            Format::Plain => {
                for r in &self.rows {
                    let _ = writeln!(out, "{}", r.join(" "));
                }
            }
        }
        out
    }
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn main() {
    let cli = Cli::parse();
    let result = run(&cli);
    match result {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{text}");
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::VerifyFailed(report)) => {
            print!("{report}");
            std::process::exit(1);
        }
    }
}

enum CliError {
    Usage(String),
    Computation(String),
    VerifyFailed(String),
}

impl From<geoquad_core::Error> for CliError {
    fn from(e: geoquad_core::Error) -> Self {
        match e {
            geoquad_core::Error::ConfigInvalid(m) => CliError::Usage(m),
            other => CliError::Computation(other.to_string()),
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Series { family, i, k, order } => {
            let eng = SeriesEngine::new(*order);
            let series = match family {
                Family::R => eng.r_series(*i),
                Family::Z => {
                    require(*i >= 1, "Z needs i >= 1")?;
                    eng.z_series(*i)
                }
                Family::U => {
                    require(*i >= 1, "U needs i >= 1")?;
                    eng.u_family(*i)[*i].clone()
                }
                Family::Uk => {
                    require(*i >= 1 && *k >= 1, "Uk needs i, k >= 1")?;
                    eng.u_k_series(*i, *k, TupleMode::Weak)
                }
                Family::UkStrong => {
                    require(*i >= 1 && *k >= 1, "UkStrong needs i, k >= 1")?;
                    eng.u_k_series(*i, *k, TupleMode::Strong)
                }
                Family::Zpp => {
                    require(*i >= 1, "Zpp needs i >= 1")?;
                    eng.pinch_series(*i).zpp
                }
                Family::Zzpp => {
                    require(*i >= 1, "ZZpp needs i >= 1")?;
                    eng.pinch_series(*i).zzpp
                }
                Family::U2pp => {
                    require(*i >= 1, "U2pp needs i >= 1")?;
                    eng.pinch_series(*i).u2pp
                }
                Family::TwoPoint => {
                    require(*i >= 1, "two-point needs i >= 1")?;
                    eng.two_point_series(*i)
                }
            };
            let mut t = TableOut { columns: vec!["n".into(), "coefficient".into()], rows: vec![] };
            for n in 0..=series.order() {
                t.rows.push(vec![n.to_string(), rat_str(series.coeff(n))]);
            }
            if matches!(cli.format, Format::Plain) {
                // one exact coefficient per line
                let mut out = String::new();
                for r in &t.rows {
                    out.push_str(&r[1]);
                    out.push('\n');
                }
                return Ok(out);
            }
            Ok(t.render(cli.format))
        }
        Command::Coeffs { table, i_max, k } => {
            require(*i_max >= 1, "need i-max >= 1")?;
            let mut t = TableOut { columns: vec![], rows: vec![] };
            match table {
                Table::Acd => {
                    t.columns = vec!["i".into(), "A".into(), "C".into(), "D".into()];
                    for i in 1..=*i_max {
                        let (a, c, d) = asym::acd(i);
                        t.rows.push(vec![i.to_string(), rat_str(&a), rat_str(&c), rat_str(&d)]);
                    }
                }
                Table::Agd => {
                    t.columns = vec!["i".into(), "alpha".into(), "gamma".into(), "delta".into()];
                    let tb = asym::agd(*i_max);
                    for i in 1..=*i_max {
                        let u = &tb.u[i];
                        t.rows.push(vec![
                            i.to_string(),
                            rat_str(&u.a),
                            rat_str(&u.c),
                            rat_str(&u.d),
                        ]);
                    }
                }
                Table::K => {
                    require(*k >= 1, "need k >= 1")?;
                    t.columns =
                        vec!["i".into(), "alpha_k".into(), "gamma_k".into(), "delta_k".into()];
                    let tb = asym::k_tables(*i_max, *k);
                    for i in 1..=*i_max {
                        let u = &tb.u[i];
                        t.rows.push(vec![
                            i.to_string(),
                            rat_str(&u.a),
                            rat_str(&u.c),
                            rat_str(&u.d),
                        ]);
                    }
                }
                Table::Tilde => {
                    require(*k >= 1, "need k >= 1")?;
                    t.columns = vec![
                        "i".into(),
                        "alpha_tilde".into(),
                        "gamma_tilde".into(),
                        "delta_tilde".into(),
                    ];
                    let tb = asym::tilde_tables(*i_max, *k);
                    for i in 1..=*i_max {
                        t.rows.push(vec![
                            i.to_string(),
                            rat_str(&tb[i].a),
                            rat_str(&tb[i].c),
                            rat_str(&tb[i].d),
                        ]);
                    }
                }
                Table::W2pp => {
                    t.columns = vec!["i".into(), "w2pp".into()];
                    let ct = asym::contact_table(*i_max);
                    for i in 1..=*i_max {
                        t.rows.push(vec![i.to_string(), rat_str(ct.w2pp(i))]);
                    }
                }
                Table::Contact => {
                    t.columns = vec!["i".into(), "mean_contacts".into()];
                    let ct = asym::contact_table(*i_max);
                    for i in 1..=*i_max {
                        t.rows.push(vec![i.to_string(), rat_str(&ct.mean_contacts(i))]);
                    }
                }
            }
            Ok(t.render(cli.format))
        }
        Command::Asym { i, k, mode, n } => {
            require(*i >= 1 && *k >= 1, "need i, k >= 1")?;
            let table = asym::k_tables(*i, *k);
            let mode = match mode {
                Mode::Weak => TupleMode::Weak,
                Mode::Strong => TupleMode::Strong,
            };
            let laws = asym::average_laws(&table, *i, *k, mode).map_err(CliError::from)?;
            let mut t = TableOut { columns: vec!["quantity".into(), "value".into()], rows: vec![] };
            t.rows.push(vec![
                "geodesics_per_origin_exact".into(),
                rat_str(&laws.geodesics_per_origin),
            ]);
            t.rows.push(vec![
                "geodesics_per_origin_float".into(),
                format!("{:.6e}", rat_to_f64(&laws.geodesics_per_origin)),
            ]);
            t.rows.push(vec![
                "per_pair_limit".into(),
                format!("{:.6e}", laws.per_pair_limit_ln.exp()),
            ]);
            t.rows.push(vec![
                "strong_pair_area_ratio_exact".into(),
                rat_str(&laws.strong_pair_area_ratio),
            ]);
            t.rows.push(vec![
                "strong_pair_area_limit".into(),
                format!("{:.6e}", laws.strong_pair_area_limit),
            ]);
            t.rows.push(vec!["contacts_limit".into(), format!("{:.6}", laws.contacts_limit)]);
            if let Some(n) = n {
                let eng = SeriesEngine::new(*n);
                let z = eng.z_series(*i);
                let (_, _, d) = asym::acd(*i);
                let ratio = asym::saddle_ratio(z.coeff(*n), *n, &d);
                t.rows.push(vec![format!("saddle_ratio_z{i}_n{n}"), format!("{ratio:.6}")]);
            }
            Ok(t.render(cli.format))
        }
        Command::Scaling { curve, r_min, r_max, step, tol } => {
            let tag = match curve {
                Curve::Phi => continuum::CurveTag::Phi,
                Curve::Rho => continuum::CurveTag::Rho,
                Curve::Sigma => continuum::CurveTag::Sigma,
                Curve::Lambda => continuum::CurveTag::Lambda,
                Curve::Ratio => continuum::CurveTag::LambdaOverSigma,
                Curve::Theta => continuum::CurveTag::WeakAreaCorrection,
            };
            let c = continuum::evaluate_curve(tag, *r_min, *r_max, *step, *tol)
                .map_err(CliError::from)?;
            let mut t =
                TableOut { columns: vec!["r".into(), "value".into(), "err".into()], rows: vec![] };
            for j in 0..c.r.len() {
                t.rows.push(vec![
                    format!("{}", c.r[j]),
                    format!("{:.15e}", c.value[j]),
                    format!("{:.3e}", c.error[j]),
                ]);
            }
            Ok(t.render(cli.format))
        }
        Command::Sample { n, samples, seed, observables, exhaustive, workers } => {
            let mut obs = Vec::new();
            for part in observables.split(',') {
                let mut it = part.split(':');
                let kind = it.next().unwrap_or("");
                let i: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| CliError::Usage(format!("bad observable {part:?}")))?;
                match kind {
                    "g" => obs.push(Observable::GeodesicCount { i }),
                    "v" => obs.push(Observable::VerticesAtDistance { i }),
                    _ => return Err(CliError::Usage(format!("unknown observable {kind:?}"))),
                }
            }
            let workers = if *workers == 0 { rayon::current_num_threads() } else { *workers };
            let config = ExperimentConfig {
                n: *n,
                samples: *samples,
                seed: *seed,
                observables: obs,
                exhaustive: *exhaustive,
                workers,
            };
            let res = sampler::run_experiment(&config).map_err(CliError::from)?;
            let mut t = TableOut {
                columns: vec![
                    "observable".into(),
                    "i".into(),
                    "mean".into(),
                    "stderr".into(),
                    "weighted_mean".into(),
                    "weighted_stderr".into(),
                    "samples".into(),
                ],
                rows: vec![],
            };
            for s in &res.stats {
                let i = match s.observable {
                    Observable::GeodesicCount { i } => i,
                    Observable::VerticesAtDistance { i } => i,
                };
                let name = match s.observable {
                    Observable::GeodesicCount { .. } => "geodesics",
                    Observable::VerticesAtDistance { .. } => "vertices",
                };
                t.rows.push(vec![
                    name.into(),
                    i.to_string(),
                    format!("{:.8e}", s.acc.mean()),
                    format!("{:.3e}", s.acc.stderr()),
                    format!("{:.8e}", s.acc.weighted_mean()),
                    format!("{:.3e}", s.acc.weighted_stderr()),
                    res.samples.to_string(),
                ]);
            }
            Ok(t.render(cli.format))
        }
        Command::Verify { n_max, i_max } => verify(*n_max, *i_max),
        Command::Enumerate { n, emit, i, map_file, origin, target, k, mode } => {
            if let Some(path) = map_file {
                return inspect_map(cli, path, *origin, *target, *k, *mode, emit);
            }
            let n = n.ok_or_else(|| CliError::Usage("need --n or --map-file".into()))?;
            let mut out = String::new();
            match emit.as_str() {
                "trees" => {
                    tree::for_each_labeled_tree(n, 1, |t| {
                        out.push_str(&t.to_text());
                        out.push('\n');
                    })
                    .map_err(CliError::from)?;
                }
                "quads" => {
                    tree::for_each_labeled_tree(n, 1, |t| {
                        let tq = tree_to_quad(t);
                        let j = tq.quad.to_json();
                        out.push_str(&serde_json::to_string(&j).unwrap());
                        out.push('\n');
                    })
                    .map_err(CliError::from)?;
                }
                "boundary-quads" => {
                    let mut total = 0u64;
                    let mut pinch_free = 0u64;
                    tree::for_each_spine_tree(*i, n, |s| {
                        let b = spine_tree_to_boundary(s);
                        total += 1;
                        if b.pinch_points().is_empty() {
                            pinch_free += 1;
                        }
                    })
                    .map_err(CliError::from)?;
                    let _ = writeln!(out, "total,{total}");
                    let _ = writeln!(out, "pinch_free,{pinch_free}");
                }
                other => return Err(CliError::Usage(format!("unknown emit kind {other:?}"))),
            }
            Ok(out)
        }
    }
}

fn inspect_map(
    cli: &Cli,
    path: &std::path::Path,
    origin: Option<usize>,
    target: Option<usize>,
    k: usize,
    mode: Mode,
    emit: &str,
) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let j: MapJson =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad map JSON: {e}")))?;
    let q = Quadrangulation::from_json(&j).map_err(CliError::from)?;
    let origin = origin.or(q.origin).ok_or_else(|| CliError::Usage("need --origin".into()))?;
    let labels = bfs_labels(&q.map, origin);
    match emit {
        "labels" => {
            let mut t = TableOut { columns: vec!["vertex".into(), "distance".into()], rows: vec![] };
            for (v, l) in labels.labels.iter().enumerate() {
                t.rows.push(vec![v.to_string(), l.to_string()]);
            }
            Ok(t.render(cli.format))
        }
        "geodesics" => {
            let target = target.ok_or_else(|| CliError::Usage("need --target".into()))?;
            let geos = geodesic::enumerate_geodesics(&q, &labels, target);
            let mut out = String::new();
            let _ = writeln!(out, "count,{}", geos.len());
            for g in &geos {
                let _ = writeln!(
                    out,
                    "path,{}",
                    g.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
                );
            }
            Ok(out)
        }
        "tuples" => {
            let target = target.ok_or_else(|| CliError::Usage("need --target".into()))?;
            let mode = match mode {
                Mode::Weak => TupleMode::Weak,
                Mode::Strong => TupleMode::Strong,
            };
            let tuples = geodesic::enumerate_confluent_tuples(&q, &labels, target, k, mode)
                .map_err(CliError::from)?;
            let mut out = String::new();
            let weighted: u64 = tuples.iter().map(|t| t.weight).sum();
            let _ = writeln!(out, "multisets,{}", tuples.len());
            let _ = writeln!(out, "weighted,{weighted}");
            Ok(out)
        }
        other => Err(CliError::Usage(format!("unknown emit kind {other:?}"))),
    }
}

fn require(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

/// The cross-module oracle suite: bijection round trips, series against
/// brute force, ensemble normalizations and quadrature limits.
fn verify(n_max: usize, i_max: usize) -> Result<String, CliError> {
    let mut checks: Vec<Check> = Vec::new();
    let mut check = |name: String, pass: bool, detail: String| {
        checks.push(Check { name, pass, detail });
    };

    // bijection round trips
    {
        let mut all = true;
        let mut count = 0usize;
        for n in 1..=n_max.min(4) {
            tree::for_each_labeled_tree(n, 1, |t| {
                let tq = tree_to_quad(t);
                let back = geoquad_core::bijection::quad_to_tree(&tq.quad);
                if &back.tree != t {
                    all = false;
                }
                count += 1;
            })
            .map_err(CliError::from)?;
        }
        check("bijection_round_trip".into(), all, format!("{count} trees"));
    }

    // series vs brute force
    let eng = SeriesEngine::new(n_max);
    for i in 1..=i_max {
        let u = eng.u_family(i);
        let mut ok = true;
        let mut detail = String::new();
        for n in 1..=n_max {
            let got = oracle::count_marked_geodesics(n, i).map_err(CliError::from)?;
            let want = u[i].coeff(n);
            if &geoquad_core::series::rat(got as i64) != want {
                ok = false;
            }
            let _ = write!(detail, "n={n}:{got} ");
        }
        check(format!("marked_geodesics_vs_U_{i}"), ok, detail);
    }
    for i in 1..=i_max {
        for (mode, tag) in [(TupleMode::Weak, "weak"), (TupleMode::Strong, "strong")] {
            let mut ok = true;
            for n in 1..=n_max {
                let got = oracle::count_confluent_tuples(n, i, 2, mode).map_err(CliError::from)?;
                let want = eng.u_k_series(i, 2, mode);
                if &geoquad_core::series::rat(got as i64) != want.coeff(n) {
                    ok = false;
                }
            }
            check(format!("{tag}_pairs_vs_series_i{i}"), ok, String::new());
        }
    }
    {
        let mut ok = true;
        let mut detail = String::new();
        for i in 1..=i_max {
            let z = eng.z_series(i);
            let u = eng.u_family(i);
            for n in 0..=n_max.min(2) {
                let (total, pinch_free) = oracle::count_boundary_quads(i, n).map_err(CliError::from)?;
                if &geoquad_core::series::rat(total as i64) != z.coeff(n)
                    || &geoquad_core::series::rat(pinch_free as i64) != u[i].coeff(n)
                {
                    ok = false;
                }
                let _ = write!(detail, "i{i}n{n}:{total}/{pinch_free} ");
            }
        }
        check("boundary_quads_vs_Z_U".into(), ok, detail);
    }

    // ensemble normalization
    {
        let z1 = oracle::pointed_partition_by_aut(1).map_err(CliError::from)?;
        let z2 = oracle::pointed_partition_by_aut(2).map_err(CliError::from)?;
        let ok = z1 == geoquad_core::series::ratio(3, 2)
            && z2 == geoquad_core::series::ratio(9, 2)
            && geoquad_core::series::pointed_partition(1) == z1
            && geoquad_core::series::pointed_partition(2) == z2;
        check("pointed_partition".into(), ok, format!("{z1}, {z2}"));
        let a1 = oracle::pointed_average_geodesics(1, 2).map_err(CliError::from)?;
        let a2 = oracle::pointed_average_geodesics(2, 2).map_err(CliError::from)?;
        check(
            "pointed_geodesic_averages".into(),
            a1 == geoquad_core::series::ratio(2, 3) && a2 == geoquad_core::series::ratio(20, 9),
            format!("{a1}, {a2}"),
        );
    }

    // quadrature limits
    {
        let s = continuum::sigma(0.02, 1e-10).map_err(CliError::from)?;
        check(
            "sigma_small_r_limit".into(),
            (s * 7.0 / 12.0 - 1.0).abs() < 0.01,
            format!("sigma(0.02) = {s:.9}"),
        );
        let r = continuum::rho(0.1, 1e-10).map_err(CliError::from)?;
        check(
            "rho_small_r_law".into(),
            (r / (3.0 / 7.0 * 0.001) - 1.0).abs() < 0.05,
            format!("rho(0.1) = {r:.9e}"),
        );
        let p = continuum::phi(8.0, 1e-9).map_err(CliError::from)?;
        check("phi_saturates".into(), (p - 1.0).abs() < 1e-6, format!("phi(8) = {p:.9}"));
        let w = continuum::omega_first_moment(1.0, 1e-11).map_err(CliError::from)?;
        check("omega_symmetry".into(), (w - 0.5).abs() < 1e-8, format!("{w:.12}"));
        let s1 = continuum::sigma(1.0, 1e-11).map_err(CliError::from)?;
        let s2 = continuum::sigma_second_route(1.0, 1e-11).map_err(CliError::from)?;
        check(
            "sigma_two_routes".into(),
            ((s1 - s2) / s1).abs() < 1e-8,
            format!("{s1:.12} vs {s2:.12}"),
        );
    }

    // render report
    let mut out = String::new();
    let mut all_pass = true;
    for c in &checks {
        all_pass &= c.pass;
        let _ = writeln!(out, "{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let report: Vec<serde_json::Value> = checks
        .iter()
        .map(|c| {
            serde_json::json!({"check": c.name, "pass": c.pass, "detail": c.detail})
        })
        .collect();
    let _ = writeln!(out, "{}", serde_json::to_string(&report).unwrap());
    if all_pass {
        Ok(out)
    } else {
        Err(CliError::VerifyFailed(out))
    }
}
