//! `tglab`: batch front end for the tglab library.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use tglab::dyadic::Dyadic;
use tglab::forest::Tree;
use tglab::heatmeasure::{
    closure_diagnostic, hellinger_pair, hellinger_translate, kakutani_series, mass, partition_function,
    rotation_support, semifinite_series, BetaProfile, Transform, Verdict,
};
use tglab::lattice::{gauge_act_config, holonomy, jones_act_config, Config, CrossedElement, GaugeField, GroupSpec};
use tglab::sample;
use tglab::state::{
    check_gauge_invariance, check_jones_invariance, check_state_preserving, omega_t, LeafWeights, Residual,
    SpectralWeights,
};
use tglab::thompson::{parse_expression, VElement};

#[derive(Parser)]
#[command(name = "tglab", version, about = "Thompson groups, lattice gauge states and heat-kernel measures")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Thompson group elements.
    #[command(subcommand)]
    Thompson(ThompsonCmd),
    /// Configurations on a tree partition.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Heat-kernel states on crossed-product elements.
    #[command(subcommand)]
    State(StateCmd),
    /// Heat-kernel measures and the Kakutani criterion.
    #[command(subcommand)]
    Measure(MeasureCmd),
}

#[derive(Subcommand)]
enum ThompsonCmd {
    /// Product of the given elements, the rightmost acting first.
    Mul { exprs: Vec<String> },
    Inv { expr: String },
    Classify { expr: String },
    /// Iterates of a dyadic under an element.
    Orbit {
        expr: String,
        point: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Affine pieces of the element.
    Pl { expr: String },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, default_value = "zmod:2")]
    group: String,
    #[arg(long)]
    tree: String,
    /// Leaf values, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
}

#[derive(Subcommand)]
enum LatticeCmd {
    Holonomy(ConfigArgs),
    /// Gauge action `x_i + s_i − s_{i+1}`; the field lives on the same tree.
    Gauge {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, allow_hyphen_values = true)]
        gauge: String,
    },
    Jones {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        element: String,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// `zmod:<k>`; `check-jones` infers it from `--const-weights`, otherwise `zmod:2`.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Residuals at or below this count as zero in floating mode.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Subcommand)]
enum StateCmd {
    /// Random (element, forest) pairs under projective embedding.
    CheckPreserving(SampleArgs),
    /// Random (element, gauge field) pairs.
    CheckGauge(SampleArgs),
    /// Random (element, Thompson element) pairs with constant weights.
    CheckJones {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        const_weights: Option<String>,
    },
    /// Evaluate the state on an element given as JSON.
    Eval {
        #[arg(long)]
        element: String,
        #[arg(long)]
        const_weights: Option<String>,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Partition function `Z_b`.
    Zb {
        #[arg(long)]
        b: f64,
    },
    Mass {
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Affinity with a shift by `k`, or between `b` and `a` when `--a` is given.
    Hellinger {
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        a: Option<f64>,
    },
    Kakutani {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        transform: String,
        #[arg(long, default_value_t = 14)]
        levels: u32,
    },
    Semifinite {
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 12)]
        levels: u32,
    },
    Closure {
        #[arg(long)]
        beta: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 14)]
        levels: u32,
    },
    Rotsupport {
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 10)]
        levels: u32,
    },
}

struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    code: u8,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            csv: None,
            code: 0,
        }
    }
}

type CmdResult = Result<Report, String>;

fn parse<T: std::str::FromStr>(what: &str, s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| format!("invalid {what} `{s}`: {e}"))
}

fn element(s: &str) -> Result<VElement, String> {
    parse_expression(s).map_err(|e| format!("invalid element `{s}`: {e}"))
}

fn values(group: GroupSpec, s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| parse::<i64>("value", v.trim()).map(|x| group.reduce(x)))
        .collect()
}

fn config(args: &ConfigArgs) -> Result<Config, String> {
    let group: GroupSpec = parse("group", &args.group)?;
    let tree: Tree = parse("tree", &args.tree)?;
    Config::new(group, tree, values(group, &args.values)?).map_err(|e| e.to_string())
}

fn show_map(m: &BTreeMap<Dyadic, u32>) -> String {
    let parts: Vec<String> = m.iter().map(|(d, g)| format!("{d}:{g}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn thompson(cmd: ThompsonCmd) -> CmdResult {
    let describe = |g: &VElement| json!({"element": g.to_string(), "class": g.classify()});
    Ok(match cmd {
        ThompsonCmd::Mul { exprs } => {
            let mut g = VElement::identity();
            for e in &exprs {
                g = g.multiply(&element(e)?);
            }
            let text = if g.is_identity() { "identity".to_string() } else { g.to_string() };
            Report::new(describe(&g), text)
        }
        ThompsonCmd::Inv { expr } => {
            let g = element(&expr)?.inverse();
            Report::new(describe(&g), g.to_string())
        }
        ThompsonCmd::Classify { expr } => {
            let c = element(&expr)?.classify();
            Report::new(json!({"class": c}), c.to_string())
        }
        ThompsonCmd::Orbit { expr, point, steps } => {
            let g = element(&expr)?;
            let mut d: Dyadic = parse("dyadic", &point)?;
            let mut orbit = vec![d.clone()];
            for _ in 0..steps {
                d = g.act_dyadic(&d);
                orbit.push(d.clone());
            }
            let shown: Vec<String> = orbit.iter().map(|d| d.to_string()).collect();
            Report::new(json!({"orbit": shown}), shown.join("\n"))
        }
        ThompsonCmd::Pl { expr } => {
            let g = element(&expr)?;
            let mut text = String::new();
            let pieces: Vec<Value> = g
                .as_pl_map()
                .pieces
                .iter()
                .map(|p| {
                    let _ = writeln!(text, "{} -> {} slope 2^{}", p.domain, p.image_left, p.slope_exponent);
                    json!({"domain": p.domain.to_string(), "image_left": p.image_left.to_string(), "slope_exponent": p.slope_exponent})
                })
                .collect();
            Report::new(json!({"pieces": pieces}), text.trim_end())
        }
    })
}

fn config_report(x: &Config) -> Report {
    let vals: Vec<String> = x.values().iter().map(|v| v.to_string()).collect();
    Report::new(
        serde_json::to_value(x).expect("configs serialize"),
        format!("tree {}\nvalues {}", x.tree(), vals.join(",")),
    )
}

fn lattice(cmd: LatticeCmd) -> CmdResult {
    Ok(match cmd {
        LatticeCmd::Holonomy(args) => {
            let h = holonomy(&config(&args)?);
            let obj: serde_json::Map<String, Value> = h.iter().map(|(d, g)| (d.to_string(), json!(g))).collect();
            Report::new(Value::Object(obj), show_map(&h))
        }
        LatticeCmd::Gauge { config: args, gauge } => {
            let x = config(&args)?;
            let s = GaugeField::new(x.group(), x.tree().clone(), values(x.group(), &gauge)?)
                .map_err(|e| e.to_string())?;
            config_report(&gauge_act_config(&s, &x).map_err(|e| e.to_string())?)
        }
        LatticeCmd::Jones { config: args, element: e } => {
            let x = config(&args)?;
            config_report(&jones_act_config(&element(&e)?, &x))
        }
    })
}

fn sample_group(args: &SampleArgs, weights: Option<&SpectralWeights>) -> Result<GroupSpec, String> {
    let group = match (&args.group, weights) {
        (Some(g), _) => parse("group", g)?,
        (None, Some(w)) => GroupSpec::new(w.modulus()).map_err(|e| e.to_string())?,
        (None, None) => GroupSpec::new(2).map_err(|e| e.to_string())?,
    };
    if let Some(w) = weights {
        if w.modulus() != group.modulus() {
            return Err(format!("weights have {} entries but the group is {group}", w.modulus()));
        }
    }
    Ok(group)
}

fn residual_report(args: &SampleArgs, group: GroupSpec, residuals: &[Residual]) -> Report {
    let max = residuals.iter().map(|r| r.value).fold(0.0, f64::max);
    let exact = residuals.iter().all(|r| r.exact_zero);
    let pass = exact || max <= args.tol;
    let text = format!(
        "group {group}\nsamples {}\nseed {}\nresidual {}\nexact_zero {exact}",
        residuals.len(),
        args.seed,
        if exact { "0".to_string() } else { format!("{max:e}") }
    );
    let mut r = Report::new(
        json!({"group": group.to_string(), "samples": residuals.len(), "seed": args.seed,
               "max_residual": max, "exact_zero": exact, "pass": pass}),
        text,
    );
    let mut csv = String::from("sample,residual,exact_zero\n");
    for (i, res) in residuals.iter().enumerate() {
        let _ = writeln!(csv, "{i},{:e},{}", res.value, res.exact_zero);
    }
    r.csv = Some(csv);
    r
}

fn random_element(rng: &mut impl Rng, group: GroupSpec, max_leaves: usize) -> CrossedElement {
    let leaves = rng.gen_range(1..=max_leaves);
    let t = sample::tree(rng, leaves);
    let terms = rng.gen_range(1..=3);
    sample::element(rng, group, &t, terms, 4)
}

fn state(cmd: StateCmd) -> CmdResult {
    Ok(match cmd {
        StateCmd::CheckPreserving(args) => {
            let group = sample_group(&args, None)?;
            let k = group.modulus();
            let mut rng = sample::rng(args.seed);
            let mut out = Vec::new();
            for _ in 0..args.samples {
                let x = random_element(&mut rng, group, 4);
                let carets = rng.gen_range(0..=2);
                let f = sample::forest(&mut rng, x.leaves(), carets);
                let coarse = sample::leaf_weights(&mut rng, k, x.leaves());
                let fine = sample::refined_weights(&mut rng, k, &coarse, &f);
                out.push(check_state_preserving(&x, &f, &coarse, &fine).map_err(|e| e.to_string())?);
            }
            residual_report(&args, group, &out)
        }
        StateCmd::CheckGauge(args) => {
            let group = sample_group(&args, None)?;
            let mut rng = sample::rng(args.seed);
            let mut out = Vec::new();
            for _ in 0..args.samples {
                let x = random_element(&mut rng, group, 4);
                let s = sample::gauge_field(&mut rng, group, x.tree());
                let lw = sample::leaf_weights(&mut rng, group.modulus(), x.leaves());
                out.push(check_gauge_invariance(&x, &s, &lw).map_err(|e| e.to_string())?);
            }
            residual_report(&args, group, &out)
        }
        StateCmd::CheckJones { sample: args, const_weights } => {
            let w: Option<SpectralWeights> = const_weights.as_deref().map(|s| parse("weights", s)).transpose()?;
            let group = sample_group(&args, w.as_ref())?;
            let mut rng = sample::rng(args.seed);
            let mut out = Vec::new();
            for _ in 0..args.samples {
                let x = random_element(&mut rng, group, 3);
                let leaves = rng.gen_range(1..=4);
                let v = sample::thompson_element(&mut rng, sample::Subgroup::V, leaves, 3);
                let w = match &w {
                    Some(w) => w.clone(),
                    None => sample::weights(&mut rng, group.modulus()),
                };
                out.push(check_jones_invariance(&x, &v, &w).map_err(|e| e.to_string())?);
            }
            residual_report(&args, group, &out)
        }
        StateCmd::Eval { element: src, const_weights } => {
            let x: CrossedElement = serde_json::from_str(&src).map_err(|e| format!("invalid element JSON: {e}"))?;
            let k = x.group().modulus();
            let w: SpectralWeights = match const_weights {
                Some(s) => parse("weights", &s)?,
                None => SpectralWeights::uniform(k),
            };
            if w.modulus() != k {
                return Err(format!("weights have {} entries but the group is {}", w.modulus(), x.group()));
            }
            let value = omega_t(&x, &LeafWeights::constant(&w, x.leaves())).map_err(|e| e.to_string())?;
            let z = value.to_complex();
            Report::new(
                json!({"exact": value.to_string(), "re": z.re, "im": z.im}),
                format!("{value}\n{} {}", z.re, z.im),
            )
        }
    })
}

fn num(what: &str, r: tglab::Result<f64>) -> CmdResult {
    let v = r.map_err(|e| e.to_string())?;
    Ok(Report::new(json!({ what: v }), format!("{v:.15}")))
}

fn series_csv(header: &str, rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut csv = format!("{header}\n");
    for (n, row) in rows.enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(csv, "{n},{}", cells.join(","));
    }
    csv
}

fn measure(cmd: MeasureCmd) -> CmdResult {
    match cmd {
        MeasureCmd::Zb { b } => num("zb", partition_function(b)),
        MeasureCmd::Mass { b, n } => num("mass", mass(b, n)),
        MeasureCmd::Hellinger { b, k, a } => match (k, a) {
            (Some(k), None) => num("affinity", hellinger_translate(b, k)),
            (None, Some(a)) => num("affinity", hellinger_pair(a, b)),
            _ => Err("give exactly one of --k and --a".into()),
        },
        MeasureCmd::Kakutani { beta, transform, levels } => {
            let beta: BetaProfile = parse("profile", &beta)?;
            let transform: Transform = parse("transform", &transform)?;
            let report = kakutani_series(&beta, &transform, levels);
            let mut text = format!("verdict {:?}\n", report.verdict);
            let _ = writeln!(text, "evidence {}", serde_json::to_string(&report.evidence).expect("serializable"));
            text.push_str("level level_sum partial_sum max_term");
            for n in 0..report.terms_by_level.len() {
                let _ = write!(
                    text,
                    "\n{n} {:e} {:e} {:e}",
                    report.terms_by_level[n], report.partial_sums[n], report.max_term_by_level[n]
                );
            }
            let csv = series_csv(
                "level,level_sum,partial_sum,max_term",
                (0..report.terms_by_level.len()).map(|n| {
                    vec![report.terms_by_level[n], report.partial_sums[n], report.max_term_by_level[n]]
                }),
            );
            let code = if report.verdict == Verdict::Inconclusive { 3 } else { 0 };
            Ok(Report {
                json: serde_json::to_value(&report).expect("serializable"),
                text,
                csv: Some(csv),
                code,
            })
        }
        MeasureCmd::Semifinite { beta, t, levels } => {
            let beta: BetaProfile = parse("profile", &beta)?;
            let r = semifinite_series(&beta, t, levels).map_err(|e| e.to_string())?;
            let mut text = format!("t {}\nlimit {:.9}\ndivergent {}\nlevel level_sum mean_term partial_sum", r.t, r.limit, r.divergent);
            for n in 0..r.terms_by_level.len() {
                let _ = write!(
                    text,
                    "\n{n} {:e} {:e} {:e}",
                    r.terms_by_level[n], r.mean_term_by_level[n], r.partial_sums[n]
                );
            }
            let csv = series_csv(
                "level,level_sum,mean_term,partial_sum",
                (0..r.terms_by_level.len()).map(|n| vec![r.terms_by_level[n], r.mean_term_by_level[n], r.partial_sums[n]]),
            );
            Ok(Report {
                json: serde_json::to_value(&r).expect("serializable"),
                text,
                csv: Some(csv),
                code: 0,
            })
        }
        MeasureCmd::Closure { beta, p, n, levels } => {
            let beta: BetaProfile = parse("profile", &beta)?;
            num("mass", closure_diagnostic(&beta, p, n, levels))
        }
        MeasureCmd::Rotsupport { element: e, levels } => {
            let r = element(&e)?;
            let support = rotation_support(&r, levels).map_err(|e| e.to_string())?;
            let shown: Vec<String> = support.iter().map(|d| d.to_string()).collect();
            Ok(Report::new(json!({"support": shown}), shown.join("\n")))
        }
    }
}

fn init_threads() -> Result<(), String> {
    if let Ok(n) = std::env::var("TG_LAB_THREADS") {
        let n: usize = parse("TG_LAB_THREADS", n.trim())?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Thompson(c) => thompson(c),
        Command::Lattice(c) => lattice(c),
        Command::State(c) => state(c),
        Command::Measure(c) => measure(c),
    });
    match result {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe downstream is not an error worth reporting
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
                Format::Text => writeln!(out, "{}", report.text),
                Format::Csv => match &report.csv {
                    Some(csv) => write!(out, "{csv}"),
                    None => {
                        eprintln!("error: csv output is only available for series tables");
                        return ExitCode::from(2);
                    }
                },
            };
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
