use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use splitnet::circular::{count_circular_systems, ell, is_circular, is_outer_path, CircularSystem};
use splitnet::io::{
    parse_class, parse_metric, parse_network, parse_split_system, parse_weighted_network, parse_weighted_split_system,
    to_dot, write_metric, write_network, write_split_system, write_weighted_split_system,
};
use splitnet::metrics::{
    circular_decompose, distance_from_network, distance_from_splits, find_kalmanson_orders, is_additive,
    kalmanson_violation, l_w, s_w, DistanceVector,
};
use splitnet::oracle::oracle_galois_check;
use splitnet::pctree::{
    all_pc_trees, binary_one_nested_count, count_one_nested_classes, enumerate_binary_one_nested, to_pc_tree,
};
use splitnet::polytope::{face_vertices, minimize, vertices_csv};
use splitnet::split::count_split_systems;
use splitnet::verify::{polytope_suite, weighted_suite_n};
use splitnet::{CircularOrder, Error, PcTree};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "splitnet", version, about = "1-nested networks, circular split systems and BME polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and describe what it holds
    Validate { file: String },
    /// Splits displayed by a network (or PC-tree)
    Sigma { file: String },
    /// Least 1-nested network displaying a circular split system
    Ell { file: String },
    /// Weighted network of a weighted circular split system
    Ellw { file: String },
    /// Weighted split system of a weighted network
    Sw { file: String },
    /// Distance vector of a weighted network or weighted split system
    Dist { file: String },
    /// Four-point condition
    CheckAdditive { file: String },
    /// Kalmanson condition for one order, or the list of orders satisfying it
    CheckKalmanson {
        file: String,
        #[arg(long, value_parser = parse_order)]
        order: Option<CircularOrder>,
    },
    /// Circular decomposition of a Kalmanson metric
    Decompose {
        file: String,
        #[arg(long, value_parser = parse_order)]
        order: Option<CircularOrder>,
    },
    /// 1-nested classes on n leaves, or binary ones with k nontrivial bridges
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Counting sequences
    Count {
        what: CountWhat,
        #[arg(short)]
        n: usize,
        /// Binary networks with k nontrivial bridges (networks only)
        #[arg(short)]
        k: Option<usize>,
    },
    /// Vertices of BME(n,k) as CSV, with dot products against an optional metric
    BmeVertices {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        metric: Option<String>,
    },
    /// Minimizers of x.d over BME(n,k)
    BmeMinimize {
        file: String,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: usize,
        /// Print the full vertex table instead
        #[arg(long)]
        csv: bool,
    },
    /// Vertices of the face of BME(n,k) given by a network
    Face {
        file: String,
        #[arg(short)]
        k: usize,
    },
    /// Oracle suites
    Verify {
        suite: Suite,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sampled pairs (galois) or random instances (wgalois, polytope)
        #[arg(long)]
        samples: Option<usize>,
        /// Print violations as CSV after the summary
        #[arg(long)]
        csv: bool,
    },
    /// Graphviz DOT of a network (or PC-tree)
    ExportDot { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum CountWhat {
    Networks,
    Circular,
    Systems,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Galois,
    Wgalois,
    Polytope,
}

enum Failure {
    False(String),
    Input(String),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e if e.is_bound() => Failure::Bound(e.to_string()),
            Error::NotCircular | Error::NotKalmanson(..) | Error::NotOneNested(_) | Error::Internal(_) => {
                Failure::False(e.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn parse_order(s: &str) -> Result<CircularOrder, String> {
    let seq = s
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad taxon `{t}`")))
        .collect::<Result<Vec<_>, _>>()?;
    CircularOrder::new(&seq).map_err(|e| e.to_string())
}

fn read(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok(text)
}

#[derive(PartialEq)]
enum Kind {
    Splits,
    Network,
    Tree,
    Metric,
}

fn kind(text: &str) -> Kind {
    let body = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>();
    match body.first() {
        Some(l) if l.starts_with('(') || l.starts_with('[') => return Kind::Tree,
        _ => {}
    }
    match body.get(1) {
        None => Kind::Splits,
        Some(l) if l.starts_with("split:") => Kind::Splits,
        Some(l) if ["node ", "leaf ", "edge "].iter().any(|p| l.starts_with(p)) => Kind::Network,
        _ => Kind::Metric,
    }
}

fn lines<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string() + "\n").collect()
}

fn weighted_network_text(wn: &splitnet::metrics::WeightedNetwork) -> Result<String, Failure> {
    let tree = to_pc_tree(wn.network())?;
    Ok(format!("# pc-tree: {tree}\n{}", write_network(wn.network(), Some(wn.weights()))))
}

fn metric_of(text: &str) -> Result<DistanceVector, Failure> {
    Ok(match kind(text) {
        Kind::Metric => parse_metric(text)?,
        Kind::Splits => distance_from_splits(&parse_weighted_split_system(text)?),
        Kind::Network => distance_from_network(&parse_weighted_network(text)?),
        Kind::Tree => distance_from_network(&splitnet::metrics::WeightedNetwork::unit(
            parse_class(text)?.to_network(),
        )),
    })
}

fn validate(text: &str) -> Outcome {
    match kind(text) {
        Kind::Splits => {
            let s = parse_split_system(text)?;
            let circ = is_circular(&s)?;
            let mut out = format!("split system: n={}, {} splits", s.n(), s.len());
            match circ {
                Some(c) => {
                    let _ = write!(out, ", circular (order {c})");
                    if s.n() <= 10 {
                        let outer = is_outer_path(&CircularSystem::new(s.clone())?)?;
                        let _ = write!(out, ", {}outer-path", if outer { "" } else { "not " });
                    }
                }
                None => out.push_str(", not circular"),
            }
            Ok(out + "\n")
        }
        Kind::Network => {
            let (net, w) = parse_network(text)?;
            let stats = net.classify();
            let head = format!(
                "network: n={}, {} nodes, {} edges, {}weighted",
                net.n(),
                net.node_count(),
                net.edges().len(),
                if w.is_some() { "" } else { "un" }
            );
            if !stats.is_one_nested {
                return Err(Failure::False(format!("{head}, not 1-nested")));
            }
            let tree = to_pc_tree(&net)?;
            Ok(format!("{head}, 1-nested, class {tree}\n"))
        }
        Kind::Tree => {
            let t = parse_class(text)?;
            Ok(format!("pc-tree: n={}, {} internal edges, {}\n", t.n(), t.internal_edge_count(), t))
        }
        Kind::Metric => {
            let d = parse_metric(text)?;
            Ok(format!("metric: n={}, {}additive\n", d.n(), if is_additive(&d) { "" } else { "not " }))
        }
    }
}

fn class_of(text: &str) -> Result<PcTree, Failure> {
    Ok(parse_class(text)?)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { file } => validate(&read(&file)?),
        Command::Sigma { file } => {
            let text = read(&file)?;
            let s = match kind(&text) {
                Kind::Network => parse_network(&text)?.0.displayed_splits()?,
                _ => class_of(&text)?.splits(),
            };
            Ok(write_split_system(&s))
        }
        Command::Ell { file } => {
            let s = CircularSystem::new(parse_split_system(&read(&file)?)?)?;
            let tree = ell(&s)?;
            Ok(format!("# pc-tree: {tree}\n{}", write_network(&tree.to_network(), None)))
        }
        Command::Ellw { file } => weighted_network_text(&l_w(&parse_weighted_split_system(&read(&file)?)?)?),
        Command::Sw { file } => Ok(write_weighted_split_system(&s_w(&parse_weighted_network(&read(&file)?)?)?)),
        Command::Dist { file } => Ok(write_metric(&metric_of(&read(&file)?)?)),
        Command::CheckAdditive { file } => {
            let d = metric_of(&read(&file)?)?;
            if is_additive(&d) {
                Ok("additive\n".into())
            } else {
                Err(Failure::False("not additive".into()))
            }
        }
        Command::CheckKalmanson { file, order } => {
            let d = metric_of(&read(&file)?)?;
            match order {
                Some(o) => match kalmanson_violation(&d, &o)? {
                    None => Ok(format!("kalmanson for {o}\n")),
                    Some((i, j, k, l)) => Err(Failure::False(format!("not kalmanson for {o}: ({i},{j},{k},{l})"))),
                },
                None => {
                    let orders = find_kalmanson_orders(&d)?;
                    if orders.is_empty() {
                        Err(Failure::False("not kalmanson for any circular order".into()))
                    } else {
                        Ok(lines(orders))
                    }
                }
            }
        }
        Command::Decompose { file, order } => {
            let d = metric_of(&read(&file)?)?;
            let order = match order {
                Some(o) => o,
                None => find_kalmanson_orders(&d)?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Failure::False("not kalmanson for any circular order".into()))?,
            };
            let ws = circular_decompose(&d, &order)?;
            Ok(format!("# order: {order}\n{}", write_weighted_split_system(&ws)))
        }
        Command::Enumerate { n, k } => match k {
            Some(k) => Ok(lines(enumerate_binary_one_nested(n, k)?)),
            None => Ok(lines(all_pc_trees(n)?)),
        },
        Command::Count { what, n, k } => {
            let v = match (what, k) {
                (CountWhat::Networks, Some(k)) => binary_one_nested_count(n, k),
                (CountWhat::Networks, None) => count_one_nested_classes(n)? as u128,
                (CountWhat::Circular, None) => count_circular_systems(n)? as u128,
                (CountWhat::Systems, None) => count_split_systems(n)? as u128,
                (_, Some(_)) => return Err(Failure::Input("-k applies to `count networks` only".into())),
            };
            Ok(format!("{v}\n"))
        }
        Command::BmeVertices { n, k, metric } => {
            let d = metric.map(|f| read(&f).and_then(|t| metric_of(&t))).transpose()?;
            Ok(vertices_csv(n, k, d.as_ref())?)
        }
        Command::BmeMinimize { file, n, k, csv } => {
            let d = metric_of(&read(&file)?)?;
            if let Some(n) = n.filter(|&n| n != d.n()) {
                return Err(Failure::Input(format!("-n {n} does not match the metric's n={}", d.n())));
            }
            if csv {
                return Ok(vertices_csv(d.n(), k, Some(&d))?);
            }
            let (argmin, value) = minimize(&d, d.n(), k)?;
            Ok(format!("{}value: {value}\n", lines(argmin.iter().map(|t| format!("argmin: {t}")))))
        }
        Command::Face { file, k } => Ok(lines(face_vertices(&class_of(&read(&file)?)?, k)?)),
        Command::Verify { suite, n, seed, samples, csv } => {
            let (text, passed, table) = match suite {
                Suite::Galois => {
                    let r = oracle_galois_check(n, samples.unwrap_or(20_000), seed)?;
                    (r.to_string(), r.passed(), None)
                }
                Suite::Wgalois => {
                    let r = weighted_suite_n(n, samples.unwrap_or(200), seed)?;
                    (r.to_string(), r.passed(), Some(r.violations_csv()))
                }
                Suite::Polytope => {
                    let r = polytope_suite(n, samples.unwrap_or(50), seed)?;
                    (r.to_string(), r.passed(), Some(r.violations_csv()))
                }
            };
            let mut out = text;
            if !out.ends_with('\n') {
                out.push('\n');
            }
            if let (true, Some(t)) = (csv, table) {
                out.push_str(&t);
            }
            if passed {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::False("suite reported violations".into()))
            }
        }
        Command::ExportDot { file } => {
            let text = read(&file)?;
            Ok(match kind(&text) {
                Kind::Network => {
                    let (net, w) = parse_network(&text)?;
                    to_dot(&net, w.as_deref())
                }
                _ => to_dot(&class_of(&text)?.to_network(), None),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::False(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
