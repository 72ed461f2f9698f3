//! Seeded verification suites for the weighted maps and the polytope statements.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circular::{ell, is_outer_path, CircularSystem};
use crate::error::{check_bound, check_n, Result};
use crate::metrics::{
    circular_decompose, distance_from_network, distance_from_splits, l_w, s_w, total_weight, Rational,
    WeightedNetwork,
};
use crate::oracle::oracle_decompose;
use crate::pctree::{all_pc_trees, enumerate_binary_one_nested, to_pc_tree, PcTree};
use crate::polytope::{binary_vector_closed_form, face_vertices, minimize, network_vector};
use crate::random::random_weighted_network;
use crate::split::{poset_compare, PosetRelation, SplitSystem};

/// Failure descriptions kept per check.
const KEEP: usize = 20;

/// One named property with the number of instances checked and the failures found.
#[derive(Debug, Clone, Default)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Check {
        Check {
            name: name.to_string(),
            ..Check::default()
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < KEEP {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub title: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Violations as CSV rows `check,detail`.
    pub fn violations_csv(&self) -> String {
        let mut out = String::from("check,detail\n");
        for c in &self.checks {
            for e in &c.examples {
                out.push_str(&format!("{},\"{}\"\n", c.name, e.replace('"', "'")));
            }
        }
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "  [{tag}] {}: {} checked, {} failed", c.name, c.checked, c.failed)?;
            for e in &c.examples {
                writeln!(f, "      {e}")?;
            }
        }
        writeln!(f, "  result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn checks(names: &[&str]) -> BTreeMap<String, Check> {
    names.iter().map(|n| (n.to_string(), Check::new(n))).collect()
}

fn into_report(title: String, names: &[&str], mut map: BTreeMap<String, Check>) -> SuiteReport {
    SuiteReport {
        title,
        checks: names.iter().map(|n| map.remove(*n).expect("declared check")).collect(),
    }
}

pub const WEIGHTED_CHECKS: [&str; 9] = [
    "distance preserved by s_w",
    "s_w is outer-path",
    "l_w(s_w(N)) <= N",
    "l_w(s_w(N)) preserves distances",
    "s_w(l_w(s)) = s",
    "bridge weights do not decrease",
    "d_N Kalmanson for every consistent order",
    "decomposition independent of order",
    "closed form equals linear solve",
];

/// Weighted maps on `instances` random networks with `n` cycling through 5..=8.
pub fn weighted_suite(instances: usize, seed: u64) -> Result<SuiteReport> {
    weighted_run(&[5, 6, 7, 8], instances, seed, format!("weighted suite: {instances} instances, n = 5..8, seed {seed}"))
}

/// Weighted maps on `instances` random networks on `n` leaves.
pub fn weighted_suite_n(n: usize, instances: usize, seed: u64) -> Result<SuiteReport> {
    check_n(n)?;
    weighted_run(&[n], instances, seed, format!("weighted suite: {instances} instances, n = {n}, seed {seed}"))
}

fn weighted_run(ns: &[usize], instances: usize, seed: u64, title: String) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = checks(&WEIGHTED_CHECKS);
    for i in 0..instances {
        let n = ns[i % ns.len()];
        let wn = random_weighted_network(n, 0.1, &mut rng)?;
        let label = || format!("instance {i} (n={n}, {})", to_pc_tree(wn.network()).map(|t| t.to_string()).unwrap_or_default());
        let d = distance_from_network(&wn);
        let s = s_w(&wn)?;
        let ck = |c: &mut BTreeMap<String, Check>, name: &str, ok: bool, extra: &dyn Fn() -> String| {
            c.get_mut(name).expect("declared").record(ok, || format!("{}: {}", label(), extra()));
        };

        ck(&mut c, WEIGHTED_CHECKS[0], distance_from_splits(&s) == d, &|| format!("s_w = {s}"));
        let cs = CircularSystem::new(s.underlying())?;
        ck(&mut c, WEIGHTED_CHECKS[1], is_outer_path(&cs)?, &|| format!("s_w = {s}"));

        let back = l_w(&s)?;
        let rel = poset_compare(&back.network().displayed_splits()?, &wn.network().displayed_splits()?)?;
        ck(
            &mut c,
            WEIGHTED_CHECKS[2],
            matches!(rel, PosetRelation::LessThan | PosetRelation::Equal),
            &|| format!("relation {rel:?}"),
        );
        ck(&mut c, WEIGHTED_CHECKS[3], distance_from_network(&back) == d, &|| {
            format!("s_w = {s}")
        });
        let again = s_w(&back)?;
        ck(&mut c, WEIGHTED_CHECKS[4], again == s, &|| format!("{s} became {again}"));

        let stats = wn.network().classify();
        for &e in &stats.bridges {
            let split = wn.network().cut_split(&[e])?;
            let (have, need) = (s.weight(&split), wn.weights()[e].clone());
            ck(&mut c, WEIGHTED_CHECKS[5], have >= need, &|| {
                format!("bridge {split} weight {need}, split weight {have}")
            });
        }

        let orders = to_pc_tree(wn.network())?.consistent_orders();
        for o in &orders {
            match circular_decompose(&d, o) {
                Ok(x) => {
                    ck(&mut c, WEIGHTED_CHECKS[6], true, &String::new);
                    if orders.len() > 1 {
                        ck(&mut c, WEIGHTED_CHECKS[7], x == s, &|| format!("order {o} gives {x}"));
                    }
                }
                Err(err) => ck(&mut c, WEIGHTED_CHECKS[6], false, &|| format!("order {o}: {err}")),
            }
        }
        let o = &orders[0];
        let oracle = oracle_decompose(&d, o);
        let fast = circular_decompose(&d, o);
        ck(&mut c, WEIGHTED_CHECKS[8], oracle.as_ref().ok() == fast.as_ref().ok() && oracle.is_ok(), &|| {
            format!("order {o}: oracle {oracle:?}, closed form {fast:?}")
        });
    }
    Ok(into_report(title, &WEIGHTED_CHECKS, c))
}

pub const POLYTOPE_CHECKS: [&str; 12] = [
    "closed-form vectors equal order sums",
    "argmin equals prediction, every k (literal)",
    "argmin equals prediction where prediction is nonempty",
    "literal mismatches all have empty prediction",
    "min = 2^(k+1) W, every k (literal)",
    "min = 2^(k+1) W where prediction is nonempty",
    "min > 2^(k+1) W where prediction is empty",
    "face of N inside face of ell(s_w(N))",
    "faces mirror the network poset",
    "smallest k with unique argmin = bridges of s_w (literal)",
    "smallest k with unique argmin = bridges of ell(s_w), binary ell",
    "literal smallest-k mismatches have non-binary ell or a zero-weight bridge",
];

/// Polytope statements for `instances` random weighted networks on `n` leaves (n = 5 or 6).
pub fn polytope_suite(n: usize, instances: usize, seed: u64) -> Result<SuiteReport> {
    check_bound("polytope suite", n, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
    let mut c = checks(&POLYTOPE_CHECKS);
    let ks: Vec<usize> = (0..=n - 3).collect();
    let vertices: Vec<Vec<(PcTree, SplitSystem)>> = ks
        .iter()
        .map(|&k| {
            Ok(enumerate_binary_one_nested(n, k)?
                .into_iter()
                .map(|t| {
                    let s = t.splits();
                    (t, s)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    for (k, vs) in vertices.iter().enumerate() {
        for (t, _) in vs {
            let ok = binary_vector_closed_form(t)? == network_vector(t)?;
            c.get_mut(POLYTOPE_CHECKS[0]).expect("declared").record(ok, || format!("k={k}: {t}"));
        }
    }

    for i in 0..instances {
        let wn: WeightedNetwork = random_weighted_network(n, 0.1, &mut rng)?;
        let tree = to_pc_tree(wn.network())?;
        let d = distance_from_network(&wn);
        let s = s_w(&wn)?;
        let under = s.underlying();
        let w = total_weight(&s);
        let bridges = s.nontrivial_bridge_count();
        let lower = ell(&CircularSystem::new(under.clone())?)?;
        let label = format!("instance {i}: N = {tree}, ell(s_w) = {lower}");
        let mut first_unique = None;
        for &k in &ks {
            let (argmin, min) = minimize(&d, n, k)?;
            if first_unique.is_none() && argmin.len() == 1 {
                first_unique = Some(k);
            }
            let predicted: Vec<PcTree> =
                vertices[k].iter().filter(|(_, sp)| under.is_subset(sp)).map(|(t, _)| t.clone()).collect();
            let target = Rational::from_integer(BigInt::from(1u64 << (k + 1))) * &w;
            let eq = argmin == predicted;
            let describe = || {
                format!(
                    "{label}, k={k}: argmin {} vertices, predicted {}, min {min}, 2^(k+1) W = {target}",
                    argmin.len(),
                    predicted.len()
                )
            };
            let mut rec = |name: &str, ok: bool| {
                c.get_mut(name).expect("declared").record(ok, describe);
            };
            rec(POLYTOPE_CHECKS[1], eq);
            rec(POLYTOPE_CHECKS[4], min == target);
            if predicted.is_empty() {
                rec(POLYTOPE_CHECKS[6], min > target);
            } else {
                rec(POLYTOPE_CHECKS[2], eq);
                rec(POLYTOPE_CHECKS[5], min == target);
            }
            if !eq {
                rec(POLYTOPE_CHECKS[3], predicted.is_empty());
            }
        }

        // vertex sets: a zero-weight bridge can leave ell(s_w) with fewer bridges than N
        let m = tree.internal_edge_count();
        let lower_splits = lower.splits();
        for k in 0..=m.min(n - 3) {
            let inner = face_vertices(&tree, k)?;
            let ok = inner.iter().all(|v| lower_splits.is_subset(&v.splits()));
            c.get_mut(POLYTOPE_CHECKS[7])
                .expect("declared")
                .record(ok, || format!("{label}, k={k}"));
        }

        // a zero-weight bridge of N is absent from s_w but restored by the closure
        let exterior_bridges = lower.internal_edge_count();
        let ok = first_unique == Some(bridges);
        let detail = || {
            format!(
                "{label}: bridges of s_w = {bridges}, of ell(s_w) = {exterior_bridges}, first unique argmin at k = {first_unique:?}"
            )
        };
        c.get_mut(POLYTOPE_CHECKS[9]).expect("declared").record(ok, detail);
        if lower.is_binary() {
            c.get_mut(POLYTOPE_CHECKS[10])
                .expect("declared")
                .record(first_unique == Some(exterior_bridges), detail);
        }
        if !ok {
            c.get_mut(POLYTOPE_CHECKS[11])
                .expect("declared")
                .record(!lower.is_binary() || bridges != exterior_bridges, detail);
        }
    }

    if n == 5 {
        let classes = all_pc_trees(n)?;
        let splits: Vec<SplitSystem> = classes.iter().map(PcTree::splits).collect();
        for (a, sa) in classes.iter().zip(&splits) {
            for (b, sb) in classes.iter().zip(&splits) {
                if a == b || !sa.is_subset(sb) {
                    continue;
                }
                let top = a.internal_edge_count().min(b.internal_edge_count()).min(n - 3);
                for k in 0..=top {
                    let fa = face_vertices(a, k)?;
                    let fb = face_vertices(b, k)?;
                    let ok = fb.iter().all(|v| fa.contains(v));
                    c.get_mut(POLYTOPE_CHECKS[8])
                        .expect("declared")
                        .record(ok, || format!("{a} <= {b}, k={k}"));
                }
            }
        }
    }

    Ok(into_report(
        format!("polytope suite: n = {n}, {instances} instances, seed {seed}"),
        &POLYTOPE_CHECKS,
        c,
    ))
}
