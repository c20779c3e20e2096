//! Command-line front end. Thin argument parsing and serialization around
//! the library; every computation lives in the other modules.
//!
//! Exit codes: 0 on success, 2 when the input fails validation (bad file,
//! unbalanced graph for a balanced-only analysis, size caps), 1 on
//! internal numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::forests;
use crate::graph::{laplacian, AbsorptionGraph, DEFAULT_BALANCE_TOL};
use crate::inverses::{self, Route};
use crate::motifs::{motif_graph, MotifKind, MotifSpec};
use crate::numerics;
use crate::structure;

#[derive(Parser, Debug)]
#[command(
    name = "absinv",
    version,
    about = "Absorption inverses of graph Laplacians: inverses, distances, centrality, partitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Bottleneck,
    Group,
    Pinv,
    Bordered,
    Forest,
}

impl RouteArg {
    fn to_route(self) -> Route {
        match self {
            RouteArg::Bottleneck => Route::Bottleneck,
            RouteArg::Group => Route::Group,
            RouteArg::Pinv => Route::Pinv,
            RouteArg::Bordered => Route::Bordered,
            RouteArg::Forest => Route::Forest,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the absorption inverse of the graph in the input file.
    Inverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Construction route; `forest` enumerates spanning forests and is
        /// capped at small graphs.
        #[arg(long, value_enum, default_value_t = RouteArg::Bottleneck)]
        route: RouteArg,
    },
    /// Directed distance table (balanced graphs only). Row = source vertex.
    Distance {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Relative tolerance for the balance check.
        #[arg(long, default_value_t = DEFAULT_BALANCE_TOL)]
        balance_tol: f64,
    },
    /// Centrality scores = row sums of the absorption inverse (balanced
    /// graphs only).
    Pagerank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_BALANCE_TOL)]
        balance_tol: f64,
    },
    /// Sign-based bipartition from the symmetrized absorption inverse.
    Partition {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute the partition while varying one vertex's absorption rate.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Vertex whose rate is swept, 1-based.
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        step: f64,
    },
    /// Absorption inverse via exhaustive spanning-forest enumeration, with
    /// the scaled forest weights in the metadata. Small graphs only.
    Forests {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the full invariant suite against the input graph and print one
    /// PASS/FAIL/SKIP line per check.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Tolerance for cross-route agreement.
        #[arg(long, default_value_t = 1e-6)]
        route_tol: f64,
        #[arg(long, default_value_t = DEFAULT_BALANCE_TOL)]
        balance_tol: f64,
    },
    /// Emit a motif graph (complete, star, path, dicycle) as a graph file.
    Motif {
        /// Motif family: complete, star, path, or dicycle.
        #[arg(long)]
        kind: String,
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Uniform edge weight.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Absorption rates: comma-separated list, or a single value
        /// broadcast to every vertex. Defaults to all ones.
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Executes a parsed command. Errors map to exit codes in the binary.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Inverse { input, output, format, route } => {
            cmd_inverse(&input, output.as_deref(), format, route)
        }
        Command::Distance { input, output, format, balance_tol } => {
            cmd_distance(&input, output.as_deref(), format, balance_tol)
        }
        Command::Pagerank { input, output, format, balance_tol } => {
            cmd_pagerank(&input, output.as_deref(), format, balance_tol)
        }
        Command::Partition { input, output, format } => {
            cmd_partition(&input, output.as_deref(), format)
        }
        Command::Sweep { input, output, format, vertex, min, max, step } => {
            cmd_sweep(&input, output.as_deref(), format, vertex, min, max, step)
        }
        Command::Forests { input, output, format } => {
            cmd_forests(&input, output.as_deref(), format)
        }
        Command::Validate { input, output, route_tol, balance_tol } => {
            cmd_validate(&input, output.as_deref(), route_tol, balance_tol)
        }
        Command::Motif { kind, n, a, d, output } => {
            cmd_motif(&kind, n, a, d.as_deref(), output.as_deref())
        }
    }
}

fn write_artifact(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn matrix_csv(m: &Array2<f64>) -> String {
    let n = m.nrows();
    let mut out = String::new();
    for j in 1..=m.ncols() {
        let _ = write!(out, ",{j}");
    }
    out.push('\n');
    for i in 0..n {
        let _ = write!(out, "{}", i + 1);
        for j in 0..m.ncols() {
            let _ = write!(out, ",{}", fmt_num(m[[i, j]]));
        }
        out.push('\n');
    }
    out
}

fn matrix_json(m: &Array2<f64>) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.nrows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.ncols())
                        .map(|j| serde_json::json!(m[[i, j]]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn residuals_json(r: &inverses::DefiningResiduals) -> serde_json::Value {
    serde_json::json!({
        "one_inverse": r.one_inverse,
        "two_inverse": r.two_inverse,
        "kernel": r.kernel,
        "left_projection": r.left_projection,
        "right_projection": r.right_projection,
    })
}

fn cmd_inverse(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    route: RouteArg,
) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let bundle = laplacian(&g)?;
    let (ld, route_name) = match route {
        RouteArg::Forest => {
            let ld = forests::absorption_inverse_forest_oracle(&g)?;
            (ld, "forest")
        }
        other => {
            let r = other.to_route();
            let set = inverses::absorption_inverse(&bundle, g.absorption(), r)?;
            (set.ld, r.name())
        }
    };
    let set_like = inverses::InverseSet {
        ld: ld.clone(),
        group: None,
        pinv: None,
        fundamental: None,
        bottleneck: None,
        route: route.to_route(),
    };
    let resid = set_like.residuals(&bundle, g.absorption());
    let content = match format {
        Format::Csv => matrix_csv(&ld),
        Format::Json => {
            let doc = serde_json::json!({
                "n": g.n(),
                "matrix": matrix_json(&ld),
                "meta": {
                    "route": route_name,
                    "tolerances": { "pivot_rtol": numerics::PIVOT_RTOL },
                    "residuals": residuals_json(&resid),
                },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

fn cmd_distance(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    balance_tol: f64,
) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let bundle = laplacian(&g)?;
    let set = inverses::absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    let balanced = g.is_balanced(balance_tol);
    let dm = structure::distance_matrix(&set.ld, balanced)?;
    let content = match format {
        Format::Csv => matrix_csv(&dm.r),
        Format::Json => {
            let doc = serde_json::json!({
                "n": g.n(),
                "matrix": matrix_json(&dm.r),
                "k": dm.k,
                "meta": {
                    "route": Route::Bottleneck.name(),
                    "tolerances": {
                        "pivot_rtol": numerics::PIVOT_RTOL,
                        "balance_tol": balance_tol,
                    },
                    "orientation": "entry (row j, column i) is the distance from j to i",
                },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

fn cmd_pagerank(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    balance_tol: f64,
) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let bundle = laplacian(&g)?;
    let set = inverses::absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    let balanced = g.is_balanced(balance_tol);
    let cv = structure::pagerank(&set.ld, balanced)?;
    let content = match format {
        Format::Csv => {
            let mut out = String::from("vertex,score,rank\n");
            let mut rank_of = vec![0usize; g.n()];
            for (pos, &v) in cv.ranking.iter().enumerate() {
                rank_of[v] = pos + 1;
            }
            for i in 0..g.n() {
                let _ = writeln!(out, "{},{},{}", i + 1, fmt_num(cv.scores[i]), rank_of[i]);
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "n": g.n(),
                "scores": cv.scores.to_vec(),
                "ranking": cv.ranking.iter().map(|&v| v + 1).collect::<Vec<_>>(),
                "meta": {
                    "route": Route::Bottleneck.name(),
                    "tolerances": {
                        "pivot_rtol": numerics::PIVOT_RTOL,
                        "balance_tol": balance_tol,
                    },
                },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

fn partition_groups(p: &structure::Partition) -> (Vec<usize>, Vec<usize>) {
    let g1 = p.group(1).iter().map(|&v| v + 1).collect();
    let g2 = p.group(2).iter().map(|&v| v + 1).collect();
    (g1, g2)
}

fn cmd_partition(input: &Path, output: Option<&Path>, format: Format) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let bundle = laplacian(&g)?;
    let set = inverses::absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    let part = structure::partition(&set.ld)?;
    let (g1, g2) = partition_groups(&part);
    let content = match format {
        Format::Csv => {
            let mut out = String::from("vertex,group\n");
            for (i, &m) in part.membership.iter().enumerate() {
                let _ = writeln!(out, "{},{m}", i + 1);
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "n": g.n(),
                "group1": g1,
                "group2": g2,
                "eigenvalue": part.eigenpair.value,
                "meta": {
                    "route": Route::Bottleneck.name(),
                    "tolerances": { "eig_tol": 1e-10 },
                    "degenerate": part.degenerate,
                },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

fn cmd_sweep(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    vertex: usize,
    min: f64,
    max: f64,
    step: f64,
) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    if vertex == 0 || vertex > g.n() {
        return Err(Error::Validation(format!(
            "sweep vertex must be in 1..={}, got {vertex}",
            g.n()
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Validation(format!("step must be positive, got {step}")));
    }
    if !(min > 0.0 && min <= max && max.is_finite()) {
        return Err(Error::Validation(format!(
            "need 0 < min <= max, got min {min}, max {max}"
        )));
    }
    let mut values = Vec::new();
    let mut k = 0usize;
    loop {
        let v = min + step * k as f64;
        if v > max * (1.0 + 1e-12) + 1e-12 {
            break;
        }
        values.push(v);
        k += 1;
    }
    let results = structure::partition_sweep(&g, g.absorption(), vertex - 1, &values)?;
    let content = match format {
        Format::Csv => {
            let mut out = String::from("value");
            for j in 1..=g.n() {
                let _ = write!(out, ",{j}");
            }
            out.push('\n');
            for (v, p) in &results {
                let _ = write!(out, "{}", fmt_num(*v));
                for &m in &p.membership {
                    let _ = write!(out, ",{m}");
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|(v, p)| {
                    let (g1, g2) = partition_groups(p);
                    serde_json::json!({
                        "value": v,
                        "group1": g1,
                        "group2": g2,
                        "eigenvalue": p.eigenpair.value,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "n": g.n(),
                "vertex": vertex,
                "sweep": rows,
                "meta": { "route": Route::Bottleneck.name() },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

fn cmd_forests(input: &Path, output: Option<&Path>, format: Format) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let ld = forests::absorption_inverse_forest_oracle(&g)?;
    let scaled = g.absorption_scaled();
    let family = forests::forest_matrices(&scaled)?;
    let bundle = laplacian(&g)?;
    let set_like = inverses::InverseSet {
        ld: ld.clone(),
        group: None,
        pinv: None,
        fundamental: None,
        bottleneck: None,
        route: Route::Forest,
    };
    let resid = set_like.residuals(&bundle, g.absorption());
    let content = match format {
        Format::Csv => matrix_csv(&ld),
        Format::Json => {
            let doc = serde_json::json!({
                "n": g.n(),
                "matrix": matrix_json(&ld),
                "meta": {
                    "route": "forest",
                    "sigma_scaled": family.sigma,
                    "residuals": residuals_json(&resid),
                },
            });
            pretty(&doc)
        }
    };
    write_artifact(output, &content)
}

struct CheckLog {
    lines: Vec<String>,
    failures: usize,
}

impl CheckLog {
    fn new() -> Self {
        CheckLog { lines: Vec::new(), failures: 0 }
    }
    fn pass(&mut self, name: &str, detail: String) {
        self.lines.push(format!("PASS {name}: {detail}"));
    }
    fn fail(&mut self, name: &str, detail: String) {
        self.failures += 1;
        self.lines.push(format!("FAIL {name}: {detail}"));
    }
    fn skip(&mut self, name: &str, reason: &str) {
        self.lines.push(format!("SKIP {name} ({reason})"));
    }
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.pass(name, detail);
        } else {
            self.fail(name, detail);
        }
    }
}

fn cmd_validate(
    input: &Path,
    output: Option<&Path>,
    route_tol: f64,
    balance_tol: f64,
) -> Result<()> {
    let g = AbsorptionGraph::from_path(input)?;
    let bundle = laplacian(&g)?;
    let d = g.absorption();
    let balanced = g.is_balanced(balance_tol);
    let mut log = CheckLog::new();

    let set = inverses::absorption_inverse(&bundle, d, Route::Bottleneck)?;
    let resid = set.residuals(&bundle, d);
    log.check(
        "definition-conditions",
        resid.max() < 1e-8,
        format!("max residual {:.3e}", resid.max()),
    );

    let n = g.n();
    let mut diag_ok = true;
    let mut worst = f64::INFINITY;
    for i in 0..n {
        if set.ld[[i, i]] <= 0.0 {
            diag_ok = false;
        }
        for j in 0..n {
            let slack = set.ld[[i, i]] - set.ld[[i, j]];
            worst = worst.min(slack);
            if slack < -1e-10 {
                diag_ok = false;
            }
        }
    }
    log.check(
        "diagonal-structure",
        diag_ok,
        format!("min diagonal {:.3e}, min row slack {:.3e}",
            (0..n).map(|i| set.ld[[i, i]]).fold(f64::INFINITY, f64::min), worst),
    );

    match inverses::cross_route_check(&bundle, d, route_tol) {
        Ok(rep) => log.pass(
            "route-agreement",
            format!("max deviation {:.3e} ({} vs {})", rep.max_deviation, rep.worst_pair.0, rep.worst_pair.1),
        ),
        Err(Error::RouteDisagreement { max_dev, tol }) => log.fail(
            "route-agreement",
            format!("max deviation {max_dev:.3e} exceeds {tol:.1e}"),
        ),
        Err(e) => return Err(e),
    }

    let mut ident_worst: f64 = 0.0;
    for z in [0.1, 1.0, 10.0] {
        let r = inverses::fundamental_identity_check(&bundle, d, &set.ld, z)?;
        ident_worst = ident_worst.max(r.fundamental).max(r.projection);
    }
    log.check(
        "fundamental-identity",
        ident_worst < 1e-8,
        format!("max residual {ident_worst:.3e} over z in {{0.1, 1, 10}}"),
    );

    if balanced {
        let s = &set.ld + &set.ld.t();
        let neg = s.mapv(|x| -x);
        match numerics::symmetric_leading_eigpair(&neg, 1e-9, 500_000, 17) {
            Ok(pair) => {
                let lambda_min = -pair.value;
                log.check(
                    "psd-symmetrization",
                    lambda_min >= -1e-8 * numerics::inf_norm(&s),
                    format!("min eigenvalue {lambda_min:.3e}"),
                );
            }
            Err(e) => log.fail("psd-symmetrization", format!("eigensolver: {e}")),
        }
        let dm = structure::distance_matrix(&set.ld, true)?;
        let rep = structure::verify_directed_metric(&dm, &set.ld);
        log.check(
            "metric-suite",
            rep.ok(),
            format!(
                "min triangle slack {:.3e}, min four-point slack {:.3e}, {} violations",
                rep.min_triangle_slack,
                rep.min_four_point_slack,
                rep.violations.len()
            ),
        );
    } else {
        log.skip("psd-symmetrization", "unbalanced");
        log.skip("metric-suite", "unbalanced");
    }

    if n <= forests::ENUMERATION_CAP {
        let ld_forest = forests::absorption_inverse_forest_oracle(&g)?;
        let dev = numerics::inf_norm(&(&set.ld - &ld_forest));
        log.check("forest-oracle", dev < 1e-8, format!("deviation {dev:.3e}"));
    } else {
        log.skip("forest-oracle", "size cap");
    }

    let mut report = String::new();
    for line in &log.lines {
        report.push_str(line);
        report.push('\n');
    }
    let _ = writeln!(
        report,
        "{} checks, {} failed",
        log.lines.len(),
        log.failures
    );
    write_artifact(output, &report)?;
    if log.failures > 0 {
        return Err(Error::Validation(format!(
            "{} invariant check(s) failed",
            log.failures
        )));
    }
    Ok(())
}

fn parse_rates(raw: Option<&str>, n: usize) -> Result<Array1<f64>> {
    match raw {
        None => Ok(Array1::ones(n)),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| {
                    p.parse::<f64>().map_err(|_| {
                        Error::Validation(format!("cannot parse absorption rate {p:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            if nums.len() == 1 {
                Ok(Array1::from_elem(n, nums[0]))
            } else if nums.len() == n {
                Ok(Array1::from_vec(nums))
            } else {
                Err(Error::Validation(format!(
                    "expected 1 or {n} absorption rates, got {}",
                    nums.len()
                )))
            }
        }
    }
}

fn cmd_motif(
    kind: &str,
    n: usize,
    a: f64,
    d: Option<&str>,
    output: Option<&Path>,
) -> Result<()> {
    let kind = MotifKind::parse(kind)?;
    let d = parse_rates(d, n)?;
    let spec = MotifSpec::new(kind, n, a, d)?;
    let g = motif_graph(&spec)?;
    let content = g.to_json_string();
    write_artifact(output, &content)
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_parsing() {
        assert_eq!(parse_rates(None, 3).unwrap().to_vec(), vec![1.0, 1.0, 1.0]);
        assert_eq!(parse_rates(Some("2.5"), 3).unwrap().to_vec(), vec![2.5, 2.5, 2.5]);
        assert_eq!(
            parse_rates(Some("1, 2, 3"), 3).unwrap().to_vec(),
            vec![1.0, 2.0, 3.0]
        );
        assert!(parse_rates(Some("1,2"), 3).is_err());
        assert!(parse_rates(Some("1,x,3"), 3).is_err());
    }

    #[test]
    fn seventeen_digit_numbers() {
        let s = fmt_num(std::f64::consts::PI);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
        assert!(s.contains('e'));
    }

    #[test]
    fn csv_layout() {
        let m = ndarray::array![[1.0, 2.0], [3.0, 4.0]];
        let csv = matrix_csv(&m);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], ",1,2");
        assert!(lines[1].starts_with("1,"));
        assert!(lines[2].starts_with("2,"));
    }
}
