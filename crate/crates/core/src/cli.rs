//! Command-line surface: graphs, generating functions, partition values,
//! limits, renormalization, statistics tables and verification reports.
//!
//! Exit contract: 0 ok, 1 verification failure (or runtime error), 2 usage,
//! 3 budget refusal.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use rug::Float;

use crate::acceptance;
use crate::error::{Error, Result};
use crate::fisher;
use crate::genfun::{self, GfLabeling};
use crate::graph::{self, build_rotation_invariant_omega, build_schreier, contract_to_sierpinski};
use crate::group::Family;
use crate::ising::{self, sci20, Couplings, IsingParams, RenormVariant, PREC};
use crate::oracle::{self, Weighting};

#[derive(Parser, Debug)]
#[command(
    name = "schreier-ising",
    version,
    about = "Exact Ising partition functions on self-similar Schreier graphs and Sierpinski graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Build and export graphs.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Compute closed-polygon generating functions.
    Genfun {
        #[command(subcommand)]
        cmd: GenfunCmd,
    },
    /// Partition functions, thermodynamic limits and renormalization.
    Ising {
        #[command(subcommand)]
        cmd: IsingCmd,
    },
    /// Label-count statistics tables.
    Stats {
        #[command(subcommand)]
        cmd: StatsCmd,
    },
    /// The polygon-to-dimer vertex-gadget transform.
    Fisher {
        #[command(subcommand)]
        cmd: FisherCmd,
    },
    /// Verification runs; nonzero exit on any mismatch.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyLevel {
    /// grigorchuk | basilica | hanoi | sierpinski
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub level: u32,
    /// plain | labels | rotation
    #[arg(long, default_value = "plain")]
    pub labeling: String,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Construct a graph and print it as JSON or DOT.
    Build {
        #[command(flatten)]
        target: FamilyLevel,
        /// json | dot
        #[arg(long, default_value = "json")]
        format: String,
        /// Drop loop edges from DOT output.
        #[arg(long)]
        omit_loops: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenfunCmd {
    /// Compute Gamma (and its auxiliary functions) and print JSON.
    Compute {
        #[command(flatten)]
        target: FamilyLevel,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsingCmd {
    /// Exact partition function in y = exp(beta J), or its value at
    /// given beta and couplings.
    Partition {
        #[command(flatten)]
        target: FamilyLevel,
        #[arg(long)]
        beta: Option<f64>,
        /// Coupling: either a plain value or label=value (repeatable).
        #[arg(long = "J")]
        couplings: Vec<String>,
        /// z-grid "start:stop:step" for value mode (overrides beta/J).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Thermodynamic limit with truncation index and tail bound.
    Limit {
        /// grigorchuk | basilica | hanoi | sierpinski
        #[arg(long)]
        family: String,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long = "J")]
        couplings: Vec<String>,
        /// Evaluate directly at z = tanh(beta J).
        #[arg(long)]
        z: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// z-grid "start:stop:step" (emits one CSV row per point).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Renormalization map f(y), prefactor c(y), and the recurrence defect
    /// at a given level.
    Renorm {
        /// sierpinski | hanoi
        #[arg(long)]
        variant: String,
        #[arg(long)]
        y: f64,
        /// Check Z_{n+1}(y) against Z_n(f(y)) c(y)^(3^(n-1)).
        #[arg(long)]
        level: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum StatsCmd {
    /// Exact mean/variance/cumulants per label.
    Labels {
        #[command(flatten)]
        target: FamilyLevel,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FisherCmd {
    /// Apply the vertex-gadget transform to a Sierpinski graph.
    Transform {
        #[command(flatten)]
        target: FamilyLevel,
        /// json | dot
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Compare the brute-force polygon enumeration against the
    /// generating-function formulas for one graph; when the graph is within
    /// the vertex budget, also check the spin sum against the assembled
    /// partition function.
    Oracle {
        #[command(flatten)]
        target: FamilyLevel,
        #[arg(long, default_value_t = oracle::DEFAULT_RANK_BUDGET)]
        budget_rank: u32,
        #[arg(long, default_value_t = oracle::DEFAULT_SPIN_BUDGET)]
        budget_vertices: usize,
    },
    /// Run the full acceptance checklist (or its quick subset).
    All {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_target(t: &FamilyLevel) -> Result<(Family, u32, GfLabeling)> {
    let family = Family::parse(&t.family)?;
    let labeling = GfLabeling::parse(&t.labeling)?;
    if t.level < 1 {
        return Err(Error::InvalidParams("level must be at least 1".into()));
    }
    Ok((family, t.level, labeling))
}

fn build_graph(
    family: Family,
    level: u32,
    labeling: GfLabeling,
) -> Result<graph::LabeledMultigraph> {
    match (family, labeling) {
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            build_rotation_invariant_omega(level)
        }
        (Family::Sierpinski, _) => contract_to_sierpinski(&build_schreier(Family::Hanoi, level)?),
        (_, GfLabeling::RotationInvariant) => Err(Error::InvalidParams(format!(
            "rotation labeling exists only for sierpinski, not {family}"
        ))),
        _ => build_schreier(family, level),
    }
}

fn genfun_for(family: Family, level: u32, labeling: GfLabeling) -> Result<genfun::GenFunSet> {
    match (family, labeling) {
        (Family::Grigorchuk, GfLabeling::Unweighted) => genfun::grigorchuk_gamma(level, false),
        (Family::Grigorchuk, GfLabeling::SchreierLabels) => genfun::grigorchuk_gamma(level, true),
        (Family::Basilica, GfLabeling::Unweighted) => genfun::basilica_gamma(level, false),
        (Family::Basilica, GfLabeling::SchreierLabels) => genfun::basilica_gamma(level, true),
        (Family::Hanoi, GfLabeling::Unweighted) => genfun::hanoi_gamma_recursive(level),
        (Family::Hanoi, GfLabeling::SchreierLabels) => {
            guard_ternary_weighted(family, level, labeling)?;
            genfun::hanoi_gamma_weighted(level)
        }
        (Family::Sierpinski, GfLabeling::Unweighted) => genfun::sierpinski_gamma_recursive(level),
        (Family::Sierpinski, GfLabeling::SchreierLabels) => {
            guard_ternary_weighted(family, level, labeling)?;
            genfun::sierpinski_schreier_weighted(level)
        }
        (Family::Sierpinski, GfLabeling::RotationInvariant) => {
            guard_ternary_weighted(family, level, labeling)?;
            genfun::sierpinski_gamma_rotation_invariant(level)
        }
        (_, GfLabeling::RotationInvariant) => Err(Error::InvalidParams(format!(
            "rotation labeling exists only for sierpinski, not {family}"
        ))),
    }
}

fn guard_ternary_weighted(family: Family, level: u32, labeling: GfLabeling) -> Result<()> {
    ising::guard_weighted_ternary(family, level, labeling)
}

fn parse_couplings(beta: Option<f64>, specs: &[String]) -> Result<Option<IsingParams>> {
    let Some(beta) = beta else {
        if specs.is_empty() {
            return Ok(None);
        }
        return Err(Error::InvalidParams("coupling given without --beta".into()));
    };
    if specs.is_empty() {
        return Err(Error::InvalidParams(
            "--beta given without any --J coupling".into(),
        ));
    }
    let mut per_label = BTreeMap::new();
    let mut uniform = None;
    for s in specs {
        match s.split_once('=') {
            Some((label, v)) => {
                let label = label
                    .chars()
                    .next()
                    .filter(|_| label.chars().count() == 1)
                    .ok_or_else(|| {
                        Error::InvalidParams(format!("bad coupling spec {s}, want label=value"))
                    })?;
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad coupling value in {s}")))?;
                per_label.insert(label, v);
            }
            None => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad coupling value {s}")))?;
                uniform = Some(v);
            }
        }
    }
    let params = match (uniform, per_label.is_empty()) {
        (Some(j), true) => IsingParams::uniform(beta, j),
        (None, false) => IsingParams {
            beta,
            couplings: Couplings::PerLabel(per_label),
        },
        _ => {
            return Err(Error::InvalidParams(
                "give either one plain --J or label=value pairs, not both".into(),
            ))
        }
    };
    params.validate()?;
    Ok(Some(params))
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParams(format!(
            "bad grid {spec}, want start:stop:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| Error::InvalidParams(format!("bad grid number {p}")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidParams(
            "grid needs step > 0 and stop >= start".into(),
        ));
    }
    let mut out = Vec::new();
    let mut x = start;
    while x <= stop + 1e-12 {
        out.push(x);
        x += step;
    }
    Ok(out)
}

pub fn run(cli: Cli, out: &mut impl std::io::Write) -> Result<i32> {
    match cli.cmd {
        Cmd::Graph {
            cmd:
                GraphCmd::Build {
                    target,
                    format,
                    omit_loops,
                },
        } => {
            let (family, level, labeling) = parse_target(&target)?;
            let g = build_graph(family, level, labeling)?;
            match format.as_str() {
                "json" => writeln!(out, "{}", serde_json::to_string(&g.to_json()).unwrap())?,
                "dot" => write!(out, "{}", g.to_dot(!omit_loops))?,
                other => {
                    return Err(Error::InvalidParams(format!(
                        "graph formats are json and dot, got {other}"
                    )))
                }
            }
            Ok(0)
        }
        Cmd::Genfun {
            cmd: GenfunCmd::Compute { target },
        } => {
            let (family, level, labeling) = parse_target(&target)?;
            let gf = genfun_for(family, level, labeling)?;
            writeln!(out, "{}", serde_json::to_string(&gf.to_json()).unwrap())?;
            Ok(0)
        }
        Cmd::Ising { cmd } => run_ising(cmd, out),
        Cmd::Stats {
            cmd: StatsCmd::Labels { target, format },
        } => {
            let (family, level, labeling) = parse_target(&target)?;
            let labeling = if labeling == GfLabeling::Unweighted {
                GfLabeling::SchreierLabels
            } else {
                labeling
            };
            let rows = ising::label_statistics(family, level, labeling)?;
            match format.as_str() {
                "csv" => write!(out, "{}", ising::stats_csv(family, level, labeling, &rows))?,
                "json" => {
                    let items: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "label": r.label.to_string(),
                                "mean": r.stats.mean.to_string(),
                                "variance": r.stats.variance.to_string(),
                                "kappa3": r.stats.k3.to_string(),
                                "kappa4": r.stats.k4.to_string(),
                                "std_skew": r.std_skew.as_ref().map(ising::sci20),
                                "std_excess": r.std_excess.as_ref().map(ising::sci20),
                            })
                        })
                        .collect();
                    let json = serde_json::json!({
                        "family": family.name(),
                        "level": level,
                        "labeling": labeling.as_str(),
                        "labels": items,
                    });
                    writeln!(out, "{}", serde_json::to_string(&json).unwrap())?;
                }
                other => {
                    return Err(Error::InvalidParams(format!(
                        "stats formats are csv and json, got {other}"
                    )))
                }
            }
            Ok(0)
        }
        Cmd::Fisher {
            cmd: FisherCmd::Transform { target, format },
        } => {
            let (family, level, _) = parse_target(&target)?;
            if family != Family::Sierpinski {
                return Err(Error::FamilyMismatch {
                    expected: "sierpinski".into(),
                    found: family.name().into(),
                });
            }
            let omega = contract_to_sierpinski(&build_schreier(Family::Hanoi, level)?)?;
            let (image, _) = fisher::fisher_transform(&omega)?;
            match format.as_str() {
                "json" => writeln!(out, "{}", serde_json::to_string(&image.to_json()).unwrap())?,
                "dot" => write!(out, "{}", image.to_dot(false))?,
                other => {
                    return Err(Error::InvalidParams(format!(
                        "fisher formats are json and dot, got {other}"
                    )))
                }
            }
            Ok(0)
        }
        Cmd::Verify { cmd } => run_verify(cmd, out),
    }
}

fn run_ising(cmd: IsingCmd, out: &mut impl std::io::Write) -> Result<i32> {
    match cmd {
        IsingCmd::Partition {
            target,
            beta,
            couplings,
            grid,
        } => {
            let (family, level, labeling) = parse_target(&target)?;
            if let Some(grid_spec) = grid.as_deref() {
                writeln!(out, "family,level,z,log_Z")?;
                for z in parse_grid(grid_spec)? {
                    let zf = Float::with_val(PREC, z);
                    let lz = ising::log_partition(family, level, &zf, PREC)?;
                    writeln!(out, "{},{},{},{}", family.name(), level, z, sci20(&lz))?;
                }
                return Ok(0);
            }
            match parse_couplings(beta, &couplings)? {
                None => {
                    // Symbolic: exact Laurent polynomial in y (or y_<label>).
                    let z = ising::partition_function_exact(family, level, labeling)?;
                    let json = serde_json::json!({
                        "family": family.name(),
                        "level": level,
                        "labeling": labeling.as_str(),
                        "partition": z.to_json(),
                    });
                    writeln!(out, "{}", serde_json::to_string(&json).unwrap())?;
                }
                Some(params) => match &params.couplings {
                    Couplings::Uniform(_) => {
                        let z = params.z_uniform(PREC)?;
                        let lz = ising::log_partition(family, level, &z, PREC)?;
                        writeln!(out, "family,level,beta,log_Z,Z")?;
                        writeln!(
                            out,
                            "{},{},{},{},{}",
                            family.name(),
                            level,
                            params.beta,
                            sci20(&lz),
                            sci20(&lz.clone().exp())
                        )?;
                    }
                    Couplings::PerLabel(_) => {
                        let zp = ising::partition_function_exact(family, level, labeling)?;
                        let mut asn = BTreeMap::new();
                        for v in zp.vars() {
                            let label = v.trim_start_matches("y_").chars().next().unwrap();
                            let bj = Float::with_val(PREC, params.beta)
                                * Float::with_val(PREC, params.j_for(label)?);
                            asn.insert(v.clone(), bj.exp());
                        }
                        let value = zp.eval_float(&asn, PREC)?;
                        writeln!(out, "family,level,beta,Z")?;
                        writeln!(
                            out,
                            "{},{},{},{}",
                            family.name(),
                            level,
                            params.beta,
                            sci20(&value)
                        )?;
                    }
                },
            }
            Ok(0)
        }
        IsingCmd::Limit {
            family,
            beta,
            couplings,
            z,
            tol,
            grid,
        } => {
            let family = Family::parse(&family)?;
            let zs: Vec<f64> = if let Some(g) = grid.as_deref() {
                parse_grid(g)?
            } else if let Some(z) = z {
                vec![z]
            } else {
                let params = parse_couplings(beta, &couplings)?.ok_or_else(|| {
                    Error::InvalidParams("give --z, --grid, or --beta with --J".into())
                })?;
                vec![params.z_uniform(PREC)?.to_f64()]
            };
            writeln!(out, "family,z,limit,terms,tail_bound")?;
            for zv in zs {
                let zf = Float::with_val(PREC, zv);
                let series = ising::thermodynamic_limit(family, &zf, tol, PREC)?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    family.name(),
                    zv,
                    sci20(&series.value),
                    series.truncation_index,
                    sci20(&series.tail_bound)
                )?;
            }
            Ok(0)
        }
        IsingCmd::Renorm { variant, y, level } => {
            let variant = RenormVariant::parse(&variant)?;
            let yf = Float::with_val(PREC, y);
            let (f, c) = ising::renormalization_step(variant, &yf)?;
            writeln!(out, "f(y) = {}", sci20(&f))?;
            writeln!(out, "c(y) = {}", sci20(&c))?;
            if let Some(n) = level {
                if n < 1 {
                    return Err(Error::InvalidParams("level must be at least 1".into()));
                }
                let defect = ising::renorm_identity_defect(variant, n, &yf)?;
                writeln!(out, "defect(n={n}) = {}", sci20(&defect))?;
            }
            Ok(0)
        }
    }
}

fn run_verify(cmd: VerifyCmd, out: &mut impl std::io::Write) -> Result<i32> {
    match cmd {
        VerifyCmd::Oracle {
            target,
            budget_rank,
            budget_vertices,
        } => {
            let (family, level, labeling) = parse_target(&target)?;
            let g = build_graph(family, level, labeling)?;
            let gamma = genfun_for(family, level, labeling)?.gamma;
            let weighting = if labeling == GfLabeling::Unweighted {
                Weighting::Univariate
            } else {
                Weighting::ByLabel
            };
            let enumerated = oracle::enumerate_polygons(&g, weighting, budget_rank)?;
            let count = enumerated.at_ones();
            if enumerated != gamma {
                writeln!(out, "MISMATCH: enumeration differs from genfun gamma")?;
                return Err(Error::VerificationFailed(format!(
                    "{family} level {level}: enumeration != genfun"
                )));
            }
            writeln!(out, "OK: {count} polygons, genfun == enumeration")?;
            if g.vertex_count() <= budget_vertices {
                let spin_weighting = if labeling == GfLabeling::Unweighted {
                    oracle::SpinWeighting::Uniform
                } else {
                    oracle::SpinWeighting::PerLabel
                };
                let spin = oracle::spin_sum_partition(&g, spin_weighting, budget_vertices)?;
                let assembled = ising::partition_function_exact(family, level, labeling)?;
                if spin != assembled {
                    writeln!(out, "MISMATCH: spin sum differs from assembled Z")?;
                    return Err(Error::VerificationFailed(format!(
                        "{family} level {level}: spin sum != assembled Z"
                    )));
                }
                writeln!(out, "OK: spin sum == assembled partition function")?;
            }
            Ok(0)
        }
        VerifyCmd::All { quick } => {
            let outcomes = acceptance::run_all(quick)?;
            let mut failed = 0;
            for o in &outcomes {
                writeln!(out, "{}", o.line())?;
                if !o.passed {
                    failed += 1;
                    for line in o.detail.lines() {
                        writeln!(out, "    {line}")?;
                    }
                }
            }
            if failed == 0 {
                Ok(0)
            } else {
                writeln!(out, "{failed} criterion(s) failed")?;
                Ok(1)
            }
        }
    }
}
