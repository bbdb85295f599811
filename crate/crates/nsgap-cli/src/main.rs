mod inputs;
mod report;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;
use serde_json::{json, Value as Json};

use nsgap::bounds::{self, BoundParams, Modulus};
use nsgap::cube;
use nsgap::embed;
use nsgap::gamma::{self, Configuration, Witness};
use nsgap::graphs::{self, LowerBoundContext, RegularGraph};
use nsgap::markov;
use nsgap::mazur;
use nsgap::metric::{graph_metric, hamming_cube, power_kernel, FiniteMetric};
use nsgap::numeric::rng_for;
use nsgap::spectral::StochasticMatrix;
use nsgap::{Value, TOL};

use inputs::{
    load_cloud, load_cube, load_edges, load_matrix, load_metric, parse_index_list,
    parse_real_list, parse_value, IndexList, RealList,
};
use report::{atomic_write, csv_field, csv_preamble, emit_json, emit_text, envelope, Failure};

const GRAPH_COLUMNS: &str = "n,d,seed,lambda2,lambda,rms,bound,proxy";

#[derive(Parser)]
#[command(
    name = "nsgap",
    version,
    about = "Nonlinear spectral gaps, comparison bounds, and average-distortion embeddings"
)]
struct Cli {
    /// RNG seed; mandatory for every randomized subcommand.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker pool size for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Kernel-evaluation budget for exact enumeration.
    #[arg(long, global = true, default_value_t = gamma::DEFAULT_BUDGET)]
    budget: u64,

    /// Report file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, lambda2, and lambda of a symmetric stochastic matrix.
    Spectral {
        /// Matrix file: JSON rows, or dense text with a leading size line.
        #[arg(long)]
        matrix: PathBuf,
        /// Replace A by the lazy walk (I+A)/2 first.
        #[arg(long)]
        lazy: bool,
        /// Then raise to this power.
        #[arg(long)]
        power: Option<u32>,
        /// Include eigenvectors in the report.
        #[arg(long)]
        vectors: bool,
    },

    /// Build a distance matrix (or its p-th power kernel) from a source.
    Metric {
        /// Edge-list file: first line n, then "u v" lines.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Point-cloud file: {"p": number|"inf", "points": [[..],..]}.
        #[arg(long)]
        cloud: Option<PathBuf>,
        /// Hamming cube {0,1}^n; also reports the cube walk matrix.
        #[arg(long)]
        cube: Option<usize>,
        /// Emit d(i,j)^p kernel values instead of distances.
        #[arg(long)]
        power: Option<f64>,
    },

    /// gamma / gamma-plus of a matrix against a metric kernel.
    Gamma {
        #[arg(long)]
        matrix: PathBuf,
        /// Distance matrix or point cloud; the space X of the kernel.
        #[arg(long, required_unless_present = "eigen", conflicts_with = "eigen")]
        metric: Option<PathBuf>,
        /// Kernel exponent p >= 1.
        #[arg(long, required_unless_present = "eigen")]
        p: Option<f64>,
        /// Two-configuration variant (gamma-plus).
        #[arg(long)]
        plus: bool,
        /// Sampled lower bound with this many trials instead of enumeration.
        #[arg(long, conflicts_with = "eigen")]
        sampled: Option<u64>,
        /// Real-line p = 2 value from the spectrum alone.
        #[arg(long)]
        eigen: bool,
    },

    /// Closed-form comparison bounds.
    Bound {
        #[command(subcommand)]
        which: BoundCmd,
    },

    /// Mazur-map modulus sampling in the normalized unit ball of l_p^dim.
    Mazur {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        dim: usize,
    },

    /// Cube-function functionals.
    Cube {
        #[command(subcommand)]
        which: CubeCmd,
    },

    /// Markov-type verification batches.
    Markov {
        #[command(subcommand)]
        which: MarkovCmd,
    },

    /// Average-distortion embeddings and duality certificates.
    Embed {
        #[command(subcommand)]
        which: EmbedCmd,
    },

    /// Regular-graph experiments; CSV rows n,d,seed,lambda2,lambda,rms,bound,proxy.
    Graphs {
        #[command(subcommand)]
        which: GraphsCmd,
    },

    /// Parameter-grid sweeps; one CSV row per cell, failures recorded per row.
    Sweep {
        #[command(subcommand)]
        which: SweepCmd,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Certified two-point lower bound from the best cut.
    Cut {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Hilbertian reference 1/sqrt(1 - lambda2).
    Cheeger {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Extrapolated p-th power bound (C p)^p / (1-lambda2)^{p/2}.
    Matousek {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
    /// l_p gap bound: min of C p^2/(1-lambda2) and C p/(1-lambda^{2/p}).
    Lp {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
    /// Gap transfer through a uniform homeomorphism with moduli alpha, beta.
    Ozawa {
        /// Known gap of the target space, >= 1.
        #[arg(long)]
        gamma_y: f64,
        #[arg(long)]
        q: f64,
        /// Lower modulus as c*t^e; identity when omitted.
        #[arg(long, requires = "alpha_exponent")]
        alpha_coeff: Option<f64>,
        #[arg(long, requires = "alpha_coeff")]
        alpha_exponent: Option<f64>,
        /// Inverse of the upper modulus as c*t^e; identity when omitted.
        #[arg(long, requires = "beta_inv_exponent")]
        beta_inv_coeff: Option<f64>,
        #[arg(long, requires = "beta_inv_coeff")]
        beta_inv_exponent: Option<f64>,
    },
    /// Interpolation-space bound from gaps of the endpoint spaces.
    Interpolation {
        /// Endpoint gap; a number or "inf".
        #[arg(long, value_parser = parse_value)]
        gamma_x: Value,
        /// Endpoint gap; a number or "inf".
        #[arg(long, value_parser = parse_value)]
        gamma_y: Value,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Convexity exponent of the interpolated norm, in [1, 2].
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        smoothness_const: f64,
        #[arg(long, default_value_t = 1.0)]
        convexity_const: f64,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
    /// Refined Markov-type sum C p Sum_{t<m} (1 - (2/p)(1-lambda2))^t.
    Markov {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
    /// Both smoothness-interpolation forms at exponent q and parameter theta.
    Smoothness {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        smoothness_const: f64,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
}

#[derive(Subcommand)]
enum CubeCmd {
    /// Directional energy E_k(f) at exponent q.
    Ek {
        /// Cube function file {"n": .., "values": [[..],..], "p"?: ..}.
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: f64,
    },
    /// E_k of the cylindrical lift to dimension --to, plus the closed form.
    Lift {
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: f64,
    },
    /// The E_n(f)^p / sum of E_1-type energies ratio.
    Bmw {
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// One step of the distance-doubling lift; reports all image distances.
    Mp {
        #[arg(long)]
        cube: PathBuf,
    },
    /// Level function with root-mean-square spread on the order of n^{1/4}.
    Witness {
        /// Even cube dimension.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum MarkovCmd {
    /// Power-m comparison: gamma by enumeration, then random configuration
    /// batches checking Sum (A^m) d^p <= 3^p gamma Sum A d^p.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: u32,
        /// Minimum number of random configurations to test.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// 1-Lipschitz nonconstant map to the real line.
    Line {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        p: f64,
        /// Zero-set draws per scale.
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Random zero-set embedding into l_p with O(1 + (ln n)/p) distortion.
    Bourgain {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Gaussian projection of a euclidean cloud to a lower dimension.
    Jl {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Maximum-spread Gram relaxation; the average-distortion certificate.
    Sdp {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Feasibility split at threshold K: an averaged embedding of X into
    /// powers of Y, or a matrix separating their gaps.
    Duality {
        /// Source space X (distance matrix or cloud).
        #[arg(long)]
        source: PathBuf,
        /// Target space Y (distance matrix or cloud).
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        eps: Option<f64>,
    },
}

#[derive(Subcommand)]
enum GraphsCmd {
    /// Pairing-model random d-regular graph.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        /// Also write the edge list here (text, reloadable via --graph).
        #[arg(long)]
        edges_out: Option<PathBuf>,
    },
    /// Random abelian Cayley graph on Z_n with ~(3/eps^2) ln n generators.
    Cayley {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long)]
        edges_out: Option<PathBuf>,
    },
    /// Distortion lower bound sqrt(1-lambda^{2/p})/sqrt(p) * rms at each p.
    Lowerbound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Comma-separated exponents, each >= 2.
        #[arg(long, value_parser = parse_real_list)]
        p: RealList,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
    },
    /// Largest p whose lower bound still clears the threshold.
    Pindex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    /// n-grid x seed-grid of p-index proxies for random regular graphs.
    Pindex {
        /// Comma-separated vertex counts.
        #[arg(long, value_parser = parse_index_list)]
        n: IndexList,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Seed list with ranges, e.g. "1..20".
        #[arg(long, value_parser = parse_index_list)]
        seeds: IndexList,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// p-grid x m-grid of refined Markov bounds for one matrix.
    MarkovBound {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated exponents, each >= 2.
        #[arg(long, value_parser = parse_real_list)]
        p: RealList,
        /// Step-count list with ranges, e.g. "1..6".
        #[arg(long, value_parser = parse_index_list)]
        m: IndexList,
        #[arg(long, default_value_t = 1.0)]
        universal_c: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Globals {
    seed: Option<u64>,
    threads: usize,
    budget: u64,
    out: Option<PathBuf>,
}

impl Globals {
    fn require_seed(&self) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::validation("this command draws randomness; pass --seed"))
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = Globals {
        seed: cli.seed,
        threads: cli.threads,
        budget: cli.budget,
        out: cli.out,
    };
    match cli.command {
        Command::Spectral {
            matrix,
            lazy,
            power,
            vectors,
        } => cmd_spectral(&g, &matrix, lazy, power, vectors),
        Command::Metric {
            graph,
            cloud,
            cube,
            power,
        } => cmd_metric(&g, graph, cloud, cube, power),
        Command::Gamma {
            matrix,
            metric,
            p,
            plus,
            sampled,
            eigen,
        } => cmd_gamma(&g, &matrix, metric, p, plus, sampled, eigen),
        Command::Bound { which } => cmd_bound(&g, which),
        Command::Mazur { p, q, samples, dim } => cmd_mazur(&g, p, q, samples, dim),
        Command::Cube { which } => cmd_cube(&g, which),
        Command::Markov { which } => cmd_markov(&g, which),
        Command::Embed { which } => cmd_embed(&g, which),
        Command::Graphs { which } => cmd_graphs(&g, which),
        Command::Sweep { which } => cmd_sweep(&g, which),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Json {
    serde_json::to_value(value).expect("reports serialize")
}

fn path_json(p: &Path) -> Json {
    json!(p.display().to_string())
}

fn opt_path_json(p: Option<&Path>) -> Json {
    match p {
        Some(p) => path_json(p),
        None => Json::Null,
    }
}

fn cmd_spectral(
    g: &Globals,
    matrix: &Path,
    lazy: bool,
    power: Option<u32>,
    vectors: bool,
) -> Result<u8, Failure> {
    let mut a = load_matrix(matrix)?;
    if lazy {
        a = a.lazy();
    }
    if let Some(m) = power {
        a = a.power(m);
    }
    let s = a.eigen()?;
    let mut result = json!({
        "eigenvalues": s.eigenvalues,
        "lambda2": s.lambda2,
        "lambdaAbs": s.lambda_abs,
    });
    if vectors {
        result["vectors"] = to_json(&s.vectors);
    }
    let spec = json!({
        "matrix": path_json(matrix), "lazy": lazy, "power": power,
        "vectors": vectors, "out": opt_path_json(g.out()),
    });
    let calibration = json!({ "spectralUnit": TOL.spectral_unit });
    emit_json(&envelope("spectral", spec, calibration, result), g.out())?;
    Ok(0)
}

fn metric_rows(x: &FiniteMetric) -> Vec<Vec<f64>> {
    x.rows()
}

fn cmd_metric(
    g: &Globals,
    graph: Option<PathBuf>,
    cloud: Option<PathBuf>,
    cube: Option<usize>,
    power: Option<f64>,
) -> Result<u8, Failure> {
    let picked = graph.is_some() as u8 + cloud.is_some() as u8 + cube.is_some() as u8;
    if picked != 1 {
        return Err(Failure::validation(
            "pass exactly one of --graph, --cloud, --cube",
        ));
    }
    let mut walk: Option<StochasticMatrix> = None;
    let (source, metric) = if let Some(path) = &graph {
        let (n, edges) = load_edges(path)?;
        (
            json!({ "graph": path_json(path) }),
            graph_metric(n, &edges)?,
        )
    } else if let Some(path) = &cloud {
        let cloud = load_cloud(path)?;
        (
            json!({ "cloud": path_json(path) }),
            nsgap::metric::lp_metric(&cloud),
        )
    } else {
        let n = cube.unwrap();
        let (_, metric, cube_walk) = hamming_cube(n)?;
        walk = Some(cube_walk);
        (json!({ "cube": n }), metric)
    };
    let mut result = match power {
        None => json!({ "size": metric.size(), "values": metric_rows(&metric) }),
        Some(p) => {
            let kernel = power_kernel(&metric, p)?;
            let n = kernel.size();
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| kernel.get(i, j)).collect())
                .collect();
            json!({ "size": n, "values": rows, "pExponent": p })
        }
    };
    if let Some(w) = walk {
        result["walk"] = to_json(&w.rows());
    }
    let spec = json!({
        "source": source, "power": power, "out": opt_path_json(g.out()),
    });
    emit_json(&envelope("metric", spec, json!({}), result), g.out())?;
    Ok(0)
}

fn cmd_gamma(
    g: &Globals,
    matrix: &Path,
    metric: Option<PathBuf>,
    p: Option<f64>,
    plus: bool,
    sampled: Option<u64>,
    eigen: bool,
) -> Result<u8, Failure> {
    let a = load_matrix(matrix)?;
    let estimate = if eigen {
        if let Some(p) = p {
            if p != 2.0 {
                return Err(Failure::validation(
                    "the eigen method is the p = 2 real-line case",
                ));
            }
        }
        if plus {
            gamma::gamma_plus_eigen(&a)?
        } else {
            gamma::gamma_eigen(&a)?
        }
    } else {
        let x = load_metric(metric.as_deref().expect("clap requires --metric"))?;
        let p = p.expect("clap requires --p");
        match sampled {
            Some(trials) => {
                let seed = g.require_seed()?;
                if plus {
                    gamma::gamma_plus_sampled(&a, &x, p, trials, seed)?
                } else {
                    gamma::gamma_sampled(&a, &x, p, trials, seed)?
                }
            }
            None => {
                if plus {
                    gamma::gamma_plus_exact(&a, &x, p, g.budget)?
                } else {
                    gamma::gamma_exact(&a, &x, p, g.budget)?
                }
            }
        }
    };
    let spec = json!({
        "matrix": path_json(matrix),
        "metric": opt_path_json(metric.as_deref()),
        "p": p, "plus": plus, "sampled": sampled, "eigen": eigen,
        "seed": g.seed, "budget": g.budget, "out": opt_path_json(g.out()),
    });
    emit_json(
        &envelope("gamma", spec, json!({}), to_json(&estimate)),
        g.out(),
    )?;
    Ok(0)
}

fn cmd_bound(g: &Globals, which: BoundCmd) -> Result<u8, Failure> {
    let defaults = BoundParams::default();
    let (report, spec): (Json, Json) = match which {
        BoundCmd::Cut { matrix } => {
            let a = load_matrix(&matrix)?;
            (
                to_json(&gamma::cut_bound(&a)?),
                json!({ "bound": "cut", "matrix": path_json(&matrix) }),
            )
        }
        BoundCmd::Cheeger { matrix } => {
            let a = load_matrix(&matrix)?;
            (
                to_json(&bounds::cheeger_reference(&a)?),
                json!({ "bound": "cheeger", "matrix": path_json(&matrix) }),
            )
        }
        BoundCmd::Matousek {
            matrix,
            p,
            universal_c,
        } => {
            let a = load_matrix(&matrix)?;
            let params = BoundParams {
                universal_c,
                ..defaults
            };
            (
                to_json(&bounds::matousek_bound(&a, p, &params)?),
                json!({
                    "bound": "matousek", "matrix": path_json(&matrix),
                    "p": p, "universalC": universal_c,
                }),
            )
        }
        BoundCmd::Lp {
            matrix,
            p,
            universal_c,
        } => {
            let a = load_matrix(&matrix)?;
            let params = BoundParams {
                universal_c,
                ..defaults
            };
            (
                to_json(&bounds::lp_gamma_bound(&a, p, &params)?),
                json!({
                    "bound": "lp", "matrix": path_json(&matrix),
                    "p": p, "universalC": universal_c,
                }),
            )
        }
        BoundCmd::Ozawa {
            gamma_y,
            q,
            alpha_coeff,
            alpha_exponent,
            beta_inv_coeff,
            beta_inv_exponent,
        } => {
            let alpha = modulus_from(alpha_coeff, alpha_exponent)?;
            let beta_inv = modulus_from(beta_inv_coeff, beta_inv_exponent)?;
            (
                to_json(&bounds::ozawa_bound(gamma_y, q, &alpha, &beta_inv)?),
                json!({
                    "bound": "ozawa", "gammaY": gamma_y, "q": q,
                    "alpha": to_json(&alpha), "betaInverse": to_json(&beta_inv),
                }),
            )
        }
        BoundCmd::Interpolation {
            gamma_x,
            gamma_y,
            theta,
            p,
            q,
            r,
            smoothness_const,
            convexity_const,
            universal_c,
        } => {
            let params = BoundParams {
                theta,
                smoothness_const,
                convexity_const,
                universal_c,
                ..defaults
            };
            (
                to_json(&bounds::interpolation_bound(
                    gamma_x, gamma_y, &params, p, q, r,
                )?),
                json!({
                    "bound": "interpolation",
                    "gammaX": gamma_x, "gammaY": gamma_y, "theta": theta,
                    "p": p, "q": q, "r": r,
                    "smoothnessConst": smoothness_const,
                    "convexityConst": convexity_const, "universalC": universal_c,
                }),
            )
        }
        BoundCmd::Markov {
            matrix,
            p,
            m,
            universal_c,
        } => {
            let a = load_matrix(&matrix)?;
            let params = BoundParams {
                universal_c,
                ..defaults
            };
            (
                to_json(&bounds::refined_markov_bound(&a, p, m, &params)?),
                json!({
                    "bound": "markov", "matrix": path_json(&matrix),
                    "p": p, "m": m, "universalC": universal_c,
                }),
            )
        }
        BoundCmd::Smoothness {
            matrix,
            q,
            theta,
            smoothness_const,
            universal_c,
        } => {
            let a = load_matrix(&matrix)?;
            let params = BoundParams {
                q,
                theta,
                smoothness_const,
                universal_c,
                ..defaults
            };
            let reports = bounds::smoothness_interp_bound(&a, &params)?;
            (
                json!({ "bounds": to_json(&reports) }),
                json!({
                    "bound": "smoothness", "matrix": path_json(&matrix),
                    "q": q, "theta": theta,
                    "smoothnessConst": smoothness_const, "universalC": universal_c,
                }),
            )
        }
    };
    let mut spec = spec;
    spec["out"] = opt_path_json(g.out());
    emit_json(&envelope("bound", spec, json!({}), report), g.out())?;
    Ok(0)
}

fn modulus_from(coeff: Option<f64>, exponent: Option<f64>) -> Result<Modulus, Failure> {
    match (coeff, exponent) {
        (Some(c), Some(e)) => Ok(Modulus::power(c, e)?),
        _ => Ok(Modulus::Identity),
    }
}

fn cmd_mazur(g: &Globals, p: f64, q: f64, samples: u64, dim: usize) -> Result<u8, Failure> {
    let seed = g.require_seed()?;
    if samples == 0 {
        return Err(Failure::validation("--samples must be at least 1"));
    }
    if dim == 0 {
        return Err(Failure::validation("--dim must be at least 1"));
    }
    // Coordinates uniform in [-1, 1] already lie in the normalized-norm
    // unit ball for every p.
    let mut rng = rng_for(seed, 211);
    let mut draw = |buf: &mut Vec<f64>| {
        buf.clear();
        buf.extend((0..dim).map(|_| rng.gen_range(-1.0..=1.0)));
    };
    let mut f = Vec::with_capacity(dim);
    let mut h = Vec::with_capacity(dim);
    let mut lower_violations = 0u64;
    let mut upper_violations = 0u64;
    let mut min_lower_margin = f64::INFINITY;
    let mut min_upper_margin = f64::INFINITY;
    for _ in 0..samples {
        draw(&mut f);
        draw(&mut h);
        let check = mazur::modulus_check(&f, &h, p, q)?;
        if !check.lower_ok {
            lower_violations += 1;
        }
        if !check.upper_ok {
            upper_violations += 1;
        }
        min_lower_margin = min_lower_margin.min(check.lower_margin);
        min_upper_margin = min_upper_margin.min(check.upper_margin);
    }
    let result = json!({
        "samples": samples, "dim": dim,
        "lowerViolations": lower_violations, "upperViolations": upper_violations,
        "minLowerMargin": min_lower_margin, "minUpperMargin": min_upper_margin,
    });
    let spec = json!({
        "p": p, "q": q, "samples": samples, "dim": dim,
        "seed": seed, "out": opt_path_json(g.out()),
    });
    emit_json(&envelope("mazur", spec, json!({}), result), g.out())?;
    Ok(0)
}

fn cmd_cube(g: &Globals, which: CubeCmd) -> Result<u8, Failure> {
    let (result, spec): (Json, Json) = match which {
        CubeCmd::Ek { cube: path, k, q } => {
            let f = load_cube(&path)?;
            (
                json!({ "value": cube::ek(&f, k, q)? }),
                json!({ "op": "ek", "cube": path_json(&path), "k": k, "q": q }),
            )
        }
        CubeCmd::Lift {
            cube: path,
            to,
            k,
            q,
        } => {
            let f = load_cube(&path)?;
            let lifted = f.lift(to)?;
            (
                json!({
                    "lifted": cube::ek(&lifted, k, q)?,
                    "formula": cube::lifted_ek_formula(&f, to, k, q)?,
                }),
                json!({ "op": "lift", "cube": path_json(&path), "to": to, "k": k, "q": q }),
            )
        }
        CubeCmd::Bmw { cube: path, p } => {
            let f = load_cube(&path)?;
            (
                json!({ "value": cube::bmw_ratio(&f, p)? }),
                json!({ "op": "bmw", "cube": path_json(&path), "p": p }),
            )
        }
        CubeCmd::Mp { cube: path } => {
            let f = load_cube(&path)?;
            let lifted = cube::mp_lift_construction(&f)?;
            let v = lifted.vertices();
            let rows: Vec<Vec<f64>> = (0..v)
                .map(|x| (0..v).map(|y| lifted.distance(x, y)).collect())
                .collect();
            (
                json!({ "n": lifted.n(), "distances": rows }),
                json!({ "op": "mp", "cube": path_json(&path) }),
            )
        }
        CubeCmd::Witness { n } => (
            to_json(&cube::quarter_root_witness(n)?),
            json!({ "op": "witness", "n": n }),
        ),
    };
    let mut spec = spec;
    spec["out"] = opt_path_json(g.out());
    emit_json(&envelope("cube", spec, json!({}), result), g.out())?;
    Ok(0)
}

fn cmd_markov(g: &Globals, which: MarkovCmd) -> Result<u8, Failure> {
    let MarkovCmd::Check {
        matrix,
        metric,
        p,
        m,
        trials,
    } = which;
    let seed = g.require_seed()?;
    let a = load_matrix(&matrix)?;
    let x = load_metric(&metric)?;
    let estimate = gamma::gamma_exact(&a, &x, p, g.budget)?;
    let witness = match &estimate.witness {
        Witness::Assignment { indices } => Some(Configuration(indices.clone())),
        _ => None,
    };
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    let mut skipped = false;
    let mut note: Option<String> = None;
    let mut batches = 0u64;
    // Each batch tests the witness, a fresh random batch, and (small spaces)
    // the full enumeration; loop until the requested floor is met. When the
    // enumeration already covers the whole configuration space, repeat
    // batches would retread the same ground, so one suffices.
    let exhaustive = (x.size() as u128)
        .checked_pow(a.n() as u32)
        .map(|t| t.saturating_mul((a.n() * a.n()) as u128) <= 1_000_000)
        .unwrap_or(false);
    let max_batches = if exhaustive { 1 } else { (trials / 10).max(10) };
    while (checked as u64) < trials && batches < max_batches {
        let r = markov::compare_to_infinity(
            &a,
            m,
            &x,
            p,
            estimate.value,
            witness.as_ref(),
            seed.wrapping_add(batches),
        )?;
        if r.skipped {
            skipped = true;
            note = r.note;
            break;
        }
        checked += r.checked;
        violations += r.violations;
        worst = worst.max(r.worst);
        batches += 1;
        if r.checked == 0 {
            note = Some("configurations keep degenerating; stopped early".into());
            break;
        }
    }
    if exhaustive && note.is_none() {
        note = Some("full enumeration covered every configuration".into());
    }
    let result = json!({
        "gamma": estimate.value, "gammaMethod": to_json(&estimate.method),
        "checked": checked, "violations": violations, "worst": worst,
        "skipped": skipped, "batches": batches, "note": note,
    });
    let spec = json!({
        "matrix": path_json(&matrix), "metric": path_json(&metric),
        "p": p, "m": m, "trials": trials, "seed": seed,
        "budget": g.budget, "out": opt_path_json(g.out()),
    });
    emit_json(&envelope("markov", spec, json!({}), result), g.out())?;
    Ok(0)
}

fn cmd_embed(g: &Globals, which: EmbedCmd) -> Result<u8, Failure> {
    match which {
        EmbedCmd::Line { metric, p, trials } => {
            let seed = g.require_seed()?;
            let x = load_metric(&metric)?;
            let line = embed::line_embed(&x, p, trials, seed)?;
            let spec = json!({
                "embed": "line", "metric": path_json(&metric), "p": p,
                "trials": trials, "seed": seed, "out": opt_path_json(g.out()),
            });
            emit_json(&envelope("embed", spec, json!({}), to_json(&line)), g.out())?;
            Ok(0)
        }
        EmbedCmd::Bourgain { metric, p } => {
            let seed = g.require_seed()?;
            let x = load_metric(&metric)?;
            let report = embed::bourgain_matousek_embed(&x, p, seed)?;
            let spec = json!({
                "embed": "bourgain", "metric": path_json(&metric), "p": p,
                "seed": seed, "out": opt_path_json(g.out()),
            });
            emit_json(
                &envelope("embed", spec, json!({}), to_json(&report)),
                g.out(),
            )?;
            Ok(0)
        }
        EmbedCmd::Jl { cloud, dim } => {
            let seed = g.require_seed()?;
            let points = load_cloud(&cloud)?;
            let report = embed::jl_reduce(&points, dim, seed)?;
            let spec = json!({
                "embed": "jl", "cloud": path_json(&cloud), "dim": dim,
                "seed": seed, "out": opt_path_json(g.out()),
            });
            emit_json(
                &envelope("embed", spec, json!({}), to_json(&report)),
                g.out(),
            )?;
            Ok(0)
        }
        EmbedCmd::Sdp {
            metric,
            iterations,
            tolerance,
        } => {
            let x = load_metric(&metric)?;
            let report = embed::spread_sdp(&x, iterations, tolerance)?;
            let converged = report.converged;
            let spec = json!({
                "embed": "sdp", "metric": path_json(&metric),
                "iterations": iterations, "tolerance": tolerance,
                "out": opt_path_json(g.out()),
            });
            let calibration = json!({
                "psdFloor": TOL.psd_floor, "sdpConstraint": TOL.sdp_constraint,
            });
            emit_json(
                &envelope("embed", spec, calibration, to_json(&report)),
                g.out(),
            )?;
            // The report itself is still worth keeping, so it is written
            // before the exit status reflects the stalled solve.
            Ok(if converged { 0 } else { 4 })
        }
        EmbedCmd::Duality {
            source,
            target,
            p,
            k,
            eps,
        } => {
            let x = load_metric(&source)?;
            let y = load_metric(&target)?;
            let eps = eps.unwrap_or(embed::DEFAULT_DUALITY_EPS);
            let certificate = embed::duality_certificate_with_eps(&x, &y, p, k, eps)
                .map_err(|e| match &e {
                    nsgap::Error::Degenerate(msg) if msg.contains("gap verification") => {
                        Failure::non_convergence(msg.clone())
                    }
                    _ => Failure::from(e),
                })?;
            let result = match &certificate {
                embed::DualityCertificate::Feasible(me) => json!({
                    "status": "feasible",
                    "configs": me.configs, "weights": me.weights,
                    "numerators": me.numerators, "denominator": me.denominator,
                    "images": me.images, "lipschitz": me.lipschitz,
                    "spreadLhs": me.spread_lhs, "spreadRhs": me.spread_rhs,
                }),
                embed::DualityCertificate::Infeasible(sc) => json!({
                    "status": "infeasible",
                    "h": sc.h, "lambda": sc.lambda, "delta": sc.delta,
                    "matrix": sc.matrix.rows(),
                    "gammaX": sc.gamma_x, "gammaY": sc.gamma_y,
                }),
            };
            let spec = json!({
                "embed": "duality", "source": path_json(&source),
                "target": path_json(&target), "p": p, "k": k, "eps": eps,
                "out": opt_path_json(g.out()),
            });
            let calibration = json!({
                "enumBudget": embed::DUALITY_ENUM_BUDGET,
                "defaultEps": embed::DEFAULT_DUALITY_EPS,
            });
            emit_json(&envelope("embed", spec, calibration, result), g.out())?;
            Ok(0)
        }
    }
}

/// One CSV data row for a graph context; shared by every graphs subcommand.
fn ctx_row(
    ctx: &LowerBoundContext,
    seed: u64,
    p: f64,
    threshold: f64,
) -> Result<String, Failure> {
    let bound = ctx.bound(p)?;
    let est = ctx.p_index(threshold)?;
    Ok(format!(
        "{},{},{},{},{},{},{},{}",
        ctx.n, ctx.d, seed, ctx.lambda2, ctx.lambda_abs, ctx.rms, bound, est.proxy
    ))
}

fn graph_calibration() -> Json {
    json!({
        "denseSpectrumLimit": graphs::DENSE_SPECTRUM_LIMIT,
        "retryCap": graphs::RETRY_CAP,
    })
}

fn write_edges(path: &Path, g: &RegularGraph) -> Result<(), Failure> {
    let mut text = format!("# {}\n{}\n", g.provenance, g.n);
    for &(u, v) in &g.edges {
        text.push_str(&format!("{u} {v}\n"));
    }
    atomic_write(path, &text)
}

fn emit_graph_csv(
    g: &Globals,
    command: &str,
    spec: Json,
    extra_comment: Option<String>,
    rows: Vec<String>,
) -> Result<(), Failure> {
    let mut text = csv_preamble(command, &spec, &graph_calibration());
    if let Some(line) = extra_comment {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str(GRAPH_COLUMNS);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    emit_text(&text, g.out())
}

fn cmd_graphs(g: &Globals, which: GraphsCmd) -> Result<u8, Failure> {
    match which {
        GraphsCmd::Regular {
            n,
            d,
            p,
            threshold,
            edges_out,
        } => {
            let seed = g.require_seed()?;
            let graph = graphs::random_regular(n, d, seed)?;
            if let Some(path) = &edges_out {
                write_edges(path, &graph)?;
            }
            let ctx = graphs::lower_bound_context(&graph)?;
            let row = ctx_row(&ctx, seed, p, threshold)?;
            let spec = json!({
                "graphs": "regular", "n": n, "d": d, "p": p,
                "threshold": threshold, "seed": seed,
                "edgesOut": opt_path_json(edges_out.as_deref()),
                "out": opt_path_json(g.out()),
            });
            emit_graph_csv(g, "graphs", spec, None, vec![row])?;
            Ok(0)
        }
        GraphsCmd::Cayley {
            n,
            epsilon,
            p,
            threshold,
            edges_out,
        } => {
            let seed = g.require_seed()?;
            let report = graphs::abelian_cayley(n, epsilon, seed)?;
            if let Some(path) = &edges_out {
                write_edges(path, &report.graph)?;
            }
            let ctx = graphs::lower_bound_context(&report.graph)?;
            let row = ctx_row(&ctx, seed, p, threshold)?;
            let cayley = json!({
                "lambda": report.lambda, "meetsEpsilon": report.meets_epsilon,
                "offsets": report.offsets,
                "requestedGenerators": report.requested_generators,
            });
            let spec = json!({
                "graphs": "cayley", "n": n, "epsilon": epsilon, "p": p,
                "threshold": threshold, "seed": seed,
                "edgesOut": opt_path_json(edges_out.as_deref()),
                "out": opt_path_json(g.out()),
            });
            emit_graph_csv(g, "graphs", spec, Some(format!("cayley {cayley}")), vec![row])?;
            Ok(0)
        }
        GraphsCmd::Lowerbound { n, d, p, threshold } => {
            let seed = g.require_seed()?;
            let p = p.0;
            if p.is_empty() {
                return Err(Failure::validation("--p needs at least one exponent"));
            }
            let graph = graphs::random_regular(n, d, seed)?;
            let ctx = graphs::lower_bound_context(&graph)?;
            let rows = p
                .iter()
                .map(|&p| ctx_row(&ctx, seed, p, threshold))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = json!({
                "graphs": "lowerbound", "n": n, "d": d, "p": p,
                "threshold": threshold, "seed": seed, "out": opt_path_json(g.out()),
            });
            emit_graph_csv(g, "graphs", spec, None, rows)?;
            Ok(0)
        }
        GraphsCmd::Pindex { n, d, threshold } => {
            let seed = g.require_seed()?;
            let graph = graphs::random_regular(n, d, seed)?;
            let ctx = graphs::lower_bound_context(&graph)?;
            let row = ctx_row(&ctx, seed, 2.0, threshold)?;
            let spec = json!({
                "graphs": "pindex", "n": n, "d": d, "threshold": threshold,
                "seed": seed, "out": opt_path_json(g.out()),
            });
            emit_graph_csv(g, "graphs", spec, None, vec![row])?;
            Ok(0)
        }
    }
}

fn cmd_sweep(g: &Globals, which: SweepCmd) -> Result<u8, Failure> {
    match which {
        SweepCmd::Pindex {
            n,
            d,
            seeds,
            threshold,
            p,
        } => {
            let (n, seeds) = (n.0, seeds.0);
            if n.is_empty() || seeds.is_empty() {
                return Err(Failure::validation("the sweep grid is empty"));
            }
            let cells: Vec<(usize, u64)> = n
                .iter()
                .flat_map(|&n| seeds.iter().map(move |&s| (n as usize, s)))
                .collect();
            let rows = sweep::parallel_rows(cells.len(), g.threads, |i| {
                let (n, seed) = cells[i];
                let row = graphs::random_regular(n, d, seed)
                    .map_err(Failure::from)
                    .and_then(|graph| {
                        let ctx = graphs::lower_bound_context(&graph)?;
                        ctx_row(&ctx, seed, p, threshold)
                    });
                match row {
                    Ok(fields) => (format!("{fields},"), false),
                    Err(f) => (
                        format!("{n},{d},{seed},,,,,,{}", csv_field(&f.message)),
                        true,
                    ),
                }
            });
            let spec = json!({
                "sweep": "pindex", "n": n, "d": d, "seeds": seeds,
                "threshold": threshold, "p": p, "threads": g.threads,
                "out": opt_path_json(g.out()),
            });
            let all_failed = !rows.is_empty() && rows.iter().all(|(_, failed)| *failed);
            let mut text = csv_preamble("sweep", &spec, &graph_calibration());
            text.push_str(GRAPH_COLUMNS);
            text.push_str(",error\n");
            for (row, _) in rows {
                text.push_str(&row);
                text.push('\n');
            }
            emit_text(&text, g.out())?;
            if all_failed {
                return Err(Failure::validation("every sweep cell failed"));
            }
            Ok(0)
        }
        SweepCmd::MarkovBound {
            matrix,
            p,
            m,
            universal_c,
        } => {
            let (p, m) = (p.0, m.0);
            if p.is_empty() || m.is_empty() {
                return Err(Failure::validation("the sweep grid is empty"));
            }
            let a = load_matrix(&matrix)?;
            let params = BoundParams {
                universal_c,
                ..BoundParams::default()
            };
            let cells: Vec<(f64, u64)> = p
                .iter()
                .flat_map(|&p| m.iter().map(move |&m| (p, m)))
                .collect();
            let rows = sweep::parallel_rows(cells.len(), g.threads, |i| {
                let (p, m) = cells[i];
                match u32::try_from(m)
                    .map_err(|_| Failure::validation(format!("step count {m} overflows")))
                    .and_then(|m| Ok(bounds::refined_markov_bound(&a, p, m, &params)?))
                {
                    Ok(report) => (
                        format!("{p},{m},{},{},", report.value, report.certified),
                        false,
                    ),
                    Err(f) => (format!("{p},{m},,,{}", csv_field(&f.message)), true),
                }
            });
            let spec = json!({
                "sweep": "markovBound", "matrix": path_json(&matrix),
                "p": p, "m": m, "universalC": universal_c,
                "threads": g.threads, "out": opt_path_json(g.out()),
            });
            let all_failed = !rows.is_empty() && rows.iter().all(|(_, failed)| *failed);
            let mut text = csv_preamble("sweep", &spec, &json!({}));
            text.push_str("p,m,value,certified,error\n");
            for (row, _) in rows {
                text.push_str(&row);
                text.push('\n');
            }
            emit_text(&text, g.out())?;
            if all_failed {
                return Err(Failure::validation("every sweep cell failed"));
            }
            Ok(0)
        }
    }
}
