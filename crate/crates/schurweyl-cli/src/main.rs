//! Batch front end: every computation in the library surfaced as a
//! subcommand emitting schema-versioned JSON or CSV with the inputs echoed.
//! Identical configs produce byte-identical files; Monte Carlo output is
//! pinned by an explicit seed.

mod output;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use output::{num, scalar, scalar_value, Column, OutputFormat, Report, Table};
use schurweyl::approx::{
    expansion_prediction, relative_entropy, relative_entropy_on_support, uniform_state,
    BlockState, ExpansionPrior,
};
use schurweyl::codec::{average_energy, code_from_block_state, redundancy};
use schurweyl::energybound::{
    read_isometry, sigma_of_code, verify_energy_bound, FockSpace, LosslessCode,
    random_density, RANK_TOLERANCE,
};
use schurweyl::minimax::{
    integral_log2, jn_prior, minimax_value, sigma_j_state, sigma_j_tilde, IntegralOptions,
    TildeOptions,
};
use schurweyl::schur::{schur_weyl_measure, Spectrum};
use schurweyl::young::{count_diagrams, dim_pair, enumerate_diagrams, multinomial_log2};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "schurweyl",
    version,
    about = "Universal block states for n-copy sources: diagrams, measures, redundancy curves, minimax priors, prefix codes, and energy bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate Y_n^d (or just count it).
    Diagrams {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        /// Emit the count only.
        #[arg(long)]
        count: bool,
    },
    /// Irrep dimension table over Y_n^d.
    Dims {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
    },
    /// Block-occupancy weights of a spectrum.
    Measure {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        /// Spectrum, e.g. "0.75,0.25" or exact "3/4,1/4".
        #[arg(long)]
        p: String,
    },
    /// Divergence and compensated redundancy over a list of n.
    RedundancyCurve {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: String,
        /// Comma-separated n values.
        #[arg(long = "n-list", value_delimiter = ',', default_value = "256,1024,4096")]
        n_list: Vec<u64>,
        #[arg(long, value_enum, default_value = "uniform")]
        prior: PriorKind,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Ordered-simplex integral and the minimax constant for one d.
    Minimax {
        #[arg(long)]
        d: usize,
        /// Quadrature tolerance (d=2).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Monte Carlo seed (d>=3).
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        strata: usize,
        /// Antithetic pairs per stratum (d>=3).
        #[arg(long, default_value_t = 2048)]
        pairs: usize,
    },
    /// The equalizing lattice prior J_n over Y_n^d.
    Prior {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
    },
    /// Prefix-code construction and accounting.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Energy lower-bound verification.
    #[command(subcommand)]
    Bound(BoundCmd),
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Export the spectral code of a block state.
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        prior: PriorKind,
        /// Quadrature panels for the tilde prior.
        #[arg(long, default_value_t = 512)]
        panels: usize,
    },
    /// Average energy and redundancy of the code against a spectrum.
    Redundancy {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value = "uniform")]
        prior: PriorKind,
        #[arg(long, default_value_t = 512)]
        panels: usize,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Peel codes, extract their densities, and verify the energy bound.
    Verify {
        /// Copies per instance in the random sweep.
        #[arg(long = "n-list", value_delimiter = ',', default_value = "2,3")]
        n_list: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Fock truncation K.
        #[arg(long, default_value_t = 10)]
        truncation: usize,
        /// Number of random instances (split across the n list).
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
        /// Verify one isometry loaded from a file instead of the sweep.
        #[arg(long)]
        isometry: Option<PathBuf>,
        /// Copies n for the loaded isometry.
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum PriorKind {
    Uniform,
    Jeffreys,
    JeffreysTilde,
}

impl PriorKind {
    fn label(&self) -> &'static str {
        match self {
            PriorKind::Uniform => "uniform",
            PriorKind::Jeffreys => "jeffreys",
            PriorKind::JeffreysTilde => "jeffreys-tilde",
        }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(schurweyl::Error),
    Input(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<schurweyl::Error> for CliError {
    fn from(e: schurweyl::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// 3 for violated preconditions, 4 for exhausted budgets and i/o.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Lib(e) if e.is_precondition() => 3,
            _ => 4,
        }
    }
}

fn parse_spectrum(text: &str, d: usize) -> Result<Spectrum, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != d {
        return Err(CliError::Input(format!(
            "spectrum has {} entries, expected d = {d}",
            parts.len()
        )));
    }
    let all_rational = parts.iter().all(|p| p.contains('/'));
    if all_rational {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let mut entries = Vec::with_capacity(parts.len());
        for p in &parts {
            let (a, b) = p
                .split_once('/')
                .ok_or_else(|| CliError::Input(format!("bad fraction {p}")))?;
            let a: i64 = a
                .parse()
                .map_err(|_| CliError::Input(format!("bad numerator in {p}")))?;
            let b: i64 = b
                .parse()
                .map_err(|_| CliError::Input(format!("bad denominator in {p}")))?;
            if b == 0 {
                return Err(CliError::Input(format!("zero denominator in {p}")));
            }
            entries.push(BigRational::new(BigInt::from(a), BigInt::from(b)));
        }
        Ok(Spectrum::from_rationals(entries)?)
    } else {
        let mut probs = Vec::with_capacity(parts.len());
        for p in &parts {
            probs.push(
                p.parse::<f64>()
                    .map_err(|_| CliError::Input(format!("bad probability {p}")))?,
            );
        }
        Ok(Spectrum::new(probs)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("SCHURWEYL_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let report = match cli.command {
        Cmd::Diagrams { n, d, count } => cmd_diagrams(n, d, count)?,
        Cmd::Dims { n, d } => cmd_dims(n, d)?,
        Cmd::Measure { n, d, p } => cmd_measure(n, d, &p)?,
        Cmd::RedundancyCurve {
            d,
            p,
            n_list,
            prior,
            tol,
        } => cmd_redundancy_curve(d, &p, &n_list, prior, tol)?,
        Cmd::Minimax {
            d,
            tol,
            seed,
            strata,
            pairs,
        } => cmd_minimax(d, tol, seed, strata, pairs)?,
        Cmd::Prior { n, d } => cmd_prior(n, d)?,
        Cmd::Code(CodeCmd::Build { n, d, prior, panels }) => cmd_code_build(n, d, prior, panels)?,
        Cmd::Code(CodeCmd::Redundancy {
            n,
            d,
            p,
            prior,
            panels,
        }) => cmd_code_redundancy(n, d, &p, prior, panels)?,
        Cmd::Bound(BoundCmd::Verify {
            n_list,
            d,
            truncation,
            instances,
            seed,
            isometry,
            n,
        }) => cmd_bound_verify(&n_list, d, truncation, instances, seed, isometry, n)?,
    };
    report.write(cli.format, cli.out.as_deref())?;
    Ok(())
}

/// Refuse to materialize tables beyond this many diagram rows.
const MAX_TABLE_ROWS: u64 = 5_000_000;

fn ensure_table_size(n: u64, d: usize) -> Result<(), CliError> {
    let count = count_diagrams(n, d)?;
    if count > MAX_TABLE_ROWS {
        return Err(CliError::Input(format!(
            "Y_{n}^{d} has {count} diagrams; refusing to materialize more than {MAX_TABLE_ROWS} rows"
        )));
    }
    Ok(())
}

fn block_state_for(prior: PriorKind, n: u64, d: usize, panels: usize) -> Result<BlockState, CliError> {
    Ok(match prior {
        PriorKind::Uniform => uniform_state(n, d)?,
        PriorKind::Jeffreys => sigma_j_state(n, d)?,
        PriorKind::JeffreysTilde => sigma_j_tilde(
            n,
            d,
            &TildeOptions {
                panels,
                ..Default::default()
            },
        )?,
    })
}

fn cmd_diagrams(n: u64, d: usize, count_only: bool) -> Result<Report, CliError> {
    let count = count_diagrams(n, d)?;
    let table = if count_only {
        None
    } else {
        ensure_table_size(n, d)?;
        let rows = enumerate_diagrams(n, d)?
            .iter()
            .map(|lam| vec![json!(lam.to_string())])
            .collect();
        Some(Table {
            columns: vec![Column {
                name: "diagram",
                formula: "young_diagram_rows",
            }],
            rows,
        })
    };
    Ok(Report {
        command: "diagrams".into(),
        inputs: json!({"n": n, "d": d, "count": count_only}),
        outputs: vec![scalar_value(
            "count",
            "bounded_depth_partition_count",
            json!(count),
        )],
        table,
    })
}

fn cmd_dims(n: u64, d: usize) -> Result<Report, CliError> {
    ensure_table_size(n, d)?;
    let rows = enumerate_diagrams(n, d)?
        .iter()
        .map(|lam| {
            let pair = dim_pair(lam);
            vec![
                json!(lam.to_string()),
                pair.su
                    .exact
                    .as_ref()
                    .map(|x| json!(x.to_string()))
                    .unwrap_or(Value::Null),
                num(pair.su.log2),
                pair.sym
                    .exact
                    .as_ref()
                    .map(|x| json!(x.to_string()))
                    .unwrap_or(Value::Null),
                num(pair.sym.log2),
                num(multinomial_log2(lam)),
            ]
        })
        .collect();
    Ok(Report {
        command: "dims".into(),
        inputs: json!({"n": n, "d": d}),
        outputs: vec![],
        table: Some(Table {
            columns: vec![
                Column {
                    name: "diagram",
                    formula: "young_diagram_rows",
                },
                Column {
                    name: "dim_su",
                    formula: "weyl_dimension_product",
                },
                Column {
                    name: "log2_dim_su",
                    formula: "weyl_dimension_product",
                },
                Column {
                    name: "dim_sym",
                    formula: "factorial_ratio_tableau_count",
                },
                Column {
                    name: "log2_dim_sym",
                    formula: "factorial_ratio_tableau_count",
                },
                Column {
                    name: "log2_multinomial",
                    formula: "log2_factorial_ratio",
                },
            ],
            rows,
        }),
    })
}

fn cmd_measure(n: u64, d: usize, p_text: &str) -> Result<Report, CliError> {
    ensure_table_size(n, d)?;
    let p = parse_spectrum(p_text, d)?;
    let measure = schur_weyl_measure(&p, n)?;
    let rows = measure
        .log2_iter()
        .map(|(lam, log2_w)| {
            vec![
                json!(lam.to_string()),
                num(log2_w.exp2()),
                num(log2_w),
            ]
        })
        .collect();
    Ok(Report {
        command: "measure".into(),
        inputs: json!({"n": n, "d": d, "p": p.probs().iter().map(|&x| num(x)).collect::<Vec<_>>()}),
        outputs: vec![scalar(
            "total",
            "sum_of_block_weights",
            measure.total(),
        )],
        table: Some(Table {
            columns: vec![
                Column {
                    name: "diagram",
                    formula: "young_diagram_rows",
                },
                Column {
                    name: "weight",
                    formula: "schur_polynomial_times_sym_dimension",
                },
                Column {
                    name: "log2_weight",
                    formula: "schur_polynomial_times_sym_dimension",
                },
            ],
            rows,
        }),
    })
}

fn cmd_redundancy_curve(
    d: usize,
    p_text: &str,
    n_list: &[u64],
    prior: PriorKind,
    tol: f64,
) -> Result<Report, CliError> {
    let p = parse_spectrum(p_text, d)?;
    let leading = (d * d - 1) as f64 / 2.0;
    let log2_integral = match prior {
        PriorKind::Uniform => None,
        _ => Some(
            integral_log2(
                d,
                &IntegralOptions {
                    tol,
                    ..Default::default()
                },
            )?
            .log2_value,
        ),
    };
    let mut rows = Vec::new();
    for &n in n_list {
        let (div, excluded, pred) = match prior {
            PriorKind::Uniform => {
                let sigma = uniform_state(n, d)?;
                let div = relative_entropy(&p, &sigma)?;
                let pred = expansion_prediction(&p, n, &ExpansionPrior::Uniform)?;
                (div, f64::NEG_INFINITY, pred)
            }
            PriorKind::Jeffreys | PriorKind::JeffreysTilde => {
                let sigma = match prior {
                    PriorKind::Jeffreys => sigma_j_state(n, d)?,
                    _ => sigma_j_tilde(n, d, &TildeOptions::default())?,
                };
                let r = relative_entropy_on_support(&p, &sigma)?;
                let pred = expansion_prediction(
                    &p,
                    n,
                    &ExpansionPrior::Explicit {
                        state: &sigma,
                        log2_integral: log2_integral.unwrap(),
                    },
                )?;
                (r.bits, r.excluded_log2_mass, pred)
            }
        };
        let log2n = (n as f64).log2();
        rows.push(vec![
            json!(n),
            num(div),
            num(div - leading * log2n),
            num(pred),
            num(pred - leading * log2n),
            if excluded == f64::NEG_INFINITY {
                Value::Null
            } else {
                num(excluded)
            },
        ]);
    }
    Ok(Report {
        command: "redundancy-curve".into(),
        inputs: json!({
            "d": d,
            "p": p.probs().iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "n_list": n_list,
            "prior": prior.label(),
            "tol": num(tol),
        }),
        outputs: vec![],
        table: Some(Table {
            columns: vec![
                Column {
                    name: "n",
                    formula: "copies",
                },
                Column {
                    name: "divergence",
                    formula: "blockwise_relative_entropy",
                },
                Column {
                    name: "compensated",
                    formula: "divergence_minus_half_dsq_minus_1_log2_n",
                },
                Column {
                    name: "prediction",
                    formula: "closed_form_expansion_prediction",
                },
                Column {
                    name: "prediction_compensated",
                    formula: "prediction_minus_half_dsq_minus_1_log2_n",
                },
                Column {
                    name: "excluded_log2_mass",
                    formula: "log2_measure_mass_outside_support",
                },
            ],
            rows,
        }),
    })
}

fn cmd_minimax(
    d: usize,
    tol: f64,
    seed: u64,
    strata: usize,
    pairs: usize,
) -> Result<Report, CliError> {
    let opts = IntegralOptions {
        tol,
        seed,
        strata,
        pairs_per_stratum: pairs,
        ..Default::default()
    };
    let r = minimax_value(d, &opts)?;
    let mut outputs = vec![
        scalar("c_d", "dimension_constant_bits", r.c_d),
        scalar(
            "integral_log2",
            "log2_integral_exp_spectral_constant_over_ordered_simplex",
            r.integral_log2,
        ),
        scalar("minimax", "c_d_plus_integral_log2", r.minimax),
        scalar(
            "equalizer_constant",
            "c_d_plus_log2_d_factorials_plus_integral_log2",
            r.equalizer_constant,
        ),
    ];
    if let Some(se) = r.integral_std_error {
        outputs.push(scalar(
            "integral_std_error",
            "stratified_mc_standard_error",
            se,
        ));
    }
    if let Some(cmp) = r.comparison {
        outputs.push(scalar(
            "family_constant",
            "published_family_benchmark",
            cmp.family_constant,
        ));
        outputs.push(scalar(
            "improvement",
            "family_constant_minus_minimax",
            cmp.improvement,
        ));
    }
    Ok(Report {
        command: "minimax".into(),
        inputs: json!({"d": d, "tol": num(tol), "seed": seed, "strata": strata, "pairs": pairs}),
        outputs,
        table: None,
    })
}

fn cmd_prior(n: u64, d: usize) -> Result<Report, CliError> {
    ensure_table_size(n, d)?;
    let prior = jn_prior(n, d)?;
    let rows = prior
        .state
        .diagrams()
        .iter()
        .zip(prior.state.weights())
        .map(|(lam, &w)| vec![json!(lam.to_string()), num(w)])
        .collect();
    let ratio = prior.normalizer / (n as f64).powi(d as i32 - 1);
    Ok(Report {
        command: "prior".into(),
        inputs: json!({"n": n, "d": d}),
        outputs: vec![
            scalar(
                "normalizer",
                "sum_exp2_spectral_constant_at_lattice_points",
                prior.normalizer,
            ),
            scalar(
                "normalizer_over_n_pow",
                "normalizer_over_n_pow_d_minus_1",
                ratio,
            ),
            scalar_value(
                "support",
                "interior_diagram_count",
                json!(prior.support),
            ),
        ],
        table: Some(Table {
            columns: vec![
                Column {
                    name: "diagram",
                    formula: "young_diagram_rows",
                },
                Column {
                    name: "weight",
                    formula: "normalized_exp2_spectral_constant",
                },
            ],
            rows,
        }),
    })
}

fn cmd_code_build(n: u64, d: usize, prior: PriorKind, panels: usize) -> Result<Report, CliError> {
    let sigma = block_state_for(prior, n, d, panels)?;
    let code = code_from_block_state(&sigma)?;
    let rows = code
        .entries
        .iter()
        .map(|e| {
            vec![
                json!(e.block),
                num(e.eigenvalue),
                num(e.log2_eigenvalue),
                json!(e.multiplicity),
                json!(e.length),
                e.first_codeword
                    .as_ref()
                    .map(|w| json!(w))
                    .unwrap_or(Value::Null),
            ]
        })
        .collect();
    Ok(Report {
        command: "code-build".into(),
        inputs: json!({"n": n, "d": d, "prior": prior.label()}),
        outputs: vec![
            scalar("log2_kraft_sum", "log2_sum_exp2_neg_length", code.log2_kraft_sum),
            scalar_value("max_length", "max_ceil_neg_log2_eigenvalue", json!(code.max_length())),
            scalar_value("lengths_only", "materialization_mode", json!(code.lengths_only)),
        ],
        table: Some(Table {
            columns: vec![
                Column {
                    name: "block",
                    formula: "young_diagram_rows",
                },
                Column {
                    name: "eigenvalue",
                    formula: "block_weight_over_block_dimension",
                },
                Column {
                    name: "log2_eigenvalue",
                    formula: "block_weight_over_block_dimension",
                },
                Column {
                    name: "multiplicity",
                    formula: "su_dimension_times_sym_dimension",
                },
                Column {
                    name: "length",
                    formula: "ceil_neg_log2_eigenvalue",
                },
                Column {
                    name: "first_codeword",
                    formula: "canonical_length_sorted_assignment",
                },
            ],
            rows,
        }),
    })
}

fn cmd_code_redundancy(
    n: u64,
    d: usize,
    p_text: &str,
    prior: PriorKind,
    panels: usize,
) -> Result<Report, CliError> {
    let p = parse_spectrum(p_text, d)?;
    let sigma = block_state_for(prior, n, d, panels)?;
    let code = code_from_block_state(&sigma)?;
    let energy = average_energy(&code, &p)?;
    let red = redundancy(&code, &p)?;
    let (div, excluded) = if sigma.is_full_support() {
        (relative_entropy(&p, &sigma)?, f64::NEG_INFINITY)
    } else {
        let r = relative_entropy_on_support(&p, &sigma)?;
        (r.bits, r.excluded_log2_mass)
    };
    let entropy = p.entropy_bits();
    let mut outputs = vec![
        scalar("entropy_rate", "shannon_entropy_bits", entropy),
        scalar("average_energy", "measure_weighted_code_length", energy),
        scalar("redundancy", "average_energy_minus_n_entropy", red),
        scalar("divergence", "blockwise_relative_entropy", div),
        scalar("ceiling_slack", "redundancy_minus_divergence", red - div),
        scalar("log2_kraft_sum", "log2_sum_exp2_neg_length", code.log2_kraft_sum),
    ];
    if excluded != f64::NEG_INFINITY {
        outputs.push(scalar(
            "excluded_log2_mass",
            "log2_measure_mass_outside_support",
            excluded,
        ));
    }
    Ok(Report {
        command: "code-redundancy".into(),
        inputs: json!({
            "n": n,
            "d": d,
            "p": p.probs().iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "prior": prior.label(),
        }),
        outputs,
        table: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound_verify(
    n_list: &[u64],
    d: usize,
    truncation: usize,
    instances: usize,
    seed: u64,
    isometry_path: Option<PathBuf>,
    n_single: Option<u64>,
) -> Result<Report, CliError> {
    let fock = FockSpace::new(truncation)?;
    let columns = vec![
        Column {
            name: "instance",
            formula: "code_label",
        },
        Column {
            name: "n",
            formula: "copies",
        },
        Column {
            name: "peel_residual",
            formula: "max_basis_identity_residual",
        },
        Column {
            name: "trace_sigma_tilde",
            formula: "sum_rank_exp2_neg_sector",
        },
        Column {
            name: "trace_bound",
            formula: "ceil_n_log2_d",
        },
        Column {
            name: "margin",
            formula: "avg_energy_minus_entropy_side_plus_log2_ceil",
        },
        Column {
            name: "intermediate_margin",
            formula: "avg_energy_minus_expected_length",
        },
    ];

    let mut rows = Vec::new();
    let mut verify_one = |label: String, code: &LosslessCode| -> Result<(), CliError> {
        let peel = schurweyl::energybound::peel_range_basis(code.isometry(), &fock, RANK_TOLERANCE)?;
        let residual = peel.verify(code.isometry()).max_residual();
        let sigma = sigma_of_code(code, &fock)?;
        let rho = random_density(code.domain_dim(), seed ^ 0xd0);
        let report = verify_energy_bound(code, &fock, &rho)?;
        rows.push(vec![
            json!(label),
            json!(code.n),
            num(residual),
            num(sigma.trace_sigma_tilde),
            json!(sigma.trace_bound),
            num(report.margin),
            num(report.intermediate_margin),
        ]);
        Ok(())
    };

    if let Some(path) = isometry_path {
        let n = n_single.ok_or_else(|| {
            CliError::Input("--n is required together with --isometry".into())
        })?;
        let matrix: DMatrix<nalgebra::Complex<f64>> = read_isometry(&path)?;
        let code = LosslessCode::new(n, d, matrix, &fock)?;
        verify_one(format!("file:{}", path.display()), &code)?;
    } else {
        if n_list.is_empty() {
            return Err(CliError::Input("empty n list".into()));
        }
        for (i, &n) in n_list.iter().enumerate() {
            if d == 2 {
                let code = LosslessCode::identity_embedding(n, &fock)?;
                verify_one(format!("identity-n{n}"), &code)?;
            }
            let share = instances / n_list.len()
                + usize::from(i < instances % n_list.len());
            for j in 0..share {
                let code =
                    LosslessCode::random(n, d, &fock, seed.wrapping_add(j as u64 * 101 + n), 1)?;
                verify_one(format!("random-n{n}-{j}"), &code)?;
            }
        }
    }

    let min_margin = rows
        .iter()
        .map(|r| r[5].as_f64().unwrap_or(f64::INFINITY))
        .fold(f64::INFINITY, f64::min);
    let max_residual = rows
        .iter()
        .map(|r| r[2].as_f64().unwrap_or(0.0))
        .fold(0.0, f64::max);
    Ok(Report {
        command: "bound-verify".into(),
        inputs: json!({
            "n_list": n_list,
            "d": d,
            "truncation": truncation,
            "instances": instances,
            "seed": seed,
        }),
        outputs: vec![
            scalar_value("cases", "instance_count", json!(rows.len())),
            scalar("min_margin", "minimum_energy_bound_margin", min_margin),
            scalar("max_peel_residual", "max_basis_identity_residual", max_residual),
        ],
        table: Some(Table { columns, rows }),
    })
}
