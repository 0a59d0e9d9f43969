//! The ordered-simplex integral of the equalizing density, the minimax
//! constant assembled from it, and the two optimizing block states: the
//! lattice prior σ_J,n and the mixture-of-measures state σ̃_J,n.
//!
//! d = 2 integrates by adaptive Gauss-Kronrod after substituting out the
//! inverse-square-root endpoint singularity; d >= 3 uses stratified
//! antithetic Monte Carlo with importance sampling that absorbs the same
//! singularity, seeded deterministically.

use crate::approx::{constants, eval_c, relative_entropy_on_support, BlockState};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::quad::adaptive_qk15;
use crate::schur::{schur_weyl_measure, Spectrum};
use crate::young::enumerate_diagrams;
use rayon::prelude::*;
use statrs::function::erf::erf_inv;

/// Fixed comparison constant: the best constant attainable within the
/// previously studied one-parameter family of qubit mixture states, quoted
/// as a published number (base-2).
pub const QUBIT_FAMILY_CONSTANT: f64 = -2.3956;

/// The open region Y^d of strictly ordered full-rank spectra, in the
/// coordinates (p_1, ..., p_{d-1}).
#[derive(Debug, Clone, Copy)]
pub struct OrderedSimplex {
    pub d: usize,
}

impl OrderedSimplex {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument("ordered simplex needs d >= 2".into()));
        }
        Ok(Self { d })
    }

    /// Membership of a full spectrum (all d entries).
    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.d
            && p.windows(2).all(|w| w[0] > w[1])
            && *p.last().unwrap() > 0.0
            && (p.iter().sum::<f64>() - 1.0).abs() < 1e-9
    }
}

/// The equalizing prior density J(p⃗) ∝ 2^{C(p⃗)} on Y^d.
#[derive(Debug, Clone, Copy)]
pub struct JeffreysPrior {
    pub d: usize,
    /// log2 of the normalizer ∫_{Y^d} 2^{C} dp⃗.
    pub log2_normalizer: f64,
}

impl JeffreysPrior {
    /// log2 of the normalized density at p⃗.
    pub fn log2_density(&self, p: &Spectrum) -> Result<f64> {
        Ok(eval_c(p)? - self.log2_normalizer)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralOptions {
    /// Absolute tolerance for the d=2 quadrature.
    pub tol: f64,
    /// Panel budget for the quadrature.
    pub max_panels: usize,
    /// Monte Carlo seed (d >= 3).
    pub seed: u64,
    /// Number of strata (d >= 3).
    pub strata: usize,
    /// Antithetic pairs per stratum (d >= 3).
    pub pairs_per_stratum: usize,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_panels: 4096,
            seed: 0x5eed_cafe,
            strata: 64,
            pairs_per_stratum: 2048,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    /// log2 ∫_{Y^d} e^{C(p⃗)} dp⃗.
    pub log2_value: f64,
    pub value: f64,
    /// Absolute error estimate of the integral value.
    pub abs_error: f64,
    /// Standard error (Monte Carlo only).
    pub std_error: Option<f64>,
    pub evaluations: usize,
}

/// The integrand 2^{C(p)} for d=2 after the substitution p_2 = u², which
/// removes the p_2^{-1/2} endpoint singularity: g(u) = 2u · 2^{C(1-u², u²)}.
fn qubit_integrand_substituted(u: f64) -> f64 {
    if u <= 0.0 {
        return 2.0; // continuous limit at p_2 -> 0
    }
    let p2 = u * u;
    let p1 = 1.0 - p2;
    if p1 <= p2 {
        return 0.0;
    }
    let gap = p1 - p2;
    // 2^C = gap² · p1^{-p1/gap} · p2^{p2/gap} · (p1 p2)^{-1/2}
    let log2_val = 2.0 * gap.log2() - (p1 / gap) * p1.log2() + (p2 / gap) * p2.log2()
        - 0.5 * (p1.log2() + p2.log2());
    2.0 * u * log2_val.exp2()
}

/// log2 ∫_{Y^d} e^{C(p⃗)} dp⃗.
pub fn integral_log2(d: usize, opts: &IntegralOptions) -> Result<IntegralEstimate> {
    match d {
        0 | 1 => Err(Error::InvalidArgument("integral needs d >= 2".into())),
        2 => {
            let upper = 0.5f64.sqrt();
            let r = adaptive_qk15(&qubit_integrand_substituted, 0.0, upper, opts.tol, opts.max_panels)?;
            Ok(IntegralEstimate {
                log2_value: r.value.log2(),
                value: r.value,
                abs_error: r.abs_error,
                std_error: None,
                evaluations: r.panels * 15,
            })
        }
        _ => integral_log2_monte_carlo(d, opts),
    }
}

/// Importance-sampled stratified Monte Carlo for d >= 3.
///
/// Proposal: Dirichlet(1,...,1,1/2) over the full simplex, whose p_d^{-1/2}
/// factor absorbs the integrand's boundary divergence after sorting, keeping
/// the weight bounded. Ordering is handled by sorting each sample (the
/// integrand is evaluated on sorted coordinates and the region identification
/// divides by d!). Strata are independent ChaCha streams; each sample pairs
/// with its antithetic partner (u -> 1-u on the underlying uniforms).
fn integral_log2_monte_carlo(d: usize, opts: &IntegralOptions) -> Result<IntegralEstimate> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    if opts.strata < 2 || opts.pairs_per_stratum == 0 {
        return Err(Error::InvalidArgument(
            "Monte Carlo needs >= 2 strata and >= 1 pair per stratum".into(),
        ));
    }
    // Dirichlet(1,..,1,1/2) density on the simplex in (p_1..p_{d-1}) coords:
    // Γ(d - 1/2) / (Γ(1)^{d-1} Γ(1/2)) · p_d^{-1/2}
    let alpha_sum = d as f64 - 0.5;
    let log_norm_const = statrs::function::gamma::ln_gamma(alpha_sum)
        - statrs::function::gamma::ln_gamma(0.5);
    let d_fact: f64 = (1..=d as u64).map(|k| k as f64).product();

    let stratum_means: Vec<f64> = (0..opts.strata)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(s as u64 + 1);
            let mut acc = CompensatedSum::new();
            for _ in 0..opts.pairs_per_stratum {
                let us: Vec<f64> = (0..d).map(|_| rng.gen_range(1e-16..1.0)).collect();
                for anti in [false, true] {
                    let mut gamma = vec![0.0f64; d];
                    for (i, &u) in us.iter().enumerate() {
                        let uu = if anti { 1.0 - u } else { u };
                        if i + 1 < d {
                            // Exp(1) via inverse CDF
                            gamma[i] = -uu.ln();
                        } else {
                            // Gamma(1/2) via the square of a standard normal
                            let z = std::f64::consts::SQRT_2 * erf_inv(2.0 * uu - 1.0);
                            gamma[i] = 0.5 * z * z;
                        }
                    }
                    let total: f64 = gamma.iter().sum();
                    if total <= 0.0 {
                        continue;
                    }
                    let mut p: Vec<f64> = gamma.iter().map(|g| g / total).collect();
                    let p_last = p[d - 1];
                    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    if p[d - 1] <= 0.0 || p.windows(2).any(|w| w[0] <= w[1]) {
                        continue; // zero-measure boundary draw
                    }
                    let spectrum = match Spectrum::new(p.clone()) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    let c = match eval_c(&spectrum) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    // density of the proposal at the unsorted draw
                    let log2_density = (log_norm_const - 0.5 * p_last.ln())
                        / std::f64::consts::LN_2;
                    // integrand / (d! · density): the d! accounts for the
                    // sorted region being one of d! congruent copies
                    let log2_weight = c - log2_density - d_fact.log2();
                    acc.add(log2_weight.exp2());
                }
            }
            acc.value() / (2 * opts.pairs_per_stratum) as f64
        })
        .collect();

    let mean: f64 = stratum_means.iter().sum::<f64>() / opts.strata as f64;
    let var: f64 = stratum_means
        .iter()
        .map(|m| (m - mean).powi(2))
        .sum::<f64>()
        / (opts.strata as f64 - 1.0)
        / opts.strata as f64;
    let std_error = var.sqrt();
    if mean.is_nan() || mean <= 0.0 {
        return Err(Error::BudgetExhausted(
            "Monte Carlo produced a nonpositive integral estimate".into(),
        ));
    }
    Ok(IntegralEstimate {
        log2_value: mean.log2(),
        value: mean,
        abs_error: 3.0 * std_error,
        std_error: Some(std_error),
        evaluations: opts.strata * opts.pairs_per_stratum * 2,
    })
}

/// Everything the minimax computation reports for one d.
#[derive(Debug, Clone)]
pub struct MinimaxReport {
    pub d: usize,
    pub c_d: f64,
    pub integral_log2: f64,
    /// c_d + integral (published-number convention).
    pub minimax: f64,
    /// c_d + log2(d!(d−1)!) + integral: the constant the equalizer scan
    /// actually converges to.
    pub equalizer_constant: f64,
    /// Only for d=2: the published family constant and the improvement
    /// minimax offers over it.
    pub comparison: Option<MinimaxComparison>,
    pub integral_std_error: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct MinimaxComparison {
    pub family_constant: f64,
    pub improvement: f64,
}

pub fn minimax_value(d: usize, opts: &IntegralOptions) -> Result<MinimaxReport> {
    let consts = constants(d)?;
    let integral = integral_log2(d, opts)?;
    let minimax = consts.c_d + integral.log2_value;
    let log2_dd1: f64 = (1..=d as u64)
        .map(|k| (k as f64).log2())
        .sum::<f64>()
        + (1..d as u64).map(|k| (k as f64).log2()).sum::<f64>();
    let comparison = (d == 2).then_some(MinimaxComparison {
        family_constant: QUBIT_FAMILY_CONSTANT,
        improvement: QUBIT_FAMILY_CONSTANT - minimax,
    });
    Ok(MinimaxReport {
        d,
        c_d: consts.c_d,
        integral_log2: integral.log2_value,
        minimax,
        equalizer_constant: consts.c_d + log2_dd1 + integral.log2_value,
        comparison,
        integral_std_error: integral.std_error,
    })
}

/// The lattice prior J_n(λ) ∝ 2^{C(λ/n)} over Y_n^d, zero on boundary
/// diagrams (tied rows or an empty row, where λ/n leaves the open region).
#[derive(Debug, Clone)]
pub struct JnPrior {
    pub state: BlockState,
    /// Σ_λ 2^{C(λ/n)} before normalization.
    pub normalizer: f64,
    pub support: usize,
}

pub fn jn_prior(n: u64, d: usize) -> Result<JnPrior> {
    let diagrams = enumerate_diagrams(n, d)?;
    let raw: Vec<f64> = diagrams
        .par_iter()
        .map(|lam| {
            if !lam.is_interior() {
                return Ok(0.0);
            }
            let p = Spectrum::new(lam.fractions())?;
            Ok(eval_c(&p)?.exp2())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut z = CompensatedSum::new();
    for &w in &raw {
        z.add(w);
    }
    let normalizer = z.value();
    if normalizer <= 0.0 {
        return Err(Error::AllZeroWeight { n, d });
    }
    let support = raw.iter().filter(|&&w| w > 0.0).count();
    let state = BlockState::from_unnormalized(n, d, raw)?;
    Ok(JnPrior {
        state,
        normalizer,
        support,
    })
}

/// σ_J,n: the block state carrying the lattice prior. At the tiny n where no
/// interior diagram exists (every diagram has tied or empty rows), the prior
/// degenerates and the state falls back to the uniform mixture, so that
/// σ_J,1 = I/d.
pub fn sigma_j_state(n: u64, d: usize) -> Result<BlockState> {
    match jn_prior(n, d) {
        Ok(j) => Ok(j.state),
        Err(Error::AllZeroWeight { .. }) => crate::approx::uniform_state(n, d),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TildeOptions {
    /// Fixed quadrature panels over the substituted coordinate (d=2).
    pub panels: usize,
    /// Accepted deviation of the raw quadrature mass from 1 (d=2); larger
    /// deviation reports budget exhaustion with the achieved value.
    pub tol: f64,
    /// Monte Carlo controls (d >= 3).
    pub seed: u64,
    pub samples: usize,
}

impl Default for TildeOptions {
    fn default() -> Self {
        Self {
            panels: 512,
            tol: 1e-6,
            seed: 0x5eed_cafe,
            samples: 512,
        }
    }
}

/// σ̃_J,n: block weights ∫ Q_p⃗(λ) J(p⃗) dp⃗ over the ordered simplex.
/// Full support: every diagram receives positive weight.
pub fn sigma_j_tilde(n: u64, d: usize, opts: &TildeOptions) -> Result<BlockState> {
    match d {
        2 => sigma_j_tilde_qubit(n, opts),
        _ => sigma_j_tilde_mc(n, d, opts),
    }
}

/// d=2: fixed composite Gauss-Kronrod panels in the substituted coordinate
/// p_2 = u², weighting each sampled measure by the prior density.
fn sigma_j_tilde_qubit(n: u64, opts: &TildeOptions) -> Result<BlockState> {
    let normalizer = integral_log2(2, &IntegralOptions::default())?;
    let count = enumerate_diagrams(n, 2)?.len();
    let upper = 0.5f64.sqrt();
    let h = upper / opts.panels as f64;
    // 15 Kronrod nodes per panel
    let nodes: Vec<(f64, f64)> = (0..opts.panels)
        .flat_map(|i| {
            let a = i as f64 * h;
            let c = a + 0.5 * h;
            let half = 0.5 * h;
            (0..15).map(move |j| {
                let (x, w) = kronrod_node(j);
                (c + half * x, w * half)
            })
        })
        .collect();

    let contributions: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(u, w)| {
            let p2 = (u * u).clamp(1e-300, 0.5);
            let p1 = 1.0 - p2;
            if p1 <= p2 {
                return Ok(vec![0.0; count]);
            }
            let p = Spectrum::new(vec![p1, p2])?;
            let prior = eval_c(&p)? - normalizer.log2_value;
            let scale = w * 2.0 * u * prior.exp2();
            let measure = schur_weyl_measure(&p, n)?;
            Ok(measure
                .log2_iter()
                .map(|(_, lq)| scale * lq.exp2())
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut raw = vec![0.0f64; count];
    for contrib in &contributions {
        for (r, c) in raw.iter_mut().zip(contrib) {
            *r += c;
        }
    }
    // the raw mass integrates the prior itself, so its deviation from 1 is
    // the achieved quadrature accuracy
    let achieved = (raw.iter().sum::<f64>() - 1.0).abs();
    if achieved > opts.tol {
        return Err(Error::BudgetExhausted(format!(
            "tilde quadrature reached |mass − 1| = {achieved:.3e} with {} panels, tolerance {:.1e}",
            opts.panels, opts.tol
        )));
    }
    BlockState::from_unnormalized(n, 2, raw)
}

#[allow(clippy::excessive_precision)]
fn kronrod_node(j: usize) -> (f64, f64) {
    const XGK: [f64; 8] = [
        0.991_455_371_120_812_639_206_854_697_526_329,
        0.949_107_912_342_758_524_526_189_684_047_851,
        0.864_864_423_359_769_072_789_712_788_640_926,
        0.741_531_185_599_394_439_863_864_773_280_788,
        0.586_087_235_467_691_130_294_144_838_258_730,
        0.405_845_151_377_397_166_906_606_412_076_961,
        0.207_784_955_007_898_467_600_689_403_773_245,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_224_963_732_008_058_970,
        0.063_092_092_629_978_553_290_700_663_189_204,
        0.104_790_010_322_250_183_839_876_322_541_518,
        0.140_653_259_715_525_918_745_189_590_510_238,
        0.169_004_726_639_267_902_826_583_426_598_550,
        0.190_350_578_064_785_409_913_256_402_421_014,
        0.204_432_940_075_298_892_414_161_999_234_649,
        0.209_482_141_084_727_828_012_999_174_891_714,
    ];
    if j < 7 {
        (-XGK[j], WGK[j])
    } else if j == 7 {
        (0.0, WGK[7])
    } else {
        (XGK[14 - j], WGK[14 - j])
    }
}

/// d >= 3: average the measure over prior samples drawn by the same
/// importance scheme as the integral, reweighted to the prior.
fn sigma_j_tilde_mc(n: u64, d: usize, opts: &TildeOptions) -> Result<BlockState> {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let count = enumerate_diagrams(n, d)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut raw = vec![0.0f64; count];
    let mut accepted = 0usize;
    let mut draws = 0usize;
    while accepted < opts.samples {
        draws += 1;
        if draws > opts.samples * 1000 {
            return Err(Error::BudgetExhausted(
                "prior sampling acceptance rate too low".into(),
            ));
        }
        let mut gamma = vec![0.0f64; d];
        for (i, g) in gamma.iter_mut().enumerate() {
            let u: f64 = rng.gen_range(1e-16..1.0);
            *g = if i + 1 < d {
                -u.ln()
            } else {
                let z = std::f64::consts::SQRT_2 * erf_inv(2.0 * u - 1.0);
                0.5 * z * z
            };
        }
        let total: f64 = gamma.iter().sum();
        let mut p: Vec<f64> = gamma.iter().map(|g| g / total).collect();
        let p_last = p[d - 1];
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if p[d - 1] <= 1e-12 || p.windows(2).any(|w| w[0] <= w[1]) {
            continue;
        }
        let spectrum = Spectrum::new(p)?;
        let Ok(c) = eval_c(&spectrum) else { continue };
        // importance weight of prior against the proposal (up to a constant
        // absorbed by the final normalization)
        let log2_w = c + 0.5 * p_last.ln() / std::f64::consts::LN_2;
        let w = log2_w.exp2();
        if !w.is_finite() || w <= 0.0 {
            continue;
        }
        // near-degenerate draws can fail the conditioning guard; skip them
        let Ok(measure) = schur_weyl_measure(&spectrum, n) else {
            continue;
        };
        for (r, (_, lq)) in raw.iter_mut().zip(measure.log2_iter()) {
            *r += w * lq.exp2();
        }
        accepted += 1;
    }
    BlockState::from_unnormalized(n, d, raw)
}

/// One row of the equalizer scan.
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub spectrum: Vec<f64>,
    /// D(ρ(p⃗)^⊗n ‖ σ) − ((d²−1)/2) log2 n, on the state's support.
    pub compensated: f64,
    pub excluded_log2_mass: f64,
}

#[derive(Debug, Clone)]
pub struct EqualizerScan {
    pub n: u64,
    pub d: usize,
    pub entries: Vec<ScanEntry>,
    pub spread: f64,
    pub sup: f64,
}

/// Compensated redundancy of a block state over a grid of spectra.
pub fn equalizer_scan(sigma: &BlockState, grid: &[Spectrum]) -> Result<EqualizerScan> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum grid".into()));
    }
    let n = sigma.n();
    let d = sigma.d();
    let leading = ((d * d - 1) as f64 / 2.0) * (n as f64).log2();
    let entries: Vec<ScanEntry> = grid
        .par_iter()
        .map(|p| {
            let r = relative_entropy_on_support(p, sigma)?;
            Ok(ScanEntry {
                spectrum: p.probs().to_vec(),
                compensated: r.bits - leading,
                excluded_log2_mass: r.excluded_log2_mass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = entries
        .iter()
        .map(|e| e.compensated)
        .fold(f64::NEG_INFINITY, f64::max);
    let inf = entries
        .iter()
        .map(|e| e.compensated)
        .fold(f64::INFINITY, f64::min);
    Ok(EqualizerScan {
        n,
        d,
        entries,
        spread: sup - inf,
        sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::uniform_state;

    #[test]
    fn qubit_integrand_spot_values() {
        // at p1 = 3/4: 2^C ≈ 0.4445, so g(u) = 2u·0.4445 at u = 1/2
        let u = 0.5;
        let g = qubit_integrand_substituted(u);
        let c = (g / (2.0 * u)).log2();
        let expect = eval_c(&Spectrum::new(vec![0.75, 0.25]).unwrap()).unwrap();
        assert!((c - expect).abs() < 1e-12);
        assert!((g / (2.0 * u) - 0.4445).abs() < 5e-4);
        // p1 -> 1/2 end: integrand vanishes
        assert!(qubit_integrand_substituted(0.5f64.sqrt()) < 1e-12);
        // u -> 0 end: finite limit 2
        assert!((qubit_integrand_substituted(0.0) - 2.0).abs() < 1e-12);
        assert!((qubit_integrand_substituted(1e-8) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn qubit_integral_reproduces_published_value() {
        let est = integral_log2(2, &IntegralOptions::default()).unwrap();
        assert!(
            (est.log2_value - (-0.50737)).abs() < 5e-4,
            "{}",
            est.log2_value
        );
        // self-consistency: halving the tolerance moves the result < 1e-4
        let tight = IntegralOptions {
            tol: 0.5e-9,
            ..Default::default()
        };
        let est2 = integral_log2(2, &tight).unwrap();
        assert!((est.log2_value - est2.log2_value).abs() < 1e-4);
    }

    #[test]
    fn qubit_minimax_report() {
        let r = minimax_value(2, &IntegralOptions::default()).unwrap();
        assert!((r.minimax - (-3.5545)).abs() < 1e-3, "{}", r.minimax);
        assert!((r.c_d + r.integral_log2 - r.minimax).abs() < 1e-15);
        let cmp = r.comparison.unwrap();
        assert!((cmp.improvement - 1.1589).abs() < 1e-3);
        // the constant the equalizer scan actually approaches
        assert!((r.equalizer_constant - (-2.554461)).abs() < 1e-4);
    }

    #[test]
    fn jn_prior_point_masses_and_boundaries() {
        // n=1, d=2: the single diagram (1,0) has an empty row, so the raw
        // prior is all-zero; sigma_j_state falls back to I/d
        assert!(matches!(jn_prior(1, 2), Err(Error::AllZeroWeight { .. })));
        let s1 = sigma_j_state(1, 2).unwrap();
        assert_eq!(s1.weights(), &[1.0]);

        // n=4, d=2: (4,0) zero row, (2,2) tied -> point mass on (3,1)
        let j4 = jn_prior(4, 2).unwrap();
        assert_eq!(j4.support, 1);
        let w: Vec<f64> = j4.state.weights().to_vec();
        assert!((w[1] - 1.0).abs() < 1e-15);

        // d=3: every diagram of n=3 is boundary ((3,0,0), (2,1,0), (1,1,1));
        // the first interior diagram (3,2,1) appears at n=6
        assert!(matches!(jn_prior(3, 3), Err(Error::AllZeroWeight { .. })));
        let j6 = jn_prior(6, 3).unwrap();
        assert_eq!(j6.support, 1);
        assert!((j6.state.weight(
            &crate::young::YoungDiagram::new(vec![3, 2, 1]).unwrap()
        ) - 1.0)
            .abs()
            < 1e-15);

        // empty grid is rejected by the scan
        assert!(equalizer_scan(&j6.state, &[]).is_err());
    }

    #[test]
    fn jn_normalizer_frozen_values_and_trend() {
        // Z_n/n increases toward the integral 0.7035
        let mut prev = 0.0;
        for (n, expect) in [(256u64, 0.612729224), (1024, 0.657940651), (4096, 0.680697836)] {
            let j = jn_prior(n, 2).unwrap();
            let ratio = j.normalizer / n as f64;
            assert!((ratio - expect).abs() < 1e-6, "n={n}: {ratio}");
            assert!(ratio > prev);
            prev = ratio;
        }
    }

    #[test]
    fn equalizer_scan_frozen_values() {
        let sigma = sigma_j_state(1024, 2).unwrap();
        let grid: Vec<Spectrum> = [0.6, 0.7, 0.8, 0.9]
            .iter()
            .map(|&p1| Spectrum::new(vec![p1, 1.0 - p1]).unwrap())
            .collect();
        let scan = equalizer_scan(&sigma, &grid).unwrap();
        let expect = [-2.640202, -2.647195, -2.649753, -2.652004];
        for (e, x) in scan.entries.iter().zip(expect) {
            assert!((e.compensated - x).abs() < 1e-5, "{} vs {x}", e.compensated);
        }
        assert!(scan.spread < 0.012);
    }

    #[test]
    fn sigma_tilde_full_support_and_tv_trend() {
        let mut prev_tv = 1.0;
        for (n, expect_tv) in [(64u64, 0.2999), (256, 0.1551)] {
            let tilde = sigma_j_tilde(n, 2, &TildeOptions::default()).unwrap();
            assert!(tilde.is_full_support());
            let jn = sigma_j_state(n, 2).unwrap();
            let tv: f64 = 0.5
                * tilde
                    .weights()
                    .iter()
                    .zip(jn.weights())
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>();
            assert!((tv - expect_tv).abs() < 5e-3, "n={n}: tv={tv}");
            assert!(tv < prev_tv);
            prev_tv = tv;
        }
    }

    #[test]
    fn jeffreys_density_normalizes_against_the_integral() {
        let est = integral_log2(2, &IntegralOptions::default()).unwrap();
        let prior = JeffreysPrior {
            d: 2,
            log2_normalizer: est.log2_value,
        };
        // density at p1 = 3/4: 2^{C}/I with 2^C ≈ 0.4445
        let p = Spectrum::new(vec![0.75, 0.25]).unwrap();
        let log2_density = prior.log2_density(&p).unwrap();
        let expect = eval_c(&p).unwrap() - est.log2_value;
        assert!((log2_density - expect).abs() < 1e-12);
        assert!((log2_density.exp2() - 0.4445 / est.value).abs() < 1e-3);
    }

    #[test]
    fn equalizer_spread_shrinks_along_dyadic_n() {
        let grid: Vec<Spectrum> = [0.6, 0.7, 0.8, 0.9]
            .iter()
            .map(|&p1| Spectrum::new(vec![p1, 1.0 - p1]).unwrap())
            .collect();
        let mut prev = f64::INFINITY;
        for n in [256u64, 1024, 4096] {
            let scan = equalizer_scan(&sigma_j_state(n, 2).unwrap(), &grid).unwrap();
            assert!(scan.spread < prev, "n={n}: {}", scan.spread);
            prev = scan.spread;
        }
    }

    #[test]
    fn sigma_states_at_n1_are_maximally_mixed() {
        for d in 2..=3usize {
            let tilde = sigma_j_tilde(1, d, &TildeOptions::default()).unwrap();
            assert_eq!(tilde.weights(), &[1.0]);
            let sj = sigma_j_state(1, d).unwrap();
            assert_eq!(sj.weights(), &[1.0]);
        }
    }

    #[test]
    fn jeffreys_beats_uniform_at_finite_n() {
        let n = 1024;
        let grid: Vec<Spectrum> = [0.6, 0.7, 0.8, 0.9]
            .iter()
            .map(|&p1| Spectrum::new(vec![p1, 1.0 - p1]).unwrap())
            .collect();
        let sj = equalizer_scan(&sigma_j_state(n, 2).unwrap(), &grid).unwrap();
        let su = equalizer_scan(&uniform_state(n, 2).unwrap(), &grid).unwrap();
        assert!(sj.sup < su.sup);
    }

    #[test]
    fn d3_monte_carlo_integral_is_stable() {
        let opts = IntegralOptions {
            strata: 16,
            pairs_per_stratum: 512,
            ..Default::default()
        };
        let a = integral_log2(3, &opts).unwrap();
        let b = integral_log2(
            3,
            &IntegralOptions {
                seed: 99,
                strata: 16,
                pairs_per_stratum: 512,
                ..Default::default()
            },
        )
        .unwrap();
        let se = a.std_error.unwrap() + b.std_error.unwrap();
        assert!(
            (a.value - b.value).abs() < 6.0 * se,
            "{} vs {} (se {se})",
            a.value,
            b.value
        );
        // determinism for a fixed seed
        let a2 = integral_log2(3, &opts).unwrap();
        assert_eq!(a.value, a2.value);
    }

    #[test]
    fn ordered_simplex_membership() {
        let y3 = OrderedSimplex::new(3).unwrap();
        assert!(y3.contains(&[0.5, 0.3, 0.2]));
        assert!(!y3.contains(&[0.3, 0.5, 0.2]));
        assert!(!y3.contains(&[0.6, 0.4, 0.0]));
    }
}
