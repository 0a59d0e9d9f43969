//! Schur polynomial evaluation and the induced block-occupancy measure on
//! Y_n^d for a diagonal state with spectrum p⃗.
//!
//! Three evaluation routes, each validated against the others:
//! - d = 2: closed two-variable bialternant via a stable homogeneous sum;
//! - d >= 3, moderate n: Gelfand-Tsetlin branching DP (all-nonnegative terms);
//! - d >= 3, large n: signed bialternant in log2 domain with an explicit
//!   cancellation guard that rejects ill-conditioned spectra.
//!
//! An independent brute-force oracle computes the same measure as the shape
//! distribution of RSK row insertion over all d^n words.

use crate::error::{Error, Result};
use crate::numeric::{log2_h_sum, log2_sum_exp, signed_log2_sum, CompensatedSum};
use crate::young::{dim_sym, enumerate_diagrams, YoungDiagram};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

/// Largest n for which the Gelfand-Tsetlin DP stays the d >= 3 default
/// route; the per-diagram DP cost grows like n^{2(d-2)}, so the cap shrinks
/// with depth. Above it the guarded bialternant takes over.
pub fn gt_default_limit(d: usize) -> u64 {
    match d {
        0..=3 => 150,
        4 => 40,
        _ => 16,
    }
}

/// Cancellation budget for the signed bialternant, in bits.
pub const BIALTERNANT_LOSS_LIMIT: f64 = 30.0;

/// Size cap for the RSK word-enumeration oracle.
pub const RSK_WORD_CAP: u64 = 6561;

/// A full-rank spectrum p_1,...,p_d, each in (0,1), summing to 1. The
/// optional exact entries enable the rational evaluation mode.
#[derive(Debug, Clone)]
pub struct Spectrum {
    probs: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl Spectrum {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) && probs.len() > 1 {
            return Err(Error::InvalidSpectrum(format!(
                "entries must lie in (0,1), got {probs:?}"
            )));
        }
        if probs.len() == 1 {
            if (probs[0] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSpectrum("d=1 spectrum must be (1)".into()));
            }
            return Ok(Self {
                probs: vec![1.0],
                exact: Some(vec![BigRational::one()]),
            });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpectrum(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Self { probs, exact: None })
    }

    /// Spectrum with exact rational entries (enables the exact measure mode).
    pub fn from_rationals(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        let sum: BigRational = entries.iter().cloned().sum();
        if !sum.is_one() {
            return Err(Error::InvalidSpectrum(format!(
                "rational entries sum to {sum}, not 1"
            )));
        }
        if entries.len() > 1
            && entries
                .iter()
                .any(|p| !p.is_positive() || p >= &BigRational::one())
        {
            return Err(Error::InvalidSpectrum(
                "rational entries must lie in (0,1)".into(),
            ));
        }
        let probs = entries.iter().map(|p| p.to_f64().unwrap()).collect();
        Ok(Self {
            probs,
            exact: Some(entries),
        })
    }

    /// Convenience constructor from integer numerators over a common denominator.
    pub fn from_fractions(numerators: &[u64], denominator: u64) -> Result<Self> {
        let entries = numerators
            .iter()
            .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(denominator)))
            .collect();
        Self::from_rationals(entries)
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// Entries sorted in decreasing order (the measure is permutation
    /// invariant, so evaluation always runs on the sorted copy).
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.probs.clone();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.probs.windows(2).all(|w| w[0] > w[1])
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        crate::numeric::entropy_bits(&self.probs)
    }
}

/// The block-occupancy distribution over Y_n^d induced by a spectrum:
/// weight(λ) = s_λ(p⃗) · dim V_λ.
#[derive(Debug, Clone)]
pub struct SchurWeylMeasure {
    n: u64,
    d: usize,
    diagrams: Vec<YoungDiagram>,
    log2_weights: Vec<f64>,
    index: HashMap<YoungDiagram, usize>,
}

impl SchurWeylMeasure {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagrams(&self) -> &[YoungDiagram] {
        &self.diagrams
    }

    pub fn weight(&self, lambda: &YoungDiagram) -> f64 {
        self.index
            .get(lambda)
            .map(|&i| self.log2_weights[i].exp2())
            .unwrap_or(0.0)
    }

    pub fn log2_weight(&self, lambda: &YoungDiagram) -> f64 {
        self.index
            .get(lambda)
            .map(|&i| self.log2_weights[i])
            .unwrap_or(f64::NEG_INFINITY)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&YoungDiagram, f64)> {
        self.diagrams
            .iter()
            .zip(self.log2_weights.iter().map(|l| l.exp2()))
    }

    pub fn log2_iter(&self) -> impl Iterator<Item = (&YoungDiagram, f64)> {
        self.diagrams.iter().zip(self.log2_weights.iter().copied())
    }

    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &l in &self.log2_weights {
            acc.add(l.exp2());
        }
        acc.value()
    }

    /// Diagram with the largest weight.
    pub fn mode(&self) -> &YoungDiagram {
        let mut best = 0;
        for i in 1..self.log2_weights.len() {
            if self.log2_weights[i] > self.log2_weights[best] {
                best = i;
            }
        }
        &self.diagrams[best]
    }
}

/// Evaluation route for Schur polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurRoute {
    /// Pick based on d and n.
    Auto,
    /// Gelfand-Tsetlin branching DP (nonnegative terms, any spectrum).
    GelfandTsetlin,
    /// Signed bialternant with cancellation guard (fast, needs separated spectra).
    Bialternant,
}

/// log2 s_λ(p⃗), route chosen automatically.
pub fn schur_poly_log2(lambda: &YoungDiagram, p: &Spectrum) -> Result<f64> {
    schur_poly_log2_with(lambda, p, SchurRoute::Auto)
}

pub fn schur_poly_log2_with(lambda: &YoungDiagram, p: &Spectrum, route: SchurRoute) -> Result<f64> {
    check_shape(lambda, p)?;
    let xs = p.sorted_desc();
    let log2_xs: Vec<f64> = xs.iter().map(|x| x.log2()).collect();
    let d = xs.len();
    match route {
        SchurRoute::Auto => {
            if d <= 2 {
                Ok(schur_two_rows_log2(lambda, &log2_xs))
            } else if lambda.size() <= gt_default_limit(d) {
                Ok(schur_gt_log2(lambda, &log2_xs))
            } else if has_ties(&xs) {
                // only the DP handles exact ties, and it does not scale here
                Err(Error::SizeCap(format!(
                    "tied spectra need the Gelfand-Tsetlin route, capped at n <= {} for d = {d}",
                    gt_default_limit(d)
                )))
            } else {
                schur_bialternant_log2(lambda, &xs)
            }
        }
        SchurRoute::GelfandTsetlin => {
            if d <= 2 {
                Ok(schur_two_rows_log2(lambda, &log2_xs))
            } else {
                Ok(schur_gt_log2(lambda, &log2_xs))
            }
        }
        SchurRoute::Bialternant => {
            if d == 1 {
                return Ok(lambda.rows()[0] as f64 * log2_xs[0]);
            }
            if has_ties(&xs) {
                return Err(Error::ConditioningLoss {
                    loss_bits: f64::INFINITY,
                });
            }
            if d == 2 {
                return Ok(schur_two_rows_log2(lambda, &log2_xs));
            }
            schur_bialternant_log2(lambda, &xs)
        }
    }
}

fn check_shape(lambda: &YoungDiagram, p: &Spectrum) -> Result<()> {
    if lambda.depth() != p.dim() {
        return Err(Error::InvalidArgument(format!(
            "diagram depth {} does not match spectrum dimension {}",
            lambda.depth(),
            p.dim()
        )));
    }
    Ok(())
}

fn has_ties(xs: &[f64]) -> bool {
    xs.windows(2).any(|w| w[0] == w[1])
}

/// d <= 2 closed form: s_(a,b)(x,y) = (xy)^b h_{a-b}(x,y).
fn schur_two_rows_log2(lambda: &YoungDiagram, log2_xs: &[f64]) -> f64 {
    let rows = lambda.rows();
    if log2_xs.len() == 1 {
        return rows[0] as f64 * log2_xs[0];
    }
    let (a, b) = (rows[0], rows[1]);
    b as f64 * (log2_xs[0] + log2_xs[1]) + log2_h_sum(log2_xs[0], log2_xs[1], a - b)
}

/// Gelfand-Tsetlin branching DP in log2 domain:
/// s_μ(x_1..x_k) = Σ_{ν ≺ μ} s_ν(x_1..x_{k-1}) x_k^{|μ|-|ν|},
/// with the two-variable base case in closed form. All terms nonnegative.
fn schur_gt_log2(lambda: &YoungDiagram, log2_xs: &[f64]) -> f64 {
    let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
    gt_rec(lambda.rows(), log2_xs, &mut memo)
}

fn gt_rec(mu: &[u64], log2_xs: &[f64], memo: &mut HashMap<Vec<u64>, f64>) -> f64 {
    let k = mu.len();
    if k == 1 {
        return mu[0] as f64 * log2_xs[0];
    }
    if k == 2 {
        return mu[1] as f64 * (log2_xs[0] + log2_xs[1])
            + log2_h_sum(log2_xs[0], log2_xs[1], mu[0] - mu[1]);
    }
    if let Some(&v) = memo.get(mu) {
        return v;
    }
    let size: u64 = mu.iter().sum();
    let xk = log2_xs[k - 1];
    // interlacing ν: μ_{i+1} <= ν_i <= μ_i, enumerated by odometer
    let mut nu: Vec<u64> = mu[1..].to_vec();
    let mut terms: Vec<f64> = Vec::new();
    loop {
        let nu_size: u64 = nu.iter().sum();
        let sub = gt_rec(&nu, &log2_xs[..k - 1], memo);
        terms.push(sub + (size - nu_size) as f64 * xk);
        // advance odometer
        let mut pos = nu.len();
        loop {
            if pos == 0 {
                let v = log2_sum_exp(&terms);
                memo.insert(mu.to_vec(), v);
                return v;
            }
            pos -= 1;
            if nu[pos] < mu[pos] {
                nu[pos] += 1;
                let tail = nu.len();
                nu[pos + 1..tail].copy_from_slice(&mu[pos + 2..tail + 1]);
                break;
            }
        }
    }
}

/// Signed bialternant: s_λ = det(x_i^{l_j}) / Π_{i<j}(x_i - x_j), evaluated as
/// a signed log-domain permutation sum with a cancellation guard.
fn schur_bialternant_log2(lambda: &YoungDiagram, xs_desc: &[f64]) -> Result<f64> {
    let d = xs_desc.len();
    let rows = lambda.rows();
    let ell: Vec<f64> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| (r + (d - 1 - i) as u64) as f64)
        .collect();
    let log2_xs: Vec<f64> = xs_desc.iter().map(|x| x.log2()).collect();
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let mut perm: Vec<usize> = (0..d).collect();
    permute_signed(&mut perm, 0, 1.0, &mut |sigma, sign| {
        let mut t = 0.0;
        for (j, &l) in ell.iter().enumerate() {
            t += l * log2_xs[sigma[j]];
        }
        terms.push((sign, t));
    });
    let s = signed_log2_sum(&terms);
    if s.sign <= 0.0 || !s.loss_bits.is_finite() || s.loss_bits > BIALTERNANT_LOSS_LIMIT {
        return Err(Error::ConditioningLoss {
            loss_bits: s.loss_bits,
        });
    }
    let mut log2_vand = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            log2_vand += (xs_desc[i] - xs_desc[j]).log2();
        }
    }
    Ok(s.log2_abs - log2_vand)
}

fn permute_signed(
    perm: &mut Vec<usize>,
    k: usize,
    sign: f64,
    f: &mut impl FnMut(&[usize], f64),
) {
    let d = perm.len();
    if k == d {
        f(perm, sign);
        return;
    }
    for i in k..d {
        perm.swap(k, i);
        let s = if i == k { sign } else { -sign };
        permute_signed(perm, k + 1, s, f);
        perm.swap(k, i);
    }
}

/// Exact rational s_λ(p⃗) by the Gelfand-Tsetlin recursion.
pub fn schur_poly_exact(lambda: &YoungDiagram, entries: &[BigRational]) -> Result<BigRational> {
    if lambda.depth() != entries.len() {
        return Err(Error::InvalidArgument(
            "diagram depth does not match spectrum dimension".into(),
        ));
    }
    let mut sorted: Vec<BigRational> = entries.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut memo: HashMap<Vec<u64>, BigRational> = HashMap::new();
    Ok(gt_rec_exact(lambda.rows(), &sorted, &mut memo))
}

fn gt_rec_exact(
    mu: &[u64],
    xs: &[BigRational],
    memo: &mut HashMap<Vec<u64>, BigRational>,
) -> BigRational {
    let k = mu.len();
    if k == 1 {
        return rat_pow(&xs[0], mu[0]);
    }
    if let Some(v) = memo.get(mu) {
        return v.clone();
    }
    let v = if k == 2 {
        // (xy)^{μ2} Σ_{i=0}^{μ1-μ2} x^i y^{μ1-μ2-i}
        let m = mu[0] - mu[1];
        let mut h = BigRational::zero();
        for i in 0..=m {
            h += rat_pow(&xs[0], i) * rat_pow(&xs[1], m - i);
        }
        rat_pow(&(xs[0].clone() * xs[1].clone()), mu[1]) * h
    } else {
        let size: u64 = mu.iter().sum();
        let xk = &xs[k - 1];
        let mut nu: Vec<u64> = mu[1..].to_vec();
        let mut acc = BigRational::zero();
        'outer: loop {
            let nu_size: u64 = nu.iter().sum();
            acc += gt_rec_exact(&nu, &xs[..k - 1], memo) * rat_pow(xk, size - nu_size);
            let mut pos = nu.len();
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if nu[pos] < mu[pos] {
                    nu[pos] += 1;
                    let tail = nu.len();
                    nu[pos + 1..tail].copy_from_slice(&mu[pos + 2..tail + 1]);
                    break;
                }
            }
        }
        acc
    };
    memo.insert(mu.to_vec(), v.clone());
    v
}

fn rat_pow(base: &BigRational, mut e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

/// The measure Q_p⃗ on Y_n^d: weight(λ) = s_λ(p⃗) · dim V_λ.
pub fn schur_weyl_measure(p: &Spectrum, n: u64) -> Result<SchurWeylMeasure> {
    schur_weyl_measure_with(p, n, SchurRoute::Auto)
}

pub fn schur_weyl_measure_with(
    p: &Spectrum,
    n: u64,
    route: SchurRoute,
) -> Result<SchurWeylMeasure> {
    let d = p.dim();
    let diagrams = enumerate_diagrams(n, d)?;
    let log2_weights: Vec<f64> = diagrams
        .par_iter()
        .map(|lam| {
            schur_poly_log2_with(lam, p, route).map(|s| s + dim_sym(lam).log2)
        })
        .collect::<Result<Vec<_>>>()?;
    let index = diagrams
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, lam)| (lam, i))
        .collect();
    Ok(SchurWeylMeasure {
        n,
        d,
        diagrams,
        log2_weights,
        index,
    })
}

/// Exact rational Q_p⃗ for spectra with rational entries.
pub fn schur_weyl_measure_exact(
    p: &Spectrum,
    n: u64,
) -> Result<Vec<(YoungDiagram, BigRational)>> {
    let entries = p.exact().ok_or_else(|| {
        Error::InvalidSpectrum("rational mode needs a spectrum with rational entries".into())
    })?;
    let diagrams = enumerate_diagrams(n, p.dim())?;
    diagrams
        .into_iter()
        .map(|lam| {
            let s = schur_poly_exact(&lam, entries)?;
            let dv = dim_sym(&lam)
                .exact
                .ok_or_else(|| Error::SizeCap("exact dimensions unavailable at this n".into()))?;
            let w = s * BigRational::from(BigInt::from(dv));
            Ok((lam, w))
        })
        .collect()
}

/// Shape of the RSK P-tableau after row-inserting the word.
fn rsk_shape(word: &[usize], d: usize) -> Vec<u64> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &letter in word {
        let mut x = letter;
        let mut placed = false;
        for row in rows.iter_mut() {
            // bump the leftmost entry strictly greater than x
            match row.iter().position(|&y| y > x) {
                Some(pos) => {
                    std::mem::swap(&mut row[pos], &mut x);
                }
                None => {
                    row.push(x);
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            rows.push(vec![x]);
        }
    }
    let mut shape: Vec<u64> = rows.iter().map(|r| r.len() as u64).collect();
    shape.resize(d, 0);
    shape
}

/// Brute-force oracle: the exact shape distribution of RSK over all d^n
/// i.i.d. words, which coincides with the Schur-Weyl measure for diagonal
/// states. Rational-exact; capped at d^n <= 6561.
pub fn rsk_oracle_measure_exact(
    p: &Spectrum,
    n: u64,
) -> Result<Vec<(YoungDiagram, BigRational)>> {
    let entries = p.exact().ok_or_else(|| {
        Error::InvalidSpectrum("RSK oracle in rational mode needs rational entries".into())
    })?;
    let d = p.dim();
    let words = (d as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if words > RSK_WORD_CAP {
        return Err(Error::SizeCap(format!(
            "RSK oracle capped at d^n <= {RSK_WORD_CAP}, got {words}"
        )));
    }
    let mut acc: HashMap<Vec<u64>, BigRational> = HashMap::new();
    let mut word = vec![0usize; n as usize];
    loop {
        let mut prob = BigRational::one();
        for &l in &word {
            prob *= entries[l].clone();
        }
        let shape = rsk_shape(&word, d);
        *acc.entry(shape).or_insert_with(BigRational::zero) += prob;
        // odometer over words
        let mut pos = word.len();
        loop {
            if pos == 0 {
                let mut out: Vec<(YoungDiagram, BigRational)> = Vec::new();
                for lam in enumerate_diagrams(n, d)? {
                    let w = acc
                        .remove(lam.rows())
                        .unwrap_or_else(BigRational::zero);
                    out.push((lam, w));
                }
                return Ok(out);
            }
            pos -= 1;
            if word[pos] + 1 < d {
                word[pos] += 1;
                word[pos + 1..].fill(0);
                break;
            }
        }
    }
}

/// Floating-point view of the RSK oracle (same enumeration, f64 weights).
pub fn rsk_oracle_measure(p: &Spectrum, n: u64) -> Result<SchurWeylMeasure> {
    let d = p.dim();
    let words = (d as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if words > RSK_WORD_CAP {
        return Err(Error::SizeCap(format!(
            "RSK oracle capped at d^n <= {RSK_WORD_CAP}, got {words}"
        )));
    }
    let probs = p.probs();
    let mut acc: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut word = vec![0usize; n as usize];
    loop {
        let mut prob = 1.0;
        for &l in &word {
            prob *= probs[l];
        }
        *acc.entry(rsk_shape(&word, d)).or_insert(0.0) += prob;
        let mut pos = word.len();
        loop {
            if pos == 0 {
                let diagrams = enumerate_diagrams(n, d)?;
                let log2_weights: Vec<f64> = diagrams
                    .iter()
                    .map(|lam| acc.get(lam.rows()).copied().unwrap_or(0.0).log2())
                    .collect();
                let index = diagrams
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, lam)| (lam, i))
                    .collect();
                return Ok(SchurWeylMeasure {
                    n,
                    d,
                    diagrams,
                    log2_weights,
                    index,
                });
            }
            pos -= 1;
            if word[pos] + 1 < d {
                word[pos] += 1;
                word[pos + 1..].fill(0);
                break;
            }
        }
    }
}

/// Expectations of the block log-quantities under Q_p⃗, one pass.
#[derive(Debug, Clone, Copy)]
pub struct MeasureExpectations {
    pub e_log2_dim_su: f64,
    pub e_log2_dim_sym: f64,
    pub e_log2_multinomial: f64,
}

pub fn schur_weyl_log_expectations(p: &Spectrum, n: u64) -> Result<MeasureExpectations> {
    let measure = schur_weyl_measure(p, n)?;
    let terms: Vec<(f64, f64, f64, f64)> = measure
        .diagrams()
        .par_iter()
        .zip(measure.log2_weights.par_iter())
        .map(|(lam, &lw)| {
            let q = lw.exp2();
            let pair = crate::young::dim_pair(lam);
            (
                q * pair.su.log2,
                q * pair.sym.log2,
                q * crate::young::multinomial_log2(lam),
                q,
            )
        })
        .collect();
    let mut su = CompensatedSum::new();
    let mut sym = CompensatedSum::new();
    let mut mult = CompensatedSum::new();
    for (a, b, c, _) in &terms {
        su.add(*a);
        sym.add(*b);
        mult.add(*c);
    }
    Ok(MeasureExpectations {
        e_log2_dim_su: su.value(),
        e_log2_dim_sym: sym.value(),
        e_log2_multinomial: mult.value(),
    })
}
