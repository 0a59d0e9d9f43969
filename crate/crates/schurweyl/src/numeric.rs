//! Base-2 log-domain primitives shared by the combinatorial and spectral code.
//!
//! Everything downstream reports in bits, so logs are kept in base 2
//! throughout and converted from natural logs only at these entry points.

use std::f64::consts::LN_2;

/// log2 Γ(x).
pub fn log2_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x) / LN_2
}

/// log2 n!.
pub fn log2_factorial(n: u64) -> f64 {
    log2_gamma(n as f64 + 1.0)
}

/// log2 C(n, k).
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k)
}

/// log2(2^a + 2^b), safe against -inf.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + ((lo - hi) * LN_2).exp().ln_1p() / LN_2
}

/// log2 Σ 2^{t_i} over a slice, max-shifted.
pub fn log2_sum_exp(terms: &[f64]) -> f64 {
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| ((t - mx) * LN_2).exp()).sum();
    mx + s.log2()
}

/// Outcome of a signed log-domain sum: `log2_abs` of the result, its sign,
/// and how many bits of the leading term were lost to cancellation.
#[derive(Debug, Clone, Copy)]
pub struct SignedLogSum {
    pub sign: f64,
    pub log2_abs: f64,
    pub loss_bits: f64,
}

/// Σ sign_i · 2^{t_i} in log2 domain. Returns the signed magnitude and the
/// cancellation loss (log2 of largest-term / |sum|).
pub fn signed_log2_sum(terms: &[(f64, f64)]) -> SignedLogSum {
    let mx = terms
        .iter()
        .map(|&(_, t)| t)
        .fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return SignedLogSum {
            sign: 0.0,
            log2_abs: f64::NEG_INFINITY,
            loss_bits: 0.0,
        };
    }
    let mut sum = 0.0f64;
    for &(sign, t) in terms {
        sum += sign * ((t - mx) * LN_2).exp();
    }
    if sum == 0.0 {
        return SignedLogSum {
            sign: 0.0,
            log2_abs: f64::NEG_INFINITY,
            loss_bits: f64::INFINITY,
        };
    }
    SignedLogSum {
        sign: sum.signum(),
        log2_abs: mx + sum.abs().log2(),
        loss_bits: -sum.abs().log2(),
    }
}

/// log2 of the complete homogeneous sum h_m(a, b) = Σ_{i=0}^{m} a^i b^{m-i},
/// given log2 a and log2 b. Stable for all gaps including a = b.
pub fn log2_h_sum(log2_a: f64, log2_b: f64, m: u64) -> f64 {
    let (hi, lo) = if log2_a >= log2_b {
        (log2_a, log2_b)
    } else {
        (log2_b, log2_a)
    };
    if m == 0 {
        return 0.0;
    }
    // h_m = hi^m (1 - t^{m+1}) / (1 - t) with t = lo/hi in (0, 1].
    let log_t = (lo - hi) * LN_2; // ln t <= 0
    if log_t == 0.0 {
        return m as f64 * hi + ((m + 1) as f64).log2();
    }
    let num = -((m + 1) as f64 * log_t).exp_m1();
    let den = -log_t.exp_m1();
    m as f64 * hi + (num / den).log2()
}

/// Neumaier compensated accumulator. Deterministic for a fixed input order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Binary entropy of a probability vector, in bits.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &p in probs {
        if p > 0.0 {
            acc.add(-p * p.log2());
        }
    }
    acc.value()
}
