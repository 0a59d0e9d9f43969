//! Young diagrams with bounded depth and the two irrep dimensions attached to
//! each diagram: the SU(d) dimension (Weyl product formula) and the symmetric
//! group dimension (factorial-ratio form of the hook length count).
//!
//! Dimensions carry a dual representation: exact big integers up to
//! [`EXACT_DIM_LIMIT`] boxes, log2 floats always. The two paths are
//! cross-checked in the test suite to 1e-10 relative error.

use crate::error::{Error, Result};
use crate::numeric::{log2_factorial, log2_gamma};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Diagrams up to this size get exact big-integer dimensions alongside logs.
pub const EXACT_DIM_LIMIT: u64 = 300;

/// A non-increasing row vector (n_1,...,n_d) with Σ n_i = n. Trailing zero
/// rows are kept so the depth is always explicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    rows: Vec<u64>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<u64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("diagram needs depth >= 1".into()));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "rows must be non-increasing, got {rows:?}"
            )));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Number of boxes n.
    pub fn size(&self) -> u64 {
        self.rows.iter().sum()
    }

    /// Depth d (zero rows included).
    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// Normalized row fractions n_i / n.
    pub fn fractions(&self) -> Vec<f64> {
        let n = self.size() as f64;
        self.rows.iter().map(|&r| r as f64 / n).collect()
    }

    /// True when all rows are strictly decreasing and the last row is positive,
    /// i.e. n⃗/n lies in the open ordered simplex.
    pub fn is_interior(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] > w[1]) && *self.rows.last().unwrap() > 0
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Every diagram in Y_n^d exactly once, rows lexicographically decreasing,
/// so output files are byte-stable.
pub fn enumerate_diagrams(n: u64, d: usize) -> Result<Vec<YoungDiagram>> {
    if d == 0 {
        return Err(Error::InvalidArgument("depth d must be >= 1".into()));
    }
    let mut out = Vec::new();
    let mut acc: Vec<u64> = Vec::with_capacity(d);
    fn rec(rem: u64, max_part: u64, slots: usize, acc: &mut Vec<u64>, out: &mut Vec<YoungDiagram>) {
        if slots == 0 {
            if rem == 0 {
                out.push(YoungDiagram {
                    rows: acc.clone(),
                });
            }
            return;
        }
        let hi = rem.min(max_part);
        // need part * slots >= rem to have any chance of completing
        let lo = rem.div_ceil(slots as u64);
        if lo > hi {
            return;
        }
        let mut part = hi;
        loop {
            acc.push(part);
            rec(rem - part, part, slots - 1, acc, out);
            acc.pop();
            if part == lo {
                break;
            }
            part -= 1;
        }
    }
    rec(n, n.max(1), d, &mut acc, &mut out);
    Ok(out)
}

/// |Y_n^d| without materializing the list (partitions of n into at most d
/// parts, by the conjugate part-size DP).
pub fn count_diagrams(n: u64, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("depth d must be >= 1".into()));
    }
    let n = n as usize;
    let mut table = vec![0u128; n + 1];
    table[0] = 1;
    for s in 1..=d.min(n.max(1)) {
        for j in s..=n {
            table[j] += table[j - s];
        }
    }
    table[n]
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("diagram count exceeds u64".into()))
}

/// An exactly-known positive integer paired with its base-2 log. The exact
/// side is populated only when it is cheap (n <= EXACT_DIM_LIMIT).
#[derive(Debug, Clone)]
pub struct ExactLog {
    pub exact: Option<BigUint>,
    pub log2: f64,
}

impl ExactLog {
    /// Relative agreement between the exact integer and 2^log2, when both exist.
    pub fn relative_error(&self) -> Option<f64> {
        let e = self.exact.as_ref()?;
        let log2_exact = log2_biguint(e);
        Some(((self.log2 - log2_exact) * std::f64::consts::LN_2).exp_m1().abs())
    }
}

/// log2 of a positive big integer, exact to f64 precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// SU(d) irrep dimension by the Weyl product Π_{i<j} (n_i-n_j+j-i)/(j-i).
pub fn dim_su(lambda: &YoungDiagram) -> ExactLog {
    let rows = lambda.rows();
    let d = rows.len();
    let mut log2 = 0.0f64;
    for i in 0..d {
        for j in (i + 1)..d {
            let num = rows[i] - rows[j] + (j - i) as u64;
            log2 += (num as f64).log2() - ((j - i) as f64).log2();
        }
    }
    let exact = if lambda.size() <= EXACT_DIM_LIMIT {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..d {
            for j in (i + 1)..d {
                num *= BigUint::from(rows[i] - rows[j] + (j - i) as u64);
                den *= BigUint::from((j - i) as u64);
            }
        }
        debug_assert!((&num % &den).is_zero());
        Some(num / den)
    } else {
        None
    };
    ExactLog { exact, log2 }
}

/// Symmetric group irrep dimension n! Π_{i<j}(l_i-l_j) / Π_i l_i! with
/// l_i = n_i + d - i (equivalent to the hook length count).
pub fn dim_sym(lambda: &YoungDiagram) -> ExactLog {
    let rows = lambda.rows();
    let d = rows.len();
    let n = lambda.size();
    let ell: Vec<u64> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| r + (d - 1 - i) as u64)
        .collect();
    let mut log2 = log2_factorial(n);
    for i in 0..d {
        for j in (i + 1)..d {
            log2 += ((ell[i] - ell[j]) as f64).log2();
        }
    }
    for &l in &ell {
        log2 -= log2_factorial(l);
    }
    let exact = if n <= EXACT_DIM_LIMIT {
        let mut num = factorial_big(n);
        for i in 0..d {
            for j in (i + 1)..d {
                num *= BigUint::from(ell[i] - ell[j]);
            }
        }
        let mut den = BigUint::one();
        for &l in &ell {
            den *= factorial_big(l);
        }
        debug_assert!((&num % &den).is_zero());
        Some(num / den)
    } else {
        None
    };
    ExactLog { exact, log2 }
}

/// Both irrep dimensions of a diagram.
#[derive(Debug, Clone)]
pub struct DimPair {
    pub su: ExactLog,
    pub sym: ExactLog,
}

pub fn dim_pair(lambda: &YoungDiagram) -> DimPair {
    DimPair {
        su: dim_su(lambda),
        sym: dim_sym(lambda),
    }
}

/// Ratio of dim U to its large-n asymptote
/// Π_{i<j}(n_i/n − n_j/n) / Π_{g<d} g^{d−g} · n^{d(d−1)/2},
/// defined for diagrams with strictly decreasing rows. Approaches 1 as the
/// diagram grows along a fixed spectrum.
pub fn dim_su_asymptotic_ratio(lambda: &YoungDiagram) -> Result<f64> {
    let rows = lambda.rows();
    if rows.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument(
            "asymptotic ratio needs strictly decreasing rows".into(),
        ));
    }
    let d = rows.len();
    let n = lambda.size() as f64;
    let mut predicted = (d * (d - 1)) as f64 / 2.0 * n.log2();
    for i in 0..d {
        for j in (i + 1)..d {
            predicted += ((rows[i] - rows[j]) as f64 / n).log2();
            predicted -= ((j - i) as f64).log2();
        }
    }
    Ok((dim_su(lambda).log2 - predicted).exp2())
}

/// log2( n! / Π n_i! ) via log-gamma differences.
pub fn multinomial_log2(lambda: &YoungDiagram) -> f64 {
    let n = lambda.size();
    let mut v = log2_gamma(n as f64 + 1.0);
    for &r in lambda.rows() {
        v -= log2_gamma(r as f64 + 1.0);
    }
    v
}

/// Exact n! / Π n_i! as a big integer.
pub fn multinomial_exact(lambda: &YoungDiagram) -> BigUint {
    let mut num = factorial_big(lambda.size());
    for &r in lambda.rows() {
        num /= factorial_big(r);
    }
    num
}

pub fn factorial_big(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}
