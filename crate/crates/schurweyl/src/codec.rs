//! Prefix lossless codes built from the spectra of block states: ceiling
//! code lengths, canonical codeword assignment, Kraft accounting, and the
//! average-energy / redundancy bookkeeping against the exact divergence.
//!
//! Eigenvalues repeat with multiplicity dim U · dim V per block, so entries
//! are stored as (eigenvalue, multiplicity) pairs and nothing of size d^n is
//! ever materialized. Explicit codewords are emitted only under a size cap;
//! above it the code stays in lengths-only mode (Kraft guarantees a canonical
//! assignment exists).

use crate::approx::BlockState;
use crate::error::{Error, Result};
use crate::numeric::{log2_sum_exp, CompensatedSum};
use crate::schur::{schur_weyl_measure, Spectrum};
use crate::young::YoungDiagram;
use serde::Serialize;

/// Explicit codewords are materialized only when the code has at most this
/// many atoms and no length above `MATERIALIZE_MAX_LEN`.
pub const MATERIALIZE_MAX_ATOMS: u64 = 4096;
pub const MATERIALIZE_MAX_LEN: u32 = 120;

/// One spectral line of a code: a block label, the per-atom eigenvalue (as a
/// log), how many atoms share it, and their common codeword length.
#[derive(Debug, Clone, Serialize)]
pub struct CodeEntry {
    pub block: String,
    #[serde(skip)]
    pub diagram: YoungDiagram,
    pub eigenvalue: f64,
    pub log2_eigenvalue: f64,
    /// dim U · dim V as a decimal string (exact when available).
    pub multiplicity: String,
    pub log2_multiplicity: f64,
    pub length: u32,
    /// First codeword of the block's run, when materialized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_codeword: Option<String>,
}

/// An eigenbasis-indexed prefix code at the spectral level.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCode {
    pub schema: u32,
    pub n: u64,
    pub d: usize,
    pub entries: Vec<CodeEntry>,
    /// log2 Σ 2^{-length} over all atoms (0 means Kraft-tight).
    pub log2_kraft_sum: f64,
    pub lengths_only: bool,
}

impl SpectralCode {
    pub fn kraft_sum(&self) -> f64 {
        self.log2_kraft_sum.exp2()
    }

    pub fn max_length(&self) -> u32 {
        self.entries.iter().map(|e| e.length).max().unwrap_or(0)
    }

    /// Total number of atoms when it fits in u64.
    pub fn total_atoms(&self) -> Option<u64> {
        let mut total = 0u64;
        for e in &self.entries {
            total = total.checked_add(e.multiplicity.parse().ok()?)?;
        }
        Some(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("code serializes")
    }
}

/// Ceiling lengths l_i = ⌈−log2 p_i⌉ for an explicit eigenvalue list.
/// Rejects zero eigenvalues and lists summing above 1.
pub fn shannon_lengths(eigenvalues: &[f64]) -> Result<Vec<u32>> {
    if eigenvalues.iter().any(|&p| p.is_nan() || p <= 0.0) {
        return Err(Error::InvalidArgument(
            "eigenvalues must be strictly positive".into(),
        ));
    }
    let sum: f64 = eigenvalues.iter().sum();
    if sum > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues sum to {sum} > 1"
        )));
    }
    Ok(eigenvalues.iter().map(|&p| ceil_neg_log2(p.log2())).collect())
}

/// ⌈−log2 p⌉ from log2 p, tolerating representation noise at exact powers.
fn ceil_neg_log2(log2_p: f64) -> u32 {
    let raw = -log2_p;
    let rounded = raw.round();
    let v = if (raw - rounded).abs() < 1e-9 {
        rounded
    } else {
        raw.ceil()
    };
    v.max(0.0) as u32
}

/// Canonical prefix codewords for a length multiset: sort by (length, input
/// position), assign lexicographically increasing codes. Deterministic and
/// bit-exact; rejects Kraft violations.
pub fn build_prefix_code(lengths: &[u32]) -> Result<Vec<String>> {
    let kraft: f64 = lengths.iter().map(|&l| (-(l as f64)).exp2()).sum();
    if kraft > 1.0 + 1e-12 {
        return Err(Error::KraftViolation { sum: kraft });
    }
    let max_len = lengths.iter().copied().max().unwrap_or(0);
    if max_len > MATERIALIZE_MAX_LEN {
        return Err(Error::SizeCap(format!(
            "codeword length {max_len} above materialization cap {MATERIALIZE_MAX_LEN}"
        )));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut out = vec![String::new(); lengths.len()];
    let mut code: u128 = 0;
    let mut prev_len: u32 = 0;
    for (rank, &i) in order.iter().enumerate() {
        let l = lengths[i];
        if rank > 0 {
            code = (code + 1) << (l - prev_len);
        } else {
            code = 0;
        }
        prev_len = l;
        out[i] = format_codeword(code, l);
    }
    Ok(out)
}

fn format_codeword(code: u128, len: u32) -> String {
    (0..len)
        .map(|b| {
            if (code >> (len - 1 - b)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Spectral prefix code for a block state: per-block eigenvalue
/// w(λ)/(dim U · dim V) with multiplicity dim U · dim V, ceiling lengths.
/// Zero-weight blocks carry no codewords (the code covers the support).
pub fn code_from_block_state(sigma: &BlockState) -> Result<SpectralCode> {
    let mut entries: Vec<CodeEntry> = Vec::new();
    let mut kraft_terms: Vec<f64> = Vec::new();
    let mut total_atoms = 0u64;
    let mut overflow = false;

    for (i, lam) in sigma.diagrams().iter().enumerate() {
        let w = sigma.weights()[i];
        if w == 0.0 {
            continue;
        }
        let log2_eig = sigma.log2_eigenvalue(i);
        let length = ceil_neg_log2(log2_eig);
        let pair = crate::young::dim_pair(lam);
        let log2_mult = pair.su.log2 + pair.sym.log2;
        let mult_exact = pair
            .su
            .exact
            .as_ref()
            .zip(pair.sym.exact.as_ref())
            .map(|(a, b)| a * b);
        if let Some(m) = mult_exact.as_ref().and_then(num_traits::ToPrimitive::to_u64) {
            total_atoms = total_atoms.saturating_add(m);
        } else {
            overflow = true;
        }
        entries.push(CodeEntry {
            block: lam.to_string(),
            diagram: lam.clone(),
            eigenvalue: log2_eig.exp2(),
            log2_eigenvalue: log2_eig,
            multiplicity: mult_exact
                .map(|m| m.to_string())
                .unwrap_or_else(|| format!("2^{:.3}", log2_mult)),
            log2_multiplicity: log2_mult,
            length,
            first_codeword: None,
        });
        kraft_terms.push(log2_mult - length as f64);
    }
    if entries.is_empty() {
        return Err(Error::InvalidArgument(
            "block state has empty support".into(),
        ));
    }
    let log2_kraft_sum = log2_sum_exp(&kraft_terms);
    if log2_kraft_sum > 1e-12 {
        return Err(Error::KraftViolation {
            sum: log2_kraft_sum.exp2(),
        });
    }

    let mut code = SpectralCode {
        schema: 1,
        n: sigma.n(),
        d: sigma.d(),
        entries,
        log2_kraft_sum,
        lengths_only: true,
    };

    let materialize = !overflow
        && total_atoms <= MATERIALIZE_MAX_ATOMS
        && code.max_length() <= MATERIALIZE_MAX_LEN;
    if materialize {
        // expand per-atom lengths in entry order, assign canonically, and
        // keep each block's first codeword for the report
        let mut lengths: Vec<u32> = Vec::with_capacity(total_atoms as usize);
        for e in &code.entries {
            let m: u64 = e.multiplicity.parse().expect("exact multiplicity");
            lengths.extend(std::iter::repeat_n(e.length, m as usize));
        }
        let words = build_prefix_code(&lengths)?;
        let mut cursor = 0usize;
        for e in code.entries.iter_mut() {
            e.first_codeword = Some(words[cursor].clone());
            let m: u64 = e.multiplicity.parse().expect("exact multiplicity");
            cursor += m as usize;
        }
        code.lengths_only = false;
    }
    Ok(code)
}

/// Expectation of the codeword length under the block-occupancy measure:
/// Σ_λ Q_p⃗(λ) · length(λ). Equals the average energy of the encoded state
/// when the code covers every block.
pub fn average_energy(code: &SpectralCode, p: &Spectrum) -> Result<f64> {
    if p.dim() != code.d {
        return Err(Error::InvalidArgument(format!(
            "spectrum dimension {} does not match code d {}",
            p.dim(),
            code.d
        )));
    }
    let measure = schur_weyl_measure(p, code.n)?;
    let mut acc = CompensatedSum::new();
    for e in &code.entries {
        let q = measure.weight(&e.diagram);
        acc.add(q * e.length as f64);
    }
    Ok(acc.value())
}

/// average_energy − n·H(p⃗): the per-block ceiling slack above the exact
/// divergence, which stays in [0, 1).
pub fn redundancy(code: &SpectralCode, p: &Spectrum) -> Result<f64> {
    Ok(average_energy(code, p)? - code.n as f64 * p.entropy_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{relative_entropy, uniform_state};

    #[test]
    fn shannon_lengths_spec_examples() {
        assert_eq!(shannon_lengths(&[0.5, 0.25, 0.25]).unwrap(), vec![1, 2, 2]);
        assert_eq!(shannon_lengths(&[0.9, 0.1]).unwrap(), vec![1, 4]);
        let uniform8 = vec![0.125; 8];
        assert_eq!(shannon_lengths(&uniform8).unwrap(), vec![3; 8]);
        assert!(shannon_lengths(&[0.5, 0.0]).is_err());
        assert!(shannon_lengths(&[0.9, 0.2]).is_err());
    }

    #[test]
    fn per_entry_length_bounds() {
        // eigenvalue >= 2^-l > eigenvalue/2
        for p in [0.9, 0.5, 0.3, 0.1, 1e-5, 0.250000001] {
            let l = shannon_lengths(&[p]).unwrap()[0];
            let two_ml = (-(l as f64)).exp2();
            assert!(p >= two_ml - 1e-12 && two_ml > p / 2.0 - 1e-12, "p={p} l={l}");
        }
    }

    #[test]
    fn canonical_codewords_spec_examples() {
        assert_eq!(build_prefix_code(&[1, 2, 2]).unwrap(), vec!["0", "10", "11"]);
        assert_eq!(build_prefix_code(&[1, 4]).unwrap(), vec!["0", "1000"]);
        assert_eq!(
            build_prefix_code(&[2, 2, 2, 2]).unwrap(),
            vec!["00", "01", "10", "11"]
        );
        assert!(matches!(
            build_prefix_code(&[1, 1, 2]),
            Err(Error::KraftViolation { .. })
        ));
    }

    fn is_prefix_free(words: &[String]) -> bool {
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if i != j && b.starts_with(a.as_str()) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn canonical_codes_are_prefix_free() {
        let cases: Vec<Vec<u32>> = vec![
            vec![1, 2, 3, 3],
            vec![2, 2, 2, 3, 4, 4],
            vec![1, 4],
            vec![5; 17],
        ];
        for lengths in cases {
            let words = build_prefix_code(&lengths).unwrap();
            assert!(is_prefix_free(&words), "{lengths:?}");
        }
    }

    #[test]
    fn code_from_uniform_state_small() {
        // σ_U,1 d=2: two atoms of length 1
        let c1 = code_from_block_state(&uniform_state(1, 2).unwrap()).unwrap();
        assert_eq!(c1.entries.len(), 1);
        assert_eq!(c1.entries[0].length, 1);
        assert_eq!(c1.entries[0].multiplicity, "2");
        assert!((c1.kraft_sum() - 1.0).abs() < 1e-12);

        // σ_U,2 d=2: block (2,0) eigenvalue 1/6 ×3 length 3; (1,1) 1/2 ×1
        // length 1; Kraft 3/8 + 1/2 = 7/8
        let c2 = code_from_block_state(&uniform_state(2, 2).unwrap()).unwrap();
        assert_eq!(c2.entries.len(), 2);
        assert_eq!(c2.entries[0].length, 3);
        assert_eq!(c2.entries[0].multiplicity, "3");
        assert_eq!(c2.entries[1].length, 1);
        assert!((c2.kraft_sum() - 7.0 / 8.0).abs() < 1e-12);
        assert!(!c2.lengths_only);
        assert_eq!(c2.entries[1].first_codeword.as_deref(), Some("0"));
    }

    #[test]
    fn average_energy_and_redundancy_spec_examples() {
        let p = Spectrum::from_fractions(&[3, 1], 4).unwrap();
        let c2 = code_from_block_state(&uniform_state(2, 2).unwrap()).unwrap();
        let e = average_energy(&c2, &p).unwrap();
        assert!((e - 2.625).abs() < 1e-12, "{e}");
        let h = p.entropy_bits();
        let d = relative_entropy(&p, &uniform_state(2, 2).unwrap()).unwrap();
        // energy sandwich nH + D <= E <= nH + D + 1
        assert!(2.0 * h + d <= e + 1e-12);
        assert!(e <= 2.0 * h + d + 1.0 + 1e-12);
        let r = redundancy(&c2, &p).unwrap();
        assert!((r - (e - 2.0 * h)).abs() < 1e-12);
        let slack = r - d;
        assert!((0.0..1.0).contains(&slack), "{slack}");
        assert!((slack - 0.3372).abs() < 1e-4);
    }

    #[test]
    fn dyadic_state_has_zero_slack() {
        // eigenbasis code of ρ itself at n=1 with dyadic spectrum
        let p = Spectrum::from_fractions(&[1, 1], 2).unwrap();
        let sigma = uniform_state(1, 2).unwrap();
        let code = code_from_block_state(&sigma).unwrap();
        let r = redundancy(&code, &p).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn jeffreys_state_codes_its_support() {
        use crate::minimax::sigma_j_state;
        let sigma = sigma_j_state(64, 2).unwrap();
        let code = code_from_block_state(&sigma).unwrap();
        assert_eq!(code.entries.len(), sigma.support_len());
        assert!(code.log2_kraft_sum <= 1e-12);
        // max length is pinned by the smallest eigenvalue on the support
        let min_log2_eig = code
            .entries
            .iter()
            .map(|e| e.log2_eigenvalue)
            .fold(f64::INFINITY, f64::min);
        assert!(code.max_length() as f64 <= (-min_log2_eig).ceil() + 0.5);

        // redundancy sits within the ceiling-slack window over the support
        let p = Spectrum::new(vec![0.75, 0.25]).unwrap();
        let sigma_big = sigma_j_state(1024, 2).unwrap();
        let code_big = code_from_block_state(&sigma_big).unwrap();
        let red = redundancy(&code_big, &p).unwrap();
        let d = crate::approx::relative_entropy_on_support(&p, &sigma_big)
            .unwrap()
            .bits;
        let slack = red - d;
        assert!((0.0..1.0).contains(&slack), "{slack}");
    }

    #[test]
    fn json_export_carries_the_table() {
        let code = code_from_block_state(&uniform_state(2, 2).unwrap()).unwrap();
        let v = code.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["n"], 2);
        assert_eq!(v["entries"][0]["block"], "(2,0)");
        assert_eq!(v["entries"][0]["multiplicity"], "3");
        assert_eq!(v["entries"][0]["length"], 3);
        assert_eq!(v["entries"][1]["first_codeword"], "0");
    }

    #[test]
    fn lengths_only_mode_above_cap() {
        let sigma = uniform_state(64, 2).unwrap();
        let code = code_from_block_state(&sigma).unwrap();
        // 2^64 atoms: must not materialize, Kraft still certified
        assert!(code.lengths_only);
        assert!(code.log2_kraft_sum <= 1e-12);
        assert!(code.total_atoms().is_none() || code.total_atoms().unwrap() > MATERIALIZE_MAX_ATOMS);
    }

    #[test]
    fn decode_concatenated_streams() {
        use rand::{Rng, SeedableRng};
        let lengths = vec![1, 3, 3, 4, 4, 4];
        let words = build_prefix_code(&lengths).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let symbols: Vec<usize> = (0..50).map(|_| rng.gen_range(0..words.len())).collect();
            let stream: String = symbols.iter().map(|&s| words[s].as_str()).collect();
            // greedy prefix decode
            let mut decoded = Vec::new();
            let mut rest = stream.as_str();
            'outer: while !rest.is_empty() {
                for (i, w) in words.iter().enumerate() {
                    if rest.starts_with(w.as_str()) {
                        decoded.push(i);
                        rest = &rest[w.len()..];
                        continue 'outer;
                    }
                }
                panic!("undecodable stream");
            }
            assert_eq!(decoded, symbols);
        }
    }
}
