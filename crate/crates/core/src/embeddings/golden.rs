//! Transcriptions of the printed standard Maurer-Cartan matrices.

use crate::symbolic::{parse_polynomial, rat, Polynomial, Rational};

use super::FormMatrix;

fn parse(rows: &[&[&str]]) -> FormMatrix {
    FormMatrix::new(
        rows.iter()
            .map(|r| r.iter().map(|t| parse_polynomial(t).expect("well-formed entry")).collect())
            .collect(),
    )
}

/// Standard embedding of the complex projective plane, with
/// `θ_jk = α_jk + i β_jk`.
pub fn complex_plane() -> FormMatrix {
    parse(&[
        &["2*alpha_00", "2*alpha_01", "2*beta_01", "2*alpha_02", "2*beta_02", "0", "0", "0", "0"],
        &["alpha_10", "alpha_11 + alpha_00", "beta_11 - beta_00", "alpha_12", "beta_12", "alpha_01", "alpha_02", "beta_02", "0"],
        &["-beta_10", "beta_00 - beta_11", "alpha_11 + alpha_00", "-beta_12", "alpha_12", "beta_01", "beta_02", "-alpha_02", "0"],
        &["alpha_20", "alpha_21", "beta_21", "alpha_22 + alpha_00", "beta_22 - beta_00", "0", "alpha_01", "-beta_01", "alpha_02"],
        &["-beta_20", "-beta_21", "alpha_21", "beta_00 - beta_22", "alpha_22 + alpha_00", "0", "beta_01", "alpha_01", "beta_02"],
        &["0", "2*alpha_10", "-2*beta_10", "0", "0", "2*alpha_11", "2*alpha_12", "2*beta_12", "0"],
        &["0", "alpha_20", "-beta_20", "alpha_10", "-beta_10", "alpha_21", "alpha_22 + alpha_11", "beta_22 - beta_11", "alpha_12"],
        &["0", "-beta_20", "-alpha_20", "beta_10", "alpha_10", "-beta_21", "beta_11 - beta_22", "alpha_22 + alpha_11", "beta_12"],
        &["0", "0", "0", "2*alpha_20", "-2*beta_20", "0", "2*alpha_21", "-2*beta_21", "2*alpha_22"],
    ])
}

/// One printed entry: a sum of rational multiples of named forms `ω_{i,j}`.
pub type PatternEntry = Vec<(Rational, (usize, usize))>;

/// The quaternionic matrix as printed, in its own symbols: `w1.2` is
/// `ω_{1,2}`, a leading sign or integer scales it, `/2` halves it.
const QUATERNION_ROWS: [[&str; 15]; 15] = [
    ["w0.0", "w0.1", "w0.2", "w0.3", "w0.4", "w0.5", "w0.6", "w0.7", "w0.8", "0", "0", "0", "0", "0", "0"],
    ["w1.0", "w1.1", "w1.2", "w1.3", "w1.4", "w1.5", "w1.6", "w1.7", "w1.8", "w0.1/2", "w0.5/2", "w0.6/2", "w0.7/2", "w0.8/2", "0"],
    ["w2.0", "-w1.2", "w1.1", "w2.3", "w2.4", "-w1.6", "w1.5", "-w1.8", "w1.7", "w0.2/2", "w0.6/2", "-w0.5/2", "w0.8/2", "-w0.7/2", "0"],
    ["w3.0", "-w1.3", "-w2.3", "w1.1", "w3.4", "-w1.7", "w1.8", "w1.5", "-w1.6", "w0.3/2", "w0.7/2", "-w0.8/2", "-w0.5/2", "w0.6/2", "0"],
    ["w4.0", "-w1.4", "-w2.4", "-w3.4", "w1.1", "-w1.8", "-w1.7", "w1.6", "w1.5", "w0.4/2", "w0.8/2", "w0.7/2", "-w0.6/2", "-w0.5/2", "0"],
    ["w5.0", "w5.1", "w5.2", "w5.3", "w5.4", "w5.5", "w5.6", "w5.7", "w5.8", "0", "w0.1/2", "-w0.2/2", "-w0.3/2", "-w0.4/2", "w0.5/2"],
    ["w6.0", "-w5.2", "w5.1", "-w5.4", "w5.3", "-w5.6", "w5.5", "w6.7", "w6.8", "0", "w0.2/2", "w0.1/2", "-w0.4/2", "w0.3/2", "w0.6/2"],
    ["w7.0", "-w5.3", "w5.4", "w5.1", "-w5.2", "-w5.7", "-w6.7", "w5.5", "w7.8", "0", "w0.3/2", "w0.4/2", "w0.1/2", "-w0.2/2", "w0.7/2"],
    ["w8.0", "-w5.4", "-w5.3", "w5.2", "w5.1", "-w5.8", "-w6.8", "-w7.8", "w5.5", "0", "w0.4/2", "-w0.3/2", "w0.2/2", "w0.1/2", "w0.8/2"],
    ["0", "2w1.0", "2w2.0", "2w3.0", "2w4.0", "0", "0", "0", "0", "w9.9", "2w1.5", "2w1.6", "2w1.7", "2w1.8", "0"],
    ["0", "w5.0", "w6.0", "w7.0", "w8.0", "w1.0", "w2.0", "w3.0", "w4.0", "w5.1", "w10.10", "w10.11", "w10.12", "w10.13", "w1.5"],
    ["0", "w6.0", "-w5.0", "-w8.0", "w7.0", "-w2.0", "w1.0", "w4.0", "-w3.0", "-w5.2", "-w10.11", "w10.10", "w11.12", "w11.13", "w1.6"],
    ["0", "w7.0", "w8.0", "-w5.0", "-w6.0", "-w3.0", "-w4.0", "w1.0", "w2.0", "-w5.3", "-w10.12", "-w11.12", "w10.10", "w12.13", "w1.7"],
    ["0", "w8.0", "-w7.0", "w6.0", "-w5.0", "-w4.0", "w3.0", "-w2.0", "w1.0", "-w5.4", "-w10.13", "-w11.13", "-w12.13", "w10.10", "w1.8"],
    ["0", "0", "0", "0", "0", "2w5.0", "2w6.0", "2w7.0", "2w8.0", "0", "2w5.1", "-2w5.2", "-2w5.3", "-2w5.4", "w14.14"],
];

fn parse_pattern_entry(t: &str) -> PatternEntry {
    if t == "0" {
        return Vec::new();
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, t),
    };
    let (rest, den) = match rest.strip_suffix("/2") {
        Some(r) => (r, 2),
        None => (rest, 1),
    };
    let (num, name) = rest.split_once('w').expect("entry names a form");
    let num: i64 = if num.is_empty() { 1 } else { num.parse().expect("integer factor") };
    let (i, j) = name.split_once('.').expect("two indices");
    vec![(rat(sign * num, den), (i.parse().expect("row"), j.parse().expect("col")))]
}

/// Standard embedding of the quaternionic projective plane, in the printed
/// symbols.
pub fn quaternion_plane_pattern() -> Vec<Vec<PatternEntry>> {
    QUATERNION_ROWS.iter().map(|r| r.iter().map(|t| parse_pattern_entry(t)).collect()).collect()
}

/// Reads every printed symbol `ω_{i,j}` as the `(i,j)` entry of `m` and
/// returns the entries where the printed matrix then disagrees with `m`.
pub fn pattern_mismatches(pattern: &[Vec<PatternEntry>], m: &FormMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if pattern.len() != m.dim() {
        return (0..pattern.len()).map(|i| (i, 0)).collect();
    }
    for (i, row) in pattern.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let mut value = Polynomial::zero();
            for (c, (r, s)) in entry {
                value += &m.get(*r, *s).scale(c);
            }
            if &value != m.get(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}
