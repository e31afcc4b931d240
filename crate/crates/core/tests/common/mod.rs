#![allow(dead_code)]

use std::path::PathBuf;

use polycone::cone::HCone;
use polycone::linalg::{RatMatrix, RatVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cone with `n ≤ max_dim`, `1 ≤ p + q ≤ max_rows`, entries in `[-bound, bound]`.
pub fn random_cone(rng: &mut impl Rng, max_dim: usize, max_rows: usize, bound: i64) -> HCone {
    let n = rng.gen_range(1..=max_dim);
    let rows = rng.gen_range(1..=max_rows);
    let p = rng.gen_range(0..=rows);
    let mut block = |count: usize| {
        let vs: Vec<RatVector> = (0..count)
            .map(|_| {
                let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
                RatVector::from_i64(&e)
            })
            .collect();
        RatMatrix::from_rows(n, &vs).unwrap()
    };
    let b = block(p);
    let c = block(rows - p);
    HCone::new(b, c).unwrap()
}

pub fn corpus(seed: u64, count: usize, max_dim: usize, max_rows: usize, bound: i64) -> Vec<HCone> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_cone(&mut r, max_dim, max_rows, bound))
        .collect()
}

/// The oracle-equivalence corpus: n ≤ 4, p + q ≤ 6, entries in {-3..3}.
pub fn main_corpus() -> Vec<HCone> {
    corpus(0x5eed_0001, 240, 4, 6, 3)
}

/// The subdeterminant corpus: n ≤ 3, p + q ≤ 4, entries in {-2..2}.
pub fn qsd_corpus() -> Vec<HCone> {
    corpus(0x5eed_0002, 150, 3, 4, 2)
}

pub fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

pub fn catalog_files(extension: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(catalog_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == extension))
        .collect();
    files.sort();
    files
}

#[cfg(feature = "cli")]
/// Runs the CLI in-process; returns `(exit code, stdout, stderr)`.
pub fn cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("polycone").chain(args.iter().copied());
    let code = polycone::cli::run(argv, &mut std::io::empty(), &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

#[cfg(feature = "cli")]
/// Runs the built `polycone` binary; returns `(exit code, stdout, stderr)`.
pub fn bin(args: &[&str]) -> (i32, Vec<u8>, String) {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_polycone"))
        .args(args)
        .output()
        .unwrap();
    (
        output.status.code().unwrap_or(-1),
        output.stdout,
        String::from_utf8(output.stderr).unwrap(),
    )
}

pub fn cone_strategy(
    max_dim: usize,
    max_rows: usize,
    bound: i64,
) -> impl proptest::strategy::Strategy<Value = HCone> {
    use proptest::prelude::*;
    (1..=max_dim, 1..=max_rows)
        .prop_flat_map(move |(n, rows)| {
            (
                Just(n),
                0..=rows,
                prop::collection::vec(prop::collection::vec(-bound..=bound, n), rows),
            )
        })
        .prop_map(|(n, p, entries)| {
            let vs: Vec<RatVector> = entries.iter().map(|e| RatVector::from_i64(e)).collect();
            HCone::new(
                RatMatrix::from_rows(n, &vs[..p]).unwrap(),
                RatMatrix::from_rows(n, &vs[p..]).unwrap(),
            )
            .unwrap()
        })
}
