use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centro::{split, CenterBorder, CentroBlocks, SkewCentroBlocks, Split, Symmetry};
use crate::error::{DqError, Result};
use crate::linalg::{eig_dense_counted, lu_det_counted, lu_inverse_counted, Matrix, OpCounter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    Det,
    Inverse,
    Eig,
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchOp::Det => "det",
            BenchOp::Inverse => "inverse",
            BenchOp::Eig => "eig",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub op: BenchOp,
    pub class: Symmetry,
    pub n: usize,
    /// Mean over trials.
    pub dense_mults: u64,
    pub factored_mults: u64,
    pub ratio: f64,
    /// Worst relative disagreement between the two paths over all trials.
    pub max_rel_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<BenchRow>,
}

fn uniform_block(m: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..=1.0))
}

fn random_border(m: usize, skew: bool, rng: &mut ChaCha8Rng) -> CenterBorder {
    CenterBorder {
        col: (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        row: (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        center: if skew { 0.0 } else { rng.gen_range(-1.0..=1.0) },
    }
}

/// Blocks drawn uniformly from `[-1, 1]`, then assembled.
pub fn random_centro(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let m = n / 2;
    let (a, c) = (uniform_block(m, rng), uniform_block(m, rng));
    let border = (n % 2 == 1).then(|| random_border(m, false, rng));
    CentroBlocks::from_blocks(a, c, border).reassemble()
}

pub fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let m = n / 2;
    let (a, c) = (uniform_block(m, rng), uniform_block(m, rng));
    let border = (n % 2 == 1).then(|| random_border(m, true, rng));
    SkewCentroBlocks::from_blocks(a, c, border).reassemble()
}

/// Each factored eigenvalue is paired with the nearest unused dense one.
pub fn spectrum_discrepancy(factored: &[Complex64], dense: &[Complex64]) -> f64 {
    let scale = dense.iter().map(|l| l.norm()).fold(1.0, f64::max);
    let mut used = vec![false; dense.len()];
    let mut worst: f64 = 0.0;
    for l in factored {
        let best = (0..dense.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (dense[a] - l).norm().total_cmp(&(dense[b] - l).norm()));
        match best {
            Some(j) => {
                used[j] = true;
                worst = worst.max((dense[j] - l).norm() / scale);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

#[derive(Default)]
struct Tally {
    dense: u64,
    factored: u64,
    discrepancy: f64,
}

impl Tally {
    fn record(&mut self, dense: &OpCounter, factored: &OpCounter, discrepancy: f64) {
        self.dense += dense.multiplies;
        self.factored += factored.multiplies;
        self.discrepancy = self.discrepancy.max(discrepancy);
    }
}

fn run_factored(blocks: &Split, op: BenchOp, ctr: &mut OpCounter) -> Result<Outcome> {
    Ok(match (blocks, op) {
        (Split::Centro(b), BenchOp::Det) => Outcome::Det(b.det_counted(ctr)),
        (Split::Centro(b), BenchOp::Inverse) => Outcome::Inverse(b.inverse_counted(ctr)?.reassemble()),
        (Split::Centro(b), BenchOp::Eig) => Outcome::Eig(b.eigenvalues_counted(ctr)?),
        (Split::Skew(b), BenchOp::Det) => Outcome::Det(b.det_counted(ctr)),
        (Split::Skew(b), BenchOp::Inverse) => Outcome::Inverse(b.inverse_counted(ctr)?.reassemble()),
        (Split::Skew(b), BenchOp::Eig) => Outcome::Eig(b.eigenvalues_counted(ctr)?),
    })
}

fn run_dense(q: &Matrix, op: BenchOp, ctr: &mut OpCounter) -> Result<Outcome> {
    Ok(match op {
        BenchOp::Det => Outcome::Det(lu_det_counted(q, ctr)),
        BenchOp::Inverse => Outcome::Inverse(lu_inverse_counted(q, ctr)?),
        BenchOp::Eig => Outcome::Eig(eig_dense_counted(q, ctr)?),
    })
}

fn measure(q: &Matrix, class: Symmetry, tallies: &mut [Tally; 3]) -> Result<()> {
    let blocks = split(q, class)?;
    for (slot, op) in OPS.into_iter().enumerate() {
        let mut dc = OpCounter::new();
        let dense = run_dense(q, op, &mut dc)?;
        let mut fc = OpCounter::new();
        let fast = run_factored(&blocks, op, &mut fc)?;
        tallies[slot].record(&dc, &fc, fast.discrepancy(&dense));
    }
    Ok(())
}

const OPS: [BenchOp; 3] = [BenchOp::Det, BenchOp::Inverse, BenchOp::Eig];

enum Outcome {
    Det(f64),
    Inverse(Matrix),
    Eig(Vec<Complex64>),
}

impl Outcome {
    fn discrepancy(&self, dense: &Outcome) -> f64 {
        match (self, dense) {
            (Outcome::Det(f), Outcome::Det(d)) => (f - d).abs() / d.abs().max(f64::MIN_POSITIVE),
            (Outcome::Inverse(f), Outcome::Inverse(d)) => f.max_abs_diff(d) / d.max_abs().max(f64::MIN_POSITIVE),
            (Outcome::Eig(f), Outcome::Eig(d)) => spectrum_discrepancy(f, d),
            _ => f64::INFINITY,
        }
    }
}

/// Dense versus factorized multiply counts on random structured matrices.
pub fn bench_structured(sizes: &[usize], trials: usize, seed: u64) -> Result<BenchReport> {
    if let Some(&bad) = sizes.iter().find(|&&n| n < 4 || n % 2 == 1) {
        return Err(DqError::InvalidArgument(format!("bench sizes must be even and >= 4, got {bad}")));
    }
    if trials == 0 {
        return Err(DqError::InvalidArgument("bench needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        for class in [Symmetry::Centro, Symmetry::SkewCentro] {
            let mut tallies: [Tally; 3] = Default::default();
            for _ in 0..trials {
                let q = match class {
                    Symmetry::Centro => random_centro(n, &mut rng),
                    _ => random_skew(n, &mut rng),
                };
                measure(&q, class, &mut tallies)?;
            }
            for (t, op) in tallies.iter().zip(OPS) {
                rows.push(BenchRow {
                    op,
                    class,
                    n,
                    dense_mults: t.dense / trials as u64,
                    factored_mults: t.factored / trials as u64,
                    ratio: t.factored as f64 / t.dense as f64,
                    max_rel_discrepancy: t.discrepancy,
                });
            }
        }
    }
    Ok(BenchReport { seed, trials, rows })
}

impl BenchReport {
    pub fn row(&self, op: BenchOp, class: Symmetry, n: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.op == op && r.class == class && r.n == n)
    }

    /// Columns: `op,class,n,dense_mults,factored_mults,ratio,max_rel_discrepancy`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let fail = |e: &dyn fmt::Display| DqError::NumericFailure(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["op", "class", "n", "dense_mults", "factored_mults", "ratio", "max_rel_discrepancy"])
            .map_err(|e| fail(&e))?;
        for r in &self.rows {
            let class = match r.class {
                Symmetry::Centro => "centro",
                Symmetry::SkewCentro => "skew-centro",
                Symmetry::None => "none",
            };
            w.write_record([
                r.op.to_string(),
                class.to_string(),
                r.n.to_string(),
                r.dense_mults.to_string(),
                r.factored_mults.to_string(),
                format!("{:.6}", r.ratio),
                format!("{:.3e}", r.max_rel_discrepancy),
            ])
            .map_err(|e| fail(&e))?;
        }
        w.flush().map_err(|e| fail(&e))?;
        Ok(())
    }
}
