//! Joint distribution of `(f_1(n), ..., f_K(n)) mod q` over `n <= x`.

use num_integer::Integer;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::arith::{euler_phi, CompensatedSum};
use crate::error::{Error, Result};
use crate::families::{delta, Delta};
use crate::multfun::{
    map_segments, scan_segment, MultiplicativeFunction, ResidueFunction, SieveConfig, MAX_SIEVE,
};

/// Largest number of residue tuples `q^K` kept as dense counters.
pub const MAX_CLASS_STATES: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub x: u64,
    pub q: u64,
    pub functions: Vec<MultiplicativeFunction>,
    /// Classes to report; `None` reports every class.
    pub targets: Option<Vec<Vec<u64>>>,
    pub segment_width: usize,
}

impl ExperimentConfig {
    pub fn new(x: u64, q: u64, functions: Vec<MultiplicativeFunction>) -> Self {
        Self {
            x,
            q,
            functions,
            targets: None,
            segment_width: crate::multfun::DEFAULT_SEGMENT_WIDTH,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.q.is_multiple_of(2) {
            return Err(Error::EvenPrime(2));
        }
        if self.q < 3 {
            return Err(Error::InvalidParameters("q must be at least 3".into()));
        }
        if self.functions.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if self.x < self.q || self.x > MAX_SIEVE {
            return Err(Error::InvalidParameters(format!(
                "need q <= x <= 1e9, got x = {}, q = {}",
                self.x, self.q
            )));
        }
        for t in self.targets.iter().flatten() {
            if t.len() != self.functions.len() {
                return Err(Error::InvalidParameters(format!(
                    "class {t:?} has the wrong length"
                )));
            }
            if let Some(&a) = t.iter().find(|&&a| (a % self.q).gcd(&self.q) != 1) {
                return Err(Error::NotAUnit {
                    x: a % self.q,
                    modulus: self.q,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub x: u64,
    pub q: u64,
    pub family: Vec<String>,
    pub targets: Option<Vec<Vec<u64>>>,
    pub segment_width: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityStats {
    pub classes: u64,
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    pub max_rel_dev: f64,
    pub tv_distance: f64,
    pub chi_square: f64,
}

/// `q` next to `(log x)^(1/K)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleComparison {
    pub q: u64,
    pub log_x_root: f64,
    pub ratio: f64,
}

/// Class tuples with their counts, in lexicographic tuple order.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassCounts(pub Vec<(Vec<u64>, u64)>);

fn class_key(class: &[u64]) -> String {
    class
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl Serialize for ClassCounts {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (class, count) in &self.0 {
            map.serialize_entry(&class_key(class), count)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ConfigEcho,
    /// Nonzero classes only.
    pub counts: ClassCounts,
    /// `#{n <= x : gcd(f_1(n) ... f_K(n), q) = 1}`
    pub rhs_count: u64,
    pub stats: UniformityStats,
    pub delta_q: Delta,
    pub scale: ScaleComparison,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    /// One row per reported class: `a_1, ..., a_K, count`.
    pub fn to_csv(&self) -> String {
        let k = self.config.family.len();
        let mut out: String = (1..=k).map(|i| format!("a{i},")).collect();
        out.push_str("count\n");
        for (class, count) in &self.counts.0 {
            out.push_str(&format!("{},{count}\n", class_key(class)));
        }
        out
    }

    pub fn count(&self, class: &[u64]) -> u64 {
        self.counts
            .0
            .binary_search_by(|(c, _)| c.as_slice().cmp(class))
            .map_or(0, |i| self.counts.0[i].1)
    }
}

/// For each `n` in `[a, b)`, writes `f_k(n) mod q` to `out[(n - a) K + k]`.
pub(crate) fn segment_residues(
    a: u64,
    b: u64,
    base: &[u64],
    residues: &[ResidueFunction],
    out: &mut Vec<u64>,
) {
    let k = residues.len();
    let q = residues[0].modulus();
    out.clear();
    out.resize((b - a) as usize * k, 1 % q);
    let mut rem = Vec::new();
    scan_segment(a, b, base, &mut rem, |i, p, e| {
        for (kk, r) in residues.iter().enumerate() {
            let slot = &mut out[i * k + kk];
            *slot = crate::arith::mul_mod(*slot, r.prime_power(p, e), q);
        }
    });
}

/// Exact class counts by a segmented factorization scan. The result does not
/// depend on the segment width or on the number of worker threads.
pub fn joint_distribution(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let (x, q) = (config.x, config.q);
    let k = config.functions.len();
    let states = (q as u128)
        .checked_pow(k as u32)
        .filter(|&s| s <= MAX_CLASS_STATES as u128)
        .ok_or_else(|| {
            Error::ComplexityGate(format!("q^K = {q}^{k} exceeds {MAX_CLASS_STATES} classes"))
        })? as usize;
    let cfg = SieveConfig::default().with_segment_width(config.segment_width);
    let workers = rayon::current_num_threads() as u64;
    let dense_bytes = states as u64 * 8 * workers;
    if dense_bytes > cfg.memory_budget {
        return Err(Error::MemoryBudget {
            needed_mb: dense_bytes.div_ceil(1 << 20),
            budget_mb: cfg.memory_budget >> 20,
            suggested_width: cfg.segment_width,
        });
    }
    let residues: Vec<ResidueFunction> = config.functions.iter().map(|f| f.residues(q)).collect();
    let counts = map_segments(
        x,
        &cfg,
        8 + 8 * k as u64,
        |a, b, base| {
            let mut values = Vec::new();
            segment_residues(a, b, base, &residues, &mut values);
            let mut counts = vec![0u64; states];
            for ys in values.chunks_exact(k) {
                if ys.iter().all(|y| y.gcd(&q) == 1) {
                    counts[ys.iter().fold(0, |acc, &y| acc * q + y) as usize] += 1;
                }
            }
            counts
        },
        vec![0u64; states],
        |mut acc, part| {
            acc.iter_mut().zip(&part).for_each(|(s, t)| *s += t);
            acc
        },
    )?;

    let classes = euler_phi(q).pow(k as u32);
    let index = |class: &[u64]| class.iter().fold(0, |acc, &y| acc * q + y % q) as usize;
    let rhs_count: u64 = counts.iter().sum();
    let mean = rhs_count as f64 / classes as f64;
    let (mut min, mut max) = (u64::MAX, 0u64);
    let (mut tv, mut chi) = (CompensatedSum::default(), CompensatedSum::default());
    let mut reported = Vec::new();
    let mut class = vec![0u64; k];
    for (idx, &c) in counts.iter().enumerate() {
        let mut rest = idx as u64;
        for slot in class.iter_mut().rev() {
            *slot = rest % q;
            rest /= q;
        }
        if !class.iter().all(|y| y.gcd(&q) == 1) {
            continue;
        }
        min = min.min(c);
        max = max.max(c);
        let d = c as f64 - mean;
        tv.add(d.abs());
        chi.add(d * d / mean.max(f64::MIN_POSITIVE));
        if c > 0 && config.targets.is_none() {
            reported.push((class.clone(), c));
        }
    }
    let mut notes = Vec::new();
    if let Some(targets) = &config.targets {
        let mut sorted: Vec<Vec<u64>> = targets
            .iter()
            .map(|t| t.iter().map(|a| a % q).collect())
            .collect();
        sorted.sort();
        sorted.dedup();
        reported = sorted
            .into_iter()
            .map(|t| {
                let c = counts[index(&t)];
                (t, c)
            })
            .collect();
        notes.push(
            "counts restricted to the requested classes; statistics cover every class".into(),
        );
    }
    let max_rel_dev = if rhs_count == 0 {
        0.0
    } else {
        (max as f64 - mean).abs().max((mean - min as f64).abs()) / mean
    };
    let tv_distance = if rhs_count == 0 {
        0.0
    } else {
        0.5 * tv.value() / rhs_count as f64
    };
    let log_x_root = (x as f64).ln().powf(1.0 / k as f64);
    if q as f64 > log_x_root {
        notes.push("q exceeds (log x)^(1/K)".into());
    }
    Ok(ExperimentReport {
        config: ConfigEcho {
            x,
            q,
            family: config
                .functions
                .iter()
                .map(|f| f.name().to_string())
                .collect(),
            targets: config.targets.clone(),
            segment_width: config.segment_width,
        },
        counts: ClassCounts(reported),
        rhs_count,
        stats: UniformityStats {
            classes,
            min,
            max,
            mean,
            max_rel_dev,
            tv_distance,
            chi_square: chi.value(),
        },
        delta_q: delta(q)?,
        scale: ScaleComparison {
            q,
            log_x_root,
            ratio: q as f64 / log_x_root,
        },
        notes,
    })
}
