//! Segmented smallest-prime-factor sieve and a segmented factorization scan.

use rayon::prelude::*;

use crate::arith::{isqrt, memory_budget_bytes, primes_up_to};
use crate::error::{Error, Result};

/// Largest supported upper end of a sieved range.
pub const MAX_SIEVE: u64 = 1_000_000_000;

/// Default number of entries per segment.
pub const DEFAULT_SEGMENT_WIDTH: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_width: usize,
    /// Cap on sieve buffers, bytes.
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_width: DEFAULT_SEGMENT_WIDTH,
            memory_budget: memory_budget_bytes(),
        }
    }
}

impl SieveConfig {
    pub fn with_segment_width(mut self, width: usize) -> Self {
        self.segment_width = width.max(1);
        self
    }
}

/// Smallest prime factor of every integer in `[lo, hi)`.
#[derive(Clone, Debug)]
pub struct SpfTable {
    lo: u64,
    hi: u64,
    spf: Vec<u32>,
    base_primes: Vec<u32>,
}

pub fn build_spf(lo: u64, hi: u64) -> Result<SpfTable> {
    build_spf_with(lo, hi, &SieveConfig::default())
}

pub fn build_spf_with(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<SpfTable> {
    if lo < 2 || hi <= lo || hi > MAX_SIEVE + 1 {
        return Err(Error::InvalidParameters(format!(
            "spf range must satisfy 2 <= lo < hi <= 1e9 + 1, got [{lo}, {hi})"
        )));
    }
    let len = hi - lo;
    let needed = len * 4;
    if needed > cfg.memory_budget {
        return Err(Error::MemoryBudget {
            needed_mb: needed.div_ceil(1 << 20),
            budget_mb: cfg.memory_budget >> 20,
            suggested_width: (cfg.memory_budget / 4).max(1) as usize,
        });
    }
    let base_primes: Vec<u32> = primes_up_to(isqrt(hi - 1))
        .into_iter()
        .map(|p| p as u32)
        .collect();
    let mut spf = vec![0u32; len as usize];
    let width = cfg.segment_width.max(1) as u64;
    spf.par_chunks_mut(width as usize)
        .enumerate()
        .for_each(|(s, chunk)| {
            let seg_lo = lo + s as u64 * width;
            let seg_hi = seg_lo + chunk.len() as u64;
            for &p in &base_primes {
                let p = p as u64;
                if p * p >= seg_hi {
                    break;
                }
                // Multiples below p^2 have a smaller prime factor, except p itself.
                let mut m = seg_lo.div_ceil(p) * p;
                if m < p * p {
                    m = p * p;
                }
                while m < seg_hi {
                    let slot = &mut chunk[(m - seg_lo) as usize];
                    if *slot == 0 {
                        *slot = p as u32;
                    }
                    m += p;
                }
            }
            for (i, slot) in chunk.iter_mut().enumerate() {
                if *slot == 0 {
                    *slot = (seg_lo + i as u64) as u32;
                }
            }
        });
    Ok(SpfTable {
        lo,
        hi,
        spf,
        base_primes,
    })
}

impl SpfTable {
    pub fn range(&self) -> (u64, u64) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.lo..self.hi).contains(&n)
    }

    pub fn spf(&self, n: u64) -> Option<u64> {
        self.contains(n)
            .then(|| self.spf[(n - self.lo) as usize] as u64)
    }

    /// Prime factorization of `n` (ascending), for `n = 1` or `n` in range.
    ///
    /// The first factor comes from the table; cofactors that fall below the
    /// table range are finished by trial division with the base primes.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n == 1 {
            return Ok(Vec::new());
        }
        if !self.contains(n) {
            return Err(Error::InvalidParameters(format!(
                "{n} outside sieved range [{}, {})",
                self.lo, self.hi
            )));
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        let mut next_base = 0usize;
        while m > 1 {
            let p = match self.spf(m) {
                Some(p) => p,
                None => {
                    let mut found = m;
                    while next_base < self.base_primes.len() {
                        let b = self.base_primes[next_base] as u64;
                        if b * b > m {
                            break;
                        }
                        if m.is_multiple_of(b) {
                            found = b;
                            break;
                        }
                        next_base += 1;
                    }
                    found
                }
            };
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }
}

/// Visits every prime power `p^e || n` for `n` in `[lo, hi)`, `lo >= 1`.
///
/// `visit(i, p, e)` receives the offset `i = n - lo`. For each `n` the
/// primes arrive in increasing order. `base_primes` must contain every prime
/// up to `sqrt(hi - 1)`.
pub fn scan_segment(
    lo: u64,
    hi: u64,
    base_primes: &[u64],
    rem: &mut Vec<u64>,
    mut visit: impl FnMut(usize, u64, u32),
) {
    debug_assert!(lo >= 1);
    rem.clear();
    rem.extend(lo..hi);
    for &p in base_primes {
        if p * p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            let r = &mut rem[i];
            let mut e = 0;
            while (*r).is_multiple_of(p) {
                *r /= p;
                e += 1;
            }
            visit(i, p, e);
            m += p;
        }
    }
    for (i, &r) in rem.iter().enumerate() {
        if r > 1 {
            visit(i, r, 1);
        }
    }
}

/// Splits `[1, x]` into segments, maps each in parallel and folds the
/// results in segment order, so the output does not depend on the number
/// of worker threads.
pub fn map_segments<T, M, R>(
    x: u64,
    cfg: &SieveConfig,
    bytes_per_entry: u64,
    map: M,
    init: T,
    mut reduce: R,
) -> Result<T>
where
    T: Send,
    M: Fn(u64, u64, &[u64]) -> T + Sync,
    R: FnMut(T, T) -> T,
{
    if x > MAX_SIEVE {
        return Err(Error::InvalidParameters(format!("x = {x} exceeds 1e9")));
    }
    let width = cfg.segment_width.max(1) as u64;
    let workers = rayon::current_num_threads() as u64;
    let needed = width.min(x.max(1)) * bytes_per_entry * workers;
    if needed > cfg.memory_budget {
        return Err(Error::MemoryBudget {
            needed_mb: needed.div_ceil(1 << 20),
            budget_mb: cfg.memory_budget >> 20,
            suggested_width: (cfg.memory_budget / (bytes_per_entry * workers)).max(1) as usize,
        });
    }
    let base = primes_up_to(isqrt(x));
    let segments: Vec<(u64, u64)> = (0..x.div_ceil(width))
        .map(|s| (1 + s * width, (1 + (s + 1) * width).min(x + 1)))
        .collect();
    let parts: Vec<T> = segments
        .into_par_iter()
        .map(|(a, b)| map(a, b, &base))
        .collect();
    Ok(parts.into_iter().fold(init, &mut reduce))
}
