//! Lexicographic k-subset enumeration and deterministic parallel folding over
//! contiguous rank ranges.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Binomial coefficient; saturates at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot;
        loop {
            // subsets starting with `next` at this slot
            let count = binomial((n - next - 1) as u64, (remaining - 1) as u64);
            if rank < count {
                break;
            }
            rank -= count;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Lexicographic rank of a sorted k-subset of `0..n`.
pub fn rank(subset: &[usize], n: usize) -> u128 {
    let k = subset.len();
    let mut r = 0u128;
    let mut prev = 0usize;
    for (slot, &v) in subset.iter().enumerate() {
        for skipped in prev..v {
            r += binomial((n - skipped - 1) as u64, (k - slot - 1) as u64);
        }
        prev = v + 1;
    }
    r
}

/// Advance to the next subset in lexicographic order; false after the last.
pub fn next_combination(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Iterator over all k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut nxt = out.clone();
        self.current = next_combination(&mut nxt, self.n).then_some(nxt);
        Some(out)
    }
}

/// Run `f` inside a pool with `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Resource(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Fold every k-subset of `0..n` (in lexicographic order within contiguous
/// rank ranges) and merge the per-range accumulators in rank order. The
/// result does not depend on the worker count as long as `merge` is
/// associative.
pub fn fold_subsets<A, I, S, M>(
    n: usize,
    k: usize,
    threads: Option<usize>,
    init: I,
    step: S,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    S: Fn(&mut A, u128, &[usize]) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let total = binomial(n as u64, k as u64);
    if total == u128::MAX {
        return Err(Error::Resource(format!("C({n}, {k}) overflows")));
    }
    if total == 0 {
        return Ok(init());
    }
    with_threads(threads, || {
        let workers = rayon::current_num_threads() as u128;
        let chunks = total.min(workers * 16).max(1);
        let parts: Vec<A> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = total * c / chunks;
                let end = total * (c + 1) / chunks;
                let mut acc = init();
                let mut s = unrank(start, n, k);
                for r in start..end {
                    step(&mut acc, r, &s);
                    if r + 1 < end {
                        next_combination(&mut s, n);
                    }
                }
                acc
            })
            .collect();
        parts.into_iter().reduce(&merge).unwrap_or_else(&init)
    })
}
