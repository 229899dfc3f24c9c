//! The von Mangoldt function from a segmented sieve of Eratosthenes.
//!
//! Tables up to `1e8` are held in memory as sorted `(n, p)` pairs over the prime
//! powers `n = p^m`. Up to `1e9`, [`for_each_prime_power`] streams the same
//! pairs in ascending order without storing them.

use crate::error::{Error, Result};

pub const MAX_TABLE_CUTOFF: u64 = 100_000_000;
pub const MAX_STREAM_CUTOFF: u64 = 1_000_000_000;

const SEGMENT: usize = 1 << 18;

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn check_cutoff(cutoff: u64, max: u64) -> Result<()> {
    if cutoff < 2 || cutoff > max {
        return Err(Error::Range(format!(
            "sieve cutoff must lie in [2, {max}], got {cutoff}"
        )));
    }
    Ok(())
}

/// Calls `f(n, p)` for every prime power `n = p^m <= cutoff`, in ascending order.
pub fn for_each_prime_power(cutoff: u64, mut f: impl FnMut(u64, u64)) -> Result<()> {
    check_cutoff(cutoff, MAX_STREAM_CUTOFF)?;
    let base = small_primes(isqrt(cutoff));

    // higher powers p^m, m >= 2, all have p <= sqrt(cutoff)
    let mut powers: Vec<(u64, u64)> = Vec::new();
    for &p in &base {
        let mut q = p * p;
        while q <= cutoff {
            powers.push((q, p));
            q *= p;
        }
    }
    powers.sort_unstable();
    let mut next_power = powers.iter().peekable();

    let mut sieve = vec![true; SEGMENT];
    let mut lo = 2u64;
    while lo <= cutoff {
        let hi = (lo + SEGMENT as u64 - 1).min(cutoff);
        let len = (hi - lo + 1) as usize;
        sieve[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                sieve[(j - lo) as usize] = false;
                j += p;
            }
        }
        for (i, &is_prime) in sieve[..len].iter().enumerate() {
            let n = lo + i as u64;
            while let Some(&&(q, p)) = next_power.peek() {
                if q >= n {
                    break;
                }
                f(q, p);
                next_power.next();
            }
            if is_prime {
                f(n, n);
            }
        }
        lo = hi + 1;
    }
    for &(q, p) in next_power {
        f(q, p);
    }
    Ok(())
}

/// `Lambda(n)` for `2 <= n <= cutoff`, stored sparsely over the prime powers.
#[derive(Clone, Debug)]
pub struct VonMangoldt {
    cutoff: u64,
    // (p^m, p), ascending in the first component
    entries: Vec<(u32, u32)>,
}

impl VonMangoldt {
    pub fn sieve(cutoff: u64) -> Result<Self> {
        check_cutoff(cutoff, MAX_TABLE_CUTOFF)?;
        let mut entries = Vec::with_capacity((1.1 * cutoff as f64 / (cutoff as f64).ln()) as usize + 16);
        for_each_prime_power(cutoff, |n, p| entries.push((n as u32, p as u32)))?;
        Ok(VonMangoldt { cutoff, entries })
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Number of prime powers in the table.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Lambda(n)`; zero for `n` that is not a prime power or lies beyond the cutoff.
    pub fn lambda(&self, n: u64) -> f64 {
        if n > self.cutoff {
            return 0.0;
        }
        match self.entries.binary_search_by_key(&(n as u32), |e| e.0) {
            Ok(i) => (self.entries[i].1 as f64).ln(),
            Err(_) => 0.0,
        }
    }

    /// `(n, Lambda(n))` over prime powers `n <= limit`, ascending.
    pub fn iter_to(&self, limit: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.entries
            .iter()
            .take_while(move |e| e.0 as u64 <= limit)
            .map(|&(n, p)| (n as u64, (p as f64).ln()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.iter_to(self.cutoff)
    }

    /// Chebyshev's `psi(x) = sum_{n <= x} Lambda(n)`.
    pub fn chebyshev_psi(&self, x: u64) -> f64 {
        self.iter_to(x).map(|(_, l)| l).sum()
    }

    /// `sum_{n <= x} Lambda(n) / sqrt(n)`.
    pub fn weighted_sum(&self, x: u64) -> f64 {
        self.iter_to(x).map(|(n, l)| l / (n as f64).sqrt()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_lambda(n: u64) -> f64 {
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                while m % p == 0 {
                    m /= p;
                }
                return if m == 1 { (p as f64).ln() } else { 0.0 };
            }
            p += 1;
        }
        (m as f64).ln()
    }

    #[test]
    fn small_values() {
        let t = VonMangoldt::sieve(100).unwrap();
        assert_eq!(t.lambda(8), 2f64.ln());
        assert_eq!(t.lambda(12), 0.0);
        assert_eq!(t.lambda(97), 97f64.ln());
        assert_eq!(t.lambda(81), 3f64.ln());
        assert_eq!(t.lambda(1), 0.0);
        assert_eq!(t.lambda(101), 0.0);
    }

    #[test]
    fn matches_trial_division() {
        let t = VonMangoldt::sieve(10_000).unwrap();
        for n in 2..=10_000u64 {
            assert_eq!(t.lambda(n), trial_lambda(n), "{n}");
        }
    }

    #[test]
    fn streaming_is_ascending_across_segments() {
        let cutoff = 3 * SEGMENT as u64 + 17;
        let mut last = 0;
        let mut count = 0usize;
        for_each_prime_power(cutoff, |n, p| {
            assert!(n > last);
            assert_eq!(trial_lambda(n), (p as f64).ln());
            last = n;
            count += 1;
        })
        .unwrap();
        // pi(786449) = 62946 primes plus 252 higher powers
        let table = VonMangoldt::sieve(cutoff).unwrap();
        assert_eq!(table.len(), count);
    }

    #[test]
    fn prime_number_theorem_sanity() {
        let t = VonMangoldt::sieve(1_000_000).unwrap();
        for &x in &[10_000u64, 100_000, 1_000_000] {
            let psi = t.chebyshev_psi(x);
            assert!((psi / x as f64 - 1.0).abs() < 0.05, "{x}: {psi}");
        }
    }

    #[test]
    fn weighted_sum_against_brute_force() {
        let cutoff = (2.0 * std::f64::consts::PI).exp() as u64;
        let t = VonMangoldt::sieve(cutoff).unwrap();
        let direct: f64 = (2..=cutoff).map(|n| trial_lambda(n) / (n as f64).sqrt()).sum();
        assert!((t.weighted_sum(cutoff) - direct).abs() < 1e-12);
        // of the order of e^{pi D} with D = 1
        assert!(direct < 2.0 * std::f64::consts::PI.exp());
    }

    #[test]
    fn cutoff_range() {
        assert!(VonMangoldt::sieve(1).is_err());
        assert!(VonMangoldt::sieve(MAX_TABLE_CUTOFF + 1).is_err());
        assert!(for_each_prime_power(MAX_STREAM_CUTOFF + 1, |_, _| {}).is_err());
    }

    proptest! {
        #[test]
        fn lambda_exact_on_random_inputs(n in 2u64..200_000) {
            let t = VonMangoldt::sieve(200_000).unwrap();
            prop_assert_eq!(t.lambda(n), trial_lambda(n));
        }
    }
}
