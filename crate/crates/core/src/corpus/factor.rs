use std::fmt;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of a text length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub length: u64,
    /// Prime factors with multiplicity, ascending.
    pub prime_factors: Vec<u64>,
    pub is_prime: bool,
}

impl FactorizationReport {
    pub fn factor_count(&self) -> usize {
        self.prime_factors.len()
    }

    /// Distinct divisors `d` with `d * d <= length`, ascending.
    pub fn small_divisors(&self) -> Vec<u64> {
        let mut divisors = vec![1u64];
        let mut i = 0;
        while i < self.prime_factors.len() {
            let p = self.prime_factors[i];
            let mut mult = 0;
            while i < self.prime_factors.len() && self.prime_factors[i] == p {
                mult += 1;
                i += 1;
            }
            let current = divisors.clone();
            let mut pk = 1u64;
            for _ in 0..mult {
                pk *= p;
                divisors.extend(current.iter().map(|d| d * pk));
            }
        }
        divisors.retain(|&d| d.saturating_mul(d) <= self.length);
        divisors.sort_unstable();
        divisors
    }
}

impl fmt::Display for FactorizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.prime_factors.iter().map(u64::to_string).collect();
        write!(f, "{} = {}", self.length, factors.join(" * "))?;
        if self.is_prime {
            f.write_str(" (prime)")?;
        }
        Ok(())
    }
}

/// Complete prime factorization of `length`.
///
/// Trial division handles every factor below 10^6; a remaining cofactor is
/// classified with deterministic Miller-Rabin and split with Pollard's rho
/// when composite.
pub fn factorize(length: u64) -> Result<FactorizationReport> {
    if length == 0 {
        return Err(Error::InvalidLength("cannot factorize 0".into()));
    }
    let mut factors = Vec::new();
    let mut n = length;
    while n % 2 == 0 {
        factors.push(2);
        n /= 2;
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= n {
        while n % p == 0 {
            factors.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        split_large(n, &mut factors);
    }
    factors.sort_unstable();
    Ok(FactorizationReport {
        length,
        is_prime: factors.len() == 1,
        prime_factors: factors,
    })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant; `n` is odd, composite and free of factors below 10^6.
fn pollard_rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}
