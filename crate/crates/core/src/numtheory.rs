//! Primes, modular square roots and inverses for polynomial color reduction.

use std::sync::OnceLock;

use crate::error::{contract, Result};

/// Square-root and inverse tables over `F_p`.
#[derive(Debug)]
pub struct PrimeField {
    pub p: u64,
    sqrt: Vec<u32>,
    inv: Vec<u32>,
}

const NO_ROOT: u32 = u32::MAX;

impl PrimeField {
    pub fn new(p: u64) -> Self {
        let mut sqrt = vec![NO_ROOT; p as usize];
        for z in 0..p {
            let y = (z * z % p) as usize;
            if sqrt[y] == NO_ROOT {
                sqrt[y] = z as u32;
            }
        }
        let mut inv = vec![0u32; p as usize];
        if p > 1 {
            inv[1] = 1;
            for a in 2..p {
                // inv[a] = -(p / a) * inv[p mod a]
                inv[a as usize] =
                    ((p - (p / a) * inv[(p % a) as usize] as u64 % p) % p) as u32;
            }
        }
        PrimeField { p, sqrt, inv }
    }

    /// Smallest `z` with `z*z = y (mod p)`, if any.
    pub fn sqrt(&self, y: u64) -> Option<u64> {
        let z = self.sqrt[(y % self.p) as usize];
        (z != NO_ROOT).then_some(z as u64)
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.inv[(a % self.p) as usize] as u64
    }

    /// Residues that have a stored root, with that root.
    pub fn residues(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.sqrt
            .iter()
            .enumerate()
            .filter(|(_, &z)| z != NO_ROOT)
            .map(|(y, &z)| (y as u64, z as u64))
    }

    /// Roots of `a x^2 + b x + c` over `F_p` for odd `p`; `None` when the
    /// polynomial is identically zero.
    pub fn quadratic_roots(&self, a: u64, b: u64, c: u64) -> Option<([u64; 2], usize)> {
        let p = self.p;
        let (a, b, c) = (a % p, b % p, c % p);
        if a == 0 {
            if b == 0 {
                return if c == 0 { None } else { Some(([0, 0], 0)) };
            }
            let x = (p - c) % p * self.inv(b) % p;
            return Some(([x, 0], 1));
        }
        let disc = (b * b % p + p - 4 * a % p * c % p) % p;
        let z = match self.sqrt(disc) {
            Some(z) => z,
            None => return Some(([0, 0], 0)),
        };
        let two_a_inv = self.inv(2 * a % p);
        let mb = (p - b) % p;
        let r1 = (mb + z) % p * two_a_inv % p;
        let r2 = (mb + p - z) % p * two_a_inv % p;
        if r1 == r2 {
            Some(([r1, 0], 1))
        } else {
            Some(([r1.min(r2), r1.max(r2)], 2))
        }
    }
}

/// Primes up to a limit plus per-prime field tables.
///
/// The sieve is eager. Field tables are built on first use of each prime:
/// eager tables for every prime below the limit cost on the order of
/// `limit^2 / log(limit)` memory, which the defective coloring's large
/// palettes make prohibitive.
#[derive(Debug)]
pub struct NumberTheoryTables {
    limit: u64,
    primes: Vec<u64>,
    fields: Vec<OnceLock<PrimeField>>,
}

impl NumberTheoryTables {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        let mut composite = vec![false; limit as usize + 1];
        let mut primes = Vec::new();
        for i in 2..=limit as usize {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit as usize {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        let fields = (0..primes.len()).map(|_| OnceLock::new()).collect();
        NumberTheoryTables { limit, primes, fields }
    }

    /// Default limit for a graph on `n` nodes whose smallest defect parameter
    /// is `eps_min`.
    pub fn default_limit(n: usize, eps_min: f64) -> u64 {
        let cube = (n as f64).cbrt().ceil() as u64;
        let eps_term = if eps_min > 0.0 { 4 * (1.0 / eps_min).ceil() as u64 } else { 0 };
        (2 * 4 * cube).max(eps_term).max(2)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn field(&self, p: u64) -> Result<&PrimeField> {
        let idx = self
            .primes
            .binary_search(&p)
            .map_err(|_| contract(format!("{p} is not a tabulated prime")))?;
        Ok(self.fields[idx].get_or_init(|| PrimeField::new(p)))
    }

    /// Smallest prime in `[x, 2x]`.
    pub fn prime_in_range(&self, x: u64) -> Result<u64> {
        if x < 1 {
            return Err(contract("prime_in_range needs x >= 1"));
        }
        if 2 * x > self.limit {
            return Err(contract(format!("2x = {} exceeds table limit {}", 2 * x, self.limit)));
        }
        let idx = self.primes.partition_point(|&p| p < x);
        match self.primes.get(idx) {
            Some(&p) if p <= 2 * x => Ok(p),
            _ => Err(contract(format!("no prime in [{x}, {}]", 2 * x))),
        }
    }
}
