//! Permutations of `[n]` in sequence form and the block composition of `As` on basis elements.
//!
//! A permutation `σ ∈ Sₙ` is stored as the sequence `(σ⁻¹(1), …, σ⁻¹(n))`. Equivalently the
//! sequence `(i₁, …, iₙ)` is the permutation with `σ(i_k) = k`. The function table
//! `(σ(1), …, σ(n))` is available through [`Permutation::function_table`]; nothing converts
//! between the two implicitly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    seq: Vec<usize>,
}

impl Permutation {
    /// The identity `1ₙ`. `identity(0)` is the unique element of `S₀`.
    pub fn identity(n: usize) -> Self {
        Permutation { seq: (1..=n).collect() }
    }

    /// Builds a permutation from its sequence `(σ⁻¹(1), …, σ⁻¹(n))`.
    pub fn from_seq(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &x in &seq {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{seq:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { seq })
    }

    /// Builds a permutation from its function table `(σ(1), …, σ(n))`.
    pub fn from_function_table(table: &[usize]) -> Result<Self> {
        Ok(Permutation::from_seq(table.to_vec())?.inverse())
    }

    pub fn arity(&self) -> usize {
        self.seq.len()
    }

    /// The sequence `(σ⁻¹(1), …, σ⁻¹(n))`, values 1-based.
    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// `(σ(1), …, σ(n))`.
    pub fn function_table(&self) -> Vec<usize> {
        let mut table = vec![0; self.seq.len()];
        for (k, &i) in self.seq.iter().enumerate() {
            table[i - 1] = k + 1;
        }
        table
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.seq.iter().position(|&x| x == i).map(|k| k + 1).expect("index in range")
    }

    /// `σ⁻¹(k)` for 1-based `k`.
    pub fn apply_inverse(&self, k: usize) -> usize {
        self.seq[k - 1]
    }

    pub fn inverse(&self) -> Self {
        Permutation { seq: self.function_table() }
    }

    pub fn is_identity(&self) -> bool {
        self.seq.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// The group product `στ` (apply `τ` first).
    pub fn multiply(&self, tau: &Permutation) -> Result<Self> {
        if self.arity() != tau.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: tau.arity() });
        }
        // (στ)⁻¹(k) = τ⁻¹(σ⁻¹(k))
        Ok(Permutation { seq: self.seq.iter().map(|&i| tau.seq[i - 1]).collect() })
    }

    /// Number of pairs `k < l` with `seq[k] > seq[l]`.
    pub fn inversions(&self) -> usize {
        let n = self.seq.len();
        (0..n)
            .map(|k| (k + 1..n).filter(|&l| self.seq[k] > self.seq[l]).count())
            .sum()
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i32 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The composition `σ ∘ (σ₁, …, σₙ)` of `As` restricted to basis permutations.
    ///
    /// Block `i` is `σᵢ`'s sequence shifted by `k₁ + … + k_{i-1}`; the blocks are
    /// concatenated in the order `σ⁻¹(1), …, σ⁻¹(n)`. Parts of arity 0 delete their slot.
    pub fn block_compose(&self, parts: &[Permutation]) -> Result<Self> {
        let n = self.arity();
        if parts.len() != n {
            return Err(Error::WrongPartCount { expected: n, found: parts.len() });
        }
        if n == 0 {
            return Err(Error::WrongPartCount { expected: 1, found: 0 });
        }
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.arity();
        }
        let mut seq = Vec::with_capacity(total);
        for &slot in &self.seq {
            let off = offsets[slot - 1];
            seq.extend(parts[slot - 1].seq.iter().map(|&x| off + x));
        }
        Ok(Permutation { seq })
    }

    /// Position of this permutation in the lexicographic order of sequences, 0-based.
    pub fn rank(&self) -> usize {
        let n = self.seq.len();
        let mut used = vec![false; n + 1];
        let mut fact = factorial(n);
        let mut rank = 0;
        for (k, &x) in self.seq.iter().enumerate() {
            fact /= n - k;
            let smaller = (1..x).filter(|&y| !used[y]).count();
            rank += smaller * fact;
            used[x] = true;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Self {
        let mut available: Vec<usize> = (1..=n).collect();
        let mut fact = factorial(n);
        let mut seq = Vec::with_capacity(n);
        for k in 0..n {
            fact /= n - k;
            let idx = rank / fact;
            rank %= fact;
            seq.push(available.remove(idx));
        }
        Permutation { seq }
    }

    /// All of `Sₙ` in lexicographic order of sequences.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some(Permutation::identity(n));
        std::iter::from_fn(move || {
            let current = next.take()?;
            next = current.successor();
            Some(current)
        })
    }

    fn successor(&self) -> Option<Self> {
        let mut seq = self.seq.clone();
        let n = seq.len();
        if n < 2 {
            return None;
        }
        let mut i = n - 1;
        while i > 0 && seq[i - 1] >= seq[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = n - 1;
        while seq[j] <= seq[i - 1] {
            j -= 1;
        }
        seq.swap(i - 1, j);
        seq[i..].reverse();
        Some(Permutation { seq })
    }

    /// Generators of `Sₙ`: the swap of the first two letters and the long cycle.
    pub fn generators(n: usize) -> Vec<Permutation> {
        if n < 2 {
            return Vec::new();
        }
        let mut swap: Vec<usize> = (1..=n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (2..=n).chain(std::iter::once(1)).collect();
        let mut gens = vec![Permutation { seq: swap }];
        if n > 2 {
            gens.push(Permutation { seq: cycle });
        }
        gens
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.seq.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse { pos: 0, message: format!("{message}: {s:?}") };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("permutation must be parenthesised"))?;
        if inner.trim().is_empty() {
            return Ok(Permutation::identity(0));
        }
        let seq = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("invalid entry")))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_seq(seq)
    }
}
