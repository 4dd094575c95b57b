//! Finite-dimensional unital associative algebras given by structure constants, evaluation of
//! operad elements and polynomials on them, and exhaustive identity testing.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{multilinearize, phi_inv, MultilinearPoly, NcPoly};
use crate::linalg::SparseVector;
use crate::operad::OperadElement;
use crate::scalar::{parse_rational, Rational, Scalar};

/// Default number of basis tuples an exhaustive check may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `A` with basis `b₀, …, b_{d-1}` and `bᵢ·bⱼ = table[i][j]`.
#[derive(Clone, PartialEq)]
pub struct StructureAlgebra<S> {
    labels: Vec<String>,
    table: Vec<Vec<SparseVector<S>>>,
    unit: SparseVector<S>,
}

impl<S: Scalar> StructureAlgebra<S> {
    /// Validates shapes, associativity on every basis triple, and the unit.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<SparseVector<S>>>,
        unit: SparseVector<S>,
    ) -> Result<Self> {
        let algebra = Self::from_parts(labels, table, unit)?;
        algebra.validate()?;
        Ok(algebra)
    }

    fn from_parts(
        labels: Vec<String>,
        table: Vec<Vec<SparseVector<S>>>,
        unit: SparseVector<S>,
    ) -> Result<Self> {
        let dim = labels.len();
        if table.len() != dim || table.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidAlgebra(format!(
                "structure table must be {dim}×{dim}"
            )));
        }
        if table.iter().flatten().chain(std::iter::once(&unit)).any(|v| v.dim() != dim) {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must have {dim} coordinates"
            )));
        }
        Ok(StructureAlgebra { labels, table, unit })
    }

    /// Re-checks associativity and the unit laws.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i][j];
                for k in 0..d {
                    let left = self.mul_right_basis(ij, k);
                    let right = self.mul_left_basis(i, &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        for i in 0..d {
            let b = SparseVector::unit(d, i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::InvalidAlgebra(format!(
                    "unit does not act trivially on {}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVector<S> {
        &self.unit
    }

    /// `bᵢ·bⱼ`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVector<S> {
        &self.table[i][j]
    }

    /// Index `u` with `unit == b_u`, if the unit is itself a basis vector.
    pub fn unit_basis_index(&self) -> Option<usize> {
        match self.unit.entries() {
            [(u, c)] if c.is_one() => Some(*u),
            _ => None,
        }
    }

    /// `a · b_j`.
    pub fn mul_right_basis(&self, a: &SparseVector<S>, j: usize) -> SparseVector<S> {
        match a.entries() {
            [] => SparseVector::zero(self.dim()),
            [(i, c)] => {
                if c.is_one() {
                    self.table[*i][j].clone()
                } else {
                    self.table[*i][j].scale(c)
                }
            }
            entries => {
                let mut acc = vec![S::zero(); self.dim()];
                for (i, c) in entries {
                    for (k, x) in self.table[*i][j].entries() {
                        acc[*k] = acc[*k].clone() + c.clone() * x.clone();
                    }
                }
                SparseVector::from_dense(acc)
            }
        }
    }

    /// `b_i · a`.
    pub fn mul_left_basis(&self, i: usize, a: &SparseVector<S>) -> SparseVector<S> {
        let mut acc = vec![S::zero(); self.dim()];
        for (j, c) in a.entries() {
            for (k, x) in self.table[i][*j].entries() {
                acc[*k] = acc[*k].clone() + c.clone() * x.clone();
            }
        }
        SparseVector::from_dense(acc)
    }

    /// Bilinear extension of the table.
    pub fn mul(&self, a: &SparseVector<S>, b: &SparseVector<S>) -> SparseVector<S> {
        let mut acc = vec![S::zero(); self.dim()];
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                let xy = x.clone() * y.clone();
                for (k, z) in self.table[*i][*j].entries() {
                    acc[*k] = acc[*k].clone() + xy.clone() * z.clone();
                }
            }
        }
        SparseVector::from_dense(acc)
    }

    pub fn element(&self, coords: SparseVector<S>) -> Result<AlgebraElement<'_, S>> {
        if coords.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.dim() });
        }
        Ok(AlgebraElement { algebra: self, coords })
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement<'_, S> {
        AlgebraElement { algebra: self, coords: SparseVector::unit(self.dim(), i) }
    }

    pub fn unit_element(&self) -> AlgebraElement<'_, S> {
        AlgebraElement { algebra: self, coords: self.unit.clone() }
    }

    pub fn zero_element(&self) -> AlgebraElement<'_, S> {
        AlgebraElement { algebra: self, coords: SparseVector::zero(self.dim()) }
    }

    /// `γₙ(θ)` applied to basis vectors `b_{t₁}, …, b_{tₙ}`.
    pub fn evaluate_on_basis(&self, theta: &OperadElement<S>, tuple: &[usize]) -> SparseVector<S> {
        debug_assert_eq!(theta.arity(), tuple.len());
        let mut acc = SparseVector::zero(self.dim());
        for (sigma, c) in theta.terms() {
            let product = match sigma.seq().split_first() {
                None => self.unit.clone(),
                Some((&first, rest)) => {
                    let mut p = SparseVector::unit(self.dim(), tuple[first - 1]);
                    for &k in rest {
                        p = self.mul_right_basis(&p, tuple[k - 1]);
                        if p.is_zero() {
                            break;
                        }
                    }
                    p
                }
            };
            acc = acc.add_scaled(c, &product);
        }
        acc
    }

    /// `A × B` with componentwise product.
    pub fn direct_sum(parts: &[StructureAlgebra<S>]) -> Self {
        let dim: usize = parts.iter().map(|p| p.dim()).sum();
        let mut labels = Vec::with_capacity(dim);
        let mut table = vec![vec![SparseVector::zero(dim); dim]; dim];
        let mut unit_entries = Vec::new();
        let mut off = 0;
        for (idx, part) in parts.iter().enumerate() {
            let shift = |v: &SparseVector<S>| {
                SparseVector::from_entries(dim, v.entries().iter().map(|(i, c)| (i + off, c.clone())))
                    .expect("shifted index in range")
            };
            for l in part.labels() {
                labels.push(format!("{idx}:{l}"));
            }
            for i in 0..part.dim() {
                for j in 0..part.dim() {
                    table[off + i][off + j] = shift(&part.table[i][j]);
                }
            }
            unit_entries.extend(shift(&part.unit).entries().iter().cloned());
            off += part.dim();
        }
        let unit = SparseVector::from_entries(dim, unit_entries).expect("indices in range");
        StructureAlgebra { labels, table, unit }
    }

    /// `A ⊗ B` with basis `aᵢ ⊗ bⱼ` at index `i·dim B + j`.
    pub fn tensor(a: &StructureAlgebra<S>, b: &StructureAlgebra<S>) -> Self {
        let (da, db) = (a.dim(), b.dim());
        let dim = da * db;
        let pair = |x: &SparseVector<S>, y: &SparseVector<S>| {
            SparseVector::from_entries(
                dim,
                x.entries().iter().flat_map(|(i, c)| {
                    y.entries().iter().map(move |(j, d)| (i * db + j, c.clone() * d.clone()))
                }),
            )
            .expect("indices in range")
        };
        let mut labels = Vec::with_capacity(dim);
        for la in a.labels() {
            for lb in b.labels() {
                labels.push(format!("{la}⊗{lb}"));
            }
        }
        let mut table = vec![vec![SparseVector::zero(dim); dim]; dim];
        for i in 0..da {
            for j in 0..db {
                for k in 0..da {
                    for l in 0..db {
                        table[i * db + j][k * db + l] = pair(&a.table[i][k], &b.table[j][l]);
                    }
                }
            }
        }
        StructureAlgebra { labels, table, unit: pair(&a.unit, &b.unit) }
    }
}

impl<S: Scalar> fmt::Debug for StructureAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureAlgebra(dim={}, basis={:?})", self.dim(), self.labels)
    }
}

/// The `k×k` matrix units `e_{pq}` at index `(p-1)k + (q-1)`.
pub fn matrix_algebra<S: Scalar>(k: usize) -> Result<StructureAlgebra<S>> {
    if k == 0 {
        return Err(Error::InvalidAlgebra("matrix size must be at least 1".into()));
    }
    let dim = k * k;
    let label = |p: usize, q: usize| {
        if k < 10 {
            format!("e{p}{q}")
        } else {
            format!("e{p},{q}")
        }
    };
    let mut labels = Vec::with_capacity(dim);
    let mut table = vec![vec![SparseVector::zero(dim); dim]; dim];
    for p in 0..k {
        for q in 0..k {
            labels.push(label(p + 1, q + 1));
            for s in 0..k {
                // e_pq · e_qs = e_ps
                table[p * k + q][q * k + s] = SparseVector::unit(dim, p * k + s);
            }
        }
    }
    let unit = SparseVector::from_entries(dim, (0..k).map(|p| (p * k + p, S::one())))?;
    StructureAlgebra::new(labels, table, unit)
}

/// Subsets of `{1..n}` as bitmasks, ordered by size and then lexicographically.
pub fn grassmann_subsets(n: usize) -> Vec<u64> {
    assert!(n < 64, "too many Grassmann generators");
    let mut subsets: Vec<u64> = (0..1u64 << n).collect();
    let elements = |m: u64| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>();
    subsets.sort_by(|&a, &b| {
        a.count_ones().cmp(&b.count_ones()).then_with(|| elements(a).cmp(&elements(b)))
    });
    subsets
}

/// Exterior algebra on `n` generators: `e_S·e_T = 0` if `S ∩ T ≠ ∅`, otherwise
/// `(-1)^{#{(s,t) ∈ S×T : s > t}} e_{S∪T}`.
pub fn grassmann_algebra<S: Scalar>(n: usize) -> Result<StructureAlgebra<S>> {
    let subsets = grassmann_subsets(n);
    let dim = subsets.len();
    let mut index = std::collections::HashMap::with_capacity(dim);
    for (i, &m) in subsets.iter().enumerate() {
        index.insert(m, i);
    }
    let labels = subsets
        .iter()
        .map(|&m| {
            if m == 0 {
                "1".to_string()
            } else {
                (0..n).filter(|i| m >> i & 1 == 1).map(|i| format!("e{}", i + 1)).collect()
            }
        })
        .collect();
    let mut table = vec![vec![SparseVector::zero(dim); dim]; dim];
    for (i, &s) in subsets.iter().enumerate() {
        for (j, &t) in subsets.iter().enumerate() {
            if s & t != 0 {
                continue;
            }
            let inversions: u32 = (0..n)
                .filter(|a| t >> a & 1 == 1)
                .map(|a| (s >> (a + 1)).count_ones())
                .sum();
            let sign = if inversions % 2 == 0 { S::one() } else { -S::one() };
            table[i][j] = SparseVector::from_entries(dim, [(index[&(s | t)], sign)])?;
        }
    }
    StructureAlgebra::new(labels, table, SparseVector::unit(dim, 0))
}

/// An element of a particular algebra.
#[derive(Clone)]
pub struct AlgebraElement<'a, S> {
    algebra: &'a StructureAlgebra<S>,
    coords: SparseVector<S>,
}

impl<'a, S: Scalar> AlgebraElement<'a, S> {
    pub fn algebra(&self) -> &'a StructureAlgebra<S> {
        self.algebra
    }

    pub fn coords(&self) -> &SparseVector<S> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.algebra, other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(AlgebraElement { algebra: self.algebra, coords: self.coords.add(&other.coords) })
    }

    pub fn scale(&self, c: &S) -> Self {
        AlgebraElement { algebra: self.algebra, coords: self.coords.scale(c) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        multiply_elements(self, other)
    }
}

impl<S: Scalar> PartialEq for AlgebraElement<'_, S> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.algebra, other.algebra) && self.coords == other.coords
    }
}

impl<S: Scalar> fmt::Debug for AlgebraElement<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.entries() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{}", self.algebra.labels[*i])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn multiply_elements<'a, S: Scalar>(
    a: &AlgebraElement<'a, S>,
    b: &AlgebraElement<'a, S>,
) -> Result<AlgebraElement<'a, S>> {
    a.same_algebra(b)?;
    Ok(AlgebraElement { algebra: a.algebra, coords: a.algebra.mul(&a.coords, &b.coords) })
}

/// `γₙ(θ)(a₁, …, aₙ) = Σ c_σ a_{σ⁻¹(1)}⋯a_{σ⁻¹(n)}`.
pub fn evaluate<'a, S: Scalar>(
    theta: &OperadElement<S>,
    args: &[AlgebraElement<'a, S>],
    algebra: &'a StructureAlgebra<S>,
) -> Result<AlgebraElement<'a, S>> {
    if args.len() != theta.arity() {
        return Err(Error::ArityMismatch { expected: theta.arity(), found: args.len() });
    }
    if args.iter().any(|a| !std::ptr::eq(a.algebra, algebra)) {
        return Err(Error::AlgebraMismatch);
    }
    let mut acc = SparseVector::zero(algebra.dim());
    for (sigma, c) in theta.terms() {
        let mut product = algebra.unit.clone();
        for &k in sigma.seq() {
            product = algebra.mul(&product, &args[k - 1].coords);
        }
        acc = acc.add_scaled(c, &product);
    }
    Ok(AlgebraElement { algebra, coords: acc })
}

/// Evaluates a polynomial, sending `x_i` to `args[i-1]`.
pub fn evaluate_poly<'a, S: Scalar>(
    f: &NcPoly<S>,
    args: &[AlgebraElement<'a, S>],
    algebra: &'a StructureAlgebra<S>,
) -> Result<AlgebraElement<'a, S>> {
    if f.max_variable() > args.len() {
        return Err(Error::ArityMismatch { expected: f.max_variable(), found: args.len() });
    }
    if args.iter().any(|a| !std::ptr::eq(a.algebra, algebra)) {
        return Err(Error::AlgebraMismatch);
    }
    let mut acc = SparseVector::zero(algebra.dim());
    for (word, c) in f.terms() {
        let mut product = algebra.unit.clone();
        for &x in word.letters() {
            product = algebra.mul(&product, &args[x - 1].coords);
        }
        acc = acc.add_scaled(c, &product);
    }
    Ok(AlgebraElement { algebra, coords: acc })
}

fn tuple_count(dim: usize, n: usize) -> u128 {
    (dim as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Whether the multilinear `f` vanishes on every tuple of basis elements.
///
/// By multilinearity this decides whether `f` is an identity of `A`. Refuses when `dimⁿ`
/// exceeds `budget`.
pub fn is_identity<S: Scalar>(
    f: &MultilinearPoly<S>,
    algebra: &StructureAlgebra<S>,
    budget: u64,
) -> Result<bool> {
    let theta = phi_inv(f);
    let n = theta.arity();
    let dim = algebra.dim();
    let required = tuple_count(dim, n);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if dim == 0 {
        return Ok(true);
    }
    let mut tuple = vec![0usize; n];
    loop {
        if !algebra.evaluate_on_basis(&theta, &tuple).is_zero() {
            return Ok(false);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(true);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < dim {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Settings for [`is_identity_general`].
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub budget: u64,
    /// Random elements tried as an independent cross-check.
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for IdentityCheck {
    fn default() -> Self {
        IdentityCheck { budget: DEFAULT_BUDGET, random_trials: 4, seed: 0 }
    }
}

/// Whether an arbitrary polynomial is an identity of `A`.
///
/// Decided through the multilinearization of `f`; in characteristic zero `f` is an identity
/// iff each multilinear component is. Random substitutions are then evaluated directly and
/// must agree with a positive verdict.
pub fn is_identity_general<S: Scalar>(
    f: &NcPoly<S>,
    algebra: &StructureAlgebra<S>,
    check: &IdentityCheck,
) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut verdict = true;
    for component in multilinearize(f)? {
        if !is_identity(&component, algebra, check.budget)? {
            verdict = false;
            break;
        }
    }
    if verdict && algebra.dim() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
        let nvars = f.max_variable();
        for _ in 0..check.random_trials {
            let args: Vec<AlgebraElement<'_, S>> = (0..nvars)
                .map(|_| {
                    let coords = (0..algebra.dim()).map(|_| {
                        let c: i32 = rng.gen_range(-3..=3);
                        integer_scalar::<S>(c)
                    });
                    AlgebraElement { algebra, coords: SparseVector::from_dense(coords.collect()) }
                })
                .collect();
            if !evaluate_poly(f, &args, algebra)?.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "{f} passed the multilinear test but not a random substitution"
                )));
            }
        }
    }
    Ok(verdict)
}

fn integer_scalar<S: Scalar>(c: i32) -> S {
    let magnitude = (0..c.unsigned_abs()).fold(S::zero(), |acc, _| acc + S::one());
    if c < 0 {
        -magnitude
    } else {
        magnitude
    }
}

/// Serialized algebra description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlgebraSpec {
    Matrix { k: usize },
    Grassmann { generators: usize },
    Custom { basis: Vec<String>, unit: Vec<Coefficient>, table: Vec<Vec<Vec<Coefficient>>> },
    DirectSum { parts: Vec<AlgebraSpec> },
    Tensor { parts: Vec<AlgebraSpec> },
}

/// A rational written as `"p/q"` or as a JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Integer(i64),
    Text(String),
}

impl Coefficient {
    fn value(&self) -> Result<Rational> {
        match self {
            Coefficient::Integer(n) => Ok(Rational::from_integer((*n).into())),
            Coefficient::Text(s) => parse_rational(s),
        }
    }
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<StructureAlgebra<Rational>> {
        match self {
            AlgebraSpec::Matrix { k } => matrix_algebra(*k),
            AlgebraSpec::Grassmann { generators } => {
                if *generators > 16 {
                    return Err(Error::InvalidAlgebra("at most 16 Grassmann generators".into()));
                }
                grassmann_algebra(*generators)
            }
            AlgebraSpec::Custom { basis, unit, table } => {
                let dim = basis.len();
                let vector = |coords: &[Coefficient]| -> Result<SparseVector<Rational>> {
                    if coords.len() != dim {
                        return Err(Error::InvalidAlgebra(format!(
                            "expected {dim} coordinates, found {}",
                            coords.len()
                        )));
                    }
                    Ok(SparseVector::from_dense(
                        coords.iter().map(Coefficient::value).collect::<Result<Vec<_>>>()?,
                    ))
                };
                let unit = vector(unit)?;
                let table = table
                    .iter()
                    .map(|row| row.iter().map(|c| vector(c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                StructureAlgebra::new(basis.clone(), table, unit)
            }
            AlgebraSpec::DirectSum { parts } => {
                let built = parts.iter().map(AlgebraSpec::build).collect::<Result<Vec<_>>>()?;
                Ok(StructureAlgebra::direct_sum(&built))
            }
            AlgebraSpec::Tensor { parts } => {
                let mut acc: StructureAlgebra<Rational> = AlgebraSpec::Custom {
                    basis: vec!["1".into()],
                    unit: vec![Coefficient::Integer(1)],
                    table: vec![vec![vec![Coefficient::Integer(1)]]],
                }
                .build()?;
                for part in parts {
                    acc = StructureAlgebra::tensor(&acc, &part.build()?);
                }
                Ok(acc)
            }
        }
    }
}

impl StructureAlgebra<Rational> {
    /// Parses and validates a JSON algebra description.
    pub fn from_json(text: &str) -> Result<Self> {
        AlgebraSpec::from_json(text)?.build()
    }

    /// The `custom` description of this algebra.
    pub fn to_spec(&self) -> AlgebraSpec {
        let coords = |v: &SparseVector<Rational>| {
            v.to_dense().iter().map(|c| Coefficient::Text(c.to_string())).collect()
        };
        AlgebraSpec::Custom {
            basis: self.labels.clone(),
            unit: coords(&self.unit),
            table: self.table.iter().map(|row| row.iter().map(coords).collect()).collect(),
        }
    }
}
