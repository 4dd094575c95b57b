//! Bounded-arity operadic ideals of `As`.
//!
//! An ideal is handled one arity at a time: an [`IdealSlice`] is a canonical row basis of the
//! subspace `I(n) ⊆ As(n)`. Slices arise in three independent ways: from the explicit spanning
//! family of a generator set ([`ideal_slice_spanning`]), from a closure fixpoint under the
//! operad operations ([`ideal_slice_closure`]), and as identity ideals of an algebra
//! ([`identities_slice`]).

pub mod cache;
mod closure;
mod identities;
mod spanning;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{phi, phi_inv, MultilinearPoly};
use crate::linalg::{RowBasis, SparseVector};
use crate::operad::{Mode, OperadElement};
use crate::perm::{factorial, Permutation};
use crate::scalar::Scalar;

pub use closure::{closure_is_stable, ideal_slice_closure, DEFAULT_HEADROOM};
pub use identities::{codimension, identities_slice, min_identity_degree, IdentityTower};
pub use spanning::ideal_slice_spanning;

/// Generators of an operadic ideal, possibly of mixed arities.
#[derive(Clone, PartialEq)]
pub struct GeneratorSet<S> {
    generators: Vec<OperadElement<S>>,
    mode: Mode,
}

impl<S: Scalar> GeneratorSet<S> {
    /// Rejects zero generators, and arity-0 generators in nonunital mode.
    pub fn new(generators: Vec<OperadElement<S>>, mode: Mode) -> Result<Self> {
        if generators.iter().any(|g| g.is_zero()) {
            return Err(Error::ZeroGenerator);
        }
        if mode == Mode::Nonunital && generators.iter().any(|g| g.arity() == 0) {
            return Err(Error::ContractionForbidden);
        }
        Ok(GeneratorSet { generators, mode })
    }

    pub fn empty(mode: Mode) -> Self {
        GeneratorSet { generators: Vec::new(), mode }
    }

    /// Generators `Φ⁻¹(f)` for the nonzero entries of `polys`.
    pub fn from_polys(polys: &[MultilinearPoly<S>], mode: Mode) -> Result<Self> {
        Self::new(polys.iter().filter(|f| !f.is_zero()).map(phi_inv).collect(), mode)
    }

    pub fn generators(&self) -> &[OperadElement<S>] {
        &self.generators
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.generators.iter().map(|g| g.arity()).max()
    }

    /// A copy with `extra` appended.
    pub fn with(&self, extra: OperadElement<S>) -> Result<Self> {
        let mut generators = self.generators.clone();
        generators.push(extra);
        Self::new(generators, self.mode)
    }

    /// Sorted canonical text forms, the content that identifies the set.
    pub fn canonical_texts(&self) -> Vec<String> {
        let mut texts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        texts.sort();
        texts
    }
}

impl<S: Scalar> std::fmt::Debug for GeneratorSet<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratorSet")
            .field("mode", &self.mode)
            .field("generators", &self.generators)
            .finish()
    }
}

/// `I(n)` as a canonical basis of a subspace of `As(n)`.
#[derive(Clone, PartialEq)]
pub struct IdealSlice<S> {
    arity: usize,
    basis: RowBasis<S>,
}

impl<S: Scalar> IdealSlice<S> {
    pub fn new(arity: usize, basis: RowBasis<S>) -> Result<Self> {
        let dim = factorial(arity);
        if basis.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: basis.dim() });
        }
        Ok(IdealSlice { arity, basis })
    }

    pub fn zero(arity: usize) -> Self {
        IdealSlice { arity, basis: RowBasis::new(factorial(arity)) }
    }

    pub fn full(arity: usize) -> Self {
        IdealSlice { arity, basis: RowBasis::full(factorial(arity)) }
    }

    /// Span of the given elements, all of arity `arity`.
    pub fn span(arity: usize, elements: &[OperadElement<S>]) -> Result<Self> {
        let mut basis = RowBasis::new(factorial(arity));
        for e in elements {
            if e.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: e.arity() });
            }
            basis.insert(&e.to_vector())?;
        }
        Ok(IdealSlice { arity, basis })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn basis(&self) -> &RowBasis<S> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    /// `n! − dim`.
    pub fn codim(&self) -> usize {
        self.basis.dim() - self.basis.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rank() == 0
    }

    pub fn contains(&self, theta: &OperadElement<S>) -> Result<bool> {
        if theta.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: theta.arity() });
        }
        self.basis.contains(&theta.to_vector())
    }

    pub fn contains_vector(&self, v: &SparseVector<S>) -> Result<bool> {
        self.basis.contains(v)
    }

    /// The basis rows decoded as elements.
    pub fn elements(&self) -> Vec<OperadElement<S>> {
        self.basis
            .rows()
            .iter()
            .map(|r| OperadElement::from_vector(self.arity, r).expect("row of dimension n!"))
            .collect()
    }

    /// Whether the slice is stable under the right `Sₙ`-action.
    pub fn is_symmetric(&self) -> bool {
        let gens = Permutation::generators(self.arity);
        self.elements().iter().all(|theta| {
            gens.iter().all(|tau| {
                let moved = theta.act(tau).expect("same arity");
                self.basis.contains(&moved.to_vector()).expect("same dimension")
            })
        })
    }

    pub fn is_subspace_of(&self, other: &IdealSlice<S>) -> Result<bool> {
        if other.arity != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        self.basis.is_subspace_of(&other.basis)
    }
}

impl<S: Scalar> std::fmt::Debug for IdealSlice<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdealSlice").field("arity", &self.arity).field("basis", &self.basis).finish()
    }
}

/// Whether `θ` lies in the ideal generated by `G`, at the arity of `θ`.
pub fn membership<S: Scalar>(theta: &OperadElement<S>, g: &GeneratorSet<S>) -> bool {
    ideal_slice_spanning(g, theta.arity())
        .contains(theta)
        .expect("slice of the element's arity")
}

/// `Ψ(F)(n)`: the arity-`n` slice of the operadic ideal generated by `Φ⁻¹(F)`.
pub fn psi_slice<S: Scalar>(f: &[MultilinearPoly<S>], mode: Mode, n: usize) -> Result<IdealSlice<S>> {
    Ok(ideal_slice_spanning(&GeneratorSet::from_polys(f, mode)?, n))
}

/// The degree-`n` multilinear generators `Φₙ(I(n))` of `Ω(I)`.
pub fn omega_slice<S: Scalar>(slice: &IdealSlice<S>) -> Vec<MultilinearPoly<S>> {
    slice.elements().iter().map(phi).collect()
}

/// Whether `G₁` and `G₂` generate the same slices in every arity up to `max_arity`.
pub fn slices_equal<S: Scalar>(g1: &GeneratorSet<S>, g2: &GeneratorSet<S>, max_arity: usize) -> bool {
    (0..=max_arity).all(|n| ideal_slice_spanning(g1, n) == ideal_slice_spanning(g2, n))
}

/// Outcome at one arity of a [`roundtrip_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripArity {
    pub arity: usize,
    pub dim: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub arities: Vec<RoundtripArity>,
    pub passed: bool,
}

/// Checks `Ψ(Ω(I))(n) = I(n)` for `n ≤ N`, where `I` is generated by `G`.
///
/// `Ω(I)` is described by the multilinear generators `Φₘ(I(m))` for every `m ≤ N`; `Ψ` of
/// those is then recomputed from scratch and compared with `I(n)` as canonical bases.
pub fn roundtrip_check<S: Scalar>(g: &GeneratorSet<S>, max_arity: usize) -> RoundtripReport {
    let arities = g.mode().min_arity()..=max_arity;
    let direct: Vec<IdealSlice<S>> = arities.clone().map(|n| ideal_slice_spanning(g, n)).collect();
    let polys: Vec<MultilinearPoly<S>> = direct.iter().flat_map(omega_slice).collect();
    let regenerated = GeneratorSet::from_polys(&polys, g.mode()).expect("nonzero generators");
    let mut report = Vec::new();
    for (n, slice) in arities.zip(&direct) {
        let again = ideal_slice_spanning(&regenerated, n);
        report.push(RoundtripArity { arity: n, dim: slice.dim(), equal: &again == slice });
    }
    let passed = report.iter().all(|a| a.equal);
    RoundtripReport { arities: report, passed }
}

/// First failure found by [`verify_ideal_closure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureViolation {
    pub arity: usize,
    pub operation: String,
    pub element: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub max_arity: usize,
    pub checked: usize,
    pub violation: Option<ClosureViolation>,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that the slices form the truncation of an operadic ideal.
///
/// For every basis element `θ` of arity `m ≤ N`: `θ ∗ τ` for the generators `τ` of `Sₘ`,
/// `θ ∘ᵢ 1₂` and `1₂ ∘ⱼ θ` when `m + 1 ≤ N`, and `θ ∘ᵢ 1₀` in unital mode. Together these
/// generate every composition with basis permutations.
pub fn verify_ideal_closure<S: Scalar>(
    slices: &BTreeMap<usize, IdealSlice<S>>,
    mode: Mode,
    max_arity: usize,
) -> Result<ClosureReport> {
    for n in mode.min_arity()..=max_arity {
        match slices.get(&n) {
            None => return Err(Error::MissingSlice(n)),
            Some(s) if s.arity() != n => {
                return Err(Error::ArityMismatch { expected: n, found: s.arity() })
            }
            Some(_) => {}
        }
    }
    let two = OperadElement::identity(2);
    let nullary = OperadElement::identity(0);
    let mut checked = 0;
    for m in mode.min_arity()..=max_arity {
        for theta in slices[&m].elements() {
            let mut images: Vec<(String, OperadElement<S>)> = Vec::new();
            for tau in Permutation::generators(m) {
                images.push((format!("act {tau}"), theta.act(&tau)?));
            }
            if m + 1 <= max_arity {
                for i in 1..=m {
                    images.push((format!("insert 1_2 at {i}"), theta.partial_compose(i, &two)?));
                }
                for j in 1..=2 {
                    images.push((format!("1_2 at {j}"), two.partial_compose(j, &theta)?));
                }
            }
            if mode == Mode::Unital {
                for i in 1..=m {
                    images.push((format!("contract {i}"), theta.partial_compose(i, &nullary)?));
                }
            }
            for (operation, image) in images {
                checked += 1;
                if !slices[&image.arity()].contains(&image)? {
                    return Ok(ClosureReport {
                        max_arity,
                        checked,
                        violation: Some(ClosureViolation {
                            arity: m,
                            operation,
                            element: theta.to_string(),
                        }),
                    });
                }
            }
        }
    }
    Ok(ClosureReport { max_arity, checked, violation: None })
}
