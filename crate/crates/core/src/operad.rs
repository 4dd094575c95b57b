//! Linear elements of `As(n) = kSₙ` with the operadic compositions and the right action.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::perm::{factorial, Permutation};
use crate::scalar::{scalar_from_digits, Scalar};

/// Whether the arity-0 unit `1₀` is available.
///
/// `Nonunital` models the operad `As'` of nonunital associative algebras: every operation that
/// would substitute `1₀` into a slot is refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    #[default]
    Unital,
    Nonunital,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Unital => "unital",
            Mode::Nonunital => "nonunital",
        }
    }

    /// Smallest arity present in the operad.
    pub fn min_arity(self) -> usize {
        match self {
            Mode::Unital => 0,
            Mode::Nonunital => 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unital" => Ok(Mode::Unital),
            "nonunital" => Ok(Mode::Nonunital),
            other => Err(Error::Parse { pos: 0, message: format!("unknown mode {other:?}") }),
        }
    }
}

/// `θ = Σ c_σ σ`, a finite combination of permutations of one arity.
#[derive(Clone, PartialEq)]
pub struct OperadElement<S> {
    arity: usize,
    terms: BTreeMap<Permutation, S>,
}

impl<S: Scalar> OperadElement<S> {
    pub fn zero(arity: usize) -> Self {
        OperadElement { arity, terms: BTreeMap::new() }
    }

    pub fn basis(sigma: Permutation) -> Self {
        let arity = sigma.arity();
        let mut terms = BTreeMap::new();
        terms.insert(sigma, S::one());
        OperadElement { arity, terms }
    }

    /// `1ₙ` with coefficient one.
    pub fn identity(n: usize) -> Self {
        Self::basis(Permutation::identity(n))
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Permutation, S)>,
    {
        let mut out = OperadElement::zero(arity);
        for (sigma, c) in terms {
            if sigma.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: sigma.arity() });
            }
            out.add_term(sigma, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, sigma: Permutation, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&sigma) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&sigma);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(sigma, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sigma: &Permutation) -> S {
        self.terms.get(sigma).cloned().unwrap_or_else(S::zero)
    }

    /// `Σ c_σ`.
    pub fn coefficient_sum(&self) -> S {
        self.terms.values().fold(S::zero(), |acc, c| acc + c.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = OperadElement::zero(self.arity);
        for (sigma, c) in &self.terms {
            out.add_term(sigma.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let mut out = self.clone();
        for (sigma, c) in &other.terms {
            out.add_term(sigma.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// `θ ∘ (θ₁, …, θₙ)`, the multilinear extension of [`Permutation::block_compose`].
    pub fn full_compose(&self, parts: &[OperadElement<S>]) -> Result<Self> {
        self.full_compose_in(Mode::Unital, parts)
    }

    /// As [`OperadElement::full_compose`], refusing arity-0 parts in nonunital mode.
    pub fn full_compose_in(&self, mode: Mode, parts: &[OperadElement<S>]) -> Result<Self> {
        if self.arity == 0 || parts.len() != self.arity {
            return Err(Error::WrongPartCount { expected: self.arity.max(1), found: parts.len() });
        }
        if mode == Mode::Nonunital && parts.iter().any(|p| p.arity == 0) {
            return Err(Error::ContractionForbidden);
        }
        let total = parts.iter().map(|p| p.arity).sum();
        let mut out = OperadElement::zero(total);
        let part_terms: Vec<Vec<(&Permutation, &S)>> =
            parts.iter().map(|p| p.terms.iter().collect()).collect();
        if part_terms.iter().any(|t| t.is_empty()) {
            return Ok(out);
        }
        let mut choice = vec![0usize; parts.len()];
        let mut chosen: Vec<Permutation> =
            part_terms.iter().map(|t| t[0].0.clone()).collect();
        loop {
            let mut coeff = S::one();
            for (k, &c) in choice.iter().enumerate() {
                coeff = coeff * part_terms[k][c].1.clone();
            }
            for (sigma, c) in &self.terms {
                let composed = sigma.block_compose(&chosen)?;
                out.add_term(composed, c.clone() * coeff.clone());
            }
            // odometer over the term lists
            let mut k = parts.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < part_terms[k].len() {
                    chosen[k] = part_terms[k][choice[k]].0.clone();
                    break;
                }
                choice[k] = 0;
                chosen[k] = part_terms[k][0].0.clone();
            }
        }
    }

    /// `μ ∘ᵢ ν = μ ∘ (1₁, …, ν, …, 1₁)` with `ν` in the 1-based slot `i`.
    pub fn partial_compose(&self, slot: usize, inner: &OperadElement<S>) -> Result<Self> {
        self.partial_compose_in(Mode::Unital, slot, inner)
    }

    pub fn partial_compose_in(
        &self,
        mode: Mode,
        slot: usize,
        inner: &OperadElement<S>,
    ) -> Result<Self> {
        if slot == 0 || slot > self.arity {
            return Err(Error::SlotOutOfRange { slot, arity: self.arity });
        }
        if mode == Mode::Nonunital && inner.arity == 0 {
            return Err(Error::ContractionForbidden);
        }
        let m = self.arity;
        let n = inner.arity;
        let mut out = OperadElement::zero(m + n - 1);
        // With unit parts elsewhere the block formula reduces to relabelling each term.
        for (sigma, c) in &self.terms {
            for (nu, d) in &inner.terms {
                let mut seq = Vec::with_capacity(m + n - 1);
                for &x in sigma.seq() {
                    if x < slot {
                        seq.push(x);
                    } else if x == slot {
                        seq.extend(nu.seq().iter().map(|y| y + slot - 1));
                    } else {
                        seq.push(x + n - 1);
                    }
                }
                let composed = Permutation::from_seq(seq).expect("relabelled permutation");
                out.add_term(composed, c.clone() * d.clone());
            }
        }
        Ok(out)
    }

    /// Right action `θ ∗ τ`: every basis term `σ` becomes `στ`.
    pub fn act(&self, tau: &Permutation) -> Result<Self> {
        if tau.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: tau.arity() });
        }
        let mut out = OperadElement::zero(self.arity);
        for (sigma, c) in &self.terms {
            out.add_term(sigma.multiply(tau)?, c.clone());
        }
        Ok(out)
    }

    /// Coordinates in the lexicographic permutation basis, dimension `n!`.
    pub fn to_vector(&self) -> SparseVector<S> {
        let dim = factorial(self.arity);
        SparseVector::from_entries(dim, self.terms.iter().map(|(s, c)| (s.rank(), c.clone())))
            .expect("ranks are below n!")
    }

    pub fn from_vector(arity: usize, v: &SparseVector<S>) -> Result<Self> {
        let dim = factorial(arity);
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
        }
        let terms = v
            .entries()
            .iter()
            .map(|(i, c)| (Permutation::unrank(arity, *i), c.clone()))
            .collect();
        Ok(OperadElement { arity, terms })
    }

    /// `Σ_σ sgn(σ) σ`.
    pub fn standard_polynomial(n: usize) -> Self {
        let one = S::one();
        let terms = Permutation::all(n)
            .map(|s| {
                let c = if s.sign() > 0 { one.clone() } else { -one.clone() };
                (s, c)
            })
            .collect();
        OperadElement { arity: n, terms }
    }
}

/// See [`OperadElement::standard_polynomial`].
pub fn standard_polynomial_element<S: Scalar>(n: usize) -> OperadElement<S> {
    OperadElement::standard_polynomial(n)
}

/// Writes `c` with an explicit leading sign handled by the caller.
pub(crate) fn write_signed_terms<S: Scalar, T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (T, S)>,
    with_factor: bool,
) -> fmt::Result {
    let mut first = true;
    for (body, c) in terms {
        let negative = c.to_string().starts_with('-');
        let magnitude = if negative { -c } else { c };
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if with_factor {
            write!(f, "{magnitude}*{body}")?;
        } else {
            write!(f, "{magnitude}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for OperadElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(f, self.terms.iter().map(|(s, c)| (s, c.clone())), true)
    }
}

impl<S: Scalar> fmt::Debug for OperadElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperadElement[{}]({})", self.arity, self)
    }
}

/// Parses the textual form `"1*(1,2) - 1*(2,1)"`.
///
/// Coefficients are optional (`"(2,1)"`), may be rational (`"3/2*(1,2)"`) and a leading
/// minus is allowed. The zero element has no arity of its own and is rejected.
pub fn parse_element<S: Scalar>(text: &str) -> Result<OperadElement<S>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, message: &str| Error::Parse { pos, message: message.to_string() };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let digits = |pos: &mut usize| -> Option<String> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| text[start..*pos].to_string())
    };
    let mut terms: Vec<(Permutation, S)> = Vec::new();
    skip_ws(&mut pos);
    let mut negative = false;
    if pos < bytes.len() && bytes[pos] == b'-' {
        negative = true;
        pos += 1;
    }
    loop {
        skip_ws(&mut pos);
        let mut coeff = S::one();
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let num = digits(&mut pos).expect("digit present");
            coeff = scalar_from_digits(&num).ok_or_else(|| err(pos, "invalid coefficient"))?;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                skip_ws(&mut pos);
                let den = digits(&mut pos).ok_or_else(|| err(pos, "expected denominator"))?;
                let d: S =
                    scalar_from_digits(&den).ok_or_else(|| err(pos, "invalid denominator"))?;
                if d.is_zero() {
                    return Err(err(pos, "zero denominator"));
                }
                coeff = coeff / d;
            }
            skip_ws(&mut pos);
            if pos >= bytes.len() || bytes[pos] != b'*' {
                return Err(err(pos, "expected '*' after coefficient"));
            }
            pos += 1;
            skip_ws(&mut pos);
        }
        if pos >= bytes.len() || bytes[pos] != b'(' {
            return Err(err(pos, "expected '('"));
        }
        let close = text[pos..].find(')').ok_or_else(|| err(pos, "unclosed '('"))? + pos;
        let sigma: Permutation = text[pos..=close]
            .parse()
            .map_err(|e: Error| err(pos, &e.to_string()))?;
        pos = close + 1;
        if negative {
            coeff = -coeff;
        }
        terms.push((sigma, coeff));
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        negative = match bytes[pos] {
            b'+' => false,
            b'-' => true,
            _ => return Err(err(pos, "expected '+' or '-'")),
        };
        pos += 1;
    }
    let arity = terms[0].0.arity();
    OperadElement::from_terms(arity, terms)
}

impl<S: Scalar> std::str::FromStr for OperadElement<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_element(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type E = OperadElement<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn p(seq: &[usize]) -> Permutation {
        Permutation::from_seq(seq.to_vec()).unwrap()
    }

    fn e(seq: &[usize]) -> E {
        E::basis(p(seq))
    }

    pub(crate) fn arb_element(arity: usize) -> impl Strategy<Value = E> {
        prop::collection::vec(((0..factorial(arity)), -3i64..4), 0..5).prop_map(move |terms| {
            E::from_terms(
                arity,
                terms.into_iter().map(|(r, c)| (Permutation::unrank(arity, r), q(c))),
            )
            .unwrap()
        })
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        (0..factorial(n)).prop_map(move |r| Permutation::unrank(n, r))
    }

    #[test]
    fn full_compose_examples() {
        let one1 = E::identity(1);
        assert_eq!(E::identity(2).full_compose(&[one1.clone(), one1.clone()]).unwrap(), E::identity(2));
        let got = E::identity(2)
            .scale(&q(2))
            .full_compose(&[one1.scale(&q(3)), one1.clone()])
            .unwrap();
        assert_eq!(got, E::identity(2).scale(&q(6)));
        let got = e(&[2, 1]).full_compose(&[e(&[2, 1]), one1]).unwrap();
        assert_eq!(got, e(&[3, 2, 1]));
        assert!(matches!(
            E::identity(2).full_compose(&[E::identity(1)]),
            Err(Error::WrongPartCount { .. })
        ));
    }

    #[test]
    fn full_compose_is_bilinear_in_parts() {
        let a: E = "1*(1,2) - 2*(2,1)".parse().unwrap();
        let b: E = "3*(2,1)".parse().unwrap();
        let c: E = "1*(1,2) + 1*(2,1)".parse().unwrap();
        let lhs = a.full_compose(&[b.add(&c).unwrap(), E::identity(1)]).unwrap();
        let rhs = a
            .full_compose(&[b, E::identity(1)])
            .unwrap()
            .add(&a.full_compose(&[c, E::identity(1)]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_compose_examples() {
        assert_eq!(E::identity(2).partial_compose(1, &e(&[2, 1])).unwrap(), e(&[2, 1, 3]));
        assert_eq!(e(&[2, 1]).partial_compose(1, &E::identity(0)).unwrap(), E::identity(1));
        assert!(matches!(
            E::identity(2).partial_compose(3, &E::identity(1)),
            Err(Error::SlotOutOfRange { slot: 3, arity: 2 })
        ));
        assert!(matches!(
            E::identity(2).partial_compose_in(Mode::Nonunital, 1, &E::identity(0)),
            Err(Error::ContractionForbidden)
        ));
    }

    #[test]
    fn act_examples() {
        let theta: E = "2*(1,2,3) - 1*(3,1,2)".parse().unwrap();
        assert_eq!(theta.act(&Permutation::identity(3)).unwrap(), theta);
        assert_eq!(E::identity(2).act(&p(&[2, 1])).unwrap(), e(&[2, 1]));
        assert!(theta.act(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn vector_examples() {
        let z = E::zero(2).to_vector();
        assert_eq!(z.dim(), 2);
        assert!(z.is_zero());
        assert_eq!(E::identity(2).to_vector(), SparseVector::unit(2, 0));
        assert!(E::from_vector(3, &SparseVector::zero(5)).is_err());
    }

    #[test]
    fn standard_polynomial_examples() {
        assert_eq!(E::standard_polynomial(1), E::identity(1));
        let st2: E = "1*(1,2) - 1*(2,1)".parse().unwrap();
        assert_eq!(E::standard_polynomial(2), st2);
        let st3 = E::standard_polynomial(3);
        assert_eq!(st3.len(), 6);
        // even: (1,2,3) (2,3,1) (3,1,2); odd: (1,3,2) (2,1,3) (3,2,1)
        for (seq, sign) in [
            ([1, 2, 3], 1),
            ([2, 3, 1], 1),
            ([3, 1, 2], 1),
            ([1, 3, 2], -1),
            ([2, 1, 3], -1),
            ([3, 2, 1], -1),
        ] {
            assert_eq!(st3.coefficient(&p(&seq)), q(sign));
        }
    }

    #[test]
    fn text_round_trip() {
        let theta: E = "1*(1,2) - 1*(2,1)".parse().unwrap();
        assert_eq!(theta.to_string(), "1*(1,2) - 1*(2,1)");
        let theta: E = "-3/2*(2,1) + (1,2)".parse().unwrap();
        assert_eq!(theta.to_string(), "1*(1,2) - 3/2*(2,1)");
        assert_eq!("1*()".parse::<E>().unwrap(), E::identity(0));
        assert!("1*(1,2) + 1*(1,2,3)".parse::<E>().is_err());
        assert!("2 (1,2)".parse::<E>().is_err());
    }

    /// Exhaustive checks of the operad axioms on basis elements of arity ≤ 3.
    #[test]
    fn axioms_exhaustive_small() {
        let basis: Vec<E> = (0..=3).flat_map(Permutation::all).map(E::basis).collect();
        for lambda in basis.iter().filter(|x| x.arity() >= 1) {
            for mu in &basis {
                for nu in &basis {
                    let l = lambda.arity();
                    let m = mu.arity();
                    for i in 1..=l {
                        // sequential
                        for j in 1..=m {
                            let lhs = lambda
                                .partial_compose(i, mu)
                                .unwrap()
                                .partial_compose(i + j - 1, nu)
                                .unwrap();
                            let rhs = lambda.partial_compose(i, &mu.partial_compose(j, nu).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                        // parallel
                        for j in i + 1..=l {
                            let lhs = lambda
                                .partial_compose(i, mu)
                                .unwrap()
                                .partial_compose(j + m - 1, nu)
                                .unwrap();
                            let rhs = lambda
                                .partial_compose(j, nu)
                                .unwrap()
                                .partial_compose(i, mu)
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partial_matches_full_with_units() {
        for mu in (1..=3).flat_map(Permutation::all).map(E::basis) {
            for nu in (0..=3).flat_map(Permutation::all).map(E::basis) {
                for i in 1..=mu.arity() {
                    let mut parts = vec![E::identity(1); mu.arity()];
                    parts[i - 1] = nu.clone();
                    assert_eq!(mu.partial_compose(i, &nu).unwrap(), mu.full_compose(&parts).unwrap());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unit_laws(theta in (1usize..5).prop_flat_map(arb_element), slot in 1usize..5) {
            prop_assert_eq!(E::identity(1).partial_compose(1, &theta).unwrap(), theta.clone());
            let i = (slot - 1) % theta.arity() + 1;
            prop_assert_eq!(theta.partial_compose(i, &E::identity(1)).unwrap(), theta);
        }

        #[test]
        fn action_axiom(
            (theta, t1, t2) in (0usize..5).prop_flat_map(|n| (arb_element(n), arb_perm(n), arb_perm(n)))
        ) {
            prop_assert_eq!(
                theta.act(&t1).unwrap().act(&t2).unwrap(),
                theta.act(&t1.multiply(&t2).unwrap()).unwrap()
            );
            prop_assert_eq!(theta.act(&Permutation::identity(theta.arity())).unwrap(), theta);
        }

        #[test]
        fn vector_round_trip(theta in (0usize..6).prop_flat_map(arb_element)) {
            prop_assert_eq!(E::from_vector(theta.arity(), &theta.to_vector()).unwrap(), theta);
        }

        #[test]
        fn text_round_trip_random(theta in (0usize..5).prop_flat_map(arb_element)) {
            prop_assume!(!theta.is_zero());
            let parsed: E = theta.to_string().parse().unwrap();
            prop_assert_eq!(parsed, theta);
        }
    }
}
