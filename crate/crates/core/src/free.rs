//! The free algebra `k⟨x₁, x₂, …⟩`, its multilinear part `Vₙ`, and the isomorphism `Φₙ`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::operad::OperadElement;
use crate::perm::Permutation;
use crate::scalar::{scalar_from_digits, Scalar};

/// A word `x_{i₁}⋯x_{iₖ}`; the empty word is the unit monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct NcMonomial(pub Vec<usize>);

impl NcMonomial {
    pub fn one() -> Self {
        NcMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    fn concat(&self, other: &NcMonomial) -> NcMonomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        NcMonomial(w)
    }
}

impl fmt::Display for NcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq)]
pub struct NcPoly<S> {
    terms: BTreeMap<NcMonomial, S>,
}

impl<S: Scalar> NcPoly<S> {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(NcMonomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(NcMonomial(vec![i]), S::one())
    }

    pub fn monomial(word: NcMonomial, c: S) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (NcMonomial, S)>>(terms: I) -> Self {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    fn add_term(&mut self, word: NcMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NcMonomial, &S)> {
        self.terms.iter()
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

    pub fn coefficient(&self, word: &NcMonomial) -> S {
        self.terms.get(word).cloned().unwrap_or_else(S::zero)
    }

    /// Maximum word length; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(NcMonomial::degree).max().unwrap_or(0)
    }

    /// Largest variable index occurring, 0 if none.
    pub fn max_variable(&self) -> usize {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, factor: &S) -> Self {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone() * factor.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = NcPoly::one();
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Replaces each variable `x_i` by `assign(i)`.
    pub fn substitute(&self, assign: impl Fn(usize) -> NcPoly<S>) -> Self {
        let mut cache: BTreeMap<usize, NcPoly<S>> = BTreeMap::new();
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut term = NcPoly::constant(c.clone());
            for &x in &w.0 {
                let image = cache.entry(x).or_insert_with(|| assign(x));
                term = term.mul(image);
            }
            out = out.add(&term);
        }
        out
    }

    /// `Some(n)` when every word is a permutation of `1..=n`.
    pub fn multilinear_arity(&self) -> Option<usize> {
        let mut words = self.terms.keys();
        let n = words.next()?.degree();
        let ok = self.terms.keys().all(|w| {
            w.degree() == n && Permutation::from_seq(w.0.clone()).is_ok()
        });
        ok.then_some(n)
    }
}

impl<S: Scalar> fmt::Display for NcPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // constants carry their coefficient alone, other terms print as `c*x..`
        let mut first = true;
        for (w, c) in &self.terms {
            let negative = c.to_string().starts_with('-');
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if w.0.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*{w}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for NcPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

impl<S: Scalar> std::str::FromStr for NcPoly<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// An element of `Vₙ`: every word is a permutation of `1..=n`.
#[derive(Clone, PartialEq)]
pub struct MultilinearPoly<S> {
    arity: usize,
    poly: NcPoly<S>,
}

impl<S: Scalar> MultilinearPoly<S> {
    pub fn zero(arity: usize) -> Self {
        MultilinearPoly { arity, poly: NcPoly::zero() }
    }

    /// Checks multilinearity; the zero polynomial needs [`MultilinearPoly::with_arity`].
    pub fn new(poly: NcPoly<S>) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::NotMultilinear(
                "the zero polynomial has no arity; use an explicit arity".into(),
            ));
        }
        let arity = poly
            .multilinear_arity()
            .ok_or_else(|| Error::NotMultilinear(poly.to_string()))?;
        Ok(MultilinearPoly { arity, poly })
    }

    pub fn with_arity(poly: NcPoly<S>, arity: usize) -> Result<Self> {
        if poly.is_zero() {
            return Ok(MultilinearPoly::zero(arity));
        }
        let m = MultilinearPoly::new(poly)?;
        if m.arity != arity {
            return Err(Error::ArityMismatch { expected: arity, found: m.arity });
        }
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn poly(&self) -> &NcPoly<S> {
        &self.poly
    }

    pub fn into_poly(self) -> NcPoly<S> {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl<S: Scalar> fmt::Display for MultilinearPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl<S: Scalar> fmt::Debug for MultilinearPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearPoly[{}]({})", self.arity, self.poly)
    }
}

/// `Φₙ`: `σ ↦ x_{σ⁻¹(1)}⋯x_{σ⁻¹(n)}`.
pub fn phi<S: Scalar>(theta: &OperadElement<S>) -> MultilinearPoly<S> {
    let poly = NcPoly::from_terms(
        theta.terms().map(|(s, c)| (NcMonomial(s.seq().to_vec()), c.clone())),
    );
    MultilinearPoly { arity: theta.arity(), poly }
}

/// `Φₙ⁻¹`.
pub fn phi_inv<S: Scalar>(f: &MultilinearPoly<S>) -> OperadElement<S> {
    OperadElement::from_terms(
        f.arity,
        f.poly.terms().map(|(w, c)| {
            (Permutation::from_seq(w.0.clone()).expect("checked multilinear"), c.clone())
        }),
    )
    .expect("arity checked on construction")
}

/// `(x_{i₁}⋯x_{iₙ}) ∗ τ = x_{τ⁻¹(i₁)}⋯x_{τ⁻¹(iₙ)}`.
pub fn act_poly<S: Scalar>(f: &MultilinearPoly<S>, tau: &Permutation) -> Result<MultilinearPoly<S>> {
    if tau.arity() != f.arity {
        return Err(Error::ArityMismatch { expected: f.arity, found: tau.arity() });
    }
    let poly = NcPoly::from_terms(f.poly.terms().map(|(w, c)| {
        (NcMonomial(w.0.iter().map(|&i| tau.apply_inverse(i)).collect()), c.clone())
    }));
    Ok(MultilinearPoly { arity: f.arity, poly })
}

/// Replaces `f` by multilinear consequences of degree at most `deg f`.
///
/// `f` is split into multihomogeneous components; in each component a variable of degree
/// `d > 1` is replaced by `d` fresh variables and the part linear in each of them is kept.
/// Variables are then renumbered `1..=n` in order of appearance in the lexicographically
/// first word of the component.
pub fn multilinearize<S: Scalar>(f: &NcPoly<S>) -> Result<Vec<MultilinearPoly<S>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut components: BTreeMap<Vec<(usize, usize)>, Vec<(&NcMonomial, &S)>> = BTreeMap::new();
    for (w, c) in f.terms() {
        components.entry(multidegree(w)).or_default().push((w, c));
    }
    let mut out = Vec::with_capacity(components.len());
    for terms in components.values() {
        out.push(polarize(terms));
    }
    Ok(out)
}

fn multidegree(w: &NcMonomial) -> Vec<(usize, usize)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &w.0 {
        *counts.entry(x).or_default() += 1;
    }
    counts.into_iter().collect()
}

fn polarize<S: Scalar>(terms: &[(&NcMonomial, &S)]) -> MultilinearPoly<S> {
    // terms come from a BTreeMap, so the first is the lexicographically smallest word
    let first = terms[0].0;
    let n = first.degree();
    // new names for the copies of each variable: positions of its occurrences in `first`
    let mut copies: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pos, &x) in first.0.iter().enumerate() {
        copies.entry(x).or_default().push(pos + 1);
    }
    let mut poly = NcPoly::zero();
    for &(w, c) in terms {
        let mut occurrences: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pos, &x) in w.0.iter().enumerate() {
            occurrences.entry(x).or_default().push(pos);
        }
        let vars: Vec<usize> = occurrences.keys().copied().collect();
        let mut word = vec![0usize; n];
        assign_copies(&vars, 0, &occurrences, &copies, &mut word, &mut |word| {
            poly.add_term(NcMonomial(word.to_vec()), c.clone());
        });
    }
    MultilinearPoly { arity: n, poly }
}

fn assign_copies(
    vars: &[usize],
    k: usize,
    occurrences: &BTreeMap<usize, Vec<usize>>,
    copies: &BTreeMap<usize, Vec<usize>>,
    word: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if k == vars.len() {
        emit(word);
        return;
    }
    let v = vars[k];
    let positions = &occurrences[&v];
    let names = &copies[&v];
    for arrangement in Permutation::all(names.len()) {
        for (slot, &pos) in positions.iter().enumerate() {
            word[pos] = names[arrangement.seq()[slot] - 1];
        }
        assign_copies(vars, k + 1, occurrences, copies, word, emit);
    }
}

/// Parses a polynomial.
///
/// ```text
/// poly   := ['-'] term { ('+'|'-') term }
/// term   := factor { '*' factor }
/// factor := atom [ '^' nat ]
/// atom   := rational | variable | '(' poly ')'
/// ```
pub fn parse<S: Scalar>(text: &str) -> Result<NcPoly<S>> {
    let mut parser = Parser { text, bytes: text.as_bytes(), pos: 0 };
    let poly = parser.poly()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (start < self.pos).then(|| &self.text[start..self.pos])
    }

    fn poly<S: Scalar>(&mut self) -> Result<NcPoly<S>> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let first = self.term::<S>()?;
        let mut acc = if negative { first.scale(&-S::one()) } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<NcPoly<S>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor<S: Scalar>(&mut self) -> Result<NcPoly<S>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.digits().map(str::to_owned).ok_or_else(|| self.error("expected exponent"))?;
            let exp: u32 = exp.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom<S: Scalar>(&mut self) -> Result<NcPoly<S>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let index: usize = self.text[start..self.pos]
                    .parse()
                    .map_err(|_| self.error("variable index too large"))?;
                if index == 0 {
                    self.pos = start;
                    return Err(self.error("variable index must be positive"));
                }
                Ok(NcPoly::var(index))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().expect("digit present").to_string();
                let mut value: S =
                    scalar_from_digits(&num).ok_or_else(|| self.error("invalid integer"))?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.digits().map(str::to_owned).ok_or_else(|| self.error("expected denominator"))?;
                    let d: S =
                        scalar_from_digits(&den).ok_or_else(|| self.error("invalid denominator"))?;
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value = value / d;
                }
                Ok(NcPoly::constant(value))
            }
            Some(_) => Err(self.error("expected a number, a variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Splits a list of polynomials separated by `;`, ignoring empty entries.
pub fn parse_list<S: Scalar>(text: &str) -> Result<Vec<NcPoly<S>>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        if !chunk.trim().is_empty() {
            out.push(parse(chunk).map_err(|e| match e {
                Error::Parse { pos, message } => Error::Parse { pos: pos + offset, message },
                other => other,
            })?);
        }
        offset += chunk.len() + 1;
    }
    Ok(out)
}
