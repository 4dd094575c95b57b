//! Identity ideals `I_A(n) = Φₙ⁻¹(Vₙ(A))` of finite-dimensional algebras.
//!
//! `I_A(n)` is the common kernel of the functionals `θ ↦ (γₙ(θ)(b_{t₁}, …, b_{tₙ}))_c` over
//! basis tuples `t` and output coordinates `c`. Two reductions keep the tuple count small:
//!
//! * permuting a tuple moves its functional by the right `Sₙ`-action, so only non-decreasing
//!   tuples are evaluated and the span of their functionals is closed under `Sₙ`;
//! * when the unit is a basis vector `b_u`, a tuple with `tᵢ = u` evaluates `θ ∘ᵢ 1₀` on the
//!   remaining entries, which is handled by requiring `θ ∘ᵢ 1₀ ∈ I_A(n−1)`.

use std::collections::BTreeMap;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{RowBasis, SparseVector};
use crate::operad::OperadElement;
use crate::perm::{factorial, Permutation};
use crate::scalar::Scalar;

use super::IdealSlice;

/// Functional spans `I_A(n)^⊥` for `n = 0, 1, …`, computed bottom-up and kept for reuse.
pub struct IdentityTower<'a, S> {
    algebra: &'a StructureAlgebra<S>,
    budget: u64,
    letters: Vec<usize>,
    unit_is_basis: bool,
    levels: Vec<RowBasis<S>>,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl<'a, S: Scalar> IdentityTower<'a, S> {
    /// `budget` bounds the non-decreasing tuples evaluated at any one arity.
    pub fn new(algebra: &'a StructureAlgebra<S>, budget: u64) -> Self {
        let unit = algebra.unit_basis_index();
        let letters = (0..algebra.dim()).filter(|&i| Some(i) != unit).collect();
        IdentityTower { algebra, budget, letters, unit_is_basis: unit.is_some(), levels: Vec::new() }
    }

    /// Number of tuples evaluated at arity `n`.
    pub fn required(&self, n: usize) -> u128 {
        let d = self.letters.len() as u128;
        if n == 0 || d == 0 {
            return 0;
        }
        binomial(d + n as u128 - 1, n as u128)
    }

    /// Span of the evaluation functionals at arity `n`.
    pub fn functionals(&mut self, n: usize) -> Result<&RowBasis<S>> {
        for m in self.levels.len()..=n {
            let required = self.required(m);
            if required > self.budget as u128 {
                return Err(Error::BudgetExceeded { required, budget: self.budget });
            }
            let level = self.compute_level(m);
            self.levels.push(level);
        }
        Ok(&self.levels[n])
    }

    pub fn slice(&mut self, n: usize) -> Result<IdealSlice<S>> {
        let kernel = self.functionals(n)?.annihilator();
        IdealSlice::new(n, kernel)
    }

    /// `n! − dim I_A(n)`.
    pub fn codimension(&mut self, n: usize) -> Result<usize> {
        Ok(self.functionals(n)?.rank())
    }

    fn compute_level(&self, n: usize) -> RowBasis<S> {
        let dim = factorial(n);
        if n == 0 {
            // γ₀(c·1₀) = c·1
            return if self.algebra.unit().is_zero() { RowBasis::new(1) } else { RowBasis::full(1) };
        }
        let mut rows = RowBasis::new(dim);
        let mut fresh: Vec<SparseVector<S>> = Vec::new();
        let add = |rows: &mut RowBasis<S>, v: SparseVector<S>, fresh: &mut Vec<_>| {
            if !rows.is_full() && rows.insert(&v).expect("dimension n!") {
                fresh.push(v);
            }
        };
        if self.unit_is_basis {
            let below = &self.levels[n - 1];
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            for i in 1..=n {
                let targets: Vec<usize> = perms.iter().map(|s| delete_letter(s, i).rank()).collect();
                for phi in below.rows() {
                    let dense = phi.to_dense();
                    let row = SparseVector::from_dense(
                        targets.iter().map(|&r| dense[r].clone()).collect(),
                    );
                    add(&mut rows, row, &mut fresh);
                }
            }
        }
        let d = self.letters.len();
        if d > 0 {
            let mut tuple = vec![0usize; n];
            'tuples: loop {
                if rows.is_full() {
                    break;
                }
                let letters: Vec<usize> = tuple.iter().map(|&k| self.letters[k]).collect();
                for row in self.tuple_functionals(&letters) {
                    add(&mut rows, row, &mut fresh);
                }
                // next non-decreasing tuple
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'tuples;
                    }
                    k -= 1;
                    if tuple[k] + 1 < d {
                        let v = tuple[k] + 1;
                        for x in &mut tuple[k..] {
                            *x = v;
                        }
                        break;
                    }
                }
            }
        }
        let gens = Permutation::generators(n);
        while let Some(v) = fresh.pop() {
            if rows.is_full() {
                break;
            }
            let element = OperadElement::from_vector(n, &v).expect("dimension n!");
            for tau in &gens {
                add(&mut rows, element.act(tau).expect("arity n").to_vector(), &mut fresh);
            }
        }
        rows
    }

    /// One functional per output coordinate: `σ ↦ (b_{t[σ⁻¹(1)]} ⋯ b_{t[σ⁻¹(n)]})_c`.
    fn tuple_functionals(&self, tuple: &[usize]) -> Vec<SparseVector<S>> {
        let n = tuple.len();
        let mut by_coordinate: BTreeMap<usize, Vec<(usize, S)>> = BTreeMap::new();
        let weights: Vec<usize> = (0..n).map(|k| factorial(n - 1 - k)).collect();
        let mut search = Search { algebra: self.algebra, tuple, weights: &weights, out: &mut by_coordinate };
        search.descend(0, 0, None, 0);
        let dim = factorial(n);
        by_coordinate
            .into_values()
            .map(|entries| SparseVector::from_entries(dim, entries).expect("ranks below n!"))
            .collect()
    }
}

/// Depth-first walk over orderings in lexicographic order, sharing prefix products and
/// skipping every ordering below a vanishing prefix.
struct Search<'s, S> {
    algebra: &'s StructureAlgebra<S>,
    tuple: &'s [usize],
    weights: &'s [usize],
    out: &'s mut BTreeMap<usize, Vec<(usize, S)>>,
}

impl<S: Scalar> Search<'_, S> {
    fn descend(&mut self, depth: usize, used: u64, prefix: Option<&SparseVector<S>>, rank: usize) {
        let n = self.tuple.len();
        if depth == n {
            let product = prefix.expect("n ≥ 1");
            for (c, x) in product.entries() {
                self.out.entry(*c).or_default().push((rank, x.clone()));
            }
            return;
        }
        let mut smaller_unused = 0;
        for pos in 0..n {
            if used >> pos & 1 == 1 {
                continue;
            }
            let letter = self.tuple[pos];
            let next = match prefix {
                None => SparseVector::unit(self.algebra.dim(), letter),
                Some(p) => self.algebra.mul_right_basis(p, letter),
            };
            if !next.is_zero() {
                let r = rank + smaller_unused * self.weights[depth];
                self.descend(depth + 1, used | 1 << pos, Some(&next), r);
            }
            smaller_unused += 1;
        }
    }
}

/// `σ ∘ᵢ 1₀`: the letter `i` removed and larger letters shifted down.
fn delete_letter(sigma: &Permutation, i: usize) -> Permutation {
    let seq = sigma
        .seq()
        .iter()
        .filter(|&&x| x != i)
        .map(|&x| if x > i { x - 1 } else { x })
        .collect();
    Permutation::from_seq(seq).expect("deletion keeps a permutation")
}

/// `I_A(n)`: all `θ ∈ As(n)` with `γₙ(θ) = 0` on `A`.
pub fn identities_slice<S: Scalar>(
    algebra: &StructureAlgebra<S>,
    n: usize,
    budget: u64,
) -> Result<IdealSlice<S>> {
    IdentityTower::new(algebra, budget).slice(n)
}

/// `cₙ(A) = n! − dim I_A(n)`.
pub fn codimension<S: Scalar>(algebra: &StructureAlgebra<S>, n: usize, budget: u64) -> Result<usize> {
    IdentityTower::new(algebra, budget).codimension(n)
}

/// Least `n ≤ max_n` with a nonzero multilinear identity, if any.
pub fn min_identity_degree<S: Scalar>(
    algebra: &StructureAlgebra<S>,
    max_n: usize,
    budget: u64,
) -> Result<Option<usize>> {
    let mut tower = IdentityTower::new(algebra, budget);
    for n in 1..=max_n {
        if tower.codimension(n)? < factorial(n) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{grassmann_algebra, is_identity, matrix_algebra, DEFAULT_BUDGET};
    use crate::free::{parse, phi, MultilinearPoly};
    use crate::operad::parse_element;
    use crate::scalar::Rational;
    use num_traits::Zero;

    type A = StructureAlgebra<Rational>;
    type E = OperadElement<Rational>;

    /// Kernel of the full evaluation matrix over every basis tuple, no reductions.
    fn brute_force_slice(a: &A, n: usize) -> IdealSlice<Rational> {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let mut rows = Vec::new();
        let total = a.dim().pow(n as u32);
        for code in 0..total {
            let mut t = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                t.push(c % a.dim());
                c /= a.dim();
            }
            for coord in 0..a.dim() {
                let values = perms
                    .iter()
                    .map(|s| a.evaluate_on_basis(&E::basis(s.clone()), &t).get(coord))
                    .collect();
                rows.push(SparseVector::from_dense(values));
            }
        }
        IdealSlice::new(n, crate::linalg::kernel_basis(&rows, factorial(n)).unwrap()).unwrap()
    }

    #[test]
    fn commutative_field() {
        let k: A = matrix_algebra(1).unwrap();
        for n in 1..=5 {
            let slice = identities_slice(&k, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(slice.dim(), factorial(n) - 1);
            assert!(slice.elements().iter().all(|e| e.coefficient_sum().is_zero()));
        }
        assert_eq!(identities_slice(&k, 0, DEFAULT_BUDGET).unwrap().dim(), 0);
    }

    #[test]
    fn matrices_have_no_identities_below_four() {
        let m2: A = matrix_algebra(2).unwrap();
        for n in 0..=3 {
            assert!(identities_slice(&m2, n, DEFAULT_BUDGET).unwrap().is_zero());
        }
        let i4 = identities_slice(&m2, 4, DEFAULT_BUDGET).unwrap();
        assert!(i4.contains(&E::standard_polynomial(4)).unwrap());
        assert_eq!(codimension(&m2, 2, DEFAULT_BUDGET).unwrap(), 2);
    }

    #[test]
    fn grassmann_triple_commutator() {
        let e4: A = grassmann_algebra(4).unwrap();
        let triple = MultilinearPoly::new(
            parse::<Rational>("(x1*x2 - x2*x1)*x3 - x3*(x1*x2 - x2*x1)").unwrap(),
        )
        .unwrap();
        let slice = identities_slice(&e4, 3, DEFAULT_BUDGET).unwrap();
        assert!(slice.contains(&crate::free::phi_inv(&triple)).unwrap());
    }

    #[test]
    fn grassmann_codimensions() {
        let e4: A = grassmann_algebra(4).unwrap();
        let mut tower = IdentityTower::new(&e4, DEFAULT_BUDGET);
        let codims: Vec<_> = (1..=4).map(|n| tower.codimension(n).unwrap()).collect();
        assert_eq!(codims, vec![1, 2, 4, 8]);
    }

    #[test]
    fn min_degree_examples() {
        let k: A = matrix_algebra(1).unwrap();
        assert_eq!(min_identity_degree(&k, 5, DEFAULT_BUDGET).unwrap(), Some(2));
        let m2: A = matrix_algebra(2).unwrap();
        assert_eq!(min_identity_degree(&m2, 5, DEFAULT_BUDGET).unwrap(), Some(4));
        assert_eq!(min_identity_degree(&m2, 3, DEFAULT_BUDGET).unwrap(), None);
        let e4: A = grassmann_algebra(4).unwrap();
        assert_eq!(min_identity_degree(&e4, 5, DEFAULT_BUDGET).unwrap(), Some(3));
    }

    #[test]
    fn budget_is_enforced() {
        let e4: A = grassmann_algebra(4).unwrap();
        // 15 non-unit basis vectors: C(17, 3) = 680 sorted triples
        assert!(matches!(
            identities_slice(&e4, 3, 679),
            Err(Error::BudgetExceeded { required: 680, budget: 679 })
        ));
        assert!(identities_slice(&e4, 3, 680).is_ok());
    }

    #[test]
    fn matches_brute_force() {
        let algebras: Vec<A> = vec![
            matrix_algebra(1).unwrap(),
            matrix_algebra(2).unwrap(),
            grassmann_algebra(2).unwrap(),
            grassmann_algebra(3).unwrap(),
            StructureAlgebra::direct_sum(&[matrix_algebra(1).unwrap(), grassmann_algebra(2).unwrap()]),
            StructureAlgebra::tensor(&grassmann_algebra(1).unwrap(), &grassmann_algebra(1).unwrap()),
        ];
        for a in &algebras {
            for n in 1..=3 {
                assert_eq!(identities_slice(a, n, DEFAULT_BUDGET).unwrap(), brute_force_slice(a, n), "{a:?} n={n}");
            }
        }
    }

    #[test]
    fn agrees_with_is_identity() {
        let algebras: Vec<A> = vec![matrix_algebra(2).unwrap(), grassmann_algebra(3).unwrap()];
        let candidates = [
            "1*(1,2,3) - 1*(2,1,3) - 1*(3,1,2) + 1*(3,2,1)",
            "1*(1,2,3) - 1*(1,3,2)",
            "1*(1,2,3) + 1*(3,2,1) - 1*(2,1,3) - 1*(2,3,1)",
        ];
        for a in &algebras {
            let slice = identities_slice(a, 3, DEFAULT_BUDGET).unwrap();
            for text in candidates {
                let theta: E = parse_element(text).unwrap();
                assert_eq!(
                    slice.contains(&theta).unwrap(),
                    is_identity(&phi(&theta), a, DEFAULT_BUDGET).unwrap()
                );
            }
            for theta in slice.elements() {
                assert!(is_identity(&phi(&theta), a, DEFAULT_BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn letter_deletion() {
        let sigma: Permutation = "(3,1,4,2)".parse().unwrap();
        assert_eq!(delete_letter(&sigma, 1).to_string(), "(2,3,1)");
        assert_eq!(delete_letter(&sigma, 4).to_string(), "(3,1,2)");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(67, 5), 9_657_648);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
