//! The explicit spanning family of a generated ideal.

use crate::linalg::RowBasis;
use crate::operad::{Mode, OperadElement};
use crate::perm::{factorial, Permutation};
use crate::scalar::Scalar;

use super::{GeneratorSet, IdealSlice};

/// Compositions of `total` into `parts` summands, each at least `min`, in lex order.
fn compositions(total: usize, parts: usize, min: usize, out: &mut Vec<Vec<usize>>) {
    fn go(rest: usize, left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < min * left {
            return;
        }
        for s in min..=rest - min * (left - 1) {
            cur.push(s);
            go(rest - s, left - 1, min, cur, out);
            cur.pop();
        }
    }
    go(total, parts, min, &mut Vec::new(), out);
}

/// `I(n)` spanned by `1₃ ∘ (1_r, θ ∘ (1_{s₁}, …, 1_{s_l}), 1_t) ∗ σ` over the generators `θ`
/// of arity `l`, all `r + Σ sᵢ + t = n` and all `σ ∈ Sₙ`.
///
/// Each `sᵢ ≥ 0` in unital mode and `sᵢ ≥ 1` in nonunital mode.
pub fn ideal_slice_spanning<S: Scalar>(g: &GeneratorSet<S>, n: usize) -> IdealSlice<S> {
    let min_s = match g.mode() {
        Mode::Unital => 0,
        Mode::Nonunital => 1,
    };
    let mut basis = RowBasis::new(factorial(n));
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let outer = OperadElement::<S>::identity(3);
    'generators: for theta in g.generators() {
        let l = theta.arity();
        if l * min_s > n {
            continue;
        }
        for inner_total in l * min_s..=n {
            let mut splits = Vec::new();
            if l == 0 {
                if inner_total == 0 {
                    splits.push(Vec::new());
                }
            } else {
                compositions(inner_total, l, min_s, &mut splits);
            }
            for s in &splits {
                let inner = if l == 0 {
                    theta.clone()
                } else {
                    let units: Vec<_> = s.iter().map(|&k| OperadElement::identity(k)).collect();
                    theta.full_compose(&units).expect("one unit per slot")
                };
                for r in 0..=n - inner_total {
                    let t = n - inner_total - r;
                    let x = outer
                        .full_compose(&[OperadElement::identity(r), inner.clone(), OperadElement::identity(t)])
                        .expect("three parts");
                    // The span stays Sₙ-stable, so a member's whole orbit is already present.
                    if basis.contains(&x.to_vector()).expect("arity n") {
                        continue;
                    }
                    for sigma in &perms {
                        basis.insert(&x.act(sigma).expect("arity n").to_vector()).expect("arity n");
                    }
                    if basis.is_full() {
                        break 'generators;
                    }
                }
            }
        }
    }
    IdealSlice::new(n, basis).expect("dimension n!")
}
