//! Ideal slices as a fixpoint of the operad operations.

use std::collections::{BTreeMap, VecDeque};

use log::warn;

use crate::linalg::RowBasis;
use crate::operad::{Mode, OperadElement};
use crate::perm::{factorial, Permutation};
use crate::scalar::Scalar;

use super::{GeneratorSet, IdealSlice};

/// Arities explored beyond the target before trusting contractions.
pub const DEFAULT_HEADROOM: usize = 2;

/// Closes the generators under the right action, `θ ∘ᵢ 1₂`, `1₂ ∘ⱼ θ` and, in unital mode,
/// `θ ∘ᵢ 1₀`, inside arities up to `max(n + headroom, max generator arity)`.
fn closure_slices<S: Scalar>(g: &GeneratorSet<S>, top: usize) -> BTreeMap<usize, RowBasis<S>> {
    let mode = g.mode();
    let low = mode.min_arity();
    let mut slices: BTreeMap<usize, RowBasis<S>> =
        (low..=top).map(|m| (m, RowBasis::new(factorial(m)))).collect();
    let mut queue: VecDeque<OperadElement<S>> = VecDeque::new();
    let push = |slices: &mut BTreeMap<usize, RowBasis<S>>, queue: &mut VecDeque<_>, e: OperadElement<S>| {
        if e.is_zero() {
            return;
        }
        let basis = slices.get_mut(&e.arity()).expect("arity within range");
        if !basis.is_full() && basis.insert(&e.to_vector()).expect("dimension m!") {
            queue.push_back(e);
        }
    };
    for theta in g.generators() {
        push(&mut slices, &mut queue, theta.clone());
    }
    let two = OperadElement::<S>::identity(2);
    let nullary = OperadElement::<S>::identity(0);
    let mut symmetric: BTreeMap<usize, Vec<Permutation>> = BTreeMap::new();
    while let Some(theta) = queue.pop_front() {
        let m = theta.arity();
        let gens = symmetric.entry(m).or_insert_with(|| Permutation::generators(m)).clone();
        for tau in &gens {
            push(&mut slices, &mut queue, theta.act(tau).expect("arity m"));
        }
        if m + 1 <= top {
            for i in 1..=m {
                push(&mut slices, &mut queue, theta.partial_compose(i, &two).expect("slot in range"));
            }
            for j in 1..=2 {
                push(&mut slices, &mut queue, two.partial_compose(j, &theta).expect("slot in range"));
            }
        }
        if mode == Mode::Unital {
            for i in 1..=m {
                push(&mut slices, &mut queue, theta.partial_compose(i, &nullary).expect("slot in range"));
            }
        }
    }
    slices
}

fn top_arity<S: Scalar>(g: &GeneratorSet<S>, n: usize, headroom: usize) -> usize {
    (n + headroom).max(g.max_arity().unwrap_or(0))
}

/// `I(n)` computed by [`closure_slices`] with the given headroom.
pub fn ideal_slice_closure<S: Scalar>(g: &GeneratorSet<S>, n: usize, headroom: usize) -> IdealSlice<S> {
    if n < g.mode().min_arity() {
        return IdealSlice::zero(n);
    }
    let mut slices = closure_slices(g, top_arity(g, n, headroom));
    IdealSlice::new(n, slices.remove(&n).expect("target arity explored")).expect("dimension n!")
}

/// Whether one more arity of headroom leaves `I(n)` unchanged. Logs a warning if not.
pub fn closure_is_stable<S: Scalar>(g: &GeneratorSet<S>, n: usize, headroom: usize) -> bool {
    let base = ideal_slice_closure(g, n, headroom);
    let more = ideal_slice_closure(g, n, headroom + 1);
    let stable = base == more;
    if !stable {
        warn!(
            "closure slice at arity {n} grew from {} to {} with headroom {}",
            base.dim(),
            more.dim(),
            headroom + 1
        );
    }
    stable
}
