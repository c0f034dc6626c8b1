//! Imprimitive permutational wreath products.
//!
//! `wreath(base, top)` acts on `m * n` points split into `n` blocks of `m`:
//! point `b * m + j` is point `j` of block `b`. The base group acts inside
//! every block independently and the top group permutes blocks.

use crate::bsgs::PermutationGroup;
use crate::error::{GroupError, Result};
use crate::perm::Permutation;

pub const MAX_DEGREE: u64 = 10_000;

/// `base wr top` of degree `deg(base) * deg(top)`.
///
/// Generators list the block permutations of `top` first, then every base
/// generator copied into every block. The chain builder skips the copies that
/// are already generated, so the leading top generators keep it small.
pub fn wreath(base: &PermutationGroup, top: &PermutationGroup) -> PermutationGroup {
    let m = base.degree();
    let n = top.degree();
    let degree = m * n;
    let mut gens = Vec::with_capacity(top.generators().len() + n * base.generators().len());
    for sigma in top.generators().iter().filter(|g| !g.is_identity()) {
        let images = (0..degree)
            .map(|x| sigma.image(x / m) * m + x % m)
            .collect();
        gens.push(Permutation::from_images(images).expect("block permutation"));
    }
    for block in 0..n {
        for h in base.generators().iter().filter(|g| !g.is_identity()) {
            let offset = block * m;
            let images = (0..degree)
                .map(|x| {
                    if x / m == block {
                        offset + h.image(x - offset)
                    } else {
                        x
                    }
                })
                .collect();
            gens.push(Permutation::from_images(images).expect("block-local permutation"));
        }
    }
    if gens.is_empty() {
        return PermutationGroup::trivial(degree);
    }
    PermutationGroup::new(degree, gens).expect("generators share the degree")
}

/// `h wr h wr .. wr h` with `copies` factors, associated to the left:
/// `W_1 = h`, `W_{k+1} = wreath(W_k, h)`.
pub fn iterated_wreath(h: &PermutationGroup, copies: usize) -> Result<PermutationGroup> {
    if copies == 0 {
        return Err(GroupError::InvalidArgument("need at least one copy".into()));
    }
    let degree = (h.degree() as u64)
        .checked_pow(copies as u32)
        .unwrap_or(u64::MAX);
    if degree > MAX_DEGREE {
        return Err(GroupError::DegreeBound {
            degree,
            bound: MAX_DEGREE,
        });
    }
    let mut w = h.clone();
    for _ in 1..copies {
        w = wreath(&w, h);
    }
    Ok(w)
}
