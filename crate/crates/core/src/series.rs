//! Normal closures, derived and lower central series, composition length,
//! and the maximal subgroups of 2-groups via the Frattini quotient.

use num_bigint::BigUint;

use crate::bsgs::{coset_action, PermutationGroup, StabilizerChain};
use crate::error::{GroupError, Result};
use crate::factor::{factorize, Factorization};
use crate::perm::Permutation;

pub const DEFAULT_MAX_STEPS: usize = 64;
const MAX_FRATTINI_RANK: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<PermutationGroup>,
    pub orders: Vec<Factorization>,
}

impl SeriesReport {
    /// Whether the series reached the trivial group.
    pub fn reaches_trivial(&self) -> bool {
        self.orders.last().is_some_and(Factorization::is_one)
    }

    /// Index of the first trivial term: d(G) for a derived series.
    pub fn length(&self) -> Option<usize> {
        self.orders.iter().position(Factorization::is_one)
    }

    pub fn derived_length(&self) -> Option<usize> {
        match self.kind {
            SeriesKind::Derived => self.length(),
            SeriesKind::LowerCentral => None,
        }
    }

    /// Term `i`, or the trivial group past the end of a series that reached it.
    pub fn term(&self, i: usize) -> Option<&PermutationGroup> {
        match self.terms.get(i) {
            Some(t) => Some(t),
            None if self.reaches_trivial() => self.terms.last(),
            None => None,
        }
    }

    /// Composition length of `terms[i] / terms[i + 1]`.
    pub fn quotient_clength(&self, i: usize) -> Result<u64> {
        if i + 1 >= self.orders.len() {
            return Err(GroupError::InvalidArgument(format!(
                "quotient index {i} out of range for a series of {} terms",
                self.orders.len()
            )));
        }
        Ok(self.orders[i].exponent_sum() - self.orders[i + 1].exponent_sum())
    }
}

/// Smallest subgroup containing `seeds` and normalised by `conjugators`,
/// built incrementally on one stabilizer chain.
fn conjugation_closure(
    degree: usize,
    conjugators: &[Permutation],
    seeds: impl IntoIterator<Item = Permutation>,
) -> PermutationGroup {
    let mut chain = StabilizerChain::new(degree);
    let mut gens: Vec<Permutation> = Vec::new();
    for s in seeds {
        if !s.is_identity() && chain.add_generator(&s) {
            gens.push(s);
        }
    }
    let mut i = 0;
    while i < gens.len() {
        let h = gens[i].clone();
        for c in conjugators {
            let x = h.conjugate_by(c);
            if chain.add_generator(&x) {
                gens.push(x);
            }
        }
        i += 1;
    }
    PermutationGroup::with_chain(degree, gens, chain)
}

/// The normal closure of `seeds` in `g`.
pub fn normal_closure(g: &PermutationGroup, seeds: &[Permutation]) -> Result<PermutationGroup> {
    for s in seeds {
        if !g.contains(s)? {
            return Err(GroupError::NotMember);
        }
    }
    Ok(conjugation_closure(
        g.degree(),
        &g.generating_subset(),
        seeds.iter().cloned(),
    ))
}

fn generator_commutators(
    a: &[Permutation],
    b: &[Permutation],
    skip_diagonal: bool,
) -> Vec<Permutation> {
    let mut out = Vec::new();
    for (i, x) in a.iter().enumerate() {
        let start = if skip_diagonal { i + 1 } else { 0 };
        for y in b.iter().skip(start) {
            let c = Permutation::commutator(x, y);
            if !c.is_identity() {
                out.push(c);
            }
        }
    }
    out
}

/// `[G, G]`, as the normal closure of the commutators of a generating set.
pub fn derived_subgroup(g: &PermutationGroup) -> PermutationGroup {
    let gens = g.generating_subset();
    let seeds = generator_commutators(&gens, &gens, true);
    conjugation_closure(g.degree(), &gens, seeds)
}

/// `G^(0) = G, G^(i+1) = [G^(i), G^(i)]`, stopping at the trivial group, at a
/// term equal to its predecessor, or after `max_steps` steps.
pub fn derived_series(g: &PermutationGroup, max_steps: usize) -> Result<SeriesReport> {
    if max_steps == 0 {
        return Err(GroupError::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    let mut terms = vec![g.clone()];
    let mut orders = vec![factorize(&g.order())?];
    for _ in 0..max_steps {
        let last_order = orders.last().unwrap().clone();
        if last_order.is_one() {
            break;
        }
        let next = derived_subgroup(terms.last().unwrap());
        let next_order = factorize(&next.order())?;
        let stalled = next_order == last_order;
        terms.push(next);
        orders.push(next_order);
        if stalled {
            break;
        }
    }
    Ok(SeriesReport {
        kind: SeriesKind::Derived,
        terms,
        orders,
    })
}

/// The derived length, or an error for a non-solvable group.
pub fn derived_length(g: &PermutationGroup) -> Result<usize> {
    let s = derived_series(g, DEFAULT_MAX_STEPS)?;
    s.derived_length().ok_or_else(|| GroupError::NotSolvable {
        order: s.orders.last().unwrap().to_string(),
    })
}

/// `γ_1 = G, γ_{i+1} = [γ_i, G]`, up to `max_terms` terms or a fixpoint.
pub fn lower_central_series(g: &PermutationGroup, max_terms: usize) -> Result<SeriesReport> {
    if max_terms < 2 {
        return Err(GroupError::InvalidArgument(
            "max_terms must be at least 2".into(),
        ));
    }
    let ggens = g.generating_subset();
    let mut terms = vec![g.clone()];
    let mut orders = vec![factorize(&g.order())?];
    while terms.len() < max_terms {
        let last_order = orders.last().unwrap().clone();
        if last_order.is_one() {
            break;
        }
        let cur = terms.last().unwrap().generating_subset();
        let seeds = generator_commutators(&cur, &ggens, false);
        let next = conjugation_closure(g.degree(), &ggens, seeds);
        let next_order = factorize(&next.order())?;
        let stalled = next_order == last_order;
        terms.push(next);
        orders.push(next_order);
        if stalled {
            break;
        }
    }
    Ok(SeriesReport {
        kind: SeriesKind::LowerCentral,
        terms,
        orders,
    })
}

/// c(G) for solvable `g`: the number of prime factors of |G|.
pub fn composition_length(g: &PermutationGroup) -> Result<u64> {
    derived_length(g)?;
    Ok(factorize(&g.order())?.exponent_sum())
}

/// Φ(G) = G'G² for a 2-group `g`.
pub fn frattini_subgroup(g: &PermutationGroup) -> Result<PermutationGroup> {
    let order = factorize(&g.order())?;
    if !order.is_prime_power_of(2) {
        return Err(GroupError::NotTwoGroup {
            order: order.to_string(),
        });
    }
    let gens = g.generating_subset();
    let mut seeds = generator_commutators(&gens, &gens, true);
    seeds.extend(
        gens.iter()
            .map(Permutation::square)
            .filter(|s| !s.is_identity()),
    );
    Ok(conjugation_closure(g.degree(), &gens, seeds))
}

/// Every index-2 subgroup of the 2-group `g`, as preimages of the
/// hyperplanes of the elementary abelian quotient `g / Φ(g)`.
///
/// Subgroups are listed by the bitmask of the linear functional that
/// defines them, relative to the basis chosen greedily from `g`'s
/// generators.
pub fn maximal_index2_subgroups(g: &PermutationGroup) -> Result<Vec<PermutationGroup>> {
    let phi = frattini_subgroup(g)?;
    let index = g.order() / phi.order();
    let rank = index.bits().saturating_sub(1) as usize;
    if rank > MAX_FRATTINI_RANK {
        return Err(GroupError::RankTooLarge {
            rank,
            bound: MAX_FRATTINI_RANK,
        });
    }
    if rank == 0 {
        return Ok(Vec::new());
    }
    let action = coset_action(g, &phi, 1 << rank)?;
    let gens = g.generators();
    // Images are taken one per generator: the action group drops repeats.
    let images = gens
        .iter()
        .map(|s| action.image_of(s))
        .collect::<Result<Vec<_>>>()?;

    // The quotient acts regularly on the cosets; identify each coset point
    // with a vector over F_2 by choosing a basis among the generators.
    let n = action.index();
    let mut coord: Vec<Option<u32>> = vec![None; n];
    coord[0] = Some(0);
    let mut span_points = vec![0usize];
    let mut basis = 0u32;
    for img in &images {
        let p = img.image(0);
        if coord[p].is_some() {
            continue;
        }
        let bit = 1u32 << basis;
        basis += 1;
        let mut new_points = Vec::with_capacity(span_points.len());
        for &q in &span_points {
            let r = img.image(q);
            coord[r] = Some(coord[q].unwrap() | bit);
            new_points.push(r);
        }
        span_points.extend(new_points);
    }
    debug_assert_eq!(basis as usize, rank);
    let vectors: Vec<u32> = images
        .iter()
        .map(|img| coord[img.image(0)].expect("generators span the quotient"))
        .collect();

    let parent_order = g.order();
    let mut out = Vec::with_capacity((1usize << rank) - 1);
    for functional in 1u32..(1u32 << rank) {
        let value = |v: u32| (v & functional).count_ones() % 2;
        let t_idx = vectors
            .iter()
            .position(|&v| value(v) == 1)
            .expect("a nonzero functional is nonzero on some generator");
        let t = &gens[t_idx];
        let t_inv = t.inverse();
        // Schreier generators x s rep(xs)^-1 for the transversal {e, t}.
        let mut seeds: Vec<Permutation> = Vec::new();
        for (s, &v) in gens.iter().zip(&vectors) {
            let sv = value(v);
            for x_is_t in [false, true] {
                let x_side = u32::from(x_is_t);
                let xs = if x_is_t { t.then(s) } else { s.clone() };
                let w = if (x_side + sv) % 2 == 1 {
                    xs.then(&t_inv)
                } else {
                    xs
                };
                if !w.is_identity() && !seeds.contains(&w) {
                    seeds.push(w);
                }
            }
        }
        let mut chain = StabilizerChain::new(g.degree());
        let mut kept = Vec::new();
        for s in seeds {
            if chain.add_generator(&s) {
                kept.push(s);
            }
        }
        let m = PermutationGroup::with_chain(g.degree(), kept, chain);
        if m.order() * BigUint::from(2u32) != parent_order {
            return Err(GroupError::InvalidArgument(format!(
                "hyperplane preimage {functional} does not have index 2"
            )));
        }
        out.push(m);
    }
    Ok(out)
}

/// Composition length from an already computed derived series.
pub fn clength_from_series(series: &SeriesReport) -> Result<u64> {
    if !series.reaches_trivial() {
        return Err(GroupError::NotSolvable {
            order: series.orders.last().unwrap().to_string(),
        });
    }
    Ok(series.orders[0].exponent_sum())
}
