//! Stabilizer chains (base and strong generating set) for permutation groups.
//!
//! The chain is built with the deterministic Schreier-Sims algorithm. Every
//! Schreier generator of every level is sifted through the levels below it,
//! so a finished chain is exact. Transversals are Schreier vectors: each
//! orbit point stores the index of the strong generator that first reached
//! it, and coset representatives are multiplied out on demand.
//!
//! Generators can be added to a finished chain at any time
//! ([`StabilizerChain::add_generator`]); the algorithm resumes from the
//! deepest level that changed. Normal closures rely on this.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{GroupError, Result};
use crate::perm::Permutation;

const UNREACHED: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into `StabilizerChain::strong` of the generators fixing all
    /// earlier base points.
    gens: Vec<u32>,
    orbit: Vec<u32>,
    /// Schreier vector, indexed by point.
    label: Vec<u32>,
    /// For each orbit position, how many of `gens` have been paired with it.
    cursor: Vec<u32>,
    /// Every orbit position before this one is fully paired.
    scan_from: usize,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut label = vec![UNREACHED; degree];
        label[base] = ROOT;
        Level {
            base: base as u32,
            gens: Vec::new(),
            orbit: vec![base as u32],
            label,
            cursor: vec![0],
            scan_from: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    strong_inv: Vec<Permutation>,
    levels: Vec<Level>,
    /// Input generators that were not already members when offered.
    generating_subset: Vec<Permutation>,
}

impl StabilizerChain {
    /// Chain of the trivial group.
    pub fn new(degree: usize) -> Self {
        StabilizerChain {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            generating_subset: Vec::new(),
        }
    }

    pub fn build(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain::new(degree);
        for g in generators {
            chain.add_generator(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Extends the group by `g`. Returns `false` if `g` was already a member.
    pub fn add_generator(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "generator degree mismatch");
        let (residue, depth) = self.strip(g.clone(), 0);
        if depth == self.levels.len() && residue.is_identity() {
            return false;
        }
        self.generating_subset.push(g.clone());
        self.insert_strong(residue, 0, depth);
        self.complete(depth);
        true
    }

    fn insert_strong(&mut self, residue: Permutation, from: usize, to: usize) {
        let idx = self.strong.len() as u32;
        if to == self.levels.len() {
            let base = residue
                .smallest_moved_point()
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(self.degree, base));
        }
        self.strong_inv.push(residue.inverse());
        self.strong.push(residue);
        for level in &mut self.levels[from..=to] {
            level.gens.push(idx);
            level.scan_from = 0;
        }
    }

    /// Runs Schreier-Sims upward from `start`; levels below `start` must
    /// already be complete.
    fn complete(&mut self, start: usize) {
        let mut level = start as isize;
        while level >= 0 {
            let l = level as usize;
            match self.next_residue(l) {
                Some((residue, depth)) => {
                    self.insert_strong(residue, l + 1, depth);
                    level = depth as isize;
                }
                None => level -= 1,
            }
        }
    }

    /// Pairs unprocessed (orbit point, generator) combinations at level `l`,
    /// growing the orbit and sifting Schreier generators. Stops at the first
    /// Schreier generator that does not sift to the identity.
    fn next_residue(&mut self, l: usize) -> Option<(Permutation, usize)> {
        let mut pos = self.levels[l].scan_from;
        loop {
            let (point, gen_idx) = {
                let lv = &mut self.levels[l];
                if pos >= lv.orbit.len() {
                    lv.scan_from = pos;
                    return None;
                }
                let c = lv.cursor[pos] as usize;
                if c >= lv.gens.len() {
                    pos += 1;
                    lv.scan_from = pos;
                    continue;
                }
                lv.cursor[pos] += 1;
                (lv.orbit[pos] as usize, lv.gens[c])
            };
            let image = self.strong[gen_idx as usize].image(point);
            {
                let lv = &mut self.levels[l];
                if lv.label[image] == UNREACHED {
                    lv.label[image] = gen_idx;
                    lv.orbit.push(image as u32);
                    lv.cursor.push(0);
                    continue;
                }
            }
            let mut h = self.transversal_unchecked(l, point);
            h.then_assign(&self.strong[gen_idx as usize]);
            let (residue, depth) = self.strip(h, l);
            if depth < self.levels.len() || !residue.is_identity() {
                return Some((residue, depth));
            }
        }
    }

    /// Coset representative mapping the base point of level `l` to `point`.
    fn transversal_unchecked(&self, l: usize, point: usize) -> Permutation {
        let lv = &self.levels[l];
        let mut path = Vec::new();
        let mut x = point;
        while lv.label[x] != ROOT {
            let t = lv.label[x] as usize;
            path.push(t);
            x = self.strong_inv[t].image(x);
        }
        let mut u = Permutation::identity(self.degree);
        for &t in path.iter().rev() {
            u.then_assign(&self.strong[t]);
        }
        u
    }

    /// Sifts `h` starting at level `from`. Returns the residue and the level
    /// at which sifting stopped (`levels().len()` if it passed every level).
    pub fn strip(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for (k, lv) in self.levels.iter().enumerate().skip(from) {
            let mut q = h.image(lv.base as usize);
            if lv.label[q] == UNREACHED {
                return (h, k);
            }
            while lv.label[q] != ROOT {
                let t = lv.label[q] as usize;
                h.then_assign(&self.strong_inv[t]);
                q = self.strong_inv[t].image(q);
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, depth) = self.strip(g.clone(), 0);
        depth == self.levels.len() && residue.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, lv| {
            acc * BigUint::from(lv.orbit.len())
        })
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|lv| lv.base as usize).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|lv| lv.orbit.len()).collect()
    }

    /// The basic orbit at `level`, in discovery order.
    pub fn basic_orbit(&self, level: usize) -> Vec<usize> {
        self.levels[level]
            .orbit
            .iter()
            .map(|&x| x as usize)
            .collect()
    }

    /// `u` with `base[level]^u == point`, if `point` is in the basic orbit.
    pub fn transversal(&self, level: usize, point: usize) -> Option<Permutation> {
        let lv = self.levels.get(level)?;
        if point >= self.degree || lv.label[point] == UNREACHED {
            return None;
        }
        Some(self.transversal_unchecked(level, point))
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Strong generators fixing the first `level` base points.
    pub fn level_generators(&self, level: usize) -> Vec<&Permutation> {
        self.levels[level]
            .gens
            .iter()
            .map(|&i| &self.strong[i as usize])
            .collect()
    }

    /// The offered generators that enlarged the group; they generate it.
    pub fn generating_subset(&self) -> &[Permutation] {
        &self.generating_subset
    }

    /// Rechecks the chain from scratch: level generators fix earlier base
    /// points, basic orbits are closed, and every Schreier generator of every
    /// level sifts to the identity through the levels below.
    pub fn verify(&self) -> bool {
        for (l, lv) in self.levels.iter().enumerate() {
            for &gi in &lv.gens {
                let g = &self.strong[gi as usize];
                if self.levels[..l]
                    .iter()
                    .any(|prev| g.image(prev.base as usize) != prev.base as usize)
                {
                    return false;
                }
            }
            if l + 1 < self.levels.len() {
                // Generators fixing every base point through `l` must be listed
                // one level down as well.
                for &gi in &lv.gens {
                    let g = &self.strong[gi as usize];
                    if g.image(lv.base as usize) == lv.base as usize
                        && !self.levels[l + 1].gens.contains(&gi)
                    {
                        return false;
                    }
                }
            }
            for &p in &lv.orbit {
                for &gi in &lv.gens {
                    let g = &self.strong[gi as usize];
                    let q = g.image(p as usize);
                    if lv.label[q] == UNREACHED {
                        return false;
                    }
                    let mut h = self.transversal_unchecked(l, p as usize);
                    h.then_assign(g);
                    let (residue, depth) = self.strip(h, l);
                    if depth != self.levels.len() || !residue.is_identity() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A permutation group given by generators, with a lazily built and
/// write-once stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<Arc<StabilizerChain>>,
}

impl PermutationGroup {
    /// Exact duplicate generators are dropped; order is otherwise kept.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        let mut unique: Vec<Permutation> = Vec::with_capacity(generators.len());
        let mut seen = std::collections::HashSet::new();
        for g in generators {
            if seen.insert(g.clone()) {
                unique.push(g);
            }
        }
        Ok(PermutationGroup {
            degree,
            generators: unique,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            chain: OnceLock::new(),
        }
    }

    /// Wraps generators whose chain is already known.
    pub(crate) fn with_chain(
        degree: usize,
        generators: Vec<Permutation>,
        chain: StabilizerChain,
    ) -> Self {
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(chain));
        PermutationGroup {
            degree,
            generators,
            chain: cell,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| Arc::new(StabilizerChain::build(self.degree, &self.generators)))
    }

    /// A subset of the generators that still generates the group, usually
    /// much smaller than `generators()` for wreath products.
    pub fn generating_subset(&self) -> Vec<Permutation> {
        let subset = self.chain().generating_subset();
        if subset.is_empty() {
            vec![Permutation::identity(self.degree)]
        } else {
            subset.to_vec()
        }
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_identity())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.chain().contains(p))
    }

    /// Points reachable from `point`, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut seen = vec![false; self.degree];
        let mut queue = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Ok(queue)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0)
            .map(|o| o.len() == self.degree)
            .unwrap_or(false)
    }

    /// True if every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermutationGroup) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The action of a group on the right cosets of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    action: PermutationGroup,
    representatives: Vec<Permutation>,
    subgroup: PermutationGroup,
}

impl CosetAction {
    /// Permutation group on the cosets; point 0 is the subgroup itself.
    /// Its generators are the images of the parent's generators, in order.
    pub fn action(&self) -> &PermutationGroup {
        &self.action
    }

    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Permutation] {
        &self.representatives
    }

    /// The coset point containing `g`.
    pub fn coset_of(&self, g: &Permutation) -> Result<usize> {
        for (j, rep) in self.representatives.iter().enumerate() {
            if self.subgroup.contains(&g.compose(&rep.inverse())?)? {
                return Ok(j);
            }
        }
        Err(GroupError::NotMember)
    }

    /// Image of an element under the action homomorphism.
    pub fn image_of(&self, g: &Permutation) -> Result<Permutation> {
        let images = self
            .representatives
            .iter()
            .map(|rep| self.coset_of(&rep.then(g)))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

/// Permutation action of `g` on the right cosets `H x` of `h`.
pub fn coset_action(
    g: &PermutationGroup,
    h: &PermutationGroup,
    transversal_bound: usize,
) -> Result<CosetAction> {
    if g.degree() != h.degree() {
        return Err(GroupError::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    for (index, gen) in h.generators().iter().enumerate() {
        if !g.contains(gen)? {
            return Err(GroupError::NotSubgroup { index });
        }
    }
    let index = g.order() / h.order();
    if index > BigUint::from(transversal_bound) {
        return Err(GroupError::IndexTooLarge {
            index: index.to_string(),
            bound: transversal_bound,
        });
    }
    let index: usize = index.to_string().parse().expect("bounded index fits");

    let gens = g.generators();
    let mut reps = vec![Permutation::identity(g.degree())];
    let mut reps_inv = vec![Permutation::identity(g.degree())];
    let mut table: Vec<Vec<usize>> = vec![Vec::with_capacity(index); gens.len()];
    let mut i = 0;
    while i < reps.len() {
        for (s_idx, s) in gens.iter().enumerate() {
            let x = reps[i].then(s);
            let found = reps_inv
                .iter()
                .position(|rinv| h.chain().contains(&x.then(rinv)));
            let j = match found {
                Some(j) => j,
                None => {
                    reps_inv.push(x.inverse());
                    reps.push(x);
                    reps.len() - 1
                }
            };
            table[s_idx].push(j);
        }
        i += 1;
    }
    debug_assert_eq!(reps.len(), index);
    let images = table
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetAction {
        action: PermutationGroup::new(index, images)?,
        representatives: reps,
        subgroup: h.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        let cs: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cs).unwrap()
    }

    fn sym(n: usize) -> PermutationGroup {
        let all: Vec<usize> = (0..n).collect();
        PermutationGroup::new(n, vec![cyc(n, &[&[0, 1]]), cyc(n, &[&all])]).unwrap()
    }

    fn factorial(n: u32) -> BigUint {
        (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k))
    }

    #[test]
    fn symmetric_orders() {
        for n in 2..=9 {
            let g = sym(n);
            assert_eq!(g.order(), factorial(n as u32));
            assert!(g.chain().verify());
        }
    }

    #[test]
    fn trivial_group_has_empty_base() {
        let g = PermutationGroup::trivial(5);
        assert_eq!(g.order(), BigUint::one());
        assert!(g.chain().base().is_empty());
        assert!(g.contains(&Permutation::identity(5)).unwrap());
    }

    #[test]
    fn alternating_membership() {
        let a3 = PermutationGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert!(!a3.contains(&cyc(3, &[&[0, 1]])).unwrap());
        assert!(a3.contains(&cyc(3, &[&[0, 2, 1]])).unwrap());
        assert!(a3.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn orbits() {
        let g = sym(5);
        assert_eq!(g.orbit(0).unwrap(), vec![0, 1, 2, 3, 4]);
        let t = PermutationGroup::new(4, vec![cyc(4, &[&[0, 1]])]).unwrap();
        assert_eq!(t.orbit(2).unwrap(), vec![2]);
        assert!(!t.is_transitive());
        assert!(matches!(
            t.orbit(4),
            Err(GroupError::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn base_starts_at_smallest_moved_point() {
        let g = PermutationGroup::new(6, vec![cyc(6, &[&[2, 3, 4]]), cyc(6, &[&[3, 5]])]).unwrap();
        assert_eq!(g.chain().base()[0], 2);
    }

    #[test]
    fn deterministic_rebuild() {
        let g = sym(7);
        let a = StabilizerChain::build(7, g.generators());
        let b = StabilizerChain::build(7, g.generators());
        assert_eq!(a.base(), b.base());
        assert_eq!(a.order(), b.order());
        assert_eq!(a.orbit_sizes(), b.orbit_sizes());
    }

    #[test]
    fn incremental_extension_matches_fresh_build() {
        let mut chain = StabilizerChain::new(6);
        assert!(chain.add_generator(&cyc(6, &[&[0, 1, 2]])));
        assert_eq!(chain.order(), BigUint::from(3u32));
        assert!(!chain.add_generator(&cyc(6, &[&[0, 2, 1]])));
        assert!(chain.add_generator(&cyc(6, &[&[3, 4, 5]])));
        assert!(chain.add_generator(&cyc(6, &[&[0, 3], &[1, 4], &[2, 5]])));
        assert_eq!(chain.order(), BigUint::from(18u32));
        assert!(chain.verify());
        assert_eq!(chain.generating_subset().len(), 3);
    }

    #[test]
    fn random_words_sift_to_identity() {
        let g = sym(8);
        let gens = g.generators();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(0..=50);
            let mut w = Permutation::identity(8);
            for _ in 0..len {
                w = w.then(&gens[rng.gen_range(0..gens.len())]);
            }
            assert!(g.contains(&w).unwrap());
        }
    }

    #[test]
    fn transversal_maps_base_point() {
        let g = sym(6);
        let chain = g.chain();
        let b = chain.base()[0];
        for p in chain.basic_orbit(0) {
            assert_eq!(chain.transversal(0, p).unwrap().image(b), p);
        }
    }

    #[test]
    fn coset_action_of_a3_in_s3() {
        let s3 = sym(3);
        let a3 = PermutationGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        let act = coset_action(&s3, &a3, 10).unwrap();
        assert_eq!(act.index(), 2);
        assert_eq!(act.action().degree(), 2);
        assert_eq!(act.action().order(), BigUint::from(2u32));
        assert_eq!(act.coset_of(&Permutation::identity(3)).unwrap(), 0);
        assert_eq!(act.coset_of(&cyc(3, &[&[1, 2]])).unwrap(), 1);
    }

    #[test]
    fn coset_action_whole_group() {
        let s4 = sym(4);
        let act = coset_action(&s4, &s4, 1).unwrap();
        assert_eq!(act.index(), 1);
        assert_eq!(act.action().order(), BigUint::one());
    }

    #[test]
    fn coset_action_errors() {
        let s3 = sym(3);
        let not_sub = PermutationGroup::new(3, vec![cyc(3, &[&[0, 1]])]).unwrap();
        let a3 = PermutationGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert!(matches!(
            coset_action(&a3, &not_sub, 10),
            Err(GroupError::NotSubgroup { index: 0 })
        ));
        match coset_action(&s3, &PermutationGroup::trivial(3), 5) {
            Err(GroupError::IndexTooLarge { index, bound: 5 }) => assert_eq!(index, "6"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coset_action_kernel_contains_core() {
        // S4 on cosets of the point stabiliser S3 (core trivial) and on
        // cosets of A4 (core A4).
        let s4 = sym(4);
        let a4 =
            PermutationGroup::new(4, vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])]).unwrap();
        let act = coset_action(&s4, &a4, 2).unwrap();
        for g in a4.generators() {
            assert!(act.image_of(g).unwrap().is_identity());
        }
        let stab =
            PermutationGroup::new(4, vec![cyc(4, &[&[1, 2]]), cyc(4, &[&[1, 2, 3]])]).unwrap();
        let act = coset_action(&s4, &stab, 4).unwrap();
        assert_eq!(act.action().order(), BigUint::from(24u32));
    }
}
