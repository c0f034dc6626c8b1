//! Brute-force reference computations by explicit element enumeration.
//!
//! Elements are plain image vectors composed by hand, so nothing here goes
//! through the stabilizer chain code.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use solvlen::{Permutation, PermutationGroup};

pub type Elt = Vec<u16>;

/// Apply `p` then `q`.
pub fn mul(p: &Elt, q: &Elt) -> Elt {
    p.iter().map(|&x| q[x as usize]).collect()
}

pub fn inv(p: &Elt) -> Elt {
    let mut out = vec![0u16; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u16;
    }
    out
}

pub fn comm(a: &Elt, b: &Elt) -> Elt {
    mul(&mul(&inv(a), &inv(b)), &mul(a, b))
}

pub fn ident(n: usize) -> Elt {
    (0..n as u16).collect()
}

pub fn elt(p: &Permutation) -> Elt {
    p.images().iter().map(|&x| x as u16).collect()
}

/// All elements of the group generated by `gens`.
pub fn closure(degree: usize, gens: &[Elt]) -> HashSet<Elt> {
    let mut seen = HashSet::new();
    let e = ident(degree);
    seen.insert(e.clone());
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn elements(g: &PermutationGroup) -> HashSet<Elt> {
    let gens: Vec<Elt> = g.generators().iter().map(elt).collect();
    closure(g.degree(), &gens)
}

/// `[A, B]` as the subgroup generated by all element commutators.
pub fn commutator_subgroup(degree: usize, a: &HashSet<Elt>, b: &HashSet<Elt>) -> HashSet<Elt> {
    let mut gens: HashSet<Elt> = HashSet::new();
    for x in a {
        for y in b {
            gens.insert(comm(x, y));
        }
    }
    let gens: Vec<Elt> = gens.into_iter().collect();
    closure_incremental(degree, &gens)
}

/// Closure that only keeps generators not already reached, which keeps the
/// BFS fan-out small when there are many redundant generators.
pub fn closure_incremental(degree: usize, gens: &[Elt]) -> HashSet<Elt> {
    let mut group: HashSet<Elt> = HashSet::from([ident(degree)]);
    let mut kept: Vec<Elt> = Vec::new();
    for g in gens {
        if !group.contains(g) {
            kept.push(g.clone());
            group = closure(degree, &kept);
        }
    }
    group
}

/// Orders of `G = G^(0) > G^(1) > ...` down to a repeated term.
pub fn derived_series_orders(g: &PermutationGroup) -> Vec<usize> {
    let mut cur = elements(g);
    let mut out = vec![cur.len()];
    loop {
        let next = commutator_subgroup(g.degree(), &cur, &cur);
        if next.len() == cur.len() {
            return out;
        }
        out.push(next.len());
        cur = next;
    }
}

/// Orders of `γ_1 = G > γ_2 > ...` down to a repeated term.
pub fn lower_central_orders(g: &PermutationGroup) -> Vec<usize> {
    let all = elements(g);
    let mut cur = all.clone();
    let mut out = vec![cur.len()];
    loop {
        let next = commutator_subgroup(g.degree(), &cur, &all);
        if next.len() == cur.len() {
            return out;
        }
        out.push(next.len());
        cur = next;
    }
}

/// Number of index-2 subgroups, counted as nontrivial homomorphisms to C2.
///
/// Each assignment of parities to the generators is extended along a BFS
/// of the Cayley graph and kept if it is consistent.
pub fn index2_count(g: &PermutationGroup) -> usize {
    let degree = g.degree();
    let gens: Vec<Elt> = g.generators().iter().map(elt).collect();
    let k = gens.len();
    assert!(k <= 16);
    let mut count = 0;
    'masks: for mask in 1u32..(1 << k) {
        let mut parity = std::collections::HashMap::new();
        let e = ident(degree);
        parity.insert(e.clone(), 0u32);
        let mut queue = VecDeque::from([e]);
        while let Some(x) = queue.pop_front() {
            let px = parity[&x];
            for (i, s) in gens.iter().enumerate() {
                let y = mul(&x, s);
                let py = px ^ ((mask >> i) & 1);
                match parity.get(&y) {
                    Some(&q) if q != py => continue 'masks,
                    Some(_) => {}
                    None => {
                        parity.insert(y.clone(), py);
                        queue.push_back(y);
                    }
                }
            }
        }
        count += 1;
    }
    count
}

/// Distinct orbits of the natural action, each sorted.
pub fn orbits(degree: usize, gens: &[Elt]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = g[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// A permutation from 1-based cycle text, for building test groups.
pub fn perm(degree: usize, text: &str) -> Permutation {
    Permutation::parse_cycles(text, Some(degree)).unwrap()
}

pub fn group(degree: usize, texts: &[&str]) -> PermutationGroup {
    PermutationGroup::new(degree, texts.iter().map(|t| perm(degree, t)).collect()).unwrap()
}

/// `G^(i) <= γ_{2^i}(G)` for every generator of `G^(i)`, and
/// `c(G^(i) / G^(i+1)) >= 2^i + 1` while `G^(i+1)` is nontrivial.
pub fn hall_failures(g: &PermutationGroup) -> Vec<String> {
    use solvlen::series::{derived_series, lower_central_series};
    let ds = derived_series(g, 64).unwrap();
    let d = ds.derived_length().unwrap();
    let lcs = lower_central_series(g, (1 << d) + 1).unwrap();
    let mut out = Vec::new();
    for i in 0..d {
        let gamma = lcs.term((1 << i) - 1).unwrap();
        if !ds.terms[i]
            .generators()
            .iter()
            .all(|s| gamma.contains(s).unwrap())
        {
            out.push(format!("G^({i}) not in γ_{}", 1 << i));
        }
        if i + 1 < d && ds.quotient_clength(i).unwrap() <= 1 << i {
            out.push(format!("c(G^({i})/G^({})) <= 2^{i}", i + 1));
        }
    }
    out
}
