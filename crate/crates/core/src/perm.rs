//! Permutations of `{0, .., n-1}` stored as image lists.
//!
//! Products are read left to right: `p.compose(&q)` applies `p` first and
//! then `q`, so `p.compose(&q).image(i) == q.image(p.image(i))`. Every other
//! module (wreath products, stabilizer chains, closures) uses this order.
//!
//! Points are 0-based in memory and 1-based in cycle notation.

use std::fmt;
use std::str::FromStr;

use crate::error::{GroupError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 0-based image list.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || seen[x] {
                return Err(GroupError::NotAPermutation { degree });
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(GroupError::PointOutOfRange { point: a, degree });
                }
                if used[a] {
                    return Err(GroupError::InvalidArgument(format!(
                        "point {a} repeated in cycle list"
                    )));
                }
                used[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(GroupError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked product; degrees must agree.
    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// In-place right multiplication: `self <- self * other`.
    #[inline]
    pub(crate) fn then_assign(&mut self, other: &Permutation) {
        for x in self.images.iter_mut() {
            *x = other.images[*x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        // (g^-1 h g)(i): i -> g^-1 -> h -> g, in left-to-right order.
        let mut out = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[other.images[i] as usize] = other.images[x as usize];
        }
        Permutation { images: out }
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    pub fn square(&self) -> Permutation {
        self.then(self)
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// smallest point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Decodes 1-based disjoint-cycle notation such as `(2,3,5)(4,6,7)`.
    ///
    /// With `degree = Some(n)` every point must lie in `1..=n`; otherwise the
    /// degree is the largest point mentioned (at least 1).
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Permutation> {
        let cycles = parse_cycle_text(text)?;
        let max_point = cycles
            .iter()
            .flat_map(|c| c.iter())
            .map(|&(p, _)| p)
            .max()
            .unwrap_or(0);
        let n = match degree {
            Some(n) => {
                if let Some(&(p, pos)) = cycles.iter().flatten().find(|&&(p, _)| p > n) {
                    return Err(GroupError::Parse {
                        pos,
                        msg: format!("point {p} exceeds degree {n}"),
                    });
                }
                n
            }
            None => max_point.max(1),
        };
        let mut seen = vec![false; n + 1];
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in &cycles {
            for (k, &(p, pos)) in cycle.iter().enumerate() {
                if seen[p] {
                    return Err(GroupError::Parse {
                        pos,
                        msg: format!("point {p} repeated"),
                    });
                }
                seen[p] = true;
                let next = cycle[(k + 1) % cycle.len()].0;
                images[p - 1] = next - 1;
            }
        }
        Permutation::from_images(images)
    }

    /// 1-based cycle notation; the identity is `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&(p + 1).to_string());
            }
            s.push(')');
        }
        s
    }
}

/// Returns cycles of `(point, byte offset)` pairs with 1-based points.
fn parse_cycle_text(text: &str) -> Result<Vec<Vec<(usize, usize)>>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    let err = |pos: usize, msg: &str| GroupError::Parse {
        pos,
        msg: msg.to_string(),
    };
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(i, "empty input"));
    }
    while i < bytes.len() {
        if bytes[i] != b'(' {
            return Err(err(i, "expected `(`"));
        }
        i += 1;
        skip_ws(&mut i);
        let mut cycle = Vec::new();
        if i < bytes.len() && bytes[i] == b')' {
            i += 1;
        } else {
            loop {
                skip_ws(&mut i);
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err(i, "expected a point"));
                }
                let p: usize = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "point too large"))?;
                if p == 0 {
                    return Err(err(start, "points are numbered from 1"));
                }
                cycle.push((p, start));
                skip_ws(&mut i);
                match bytes.get(i) {
                    Some(b',') => i += 1,
                    Some(b')') => {
                        i += 1;
                        break;
                    }
                    _ => return Err(err(i, "expected `,` or `)`")),
                }
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        skip_ws(&mut i);
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Permutation[{}]{}",
            self.degree(),
            self.to_cycle_string()
        )
    }
}

impl FromStr for Permutation {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse_cycles(s, None)
    }
}
