//! Built-in groups: symmetric and cyclic groups, matrix groups over prime
//! fields acting on vectors, and the small named groups the families are
//! assembled from.
//!
//! Vectors of `F_p^dim` are numbered base-p with the first coordinate least
//! significant: `v = (v_0, .., v_{dim-1})` is point `v_0 + v_1 p + ..`.
//! In nonzero-vector mode the zero vector is dropped and the remaining
//! points shift down by one.

use std::fmt;
use std::str::FromStr;

use crate::bsgs::PermutationGroup;
use crate::error::{GroupError, Result};
use crate::perm::Permutation;

const MAX_VECTOR_POINTS: u64 = 1 << 16;

pub fn symmetric_group(n: usize) -> Result<PermutationGroup> {
    if n == 0 {
        return Err(GroupError::InvalidArgument(
            "degree must be at least 1".into(),
        ));
    }
    if n == 1 {
        return Ok(PermutationGroup::trivial(1));
    }
    let all: Vec<usize> = (0..n).collect();
    PermutationGroup::new(
        n,
        vec![
            Permutation::from_cycles(n, &[vec![0, 1]])?,
            Permutation::from_cycles(n, &[all])?,
        ],
    )
}

pub fn cyclic_group(n: usize) -> Result<PermutationGroup> {
    if n == 0 {
        return Err(GroupError::InvalidArgument(
            "degree must be at least 1".into(),
        ));
    }
    if n == 1 {
        return Ok(PermutationGroup::trivial(1));
    }
    let all: Vec<usize> = (0..n).collect();
    PermutationGroup::new(n, vec![Permutation::from_cycles(n, &[all])?])
}

/// A square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    p: u32,
    entries: Vec<u32>,
}

impl Matrix {
    pub fn new(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(GroupError::InvalidArgument(
                "matrix must be square and nonempty".into(),
            ));
        }
        Ok(Matrix {
            dim,
            p,
            entries: rows.iter().flatten().map(|&x| x % p).collect(),
        })
    }

    pub fn identity(p: u32, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % p;
        }
        Matrix { dim, p, entries }
    }

    /// Parses `"1 1;0 1"`: space-separated residues, rows split by `;`.
    pub fn parse(p: u32, text: &str) -> Result<Self> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|x| {
                        x.parse::<u32>().map_err(|_| {
                            GroupError::InvalidArgument(format!("bad matrix entry `{x}`"))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(p, &rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn determinant(&self) -> u32 {
        let p = self.p as u64;
        let n = self.dim;
        let mut a: Vec<u64> = self.entries.iter().map(|&x| x as u64).collect();
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = (p - det) % p;
            }
            let pv = a[col * n + col];
            det = det * pv % p;
            let inv = mod_pow(pv, p - 2, p);
            for r in col + 1..n {
                let f = a[r * n + col] * inv % p;
                if f == 0 {
                    continue;
                }
                for k in col..n {
                    a[r * n + k] = (a[r * n + k] + p * p - f * a[col * n + k]) % p;
                }
            }
        }
        det as u32
    }

    fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.dim)
            .map(|i| {
                let s: u64 = (0..self.dim)
                    .map(|j| self.get(i, j) as u64 * v[j] as u64)
                    .sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(";")?;
            }
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

#[derive(Clone, Debug)]
pub struct MatrixGroupSpec {
    pub p: u32,
    pub dim: usize,
    pub generators: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorAction {
    /// `v -> g v` on the nonzero vectors.
    Nonzero,
    /// `v -> g v` on all vectors.
    AllVectors,
    /// `v -> g v` plus the translations `v -> v + e_i`.
    Affine,
}

impl FromStr for VectorAction {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonzero" => Ok(VectorAction::Nonzero),
            "all" | "all-vectors" => Ok(VectorAction::AllVectors),
            "affine" => Ok(VectorAction::Affine),
            other => Err(GroupError::UnknownName(other.to_string())),
        }
    }
}

fn decode_vector(mut index: usize, p: u32, dim: usize) -> Vec<u32> {
    let mut v = vec![0u32; dim];
    for x in v.iter_mut() {
        *x = (index % p as usize) as u32;
        index /= p as usize;
    }
    v
}

fn encode_vector(v: &[u32], p: u32) -> usize {
    v.iter()
        .rev()
        .fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// Realises a matrix group over `F_p` as a permutation group on vectors.
pub fn matrix_to_perm(spec: &MatrixGroupSpec, mode: VectorAction) -> Result<PermutationGroup> {
    let p = spec.p;
    if !is_prime(p) {
        return Err(GroupError::InvalidArgument(format!("{p} is not prime")));
    }
    let points = (p as u64)
        .checked_pow(spec.dim as u32)
        .filter(|&n| n <= MAX_VECTOR_POINTS)
        .ok_or(GroupError::DegreeBound {
            degree: (p as u64).saturating_pow(spec.dim as u32),
            bound: MAX_VECTOR_POINTS,
        })? as usize;
    let offset = usize::from(mode == VectorAction::Nonzero);
    let degree = points - offset;
    if degree == 0 {
        return Err(GroupError::InvalidArgument("no points to act on".into()));
    }
    let vectors: Vec<Vec<u32>> = (0..points).map(|i| decode_vector(i, p, spec.dim)).collect();

    let mut gens = Vec::new();
    for m in &spec.generators {
        if m.dim != spec.dim || m.p != p {
            return Err(GroupError::InvalidArgument(
                "matrix dimension or field does not match the group".into(),
            ));
        }
        if m.determinant() == 0 {
            return Err(GroupError::NonInvertible { p });
        }
        let images = (offset..points)
            .map(|i| encode_vector(&m.apply(&vectors[i]), p) - offset)
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    if mode == VectorAction::Affine {
        for axis in 0..spec.dim {
            let images = vectors
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w[axis] = (w[axis] + 1) % p;
                    encode_vector(&w, p)
                })
                .collect();
            gens.push(Permutation::from_images(images)?);
        }
    }
    if gens.is_empty() {
        return Ok(PermutationGroup::trivial(degree));
    }
    PermutationGroup::new(degree, gens)
}

/// The generating set used for GL(2,3): two transvections generating
/// SL(2,3) and a determinant-2 diagonal matrix.
pub fn gl23_spec() -> MatrixGroupSpec {
    let m = |rows: [[u32; 2]; 2]| Matrix::new(3, &[rows[0].to_vec(), rows[1].to_vec()]).unwrap();
    MatrixGroupSpec {
        p: 3,
        dim: 2,
        generators: vec![
            m([[1, 1], [0, 1]]),
            m([[1, 0], [1, 1]]),
            m([[2, 0], [0, 1]]),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGroup {
    /// GL(2,3) on the 8 nonzero vectors of F_3^2.
    G8,
    /// AGL(2,3) on the 9 vectors of F_3^2.
    G9,
    /// The order-21 Frobenius group on 7 points.
    H7,
    A3,
    S2,
    S3,
    S4,
}

impl NamedGroup {
    pub const ALL: [NamedGroup; 7] = [
        NamedGroup::G8,
        NamedGroup::G9,
        NamedGroup::H7,
        NamedGroup::A3,
        NamedGroup::S2,
        NamedGroup::S3,
        NamedGroup::S4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGroup::G8 => "G8",
            NamedGroup::G9 => "G9",
            NamedGroup::H7 => "H7",
            NamedGroup::A3 => "A3",
            NamedGroup::S2 => "S2",
            NamedGroup::S3 => "S3",
            NamedGroup::S4 => "S4",
        }
    }
}

impl FromStr for NamedGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        NamedGroup::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GroupError::UnknownName(s.to_string()))
    }
}

/// `x -> 2x` and `x -> x + 1` on the integers mod 7, written on points
/// `1..=7` with point `i` standing for `i - 1`.
pub const H7_GENERATORS: [&str; 2] = ["(2,3,5)(4,7,6)", "(1,2,3,4,5,6,7)"];

/// The commonly printed generating pair for the order-21 group. Its first
/// cycle sends 4 to 6 rather than 7, so the pair generates `A_7`.
pub const H7_PRINTED_GENERATORS: [&str; 2] = ["(2,3,5)(4,6,7)", "(1,2,3,4,5,6,7)"];

fn decode_group(degree: usize, texts: &[&str]) -> Result<PermutationGroup> {
    texts
        .iter()
        .map(|t| Permutation::parse_cycles(t, Some(degree)))
        .collect::<Result<Vec<_>>>()
        .and_then(|gens| PermutationGroup::new(degree, gens))
}

/// The group generated by [`H7_PRINTED_GENERATORS`].
pub fn h7_printed() -> PermutationGroup {
    decode_group(7, &H7_PRINTED_GENERATORS).expect("valid cycles")
}

pub fn named_group(name: NamedGroup) -> PermutationGroup {
    let built = match name {
        NamedGroup::G8 => matrix_to_perm(&gl23_spec(), VectorAction::Nonzero),
        NamedGroup::G9 => matrix_to_perm(&gl23_spec(), VectorAction::Affine),
        NamedGroup::H7 => decode_group(7, &H7_GENERATORS),
        NamedGroup::A3 => cyclic_group(3),
        NamedGroup::S2 => symmetric_group(2),
        NamedGroup::S3 => symmetric_group(3),
        NamedGroup::S4 => symmetric_group(4),
    };
    built.expect("built-in generators are valid")
}

/// U_n(F_p): upper unitriangular matrices, generated by the `n - 1`
/// transvections `I + E_{i,i+1}`, acting on all of `F_p^n`.
pub fn unitriangular(p: u32, n: usize) -> Result<PermutationGroup> {
    if n < 2 {
        return Err(GroupError::InvalidArgument(
            "dimension must be at least 2".into(),
        ));
    }
    let generators = (0..n - 1)
        .map(|i| {
            let mut m = Matrix::identity(p, n);
            m.entries[i * n + i + 1] = 1;
            m
        })
        .collect();
    matrix_to_perm(
        &MatrixGroupSpec {
            p,
            dim: n,
            generators,
        },
        VectorAction::AllVectors,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::derived_length;
    use num_bigint::BigUint;

    #[test]
    fn small_symmetric_and_cyclic() {
        assert_eq!(symmetric_group(4).unwrap().order(), BigUint::from(24u32));
        assert_eq!(derived_length(&symmetric_group(4).unwrap()).unwrap(), 3);
        let a3 = cyclic_group(3).unwrap();
        assert_eq!(a3.order(), BigUint::from(3u32));
        assert_eq!(derived_length(&a3).unwrap(), 1);
        let s1 = symmetric_group(1).unwrap();
        assert_eq!(s1.degree(), 1);
        assert_eq!(s1.order(), BigUint::from(1u32));
        assert!(symmetric_group(0).is_err());
        assert!(cyclic_group(0).is_err());
    }

    #[test]
    fn s2_has_one_generator() {
        assert_eq!(symmetric_group(2).unwrap().generators().len(), 1);
    }

    #[test]
    fn vector_numbering() {
        assert_eq!(decode_vector(5, 3, 2), vec![2, 1]);
        assert_eq!(encode_vector(&[2, 1], 3), 5);
    }

    #[test]
    fn determinant() {
        assert_eq!(Matrix::parse(3, "2 0;0 1").unwrap().determinant(), 2);
        assert_eq!(Matrix::parse(3, "1 2;2 1").unwrap().determinant(), 0);
        assert_eq!(
            Matrix::parse(5, "0 1 0;1 0 0;0 0 3").unwrap().determinant(),
            2
        );
    }

    #[test]
    fn matrix_parse_round_trip() {
        let m = Matrix::parse(3, "1 1; 0 1").unwrap();
        assert_eq!(m.to_string(), "1 1;0 1");
        assert!(Matrix::parse(3, "1 1;0").is_err());
        assert!(Matrix::parse(3, "1 x;0 1").is_err());
    }

    #[test]
    fn gl23_actions() {
        let g8 = matrix_to_perm(&gl23_spec(), VectorAction::Nonzero).unwrap();
        assert_eq!(g8.degree(), 8);
        assert_eq!(g8.order(), BigUint::from(48u32));
        assert!(g8.is_transitive());
        let g9 = matrix_to_perm(&gl23_spec(), VectorAction::Affine).unwrap();
        assert_eq!(g9.degree(), 9);
        assert_eq!(g9.order(), BigUint::from(432u32));
    }

    #[test]
    fn translations_only() {
        let spec = MatrixGroupSpec {
            p: 3,
            dim: 2,
            generators: vec![Matrix::identity(3, 2)],
        };
        let t = matrix_to_perm(&spec, VectorAction::Affine).unwrap();
        assert_eq!(t.order(), BigUint::from(9u32));
    }

    #[test]
    fn singular_generator_rejected() {
        let spec = MatrixGroupSpec {
            p: 3,
            dim: 2,
            generators: vec![Matrix::parse(3, "1 1;1 1").unwrap()],
        };
        assert!(matches!(
            matrix_to_perm(&spec, VectorAction::Nonzero),
            Err(GroupError::NonInvertible { p: 3 })
        ));
    }

    #[test]
    fn degree_bound() {
        assert!(matches!(
            unitriangular(2, 17),
            Err(GroupError::DegreeBound { .. })
        ));
        assert!(unitriangular(2, 16).is_ok());
    }

    #[test]
    fn named_orders() {
        let expected = [48u32, 432, 21, 3, 2, 6, 24];
        for (g, e) in NamedGroup::ALL.into_iter().zip(expected) {
            assert_eq!(named_group(g).order(), BigUint::from(e), "{}", g.name());
        }
        assert!("G10".parse::<NamedGroup>().is_err());
        assert_eq!("h7".parse::<NamedGroup>().unwrap(), NamedGroup::H7);
    }

    #[test]
    fn h7_is_metacyclic() {
        assert_eq!(derived_length(&named_group(NamedGroup::H7)).unwrap(), 2);
    }

    #[test]
    fn printed_h7_pair_generates_a7() {
        let g = h7_printed();
        assert_eq!(g.order(), BigUint::from(2520u32));
        assert!(derived_length(&g).is_err());
    }

    #[test]
    fn small_unitriangular() {
        let u = unitriangular(2, 4).unwrap();
        assert_eq!(u.generators().len(), 3);
        assert_eq!(u.order(), BigUint::from(64u32));
        assert_eq!(derived_length(&u).unwrap(), 2);
        let u = unitriangular(3, 3).unwrap();
        assert_eq!(u.order(), BigUint::from(27u32));
        assert_eq!(derived_length(&u).unwrap(), 2);
        let u = unitriangular(2, 2).unwrap();
        assert_eq!(u.order(), BigUint::from(2u32));
        assert_eq!(derived_length(&u).unwrap(), 1);
    }
}
