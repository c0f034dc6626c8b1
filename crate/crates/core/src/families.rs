//! The named group families and their verification reports.
//!
//! With `m = 9^r`: `G_m` is `r` copies of `G9` wreathed together and
//! `G_{km} = B wr G_m` for the bases `S2, S3, S4, G8` (k = 2, 3, 4, 8).
//! With `m = 7^r`: `H_m` is `r` copies of `H7` and `H_{3m} = A3 wr H_m`.
//! `W_d` is `d` copies of `S2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bsgs::PermutationGroup;
use crate::constructors::{named_group, NamedGroup};
use crate::error::{GroupError, Result};
use crate::factor::{factorize, Factorization};
use crate::perm::Permutation;
use crate::series::{derived_series, DEFAULT_MAX_STEPS};
use crate::wreath::{iterated_wreath, wreath, MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyLabel {
    Gm,
    G2m,
    G3m,
    G4m,
    G8m,
    Hm,
    H3m,
    Wd,
}

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 8] = [
        FamilyLabel::Gm,
        FamilyLabel::G2m,
        FamilyLabel::G3m,
        FamilyLabel::G4m,
        FamilyLabel::G8m,
        FamilyLabel::Hm,
        FamilyLabel::H3m,
        FamilyLabel::Wd,
    ];

    /// The five solvable families built on `G9`.
    pub const G_FAMILIES: [FamilyLabel; 5] = [
        FamilyLabel::Gm,
        FamilyLabel::G2m,
        FamilyLabel::G3m,
        FamilyLabel::G4m,
        FamilyLabel::G8m,
    ];

    pub const H_FAMILIES: [FamilyLabel; 2] = [FamilyLabel::Hm, FamilyLabel::H3m];

    pub fn name(self) -> &'static str {
        match self {
            FamilyLabel::Gm => "Gm",
            FamilyLabel::G2m => "G2m",
            FamilyLabel::G3m => "G3m",
            FamilyLabel::G4m => "G4m",
            FamilyLabel::G8m => "G8m",
            FamilyLabel::Hm => "Hm",
            FamilyLabel::H3m => "H3m",
            FamilyLabel::Wd => "Wd",
        }
    }

    /// Block multiplier `k` in `G_{km}` / `H_{km}`; 1 for `W_d`.
    pub fn multiplier(self) -> u64 {
        match self {
            FamilyLabel::Gm | FamilyLabel::Hm | FamilyLabel::Wd => 1,
            FamilyLabel::G2m => 2,
            FamilyLabel::G3m | FamilyLabel::H3m => 3,
            FamilyLabel::G4m => 4,
            FamilyLabel::G8m => 8,
        }
    }

    fn prime_base(self) -> u64 {
        match self {
            FamilyLabel::Hm | FamilyLabel::H3m => 7,
            FamilyLabel::Wd => 2,
            _ => 9,
        }
    }

    /// `m = 9^r`, `7^r`, or `2^d`.
    pub fn m(self, r: u32) -> u64 {
        self.prime_base().pow(r)
    }

    pub fn degree(self, r: u32) -> u64 {
        self.multiplier() * self.m(r)
    }

    /// Closed forms `(c, d)`.
    pub fn expected(self, r: u32) -> (u64, u64) {
        let m = self.m(r);
        let r = r as u64;
        match self {
            FamilyLabel::Gm => ((7 * m - 7) / 8, 5 * r),
            FamilyLabel::G2m => ((15 * m - 7) / 8, 5 * r + 1),
            FamilyLabel::G3m => ((23 * m - 7) / 8, 5 * r + 2),
            FamilyLabel::G4m => ((39 * m - 7) / 8, 5 * r + 3),
            FamilyLabel::G8m => ((47 * m - 7) / 8, 5 * r + 4),
            FamilyLabel::Hm => ((m - 1) / 3, 2 * r),
            FamilyLabel::H3m => ((4 * m - 1) / 3, 2 * r + 1),
            FamilyLabel::Wd => (m - 1, r),
        }
    }

    /// Coefficient `k_n` with `c = (k_n m - 7) / 8` for the `G` families.
    pub fn k_coefficient(self) -> Option<u64> {
        match self {
            FamilyLabel::Gm => Some(7),
            FamilyLabel::G2m => Some(15),
            FamilyLabel::G3m => Some(23),
            FamilyLabel::G4m => Some(39),
            FamilyLabel::G8m => Some(47),
            _ => None,
        }
    }

    /// Display name of a member, e.g. `G_72` or `W_3`.
    pub fn member_name(self, r: u32) -> String {
        match self {
            FamilyLabel::Wd => format!("W_{r}"),
            FamilyLabel::Hm | FamilyLabel::H3m => format!("H_{}", self.degree(r)),
            _ => format!("G_{}", self.degree(r)),
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyLabel {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyLabel::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GroupError::UnknownName(s.to_string()))
    }
}

/// Builds the family member at `r` (or `d` for `W_d`).
pub fn family(label: FamilyLabel, r: u32) -> Result<PermutationGroup> {
    if r == 0 {
        return Err(GroupError::InvalidArgument("r must be at least 1".into()));
    }
    let degree = label
        .multiplier()
        .saturating_mul(label.prime_base().checked_pow(r).unwrap_or(u64::MAX));
    if degree > MAX_DEGREE {
        return Err(GroupError::DegreeBound {
            degree,
            bound: MAX_DEGREE,
        });
    }
    let copies = r as usize;
    let g9 = || named_group(NamedGroup::G9);
    let over_gm = |base: NamedGroup| -> Result<PermutationGroup> {
        Ok(wreath(&named_group(base), &iterated_wreath(&g9(), copies)?))
    };
    match label {
        FamilyLabel::Gm => iterated_wreath(&g9(), copies),
        FamilyLabel::G2m => over_gm(NamedGroup::S2),
        FamilyLabel::G3m => over_gm(NamedGroup::S3),
        FamilyLabel::G4m => over_gm(NamedGroup::S4),
        FamilyLabel::G8m => over_gm(NamedGroup::G8),
        FamilyLabel::Hm => iterated_wreath(&named_group(NamedGroup::H7), copies),
        FamilyLabel::H3m => Ok(wreath(
            &named_group(NamedGroup::A3),
            &iterated_wreath(&named_group(NamedGroup::H7), copies)?,
        )),
        FamilyLabel::Wd => iterated_wreath(&named_group(NamedGroup::S2), copies),
    }
}

/// The index-2 subgroup `K_18 <= S2 wr G9` and its extensions
/// `K_{2(9m)} = K_{2m} wr G9`, for `r = 1..=3` (degree `2 * 9^r`).
///
/// `K_18` is generated by the products `t_0 t_b` of base transpositions
/// (the even-weight vectors of `F_2^9`) together with `G9` permuting the
/// nine blocks.
pub fn k_subgroup(r: u32) -> Result<PermutationGroup> {
    if !(1..=3).contains(&r) {
        return Err(GroupError::InvalidArgument(format!(
            "K subgroups are built for r in 1..=3, got {r}"
        )));
    }
    let g9 = named_group(NamedGroup::G9);
    let degree = 18;
    let t = |b: usize| vec![2 * b, 2 * b + 1];
    let mut gens = Vec::new();
    for sigma in g9.generators() {
        let images = (0..degree)
            .map(|x| sigma.image(x / 2) * 2 + x % 2)
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    for b in 1..9 {
        gens.push(Permutation::from_cycles(degree, &[t(0), t(b)])?);
    }
    let mut k = PermutationGroup::new(degree, gens)?;
    for _ in 1..r {
        k = wreath(&k, &g9);
    }
    Ok(k)
}

/// Index and derived lengths of `K_{2m}` inside `G_{2m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KSubgroupCheck {
    pub r: u32,
    pub m: u64,
    pub index: Factorization,
    pub d_k: usize,
    pub d_g: usize,
    /// `log_2` of the index predicted by the wreath recursion: `m / 9`.
    pub recursion_log2_index: u64,
    /// `log_2` of the index by the printed closed form `m / 18`.
    pub printed_log2_index: f64,
}

impl KSubgroupCheck {
    pub fn recursion_matches(&self) -> bool {
        self.index == Factorization::prime_power(2, self.recursion_log2_index)
    }

    pub fn printed_matches(&self) -> bool {
        self.printed_log2_index.fract() == 0.0
            && self.index == Factorization::prime_power(2, self.printed_log2_index as u64)
    }
}

pub fn check_k_subgroup(r: u32) -> Result<KSubgroupCheck> {
    let k = k_subgroup(r)?;
    let g = family(FamilyLabel::G2m, r)?;
    for gen in k.generators() {
        if !g.contains(gen)? {
            return Err(GroupError::NotSubgroup { index: 0 });
        }
    }
    let (go, ko) = (g.order(), k.order());
    if &go % &ko != BigUint::from(0u32) {
        return Err(GroupError::InvalidArgument(
            "order of K does not divide |G|".into(),
        ));
    }
    let index = factorize(&(go / ko))?;
    let d = |x: &PermutationGroup| -> Result<usize> {
        derived_series(x, DEFAULT_MAX_STEPS)?
            .derived_length()
            .ok_or_else(|| GroupError::NotSolvable { order: "?".into() })
    };
    let m = FamilyLabel::Gm.m(r);
    Ok(KSubgroupCheck {
        r,
        m,
        index,
        d_k: d(&k)?,
        d_g: d(&g)?,
        recursion_log2_index: m / 9,
        printed_log2_index: m as f64 / 18.0,
    })
}

/// One verified row: every computed field comes from the group itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub name: String,
    pub degree: usize,
    pub order: Factorization,
    pub c: u64,
    pub d: u64,
    pub transitive: bool,
    pub expected_c: u64,
    pub expected_d: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl GroupReport {
    pub fn odd_order(&self) -> bool {
        self.order.exponent(2) == 0
    }
}

pub fn report(
    name: &str,
    g: &PermutationGroup,
    expected_c: u64,
    expected_d: u64,
) -> Result<GroupReport> {
    let series = derived_series(g, DEFAULT_MAX_STEPS)?;
    let d = series
        .derived_length()
        .ok_or_else(|| GroupError::NotSolvable {
            order: series.orders.last().unwrap().to_string(),
        })? as u64;
    let order = series.orders[0].clone();
    let c = order.exponent_sum();
    Ok(GroupReport {
        name: name.to_string(),
        degree: g.degree(),
        transitive: g.is_transitive(),
        matches: c == expected_c && d == expected_d,
        order,
        c,
        d,
        expected_c,
        expected_d,
    })
}

pub fn family_report(label: FamilyLabel, r: u32) -> Result<GroupReport> {
    let g = family(label, r)?;
    let (c, d) = label.expected(r);
    report(&label.member_name(r), &g, c, d)
}
